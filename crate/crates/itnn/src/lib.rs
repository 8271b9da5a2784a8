//! # itnn
//!
//! One-pass ("instantly trained") neural network classifiers and the
//! machinery around them:
//!
//! - **CC4 corner classification** ([`cc4`]): one hidden unit per training
//!   sample with prescriptive ±1 weights, a Hamming radius of generalization,
//!   and binary step activations. Training is a single pass.
//! - **FC fast-classification networks** ([`fc`]): stored real-valued
//!   exemplars with per-sample generalization radii that switch prediction
//!   between exact 1NN recall and membership-weighted kNN regression, over a
//!   city-block / Euclidean / box distance family with oblivious bitonic
//!   top-k selection.
//! - **Baselines** ([`baselines`]): a Parzen-window probabilistic classifier
//!   (PNN), WiSARD-style RAM-node discriminators, and a brute-force kNN
//!   oracle.
//! - **Encoding** ([`encoding`]): thermometer (unary) quantization between
//!   real values and bit vectors, chosen so Hamming distance tracks numeric
//!   distance.
//! - **Datasets** ([`datasets`]): Hénon and Mackey-Glass chaotic series,
//!   sliding-window supervised sets, function-approximation presets, and
//!   evaluation metrics.
//!
//! The crate is `no_std` (requires `alloc`); IO, persistence, and the CLI
//! live in the companion `itnn-cli` crate.

#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod baselines;
pub mod cc4;
pub mod datasets;
pub mod encoding;
pub mod error;
pub mod fc;

pub use cc4::{hamming, Cc4Model};
pub use encoding::{BinaryVector, EncoderSpec};
pub use error::{Error, Result};
pub use fc::{bitonic_top_k, membership, FcModel, Membership, Metric};
