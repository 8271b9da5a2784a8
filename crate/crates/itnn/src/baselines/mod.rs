//! Comparison models: PNN, WiSARD-style discriminators, and a brute-force
//! kNN oracle. They serve both as benchmark baselines and as independent
//! oracles in property tests.

pub mod knn;
pub mod pnn;
pub mod wizard;

pub use knn::knn_classify;
pub use pnn::{PnnClass, PnnModel};
pub use wizard::{wizard_classify, WizardDiscriminator};
