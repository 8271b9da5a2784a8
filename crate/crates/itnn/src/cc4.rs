//! Corner-classification (CC4) networks.
//!
//! Training is prescriptive and takes a single pass: each training sample
//! becomes one hidden unit whose input weights are +1 where the sample bit
//! is 1 and −1 where it is 0, plus a bias weight of `r − s + 1` from an
//! always-on bias node (`r` the radius of generalization, `s` the number of
//! ones in the sample). With the binary step activation (1 iff the weighted
//! sum is strictly positive) each unit realizes a hyperplane isolating its
//! sample's corner of the n-cube: for a query at Hamming distance `d` from
//! the sample, the net input is exactly `r + 1 − d`, so the unit fires iff
//! `d <= r`.
//!
//! Output weights are +1 where the sample's output bit is 1 and −1 where it
//! is 0; output neurons are the same step function over the firing units'
//! votes.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::encoding::{self, BinaryVector, EncoderSpec};
use crate::error::{Error, Result};

/// Hamming distance between two equal-length bit vectors.
pub fn hamming(a: &BinaryVector, b: &BinaryVector) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    Ok(a.words()
        .iter()
        .zip(b.words())
        .map(|(x, y)| (x ^ y).count_ones() as usize)
        .sum())
}

/// One hidden unit: the prescriptive ±1 weights for a single training input.
///
/// The weights are stored implicitly as the source bit pattern; `+1` where
/// the pattern bit is 1 and `−1` where it is 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cc4HiddenUnit {
    pattern: BinaryVector,
    bias: i64,
    source_index: usize,
}

impl Cc4HiddenUnit {
    fn new(pattern: BinaryVector, radius: usize, source_index: usize) -> Self {
        let ones = pattern.count_ones() as i64;
        Cc4HiddenUnit {
            pattern,
            bias: radius as i64 - ones + 1,
            source_index,
        }
    }

    /// The training input this unit was prescribed from.
    pub fn pattern(&self) -> &BinaryVector {
        &self.pattern
    }

    /// Weight from input `j`: +1 if the source bit is 1, −1 if it is 0.
    pub fn input_weight(&self, j: usize) -> i64 {
        if self.pattern.get(j) {
            1
        } else {
            -1
        }
    }

    /// Weight from the always-1 bias node: `r − s + 1`.
    pub fn bias_weight(&self) -> i64 {
        self.bias
    }

    /// Index of the training sample that created this unit.
    pub fn source_index(&self) -> usize {
        self.source_index
    }

    /// Net input `Σ_j w_j·x_j + bias` for a query.
    ///
    /// Computed word-parallel: ones of `x` matching a pattern 1-bit add +1,
    /// ones of `x` over a pattern 0-bit add −1. Zero bits of `x` contribute
    /// nothing either way.
    pub fn net(&self, x: &BinaryVector) -> i64 {
        let mut agree: i64 = 0;
        let mut disagree: i64 = 0;
        for (xw, tw) in x.words().iter().zip(self.pattern.words()) {
            agree += (xw & tw).count_ones() as i64;
            disagree += (xw & !tw).count_ones() as i64;
        }
        agree - disagree + self.bias
    }

    /// Binary step activation: 1 iff the net input is strictly positive.
    pub fn fires(&self, x: &BinaryVector) -> bool {
        self.net(x) > 0
    }
}

/// A trained CC4 network.
///
/// Immutable after [`Cc4Model::train`]; prediction is a pure read and safe
/// to call concurrently.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cc4Model {
    input_len: usize,
    output_len: usize,
    radius: usize,
    hidden: Vec<Cc4HiddenUnit>,
    // Row i: output bits of the sample behind hidden unit i. Output weight
    // to neuron j is +1 where bit j is 1, −1 where it is 0.
    output_rows: Vec<BinaryVector>,
}

impl Cc4Model {
    /// One-pass prescriptive training.
    ///
    /// Creates one hidden unit per distinct training sample. Duplicate
    /// inputs with identical outputs collapse to a single unit so they do
    /// not double-vote; duplicates with conflicting outputs are rejected.
    pub fn train(samples: &[(BinaryVector, BinaryVector)], radius: usize) -> Result<Self> {
        let (first_in, first_out) = samples
            .first()
            .ok_or_else(|| Error::invalid("training requires at least one sample"))?;
        let input_len = first_in.len();
        let output_len = first_out.len();

        let mut hidden = Vec::with_capacity(samples.len());
        let mut output_rows = Vec::with_capacity(samples.len());
        let mut seen: BTreeMap<&BinaryVector, usize> = BTreeMap::new();

        for (idx, (input, output)) in samples.iter().enumerate() {
            if input.len() != input_len {
                return Err(Error::LengthMismatch {
                    expected: input_len,
                    actual: input.len(),
                });
            }
            if output.len() != output_len {
                return Err(Error::LengthMismatch {
                    expected: output_len,
                    actual: output.len(),
                });
            }
            match seen.get(input) {
                Some(&first) => {
                    if samples[first].1 != *output {
                        return Err(Error::ConflictingSamples { first, second: idx });
                    }
                    // consistent duplicate: already represented
                }
                None => {
                    seen.insert(input, idx);
                    hidden.push(Cc4HiddenUnit::new(input.clone(), radius, idx));
                    output_rows.push(output.clone());
                }
            }
        }

        Ok(Cc4Model {
            input_len,
            output_len,
            radius,
            hidden,
            output_rows,
        })
    }

    /// Input length `n` (excluding the bias node).
    pub fn input_len(&self) -> usize {
        self.input_len
    }

    /// Output length `m`.
    pub fn output_len(&self) -> usize {
        self.output_len
    }

    /// The global radius of generalization `r`.
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn hidden_units(&self) -> &[Cc4HiddenUnit] {
        &self.hidden
    }

    /// Output bits of the sample behind hidden unit `i`.
    pub fn output_row(&self, i: usize) -> &BinaryVector {
        &self.output_rows[i]
    }

    /// Step-function outputs of every hidden unit for a query.
    pub fn hidden_activations(&self, x: &BinaryVector) -> Result<BinaryVector> {
        if x.len() != self.input_len {
            return Err(Error::LengthMismatch {
                expected: self.input_len,
                actual: x.len(),
            });
        }
        Ok(BinaryVector::from_fn(self.hidden.len(), |i| {
            self.hidden[i].fires(x)
        }))
    }

    /// Feedforward prediction.
    ///
    /// Output bit `j` is 1 iff the firing units' ±1 votes for it sum to a
    /// strictly positive value. When no unit fires every output bit is 0
    /// (the step function's rest output).
    pub fn predict(&self, x: &BinaryVector) -> Result<BinaryVector> {
        let acts = self.hidden_activations(x)?;
        let mut votes = alloc::vec![0i64; self.output_len];
        for i in 0..self.hidden.len() {
            if acts.get(i) {
                let row = &self.output_rows[i];
                for (j, vote) in votes.iter_mut().enumerate() {
                    *vote += if row.get(j) { 1 } else { -1 };
                }
            }
        }
        Ok(BinaryVector::from_fn(self.output_len, |j| votes[j] > 0))
    }

    /// Predicts a real value through the thermometer codec: encode the
    /// query window, feed it forward, decode the output bits by counting
    /// ones. The model must have been trained on windows encoded with the
    /// same spec, so `output_len == spec.levels()`.
    pub fn predict_real(&self, vals: &[f64], spec: &EncoderSpec) -> Result<f64> {
        if self.output_len != spec.levels() {
            return Err(Error::LengthMismatch {
                expected: spec.levels(),
                actual: self.output_len,
            });
        }
        let x = encoding::encode_real_vector(vals, spec)?;
        let out = self.predict(&x)?;
        encoding::thermometer_decode(&out, spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bv(bits: &[u8]) -> BinaryVector {
        BinaryVector::from_fn(bits.len(), |i| bits[i] == 1)
    }

    /// Naive scalar feedforward, straight from the weight definitions.
    /// Independent of the packed-word kernel it checks.
    fn reference_predict(model: &Cc4Model, x: &BinaryVector) -> BinaryVector {
        let mut acts = Vec::new();
        for unit in model.hidden_units() {
            let mut net = unit.bias_weight();
            for j in 0..x.len() {
                if x.get(j) {
                    net += unit.input_weight(j);
                }
            }
            acts.push(net > 0);
        }
        BinaryVector::from_fn(model.output_len(), |j| {
            let mut sum = 0i64;
            for (i, &fired) in acts.iter().enumerate() {
                if fired {
                    sum += if model.output_row(i).get(j) { 1 } else { -1 };
                }
            }
            sum > 0
        })
    }

    #[test]
    fn hamming_cases() {
        assert_eq!(hamming(&bv(&[1, 0, 1]), &bv(&[1, 1, 1])).unwrap(), 1);
        let x = bv(&[0, 1, 1, 0, 1]);
        assert_eq!(hamming(&x, &x).unwrap(), 0);
        assert_eq!(hamming(&bv(&[0, 0, 0, 0]), &bv(&[1, 1, 1, 1])).unwrap(), 4);
        assert!(hamming(&bv(&[1]), &bv(&[1, 0])).is_err());
    }

    #[test]
    fn prescribed_weights() {
        // s = 2 ones, r = 0: bias = 0 - 2 + 1 = -1
        let model = Cc4Model::train(&[(bv(&[1, 0, 1]), bv(&[1]))], 0).unwrap();
        let unit = &model.hidden_units()[0];
        assert_eq!(
            (0..3).map(|j| unit.input_weight(j)).collect::<Vec<_>>(),
            [1, -1, 1]
        );
        assert_eq!(unit.bias_weight(), -1);
        assert!(model.output_row(0).get(0));
    }

    #[test]
    fn all_zero_input_bias_is_r_plus_one() {
        for r in 0..4 {
            let model = Cc4Model::train(&[(bv(&[0, 0, 0, 0]), bv(&[1]))], r).unwrap();
            assert_eq!(model.hidden_units()[0].bias_weight(), r as i64 + 1);
        }
    }

    #[test]
    fn conflicting_duplicates_rejected() {
        let err = Cc4Model::train(
            &[
                (bv(&[1, 0]), bv(&[1])),
                (bv(&[0, 0]), bv(&[0])),
                (bv(&[1, 0]), bv(&[0])),
            ],
            0,
        )
        .unwrap_err();
        assert_eq!(err, Error::ConflictingSamples { first: 0, second: 2 });
    }

    #[test]
    fn consistent_duplicates_collapse() {
        let model = Cc4Model::train(
            &[
                (bv(&[1, 0]), bv(&[1])),
                (bv(&[1, 0]), bv(&[1])),
                (bv(&[0, 1]), bv(&[0])),
            ],
            0,
        )
        .unwrap();
        assert_eq!(model.hidden_units().len(), 2);
    }

    #[test]
    fn empty_training_set_rejected() {
        assert!(Cc4Model::train(&[], 0).is_err());
    }

    #[test]
    fn step_activation_strictly_positive() {
        let model = Cc4Model::train(&[(bv(&[1, 0, 1]), bv(&[1]))], 0).unwrap();
        // d = 0: net = 2 - 1 = 1 > 0
        assert!(model.hidden_activations(&bv(&[1, 0, 1])).unwrap().get(0));
        // d = 1: net = 1 - 1 = 0, not positive
        assert!(!model.hidden_activations(&bv(&[1, 1, 1])).unwrap().get(0));

        let wider = Cc4Model::train(&[(bv(&[1, 0, 1]), bv(&[1]))], 1).unwrap();
        assert!(wider.hidden_activations(&bv(&[1, 1, 1])).unwrap().get(0));
    }

    #[test]
    fn xor_memorized_at_radius_zero() {
        let samples = [
            (bv(&[0, 1]), bv(&[1])),
            (bv(&[1, 0]), bv(&[1])),
            (bv(&[0, 0]), bv(&[0])),
            (bv(&[1, 1]), bv(&[0])),
        ];
        let model = Cc4Model::train(&samples, 0).unwrap();
        for (input, output) in &samples {
            assert_eq!(model.predict(input).unwrap(), *output);
            assert_eq!(reference_predict(&model, input), *output);
        }
    }

    #[test]
    fn no_unit_fires_fallback_is_zero() {
        let model = Cc4Model::train(&[(bv(&[1, 1]), bv(&[1]))], 0).unwrap();
        assert_eq!(model.predict(&bv(&[0, 0])).unwrap(), bv(&[0]));
    }

    #[test]
    fn packed_kernel_matches_reference_exhaustively() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let n = rng.random_range(1..=8usize);
            let m = rng.random_range(1..=4usize);
            let size = rng.random_range(1..=16usize);
            let mut samples = Vec::new();
            let mut used = alloc::collections::BTreeSet::new();
            for _ in 0..size {
                let input = BinaryVector::from_fn(n, |_| rng.random::<bool>());
                if used.insert(input.clone()) {
                    let output = BinaryVector::from_fn(m, |_| rng.random::<bool>());
                    samples.push((input, output));
                }
            }
            let r = rng.random_range(0..=2usize);
            let model = Cc4Model::train(&samples, r).unwrap();
            for code in 0..(1u32 << n) {
                let x = BinaryVector::from_fn(n, |i| code >> i & 1 == 1);
                assert_eq!(model.predict(&x).unwrap(), reference_predict(&model, &x));
            }
        }
    }

    #[test]
    fn corner_property_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..10 {
            let n = rng.random_range(1..=8usize);
            let size = rng.random_range(1..=12usize);
            let samples: Vec<_> = (0..size)
                .map(|_| {
                    (
                        BinaryVector::from_fn(n, |_| rng.random::<bool>()),
                        bv(&[1]),
                    )
                })
                .collect();
            for r in 0..=2 {
                let model = Cc4Model::train(&samples, r).unwrap();
                for code in 0..(1u32 << n) {
                    let x = BinaryVector::from_fn(n, |i| code >> i & 1 == 1);
                    let acts = model.hidden_activations(&x).unwrap();
                    for (i, unit) in model.hidden_units().iter().enumerate() {
                        let d = hamming(&x, unit.pattern()).unwrap();
                        assert_eq!(acts.get(i), d <= r, "n={n} r={r} d={d}");
                    }
                }
            }
        }
    }

    #[test]
    fn training_is_order_insensitive() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let n = 6;
        let mut samples = Vec::new();
        let mut used = alloc::collections::BTreeSet::new();
        for _ in 0..10 {
            let input = BinaryVector::from_fn(n, |_| rng.random::<bool>());
            if used.insert(input.clone()) {
                samples.push((input, BinaryVector::from_fn(2, |_| rng.random::<bool>())));
            }
        }
        let forward = Cc4Model::train(&samples, 1).unwrap();
        let mut reversed = samples.clone();
        reversed.reverse();
        let backward = Cc4Model::train(&reversed, 1).unwrap();
        for code in 0..(1u32 << n) {
            let x = BinaryVector::from_fn(n, |i| code >> i & 1 == 1);
            assert_eq!(forward.predict(&x).unwrap(), backward.predict(&x).unwrap());
        }
    }

    #[test]
    fn monotone_radius() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 7;
        let samples: Vec<_> = (0..8)
            .map(|_| {
                (
                    BinaryVector::from_fn(n, |_| rng.random::<bool>()),
                    bv(&[1]),
                )
            })
            .collect();
        let narrow = Cc4Model::train(&samples, 1).unwrap();
        let wide = Cc4Model::train(&samples, 2).unwrap();
        for code in 0..(1u32 << n) {
            let x = BinaryVector::from_fn(n, |i| code >> i & 1 == 1);
            let a = narrow.hidden_activations(&x).unwrap();
            let b = wide.hidden_activations(&x).unwrap();
            for i in 0..a.len() {
                assert!(a.get(i) <= b.get(i));
            }
        }
    }

    #[test]
    fn predict_real_memorizes_exact_levels() {
        let spec = EncoderSpec::new(0.0, 1.0, 8).unwrap();
        let input = encoding::encode_real_vector(&[0.5], &spec).unwrap();
        let target = encoding::encode_real_vector(&[0.75], &spec).unwrap();
        let model = Cc4Model::train(&[(input, target)], 0).unwrap();
        assert_eq!(model.predict_real(&[0.5], &spec).unwrap(), 0.75);
    }

    #[test]
    fn predict_real_fallback_decodes_to_lo() {
        let spec = EncoderSpec::new(-1.0, 1.0, 8).unwrap();
        let input = encoding::encode_real_vector(&[1.0], &spec).unwrap();
        let target = encoding::encode_real_vector(&[0.5], &spec).unwrap();
        let model = Cc4Model::train(&[(input, target)], 0).unwrap();
        // query encodes to all zeros, far from the single unit
        assert_eq!(model.predict_real(&[-1.0], &spec).unwrap(), -1.0);
    }

    #[test]
    fn predict_real_within_radius_recovers_target() {
        let spec = EncoderSpec::new(0.0, 1.0, 8).unwrap();
        let input = encoding::encode_real_vector(&[0.5], &spec).unwrap();
        let target = encoding::encode_real_vector(&[0.75], &spec).unwrap();
        let model = Cc4Model::train(&[(input, target)], 1).unwrap();
        // 0.625 is one thermometer level away from 0.5
        assert_eq!(model.predict_real(&[0.625], &spec).unwrap(), 0.75);
    }
}
