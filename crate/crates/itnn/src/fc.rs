//! FC (fast-classification) networks.
//!
//! Training takes two passes over real-valued samples: the first pass copies
//! each input into a hidden weight vector, the second determines a radius of
//! generalization per sample — half the distance to the nearest sample with
//! a different output, so regions of different classes never overlap.
//!
//! The radius acts as a switch at prediction time. A query inside some
//! stored sample's radius is answered by that sample's exact output (1NN
//! recall); otherwise the k nearest samples are selected with an oblivious
//! bitonic network and their outputs blended by membership weights, making
//! the far-field a kernel regression.

use alloc::vec::Vec;

use crate::error::{Error, Result};

const MEMBERSHIP_EPSILON: f64 = 1e-12;

/// The p = 1, 2, ∞ distance family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    /// p = 1, sum of absolute differences.
    CityBlock,
    /// p = 2.
    Euclidean,
    /// p = ∞, maximum absolute difference.
    Box,
}

impl Metric {
    pub fn distance(&self, x: &[f64], w: &[f64]) -> Result<f64> {
        if x.len() != w.len() {
            return Err(Error::LengthMismatch {
                expected: w.len(),
                actual: x.len(),
            });
        }
        let d = match self {
            Metric::CityBlock => x.iter().zip(w).map(|(a, b)| (a - b).abs()).sum(),
            Metric::Euclidean => {
                libm::sqrt(x.iter().zip(w).map(|(a, b)| (a - b) * (a - b)).sum())
            }
            Metric::Box => x
                .iter()
                .zip(w)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
        };
        Ok(d)
    }

    /// Serialization tag: `city`, `euclid`, or `box`.
    pub fn tag(&self) -> &'static str {
        match self {
            Metric::CityBlock => "city",
            Metric::Euclidean => "euclid",
            Metric::Box => "box",
        }
    }
}

impl core::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "city" => Ok(Metric::CityBlock),
            "euclid" => Ok(Metric::Euclidean),
            "box" => Ok(Metric::Box),
            other => Err(Error::invalid(alloc::format!(
                "unknown metric {other:?} (expected city, euclid, or box)"
            ))),
        }
    }
}

impl core::fmt::Display for Metric {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.tag())
    }
}

/// Membership function blending the k selected neighbours.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Membership {
    /// Normalized inverse distance (the default). Makes kNN mode a kernel
    /// regression with a 1/d kernel.
    InverseDistance,
    /// Normalized `exp(-d²/2σ²)`, the RBF choice.
    Gaussian { sigma: f64 },
}

impl Membership {
    pub fn weights(&self, dists: &[f64]) -> Vec<f64> {
        match self {
            Membership::InverseDistance => membership(dists),
            Membership::Gaussian { sigma } => membership_gaussian(dists, *sigma),
        }
    }
}

/// Normalized inverse-distance membership: `μ_i ∝ 1/(d_i + ε)`.
///
/// The weights are non-negative, sum to 1, and are monotone non-increasing
/// in distance. The ε guard keeps a zero distance finite.
pub fn membership(dists: &[f64]) -> Vec<f64> {
    let raw: Vec<f64> = dists.iter().map(|d| 1.0 / (d + MEMBERSHIP_EPSILON)).collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|w| w / total).collect()
}

/// Normalized Gaussian membership: `μ_i ∝ exp(-d_i²/2σ²)`.
///
/// Stabilized by shifting with the smallest squared distance so the largest
/// raw weight is exactly 1 and the normalizing sum never underflows.
pub fn membership_gaussian(dists: &[f64], sigma: f64) -> Vec<f64> {
    let min_sq = dists.iter().map(|d| d * d).fold(f64::INFINITY, f64::min);
    let raw: Vec<f64> = dists
        .iter()
        .map(|d| libm::exp(-(d * d - min_sq) / (2.0 * sigma * sigma)))
        .collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|w| w / total).collect()
}

// ascending comparison on (value, original index); ties go to the lower index
fn key_gt(a: (f64, usize), b: (f64, usize)) -> bool {
    a.0 > b.0 || (a.0 == b.0 && a.1 > b.1)
}

/// Indices of the `k` smallest values, selected by a bitonic sorting
/// network.
///
/// The input is padded with +∞ to the next power of two and run through the
/// non-recursive bitonic comparator network, whose structure depends only on
/// the padded length — never on the data. Ties break toward the lower
/// original index. Returned indices are ordered by ascending (value, index).
pub fn bitonic_top_k(values: &[f64], k: usize) -> Result<Vec<usize>> {
    if k == 0 || k > values.len() {
        return Err(Error::invalid(alloc::format!(
            "k must be in 1..={}, got {k}",
            values.len()
        )));
    }
    let padded = values.len().next_power_of_two();
    let mut keys: Vec<(f64, usize)> = values.iter().copied().enumerate().map(|(i, v)| (v, i)).collect();
    keys.resize(padded, (f64::INFINITY, usize::MAX));

    let mut block = 2;
    while block <= padded {
        let mut stride = block / 2;
        while stride > 0 {
            for i in 0..padded {
                let j = i ^ stride;
                if j > i {
                    let ascending = i & block == 0;
                    if ascending == key_gt(keys[i], keys[j]) {
                        keys.swap(i, j);
                    }
                }
            }
            stride /= 2;
        }
        block *= 2;
    }

    Ok(keys[..k].iter().map(|&(_, i)| i).collect())
}

/// A trained FC network. Immutable after training; prediction is pure.
#[derive(Clone, Debug, PartialEq)]
pub struct FcModel {
    weights: Vec<Vec<f64>>,
    outputs: Vec<Vec<f64>>,
    radii: Vec<f64>,
    metric: Metric,
    k: usize,
    membership: Membership,
}

impl FcModel {
    /// Two-pass training.
    ///
    /// Pass 1 copies each input into a hidden weight vector. Pass 2 sets
    /// each sample's radius of generalization to half its distance to the
    /// nearest sample with a different output vector (+∞ when every output
    /// is identical). `k` defaults to `max(1, round(S/10))`.
    pub fn train(
        samples: &[(Vec<f64>, Vec<f64>)],
        metric: Metric,
        k: Option<usize>,
    ) -> Result<Self> {
        let (first_in, first_out) = samples
            .first()
            .ok_or_else(|| Error::invalid("training requires at least one sample"))?;
        let dim = first_in.len();
        let out_dim = first_out.len();
        let count = samples.len();

        let k = match k {
            Some(0) => return Err(Error::invalid("k must be at least 1")),
            Some(k) if k > count => {
                return Err(Error::invalid(alloc::format!(
                    "k = {k} exceeds sample count {count}"
                )))
            }
            Some(k) => k,
            None => ((count + 5) / 10).max(1),
        };

        // pass 1: prescriptive copy
        let mut weights = Vec::with_capacity(count);
        let mut outputs = Vec::with_capacity(count);
        for (input, output) in samples {
            if input.len() != dim {
                return Err(Error::LengthMismatch {
                    expected: dim,
                    actual: input.len(),
                });
            }
            if output.len() != out_dim {
                return Err(Error::LengthMismatch {
                    expected: out_dim,
                    actual: output.len(),
                });
            }
            weights.push(input.clone());
            outputs.push(output.clone());
        }

        // pass 2: half the margin to the nearest different-output sample
        let mut radii = alloc::vec![f64::INFINITY; count];
        for i in 0..count {
            for j in (i + 1)..count {
                let d = metric.distance(&weights[i], &weights[j])?;
                if outputs[i] == outputs[j] {
                    continue;
                }
                if d == 0.0 {
                    return Err(Error::ConflictingSamples { first: i, second: j });
                }
                let half = d / 2.0;
                if half < radii[i] {
                    radii[i] = half;
                }
                if half < radii[j] {
                    radii[j] = half;
                }
            }
        }

        Ok(FcModel {
            weights,
            outputs,
            radii,
            metric,
            k,
            membership: Membership::InverseDistance,
        })
    }

    /// Assembles a model from explicit parts, validating the invariants.
    /// This is how persisted models are rebuilt and how tests force radii.
    pub fn from_parts(
        weights: Vec<Vec<f64>>,
        outputs: Vec<Vec<f64>>,
        radii: Vec<f64>,
        metric: Metric,
        k: usize,
        membership: Membership,
    ) -> Result<Self> {
        let count = weights.len();
        if count == 0 {
            return Err(Error::invalid("model requires at least one stored sample"));
        }
        if outputs.len() != count {
            return Err(Error::LengthMismatch {
                expected: count,
                actual: outputs.len(),
            });
        }
        if radii.len() != count {
            return Err(Error::LengthMismatch {
                expected: count,
                actual: radii.len(),
            });
        }
        let dim = weights[0].len();
        let out_dim = outputs[0].len();
        if weights.iter().any(|w| w.len() != dim)
            || outputs.iter().any(|u| u.len() != out_dim)
        {
            return Err(Error::invalid("inconsistent stored vector dimensions"));
        }
        if radii.iter().any(|r| r.is_nan() || *r < 0.0) {
            return Err(Error::invalid("radii must be non-negative"));
        }
        if k == 0 || k > count {
            return Err(Error::invalid(alloc::format!(
                "k must be in 1..={count}, got {k}"
            )));
        }
        if let Membership::Gaussian { sigma } = membership {
            if sigma.is_nan() || sigma <= 0.0 {
                return Err(Error::invalid("gaussian membership requires sigma > 0"));
            }
        }
        Ok(FcModel {
            weights,
            outputs,
            radii,
            metric,
            k,
            membership,
        })
    }

    /// Replaces the membership function used in kNN mode.
    pub fn with_membership(mut self, membership: Membership) -> Result<Self> {
        if let Membership::Gaussian { sigma } = membership {
            if sigma.is_nan() || sigma <= 0.0 {
                return Err(Error::invalid("gaussian membership requires sigma > 0"));
            }
        }
        self.membership = membership;
        Ok(self)
    }

    /// Number of stored training samples (and hidden units), `S`.
    pub fn sample_count(&self) -> usize {
        self.weights.len()
    }

    pub fn input_dim(&self) -> usize {
        self.weights[0].len()
    }

    pub fn output_dim(&self) -> usize {
        self.outputs[0].len()
    }

    pub fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }

    pub fn outputs(&self) -> &[Vec<f64>] {
        &self.outputs
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn membership(&self) -> Membership {
        self.membership
    }

    /// Radius-switched prediction.
    ///
    /// Inside some radius: exact output of the nearest such sample (ties:
    /// smallest distance, then lowest index). Outside all radii: membership-
    /// weighted blend of the k nearest samples' outputs.
    pub fn predict(&self, x: &[f64]) -> Result<Vec<f64>> {
        let dists: Vec<f64> = self
            .weights
            .iter()
            .map(|w| self.metric.distance(x, w))
            .collect::<Result<_>>()?;

        let mut nearest_inside: Option<(f64, usize)> = None;
        for (i, (&d, &radius)) in dists.iter().zip(&self.radii).enumerate() {
            if d <= radius && nearest_inside.is_none_or(|(bd, _)| d < bd) {
                nearest_inside = Some((d, i));
            }
        }
        if let Some((_, i)) = nearest_inside {
            return Ok(self.outputs[i].clone());
        }

        let selected = bitonic_top_k(&dists, self.k)?;
        let selected_dists: Vec<f64> = selected.iter().map(|&i| dists[i]).collect();
        let mu = self.membership.weights(&selected_dists);
        let mut out = alloc::vec![0.0; self.output_dim()];
        for (&i, &w) in selected.iter().zip(&mu) {
            for (o, u) in out.iter_mut().zip(&self.outputs[i]) {
                *o += w * u;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn distance_family() {
        let x = [1.0, 2.0];
        let w = [4.0, 6.0];
        assert_eq!(Metric::CityBlock.distance(&x, &w).unwrap(), 7.0);
        assert_eq!(Metric::Euclidean.distance(&x, &w).unwrap(), 5.0);
        assert_eq!(Metric::Box.distance(&x, &w).unwrap(), 4.0);
        for m in [Metric::CityBlock, Metric::Euclidean, Metric::Box] {
            assert_eq!(m.distance(&x, &x).unwrap(), 0.0);
            // 1-D collapse: all three coincide with |x - w|
            assert_eq!(m.distance(&[2.0], &[-1.5]).unwrap(), 3.5);
        }
        assert!(Metric::Box.distance(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn metric_tags_round_trip() {
        for m in [Metric::CityBlock, Metric::Euclidean, Metric::Box] {
            assert_eq!(m.tag().parse::<Metric>().unwrap(), m);
        }
        assert!("chebyshev".parse::<Metric>().is_err());
    }

    #[test]
    fn radii_are_half_the_margin() {
        let samples = alloc::vec![
            (alloc::vec![0.0], alloc::vec![1.0, 0.0]),
            (alloc::vec![1.0], alloc::vec![0.0, 1.0]),
        ];
        let model = FcModel::train(&samples, Metric::Euclidean, None).unwrap();
        assert_eq!(model.radii(), [0.5, 0.5]);
    }

    #[test]
    fn degenerate_single_sample() {
        let model = FcModel::train(
            &[(alloc::vec![3.0, 4.0], alloc::vec![1.0])],
            Metric::CityBlock,
            None,
        )
        .unwrap();
        assert_eq!(model.radii(), [f64::INFINITY]);
        assert_eq!(model.k(), 1);
        // far query still answers through 1NN mode
        assert_eq!(model.predict(&[100.0, -50.0]).unwrap(), [1.0]);
    }

    #[test]
    fn default_k_is_a_tenth_of_the_samples() {
        let samples: Vec<_> = (0..25)
            .map(|i| (alloc::vec![i as f64], alloc::vec![i as f64]))
            .collect();
        let model = FcModel::train(&samples, Metric::Euclidean, None).unwrap();
        assert_eq!(model.k(), 3);
        assert!(FcModel::train(&samples, Metric::Euclidean, Some(26)).is_err());
        assert!(FcModel::train(&samples, Metric::Euclidean, Some(0)).is_err());
    }

    #[test]
    fn conflicting_duplicates_rejected() {
        let samples = alloc::vec![
            (alloc::vec![1.0, 2.0], alloc::vec![1.0]),
            (alloc::vec![1.0, 2.0], alloc::vec![2.0]),
        ];
        let err = FcModel::train(&samples, Metric::Euclidean, None).unwrap_err();
        assert_eq!(err, Error::ConflictingSamples { first: 0, second: 1 });
    }

    #[test]
    fn bitonic_examples() {
        assert_eq!(bitonic_top_k(&[5.0, 1.0, 4.0, 2.0], 2).unwrap(), [1, 3]);
        assert_eq!(
            bitonic_top_k(&[5.0, 1.0, 4.0, 2.0], 4).unwrap(),
            [1, 3, 2, 0]
        );
        assert_eq!(bitonic_top_k(&[7.0], 1).unwrap(), [0]);
        assert!(bitonic_top_k(&[7.0], 2).is_err());
        assert!(bitonic_top_k(&[7.0], 0).is_err());
    }

    #[test]
    fn bitonic_ties_break_to_lower_index() {
        assert_eq!(bitonic_top_k(&[3.0, 1.0, 1.0, 1.0, 9.0], 2).unwrap(), [1, 2]);
    }

    #[test]
    fn bitonic_matches_sort_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.random_range(1..=64usize);
            let values: Vec<f64> = (0..n).map(|_| (rng.random_range(0..8) as f64) / 2.0).collect();
            let k = rng.random_range(1..=n);
            let got = bitonic_top_k(&values, k).unwrap();
            let mut idx: Vec<usize> = (0..n).collect();
            idx.sort_by(|&a, &b| {
                values[a]
                    .partial_cmp(&values[b])
                    .unwrap()
                    .then(a.cmp(&b))
            });
            assert_eq!(got, idx[..k], "values={values:?} k={k}");
        }
    }

    #[test]
    fn membership_examples() {
        assert_eq!(membership(&[0.5, 0.5]), [0.5, 0.5]);
        assert_eq!(membership(&[3.7]), [1.0]);
        let mu = membership(&[1.0, 3.0]);
        assert!((mu[0] - 0.75).abs() < 1e-9);
        assert!((mu[1] - 0.25).abs() < 1e-9);
    }

    #[test]
    fn membership_is_a_probability_vector() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let n = rng.random_range(1..=10usize);
            let dists: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..5.0)).collect();
            for mu in [
                membership(&dists),
                membership_gaussian(&dists, 0.7),
            ] {
                assert!((mu.iter().sum::<f64>() - 1.0).abs() < 1e-9);
                assert!(mu.iter().all(|&w| w >= 0.0));
            }
            // monotone non-increasing in distance
            let mut sorted = dists.clone();
            sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let mu = membership(&sorted);
            for pair in mu.windows(2) {
                assert!(pair[0] >= pair[1] - 1e-15);
            }
        }
    }

    #[test]
    fn gaussian_membership_survives_tiny_sigma() {
        let mu = membership_gaussian(&[5.0, 6.0, 7.0], 1e-3);
        assert!((mu.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert!((mu[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn inside_radius_returns_exact_output() {
        let samples = alloc::vec![
            (alloc::vec![0.0], alloc::vec![1.0, 0.0]),
            (alloc::vec![1.0], alloc::vec![0.0, 1.0]),
        ];
        let model = FcModel::train(&samples, Metric::Euclidean, None).unwrap();
        assert_eq!(model.predict(&[0.2]).unwrap(), [1.0, 0.0]);
    }

    #[test]
    fn memorizes_every_stored_sample() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let samples: Vec<_> = (0..20)
            .map(|_| {
                (
                    (0..3).map(|_| rng.random_range(-1.0..1.0)).collect::<Vec<f64>>(),
                    alloc::vec![rng.random_range(0..4) as f64],
                )
            })
            .collect();
        for metric in [Metric::CityBlock, Metric::Euclidean, Metric::Box] {
            let model = FcModel::train(&samples, metric, Some(5)).unwrap();
            for (x, u) in &samples {
                assert_eq!(model.predict(x).unwrap(), *u);
            }
        }
    }

    #[test]
    fn knn_mode_blends_unequal_neighbours() {
        // three one-dimensional classes; query outside every radius
        let samples = alloc::vec![
            (alloc::vec![0.0], alloc::vec![1.0, 0.0, 0.0]),
            (alloc::vec![0.5], alloc::vec![0.0, 1.0, 0.0]),
            (alloc::vec![1.25], alloc::vec![0.0, 0.0, 1.0]),
        ];
        let model = FcModel::train(&samples, Metric::Euclidean, Some(2)).unwrap();
        assert_eq!(model.radii(), [0.25, 0.25, 0.375]);
        let out = model.predict(&[0.8125]).unwrap();
        // d = [0.8125, 0.3125, 0.4375] -> neighbours 1 and 2, mu = [7/12, 5/12]
        assert!((out[0] - 0.0).abs() < 1e-12);
        assert!((out[1] - 7.0 / 12.0).abs() < 1e-9);
        assert!((out[2] - 5.0 / 12.0).abs() < 1e-9);
    }

    #[test]
    fn knn_mode_equal_distances_blend_to_mean() {
        let samples = alloc::vec![
            (alloc::vec![0.0, 0.0], alloc::vec![1.0, 0.0]),
            (alloc::vec![2.0, 0.0], alloc::vec![0.0, 1.0]),
            (alloc::vec![0.0, 2.0], alloc::vec![1.0, 1.0]),
        ];
        let model = FcModel::train(&samples, Metric::Euclidean, Some(2)).unwrap();
        let out = model.predict(&[1.5, 1.5]).unwrap();
        assert_eq!(out, [0.5, 1.0]);
    }

    #[test]
    fn metric_ordering_box_euclid_city() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..500 {
            let n = rng.random_range(1..=8usize);
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-10.0..10.0)).collect();
            let w: Vec<f64> = (0..n).map(|_| rng.random_range(-10.0..10.0)).collect();
            let city = Metric::CityBlock.distance(&x, &w).unwrap();
            let euclid = Metric::Euclidean.distance(&x, &w).unwrap();
            let boxd = Metric::Box.distance(&x, &w).unwrap();
            assert!(boxd <= euclid + 1e-12);
            assert!(euclid <= city + 1e-12);
        }
    }

    #[test]
    fn from_parts_validates() {
        let w = alloc::vec![alloc::vec![0.0], alloc::vec![1.0]];
        let u = alloc::vec![alloc::vec![0.0], alloc::vec![1.0]];
        assert!(FcModel::from_parts(
            w.clone(),
            u.clone(),
            alloc::vec![0.0, 0.0],
            Metric::Euclidean,
            1,
            Membership::InverseDistance,
        )
        .is_ok());
        assert!(FcModel::from_parts(
            w.clone(),
            u.clone(),
            alloc::vec![0.0],
            Metric::Euclidean,
            1,
            Membership::InverseDistance,
        )
        .is_err());
        assert!(FcModel::from_parts(
            w.clone(),
            u.clone(),
            alloc::vec![-1.0, 0.0],
            Metric::Euclidean,
            1,
            Membership::InverseDistance,
        )
        .is_err());
        assert!(FcModel::from_parts(
            w,
            u,
            alloc::vec![0.0, 0.0],
            Metric::Euclidean,
            1,
            Membership::Gaussian { sigma: 0.0 },
        )
        .is_err());
    }
}
