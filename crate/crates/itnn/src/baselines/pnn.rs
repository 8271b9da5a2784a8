//! Probabilistic neural network: a Parzen-window density estimator per
//! class with a Bayes decision rule over `h_k · l_k · f_k(x)`.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// One class: its label, stored exemplars, prior probability `h`, and
/// misclassification loss `l`.
#[derive(Clone, Debug, PartialEq)]
pub struct PnnClass {
    label: usize,
    samples: Vec<Vec<f64>>,
    prior: f64,
    loss: f64,
}

impl PnnClass {
    /// A class with unit prior and loss.
    pub fn new(label: usize, samples: Vec<Vec<f64>>) -> Result<Self> {
        Self::with_prior_loss(label, samples, 1.0, 1.0)
    }

    pub fn with_prior_loss(
        label: usize,
        samples: Vec<Vec<f64>>,
        prior: f64,
        loss: f64,
    ) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::invalid("a class requires at least one sample"));
        }
        let dim = samples[0].len();
        if samples.iter().any(|s| s.len() != dim) {
            return Err(Error::invalid("inconsistent sample dimensions"));
        }
        if prior.is_nan() || prior <= 0.0 || loss.is_nan() || loss <= 0.0 {
            return Err(Error::invalid("prior and loss must be positive"));
        }
        Ok(PnnClass {
            label,
            samples,
            prior,
            loss,
        })
    }

    pub fn label(&self) -> usize {
        self.label
    }

    pub fn samples(&self) -> &[Vec<f64>] {
        &self.samples
    }

    pub fn prior(&self) -> f64 {
        self.prior
    }

    pub fn loss(&self) -> f64 {
        self.loss
    }
}

/// The full classifier: classes plus the Gaussian smoothing parameter σ.
#[derive(Clone, Debug, PartialEq)]
pub struct PnnModel {
    classes: Vec<PnnClass>,
    sigma: f64,
}

/// Midpoint of the 0.2–0.3 band that works well for unit-normalized data.
pub const DEFAULT_SIGMA: f64 = 0.25;

impl PnnModel {
    pub fn new(classes: Vec<PnnClass>, sigma: f64) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::invalid("model requires at least one class"));
        }
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(Error::invalid("sigma must be positive and finite"));
        }
        let dim = classes[0].samples[0].len();
        for class in &classes {
            if class.samples[0].len() != dim {
                return Err(Error::invalid("classes disagree on input dimension"));
            }
        }
        for (i, a) in classes.iter().enumerate() {
            if classes[i + 1..].iter().any(|b| b.label == a.label) {
                return Err(Error::invalid("duplicate class label"));
            }
        }
        Ok(PnnModel { classes, sigma })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn classes(&self) -> &[PnnClass] {
        &self.classes
    }

    pub fn input_dim(&self) -> usize {
        self.classes[0].samples[0].len()
    }

    /// The Parzen density estimate for one class:
    ///
    /// `f_k(x) = [(2π)^{R/2} σ^R S]⁻¹ Σ_i exp(-‖x − X_ki‖² / 2σ²)`
    ///
    /// with `S` the class's own sample count.
    pub fn density(&self, label: usize, x: &[f64]) -> Result<f64> {
        let class = self
            .classes
            .iter()
            .find(|c| c.label == label)
            .ok_or_else(|| Error::invalid(alloc::format!("unknown class {label}")))?;
        self.check_dim(x)?;
        let r = x.len() as f64;
        let s = class.samples.len() as f64;
        let norm = libm::pow(2.0 * core::f64::consts::PI, r / 2.0) * libm::pow(self.sigma, r) * s;
        let sum: f64 = class
            .samples
            .iter()
            .map(|xi| libm::exp(-sq_dist(x, xi) / (2.0 * self.sigma * self.sigma)))
            .sum();
        Ok(sum / norm)
    }

    /// Bayes decision: the label maximizing `h_k · l_k · f_k(x)`, ties to
    /// the lowest label.
    ///
    /// Scores are compared in log domain so the argmax survives σ small
    /// enough that every raw density underflows; the winner is unchanged
    /// because log is strictly monotone.
    pub fn classify(&self, x: &[f64]) -> Result<usize> {
        self.check_dim(x)?;
        let r = x.len() as f64;
        let mut best: Option<(f64, usize)> = None;
        for class in &self.classes {
            let log_norm = (r / 2.0) * libm::log(2.0 * core::f64::consts::PI)
                + r * libm::log(self.sigma)
                + libm::log(class.samples.len() as f64);
            let exponents: Vec<f64> = class
                .samples
                .iter()
                .map(|xi| -sq_dist(x, xi) / (2.0 * self.sigma * self.sigma))
                .collect();
            let score =
                libm::log(class.prior * class.loss) - log_norm + log_sum_exp(&exponents);
            let better = match best {
                None => true,
                Some((bs, bl)) => score > bs || (score == bs && class.label < bl),
            };
            if better {
                best = Some((score, class.label));
            }
        }
        Ok(best.expect("at least one class").1)
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        let dim = self.input_dim();
        if x.len() != dim {
            return Err(Error::LengthMismatch {
                expected: dim,
                actual: x.len(),
            });
        }
        Ok(())
    }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn log_sum_exp(v: &[f64]) -> f64 {
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + libm::log(v.iter().map(|&x| libm::exp(x - m)).sum())
}
