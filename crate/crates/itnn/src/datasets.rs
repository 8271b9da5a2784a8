//! Benchmark data: chaotic series generators, sliding-window supervision,
//! function-approximation presets, and evaluation metrics.
//!
//! Generators are deterministic given their parameters (and seed, where one
//! applies); every series records how it was made in `meta` so a benchmark
//! can be reproduced from its report.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};

/// A generated time series plus a human-readable record of its provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub values: Vec<f64>,
    pub meta: String,
}

/// Hénon map parameters. The literature-standard chaotic regime is the
/// default.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HenonParams {
    pub a: f64,
    pub b: f64,
    pub x0: f64,
    pub y0: f64,
    pub discard: usize,
}

impl Default for HenonParams {
    fn default() -> Self {
        HenonParams {
            a: 1.4,
            b: 0.3,
            x0: 0.0,
            y0: 0.0,
            discard: 100,
        }
    }
}

/// Iterates `x' = 1 − a·x² + y`, `y' = b·x`, keeping `n` x-values after
/// dropping the first `discard`.
pub fn gen_henon(n: usize, params: &HenonParams) -> Result<Series> {
    if n == 0 {
        return Err(Error::invalid("need at least one point"));
    }
    let HenonParams { a, b, x0, y0, discard } = *params;
    let mut x = x0;
    let mut y = y0;
    let mut values = Vec::with_capacity(n);
    for step in 0..discard + n {
        let next_x = 1.0 - a * x * x + y;
        let next_y = b * x;
        x = next_x;
        y = next_y;
        if !x.is_finite() || x.abs() > 1e10 {
            return Err(Error::Diverged { step });
        }
        if step >= discard {
            values.push(x);
        }
    }
    Ok(Series {
        values,
        meta: format!("henon a={a} b={b} x0={x0} y0={y0} discard={discard} n={n}"),
    })
}

/// Mackey-Glass delay-differential parameters. Defaults give the classic
/// mildly chaotic regime at unit-time sampling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MackeyGlassParams {
    pub a: f64,
    pub b: f64,
    pub tau: f64,
    pub dt: f64,
    pub x_init: f64,
    pub discard: usize,
}

impl Default for MackeyGlassParams {
    fn default() -> Self {
        MackeyGlassParams {
            a: 0.2,
            b: 0.1,
            tau: 17.0,
            dt: 0.1,
            x_init: 1.2,
            discard: 300,
        }
    }
}

fn pow10(x: f64) -> f64 {
    let x2 = x * x;
    let x4 = x2 * x2;
    x4 * x4 * x2
}

/// Integrates `dx/dt = a·x(t−τ)/(1 + x(t−τ)¹⁰) − b·x(t)` with fixed-step
/// fourth-order Runge-Kutta, delayed values read from a history buffer at a
/// lag of `τ/dt` steps (stage midpoints interpolate between adjacent buffer
/// entries), then keeps every `1/dt`-th step so samples are one time unit
/// apart. History is the constant `x_init`.
pub fn gen_mackey_glass(n: usize, params: &MackeyGlassParams) -> Result<Series> {
    if n == 0 {
        return Err(Error::invalid("need at least one point"));
    }
    let MackeyGlassParams { a, b, tau, dt, x_init, discard } = *params;
    if dt.is_nan() || dt <= 0.0 || tau < 0.0 {
        return Err(Error::invalid("need dt > 0 and tau >= 0"));
    }

    let deriv = |x: f64, x_tau: f64| a * x_tau / (1.0 + pow10(x_tau)) - b * x;
    let lag = libm::round(tau / dt) as usize;
    let steps_per_sample = (libm::round(1.0 / dt) as usize).max(1);

    // history[0] = x(t − lag·dt), ..., history[lag − 1] = x(t − dt)
    let mut history: VecDeque<f64> = (0..lag).map(|_| x_init).collect();
    let mut x = x_init;
    let mut values = Vec::with_capacity(n);

    for sample in 0..discard + n {
        for step in 0..steps_per_sample {
            let x_next = if lag == 0 {
                // no delay: plain RK4 on dx/dt = f(x, x)
                let k1 = deriv(x, x);
                let s2 = x + 0.5 * dt * k1;
                let k2 = deriv(s2, s2);
                let s3 = x + 0.5 * dt * k2;
                let k3 = deriv(s3, s3);
                let s4 = x + dt * k3;
                let k4 = deriv(s4, s4);
                x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            } else {
                let h0 = history[0];
                let h1 = if lag >= 2 { history[1] } else { x };
                let hm = 0.5 * (h0 + h1);
                let k1 = deriv(x, h0);
                let k2 = deriv(x + 0.5 * dt * k1, hm);
                let k3 = deriv(x + 0.5 * dt * k2, hm);
                let k4 = deriv(x + dt * k3, h1);
                x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            };
            if !x_next.is_finite() {
                return Err(Error::Diverged {
                    step: sample * steps_per_sample + step,
                });
            }
            if lag > 0 {
                history.push_back(x);
                history.pop_front();
            }
            x = x_next;
        }
        if sample >= discard {
            values.push(x);
        }
    }

    Ok(Series {
        values,
        meta: format!(
            "mackey-glass a={a} b={b} tau={tau} dt={dt} x_init={x_init} discard={discard} n={n}"
        ),
    })
}

/// Supervised pairs cut from a series: each window of `window` consecutive
/// values is paired with the value `horizon` steps after it.
#[derive(Clone, Debug, PartialEq)]
pub struct WindowedSet {
    pub pairs: Vec<(Vec<f64>, f64)>,
    pub window: usize,
    pub horizon: usize,
}

/// Sliding-window supervision; produces `len − w − h + 1` pairs in series
/// order.
pub fn windowize(series: &[f64], window: usize, horizon: usize) -> Result<WindowedSet> {
    if window == 0 || horizon == 0 {
        return Err(Error::invalid("window and horizon must be at least 1"));
    }
    if series.len() < window + horizon {
        return Err(Error::invalid(format!(
            "series of length {} is too short for window {window} + horizon {horizon}",
            series.len()
        )));
    }
    let pairs = (0..series.len() - window - horizon + 1)
        .map(|i| {
            (
                series[i..i + window].to_vec(),
                series[i + window + horizon - 1],
            )
        })
        .collect();
    Ok(WindowedSet {
        pairs,
        window,
        horizon,
    })
}

/// Target functions for the function-approximation exercises.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FunctionPreset {
    /// `sin(x)` on `[0, 2π]`.
    Sin,
    /// Unit step at the origin on `[−1, 1]`.
    Step,
    /// The one-dimensional Hénon parabola `1 − 1.4·x²` on `[−1.5, 1.5]`.
    Henon1d,
}

impl FunctionPreset {
    pub fn domain(&self) -> (f64, f64) {
        match self {
            FunctionPreset::Sin => (0.0, 2.0 * core::f64::consts::PI),
            FunctionPreset::Step => (-1.0, 1.0),
            FunctionPreset::Henon1d => (-1.5, 1.5),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            FunctionPreset::Sin => libm::sin(x),
            FunctionPreset::Step => {
                if x >= 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            FunctionPreset::Henon1d => 1.0 - 1.4 * x * x,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            FunctionPreset::Sin => "sin",
            FunctionPreset::Step => "step",
            FunctionPreset::Henon1d => "henon-1d",
        }
    }
}

impl core::str::FromStr for FunctionPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sin" => Ok(FunctionPreset::Sin),
            "step" => Ok(FunctionPreset::Step),
            "henon-1d" => Ok(FunctionPreset::Henon1d),
            other => Err(Error::invalid(format!(
                "unknown function preset {other:?} (expected sin, step, or henon-1d)"
            ))),
        }
    }
}

/// `n` seeded-uniform inputs on the preset's domain, targets `f(x)` plus
/// Gaussian noise of the given standard deviation.
pub fn gen_function(
    preset: FunctionPreset,
    n: usize,
    noise_sd: f64,
    seed: u64,
) -> Result<Vec<(f64, f64)>> {
    if n == 0 {
        return Err(Error::invalid("need at least one point"));
    }
    if noise_sd < 0.0 || !noise_sd.is_finite() {
        return Err(Error::invalid("noise_sd must be finite and non-negative"));
    }
    let (lo, hi) = preset.domain();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, noise_sd).expect("validated sd");
    Ok((0..n)
        .map(|_| {
            let x = rng.random_range(lo..hi);
            let y = preset.eval(x) + if noise_sd > 0.0 { noise.sample(&mut rng) } else { 0.0 };
            (x, y)
        })
        .collect())
}

/// Root mean squared error.
pub fn rmse(pred: &[f64], actual: &[f64]) -> Result<f64> {
    check_paired(pred, actual)?;
    let mse = pred
        .iter()
        .zip(actual)
        .map(|(p, a)| (p - a) * (p - a))
        .sum::<f64>()
        / pred.len() as f64;
    Ok(libm::sqrt(mse))
}

/// Mean absolute error.
pub fn mae(pred: &[f64], actual: &[f64]) -> Result<f64> {
    check_paired(pred, actual)?;
    Ok(pred.iter().zip(actual).map(|(p, a)| (p - a).abs()).sum::<f64>() / pred.len() as f64)
}

/// Fraction of positions where the two label sequences agree.
pub fn accuracy<T: PartialEq>(pred: &[T], actual: &[T]) -> Result<f64> {
    check_paired(pred, actual)?;
    let hits = pred.iter().zip(actual).filter(|(p, a)| p == a).count();
    Ok(hits as f64 / pred.len() as f64)
}

fn check_paired<T>(pred: &[T], actual: &[T]) -> Result<()> {
    if pred.len() != actual.len() {
        return Err(Error::LengthMismatch {
            expected: actual.len(),
            actual: pred.len(),
        });
    }
    if pred.is_empty() {
        return Err(Error::invalid("metrics need at least one value"));
    }
    Ok(())
}

/// The naive forecaster: predict that the series stays at the window's last
/// value.
pub fn persistence_baseline(set: &WindowedSet) -> Vec<f64> {
    set.pairs
        .iter()
        .map(|(window, _)| *window.last().expect("windows are non-empty"))
        .collect()
}
