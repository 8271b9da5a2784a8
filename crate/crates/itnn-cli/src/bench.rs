//! Named end-to-end benchmarks: generate a series, cut sliding windows,
//! train a model on the first split, and score one-step predictions on the
//! held-out split against the persistence baseline.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use itnn::datasets::{
    gen_function, gen_henon, gen_mackey_glass, mae, persistence_baseline, rmse, windowize,
    FunctionPreset, HenonParams, MackeyGlassParams, WindowedSet,
};
use itnn::encoding::{encode_real_vector, EncoderSpec};
use itnn::{Cc4Model, FcModel};

use crate::cli::{membership_from, BenchName, ModelKind, ModelOpts};
use crate::error::{CliError, Result};
use crate::model_file::{Model, SavedModel};

/// Everything a benchmark run depends on; fully determined by CLI flags.
#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub name: BenchName,
    pub opts: ModelOpts,
    pub train_size: usize,
    pub test_size: usize,
    pub window: usize,
    pub horizon: usize,
    pub preset: FunctionPreset,
    pub noise_sd: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub index: usize,
    pub input: Vec<f64>,
    pub prediction: f64,
    pub actual: f64,
    pub baseline: f64,
}

/// A finished benchmark. Aggregate metrics are recomputable from the rows;
/// only the wall-clock fields vary between identically seeded runs.
#[derive(Clone, Debug, Serialize)]
pub struct BenchReport {
    pub bench: String,
    pub model_type: String,
    pub seed: u64,
    pub train_size: usize,
    pub test_size: usize,
    pub window: usize,
    pub horizon: usize,
    pub config: BTreeMap<String, String>,
    pub model_rmse: f64,
    pub model_mae: f64,
    pub baseline_rmse: f64,
    pub baseline_mae: f64,
    pub train_time_ms: f64,
    pub predict_time_ms: f64,
    pub rows: Vec<BenchRow>,
}

pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport> {
    if cfg.train_size == 0 || cfg.test_size == 0 {
        return Err(CliError::usage("train and test sizes must be at least 1"));
    }

    let mut config = BTreeMap::new();
    let (train_pairs, test_pairs, window, horizon) = match cfg.name {
        BenchName::Henon | BenchName::MackeyGlass => {
            let needed = cfg.train_size + cfg.test_size + cfg.window + cfg.horizon - 1;
            let series = match cfg.name {
                BenchName::Henon => gen_henon(needed, &HenonParams::default())?,
                BenchName::MackeyGlass => {
                    gen_mackey_glass(needed, &MackeyGlassParams::default())?
                }
                BenchName::Function => unreachable!(),
            };
            config.insert("series".to_string(), series.meta.clone());
            let set = windowize(&series.values, cfg.window, cfg.horizon)?;
            let (train, test) = split(&set, cfg.train_size, cfg.test_size)?;
            (train, test, cfg.window, cfg.horizon)
        }
        BenchName::Function => {
            let points = gen_function(
                cfg.preset,
                cfg.train_size + cfg.test_size,
                cfg.noise_sd,
                cfg.opts.seed,
            )?;
            config.insert(
                "series".to_string(),
                format!(
                    "function preset={} noise_sd={} seed={}",
                    cfg.preset.tag(),
                    cfg.noise_sd,
                    cfg.opts.seed
                ),
            );
            let pairs: Vec<(Vec<f64>, f64)> =
                points.iter().map(|&(x, y)| (vec![x], y)).collect();
            let train = pairs[..cfg.train_size].to_vec();
            let test = pairs[cfg.train_size..].to_vec();
            (train, test, 1, 0)
        }
    };

    let train_started = Instant::now();
    let saved = train_on_windows(&train_pairs, cfg, &mut config)?;
    let train_time_ms = train_started.elapsed().as_secs_f64() * 1e3;

    let predict_started = Instant::now();
    let predictions: Vec<f64> = test_pairs
        .par_iter()
        .map(|(input, _)| {
            let out = saved.predict_row(input)?;
            Ok(out[0])
        })
        .collect::<Result<_>>()?;
    let predict_time_ms = predict_started.elapsed().as_secs_f64() * 1e3;

    let actuals: Vec<f64> = test_pairs.iter().map(|(_, t)| *t).collect();
    let test_set = WindowedSet {
        pairs: test_pairs.clone(),
        window,
        horizon: horizon.max(1),
    };
    let baseline = persistence_baseline(&test_set);

    let rows = test_pairs
        .iter()
        .enumerate()
        .map(|(index, (input, actual))| BenchRow {
            index,
            input: input.clone(),
            prediction: predictions[index],
            actual: *actual,
            baseline: baseline[index],
        })
        .collect();

    Ok(BenchReport {
        bench: cfg.name.tag().to_string(),
        model_type: saved.model.type_tag().to_string(),
        seed: cfg.opts.seed,
        train_size: cfg.train_size,
        test_size: cfg.test_size,
        window,
        horizon,
        config,
        model_rmse: rmse(&predictions, &actuals)?,
        model_mae: mae(&predictions, &actuals)?,
        baseline_rmse: rmse(&baseline, &actuals)?,
        baseline_mae: mae(&baseline, &actuals)?,
        train_time_ms,
        predict_time_ms,
        rows,
    })
}

type Pairs = Vec<(Vec<f64>, f64)>;

fn split(set: &WindowedSet, train_size: usize, test_size: usize) -> Result<(Pairs, Pairs)> {
    if set.pairs.len() < train_size + test_size {
        return Err(CliError::usage(format!(
            "series yields {} windows, need {}",
            set.pairs.len(),
            train_size + test_size
        )));
    }
    Ok((
        set.pairs[..train_size].to_vec(),
        set.pairs[train_size..train_size + test_size].to_vec(),
    ))
}

fn train_on_windows(
    train_pairs: &[(Vec<f64>, f64)],
    cfg: &BenchConfig,
    config: &mut BTreeMap<String, String>,
) -> Result<SavedModel> {
    match cfg.opts.model {
        ModelKind::Fc => {
            let samples: Vec<(Vec<f64>, Vec<f64>)> = train_pairs
                .iter()
                .map(|(x, t)| (x.clone(), vec![*t]))
                .collect();
            let model = FcModel::train(&samples, cfg.opts.metric, cfg.opts.k)?
                .with_membership(membership_from(&cfg.opts))?;
            config.insert("metric".to_string(), cfg.opts.metric.tag().to_string());
            config.insert("k".to_string(), model.k().to_string());
            config.insert(
                "membership".to_string(),
                match model.membership() {
                    itnn::Membership::InverseDistance => "inverse".to_string(),
                    itnn::Membership::Gaussian { sigma } => format!("gaussian sigma={sigma}"),
                },
            );
            Ok(SavedModel {
                model: Model::Fc(model),
                encoder: None,
            })
        }
        ModelKind::Cc4 => {
            let levels = cfg.opts.levels.unwrap_or(8);
            let (lo, hi) = match (cfg.opts.lo, cfg.opts.hi) {
                (Some(lo), Some(hi)) => (lo, hi),
                // default to the training split's value range
                _ => {
                    let mut lo = f64::INFINITY;
                    let mut hi = f64::NEG_INFINITY;
                    for (x, t) in train_pairs {
                        for &v in x.iter().chain(std::iter::once(t)) {
                            lo = lo.min(v);
                            hi = hi.max(v);
                        }
                    }
                    (lo, hi)
                }
            };
            let spec = EncoderSpec::new(lo, hi, levels)?;

            // Quantization collapses nearby windows onto one bit pattern, so
            // distinct targets can collide on one input. Pool each pattern's
            // targets and encode their mean; training then sees consistent
            // samples and the collision count lands in the report.
            let mut grouped: std::collections::BTreeMap<_, Vec<f64>> =
                std::collections::BTreeMap::new();
            for (x, t) in train_pairs {
                grouped
                    .entry(encode_real_vector(x, &spec)?)
                    .or_default()
                    .push(*t);
            }
            let collisions = train_pairs.len() - grouped.len();
            let samples = grouped
                .into_iter()
                .map(|(pattern, targets)| {
                    let mean = targets.iter().sum::<f64>() / targets.len() as f64;
                    Ok((pattern, encode_real_vector(&[mean], &spec)?))
                })
                .collect::<Result<Vec<_>>>()?;
            let model = Cc4Model::train(&samples, cfg.opts.radius)?;
            config.insert("radius".to_string(), cfg.opts.radius.to_string());
            config.insert("levels".to_string(), levels.to_string());
            config.insert("lo".to_string(), lo.to_string());
            config.insert("hi".to_string(), hi.to_string());
            config.insert("window_collisions".to_string(), collisions.to_string());
            config.insert(
                "hidden_units".to_string(),
                model.hidden_units().len().to_string(),
            );
            Ok(SavedModel {
                model: Model::Cc4(model),
                encoder: Some(spec),
            })
        }
        ModelKind::Pnn | ModelKind::Wizard => Err(CliError::usage(
            "benchmarks predict real values; use --model cc4 or --model fc",
        )),
    }
}

impl BenchReport {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// Plot-ready CSV: `#`-prefixed summary lines, then one row per test
    /// sample.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "# bench={} model={} seed={} train_size={} test_size={} window={} horizon={}\n",
            self.bench,
            self.model_type,
            self.seed,
            self.train_size,
            self.test_size,
            self.window,
            self.horizon
        ));
        for (key, value) in &self.config {
            out.push_str(&format!("# {key}={value}\n"));
        }
        out.push_str(&format!(
            "# model_rmse={} model_mae={} baseline_rmse={} baseline_mae={}\n",
            self.model_rmse, self.model_mae, self.baseline_rmse, self.baseline_mae
        ));
        out.push_str(&format!(
            "# train_time_ms={} predict_time_ms={}\n",
            self.train_time_ms, self.predict_time_ms
        ));
        out.push_str("index");
        for i in 1..=self.window {
            out.push_str(&format!(",x{i}"));
        }
        out.push_str(",prediction,actual,baseline\n");
        for row in &self.rows {
            out.push_str(&row.index.to_string());
            for v in &row.input {
                out.push_str(&format!(",{v}"));
            }
            out.push_str(&format!(
                ",{},{},{}\n",
                row.prediction, row.actual, row.baseline
            ));
        }
        out
    }
}
