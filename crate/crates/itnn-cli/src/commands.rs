//! Subcommand implementations.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use itnn::baselines::{PnnClass, PnnModel, WizardDiscriminator};
use itnn::datasets::{
    gen_function, gen_henon, gen_mackey_glass, windowize, HenonParams, MackeyGlassParams,
};
use itnn::encoding::EncoderSpec;
use itnn::{Cc4Model, FcModel};

use crate::bench::{run_bench, BenchConfig};
use crate::cli::{
    membership_from, BenchArgs, BenchName, Cli, Command, EvalArgs, GenDataArgs, MappingKind,
    ModelKind, ModelOpts, OutputFormat, PredictArgs, TrainArgs,
};
use crate::data::{read_dataset, write_dataset, write_series, Dataset};
use crate::error::{CliError, Result};
use crate::model_file::{pattern_from_values, Model, SavedModel, WizardBank};

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Train(args) => cmd_train(&args),
        Command::Predict(args) => cmd_predict(&args),
        Command::Eval(args) => cmd_eval(&args),
        Command::Bench(args) => cmd_bench(&args),
        Command::GenData(args) => cmd_gen_data(&args),
    }
}

fn emit(out: Option<&Path>, contents: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, contents)?,
        None => {
            std::io::stdout().write_all(contents.as_bytes())?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

pub fn cmd_train(args: &TrainArgs) -> Result<()> {
    let dataset = read_dataset(&args.data)?;
    if dataset.target_names.is_empty() {
        return Err(CliError::usage(
            "training data needs at least one `target:` column",
        ));
    }

    let started = Instant::now();
    let saved = train_model(&dataset, &args.opts)?;
    let train_time_ms = started.elapsed().as_secs_f64() * 1e3;

    saved.save(&args.out)?;
    println!(
        "trained {} on {} rows in {train_time_ms:.3} ms -> {}",
        saved.model.type_tag(),
        dataset.len(),
        args.out.display()
    );
    Ok(())
}

/// Trains the selected model from a parsed dataset (shared by `train` and
/// the tests that drive it directly).
pub fn train_model(dataset: &Dataset, opts: &ModelOpts) -> Result<SavedModel> {
    let encoder = opts
        .levels
        .map(|levels| EncoderSpec::new(opts.lo.unwrap_or(0.0), opts.hi.unwrap_or(1.0), levels))
        .transpose()?;

    match opts.model {
        ModelKind::Cc4 => {
            let samples = dataset
                .features
                .iter()
                .zip(&dataset.targets)
                .map(|(x, t)| {
                    Ok((
                        pattern_from_values(&encoder, x)?,
                        pattern_from_values(&encoder, t)?,
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            let model = Cc4Model::train(&samples, opts.radius)?;
            Ok(SavedModel {
                model: Model::Cc4(model),
                encoder,
            })
        }
        ModelKind::Fc => {
            let samples: Vec<(Vec<f64>, Vec<f64>)> = dataset
                .features
                .iter()
                .zip(&dataset.targets)
                .map(|(x, t)| (x.clone(), t.clone()))
                .collect();
            let model = FcModel::train(&samples, opts.metric, opts.k)?
                .with_membership(membership_from(opts))?;
            Ok(SavedModel {
                model: Model::Fc(model),
                encoder: None,
            })
        }
        ModelKind::Pnn => {
            let mut by_label: BTreeMap<usize, Vec<Vec<f64>>> = BTreeMap::new();
            for row in 0..dataset.len() {
                let label = dataset.class_label(row)?;
                by_label
                    .entry(label)
                    .or_default()
                    .push(dataset.features[row].clone());
            }
            let classes = by_label
                .into_iter()
                .map(|(label, samples)| Ok(PnnClass::new(label, samples)?))
                .collect::<Result<Vec<_>>>()?;
            let model = PnnModel::new(classes, opts.sigma)?;
            Ok(SavedModel {
                model: Model::Pnn(model),
                encoder: None,
            })
        }
        ModelKind::Wizard => {
            let patterns = dataset
                .features
                .iter()
                .map(|x| pattern_from_values(&encoder, x))
                .collect::<Result<Vec<_>>>()?;
            let pattern_len = patterns[0].len();
            if pattern_len % opts.address_bits != 0 {
                return Err(CliError::usage(format!(
                    "pattern length {pattern_len} is not divisible by --address-bits {}",
                    opts.address_bits
                )));
            }
            let num_nodes = pattern_len / opts.address_bits;

            let mut by_label: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for row in 0..dataset.len() {
                by_label.entry(dataset.class_label(row)?).or_default().push(row);
            }
            let mut labels = Vec::new();
            let mut discriminators = Vec::new();
            for (label, rows) in by_label {
                let mut d = match opts.mapping {
                    MappingKind::Sequential => {
                        WizardDiscriminator::new(num_nodes, opts.address_bits)?
                    }
                    MappingKind::Random => WizardDiscriminator::with_random_mapping(
                        num_nodes,
                        opts.address_bits,
                        opts.seed,
                    )?,
                };
                for row in rows {
                    d.train(&patterns[row])?;
                }
                labels.push(label);
                discriminators.push(d);
            }
            Ok(SavedModel {
                model: Model::Wizard(WizardBank {
                    discriminators,
                    labels,
                }),
                encoder,
            })
        }
    }
}

// ---------------------------------------------------------------------------
// predict
// ---------------------------------------------------------------------------

pub fn cmd_predict(args: &PredictArgs) -> Result<()> {
    let saved = SavedModel::load(&args.model_file)?;

    let rows: Vec<Vec<f64>> = match (&args.vector, &args.data) {
        (Some(vector), _) => vec![parse_inline_vector(vector)?],
        (None, Some(path)) => read_dataset(path)?.features,
        (None, None) => {
            return Err(CliError::usage(
                "predict needs a feature CSV or an inline --vector",
            ))
        }
    };

    let predictions = predict_batch(&saved, &rows)?;
    emit(args.out.as_deref(), &predictions_csv(&saved, &predictions))?;
    Ok(())
}

/// Order-preserving parallel batch prediction.
pub fn predict_batch(saved: &SavedModel, rows: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    rows.par_iter().map(|row| saved.predict_row(row)).collect()
}

fn parse_inline_vector(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|part| {
            let part = part.trim();
            part.parse::<f64>()
                .map_err(|_| CliError::parse(format!("{part:?} is not a number")))
        })
        .collect()
}

fn predictions_csv(saved: &SavedModel, predictions: &[Vec<f64>]) -> String {
    let mut out = saved.output_names().join(",");
    out.push('\n');
    for row in predictions {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize)]
pub struct EvalReport {
    pub model_type: String,
    pub rows: usize,
    pub metrics: BTreeMap<String, f64>,
}

pub fn cmd_eval(args: &EvalArgs) -> Result<()> {
    let saved = SavedModel::load(&args.model_file)?;
    let dataset = read_dataset(&args.data)?;
    if dataset.target_names.is_empty() {
        return Err(CliError::usage("eval needs `target:` columns to compare against"));
    }
    let report = evaluate(&saved, &dataset)?;
    let text = match args.format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&report)?;
            s.push('\n');
            s
        }
        OutputFormat::Csv => {
            let mut s = String::from("metric,value\n");
            for (name, value) in &report.metrics {
                s.push_str(&format!("{name},{value}\n"));
            }
            s
        }
    };
    emit(args.out.as_deref(), &text)?;
    Ok(())
}

pub fn evaluate(saved: &SavedModel, dataset: &Dataset) -> Result<EvalReport> {
    let predictions = predict_batch(saved, &dataset.features)?;
    let mut metrics = BTreeMap::new();

    match &saved.model {
        Model::Pnn(_) | Model::Wizard(_) => {
            let predicted: Vec<usize> = predictions.iter().map(|p| p[0] as usize).collect();
            let actual: Vec<usize> = (0..dataset.len())
                .map(|row| dataset.class_label(row))
                .collect::<Result<_>>()?;
            metrics.insert(
                "accuracy".to_string(),
                itnn::datasets::accuracy(&predicted, &actual)?,
            );
        }
        Model::Cc4(_) if saved.encoder.is_none() => {
            // raw bit outputs: exact-row and per-bit agreement
            check_widths(&predictions, dataset)?;
            let exact = predictions
                .iter()
                .zip(&dataset.targets)
                .filter(|(p, t)| p == t)
                .count();
            let (flat_p, flat_t) = flatten(&predictions, &dataset.targets);
            metrics.insert("accuracy".to_string(), exact as f64 / dataset.len() as f64);
            metrics.insert(
                "bit_accuracy".to_string(),
                itnn::datasets::accuracy(&flat_p, &flat_t)?,
            );
        }
        _ => {
            check_widths(&predictions, dataset)?;
            let (flat_p, flat_t) = flatten(&predictions, &dataset.targets);
            metrics.insert("rmse".to_string(), itnn::datasets::rmse(&flat_p, &flat_t)?);
            metrics.insert("mae".to_string(), itnn::datasets::mae(&flat_p, &flat_t)?);
        }
    }

    Ok(EvalReport {
        model_type: saved.model.type_tag().to_string(),
        rows: dataset.len(),
        metrics,
    })
}

fn check_widths(predictions: &[Vec<f64>], dataset: &Dataset) -> Result<()> {
    let want = predictions[0].len();
    if dataset.targets[0].len() != want {
        return Err(CliError::usage(format!(
            "model predicts {want} values per row but the dataset has {} target columns",
            dataset.targets[0].len()
        )));
    }
    Ok(())
}

fn flatten(a: &[Vec<f64>], b: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    (
        a.iter().flatten().copied().collect(),
        b.iter().flatten().copied().collect(),
    )
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

pub fn cmd_bench(args: &BenchArgs) -> Result<()> {
    let config = BenchConfig {
        name: args.name,
        opts: args.opts.clone(),
        train_size: args.train_size,
        test_size: args.test_size,
        window: args.window,
        horizon: args.horizon,
        preset: args.preset,
        noise_sd: args.noise_sd,
    };
    let report = run_bench(&config)?;
    let text = match args.format {
        OutputFormat::Json => report.to_json()?,
        OutputFormat::Csv => report.to_csv(),
    };
    emit(args.out.as_deref(), &text)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// gen-data
// ---------------------------------------------------------------------------

pub fn cmd_gen_data(args: &GenDataArgs) -> Result<()> {
    match args.name {
        BenchName::Henon | BenchName::MackeyGlass => {
            let series = match args.name {
                BenchName::Henon => gen_henon(args.n, &HenonParams::default())?,
                BenchName::MackeyGlass => gen_mackey_glass(args.n, &MackeyGlassParams::default())?,
                BenchName::Function => unreachable!(),
            };
            match args.window {
                None => write_series(&args.out, &series)?,
                Some(window) => {
                    let set = windowize(&series.values, window, args.horizon)?;
                    write_dataset(&args.out, &windowed_dataset(&set.pairs, window))?;
                }
            }
        }
        BenchName::Function => {
            let points = gen_function(args.preset, args.n, args.noise_sd, args.seed)?;
            let dataset = Dataset {
                feature_names: vec!["x".to_string()],
                target_names: vec!["y".to_string()],
                features: points.iter().map(|&(x, _)| vec![x]).collect(),
                targets: points.iter().map(|&(_, y)| vec![y]).collect(),
            };
            write_dataset(&args.out, &dataset)?;
        }
    }
    println!("wrote {}", args.out.display());
    Ok(())
}

fn windowed_dataset(pairs: &[(Vec<f64>, f64)], window: usize) -> Dataset {
    Dataset {
        feature_names: (1..=window).map(|i| format!("x{i}")).collect(),
        target_names: vec!["y".to_string()],
        features: pairs.iter().map(|(x, _)| x.clone()).collect(),
        targets: pairs.iter().map(|&(_, t)| vec![t]).collect(),
    }
}
