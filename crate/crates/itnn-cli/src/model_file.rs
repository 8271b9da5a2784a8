//! Versioned JSON model persistence.
//!
//! One schema for all four model types:
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "model_type": "cc4" | "fc" | "pnn" | "wizard",
//!   "encoder": { "lo": 0.0, "hi": 1.0, "levels": 8 } | null,
//!   "payload": { ... model-specific ... }
//! }
//! ```
//!
//! Reals pass through `serde_json`'s shortest-round-trip formatting, so a
//! load of a save reproduces every stored number bit for bit. Infinite FC
//! radii are stored as `null`. CC4 hidden weights are stored implicitly as
//! the original training bit patterns plus the radius (they are recoverable
//! prescriptively); the `representation` field records that choice.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use itnn::baselines::{wizard_classify, PnnClass, PnnModel, WizardDiscriminator};
use itnn::encoding::{encode_real_vector, thermometer_decode, BinaryVector, EncoderSpec};
use itnn::{Cc4Model, FcModel, Membership, Metric};

use crate::error::{CliError, Result};

pub const FORMAT_VERSION: u32 = 1;

/// A bank of per-class discriminators sharing one geometry and mapping.
#[derive(Clone, Debug, PartialEq)]
pub struct WizardBank {
    pub discriminators: Vec<WizardDiscriminator>,
    /// Class label answered by each discriminator, in discriminator order.
    pub labels: Vec<usize>,
}

impl WizardBank {
    pub fn classify(&self, pattern: &BinaryVector) -> Result<usize> {
        let idx = wizard_classify(&self.discriminators, pattern)?;
        Ok(self.labels[idx])
    }
}

/// Any trained model.
#[derive(Clone, Debug, PartialEq)]
pub enum Model {
    Cc4(Cc4Model),
    Fc(FcModel),
    Pnn(PnnModel),
    Wizard(WizardBank),
}

impl Model {
    pub fn type_tag(&self) -> &'static str {
        match self {
            Model::Cc4(_) => "cc4",
            Model::Fc(_) => "fc",
            Model::Pnn(_) => "pnn",
            Model::Wizard(_) => "wizard",
        }
    }
}

/// A model plus the optional thermometer encoder its inputs pass through.
#[derive(Clone, Debug, PartialEq)]
pub struct SavedModel {
    pub model: Model,
    pub encoder: Option<EncoderSpec>,
}

impl SavedModel {
    /// Predicts output values for one row of raw numeric features:
    /// regression values for FC and encoder-backed CC4, 0/1 bits for raw
    /// CC4, and the class label for PNN/WiSARD.
    pub fn predict_row(&self, features: &[f64]) -> Result<Vec<f64>> {
        match &self.model {
            Model::Fc(model) => Ok(model.predict(features)?),
            Model::Pnn(model) => Ok(vec![model.classify(features)? as f64]),
            Model::Cc4(model) => {
                let x = self.to_pattern(features)?;
                let out = model.predict(&x)?;
                match &self.encoder {
                    None => Ok(out.iter().map(f64::from).collect()),
                    Some(spec) => decode_chunks(&out, spec),
                }
            }
            Model::Wizard(bank) => {
                let x = self.to_pattern(features)?;
                Ok(vec![bank.classify(&x)? as f64])
            }
        }
    }

    /// Names for the prediction columns emitted by [`Self::predict_row`].
    pub fn output_names(&self) -> Vec<String> {
        match &self.model {
            Model::Fc(model) => (1..=model.output_dim()).map(|i| format!("y{i}")).collect(),
            Model::Pnn(_) | Model::Wizard(_) => vec!["class".to_string()],
            Model::Cc4(model) => match &self.encoder {
                None => (1..=model.output_len()).map(|i| format!("y{i}")).collect(),
                Some(spec) => (1..=model.output_len() / spec.levels())
                    .map(|i| format!("y{i}"))
                    .collect(),
            },
        }
    }

    /// Converts raw features to the model's bit pattern: thermometer
    /// encoding when an encoder is attached, otherwise strict 0/1 bits.
    pub fn to_pattern(&self, features: &[f64]) -> Result<BinaryVector> {
        pattern_from_values(&self.encoder, features)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let json = ModelFileJson::from_saved(self)?;
        let mut text = serde_json::to_string_pretty(&json)?;
        text.push('\n');
        fs::write(path, text)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let json: ModelFileJson = serde_json::from_str(&text)
            .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
        json.into_saved()
            .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))
    }
}

/// Thermometer-encodes when a spec is given, otherwise parses strict 0/1
/// bits.
pub fn pattern_from_values(encoder: &Option<EncoderSpec>, values: &[f64]) -> Result<BinaryVector> {
    match encoder {
        Some(spec) => Ok(encode_real_vector(values, spec)?),
        None => bits_from_values(values),
    }
}

/// Strict bit parsing for models trained on raw binary data.
pub fn bits_from_values(values: &[f64]) -> Result<BinaryVector> {
    for &v in values {
        if v != 0.0 && v != 1.0 {
            return Err(CliError::parse(format!(
                "expected binary 0/1 features, got {v} (use --levels to thermometer-encode reals)"
            )));
        }
    }
    Ok(BinaryVector::from_fn(values.len(), |i| values[i] == 1.0))
}

fn decode_chunks(bits: &BinaryVector, spec: &EncoderSpec) -> Result<Vec<f64>> {
    let levels = spec.levels();
    if !bits.len().is_multiple_of(levels) {
        return Err(CliError::parse(format!(
            "output length {} is not a multiple of encoder levels {levels}",
            bits.len()
        )));
    }
    (0..bits.len() / levels)
        .map(|chunk| {
            let code = BinaryVector::from_fn(levels, |i| bits.get(chunk * levels + i));
            Ok(thermometer_decode(&code, spec)?)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// JSON schema
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct ModelFileJson {
    format_version: u32,
    model_type: String,
    encoder: Option<EncoderJson>,
    payload: serde_json::Value,
}

#[derive(Serialize, Deserialize)]
struct EncoderJson {
    lo: f64,
    hi: f64,
    levels: usize,
}

#[derive(Serialize, Deserialize)]
struct Cc4Payload {
    n: usize,
    m: usize,
    radius: usize,
    /// How the hidden layer is stored; currently always "patterns".
    representation: String,
    patterns: Vec<String>,
    outputs: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct FcPayload {
    metric: String,
    k: usize,
    membership: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sigma: Option<f64>,
    weights: Vec<Vec<f64>>,
    outputs: Vec<Vec<f64>>,
    /// `null` encodes an infinite radius.
    radii: Vec<Option<f64>>,
}

#[derive(Serialize, Deserialize)]
struct PnnPayload {
    sigma: f64,
    classes: Vec<PnnClassJson>,
}

#[derive(Serialize, Deserialize)]
struct PnnClassJson {
    label: usize,
    prior: f64,
    loss: f64,
    samples: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct WizardPayload {
    num_nodes: usize,
    address_bits: usize,
    labels: Vec<usize>,
    mapping: Vec<usize>,
    /// memory[class][node] = hex-encoded bitset of the node's 2^N cells.
    memory: Vec<Vec<String>>,
}

impl ModelFileJson {
    fn from_saved(saved: &SavedModel) -> Result<Self> {
        let payload = match &saved.model {
            Model::Cc4(model) => serde_json::to_value(Cc4Payload {
                n: model.input_len(),
                m: model.output_len(),
                radius: model.radius(),
                representation: "patterns".to_string(),
                patterns: model
                    .hidden_units()
                    .iter()
                    .map(|u| u.pattern().to_bit_string())
                    .collect(),
                outputs: (0..model.hidden_units().len())
                    .map(|i| model.output_row(i).to_bit_string())
                    .collect(),
            })?,
            Model::Fc(model) => {
                let (membership, sigma) = match model.membership() {
                    Membership::InverseDistance => ("inverse", None),
                    Membership::Gaussian { sigma } => ("gaussian", Some(sigma)),
                };
                serde_json::to_value(FcPayload {
                    metric: model.metric().tag().to_string(),
                    k: model.k(),
                    membership: membership.to_string(),
                    sigma,
                    weights: model.weights().to_vec(),
                    outputs: model.outputs().to_vec(),
                    radii: model
                        .radii()
                        .iter()
                        .map(|&r| if r.is_infinite() { None } else { Some(r) })
                        .collect(),
                })?
            }
            Model::Pnn(model) => serde_json::to_value(PnnPayload {
                sigma: model.sigma(),
                classes: model
                    .classes()
                    .iter()
                    .map(|c| PnnClassJson {
                        label: c.label(),
                        prior: c.prior(),
                        loss: c.loss(),
                        samples: c.samples().to_vec(),
                    })
                    .collect(),
            })?,
            Model::Wizard(bank) => {
                let first = bank
                    .discriminators
                    .first()
                    .ok_or_else(|| CliError::usage("empty discriminator bank"))?;
                serde_json::to_value(WizardPayload {
                    num_nodes: first.num_nodes(),
                    address_bits: first.address_bits(),
                    labels: bank.labels.clone(),
                    mapping: first.mapping().to_vec(),
                    memory: bank
                        .discriminators
                        .iter()
                        .map(|d| d.memory().iter().map(bits_to_hex).collect())
                        .collect(),
                })?
            }
        };
        Ok(ModelFileJson {
            format_version: FORMAT_VERSION,
            model_type: saved.model.type_tag().to_string(),
            encoder: saved.encoder.as_ref().map(|spec| EncoderJson {
                lo: spec.lo(),
                hi: spec.hi(),
                levels: spec.levels(),
            }),
            payload,
        })
    }

    fn into_saved(self) -> Result<SavedModel> {
        if self.format_version != FORMAT_VERSION {
            return Err(CliError::parse(format!(
                "unsupported format_version {}",
                self.format_version
            )));
        }
        let encoder = self
            .encoder
            .map(|e| EncoderSpec::new(e.lo, e.hi, e.levels))
            .transpose()?;

        let model = match self.model_type.as_str() {
            "cc4" => {
                let p: Cc4Payload = serde_json::from_value(self.payload)?;
                if p.representation != "patterns" {
                    return Err(CliError::parse(format!(
                        "unknown cc4 representation {:?}",
                        p.representation
                    )));
                }
                if p.patterns.len() != p.outputs.len() || p.patterns.is_empty() {
                    return Err(CliError::parse("cc4 patterns/outputs mismatch".to_string()));
                }
                let samples: Vec<(BinaryVector, BinaryVector)> = p
                    .patterns
                    .iter()
                    .zip(&p.outputs)
                    .map(|(input, output)| {
                        Ok((
                            BinaryVector::from_bit_str(input)?,
                            BinaryVector::from_bit_str(output)?,
                        ))
                    })
                    .collect::<Result<_>>()?;
                let model = Cc4Model::train(&samples, p.radius)?;
                if model.input_len() != p.n || model.output_len() != p.m {
                    return Err(CliError::parse("cc4 dimensions disagree with patterns".to_string()));
                }
                Model::Cc4(model)
            }
            "fc" => {
                let p: FcPayload = serde_json::from_value(self.payload)?;
                let metric = Metric::from_str(&p.metric)?;
                let membership = match p.membership.as_str() {
                    "inverse" => Membership::InverseDistance,
                    "gaussian" => Membership::Gaussian {
                        sigma: p.sigma.ok_or_else(|| {
                            CliError::parse("gaussian membership requires sigma".to_string())
                        })?,
                    },
                    other => {
                        return Err(CliError::parse(format!(
                            "unknown membership {other:?}"
                        )))
                    }
                };
                let radii = p
                    .radii
                    .iter()
                    .map(|r| r.unwrap_or(f64::INFINITY))
                    .collect();
                Model::Fc(FcModel::from_parts(
                    p.weights, p.outputs, radii, metric, p.k, membership,
                )?)
            }
            "pnn" => {
                let p: PnnPayload = serde_json::from_value(self.payload)?;
                let classes = p
                    .classes
                    .into_iter()
                    .map(|c| Ok(PnnClass::with_prior_loss(c.label, c.samples, c.prior, c.loss)?))
                    .collect::<Result<Vec<_>>>()?;
                Model::Pnn(PnnModel::new(classes, p.sigma)?)
            }
            "wizard" => {
                let p: WizardPayload = serde_json::from_value(self.payload)?;
                if p.labels.len() != p.memory.len() || p.labels.is_empty() {
                    return Err(CliError::parse("wizard labels/memory mismatch".to_string()));
                }
                let cells = 1usize
                    .checked_shl(p.address_bits as u32)
                    .ok_or_else(|| CliError::parse("address width too large".to_string()))?;
                let discriminators = p
                    .memory
                    .iter()
                    .map(|nodes| {
                        let memory = nodes
                            .iter()
                            .map(|hex| hex_to_bits(hex, cells))
                            .collect::<Result<Vec<_>>>()?;
                        Ok(WizardDiscriminator::from_parts(
                            p.num_nodes,
                            p.address_bits,
                            p.mapping.clone(),
                            memory,
                        )?)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Model::Wizard(WizardBank {
                    discriminators,
                    labels: p.labels,
                })
            }
            other => {
                return Err(CliError::parse(format!("unknown model_type {other:?}")))
            }
        };
        Ok(SavedModel { model, encoder })
    }
}

/// Bitset to lowercase hex, byte 0 first, bit 0 in the low bit of its byte.
fn bits_to_hex(bits: &BinaryVector) -> String {
    let mut bytes = vec![0u8; bits.len().div_ceil(8)];
    for i in 0..bits.len() {
        if bits.get(i) {
            bytes[i / 8] |= 1 << (i % 8);
        }
    }
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

fn hex_to_bits(hex: &str, len: usize) -> Result<BinaryVector> {
    if hex.len() != len.div_ceil(8) * 2 {
        return Err(CliError::parse(format!(
            "bitset hex has wrong length (expected {} chars, got {})",
            len.div_ceil(8) * 2,
            hex.len()
        )));
    }
    let mut bytes = Vec::with_capacity(hex.len() / 2);
    for i in (0..hex.len()).step_by(2) {
        let byte = u8::from_str_radix(&hex[i..i + 2], 16)
            .map_err(|_| CliError::parse(format!("bad hex in bitset: {hex:?}")))?;
        bytes.push(byte);
    }
    Ok(BinaryVector::from_fn(len, |i| bytes[i / 8] >> (i % 8) & 1 == 1))
}
