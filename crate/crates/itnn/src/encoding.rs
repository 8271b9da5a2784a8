//! Binary representations and real-vector preparation.
//!
//! CC4 and WiSARD consume fixed-length bit strings; real-valued data is
//! brought into that alphabet by thermometer (unary) quantization: value
//! level `m` becomes `m` leading ones. The payoff is the Hamming law —
//! the Hamming distance between two codes equals the difference of their
//! levels — so a Hamming radius over codes is a numeric radius over values.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A fixed-length bit string, packed into `u64` words.
///
/// The length is fixed at construction; every element is exactly 0 or 1.
/// Unused bits of the last word are kept zero so that word-level kernels
/// (XOR/AND + popcount) need no masking.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BinaryVector {
    words: Vec<u64>,
    len: usize,
}

impl BinaryVector {
    /// An all-zero vector of the given length.
    pub fn zeros(len: usize) -> Self {
        BinaryVector {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    /// Builds a vector by evaluating `f` at every position.
    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            if f(i) {
                v.words[i / 64] |= 1u64 << (i % 64);
            }
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_fn(bits.len(), |i| bits[i])
    }

    /// Parses a string of `'0'`/`'1'` characters.
    pub fn from_bit_str(s: &str) -> Result<Self> {
        let mut v = Self::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                other => {
                    return Err(Error::invalid(alloc::format!(
                        "bit string may contain only '0' and '1', found {other:?}"
                    )))
                }
            }
        }
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Bit at position `i`. Panics if `i >= len`.
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range (len {})", self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Sets bit `i`. Panics if `i >= len`.
    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "bit index {i} out of range (len {})", self.len);
        let mask = 1u64 << (i % 64);
        if bit {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// The packed words, least-significant-bit first within each word.
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn to_bit_string(&self) -> String {
        self.iter().map(|b| if b { '1' } else { '0' }).collect()
    }
}

impl core::fmt::Debug for BinaryVector {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "BinaryVector({})", self.to_bit_string())
    }
}

impl core::fmt::Display for BinaryVector {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

/// Value range and level count governing thermometer quantization.
///
/// `levels == L` yields codes of length `L` with `L + 1` distinct levels
/// (0 through L inclusive), which keeps the Hamming law exact.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EncoderSpec {
    lo: f64,
    hi: f64,
    levels: usize,
}

impl EncoderSpec {
    pub fn new(lo: f64, hi: f64, levels: usize) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(Error::invalid(alloc::format!(
                "encoder range must satisfy lo < hi (finite), got [{lo}, {hi}]"
            )));
        }
        if levels == 0 {
            return Err(Error::invalid("encoder must have at least one level"));
        }
        Ok(EncoderSpec { lo, hi, levels })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn levels(&self) -> usize {
        self.levels
    }
}

/// Quantizes `v` to a level in `0..=L`, round half up.
///
/// Out-of-range values clamp to the spec's range (saturating, like a
/// hardware comparator bank) rather than erroring.
pub fn quantize(v: f64, spec: &EncoderSpec) -> usize {
    let clamped = v.clamp(spec.lo, spec.hi);
    let scaled = (clamped - spec.lo) / (spec.hi - spec.lo) * spec.levels as f64;
    (libm::floor(scaled + 0.5) as usize).min(spec.levels)
}

/// Unary code of length `levels`: the first `level` bits are 1.
pub fn thermometer_encode(level: usize, levels: usize) -> Result<BinaryVector> {
    if level > levels {
        return Err(Error::invalid(alloc::format!(
            "level {level} exceeds code length {levels}"
        )));
    }
    Ok(BinaryVector::from_fn(levels, |i| i < level))
}

/// Maps a code back to a real value by counting ones.
///
/// Non-thermometer-form codes (as CC4 output layers can emit) are accepted;
/// the count of ones is the recovered level.
pub fn thermometer_decode(code: &BinaryVector, spec: &EncoderSpec) -> Result<f64> {
    if code.len() != spec.levels {
        return Err(Error::LengthMismatch {
            expected: spec.levels,
            actual: code.len(),
        });
    }
    let level = code.count_ones() as f64;
    Ok(spec.lo + level / spec.levels as f64 * (spec.hi - spec.lo))
}

/// Concatenated per-component thermometer codes; total length `vals.len() * L`.
pub fn encode_real_vector(vals: &[f64], spec: &EncoderSpec) -> Result<BinaryVector> {
    if vals.is_empty() {
        return Err(Error::invalid("cannot encode an empty vector"));
    }
    let levels = spec.levels;
    let mut out = BinaryVector::zeros(vals.len() * levels);
    for (c, &v) in vals.iter().enumerate() {
        let level = quantize(v, spec);
        for i in 0..level {
            out.set(c * levels + i, true);
        }
    }
    Ok(out)
}

/// Scales `x` to unit Euclidean length.
pub fn normalize_unit(x: &[f64]) -> Result<Vec<f64>> {
    let norm = libm::sqrt(x.iter().map(|v| v * v).sum::<f64>());
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::invalid("cannot normalize a zero vector"));
    }
    Ok(x.iter().map(|v| v / norm).collect())
}
