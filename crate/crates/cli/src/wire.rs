//! JSON report shapes: a fixed envelope `{command, params, result, elapsed_ms}`
//! around per-subcommand parameter echoes and results. Field order is part of
//! the format — identical inputs serialize to identical bytes except for
//! `elapsed_ms`, which always comes last.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use eszeta_core::analytic::complex_json;
use eszeta_core::{ComplexValue, Decomposition, FZeroFamily, RangeReport};

/// Top-level report wrapper shared by every subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope<P, R> {
    pub command: String,
    pub params: P,
    pub result: R,
    pub elapsed_ms: f64,
}

fn ser_big<S: Serializer>(v: &BigUint, ser: S) -> Result<S::Ok, S::Error> {
    match v.to_u64() {
        Some(small) => ser.serialize_u64(small),
        None => ser.serialize_str(&v.to_string()),
    }
}

fn de_big<'de, D: Deserializer<'de>>(de: D) -> Result<BigUint, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum NumberOrString {
        Number(u64),
        String(String),
    }
    match NumberOrString::deserialize(de)? {
        NumberOrString::Number(v) => Ok(BigUint::from(v)),
        NumberOrString::String(s) => s
            .parse::<BigUint>()
            .map_err(|e| D::Error::custom(format!("invalid big integer {s:?}: {e}"))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveParams {
    pub k: u64,
    pub n: u64,
    pub x_max: u64,
    pub t_span: u64,
}

/// `solve` result; the field order `x, y, z, t, m` is the documented wire
/// format. Big values serialize as JSON numbers while they fit `u64` and as
/// decimal strings beyond.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub x: u64,
    #[serde(serialize_with = "ser_big", deserialize_with = "de_big")]
    pub y: BigUint,
    #[serde(serialize_with = "ser_big", deserialize_with = "de_big")]
    pub z: BigUint,
    pub t: u64,
    #[serde(serialize_with = "ser_big", deserialize_with = "de_big")]
    pub m: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangeParams {
    pub k: u64,
    pub n_start: u64,
    pub n_end: u64,
    pub x_max: u64,
    pub t_span: u64,
}

/// [`RangeReport`] minus its wall-clock field, which would break the
/// byte-identical-output guarantee (the envelope carries timing instead).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeResult {
    pub k: u64,
    pub n_start: u64,
    pub n_end: u64,
    pub solved_count: u64,
    pub unsolved: Vec<u64>,
    pub witnesses: Vec<Decomposition>,
}

impl From<RangeReport> for RangeResult {
    fn from(r: RangeReport) -> Self {
        RangeResult {
            k: r.k,
            n_start: r.n_start,
            n_end: r.n_end,
            solved_count: r.solved_count,
            unsolved: r.unsolved,
            witnesses: r.witnesses,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityParams {
    pub k: u64,
    #[serde(rename = "N")]
    pub n_max: u64,
    pub x_max: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZetaParams {
    #[serde(with = "complex_json")]
    pub s: ComplexValue,
    pub em_terms: u32,
    pub em_bernoulli: u32,
    pub tol: f64,
}

/// Single-value result (`zeta`, `gk-eval`); complex numbers appear as
/// `{"re": …, "im": …}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueResult {
    #[serde(with = "complex_json")]
    pub value: ComplexValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GkParams {
    pub k: u32,
    #[serde(with = "complex_json")]
    pub s: ComplexValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GkSumParams {
    pub k: u32,
    #[serde(with = "complex_json")]
    pub s: ComplexValue,
    #[serde(rename = "N")]
    pub n_terms: u64,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualResult {
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidueParams {
    pub k: u32,
    pub eps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidueResult {
    pub estimate: f64,
    pub expected: f64,
    pub abs_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanParams {
    pub k: u32,
    pub t_min: f64,
    pub t_max: f64,
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FZerosParams {
    pub k: u32,
    pub x: f64,
    pub t: f64,
    pub n: u64,
    pub samples: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FZerosResult {
    pub family: FZeroFamily,
    /// Largest |F(n^s)| over the sampled branch points of both roots.
    pub max_residual: f64,
}
