//! Exact integer kernel: the quadratic form `F`, its admissible domain,
//! perfect-square witnesses, and decomposition construction/verification.
//!
//! Everything here is arbitrary-precision (`num-bigint`); there is no silent
//! overflow anywhere. `t²(kx−n)²` exceeds 64 bits very quickly, so the inputs
//! are plain `u64` but every derived quantity is a big integer.

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Input tuple `(k, n, x, t)` for the quadratic form
/// `F_{x,t}^{(k)}(n) = t²(kx−n)² − 2nxt`.
///
/// Invariants: all fields strictly positive and `k ≥ 2`. Use [`ProblemParams::new`]
/// to construct with validation; the fields stay public for ergonomic
/// destructuring once constructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProblemParams {
    /// Numerator of the target fraction `k/n` (`k ≥ 2`).
    pub k: u64,
    /// Denominator of the target fraction (`n ≥ 1`).
    pub n: u64,
    /// First unit-fraction denominator candidate (`x ≥ 1`).
    pub x: u64,
    /// Scale parameter of the form (`t ≥ 1`).
    pub t: u64,
}

impl ProblemParams {
    /// Validates `k ≥ 2` and `n, x, t ≥ 1`.
    pub fn new(k: u64, n: u64, x: u64, t: u64) -> Result<Self, InvalidParams> {
        if k < 2 {
            return Err(InvalidParams::KTooSmall { k });
        }
        if n == 0 || x == 0 || t == 0 {
            return Err(InvalidParams::ZeroField);
        }
        Ok(Self { k, n, x, t })
    }
}

/// Constructor errors for [`ProblemParams`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvalidParams {
    #[error("k must be at least 2, got {k}")]
    KTooSmall { k: u64 },
    #[error("n, x and t must all be strictly positive")]
    ZeroField,
}

/// Lower cutoff `N1 ≥ 2` of the admissible domain in `n`.
///
/// The domain predicate itself lives in [`is_admissible`]: a point is
/// admissible when `n ≥ N1`, `n < kx`, and `t(kx−n)² ≥ 2nx`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainSpec {
    /// Smallest denominator considered (`≥ 2`).
    pub n1: u64,
}

impl DomainSpec {
    /// Validates `n1 ≥ 2`.
    pub fn new(n1: u64) -> Result<Self, InvalidDomain> {
        if n1 < 2 {
            return Err(InvalidDomain { n1 });
        }
        Ok(Self { n1 })
    }
}

impl Default for DomainSpec {
    /// `N1 = 2`, the full conjectural range.
    fn default() -> Self {
        Self { n1: 2 }
    }
}

/// Constructor error for [`DomainSpec`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("domain cutoff must be at least 2, got {n1}")]
pub struct InvalidDomain {
    pub n1: u64,
}

/// An exact witness of `k/n = 1/x + 1/y + 1/z`.
///
/// Invariants (all checked by [`decompose`] before return):
/// `y = t(kx−n) − m`, `z = t(kx−n) + m`, hence `y ≤ z`,
/// `y + z = 2t(kx−n)`, `y·z = 2nxt` (Viète), and the rational identity
/// `k·x·y·z = n·(yz + xz + xy)` holds exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    /// The `(k, n, x, t)` the witness was built from.
    pub params: ProblemParams,
    /// Square-root witness: `m² = F(n)`, `m ≥ 0`.
    pub m: BigUint,
    /// Second unit-fraction denominator, `y ≥ 1`.
    pub y: BigUint,
    /// Third unit-fraction denominator, `z ≥ y`.
    pub z: BigUint,
}

/// Evaluates `F_{x,t}^{(k)}(n) = t²(kx−n)² − 2nxt` exactly.
///
/// The result may be negative outside the admissible domain.
pub fn eval_f(p: &ProblemParams) -> BigInt {
    let k = BigInt::from(p.k);
    let n = BigInt::from(p.n);
    let x = BigInt::from(p.x);
    let t = BigInt::from(p.t);
    let d = &k * &x - &n;
    &t * &t * &d * &d - 2u32 * &n * &x * &t
}

/// Admissibility test: `n ≥ N1`, `n < kx`, and `t(kx−n)² ≥ 2nx`.
///
/// The last condition is the cross-multiplied form of `t ≥ 2nx/(kx−n)²`,
/// avoiding any rational division. On the admissible set, `F` is
/// non-negative and strictly decreasing in `n`.
pub fn is_admissible(p: &ProblemParams, d: &DomainSpec) -> bool {
    if p.n < d.n1 {
        return false;
    }
    // n < kx, computed in u128 so k*x cannot overflow.
    let kx = u128::from(p.k) * u128::from(p.x);
    if u128::from(p.n) >= kx {
        return false;
    }
    let gap = BigUint::from(kx - u128::from(p.n));
    let lhs = BigUint::from(p.t) * &gap * &gap;
    let rhs = 2u32 * BigUint::from(p.n) * BigUint::from(p.x);
    lhs >= rhs
}

/// Returns `m` with `m² = v` when `v` is a perfect square (including 0);
/// `None` otherwise, in particular for all negative `v`.
pub fn perfect_square_witness(v: &BigInt) -> Option<BigUint> {
    if v.is_negative() {
        return None;
    }
    let u = v.magnitude();
    let r = u.sqrt();
    if &(&r * &r) == u {
        Some(r)
    } else {
        None
    }
}

/// Exact rational equality test `k/n = 1/x + 1/y + 1/z`, cross-multiplied to
/// `k·x·y·z = n·(yz + xz + xy)`.
///
/// This is the single source of truth for witness validity; every search and
/// construction path funnels through it.
pub fn verify_decomposition(k: u64, n: u64, x: u64, y: &BigUint, z: &BigUint) -> bool {
    if n == 0 || x == 0 || y.is_zero() || z.is_zero() {
        return false;
    }
    let xb = BigUint::from(x);
    let lhs = BigUint::from(k) * &xb * y * z;
    let rhs = BigUint::from(n) * (y * z + &xb * z + &xb * y);
    lhs == rhs
}

/// Attempts the full construction: admissibility, `F = m²`, `y ≥ 1`, then the
/// decomposition `y = t(kx−n) − m`, `z = t(kx−n) + m`, re-verified through
/// [`verify_decomposition`] before return. `None` covers every failure mode.
pub fn decompose(p: &ProblemParams, d: &DomainSpec) -> Option<Decomposition> {
    if !is_admissible(p, d) {
        return None;
    }
    let f = eval_f(p);
    let m = perfect_square_witness(&f)?;
    // T = t(kx−n); admissibility guarantees kx > n.
    let gap = BigUint::from(u128::from(p.k) * u128::from(p.x) - u128::from(p.n));
    let big_t = BigUint::from(p.t) * gap;
    // y ≥ 1 requires m < t(kx−n); m = t(kx−n) would force y = 0.
    if m >= big_t {
        return None;
    }
    let y = &big_t - &m;
    let z = &big_t + &m;
    if !verify_decomposition(p.k, p.n, p.x, &y, &z) {
        return None;
    }
    Some(Decomposition {
        params: *p,
        m,
        y,
        z,
    })
}

// --- serde for Decomposition -------------------------------------------------
//
// The big-integer fields serialize as plain JSON numbers while they fit in
// u64 (every desk-scale witness does) and as decimal strings beyond that, so
// reports stay both lossless and readable. Deserialization accepts either.

fn serialize_biguint<S: Serializer>(v: &BigUint, ser: S) -> Result<S::Ok, S::Error> {
    match v.to_u64() {
        Some(small) => ser.serialize_u64(small),
        None => ser.serialize_str(&v.to_string()),
    }
}

fn deserialize_biguint<'de, D: Deserializer<'de>>(de: D) -> Result<BigUint, D::Error> {
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

impl Serialize for Decomposition {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = ser.serialize_struct("Decomposition", 4)?;
        st.serialize_field("params", &self.params)?;
        st.serialize_field("m", &WireUint(&self.m))?;
        st.serialize_field("y", &WireUint(&self.y))?;
        st.serialize_field("z", &WireUint(&self.z))?;
        st.end()
    }
}

struct WireUint<'a>(&'a BigUint);

impl Serialize for WireUint<'_> {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        serialize_biguint(self.0, ser)
    }
}

impl<'de> Deserialize<'de> for Decomposition {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            params: ProblemParams,
            #[serde(deserialize_with = "deserialize_biguint")]
            m: BigUint,
            #[serde(deserialize_with = "deserialize_biguint")]
            y: BigUint,
            #[serde(deserialize_with = "deserialize_biguint")]
            z: BigUint,
        }
        let raw = Raw::deserialize(de)?;
        Ok(Decomposition {
            params: raw.params,
            m: raw.m,
            y: raw.y,
            z: raw.z,
        })
    }
}
