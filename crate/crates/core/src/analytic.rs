//! Complex-arithmetic services: `ζ(s)` with analytic continuation, `Γ(s)`,
//! log-gamma, the continued `G_k(s) = k·ζ(s)`, functional-equation residuals,
//! and a pole/residue probe.
//!
//! Everything is binary64. The zeta evaluator is Euler–Maclaurin with exact
//! Bernoulli constants, tuned for the critical strip with `|Im(s)| ≤ 60`;
//! arbitrary precision and Riemann–Siegel asymptotics are out of scope.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bernoulli::b2;

/// Complex scalar used throughout the analytic side (`re`/`im` in binary64).
pub type ComplexValue = Complex64;

/// Serde adapters rendering a [`ComplexValue`] as a `{"re": …, "im": …}`
/// object — the wire form of every complex quantity in JSON reports.
pub mod complex_json {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::ComplexValue;

    #[derive(Serialize, Deserialize)]
    struct Parts {
        re: f64,
        im: f64,
    }

    pub fn serialize<S: Serializer>(v: &ComplexValue, ser: S) -> Result<S::Ok, S::Error> {
        Parts { re: v.re, im: v.im }.serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<ComplexValue, D::Error> {
        let p = Parts::deserialize(de)?;
        Ok(ComplexValue::new(p.re, p.im))
    }

    /// The same wire form for a pair, rendered as a two-element array.
    pub mod pair {
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        use super::{ComplexValue, Parts};

        pub fn serialize<S: Serializer>(
            v: &(ComplexValue, ComplexValue),
            ser: S,
        ) -> Result<S::Ok, S::Error> {
            let parts = (
                Parts { re: v.0.re, im: v.0.im },
                Parts { re: v.1.re, im: v.1.im },
            );
            parts.serialize(ser)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            de: D,
        ) -> Result<(ComplexValue, ComplexValue), D::Error> {
            let (a, b) = <(Parts, Parts)>::deserialize(de)?;
            Ok((ComplexValue::new(a.re, a.im), ComplexValue::new(b.re, b.im)))
        }
    }
}

/// Detection radius around excluded points (poles, non-positive integers),
/// matched to binary64 conditioning.
pub const POLE_RADIUS: f64 = 1e-12;

/// Distance below which a removable pole–zero pairing in the completed
/// functional-equation form is evaluated by its limit instead of naively.
const REMOVABLE_RADIUS: f64 = 1e-8;

/// Tuning for the Euler–Maclaurin zeta evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecisionConfig {
    /// Direct-sum cutoff `N` (`≥ 10`).
    pub em_terms: u32,
    /// Number of Bernoulli correction terms (`2..=30`).
    pub em_bernoulli: u32,
    /// Target absolute accuracy (used by callers for tail decisions).
    pub tol: f64,
}

impl PrecisionConfig {
    /// Validates `em_terms ≥ 10`, `em_bernoulli ∈ [2, 30]`, `tol > 0`.
    pub fn new(em_terms: u32, em_bernoulli: u32, tol: f64) -> Result<Self, AnalyticError> {
        if em_terms < 10 {
            return Err(AnalyticError::InvalidConfig {
                what: format!("em_terms must be at least 10, got {em_terms}"),
            });
        }
        if !(2..=30).contains(&em_bernoulli) {
            return Err(AnalyticError::InvalidConfig {
                what: format!("em_bernoulli must lie in [2, 30], got {em_bernoulli}"),
            });
        }
        // Negated comparison so NaN fails validation too.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(tol > 0.0) {
            return Err(AnalyticError::InvalidConfig {
                what: format!("tol must be positive, got {tol}"),
            });
        }
        Ok(Self {
            em_terms,
            em_bernoulli,
            tol,
        })
    }
}

impl Default for PrecisionConfig {
    /// `em_terms = 64`, `em_bernoulli = 14`, `tol = 10⁻¹²` — accurate to
    /// roughly `10⁻¹²` near the critical strip for `|Im(s)| ≤ 60`.
    fn default() -> Self {
        Self {
            em_terms: 64,
            em_bernoulli: 14,
            tol: 1e-12,
        }
    }
}

/// Errors from the analytic kernel.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalyticError {
    /// The evaluation point is within [`POLE_RADIUS`] of the simple pole at
    /// `s = 1`; `residue` is the residue of the requested function there.
    #[error("simple pole at s = 1 (residue {residue})")]
    PoleAtOne { residue: f64 },
    /// Gamma pole: the argument is within [`POLE_RADIUS`] of `0, −1, −2, …`.
    #[error("gamma pole at non-positive integer {n}")]
    PoleAtNonPositiveInteger { n: i64 },
    /// A factor of a composite expression is singular at the requested point.
    #[error("pole encountered in {factor}")]
    PoleEncountered { factor: String },
    /// The requested point lies outside the region an operation supports.
    #[error("outside supported region: {what}")]
    OutsideSupportedRegion { what: String },
    /// Rejected [`PrecisionConfig`].
    #[error("invalid precision config: {what}")]
    InvalidConfig { what: String },
}

/// `base^e` for positive real `base`, as `exp(e·ln base)`, with an exact
/// integer-exponent fast path (so e.g. `64^2` carries no rounding at all).
fn powc(base: f64, e: ComplexValue) -> ComplexValue {
    debug_assert!(base > 0.0);
    if e.im == 0.0 && e.re.fract() == 0.0 && e.re.abs() <= 256.0 {
        return ComplexValue::new(base.powi(e.re as i32), 0.0);
    }
    (e * base.ln()).exp()
}

// --- Riemann zeta ---------------------------------------------------------------

/// Euler–Maclaurin evaluation, used on `Re(s) > −4` (and, via reflection,
/// fed arguments deep in the convergent region):
///
/// ```text
/// ζ(s) ≈ Σ_{n<N} n^(−s) + N^(1−s)/(s−1) + N^(−s)/2
///        + Σ_{j=1}^{J} B_{2j}/(2j)! · s(s+1)⋯(s+2j−2) · N^(−s−2j+1)
/// ```
///
/// The correction terms carry the rising factorial `(s)_{2j−1}`, which
/// vanishes identically at `s = 0, −1, −2, …`, so the classical continuation
/// values at those points come out essentially exact.
fn zeta_euler_maclaurin(s: ComplexValue, cfg: &PrecisionConfig) -> ComplexValue {
    // Left of Re(s) = 0 the direct sum grows like N^(1−Re(s)) while the
    // continued value stays O(1): a large cutoff feeds catastrophic
    // cancellation instead of accuracy. The remainder still needs
    // N ≳ |Im(s)|, so shrink the cutoff only as far as the height allows;
    // the configured value applies where the series converges.
    let n = if s.re < 0.0 {
        cfg.em_terms.min((s.im.abs().ceil() as u32).max(10))
    } else {
        cfg.em_terms
    };
    // Direct part Σ_{j=1}^{N−1} j^(−s), Neumaier-compensated per component.
    let mut sum = ComplexValue::new(1.0, 0.0); // j = 1 term
    let (mut c_re, mut c_im) = (0.0f64, 0.0f64);
    for j in 2..n {
        let term = powc(j as f64, -s);
        let t_re = sum.re + term.re;
        c_re += if sum.re.abs() >= term.re.abs() {
            (sum.re - t_re) + term.re
        } else {
            (term.re - t_re) + sum.re
        };
        sum.re = t_re;
        let t_im = sum.im + term.im;
        c_im += if sum.im.abs() >= term.im.abs() {
            (sum.im - t_im) + term.im
        } else {
            (term.im - t_im) + sum.im
        };
        sum.im = t_im;
    }
    sum.re += c_re;
    sum.im += c_im;

    let nf = n as f64;
    let n_pow_ms = powc(nf, -s); // N^(−s)
    let integral = n_pow_ms * nf / (s - 1.0); // N^(1−s)/(s−1)
    let half = n_pow_ms * 0.5;

    let mut corrections = ComplexValue::new(0.0, 0.0);
    let mut poch = s; // (s)_1
    let mut factorial = 2.0f64; // (2j)! for j = 1
    let mut n_power = 1.0 / nf; // N^(1−2j), j = 1
    for j in 1..=cfg.em_bernoulli as usize {
        if j > 1 {
            let base = 2.0 * (j as f64) - 2.0;
            poch *= (s + (base - 1.0)) * (s + base); // extend to (s)_{2j−1}
            factorial *= (2.0 * j as f64 - 1.0) * (2.0 * j as f64);
            n_power /= nf * nf;
        }
        corrections += poch * (b2(j) / factorial) * n_pow_ms * n_power;
    }
    sum + integral + half + corrections
}

/// Euler–Maclaurin summation switches to the reflection formula at this
/// real part. Inside `Re(s) > −4` the direct evaluation stays independent
/// of the functional equation — so residual checks there compare two
/// genuinely independent computations — while its cancellation error
/// (`~N^(−Re(s))` relative) is still far below 10⁻¹⁰. Any deeper, the
/// reflection formula is strictly more accurate.
const REFLECTION_THRESHOLD: f64 = -4.0;

/// The Riemann zeta function with analytic continuation.
///
/// For `Re(s) > −4`: Euler–Maclaurin summation as above. For deeper left
/// half-plane points: the reflection formula
/// `ζ(s) = 2^s π^(s−1) sin(πs/2) Γ(1−s) ζ(1−s)`, whose right-hand side then
/// only needs zeta far inside the convergent region (see
/// [`REFLECTION_THRESHOLD`] for why the line sits at −4).
///
/// # Errors
/// [`AnalyticError::PoleAtOne`] when `|s − 1| < 10⁻¹²`.
pub fn zeta(s: ComplexValue, cfg: &PrecisionConfig) -> Result<ComplexValue, AnalyticError> {
    if (s - 1.0).norm() < POLE_RADIUS {
        return Err(AnalyticError::PoleAtOne { residue: 1.0 });
    }
    if s.re > REFLECTION_THRESHOLD {
        return Ok(zeta_euler_maclaurin(s, cfg));
    }
    // Reflection: Re(1−s) ≥ 5, deep in the convergent region.
    let reflected = zeta_euler_maclaurin(1.0 - s, cfg);
    let g = gamma(1.0 - s)?;
    let two_pow = powc(2.0, s);
    let pi_pow = powc(std::f64::consts::PI, s - 1.0);
    let sine = (s * (std::f64::consts::PI / 2.0)).sin();
    Ok(two_pow * pi_pow * sine * g * reflected)
}

// --- gamma ---------------------------------------------------------------------

// Lanczos-type rational approximation (Pugh's variant): fixed coefficients,
// relative error near 10⁻¹³ over the right half-plane region used here.
const GAMMA_R: f64 = 10.900511;
const GAMMA_DK: [f64; 11] = [
    2.48574089138753565546e-5,
    1.05142378581721974210,
    -3.45687097222016235469,
    4.51227709466894823700,
    -2.98285225323576655721,
    1.05639711577126713077,
    -1.95428773191645869583e-1,
    1.70970543404441224307e-2,
    -5.71926117404305781283e-4,
    4.63399473359905636708e-6,
    -2.71994908488607703910e-9,
];
const TWO_SQRT_E_OVER_PI: f64 = 1.8603827342052657173362492472666631120594218414085755;

/// Lanczos sum and prefactor for `Re(z) ≥ 0.5`.
fn gamma_right_half(z: ComplexValue) -> ComplexValue {
    let mut sum = ComplexValue::new(GAMMA_DK[0], 0.0);
    for (i, dk) in GAMMA_DK.iter().enumerate().skip(1) {
        sum += dk / (z + (i as f64 - 1.0));
    }
    // Γ(z) = sum · 2√(e/π) · ((z − 0.5 + r)/e)^(z − 0.5)
    let base = (z - 0.5 + GAMMA_R) / std::f64::consts::E;
    sum * TWO_SQRT_E_OVER_PI * (base.ln() * (z - 0.5)).exp()
}

/// The complex gamma function.
///
/// Direct rational approximation for `Re(s) ≥ 0.5`; reflection
/// `Γ(s) = π / (sin(πs)·Γ(1−s))` for the left half-plane. Relative error is
/// at or below `10⁻¹²` on `0.5 ≤ Re(s) ≤ 10`, `|Im(s)| ≤ 50`.
///
/// # Errors
/// [`AnalyticError::PoleAtNonPositiveInteger`] within `10⁻¹²` of `0, −1, −2, …`.
pub fn gamma(s: ComplexValue) -> Result<ComplexValue, AnalyticError> {
    if s.re < 0.5 {
        let nearest = s.re.round();
        if nearest <= 0.0 && (s - nearest).norm() < POLE_RADIUS {
            return Err(AnalyticError::PoleAtNonPositiveInteger { n: nearest as i64 });
        }
        let sine = (s * std::f64::consts::PI).sin();
        let right = gamma_right_half(1.0 - s);
        return Ok(std::f64::consts::PI / (sine * right));
    }
    Ok(gamma_right_half(s))
}

/// Log-gamma on the right half-plane `Re(z) > 0`, continuous in the standard
/// branch (the one with `lnΓ` real on the positive axis and `Im lnΓ`
/// accumulating continuously upward — *not* the principal log of `Γ`).
///
/// Computed by shifting `z` up until `Re ≥ 10` and applying the Stirling
/// series with exact Bernoulli constants:
///
/// ```text
/// lnΓ(w) = (w − ½)·Ln w − w + ½·ln 2π + Σ_j B_{2j} / ((2j−1)(2j)·w^(2j−1))
/// ```
///
/// On `Re(z) > 0` the recurrence `lnΓ(z) = lnΓ(z+1) − Ln z` with principal
/// logs never crosses a branch cut, so no winding correction is needed.
///
/// # Errors
/// [`AnalyticError::OutsideSupportedRegion`] for `Re(z) ≤ 0`.
pub fn ln_gamma(z: ComplexValue) -> Result<ComplexValue, AnalyticError> {
    if z.re <= 0.0 {
        return Err(AnalyticError::OutsideSupportedRegion {
            what: format!("log-gamma is implemented for Re(z) > 0, got Re = {}", z.re),
        });
    }
    let mut w = z;
    let mut log_shift = ComplexValue::new(0.0, 0.0);
    while w.re < 10.0 {
        log_shift += w.ln();
        w += 1.0;
    }
    let mut series = ComplexValue::new(0.0, 0.0);
    let w2 = w * w;
    let mut w_pow = w; // w^(2j−1)
    for j in 1..=10usize {
        if j > 1 {
            w_pow *= w2;
        }
        let denom = (2.0 * j as f64 - 1.0) * (2.0 * j as f64);
        series += b2(j) / (denom * w_pow);
    }
    let half_ln_two_pi = 0.5 * (2.0 * std::f64::consts::PI).ln();
    let stirling = (w - 0.5) * w.ln() - w + half_ln_two_pi + series;
    Ok(stirling - log_shift)
}

// --- G_k and the functional equation ---------------------------------------------

/// The continued `G_k(s) = k·ζ(s)` — exactly the scalar multiple, so the
/// identity `gk_continued(k, s) = k · zeta(s)` holds bit-for-bit.
///
/// # Errors
/// [`AnalyticError::PoleAtOne`] with `residue = k` at the simple pole `s = 1`.
pub fn gk_continued(
    k: u32,
    s: ComplexValue,
    cfg: &PrecisionConfig,
) -> Result<ComplexValue, AnalyticError> {
    match zeta(s, cfg) {
        Ok(v) => Ok(v * k as f64),
        Err(AnalyticError::PoleAtOne { .. }) => Err(AnalyticError::PoleAtOne {
            residue: k as f64,
        }),
        Err(e) => Err(e),
    }
}

/// `ζ′(−2m)` for `m ≥ 1` through the trivial-zero derivative identity
///
/// ```text
/// ζ′(−2m) = (−1)^m · (2m)! · ζ(2m+1) / (2^(2m+1) · π^(2m)),
/// ```
///
/// which needs only one zeta evaluation deep in the convergent half-plane.
/// (A five-point finite difference across the trivial zero was tried first,
/// but the cancellation noise of continued values near `s = −2m` floors it
/// around `10⁻¹⁰` — not enough for the removable-limit path below. The
/// closed form is exact; its value is pinned against an independently
/// frozen reference in the tests.)
fn zeta_deriv_neg_even(m: u32, cfg: &PrecisionConfig) -> Result<f64, AnalyticError> {
    let z = zeta(ComplexValue::new(2.0 * m as f64 + 1.0, 0.0), cfg)?.re;
    let mut fact = 1.0f64; // (2m)!
    for i in 2..=(2 * m) as u64 {
        fact *= i as f64;
    }
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    let two_pow = 2.0f64.powi(2 * m as i32 + 1);
    let pi_pow = std::f64::consts::PI.powi(2 * m as i32);
    Ok(sign * fact * z / (two_pow * pi_pow))
}

/// One side of the symmetric functional-equation form:
/// `λ(w) = π^(−w/2)·Γ(w/2)·ζ(w)`.
///
/// At `w = −2m` (`m ≥ 1`) the gamma pole is cancelled by the trivial zero of
/// zeta; within [`REMOVABLE_RADIUS`] of such a point the value is the limit
/// `π^m · 2·(−1)^m · ζ′(−2m) / m!` with the derivative from
/// [`zeta_deriv_neg_even`].
fn completed_lambda(w: ComplexValue, cfg: &PrecisionConfig) -> Result<ComplexValue, AnalyticError> {
    if (w - 1.0).norm() < POLE_RADIUS {
        return Err(AnalyticError::PoleEncountered {
            factor: "zeta(w) at its pole w = 1".into(),
        });
    }
    if w.norm() < POLE_RADIUS {
        // Γ(w/2) pole with ζ(0) = −1/2 ≠ 0: genuine.
        return Err(AnalyticError::PoleEncountered {
            factor: "gamma(w/2) at w = 0".into(),
        });
    }
    if w.im.abs() < REMOVABLE_RADIUS && w.re < -1.0 {
        let m = (-w.re / 2.0).round();
        if m >= 1.0 && (w - (-2.0 * m)).norm() < REMOVABLE_RADIUS {
            let m_int = m as u32;
            let deriv = zeta_deriv_neg_even(m_int, cfg)?;
            let mut m_fact = 1.0f64;
            for i in 2..=m_int as u64 {
                m_fact *= i as f64;
            }
            let sign = if m_int % 2 == 0 { 1.0 } else { -1.0 };
            let value = std::f64::consts::PI.powi(m_int as i32) * 2.0 * sign * deriv / m_fact;
            return Ok(ComplexValue::new(value, 0.0));
        }
    }
    let g = gamma(w / 2.0)?;
    let z = zeta(w, cfg)?;
    Ok(powc(std::f64::consts::PI, -w / 2.0) * g * z)
}

/// Absolute difference of the two sides of the symmetric functional equation
///
/// ```text
/// π^(−s/2)·Γ(s/2)·G_k(s)  =  k·π^(−(1−s)/2)·Γ((1−s)/2)·ζ(1−s),
/// ```
///
/// each side evaluated independently. Removable `Γ`-pole/trivial-zero
/// pairings (`s/2` or `(1−s)/2` at a negative integer) are closed by their
/// limits; the genuinely singular points `s = 0` and `s = 1` error out.
pub fn functional_eq_residual(
    k: u32,
    s: ComplexValue,
    cfg: &PrecisionConfig,
) -> Result<f64, AnalyticError> {
    if s.norm() < POLE_RADIUS {
        return Err(AnalyticError::PoleEncountered {
            factor: "gamma(s/2) and zeta(1−s) at s = 0".into(),
        });
    }
    if (s - 1.0).norm() < POLE_RADIUS {
        return Err(AnalyticError::PoleEncountered {
            factor: "zeta(s) and gamma((1−s)/2) at s = 1".into(),
        });
    }
    let lhs = completed_lambda(s, cfg)? * k as f64;
    let rhs = completed_lambda(1.0 - s, cfg)? * k as f64;
    Ok((lhs - rhs).norm())
}

/// `(s − 1)·G_k(s)` sampled at `s = 1 + eps`; approaches the residue `k` as
/// `eps → 0` (first-order error is about `γ·k·eps` with `γ` Euler's
/// constant).
///
/// # Panics
/// If `eps` is outside `(0, 10⁻²]`.
pub fn residue_probe(k: u32, eps: f64, cfg: &PrecisionConfig) -> Result<f64, AnalyticError> {
    assert!(
        eps > 0.0 && eps <= 1e-2,
        "residue probe requires 0 < eps <= 1e-2"
    );
    let s = ComplexValue::new(1.0 + eps, 0.0);
    let g = gk_continued(k, s, cfg)?;
    Ok(eps * g.re)
}
