//! Numerical exploration connecting the quadratic form to the zeta function:
//! critical-line zero scanning for `G_k(1/2 + it)` via the theta-rotated
//! real-valued `Z` function, and the exact zero locus of `F(n^s)` in the
//! `s`-plane through its quadratic in `u = n^s`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{
    complex_json, gk_continued, ln_gamma, AnalyticError, ComplexValue, PrecisionConfig,
};

/// Declared tolerance on `|G_k(1/2 + i·refined_t)|` at a refined zero.
pub const ZERO_TOLERANCE: f64 = 1e-8;

/// Bisection stops when the bracket is narrower than this.
const BRACKET_WIDTH: f64 = 1e-9;

/// A sign-change bracket around one critical-line zero, refined by bisection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroBracket {
    pub k: u32,
    /// Final bracket endpoints, `t_hi − t_lo < 10⁻⁹`.
    pub t_lo: f64,
    pub t_hi: f64,
    /// Bracket midpoint, the zero estimate.
    pub refined_t: f64,
    /// `|G_k(1/2 + i·refined_t)|`.
    pub min_abs: f64,
}

/// Result of a critical-line scan: all brackets found in the window, plus
/// non-fatal warnings (e.g. a step that looks too coarse for the zero gaps
/// actually observed).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub k: u32,
    pub t_min: f64,
    pub t_max: f64,
    pub step: f64,
    pub brackets: Vec<ZeroBracket>,
    pub warnings: Vec<String>,
}

/// The zero set of `F(n^s) = t²(k·x − n^s)² − 2n^s·x·t` for fixed `(k, x, t)`:
/// two positive roots in `u = n^s`, each generating the vertical lattice
/// `s = principal_s + i·j·branch_period`, `j ∈ ℤ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FZeroFamily {
    pub k: u32,
    pub x: f64,
    pub t: f64,
    pub n: u64,
    /// Roots of `t·u² − 2x(t·k+1)·u + t·k²x² = 0`, ascending.
    #[serde(with = "complex_json::pair")]
    pub u_roots: (ComplexValue, ComplexValue),
    /// `ln(u)/ln(n)` for each root (principal logarithm).
    #[serde(with = "complex_json::pair")]
    pub principal_s: (ComplexValue, ComplexValue),
    /// `2π/ln n`, the imaginary period of the full locus.
    pub branch_period: f64,
}

/// Errors from the exploration operations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExplorerError {
    /// `t = 0` collapses the quadratic in `u`.
    #[error("degenerate quadratic: t must be nonzero")]
    DegenerateQuadratic,
    /// An argument violates an operation's stated domain.
    #[error("invalid argument: {what}")]
    InvalidArgument { what: String },
    /// Propagated analytic-kernel failure.
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
}

/// The Riemann–Siegel theta function
/// `θ(t) = Im ln Γ(1/4 + it/2) − (t/2)·ln π`,
/// the rotation angle that makes `e^(iθ(t))·ζ(1/2 + it)` real. Accuracy is
/// around `10⁻⁹` for `|t| ≤ 60`.
pub fn riemann_siegel_theta(t: f64) -> f64 {
    assert!(t.is_finite(), "theta requires finite t");
    let lg = ln_gamma(ComplexValue::new(0.25, t / 2.0))
        .expect("Re = 1/4 is inside log-gamma's half-plane");
    lg.im - (t / 2.0) * std::f64::consts::PI.ln()
}

/// The rotated real function `Z(t) = Re(e^(iθ(t))·G_k(1/2 + it))`, whose
/// real zeros are exactly the critical-line zeros of `G_k`, with signs that
/// make bracketing robust.
pub fn z_function(k: u32, t: f64, cfg: &PrecisionConfig) -> Result<f64, ExplorerError> {
    let theta = riemann_siegel_theta(t);
    let g = gk_continued(k, ComplexValue::new(0.5, t), cfg)?;
    Ok((Complex64::from_polar(1.0, theta) * g).re)
}

/// Scans `[t_min, t_max]` on a uniform grid of spacing `step`, brackets every
/// sign change of [`z_function`], and refines each bracket by bisection until
/// the bracket is narrower than `10⁻⁹`.
///
/// Grid evaluation and per-bracket refinement run in parallel; results are
/// assembled in grid order, so the report is deterministic for fixed inputs.
///
/// A warning (not an error) is recorded when two refined zeros sit closer
/// than four grid steps — a hint that the step may be too coarse to separate
/// all zeros in the window.
///
/// # Errors
/// [`ExplorerError::InvalidArgument`] unless `0 < t_min < t_max`, `step > 0`,
/// and `k ≥ 1`.
pub fn scan_critical_line(
    k: u32,
    t_min: f64,
    t_max: f64,
    step: f64,
    cfg: &PrecisionConfig,
) -> Result<ScanReport, ExplorerError> {
    if k < 1 {
        return Err(ExplorerError::InvalidArgument {
            what: "k must be at least 1".into(),
        });
    }
    if !(t_min.is_finite() && t_max.is_finite() && 0.0 < t_min && t_min < t_max) {
        return Err(ExplorerError::InvalidArgument {
            what: format!("scan window requires 0 < t_min < t_max, got [{t_min}, {t_max}]"),
        });
    }
    if !(step.is_finite() && step > 0.0) {
        return Err(ExplorerError::InvalidArgument {
            what: format!("step must be positive, got {step}"),
        });
    }

    let count = ((t_max - t_min) / step).ceil() as u64;
    let mut grid = Vec::with_capacity(count as usize + 1);
    for i in 0..=count {
        let t = (t_min + i as f64 * step).min(t_max);
        if grid.last() != Some(&t) {
            grid.push(t);
        }
    }
    let values: Vec<f64> = grid
        .par_iter()
        .map(|&t| z_function(k, t, cfg))
        .collect::<Result<_, _>>()?;

    let mut spans: Vec<(f64, f64, f64)> = Vec::new(); // (lo, hi, z_lo)
    let mut exact_hits: Vec<f64> = Vec::new();
    for i in 0..grid.len() {
        if values[i] == 0.0 {
            exact_hits.push(grid[i]);
        } else if i + 1 < grid.len() && values[i] * values[i + 1] < 0.0 {
            spans.push((grid[i], grid[i + 1], values[i]));
        }
    }

    let mut brackets: Vec<ZeroBracket> = spans
        .par_iter()
        .map(|&(lo, hi, z_lo)| refine_bracket(k, lo, hi, z_lo, cfg))
        .collect::<Result<_, _>>()?;
    for &t in &exact_hits {
        let half = (BRACKET_WIDTH / 4.0).max(f64::EPSILON * t);
        let min_abs = gk_continued(k, ComplexValue::new(0.5, t), cfg)?.norm();
        brackets.push(ZeroBracket {
            k,
            t_lo: t - half,
            t_hi: t + half,
            refined_t: t,
            min_abs,
        });
    }
    brackets.sort_by(|a, b| a.refined_t.total_cmp(&b.refined_t));

    let mut warnings = Vec::new();
    for pair in brackets.windows(2) {
        let gap = pair[1].refined_t - pair[0].refined_t;
        if gap < 4.0 * step {
            warnings.push(format!(
                "step {step} may be too coarse: zeros at {:.9} and {:.9} are only {gap:.6} apart",
                pair[0].refined_t, pair[1].refined_t
            ));
        }
    }

    Ok(ScanReport {
        k,
        t_min,
        t_max,
        step,
        brackets,
        warnings,
    })
}

fn refine_bracket(
    k: u32,
    mut lo: f64,
    mut hi: f64,
    mut z_lo: f64,
    cfg: &PrecisionConfig,
) -> Result<ZeroBracket, ExplorerError> {
    for _ in 0..200 {
        if hi - lo < BRACKET_WIDTH {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let z_mid = z_function(k, mid, cfg)?;
        if z_mid == 0.0 {
            lo = mid - BRACKET_WIDTH / 4.0;
            hi = mid + BRACKET_WIDTH / 4.0;
            break;
        }
        if (z_mid < 0.0) == (z_lo < 0.0) {
            lo = mid;
            z_lo = z_mid;
        } else {
            hi = mid;
        }
    }
    let refined_t = 0.5 * (lo + hi);
    let min_abs = gk_continued(k, ComplexValue::new(0.5, refined_t), cfg)?.norm();
    Ok(ZeroBracket {
        k,
        t_lo: lo,
        t_hi: hi,
        refined_t,
        min_abs,
    })
}

/// Solves the zero locus of `F(n^s)` for fixed `(k, x, t)`: substituting
/// `u = n^s` into `t²(k·x − u)² = 2u·x·t` and dividing by `t` gives
///
/// ```text
/// t·u² − 2x(t·k + 1)·u + t·k²x² = 0,
/// ```
///
/// whose discriminant `4x²(2t·k + 1)` is positive for positive inputs — two
/// real positive roots, solved by the cancellation-free quadratic formula.
/// Every `s` with `n^s = u` is then `ln(u)/ln(n) + i·j·(2π/ln n)`, `j ∈ ℤ`.
///
/// # Errors
/// [`ExplorerError::DegenerateQuadratic`] if `t = 0`;
/// [`ExplorerError::InvalidArgument`] unless `x > 0`, `t > 0`, `n ≥ 2`.
pub fn f_zero_locus(k: u32, x: f64, t: f64, n: u64) -> Result<FZeroFamily, ExplorerError> {
    if t == 0.0 {
        return Err(ExplorerError::DegenerateQuadratic);
    }
    if !(x.is_finite() && t.is_finite() && x > 0.0 && t > 0.0) {
        return Err(ExplorerError::InvalidArgument {
            what: format!("zero locus requires x > 0 and t > 0, got x = {x}, t = {t}"),
        });
    }
    if n < 2 || k < 1 {
        return Err(ExplorerError::InvalidArgument {
            what: format!("zero locus requires n >= 2 and k >= 1, got n = {n}, k = {k}"),
        });
    }
    let kf = k as f64;
    let b = -2.0 * x * (t * kf + 1.0);
    let c = t * kf * kf * x * x;
    let disc = b * b - 4.0 * t * c; // = 4x²(2tk+1) > 0
    let q = 0.5 * (-b + disc.sqrt()); // −b > 0: additive, no cancellation
    let u_hi = q / t;
    let u_lo = c / q;

    let ln_n = (n as f64).ln();
    Ok(FZeroFamily {
        k,
        x,
        t,
        n,
        u_roots: (
            ComplexValue::new(u_lo, 0.0),
            ComplexValue::new(u_hi, 0.0),
        ),
        principal_s: (
            ComplexValue::new(u_lo.ln() / ln_n, 0.0),
            ComplexValue::new(u_hi.ln() / ln_n, 0.0),
        ),
        branch_period: 2.0 * std::f64::consts::PI / ln_n,
    })
}

/// Evaluates `|F(n^s)| = |t²(k·x − n^s)² − 2n^s·x·t|` at `samples` branch
/// points per root (branch indices `0, 1, −1, 2, −2, …`) and returns the
/// worst residual. Genuine zero families stay near the floating-point noise
/// floor; perturbed inputs are flagged by residuals orders of magnitude
/// larger.
///
/// # Panics
/// If `samples` is zero.
pub fn verify_f_zero(family: &FZeroFamily, samples: u32) -> f64 {
    assert!(samples >= 1, "need at least one sample per root");
    let ln_n = (family.n as f64).ln();
    let kf = family.k as f64;
    let (x, t) = (family.x, family.t);
    let mut worst = 0.0f64;
    for base in [family.principal_s.0, family.principal_s.1] {
        for idx in 0..samples {
            // 0, 1, −1, 2, −2, …
            let j = if idx % 2 == 1 {
                (idx as i64 + 1) / 2
            } else {
                -(idx as i64) / 2
            };
            let s = base + ComplexValue::new(0.0, j as f64 * family.branch_period);
            let u = (s * ln_n).exp();
            let d = kf * x - u;
            let f = d * d * (t * t) - u * (2.0 * x * t);
            worst = worst.max(f.norm());
        }
    }
    worst
}
