//! Closed-form parameter schemes extending the integer triples to exponents:
//! rules producing `x_s(n), t_s(n), m_s(n), y_s(n), z_s(n)` for real and
//! complex `s`, the termwise identity `1/x_s + 1/y_s + 1/z_s = k/n^s`, and
//! partial sums of `G_k(s) = Σ_n (1/x_s + 1/y_s + 1/z_s)`.

use serde::{Deserialize, Serialize};

use crate::analytic::{
    complex_json, gk_continued, AnalyticError, ComplexValue, PrecisionConfig, POLE_RADIUS,
};

/// A rule assigning `(x_s, t_s, m_s, y_s, z_s)` to each index `n` for a given
/// exponent `s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Scheme {
    /// `x_s = α·n^s`: all parameters scale with `n^s`, so the positivity
    /// condition `n^s < k·x_s` holds for **every** `n` simultaneously
    /// (requires `k·α − 1 > 0`). Forces the double root `m_s = 0`.
    ProportionalDoubleRoot { alpha: f64 },
    /// `x_s = x0` constant. Valid only while `n^s` stays below `k·x0`
    /// (for real `s`), since a fixed denominator cannot outrun `n^s`.
    /// Forces the double root `m_s = 0`.
    FixedXDoubleRoot { x0: f64 },
    /// Free choice of `x` and `t`; `m_s` becomes the principal square root
    /// of `t²(k·x − n^s)² − 2n^s·x·t` and may be complex. Real inputs are
    /// required positive; complex inputs are accepted as-is (the algebraic
    /// identities hold for any branch).
    GeneralXT { x: ComplexValue, t: ComplexValue },
}

impl Scheme {
    /// The default rule for a given `k`: proportional with `α = 2/k`, giving
    /// the clean closed forms `x_s = 2n^s/k`, `t_s = 4/k`, `y_s = z_s = 4n^s/k`.
    pub fn default_for(k: u32) -> Self {
        assert!(k >= 1, "k must be at least 1");
        Scheme::ProportionalDoubleRoot {
            alpha: 2.0 / k as f64,
        }
    }
}

/// Which square-root branch of `m_s` to take; negating `m_s` swaps
/// `y_s` and `z_s` and changes nothing else.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootBranch {
    Principal,
    Negated,
}

/// One term's worth of parameters: `y_s = t_s(k·x_s − n^s) − m_s` and
/// `z_s = t_s(k·x_s − n^s) + m_s`, satisfying Viète's relations
/// `y_s + z_s = 2t_s(k·x_s − n^s)` and `y_s·z_s = 2n^s·x_s·t_s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamTriple {
    #[serde(with = "complex_json")]
    pub x_s: ComplexValue,
    #[serde(with = "complex_json")]
    pub t_s: ComplexValue,
    #[serde(with = "complex_json")]
    pub m_s: ComplexValue,
    #[serde(with = "complex_json")]
    pub y_s: ComplexValue,
    #[serde(with = "complex_json")]
    pub z_s: ComplexValue,
}

/// Partial-sum report for `G_k(s)` under a scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumReport {
    pub k: u32,
    #[serde(with = "complex_json")]
    pub s: ComplexValue,
    /// Number of summed terms (the partial covers `1 ≤ n ≤ N`).
    #[serde(rename = "N")]
    pub n_terms: u64,
    /// `Σ_{n≤N} (1/x_s + 1/y_s + 1/z_s)`, compensated, ascending `n`.
    #[serde(with = "complex_json")]
    pub partial: ComplexValue,
    /// Euler–Maclaurin leading tail `k·(N^(1−s)/(s−1) + N^(−s)/2)`.
    #[serde(with = "complex_json")]
    pub tail_estimate: ComplexValue,
    /// `k·ζ(s)` from the analytic kernel.
    #[serde(with = "complex_json")]
    pub reference: ComplexValue,
    /// `|partial + tail_estimate − reference|`.
    pub abs_error: f64,
}

/// Errors from scheme evaluation and partial sums.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParamError {
    /// The scheme's validity condition fails for this `(k, n, s)`.
    #[error("scheme domain violation: {what}")]
    SchemeDomainViolation { what: String },
    /// A root is too close to zero for its reciprocal to mean anything.
    #[error("degenerate root of magnitude {magnitude:e}")]
    DegenerateRoot { magnitude: f64 },
    /// `G_k` has a simple pole at `s = 1` with residue `k`.
    #[error("simple pole at s = 1 (residue {residue})")]
    PoleAtOne { residue: f64 },
    /// Partial sums only converge for `Re(s) > 1`.
    #[error("partial sums diverge for Re(s) <= 1 (got Re(s) = {re})")]
    DivergentRegion { re: f64 },
    /// Propagated analytic-kernel failure.
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
}

/// `n^s` as `exp(s·ln n)`, with an exact integer-exponent fast path (so at
/// an integer point like `s = 3` the double root collapses with no rounding
/// at all); `n ≥ 1` keeps the real logarithm single-valued.
fn n_pow_s(n: u64, s: ComplexValue) -> ComplexValue {
    debug_assert!(n >= 1);
    if s.im == 0.0 && s.re.fract() == 0.0 && s.re.abs() <= 256.0 {
        return ComplexValue::new((n as f64).powi(s.re as i32), 0.0);
    }
    (s * (n as f64).ln()).exp()
}

/// Magnitude below which a root is considered degenerate (its reciprocal
/// would overflow or carry no significant bits).
const DEGENERATE_MAGNITUDE: f64 = 1e-300;

/// Tolerance for the `n^s ≠ k·x0` exclusion in [`Scheme::FixedXDoubleRoot`].
const FIXED_X_EXCLUSION: f64 = 1e-12;

/// Stable root pair `(T − m, T + m)` of `V² − 2TV + P = 0`: the root on
/// `T`'s side of the midpoint is formed by addition (no cancellation), the
/// other recovered from the product `P`.
fn stable_root_pair(t_mid: ComplexValue, m: ComplexValue, p: ComplexValue) -> (ComplexValue, ComplexValue) {
    if m.re == 0.0 && m.im == 0.0 {
        return (t_mid, t_mid);
    }
    let v = t_mid.re * m.re + t_mid.im * m.im; // Re(conj(T)·m)
    if v >= 0.0 {
        let plus = t_mid + m;
        (p / plus, plus)
    } else {
        let minus = t_mid - m;
        (minus, p / minus)
    }
}

/// Evaluates a scheme at `(k, n, s)` on the requested square-root branch.
///
/// The two branches are bitwise mirror images: `m_s` flips sign and
/// `y_s`/`z_s` trade places exactly.
///
/// # Errors
/// [`ParamError::SchemeDomainViolation`] when the scheme's validity
/// condition fails (see [`Scheme`]).
// Guards use negated comparisons (`!(v > 0.0)`) so NaN inputs fail validation.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn params_for_branch(
    scheme: Scheme,
    k: u32,
    n: u64,
    s: ComplexValue,
    branch: RootBranch,
) -> Result<ParamTriple, ParamError> {
    assert!(k >= 1, "k must be at least 1");
    assert!(n >= 1, "index n must be at least 1");
    let u = n_pow_s(n, s);
    match scheme {
        Scheme::ProportionalDoubleRoot { alpha } => {
            let ka = k as f64 * alpha - 1.0;
            if !(ka > 0.0) {
                return Err(ParamError::SchemeDomainViolation {
                    what: format!(
                        "proportional scheme requires k*alpha - 1 > 0 (k = {k}, alpha = {alpha})"
                    ),
                });
            }
            let x_s = u * alpha;
            let t_s = ComplexValue::new(2.0 * alpha / (ka * ka), 0.0);
            let y_s = u * (2.0 * alpha / ka);
            Ok(ParamTriple {
                x_s,
                t_s,
                m_s: ComplexValue::new(0.0, 0.0),
                y_s,
                z_s: y_s,
            })
        }
        Scheme::FixedXDoubleRoot { x0 } => {
            if !(x0 > 0.0) {
                return Err(ParamError::SchemeDomainViolation {
                    what: format!("fixed-x scheme requires x0 > 0, got {x0}"),
                });
            }
            let d = k as f64 * x0 - u;
            if d.norm() < FIXED_X_EXCLUSION {
                return Err(ParamError::SchemeDomainViolation {
                    what: format!("fixed-x scheme is singular where n^s = k*x0 (n = {n})"),
                });
            }
            if s.im == 0.0 && !(u.re < k as f64 * x0) {
                return Err(ParamError::SchemeDomainViolation {
                    what: format!(
                        "fixed-x scheme requires n^s < k*x0 for real s (n = {n}, n^s = {}, k*x0 = {})",
                        u.re,
                        k as f64 * x0
                    ),
                });
            }
            let y_s = u * 2.0 * x0 / d;
            let t_s = y_s / d;
            Ok(ParamTriple {
                x_s: ComplexValue::new(x0, 0.0),
                t_s,
                m_s: ComplexValue::new(0.0, 0.0),
                y_s,
                z_s: y_s,
            })
        }
        Scheme::GeneralXT { x, t } => {
            if t.norm() == 0.0 {
                return Err(ParamError::SchemeDomainViolation {
                    what: "general scheme requires t != 0".into(),
                });
            }
            if x.im == 0.0 && t.im == 0.0 && !(x.re > 0.0 && t.re > 0.0) {
                return Err(ParamError::SchemeDomainViolation {
                    what: format!(
                        "general scheme requires x > 0 and t > 0 for real inputs (x = {}, t = {})",
                        x.re, t.re
                    ),
                });
            }
            let d = x * k as f64 - u;
            let t_mid = t * d; // midpoint t(k·x − n^s) of the root pair
            let p = u * x * t * 2.0; // product y_s·z_s
            let m = (t_mid * t_mid - p).sqrt(); // principal branch
            let (y_principal, z_principal) = stable_root_pair(t_mid, m, p);
            let (m_s, y_s, z_s) = match branch {
                RootBranch::Principal => (m, y_principal, z_principal),
                RootBranch::Negated => (-m, z_principal, y_principal),
            };
            Ok(ParamTriple {
                x_s: x,
                t_s: t,
                m_s,
                y_s,
                z_s,
            })
        }
    }
}

/// Evaluates a scheme at `(k, n, s)` on the principal branch.
/// See [`params_for_branch`].
pub fn params_for(
    scheme: Scheme,
    k: u32,
    n: u64,
    s: ComplexValue,
) -> Result<ParamTriple, ParamError> {
    params_for_branch(scheme, k, n, s, RootBranch::Principal)
}

/// `|1/x_s + 1/y_s + 1/z_s − k/n^s|`: how far one term of the scheme is from
/// its unit-fraction identity (zero in exact algebra, for any branch).
///
/// # Errors
/// Propagates [`ParamError::SchemeDomainViolation`];
/// [`ParamError::DegenerateRoot`] when `|x_s|`, `|y_s|` or `|z_s|` is below
/// `10⁻³⁰⁰`.
pub fn termwise_residual(
    scheme: Scheme,
    k: u32,
    n: u64,
    s: ComplexValue,
) -> Result<f64, ParamError> {
    let p = params_for(scheme, k, n, s)?;
    for root in [p.x_s, p.y_s, p.z_s] {
        let magnitude = root.norm();
        if magnitude < DEGENERATE_MAGNITUDE {
            return Err(ParamError::DegenerateRoot { magnitude });
        }
    }
    let u = n_pow_s(n, s);
    let lhs = 1.0 / p.x_s + 1.0 / p.y_s + 1.0 / p.z_s;
    Ok((lhs - k as f64 / u).norm())
}

/// Compensated (Neumaier) accumulator for one real component.
#[derive(Default, Clone, Copy)]
struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        self.carry += if self.sum.abs() >= v.abs() {
            (self.sum - t) + v
        } else {
            (v - t) + self.sum
        };
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum + self.carry
    }
}

/// Sums `Σ_{n≤N} (1/x_s + 1/y_s + 1/z_s)` under a scheme and reports it
/// against the continued reference `k·ζ(s)`, with the Euler–Maclaurin
/// leading tail `k·(N^(1−s)/(s−1) + N^(−s)/2)` closing the gap: the reported
/// `abs_error = |partial + tail_estimate − reference|` is `O(N^(−Re(s)−1))`.
///
/// Summation is sequential ascending `n` with compensated accumulation, so
/// results are reproducible bit-for-bit.
///
/// # Errors
/// [`ParamError::PoleAtOne`] at `s = 1`; [`ParamError::DivergentRegion`]
/// for `Re(s) ≤ 1`; scheme errors propagate from any term.
pub fn gk_partial_sum(
    scheme: Scheme,
    k: u32,
    s: ComplexValue,
    n_terms: u64,
    cfg: &PrecisionConfig,
) -> Result<SumReport, ParamError> {
    assert!(n_terms >= 1, "partial sum needs at least one term");
    if (s - 1.0).norm() < POLE_RADIUS {
        return Err(ParamError::PoleAtOne {
            residue: k as f64,
        });
    }
    if s.re <= 1.0 {
        return Err(ParamError::DivergentRegion { re: s.re });
    }
    let (mut acc_re, mut acc_im) = (Compensated::default(), Compensated::default());
    for n in 1..=n_terms {
        let p = params_for(scheme, k, n, s)?;
        let term = 1.0 / p.x_s + 1.0 / p.y_s + 1.0 / p.z_s;
        acc_re.add(term.re);
        acc_im.add(term.im);
    }
    let partial = ComplexValue::new(acc_re.value(), acc_im.value());

    let nf = n_terms as f64;
    let integral = ((1.0 - s) * nf.ln()).exp() / (s - 1.0); // N^(1−s)/(s−1)
    let half = (-s * nf.ln()).exp() * 0.5; // N^(−s)/2
    let tail_estimate = (integral + half) * k as f64;

    let reference = gk_continued(k, s, cfg)?;
    let abs_error = (partial + tail_estimate - reference).norm();
    Ok(SumReport {
        k,
        s,
        n_terms,
        partial,
        tail_estimate,
        reference,
        abs_error,
    })
}

/// Solves `V² − 2t(k·x − n^s)V + 2n^s·x·t = 0` by the sign-aware stable
/// quadratic formula and returns the largest componentwise distance between
/// its root pair and `{y_s, z_s}` from the general scheme at the same point
/// (over the better of the two pairings).
///
/// # Panics
/// If `t = 0`.
pub fn quadratic_roots_check(
    k: u32,
    n: u64,
    s: ComplexValue,
    x: ComplexValue,
    t: ComplexValue,
) -> f64 {
    assert!(t.norm() > 0.0, "quadratic in V requires t != 0");
    assert!(n >= 1, "index n must be at least 1");
    let u = n_pow_s(n, s);
    // V² + bV + c with b = −2t(k·x − n^s), c = 2n^s·x·t.
    let b = t * (x * k as f64 - u) * -2.0;
    let c = u * x * t * 2.0;
    let sqrt_disc = (b * b - c * 4.0).sqrt();
    // Pick the sign that adds |b| and |√disc| instead of cancelling.
    let q = if b.re * sqrt_disc.re + b.im * sqrt_disc.im > 0.0 {
        (b + sqrt_disc) * -0.5
    } else {
        (b - sqrt_disc) * -0.5
    };
    let (r1, r2) = if q.norm() == 0.0 {
        (q, q) // b = c = 0: double root at the origin
    } else {
        (q, c / q)
    };

    let p = params_for(Scheme::GeneralXT { x, t }, k, n, s)
        .expect("general scheme accepts any x, t with t != 0 reached here");
    let component_distance = |a: ComplexValue, b: ComplexValue| -> f64 {
        (a.re - b.re).abs().max((a.im - b.im).abs())
    };
    let pairing_a = component_distance(r1, p.y_s).max(component_distance(r2, p.z_s));
    let pairing_b = component_distance(r1, p.z_s).max(component_distance(r2, p.y_s));
    pairing_a.min(pairing_b)
}
