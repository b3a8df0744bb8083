//! Numerical cross-checks of the analytic kernel against references computed
//! inside the tests themselves: direct Dirichlet sums, integral bracketing,
//! step-halving, and closed-form identities none of the library code paths
//! share.

use eszeta_core::{
    f_zero_locus, functional_eq_residual, gk_partial_sum, scan_critical_line, ComplexValue,
    PrecisionConfig, Scheme, ZERO_TOLERANCE,
};

fn cfg() -> PrecisionConfig {
    PrecisionConfig::new(64, 14, 1e-12).unwrap()
}

fn c(re: f64, im: f64) -> ComplexValue {
    ComplexValue::new(re, im)
}

/// `n^(−s)` computed from scratch, sharing nothing with the library.
fn inv_pow(n: u64, s: ComplexValue) -> ComplexValue {
    (-s * (n as f64).ln()).exp()
}

/// Deep in the convergent half-plane the kernel must match a plain Dirichlet
/// sum, whose tail beyond `N = 60` is below `60^(−11) < 10⁻¹⁹`.
#[test]
fn zeta_matches_direct_dirichlet_sum() {
    let config = cfg();
    for s in [c(12.0, 0.0), c(13.5, 7.25)] {
        let direct: ComplexValue = (1..=60).map(|n| inv_pow(n, s)).sum();
        let v = eszeta_core::zeta(s, &config).unwrap();
        let err = (v - direct).norm();
        assert!(err < 1e-13, "s = {s}: |kernel − direct| = {err:.3e}");
    }
}

/// For real `s = 2` the comparison needs no reference value at all: the
/// integral bounds `1/(N+1) ≤ ζ(2) − Σ_{n≤N} n⁻² ≤ 1/N` pin the kernel's
/// value between partial sums computed in the test.
#[test]
fn basel_partial_sums_bracket_the_kernel_value() {
    let v = eszeta_core::zeta(c(2.0, 0.0), &cfg()).unwrap();
    assert!(v.im.abs() < 1e-15);
    for n_terms in [10u64, 100, 1_000] {
        let partial: f64 = (1..=n_terms).map(|n| 1.0 / (n as f64 * n as f64)).sum();
        let gap = v.re - partial;
        let lo = 1.0 / (n_terms as f64 + 1.0);
        let hi = 1.0 / n_terms as f64;
        assert!(
            lo <= gap && gap <= hi,
            "N = {n_terms}: tail {gap:.9e} outside [{lo:.9e}, {hi:.9e}]"
        );
    }
}

/// The functional-equation residual must stay finite and tiny at the deeper
/// removable points, where a Γ pole on one side cancels a trivial zero on
/// the other (`s = 7, 9` pair with `ζ(−6), ζ(−8)`; `s = −4, −6` mirror them).
#[test]
fn removable_points_extend_along_the_real_axis() {
    let config = cfg();
    for re in [7.0, 9.0, -4.0, -6.0] {
        let r = functional_eq_residual(4, c(re, 0.0), &config).unwrap();
        assert!(r < 1e-9, "s = {re}: residual {r:.3e}");
    }
}

/// Halving the scan step must not move a refined zero: the bisection target
/// is a sign change of the same underlying function, so both grids converge
/// to the same point well below the refinement tolerance.
#[test]
fn scan_refinement_is_stable_under_step_halving() {
    let config = cfg();
    let coarse = scan_critical_line(4, 13.0, 15.0, 0.05, &config).unwrap();
    let fine = scan_critical_line(4, 13.0, 15.0, 0.025, &config).unwrap();
    assert_eq!(coarse.brackets.len(), 1);
    assert_eq!(fine.brackets.len(), 1);
    let (a, b) = (&coarse.brackets[0], &fine.brackets[0]);
    assert!(
        (a.refined_t - b.refined_t).abs() < 1e-8,
        "step halving moved the zero: {} vs {}",
        a.refined_t,
        b.refined_t
    );
    assert!(a.min_abs < ZERO_TOLERANCE && b.min_abs < ZERO_TOLERANCE);
}

/// Fourth and fifth nontrivial zeros, beyond the windows the other tests
/// scan. Reference ordinates are frozen from an independent high-precision
/// computation.
#[test]
fn scan_locates_the_fourth_and_fifth_zeros() {
    let report = scan_critical_line(4, 30.0, 34.0, 0.05, &cfg()).unwrap();
    let targets = [30.424876125859513, 32.93506158773919];
    assert_eq!(report.brackets.len(), targets.len());
    for (bracket, target) in report.brackets.iter().zip(targets) {
        assert!(
            (bracket.refined_t - target).abs() < 1e-6,
            "expected zero near {target}, refined to {}",
            bracket.refined_t
        );
        assert!(bracket.min_abs < ZERO_TOLERANCE);
    }
}

/// The reciprocal-sum error against `k·ζ(s)` must shrink as more terms are
/// kept — each extra decade of terms has to buy roughly `10^(Re(s)−1)` of
/// accuracy, so demand at least a factor of 10 per decade.
#[test]
fn series_error_decreases_with_more_terms() {
    let config = cfg();
    for s in [c(2.0, 0.0), c(2.5, 5.0)] {
        let mut previous = f64::INFINITY;
        for n_terms in [100u64, 1_000, 10_000] {
            let report = gk_partial_sum(Scheme::default_for(4), 4, s, n_terms, &config).unwrap();
            assert!(
                report.abs_error < previous / 10.0,
                "s = {s}, N = {n_terms}: error {:.3e} after {previous:.3e}",
                report.abs_error
            );
            previous = report.abs_error;
        }
        assert!(previous < 1e-6, "s = {s}: final error {previous:.3e}");
    }
}

/// Exponentiating the principal parameters and substituting into the form
/// itself — all computed in the test — must land on zero, for non-integer
/// `(x, t)` families where nothing reduces to an integer identity.
#[test]
fn principal_exponents_reproduce_roots_through_f() {
    for (k, x, t, n) in [(4u32, 1.5, 2.0, 3u64), (5, 2.0, 1.0, 7), (3, 0.8, 5.0, 13)] {
        let family = f_zero_locus(k, x, t, n).unwrap();
        let scale = t * t * (k as f64 * x) * (k as f64 * x) + 2.0 * x * t;
        for (s, u_expected) in [
            (family.principal_s.0, family.u_roots.0),
            (family.principal_s.1, family.u_roots.1),
        ] {
            let u = (s * (n as f64).ln()).exp();
            assert!(
                (u - u_expected).norm() < 1e-10 * (1.0 + u_expected.norm()),
                "k = {k}, x = {x}, t = {t}, n = {n}: exponent does not reproduce root"
            );
            let gap = c(k as f64 * x, 0.0) - u;
            let f = c(t * t, 0.0) * gap * gap - c(2.0 * x * t, 0.0) * u;
            assert!(
                f.norm() < 1e-10 * scale,
                "k = {k}, x = {x}, t = {t}, n = {n}: |F| = {:.3e}",
                f.norm()
            );
        }
    }
}
