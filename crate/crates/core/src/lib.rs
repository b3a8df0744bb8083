//! Exact and analytic tooling around the quadratic form
//!
//! ```text
//! F_{x,t}^{(k)}(n) = t²(kx − n)² − 2nxt
//! ```
//!
//! whose perfect-square values encode decompositions of `k/n` into three
//! positive unit fractions: if `F = m²` then `y = t(kx−n) − m` and
//! `z = t(kx−n) + m` satisfy `k/n = 1/x + 1/y + 1/z` exactly. The crate has
//! two halves that meet in the middle:
//!
//! * **Exact side** ([`exact`], [`search`]) — arbitrary-precision evaluation
//!   of `F`, admissibility tests, perfect-square witnesses, decomposition
//!   construction, bounded witness searches over `(x, t)`, range
//!   verification, and `F = 0` density statistics.
//! * **Analytic side** ([`analytic`], [`param`], [`explorer`]) — the same
//!   construction with `n` replaced by `n^s` for complex `s`. Closed-form
//!   schemes produce `x_s(n), t_s(n), y_s(n), z_s(n)` whose reciprocal sums
//!   telescope to `k·ζ(s)`; the analytic kernel supplies `ζ`, `Γ`, and
//!   functional-equation residuals; the explorer scans the critical line for
//!   zeros and computes the exact zero locus of `F(n^s)` in the `s`-plane.
//!
//! All report types serialize with `serde`; the `eszeta` binary exposes every
//! operation as a subcommand.

// Reference constants and test oracles keep every digit of their source
// values, even where f64 rounds the last one.
#![allow(clippy::excessive_precision)]

pub mod analytic;
mod bernoulli;
pub mod exact;
pub mod explorer;
pub mod param;
pub mod search;

pub use analytic::{
    functional_eq_residual, gamma, gk_continued, ln_gamma, residue_probe, zeta, AnalyticError,
    ComplexValue, PrecisionConfig,
};
pub use exact::{
    decompose, eval_f, is_admissible, perfect_square_witness, verify_decomposition, Decomposition,
    DomainSpec, ProblemParams,
};
pub use explorer::{
    f_zero_locus, riemann_siegel_theta, scan_critical_line, verify_f_zero, z_function,
    ExplorerError, FZeroFamily, ScanReport, ZeroBracket, ZERO_TOLERANCE,
};
pub use param::{
    gk_partial_sum, params_for, params_for_branch, quadratic_roots_check, termwise_residual,
    ParamError, ParamTriple, RootBranch, Scheme, SumReport,
};
pub use search::{
    find_zero_pair, solve_first, verify_range, zero_density, DensityReport, RangeReport,
    SearchBounds, SearchError,
};
