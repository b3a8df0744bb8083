//! Bounded witness searches: first-witness enumeration over `(x, t)`, range
//! verification, and density statistics of exact `F = 0` pairs.
//!
//! The enumeration order is fixed and documented — `x` ascending from
//! `⌊n/k⌋ + 1`, and for each `x`, `t` ascending from the admissibility lower
//! bound `⌈2nx/(kx−n)²⌉` for `t_span` values — so identical inputs always
//! yield identical witnesses, sequentially or in parallel.
//!
//! The hot loop runs in `u128` when a precomputed bound proves no
//! intermediate can overflow (every desk-scale call qualifies). Narrow `t`
//! windows are scanned incrementally, rejecting non-squares with cheap
//! quadratic-residue sieves before any integer square root. Wide windows
//! switch to an exactly equivalent divisor-pair decision — completing the
//! square turns `m² = (kx−n)²t² − 2nxt` into `(2d²t − 2nx)² − (2dm)² = (2nx)²`,
//! so witnesses in the window correspond one-to-one with divisor pairs of
//! `(nx)²` — making the per-`x` cost independent of `t_span`. Every candidate
//! from either path is re-verified through the arbitrary-precision
//! [`decompose`] path, so the fast paths can only affect speed, never results.

use std::sync::{Arc, Mutex, OnceLock};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exact::{decompose, verify_decomposition, Decomposition, DomainSpec, ProblemParams};

/// Caps for the `(x, t)` enumeration.
///
/// `t_span` is a window *above the per-`x` lower bound* rather than an
/// absolute cap, because the lower bound `⌈2nx/(kx−n)²⌉` itself grows without
/// limit; a window keeps the per-`x` work uniform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    /// Largest `x` tried (inclusive), `≥ 1`.
    pub x_max: u64,
    /// Number of `t` values tried per `x`, `≥ 1`.
    pub t_span: u64,
}

impl SearchBounds {
    /// Validates `x_max ≥ 1` and `t_span ≥ 1`.
    pub fn new(x_max: u64, t_span: u64) -> Result<Self, SearchError> {
        if x_max == 0 || t_span == 0 {
            return Err(SearchError::EmptyBounds);
        }
        Ok(Self { x_max, t_span })
    }

    /// Desk-scale defaults for denominators up to `n`: `x_max = 4n`,
    /// `t_span = 10⁴`. Empirically sufficient for `n ≤ 10⁵` at `k = 4, 5`.
    pub fn desk_default(n: u64) -> Self {
        Self {
            x_max: n.saturating_mul(4).max(1),
            t_span: 10_000,
        }
    }
}

/// Errors from the range-verification entry points.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("range must start at n = 2 or above, got {n_start}")]
    RangeStartTooSmall { n_start: u64 },
    #[error("empty range: n_start {n_start} exceeds n_end {n_end}")]
    EmptyRange { n_start: u64, n_end: u64 },
    #[error("k must be at least 2, got {k}")]
    KTooSmall { k: u64 },
    #[error("search bounds must be at least 1 in both coordinates")]
    EmptyBounds,
}

/// Outcome of [`verify_range`]: per-`n` first witnesses plus the list of `n`
/// the bounded search failed on. Unsolved entries signal bounded-search
/// exhaustion, never counterexamples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeReport {
    pub k: u64,
    pub n_start: u64,
    pub n_end: u64,
    /// Number of `n` in the range with a witness found.
    pub solved_count: u64,
    /// Denominators the bounded search exhausted without a witness.
    pub unsolved: Vec<u64>,
    /// One verified witness per solved `n`, ascending in `n`.
    pub witnesses: Vec<Decomposition>,
    /// Wall-clock time of the search.
    pub elapsed: Duration,
}

impl RangeReport {
    /// Field-wise equality ignoring the timing field; used to assert that
    /// scheduling cannot change results.
    pub fn same_results(&self, other: &RangeReport) -> bool {
        self.k == other.k
            && self.n_start == other.n_start
            && self.n_end == other.n_end
            && self.solved_count == other.solved_count
            && self.unsolved == other.unsolved
            && self.witnesses == other.witnesses
    }
}

/// Counts of denominators admitting an exact `F = 0` pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub k: u64,
    /// Upper end of the scanned interval `[2, N]`.
    #[serde(rename = "N")]
    pub n_max: u64,
    /// Number of `n` in `[2, N]` with a verified `y = z` witness.
    pub zero_count: u64,
    /// `zero_count / (N − 1)`.
    pub fraction: f64,
}

// --- quadratic-residue sieves -------------------------------------------------
//
// A perfect square reduces to a quadratic residue modulo anything, so a value
// whose residue is a non-residue can be rejected without an integer square
// root. Mod 64 uses the low bits directly; 63, 65 and 11 share one residue
// maintained incrementally (their product 45045 keeps the update in u64).
// Combined, roughly 0.8% of uniform values survive to the isqrt.

const MOD_SIEVE: u64 = 45045; // 63 · 65 · 11, pairwise coprime

const fn qr_mask_u64(modulus: u64) -> u64 {
    let mut mask = 0u64;
    let mut i = 0u64;
    while i < modulus {
        mask |= 1u64 << ((i * i) % modulus);
        i += 1;
    }
    mask
}

const fn qr_mask_u128(modulus: u64) -> u128 {
    let mut mask = 0u128;
    let mut i = 0u64;
    while i < modulus {
        mask |= 1u128 << ((i * i) % modulus);
        i += 1;
    }
    mask
}

const QR64: u64 = qr_mask_u64(64);
const QR63: u64 = qr_mask_u64(63);
const QR65: u128 = qr_mask_u128(65);
const QR11: u64 = qr_mask_u64(11);

/// `false` only when `f` is provably not a perfect square. `f_mod` must equal
/// `f % 45045`.
#[inline]
fn maybe_square(f: u128, f_mod: u64) -> bool {
    if (QR64 >> ((f as u64) & 63)) & 1 == 0 {
        return false;
    }
    if (QR63 >> (f_mod % 63)) & 1 == 0 {
        return false;
    }
    if (QR65 >> (f_mod % 65)) & 1 == 0 {
        return false;
    }
    (QR11 >> (f_mod % 11)) & 1 == 1
}

// --- first-witness search ------------------------------------------------------

/// Upper bound on `t(kx−n)` over the whole enumeration, if it stays small
/// enough for pure-`u128` arithmetic (all intermediates fit below `2¹²⁶`).
fn fast_path_bound(k: u64, n: u64, b: &SearchBounds) -> Option<u128> {
    // d·t ≤ 2nx/d + d·(t_span + 1) ≤ 2n·x_max + k·x_max·(t_span + 1)
    let two_nx = 2u128
        .checked_mul(n as u128)?
        .checked_mul(b.x_max as u128)?;
    let d_max = (k as u128).checked_mul(b.x_max as u128)?;
    let window = d_max.checked_mul(b.t_span as u128 + 1)?;
    let bound = two_nx.checked_add(window)?;
    (bound <= 1u128 << 62).then_some(bound)
}

/// Deterministic bounded search for the first decomposition of `k/n`.
///
/// Enumerates `x` ascending from `⌊n/k⌋ + 1` to `x_max`; for each `x`, `t`
/// ascending from the admissibility lower bound for `t_span` values. Returns
/// the first witness, or `None` when the bounded search is exhausted (which
/// says nothing about existence beyond the bounds).
///
/// # Panics
/// If `k < 2`, `n < 2`, or the bounds are zero.
pub fn solve_first(k: u64, n: u64, b: &SearchBounds) -> Option<Decomposition> {
    assert!(k >= 2, "solve_first requires k >= 2");
    assert!(n >= 2, "solve_first requires n >= 2");
    assert!(b.x_max >= 1 && b.t_span >= 1, "bounds must be non-empty");
    if fast_path_bound(k, n, b).is_some() {
        solve_first_fast(k, n, b)
    } else {
        solve_first_big(k, n, b)
    }
}

/// Per-`x` window strategy for the `u128` hot loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum WindowMode {
    /// Incremental `t` scan with quadratic-residue sieves.
    Scan,
    /// Divisor-pair enumeration over `(nx)²`; cost independent of `t_span`.
    Divisors,
}

/// Window width above which the divisor-pair decision beats the linear scan.
const DIVISOR_PATH_MIN_SPAN: u64 = 4096;

/// Largest value covered by the shared smallest-prime-factor table (16 MiB).
const SPF_LIMIT: u64 = 1 << 22;

/// Shared smallest-prime-factor table, grown on demand and reused across
/// calls (range verification would otherwise rebuild it per denominator).
fn spf_table(limit: u64) -> Arc<Vec<u32>> {
    static CACHE: OnceLock<Mutex<Arc<Vec<u32>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(Arc::new(Vec::new())));
    let mut guard = cache.lock().expect("spf cache poisoned");
    if guard.len() <= limit as usize {
        let size = limit as usize + 1;
        let mut spf = vec![0u32; size];
        for i in 2..size {
            if spf[i] == 0 {
                for j in (i..size).step_by(i) {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                }
            }
        }
        *guard = Arc::new(spf);
    }
    guard.clone()
}

/// Prime factorization via the table, ascending primes. `v ≥ 1`.
fn factor_with_spf(mut v: u64, spf: &[u32]) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    while v > 1 {
        let p = spf[v as usize] as u64;
        let mut e = 0u32;
        while v % p == 0 {
            v /= p;
            e += 1;
        }
        out.push((p, e));
    }
    out
}

/// Merges two ascending factorizations, summing exponents.
fn merge_factors(a: &[(u64, u32)], b: &[(u64, u32)], out: &mut Vec<(u64, u32)>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}

/// Pushes every divisor of `Π pᵢ^(2aᵢ)` that is `≤ cap`, in no particular
/// order. With `cap = nx` this lists the smaller member of every divisor
/// pair of `(nx)²`.
fn push_divisors_up_to(factors: &[(u64, u32)], idx: usize, acc: u64, cap: u64, out: &mut Vec<u64>) {
    if idx == factors.len() {
        out.push(acc);
        return;
    }
    let (p, a) = factors[idx];
    let mut v = acc;
    for _ in 0..=2 * a {
        push_divisors_up_to(factors, idx + 1, v, cap, out);
        match v.checked_mul(p) {
            Some(next) if next <= cap => v = next,
            _ => break,
        }
    }
}

/// All `(t, m)` witnesses in the window `[t0, t0 + t_span)` for one `x`,
/// found through divisor pairs of `(nx)²`, ascending in `t`.
///
/// Completing the square in `m² = d²t² − 2nxt` (times `4d²`) gives
/// `(2d²t − 2nx)² − (2dm)² = (2nx)²`; with `e·f = (nx)²`, `e ≤ nx ≤ f`:
/// `t = (e + f + 2nx)/(2d²)` and `m = (f − e)/(2d)`, both required integral.
/// The map between witnesses and admissible pairs is a bijection, so this
/// finds exactly the `t` the linear scan would.
#[allow(clippy::too_many_arguments)]
fn divisor_window_candidates(
    n_factors: &[(u64, u32)],
    x: u64,
    spf: &[u32],
    d: u128,
    den: u128,
    t0: u128,
    t_span: u64,
    nx: u128,
    merged: &mut Vec<(u64, u32)>,
    divisors: &mut Vec<u64>,
    candidates: &mut Vec<(u128, u128)>,
) {
    candidates.clear();
    divisors.clear();
    let x_factors = factor_with_spf(x, spf);
    merge_factors(n_factors, &x_factors, merged);
    let cap = nx as u64; // nx ≤ 2⁶¹ under the fast-path bound
    push_divisors_up_to(merged, 0, 1, cap, divisors);
    let sq = nx * nx;
    let s2 = 2 * nx;
    let den2 = 2 * den;
    let d2 = 2 * d;
    let t_last = t0 + (t_span as u128 - 1);
    for &e in divisors.iter() {
        let e = e as u128;
        let f = sq / e; // exact: e is a divisor of (nx)² by construction
        let sum = e + f + s2;
        if sum % den2 != 0 {
            continue;
        }
        let t = sum / den2;
        if t < t0 || t > t_last {
            continue;
        }
        if (f - e) % d2 != 0 {
            continue;
        }
        candidates.push((t, (f - e) / d2));
    }
    candidates.sort_unstable();
}

/// Rebuilds one candidate through the exact path, which re-checks
/// admissibility, the square witness, `y ≥ 1`, and the rational identity.
fn verify_candidate(k: u64, n: u64, x: u64, t: u128, domain: &DomainSpec) -> Option<Decomposition> {
    let params = ProblemParams {
        k,
        n,
        x,
        // t ≤ fast_path_bound ≤ 2⁶² < u64::MAX
        t: u64::try_from(t).expect("t bounded by fast-path check"),
    };
    decompose(&params, domain)
}

/// `u128` hot loop. Only valid when [`fast_path_bound`] accepted the inputs.
fn solve_first_fast(k: u64, n: u64, b: &SearchBounds) -> Option<Decomposition> {
    let mode = if b.t_span > DIVISOR_PATH_MIN_SPAN && b.x_max <= SPF_LIMIT && n <= SPF_LIMIT {
        WindowMode::Divisors
    } else {
        WindowMode::Scan
    };
    solve_first_fast_with(k, n, b, mode)
}

/// The hot loop with an explicit window strategy; both strategies return the
/// identical first witness (asserted by tests straddling the threshold).
fn solve_first_fast_with(k: u64, n: u64, b: &SearchBounds, mode: WindowMode) -> Option<Decomposition> {
    let domain = DomainSpec::default();
    let x_start = n / k + 1;
    let spf = match mode {
        WindowMode::Divisors => Some(spf_table(b.x_max.max(n))),
        WindowMode::Scan => None,
    };
    let n_factors = spf.as_ref().map(|s| factor_with_spf(n, s));
    let mut merged = Vec::new();
    let mut divisors = Vec::new();
    let mut candidates = Vec::new();
    for x in x_start..=b.x_max {
        let d = k as u128 * x as u128 - n as u128; // ≥ 1 since kx > n
        let den = d * d;
        let num = 2 * n as u128 * x as u128;
        // Smallest admissible t: F(t) = den·t² − num·t ≥ 0 and increasing.
        let t0 = num.div_ceil(den);
        if let (Some(spf), Some(n_factors)) = (spf.as_deref(), n_factors.as_deref()) {
            divisor_window_candidates(
                n_factors,
                x,
                spf,
                d,
                den,
                t0,
                b.t_span,
                num / 2,
                &mut merged,
                &mut divisors,
                &mut candidates,
            );
            for &(t, _m) in candidates.iter() {
                if let Some(dec) = verify_candidate(k, n, x, t, &domain) {
                    return Some(dec);
                }
            }
            continue;
        }
        let mut t = t0;
        let mut f = den * t * t - num * t;
        let mut delta = den * (2 * t + 1) - num; // F(t+1) − F(t)
        let den2 = 2 * den;
        let mut f_mod = (f % MOD_SIEVE as u128) as u64;
        let mut delta_mod = (delta % MOD_SIEVE as u128) as u64;
        let den2_mod = ((den2) % MOD_SIEVE as u128) as u64;
        // t advances in lockstep with four pieces of incremental state, so a
        // range-based loop would not simplify anything.
        #[allow(clippy::explicit_counter_loop)]
        for _ in 0..b.t_span {
            debug_assert_eq!(f_mod as u128, f % MOD_SIEVE as u128);
            if maybe_square(f, f_mod) {
                let m = f.isqrt();
                if m * m == f && m < d * t {
                    if let Some(dec) = verify_candidate(k, n, x, t, &domain) {
                        return Some(dec);
                    }
                }
            }
            f += delta;
            delta += den2;
            f_mod += delta_mod;
            if f_mod >= MOD_SIEVE {
                f_mod -= MOD_SIEVE;
            }
            delta_mod += den2_mod;
            if delta_mod >= MOD_SIEVE {
                delta_mod -= MOD_SIEVE;
            }
            t += 1;
        }
    }
    None
}

/// Arbitrary-precision fallback, same enumeration order. Candidate `t`
/// values beyond `u64` are skipped: they cannot form a representable
/// [`ProblemParams`] in the first place.
fn solve_first_big(k: u64, n: u64, b: &SearchBounds) -> Option<Decomposition> {
    let domain = DomainSpec::default();
    let x_start = n / k + 1;
    for x in x_start..=b.x_max {
        let d = BigUint::from(k) * x - n;
        let den = &d * &d;
        let num = 2u32 * BigUint::from(n) * x;
        let t0 = num.div_ceil(&den);
        let Some(t0) = t0.to_u64() else {
            continue; // whole window beyond representable t
        };
        for t in t0..t0.saturating_add(b.t_span) {
            let params = ProblemParams { k, n, x, t };
            if let Some(dec) = decompose(&params, &domain) {
                return Some(dec);
            }
        }
    }
    None
}

// --- exact-zero search ----------------------------------------------------------

/// Smallest `x > n/k` with `(kx−n)² | 2nx`, returning `t = 2nx/(kx−n)²`,
/// the unique `t` with `F = 0`. The divisibility test is exact — no square
/// testing is involved.
///
/// # Panics
/// If `k < 2` or `n < 2`.
pub fn find_zero_pair(k: u64, n: u64, x_max: u64) -> Option<(u64, u64)> {
    assert!(k >= 2, "find_zero_pair requires k >= 2");
    assert!(n >= 2, "find_zero_pair requires n >= 2");
    let x_start = n / k + 1;
    // u64 loop when no intermediate can overflow: d ≤ k·x_max with d² and
    // 2n·x_max both below u64::MAX.
    let small = (k as u128 * x_max as u128) <= u32::MAX as u128
        && 2u128 * n as u128 * x_max as u128 <= u64::MAX as u128;
    if small {
        for x in x_start..=x_max {
            let d = k * x - n;
            let den = d * d;
            let num = 2 * n * x;
            if num % den == 0 {
                return Some((x, num / den));
            }
        }
    } else {
        for x in x_start..=x_max {
            let d = k as u128 * x as u128 - n as u128;
            let den = d * d;
            let num = 2 * n as u128 * x as u128;
            if num % den == 0 {
                if let Ok(t) = u64::try_from(num / den) {
                    return Some((x, t));
                }
                // t beyond u64 is unrepresentable; keep scanning.
            }
        }
    }
    None
}

// --- range verification -----------------------------------------------------------

/// Runs [`solve_first`] for every `n` in `[n_start, n_end]` (in parallel over
/// independent `n`; results are order-preserved and scheduling-independent).
/// Every witness is re-verified before the report is assembled.
pub fn verify_range(
    k: u64,
    n_start: u64,
    n_end: u64,
    b: &SearchBounds,
) -> Result<RangeReport, SearchError> {
    if k < 2 {
        return Err(SearchError::KTooSmall { k });
    }
    if n_start < 2 {
        return Err(SearchError::RangeStartTooSmall { n_start });
    }
    if n_start > n_end {
        return Err(SearchError::EmptyRange { n_start, n_end });
    }
    if b.x_max == 0 || b.t_span == 0 {
        return Err(SearchError::EmptyBounds);
    }
    let started = Instant::now();
    let per_n: Vec<(u64, Option<Decomposition>)> = (n_start..=n_end)
        .into_par_iter()
        .map(|n| (n, solve_first(k, n, b)))
        .collect();
    let mut unsolved = Vec::new();
    let mut witnesses = Vec::with_capacity(per_n.len());
    for (n, outcome) in per_n {
        match outcome {
            Some(dec) => {
                assert!(
                    verify_decomposition(k, n, dec.params.x, &dec.y, &dec.z),
                    "internal error: witness for n = {n} failed exact re-verification"
                );
                witnesses.push(dec);
            }
            None => unsolved.push(n),
        }
    }
    Ok(RangeReport {
        k,
        n_start,
        n_end,
        solved_count: witnesses.len() as u64,
        unsolved,
        witnesses,
        elapsed: started.elapsed(),
    })
}

/// Counts `n ∈ [2, N]` admitting an exact `F = 0` pair within `x ≤ x_max`.
/// Each counted `n` carries a verified `y = z = t(kx−n)` witness.
pub fn zero_density(k: u64, n_max: u64, x_max: u64) -> DensityReport {
    assert!(k >= 2, "zero_density requires k >= 2");
    assert!(n_max >= 2, "zero_density requires N >= 2");
    let zero_count = (2..=n_max)
        .into_par_iter()
        .filter(|&n| match find_zero_pair(k, n, x_max) {
            Some((x, t)) => {
                let gap = BigUint::from(k as u128 * x as u128 - n as u128);
                let y = BigUint::from(t) * gap;
                verify_decomposition(k, n, x, &y, &y)
            }
            None => false,
        })
        .count() as u64;
    DensityReport {
        k,
        n_max,
        zero_count,
        fraction: zero_count as f64 / (n_max - 1) as f64,
    }
}
