//! Property-based invariants of the exact kernel, checked against independent
//! reference computations (divisor enumeration, exhaustive scans, and the
//! closed-form analytic embedding) over randomized inputs.

use eszeta_core::{
    decompose, is_admissible, params_for, perfect_square_witness, solve_first,
    verify_decomposition, ComplexValue, DomainSpec, ProblemParams, RootBranch, Scheme,
    SearchBounds,
};
use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn desk_domain() -> DomainSpec {
    DomainSpec::new(2).unwrap()
}

/// Independent witness construction for fixed `(k, n, x, t)`: a decomposition
/// exists exactly when `y·z = 2nxt` has a divisor pair with `y + z = 2t(kx−n)`
/// and `y ≤ z`. Returns that pair without touching `F` or square roots.
fn divisor_pair_reference(k: u64, n: u64, x: u64, t: u64) -> Option<(u64, u64)> {
    let d = k * x - n;
    let sum = 2 * t * d;
    let product = 2 * n * x * t;
    let mut y = 1;
    while y * y <= product {
        if product % y == 0 {
            let z = product / y;
            if y + z == sum {
                return Some((y, z));
            }
        }
        y += 1;
    }
    None
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    /// Over a full `t` window, `decompose` returns a witness exactly when the
    /// divisor-pair reference finds one, and the two constructions agree on
    /// `(y, z)` — equivalence in both directions, not just soundness.
    #[test]
    fn decompose_agrees_with_divisor_enumeration(
        k in 2u64..=8,
        x in 1u64..=24,
        n_seed in 2u64..=200,
    ) {
        prop_assume!(k * x > 2);
        let n = 2 + n_seed % (k * x - 2);
        let domain = desk_domain();
        for t in 1u64..=20 {
            let p = ProblemParams::new(k, n, x, t).unwrap();
            let found = decompose(&p, &domain)
                .map(|dec| (dec.y.to_u64().unwrap(), dec.z.to_u64().unwrap()));
            let expected = if is_admissible(&p, &domain) {
                divisor_pair_reference(k, n, x, t)
            } else {
                None
            };
            prop_assert_eq!(
                found, expected,
                "k = {}, n = {}, x = {}, t = {}", k, n, x, t
            );
        }
    }
}

proptest! {
    /// Growing either search bound never loses solvability, and the first
    /// witness can only move earlier in the `(x, t)` scan order.
    #[test]
    fn widening_bounds_keeps_solvability(
        k in 2u64..=6,
        n in 2u64..=60,
        x_max in 4u64..=40,
        t_span in 2u64..=30,
        dx in 0u64..=20,
        dt in 0u64..=20,
    ) {
        let narrow = SearchBounds::new(x_max, t_span).unwrap();
        let Some(first) = solve_first(k, n, &narrow) else {
            return Ok(());
        };
        let wide = SearchBounds::new(x_max + dx, t_span + dt).unwrap();
        let again = solve_first(k, n, &wide);
        prop_assert!(again.is_some(), "widened bounds lost k = {}, n = {}", k, n);
        let again = again.unwrap();
        prop_assert!(
            (again.params.x, again.params.t) <= (first.params.x, first.params.t),
            "first witness moved later: ({}, {}) -> ({}, {})",
            first.params.x, first.params.t, again.params.x, again.params.t
        );
    }

    /// `perfect_square_witness` accepts every square (including values far
    /// beyond `u64`) and rejects every offset strictly between consecutive
    /// squares.
    #[test]
    fn square_witness_separates_squares_from_neighbours(
        m in 1u64..(1u64 << 62),
        offset_seed in 1u64..=u64::MAX,
    ) {
        let root = BigUint::from(m);
        let square = BigInt::from(&root * &root);
        prop_assert_eq!(perfect_square_witness(&square), Some(root));

        // (m + 1)² − m² = 2m + 1, so any offset in 1..=2m is a non-square.
        let offset = 1 + offset_seed % (2 * m);
        let bumped = square + BigInt::from(offset);
        prop_assert_eq!(perfect_square_witness(&bumped), None);
    }

    /// `solve_first` returns exactly the first admissible square in the
    /// documented scan order (`x` ascending from `⌊n/k⌋ + 1`, then `t_span`
    /// values of `t` from each `x`'s admissibility threshold), as reproduced
    /// by a direct exhaustive loop over the same window.
    #[test]
    fn first_witness_matches_exhaustive_scan_order(
        k in 2u64..=6,
        n in 2u64..=80,
        x_max in 2u64..=32,
        t_span in 1u64..=24,
    ) {
        let domain = desk_domain();
        let mut reference = None;
        'outer: for x in (n / k + 1)..=x_max {
            let d = k * x - n;
            let t0 = (2 * n * x).div_ceil(d * d);
            for t in t0..t0 + t_span {
                let p = ProblemParams::new(k, n, x, t).unwrap();
                if let Some(dec) = decompose(&p, &domain) {
                    reference = Some(dec);
                    break 'outer;
                }
            }
        }
        let bounds = SearchBounds::new(x_max, t_span).unwrap();
        prop_assert_eq!(solve_first(k, n, &bounds), reference);
    }

    /// Every integer search witness embeds into the analytic family at
    /// `s = 1`: the free-`(x, t)` scheme reproduces `y` and `z` as real
    /// values to floating-point accuracy.
    #[test]
    fn general_scheme_embeds_random_search_witnesses(
        k in 2u64..=6,
        n in 2u64..=60,
    ) {
        let bounds = SearchBounds::new(48, 32).unwrap();
        let Some(dec) = solve_first(k, n, &bounds) else {
            return Ok(());
        };
        let scheme = Scheme::GeneralXT {
            x: ComplexValue::new(dec.params.x as f64, 0.0),
            t: ComplexValue::new(dec.params.t as f64, 0.0),
        };
        let triple = params_for(scheme, k as u32, n, ComplexValue::new(1.0, 0.0)).unwrap();
        for (exact, analytic) in [
            (&dec.y, triple.y_s),
            (&dec.z, triple.z_s),
            (&dec.m, triple.m_s),
        ] {
            let exact = exact.to_u64().unwrap() as f64;
            prop_assert!(analytic.im.abs() <= 1e-9 * (1.0 + exact));
            prop_assert!(
                (analytic.re - exact).abs() <= 1e-9 * (1.0 + exact),
                "k = {}, n = {}: expected {}, got {}", k, n, exact, analytic.re
            );
        }
    }

    /// Verification is symmetric in `y` and `z`, and rejects any off-by-one
    /// perturbation of `z` — the identity pins `z` uniquely once
    /// `(k, n, x, y)` are fixed.
    #[test]
    fn verification_is_symmetric_and_rejects_perturbations(
        k in 2u64..=8,
        n in 2u64..=80,
    ) {
        let bounds = SearchBounds::new(64, 40).unwrap();
        let Some(dec) = solve_first(k, n, &bounds) else {
            return Ok(());
        };
        let (x, y, z) = (dec.params.x, &dec.y, &dec.z);
        prop_assert!(verify_decomposition(k, n, x, y, z));
        prop_assert!(verify_decomposition(k, n, x, z, y));

        let one = BigUint::from(1u64);
        prop_assert!(!verify_decomposition(k, n, x, y, &(z + &one)));
        let shrunk = z - &one;
        if shrunk >= one {
            prop_assert!(!verify_decomposition(k, n, x, y, &shrunk));
        }
    }

    /// Negating the root branch swaps `y_s` and `z_s` for random real inputs
    /// of the free scheme, never only for the hand-picked unit-test points.
    #[test]
    fn branch_swap_holds_for_random_general_inputs(
        k in 2u32..=8,
        n in 1u64..=50,
        x_scale in 1.0f64..8.0,
        t in 0.25f64..4.0,
        sigma in 1.1f64..3.0,
    ) {
        let s = ComplexValue::new(sigma, 0.0);
        // Keep k·x − n^σ bounded away from zero so both branches exist.
        let x = x_scale + (n as f64).powf(sigma) / k as f64;
        let scheme = Scheme::GeneralXT {
            x: ComplexValue::new(x, 0.0),
            t: ComplexValue::new(t, 0.0),
        };
        let plus =
            eszeta_core::params_for_branch(scheme, k, n, s, RootBranch::Principal).unwrap();
        let minus =
            eszeta_core::params_for_branch(scheme, k, n, s, RootBranch::Negated).unwrap();
        prop_assert_eq!(plus.y_s, minus.z_s);
        prop_assert_eq!(plus.z_s, minus.y_s);
        prop_assert_eq!(plus.m_s, -minus.m_s);
    }
}
