use hilbert_poincare::classical::{
    bessel_j, delta_coefficients, euler_phi, kloosterman, mod_inverse, petersson_coefficient, ClassicalParams,
};
use num_integer::Integer;
use proptest::prelude::*;

fn p(m: i64, n: i64, k: i64, q: i64) -> f64 {
    petersson_coefficient::<f64>(&ClassicalParams::new(m, n, k, q).unwrap(), 1000).unwrap().value
}

fn divisor_count(c: i64) -> i64 {
    (1..=c).filter(|d| c % d == 0).count() as i64
}

#[test]
fn kloosterman_symmetry_and_bounds() {
    for c in 1..=120 {
        for m in 1..=6 {
            for n in 1..=6 {
                let s: f64 = kloosterman(m, n, c);
                assert!((s - kloosterman::<f64>(n, m, c)).abs() < 1e-9, "S({m},{n};{c})");
                assert!(s.abs() <= euler_phi(c) as f64 + 1e-9);
                let g = m.gcd(&n).gcd(&c) as f64;
                let weil = divisor_count(c) as f64 * (g * c as f64).sqrt();
                assert!(s.abs() <= weil + 1e-9, "Weil bound at S({m},{n};{c}) = {s}");
            }
        }
    }
}

/// `S(m,n;c1 c2) = S(m c2', n c2'; c1) S(m c1', n c1'; c2)` with `c2 c2' = 1 mod c1`
/// and `c1 c1' = 1 mod c2`.
#[test]
fn kloosterman_twisted_multiplicativity() {
    for c1 in 1..=14i64 {
        for c2 in 1..=14i64 {
            if c1.gcd(&c2) != 1 || c1 * c2 > 200 {
                continue;
            }
            let i2 = mod_inverse(c2, c1).unwrap_or(0);
            let i1 = mod_inverse(c1, c2).unwrap_or(0);
            for (m, n) in [(1, 1), (1, 2), (2, 3), (5, 7)] {
                let lhs: f64 = kloosterman(m, n, c1 * c2);
                let rhs = kloosterman::<f64>(m * i2, n * i2, c1) * kloosterman::<f64>(m * i1, n * i1, c2);
                assert!((lhs - rhs).abs() < 1e-9, "c = {c1} * {c2}, (m, n) = ({m}, {n}): {lhs} vs {rhs}");
            }
        }
    }
}

#[test]
fn ramanujan_sums_at_n_zero_multiple() {
    // S(1, c; c) = S(1, 0; c) is the Ramanujan sum c_c(1) = mu(c)
    let mobius = [0, 1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0];
    for c in 1..=12 {
        let s: f64 = kloosterman(1, c, c);
        assert!((s - mobius[c as usize] as f64).abs() < 1e-12, "c = {c}: {s}");
    }
}

#[test]
fn tau_is_multiplicative_with_the_prime_square_rule() {
    let tau = delta_coefficients(200).unwrap();
    let t = |n: usize| tau[n - 1];
    for m in 1..=14usize {
        for n in 1..=14usize {
            if m.gcd(&n) == 1 {
                assert_eq!(t(m * n), t(m) * t(n), "tau({m} * {n})");
            }
        }
    }
    for p in [2usize, 3, 5, 7, 11, 13] {
        assert_eq!(t(p * p), t(p) * t(p) - (p as i128).pow(11), "tau({p}^2)");
    }
    for p in [2usize, 3, 5, 7, 11, 13, 101, 197, 199] {
        let bound = 2.0 * (p as f64).powf(5.5);
        assert!((t(p) as f64).abs() <= bound, "Deligne bound at {p}");
    }
    assert_eq!(t(1), 1);
    assert_eq!(t(10), -115920);
}

/// The level-one weight-12 cusp space is spanned by Delta, so every
/// `P_m` is a multiple of it.
#[test]
fn weight_twelve_poincare_series_are_multiples_of_delta() {
    let tau = delta_coefficients(6).unwrap();
    for m in 1..=3 {
        let base = p(m, 1, 12, 1);
        for n in 2..=6 {
            let ratio = p(m, n, 12, 1) / base;
            assert!((ratio - tau[n as usize - 1] as f64).abs() < 1e-4 * (tau[n as usize - 1] as f64).abs(), "m = {m}, n = {n}: {ratio}");
        }
    }
}

#[test]
fn level_one_weights_below_twelve_vanish() {
    for k in [4, 6, 8, 10, 14] {
        for n in 1..=3 {
            let r = petersson_coefficient::<f64>(&ClassicalParams::new(1, n, k, 1).unwrap(), 1000).unwrap();
            assert!(r.value.abs() <= r.tail_bound + 1e-11, "k = {k}, n = {n}: {} > {}", r.value, r.tail_bound);
            // the c <= 1000 cut leaves about 3e-7 at k = 4
            if k >= 6 {
                assert!(r.value.abs() < 1e-8, "k = {k}, n = {n}: {}", r.value);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bessel_three_term_recurrence(order in 1u32..40, x in 0.05f64..80.0) {
        let lo = bessel_j(order - 1, x).unwrap();
        let mid = bessel_j(order, x).unwrap();
        let hi = bessel_j(order + 1, x).unwrap();
        let scale = lo.abs().max(hi.abs()).max(mid.abs() * 2.0 * order as f64 / x).max(1e-300);
        prop_assert!((lo + hi - 2.0 * order as f64 / x * mid).abs() <= 1e-11 * scale);
    }

    #[test]
    fn bessel_is_bounded_by_one(order in 0u32..60, x in 0.0f64..200.0) {
        prop_assert!(bessel_j(order, x).unwrap().abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn petersson_symmetry(m in 1i64..5, n in 1i64..5, k in prop::sample::select(vec![12i64, 16, 20]), q in 1i64..4) {
        // p_m(n) m^{k-1} = p_n(m) n^{k-1}
        let a = p(m, n, k, q) * (m as f64).powi(k as i32 - 1);
        let b = p(n, m, k, q) * (n as f64).powi(k as i32 - 1);
        prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(b.abs()).max(1.0));
    }

    #[test]
    fn kloosterman_is_periodic_and_unit_invariant(m in -30i64..30, n in -30i64..30, c in 1i64..60, u in 1i64..60) {
        let s: f64 = kloosterman(m, n, c);
        prop_assert!((s - kloosterman::<f64>(m + c, n - 2 * c, c)).abs() < 1e-9);
        if let Some(inv) = mod_inverse(u, c) {
            prop_assert!((s - kloosterman::<f64>(m * u, n * inv, c)).abs() < 1e-9);
        }
    }
}
