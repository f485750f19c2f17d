use hilbert_poincare::qfield::{make_field, DualIndex, FieldElement, Integral, RealQuadraticField, EUCLIDEAN_D};
use num_rational::Rational64;
use proptest::prelude::*;

fn field_strategy() -> impl Strategy<Value = RealQuadraticField> {
    proptest::sample::select(EUCLIDEAN_D.to_vec()).prop_map(|d| make_field(d).unwrap())
}

fn integral(range: i64) -> impl Strategy<Value = Integral> {
    (-range..=range, -range..=range).prop_map(|(a, b)| Integral::new(a, b))
}

fn coords(h: i64) -> impl Iterator<Item = Integral> {
    (-h..=h).flat_map(move |a| (-h..=h).map(move |b| Integral::new(a, b)))
}

#[test]
fn trace_additive_and_norm_multiplicative_exhaustive() {
    for d in EUCLIDEAN_D {
        let f = make_field(d).unwrap();
        let xs: Vec<_> = coords(6).collect();
        for &x in &xs {
            for &y in &xs {
                assert_eq!(f.trace(x + y), f.trace(x) + f.trace(y));
                assert_eq!(f.norm(f.mul(x, y)), f.norm(x) * f.norm(y));
            }
        }
    }
}

/// Every unimodular pair with coordinates in [-20, 20] completes exactly.
#[test]
fn complete_pair_exhaustive_to_height_20() {
    for d in [5, 2] {
        let f = make_field(d).unwrap();
        let all: Vec<_> = coords(20).collect();
        let mut completed = 0usize;
        for &g in &all {
            for &dl in &all {
                if g.is_zero() && dl.is_zero() {
                    continue;
                }
                if !f.is_unimodular_pair(g, dl).unwrap() {
                    assert!(f.complete_pair(g, dl).is_err());
                    continue;
                }
                let (a, b) = f.complete_pair(g, dl).unwrap();
                assert_eq!(f.mul(a, dl) - f.mul(b, g), Integral::ONE, "d = {d}: ({g}, {dl})");
                completed += 1;
            }
        }
        assert!(completed > all.len() * all.len() / 2, "d = {d}: {completed}");
    }
}

#[test]
fn complete_pair_exhaustive_small_height_every_field() {
    for d in EUCLIDEAN_D {
        let f = make_field(d).unwrap();
        let all: Vec<_> = coords(5).collect();
        for &g in &all {
            for &dl in &all {
                if (g.is_zero() && dl.is_zero()) || !f.is_unimodular_pair(g, dl).unwrap() {
                    continue;
                }
                let (a, b) = f.complete_pair(g, dl).unwrap();
                assert_eq!(f.mul(a, dl) - f.mul(b, g), Integral::ONE, "d = {d}: ({g}, {dl})");
            }
        }
    }
}

proptest! {
    #[test]
    fn embeddings_agree_with_trace_and_norm(f in field_strategy(), x in integral(1000)) {
        let e = f.embed::<f64>(x);
        let scale = e[0].abs().max(e[1].abs()).max(1.0);
        prop_assert!((f.trace(x) as f64 - (e[0] + e[1])).abs() <= 1e-12 * scale);
        prop_assert!((f.norm(x) as f64 - e[0] * e[1]).abs() <= 1e-12 * scale * scale);
    }

    #[test]
    fn total_positivity_matches_embeddings(f in field_strategy(), x in integral(1000)) {
        let e = f.embed::<f64>(x);
        // skip points where rounding could flip a sign
        prop_assume!(e[0].abs() > 1e-9 && e[1].abs() > 1e-9);
        prop_assert_eq!(f.is_totally_positive(FieldElement::from(x)), e[0] > 0.0 && e[1] > 0.0);
    }

    #[test]
    fn dual_pairing_is_integral(f in field_strategy(), n in integral(200), lam in integral(200)) {
        let mu = DualIndex::new(&f, n);
        let exact = f.trace_element(f.mul_element(mu.element(&f), lam.into()));
        prop_assert_eq!(exact, Rational64::from_integer(mu.pairing(lam)));
        prop_assert!(mu.is_consistent(&f));
    }

    #[test]
    fn frequency_pairs_round_trip(f in field_strategy(), r in -50i64..50, s in -50i64..50) {
        let mu = DualIndex::from_freq(&f, r, s);
        prop_assert_eq!(mu.freq, (r, s));
        prop_assert!(mu.is_consistent(&f));
    }

    #[test]
    fn ideals_contain_multiples_of_their_basis(f in field_strategy(), g in integral(30), x in integral(50)) {
        prop_assume!(!g.is_zero());
        let ideal = f.ideal_from_gen(g).unwrap();
        prop_assert_eq!(ideal.norm, f.norm(g).abs());
        prop_assert!(ideal.contains(g));
        for b in ideal.basis() {
            prop_assert!(ideal.contains(f.mul(x, b)));
        }
        prop_assert!(ideal.contains(f.mul(x, g)));
    }

    #[test]
    fn ext_gcd_identity(f in field_strategy(), x in integral(100), y in integral(100)) {
        prop_assume!(!(x.is_zero() && y.is_zero()));
        let (g, s, t) = f.ext_gcd(x, y).unwrap();
        prop_assert_eq!(f.mul(s, x) + f.mul(t, y), g);
        if !g.is_zero() {
            prop_assert!(f.div_exact(x, g).is_some() && f.div_exact(y, g).is_some());
        }
    }

    #[test]
    fn orbit_representative_is_unit_invariant(f in field_strategy(), x in integral(40), m in -3i32..=3) {
        prop_assume!(!x.is_zero());
        let u = f.unit_power(m).unwrap();
        let rep = f.canonical_orbit_rep(x).unwrap().rep;
        prop_assert_eq!(f.canonical_orbit_rep(f.mul(x, u)).unwrap().rep, rep);
        prop_assert_eq!(f.canonical_orbit_rep(-x).unwrap().rep, rep);
        prop_assert!(f.is_canonical_orbit_rep(rep).unwrap());
    }
}
