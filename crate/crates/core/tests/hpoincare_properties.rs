use hilbert_poincare::hpoincare::{
    evaluate, modularity_defect, tail_bound, term, CosetRep, GammaInfConvention, Point, PoincareSpec, Sl2Matrix,
    TruncationPolicy, Weight,
};
use hilbert_poincare::qfield::{make_field, DualIndex, Integral, RealQuadraticField};
use num_complex::Complex;
use proptest::prelude::*;
use rand_like::Lcg;

/// Small deterministic generator for the calibration spot checks.
mod rand_like {
    pub struct Lcg(pub u64);

    impl Lcg {
        pub fn next_f64(&mut self) -> f64 {
            self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (self.0 >> 11) as f64 / (1u64 << 53) as f64
        }

        pub fn pick<T: Copy>(&mut self, xs: &[T]) -> T {
            xs[(self.next_f64() * xs.len() as f64) as usize % xs.len()]
        }
    }
}

fn q5() -> RealQuadraticField {
    make_field(5).unwrap()
}

fn spec(k: i64, level: i64, convention: GammaInfConvention) -> PoincareSpec {
    let f = q5();
    let level = f.ideal_from_gen(Integral::new(level, 0)).unwrap();
    PoincareSpec::new(f, Weight::parallel(k).unwrap(), DualIndex::new(&f, Integral::OMEGA), level, convention).unwrap()
}

fn z0() -> Point<f64> {
    [Complex::new(0.3, 1.2), Complex::new(-0.1, 1.1)]
}

/// `|evaluate(fine) - evaluate(coarse)| <= tail(coarse)` in at least 95% of
/// random configurations.
#[test]
fn tail_estimate_calibration() {
    let mut rng = Lcg(0x5eed);
    let conventions = [GammaInfConvention::UnitExtended, GammaInfConvention::translations_only()];
    let (mut covered, total) = (0, 60);
    for _ in 0..total {
        let conv = rng.pick(&conventions);
        let k = rng.pick(&[4, 6, 8, 10, 14]);
        let level = rng.pick(&[1, 2, 3]);
        let cutoff = rng.pick(&[1e-4, 1e-5, 1e-6, 1e-7]);
        let z: Point<f64> = [
            Complex::new(rng.next_f64() - 0.5, 0.9 + 0.6 * rng.next_f64()),
            Complex::new(rng.next_f64() - 0.5, 0.9 + 0.6 * rng.next_f64()),
        ];
        let s = spec(k, level, conv);
        let y = [z[0].im, z[1].im];
        let coarse = evaluate(&s, &z, &TruncationPolicy::for_cutoff(&s, y, cutoff).unwrap()).unwrap();
        let fine = evaluate(&s, &z, &TruncationPolicy::for_cutoff(&s, y, cutoff * 1e-3).unwrap()).unwrap();
        if (coarse.value - fine.value).norm() <= coarse.tail_estimate {
            covered += 1;
        }
    }
    assert!(covered * 100 >= 95 * total, "{covered}/{total}");
}

#[test]
fn tail_never_grows_with_the_height_box() {
    for conv in [GammaInfConvention::UnitExtended, GammaInfConvention::translations_only()] {
        for (k, level) in [(4, 1), (6, 2), (10, 1)] {
            let s = spec(k, level, conv);
            let mut last = f64::INFINITY;
            let mut h = 0.75;
            for _ in 0..6 {
                let t = tail_bound(&s, &z0(), &TruncationPolicy::new(h, 1e-7)).unwrap();
                assert!(t <= last * (1.0 + 1e-12), "{conv:?} k={k} level={level} h={h}: {t} > {last}");
                last = t;
                h *= 2.0;
            }
        }
    }
}

/// The three fixed Gamma_0((2)) matrices of the consistency suite.
#[test]
fn modularity_on_gamma0_two() {
    let f = q5();
    let s = spec(4, 2, GammaInfConvention::translations_only());
    let z = z0();
    let p = TruncationPolicy::for_cutoff(&s, [z[0].im, z[1].im], 1e-8).unwrap();
    let mats = [
        Sl2Matrix::new(&f, Integral::ONE, Integral::ZERO, Integral::new(2, 0), Integral::ONE).unwrap(),
        Sl2Matrix::new(&f, Integral::ONE, Integral::ONE, Integral::new(2, 0), Integral::new(3, 0)).unwrap(),
        Sl2Matrix::new(&f, Integral::new(1, 2), Integral::ONE, Integral::new(0, 2), Integral::ONE).unwrap(),
    ];
    for m in &mats {
        let defect = modularity_defect(&s, &z, m, &p).unwrap();
        assert!(defect < 1e-4, "{m:?}: {defect}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn terms_are_periodic(lam_a in -5i64..5, lam_b in -5i64..5, x1 in -1.0f64..1.0, x2 in -1.0f64..1.0) {
        let s = spec(6, 1, GammaInfConvention::UnitExtended);
        let f = s.field;
        let lam = f.embed::<f64>(Integral::new(lam_a, lam_b));
        let z: Point<f64> = [Complex::new(x1, 1.2), Complex::new(x2, 0.95)];
        let shifted: Point<f64> = [z[0] + lam[0], z[1] + lam[1]];
        let id = CosetRep::identity();
        let a = term(&id, &z, &s);
        let b = term(&id, &shifted, &s);
        prop_assert!((a - b).norm() < 1e-12 * a.norm().max(1e-300));
    }

    #[test]
    fn completion_choice_does_not_matter(mu_a in -4i64..4, mu_b in -4i64..4, g in 0usize..3) {
        let s = spec(6, 1, GammaInfConvention::UnitExtended);
        let f = s.field;
        let rows = [(Integral::new(2, 0), Integral::OMEGA), (Integral::new(1, 1), Integral::new(3, 0)), (Integral::OMEGA, Integral::new(5, 2))];
        let (gamma, delta) = rows[g];
        let base = CosetRep::from_bottom_row(&f, gamma, delta).unwrap();
        let mu = Integral::new(mu_a, mu_b);
        let other = CosetRep { a: base.a + f.mul(mu, gamma), b: base.b + f.mul(mu, delta), ..base };
        prop_assert_eq!(other.determinant(&f), Integral::ONE);
        let t0 = term(&base, &z0(), &s);
        prop_assert!((term(&other, &z0(), &s) - t0).norm() <= 1e-11 * t0.norm());
    }
}
