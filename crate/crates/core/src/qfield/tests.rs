use num_rational::Rational64;

use super::*;

fn q5() -> RealQuadraticField {
    make_field(5).unwrap()
}

fn q2() -> RealQuadraticField {
    make_field(2).unwrap()
}

fn close(a: [f64; 2], b: [f64; 2]) -> bool {
    (a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12
}

#[test]
fn field_construction() {
    let f = q5();
    assert_eq!((f.d(), f.disc(), f.omega_kind(), f.is_euclidean()), (5, 5, OmegaKind::HalfInteger, true));
    let f = q2();
    assert_eq!((f.disc(), f.omega_kind(), f.is_euclidean()), (8, OmegaKind::Sqrt, true));
    assert!(make_field(12).is_err());
    assert!(make_field(1).is_err());
    assert!(make_field(11).is_err());
    assert!(RealQuadraticField::new_lenient(11).is_ok());
}

#[test]
fn embeddings() {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    assert!(close(q5().embed::<f64>(Integral::OMEGA), [phi, 1.0 - phi]));
    assert!(close(q5().embed::<f64>(Integral::ONE), [1.0, 1.0]));
    let r2 = 2f64.sqrt();
    assert!(close(q2().embed::<f64>(Integral::new(1, 1)), [1.0 + r2, 1.0 - r2]));
}

#[test]
fn trace_and_norm() {
    let f = q5();
    assert_eq!((f.trace(Integral::OMEGA), f.norm(Integral::OMEGA)), (1, -1));
    assert_eq!((f.trace(Integral::ZERO), f.norm(Integral::ZERO)), (0, 0));
    let x = Integral::new(1, 1);
    assert_eq!((q2().trace(x), q2().norm(x)), (2, -1));
}

#[test]
fn total_positivity() {
    let f = q5();
    assert!(f.is_totally_positive(Integral::new(2, 1).into()));
    assert!(!f.is_totally_positive(Integral::OMEGA.into()));
    assert!(!f.is_totally_positive(FieldElement::zero()));
}

#[test]
fn codifferent() {
    let f = q5();
    let g = f.codifferent_gen();
    assert_eq!(f.trace_element(g), Rational64::from_integer(0));
    assert_eq!(f.trace_element(f.mul_element(g, Integral::OMEGA.into())), Rational64::from_integer(1));
    let f = q2();
    let g = f.codifferent_gen();
    assert_eq!(g, FieldElement::new(Rational64::from_integer(0), Rational64::new(1, 4)));
    assert_eq!(f.trace_element(f.mul_element(g, Integral::OMEGA.into())), Rational64::from_integer(1));
    assert_eq!(f.trace_element(f.mul_element(g, FieldElement::zero())), Rational64::from_integer(0));
}

#[test]
fn ideals() {
    let f = q5();
    let two = f.ideal_from_gen(Integral::new(2, 0)).unwrap();
    assert_eq!(f.ideal_norm(&two), 4);
    assert!(f.ideal_contains(&two, Integral::new(0, 2)));
    assert!(!f.ideal_contains(&two, Integral::OMEGA));
    let unit = f.ideal_from_gen(Integral::ONE).unwrap();
    assert!(unit.is_unit() && unit.norm == 1);
    assert!(f.ideal_contains(&unit, Integral::new(3, -7)));
    let root5 = f.ideal_from_gen(Integral::new(-1, 2)).unwrap();
    assert_eq!(root5.norm, f.norm(Integral::new(-1, 2)).abs());
    assert_eq!(root5.norm, 5);
    assert!(f.ideal_from_gen(Integral::ZERO).is_err());
}

#[test]
fn unimodular_pairs() {
    let f = q5();
    assert!(f.is_unimodular_pair(Integral::ZERO, Integral::ONE).unwrap());
    assert!(!f.is_unimodular_pair(Integral::new(2, 0), Integral::new(0, 2)).unwrap());
    assert!(f.is_unimodular_pair(Integral::new(2, 0), Integral::OMEGA).unwrap());
    assert!(f.is_unimodular_pair(Integral::ZERO, Integral::ZERO).is_err());
}

#[test]
fn completion() {
    let f = q5();
    assert_eq!(f.complete_pair(Integral::ZERO, Integral::ONE).unwrap(), (Integral::ONE, Integral::ZERO));
    let (a, b) = f.complete_pair(Integral::ONE, Integral::ZERO).unwrap();
    assert_eq!(f.mul(a, Integral::ZERO) - f.mul(b, Integral::ONE), Integral::ONE);
    let (g, d) = (Integral::new(2, 0), Integral::OMEGA);
    let (a, b) = f.complete_pair(g, d).unwrap();
    assert_eq!(f.mul(a, d) - f.mul(b, g), Integral::ONE);
    assert!(f.complete_pair(Integral::new(2, 0), Integral::new(0, 2)).is_err());
}

#[test]
fn fundamental_units() {
    assert_eq!(q5().fundamental_unit().unwrap(), Integral::OMEGA);
    assert_eq!(q2().fundamental_unit().unwrap(), Integral::new(1, 1));
    let f3 = make_field(3).unwrap();
    assert_eq!(f3.fundamental_unit().unwrap(), Integral::new(2, 1));
    for d in EUCLIDEAN_D {
        let f = make_field(d).unwrap();
        let e = f.fundamental_unit().unwrap();
        assert_eq!(f.norm(e).abs(), 1);
        assert!(f.embed::<f64>(e)[0] > 1.0);
    }
    assert_eq!(q5().norm(Integral::OMEGA), -1);
    assert_eq!(f3.norm(Integral::new(2, 1)), 1);
}

#[test]
fn trace_one_dual_indices() {
    let f = q5();
    let mut set = f.totally_positive_of_trace(1);
    set.sort_by_key(|m| m.numerator);
    let expect = [Integral::new(-1, 1), Integral::OMEGA];
    assert_eq!(set.iter().map(|m| m.numerator).collect::<Vec<_>>(), expect);
    for m in &set {
        assert!(m.is_consistent(&f));
        assert_eq!(m.trace(), 1);
    }
}

#[test]
fn dual_index_frequencies() {
    let f = q5();
    let nu = DualIndex::new(&f, Integral::OMEGA);
    assert_eq!(nu.freq, (1, 1));
    assert_eq!(DualIndex::from_freq(&f, nu.freq.0, nu.freq.1), nu);
    for lam in [Integral::ONE, Integral::OMEGA, Integral::new(3, -2)] {
        let exact = f.trace_element(f.mul_element(nu.element(&f), lam.into()));
        assert_eq!(exact, Rational64::from_integer(nu.pairing(lam)));
    }
    assert!(DualIndex::totally_positive(&f, Integral::ONE).is_err());
}

#[test]
fn orbit_representatives() {
    let f = q5();
    let eps = f.fundamental_unit().unwrap();
    let g = Integral::new(2, 1);
    let rep = f.canonical_orbit_rep(g).unwrap().rep;
    let mut x = g;
    for _ in 0..4 {
        x = f.mul(x, eps);
        assert_eq!(f.canonical_orbit_rep(x).unwrap().rep, rep);
        assert_eq!(f.canonical_orbit_rep(-x).unwrap().rep, rep);
    }
    assert!(f.is_canonical_orbit_rep(rep).unwrap());
}
