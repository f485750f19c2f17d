//! Fast suite of worked examples with known answers.
//!
//! Every check is computed independently of the unit tests so that an
//! installed binary can verify itself (`hpoincare selftest`).

use num_complex::Complex;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::classical::{
    bessel_j, bessel_j_series, classical_poincare_coefficient_by_quadrature, delta_coefficients, kloosterman,
    nonvanishing_range_scan, petersson_coefficient, ClassicalParams, ClassicalPolicy,
};
use crate::error::Result;
use crate::experiments::{certify_nonvanishing, sweep_weight, ExperimentPolicy, Verdict};
use crate::fourier::{extract_coefficient, extract_many, y_independence_check, ExtractionPolicy, FourierSum, NonHolomorphic, SamplingDomain};
use crate::hpoincare::{
    automorphy_factor, enumerate_cosets, evaluate, modularity_defect, tail_bound, term, CosetRep, GammaInfConvention,
    Point, PoincareSpec, Sl2Matrix, TruncationPolicy, Weight,
};
use crate::qfield::{make_field, DualIndex, FieldElement, IdealHNF, Integral, RealQuadraticField};
use crate::scalar::cis_turns;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub module: String,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

pub const CSV_HEADER: &str = "module,name,passed,detail";

impl Check {
    pub fn csv(&self) -> String {
        format!("{},{},{},\"{}\"", self.module, self.name, self.passed, self.detail.replace('"', "'"))
    }
}

struct Suite {
    module: &'static str,
    checks: Vec<Check>,
}

impl Suite {
    fn module(&mut self, module: &'static str) {
        self.module = module;
    }

    fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            module: self.module.into(),
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    /// Runs `f`, recording an error as a failed check.
    fn run(&mut self, name: &str, f: impl FnOnce() -> Result<(bool, String)>) {
        match f() {
            Ok((passed, detail)) => self.check(name, passed, detail),
            Err(e) => self.check(name, false, format!("error: {e}")),
        }
    }
}

fn q5() -> RealQuadraticField {
    make_field(5).expect("Q(sqrt 5)")
}

fn z0() -> Point<f64> {
    [Complex::new(0.3, 1.2), Complex::new(-0.1, 1.1)]
}

fn omega_spec(k: i64, level: i64, convention: GammaInfConvention) -> Result<PoincareSpec> {
    let f = q5();
    let level = f.ideal_from_gen(Integral::new(level, 0))?;
    PoincareSpec::new(f, Weight::parallel(k)?, DualIndex::new(&f, Integral::OMEGA), level, convention)
}

/// Runs every check; never panics.
pub fn run_selftest() -> Vec<Check> {
    let mut s = Suite {
        module: "",
        checks: Vec::new(),
    };
    qfield_checks(&mut s);
    hpoincare_checks(&mut s);
    fourier_checks(&mut s);
    experiments_checks(&mut s);
    classical_checks(&mut s);
    s.checks
}

fn qfield_checks(s: &mut Suite) {
    s.module("qfield");
    s.run("field_q5", || {
        let f = make_field(5)?;
        Ok((f.disc() == 5 && f.is_euclidean() && f.omega_trace() == 1, format!("D = {}", f.disc())))
    });
    s.run("field_q2", || {
        let f = make_field(2)?;
        Ok((f.disc() == 8 && f.omega_trace() == 0, format!("D = {}", f.disc())))
    });
    s.check("field_not_squarefree", make_field(12).is_err(), "d = 12 rejected");
    s.run("embeddings", || {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let w = q5().embed::<f64>(Integral::OMEGA);
        let one = q5().embed::<f64>(Integral::ONE);
        let r = make_field(2)?.embed::<f64>(Integral::new(1, 1));
        let ok = (w[0] - phi).abs() < 1e-15
            && (w[1] - 1.0 + phi).abs() < 1e-15
            && one == [1.0, 1.0]
            && (r[0] - 1.0 - 2f64.sqrt()).abs() < 1e-15;
        Ok((ok, format!("omega -> {w:?}")))
    });
    s.run("trace_norm", || {
        let f = q5();
        let f2 = make_field(2)?;
        let ok = (f.trace(Integral::OMEGA), f.norm(Integral::OMEGA)) == (1, -1)
            && (f.trace(Integral::ZERO), f.norm(Integral::ZERO)) == (0, 0)
            && (f2.trace(Integral::new(1, 1)), f2.norm(Integral::new(1, 1))) == (2, -1);
        Ok((ok, "omega: (1, -1); 1+sqrt2: (2, -1)".into()))
    });
    s.run("total_positivity", || {
        let f = q5();
        let ok = f.is_totally_positive(Integral::new(2, 1).into())
            && !f.is_totally_positive(Integral::OMEGA.into())
            && !f.is_totally_positive(FieldElement::zero());
        Ok((ok, "2+omega yes, omega no, 0 no".into()))
    });
    s.run("codifferent", || {
        let f = q5();
        let g = f.codifferent_gen();
        let ok = f.trace_element(g) == Rational64::from_integer(0)
            && f.trace_element(f.mul_element(g, Integral::OMEGA.into())) == Rational64::from_integer(1);
        let f2 = make_field(2)?;
        let g2 = f2.codifferent_gen();
        let ok2 = f2.trace_element(f2.mul_element(g2, Integral::OMEGA.into())) == Rational64::from_integer(1);
        Ok((ok && ok2, "tr(g) = 0, tr(g omega) = 1".into()))
    });
    s.run("ideals", || {
        let f = q5();
        let two = f.ideal_from_gen(Integral::new(2, 0))?;
        let root5 = f.ideal_from_gen(Integral::new(-1, 2))?;
        let unit = f.ideal_from_gen(Integral::ONE)?;
        let ok = two.norm == 4
            && two.contains(Integral::new(0, 2))
            && !two.contains(Integral::OMEGA)
            && root5.norm == 5
            && unit.is_unit();
        Ok((ok, format!("N(2) = {}, N(sqrt5) = {}", two.norm, root5.norm)))
    });
    s.run("unimodular_pairs", || {
        let f = q5();
        let ok = f.is_unimodular_pair(Integral::ZERO, Integral::ONE)?
            && !f.is_unimodular_pair(Integral::new(2, 0), Integral::new(0, 2))?
            && f.is_unimodular_pair(Integral::new(2, 0), Integral::OMEGA)?;
        Ok((ok, "(0,1) yes, (2,2w) no, (2,w) yes".into()))
    });
    s.run("completion", || {
        let f = q5();
        let mut ok = f.complete_pair(Integral::ZERO, Integral::ONE)? == (Integral::ONE, Integral::ZERO);
        for (g, d) in [(Integral::ONE, Integral::ZERO), (Integral::new(2, 0), Integral::OMEGA)] {
            let (a, b) = f.complete_pair(g, d)?;
            ok &= f.mul(a, d) - f.mul(b, g) == Integral::ONE;
        }
        Ok((ok, "a delta - b gamma = 1".into()))
    });
    s.run("fundamental_units", || {
        let ok = q5().fundamental_unit()? == Integral::OMEGA
            && make_field(2)?.fundamental_unit()? == Integral::new(1, 1)
            && make_field(3)?.fundamental_unit()? == Integral::new(2, 1);
        Ok((ok, "omega, 1+sqrt2, 2+sqrt3".into()))
    });
    s.run("trace_one_dual_indices", || {
        let f = q5();
        let mut nums: Vec<_> = f.totally_positive_of_trace(1).iter().map(|m| m.numerator).collect();
        nums.sort();
        Ok((nums == [Integral::new(-1, 1), Integral::OMEGA], format!("{nums:?}")))
    });
}

fn hpoincare_checks(s: &mut Suite) {
    s.module("hpoincare");
    s.run("identity_automorphy_factor", || {
        let f = q5();
        let w = Weight::parallel(4)?;
        let id = automorphy_factor(&f, &CosetRep::identity(), &z0(), w);
        let inv = CosetRep::from_bottom_row(&f, Integral::ONE, Integral::ZERO)?;
        let at_i = automorphy_factor(&f, &inv, &[Complex::new(0.0, 1.0); 2], w);
        Ok((id == Complex::new(1.0, 0.0) && (at_i - 1.0).norm() < 1e-15, format!("{at_i}")))
    });
    s.run("identity_term", || {
        let sp = omega_spec(6, 1, GammaInfConvention::UnitExtended)?;
        let z = z0();
        let nu = sp.nu.embed::<f64>(&sp.field);
        let e = nu[0] * z[0] + nu[1] * z[1];
        let expect = cis_turns(e.re) * (-std::f64::consts::TAU * e.im).exp();
        let got = term(&CosetRep::identity(), &z, &sp);
        Ok(((got - expect).norm() < 1e-15, format!("{got}")))
    });
    s.run("automorphy_factor_quartic", || {
        let f = q5();
        let m = CosetRep::from_bottom_row(&f, Integral::new(2, 0), Integral::OMEGA)?;
        let z = [Complex::new(0.0, 1.0), Complex::new(0.0, 2.0)];
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let expect = Complex::new(phi, 2.0).powi(4) * Complex::new(1.0 - phi, 4.0).powi(4);
        let got = automorphy_factor(&f, &m, &z, Weight::parallel(4)?);
        Ok(((got - expect).norm() < 1e-12 * expect.norm(), format!("{got}")))
    });
    s.run("completion_invariance", || {
        let sp = omega_spec(6, 1, GammaInfConvention::UnitExtended)?;
        let f = sp.field;
        let base = CosetRep::from_bottom_row(&f, Integral::new(2, 0), Integral::OMEGA)?;
        let t0 = term(&base, &z0(), &sp);
        let mut worst = 0.0f64;
        for mu in [Integral::ONE, Integral::new(-2, 3)] {
            let shifted = CosetRep {
                a: base.a + f.mul(mu, base.gamma),
                b: base.b + f.mul(mu, base.delta),
                ..base
            };
            worst = worst.max((term(&shifted, &z0(), &sp) - t0).norm() / t0.norm());
        }
        Ok((worst < 1e-12, format!("relative change {worst:.1e}")))
    });
    s.run("tiny_box_identity_only", || {
        let sp = omega_spec(6, 1, GammaInfConvention::UnitExtended)?;
        let reps = enumerate_cosets(&sp, &z0(), &TruncationPolicy::new(0.5, 1e-30))?;
        Ok((reps == [CosetRep::identity()], format!("{} rows", reps.len())))
    });
    s.run("level_two_membership", || {
        let sp = omega_spec(4, 2, GammaInfConvention::UnitExtended)?;
        let reps = enumerate_cosets(&sp, &z0(), &TruncationPolicy::new(6.0, 1e-7))?;
        let ok = reps.len() > 1 && reps.iter().all(|r| r.gamma.a % 2 == 0 && r.gamma.b % 2 == 0);
        Ok((ok, format!("{} rows", reps.len())))
    });
    s.run("halving_the_cutoff", || {
        let sp = omega_spec(6, 1, GammaInfConvention::UnitExtended)?;
        let z = z0();
        let p = TruncationPolicy::for_cutoff(&sp, [z[0].im, z[1].im], 1e-8)?;
        let a = evaluate(&sp, &z, &p)?;
        let b = evaluate(&sp, &z, &p.with_cutoff(5e-9))?;
        let d = (a.value - b.value).norm();
        Ok((d < a.tail_estimate, format!("change {d:.2e}, tail {:.2e}", a.tail_estimate)))
    });
    s.run("tail_vanishes_below_resolution", || {
        let sp = omega_spec(18, 1, GammaInfConvention::UnitExtended)?;
        let z = z0();
        let t = tail_bound(&sp, &z, &TruncationPolicy::for_cutoff(&sp, [z[0].im, z[1].im], 1e-40)?)?;
        Ok((t == 0.0, format!("tail {t:e}")))
    });
    s.run("tail_monotone_in_height", || {
        let sp = omega_spec(6, 2, GammaInfConvention::UnitExtended)?;
        let mut last = f64::INFINITY;
        let mut ok = true;
        for h in [1.0, 2.0, 4.0, 8.0, 16.0] {
            let t = tail_bound(&sp, &z0(), &TruncationPolicy::new(h, 1e-8))?;
            ok &= t <= last * (1.0 + 1e-12);
            last = t;
        }
        Ok((ok, format!("final {last:.2e}")))
    });
    s.run("modularity_defect", || {
        let f = q5();
        let sp = omega_spec(4, 2, GammaInfConvention::translations_only())?;
        let z = z0();
        let p = TruncationPolicy::for_cutoff(&sp, [z[0].im, z[1].im], 1e-8)?;
        let id = modularity_defect(&sp, &z, &Sl2Matrix::identity(), &p)?;
        let shift = Sl2Matrix::new(&f, Integral::ONE, Integral::OMEGA, Integral::ZERO, Integral::ONE)?;
        let tr = modularity_defect(&sp, &z, &shift, &p)?;
        let m = Sl2Matrix::new(&f, Integral::ONE, Integral::ZERO, Integral::new(2, 0), Integral::ONE)?;
        let g = modularity_defect(&sp, &z, &m, &p)?;
        Ok((id == 0.0 && tr < 1e-13 && g < 1e-4, format!("identity {id:e}, translation {tr:.1e}, (2,1) row {g:.1e}")))
    });
}

fn fourier_checks(s: &mut Suite) {
    s.module("fourier");
    let f = q5();
    let nu = DualIndex::new(&f, Integral::OMEGA);
    let mu = DualIndex::new(&f, Integral::new(-1, 1));
    let single = FourierSum::new(f, vec![(nu, Complex::new(1.0, 0.0))]);
    let policy = ExtractionPolicy::default();
    s.run("single_frequency_identity", || {
        let e = extract_coefficient(&single, nu, &SamplingDomain::new([1.1, 1.0], 16)?, &policy)?;
        Ok(((e.value - 1.0).norm() < 1e-13, format!("{}", e.value)))
    });
    s.run("orthogonality", || {
        let e = extract_coefficient(&single, mu, &SamplingDomain::new([1.1, 1.0], 16)?, &policy)?;
        Ok((e.value.norm() < 1e-13, format!("{:.1e}", e.value.norm())))
    });
    s.run("batch_bitwise", || {
        let dom = SamplingDomain::new([1.1, 1.0], 16)?;
        let sum = FourierSum::new(f, vec![(nu, Complex::new(0.5, 0.1)), (mu, Complex::new(-2.0, 0.3))]);
        let batch = extract_many(&sum, &[nu, mu], &dom, &policy)?;
        let ok = batch.iter().zip([nu, mu]).all(|(b, m)| {
            extract_coefficient(&sum, m, &dom, &policy).map(|e| e.value == b.value).unwrap_or(false)
        });
        let empty = extract_many(&sum, &[], &dom, &policy)?.is_empty();
        Ok((ok && empty, "batch equals singles; empty in, empty out".into()))
    });
    s.run("y_independence_synthetic", || {
        let d1 = SamplingDomain::new([1.1, 1.0], 16)?;
        let d2 = SamplingDomain::new([1.3, 0.9], 16)?;
        let diff = y_independence_check(&single, nu, &d1, &d2, &policy)?;
        let broken = NonHolomorphic {
            inner: &single,
            nu,
            amplitude: 1.0,
        };
        let neg = y_independence_check(&broken, nu, &d1, &d2, &policy)?;
        Ok((diff < 1e-13 && neg > 0.1, format!("holomorphic {diff:.1e}, perturbed {neg:.2}")))
    });
}

fn experiments_checks(s: &mut Suite) {
    s.module("experiments");
    let f = q5();
    let nu = DualIndex::new(&f, Integral::OMEGA);
    s.run("equal_indices_give_equal_columns", || {
        let dom = SamplingDomain::new([1.1, 1.0], 16)?;
        let r = sweep_weight(&f, nu, nu, IdealHNF::unit(), &[12], &dom, &ExperimentPolicy::default())?;
        let (a, b) = r.rows[0].coefficients().expect("row evaluated");
        Ok((a.re == b.re && a.im == b.im, format!("p(nu) = {}", a.re)))
    });
    s.run("degenerate_policy_is_inconclusive", || {
        let sp = omega_spec(12, 1, GammaInfConvention::UnitExtended)?;
        let policy = ExperimentPolicy {
            term_cutoff: 0.5,
            gamma_height_max: Some(0.5),
            ..Default::default()
        };
        let c = certify_nonvanishing(&sp, &SamplingDomain::new([1.1, 1.0], 16)?, &policy, 10.0)?;
        Ok((c.verdict == Verdict::Inconclusive, format!("error {:.2e}", c.total_error)))
    });
    s.run("verdict_logic", || {
        Ok((
            Verdict::decide(1.0, 0.01, 10.0) == Verdict::NonzeroCertified && Verdict::decide(1.0, 0.2, 10.0) == Verdict::Inconclusive,
            "|p| > 10 err".into(),
        ))
    });
}

fn classical_checks(s: &mut Suite) {
    s.module("classical");
    s.check("kloosterman_c1", kloosterman::<f64>(3, 7, 1) == 1.0, "S(3,7;1) = 1");
    s.check("kloosterman_c2", (kloosterman::<f64>(1, 1, 2) - 1.0).abs() < 1e-14, "S(1,1;2) = 1");
    s.check("kloosterman_c3", (kloosterman::<f64>(1, 1, 3) + 1.0).abs() < 1e-14, "S(1,1;3) = -1");
    s.run("bessel_at_zero", || Ok((bessel_j(11, 0.0f64)? == 0.0, "J_11(0) = 0".into())));
    s.run("bessel_series_remainder", || {
        let (v, rem) = bessel_j_series(11, 1.0f64);
        let direct = bessel_j(11, 1.0f64)?;
        Ok((rem < 1e-15 && (v - direct).abs() < 1e-15, format!("J_11(1) = {v:e}, remainder {rem:.1e}")))
    });
    s.run("bessel_recurrence", || {
        let mut worst = 0.0f64;
        for (nu, x) in [(5u32, 3.7f64), (11, 25.0), (20, 60.0), (30, 7.5), (15, 400.0)] {
            let lhs = bessel_j(nu - 1, x)? + bessel_j(nu + 1, x)?;
            let rhs = 2.0 * nu as f64 / x * bessel_j(nu, x)?;
            worst = worst.max((lhs - rhs).abs());
        }
        Ok((worst < 1e-10, format!("worst {worst:.1e}")))
    });
    s.run("tau_values", || {
        let t = delta_coefficients(6)?;
        let ok = t[0] == 1 && t[1] == -24 && t[2] == 252 && t[5] == t[1] * t[2];
        Ok((ok, format!("{t:?}")))
    });
    s.run("tau_ratio", || {
        let p = |n| petersson_coefficient::<f64>(&ClassicalParams::new(1, n, 12, 1)?, 1000);
        let r = p(2)?.value / p(1)?.value;
        Ok(((r + 24.0).abs() < 1e-4, format!("p(2)/p(1) = {r}")))
    });
    s.run("oracle_pair", || {
        let params = ClassicalParams::new(2, 1, 12, 1)?;
        let a = petersson_coefficient::<f64>(&params, 1000)?.value;
        let b = classical_poincare_coefficient_by_quadrature::<f64>(&params, &ClassicalPolicy::default())?.value;
        Ok(((a - b).abs() < 1e-6, format!("{a} vs {b}")))
    });
    s.run("huge_level_is_delta", || {
        let params = ClassicalParams::new(2, 2, 12, 1 << 40)?;
        let v = classical_poincare_coefficient_by_quadrature::<f64>(&params, &ClassicalPolicy::default())?.value;
        Ok(((v - 1.0).abs() < 1e-12, format!("{v}")))
    });
    s.run("scan_weight_twelve", || {
        let scan = nonvanishing_range_scan(12, 10, 1000)?;
        Ok((scan.entries.len() == 10 && scan.entries.iter().all(|e| e.certified), format!("largest {:?}", scan.largest_certified())))
    });
    s.run("empty_scan", || Ok((nonvanishing_range_scan(12, 0, 1000)?.entries.is_empty(), "m_max = 0".into())));
}
