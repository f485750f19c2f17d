//! Fourier coefficients of `O_F`-periodic functions on `H^2`.
//!
//! Samples are taken on the grid `x(u, v) = u/n + (v/n) omega` (lattice
//! coordinates, so the torus `R^2 / O_F` has volume 1) at a fixed `y`; the
//! coefficient at a dual index `mu` with frequency pair `(r, s)` is
//!
//! ```text
//! p(mu) = e^{2 pi tr(mu y)} (1/n^2) sum_{u,v} f(x(u,v) + i y) e^{-2 pi i (r u + s v)/n}
//! ```
//!
//! which is the trapezoidal rule for the integral over `x` only (with `y`
//! held fixed). It converges exponentially because the Fourier tail of a
//! holomorphic periodic function decays like `e^{-2 pi tr(m y)}`.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hpoincare::{PoincareSpec, SeriesPlan, TruncationPolicy};
use crate::qfield::{DualIndex, RealQuadraticField};
use crate::scalar::{cis_turns, Real};
use crate::summation::{CompensatedSum, ComplexSum};

/// What an evaluand says about its Fourier support.
#[derive(Debug, Clone, PartialEq)]
pub enum FrequencyContent {
    /// Supported on totally positive dual indices (cusp forms).
    TotallyPositive,
    /// Exactly these frequencies.
    Finite(Vec<DualIndex>),
    /// Nothing declared; the aliasing guard is skipped.
    Undeclared,
}

/// One sample with its truncation-error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample<T> {
    pub value: Complex<T>,
    pub tail: T,
}

/// Periodic function under `x -> x + O_F` that can be sampled at fixed `y`.
pub trait Evaluand<T: Real>: Sync {
    fn field(&self) -> &RealQuadraticField;

    fn frequency_content(&self) -> FrequencyContent;

    /// Values at `x + i y` for every `x` (embedding pairs), in order.
    fn sample(&self, y: [T; 2], xs: &[[T; 2]]) -> Result<Vec<Sample<T>>>;
}

/// Fixed `y` and grid resolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingDomain {
    pub y: [f64; 2],
    pub grid_n: usize,
}

impl SamplingDomain {
    pub const DEFAULT_GRID: usize = 32;

    /// Requires `y_j > 0`, `y_1 y_2 > 1` and an even `grid_n >= 4`.
    pub fn new(y: [f64; 2], grid_n: usize) -> Result<Self> {
        if !(y[0] > 0.0 && y[1] > 0.0 && y[0] * y[1] > 1.0) {
            return Err(Error::InvalidDomain(format!("y = {y:?} needs positive entries with product > 1")));
        }
        if grid_n < 4 || !grid_n.is_multiple_of(2) {
            return Err(Error::InvalidDomain(format!("grid_n = {grid_n} must be even and at least 4")));
        }
        Ok(Self { y, grid_n })
    }

    /// Grid points in embedding coordinates, `u` fastest.
    pub fn grid<T: Real>(&self, field: &RealQuadraticField) -> Vec<[T; 2]> {
        let n = self.grid_n;
        let w = field.omega_embeddings::<T>();
        let nf = T::of_i64(n as i64);
        let mut xs = Vec::with_capacity(n * n);
        for v in 0..n {
            for u in 0..n {
                let (a, b) = (T::of_i64(u as i64) / nf, T::of_i64(v as i64) / nf);
                xs.push([a + b * w[0], a + b * w[1]]);
            }
        }
        xs
    }
}

/// Settings of the extraction itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtractionPolicy {
    /// Frequencies weighted below this (relative to the target) are negligible.
    pub aliasing_threshold: f64,
}

impl Default for ExtractionPolicy {
    fn default() -> Self {
        Self { aliasing_threshold: 1e-16 }
    }
}

/// Estimated coefficient `p(mu)` with separated error estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientEstimate<T> {
    pub mu: DualIndex,
    pub value: Complex<T>,
    /// `|value(n) - value(n/2)|`.
    pub quad_error: T,
    /// Amplified mean truncation estimate of the samples.
    pub trunc_error: T,
}

impl<T: Real> CoefficientEstimate<T> {
    pub fn total_error(&self) -> T {
        self.quad_error + self.trunc_error
    }
}

/// Fails if some frequency other than `mu` aliases onto it at this grid.
fn aliasing_guard(
    content: &FrequencyContent,
    field: &RealQuadraticField,
    mu: &DualIndex,
    domain: &SamplingDomain,
    policy: &ExtractionPolicy,
) -> Result<()> {
    let n = domain.grid_n as i64;
    let aliases = |m: &DualIndex| {
        m.freq != mu.freq && (m.freq.0 - mu.freq.0).rem_euclid(n) == 0 && (m.freq.1 - mu.freq.1).rem_euclid(n) == 0
    };
    let fail = |m: &DualIndex| Error::Aliasing {
        target: mu.freq,
        other: m.freq,
        grid_n: domain.grid_n,
    };
    match content {
        FrequencyContent::Undeclared => Ok(()),
        FrequencyContent::Finite(list) => match list.iter().find(|m| aliases(m)) {
            Some(m) => Err(fail(m)),
            None => Ok(()),
        },
        FrequencyContent::TotallyPositive => {
            let y = domain.y;
            let slack = -policy.aliasing_threshold.ln() / std::f64::consts::TAU;
            let budget = mu.trace_with::<f64>(field, y).max(0.0) + slack;
            let max_trace = (budget / y[0].min(y[1])).floor() as i64;
            for t in 1..=max_trace {
                for m in field.totally_positive_of_trace(t) {
                    if m.trace_with::<f64>(field, y) <= budget && aliases(&m) {
                        return Err(fail(&m));
                    }
                }
            }
            Ok(())
        }
    }
}

/// Twiddle factors `e^{-2 pi i j / n}`.
fn twiddles<T: Real>(n: usize) -> Vec<Complex<T>> {
    let nf = T::of_i64(n as i64);
    (0..n).map(|j| cis_turns(-T::of_i64(j as i64) / nf)).collect()
}

/// Coefficients at every `mu` from one shared set of samples.
pub fn extract_many<T: Real>(
    evaluand: &dyn Evaluand<T>,
    mus: &[DualIndex],
    domain: &SamplingDomain,
    policy: &ExtractionPolicy,
) -> Result<Vec<CoefficientEstimate<T>>> {
    if mus.is_empty() {
        return Ok(Vec::new());
    }
    let field = evaluand.field();
    let content = evaluand.frequency_content();
    for mu in mus {
        aliasing_guard(&content, field, mu, domain, policy)?;
    }
    let n = domain.grid_n;
    let y = domain.y.map(T::of);
    let samples = evaluand.sample(y, &domain.grid::<T>(field))?;
    let tw = twiddles::<T>(n);
    let mean_tail = samples.iter().map(|s| s.tail).collect::<CompensatedSum<T>>().value() / T::of_i64((n * n) as i64);

    let mut out = Vec::with_capacity(mus.len());
    for mu in mus {
        let (r, s) = (mu.freq.0.rem_euclid(n as i64) as usize, mu.freq.1.rem_euclid(n as i64) as usize);
        let mut full = ComplexSum::new();
        let mut half = ComplexSum::new();
        for v in 0..n {
            for u in 0..n {
                let w = samples[v * n + u].value * tw[(r * u + s * v) % n];
                full.add(w);
                if u % 2 == 0 && v % 2 == 0 {
                    half.add(w);
                }
            }
        }
        let amp = (T::two_pi() * mu.trace_with::<T>(field, y)).exp();
        let nn = T::of_i64((n * n) as i64);
        let value = full.value() * (amp / nn);
        let coarse = half.value() * (amp * T::of(4.0) / nn);
        out.push(CoefficientEstimate {
            mu: *mu,
            value,
            quad_error: (value - coarse).norm(),
            trunc_error: amp * mean_tail,
        });
    }
    Ok(out)
}

/// Coefficient `p(mu)` of the evaluand.
pub fn extract_coefficient<T: Real>(
    evaluand: &dyn Evaluand<T>,
    mu: DualIndex,
    domain: &SamplingDomain,
    policy: &ExtractionPolicy,
) -> Result<CoefficientEstimate<T>> {
    Ok(extract_many(evaluand, &[mu], domain, policy)?.remove(0))
}

/// `|p(mu) at domain1 - p(mu) at domain2|`; small for holomorphic evaluands.
pub fn y_independence_check<T: Real>(
    evaluand: &dyn Evaluand<T>,
    mu: DualIndex,
    domain1: &SamplingDomain,
    domain2: &SamplingDomain,
    policy: &ExtractionPolicy,
) -> Result<T> {
    let a = extract_coefficient(evaluand, mu, domain1, policy)?;
    let b = extract_coefficient(evaluand, mu, domain2, policy)?;
    Ok((a.value - b.value).norm())
}

/// The truncated Poincare series as an evaluand.
#[derive(Debug, Clone)]
pub struct PoincareEvaluand {
    pub spec: PoincareSpec,
    pub policy: TruncationPolicy,
}

impl PoincareEvaluand {
    pub fn new(spec: PoincareSpec, policy: TruncationPolicy) -> Self {
        Self { spec, policy }
    }
}

impl<T: Real> Evaluand<T> for PoincareEvaluand {
    fn field(&self) -> &RealQuadraticField {
        &self.spec.field
    }

    fn frequency_content(&self) -> FrequencyContent {
        FrequencyContent::TotallyPositive
    }

    fn sample(&self, y: [T; 2], xs: &[[T; 2]]) -> Result<Vec<Sample<T>>> {
        let plan = SeriesPlan::new(&self.spec, &self.policy, y)?;
        xs.par_iter()
            .map(|&x| {
                plan.evaluate_at(x).map(|r| Sample {
                    value: r.value,
                    tail: r.tail_estimate,
                })
            })
            .collect()
    }
}

/// Finite Fourier sum `sum_m c_m e^{2 pi i tr(m z)}`.
#[derive(Debug, Clone)]
pub struct FourierSum<T> {
    pub field: RealQuadraticField,
    pub terms: Vec<(DualIndex, Complex<T>)>,
}

impl<T: Real> FourierSum<T> {
    pub fn new(field: RealQuadraticField, terms: Vec<(DualIndex, Complex<T>)>) -> Self {
        Self { field, terms }
    }

    pub fn value_at(&self, x: [T; 2], y: [T; 2]) -> Complex<T> {
        self.terms
            .iter()
            .map(|(m, c)| {
                let e = m.embed::<T>(&self.field);
                let decay = (-T::two_pi() * (e[0] * y[0] + e[1] * y[1])).exp();
                *c * cis_turns(e[0] * x[0] + e[1] * x[1]) * decay
            })
            .collect::<ComplexSum<T>>()
            .value()
    }
}

impl<T: Real> Evaluand<T> for FourierSum<T> {
    fn field(&self) -> &RealQuadraticField {
        &self.field
    }

    fn frequency_content(&self) -> FrequencyContent {
        FrequencyContent::Finite(self.terms.iter().map(|t| t.0).collect())
    }

    fn sample(&self, y: [T; 2], xs: &[[T; 2]]) -> Result<Vec<Sample<T>>> {
        Ok(xs
            .iter()
            .map(|&x| Sample {
                value: self.value_at(x, y),
                tail: T::zero(),
            })
            .collect())
    }
}

/// `inner + amplitude e^{2 pi i tr(nu conj(z))}`: periodic but not holomorphic.
pub struct NonHolomorphic<'a, T> {
    pub inner: &'a dyn Evaluand<T>,
    pub nu: DualIndex,
    pub amplitude: T,
}

impl<T: Real> Evaluand<T> for NonHolomorphic<'_, T> {
    fn field(&self) -> &RealQuadraticField {
        self.inner.field()
    }

    fn frequency_content(&self) -> FrequencyContent {
        FrequencyContent::Undeclared
    }

    fn sample(&self, y: [T; 2], xs: &[[T; 2]]) -> Result<Vec<Sample<T>>> {
        let e = self.nu.embed::<T>(self.field());
        let grow = (T::two_pi() * (e[0] * y[0] + e[1] * y[1])).exp();
        let mut out = self.inner.sample(y, xs)?;
        for (s, x) in out.iter_mut().zip(xs) {
            s.value = s.value + cis_turns(e[0] * x[0] + e[1] * x[1]) * (self.amplitude * grow);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hpoincare::{GammaInfConvention, Weight};
    use crate::qfield::{IdealHNF, Integral};

    fn field() -> RealQuadraticField {
        RealQuadraticField::new(5).unwrap()
    }

    fn nu(f: &RealQuadraticField) -> DualIndex {
        DualIndex::new(f, Integral::OMEGA)
    }

    fn synthetic(f: &RealQuadraticField) -> FourierSum<f64> {
        let terms = [((1, 1), (0.7, -0.2)), ((1, 0), (-1.3, 0.4)), ((1, -1), (0.25, 0.0)), ((0, 1), (0.0, 2.0)), ((0, 2), (1e-3, 5e-4))];
        FourierSum::new(
            *f,
            terms.iter().map(|&((r, s), (a, b))| (DualIndex::from_freq(f, r, s), Complex::new(a, b))).collect(),
        )
    }

    fn domain() -> SamplingDomain {
        SamplingDomain::new([1.1, 1.0], 16).unwrap()
    }

    #[test]
    fn domain_validation() {
        assert!(SamplingDomain::new([1.0, 1.0], 32).is_err());
        assert!(SamplingDomain::new([-2.0, -1.0], 32).is_err());
        assert!(SamplingDomain::new([1.1, 1.0], 2).is_err());
        assert!(SamplingDomain::new([1.1, 1.0], 7).is_err());
        assert!(SamplingDomain::new([1.1, 1.0], 4).is_ok());
    }

    #[test]
    fn single_frequency_identity_and_orthogonality() {
        let f = field();
        let n = nu(&f);
        let ev = FourierSum::new(f, vec![(n, Complex::new(1.0, 0.0))]);
        let p = ExtractionPolicy::default();
        let own = extract_coefficient(&ev, n, &domain(), &p).unwrap();
        assert!((own.value - Complex::new(1.0, 0.0)).norm() < 1e-14);
        let other = extract_coefficient(&ev, DualIndex::new(&f, Integral::new(-1, 1)), &domain(), &p).unwrap();
        assert!(other.value.norm() < 1e-14);
    }

    #[test]
    fn exact_recovery_of_a_synthetic_sum() {
        let f = field();
        let ev = synthetic(&f);
        let mus: Vec<_> = ev.terms.iter().map(|t| t.0).collect();
        let est = extract_many(&ev, &mus, &domain(), &ExtractionPolicy::default()).unwrap();
        for (e, (_, c)) in est.iter().zip(&ev.terms) {
            assert!((e.value - c).norm() < 1e-12, "{:?}: {} vs {}", e.mu.freq, e.value, c);
            assert!(e.quad_error >= 0.0 && e.trunc_error == 0.0);
        }
    }

    #[test]
    fn batch_matches_single_extractions_bitwise() {
        let f = field();
        let ev = synthetic(&f);
        let p = ExtractionPolicy::default();
        let mus = [nu(&f), DualIndex::new(&f, Integral::new(-1, 1))];
        let batch = extract_many(&ev, &mus, &domain(), &p).unwrap();
        for (b, mu) in batch.iter().zip(mus) {
            let single = extract_coefficient(&ev, mu, &domain(), &p).unwrap();
            assert_eq!(b.value.re.to_bits(), single.value.re.to_bits());
            assert_eq!(b.value.im.to_bits(), single.value.im.to_bits());
        }
        assert!(extract_many(&ev, &[], &domain(), &p).unwrap().is_empty());
    }

    #[test]
    fn trace_one_batch_on_the_poincare_series() {
        let f = field();
        let tp = f.totally_positive_of_trace(1);
        assert_eq!(tp.len(), 2);
        let spec = PoincareSpec::new(f, Weight::parallel(18).unwrap(), nu(&f), IdealHNF::unit(), GammaInfConvention::UnitExtended).unwrap();
        let dom = SamplingDomain::new([1.1, 1.0], 32).unwrap();
        let policy = TruncationPolicy::for_cutoff(&spec, dom.y, 1e-10).unwrap();
        let ev = PoincareEvaluand::new(spec, policy);
        let est = extract_many::<f64>(&ev, &tp, &dom, &ExtractionPolicy::default()).unwrap();
        for e in &est {
            assert!(e.value.re.is_finite() && e.value.im.abs() < 1e-12);
        }
        let at_nu = est.iter().find(|e| e.mu == nu(&f)).unwrap();
        let at_mu = est.iter().find(|e| e.mu != nu(&f)).unwrap();
        assert!((at_nu.value.re - 1.0).abs() < 1e-6);
        assert!(at_mu.value.re.abs() < 1e-6);
    }

    #[test]
    fn linearity() {
        let f = field();
        let g = synthetic(&f);
        let h = FourierSum::new(f, vec![(nu(&f), Complex::new(0.5, 0.5)), (DualIndex::from_freq(&f, 0, -1), Complex::new(-1.0, 0.0))]);
        let (a, b) = (Complex::new(2.0, -1.0), Complex::new(-0.5, 3.0));
        let mut terms: Vec<_> = g.terms.iter().map(|&(m, c)| (m, c * a)).collect();
        terms.extend(h.terms.iter().map(|&(m, c)| (m, c * b)));
        let combo = FourierSum::new(f, terms);
        let p = ExtractionPolicy::default();
        for mu in [nu(&f), DualIndex::from_freq(&f, 0, -1), DualIndex::from_freq(&f, 1, 0)] {
            let lhs = extract_coefficient(&combo, mu, &domain(), &p).unwrap().value;
            let rhs = extract_coefficient(&g, mu, &domain(), &p).unwrap().value * a
                + extract_coefficient(&h, mu, &domain(), &p).unwrap().value * b;
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn y_independence_and_its_negative_control() {
        let f = field();
        let ev = synthetic(&f);
        let p = ExtractionPolicy::default();
        let d1 = SamplingDomain::new([1.1, 1.0], 16).unwrap();
        let d2 = SamplingDomain::new([1.3, 0.9], 16).unwrap();
        assert!(y_independence_check(&ev, nu(&f), &d1, &d2, &p).unwrap() < 1e-12);
        let broken = NonHolomorphic {
            inner: &ev,
            nu: nu(&f),
            amplitude: 1.0,
        };
        assert!(y_independence_check(&broken, nu(&f), &d1, &d2, &p).unwrap() > 0.1);
    }

    #[test]
    fn aliasing_is_refused() {
        let f = field();
        let ev = FourierSum::new(
            f,
            vec![(DualIndex::from_freq(&f, 1, 1), Complex::new(1.0, 0.0)), (DualIndex::from_freq(&f, 5, 1), Complex::new(1.0, 0.0))],
        );
        let dom = SamplingDomain::new([1.1, 1.0], 4).unwrap();
        let err = extract_coefficient(&ev, DualIndex::from_freq(&f, 1, 1), &dom, &ExtractionPolicy::default());
        assert!(matches!(err, Err(Error::Aliasing { grid_n: 4, .. })));
    }

    #[test]
    fn grid_doubling_stays_within_the_quadrature_error() {
        let f = field();
        let spec = PoincareSpec::new(f, Weight::parallel(10).unwrap(), nu(&f), IdealHNF::unit(), GammaInfConvention::UnitExtended).unwrap();
        let y = [1.1, 1.0];
        let ev = PoincareEvaluand::new(spec.clone(), TruncationPolicy::for_cutoff(&spec, y, 1e-12).unwrap());
        let p = ExtractionPolicy::default();
        let coarse = extract_coefficient::<f64>(&ev, nu(&f), &SamplingDomain::new(y, 16).unwrap(), &p).unwrap();
        let fine = extract_coefficient::<f64>(&ev, nu(&f), &SamplingDomain::new(y, 32).unwrap(), &p).unwrap();
        assert!((coarse.value - fine.value).norm() < coarse.quad_error);
    }
}
