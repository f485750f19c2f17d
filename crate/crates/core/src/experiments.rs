//! Weight sweeps, level sweeps and non-vanishing certificates.
//!
//! Each row of a sweep evaluates one Poincare series `P_nu` once on the
//! sampling grid and reads off both `p(nu)` and `p(mu)` from the same
//! samples. The truncation box is recomputed per row from the row's own
//! weight and level, so every row meets the same term cutoff.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{extract_many, CoefficientEstimate, ExtractionPolicy, PoincareEvaluand, SamplingDomain};
use crate::hpoincare::{GammaInfConvention, PoincareSpec, TruncationPolicy, Weight};
use crate::qfield::{DualIndex, IdealHNF, RealQuadraticField};

/// Numerical settings shared by every row of an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPolicy {
    pub term_cutoff: f64,
    /// Overrides the height box derived from `term_cutoff`.
    pub gamma_height_max: Option<f64>,
    pub max_terms: usize,
    pub convention: GammaInfConvention,
    pub extraction: ExtractionPolicy,
}

impl Default for ExperimentPolicy {
    fn default() -> Self {
        Self {
            term_cutoff: 1e-10,
            gamma_height_max: None,
            max_terms: TruncationPolicy::DEFAULT_MAX_TERMS,
            convention: GammaInfConvention::UnitExtended,
            extraction: ExtractionPolicy::default(),
        }
    }
}

impl ExperimentPolicy {
    /// Truncation policy for `spec` sampled at height `y`.
    pub fn truncation(&self, spec: &PoincareSpec, y: [f64; 2]) -> Result<TruncationPolicy> {
        let base = match self.gamma_height_max {
            Some(h) => TruncationPolicy::new(h, self.term_cutoff),
            None => TruncationPolicy::for_cutoff(spec, y, self.term_cutoff)?,
        };
        let policy = TruncationPolicy {
            max_terms: self.max_terms,
            ..base
        };
        policy.validate()?;
        Ok(policy)
    }
}

/// Serializable view of a [`CoefficientEstimate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    pub mu: DualIndex,
    pub re: f64,
    pub im: f64,
    pub quad_error: f64,
    pub trunc_error: f64,
}

impl Coefficient {
    pub fn abs(&self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn total_error(&self) -> f64 {
        self.quad_error + self.trunc_error
    }

    /// `|p - 1|`.
    pub fn distance_to_one(&self) -> f64 {
        (self.re - 1.0).hypot(self.im)
    }
}

impl From<CoefficientEstimate<f64>> for Coefficient {
    fn from(e: CoefficientEstimate<f64>) -> Self {
        Self {
            mu: e.mu,
            re: e.value.re,
            im: e.value.im,
            quad_error: e.quad_error,
            trunc_error: e.trunc_error,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    Weight,
    Level,
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Weight => "weight",
            Self::Level => "level",
        }
    }
}

/// Outcome of one sweep row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RowOutcome {
    Ok { p_nu: Coefficient, p_mu: Coefficient },
    Failed { error: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    /// Weight `k` or level norm `N(I)`.
    pub param: i64,
    pub weight: Weight,
    pub level: IdealHNF,
    pub outcome: RowOutcome,
    /// True when the row failed on a term-count limit.
    #[serde(default)]
    pub truncated: bool,
}

impl SweepRow {
    pub fn coefficients(&self) -> Option<(&Coefficient, &Coefficient)> {
        match &self.outcome {
            RowOutcome::Ok { p_nu, p_mu } => Some((p_nu, p_mu)),
            RowOutcome::Failed { .. } => None,
        }
    }
}

/// Fixed part of a swept series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecSnapshot {
    pub field: RealQuadraticField,
    pub nu: DualIndex,
    pub mu: DualIndex,
    /// Set for level sweeps.
    pub weight: Option<Weight>,
    /// Set for weight sweeps.
    pub level: Option<IdealHNF>,
    pub convention: GammaInfConvention,
    pub domain: SamplingDomain,
    pub policy: ExperimentPolicy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub axis: SweepAxis,
    pub rows: Vec<SweepRow>,
    pub spec_snapshot: SpecSnapshot,
}

/// Header of [`SweepReport::to_csv`].
pub const SWEEP_CSV_HEADER: &str = "axis,param,re_p_nu,im_p_nu,err_p_nu,re_p_mu,im_p_mu,err_p_mu";

impl SweepReport {
    /// One line per row; failed rows carry `NaN` values.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(SWEEP_CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            let cells = match row.coefficients() {
                Some((a, b)) => format!(
                    "{:.17e},{:.17e},{:.3e},{:.17e},{:.17e},{:.3e}",
                    a.re,
                    a.im,
                    a.total_error(),
                    b.re,
                    b.im,
                    b.total_error()
                ),
                None => "NaN,NaN,NaN,NaN,NaN,NaN".to_string(),
            };
            out.push_str(&format!("{},{},{}\n", self.axis.name(), row.param, cells));
        }
        out
    }

    pub fn any_truncated(&self) -> bool {
        self.rows.iter().any(|r| r.truncated)
    }

    /// Checks the trend of both deviations against `criteria`.
    pub fn assess(&self, criteria: &TrendCriteria) -> TrendAssessment {
        let nu_is_mu = self.spec_snapshot.nu == self.spec_snapshot.mu;
        let series: Vec<Option<(f64, f64, f64)>> = self
            .rows
            .iter()
            .map(|r| {
                r.coefficients().map(|(a, b)| {
                    let dev_mu = if nu_is_mu { b.distance_to_one() } else { b.abs() };
                    (a.distance_to_one(), dev_mu, a.total_error().max(b.total_error()))
                })
            })
            .collect();
        let all_ok = !series.is_empty() && series.iter().all(Option::is_some);
        let values: Vec<(f64, f64, f64)> = series.into_iter().flatten().collect();
        let strict = |f: fn(&(f64, f64, f64)) -> f64| values.windows(2).all(|w| f(&w[1]) < f(&w[0]));
        let (first, last) = match (values.first(), values.last()) {
            (Some(f), Some(l)) if all_ok => (*f, *l),
            _ => {
                return TrendAssessment {
                    all_rows_ok: false,
                    endpoint_improves: false,
                    strictly_monotone: false,
                    last_below_threshold: false,
                    last_error_ok: false,
                }
            }
        };
        TrendAssessment {
            all_rows_ok: true,
            endpoint_improves: last.0 < first.0 && last.1 < first.1,
            strictly_monotone: strict(|v| v.0) && strict(|v| v.1),
            last_below_threshold: last.0 < criteria.threshold && last.1 < criteria.threshold,
            last_error_ok: last.2 < criteria.max_error,
        }
    }
}

/// Pass/fail thresholds for sweep trends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrendCriteria {
    /// Bound on `|p(nu) - 1|` and `|p(mu)|` at the last row.
    pub threshold: f64,
    /// Bound on each coefficient's error estimate at the last row.
    pub max_error: f64,
}

impl Default for TrendCriteria {
    fn default() -> Self {
        Self {
            threshold: 0.05,
            max_error: 1e-3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrendAssessment {
    pub all_rows_ok: bool,
    pub endpoint_improves: bool,
    /// Reported only.
    pub strictly_monotone: bool,
    pub last_below_threshold: bool,
    pub last_error_ok: bool,
}

impl TrendAssessment {
    /// The asserted part: endpoint improvement, threshold and error bound.
    pub fn passed(&self) -> bool {
        self.all_rows_ok && self.endpoint_improves && self.last_below_threshold && self.last_error_ok
    }
}

fn run_row(
    spec: &PoincareSpec,
    mu: DualIndex,
    domain: &SamplingDomain,
    policy: &ExperimentPolicy,
) -> Result<(Coefficient, Coefficient)> {
    let truncation = policy.truncation(spec, domain.y)?;
    let evaluand = PoincareEvaluand::new(spec.clone(), truncation);
    let est = extract_many::<f64>(&evaluand, &[spec.nu, mu], domain, &policy.extraction)?;
    Ok((est[0].into(), est[1].into()))
}

fn row(param: i64, spec: Result<PoincareSpec>, mu: DualIndex, domain: &SamplingDomain, policy: &ExperimentPolicy) -> SweepRow {
    let (weight, level) = match &spec {
        Ok(s) => (s.weight, s.level),
        Err(_) => (Weight { k1: param, k2: param }, IdealHNF::unit()),
    };
    let result = spec.and_then(|s| run_row(&s, mu, domain, policy));
    let truncated = matches!(result, Err(Error::TruncationFailure { .. }));
    let outcome = match result {
        Ok((p_nu, p_mu)) => RowOutcome::Ok { p_nu, p_mu },
        Err(e) => RowOutcome::Failed { error: e.to_string() },
    };
    SweepRow {
        param,
        weight,
        level,
        outcome,
        truncated,
    }
}

fn check_indices(field: &RealQuadraticField, nu: DualIndex, mu: DualIndex) -> Result<()> {
    for x in [nu, mu] {
        if !x.is_consistent(field) {
            return Err(Error::InvalidParameters(format!("stale frequency pair on {x}")));
        }
        if !x.is_totally_positive(field) {
            return Err(Error::NotTotallyPositive(x.to_string()));
        }
    }
    Ok(())
}

/// `p_{k,nu,I}(nu)` and `p_{k,nu,I}(mu)` for parallel weights `k` in `k_list`.
///
/// Invalid arguments are rejected up front; a failure inside one row is
/// recorded in that row and the sweep continues.
pub fn sweep_weight(
    field: &RealQuadraticField,
    nu: DualIndex,
    mu: DualIndex,
    level: IdealHNF,
    k_list: &[i64],
    domain: &SamplingDomain,
    policy: &ExperimentPolicy,
) -> Result<SweepReport> {
    check_indices(field, nu, mu)?;
    if k_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameters(format!("weights {k_list:?} must be strictly ascending")));
    }
    for &k in k_list {
        Weight::parallel(k)?;
    }
    let rows = k_list
        .iter()
        .map(|&k| {
            let spec = Weight::parallel(k).and_then(|w| PoincareSpec::new(*field, w, nu, level, policy.convention));
            row(k, spec, mu, domain, policy)
        })
        .collect();
    Ok(SweepReport {
        axis: SweepAxis::Weight,
        rows,
        spec_snapshot: SpecSnapshot {
            field: *field,
            nu,
            mu,
            weight: None,
            level: Some(level),
            convention: policy.convention,
            domain: *domain,
            policy: *policy,
        },
    })
}

/// `p_{k,nu,I}(nu)` and `p_{k,nu,I}(mu)` over the levels in `levels`.
pub fn sweep_level(
    field: &RealQuadraticField,
    nu: DualIndex,
    mu: DualIndex,
    weight: Weight,
    levels: &[IdealHNF],
    domain: &SamplingDomain,
    policy: &ExperimentPolicy,
) -> Result<SweepReport> {
    check_indices(field, nu, mu)?;
    if levels.windows(2).any(|w| w[1].norm < w[0].norm) {
        return Err(Error::InvalidParameters("levels must be sorted by norm".into()));
    }
    let rows = levels
        .iter()
        .map(|&level| {
            let spec = PoincareSpec::new(*field, weight, nu, level, policy.convention);
            row(level.norm, spec, mu, domain, policy)
        })
        .collect();
    Ok(SweepReport {
        axis: SweepAxis::Level,
        rows,
        spec_snapshot: SpecSnapshot {
            field: *field,
            nu,
            mu,
            weight: Some(weight),
            level: None,
            convention: policy.convention,
            domain: *domain,
            policy: *policy,
        },
    })
}

/// Principal ideals `(n)` for rational integers `n`, sorted by norm.
pub fn rational_levels(field: &RealQuadraticField, ns: &[i64]) -> Result<Vec<IdealHNF>> {
    let mut out = ns
        .iter()
        .map(|&n| field.ideal_from_gen(crate::qfield::Integral::new(n, 0)))
        .collect::<Result<Vec<_>>>()?;
    out.sort_by_key(|i| i.norm);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    NonzeroCertified,
    Inconclusive,
}

impl Verdict {
    /// Certified iff `|value| > safety_factor * total_error`.
    pub fn decide(abs_value: f64, total_error: f64, safety_factor: f64) -> Self {
        if abs_value > safety_factor * total_error {
            Self::NonzeroCertified
        } else {
            Self::Inconclusive
        }
    }
}

/// Evidence that `p(nu) != 0`, hence `P_{k,nu,I}` is not identically zero.
///
/// The error terms are estimates, so the verdict is heuristic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub spec: PoincareSpec,
    pub coefficient: Coefficient,
    pub total_error: f64,
    pub verdict: Verdict,
    pub safety_factor: f64,
}

pub fn certify_nonvanishing(
    spec: &PoincareSpec,
    domain: &SamplingDomain,
    policy: &ExperimentPolicy,
    safety_factor: f64,
) -> Result<Certificate> {
    if !(safety_factor > 0.0 && safety_factor.is_finite()) {
        return Err(Error::InvalidParameters(format!("safety factor {safety_factor}")));
    }
    let truncation = policy.truncation(spec, domain.y)?;
    let evaluand = PoincareEvaluand::new(spec.clone(), truncation);
    let est = extract_many::<f64>(&evaluand, &[spec.nu], domain, &policy.extraction)?;
    let coefficient = Coefficient::from(est[0]);
    let total_error = coefficient.total_error();
    Ok(Certificate {
        spec: spec.clone(),
        coefficient,
        total_error,
        verdict: Verdict::decide(coefficient.abs(), total_error, safety_factor),
        safety_factor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::extract_coefficient;
    use crate::qfield::Integral;

    fn setup() -> (RealQuadraticField, DualIndex, DualIndex) {
        let f = RealQuadraticField::new(5).unwrap();
        let nu = DualIndex::new(&f, Integral::OMEGA);
        let mu = DualIndex::new(&f, Integral::new(-1, 1));
        (f, nu, mu)
    }

    fn cheap() -> (SamplingDomain, ExperimentPolicy) {
        let policy = ExperimentPolicy {
            term_cutoff: 1e-6,
            ..Default::default()
        };
        (SamplingDomain::new([1.1, 1.0], 8).unwrap(), policy)
    }

    #[test]
    fn verdict_logic() {
        assert_eq!(Verdict::decide(1.0, 0.01, 10.0), Verdict::NonzeroCertified);
        assert_eq!(Verdict::decide(1.0, 0.1, 10.0), Verdict::Inconclusive);
        assert_eq!(Verdict::decide(0.0, 0.0, 10.0), Verdict::Inconclusive);
    }

    #[test]
    fn single_weight_matches_direct_extraction() {
        let (f, nu, mu) = setup();
        let (domain, policy) = cheap();
        let report = sweep_weight(&f, nu, mu, IdealHNF::unit(), &[18], &domain, &policy).unwrap();
        assert_eq!(report.rows.len(), 1);
        let (_, p_mu) = report.rows[0].coefficients().unwrap();
        let spec = PoincareSpec::new(f, Weight::parallel(18).unwrap(), nu, IdealHNF::unit(), policy.convention).unwrap();
        let ev = PoincareEvaluand::new(spec.clone(), policy.truncation(&spec, domain.y).unwrap());
        let direct = extract_coefficient::<f64>(&ev, mu, &domain, &policy.extraction).unwrap();
        assert_eq!(p_mu.re, direct.value.re);
        assert_eq!(p_mu.im, direct.value.im);
    }

    #[test]
    fn equal_indices_give_equal_columns() {
        let (f, nu, _) = setup();
        let (domain, policy) = cheap();
        let report = sweep_weight(&f, nu, nu, IdealHNF::unit(), &[14, 18], &domain, &policy).unwrap();
        for row in &report.rows {
            let (a, b) = row.coefficients().unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn bad_rows_do_not_abort() {
        let (f, nu, mu) = setup();
        let (domain, policy) = cheap();
        let policy = ExperimentPolicy { max_terms: 1, ..policy };
        let report = sweep_weight(&f, nu, mu, IdealHNF::unit(), &[14, 18], &domain, &policy).unwrap();
        assert_eq!(report.rows.len(), 2);
        assert!(report.rows.iter().all(|r| r.truncated));
        assert!(!report.assess(&TrendCriteria::default()).passed());
        assert!(report.to_csv().lines().nth(1).unwrap().contains("NaN"));
    }

    #[test]
    fn rejects_unsorted_or_invalid_input() {
        let (f, nu, mu) = setup();
        let (domain, policy) = cheap();
        assert!(sweep_weight(&f, nu, mu, IdealHNF::unit(), &[10, 6], &domain, &policy).is_err());
        assert!(sweep_weight(&f, nu, mu, IdealHNF::unit(), &[2], &domain, &policy).is_err());
        let not_pos = DualIndex::new(&f, Integral::new(1, 0));
        assert!(sweep_weight(&f, not_pos, mu, IdealHNF::unit(), &[6], &domain, &policy).is_err());
        let levels = rational_levels(&f, &[3, 2]).unwrap();
        assert_eq!(levels.iter().map(|l| l.norm).collect::<Vec<_>>(), vec![4, 9]);
    }

    #[test]
    fn csv_layout() {
        let (f, nu, mu) = setup();
        let (domain, policy) = cheap();
        let report = sweep_weight(&f, nu, mu, IdealHNF::unit(), &[18], &domain, &policy).unwrap();
        let csv = report.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(SWEEP_CSV_HEADER));
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row.len(), 8);
        assert_eq!(row[0], "weight");
        assert_eq!(row[1], "18");
    }

    #[test]
    fn enormous_cutoff_is_inconclusive() {
        let (f, nu, _) = setup();
        let spec = PoincareSpec::new(f, Weight::parallel(12).unwrap(), nu, IdealHNF::unit(), Default::default()).unwrap();
        let domain = SamplingDomain::new([1.1, 1.0], 8).unwrap();
        let policy = ExperimentPolicy {
            term_cutoff: 1e6,
            gamma_height_max: Some(1.0),
            ..Default::default()
        };
        let cert = certify_nonvanishing(&spec, &domain, &policy, 10.0).unwrap();
        assert_eq!(cert.verdict, Verdict::Inconclusive);
    }
}
