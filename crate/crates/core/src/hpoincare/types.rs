use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qfield::{DualIndex, IdealHNF, Integral, RealQuadraticField};

/// Weight vector `(k1, k2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Weight {
    pub k1: i64,
    pub k2: i64,
}

impl Weight {
    /// Requires `k1, k2 > 2` and `k1 + k2` even.
    pub fn new(k1: i64, k2: i64) -> Result<Self> {
        if k1 <= 2 || k2 <= 2 {
            return Err(Error::InvalidWeight(format!("({k1}, {k2}): components must exceed 2")));
        }
        if (k1 + k2) % 2 != 0 {
            return Err(Error::InvalidWeight(format!("({k1}, {k2}): k1 + k2 must be even")));
        }
        Ok(Self { k1, k2 })
    }

    pub fn parallel(k: i64) -> Result<Self> {
        Self::new(k, k)
    }

    pub fn is_parallel(&self) -> bool {
        self.k1 == self.k2
    }

    pub fn as_array(&self) -> [i64; 2] {
        [self.k1, self.k2]
    }

    pub fn min(&self) -> i64 {
        self.k1.min(self.k2)
    }

    pub(crate) fn mean(&self) -> f64 {
        (self.k1 + self.k2) as f64 / 2.0
    }
}

/// Which subgroup the series is folded over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[derive(Default)]
pub enum GammaInfConvention {
    /// Translations only. The unit translates `eps^m` of every bottom row
    /// are summed for `|m| <= unit_cap`; the remainder is estimated.
    TranslationsOnly { unit_cap: u32 },
    /// One representative per unit orbit of bottom rows; the `gamma = 0`
    /// class is the identity alone.
    #[default]
    UnitExtended,
}

impl GammaInfConvention {
    pub const DEFAULT_UNIT_CAP: u32 = 16;

    pub fn translations_only() -> Self {
        Self::TranslationsOnly {
            unit_cap: Self::DEFAULT_UNIT_CAP,
        }
    }

    pub(crate) fn unit_range(&self) -> std::ops::RangeInclusive<i32> {
        match *self {
            Self::UnitExtended => 0..=0,
            Self::TranslationsOnly { unit_cap } => -(unit_cap as i32)..=unit_cap as i32,
        }
    }
}


/// Full description of one Poincare series `P_{k, nu, I}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoincareSpec {
    pub field: RealQuadraticField,
    pub weight: Weight,
    pub nu: DualIndex,
    pub level: IdealHNF,
    pub convention: GammaInfConvention,
}

impl PoincareSpec {
    pub fn new(
        field: RealQuadraticField,
        weight: Weight,
        nu: DualIndex,
        level: IdealHNF,
        convention: GammaInfConvention,
    ) -> Result<Self> {
        if !nu.is_consistent(&field) {
            return Err(Error::InvalidParameters(format!("stale frequency pair on {nu}")));
        }
        if !nu.is_totally_positive(&field) {
            return Err(Error::NotTotallyPositive(nu.to_string()));
        }
        if level.norm < 1 {
            return Err(Error::NotAnIdeal("zero level".into()));
        }
        let eps = field.fundamental_unit()?;
        let parallel_even = weight.is_parallel() && weight.k1 % 2 == 0;
        if convention == GammaInfConvention::UnitExtended && field.norm(eps) == -1 && !parallel_even {
            return Err(Error::InvalidWeight(format!(
                "({}, {}): the unit-extended convention over a field with a norm -1 unit needs parallel even weight",
                weight.k1, weight.k2
            )));
        }
        if let GammaInfConvention::TranslationsOnly { unit_cap } = convention {
            // eps^{2 cap} must stay well inside i64 coordinates
            let eps1 = field.embed::<f64>(eps)[0].abs();
            if 2.0 * unit_cap as f64 * eps1.ln() > 40.0 * std::f64::consts::LN_2 {
                return Err(Error::InvalidParameters(format!("unit cap {unit_cap} too large for d = {}", field.d())));
            }
        }
        Ok(Self {
            field,
            weight,
            nu,
            level,
            convention,
        })
    }

    /// Same series at a different weight.
    pub fn with_weight(&self, weight: Weight) -> Result<Self> {
        Self::new(self.field, weight, self.nu, self.level, self.convention)
    }

    /// Same series at a different level.
    pub fn with_level(&self, level: IdealHNF) -> Result<Self> {
        Self::new(self.field, self.weight, self.nu, level, self.convention)
    }

    pub fn with_nu(&self, nu: DualIndex) -> Result<Self> {
        Self::new(self.field, self.weight, nu, self.level, self.convention)
    }
}

/// Coset representative `[[a, b], [gamma, delta]]` with `a delta - b gamma = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CosetRep {
    pub gamma: Integral,
    pub delta: Integral,
    pub a: Integral,
    pub b: Integral,
}

impl CosetRep {
    pub fn identity() -> Self {
        Self {
            gamma: Integral::ZERO,
            delta: Integral::ONE,
            a: Integral::ONE,
            b: Integral::ZERO,
        }
    }

    /// Completes a unimodular bottom row.
    pub fn from_bottom_row(field: &RealQuadraticField, gamma: Integral, delta: Integral) -> Result<Self> {
        let (a, b) = field.complete_pair(gamma, delta)?;
        Ok(Self { gamma, delta, a, b })
    }

    pub fn determinant(&self, field: &RealQuadraticField) -> Integral {
        field.mul(self.a, self.delta) - field.mul(self.b, self.gamma)
    }

    /// Canonical ordering key.
    pub fn key(&self) -> (Integral, Integral) {
        (self.gamma, self.delta)
    }
}

/// Matrix `[[a, b], [c, d]]` in `SL_2(O_F)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sl2Matrix {
    pub a: Integral,
    pub b: Integral,
    pub c: Integral,
    pub d: Integral,
}

impl Sl2Matrix {
    pub fn new(field: &RealQuadraticField, a: Integral, b: Integral, c: Integral, d: Integral) -> Result<Self> {
        if field.mul(a, d) - field.mul(b, c) != Integral::ONE {
            return Err(Error::NotUnimodular {
                gamma: c.to_string(),
                delta: d.to_string(),
            });
        }
        Ok(Self { a, b, c, d })
    }

    pub fn identity() -> Self {
        Self {
            a: Integral::ONE,
            b: Integral::ZERO,
            c: Integral::ZERO,
            d: Integral::ONE,
        }
    }

    /// Whether the matrix lies in `Gamma_0(level)`.
    pub fn in_level(&self, level: &IdealHNF) -> bool {
        level.contains(self.c)
    }

    pub fn as_coset(&self) -> CosetRep {
        CosetRep {
            gamma: self.c,
            delta: self.d,
            a: self.a,
            b: self.b,
        }
    }
}

/// Truncation controls for one evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    /// Bound on `max_j |gamma_j|`.
    pub gamma_height_max: f64,
    /// Terms with modulus below this are dropped.
    pub term_cutoff: f64,
    /// Hard limit on kept terms per evaluation.
    pub max_terms: usize,
    /// Slack added to every lattice box, in embedding units.
    pub delta_box_margin: f64,
}

impl TruncationPolicy {
    pub const DEFAULT_MAX_TERMS: usize = 5_000_000;
    pub const DEFAULT_MARGIN: f64 = 1e-6;

    pub fn new(gamma_height_max: f64, term_cutoff: f64) -> Self {
        Self {
            gamma_height_max,
            term_cutoff,
            max_terms: Self::DEFAULT_MAX_TERMS,
            delta_box_margin: Self::DEFAULT_MARGIN,
        }
    }

    /// Policy whose height box contains every `gamma` that can carry a term
    /// above `term_cutoff` at imaginary part `y`.
    pub fn for_cutoff(spec: &PoincareSpec, y: [f64; 2], term_cutoff: f64) -> Result<Self> {
        let h = super::plan::required_height(spec, y, term_cutoff)?;
        Ok(Self::new(h, term_cutoff))
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.gamma_height_max > 0.0
            && self.gamma_height_max.is_finite()
            && self.term_cutoff > 0.0
            && self.term_cutoff.is_finite()
            && self.max_terms > 0
            && self.delta_box_margin > 0.0
            && self.delta_box_margin.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidPolicy(format!("{self:?}")))
        }
    }

    pub fn with_cutoff(&self, term_cutoff: f64) -> Self {
        Self { term_cutoff, ..*self }
    }

    pub fn with_height(&self, gamma_height_max: f64) -> Self {
        Self {
            gamma_height_max,
            ..*self
        }
    }
}

/// Result of one truncated evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult<T> {
    pub value: num_complex::Complex<T>,
    /// Heuristic estimate of the dropped mass; never added to `value`.
    pub tail_estimate: T,
    pub terms_used: usize,
    /// Largest modulus among terms that were examined and dropped.
    pub largest_dropped: T,
}
