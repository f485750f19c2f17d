use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qfield::element::{FieldElement, Integral};
use crate::qfield::field::RealQuadraticField;
use crate::scalar::Real;

/// Element `nu = numerator / sqrt D` of the codifferent.
///
/// `freq = (tr(nu), tr(nu omega))` are the integer Fourier frequencies of
/// `e^{2 pi i tr(nu x)}` in the lattice coordinates `x = u + v omega`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DualIndex {
    pub numerator: Integral,
    pub freq: (i64, i64),
}

impl DualIndex {
    pub fn new(field: &RealQuadraticField, numerator: Integral) -> Self {
        Self {
            numerator,
            freq: Self::frequencies(field, numerator),
        }
    }

    /// `tr(x / sqrt D)` is the omega-coordinate of `x` for every integral `x`.
    fn frequencies(field: &RealQuadraticField, n: Integral) -> (i64, i64) {
        let nw = field.mul(n, Integral::OMEGA);
        (n.b, nw.b)
    }

    /// Dual index with the given frequency pair.
    pub fn from_freq(field: &RealQuadraticField, r: i64, s: i64) -> Self {
        // n = p + q omega has freq (q, p + q t)
        let numerator = Integral::new(s - r * field.omega_trace(), r);
        Self::new(field, numerator)
    }

    /// Re-derives the frequency pair and compares with the stored one.
    pub fn is_consistent(&self, field: &RealQuadraticField) -> bool {
        self.freq == Self::frequencies(field, self.numerator)
    }

    /// `nu` as an exact field element.
    pub fn element(&self, field: &RealQuadraticField) -> FieldElement {
        let x = field.mul(self.numerator, field.sqrt_disc());
        FieldElement::from(x).scale_div(field.disc())
    }

    pub fn trace(&self) -> i64 {
        self.freq.0
    }

    /// `tr(nu lambda)` for integral `lambda`; always an integer.
    pub fn pairing(&self, lambda: Integral) -> i64 {
        self.freq.0 * lambda.a + self.freq.1 * lambda.b
    }

    pub fn is_totally_positive(&self, field: &RealQuadraticField) -> bool {
        field.is_totally_positive(self.element(field))
    }

    /// Checked constructor for the index of a Poincare series.
    pub fn totally_positive(field: &RealQuadraticField, numerator: Integral) -> Result<Self> {
        let nu = Self::new(field, numerator);
        if !nu.is_totally_positive(field) {
            return Err(Error::NotTotallyPositive(format!("{numerator}/sqrt({})", field.disc())));
        }
        Ok(nu)
    }

    pub fn embed<T: Real>(&self, field: &RealQuadraticField) -> [T; 2] {
        let [n1, n2] = field.embed::<T>(self.numerator);
        let [s1, s2] = field.sqrt_disc_embeddings::<T>();
        [n1 / s1, n2 / s2]
    }

    /// `tr(nu y)` for a real vector `y`.
    pub fn trace_with<T: Real>(&self, field: &RealQuadraticField, y: [T; 2]) -> T {
        let [a, b] = self.embed::<T>(field);
        a * y[0] + b * y[1]
    }

    /// `nu * lambda` for integral `lambda`.
    pub fn mul_integral(&self, field: &RealQuadraticField, lambda: Integral) -> Self {
        Self::new(field, field.mul(self.numerator, lambda))
    }
}

impl fmt::Display for DualIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/sqrtD", self.numerator)
    }
}

impl RealQuadraticField {
    /// Totally positive dual indices of the given trace, ordered by numerator.
    ///
    /// Finite: `nu >> 0` with `tr(nu) = t` forces both embeddings into `(0, t)`.
    pub fn totally_positive_of_trace(&self, trace: i64) -> Vec<DualIndex> {
        if trace <= 0 {
            return Vec::new();
        }
        // numerator = p + trace * omega; both embeddings of nu lie in (0, trace),
        // so |sigma_j(numerator)| < trace * sqrt D bounds p.
        let sd = (self.disc() as f64).sqrt();
        let w = self.omega_embeddings::<f64>();
        let bound = trace as f64 * sd;
        let lo = (-bound - trace as f64 * w[0].max(w[1])).floor() as i64 - 1;
        let hi = (bound - trace as f64 * w[0].min(w[1])).ceil() as i64 + 1;
        (lo..=hi)
            .map(|p| DualIndex::new(self, Integral::new(p, trace)))
            .filter(|nu| nu.is_totally_positive(self))
            .collect()
    }

    /// All totally positive dual indices with `tr(nu) <= max_trace`.
    pub fn totally_positive_up_to_trace(&self, max_trace: i64) -> Vec<DualIndex> {
        (1..=max_trace)
            .flat_map(|t| self.totally_positive_of_trace(t))
            .collect()
    }
}
