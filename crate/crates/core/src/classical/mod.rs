//! The rational case: classical Poincare series for `Gamma_0(q)`.
//!
//! Two independent routes to `p_{m,k,q}(n)`: the explicit Kloosterman/Bessel
//! series ([`petersson_coefficient`]) and a direct coset sum sampled on a
//! horocycle and integrated numerically
//! ([`classical_poincare_coefficient_by_quadrature`]). The Ramanujan `tau`
//! function from an exact q-expansion pins the level one, weight 12 case.

mod bessel;
mod kloosterman;
mod petersson;
mod quadrature;
mod tau;

use serde::{Deserialize, Serialize};

pub use bessel::{bessel_j, bessel_j_bound, bessel_j_series, MAX_ARGUMENT};
pub use kloosterman::{euler_phi, kloosterman, mod_inverse};
pub use petersson::{petersson_coefficient, ClassicalParams, PeterssonResult};
pub use quadrature::{
    classical_poincare_coefficient_by_quadrature, classical_series, ClassicalPolicy, QuadratureResult,
};
pub use tau::{delta_coefficients, MAX_TAU_INDEX};

use crate::error::Result;

/// Header of [`ClassicalRow`] CSV output.
pub const CSV_HEADER: &str = "m,n,k,q,value,tail_bound,method";

/// One computed coefficient, as written to CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalRow {
    pub params: ClassicalParams,
    pub value: f64,
    pub tail_bound: f64,
    pub method: String,
}

impl ClassicalRow {
    pub fn from_petersson(params: ClassicalParams, r: &PeterssonResult<f64>) -> Self {
        Self {
            params,
            value: r.value,
            tail_bound: r.tail_bound,
            method: "petersson".into(),
        }
    }

    pub fn from_quadrature(params: ClassicalParams, r: &QuadratureResult<f64>) -> Self {
        Self {
            params,
            value: r.value,
            tail_bound: r.total_error(),
            method: "quadrature".into(),
        }
    }

    pub fn csv(&self) -> String {
        let p = &self.params;
        format!(
            "{},{},{},{},{:.17e},{:.3e},{}",
            p.m, p.n, p.k, p.q, self.value, self.tail_bound, self.method
        )
    }
}

/// One entry of [`nonvanishing_range_scan`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanEntry {
    pub m: i64,
    pub value: f64,
    pub tail_bound: f64,
    pub certified: bool,
}

/// Result of a scan over `m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeScan {
    pub k: i64,
    pub c_max: i64,
    pub entries: Vec<ScanEntry>,
}

impl RangeScan {
    /// Largest `m` such that every `m' <= m` is certified.
    pub fn largest_certified(&self) -> Option<i64> {
        self.entries.iter().take_while(|e| e.certified).last().map(|e| e.m)
    }
}

/// Checks `|p_{m,k,1}(m)| > 10 tail` for `m = 1..=m_max`.
pub fn nonvanishing_range_scan(k: i64, m_max: i64, c_max: i64) -> Result<RangeScan> {
    let mut entries = Vec::new();
    for m in 1..=m_max {
        let params = ClassicalParams::new(m, m, k, 1)?;
        let r = petersson_coefficient::<f64>(&params, c_max)?;
        entries.push(ScanEntry {
            m,
            value: r.value,
            tail_bound: r.tail_bound,
            certified: r.value.abs() > 10.0 * r.tail_bound,
        });
    }
    Ok(RangeScan { k, c_max, entries })
}
