use num_complex::Complex;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::classical::kloosterman::mod_inverse;
use crate::classical::petersson::ClassicalParams;
use crate::error::{Error, Result};
use crate::scalar::{cis_turns, Real};
use crate::summation::{CompensatedSum, ComplexSum};

/// Controls for the coset-sum and quadrature path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalPolicy {
    pub grid_n: usize,
    pub term_cutoff: f64,
    /// Imaginary part of the sampling line; `None` picks `1 / (2 max(m, n))`.
    pub y: Option<f64>,
    pub max_terms: usize,
}

impl Default for ClassicalPolicy {
    fn default() -> Self {
        Self {
            grid_n: 64,
            term_cutoff: 1e-17,
            y: None,
            max_terms: 10_000_000,
        }
    }
}

/// Coefficient from the quadrature path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult<T> {
    pub value: T,
    /// Imaginary part, zero up to noise.
    pub imag: T,
    pub quad_error: T,
    pub trunc_error: T,
}

impl<T: Real> QuadratureResult<T> {
    pub fn total_error(&self) -> T {
        self.quad_error + self.trunc_error + self.imag.abs()
    }
}

/// Classical Poincare series `sum (cz + d)^{-k} e(m gamma z)` over
/// `Gamma_inf \ Gamma_0(q)` at one point, with a tail estimate.
pub fn classical_series<T: Real>(params: &ClassicalParams, x: T, y: T, policy: &ClassicalPolicy) -> Result<(Complex<T>, T)> {
    let ClassicalParams { m, k, q, .. } = *params;
    let kf = T::of_i64(k);
    let cutoff = T::of(policy.term_cutoff);
    let two_pi = T::two_pi();
    let mf = T::of_i64(m);
    let f = |s: T| s.powf(-kf) * (-two_pi * mf * y / (s * s)).exp();
    let s_star = (T::of(2.0) * two_pi * mf * y / kf).sqrt();
    let s_max = cutoff.powf(-T::one() / kf);

    let mut value = ComplexSum::new();
    let mut dropped = CompensatedSum::new();
    let mut terms = 0usize;
    let identity = cis_turns(mf * x) * (-two_pi * mf * y).exp();
    if identity.norm() >= cutoff {
        value.add(identity);
        terms += 1;
    } else {
        dropped.add(identity.norm());
    }

    let mut c = q;
    loop {
        let cf = T::of_i64(c);
        let cy = cf * y;
        if f(cy.max(s_star)) < cutoff {
            if cy > s_star {
                break;
            }
            c += q;
            continue;
        }
        let t = (s_max * s_max - cy * cy).max(T::zero()).sqrt();
        let d_lo = (-cf * x - t).ceil().to_i64().unwrap_or(0);
        let d_hi = (-cf * x + t).floor().to_i64().unwrap_or(-1);
        for d in d_lo..=d_hi {
            if c.gcd(&d) != 1 {
                continue;
            }
            let w = Complex::new(cf * x + T::of_i64(d), cy);
            let s2 = w.norm_sqr();
            let modulus = f(s2.sqrt());
            if modulus < cutoff {
                dropped.add(modulus);
                continue;
            }
            let a = mod_inverse(d, c).expect("coprime");
            let exact = T::of_i64((m as i128 * a as i128).rem_euclid(c as i128) as i64) / cf;
            let turns = exact - mf * w.re / (cf * s2);
            let angle = two_pi * turns - kf * cy.atan2(w.re);
            value.add(Complex::from_polar(modulus, angle));
            terms += 1;
            if terms > policy.max_terms {
                return Err(Error::TruncationFailure {
                    max_terms: policy.max_terms,
                    partial: terms,
                });
            }
        }
        c += q;
    }
    // rows beyond the last c, and the d-tails of the rows kept, by integrals
    let b_k = T::of(crate::hpoincare::beta_integral(k));
    let c_last = T::of_i64(c);
    let row_tail = b_k * y.powf(T::one() - kf) * c_last.powf(T::of(2.0) - kf) / (T::of_i64(q) * (kf - T::of(2.0)));
    let d_tail = T::of(2.0) * s_max.powf(T::one() - kf) / (kf - T::one()) * T::of_i64(c / q);
    Ok((value.value(), dropped.value() + row_tail + d_tail))
}

/// `p_{m,k,q}(n)` from the coset sum sampled on `x = j / N` at fixed `y`.
pub fn classical_poincare_coefficient_by_quadrature<T: Real>(
    params: &ClassicalParams,
    policy: &ClassicalPolicy,
) -> Result<QuadratureResult<T>> {
    let n_grid = policy.grid_n;
    if n_grid < 4 || !n_grid.is_multiple_of(2) {
        return Err(Error::InvalidDomain(format!("grid_n = {n_grid} must be even and at least 4")));
    }
    let y = T::of(policy.y.unwrap_or(0.5 / params.m.max(params.n) as f64));
    let nf = T::of_i64(n_grid as i64);
    let mut full = ComplexSum::new();
    let mut half = ComplexSum::new();
    let mut tails = CompensatedSum::new();
    for j in 0..n_grid {
        let x = T::of_i64(j as i64) / nf;
        let (v, tail) = classical_series(params, x, y, policy)?;
        tails.add(tail);
        let idx = (params.n as i128 * j as i128).rem_euclid(n_grid as i128) as i64;
        let w = v * cis_turns(-T::of_i64(idx) / nf);
        full.add(w);
        if j % 2 == 0 {
            half.add(w);
        }
    }
    let amp = (T::two_pi() * T::of_i64(params.n) * y).exp();
    let value = full.value() * (amp / nf);
    let coarse = half.value() * (amp * T::of(2.0) / nf);
    Ok(QuadratureResult {
        value: value.re,
        imag: value.im,
        quad_error: (value - coarse).norm(),
        trunc_error: amp * tails.value() / nf,
    })
}
