use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qfield::element::Integral;
use crate::qfield::field::RealQuadraticField;

/// Integral ideal in Hermite normal form.
///
/// The Z-basis is `{m00 + m01 omega, m11 omega}` with `m00, m11 >= 1` and
/// `0 <= m01 < m11`; the index `[O_F : I]` is `m00 * m11`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IdealHNF {
    pub m00: i64,
    pub m01: i64,
    pub m11: i64,
    pub norm: i64,
}

/// Upper-triangular HNF `(m00, m01, m11)` of the Z-span of 2D integer
/// vectors, or `None` when the span has rank below 2.
pub fn hnf2(vectors: &[(i64, i64)]) -> Option<(i64, i64, i64)> {
    let mut rows: Vec<(i128, i128)> = vectors
        .iter()
        .map(|&(p, q)| (p as i128, q as i128))
        .filter(|&(p, q)| p != 0 || q != 0)
        .collect();
    // Euclid on the first column until a single row has a nonzero entry there.
    let mut pivot: Option<(i128, i128)> = None;
    loop {
        rows.sort_by_key(|r| (r.0 == 0, r.0.abs()));
        let nonzero = rows.iter().take_while(|r| r.0 != 0).count();
        if nonzero <= 1 {
            if nonzero == 1 {
                pivot = Some(rows.remove(0));
            }
            break;
        }
        let (p0, q0) = rows[0];
        for r in rows.iter_mut().skip(1).take(nonzero - 1) {
            let f = r.0.div_euclid(p0);
            r.0 -= f * p0;
            r.1 -= f * q0;
        }
    }
    let (mut p, mut q) = pivot?;
    let m11 = rows.iter().fold(0i128, |g, r| gcd(g, r.1));
    if m11 == 0 {
        return None;
    }
    if p < 0 {
        p = -p;
        q = -q;
    }
    let q = q.rem_euclid(m11);
    Some((p as i64, q as i64, m11 as i64))
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl IdealHNF {
    /// The unit ideal `O_F`.
    pub fn unit() -> Self {
        Self {
            m00: 1,
            m01: 0,
            m11: 1,
            norm: 1,
        }
    }

    /// Ideal generated (as an O_F-module) by the given elements.
    pub fn from_generators(field: &RealQuadraticField, gens: &[Integral]) -> Result<Self> {
        let mut vectors = Vec::with_capacity(2 * gens.len());
        for &g in gens {
            let gw = field.mul(g, Integral::OMEGA);
            vectors.push((g.a, g.b));
            vectors.push((gw.a, gw.b));
        }
        let (m00, m01, m11) = hnf2(&vectors).ok_or(Error::ZeroGenerator)?;
        Self::from_hnf(field, m00, m01, m11)
    }

    /// Validates an HNF basis, including closure under multiplication by omega.
    pub fn from_hnf(field: &RealQuadraticField, m00: i64, m01: i64, m11: i64) -> Result<Self> {
        if m00 < 1 || m11 < 1 || !(0..m11).contains(&m01) {
            return Err(Error::NotAnIdeal(format!(
                "HNF entries out of range: ({m00}, {m01}, {m11})"
            )));
        }
        let ideal = Self {
            m00,
            m01,
            m11,
            norm: m00 * m11,
        };
        let [b0, b1] = ideal.basis();
        for b in [b0, b1] {
            if !ideal.contains(field.mul(b, Integral::OMEGA)) {
                return Err(Error::NotAnIdeal(format!(
                    "lattice ({m00}, {m01}, {m11}) is not closed under omega"
                )));
            }
        }
        Ok(ideal)
    }

    pub fn basis(&self) -> [Integral; 2] {
        [Integral::new(self.m00, self.m01), Integral::new(0, self.m11)]
    }

    /// Membership by exact triangular solve over Z.
    pub fn contains(&self, x: Integral) -> bool {
        if x.a % self.m00 != 0 {
            return false;
        }
        let t = x.a / self.m00;
        (x.b - t * self.m01) % self.m11 == 0
    }

    pub fn is_unit(&self) -> bool {
        self.norm == 1
    }

    /// Canonical residue of `x` modulo the ideal: `a` in `[0, m00)`, `b` in `[0, m11)`.
    pub fn reduce(&self, x: Integral) -> Integral {
        let t = x.a.div_euclid(self.m00);
        let a = x.a - t * self.m00;
        let b = (x.b - t * self.m01).rem_euclid(self.m11);
        Integral::new(a, b)
    }

    /// Index of the residue class of `x` in `0..norm`.
    pub fn residue_index(&self, x: Integral) -> usize {
        let r = self.reduce(x);
        (r.a * self.m11 + r.b) as usize
    }

    /// Residue with the given index; inverse of [`residue_index`](Self::residue_index).
    pub fn residue(&self, index: usize) -> Integral {
        let i = index as i64;
        Integral::new(i / self.m11, i % self.m11)
    }
}

impl RealQuadraticField {
    /// Principal ideal `c O_F`.
    pub fn ideal_from_gen(&self, c: Integral) -> Result<IdealHNF> {
        if c.is_zero() {
            return Err(Error::ZeroGenerator);
        }
        IdealHNF::from_generators(self, &[c])
    }

    pub fn ideal_contains(&self, ideal: &IdealHNF, x: Integral) -> bool {
        ideal.contains(x)
    }

    pub fn ideal_norm(&self, ideal: &IdealHNF) -> i64 {
        ideal.norm
    }

    /// `gamma O_F + delta O_F = O_F`, decided by the HNF of
    /// `{gamma, gamma omega, delta, delta omega}`.
    pub fn is_unimodular_pair(&self, gamma: Integral, delta: Integral) -> Result<bool> {
        if gamma.is_zero() && delta.is_zero() {
            return Err(Error::ZeroPair);
        }
        let ideal = IdealHNF::from_generators(self, &[gamma, delta])?;
        Ok(ideal.is_unit())
    }

    /// `(a, b)` with `a delta - b gamma = 1`, via the norm-Euclidean extended GCD.
    pub fn complete_pair(&self, gamma: Integral, delta: Integral) -> Result<(Integral, Integral)> {
        if !self.is_euclidean() {
            return Err(Error::UnsupportedField(self.d()));
        }
        if !self.is_unimodular_pair(gamma, delta)? {
            return Err(Error::NotUnimodular {
                gamma: gamma.to_string(),
                delta: delta.to_string(),
            });
        }
        // s gamma + t delta = g, g a unit
        let (g, s, t) = self.ext_gcd(gamma, delta)?;
        let g_inv = self.unit_inverse(g).ok_or(Error::NotUnimodular {
            gamma: gamma.to_string(),
            delta: delta.to_string(),
        })?;
        let a = self.mul(t, g_inv);
        let b = -self.mul(s, g_inv);
        debug_assert_eq!(self.mul(a, delta) - self.mul(b, gamma), Integral::ONE);
        Ok((a, b))
    }

    /// Inverse of `x` modulo a nonzero `modulus`, or `None` if `x` is not a unit there.
    pub fn inverse_mod(&self, x: Integral, modulus: Integral) -> Result<Option<Integral>> {
        if modulus.is_zero() {
            return Err(Error::ZeroGenerator);
        }
        if x.is_zero() {
            return Ok((self.norm(modulus).abs() == 1).then_some(Integral::ZERO));
        }
        let (g, s, _t) = self.ext_gcd(x, modulus)?;
        match self.unit_inverse(g) {
            Some(g_inv) => Ok(Some(self.mul(s, g_inv))),
            None => Ok(None),
        }
    }
}
