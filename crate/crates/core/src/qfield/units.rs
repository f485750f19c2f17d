use crate::error::Result;
use crate::qfield::element::Integral;
use crate::qfield::field::RealQuadraticField;

/// Representative of the orbit `{+-eps^m gamma}` of a nonzero integral element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrbitRep {
    pub rep: Integral,
    /// `rep = sign * eps^exponent * gamma`.
    pub exponent: i32,
    pub sign: i64,
}

impl RealQuadraticField {
    /// `tr(x^2) = sigma_1(x)^2 + sigma_2(x)^2`, exact.
    pub fn trace_square(&self, x: Integral) -> i128 {
        let sq = self.mul(x, x);
        2 * sq.a as i128 + sq.b as i128 * self.omega_trace() as i128
    }

    /// Canonical representative of the unit orbit of `gamma`.
    ///
    /// Minimizes `tr(gamma^2)` over `+-eps^m gamma` (a strictly convex
    /// function of `m`, so a walk finds it); ties are broken by the
    /// lexicographically largest coordinates. Purely exact arithmetic.
    pub fn canonical_orbit_rep(&self, gamma: Integral) -> Result<OrbitRep> {
        debug_assert!(!gamma.is_zero());
        let eps = self.fundamental_unit()?;
        let eps_inv = self.unit_inverse(eps).expect("unit");
        let mut x = gamma;
        let mut m = 0i32;
        let mut cur = self.trace_square(x);
        loop {
            let up = self.mul(x, eps);
            let t_up = self.trace_square(up);
            if t_up < cur {
                x = up;
                m += 1;
                cur = t_up;
                continue;
            }
            let down = self.mul(x, eps_inv);
            let t_down = self.trace_square(down);
            if t_down < cur {
                x = down;
                m -= 1;
                cur = t_down;
                continue;
            }
            break;
        }
        let mut best = OrbitRep {
            rep: x,
            exponent: m,
            sign: 1,
        };
        let candidates = [
            (x, m),
            (self.mul(x, eps), m + 1),
            (self.mul(x, eps_inv), m - 1),
        ];
        for (c, e) in candidates {
            if self.trace_square(c) != cur {
                continue;
            }
            for s in [1i64, -1] {
                let v = c.scale(s);
                if v > best.rep {
                    best = OrbitRep {
                        rep: v,
                        exponent: e,
                        sign: s,
                    };
                }
            }
        }
        Ok(best)
    }

    pub fn is_canonical_orbit_rep(&self, gamma: Integral) -> Result<bool> {
        Ok(self.canonical_orbit_rep(gamma)?.rep == gamma)
    }
}
