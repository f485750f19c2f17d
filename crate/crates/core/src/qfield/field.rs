use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qfield::element::{FieldElement, Integral};
use crate::scalar::Real;

/// Squarefree `d` with `Q(sqrt d)` norm-Euclidean.
pub const EUCLIDEAN_D: [i64; 6] = [2, 3, 5, 6, 7, 13];

/// Which generator of the ring of integers is used as `omega`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OmegaKind {
    /// `omega = (1 + sqrt d) / 2`, used when `d = 1 mod 4`.
    HalfInteger,
    /// `omega = sqrt d`, used when `d = 2, 3 mod 4`.
    Sqrt,
}

/// A real quadratic field `Q(sqrt d)` with integral basis `[1, omega]`.
///
/// Elements are not tied to a field value; arithmetic that needs the
/// relation `omega^2 = t omega - n` goes through methods on this type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RealQuadraticField {
    d: i64,
    disc: i64,
    omega_kind: OmegaKind,
    euclidean: bool,
}

pub(crate) fn is_squarefree(d: i64) -> bool {
    let mut n = d.unsigned_abs();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p * p) {
            return false;
        }
        if n.is_multiple_of(p) {
            n /= p;
        }
        p += 1;
    }
    true
}

/// Builds `Q(sqrt d)`, rejecting `d` outside the norm-Euclidean set.
pub fn make_field(d: i64) -> Result<RealQuadraticField> {
    RealQuadraticField::new(d)
}

impl RealQuadraticField {
    /// Strict constructor: `d` must be one of [`EUCLIDEAN_D`].
    pub fn new(d: i64) -> Result<Self> {
        let field = Self::new_lenient(d)?;
        if !field.euclidean {
            return Err(Error::UnsupportedField(d));
        }
        Ok(field)
    }

    /// Accepts any squarefree `d > 1`. Operations that need a Euclidean
    /// algorithm or a tabulated unit fail on fields outside the supported set.
    pub fn new_lenient(d: i64) -> Result<Self> {
        if d <= 1 {
            return Err(Error::DiscriminantTooSmall(d));
        }
        if !is_squarefree(d) {
            return Err(Error::NotSquarefree(d));
        }
        let (disc, omega_kind) = if d.rem_euclid(4) == 1 {
            (d, OmegaKind::HalfInteger)
        } else {
            (4 * d, OmegaKind::Sqrt)
        };
        Ok(Self {
            d,
            disc,
            omega_kind,
            euclidean: EUCLIDEAN_D.contains(&d),
        })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    /// Discriminant `D`.
    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn omega_kind(&self) -> OmegaKind {
        self.omega_kind
    }

    pub fn is_euclidean(&self) -> bool {
        self.euclidean
    }

    /// `tr(omega)`.
    pub fn omega_trace(&self) -> i64 {
        match self.omega_kind {
            OmegaKind::HalfInteger => 1,
            OmegaKind::Sqrt => 0,
        }
    }

    /// `N(omega)`.
    pub fn omega_norm(&self) -> i64 {
        match self.omega_kind {
            OmegaKind::HalfInteger => (1 - self.d) / 4,
            OmegaKind::Sqrt => -self.d,
        }
    }

    /// Multiplier `s` with `omega - conj(omega) = s sqrt d`.
    pub(crate) fn omega_sqrt_coeff(&self) -> i64 {
        match self.omega_kind {
            OmegaKind::HalfInteger => 1,
            OmegaKind::Sqrt => 2,
        }
    }

    /// `(sigma_1(omega), sigma_2(omega))`, with `sigma_1(sqrt d) > 0`.
    pub fn omega_embeddings<T: Real>(&self) -> [T; 2] {
        let r = T::of_i64(self.d).sqrt();
        match self.omega_kind {
            OmegaKind::HalfInteger => {
                let half = T::of(0.5);
                [half * (T::one() + r), half * (T::one() - r)]
            }
            OmegaKind::Sqrt => [r, -r],
        }
    }

    /// `sqrt D` as an element of the ring of integers.
    pub fn sqrt_disc(&self) -> Integral {
        match self.omega_kind {
            OmegaKind::HalfInteger => Integral::new(-1, 2),
            OmegaKind::Sqrt => Integral::new(0, 2),
        }
    }

    /// Embedding pair of `sqrt D`.
    pub fn sqrt_disc_embeddings<T: Real>(&self) -> [T; 2] {
        let r = T::of_i64(self.disc).sqrt();
        [r, -r]
    }

    /// Fundamental unit `eps > 1` (under `sigma_1`), from a fixed table.
    pub fn fundamental_unit(&self) -> Result<Integral> {
        let (a, b) = match self.d {
            2 => (1, 1),
            3 => (2, 1),
            5 => (0, 1),
            6 => (5, 2),
            7 => (8, 3),
            13 => (1, 1),
            d => return Err(Error::UnsupportedField(d)),
        };
        Ok(Integral::new(a, b))
    }

    /// Generator `1/sqrt D` of the codifferent (trace dual of the ring of integers).
    pub fn codifferent_gen(&self) -> FieldElement {
        FieldElement::from(self.sqrt_disc()).scale_div(self.disc)
    }

    // ---- integral arithmetic -------------------------------------------

    pub fn mul(&self, x: Integral, y: Integral) -> Integral {
        let (t, n) = (self.omega_trace() as i128, self.omega_norm() as i128);
        let (a, b, c, e) = (x.a as i128, x.b as i128, y.a as i128, y.b as i128);
        let be = b * e;
        Integral::new(
            narrow(a * c - be * n),
            narrow(a * e + b * c + be * t),
        )
    }

    pub fn conj(&self, x: Integral) -> Integral {
        Integral::new(x.a + x.b * self.omega_trace(), -x.b)
    }

    pub fn trace(&self, x: Integral) -> i64 {
        2 * x.a + x.b * self.omega_trace()
    }

    pub fn norm(&self, x: Integral) -> i64 {
        narrow(self.norm_wide(x))
    }

    pub(crate) fn norm_wide(&self, x: Integral) -> i128 {
        let (a, b) = (x.a as i128, x.b as i128);
        a * a + a * b * self.omega_trace() as i128 + b * b * self.omega_norm() as i128
    }

    pub fn pow(&self, x: Integral, e: u32) -> Integral {
        let mut acc = Integral::ONE;
        for _ in 0..e {
            acc = self.mul(acc, x);
        }
        acc
    }

    /// Inverse of a unit (norm `+-1`).
    pub fn unit_inverse(&self, u: Integral) -> Option<Integral> {
        match self.norm(u) {
            1 => Some(self.conj(u)),
            -1 => Some(-self.conj(u)),
            _ => None,
        }
    }

    /// `eps^m` for the fundamental unit and any integer `m`.
    pub fn unit_power(&self, m: i32) -> Result<Integral> {
        let eps = self.fundamental_unit()?;
        let base = if m < 0 {
            self.unit_inverse(eps).expect("fundamental unit is a unit")
        } else {
            eps
        };
        Ok(self.pow(base, m.unsigned_abs()))
    }

    /// Exact `x / y` when the quotient is integral.
    pub fn div_exact(&self, x: Integral, y: Integral) -> Option<Integral> {
        let n = self.norm_wide(y);
        if n == 0 {
            return None;
        }
        let num = self.mul(x, self.conj(y));
        let (a, b) = (num.a as i128, num.b as i128);
        if a % n != 0 || b % n != 0 {
            return None;
        }
        Some(Integral::new(narrow(a / n), narrow(b / n)))
    }

    /// Exact sign of `sigma_j(x)` (`j` in `{0, 1}`).
    pub fn embedding_sign(&self, x: Integral, j: usize) -> i32 {
        // 2 sigma_j(x) = (2a + b t) +- b s sqrt d
        let u = 2 * x.a as i128 + x.b as i128 * self.omega_trace() as i128;
        let mut v = x.b as i128 * self.omega_sqrt_coeff() as i128;
        if j == 1 {
            v = -v;
        }
        sign_of_surd(u, v, self.d as i128)
    }

    /// Real embeddings of an integral element.
    ///
    /// The larger embedding is computed directly and the smaller one from the
    /// exact norm, so both carry full relative precision even under heavy
    /// cancellation.
    pub fn embed<T: Real>(&self, x: Integral) -> [T; 2] {
        let [w1, w2] = self.omega_embeddings::<T>();
        let (a, b) = (T::of_i64(x.a), T::of_i64(x.b));
        let e1 = a + b * w1;
        let e2 = a + b * w2;
        let n = self.norm_wide(x);
        if n == 0 {
            return [T::zero(), T::zero()];
        }
        let nf = T::from_i128(n).unwrap_or_else(|| T::of(n as f64));
        if e1.abs() >= e2.abs() {
            [e1, nf / e1]
        } else {
            [nf / e2, e2]
        }
    }

    /// Embedding height `max_j |sigma_j(x)|`.
    pub fn height<T: Real>(&self, x: Integral) -> T {
        let [a, b] = self.embed::<T>(x);
        a.abs().max(b.abs())
    }

    /// Extended GCD in a norm-Euclidean field: `(g, s, t)` with `s x + t y = g`.
    pub fn ext_gcd(&self, x: Integral, y: Integral) -> Result<(Integral, Integral, Integral)> {
        let (mut r0, mut r1) = (x, y);
        let (mut s0, mut s1) = (Integral::ONE, Integral::ZERO);
        let (mut t0, mut t1) = (Integral::ZERO, Integral::ONE);
        while !r1.is_zero() {
            let q = self.div_round(r0, r1)?;
            let r2 = r0 - self.mul(q, r1);
            let s2 = s0 - self.mul(q, s1);
            let t2 = t0 - self.mul(q, t1);
            (r0, r1) = (r1, r2);
            (s0, s1) = (s1, s2);
            (t0, t1) = (t1, t2);
        }
        Ok((r0, s0, t0))
    }

    /// Quotient `q` with `|N(x - q y)| < |N(y)|`.
    pub(crate) fn div_round(&self, x: Integral, y: Integral) -> Result<Integral> {
        let n = self.norm_wide(y);
        debug_assert!(n != 0);
        let num = self.mul(x, self.conj(y));
        let u0 = floor_div(num.a as i128, n);
        let v0 = floor_div(num.b as i128, n);
        let target = n.abs();
        let mut best: Option<(i128, Integral)> = None;
        for du in -1..=2 {
            for dv in -1..=2 {
                let q = Integral::new(narrow(u0 + du), narrow(v0 + dv));
                let r = x - self.mul(q, y);
                let nr = self.norm_wide(r).abs();
                if best.as_ref().is_none_or(|(b, _)| nr < *b) {
                    best = Some((nr, q));
                }
            }
        }
        match best {
            Some((nr, q)) if nr < target => Ok(q),
            _ => Err(Error::NotEuclidean(self.d)),
        }
    }
}

fn floor_div(a: i128, b: i128) -> i128 {
    let (q, r) = (a / b, a % b);
    if r != 0 && ((r < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

/// Sign of `u + v sqrt d` for squarefree `d > 1`.
pub(crate) fn sign_of_surd(u: i128, v: i128, d: i128) -> i32 {
    let su = u.signum() as i32;
    let sv = v.signum() as i32;
    if su == sv || sv == 0 {
        return su;
    }
    if su == 0 {
        return sv;
    }
    // opposite signs: compare u^2 with v^2 d
    let lhs = u * u;
    let rhs = v * v * d;
    if lhs > rhs {
        su
    } else {
        sv
    }
}

pub(crate) fn narrow(x: i128) -> i64 {
    i64::try_from(x).expect("coordinate overflow in exact field arithmetic")
}
