use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::qfield::field::RealQuadraticField;
use crate::scalar::Real;

/// Element `a + b omega` of the ring of integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Integral {
    pub a: i64,
    pub b: i64,
}

impl Integral {
    pub const ZERO: Integral = Integral { a: 0, b: 0 };
    pub const ONE: Integral = Integral { a: 1, b: 0 };
    pub const OMEGA: Integral = Integral { a: 0, b: 1 };

    pub const fn new(a: i64, b: i64) -> Self {
        Self { a, b }
    }

    pub const fn rational(a: i64) -> Self {
        Self { a, b: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::new(self.a * k, self.b * k)
    }
}

impl Add for Integral {
    type Output = Integral;
    fn add(self, rhs: Integral) -> Integral {
        Integral::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl Sub for Integral {
    type Output = Integral;
    fn sub(self, rhs: Integral) -> Integral {
        Integral::new(self.a - rhs.a, self.b - rhs.b)
    }
}

impl Neg for Integral {
    type Output = Integral;
    fn neg(self) -> Integral {
        Integral::new(-self.a, -self.b)
    }
}

impl fmt::Display for Integral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// Element `a + b omega` of the field with rational coordinates.
///
/// All arithmetic is exact; floating point only appears in [`embed`].
///
/// [`embed`]: RealQuadraticField::embed_element
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub a: Rational64,
    pub b: Rational64,
}

impl From<Integral> for FieldElement {
    fn from(x: Integral) -> Self {
        FieldElement::new(Rational64::from(x.a), Rational64::from(x.b))
    }
}

impl FieldElement {
    pub fn new(a: Rational64, b: Rational64) -> Self {
        Self { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        Self::new(a.into(), b.into())
    }

    pub fn zero() -> Self {
        Self::new(Rational64::zero(), Rational64::zero())
    }

    pub fn one() -> Self {
        Self::new(Rational64::one(), Rational64::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.a.is_integer() && self.b.is_integer()
    }

    pub fn to_integral(&self) -> Option<Integral> {
        self.is_integral()
            .then(|| Integral::new(self.a.to_integer(), self.b.to_integer()))
    }

    pub(crate) fn scale_div(&self, k: i64) -> Self {
        let k = Rational64::from(k);
        Self::new(self.a / k, self.b / k)
    }

    pub fn scale(&self, k: Rational64) -> Self {
        Self::new(self.a * k, self.b * k)
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        FieldElement::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        FieldElement::new(self.a - rhs.a, self.b - rhs.b)
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::new(-self.a, -self.b)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

impl RealQuadraticField {
    pub fn mul_element(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        let t = Rational64::from(self.omega_trace());
        let n = Rational64::from(self.omega_norm());
        let be = x.b * y.b;
        FieldElement::new(x.a * y.a - be * n, x.a * y.b + x.b * y.a + be * t)
    }

    pub fn conj_element(&self, x: FieldElement) -> FieldElement {
        FieldElement::new(x.a + x.b * Rational64::from(self.omega_trace()), -x.b)
    }

    pub fn trace_element(&self, x: FieldElement) -> Rational64 {
        x.a * 2 + x.b * self.omega_trace()
    }

    pub fn norm_element(&self, x: FieldElement) -> Rational64 {
        x.a * x.a + x.a * x.b * self.omega_trace() + x.b * x.b * self.omega_norm()
    }

    pub fn inv_element(&self, x: FieldElement) -> Option<FieldElement> {
        let n = self.norm_element(x);
        if n.is_zero() {
            return None;
        }
        let c = self.conj_element(x);
        Some(FieldElement::new(c.a / n, c.b / n))
    }

    /// Totally positive: both embeddings positive, decided as
    /// `trace > 0 && norm > 0` without floating point.
    pub fn is_totally_positive(&self, x: FieldElement) -> bool {
        self.trace_element(x).is_positive() && self.norm_element(x).is_positive()
    }

    /// Real embeddings `(sigma_1(x), sigma_2(x))`.
    pub fn embed_element<T: Real>(&self, x: FieldElement) -> [T; 2] {
        let [w1, w2] = self.omega_embeddings::<T>();
        let a = ratio_to_real::<T>(x.a);
        let b = ratio_to_real::<T>(x.b);
        let e1 = a + b * w1;
        let e2 = a + b * w2;
        let n = ratio_to_real::<T>(self.norm_element(x));
        if n.is_zero() {
            return [e1, e2];
        }
        if e1.abs() >= e2.abs() {
            [e1, n / e1]
        } else {
            [n / e2, e2]
        }
    }
}

pub(crate) fn ratio_to_real<T: Real>(r: Rational64) -> T {
    T::of_i64(*r.numer()) / T::of_i64(*r.denom())
}
