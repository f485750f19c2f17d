//! Compensated summation in a fixed order.
//!
//! Series values here have a huge dynamic range (an O(1) main term next to
//! thousands of terms near the truncation cutoff), so every reduction that
//! feeds a reported number goes through Neumaier's variant of Kahan
//! summation. The result depends only on the order of the inputs.

use num_complex::Complex;

use crate::scalar::Real;

/// Neumaier compensated accumulator for a real scalar.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum<T> {
    sum: T,
    compensation: T,
}

impl<T: Real> CompensatedSum<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            compensation: T::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, value: T) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> T {
        self.sum + self.compensation
    }
}

impl<T: Real> FromIterator<T> for CompensatedSum<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut acc = Self::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Compensated accumulator for complex values (real and imaginary parts
/// carried independently).
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum<T> {
    re: CompensatedSum<T>,
    im: CompensatedSum<T>,
}

impl<T: Real> ComplexSum<T> {
    pub fn new() -> Self {
        Self {
            re: CompensatedSum::new(),
            im: CompensatedSum::new(),
        }
    }

    #[inline]
    pub fn add(&mut self, value: Complex<T>) {
        self.re.add(value.re);
        self.im.add(value.im);
    }

    #[inline]
    pub fn value(&self) -> Complex<T> {
        Complex::new(self.re.value(), self.im.value())
    }
}

impl<T: Real> FromIterator<Complex<T>> for ComplexSum<T> {
    fn from_iter<I: IntoIterator<Item = Complex<T>>>(iter: I) -> Self {
        let mut acc = Self::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Compensated sum of a slice of reals, left to right.
pub fn sum_compensated<T: Real>(values: &[T]) -> T {
    values.iter().copied().collect::<CompensatedSum<T>>().value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_small_terms() {
        let values = [1.0e16, 1.0, -1.0e16, 1.0];
        let naive: f64 = values.iter().sum();
        assert_eq!(naive, 1.0);
        assert_eq!(sum_compensated(&values), 2.0);
    }

    #[test]
    fn complex_parts_are_independent() {
        let mut acc = ComplexSum::<f64>::new();
        acc.add(Complex::new(1.0e16, 3.0));
        acc.add(Complex::new(1.0, -1.0e16));
        acc.add(Complex::new(-1.0e16, 1.0e16));
        assert_eq!(acc.value(), Complex::new(1.0, 3.0));
    }

    #[test]
    fn order_fixed_result_is_reproducible() {
        let values: Vec<f64> = (0..1000).map(|i| ((i * 7919) % 1013) as f64 * 1e-3 - 0.5).collect();
        let a = sum_compensated(&values);
        let b = sum_compensated(&values);
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
