use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classical::bessel::bessel_j;
use crate::classical::kloosterman::kloosterman;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::summation::CompensatedSum;

/// Parameters of the classical coefficient `p_{m,k,q}(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassicalParams {
    pub m: i64,
    pub n: i64,
    pub k: i64,
    pub q: i64,
}

impl ClassicalParams {
    /// Requires even `k >= 4` and `m, n, q >= 1`.
    pub fn new(m: i64, n: i64, k: i64, q: i64) -> Result<Self> {
        if k < 4 || k % 2 != 0 {
            return Err(Error::InvalidWeight(format!("k = {k} must be even and at least 4")));
        }
        if m < 1 || n < 1 || q < 1 {
            return Err(Error::InvalidParameters(format!("m = {m}, n = {n}, q = {q} must be positive")));
        }
        Ok(Self { m, n, k, q })
    }

    pub fn kronecker(&self) -> i64 {
        i64::from(self.m == self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeterssonResult<T> {
    pub value: T,
    pub c_max: i64,
    pub tail_bound: T,
}

/// `p_{m,k,q}(n) = delta(m,n) + 2 pi i^{-k} (n/m)^{(k-1)/2}
///   sum_{c > 0, q | c} S(m,n;c)/c J_{k-1}(4 pi sqrt(mn)/c)`, truncated at `c_max`.
///
/// The tail bound uses `|S(m,n;c)| <= c` and `|J_{k-1}(x)| <= (x/2)^{k-1}/(k-1)!`.
pub fn petersson_coefficient<T: Real>(params: &ClassicalParams, c_max: i64) -> Result<PeterssonResult<T>> {
    let ClassicalParams { m, n, k, q } = *params;
    if c_max < q {
        return Err(Error::InvalidParameters(format!("c_max = {c_max} below the level {q}")));
    }
    let order = (k - 1) as u32;
    let four_pi_root = T::of(4.0) * T::PI() * (T::of_i64(m) * T::of_i64(n)).sqrt();
    let terms = (1..=c_max / q)
        .into_par_iter()
        .map(|j| {
            let c = j * q;
            let s: T = kloosterman(m, n, c);
            if s == T::zero() {
                return Ok(T::zero());
            }
            let cf = T::of_i64(c);
            Ok(s / cf * bessel_j(order, four_pi_root / cf)?)
        })
        .collect::<Result<Vec<T>>>()?;
    let acc: CompensatedSum<T> = terms.into_iter().collect();
    let sign = if (k / 2) % 2 == 0 { T::one() } else { -T::one() };
    let prefactor = sign * T::two_pi() * (T::of_i64(n) / T::of_i64(m)).powf(T::of_i64(k - 1) * T::of(0.5));

    let j0 = T::of_i64(c_max / q);
    let km1 = T::of_i64(k - 1);
    let bessel_scale = (1..=order).fold(T::one(), |acc, i| acc * (four_pi_root * T::of(0.5)) / T::of_i64(i as i64));
    let tail = prefactor.abs() * bessel_scale * T::of_i64(q).powf(-km1) * j0.powf(T::one() - km1)
        / (km1 - T::one());
    Ok(PeterssonResult {
        value: T::of_i64(params.kronecker()) + prefactor * acc.value(),
        c_max,
        tail_bound: tail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_one_weight_twelve() {
        // mpmath at 25 digits, c <= 300
        let p = |n| petersson_coefficient::<f64>(&ClassicalParams::new(1, n, 12, 1).unwrap(), 1000).unwrap();
        let p1 = p(1);
        assert!((p1.value - 2.840_287_375_167_500_5).abs() < 1e-11, "{}", p1.value);
        assert!((p(2).value + 68.166_897_004_020_02).abs() < 1e-9);
        assert!(p1.tail_bound < 1e-20);
        assert!((p(2).value / p1.value + 24.0).abs() < 1e-8);
    }

    #[test]
    fn level_two_off_diagonal() {
        let p = petersson_coefficient::<f64>(&ClassicalParams::new(2, 3, 16, 2).unwrap(), 1000).unwrap();
        assert!((p.value + 13.553_850_386_160_501).abs() < 1e-9, "{}", p.value);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ClassicalParams::new(1, 1, 5, 1).is_err());
        assert!(ClassicalParams::new(0, 1, 12, 1).is_err());
        let p = ClassicalParams::new(1, 1, 12, 5).unwrap();
        assert!(petersson_coefficient::<f64>(&p, 4).is_err());
    }
}
