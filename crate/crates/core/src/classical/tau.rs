use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

/// Largest accepted `n_max`.
pub const MAX_TAU_INDEX: usize = 10_000;

fn sigma(power: u32, n_max: usize) -> Vec<BigInt> {
    let mut s = vec![BigInt::from(0); n_max + 1];
    for d in 1..=n_max {
        let dp = BigInt::from(d).pow(power);
        for m in (d..=n_max).step_by(d) {
            s[m] += &dp;
        }
    }
    s
}

fn mul_series(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len();
    let mut out = vec![BigInt::from(0); n];
    for i in 0..n {
        if a[i] == BigInt::from(0) {
            continue;
        }
        for j in 0..n - i {
            out[i + j] += &a[i] * &b[j];
        }
    }
    out
}

/// Ramanujan's `tau(1..=n_max)` from `Delta = (E_4^3 - E_6^2) / 1728`,
/// with exact integer convolution of the Eisenstein expansions.
pub fn delta_coefficients(n_max: usize) -> Result<Vec<i128>> {
    if n_max > MAX_TAU_INDEX {
        return Err(Error::Domain(format!("n_max {n_max} exceeds {MAX_TAU_INDEX}")));
    }
    if n_max == 0 {
        return Ok(Vec::new());
    }
    let s3 = sigma(3, n_max);
    let s5 = sigma(5, n_max);
    let mut e4: Vec<BigInt> = s3.iter().map(|s| s * 240).collect();
    let mut e6: Vec<BigInt> = s5.iter().map(|s| s * -504).collect();
    e4[0] = BigInt::from(1);
    e6[0] = BigInt::from(1);
    let e4_3 = mul_series(&mul_series(&e4, &e4), &e4);
    let e6_2 = mul_series(&e6, &e6);
    (1..=n_max)
        .map(|n| {
            let d: BigInt = (&e4_3[n] - &e6_2[n]) / 1728;
            d.to_i128().ok_or_else(|| Error::Domain(format!("tau({n}) overflows i128")))
        })
        .collect()
}
