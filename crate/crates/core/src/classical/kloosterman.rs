use num_integer::Integer;

use crate::scalar::{cis_turns, Real};
use crate::summation::CompensatedSum;

/// Inverse of `x` modulo `c`, if it exists.
pub fn mod_inverse(x: i64, c: i64) -> Option<i64> {
    if c == 1 {
        return Some(0);
    }
    let e = x.rem_euclid(c).extended_gcd(&c);
    (e.gcd == 1).then(|| e.x.rem_euclid(c))
}

/// Kloosterman sum `S(m, n; c) = sum_{x mod c, (x, c) = 1} e((m x + n xbar) / c)`.
///
/// Brute force over residues with exact inverses; the phase numerator is
/// reduced mod `c` in integers before it is turned into a float. The sum is
/// real, so only cosines are accumulated.
pub fn kloosterman<T: Real>(m: i64, n: i64, c: i64) -> T {
    assert!(c >= 1, "modulus must be positive");
    let cf = T::of_i64(c);
    let mut acc = CompensatedSum::new();
    for x in 0..c {
        let Some(xbar) = mod_inverse(x, c) else {
            continue;
        };
        let r = ((m as i128 * x as i128 + n as i128 * xbar as i128).rem_euclid(c as i128)) as i64;
        acc.add(cis_turns(T::of_i64(r) / cf).re);
    }
    acc.value()
}

/// Euler's totient, by trial division.
pub fn euler_phi(mut c: i64) -> i64 {
    let mut result = c;
    let mut p = 2;
    while p * p <= c {
        if c % p == 0 {
            while c % p == 0 {
                c /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if c > 1 {
        result -= result / c;
    }
    result
}
