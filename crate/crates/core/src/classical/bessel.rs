use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest argument accepted by [`bessel_j`].
pub const MAX_ARGUMENT: f64 = 1e3;

/// Ascending series for `J_n(x)` with its truncation remainder.
///
/// Terms are summed until they stop contributing; once the term ratio
/// `(x/2)^2 / ((k+1)(k+n+1))` is below 1 the series alternates with
/// decreasing terms, so the first omitted term bounds the remainder.
pub fn bessel_j_series<T: Real>(order: u32, x: T) -> (T, T) {
    let half = x * T::of(0.5);
    let q = half * half;
    let mut term = T::one();
    for i in 1..=order {
        term = term * half / T::of_i64(i as i64);
    }
    let mut sum = T::zero();
    let mut k = 0i64;
    loop {
        sum += term;
        let next = -term * q / (T::of_i64(k + 1) * T::of_i64(k + 1 + order as i64));
        let decreasing = q < T::of_i64((k + 1) * (k + 1 + order as i64));
        if decreasing && next.abs() <= T::epsilon() * sum.abs() {
            return (sum, next.abs());
        }
        term = next;
        k += 1;
        if k > 10_000 {
            return (sum, T::infinity());
        }
    }
}

/// Miller's backward recurrence normalised by `J_0 + 2 sum J_{2k} = 1`.
fn bessel_j_miller<T: Real>(order: u32, x: T) -> T {
    let n = order as i64;
    let xi = x.to_f64_lossy().ceil() as i64;
    let start = {
        let m = n.max(xi);
        let s = m + 20 + ((40 * m) as f64).sqrt() as i64;
        s + s % 2
    };
    let two = T::of(2.0);
    let big = T::of(1e250_f64.min(T::max_value().to_f64_lossy().sqrt()));
    let (mut jp1, mut j) = (T::zero(), T::min_positive_value().sqrt());
    let mut norm = T::zero();
    let mut result = T::zero();
    for k in (1..=start).rev() {
        // j holds J_k, jp1 holds J_{k+1}
        let jm1 = two * T::of_i64(k) / x * j - jp1;
        jp1 = j;
        j = jm1;
        if k - 1 == n {
            result = j;
        }
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            norm += two * j;
        }
        if j.abs() > big {
            j /= big;
            jp1 /= big;
            result /= big;
            norm /= big;
        }
    }
    norm += j;
    result / norm
}

/// `J_n(x)` for `0 <= x <= 1000`.
///
/// The ascending series is used where it is free of cancellation
/// (`(x/2)^2 <= (n+1)/2`); the backward recurrence covers the rest.
pub fn bessel_j<T: Real>(order: u32, x: T) -> Result<T> {
    if !(x >= T::zero()) || x.to_f64_lossy() > MAX_ARGUMENT {
        return Err(Error::Domain(format!("bessel_j argument {x} outside [0, {MAX_ARGUMENT}]")));
    }
    if x == T::zero() {
        return Ok(if order == 0 { T::one() } else { T::zero() });
    }
    let half = x * T::of(0.5);
    if half * half <= T::of_i64(order as i64 + 1) * T::of(0.5) {
        return Ok(bessel_j_series(order, x).0);
    }
    Ok(bessel_j_miller(order, x))
}

/// `(x/2)^n / n!`, an upper bound for `|J_n(x)|` on `x >= 0`.
pub fn bessel_j_bound<T: Real>(order: u32, x: T) -> T {
    let half = x * T::of(0.5);
    (1..=order).fold(T::one(), |acc, i| acc * half / T::of_i64(i as i64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        // mpmath at 30 digits
        let cases = [
            (0u32, 1.0, 0.765_197_686_557_966_6),
            (1, 2.5, 0.497_094_102_464_274_04),
            (11, 1.0, 1.198_006_746_303_137_1e-11),
            (11, 20.0, 0.061_356_303_375_950_926),
            (11, 37.699_111_843_077_52, -0.097_783_067_947_507_23),
            (3, 700.0, -0.029_453_409_631_999_995),
        ];
        for (n, x, want) in cases {
            let got = bessel_j::<f64>(n, x).unwrap();
            assert!((got - want).abs() < 1e-12, "J_{n}({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn series_remainder_is_tiny_for_small_argument() {
        let (v, rem) = bessel_j_series::<f64>(11, 1.0);
        assert!(rem < 1e-15 * v.abs().max(1e-300) || rem < 1e-26);
    }

    #[test]
    fn zero_argument_and_domain() {
        assert_eq!(bessel_j::<f64>(3, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j::<f64>(0, 0.0).unwrap(), 1.0);
        assert!(bessel_j::<f64>(3, -1.0).is_err());
        assert!(bessel_j::<f64>(3, 1e4).is_err());
    }
}
