use num_complex::Complex;

use crate::error::{Error, Result};
use crate::hpoincare::types::{CosetRep, PoincareSpec, Weight};
use crate::qfield::RealQuadraticField;
use crate::scalar::Real;

/// Smallest admissible `Im z_j`.
pub const MIN_IMAG: f64 = 1e-3;

/// Point of `H^2` given by its two coordinates.
pub type Point<T> = [Complex<T>; 2];

pub(crate) fn check_point<T: Real>(z: &Point<T>) -> Result<()> {
    for zj in z {
        let y = zj.im.to_f64_lossy();
        if !(y >= MIN_IMAG) || !zj.re.is_finite() {
            return Err(Error::DegeneratePoint(y));
        }
    }
    Ok(())
}

/// `prod_j (gamma_j z_j + delta_j)^{k_j}`; the determinant factor is 1.
pub fn automorphy_factor<T: Real>(
    field: &RealQuadraticField,
    m: &CosetRep,
    z: &Point<T>,
    weight: Weight,
) -> Complex<T> {
    let g = field.embed::<T>(m.gamma);
    let d = field.embed::<T>(m.delta);
    let k = weight.as_array();
    (0..2)
        .map(|j| (z[j] * g[j] + d[j]).powi(k[j] as i32))
        .fold(Complex::new(T::one(), T::zero()), |acc, w| acc * w)
}

/// `M z` computed componentwise in the embeddings.
pub fn act<T: Real>(field: &RealQuadraticField, m: &CosetRep, z: &Point<T>) -> Point<T> {
    let [a, b, g, d] = [m.a, m.b, m.gamma, m.delta].map(|x| field.embed::<T>(x));
    [0, 1].map(|j| (z[j] * a[j] + b[j]) / (z[j] * g[j] + d[j]))
}

/// `mu(M, z)^{-k} e^{2 pi i tr(nu M z)}`, evaluated directly from `M z`.
pub fn term<T: Real>(m: &CosetRep, z: &Point<T>, spec: &PoincareSpec) -> Complex<T> {
    let field = &spec.field;
    let mz = act(field, m, z);
    let nu = spec.nu.embed::<T>(field);
    let exponent = (mz[0] * nu[0] + mz[1] * nu[1]) * Complex::new(T::zero(), T::two_pi());
    exponent.exp() / automorphy_factor(field, m, z, spec.weight)
}

/// `|term|` from the closed form `prod_j |w_j|^{-k_j} e^{-2 pi nu_j y_j / |w_j|^2}`
/// with `w = gamma z + delta`; needs no completion.
pub fn term_modulus<T: Real>(
    field: &RealQuadraticField,
    gamma: crate::qfield::Integral,
    delta: crate::qfield::Integral,
    z: &Point<T>,
    spec: &PoincareSpec,
) -> T {
    let g = field.embed::<T>(gamma);
    let d = field.embed::<T>(delta);
    let nu = spec.nu.embed::<T>(field);
    let k = spec.weight.as_array();
    let mut log = T::zero();
    for j in 0..2 {
        let s2 = (z[j] * g[j] + d[j]).norm_sqr();
        log -= T::of_i64(k[j]) * T::of(0.5) * s2.ln() + T::two_pi() * nu[j] * z[j].im / s2;
    }
    log.exp()
}
