use num_complex::Complex;

use crate::error::{Error, Result};
use crate::hpoincare::plan::{evaluate, lattice_box, required_height};
use crate::hpoincare::term::{act, automorphy_factor, check_point, term, term_modulus, Point};
use crate::hpoincare::types::{CosetRep, GammaInfConvention, PoincareSpec, Sl2Matrix, TruncationPolicy};
use crate::qfield::Integral;
use crate::scalar::Real;
use crate::summation::ComplexSum;

/// Coset representatives of the truncated sum, sorted by `(gamma, delta)`.
///
/// Reference path: every candidate `delta` comes from the plain box
/// `|gamma_j x_j + delta_j| <= T_j` that bounds the hyperbolic region, the
/// exact closed-form modulus decides membership, and every representative
/// is completed with the extended GCD. Meant for validation on small
/// cutoffs; [`evaluate`] is the fast path.
pub fn enumerate_cosets<T: Real>(spec: &PoincareSpec, z: &Point<T>, policy: &TruncationPolicy) -> Result<Vec<CosetRep>> {
    policy.validate()?;
    check_point(z)?;
    let field = &spec.field;
    let cutoff = T::of(policy.term_cutoff);
    let mut out = Vec::new();
    let push = |out: &mut Vec<CosetRep>, rep: CosetRep| -> Result<()> {
        out.push(rep);
        if out.len() > policy.max_terms {
            return Err(Error::TruncationFailure {
                max_terms: policy.max_terms,
                partial: out.len(),
            });
        }
        Ok(())
    };

    for m in spec.convention.unit_range() {
        let u = field.unit_power(m)?;
        let rep = CosetRep {
            gamma: Integral::ZERO,
            delta: u,
            a: field.unit_power(-m)?,
            b: Integral::ZERO,
        };
        if term_modulus(field, rep.gamma, rep.delta, z, spec) >= cutoff {
            push(&mut out, rep)?;
        }
    }

    let omega = field.omega_embeddings::<T>();
    let sqrt_disc = T::of_i64(field.disc()).sqrt();
    let h = T::of(policy.gamma_height_max);
    let mut canonical = Vec::new();
    lattice_box(omega, sqrt_disc, [-h; 2], [h; 2], |u, v| {
        let g = Integral::new(u, v);
        if !g.is_zero() && spec.level.contains(g) && field.height::<T>(g) <= h {
            canonical.push(g);
        }
    });
    let k = spec.weight.as_array().map(T::of_i64);
    let y = [z[0].im, z[1].im];
    let x = [z[0].re, z[1].re];
    for g0 in canonical {
        if !field.is_canonical_orbit_rep(g0)? {
            continue;
        }
        for m in spec.convention.unit_range() {
            let g = field.mul(g0, field.unit_power(m)?);
            let ge = field.embed::<T>(g);
            let a = [0, 1].map(|j| ge[j].abs() * y[j]);
            // s_j <= (cutoff a_other^{k_other})^{-1/k_j}
            let smax = [0, 1].map(|j| (cutoff * a[1 - j].powf(k[1 - j])).powf(-T::one() / k[j]));
            if smax[0] < a[0] || smax[1] < a[1] {
                continue;
            }
            let t = [0, 1].map(|j| (smax[j] * smax[j] - a[j] * a[j]).sqrt());
            let lo = [0, 1].map(|j| -t[j] - ge[j] * x[j] - T::of(policy.delta_box_margin));
            let hi = [0, 1].map(|j| t[j] - ge[j] * x[j] + T::of(policy.delta_box_margin));
            let mut deltas = Vec::new();
            lattice_box(omega, sqrt_disc, lo, hi, |u, v| deltas.push(Integral::new(u, v)));
            for d in deltas {
                if !field.is_unimodular_pair(g, d)? {
                    continue;
                }
                if term_modulus(field, g, d, z, spec) < cutoff {
                    continue;
                }
                push(&mut out, CosetRep::from_bottom_row(field, g, d)?)?;
            }
        }
    }
    out.sort_by_key(|r| r.key());
    Ok(out)
}

/// Compensated sum of [`term`] over the given representatives, in order.
pub fn sum_terms<T: Real>(spec: &PoincareSpec, z: &Point<T>, reps: &[CosetRep]) -> Complex<T> {
    reps.iter().map(|r| term(r, z, spec)).collect::<ComplexSum<T>>().value()
}

/// `|P(Mz) - mu(M, z)^k P(z)| / max(1, |P(z)|)`.
///
/// The height box is raised to cover each point, and the cutoff at `Mz` is
/// scaled by `|mu(M, z)^k|` so both truncations keep the same terms up to
/// the bijection `N -> N M` of cosets.
pub fn modularity_defect<T: Real>(spec: &PoincareSpec, z: &Point<T>, m: &Sl2Matrix, policy: &TruncationPolicy) -> Result<T> {
    if !m.in_level(&spec.level) {
        return Err(Error::NotInLevel(format!("lower-left entry {} outside the level", m.c)));
    }
    check_point(z)?;
    let field = &spec.field;
    let coset = m.as_coset();
    let mz = act(field, &coset, z);
    check_point(&mz)?;
    let j = automorphy_factor(field, &coset, z, spec.weight);
    let adapt = |p: &TruncationPolicy, w: &Point<T>| -> Result<TruncationPolicy> {
        let y = [w[0].im.to_f64_lossy(), w[1].im.to_f64_lossy()];
        let h = required_height(spec, y, p.term_cutoff)?;
        Ok(p.with_height(p.gamma_height_max.max(h)))
    };
    let p_z = evaluate(spec, z, &adapt(policy, z)?)?.value;
    let scaled = policy.with_cutoff(policy.term_cutoff * j.norm().to_f64_lossy());
    let p_mz = evaluate(spec, &mz, &adapt(&scaled, &mz)?)?.value;
    Ok((p_mz - j * p_z).norm() / p_z.norm().max(T::one()))
}

/// Whether the convention folds unit translates explicitly.
pub fn sums_unit_translates(spec: &PoincareSpec) -> bool {
    matches!(spec.convention, GammaInfConvention::TranslationsOnly { .. })
}
