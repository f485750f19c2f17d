//! Truncated evaluation of the series at many points sharing one `y`.
//!
//! Everything that depends only on `(spec, policy, y)` is built once: the
//! canonical `gamma` list, the inverse tables of `O_F / gamma`, and the
//! hyperbolic region of admissible `delta`, covered by dyadic strips in
//! `|gamma_1 z_1 + delta_1|`. Each strip is a thin rectangle in the
//! embedding plane; multiplying by a power of the fundamental unit makes it
//! roughly square before lattice points are listed, and the points are
//! mapped back exactly.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::hpoincare::term::{check_point, Point};
use crate::hpoincare::types::{EvalResult, GammaInfConvention, PoincareSpec, TruncationPolicy};
use crate::qfield::{DualIndex, IdealHNF, Integral, RealQuadraticField};
use crate::scalar::{cis_turns, Real};
use crate::summation::{CompensatedSum, ComplexSum};

const MAX_STRIPS: usize = 400;
const MAX_REBALANCE: i32 = 40;
/// Lattice points visited when listing the height box.
const MAX_GAMMA_BOX: f64 = 5e7;
/// Heights up to this multiple of the box are bounded `gamma` by `gamma`.
const FAR_FACTOR: f64 = 8.0;
const MAX_FAR_SHELLS: usize = 2000;

/// `int_R (1 + u^2)^{-k/2} du`.
pub(crate) fn beta_integral(k: i64) -> f64 {
    let (mut b, mut n) = if k % 2 == 0 { (std::f64::consts::PI, 2) } else { (2.0, 3) };
    while n < k {
        b *= (n - 1) as f64 / n as f64;
        n += 2;
    }
    b
}

/// Largest `|unit factor|` over the summed unit layers.
fn unit_factor_max(field: &RealQuadraticField, spec: &PoincareSpec) -> Result<f64> {
    let eps = field.embed::<f64>(field.fundamental_unit()?);
    let k = spec.weight.as_array();
    let mut best: f64 = 1.0;
    for m in spec.convention.unit_range() {
        let log = -(m as f64) * (k[0] as f64 * eps[0].abs().ln() + k[1] as f64 * eps[1].abs().ln());
        best = best.max(log.exp());
    }
    Ok(best)
}

/// Height bound containing every canonical `gamma` that can carry a term of
/// modulus at least `cutoff` at imaginary part `y`.
pub(crate) fn required_height(spec: &PoincareSpec, y: [f64; 2], cutoff: f64) -> Result<f64> {
    let field = &spec.field;
    let eps1 = field.embed::<f64>(field.fundamental_unit()?)[0].abs();
    let k = spec.weight.as_array();
    let c = cutoff / unit_factor_max(field, spec)?;
    let ksum = (k[0] + k[1]) as f64;
    let prod = c * y[0].powf(k[0] as f64) * y[1].powf(k[1] as f64);
    let mut nmax = prod.powf(-2.0 / ksum);
    if !spec.weight.is_parallel() {
        nmax *= eps1;
    }
    Ok((nmax * eps1).sqrt() * (1.0 + 1e-9) + 1e-9)
}

/// Calls `f(u, v)` for every `u + v omega` whose embeddings lie in
/// `[lo_1, hi_1] x [lo_2, hi_2]`, in ascending `(v, u)` order.
pub(crate) fn lattice_box<T: Real>(
    omega: [T; 2],
    sqrt_disc: T,
    lo: [T; 2],
    hi: [T; 2],
    mut f: impl FnMut(i64, i64),
) {
    if !(lo[0] <= hi[0] && lo[1] <= hi[1]) {
        return;
    }
    // sigma_1 - sigma_2 of u + v omega is v sqrt D
    let v_lo = ((lo[0] - hi[1]) / sqrt_disc).ceil().to_i64().unwrap_or(i64::MAX);
    let v_hi = ((hi[0] - lo[1]) / sqrt_disc).floor().to_i64().unwrap_or(i64::MIN);
    for v in v_lo..=v_hi {
        let vf = T::of_i64(v);
        let u_lo = (lo[0] - vf * omega[0]).max(lo[1] - vf * omega[1]).ceil();
        let u_hi = (hi[0] - vf * omega[0]).min(hi[1] - vf * omega[1]).floor();
        let (Some(u_lo), Some(u_hi)) = (u_lo.to_i64(), u_hi.to_i64()) else {
            continue;
        };
        for u in u_lo..=u_hi {
            f(u, v);
        }
    }
}

/// Dual index `nu eps^{-2m}` and the matching unit factor `prod_j eps_j^{-m k_j}`.
#[derive(Debug, Clone)]
struct NuLayer<T> {
    m: i32,
    numerator: Integral,
    emb: [T; 2],
    unit_factor: T,
}

#[derive(Debug, Clone, Copy)]
struct Strip<T> {
    index: usize,
    lo: T,
    hi: T,
    t2max: T,
    rebalance: i32,
}

#[derive(Debug, Clone)]
struct GammaPlan<T> {
    gamma: Integral,
    norm: i64,
    emb: [T; 2],
    ideal: IdealHNF,
    /// `delta^{-1} mod gamma` by residue index, `None` when not coprime.
    inverses: Vec<Option<Integral>>,
    /// `numerator(nu_m) * conj(gamma)` per layer.
    phase_coef: Vec<Integral>,
    strips: Vec<Strip<T>>,
}

/// Per-point running totals.
#[derive(Debug, Clone, Copy)]
struct Accum<T: Real> {
    value: ComplexSum<T>,
    dropped: CompensatedSum<T>,
    shell: CompensatedSum<T>,
    cap_layer: CompensatedSum<T>,
    largest_dropped: T,
    terms: usize,
}

impl<T: Real> Accum<T> {
    fn new() -> Self {
        Self {
            value: ComplexSum::new(),
            dropped: CompensatedSum::new(),
            shell: CompensatedSum::new(),
            cap_layer: CompensatedSum::new(),
            largest_dropped: T::zero(),
            terms: 0,
        }
    }
}

/// Reusable evaluation plan for a fixed `(spec, policy, y)`.
#[derive(Debug, Clone)]
pub struct SeriesPlan<T: Real> {
    spec: PoincareSpec,
    policy: TruncationPolicy,
    y: [T; 2],
    k: [T; 2],
    cutoff: T,
    shell_ceiling: T,
    rho: T,
    omega: [T; 2],
    sqrt_disc: T,
    omega_trace: i64,
    omega_norm: i64,
    layers: Vec<NuLayer<T>>,
    cap: Option<i32>,
    /// `(eps^{-J}, embeddings of eps^J)` for `J` in `-jmax..=jmax`.
    rebalance: Vec<(Integral, [T; 2])>,
    jmax: i32,
    log_eps: T,
    gammas: Vec<GammaPlan<T>>,
    pruned_mass: T,
    gamma_tail: T,
}

impl<T: Real> SeriesPlan<T> {
    pub fn new(spec: &PoincareSpec, policy: &TruncationPolicy, y: [T; 2]) -> Result<Self> {
        policy.validate()?;
        check_point(&[Complex::new(T::zero(), y[0]), Complex::new(T::zero(), y[1])])?;
        let field = &spec.field;
        let eps = field.fundamental_unit()?;
        let eps_emb = field.embed::<T>(eps);
        let kk = spec.weight.as_array();
        let k = kk.map(T::of_i64);
        let cutoff = T::of(policy.term_cutoff);
        let k_avg = spec.weight.mean();
        let rho = (1.5 * 2f64.powf(1.0 - k_avg)).min(0.9);

        let mut layers = Vec::new();
        for m in spec.convention.unit_range() {
            let u = field.unit_power(-2 * m)?;
            let numerator = field.mul(spec.nu.numerator, u);
            let nu_m = DualIndex::new(field, numerator);
            let unit_factor = (0..2)
                .map(|j| eps_emb[j].powi(-m * kk[j] as i32))
                .fold(T::one(), |a, b| a * b);
            layers.push(NuLayer {
                m,
                numerator,
                emb: nu_m.embed::<T>(field),
                unit_factor,
            });
        }
        let cap = match spec.convention {
            GammaInfConvention::UnitExtended => None,
            GammaInfConvention::TranslationsOnly { unit_cap } => Some(unit_cap as i32),
        };

        // keep eps^J comfortably inside i64 coordinates
        let eps1 = field.embed::<f64>(eps)[0].abs();
        let jmax = ((36.0 * std::f64::consts::LN_2 / eps1.ln()).floor() as i32).min(MAX_REBALANCE);
        let mut rebalance = Vec::new();
        for j in -jmax..=jmax {
            let inv = field.unit_power(-j)?;
            let fwd = field.unit_power(j)?;
            rebalance.push((inv, field.embed::<T>(fwd)));
        }

        let mut plan = Self {
            spec: spec.clone(),
            policy: *policy,
            y,
            k,
            cutoff,
            shell_ceiling: cutoff * T::of(2f64.powf(k_avg)),
            rho: T::of(rho),
            omega: field.omega_embeddings::<T>(),
            sqrt_disc: T::of_i64(field.disc()).sqrt(),
            omega_trace: field.omega_trace(),
            omega_norm: field.omega_norm(),
            layers,
            cap,
            rebalance,
            jmax,
            log_eps: T::of(eps1.ln()),
            gammas: Vec::new(),
            pruned_mass: T::zero(),
            gamma_tail: T::zero(),
        };
        plan.build_gammas()?;
        Ok(plan)
    }

    pub fn spec(&self) -> &PoincareSpec {
        &self.spec
    }

    pub fn policy(&self) -> &TruncationPolicy {
        &self.policy
    }

    pub fn y(&self) -> [T; 2] {
        self.y
    }

    /// Number of nonzero canonical `gamma` kept after pruning.
    pub fn gamma_count(&self) -> usize {
        self.gammas.len()
    }

    /// `gamma` values kept after pruning, in summation order.
    pub fn gammas(&self) -> Vec<Integral> {
        self.gammas.iter().map(|g| g.gamma).collect()
    }

    /// Tail mass attributed to `gamma` outside the plan (pruned or beyond the height box).
    pub fn gamma_side_tail(&self) -> T {
        self.pruned_mass + self.gamma_tail
    }

    /// Ratio applied to `cutoff` when bounding the region: `1` unless unit
    /// layers carry factors above 1.
    fn effective_cutoff(&self) -> T {
        let fmax = self
            .layers
            .iter()
            .map(|l| l.unit_factor.abs())
            .fold(T::zero(), |a, b| a.max(b));
        self.cutoff / fmax
    }

    /// `2 pi nu_j y_j` for the per-component bound; zero when several layers
    /// share one region.
    fn exp_coefficients(&self) -> [T; 2] {
        if self.layers.len() == 1 {
            let nu = self.layers[0].emb;
            [0, 1].map(|j| T::two_pi() * nu[j] * self.y[j])
        } else {
            [T::zero(), T::zero()]
        }
    }

    /// Upper bound for `sum_delta |term|` over all layers for one `gamma`.
    ///
    /// Each lattice point is charged to its cell `delta + P` (`P` the centered
    /// parallelogram on `1, omega`), on which the term is at most the
    /// product of the one-dimensional maxima over intervals of half-width
    /// `e_j`; integrating gives `prod_j (a_j^{1-k_j} B_{k_j} + 2 e_j a_j^{-k_j}) / sqrt D`.
    /// The factor 2 absorbs the extrapolated and cap-layer parts of the tail
    /// that a kept `gamma` contributes instead.
    fn majorant(&self, emb: [T; 2]) -> T {
        self.majorant_at([emb[0].abs() * self.y[0], emb[1].abs() * self.y[1]])
    }

    fn majorant_at(&self, a: [T; 2]) -> T {
        let kk = self.spec.weight.as_array();
        let mut m = T::of(2.0) / self.sqrt_disc;
        for j in 0..2 {
            let e = (T::one() + self.omega[j].abs()) * T::of(0.5);
            m *= a[j].powf(T::one() - self.k[j]) * T::of(beta_integral(kk[j])) + (e + e) * a[j].powf(-self.k[j]);
        }
        let fmax = self.cutoff / self.effective_cutoff();
        m * fmax * T::of_i64(self.layers.len() as i64)
    }

    /// Bound for the majorants of all canonical `gamma` with height above `x`.
    ///
    /// A canonical `gamma` has `|gamma_j| >= height / eps_1` (neighbouring
    /// unit translates have larger trace of the square), and the level
    /// lattice has at most `(2R + 2E_1)(2R + 2E_2) / (sqrt D N(I))` points
    /// in `[-R, R]^2`, `E_j` the half extents of its basis cell.
    fn far_gamma_bound(&self, x: T) -> T {
        let field = &self.spec.field;
        let [b0, b1] = self.spec.level.basis();
        let (e0, e1) = (field.embed::<T>(b0), field.embed::<T>(b1));
        let ext = [0, 1].map(|j| (e0[j].abs() + e1[j].abs()) * T::of(0.5));
        let covol = self.sqrt_disc * T::of_i64(self.spec.level.norm);
        let eps1 = self.log_eps.exp();
        let mut total = CompensatedSum::new();
        let mut lo = x;
        for _ in 0..MAX_FAR_SHELLS {
            let r = lo + lo;
            let count = (r + r + ext[0] + ext[0]) * (r + r + ext[1] + ext[1]) / covol;
            let s = count * self.majorant_at([0, 1].map(|j| lo / eps1 * self.y[j]));
            total.add(s);
            if s <= total.value() * T::epsilon() {
                break;
            }
            lo = r;
        }
        total.value()
    }

    fn build_gammas(&mut self) -> Result<()> {
        let field = self.spec.field;
        let h = T::of(self.policy.gamma_height_max);
        let level = self.spec.level;
        let mut inside = Vec::new();
        let mut outside = Vec::new();
        let far = h * T::of(FAR_FACTOR);
        let visits = 4.0 * (FAR_FACTOR * self.policy.gamma_height_max).powi(2) / (field.disc() as f64).sqrt();
        if visits > MAX_GAMMA_BOX {
            return Err(Error::InvalidPolicy(format!(
                "gamma_height_max {} needs about {visits:.1e} lattice points",
                self.policy.gamma_height_max
            )));
        }
        lattice_box(self.omega, self.sqrt_disc, [-far; 2], [far; 2], |u, v| {
            let g = Integral::new(u, v);
            if g.is_zero() || !level.contains(g) {
                return;
            }
            let emb = field.embed::<T>(g);
            let height = emb[0].abs().max(emb[1].abs());
            if height <= h {
                inside.push((g, emb));
            } else if height <= far {
                outside.push((g, emb));
            }
        });
        let mut tail = CompensatedSum::new();
        for (g, emb) in outside {
            if field.is_canonical_orbit_rep(g)? {
                tail.add(self.majorant(emb));
            }
        }
        self.gamma_tail = tail.value() + self.far_gamma_bound(far);

        let mut pruned = CompensatedSum::new();
        let mut kept = Vec::new();
        for (g, emb) in inside {
            if !field.is_canonical_orbit_rep(g)? {
                continue;
            }
            match self.gamma_plan(&field, g, emb)? {
                Some(gp) => kept.push(gp),
                None => pruned.add(self.majorant(emb)),
            }
        }
        kept.sort_by_key(|gp| gp.gamma);
        self.gammas = kept;
        self.pruned_mass = pruned.value();
        Ok(())
    }

    fn gamma_plan(&self, field: &RealQuadraticField, gamma: Integral, emb: [T; 2]) -> Result<Option<GammaPlan<T>>> {
        let c_eff = self.effective_cutoff();
        let cexp = self.exp_coefficients();
        let a = [0, 1].map(|j| emb[j].abs() * self.y[j]);
        let k = self.k;
        let f = |j: usize, s: T| s.powf(-k[j]) * (-cexp[j] / (s * s)).exp();
        let s_star = [0, 1].map(|j| (T::of(2.0) * cexp[j] / k[j]).sqrt());
        let sup = [0, 1].map(|j| f(j, a[j].max(s_star[j])));
        if sup[0] * sup[1] < c_eff {
            return Ok(None);
        }
        let log_eps = self.log_eps;
        let mut strips = Vec::new();
        let mut bound_lo = T::zero();
        let mut s_lo = a[0];
        for i in 0..MAX_STRIPS {
            let s_hi = s_lo + s_lo;
            let bound_hi = a[0] * (T::of(4f64.powi(i as i32 + 1)) - T::one()).sqrt();
            let f1 = f(0, s_star[0].max(s_lo).min(s_hi));
            if f1 * sup[1] >= c_eff {
                let s2 = (f1 / c_eff).powf(T::one() / k[1]);
                if s2 > a[1] {
                    let t2max = (s2 * s2 - a[1] * a[1]).sqrt();
                    let w1 = if i == 0 { bound_hi + bound_hi } else { bound_hi - bound_lo };
                    let j = ((t2max + t2max) / w1).ln() / (T::of(2.0) * log_eps);
                    let j = j.round().to_i32().unwrap_or(0).clamp(-self.jmax, self.jmax);
                    strips.push(Strip {
                        index: i,
                        lo: bound_lo,
                        hi: bound_hi,
                        t2max,
                        rebalance: j,
                    });
                }
            } else if s_lo > s_star[0] {
                break;
            }
            bound_lo = bound_hi;
            s_lo = s_hi;
        }
        if strips.is_empty() {
            return Ok(None);
        }
        let ideal = field.ideal_from_gen(gamma)?;
        let mut inverses = Vec::with_capacity(ideal.norm as usize);
        for idx in 0..ideal.norm as usize {
            inverses.push(field.inverse_mod(ideal.residue(idx), gamma)?);
        }
        let gbar = field.conj(gamma);
        let phase_coef = self.layers.iter().map(|l| field.mul(l.numerator, gbar)).collect();
        Ok(Some(GammaPlan {
            gamma,
            norm: field.norm(gamma),
            emb,
            ideal,
            inverses,
            phase_coef,
            strips,
        }))
    }

    /// `tr(nu_m a / gamma) mod 1` as an exact fraction mapped to `T`.
    #[inline]
    fn exact_phase(&self, coef: Integral, a: Integral, norm: i64) -> T {
        let (x1, x2) = (coef.a as i128, coef.b as i128);
        let (y1, y2) = (a.a as i128, a.b as i128);
        let q = x1 * y2 + x2 * y1 + self.omega_trace as i128 * x2 * y2;
        let den = norm.unsigned_abs() as i128;
        let num = (q * norm.signum() as i128).rem_euclid(den);
        T::of_i64(num as i64) / T::of_i64(den as i64)
    }

    #[inline]
    fn record(&self, acc: &mut Accum<T>, value: Complex<T>, modulus: T, layer: &NuLayer<T>) -> Result<()> {
        if modulus < self.cutoff {
            acc.dropped.add(modulus);
            acc.largest_dropped = acc.largest_dropped.max(modulus);
            return Ok(());
        }
        acc.value.add(value);
        acc.terms += 1;
        if modulus < self.shell_ceiling {
            acc.shell.add(modulus);
        }
        if self.cap == Some(layer.m.abs()) {
            acc.cap_layer.add(modulus);
        }
        if acc.terms > self.policy.max_terms {
            return Err(Error::TruncationFailure {
                max_terms: self.policy.max_terms,
                partial: acc.terms,
            });
        }
        Ok(())
    }

    /// Evaluates the truncated series at `x + i y`.
    pub fn evaluate_at(&self, x: [T; 2]) -> Result<EvalResult<T>> {
        let mut acc = Accum::new();
        let two_pi = T::two_pi();
        let mut anchor = T::zero();

        for layer in &self.layers {
            let tr_x = layer.emb[0] * x[0] + layer.emb[1] * x[1];
            let tr_y = layer.emb[0] * self.y[0] + layer.emb[1] * self.y[1];
            let modulus = layer.unit_factor.abs() * (-two_pi * tr_y).exp();
            let value = cis_turns(tr_x) * (layer.unit_factor * (-two_pi * tr_y).exp());
            anchor = anchor.max(modulus);
            self.record(&mut acc, value, modulus, layer)?;
        }

        for gp in &self.gammas {
            self.sum_gamma(gp, x, &mut acc)?;
        }

        let tail = acc.dropped.value()
            + acc.shell.value() * self.rho / (T::one() - self.rho)
            + self.pruned_mass
            + self.gamma_tail
            + acc.cap_layer.value();
        // below the resolution of the identity class the tail cannot move the sum
        let tail = if tail < anchor * T::epsilon() { T::zero() } else { tail };
        Ok(EvalResult {
            value: acc.value.value(),
            tail_estimate: tail,
            terms_used: acc.terms,
            largest_dropped: acc.largest_dropped,
        })
    }

    fn sum_gamma(&self, gp: &GammaPlan<T>, x: [T; 2], acc: &mut Accum<T>) -> Result<()> {
        let g = gp.emb;
        let shift = [g[0] * x[0], g[1] * x[1]];
        let gy = [g[0] * self.y[0], g[1] * self.y[1]];
        let a2 = [gy[0] * gy[0], gy[1] * gy[1]];
        let margin = T::of(self.policy.delta_box_margin);
        let half = T::of(0.5);
        let two_pi = T::two_pi();
        let mut status = Ok(());

        for strip in &gp.strips {
            let (inv_unit, fwd) = self.rebalance[(strip.rebalance + self.jmax) as usize];
            let sides: &[(T, T, i8)] = if strip.index == 0 {
                &[(-strip.hi, strip.hi, 0)]
            } else {
                &[(strip.lo, strip.hi, 1), (-strip.hi, -strip.lo, -1)]
            };
            for &(t1_lo, t1_hi, side) in sides {
                // box in delta, then in eps^J delta
                let d_lo = [t1_lo - shift[0], -strip.t2max - shift[1]];
                let d_hi = [t1_hi - shift[0], strip.t2max - shift[1]];
                let mut lo = [T::zero(); 2];
                let mut hi = [T::zero(); 2];
                for j in 0..2 {
                    let p = d_lo[j] * fwd[j];
                    let q = d_hi[j] * fwd[j];
                    let pad = margin * (T::one() + p.abs().max(q.abs()));
                    lo[j] = p.min(q) - pad;
                    hi[j] = p.max(q) + pad;
                }
                lattice_box(self.omega, self.sqrt_disc, lo, hi, |u, v| {
                    if status.is_err() {
                        return;
                    }
                    let delta = mul_integral(Integral::new(u, v), inv_unit, self.omega_trace, self.omega_norm);
                    let da = T::of_i64(delta.a);
                    let db = T::of_i64(delta.b);
                    let t1 = da + db * self.omega[0] + shift[0];
                    let at1 = t1.abs();
                    let in_strip = match side {
                        0 => at1 < strip.hi,
                        1 => t1 >= T::zero() && at1 >= strip.lo && at1 < strip.hi,
                        _ => t1 < T::zero() && at1 >= strip.lo && at1 < strip.hi,
                    };
                    if !in_strip {
                        return;
                    }
                    let t2 = da + db * self.omega[1] + shift[1];
                    if t2.abs() > strip.t2max + margin * (T::one() + t2.abs()) {
                        return;
                    }
                    let Some(inv) = gp.inverses[gp.ideal.residue_index(delta)] else {
                        return;
                    };
                    let s2 = [t1 * t1 + a2[0], t2 * t2 + a2[1]];
                    let log_pow = -half * (self.k[0] * s2[0].ln() + self.k[1] * s2[1].ln());
                    let arg = -(self.k[0] * gy[0].atan2(t1) + self.k[1] * gy[1].atan2(t2));
                    let yy = [self.y[0] / s2[0], self.y[1] / s2[1]];
                    let tt = [t1 / (g[0] * s2[0]), t2 / (g[1] * s2[1])];
                    for (li, layer) in self.layers.iter().enumerate() {
                        let nu = layer.emb;
                        let decay = -two_pi * (nu[0] * yy[0] + nu[1] * yy[1]);
                        let modulus = layer.unit_factor.abs() * (log_pow + decay).exp();
                        if modulus < self.cutoff {
                            acc.dropped.add(modulus);
                            acc.largest_dropped = acc.largest_dropped.max(modulus);
                            continue;
                        }
                        let turns = self.exact_phase(gp.phase_coef[li], inv, gp.norm) - (nu[0] * tt[0] + nu[1] * tt[1]);
                        let angle = two_pi * turns + arg;
                        let (s, c) = angle.sin_cos();
                        let signed = if layer.unit_factor < T::zero() { -modulus } else { modulus };
                        let value = Complex::new(c * signed, s * signed);
                        if let Err(e) = self.record(acc, value, modulus, layer) {
                            status = Err(e);
                            return;
                        }
                    }
                });
                std::mem::replace(&mut status, Ok(()))?;
            }
        }
        Ok(())
    }
}

#[inline]
fn mul_integral(x: Integral, y: Integral, t: i64, n: i64) -> Integral {
    // omega^2 = t omega - n
    let (x1, x2, y1, y2) = (x.a as i128, x.b as i128, y.a as i128, y.b as i128);
    let bb = x2 * y2;
    let a = x1 * y1 - n as i128 * bb;
    let b = x1 * y2 + x2 * y1 + t as i128 * bb;
    debug_assert!(a.abs() < i64::MAX as i128 && b.abs() < i64::MAX as i128);
    Integral::new(a as i64, b as i64)
}

/// Truncated value of the series at `z`.
pub fn evaluate<T: Real>(spec: &PoincareSpec, z: &Point<T>, policy: &TruncationPolicy) -> Result<EvalResult<T>> {
    check_point(z)?;
    let plan = SeriesPlan::new(spec, policy, [z[0].im, z[1].im])?;
    plan.evaluate_at([z[0].re, z[1].re])
}

/// Heuristic estimate of the mass dropped by truncation at `z`.
///
/// Sum of the exact moduli of examined-but-dropped terms, the kept terms
/// within a factor `2^k` of the cutoff extrapolated geometrically, analytic
/// majorants for `gamma` pruned or beyond the height box, and the outermost
/// unit layer under translations-only folding. Never increases when
/// `gamma_height_max` grows, and is 0 once it falls below the rounding
/// resolution of the identity class. An estimate, not a rigorous bound;
/// reported next to the value and never added to it.
pub fn tail_bound<T: Real>(spec: &PoincareSpec, z: &Point<T>, policy: &TruncationPolicy) -> Result<T> {
    Ok(evaluate(spec, z, policy)?.tail_estimate)
}
