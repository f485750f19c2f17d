//! Truncated Hilbert Poincare series.
//!
//! `P(z) = sum_M mu(M, z)^{-k} e^{2 pi i tr(nu M z)}` over bottom rows
//! `(gamma, delta)` of `Gamma_0(I)`, with `gamma` in the level ideal.
//!
//! Two foldings are offered. [`GammaInfConvention::UnitExtended`] keeps one
//! canonical `gamma` per unit orbit (smallest `tr(gamma^2)`) with all
//! coprime `delta`, and the identity alone for `gamma = 0`; the result is
//! holomorphic and `O_F`-periodic. [`GammaInfConvention::TranslationsOnly`]
//! additionally sums the unit translates `eps^m (gamma, delta)` for
//! `|m| <= unit_cap`, which is the genuinely `Gamma_0(I)`-invariant sum.
//!
//! The fast path lives in [`SeriesPlan`]; [`enumerate_cosets`] is the
//! plain reference enumeration used to validate it.

mod enumerate;
mod plan;
mod term;
mod types;

pub use enumerate::{enumerate_cosets, modularity_defect, sum_terms, sums_unit_translates};
pub use plan::{evaluate, tail_bound, SeriesPlan};
pub(crate) use plan::beta_integral;
pub use term::{act, automorphy_factor, term, term_modulus, Point, MIN_IMAG};
pub use types::{CosetRep, EvalResult, GammaInfConvention, PoincareSpec, Sl2Matrix, TruncationPolicy, Weight};
