//! Exact arithmetic in a real quadratic field `Q(sqrt d)`.
//!
//! Covers elements over the integral basis `[1, omega]`, embeddings, trace
//! and norm, total positivity, the codifferent, integral ideals in Hermite
//! normal form, unimodular pairs with their completions, and units.

mod dual;
mod element;
mod field;
mod ideal;
mod units;

pub use dual::DualIndex;
pub use element::{FieldElement, Integral};
pub use field::{make_field, OmegaKind, RealQuadraticField, EUCLIDEAN_D};
pub use ideal::{hnf2, IdealHNF};
pub use units::OrbitRep;


#[cfg(test)]
mod tests;
