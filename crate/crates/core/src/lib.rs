//! Poincare series for Hilbert modular groups over real quadratic fields.
//!
//! [`qfield`] does exact arithmetic in the ring of integers, [`hpoincare`]
//! evaluates truncated series with tail estimates, [`fourier`] reads off
//! coefficients by lattice quadrature, [`experiments`] runs the weight and
//! level sweeps and certificates, and [`classical`] holds the elliptic
//! oracles (Petersson formula, quadrature, Ramanujan tau).

// `!(x >= lo)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod qfield;
pub mod scalar;
pub mod summation;
pub mod hpoincare;
pub mod fourier;
pub mod classical;
pub mod experiments;
pub mod config;
pub mod output;
pub mod selftest;

/// Double-precision forms of the generic numeric types.
pub type Point64 = hpoincare::Point<f64>;
pub type EvalResult64 = hpoincare::EvalResult<f64>;
pub type SeriesPlan64 = hpoincare::SeriesPlan<f64>;
pub type CoefficientEstimate64 = fourier::CoefficientEstimate<f64>;
pub type FourierSum64 = fourier::FourierSum<f64>;
pub type PeterssonResult64 = classical::PeterssonResult<f64>;
pub type QuadratureResult64 = classical::QuadratureResult<f64>;
