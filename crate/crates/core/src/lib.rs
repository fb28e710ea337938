//! Numerical q-series toolkit for the four-parameter q-orthogonal functions
//! `C_n^{(α,β,γ,δ)}(e^{iθ};q)` and `Φ_n^{(α,β,γ,δ)}(x,y|q)`.
//!
//! The crate is layered bottom-up:
//!
//! - [`qcore`]: q-Pochhammer symbols (finite, infinite, multi) and q-binomial coefficients
//! - [`hyper`]: basic hypergeometric `r+1φr`, very-well-poised `r+1Wr`, Rogers `6φ5` closed form
//! - [`qfun`]: the q-orthogonal functions, their weight, normalisations and connection coefficients
//! - [`quad`]: equispaced periodic quadrature and the Jackson q-integral
//! - [`verify`]: one checker per identity, producing [`verify::VerificationReport`] records,
//!   plus seeded parameter sweeps
//!
//! All arithmetic is `f64`/[`Complex64`] and every routine is pure.

pub mod error;
pub mod hyper;
pub mod qcore;
pub mod qfun;
pub mod quad;
pub mod verify;

pub use error::{QError, Result};
pub use num_complex::Complex64;
pub use qcore::{
    qbinom, qpoch_finite, qpoch_infinite, qpoch_multi, PochOrder, QBase, TruncationPolicy,
};

/// Threshold below which a denominator (a product or a single factor) is treated as vanishing.
pub const SINGULAR_THRESHOLD: f64 = 1e-12;
