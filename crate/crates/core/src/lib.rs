//! Pseudo-spectral simulation and harmonic-analysis diagnostics for the
//! two-dimensional MHD system with fractional dissipation and diffusion,
//!
//! ```text
//! ∂ₜu + (u·∇)u − (b·∇)b + ∇π + νΛ^{2α}u = 0
//! ∂ₜb + (u·∇)b − (b·∇)u + ηΛ^{2β}b = 0,      ∇·u = ∇·b = 0,
//! ```
//!
//! on the periodic torus `[0, 2π)²`. The solver evolves the vorticity
//! `w = curl u` and current `j = curl b`; the `lp` and `diagnostics`
//! modules measure the norms and inequality ratios that the a priori
//! estimates for this system are built from.

pub mod diagnostics;
pub mod dynamics;
pub mod error;
pub mod field;
pub mod grid;
pub mod harness;
pub mod lp;
pub mod norms;
pub mod ops;
pub mod random;

pub use error::{Error, Result};
pub use field::{RealField, SpectralField};
pub use grid::TorusGrid;
