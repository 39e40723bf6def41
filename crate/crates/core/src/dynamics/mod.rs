//! Time evolution of the vorticity–current system
//!
//! ```text
//! ∂ₜw + νΛ^{2α}w = −(u·∇)w + (b·∇)j
//! ∂ₜj + ηΛ^{2β}j = −(u·∇)j + (b·∇)w + 2[∂₁b₁(∂₁u₂ + ∂₂u₁) − ∂₁u₁(∂₁b₂ + ∂₂b₁)]
//! ```
//!
//! with `u`, `b` recovered from `w`, `j` by Biot–Savart.

pub mod checkpoint;
pub mod config;
pub mod init;
pub mod rhs;
pub mod run;
pub mod state;
pub mod stepper;

pub use checkpoint::{read_checkpoint, write_checkpoint, Checkpoint};
pub use config::{InitKind, IntegratorKind, Regime, SolverConfig};
pub use init::{make_initial, rescale, rescale_onto};
pub use rhs::{conservative_rhs, full_vorticity_rhs, primitive_rhs, vorticity_rhs};
pub use run::{Abort, Run, Sample};
pub use state::{MHDState, PrimitiveState};
pub use stepper::Stepper;
