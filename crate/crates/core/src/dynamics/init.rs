use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dynamics::config::{InitKind, SolverConfig};
use crate::dynamics::state::MHDState;
use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::TorusGrid;
use crate::random::band_limited_field;

fn real_mode(k1: i64, k2: i64, c: f64) -> [((i64, i64), Complex64); 2] {
    // c·cos(ξ·x) = c/2 (e^{iξ·x} + e^{−iξ·x})
    let h = Complex64::new(0.5 * c, 0.0);
    [((k1, k2), h), ((-k1, -k2), h)]
}

/// Initial data at `t = 0`.
///
/// * `orszag-tang`: `u = a(−sin x₂, sin x₁)`, `b = a(−sin x₂, sin 2x₁)`, so
///   `w = a(cos x₁ + cos x₂)` and `j = a(2 cos 2x₁ + cos x₂)`.
/// * `random-band`: independent band-limited `w` and `j` with
///   `max|ξᵢ| ≤ band` and `‖w‖_{L²} = ‖j‖_{L²} = 2π·a` (RMS value `a`),
///   drawn from a ChaCha8 stream seeded by `config.seed`.
pub fn make_initial(config: &SolverConfig) -> Result<MHDState> {
    let grid = TorusGrid::new(config.n)?;
    let a = config.amplitude;
    if !(a.is_finite() && a >= 0.0) {
        return Err(Error::InvalidArgument(format!("amplitude = {a} must be >= 0")));
    }
    match config.init {
        InitKind::OrszagTang => {
            let w = SpectralField::from_modes(&grid, real_mode(1, 0, a).into_iter().chain(real_mode(0, 1, a)))?;
            let j = SpectralField::from_modes(
                &grid,
                real_mode(2, 0, 2.0 * a).into_iter().chain(real_mode(0, 1, a)),
            )?;
            MHDState::new(0.0, w, j)
        }
        InitKind::RandomBand => {
            if config.band == 0 || 3 * config.band > config.n {
                return Err(Error::BandTooHigh { band: config.band, cutoff: grid.dealias_cutoff() });
            }
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let norm = 2.0 * PI * a;
            let w = band_limited_field(&grid, config.band, norm, &mut rng)?;
            let j = band_limited_field(&grid, config.band, norm, &mut rng)?;
            MHDState::new(0.0, w, j)
        }
    }
}

/// Dilation `u_λ(x, t) = λ^{2γ−1}u(λx, λ^{2γ}t)` (and likewise for `b`) on
/// the same grid. See [`rescale_onto`].
pub fn rescale(state: &MHDState, lambda: usize, gamma: f64) -> Result<MHDState> {
    rescale_onto(state, lambda, gamma, state.grid())
}

/// Dilation onto `target`: mode `ξ` moves to `λξ`, the curls pick up the
/// factor `λ^{2γ}`, and the time label becomes `t/λ^{2γ}`, the time at which
/// the dilated solution equals the given one.
pub fn rescale_onto(
    state: &MHDState,
    lambda: usize,
    gamma: f64,
    target: &Arc<TorusGrid>,
) -> Result<MHDState> {
    if lambda == 0 {
        return Err(Error::InvalidArgument("lambda must be a positive integer".into()));
    }
    if !gamma.is_finite() {
        return Err(Error::InvalidArgument(format!("gamma = {gamma} must be finite")));
    }
    let l = lambda as i64;
    let amp = (lambda as f64).powf(2.0 * gamma);
    let cutoff = target.dealias_cutoff();
    let src = state.grid();
    let dilate = |f: &SpectralField| -> Result<SpectralField> {
        let norm = 1.0 / src.len() as f64;
        let mut modes = Vec::new();
        for (i, c) in f.coefficients().iter().enumerate() {
            if c.re == 0.0 && c.im == 0.0 {
                continue;
            }
            let (k1, k2) = src.wavevector(i);
            let top = l * k1.abs().max(k2.abs());
            if top > cutoff as i64 {
                return Err(Error::Resolution { mode: top, cutoff });
            }
            modes.push(((l * k1, l * k2), c * (norm * amp)));
        }
        SpectralField::from_modes(target, modes)
    };
    MHDState::new(state.t / amp, dilate(state.w())?, dilate(state.j())?)
}
