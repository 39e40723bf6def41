//! Integrating-factor RK4.
//!
//! Writing the system as `v' = −Lv + N(v)` with the diagonal damping
//! `L = diag(ν|ξ|^{2α}, η|ξ|^{2β})`, the substitution `v = e^{−Lt}ṽ` removes
//! the stiff term and classical RK4 is applied to `ṽ`. With
//! `E = e^{−L dt}` and `E½ = e^{−L dt/2}`:
//!
//! ```text
//! k1 = N(v)
//! k2 = N(E½(v + dt/2·k1))
//! k3 = N(E½v + dt/2·k2)
//! k4 = N(Ev + dt·E½k3)
//! v⁺ = Ev + dt/6·(E k1 + 2E½(k2 + k3) + k4)
//! ```
//!
//! Linear decay is reproduced exactly, independent of `dt`.

use std::sync::Arc;

use num_complex::Complex64;

use crate::dynamics::config::SolverConfig;
use crate::dynamics::rhs::conservative_rhs;
use crate::dynamics::state::MHDState;
use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::TorusGrid;

/// Growth of `(‖w‖² + ‖j‖²)^{1/2}` over a single step that is treated as a
/// blow-up.
pub const INSTABILITY_GROWTH: f64 = 10.0;

pub type Rate = (SpectralField, SpectralField);

struct Factors {
    dt: f64,
    half: [Vec<f64>; 2],
    full: [Vec<f64>; 2],
}

pub struct Stepper {
    grid: Arc<TorusGrid>,
    rates: [Vec<f64>; 2],
    cached: Factors,
}

impl Stepper {
    pub fn new(grid: &Arc<TorusGrid>, config: &SolverConfig) -> Self {
        let rate = |f: &dyn Fn(i64, i64) -> f64| -> Vec<f64> {
            (0..grid.len())
                .map(|i| {
                    let (k1, k2) = grid.wavevector(i);
                    f(k1, k2)
                })
                .collect()
        };
        let rates = [
            rate(&|k1, k2| config.velocity_damping(k1, k2)),
            rate(&|k1, k2| config.magnetic_damping(k1, k2)),
        ];
        let cached = Self::factors_for(&rates, config.dt);
        Stepper { grid: Arc::clone(grid), rates, cached }
    }

    fn factors_for(rates: &[Vec<f64>; 2], dt: f64) -> Factors {
        let exp = |r: &Vec<f64>, h: f64| r.iter().map(|l| (-l * h).exp()).collect::<Vec<_>>();
        Factors {
            dt,
            half: [exp(&rates[0], 0.5 * dt), exp(&rates[1], 0.5 * dt)],
            full: [exp(&rates[0], dt), exp(&rates[1], dt)],
        }
    }

    /// Damping rates `ν|ξ|^{2α}` (index 0) and `η|ξ|^{2β}` (index 1) in array order.
    pub fn damping_rates(&self) -> &[Vec<f64>; 2] {
        &self.rates
    }

    pub fn nonlinear(&self, state: &MHDState) -> Result<Rate> {
        conservative_rhs(state)
    }

    pub fn step(&self, state: &MHDState, dt: f64) -> Result<MHDState> {
        let k1 = self.nonlinear(state)?;
        self.step_from(state, &k1, dt)
    }

    /// Advances `state` by `dt` given its nonlinear rate `k1`.
    pub fn step_from(&self, state: &MHDState, k1: &Rate, dt: f64) -> Result<MHDState> {
        let fresh;
        let f = if dt == self.cached.dt {
            &self.cached
        } else {
            fresh = Self::factors_for(&self.rates, dt);
            &fresh
        };
        let v = [state.w().coefficients(), state.j().coefficients()];
        let k1 = [k1.0.coefficients(), k1.1.coefficients()];
        let h2 = 0.5 * dt;

        let stage = |t: f64, c: [Vec<Complex64>; 2]| -> Result<MHDState> {
            let [a, b] = c;
            Ok(MHDState::from_parts(t, self.field(a, t)?, self.field(b, t)?))
        };
        let combine = |g: &dyn Fn(usize, usize) -> Complex64| -> [Vec<Complex64>; 2] {
            [0, 1].map(|c| (0..self.grid.len()).map(|i| g(c, i)).collect())
        };

        let a = stage(state.t + h2, combine(&|c, i| (v[c][i] + k1[c][i] * h2) * f.half[c][i]))?;
        let k2 = self.nonlinear(&a)?;
        let k2 = [k2.0.coefficients(), k2.1.coefficients()];
        let b = stage(state.t + h2, combine(&|c, i| v[c][i] * f.half[c][i] + k2[c][i] * h2))?;
        let k3 = self.nonlinear(&b)?;
        let k3 = [k3.0.coefficients(), k3.1.coefficients()];
        let cc = stage(state.t + dt, combine(&|c, i| v[c][i] * f.full[c][i] + k3[c][i] * (dt * f.half[c][i])))?;
        let k4 = self.nonlinear(&cc)?;
        let k4 = [k4.0.coefficients(), k4.1.coefficients()];
        let out = combine(&|c, i| {
            let (e, e2) = (f.full[c][i], f.half[c][i]);
            v[c][i] * e + (k1[c][i] * e + (k2[c][i] + k3[c][i]) * (2.0 * e2) + k4[c][i]) * (dt / 6.0)
        });
        let next = stage(state.t + dt, out)?;

        let before = state.w().l2_norm().hypot(state.j().l2_norm());
        let after = next.w().l2_norm().hypot(next.j().l2_norm());
        if before > 0.0 && after > INSTABILITY_GROWTH * before {
            return Err(Error::Aborted {
                t: next.t,
                reason: format!("L2 norm of (w, j) grew from {before:e} to {after:e} in one step"),
            });
        }
        Ok(next)
    }

    fn field(&self, data: Vec<Complex64>, t: f64) -> Result<SpectralField> {
        let mut f = SpectralField::from_coefficients(&self.grid, data).map_err(|_| Error::Aborted {
            t,
            reason: "non-finite coefficient during time step".into(),
        })?;
        f.set_dealiased(true);
        Ok(f)
    }
}
