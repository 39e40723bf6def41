use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::TorusGrid;
use crate::ops::{biot_savart, curl, dealias_in_place, divergence, is_mean_free};

/// Vorticity `w = curl u` and current `j = curl b` at time `t`. Both are
/// mean-free and dealiased.
#[derive(Clone, Debug)]
pub struct MHDState {
    pub t: f64,
    w: SpectralField,
    j: SpectralField,
}

fn normalize(mut f: SpectralField, name: &str) -> Result<SpectralField> {
    if !is_mean_free(&f) {
        return Err(Error::InvalidArgument(format!("{name} must have zero mean")));
    }
    f.coefficients_mut()[0] = Complex64::new(0.0, 0.0);
    dealias_in_place(&mut f);
    Ok(f)
}

impl MHDState {
    /// Validates and normalizes: the mean coefficient is zeroed and the
    /// 2/3 rule applied.
    pub fn new(t: f64, w: SpectralField, j: SpectralField) -> Result<Self> {
        if w.grid().n() != j.grid().n() {
            return Err(Error::GridMismatch { left: w.grid().n(), right: j.grid().n() });
        }
        if !t.is_finite() {
            return Err(Error::NonFinite("state time".into()));
        }
        Ok(MHDState { t, w: normalize(w, "vorticity")?, j: normalize(j, "current")? })
    }

    /// For fields the caller has already dealiased and made mean-free.
    pub(crate) fn from_parts(t: f64, w: SpectralField, j: SpectralField) -> Self {
        debug_assert!(w.has_zero_mean() && j.has_zero_mean());
        MHDState { t, w, j }
    }

    pub fn zeros(grid: &Arc<TorusGrid>) -> Self {
        MHDState { t: 0.0, w: SpectralField::zeros(grid), j: SpectralField::zeros(grid) }
    }

    pub fn grid(&self) -> &Arc<TorusGrid> {
        self.w.grid()
    }

    pub fn w(&self) -> &SpectralField {
        &self.w
    }

    pub fn j(&self) -> &SpectralField {
        &self.j
    }

    pub fn velocity(&self) -> [SpectralField; 2] {
        biot_savart(&self.w).expect("state vorticity is mean-free")
    }

    pub fn magnetic(&self) -> [SpectralField; 2] {
        biot_savart(&self.j).expect("state current is mean-free")
    }

    /// `‖u‖²_{L²} + ‖b‖²_{L²}`.
    pub fn total_energy(&self) -> f64 {
        let inv = |k1: i64, k2: i64| {
            let q = (k1 * k1 + k2 * k2) as f64;
            if q == 0.0 {
                0.0
            } else {
                1.0 / q
            }
        };
        self.w.weighted_energy(inv) + self.j.weighted_energy(inv)
    }

    /// `X = ‖w‖²_{L²} + ‖j‖²_{L²}`.
    pub fn enstrophy(&self) -> f64 {
        self.w.l2_norm_sq() + self.j.l2_norm_sq()
    }

    pub fn is_finite(&self) -> bool {
        self.w.coefficients().iter().chain(self.j.coefficients()).all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Largest normalized coefficient difference in either field.
    pub fn max_difference(&self, other: &MHDState) -> Result<f64> {
        Ok(self.w.max_mode_difference(&other.w)?.max(self.j.max_mode_difference(&other.j)?))
    }

    /// `sqrt(‖Δw‖² + ‖Δj‖²) / sqrt(‖w‖² + ‖j‖²)` against `reference`.
    pub fn relative_l2_difference(&self, reference: &MHDState) -> Result<f64> {
        let dw = self.w.sub(&reference.w)?.l2_norm_sq();
        let dj = self.j.sub(&reference.j)?.l2_norm_sq();
        let norm = reference.enstrophy();
        Ok(if norm == 0.0 { (dw + dj).sqrt() } else { ((dw + dj) / norm).sqrt() })
    }
}

/// Velocity and magnetic field in primitive variables.
#[derive(Clone, Debug)]
pub struct PrimitiveState {
    pub u: [SpectralField; 2],
    pub b: [SpectralField; 2],
}

impl PrimitiveState {
    pub fn from_state(state: &MHDState) -> Self {
        PrimitiveState { u: state.velocity(), b: state.magnetic() }
    }

    pub fn grid(&self) -> &Arc<TorusGrid> {
        self.u[0].grid()
    }

    pub fn curls(&self) -> Result<(SpectralField, SpectralField)> {
        Ok((curl(&self.u[0], &self.u[1])?, curl(&self.b[0], &self.b[1])?))
    }

    /// Largest normalized divergence coefficient of `u` and `b`.
    pub fn max_divergence(&self) -> Result<f64> {
        let len = self.grid().len() as f64;
        let du = divergence(&self.u[0], &self.u[1])?.max_abs_coeff();
        let db = divergence(&self.b[0], &self.b[1])?.max_abs_coeff();
        Ok(du.max(db) / len)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::RealField;
    use std::f64::consts::PI;

    #[test]
    fn rejects_mean() {
        let g = TorusGrid::new(16).unwrap();
        let w = RealField::from_fn(&g, |x, _| 1.0 + x.cos()).forward().unwrap();
        assert!(MHDState::new(0.0, w, SpectralField::zeros(&g)).is_err());
    }

    #[test]
    fn energy_of_cellular_flow() {
        let g = TorusGrid::new(16).unwrap();
        let w = RealField::from_fn(&g, |x, y| x.sin() * y.sin()).forward().unwrap();
        let s = MHDState::new(0.0, w, SpectralField::zeros(&g)).unwrap();
        assert!((s.total_energy() - PI * PI / 2.0).abs() < 1e-12);
        assert!(s.w().is_dealiased() && s.w().has_zero_mean());
    }
}
