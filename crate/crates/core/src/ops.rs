//! Fourier multipliers on the torus: derivatives, fractional powers of the
//! Laplacian, Biot–Savart inversion, Leray projection and 2/3 dealiasing.
//!
//! Odd multipliers (`iξ_k`) are set to zero on the unpaired Nyquist
//! wavenumber `-n/2`, otherwise they would break Hermitian symmetry. Fields
//! produced by the solver are dealiased and carry no Nyquist content.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::SpectralField;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X1,
    X2,
}

/// `|ξ|^s` with the convention `|0|^0 = 1` and `|0|^s = 0` otherwise.
#[inline]
pub fn radial_power(k1: i64, k2: i64, s: f64) -> f64 {
    let k2sum = (k1 * k1 + k2 * k2) as f64;
    if k2sum == 0.0 {
        if s == 0.0 {
            1.0
        } else {
            0.0
        }
    } else if s == 2.0 {
        k2sum
    } else {
        k2sum.powf(0.5 * s)
    }
}

/// Relative size of the mean below which a field counts as mean-free.
const MEAN_TOLERANCE: f64 = 1e-12;

pub(crate) fn is_mean_free(f: &SpectralField) -> bool {
    let dc = f.coefficients()[0].norm();
    dc == 0.0 || dc <= MEAN_TOLERANCE * f.max_abs_coeff()
}

/// `Λ^{2γ} F`, the multiplier `|ξ|^{2γ}`.
pub fn fractional_laplacian(f: &SpectralField, gamma: f64) -> Result<SpectralField> {
    if !gamma.is_finite() {
        return Err(Error::InvalidArgument(format!("exponent {gamma} is not finite")));
    }
    if gamma < 0.0 && !f.has_zero_mean() && !is_mean_free(f) {
        return Err(Error::SingularSymbol { power: 2.0 * gamma });
    }
    if gamma < -1.0 {
        return Err(Error::InvalidArgument(format!("exponent {gamma} below -1")));
    }
    if gamma == 0.0 {
        return Ok(f.clone());
    }
    let mut out = f.apply_radial(|k2| if k2 == 0.0 { 0.0 } else { k2.powf(gamma) });
    out.set_dealiased(f.is_dealiased());
    Ok(out)
}

/// `Λ^s F` (symbol `|ξ|^s`).
pub fn lambda(f: &SpectralField, s: f64) -> Result<SpectralField> {
    fractional_laplacian(f, 0.5 * s)
}

#[inline]
fn odd_symbol(k: i64, n: usize) -> f64 {
    if k == -((n / 2) as i64) {
        0.0
    } else {
        k as f64
    }
}

pub fn partial_derivative(f: &SpectralField, axis: Axis) -> SpectralField {
    let n = f.grid().n();
    f.apply_symbol(|k1, k2| {
        let k = match axis {
            Axis::X1 => k1,
            Axis::X2 => k2,
        };
        Complex64::new(0.0, odd_symbol(k, n))
    })
}

/// `∇⊥ψ = (-∂₂ψ, ∂₁ψ)`.
pub fn perp_gradient(psi: &SpectralField) -> [SpectralField; 2] {
    let d2 = partial_derivative(psi, Axis::X2);
    [d2.scale(-1.0), partial_derivative(psi, Axis::X1)]
}

pub fn gradient(f: &SpectralField) -> [SpectralField; 2] {
    [partial_derivative(f, Axis::X1), partial_derivative(f, Axis::X2)]
}

/// Scalar curl `∂₁v₂ - ∂₂v₁`.
pub fn curl(v1: &SpectralField, v2: &SpectralField) -> Result<SpectralField> {
    partial_derivative(v2, Axis::X1).sub(&partial_derivative(v1, Axis::X2))
}

pub fn divergence(v1: &SpectralField, v2: &SpectralField) -> Result<SpectralField> {
    partial_derivative(v1, Axis::X1).add(&partial_derivative(v2, Axis::X2))
}

/// Recovers the mean-free, divergence-free velocity whose curl is `w`:
/// `û(ξ) = (iξ₂, -iξ₁) ŵ(ξ) / |ξ|²`.
pub fn biot_savart(w: &SpectralField) -> Result<[SpectralField; 2]> {
    if !is_mean_free(w) {
        return Err(Error::NonzeroMean);
    }
    let n = w.grid().n();
    let u1 = w.apply_symbol(|k1, k2| {
        let q = (k1 * k1 + k2 * k2) as f64;
        if q == 0.0 {
            ZERO
        } else {
            Complex64::new(0.0, odd_symbol(k2, n) / q)
        }
    });
    let u2 = w.apply_symbol(|k1, k2| {
        let q = (k1 * k1 + k2 * k2) as f64;
        if q == 0.0 {
            ZERO
        } else {
            Complex64::new(0.0, -odd_symbol(k1, n) / q)
        }
    });
    Ok([u1, u2])
}

/// Zeroes every coefficient with `max(|ξ₁|, |ξ₂|) > n/3`.
pub fn dealias(f: &SpectralField) -> SpectralField {
    let mut out = f.clone();
    dealias_in_place(&mut out);
    out
}

pub fn dealias_in_place(f: &mut SpectralField) {
    let grid = std::sync::Arc::clone(f.grid());
    let n = grid.n() as i64;
    for (i, c) in f.coefficients_mut().iter_mut().enumerate() {
        let (k1, k2) = grid.wavevector(i);
        if 3 * k1.abs().max(k2.abs()) > n {
            *c = ZERO;
        }
    }
    f.set_dealiased(true);
}

/// Removes the gradient part: `v̂ - ξ(ξ·v̂)/|ξ|²` for `ξ ≠ 0`; the mean is kept.
pub fn leray_project(v1: &SpectralField, v2: &SpectralField) -> Result<[SpectralField; 2]> {
    let grid = v1.grid();
    if grid.n() != v2.grid().n() {
        return Err(Error::GridMismatch { left: grid.n(), right: v2.grid().n() });
    }
    let n = grid.n();
    let mut a = v1.clone();
    let mut b = v2.clone();
    let (ca, cb) = (v1.coefficients(), v2.coefficients());
    let mut out1 = Vec::with_capacity(grid.len());
    let mut out2 = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        let (k1, k2) = grid.wavevector(i);
        let (x1, x2) = (odd_symbol(k1, n), odd_symbol(k2, n));
        let q = x1 * x1 + x2 * x2;
        if q == 0.0 {
            out1.push(ca[i]);
            out2.push(cb[i]);
        } else {
            let dot = ca[i] * x1 + cb[i] * x2;
            out1.push(ca[i] - dot * (x1 / q));
            out2.push(cb[i] - dot * (x2 / q));
        }
    }
    let (flag_a, flag_b) = (v1.is_dealiased(), v2.is_dealiased());
    a.coefficients_mut().copy_from_slice(&out1);
    b.coefficients_mut().copy_from_slice(&out2);
    a.set_dealiased(flag_a);
    b.set_dealiased(flag_b);
    Ok([a, b])
}
