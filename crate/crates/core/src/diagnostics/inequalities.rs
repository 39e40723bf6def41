use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{forward, inverse_pair, lp_norm_of_samples, RealField, SpectralField};
use crate::grid::TorusGrid;
use crate::norms::{lp_norm, oversampled, oversampled_grid, vector_lp_norm};
use crate::ops::{biot_savart, gradient, is_mean_free, lambda, radial_power};

fn nonzero(f: &SpectralField, what: &str) -> Result<()> {
    if f.max_abs_coeff() == 0.0 {
        return Err(Error::InvalidArgument(format!("{what} of the zero field")));
    }
    Ok(())
}

/// `‖f‖_{L^∞} / (‖f‖_{L²}^{(β−1)/β} ‖Λ^β f‖_{L²}^{1/β})` for `β > 1`.
pub fn gn_ratio(f: &SpectralField, beta: f64) -> Result<f64> {
    if !(beta > 1.0) || !beta.is_finite() {
        return Err(Error::Hypothesis(format!("interpolation ratio needs beta > 1, got {beta}")));
    }
    if !is_mean_free(f) {
        return Err(Error::NonzeroMean);
    }
    nonzero(f, "interpolation ratio")?;
    let sup = lp_norm(f, f64::INFINITY)?;
    let l2 = f.l2_norm();
    let hb = f.weighted_energy(|k1, k2| radial_power(k1, k2, 2.0 * beta)).sqrt();
    Ok(sup / (l2.powf((beta - 1.0) / beta) * hb.powf(1.0 / beta)))
}

/// `‖∇u‖_{L^p} / ‖w‖_{L^p}` for `u` the Biot–Savart velocity of `w`, with
/// `|∇u|` the pointwise Frobenius norm. `p ∈ {2, 4, 8}`.
pub fn cz_ratio(w: &SpectralField, p: f64) -> Result<f64> {
    if ![2.0, 4.0, 8.0].contains(&p) {
        return Err(Error::InvalidArgument(format!("p = {p} not in {{2, 4, 8}}")));
    }
    nonzero(w, "Calderón–Zygmund ratio")?;
    let [u1, u2] = biot_savart(w)?;
    let [a, b] = gradient(&u1);
    let [c, d] = gradient(&u2);
    Ok(vector_lp_norm(&[&a, &b, &c, &d], p)? / lp_norm(w, p)?)
}

/// Hölder exponents of the commutator estimate:
/// `1/p = 1/p₁ + 1/p₂ = 1/p₃ + 1/p₄`, each in `{2, 4, ∞}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommutatorExponents {
    pub p: f64,
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub p4: f64,
}

impl CommutatorExponents {
    pub fn validate(&self) -> Result<()> {
        let all = [self.p, self.p1, self.p2, self.p3, self.p4];
        if all.iter().any(|p| !(*p == 2.0 || *p == 4.0 || p.is_infinite() && *p > 0.0)) {
            return Err(Error::Hypothesis(format!("exponents {all:?} must lie in {{2, 4, inf}}")));
        }
        let inv = |p: f64| 1.0 / p;
        if inv(self.p) != inv(self.p1) + inv(self.p2) || inv(self.p) != inv(self.p3) + inv(self.p4) {
            return Err(Error::Hypothesis(format!("exponents {all:?} are not Hölder-consistent")));
        }
        Ok(())
    }
}

fn samples_on(f: &SpectralField, fine: &Arc<TorusGrid>) -> RealField {
    f.resample(fine).inverse()
}

/// `‖Λ^s(fg) − fΛ^s g‖_{L^p} / (‖∇f‖_{L^{p₁}}‖Λ^{s−1}g‖_{L^{p₂}} + ‖Λ^s f‖_{L^{p₃}}‖g‖_{L^{p₄}})`.
///
/// Products are formed exactly on the oversampled grid and the left side is
/// measured on that grid's samples. A vanishing right side gives 0 when the
/// left side is at round-off level and `+∞` otherwise.
pub fn commutator_ratio(f: &SpectralField, g: &SpectralField, s: f64, e: CommutatorExponents) -> Result<f64> {
    e.validate()?;
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::Hypothesis(format!("commutator needs s > 0, got {s}")));
    }
    if !is_mean_free(g) {
        return Err(Error::NonzeroMean);
    }
    let fine = oversampled_grid(f.grid())?;
    let ls_g = lambda(g, s)?;
    let (fs, gs) = inverse_pair(&f.resample(&fine), &g.resample(&fine))?;
    let ls_gs = samples_on(&ls_g, &fine);
    let fg = forward(&fs.mul(&gs)?)?;
    let left = samples_on(&lambda(&fg, s)?, &fine);
    let diff: Vec<f64> = left
        .samples()
        .iter()
        .zip(fs.samples().iter().zip(ls_gs.samples()))
        .map(|(a, (x, y))| a - x * y)
        .collect();
    let lhs = lp_norm_of_samples(&diff, e.p);

    let [f1, f2] = gradient(f);
    let rhs = vector_lp_norm(&[&f1, &f2], e.p1)? * lp_norm(&lambda(g, s - 1.0)?, e.p2)?
        + lp_norm(&lambda(f, s)?, e.p3)? * lp_norm(g, e.p4)?;
    if rhs == 0.0 {
        let scale = fs.max_abs() * lp_norm_of_samples(ls_gs.samples(), e.p);
        return Ok(if lhs <= 1e-12 * scale { 0.0 } else { f64::INFINITY });
    }
    Ok(lhs / rhs)
}

/// Both sides of `2∫|Λ^α(f^{p/2})|² ≤ p∫|f|^{p−2} f Λ^{2α}f` for even `p`
/// and `α ∈ [0, 1]`; `f ≥ 0` is required when `p > 2`.
///
/// Every integrand is a trigonometric polynomial integrated exactly on the
/// oversampled grid, which needs `p·max|ξᵢ| < 4n`.
pub fn positivity_check(f: &SpectralField, p: u32, alpha: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::Hypothesis(format!("alpha = {alpha} outside [0, 1]")));
    }
    if p < 2 || p % 2 == 1 {
        return Err(Error::Hypothesis(format!("p = {p} must be even and >= 2")));
    }
    let grid = f.grid();
    if p == 2 {
        let v = 2.0 * f.weighted_energy(|k1, k2| radial_power(k1, k2, 2.0 * alpha));
        return Ok((v, v));
    }
    let band = f
        .coefficients()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.re != 0.0 || c.im != 0.0)
        .map(|(i, _)| {
            let (k1, k2) = grid.wavevector(i);
            k1.abs().max(k2.abs())
        })
        .max()
        .unwrap_or(0);
    let fine = oversampled_grid(grid)?;
    if p as i64 * band >= fine.n() as i64 {
        return Err(Error::SupportViolation(format!("band {band} too wide for exact p = {p} integrals")));
    }
    let fs = oversampled(f)?;
    let peak = fs.max_abs();
    if fs.min() < -1e-12 * peak {
        return Err(Error::Hypothesis(format!("f must be nonnegative for p = {p} (min {:e})", fs.min())));
    }
    let half = (p / 2) as i32;
    let power = fs.map(|v| v.powi(half));
    let lhs = 2.0 * lambda(&forward(&power)?, alpha)?.l2_norm_sq();
    let l2a = samples_on(&crate::ops::fractional_laplacian(f, alpha)?, &fine);
    let area = 4.0 * std::f64::consts::PI * std::f64::consts::PI;
    let mean: f64 = fs
        .samples()
        .iter()
        .zip(l2a.samples())
        .map(|(v, l)| v.abs().powi(p as i32 - 2) * v * l)
        .sum::<f64>()
        / fine.len() as f64;
    Ok((lhs, p as f64 * area * mean))
}
