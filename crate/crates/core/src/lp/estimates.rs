use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::lp::besov::sobolev_norm;
use crate::lp::partition::{dyadic_block, DyadicPartition};
use crate::norms::{magnitude, product_spectrum, sup_norm, vector_lp_norm};
use crate::ops::{biot_savart, gradient, is_mean_free, partial_derivative, Axis};

/// `‖fg‖_{Ḣ^{σ₁+σ₂−1}} / (‖f‖_{Ḣ^{σ₁}}‖g‖_{Ḣ^{σ₂}})` for `σ₁, σ₂ < 1`,
/// `σ₁ + σ₂ > 0`. The product is formed exactly; its mean, invisible to a
/// homogeneous norm, is discarded.
pub fn product_estimate_ratio(f: &SpectralField, g: &SpectralField, sigma1: f64, sigma2: f64) -> Result<f64> {
    if !(sigma1 < 1.0 && sigma2 < 1.0 && sigma1 + sigma2 > 0.0) {
        return Err(Error::Hypothesis(format!(
            "product estimate needs sigma1, sigma2 < 1 and sigma1 + sigma2 > 0, got ({sigma1}, {sigma2})"
        )));
    }
    if !is_mean_free(f) || !is_mean_free(g) {
        return Err(Error::NonzeroMean);
    }
    let den = sobolev_norm(f, sigma1, true)? * sobolev_norm(g, sigma2, true)?;
    if den == 0.0 {
        return Ok(0.0);
    }
    let mut fg = product_spectrum(f, g)?;
    fg.coefficients_mut()[0] = num_complex::Complex64::new(0.0, 0.0);
    Ok(sobolev_norm(&fg, sigma1 + sigma2 - 1.0, true)? / den)
}

/// Terms of `‖∇f‖_{L^∞} ≤ c(‖f‖_{L²} + ‖curl f‖_{L^∞} log₂(2 + ‖f‖_{H^s}) + 1)`
/// for the divergence-free `f` with curl `w`, evaluated with `c = 1`.
#[derive(Clone, Debug, Serialize)]
pub struct LogInequality {
    pub grad_sup: f64,
    pub l2: f64,
    pub curl_sup: f64,
    pub hs: f64,
    /// `grad_sup` over the bracket.
    pub ratio: f64,
    /// Split index `⌈log₂(2 + ‖f‖_{H^s})/(s − 2)⌉`, clamped to `[1, j_max]`.
    pub split: i32,
}

/// `‖∇f‖_{L^∞} ≤ ‖Δ_{−1}∇f‖_{L^∞} + Σ_{0≤j<split}‖Δ_j∇f‖_{L^∞} + Σ_{j≥split}‖Δ_j∇f‖_{L^∞}`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ThreeTermSplit {
    pub low: f64,
    pub middle: f64,
    pub high: f64,
}

fn velocity_gradient(w: &SpectralField) -> Result<[SpectralField; 4]> {
    let [u1, u2] = biot_savart(w)?;
    let [a, b] = gradient(&u1);
    let [c, d] = gradient(&u2);
    Ok([a, b, c, d])
}

pub fn log_inequality_ratio(w: &SpectralField, s: f64, partition: &DyadicPartition) -> Result<LogInequality> {
    if !(s > 2.0) {
        return Err(Error::Hypothesis(format!("log inequality needs s > 2, got {s}")));
    }
    let [u1, u2] = biot_savart(w)?;
    let grad = velocity_gradient(w)?;
    let grad_sup = magnitude(&grad.iter().collect::<Vec<_>>())?.max_abs();
    let l2 = vector_lp_norm(&[&u1, &u2], 2.0)?;
    let curl_sup = sup_norm(w)?;
    let hs = (sobolev_norm(&u1, s, false)?.powi(2) + sobolev_norm(&u2, s, false)?.powi(2)).sqrt();
    let bracket = l2 + curl_sup * (2.0 + hs).log2() + 1.0;
    let split = (((2.0 + hs).log2() / (s - 2.0)).ceil() as i32).clamp(1, partition.j_max());
    Ok(LogInequality { grad_sup, l2, curl_sup, hs, ratio: grad_sup / bracket, split })
}

/// Block sums of the velocity gradient of `w` around the index `split`.
pub fn three_term_split(w: &SpectralField, split: i32, partition: &DyadicPartition) -> Result<ThreeTermSplit> {
    let grad = velocity_gradient(w)?;
    let block_sup = |j: i32| -> Result<f64> {
        let parts: Vec<SpectralField> = grad.iter().map(|g| dyadic_block(g, j, partition, false)).collect();
        if parts.iter().all(|p| p.max_abs_coeff() == 0.0) {
            return Ok(0.0);
        }
        Ok(magnitude(&parts.iter().collect::<Vec<_>>())?.max_abs())
    };
    let mut out = ThreeTermSplit { low: block_sup(-1)?, middle: 0.0, high: 0.0 };
    for j in 0..=partition.j_max() {
        if j < split {
            out.middle += block_sup(j)?;
        } else {
            out.high += block_sup(j)?;
        }
    }
    Ok(out)
}

/// Relative size below which a coefficient is treated as round-off.
pub const SUPPORT_TOLERANCE: f64 = 1e-13;

/// `sup_{|γ|=k} ‖∂^γ f‖_{L^p} / (2^{jk}‖f‖_{L^p})` for `p = 2` and `p = ∞`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BernsteinRatio {
    pub l2: f64,
    pub linf: f64,
    /// Whether the support also avoids `|ξ| < 2^{j−1}`, the case in which
    /// the ratio is bounded below as well as above.
    pub annulus: bool,
}

/// Requires `supp f̂ ⊂ {|ξ| ≤ 2^{j+1}}`; coefficients below
/// [`SUPPORT_TOLERANCE`] times the largest one count as zero.
pub fn bernstein_ratio(f: &SpectralField, j: i32, k: u32) -> Result<BernsteinRatio> {
    let grid = f.grid();
    let lambda = 2f64.powi(j);
    let floor = SUPPORT_TOLERANCE * f.max_abs_coeff();
    let mut annulus = true;
    for (i, c) in f.coefficients().iter().enumerate() {
        if c.norm() <= floor {
            continue;
        }
        let (k1, k2) = grid.wavevector(i);
        let r = ((k1 * k1 + k2 * k2) as f64).sqrt();
        if r > 2.0 * lambda {
            return Err(Error::SupportViolation(format!("mode ({k1}, {k2}) outside |xi| <= {}", 2.0 * lambda)));
        }
        if r < 0.5 * lambda {
            annulus = false;
        }
    }
    let (base2, baseinf) = (f.l2_norm(), sup_norm(f)?);
    if base2 == 0.0 {
        return Err(Error::InvalidArgument("Bernstein ratio of the zero field".into()));
    }
    let scale = lambda.powi(k as i32);
    let (mut l2, mut linf) = (0.0_f64, 0.0_f64);
    for a in 0..=k {
        let mut d = f.clone();
        for _ in 0..a {
            d = partial_derivative(&d, Axis::X1);
        }
        for _ in a..k {
            d = partial_derivative(&d, Axis::X2);
        }
        l2 = l2.max(d.l2_norm() / (scale * base2));
        linf = linf.max(sup_norm(&d)? / (scale * baseinf));
    }
    Ok(BernsteinRatio { l2, linf, annulus })
}
