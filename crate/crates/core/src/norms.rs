//! Lebesgue norms of band-limited fields.
//!
//! `L²` norms come from Plancherel. Every other `L^p` norm, `p = ∞`
//! included, is evaluated on a grid refined by [`OVERSAMPLE`] in each
//! direction, since the collocation maximum of a band-limited function
//! undershoots its true supremum.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{forward, inverse_pair, lp_norm_of_samples, RealField, SpectralField};
use crate::grid::TorusGrid;

pub const OVERSAMPLE: usize = 4;

pub fn oversampled_grid(grid: &TorusGrid) -> Result<Arc<TorusGrid>> {
    TorusGrid::new(grid.n() * OVERSAMPLE)
}

/// Physical samples of `f` on the oversampled grid.
pub fn oversampled(f: &SpectralField) -> Result<RealField> {
    let fine = oversampled_grid(f.grid())?;
    Ok(f.resample(&fine).inverse())
}

/// Oversampled samples of several fields, transformed two at a time.
pub fn oversampled_many(fields: &[&SpectralField]) -> Result<Vec<RealField>> {
    let Some(first) = fields.first() else {
        return Ok(Vec::new());
    };
    let fine = oversampled_grid(first.grid())?;
    let mut out = Vec::with_capacity(fields.len());
    for chunk in fields.chunks(2) {
        if let [a, b] = chunk {
            let (x, y) = inverse_pair(&a.resample(&fine), &b.resample(&fine))?;
            out.push(x);
            out.push(y);
        } else {
            out.push(chunk[0].resample(&fine).inverse());
        }
    }
    Ok(out)
}

pub fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidArgument(format!("Lebesgue exponent {p} outside [1, ∞]")));
    }
    Ok(())
}

/// `‖f‖_{L^p}` on the torus.
pub fn lp_norm(f: &SpectralField, p: f64) -> Result<f64> {
    check_exponent(p)?;
    if p == 2.0 {
        return Ok(f.l2_norm());
    }
    Ok(oversampled(f)?.lp_norm(p))
}

pub fn sup_norm(f: &SpectralField) -> Result<f64> {
    lp_norm(f, f64::INFINITY)
}

/// Pointwise Euclidean magnitude of a vector/tensor field given by its
/// components, sampled on the oversampled grid.
pub fn magnitude(components: &[&SpectralField]) -> Result<RealField> {
    let samples = oversampled_many(components)?;
    let grid = Arc::clone(samples[0].grid());
    let mut acc = vec![0.0; grid.len()];
    for s in &samples {
        for (a, v) in acc.iter_mut().zip(s.samples()) {
            *a += v * v;
        }
    }
    for a in acc.iter_mut() {
        *a = a.sqrt();
    }
    RealField::from_samples(&grid, acc)
}

/// `‖|v|‖_{L^p}` of a multi-component field with pointwise Euclidean magnitude.
pub fn vector_lp_norm(components: &[&SpectralField], p: f64) -> Result<f64> {
    check_exponent(p)?;
    if components.is_empty() {
        return Ok(0.0);
    }
    if p == 2.0 {
        return Ok(components.iter().map(|c| c.l2_norm_sq()).sum::<f64>().sqrt());
    }
    Ok(lp_norm_of_samples(magnitude(components)?.samples(), p))
}

/// Exact spectrum of the product `f g` on the oversampled grid (which
/// resolves every product wavenumber of two fields on the base grid).
pub fn product_spectrum(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    let fine = oversampled_grid(f.grid())?;
    let (a, b) = inverse_pair(&f.resample(&fine), &g.resample(&fine))?;
    forward(&a.mul(&b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn norms_of_a_cosine() {
        let g = TorusGrid::new(16).unwrap();
        let f = RealField::from_fn(&g, |x, y| (3.0 * x).cos() * (2.0 * y).cos()).forward().unwrap();
        assert!((sup_norm(&f).unwrap() - 1.0).abs() < 1e-12);
        // ∫cos⁴ = 3π/4 per dimension
        let l4 = lp_norm(&f, 4.0).unwrap();
        assert!((l4 - (9.0 * PI * PI / 16.0_f64).powf(0.25)).abs() < 1e-12);
        assert!((lp_norm(&f, 2.0).unwrap() - PI).abs() < 1e-12);
    }

    #[test]
    fn oversampling_finds_the_peak() {
        // sup of cos(x + 0.3) is 1, but it is not attained on a coarse grid
        let g = TorusGrid::new(8).unwrap();
        let f = RealField::from_fn(&g, |x, _| (x + 0.3).cos()).forward().unwrap();
        let coarse = f.inverse().max_abs();
        let fine = sup_norm(&f).unwrap();
        assert!(fine > coarse);
        assert!(1.0 - fine < 1.0 - coarse);
    }

    #[test]
    fn product_is_exact() {
        let g = TorusGrid::new(16).unwrap();
        let a = RealField::from_fn(&g, |x, _| (7.0 * x).cos()).forward().unwrap();
        let p = product_spectrum(&a, &a).unwrap();
        // cos² = 1/2 + cos(14x)/2
        assert!((p.mode(0, 0).re - 0.5).abs() < 1e-14);
        assert!((p.mode(14, 0).re - 0.25).abs() < 1e-14);
    }
}
