//! Seeded random band-limited fields.
//!
//! Coefficients are drawn in a fixed wavenumber order that does not depend
//! on the grid size, so the same seed and band give the same function on
//! every grid that resolves it.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::TorusGrid;

/// Random real zero-mean field with support in `max(|ξ₁|, |ξ₂|) ≤ band`,
/// spectral amplitude decaying like `1/(1 + |ξ|)`, scaled so that
/// `‖f‖_{L²} = l2_norm` (a zero norm gives the zero field).
pub fn band_limited_field<R: Rng>(
    grid: &Arc<TorusGrid>,
    band: usize,
    l2_norm: f64,
    rng: &mut R,
) -> Result<SpectralField> {
    let b = band as i64;
    if b >= (grid.n() / 2) as i64 {
        return Err(Error::BandTooHigh { band, cutoff: grid.n() / 2 - 1 });
    }
    let mut modes = Vec::new();
    // half plane: k2 > 0, or k2 == 0 and k1 > 0
    for k2 in 0..=b {
        for k1 in -b..=b {
            if k2 == 0 && k1 <= 0 {
                continue;
            }
            let decay = 1.0 / (1.0 + ((k1 * k1 + k2 * k2) as f64).sqrt());
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * decay;
            modes.push(((k1, k2), c));
            modes.push(((-k1, -k2), c.conj()));
        }
    }
    let f = SpectralField::from_modes(grid, modes)?;
    let norm = f.l2_norm();
    let mut out = if norm > 0.0 && l2_norm > 0.0 {
        f.scale(l2_norm / norm)
    } else {
        SpectralField::zeros(grid)
    };
    out.set_dealiased(3 * band <= grid.n());
    Ok(out)
}

/// Random field supported in the annulus `lo ≤ |ξ| ≤ hi`.
pub fn annulus_field<R: Rng>(
    grid: &Arc<TorusGrid>,
    lo: f64,
    hi: f64,
    rng: &mut R,
) -> Result<SpectralField> {
    let b = hi.floor() as i64;
    if b >= (grid.n() / 2) as i64 {
        return Err(Error::BandTooHigh { band: b as usize, cutoff: grid.n() / 2 - 1 });
    }
    let mut modes = Vec::new();
    for k2 in 0..=b {
        for k1 in -b..=b {
            if k2 == 0 && k1 <= 0 {
                continue;
            }
            let r = ((k1 * k1 + k2 * k2) as f64).sqrt();
            if r < lo || r > hi {
                continue;
            }
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            modes.push(((k1, k2), c));
            modes.push(((-k1, -k2), c.conj()));
        }
    }
    SpectralField::from_modes(grid, modes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn same_function_on_every_grid() {
        let a = band_limited_field(&TorusGrid::new(32).unwrap(), 6, 2.0, &mut ChaCha8Rng::seed_from_u64(5))
            .unwrap();
        let big = TorusGrid::new(128).unwrap();
        let b = band_limited_field(&big, 6, 2.0, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert!(a.resample(&big).max_mode_difference(&b).unwrap() < 1e-15);
        assert!((b.l2_norm() - 2.0).abs() < 1e-12);
        assert!(b.has_zero_mean());
        assert!(b.hermitian_defect() == 0.0);
    }

    #[test]
    fn band_must_fit() {
        let g = TorusGrid::new(16).unwrap();
        assert!(band_limited_field(&g, 8, 1.0, &mut ChaCha8Rng::seed_from_u64(0)).is_err());
    }
}
