//! Real samples and Fourier coefficients on a [`TorusGrid`].
//!
//! Normalization: `forward` is the unnormalized DFT, `inverse` carries the
//! factor `1/n²`. With that choice the torus integral of a band-limited
//! product satisfies
//!
//! ```text
//! ∫ f g dx = (2π)² · mean(f g) = (2π)² / n⁴ · Σ_ξ F(ξ) conj(G(ξ))
//! ```
//!
//! and `F(ξ) / n²` is the Fourier-series coefficient of `e^{iξ·x}`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::TorusGrid;

const TORUS_AREA: f64 = 4.0 * PI * PI;

fn check_same(a: &TorusGrid, b: &TorusGrid) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::GridMismatch { left: a.n(), right: b.n() });
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct RealField {
    grid: Arc<TorusGrid>,
    data: Vec<f64>,
}

impl RealField {
    pub fn zeros(grid: &Arc<TorusGrid>) -> Self {
        RealField { grid: Arc::clone(grid), data: vec![0.0; grid.len()] }
    }

    pub fn from_samples(grid: &Arc<TorusGrid>, data: Vec<f64>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} samples, got {}",
                grid.len(),
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("real field samples".into()));
        }
        Ok(RealField { grid: Arc::clone(grid), data })
    }

    /// Samples `f(x₁, x₂)` at the grid nodes.
    pub fn from_fn(grid: &Arc<TorusGrid>, f: impl Fn(f64, f64) -> f64) -> Self {
        let n = grid.n();
        let data = (0..grid.len())
            .map(|i| f(grid.coordinate(i % n), grid.coordinate(i / n)))
            .collect();
        RealField { grid: Arc::clone(grid), data }
    }

    pub fn grid(&self) -> &Arc<TorusGrid> {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.data
    }

    pub fn samples_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Collocation `L^p` norm over the torus; `p = ∞` is the grid maximum.
    pub fn lp_norm(&self, p: f64) -> f64 {
        lp_norm_of_samples(&self.data, p)
    }

    /// Pointwise product, staying on the same grid.
    pub fn mul(&self, other: &RealField) -> Result<RealField> {
        check_same(&self.grid, &other.grid)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a * b).collect();
        Ok(RealField { grid: Arc::clone(&self.grid), data })
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> RealField {
        RealField { grid: Arc::clone(&self.grid), data: self.data.iter().map(|&v| f(v)).collect() }
    }

    pub fn forward(&self) -> Result<SpectralField> {
        forward(self)
    }
}

/// `(∫|f|^p dx)^{1/p}` for samples on a uniform grid of the torus.
pub fn lp_norm_of_samples(data: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        return data.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    }
    let len = data.len() as f64;
    let mean = if p == 2.0 {
        data.iter().map(|v| v * v).sum::<f64>() / len
    } else {
        data.iter().map(|v| v.abs().powf(p)).sum::<f64>() / len
    };
    (TORUS_AREA * mean).powf(1.0 / p)
}

#[derive(Clone, Debug)]
pub struct SpectralField {
    grid: Arc<TorusGrid>,
    data: Vec<Complex64>,
    dealiased: bool,
}

impl SpectralField {
    pub fn zeros(grid: &Arc<TorusGrid>) -> Self {
        SpectralField {
            grid: Arc::clone(grid),
            data: vec![Complex64::new(0.0, 0.0); grid.len()],
            dealiased: true,
        }
    }

    /// Wraps raw coefficients in array (wavenumber index) order.
    pub fn from_coefficients(grid: &Arc<TorusGrid>, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} coefficients, got {}",
                grid.len(),
                data.len()
            )));
        }
        if data.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite("spectral coefficients".into()));
        }
        Ok(SpectralField { grid: Arc::clone(grid), data, dealiased: false })
    }

    /// Builds a field from normalized Fourier-series coefficients `c(ξ)`
    /// (the field is `Σ c(ξ) e^{iξ·x}`). Unresolved wavenumbers are an error.
    pub fn from_modes(
        grid: &Arc<TorusGrid>,
        modes: impl IntoIterator<Item = ((i64, i64), Complex64)>,
    ) -> Result<Self> {
        let mut out = SpectralField::zeros(grid);
        out.dealiased = false;
        let scale = grid.len() as f64;
        for ((k1, k2), c) in modes {
            let idx = grid.flat_index(k1, k2).ok_or_else(|| {
                Error::SupportViolation(format!("mode ({k1}, {k2}) not resolved on n = {}", grid.n()))
            })?;
            out.data[idx] += c * scale;
        }
        Ok(out)
    }

    pub fn grid(&self) -> &Arc<TorusGrid> {
        &self.grid
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.data
    }

    pub fn coefficients_mut(&mut self) -> &mut [Complex64] {
        self.dealiased = false;
        &mut self.data
    }

    pub fn into_coefficients(self) -> Vec<Complex64> {
        self.data
    }

    pub fn is_dealiased(&self) -> bool {
        self.dealiased
    }

    pub(crate) fn set_dealiased(&mut self, flag: bool) {
        self.dealiased = flag;
    }

    /// Raw (unnormalized) coefficient at wavevector `(k1, k2)`, zero if unresolved.
    pub fn coeff(&self, k1: i64, k2: i64) -> Complex64 {
        self.grid
            .flat_index(k1, k2)
            .map(|i| self.data[i])
            .unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    /// Normalized Fourier-series coefficient at `(k1, k2)`.
    pub fn mode(&self, k1: i64, k2: i64) -> Complex64 {
        self.coeff(k1, k2) / self.grid.len() as f64
    }

    pub fn mean(&self) -> f64 {
        self.data[0].re / self.grid.len() as f64
    }

    pub fn has_zero_mean(&self) -> bool {
        self.data[0] == Complex64::new(0.0, 0.0)
    }

    /// Coefficient-wise multiplication by a symbol `m(ξ₁, ξ₂)`.
    pub fn apply_symbol(&self, symbol: impl Fn(i64, i64) -> Complex64) -> SpectralField {
        let g = &self.grid;
        let data = self
            .data
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let (k1, k2) = g.wavevector(i);
                c * symbol(k1, k2)
            })
            .collect();
        SpectralField { grid: Arc::clone(g), data, dealiased: self.dealiased }
    }

    /// Coefficient-wise multiplication by a real radial weight `m(|ξ|²)`.
    pub fn apply_radial(&self, weight: impl Fn(f64) -> f64) -> SpectralField {
        self.apply_symbol(|k1, k2| Complex64::new(weight((k1 * k1 + k2 * k2) as f64), 0.0))
    }

    /// `Σ_ξ m(ξ)|F(ξ)|²` normalized so that `m ≡ 1` gives `‖f‖²_{L²}`.
    pub fn weighted_energy(&self, weight: impl Fn(i64, i64) -> f64) -> f64 {
        let g = &self.grid;
        let sum: f64 = self
            .data
            .iter()
            .enumerate()
            .filter(|(_, c)| c.re != 0.0 || c.im != 0.0)
            .map(|(i, c)| {
                let (k1, k2) = g.wavevector(i);
                weight(k1, k2) * c.norm_sqr()
            })
            .sum();
        TORUS_AREA * sum / (g.len() as f64 * g.len() as f64)
    }

    /// `‖f‖²_{L²}` by Plancherel.
    pub fn l2_norm_sq(&self) -> f64 {
        self.weighted_energy(|_, _| 1.0)
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().sqrt()
    }

    /// Real part of `∫ f conj(g)` by Parseval.
    pub fn inner(&self, other: &SpectralField) -> Result<f64> {
        check_same(&self.grid, &other.grid)?;
        let s: f64 = self.data.iter().zip(&other.data).map(|(a, b)| (a * b.conj()).re).sum();
        let len = self.grid.len() as f64;
        Ok(TORUS_AREA * s / (len * len))
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, c| m.max(c.norm()))
    }

    /// Largest `|coeff(ξ) - conj(coeff(-ξ))|` over non-Nyquist indices.
    pub fn hermitian_defect(&self) -> f64 {
        let g = &self.grid;
        (0..g.len())
            .filter(|&i| !g.is_nyquist(i))
            .map(|i| (self.data[i] - self.data[g.conjugate_index(i)].conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, factor: f64) -> SpectralField {
        SpectralField {
            grid: Arc::clone(&self.grid),
            data: self.data.iter().map(|c| c * factor).collect(),
            dealiased: self.dealiased,
        }
    }

    pub fn add(&self, other: &SpectralField) -> Result<SpectralField> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &SpectralField) -> Result<SpectralField> {
        self.zip_with(other, |a, b| a - b)
    }

    /// `self + factor * other`.
    pub fn axpy(&self, factor: f64, other: &SpectralField) -> Result<SpectralField> {
        self.zip_with(other, |a, b| a + b * factor)
    }

    fn zip_with(
        &self,
        other: &SpectralField,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<SpectralField> {
        check_same(&self.grid, &other.grid)?;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(SpectralField {
            grid: Arc::clone(&self.grid),
            data,
            dealiased: self.dealiased && other.dealiased,
        })
    }

    /// Largest coefficient difference, scaled by `1/n²` (normalized modes).
    pub fn max_mode_difference(&self, other: &SpectralField) -> Result<f64> {
        check_same(&self.grid, &other.grid)?;
        let len = self.grid.len() as f64;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
            / len)
    }

    /// Copies the field onto another grid size, keeping every wavenumber
    /// resolved by both (zero padding when refining, truncation when
    /// coarsening). Nyquist wavenumbers of the smaller grid are dropped so
    /// the result stays Hermitian.
    pub fn resample(&self, target: &Arc<TorusGrid>) -> SpectralField {
        if target.n() == self.grid.n() {
            return self.clone();
        }
        let small = self.grid.n().min(target.n());
        let half = (small / 2) as i64;
        let factor = target.len() as f64 / self.grid.len() as f64;
        let mut out = SpectralField::zeros(target);
        for (i, c) in self.data.iter().enumerate() {
            if c.re == 0.0 && c.im == 0.0 {
                continue;
            }
            let (k1, k2) = self.grid.wavevector(i);
            if k1.abs() >= half || k2.abs() >= half {
                continue;
            }
            let j = target.flat_index(k1, k2).expect("resolved on both grids");
            out.data[j] = c * factor;
        }
        out.dealiased = self.dealiased && target.n() >= self.grid.n();
        out
    }

    pub fn inverse(&self) -> RealField {
        inverse(self)
    }
}

fn real_to_complex(f: &[f64]) -> Vec<Complex64> {
    f.iter().map(|&v| Complex64::new(v, 0.0)).collect()
}

pub fn forward(f: &RealField) -> Result<SpectralField> {
    if f.data.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("forward transform input".into()));
    }
    let mut data = real_to_complex(&f.data);
    f.grid.fft_forward(&mut data);
    Ok(SpectralField { grid: Arc::clone(&f.grid), data, dealiased: false })
}

/// Inverse transform; the imaginary round-off of a Hermitian spectrum is dropped.
pub fn inverse(f: &SpectralField) -> RealField {
    let mut data = f.data.clone();
    f.grid.fft_inverse(&mut data);
    let scale = 1.0 / f.grid.len() as f64;
    RealField { grid: Arc::clone(&f.grid), data: data.iter().map(|c| c.re * scale).collect() }
}

/// Two inverse transforms for the price of one: `f + i g` is transformed in
/// a single complex pass (both spectra must be Hermitian).
pub fn inverse_pair(f: &SpectralField, g: &SpectralField) -> Result<(RealField, RealField)> {
    check_same(&f.grid, &g.grid)?;
    let mut data: Vec<Complex64> = f
        .data
        .iter()
        .zip(&g.data)
        .map(|(a, b)| a + Complex64::new(-b.im, b.re))
        .collect();
    f.grid.fft_inverse(&mut data);
    let scale = 1.0 / f.grid.len() as f64;
    let re = data.iter().map(|c| c.re * scale).collect();
    let im = data.iter().map(|c| c.im * scale).collect();
    Ok((
        RealField { grid: Arc::clone(&f.grid), data: re },
        RealField { grid: Arc::clone(&f.grid), data: im },
    ))
}

/// Forward transforms of two real fields from one complex pass, separated
/// through the Hermitian symmetry of each half.
pub fn forward_pair(f: &RealField, g: &RealField) -> Result<(SpectralField, SpectralField)> {
    check_same(&f.grid, &g.grid)?;
    if f.data.iter().chain(&g.data).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("forward transform input".into()));
    }
    let grid = &f.grid;
    let mut z: Vec<Complex64> =
        f.data.iter().zip(&g.data).map(|(&a, &b)| Complex64::new(a, b)).collect();
    grid.fft_forward(&mut z);
    let mut a = vec![Complex64::new(0.0, 0.0); grid.len()];
    let mut b = vec![Complex64::new(0.0, 0.0); grid.len()];
    for i in 0..grid.len() {
        let zc = z[grid.conjugate_index(i)].conj();
        a[i] = (z[i] + zc) * 0.5;
        let d = (z[i] - zc) * 0.5;
        // d / i
        b[i] = Complex64::new(d.im, -d.re);
    }
    Ok((
        SpectralField { grid: Arc::clone(grid), data: a, dealiased: false },
        SpectralField { grid: Arc::clone(grid), data: b, dealiased: false },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::band_limited_field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_real(grid: &Arc<TorusGrid>, seed: u64) -> RealField {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = (0..grid.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        RealField::from_samples(grid, data).unwrap()
    }

    #[test]
    fn constant_has_only_dc() {
        let g = TorusGrid::new(16).unwrap();
        let f = RealField::from_fn(&g, |_, _| 1.0).forward().unwrap();
        for (i, c) in f.coefficients().iter().enumerate() {
            if i == 0 {
                assert!((c.re - 256.0).abs() < 1e-12);
            } else {
                assert!(c.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn sine_has_two_modes() {
        let g = TorusGrid::new(32).unwrap();
        let f = RealField::from_fn(&g, |x, _| x.sin()).forward().unwrap();
        let nonzero: Vec<_> = (0..g.len())
            .filter(|&i| f.coefficients()[i].norm() > 1e-9)
            .map(|i| g.wavevector(i))
            .collect();
        assert_eq!(nonzero.len(), 2);
        assert!(nonzero.contains(&(1, 0)) && nonzero.contains(&(-1, 0)));
        // sin x = (e^{ix} - e^{-ix}) / 2i
        assert!((f.mode(1, 0) - Complex64::new(0.0, -0.5)).norm() < 1e-14);
    }

    #[test]
    fn round_trip_and_parseval() {
        let g = TorusGrid::new(64).unwrap();
        let f = random_real(&g, 3);
        let spec = f.forward().unwrap();
        let back = spec.inverse();
        let err = f
            .samples()
            .iter()
            .zip(back.samples())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-12, "{err}");
        let direct = f.lp_norm(2.0).powi(2);
        assert!((direct - spec.l2_norm_sq()).abs() / direct < 1e-12);
    }

    #[test]
    fn pair_transforms_match_single() {
        let g = TorusGrid::new(32).unwrap();
        let (f, h) = (random_real(&g, 1), random_real(&g, 2));
        let (fs, hs) = forward_pair(&f, &h).unwrap();
        assert!(fs.max_mode_difference(&f.forward().unwrap()).unwrap() < 1e-15);
        assert!(hs.max_mode_difference(&h.forward().unwrap()).unwrap() < 1e-15);
        let (fr, hr) = inverse_pair(&fs, &hs).unwrap();
        for (a, b) in fr.samples().iter().zip(f.samples()) {
            assert!((a - b).abs() < 1e-13);
        }
        for (a, b) in hr.samples().iter().zip(h.samples()) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn non_finite_rejected() {
        let g = TorusGrid::new(8).unwrap();
        let mut data = vec![0.0; 64];
        data[5] = f64::NAN;
        assert!(matches!(RealField::from_samples(&g, data), Err(Error::NonFinite(_))));
    }

    #[test]
    fn resample_preserves_function() {
        let g = TorusGrid::new(32).unwrap();
        let fine = TorusGrid::new(128).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = band_limited_field(&g, 10, 1.0, &mut rng).unwrap();
        let up = f.resample(&fine);
        assert!((up.l2_norm() - f.l2_norm()).abs() < 1e-12);
        assert!(up.resample(&g).max_mode_difference(&f).unwrap() < 1e-15);
        // physical values agree at shared nodes
        let (a, b) = (f.inverse(), up.inverse());
        for r in 0..32 {
            for c in 0..32 {
                let diff = a.samples()[r * 32 + c] - b.samples()[4 * r * 128 + 4 * c];
                assert!(diff.abs() < 1e-13);
            }
        }
    }

    #[test]
    fn grid_mismatch_is_reported() {
        let a = SpectralField::zeros(&TorusGrid::new(8).unwrap());
        let b = SpectralField::zeros(&TorusGrid::new(16).unwrap());
        assert!(matches!(a.add(&b), Err(Error::GridMismatch { .. })));
    }
}
