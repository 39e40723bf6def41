//! The 2π-periodic square and its integer wavenumber lattice.
//!
//! Samples and coefficients are stored row-major: the row index runs along
//! `x₂` and the column index along `x₁`, so entry `r * n + c` holds either
//! `f(c·h, r·h)` with `h = 2π/n`, or the coefficient of the wavenumber
//! `(ξ₁, ξ₂) = (wavenumber(c), wavenumber(r))`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

pub struct TorusGrid {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for TorusGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TorusGrid").field("n", &self.n).finish()
    }
}

fn cache() -> &'static Mutex<HashMap<usize, Arc<TorusGrid>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<TorusGrid>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl TorusGrid {
    /// Returns the shared grid with `n` points per dimension. FFT plans are
    /// built once per size and reused by every field on that grid.
    pub fn new(n: usize) -> Result<Arc<TorusGrid>> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(n));
        }
        let mut map = cache().lock().expect("grid cache poisoned");
        let grid = map.entry(n).or_insert_with(|| {
            let mut planner = FftPlanner::new();
            Arc::new(TorusGrid {
                n,
                forward: planner.plan_fft_forward(n),
                inverse: planner.plan_fft_inverse(n),
            })
        });
        Ok(Arc::clone(grid))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    /// Integer wavenumber stored at array index `i`, in `[-n/2, n/2)`.
    #[inline]
    pub fn wavenumber(&self, i: usize) -> i64 {
        let n = self.n as i64;
        let i = i as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    /// Array index of wavenumber `k`, if it is resolved.
    #[inline]
    pub fn index_of(&self, k: i64) -> Option<usize> {
        let half = (self.n / 2) as i64;
        if k < -half || k >= half {
            None
        } else {
            Some(k.rem_euclid(self.n as i64) as usize)
        }
    }

    /// Wavenumber pair `(ξ₁, ξ₂)` at flat index `idx`.
    #[inline]
    pub fn wavevector(&self, idx: usize) -> (i64, i64) {
        (self.wavenumber(idx % self.n), self.wavenumber(idx / self.n))
    }

    #[inline]
    pub fn flat_index(&self, k1: i64, k2: i64) -> Option<usize> {
        Some(self.index_of(k2)? * self.n + self.index_of(k1)?)
    }

    /// Flat index of `-ξ` for the wavevector stored at `idx`. The Nyquist
    /// index maps to itself.
    #[inline]
    pub fn conjugate_index(&self, idx: usize) -> usize {
        let n = self.n;
        let (c, r) = (idx % n, idx / n);
        ((n - r) % n) * n + (n - c) % n
    }

    /// True if either component sits on the unpaired Nyquist wavenumber `-n/2`.
    #[inline]
    pub fn is_nyquist(&self, idx: usize) -> bool {
        let half = self.n / 2;
        idx % self.n == half || idx / self.n == half
    }

    /// Largest retained component magnitude under the 2/3 rule.
    pub fn dealias_cutoff(&self) -> usize {
        self.n / 3
    }

    /// Physical coordinate of array index `i` along either axis.
    pub fn coordinate(&self, i: usize) -> f64 {
        i as f64 * self.spacing()
    }

    pub(crate) fn fft_forward(&self, data: &mut [Complex64]) {
        self.fft2(data, &self.forward);
    }

    pub(crate) fn fft_inverse(&self, data: &mut [Complex64]) {
        self.fft2(data, &self.inverse);
    }

    fn fft2(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        debug_assert_eq!(data.len(), self.len());
        let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        plan.process_with_scratch(data, &mut scratch);
        transpose(data, self.n);
        plan.process_with_scratch(data, &mut scratch);
        transpose(data, self.n);
    }
}

fn transpose(data: &mut [Complex64], n: usize) {
    const BLOCK: usize = 32;
    for bi in (0..n).step_by(BLOCK) {
        for bj in (bi..n).step_by(BLOCK) {
            for i in bi..(bi + BLOCK).min(n) {
                let start = if bi == bj { i + 1 } else { bj };
                for j in start..(bj + BLOCK).min(n) {
                    data.swap(i * n + j, j * n + i);
                }
            }
        }
    }
}
