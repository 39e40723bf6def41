use std::sync::Arc;

use crate::field::SpectralField;
use crate::grid::TorusGrid;

/// `e^{−1/x}` for `x > 0`, zero otherwise.
fn flat(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

/// Smooth cutoff: 1 on `r ≤ 1`, 0 on `r ≥ 2`, C^∞ in between.
pub fn cutoff(r: f64) -> f64 {
    let (a, b) = (flat(2.0 - r), flat(r - 1.0));
    if b == 0.0 {
        1.0
    } else {
        a / (a + b)
    }
}

/// Dyadic profile `φ(r) = θ(r) − θ(2r)`, supported in `1/2 < r < 2`.
pub fn profile(r: f64) -> f64 {
    cutoff(r) - cutoff(2.0 * r)
}

/// Multipliers `Φ̂_j`, `j_min ≤ j ≤ j_max`, and the low-frequency `Ψ̂`.
///
/// `Φ̂_j(ξ) = φ(2^{−j}|ξ|)` divided by the lattice sum over the resolved
/// `j`, so the blocks sum to exactly one at every `ξ ≠ 0`. On the integer
/// lattice `|ξ| ≥ 1` away from the origin, hence `j_min = 0` and `Ψ̂` is
/// the indicator of `ξ = 0`.
#[derive(Clone, Debug)]
pub struct DyadicPartition {
    grid: Arc<TorusGrid>,
    j_min: i32,
    j_max: i32,
    blocks: Vec<Vec<f64>>,
    low: Vec<f64>,
}

pub fn build_partition(grid: &Arc<TorusGrid>) -> DyadicPartition {
    let j_min = 0;
    let j_max = ((grid.n() / 2) as f64).log2().ceil() as i32;
    let radius: Vec<f64> = (0..grid.len())
        .map(|i| {
            let (k1, k2) = grid.wavevector(i);
            ((k1 * k1 + k2 * k2) as f64).sqrt()
        })
        .collect();
    let mut blocks: Vec<Vec<f64>> = (j_min..=j_max)
        .map(|j| radius.iter().map(|&r| profile(r / 2f64.powi(j))).collect())
        .collect();
    for i in 1..grid.len() {
        let sum: f64 = blocks.iter().map(|b| b[i]).sum();
        for b in blocks.iter_mut() {
            b[i] /= sum;
        }
    }
    let low = radius.iter().map(|&r| cutoff(2.0 * r)).collect();
    DyadicPartition { grid: Arc::clone(grid), j_min, j_max, blocks, low }
}

impl DyadicPartition {
    pub fn grid(&self) -> &Arc<TorusGrid> {
        &self.grid
    }

    pub fn j_min(&self) -> i32 {
        self.j_min
    }

    pub fn j_max(&self) -> i32 {
        self.j_max
    }

    pub fn range(&self) -> std::ops::RangeInclusive<i32> {
        self.j_min..=self.j_max
    }

    /// `Φ̂_j` in array order, `None` outside the resolved range.
    pub fn multiplier(&self, j: i32) -> Option<&[f64]> {
        if j < self.j_min || j > self.j_max {
            return None;
        }
        Some(&self.blocks[(j - self.j_min) as usize])
    }

    /// `Ψ̂` in array order.
    pub fn low_multiplier(&self) -> &[f64] {
        &self.low
    }

    /// Number of resolved blocks that are nonzero at array index `i`.
    pub fn overlap_count(&self, i: usize) -> usize {
        self.blocks.iter().filter(|b| b[i] != 0.0).count()
    }
}

fn multiply(f: &SpectralField, m: Option<&[f64]>) -> SpectralField {
    let mut out = SpectralField::zeros(f.grid());
    if let Some(m) = m {
        for ((o, c), w) in out.coefficients_mut().iter_mut().zip(f.coefficients()).zip(m) {
            *o = c * *w;
        }
    }
    out.set_dealiased(f.is_dealiased());
    out
}

/// `Δ̇_j f` (homogeneous) or `Δ_j f` (inhomogeneous: zero for `j ≤ −2`,
/// `Ψ∗f` for `j = −1`). Blocks outside the resolved range are zero.
pub fn dyadic_block(f: &SpectralField, j: i32, partition: &DyadicPartition, homogeneous: bool) -> SpectralField {
    debug_assert_eq!(f.grid().n(), partition.grid.n());
    if !homogeneous && j <= -2 {
        return multiply(f, None);
    }
    if !homogeneous && j == -1 {
        return multiply(f, Some(&partition.low));
    }
    multiply(f, partition.multiplier(j))
}

/// `Ṡ_j f = Σ_{l ≤ j−1} Δ̇_l f`.
pub fn low_pass(f: &SpectralField, j: i32, partition: &DyadicPartition) -> SpectralField {
    let mut m = vec![0.0; f.grid().len()];
    for l in partition.j_min..j.min(partition.j_max + 1) {
        for (a, b) in m.iter_mut().zip(partition.multiplier(l).unwrap()) {
            *a += b;
        }
    }
    multiply(f, Some(&m))
}
