use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{inverse_pair, RealField, SpectralField};
use crate::grid::TorusGrid;
use crate::lp::partition::{dyadic_block, low_pass, DyadicPartition};
use crate::ops::is_mean_free;

/// `fg = Ṫ(f,g) + Ṙ(f,g) + Ṫ(g,f)` sampled on a grid twice as fine as the
/// inputs', where every product of two resolved fields is alias-free.
#[derive(Clone, Debug)]
pub struct BonyTerms {
    /// `Σ_j Ṡ_{j−1}f Δ̇_j g`
    pub t_fg: RealField,
    /// `Σ_{|i|≤1} Σ_j Δ̇_j f Δ̇_{j+i} g`
    pub r_fg: RealField,
    /// `Σ_j Ṡ_{j−1}g Δ̇_j f`
    pub t_gf: RealField,
    /// Direct product `fg` on the same grid.
    pub product: RealField,
}

impl BonyTerms {
    pub fn sum(&self) -> Result<RealField> {
        let mut data = self.t_fg.samples().to_vec();
        for (d, (r, t)) in data.iter_mut().zip(self.r_fg.samples().iter().zip(self.t_gf.samples())) {
            *d += r + t;
        }
        RealField::from_samples(self.t_fg.grid(), data)
    }

    /// `‖T + R + T′ − fg‖_{L²} / ‖fg‖_{L²}` (absolute when `fg = 0`).
    pub fn reconstruction_error(&self) -> Result<f64> {
        let sum = self.sum()?;
        let diff: f64 = sum.samples().iter().zip(self.product.samples()).map(|(a, b)| (a - b).powi(2)).sum();
        let norm: f64 = self.product.samples().iter().map(|v| v * v).sum();
        Ok(if norm > 0.0 { (diff / norm).sqrt() } else { diff.sqrt() })
    }
}

fn accumulate(acc: &mut [f64], a: &RealField, b: &RealField) {
    for (o, (x, y)) in acc.iter_mut().zip(a.samples().iter().zip(b.samples())) {
        *o += x * y;
    }
}

/// Physical samples on `fine` of each field, two transforms at a time.
fn sample_all(fields: &[SpectralField], fine: &Arc<TorusGrid>) -> Result<Vec<RealField>> {
    let mut out = Vec::with_capacity(fields.len());
    for chunk in fields.chunks(2) {
        if let [a, b] = chunk {
            let (x, y) = inverse_pair(&a.resample(fine), &b.resample(fine))?;
            out.push(x);
            out.push(y);
        } else {
            out.push(chunk[0].resample(fine).inverse());
        }
    }
    Ok(out)
}

pub fn bony_decompose(f: &SpectralField, g: &SpectralField, partition: &DyadicPartition) -> Result<BonyTerms> {
    if f.grid().n() != g.grid().n() {
        return Err(Error::GridMismatch { left: f.grid().n(), right: g.grid().n() });
    }
    if !is_mean_free(f) || !is_mean_free(g) {
        return Err(Error::NonzeroMean);
    }
    let fine = TorusGrid::new(2 * f.grid().n())?;
    let js: Vec<i32> = partition.range().collect();
    let mut spectral = Vec::with_capacity(4 * js.len() + 2);
    for &j in &js {
        spectral.push(dyadic_block(f, j, partition, true));
        spectral.push(dyadic_block(g, j, partition, true));
        spectral.push(low_pass(f, j - 1, partition));
        spectral.push(low_pass(g, j - 1, partition));
    }
    spectral.push(f.clone());
    spectral.push(g.clone());
    let s = sample_all(&spectral, &fine)?;
    let at = |j: i32, k: usize| &s[4 * (j - partition.j_min()) as usize + k];

    let len = fine.len();
    let (mut t_fg, mut r_fg, mut t_gf) = (vec![0.0; len], vec![0.0; len], vec![0.0; len]);
    for &j in &js {
        accumulate(&mut t_fg, at(j, 2), at(j, 1));
        accumulate(&mut t_gf, at(j, 3), at(j, 0));
        for i in -1..=1 {
            if partition.range().contains(&(j + i)) {
                accumulate(&mut r_fg, at(j, 0), at(j + i, 1));
            }
        }
    }
    let mut product = vec![0.0; len];
    accumulate(&mut product, &s[s.len() - 2], &s[s.len() - 1]);
    Ok(BonyTerms {
        t_fg: RealField::from_samples(&fine, t_fg)?,
        r_fg: RealField::from_samples(&fine, r_fg)?,
        t_gf: RealField::from_samples(&fine, t_gf)?,
        product: RealField::from_samples(&fine, product)?,
    })
}
