use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::lp::partition::{dyadic_block, DyadicPartition};
use crate::norms::{check_exponent, lp_norm};
use crate::ops::{is_mean_free, radial_power};

/// Indices of `Ḃ^s_{p,q}` (or `B^s_{p,q}` when not homogeneous).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BesovSpec {
    pub s: f64,
    pub p: f64,
    pub q: f64,
    pub homogeneous: bool,
}

impl BesovSpec {
    pub fn new(s: f64, p: f64, q: f64, homogeneous: bool) -> Result<Self> {
        if !s.is_finite() {
            return Err(Error::InvalidArgument(format!("regularity {s} is not finite")));
        }
        check_exponent(p)?;
        check_exponent(q)?;
        Ok(BesovSpec { s, p, q, homogeneous })
    }
}

/// `(Σ_j (2^{js}‖Δ_j f‖_{L^p})^q)^{1/q}` over the resolved blocks, with the
/// maximum over `j` for `q = ∞`. The inhomogeneous norm includes `j = −1`.
pub fn besov_norm(f: &SpectralField, spec: &BesovSpec, partition: &DyadicPartition) -> Result<f64> {
    let spec = BesovSpec::new(spec.s, spec.p, spec.q, spec.homogeneous)?;
    if spec.homogeneous && !is_mean_free(f) {
        return Err(Error::NonzeroMean);
    }
    let first = if spec.homogeneous { partition.j_min() } else { -1 };
    let mut terms = Vec::new();
    for j in first..=partition.j_max() {
        let block = dyadic_block(f, j, partition, spec.homogeneous);
        if block.max_abs_coeff() == 0.0 {
            continue;
        }
        terms.push(2f64.powf(j as f64 * spec.s) * lp_norm(&block, spec.p)?);
    }
    Ok(if spec.q.is_infinite() {
        terms.into_iter().fold(0.0, f64::max)
    } else {
        terms.iter().map(|t| t.powf(spec.q)).sum::<f64>().powf(1.0 / spec.q)
    })
}

/// `‖f‖_{Ḣ^s}` with multiplier `|ξ|^s`, or `‖f‖_{H^s}` with `(1 + |ξ|²)^{s/2}`.
/// The homogeneous norm ignores the mean for `s > 0` and rejects it for `s < 0`.
pub fn sobolev_norm(f: &SpectralField, s: f64, homogeneous: bool) -> Result<f64> {
    if !s.is_finite() {
        return Err(Error::InvalidArgument(format!("regularity {s} is not finite")));
    }
    if homogeneous {
        if s < 0.0 && !is_mean_free(f) {
            return Err(Error::SingularSymbol { power: s });
        }
        Ok(f
            .weighted_energy(|k1, k2| if s < 0.0 && k1 == 0 && k2 == 0 { 0.0 } else { radial_power(k1, k2, 2.0 * s) })
            .sqrt())
    } else {
        Ok(f.weighted_energy(|k1, k2| (1.0 + (k1 * k1 + k2 * k2) as f64).powf(s)).sqrt())
    }
}
