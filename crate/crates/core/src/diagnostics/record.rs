use serde::{Deserialize, Serialize};

use crate::dynamics::{MHDState, SolverConfig};
use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::norms::{magnitude, oversampled};
use crate::ops::{gradient, radial_power};

/// Column order of `diagnostics.csv`.
pub const CSV_COLUMNS: [&str; 16] = [
    "t",
    "energy_u",
    "energy_b",
    "X",
    "diss_u",
    "diff_b",
    "hbeta_b",
    "h2beta_b",
    "lp2_w",
    "lp4_w",
    "lp8_w",
    "linf_w",
    "linf_grad_u",
    "int_diss_u",
    "int_diff_b",
    "int_hbeta_j",
];

/// One time sample of the monitored norms.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    /// `‖u‖²_{L²}`
    pub energy_u: f64,
    /// `‖b‖²_{L²}`
    pub energy_b: f64,
    /// `‖w‖²_{L²} + ‖j‖²_{L²}`
    #[serde(rename = "X")]
    pub x: f64,
    /// `‖Λ^α u‖²_{L²}`
    pub diss_u: f64,
    /// `‖Λ^β b‖²_{L²}`
    pub diff_b: f64,
    pub hbeta_b: f64,
    /// `‖Λ^{2β} b‖²_{L²}`
    pub h2beta_b: f64,
    pub lp2_w: f64,
    pub lp4_w: f64,
    pub lp8_w: f64,
    pub linf_w: f64,
    pub linf_grad_u: f64,
    pub int_diss_u: f64,
    pub int_diff_b: f64,
    /// `∫₀ᵗ ‖Λ^β j‖²_{L²}`
    pub int_hbeta_j: f64,
}

impl DiagnosticsRecord {
    pub fn values(&self) -> [f64; 16] {
        [
            self.t,
            self.energy_u,
            self.energy_b,
            self.x,
            self.diss_u,
            self.diff_b,
            self.hbeta_b,
            self.h2beta_b,
            self.lp2_w,
            self.lp4_w,
            self.lp8_w,
            self.linf_w,
            self.linf_grad_u,
            self.int_diss_u,
            self.int_diff_b,
            self.int_hbeta_j,
        ]
    }

    pub fn from_values(v: [f64; 16]) -> Self {
        DiagnosticsRecord {
            t: v[0],
            energy_u: v[1],
            energy_b: v[2],
            x: v[3],
            diss_u: v[4],
            diff_b: v[5],
            hbeta_b: v[6],
            h2beta_b: v[7],
            lp2_w: v[8],
            lp4_w: v[9],
            lp8_w: v[10],
            linf_w: v[11],
            linf_grad_u: v[12],
            int_diss_u: v[13],
            int_diff_b: v[14],
            int_hbeta_j: v[15],
        }
    }

    pub fn total_energy(&self) -> f64 {
        self.energy_u + self.energy_b
    }
}

/// Running time integrals of `‖Λ^α u‖²`, `‖Λ^β b‖²` and `‖Λ^β j‖²`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TimeIntegrals {
    pub diss_u: f64,
    pub diff_b: f64,
    pub hbeta_j: f64,
}

/// `Σ m(ξ)|F(ξ)|²` normalized to the torus, restricted to `ξ ≠ 0`.
fn energy(f: &SpectralField, s: f64) -> f64 {
    f.weighted_energy(|k1, k2| if k1 == 0 && k2 == 0 { 0.0 } else { radial_power(k1, k2, s) })
}

/// Computes every instantaneous quantity of a record; `integrals` supplies
/// the cumulative columns.
pub fn compute_record(
    state: &MHDState,
    config: &SolverConfig,
    integrals: TimeIntegrals,
) -> Result<DiagnosticsRecord> {
    let (w, j) = (state.w(), state.j());
    let (a, b) = (config.alpha, config.beta);
    let energy_u = energy(w, -2.0);
    let energy_b = energy(j, -2.0);
    let lp2_w = w.l2_norm_sq();
    let x = lp2_w + j.l2_norm_sq();
    let diss_u = energy(w, 2.0 * a - 2.0);
    let diff_b = energy(j, 2.0 * b - 2.0);
    let h2beta_b = energy(j, 4.0 * b - 2.0);

    let ws = oversampled(w)?;
    let [u1, u2] = state.velocity();
    let [g11, g12] = gradient(&u1);
    let [g21, g22] = gradient(&u2);
    let grad = magnitude(&[&g11, &g12, &g21, &g22])?;

    let record = DiagnosticsRecord {
        t: state.t,
        energy_u,
        energy_b,
        x,
        diss_u,
        diff_b,
        hbeta_b: diff_b,
        h2beta_b,
        lp2_w: lp2_w.sqrt(),
        lp4_w: ws.lp_norm(4.0),
        lp8_w: ws.lp_norm(8.0),
        linf_w: ws.max_abs(),
        linf_grad_u: grad.max_abs(),
        int_diss_u: integrals.diss_u,
        int_diff_b: integrals.diff_b,
        int_hbeta_j: integrals.hbeta_j,
    };
    if record.values().iter().any(|v| !v.is_finite()) {
        return Err(Error::Aborted { t: state.t, reason: "non-finite diagnostic".into() });
    }
    Ok(record)
}

/// Integrands of [`TimeIntegrals`] and their time derivatives at one instant.
#[derive(Clone, Copy, Debug)]
struct Integrands {
    t: f64,
    value: [f64; 3],
    rate: [f64; 3],
}

/// Advances [`TimeIntegrals`] step by step with the two-point Hermite rule
///
/// ```text
/// ∫ f ≈ h/2·(f₀ + f₁) + h²/12·(f₀' − f₁')
/// ```
///
/// using exact time derivatives from the right-hand side, which keeps the
/// quadrature error at `O(h⁴)` and matches the time-stepping order.
#[derive(Clone, Debug, Default)]
pub struct BudgetQuadrature {
    last: Option<Integrands>,
    totals: TimeIntegrals,
    /// `|ξ|^{2α−2}`, `|ξ|^{2β−2}` and `|ξ|^{2β}` per coefficient, built on
    /// first use.
    weights: Option<[Vec<f64>; 3]>,
}

impl BudgetQuadrature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn totals(&self) -> TimeIntegrals {
        self.totals
    }

    /// Adds a sample at `state.t`; `rate` is the nonlinear part of the
    /// state's time derivative and `damping` the `[ν|ξ|^{2α}, η|ξ|^{2β}]`
    /// arrays in coefficient order.
    pub fn observe(
        &mut self,
        state: &MHDState,
        rate: &(SpectralField, SpectralField),
        damping: &[Vec<f64>; 2],
        config: &SolverConfig,
    ) {
        let grid = state.grid();
        if self.weights.as_ref().is_none_or(|w| w[0].len() != grid.len()) {
            let weight = |s: f64| -> Vec<f64> {
                (0..grid.len())
                    .map(|i| {
                        let (k1, k2) = grid.wavevector(i);
                        let q = (k1 * k1 + k2 * k2) as f64;
                        if q == 0.0 { 0.0 } else { q.powf(s - 1.0) }
                    })
                    .collect()
            };
            self.weights = Some([weight(config.alpha), weight(config.beta), weight(config.beta + 1.0)]);
        }
        let [wu, wb, wj] = self.weights.as_ref().expect("weights built above");
        let (w, j) = (state.w().coefficients(), state.j().coefficients());
        let (nw, nj) = (rate.0.coefficients(), rate.1.coefficients());
        let mut value = [0.0; 3];
        let mut dvalue = [0.0; 3];
        for i in 1..grid.len() {
            let (cw, cj) = (w[i], j[i]);
            if cw.norm_sqr() == 0.0 && cj.norm_sqr() == 0.0 {
                continue;
            }
            let (mu, mb, mj) = (wu[i], wb[i], wj[i]);
            let dw = nw[i] - cw * damping[0][i];
            let dj = nj[i] - cj * damping[1][i];
            value[0] += mu * cw.norm_sqr();
            value[1] += mb * cj.norm_sqr();
            value[2] += mj * cj.norm_sqr();
            dvalue[0] += 2.0 * mu * (cw.conj() * dw).re;
            dvalue[1] += 2.0 * mb * (cj.conj() * dj).re;
            dvalue[2] += 2.0 * mj * (cj.conj() * dj).re;
        }
        let len = grid.len() as f64;
        let norm = 4.0 * std::f64::consts::PI.powi(2) / (len * len);
        let now = Integrands { t: state.t, value: value.map(|v| v * norm), rate: dvalue.map(|v| v * norm) };
        if let Some(prev) = self.last {
            let h = now.t - prev.t;
            let step = |k: usize| {
                0.5 * h * (prev.value[k] + now.value[k]) + h * h / 12.0 * (prev.rate[k] - now.rate[k])
            };
            self.totals.diss_u += step(0);
            self.totals.diff_b += step(1);
            self.totals.hbeta_j += step(2);
        }
        self.last = Some(now);
    }
}
