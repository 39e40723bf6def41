use serde::Serialize;

use crate::diagnostics::budget::energy_budget_residual;
use crate::diagnostics::record::DiagnosticsRecord;
use crate::dynamics::{MHDState, Regime, Sample, SolverConfig};
use crate::ops::radial_power;

/// Relative rise over the initial value above which a quantity whose
/// maximum falls on the last sample is classified as growing.
pub const GROWTH_THRESHOLD: f64 = 0.01;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct QuantitySummary {
    pub name: String,
    pub sup: f64,
    pub t_at_sup: f64,
    pub initial: f64,
    pub last: f64,
    /// `"bounded"` or `"growing"`.
    pub growth: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RegimeReport {
    pub regime: Regime,
    pub flags: Vec<String>,
    pub samples: usize,
    pub t_final: f64,
    pub quantities: Vec<QuantitySummary>,
    /// Intermediate exponent `γ = β + α/2 ∈ (β, α + β)`, reported for the
    /// `theorem-1.2` regime only, with the flag `γ + β > 3`.
    pub gamma: Option<f64>,
    pub gamma_plus_beta_above_3: Option<bool>,
    pub budget_residual: Option<f64>,
}

#[derive(Clone, Debug)]
struct Track {
    name: &'static str,
    sup: f64,
    t_at_sup: f64,
    initial: Option<f64>,
    last: f64,
}

impl Track {
    fn new(name: &'static str) -> Self {
        Track { name, sup: f64::NEG_INFINITY, t_at_sup: 0.0, initial: None, last: 0.0 }
    }

    fn push(&mut self, t: f64, v: f64) {
        if self.initial.is_none() {
            self.initial = Some(v);
        }
        if v > self.sup {
            self.sup = v;
            self.t_at_sup = t;
        }
        self.last = v;
    }

    fn summary(&self) -> QuantitySummary {
        let initial = self.initial.unwrap_or(0.0);
        let sup = if self.initial.is_some() { self.sup } else { 0.0 };
        let growing = self.initial.is_some() && self.last == sup && sup > initial * (1.0 + GROWTH_THRESHOLD) && sup > 0.0;
        QuantitySummary {
            name: self.name.to_string(),
            sup,
            t_at_sup: self.t_at_sup,
            initial,
            last: self.last,
            growth: if growing { "growing" } else { "bounded" }.to_string(),
        }
    }
}

/// Accumulates the run summary sample by sample so that states need not be
/// retained.
#[derive(Clone, Debug)]
pub struct RegimeTracker {
    config: SolverConfig,
    gamma: Option<f64>,
    tracks: Vec<Track>,
    records: Vec<DiagnosticsRecord>,
}

impl RegimeTracker {
    pub fn new(config: &SolverConfig) -> Self {
        let gamma = (config.regime() == Regime::Theorem12).then(|| config.beta + 0.5 * config.alpha);
        let mut tracks = vec![
            Track::new("X"),
            Track::new("energy"),
            Track::new("hbeta_b"),
            Track::new("linf_w"),
            Track::new("linf_grad_u"),
        ];
        if gamma.is_some() {
            tracks.push(Track::new("hgamma_b"));
        }
        RegimeTracker { config: config.clone(), gamma, tracks, records: Vec::new() }
    }

    pub fn observe(&mut self, state: &MHDState, record: &DiagnosticsRecord) {
        let t = record.t;
        let values = [record.x, record.total_energy(), record.hbeta_b, record.linf_w, record.linf_grad_u];
        for (track, v) in self.tracks.iter_mut().zip(values) {
            track.push(t, v);
        }
        if let Some(gamma) = self.gamma {
            // ‖Λ^γ b‖ = ‖Λ^{γ−1} j‖ for divergence-free b
            let e = state
                .j()
                .weighted_energy(|k1, k2| if k1 == 0 && k2 == 0 { 0.0 } else { radial_power(k1, k2, 2.0 * gamma - 2.0) });
            self.tracks[5].push(t, e.sqrt());
        }
        self.records.push(record.clone());
    }

    pub fn records(&self) -> &[DiagnosticsRecord] {
        &self.records
    }

    pub fn report(&self) -> RegimeReport {
        RegimeReport {
            regime: self.config.regime(),
            flags: self.config.flags(),
            samples: self.records.len(),
            t_final: self.records.last().map_or(0.0, |r| r.t),
            quantities: self.tracks.iter().map(Track::summary).collect(),
            gamma: self.gamma,
            gamma_plus_beta_above_3: self.gamma.map(|g| g + self.config.beta > 3.0),
            budget_residual: energy_budget_residual(&self.records, &self.config).ok(),
        }
    }
}

pub fn regime_report(series: &[Sample], config: &SolverConfig) -> RegimeReport {
    let mut tracker = RegimeTracker::new(config);
    for s in series {
        tracker.observe(&s.state, &s.record);
    }
    tracker.report()
}
