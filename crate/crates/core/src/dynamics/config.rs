use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::TorusGrid;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntegratorKind {
    /// Integrating-factor classical Runge–Kutta 4.
    IfRk4,
}

impl IntegratorKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            IntegratorKind::IfRk4 => "if-rk4",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitKind {
    OrszagTang,
    RandomBand,
}

impl InitKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            InitKind::OrszagTang => "orszag-tang",
            InitKind::RandomBand => "random-band",
        }
    }
}

/// Which global-regularity hypothesis set a parameter point falls into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    /// `ν = 0, η > 0, α = 0, β > 3/2`
    #[serde(rename = "theorem-1.1")]
    Theorem11,
    /// `ν, η > 0, α ∈ (0, 1/2), β ∈ (5/4, 3/2], α + 2β > 3`
    #[serde(rename = "theorem-1.2")]
    Theorem12,
    /// `ν, η > 0, α ≥ 1/2, β ≥ 1`
    #[serde(rename = "theorem-5.1")]
    Theorem51,
    #[serde(rename = "outside")]
    Outside,
}

impl Regime {
    pub fn classify(alpha: f64, beta: f64, nu: f64, eta: f64) -> Regime {
        if nu == 0.0 && eta > 0.0 && alpha == 0.0 && beta > 1.5 {
            Regime::Theorem11
        } else if nu > 0.0
            && eta > 0.0
            && alpha > 0.0
            && alpha < 0.5
            && beta > 1.25
            && beta <= 1.5
            && alpha + 2.0 * beta > 3.0
        {
            Regime::Theorem12
        } else if nu > 0.0 && eta > 0.0 && alpha >= 0.5 && beta >= 1.0 {
            Regime::Theorem51
        } else {
            Regime::Outside
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Theorem11 => "theorem-1.1",
            Regime::Theorem12 => "theorem-1.2",
            Regime::Theorem51 => "theorem-5.1",
            Regime::Outside => "outside",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub alpha: f64,
    pub beta: f64,
    pub nu: f64,
    pub eta: f64,
    pub n: usize,
    pub dt: f64,
    pub t_end: f64,
    pub output_every: usize,
    pub integrator: IntegratorKind,
    pub seed: u64,
    pub init: InitKind,
    pub amplitude: f64,
    pub band: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            alpha: 0.0,
            beta: 1.6,
            nu: 0.0,
            eta: 1.0,
            n: 256,
            dt: 2.5e-4,
            t_end: 1.0,
            output_every: 40,
            integrator: IntegratorKind::IfRk4,
            seed: 0,
            init: InitKind::OrszagTang,
            amplitude: 1.0,
            band: 8,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta), ("nu", self.nu), ("eta", self.eta)] {
            if !v.is_finite() || v < 0.0 {
                return bad(format!("{name} = {v} must be finite and >= 0"));
            }
        }
        if self.nu == 0.0 && self.alpha != 0.0 {
            return bad(format!("alpha = {} with nu = 0; alpha must be recorded as 0", self.alpha));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return bad(format!("dt = {} must be > 0", self.dt));
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return bad(format!("t_end = {} must be >= 0", self.t_end));
        }
        if self.output_every == 0 {
            return bad("output_every must be >= 1".into());
        }
        if !(self.amplitude.is_finite() && self.amplitude >= 0.0) {
            return bad(format!("amplitude = {} must be >= 0", self.amplitude));
        }
        TorusGrid::new(self.n)?;
        if self.init == InitKind::RandomBand && 3 * self.band > self.n {
            return Err(Error::BandTooHigh { band: self.band, cutoff: self.n / 3 });
        }
        Ok(())
    }

    pub fn regime(&self) -> Regime {
        Regime::classify(self.alpha, self.beta, self.nu, self.eta)
    }

    /// Damping rate of the vorticity equation at wavevector `ξ`. The
    /// exponent is irrelevant when `ν = 0`.
    pub fn velocity_damping(&self, k1: i64, k2: i64) -> f64 {
        if self.nu == 0.0 {
            0.0
        } else {
            self.nu * crate::ops::radial_power(k1, k2, 2.0 * self.alpha)
        }
    }

    pub fn magnetic_damping(&self, k1: i64, k2: i64) -> f64 {
        if self.eta == 0.0 {
            0.0
        } else {
            self.eta * crate::ops::radial_power(k1, k2, 2.0 * self.beta)
        }
    }

    /// Notes for run metadata on settings outside every regularity regime.
    pub fn flags(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.nu == 0.0 {
            out.push("inviscid velocity (nu = 0)".to_string());
        }
        if self.eta == 0.0 || self.beta == 0.0 {
            out.push("no fractional magnetic diffusion (eta = 0 or beta = 0)".to_string());
        }
        if self.regime() == Regime::Outside {
            out.push("parameters outside the global-regularity hypotheses".to_string());
        }
        out
    }
}
