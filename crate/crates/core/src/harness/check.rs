//! Property suites behind `mhd2d check`.
//!
//! Each property yields a [`CheckItem`] with a pass flag, a short detail and
//! any empirical constants measured along the way. Ensembles draw their
//! fields from a ChaCha8 stream keyed by the suite seed and the ensemble
//! member, so a seed fixes the whole report.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::diagnostics::{commutator_ratio, cz_ratio, energy_budget_residual, gn_ratio, positivity_check, CommutatorExponents};
use crate::dynamics::{primitive_rhs, vorticity_rhs, MHDState, PrimitiveState, Run, SolverConfig};
use crate::error::{Error, Result};
use crate::field::{RealField, SpectralField};
use crate::grid::TorusGrid;
use crate::lp::{
    bernstein_ratio, besov_norm, bony_decompose, build_partition, dyadic_block, log_inequality_ratio,
    product_estimate_ratio, sobolev_norm, BesovSpec, DyadicPartition,
};
use crate::ops::{biot_savart, curl, divergence, leray_project};
use crate::random::{annulus_field, band_limited_field};

pub const REPORT_FILE: &str = "check_report.json";
/// Members of every random ensemble.
pub const ENSEMBLE: usize = 100;
/// Allowed ratio between ensemble maxima at `n = 128` and `n = 256`.
pub const RESOLUTION_FACTOR: f64 = 2.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Lp,
    Inequalities,
    Dynamics,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Suite::All),
            "lp" => Ok(Suite::Lp),
            "inequalities" => Ok(Suite::Inequalities),
            "dynamics" => Ok(Suite::Dynamics),
            _ => Err(Error::InvalidArgument(format!("unknown suite {s:?} (all | lp | inequalities | dynamics)"))),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CheckItem {
    pub suite: String,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub constants: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CheckReport {
    pub suite: String,
    pub seed: u64,
    pub passed: bool,
    pub items: Vec<CheckItem>,
}

struct Collector {
    suite: &'static str,
    items: Vec<CheckItem>,
}

impl Collector {
    fn push(&mut self, name: &str, passed: bool, detail: String, constants: &[(&str, f64)]) {
        self.items.push(CheckItem {
            suite: self.suite.to_string(),
            name: name.to_string(),
            passed,
            detail,
            constants: constants.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        });
    }

    /// Records a property whose evaluation itself failed.
    fn record(&mut self, name: &str, outcome: Result<()>) {
        if let Err(e) = outcome {
            self.push(name, false, format!("error: {e}"), &[]);
        }
    }
}

/// Deterministic generator for ensemble member `k` of property `tag`.
pub fn member_rng(seed: u64, tag: u64, k: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(tag.wrapping_mul(1 << 20).wrapping_add(k as u64));
    rng
}

fn grid(n: usize) -> Result<Arc<TorusGrid>> {
    TorusGrid::new(n)
}

/// Running extremes of an ensemble.
#[derive(Clone, Copy, Debug)]
pub struct Extremes {
    pub min: f64,
    pub max: f64,
    pub finite: bool,
}

impl Default for Extremes {
    fn default() -> Self {
        Extremes { min: f64::INFINITY, max: f64::NEG_INFINITY, finite: true }
    }
}

impl Extremes {
    pub fn add(&mut self, v: f64) {
        self.finite &= v.is_finite();
        self.min = self.min.min(v);
        self.max = self.max.max(v);
    }
}

/// Whether two ensemble maxima agree within [`RESOLUTION_FACTOR`].
pub fn resolution_stable(a: f64, b: f64) -> bool {
    a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite() && (a / b).max(b / a) <= RESOLUTION_FACTOR
}

// ---------------------------------------------------------------- lp suite

fn lp_suite(seed: u64, c: &mut Collector) {
    for n in [64, 256] {
        let r = partition_checks(n, c);
        c.record("partition", r);
    }
    let r = reconstruction_checks(seed, c);
    c.record("reconstruction", r);
    let r = bony_checks(seed, c);
    c.record("bony", r);
    let r = bernstein_checks(seed, c);
    c.record("bernstein", r);
    let r = besov_equivalence(seed, c);
    c.record("besov-equivalence", r);
}

fn partition_checks(n: usize, c: &mut Collector) -> Result<()> {
    let g = grid(n)?;
    let p = build_partition(&g);
    let (mut unity, mut inhom, mut overlap) = (0.0_f64, 0.0_f64, 0usize);
    for i in 0..g.len() {
        let s: f64 = p.range().map(|j| p.multiplier(j).unwrap()[i]).sum();
        if i != 0 {
            unity = unity.max((s - 1.0).abs());
        }
        inhom = inhom.max((s + p.low_multiplier()[i] - 1.0).abs());
        overlap = overlap.max(p.overlap_count(i));
    }
    c.push(
        &format!("partition-of-unity-n{n}"),
        unity < 1e-14 && inhom < 1e-14,
        format!("homogeneous residual {unity:e}, inhomogeneous residual {inhom:e}"),
        &[("residual", unity.max(inhom))],
    );
    c.push(&format!("partition-overlap-n{n}"), overlap <= 2, format!("at most {overlap} blocks overlap"), &[]);
    Ok(())
}

fn reconstruction_checks(seed: u64, c: &mut Collector) -> Result<()> {
    let g = grid(64)?;
    let p = build_partition(&g);
    let (mut hom, mut inhom, mut disjoint) = (0.0_f64, 0.0_f64, true);
    for k in 0..10 {
        let f = band_limited_field(&g, 31, 1.0, &mut member_rng(seed, 1, k))?;
        let mut acc = SpectralField::zeros(&g);
        for j in p.range() {
            acc = acc.add(&dyadic_block(&f, j, &p, true))?;
        }
        hom = hom.max(acc.sub(&f)?.l2_norm() / f.l2_norm());
        // inhomogeneous family applied to f plus a constant
        let mut shifted = f.clone();
        shifted.coefficients_mut()[0] = Complex64::new(0.7 * g.len() as f64, 0.0);
        let mut acc = SpectralField::zeros(&g);
        for j in -1..=p.j_max() {
            acc = acc.add(&dyadic_block(&shifted, j, &p, false))?;
        }
        inhom = inhom.max(acc.sub(&shifted)?.l2_norm() / shifted.l2_norm());
        for j in p.range() {
            for l in p.range().filter(|l| (l - j).abs() >= 2) {
                let b = dyadic_block(&dyadic_block(&f, j, &p, true), l, &p, true);
                disjoint &= b.max_abs_coeff() == 0.0;
            }
        }
    }
    c.push(
        "reconstruction",
        hom < 1e-12 && inhom < 1e-12,
        format!("homogeneous {hom:e}, inhomogeneous {inhom:e}"),
        &[("homogeneous", hom), ("inhomogeneous", inhom)],
    );
    c.push("block-disjointness", disjoint, "products of blocks with |j - k| >= 2 vanish exactly".into(), &[]);
    Ok(())
}

fn bony_checks(seed: u64, c: &mut Collector) -> Result<()> {
    let g = grid(64)?;
    let p = build_partition(&g);
    let mut worst = 0.0_f64;
    for k in 0..10 {
        let mut rng = member_rng(seed, 2, k);
        let f = band_limited_field(&g, 21, 1.0, &mut rng)?;
        let h = band_limited_field(&g, 21, 1.0, &mut rng)?;
        worst = worst.max(bony_decompose(&f, &h, &p)?.reconstruction_error()?);
    }
    c.push("bony-reconstruction", worst < 1e-10, format!("max relative error {worst:e}"), &[("max_error", worst)]);
    Ok(())
}

fn bernstein_checks(seed: u64, c: &mut Collector) -> Result<()> {
    let g = grid(64)?;
    let j = 3;
    let lam = 2f64.powi(j);
    for k in [1, 2] {
        let mut e = Extremes::default();
        for m in 0..ENSEMBLE {
            let f = annulus_field(&g, 0.75 * lam, 1.5 * lam, &mut member_rng(seed, 3, m))?;
            let r = bernstein_ratio(&f, j, k)?;
            e.add(r.l2);
            e.add(r.linf);
        }
        c.push(
            &format!("bernstein-k{k}"),
            e.finite && e.min >= 0.25 && e.max <= 4.0,
            format!("annulus ratios in [{:e}, {:e}]", e.min, e.max),
            &[("min", e.min), ("max", e.max)],
        );
    }
    Ok(())
}

fn besov_equivalence(seed: u64, c: &mut Collector) -> Result<()> {
    let g = grid(64)?;
    let p = build_partition(&g);
    let mut b0 = Extremes::default();
    let mut hs = Extremes::default();
    for m in 0..ENSEMBLE {
        let f = band_limited_field(&g, 21, 1.0, &mut member_rng(seed, 4, m))?;
        b0.add(besov_norm(&f, &BesovSpec::new(0.0, 2.0, 2.0, true)?, &p)? / f.l2_norm());
        hs.add(besov_norm(&f, &BesovSpec::new(1.5, 2.0, 2.0, true)?, &p)? / sobolev_norm(&f, 1.5, true)?);
    }
    let c0 = b0.max.max(1.0 / b0.min);
    let cs = hs.max.max(1.0 / hs.min);
    c.push(
        "besov-l2-equivalence",
        b0.finite && hs.finite && b0.min > 0.0 && hs.min > 0.0,
        format!("B^0_22/L2 in [{:e}, {:e}]; B^1.5_22/H^1.5 in [{:e}, {:e}]", b0.min, b0.max, hs.min, hs.max),
        &[("c_b0_l2", c0), ("c_b15_h15", cs)],
    );
    Ok(())
}

// ------------------------------------------------------ inequalities suite

/// Ensemble band shared by both resolutions, so each member is the same
/// function on both grids.
const BAND: usize = 16;

fn member(seed: u64, tag: u64, k: usize, n: usize) -> Result<SpectralField> {
    band_limited_field(&grid(n)?, BAND, 1.0, &mut member_rng(seed, tag, k))
}

fn two_resolutions(
    c: &mut Collector,
    name: &str,
    seed: u64,
    tag: u64,
    eval: &dyn Fn(&SpectralField, &DyadicPartition, u64, usize) -> Result<f64>,
) -> Result<()> {
    let mut maxima = Vec::new();
    for n in [128, 256] {
        let p = build_partition(&grid(n)?);
        let mut e = Extremes::default();
        for k in 0..ENSEMBLE {
            e.add(eval(&member(seed, tag, k, n)?, &p, seed, k)?);
        }
        maxima.push(e);
    }
    let (a, b) = (maxima[0], maxima[1]);
    c.push(
        name,
        a.finite && b.finite && resolution_stable(a.max, b.max),
        format!("ensemble max {:e} at n = 128, {:e} at n = 256", a.max, b.max),
        &[("max_n128", a.max), ("max_n256", b.max), ("min_n256", b.min)],
    );
    Ok(())
}

fn inequality_suite(seed: u64, c: &mut Collector) {
    // positivity: squares of band-limited fields are nonnegative and band ≤ 2·BAND/2
    let r = (|| -> Result<()> {
        let g = grid(128)?;
        let (mut worst, mut eq2) = (f64::NEG_INFINITY, 0.0_f64);
        for k in 0..ENSEMBLE {
            let h = band_limited_field(&g, BAND / 2, 1.0, &mut member_rng(seed, 10, k))?;
            let f = h.inverse().map(|v| v * v).forward()?;
            let (l, r) = positivity_check(&f, 4, 0.5)?;
            worst = worst.max((l - r) / r);
            let (l2, r2) = positivity_check(&h, 2, 0.5)?;
            eq2 = eq2.max((l2 - r2).abs() / r2);
        }
        c.push(
            "positivity-p4",
            worst <= 1e-10,
            format!("max (lhs - rhs)/rhs = {worst:e}"),
            &[("max_relative_excess", worst)],
        );
        c.push("positivity-p2-equality", eq2 <= 1e-12, format!("max deviation {eq2:e}"), &[("max_deviation", eq2)]);
        Ok(())
    })();
    c.record("positivity", r);

    let r = (|| -> Result<()> {
        let mut worst = 0.0_f64;
        for k in 0..ENSEMBLE {
            let w = member(seed, 11, k, 128)?;
            worst = worst.max((cz_ratio(&w, 2.0)? - 1.0).abs());
        }
        c.push("cz-p2-identity", worst <= 1e-12, format!("max |ratio - 1| = {worst:e}"), &[("max_deviation", worst)]);
        for p in [4.0, 8.0] {
            two_resolutions(c, &format!("cz-p{p}"), seed, 11, &|w, _, _, _| cz_ratio(w, p))?;
        }
        Ok(())
    })();
    c.record("cz", r);

    let r = (|| -> Result<()> {
        two_resolutions(c, "gn-beta1.6", seed, 12, &|f, _, _, _| gn_ratio(f, 1.6))?;
        let mut worst = 0.0_f64;
        for k in 0..10 {
            let f = member(seed, 12, k, 128)?;
            let a = gn_ratio(&f, 1.6)?;
            worst = worst.max((gn_ratio(&f.scale(37.5), 1.6)? - a).abs() / a);
            worst = worst.max((cz_ratio(&f.scale(37.5), 4.0)? - cz_ratio(&f, 4.0)?).abs());
        }
        c.push("scale-invariance", worst <= 1e-13, format!("max relative change {worst:e}"), &[("max_change", worst)]);
        Ok(())
    })();
    c.record("gn", r);

    let e = CommutatorExponents { p: 2.0, p1: f64::INFINITY, p2: 2.0, p3: 2.0, p4: f64::INFINITY };
    for s in [1.0, 1.5, 2.0] {
        let r = two_resolutions(c, &format!("commutator-s{s}"), seed, 13, &|f, _, seed, k| {
            let g = band_limited_field(f.grid(), BAND, 1.0, &mut member_rng(seed, 14, k))?;
            commutator_ratio(f, &g, s, e)
        });
        c.record("commutator", r);
    }
    let r = (|| -> Result<()> {
        let f = member(seed, 13, 0, 128)?;
        let g = band_limited_field(f.grid(), BAND, 1.0, &mut member_rng(seed, 14, 0))?;
        let a = commutator_ratio(&f, &g, 1.5, e)?;
        let b = commutator_ratio(&f.scale(8.0), &g.scale(0.02), 1.5, e)?;
        let d = (a - b).abs() / a;
        c.push("commutator-scale-invariance", d <= 1e-13, format!("relative change {d:e}"), &[("change", d)]);
        Ok(())
    })();
    c.record("commutator", r);

    let r = (|| -> Result<()> {
        two_resolutions(c, "product-half-half", seed, 15, &|f, _, seed, k| {
            let g = band_limited_field(f.grid(), BAND, 1.0, &mut member_rng(seed, 16, k))?;
            product_estimate_ratio(f, &g, 0.5, 0.5)
        })?;
        let f = member(seed, 15, 0, 128)?;
        let g = member(seed, 16, 0, 128)?;
        let a = product_estimate_ratio(&f, &g, 0.5, 0.5)?;
        let b = product_estimate_ratio(&f.scale(10.0), &g.scale(10.0), 0.5, 0.5)?;
        let d = (a - b).abs() / a;
        c.push("product-scale-invariance", d <= 1e-13, format!("relative change {d:e}"), &[("change", d)]);
        Ok(())
    })();
    c.record("product", r);

    let r = (|| -> Result<()> {
        two_resolutions(c, "log-inequality-s3", seed, 17, &|w, p, _, _| Ok(log_inequality_ratio(w, 3.0, p)?.ratio))?;
        let g = grid(128)?;
        let p = build_partition(&g);
        let w = member(seed, 17, 0, 128)?;
        let mut e = Extremes::default();
        for k in 0..=6 {
            e.add(log_inequality_ratio(&w.scale(10f64.powi(k)), 3.0, &p)?.ratio);
        }
        c.push(
            "log-inequality-amplitude",
            e.finite && e.max < 1.0,
            format!("ratios in [{:e}, {:e}] for amplitudes 1 to 1e6", e.min, e.max),
            &[("max", e.max)],
        );
        Ok(())
    })();
    c.record("log-inequality", r);
}

// ---------------------------------------------------------- dynamics suite

/// Random state with independent band-limited `w`, `j`.
pub fn random_state(n: usize, band: usize, rng: &mut ChaCha8Rng) -> Result<MHDState> {
    let g = grid(n)?;
    let w = band_limited_field(&g, band, 1.0, rng)?;
    let j = band_limited_field(&g, band, 1.0, rng)?;
    MHDState::new(0.0, w, j)
}

/// Largest coefficient difference between `curl(primitive_rhs)` and the
/// vorticity-form right-hand side (both without dissipation), relative to
/// the largest coefficient of the latter.
pub fn formulation_error(state: &MHDState) -> Result<f64> {
    let cfg = SolverConfig { n: state.grid().n(), nu: 0.0, eta: 0.0, ..Default::default() };
    let d = primitive_rhs(&PrimitiveState::from_state(state), &cfg)?;
    let (cw, cj) = d.curls()?;
    let (dw, dj) = vorticity_rhs(state)?;
    let scale = dw.max_abs_coeff().max(dj.max_abs_coeff()) / state.grid().len() as f64;
    let diff = cw.max_mode_difference(&dw)?.max(cj.max_mode_difference(&dj)?);
    Ok(if scale > 0.0 { diff / scale } else { diff })
}

fn dynamics_suite(seed: u64, c: &mut Collector) {
    let r = (|| -> Result<()> {
        let mut e = (0.0_f64, 0.0_f64, 0.0_f64);
        for n in [64, 256] {
            let g = grid(n)?;
            for k in 0..4 {
                let mut rng = member_rng(seed, 20, k);
                let f = band_limited_field(&g, n / 2 - 1, 1.0, &mut rng)?;
                let x = f.inverse();
                let back = x.forward()?.inverse();
                let scale = x.max_abs();
                let rt = x.samples().iter().zip(back.samples()).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs())) / scale;
                let pars = (x.lp_norm(2.0).powi(2) - f.l2_norm_sq()).abs() / f.l2_norm_sq();
                let [u1, u2] = biot_savart(&f)?;
                let bs = curl(&u1, &u2)?.max_mode_difference(&f)? * g.len() as f64 / f.max_abs_coeff();
                let v = band_limited_field(&g, n / 2 - 1, 1.0, &mut rng)?;
                let [p1, p2] = leray_project(&f, &v)?;
                let [q1, q2] = leray_project(&p1, &p2)?;
                let idem = q1.max_mode_difference(&p1)?.max(q2.max_mode_difference(&p2)?) * g.len() as f64
                    / p1.max_abs_coeff().max(p2.max_abs_coeff());
                let div = divergence(&p1, &p2)?.max_abs_coeff() / (p1.max_abs_coeff().max(p2.max_abs_coeff()) * n as f64);
                e.0 = e.0.max(rt).max(pars);
                e.1 = e.1.max(bs);
                e.2 = e.2.max(idem).max(div);
            }
        }
        c.push(
            "spectral-identities",
            e.0 < 1e-12 && e.1 < 1e-12 && e.2 < 1e-12,
            format!("round trip/Parseval {:e}, Biot-Savart {:e}, Leray {:e}", e.0, e.1, e.2),
            &[("transform", e.0), ("biot_savart", e.1), ("leray", e.2)],
        );
        Ok(())
    })();
    c.record("spectral-identities", r);

    let r = (|| -> Result<()> {
        let mut worst = 0.0_f64;
        for k in 0..50 {
            let s = random_state(128, 42, &mut member_rng(seed, 21, k))?;
            worst = worst.max(formulation_error(&s)?);
        }
        c.push("formulation-equivalence", worst < 1e-10, format!("max spectral error {worst:e}"), &[("max_error", worst)]);
        Ok(())
    })();
    c.record("formulation-equivalence", r);

    let r = (|| -> Result<()> {
        let cfg = SolverConfig {
            alpha: 0.5,
            beta: 1.0,
            nu: 0.05,
            eta: 0.05,
            n: 64,
            dt: 2e-3,
            t_end: 0.5,
            output_every: 25,
            ..Default::default()
        };
        let init = random_state(64, 6, &mut member_rng(seed, 22, 0))?;
        let records: Vec<_> = Run::new(&cfg, init.clone())?
            .map(|s| s.map(|s| s.record).map_err(|a| a.error))
            .collect::<Result<_>>()?;
        let residual = energy_budget_residual(&records, &cfg)?;
        c.push("energy-budget", residual < 1e-6, format!("residual {residual:e}"), &[("residual", residual)]);

        let again: Vec<_> = Run::new(&cfg, init)?.map(|s| s.map(|s| s.record).map_err(|a| a.error)).collect::<Result<_>>()?;
        let same = records.iter().zip(&again).all(|(a, b)| a.values().map(f64::to_bits) == b.values().map(f64::to_bits));
        c.push("determinism", same && records.len() == again.len(), "rerun gives bit-identical records".into(), &[]);
        Ok(())
    })();
    c.record("energy-budget", r);

    let r = (|| -> Result<()> {
        let g = grid(32)?;
        let j = RealField::from_fn(&g, |x, _| 2.0 * (2.0 * x).cos()).forward()?;
        let s = MHDState::new(0.0, SpectralField::zeros(&g), j.clone())?;
        let cfg = SolverConfig { n: 32, beta: 1.0, eta: 1.0, dt: 0.01, t_end: 0.3, output_every: 10, ..Default::default() };
        let mut worst = 0.0_f64;
        let mut mean_free = true;
        for sample in Run::new(&cfg, s)? {
            let sample = sample.map_err(|a| a.error)?;
            let exact = j.scale((-4.0 * sample.state.t).exp());
            worst = worst.max(sample.state.j().max_mode_difference(&exact)? / j.mode(2, 0).norm());
            mean_free &= sample.state.w().has_zero_mean() && sample.state.j().has_zero_mean();
        }
        c.push("pure-diffusion-decay", worst < 1e-10, format!("max relative error {worst:e}"), &[("max_error", worst)]);
        c.push("mean-modes-zero", mean_free, "mean coefficients stay exactly zero".into(), &[]);
        Ok(())
    })();
    c.record("pure-diffusion", r);
}

/// Runs the requested suite and returns its report.
pub fn run_checks(suite: Suite, seed: u64) -> CheckReport {
    let mut items = Vec::new();
    let mut run = |name: &'static str, f: fn(u64, &mut Collector)| {
        let mut c = Collector { suite: name, items: Vec::new() };
        f(seed, &mut c);
        items.extend(c.items);
    };
    if matches!(suite, Suite::All | Suite::Lp) {
        run("lp", lp_suite);
    }
    if matches!(suite, Suite::All | Suite::Inequalities) {
        run("inequalities", inequality_suite);
    }
    if matches!(suite, Suite::All | Suite::Dynamics) {
        run("dynamics", dynamics_suite);
    }
    let name = match suite {
        Suite::All => "all",
        Suite::Lp => "lp",
        Suite::Inequalities => "inequalities",
        Suite::Dynamics => "dynamics",
    };
    CheckReport { suite: name.into(), seed, passed: items.iter().all(|i| i.passed), items }
}

pub fn cmd_check(suite: Suite, seed: u64, out_dir: &Path) -> Result<CheckReport> {
    std::fs::create_dir_all(out_dir)?;
    let report = run_checks(suite, seed);
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    std::fs::write(out_dir.join(REPORT_FILE), text)?;
    Ok(report)
}
