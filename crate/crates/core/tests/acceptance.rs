//! Acceptance criteria, one line each. Runs as a plain binary so the lines
//! are always printed; exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use mhd2d::diagnostics::{energy_budget_residual, DiagnosticsRecord};
use mhd2d::dynamics::{
    full_vorticity_rhs, make_initial, rescale_onto, Checkpoint, InitKind, MHDState, PrimitiveState, Regime, Run,
    SolverConfig,
};
use mhd2d::field::forward;
use mhd2d::harness::check::{member_rng, random_state};
use mhd2d::harness::{cmd_run, emit_config, parse_config_str, run_checks, CheckReport, Suite, SweepSpec};
use mhd2d::ops::{biot_savart, curl, leray_project};
use mhd2d::random::band_limited_field;
use mhd2d::{Result, TorusGrid};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { passed, detail })
}

fn records(config: &SolverConfig, init: MHDState) -> Result<Vec<(MHDState, DiagnosticsRecord)>> {
    Run::new(config, init)?.map(|s| s.map(|s| (s.state, s.record)).map_err(|a| a.error)).collect()
}

fn criterion_1() -> Result<Outcome> {
    let mut worst = [0.0_f64; 4];
    for n in [64, 256] {
        let g = TorusGrid::new(n)?;
        for k in 0..3 {
            let mut rng = member_rng(101, 0, k);
            let f = band_limited_field(&g, n / 2 - 1, 1.0, &mut rng)?;
            let x = f.inverse();
            let back = forward(&x)?;
            worst[0] = worst[0].max(back.max_mode_difference(&f)? * g.len() as f64 / f.max_abs_coeff());
            let again = back.inverse();
            let d = x.samples().iter().zip(again.samples()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            worst[0] = worst[0].max(d / x.max_abs());
            worst[1] = worst[1].max((x.lp_norm(2.0).powi(2) - f.l2_norm_sq()).abs() / f.l2_norm_sq());
            let [u1, u2] = biot_savart(&f)?;
            worst[2] = worst[2].max(curl(&u1, &u2)?.max_mode_difference(&f)? * g.len() as f64 / f.max_abs_coeff());
            let v = band_limited_field(&g, n / 2 - 1, 1.0, &mut rng)?;
            let [p1, p2] = leray_project(&f, &v)?;
            let [q1, q2] = leray_project(&p1, &p2)?;
            let scale = p1.max_abs_coeff().max(p2.max_abs_coeff()) / g.len() as f64;
            worst[3] = worst[3].max(q1.max_mode_difference(&p1)?.max(q2.max_mode_difference(&p2)?) / scale);
        }
    }
    outcome(
        worst.iter().all(|&e| e < 1e-12),
        format!(
            "round trip {:.1e}, Parseval {:.1e}, Biot-Savart {:.1e}, Leray {:.1e} (limit 1e-12)",
            worst[0], worst[1], worst[2], worst[3]
        ),
    )
}

fn criterion_2() -> Result<Outcome> {
    let cfg = SolverConfig { alpha: 0.7, beta: 1.3, nu: 0.2, eta: 0.4, n: 128, ..Default::default() };
    let mut worst = 0.0_f64;
    for k in 0..50 {
        let s = random_state(128, 42, &mut member_rng(102, 0, k))?;
        let (cw, cj) = mhd2d::dynamics::primitive_rhs(&PrimitiveState::from_state(&s), &cfg)?.curls()?;
        let (dw, dj) = full_vorticity_rhs(&s, &cfg)?;
        let scale = dw.max_abs_coeff().max(dj.max_abs_coeff()) / s.grid().len() as f64;
        worst = worst.max(cw.max_mode_difference(&dw)?.max(cj.max_mode_difference(&dj)?) / scale);
    }
    outcome(worst < 1e-10, format!("max relative spectral error {worst:.2e} over 50 states (limit 1e-10)"))
}

fn criterion_3() -> Result<Outcome> {
    // ideal Orszag-Tang run
    let ideal = SolverConfig { alpha: 0.0, beta: 0.0, nu: 0.0, eta: 0.0, n: 256, t_end: 1.0, ..Default::default() };
    let series = records(&ideal, make_initial(&ideal)?)?;
    let e0 = series[0].1.total_energy();
    let drift = series.iter().map(|(_, r)| (r.total_energy() - e0).abs() / e0).fold(0.0, f64::max);

    let diss = SolverConfig {
        alpha: 0.5,
        beta: 1.0,
        nu: 0.1,
        eta: 0.1,
        n: 128,
        dt: 1e-3,
        t_end: 1.0,
        output_every: 10,
        ..Default::default()
    };
    let series = records(&diss, make_initial(&diss)?)?;
    let recs: Vec<_> = series.into_iter().map(|(_, r)| r).collect();
    let budget = energy_budget_residual(&recs, &diss)?;

    // b = (0, sin 3x₁): j = 3 cos 3x₁ decays at rate η·3^{2β}
    let decay_cfg = SolverConfig { beta: 1.5, eta: 1.0, n: 64, dt: 1e-3, t_end: 0.2, output_every: 20, ..Default::default() };
    let g = TorusGrid::new(64)?;
    let j0 = mhd2d::RealField::from_fn(&g, |x, _| 3.0 * (3.0 * x).cos()).forward()?;
    let init = MHDState::new(0.0, mhd2d::SpectralField::zeros(&g), j0.clone())?;
    let mut decay = 0.0_f64;
    for (s, _) in records(&decay_cfg, init)? {
        let exact = j0.scale((-27f64 * s.t).exp());
        decay = decay.max(s.j().max_mode_difference(&exact)? / j0.mode(3, 0).norm());
    }
    outcome(
        drift < 1e-8 && budget < 1e-6 && decay < 1e-10,
        format!("ideal drift {drift:.2e} (1e-8), budget residual {budget:.2e} (1e-6), single-mode decay {decay:.2e} (1e-10)"),
    )
}

fn criterion_4() -> Result<Outcome> {
    let base = SolverConfig {
        alpha: 1.0,
        beta: 1.0,
        nu: 0.05,
        eta: 0.05,
        n: 64,
        t_end: 0.5,
        amplitude: 1.0,
        ..Default::default()
    };
    let init = make_initial(&base)?;
    let mut finals = Vec::new();
    for dt in [0.02, 0.01, 0.005] {
        let cfg = SolverConfig { dt, output_every: 1_000_000, ..base.clone() };
        finals.push(records(&cfg, init.clone())?.pop().unwrap().0);
    }
    let e1 = finals[0].relative_l2_difference(&finals[1])?;
    let e2 = finals[1].relative_l2_difference(&finals[2])?;
    let ratio = e1 / e2;
    outcome(
        (ratio - 16.0).abs() <= 0.2 * 16.0,
        format!("successive differences {e1:.2e}, {e2:.2e}, ratio {ratio:.2} (16 +- 20%)"),
    )
}

fn item_summary(report: &CheckReport, names: &[&str]) -> String {
    names
        .iter()
        .map(|n| match report.items.iter().find(|i| i.name == *n) {
            Some(i) => format!("{}: {}", n, if i.passed { "ok" } else { "FAILED" }),
            None => format!("{n}: missing"),
        })
        .collect::<Vec<_>>()
        .join("; ")
}

fn criterion_5() -> Result<Outcome> {
    let report = run_checks(Suite::Lp, 7);
    let failed: Vec<_> = report.items.iter().filter(|i| !i.passed).map(|i| i.name.clone()).collect();
    let names = ["partition-of-unity-n64", "partition-of-unity-n256", "reconstruction", "bony-reconstruction", "block-disjointness"];
    outcome(
        report.passed && names.iter().all(|n| report.items.iter().any(|i| i.name == *n)),
        format!("{} ({} items, failed {:?})", item_summary(&report, &names), report.items.len(), failed),
    )
}

fn criterion_6() -> Result<Outcome> {
    let report = run_checks(Suite::Inequalities, 7);
    let failed: Vec<_> = report.items.iter().filter(|i| !i.passed).map(|i| i.name.clone()).collect();
    let names = [
        "positivity-p4",
        "cz-p2-identity",
        "cz-p4",
        "cz-p8",
        "gn-beta1.6",
        "commutator-s1",
        "commutator-s1.5",
        "commutator-s2",
        "product-half-half",
        "log-inequality-s3",
        "scale-invariance",
    ];
    outcome(
        report.passed && names.iter().all(|n| report.items.iter().any(|i| i.name == *n)),
        format!("{} items, failed {:?}", report.items.len(), failed),
    )
}

fn criterion_7() -> Result<Outcome> {
    let lambda = 2;
    let cfg = SolverConfig {
        alpha: 1.0,
        beta: 1.0,
        nu: 0.1,
        eta: 0.1,
        n: 64,
        dt: 2e-3,
        t_end: 0.4,
        output_every: 50,
        init: InitKind::RandomBand,
        band: 6,
        seed: 3,
        ..Default::default()
    };
    let fine = TorusGrid::new(128)?;
    let coarse = records(&cfg, make_initial(&cfg)?)?;
    let scaled_cfg = SolverConfig { n: 128, dt: cfg.dt / 4.0, t_end: cfg.t_end / 4.0, ..cfg.clone() };
    let scaled = records(&scaled_cfg, rescale_onto(&make_initial(&cfg)?, lambda, 1.0, &fine)?)?;
    let (mut worst, mut skew) = (0.0_f64, 0.0_f64);
    for ((a, _), (b, _)) in coarse.iter().zip(&scaled) {
        let a = rescale_onto(a, lambda, 1.0, &fine)?;
        skew = skew.max((a.t - b.t).abs());
        worst = worst.max(b.relative_l2_difference(&a)?);
    }
    outcome(
        worst < 1e-6 && skew < 1e-12 && coarse.len() == scaled.len() && coarse.len() > 2,
        format!("max relative difference {worst:.2e} over {} matched times (limit 1e-6), time skew {skew:.1e}", coarse.len()),
    )
}

fn regime_run(cfg: &SolverConfig) -> Result<(bool, String)> {
    let dir = tempfile::tempdir()?;
    let out = cmd_run(cfg, dir.path())?;
    let finite = out.records.iter().all(|r| r.x.is_finite() && r.linf_w.is_finite());
    let residual = out.report.budget_residual.unwrap_or(f64::INFINITY);
    let sup_x = out.records.iter().map(|r| r.x).fold(0.0, f64::max);
    let ok = out.completed() && finite && residual < 1e-6 && (out.final_state.t - cfg.t_end).abs() < 1e-12;
    Ok((ok, format!("{}: sup X {sup_x:.3}, budget {residual:.1e}", cfg.regime().as_str())))
}

fn criterion_8() -> Result<Outcome> {
    let t11 = SolverConfig { alpha: 0.0, beta: 1.6, nu: 0.0, eta: 1.0, ..Default::default() };
    let t51 = SolverConfig { alpha: 0.5, beta: 1.0, nu: 1.0, eta: 1.0, ..Default::default() };
    let (a, da) = regime_run(&t11)?;
    let (b, db) = regime_run(&t51)?;
    let tag = |alpha: f64, beta: f64, nu: f64| SolverConfig { alpha, beta, nu, eta: 1.0, ..Default::default() }.regime();
    let probes = [
        (tag(0.0, 1.5, 0.0), Regime::Outside),
        (tag(0.0, 1.5 + 1e-9, 0.0), Regime::Theorem11),
        (tag(0.5, 1.0, 1.0), Regime::Theorem51),
        (tag(0.3, 1.4, 1.0), Regime::Theorem12),
    ];
    let spec = SweepSpec { alphas: vec![0.0], betas: vec![1.5, 1.5 + 1e-9], base: t11.clone() };
    let swept: Vec<_> = spec.points().iter().map(|c| c.regime()).collect();
    let tags_ok = probes.iter().all(|(a, b)| a == b) && swept == [Regime::Outside, Regime::Theorem11];
    outcome(a && b && tags_ok, format!("{da}; {db}; boundary tags {}", if tags_ok { "match" } else { "MISMATCH" }))
}

fn criterion_9() -> Result<Outcome> {
    let cfg = SolverConfig {
        n: 32,
        dt: 1e-3,
        t_end: 0.05,
        output_every: 5,
        init: InitKind::RandomBand,
        band: 5,
        seed: 99,
        ..Default::default()
    };
    let dir = tempfile::tempdir()?;
    cmd_run(&cfg, &dir.path().join("a"))?;
    cmd_run(&cfg, &dir.path().join("b"))?;
    let csv_a = std::fs::read(dir.path().join("a/diagnostics.csv"))?;
    let csv_b = std::fs::read(dir.path().join("b/diagnostics.csv"))?;
    let csv_same = csv_a == csv_b;

    let raw = std::fs::read(dir.path().join("a/checkpoint.bin"))?;
    let cp = Checkpoint::from_bytes(&raw)?;
    let cp_same = cp.to_bytes() == raw;

    let parsed = parse_config_str(&emit_config(&cfg))?;
    let cfg_same = parsed == cfg && emit_config(&parsed) == emit_config(&cfg);
    outcome(
        csv_same && cp_same && cfg_same,
        format!("csv identical: {csv_same}, checkpoint bit-exact: {cp_same}, config round trip: {cfg_same}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<Outcome>, u64); 9] = [
        ("1 spectral identities", criterion_1, 5),
        ("2 formulation equivalence", criterion_2, 30),
        ("3 conservation and budget", criterion_3, 300),
        ("4 stepper order", criterion_4, 180),
        ("5 Littlewood-Paley suite", criterion_5, 60),
        ("6 inequality ensembles", criterion_6, 300),
        ("7 scaling covariance", criterion_7, 120),
        ("8 regime behavior", criterion_8, 600),
        ("9 determinism and formats", criterion_9, 60),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut all = true;
    for (name, run, limit) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.starts_with(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(limit);
        let (passed, detail) = match result {
            Ok(o) => (o.passed && in_time, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        all &= passed;
        println!(
            "criterion {name}: {} [{:.1} s of {limit} s] {detail}",
            if passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
