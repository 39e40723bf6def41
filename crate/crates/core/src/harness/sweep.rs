use std::fs::File;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::diagnostics::energy_budget_residual;
use crate::error::Result;
use crate::harness::config_io::SweepSpec;
use crate::harness::run_cmd::{cmd_run, format_float};

pub const SUMMARY_FILE: &str = "summary.csv";

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SweepRow {
    pub alpha: f64,
    pub beta: f64,
    pub regime: String,
    /// `"completed"`, `"aborted"` or `"failed"`.
    pub status: String,
    pub sup_x: f64,
    pub sup_linf_w: f64,
    pub budget_residual: f64,
    pub dir: String,
    pub message: String,
}

/// Directory name of one sweep point.
pub fn point_dir(index: usize, alpha: f64, beta: f64) -> String {
    format!("point-{index:03}-alpha{}-beta{}", format_float(alpha), format_float(beta))
}

/// One independent run per `(α, β)` point, in parallel, each in its own
/// subdirectory, followed by `summary.csv` in point order. Failing points
/// are recorded and do not stop the sweep.
pub fn cmd_sweep(spec: &SweepSpec, out_dir: &Path) -> Result<Vec<SweepRow>> {
    std::fs::create_dir_all(out_dir)?;
    let points = spec.points();
    let rows: Vec<SweepRow> = points
        .par_iter()
        .enumerate()
        .map(|(i, config)| {
            let dir = point_dir(i, config.alpha, config.beta);
            let mut row = SweepRow {
                alpha: config.alpha,
                beta: config.beta,
                regime: config.regime().as_str().to_string(),
                status: "failed".into(),
                sup_x: f64::NAN,
                sup_linf_w: f64::NAN,
                budget_residual: f64::NAN,
                dir: dir.clone(),
                message: String::new(),
            };
            match cmd_run(config, &out_dir.join(&dir)) {
                Ok(out) => {
                    let sup = |f: fn(&crate::diagnostics::DiagnosticsRecord) -> f64| {
                        out.records.iter().map(f).fold(f64::NAN, f64::max)
                    };
                    row.sup_x = sup(|r| r.x);
                    row.sup_linf_w = sup(|r| r.linf_w);
                    row.budget_residual = energy_budget_residual(&out.records, config).unwrap_or(f64::NAN);
                    row.status = out.manifest.status.clone();
                    row.message = out.abort.unwrap_or_default();
                }
                Err(e) => row.message = e.to_string(),
            }
            row
        })
        .collect();

    let mut w = csv::Writer::from_writer(File::create(out_dir.join(SUMMARY_FILE))?);
    w.write_record(["alpha", "beta", "regime", "status", "sup_X", "sup_linf_w", "budget_residual", "dir", "message"])?;
    for r in &rows {
        w.write_record([
            format_float(r.alpha),
            format_float(r.beta),
            r.regime.clone(),
            r.status.clone(),
            format_float(r.sup_x),
            format_float(r.sup_linf_w),
            format_float(r.budget_residual),
            r.dir.clone(),
            r.message.clone(),
        ])?;
    }
    w.flush()?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config_io::parse_sweep_str;

    #[test]
    fn tags_and_failures() {
        let dir = tempfile::tempdir().unwrap();
        let spec = parse_sweep_str("alphas = 0, 0.3\nbetas = 1.3, 1.6\nnu = 0\neta = 1\nn = 16\ndt = 0.01\nt_end = 0.02\n").unwrap();
        let rows = cmd_sweep(&spec, dir.path()).unwrap();
        assert_eq!(rows.len(), 4);
        let tags: Vec<_> = rows.iter().map(|r| r.regime.as_str()).collect();
        assert_eq!(tags, ["outside", "theorem-1.1", "outside", "outside"]);
        assert_eq!(rows[0].status, "completed");
        // alpha != 0 with nu = 0 is rejected per point
        assert_eq!(rows[2].status, "failed");
        let text = std::fs::read_to_string(dir.path().join(SUMMARY_FILE)).unwrap();
        assert_eq!(text.lines().count(), 5);
        assert!(dir.path().join(&rows[1].dir).join("diagnostics.csv").exists());
    }
}
