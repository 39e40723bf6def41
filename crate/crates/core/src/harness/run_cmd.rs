use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use chrono::Utc;
use serde::Serialize;

use crate::diagnostics::record::{DiagnosticsRecord, CSV_COLUMNS};
use crate::diagnostics::regime::{RegimeReport, RegimeTracker};
use crate::dynamics::{make_initial, read_checkpoint, write_checkpoint, Checkpoint, MHDState, Run, SolverConfig};
use crate::error::{Error, Result};

pub const DIAGNOSTICS_FILE: &str = "diagnostics.csv";
pub const CHECKPOINT_FILE: &str = "checkpoint.bin";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const REGIME_FILE: &str = "regime_report.json";

/// Record of one run, written next to its outputs.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub config: SolverConfig,
    pub regime: String,
    pub flags: Vec<String>,
    pub code_version: String,
    pub platform: String,
    pub started: String,
    pub finished: String,
    pub resumed_from: Option<String>,
    pub t_start: f64,
    pub t_final: f64,
    pub samples: usize,
    /// Output files relative to the output directory.
    pub files: BTreeMap<String, String>,
    /// `"completed"` or `"aborted"`.
    pub status: String,
    pub abort_reason: Option<String>,
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub final_state: MHDState,
    pub records: Vec<DiagnosticsRecord>,
    pub report: RegimeReport,
    pub manifest: RunManifest,
    pub abort: Option<String>,
}

impl RunOutcome {
    pub fn completed(&self) -> bool {
        self.abort.is_none()
    }
}

/// Shortest decimal that parses back to the same `f64`.
pub fn format_float(v: f64) -> String {
    format!("{v:e}")
}

struct CsvSink {
    writer: csv::Writer<BufWriter<File>>,
}

impl CsvSink {
    fn create(path: &Path) -> Result<Self> {
        let mut writer = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
        writer.write_record(CSV_COLUMNS)?;
        Ok(CsvSink { writer })
    }

    fn push(&mut self, r: &DiagnosticsRecord) -> Result<()> {
        self.writer.write_record(r.values().iter().map(|v| format_float(*v)))?;
        Ok(())
    }

    fn finish(mut self) -> Result<()> {
        self.writer.flush()?;
        Ok(())
    }
}

/// Reads a `diagnostics.csv` back into records.
pub fn read_diagnostics(path: &Path) -> Result<Vec<DiagnosticsRecord>> {
    let mut reader = csv::Reader::from_path(path)?;
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header != CSV_COLUMNS {
        return Err(Error::Format(format!("unexpected diagnostics header {header:?}")));
    }
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row?;
        let mut v = [0.0; 16];
        for (slot, field) in v.iter_mut().zip(row.iter()) {
            *slot = field.parse().map_err(|_| Error::Format(format!("bad number {field:?}")))?;
        }
        out.push(DiagnosticsRecord::from_values(v));
    }
    Ok(out)
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut f, value)?;
    f.write_all(b"\n")?;
    f.flush()?;
    Ok(())
}

/// Runs `config` from `init` and writes every artifact into `out_dir`,
/// including after an abort, in which case the checkpoint holds the last
/// valid state. Errors are returned only for unusable inputs or I/O failures.
pub fn execute(config: &SolverConfig, init: MHDState, out_dir: &Path, resumed_from: Option<&Path>) -> Result<RunOutcome> {
    fs::create_dir_all(out_dir)?;
    let started = Utc::now().to_rfc3339();
    let t_start = init.t;
    let run = Run::new(config, init.clone())?;
    let mut csv = CsvSink::create(&out_dir.join(DIAGNOSTICS_FILE))?;
    let mut tracker = RegimeTracker::new(config);
    let mut last = init;
    let mut abort = None;
    for item in run {
        match item {
            Ok(sample) => {
                csv.push(&sample.record)?;
                tracker.observe(&sample.state, &sample.record);
                last = sample.state;
            }
            Err(a) => {
                abort = Some(a.error.to_string());
                last = a.last_valid;
            }
        }
    }
    csv.finish()?;
    let checkpoint = Checkpoint { state: last.clone(), alpha: config.alpha, beta: config.beta, nu: config.nu, eta: config.eta };
    write_checkpoint(&out_dir.join(CHECKPOINT_FILE), &checkpoint)?;
    let report = tracker.report();
    write_json(&out_dir.join(REGIME_FILE), &report)?;

    let files = [
        ("diagnostics", DIAGNOSTICS_FILE),
        ("checkpoint", CHECKPOINT_FILE),
        ("regime_report", REGIME_FILE),
        ("manifest", MANIFEST_FILE),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v.to_string()))
    .collect();
    let manifest = RunManifest {
        config: config.clone(),
        regime: config.regime().as_str().to_string(),
        flags: config.flags(),
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        platform: format!("{}-{}", std::env::consts::ARCH, std::env::consts::OS),
        started,
        finished: Utc::now().to_rfc3339(),
        resumed_from: resumed_from.map(|p| p.display().to_string()),
        t_start,
        t_final: last.t,
        samples: tracker.records().len(),
        files,
        status: if abort.is_some() { "aborted" } else { "completed" }.to_string(),
        abort_reason: abort.clone(),
    };
    write_json(&out_dir.join(MANIFEST_FILE), &manifest)?;
    Ok(RunOutcome { final_state: last, records: tracker.records().to_vec(), report, manifest, abort })
}

pub fn cmd_run(config: &SolverConfig, out_dir: &Path) -> Result<RunOutcome> {
    config.validate()?;
    execute(config, make_initial(config)?, out_dir, None)
}

/// Continues a checkpointed run to the absolute time `t_end`. Step size,
/// cadence and the other settings come from `settings` (defaults when
/// absent); exponents, coefficients and grid size come from the checkpoint,
/// and a `settings` that disagrees with them is rejected. Time integrals in
/// the new diagnostics restart from zero at the checkpoint time.
pub fn cmd_resume(checkpoint: &Path, t_end: f64, settings: Option<&SolverConfig>, out_dir: &Path) -> Result<RunOutcome> {
    let cp = read_checkpoint(checkpoint)?;
    let n = cp.state.grid().n();
    let base = settings.cloned().unwrap_or_default();
    if let Some(s) = settings {
        if (s.alpha, s.beta, s.nu, s.eta, s.n) != (cp.alpha, cp.beta, cp.nu, cp.eta, n) {
            return Err(Error::InvalidArgument(
                "resume settings disagree with the checkpoint's alpha, beta, nu, eta or n".into(),
            ));
        }
    }
    let config = SolverConfig { alpha: cp.alpha, beta: cp.beta, nu: cp.nu, eta: cp.eta, n, t_end, ..base };
    config.validate()?;
    execute(&config, cp.state, out_dir, Some(checkpoint))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SolverConfig {
        SolverConfig { n: 16, dt: 0.01, t_end: 0.1, output_every: 3, ..Default::default() }
    }

    #[test]
    fn writes_all_files_and_rereads_csv() {
        let dir = tempfile::tempdir().unwrap();
        let out = cmd_run(&small(), dir.path()).unwrap();
        assert!(out.completed());
        for f in [DIAGNOSTICS_FILE, CHECKPOINT_FILE, MANIFEST_FILE, REGIME_FILE] {
            assert!(dir.path().join(f).exists(), "{f}");
        }
        let back = read_diagnostics(&dir.path().join(DIAGNOSTICS_FILE)).unwrap();
        assert_eq!(back, out.records);
        assert_eq!(back.len(), 5);
    }

    #[test]
    fn abort_still_flushes() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = SolverConfig { dt: 0.5, t_end: 2.0, amplitude: 10.0, ..small() };
        let out = cmd_run(&cfg, dir.path()).unwrap();
        assert!(!out.completed());
        assert_eq!(out.manifest.status, "aborted");
        assert_eq!(read_diagnostics(&dir.path().join(DIAGNOSTICS_FILE)).unwrap().len(), 1);
        let cp = read_checkpoint(&dir.path().join(CHECKPOINT_FILE)).unwrap();
        assert_eq!(cp.state.t, 0.0);
    }

    #[test]
    fn resume_matches_continuous_run() {
        let dir = tempfile::tempdir().unwrap();
        let half = SolverConfig { t_end: 0.06, ..small() };
        cmd_run(&half, &dir.path().join("a")).unwrap();
        let resumed =
            cmd_resume(&dir.path().join("a").join(CHECKPOINT_FILE), 0.1, Some(&small()), &dir.path().join("b")).unwrap();
        let full = cmd_run(&small(), &dir.path().join("c")).unwrap();
        assert_eq!(resumed.final_state.t, full.final_state.t);
        assert!(resumed.final_state.max_difference(&full.final_state).unwrap() < 1e-14);
        let wrong = SolverConfig { beta: 1.0, ..small() };
        assert!(cmd_resume(&dir.path().join("a").join(CHECKPOINT_FILE), 0.1, Some(&wrong), &dir.path().join("d")).is_err());
    }
}
