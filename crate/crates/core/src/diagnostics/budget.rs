use crate::diagnostics::record::DiagnosticsRecord;
use crate::dynamics::SolverConfig;
use crate::error::{Error, Result};

/// Largest relative defect of the energy balance
///
/// ```text
/// E(t) + 2ν∫₀ᵗ‖Λ^α u‖² + 2η∫₀ᵗ‖Λ^β b‖² = E(0),    E = ‖u‖² + ‖b‖²,
/// ```
///
/// over the series, divided by `E(0)`. Integrals are taken relative to the
/// first record. A zero initial energy gives the absolute defect.
pub fn energy_budget_residual(records: &[DiagnosticsRecord], config: &SolverConfig) -> Result<f64> {
    if records.len() < 2 {
        return Err(Error::InvalidArgument("energy budget needs at least two records".into()));
    }
    let first = &records[0];
    let e0 = first.total_energy();
    let scale = if e0 > 0.0 { e0 } else { 1.0 };
    let worst = records
        .iter()
        .map(|r| {
            let spent = 2.0 * config.nu * (r.int_diss_u - first.int_diss_u)
                + 2.0 * config.eta * (r.int_diff_b - first.int_diff_b);
            (r.total_energy() + spent - e0).abs() / scale
        })
        .fold(0.0, f64::max);
    Ok(worst)
}
