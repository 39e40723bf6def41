//! Monitored norms of a running simulation and the inequality ratios
//! evaluated on simulation-like fields.

pub mod budget;
pub mod inequalities;
pub mod record;
pub mod regime;

pub use budget::energy_budget_residual;
pub use inequalities::{commutator_ratio, cz_ratio, gn_ratio, positivity_check, CommutatorExponents};
pub use record::{compute_record, BudgetQuadrature, DiagnosticsRecord, TimeIntegrals, CSV_COLUMNS};
pub use regime::{regime_report, RegimeReport};
