//! Littlewood–Paley analysis on the lattice: dyadic blocks, Besov and
//! Sobolev norms, the Bony paraproduct, and the ratios behind the
//! Bernstein, product and logarithmic inequalities.

pub mod besov;
pub mod bony;
pub mod estimates;
pub mod partition;

pub use besov::{besov_norm, sobolev_norm, BesovSpec};
pub use bony::{bony_decompose, BonyTerms};
pub use estimates::{
    bernstein_ratio, log_inequality_ratio, product_estimate_ratio, three_term_split, BernsteinRatio, LogInequality,
    ThreeTermSplit,
};
pub use partition::{build_partition, dyadic_block, low_pass, DyadicPartition};
