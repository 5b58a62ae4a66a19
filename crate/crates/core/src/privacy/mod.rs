//! Privacy primitives shared by the counting protocols: per-edge level
//! policies, randomized response, Laplace noise, degree clipping, the
//! level-sorted node order, the obfuscated adjacency matrix, and the
//! per-edge budget ledger.

mod ledger;
mod matrix;
mod mech;
mod policy;

pub use ledger::{ledger_check, BudgetLedger, LedgerReport, LedgerViolation};
pub use matrix::ObfuscatedMatrix;
pub use mech::{
    clip_neighbors, keep_probability, laplace_from_uniform, laplace_sample, rr_perturb_bit,
    rr_perturb_with,
};
pub use policy::{
    assign_edge_levels, read_policy, reorder_by_level, write_policy, Level, PrivacyPolicy,
    ReorderedGraph,
};
