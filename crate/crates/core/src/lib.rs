//! Fine-grained relationship differential privacy (FGR-DP) for subgraph
//! counting in decentralized graphs.
//!
//! Each edge carries its own privacy level; budgets grow with the level
//! index (level 1 is the strictest). Nodes locally perturb what they know
//! about their incident edges and a server aggregates the uploads into
//! unbiased triangle and k-star count estimates. Every run writes a
//! per-edge budget ledger so the privacy accounting can be checked after
//! the fact instead of taken on faith.
//!
//! Privacy levels and level fractions are treated as public metadata: the
//! protocols protect edge membership, not the policy that prices it.

pub mod baseline;
pub mod comb;
pub mod error;
pub mod experiment;
pub mod generate;
pub mod graph;
pub mod kstar;
pub mod metrics;
pub mod privacy;
pub mod rng;
pub mod triangle;

pub use error::{Error, Result};
pub use graph::{DatasetMeta, Graph};
pub use privacy::{BudgetLedger, ObfuscatedMatrix, PrivacyPolicy};
