//! Uniform-budget baselines for both protocols.
//!
//! A uniform run is the same protocol executed under a single-level
//! policy, so fine-grained and uniform estimates differ only through
//! the policy. Running the baseline at the strictest budget present in
//! a mixed policy answers the usual comparison question: what does
//! ignoring the per-edge levels and protecting everyone at the
//! strictest requirement cost in accuracy?

use crate::error::Result;
use crate::graph::Graph;
use crate::kstar::{run_kstar, KStarConfig, KStarEstimate};
use crate::privacy::PrivacyPolicy;
use crate::triangle::{run_triangle, TriangleConfig, TriangleEstimate};

/// Runs the k-star protocol with every edge at the same budget.
pub fn run_kstar_uniform(g: &Graph, epsilon: f64, cfg: &KStarConfig) -> Result<KStarEstimate> {
    let policy = PrivacyPolicy::uniform(g, epsilon)?;
    run_kstar(g, &policy, cfg)
}

/// Runs the triangle protocol with every edge at the same budget.
pub fn run_triangle_uniform(
    g: &Graph,
    epsilon: f64,
    cfg: &TriangleConfig,
) -> Result<TriangleEstimate> {
    let policy = PrivacyPolicy::uniform(g, epsilon)?;
    run_triangle(g, &policy, cfg)
}
