//! Seeded random graph generators for experiments.

use std::collections::HashSet;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::stream_rng;

/// Erdős–Rényi G(n, p): every unordered pair is an edge independently
/// with probability `p`. Deterministic in `seed`.
pub fn gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidArgument("G(n, p) requires n >= 1".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!(
            "edge probability must be in [0, 1], got {p}"
        )));
    }
    let mut rng = stream_rng(seed, "gnp", 0);
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in (u + 1)..n as u32 {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges)
}

/// Barabási–Albert preferential attachment: starts from `m` isolated
/// nodes, then each new node attaches to `m` distinct existing nodes
/// chosen proportionally to their current degree (uniformly for the
/// first arrival). Deterministic in `seed`.
pub fn barabasi_albert(n: usize, m: usize, seed: u64) -> Result<Graph> {
    if m == 0 || m >= n {
        return Err(Error::InvalidArgument(format!(
            "Barabási–Albert requires 1 <= m < n, got m={m}, n={n}"
        )));
    }
    let mut rng = stream_rng(seed, "barabasi-albert", 0);
    let mut edges: Vec<(u32, u32)> = Vec::with_capacity(m * (n - m));
    // One entry per half-edge; sampling an index uniformly is sampling a
    // node proportionally to its degree.
    let mut repeated: Vec<u32> = Vec::with_capacity(2 * m * (n - m));
    let mut targets: Vec<u32> = (0..m as u32).collect();
    for source in m as u32..n as u32 {
        for &t in &targets {
            edges.push((t, source));
        }
        repeated.extend_from_slice(&targets);
        repeated.extend(std::iter::repeat_n(source, m));
        if (source + 1) < n as u32 {
            let mut chosen: HashSet<u32> = HashSet::with_capacity(m);
            while chosen.len() < m {
                let pick = repeated[rng.random_range(0..repeated.len())];
                chosen.insert(pick);
            }
            targets = chosen.into_iter().collect();
            targets.sort_unstable();
        }
    }
    Graph::from_edges(n, &edges)
}
