//! Per-edge privacy levels, derived node levels, and the level-sorted
//! node order.
//!
//! A policy assigns every edge a level in `1..=L` with budgets
//! ε_1 < ε_2 < … < ε_L, so level 1 is the strictest. A node inherits the
//! strictest (minimum) level among its incident edges, because whatever a
//! node uploads about itself touches all of them. Isolated nodes carry
//! the weakest level L.
//!
//! Levels and budgets are public metadata; only edge membership is
//! protected.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::stream_rng;

/// Privacy level, 1-based; level 1 is the strictest (smallest budget).
pub type Level = usize;

#[derive(Clone, Debug, PartialEq)]
pub struct PrivacyPolicy {
    node_count: usize,
    budgets: Vec<f64>,
    /// Edges as `(u, v)` with `u < v`, lexicographically sorted.
    edges: Vec<(u32, u32)>,
    edge_levels: Vec<Level>,
    node_levels: Vec<Level>,
}

fn validate_budgets(budgets: &[f64]) -> Result<()> {
    if budgets.is_empty() {
        return Err(Error::InvalidArgument("at least one budget required".into()));
    }
    for &b in budgets {
        if !b.is_finite() || b <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "budgets must be positive and finite, got {b}"
            )));
        }
    }
    if !budgets.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidArgument(
            "budgets must be strictly increasing with level".into(),
        ));
    }
    Ok(())
}

impl PrivacyPolicy {
    /// Builds a policy by assigning each edge of `g` the level returned
    /// by `assign`, then deriving node levels. `assign` is called once
    /// per edge in lexicographic order.
    pub fn from_edge_levels(
        g: &Graph,
        budgets: &[f64],
        mut assign: impl FnMut(u32, u32) -> Level,
    ) -> Result<Self> {
        validate_budgets(budgets)?;
        let level_count = budgets.len();
        let mut edges = Vec::with_capacity(g.edge_count());
        let mut edge_levels = Vec::with_capacity(g.edge_count());
        let mut node_levels = vec![level_count; g.node_count()];
        for (u, v) in g.edges() {
            let level = assign(u, v);
            if level < 1 || level > level_count {
                return Err(Error::InvalidArgument(format!(
                    "edge ({u}, {v}) assigned level {level} outside 1..={level_count}"
                )));
            }
            edges.push((u, v));
            edge_levels.push(level);
            node_levels[u as usize] = node_levels[u as usize].min(level);
            node_levels[v as usize] = node_levels[v as usize].min(level);
        }
        Ok(PrivacyPolicy {
            node_count: g.node_count(),
            budgets: budgets.to_vec(),
            edges,
            edge_levels,
            node_levels,
        })
    }

    /// Single-level policy: every edge at the one budget `epsilon`.
    pub fn uniform(g: &Graph, epsilon: f64) -> Result<Self> {
        Self::from_edge_levels(g, &[epsilon], |_, _| 1)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// Number of levels L.
    pub fn level_count(&self) -> usize {
        self.budgets.len()
    }

    pub fn budgets(&self) -> &[f64] {
        &self.budgets
    }

    /// Budget ε_l for a level in `1..=L`.
    pub fn budget(&self, level: Level) -> f64 {
        self.budgets[level - 1]
    }

    pub fn node_level(&self, v: u32) -> Level {
        self.node_levels[v as usize]
    }

    pub fn node_levels(&self) -> &[Level] {
        &self.node_levels
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Level of edge `(u, v)` in either orientation, if present.
    pub fn edge_level(&self, u: u32, v: u32) -> Option<Level> {
        let key = (u.min(v), u.max(v));
        self.edges
            .binary_search(&key)
            .ok()
            .map(|i| self.edge_levels[i])
    }

    /// Iterates `((u, v), level)` in lexicographic edge order.
    pub fn edge_levels(&self) -> impl Iterator<Item = ((u32, u32), Level)> + '_ {
        self.edges.iter().copied().zip(self.edge_levels.iter().copied())
    }

    /// Number of nodes at each level; index 0 is level 1.
    pub fn level_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.level_count()];
        for &l in &self.node_levels {
            counts[l - 1] += 1;
        }
        counts
    }

    /// Checks that the policy covers exactly the edges of `g`.
    pub fn matches_graph(&self, g: &Graph) -> Result<()> {
        if self.node_count != g.node_count() {
            return Err(Error::PolicyMismatch(format!(
                "policy has {} nodes, graph has {}",
                self.node_count,
                g.node_count()
            )));
        }
        if self.edges.len() != g.edge_count() {
            return Err(Error::PolicyMismatch(format!(
                "policy has {} edges, graph has {}",
                self.edges.len(),
                g.edge_count()
            )));
        }
        for ((pu, pv), (gu, gv)) in self.edges.iter().zip(g.edges()) {
            if (*pu, *pv) != (gu, gv) {
                return Err(Error::PolicyMismatch(format!(
                    "policy edge ({pu}, {pv}) does not match graph edge ({gu}, {gv})"
                )));
            }
        }
        Ok(())
    }
}

/// Assigns each edge of `g` an independent level drawn from `fractions`
/// (fractions[l-1] is the probability of level l). Deterministic in
/// `seed` and independent of edge iteration order.
pub fn assign_edge_levels(
    g: &Graph,
    budgets: &[f64],
    fractions: &[f64],
    seed: u64,
) -> Result<PrivacyPolicy> {
    validate_budgets(budgets)?;
    if fractions.len() != budgets.len() {
        return Err(Error::InvalidArgument(format!(
            "{} fractions for {} levels",
            fractions.len(),
            budgets.len()
        )));
    }
    if fractions.iter().any(|&f| !(0.0..=1.0).contains(&f)) {
        return Err(Error::InvalidArgument(
            "level fractions must lie in [0, 1]".into(),
        ));
    }
    let sum: f64 = fractions.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "level fractions must sum to 1, got {sum}"
        )));
    }
    let n = g.node_count() as u64;
    PrivacyPolicy::from_edge_levels(g, budgets, |u, v| {
        let mut rng = stream_rng(seed, "edge-levels", u64::from(u) * n + u64::from(v));
        let draw: f64 = rng.random();
        let mut acc = 0.0;
        for (i, &f) in fractions.iter().enumerate() {
            acc += f;
            if draw < acc {
                return i + 1;
            }
        }
        fractions.len()
    })
}

/// A graph relabeled so node levels are non-decreasing in node index
/// (ties broken by original id). Strictest nodes come first, which is
/// the order the two-round triangle protocol uploads in.
#[derive(Clone, Debug)]
pub struct ReorderedGraph {
    pub graph: Graph,
    pub policy: PrivacyPolicy,
    /// `new_to_old[i]` is the original id of the node now called `i`.
    pub new_to_old: Vec<u32>,
    pub old_to_new: Vec<u32>,
}

impl ReorderedGraph {
    /// Errors unless node levels are non-decreasing in node index.
    pub fn verify_order(&self) -> Result<()> {
        let levels = self.policy.node_levels();
        if levels.windows(2).all(|w| w[0] <= w[1]) {
            Ok(())
        } else {
            Err(Error::NotReordered)
        }
    }
}

/// Relabels nodes sorted by (level, original id) ascending and remaps
/// the policy to the new ids.
pub fn reorder_by_level(g: &Graph, policy: &PrivacyPolicy) -> Result<ReorderedGraph> {
    policy.matches_graph(g)?;
    let n = g.node_count();
    let mut new_to_old: Vec<u32> = (0..n as u32).collect();
    new_to_old.sort_by_key(|&v| (policy.node_level(v), v));
    let mut old_to_new = vec![0u32; n];
    for (new, &old) in new_to_old.iter().enumerate() {
        old_to_new[old as usize] = new as u32;
    }

    let remapped_edges: Vec<(u32, u32)> = g
        .edges()
        .map(|(u, v)| {
            let (a, b) = (old_to_new[u as usize], old_to_new[v as usize]);
            (a.min(b), a.max(b))
        })
        .collect();
    let graph = Graph::from_edges(n, &remapped_edges)?;

    let mut level_of: HashMap<(u32, u32), Level> = HashMap::with_capacity(g.edge_count());
    for ((u, v), level) in policy.edge_levels() {
        let (a, b) = (old_to_new[u as usize], old_to_new[v as usize]);
        level_of.insert((a.min(b), a.max(b)), level);
    }
    let remapped_policy =
        PrivacyPolicy::from_edge_levels(&graph, policy.budgets(), |u, v| level_of[&(u, v)])?;

    let reordered = ReorderedGraph {
        graph,
        policy: remapped_policy,
        new_to_old,
        old_to_new,
    };
    reordered.verify_order()?;
    Ok(reordered)
}

/// Writes a policy as a `budgets …` header line followed by one
/// `u v level` line per edge.
pub fn write_policy<W: Write>(policy: &PrivacyPolicy, w: &mut W) -> Result<()> {
    write!(w, "budgets")?;
    for b in policy.budgets() {
        write!(w, " {b}")?;
    }
    writeln!(w)?;
    for ((u, v), level) in policy.edge_levels() {
        writeln!(w, "{u} {v} {level}")?;
    }
    Ok(())
}

/// Parses the [`write_policy`] format and validates it against `g`.
pub fn read_policy<R: BufRead>(reader: R, g: &Graph) -> Result<PrivacyPolicy> {
    let mut budgets: Option<Vec<f64>> = None;
    let mut level_of: HashMap<(u32, u32), Level> = HashMap::new();
    for (num, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = num + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if budgets.is_none() {
            let mut tokens = trimmed.split_whitespace();
            if tokens.next() != Some("budgets") {
                return Err(Error::InvalidArgument(format!(
                    "policy line {line_no}: expected `budgets …` header"
                )));
            }
            let parsed: std::result::Result<Vec<f64>, _> =
                tokens.map(str::parse::<f64>).collect();
            budgets = Some(parsed.map_err(|e| {
                Error::InvalidArgument(format!("policy line {line_no}: {e}"))
            })?);
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::InvalidArgument(format!(
                "policy line {line_no}: expected `u v level`"
            )));
        }
        let parse_u32 = |tok: &str| {
            tok.parse::<u32>().map_err(|e| {
                Error::InvalidArgument(format!("policy line {line_no}: {e}"))
            })
        };
        let (u, v) = (parse_u32(fields[0])?, parse_u32(fields[1])?);
        let level = fields[2].parse::<Level>().map_err(|e| {
            Error::InvalidArgument(format!("policy line {line_no}: {e}"))
        })?;
        if level_of.insert((u.min(v), u.max(v)), level).is_some() {
            return Err(Error::InvalidArgument(format!(
                "policy line {line_no}: duplicate edge ({u}, {v})"
            )));
        }
    }
    let budgets = budgets.ok_or_else(|| {
        Error::InvalidArgument("policy file has no `budgets` header".into())
    })?;
    if level_of.len() != g.edge_count() {
        return Err(Error::PolicyMismatch(format!(
            "policy file has {} edges, graph has {}",
            level_of.len(),
            g.edge_count()
        )));
    }
    let mut missing: Option<(u32, u32)> = None;
    let policy = PrivacyPolicy::from_edge_levels(g, &budgets, |u, v| {
        level_of.get(&(u, v)).copied().unwrap_or_else(|| {
            missing = Some((u, v));
            1
        })
    })?;
    if let Some((u, v)) = missing {
        return Err(Error::PolicyMismatch(format!(
            "policy file is missing edge ({u}, {v})"
        )));
    }
    Ok(policy)
}


#[cfg(test)]
mod property_tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn node_levels_never_exceed_incident_edge_levels(
            n in 4usize..40,
            p in 0.05f64..0.5,
            seed in any::<u64>(),
        ) {
            let g = crate::generate::gnp(n, p, seed).unwrap();
            let policy = assign_edge_levels(&g, &[0.3, 0.9, 1.8], &[0.3, 0.3, 0.4], seed)
                .unwrap();
            for ((u, v), level) in policy.edge_levels() {
                prop_assert!(policy.node_level(u) <= level);
                prop_assert!(policy.node_level(v) <= level);
            }
            // Every non-isolated node attains its minimum on some edge.
            for v in 0..n as u32 {
                if g.degree(v) > 0 {
                    let min = g
                        .neighbors(v)
                        .iter()
                        .map(|&w| policy.edge_level(v, w).unwrap())
                        .min()
                        .unwrap();
                    prop_assert_eq!(policy.node_level(v), min);
                }
            }
        }

        #[test]
        fn reorder_is_a_permutation_with_monotone_levels(
            n in 4usize..40,
            p in 0.05f64..0.5,
            seed in any::<u64>(),
        ) {
            let g = crate::generate::gnp(n, p, seed).unwrap();
            let policy = assign_edge_levels(&g, &[0.3, 0.9], &[0.4, 0.6], seed).unwrap();
            let r = reorder_by_level(&g, &policy).unwrap();
            r.verify_order().unwrap();
            // new_to_old and old_to_new invert each other.
            for new in 0..n as u32 {
                prop_assert_eq!(r.old_to_new[r.new_to_old[new as usize] as usize], new);
            }
            // Edges survive the relabeling.
            prop_assert_eq!(r.graph.edge_count(), g.edge_count());
            for (u, v) in g.edges() {
                let (a, b) = (r.old_to_new[u as usize], r.old_to_new[v as usize]);
                prop_assert!(r.graph.has_edge(a, b));
                prop_assert_eq!(
                    r.policy.edge_level(a, b),
                    policy.edge_level(u, v)
                );
            }
        }
    }
}
