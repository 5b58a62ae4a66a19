//! Two-round triangle counting under per-edge privacy levels.
//!
//! Nodes are reordered so levels are non-decreasing, then each node
//! uploads its lower-triangle adjacency row through randomized response
//! at a fraction α of its level budget. In the second round every node
//! checks, for each pair of its clipped higher-indexed neighbors, the
//! uploaded bit that would close the triangle. Those checks are grouped
//! by the uploader's level zone so each zone can be debiased with its
//! own retention probability, and the debiased sum is released with
//! Laplace noise drawn from the remaining (1-α) budget share.
//!
//! Only the closing bit of each wedge is read from the noisy matrix, so
//! the correction needs no joint distribution across zones: within a
//! zone every bit was flipped independently with the same probability.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::privacy::{
    clip_neighbors, keep_probability, laplace_sample, rr_perturb_with, BudgetLedger, Level,
    ObfuscatedMatrix, PrivacyPolicy, ReorderedGraph,
};
use crate::rng::stream_rng;

/// Smallest usable randomized-response margin 2p-1. Debiasing divides
/// by this margin, so budgets that push it below the floor are rejected
/// rather than silently amplifying noise by ten orders of magnitude.
pub const MIN_RR_MARGIN: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct TriangleConfig {
    /// Budget share spent on the round-one upload, strictly in (0, 1).
    pub alpha: f64,
    /// Degree cap d̃ applied to round-two neighbor lists.
    pub d_tilde: usize,
    pub seed: u64,
    /// Keep the per-node noisy reports (indexed by original node id).
    pub retain_reports: bool,
    /// Record per-edge budget charges. Off for Monte Carlo loops.
    pub record_ledger: bool,
}

impl TriangleConfig {
    pub fn new(alpha: f64, d_tilde: usize, seed: u64) -> Self {
        TriangleConfig {
            alpha,
            d_tilde,
            seed,
            retain_reports: false,
            record_ledger: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TriangleEstimate {
    pub estimate: f64,
    pub per_node_reports: Option<Vec<f64>>,
    /// Nodes per level, indexed by level minus one.
    pub level_node_counts: Vec<usize>,
    /// Digest of the round-one matrix, for reproducibility checks.
    pub matrix_digest: u64,
    pub ledger: Option<BudgetLedger>,
}

/// One level zone of a node's round-two tally: `pairs` wedges were
/// checked against uploads from `level` nodes, `matched` of the checked
/// bits were set, and `corrected` is the debiased triangle count.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelSlice {
    pub level: Level,
    pub pairs: u64,
    pub matched: u64,
    pub corrected: f64,
}

/// Round-two output of a single node before noise.
#[derive(Clone, Debug)]
pub struct LocalTriangleStats {
    pub node: u32,
    pub slices: Vec<LevelSlice>,
}

impl LocalTriangleStats {
    pub fn corrected_total(&self) -> f64 {
        self.slices.iter().map(|s| s.corrected).sum()
    }
}

fn validate_alpha(alpha: f64) -> Result<()> {
    if !alpha.is_finite() || alpha <= 0.0 || alpha >= 1.0 {
        return Err(Error::InvalidArgument(format!(
            "alpha must lie strictly between 0 and 1, got {alpha}"
        )));
    }
    Ok(())
}

/// Retention probability of the round-one upload at a given level
/// budget: e^{αε}/(e^{αε}+1).
pub fn rr_retention(alpha: f64, epsilon: f64) -> Result<f64> {
    validate_alpha(alpha)?;
    keep_probability(alpha * epsilon)
}

fn retention_per_level(policy: &PrivacyPolicy, alpha: f64) -> Result<Vec<f64>> {
    policy
        .budgets()
        .iter()
        .map(|&eps| {
            let p = rr_retention(alpha, eps)?;
            if 2.0 * p - 1.0 < MIN_RR_MARGIN {
                return Err(Error::InvalidArgument(format!(
                    "budget {eps} at alpha {alpha} leaves margin {} below {MIN_RR_MARGIN}",
                    2.0 * p - 1.0
                )));
            }
            Ok(p)
        })
        .collect()
}

/// Debiases a zone tally: with `pairs` checks at retention `keep`, of
/// which `matched` came back set, the unbiased triangle count is
/// (matched - (1-keep)·pairs) / (2·keep - 1).
pub fn corrected_count(matched: u64, pairs: u64, keep: f64) -> f64 {
    (matched as f64 - (1.0 - keep) * pairs as f64) / (2.0 * keep - 1.0)
}

/// Round one: every node passes its unclipped lower-triangle adjacency
/// row through randomized response at α times its level budget.
pub fn round1_upload(
    reordered: &ReorderedGraph,
    alpha: f64,
    seed: u64,
) -> Result<ObfuscatedMatrix> {
    reordered.verify_order()?;
    let keep = retention_per_level(&reordered.policy, alpha)?;
    let n = reordered.graph.node_count();
    let mut matrix = ObfuscatedMatrix::new(n, seed);
    for i in 0..n as u32 {
        let p = keep[reordered.policy.node_level(i) - 1];
        matrix.set_row_retention(i, p);
        let mut rng = stream_rng(seed, "triangle-round1", u64::from(i));
        let nbrs = reordered.graph.neighbors(i);
        let mut next = 0;
        for j in 0..i {
            let bit = next < nbrs.len() && nbrs[next] == j;
            if bit {
                next += 1;
            }
            matrix.set(i, j, rr_perturb_with(p, bit, &mut rng));
        }
    }
    Ok(matrix)
}

/// Round two for one node: counts wedge checks against the uploaded
/// matrix, grouped by uploader level, and debiases each zone.
///
/// Neighbor lists are clipped to `d_tilde` before pairing, and only
/// higher-indexed neighbors participate so each triangle is counted at
/// its lowest-indexed corner.
pub fn round2_local_estimate(
    reordered: &ReorderedGraph,
    node: u32,
    matrix: &ObfuscatedMatrix,
    alpha: f64,
    d_tilde: usize,
) -> Result<LocalTriangleStats> {
    reordered.verify_order()?;
    let n = reordered.graph.node_count();
    if matrix.node_count() != n {
        return Err(Error::MatrixMismatch {
            expected: n,
            actual: matrix.node_count(),
        });
    }
    if node as usize >= n {
        return Err(Error::InvalidArgument(format!(
            "node {node} out of range for {n} nodes"
        )));
    }
    let keep = retention_per_level(&reordered.policy, alpha)?;
    let node_level = reordered.policy.node_level(node);
    let level_count = reordered.policy.level_count();

    let mut slices: Vec<LevelSlice> = (node_level..=level_count)
        .map(|level| LevelSlice {
            level,
            pairs: 0,
            matched: 0,
            corrected: 0.0,
        })
        .collect();

    let clipped = clip_neighbors(&reordered.graph, node, d_tilde);
    let above = &clipped[clipped.partition_point(|&v| v <= node)..];
    for (a, &j) in above.iter().enumerate() {
        for &k in &above[a + 1..] {
            let uploader_level = reordered.policy.node_level(k);
            debug_assert!(uploader_level >= node_level);
            let slice = &mut slices[uploader_level - node_level];
            slice.pairs += 1;
            if matrix.get(k, j) {
                slice.matched += 1;
            }
        }
    }
    for slice in &mut slices {
        slice.corrected = corrected_count(slice.matched, slice.pairs, keep[slice.level - 1]);
    }
    Ok(LocalTriangleStats { node, slices })
}

/// Runs the full two-round protocol and aggregates the noisy reports.
pub fn run_triangle(
    g: &Graph,
    policy: &PrivacyPolicy,
    cfg: &TriangleConfig,
) -> Result<TriangleEstimate> {
    policy.matches_graph(g)?;
    let reordered = crate::privacy::reorder_by_level(g, policy)?;
    let keep = retention_per_level(&reordered.policy, cfg.alpha)?;
    let matrix = round1_upload(&reordered, cfg.alpha, cfg.seed)?;

    let n = g.node_count();
    let mut estimate = 0.0;
    let mut reports = cfg.retain_reports.then(|| vec![0.0; n]);
    for i in 0..n as u32 {
        let stats = round2_local_estimate(&reordered, i, &matrix, cfg.alpha, cfg.d_tilde)?;
        let level = reordered.policy.node_level(i);
        let epsilon = reordered.policy.budget(level);
        let noise = if cfg.d_tilde > 0 {
            let sensitivity = cfg.d_tilde as f64 / (2.0 * keep[level - 1] - 1.0);
            let scale = sensitivity / ((1.0 - cfg.alpha) * epsilon);
            laplace_sample(scale, &mut stream_rng(cfg.seed, "triangle-round2", u64::from(i)))?
        } else {
            0.0
        };
        let report = stats.corrected_total() + noise;
        estimate += report;
        if let Some(reports) = reports.as_mut() {
            reports[reordered.new_to_old[i as usize] as usize] = report;
        }
    }

    let ledger = if cfg.record_ledger {
        let mut ledger = BudgetLedger::for_policy(policy);
        for (lo, hi) in reordered.graph.edges() {
            let uploader_eps = reordered.policy.budget(reordered.policy.node_level(hi));
            let checker_eps = reordered.policy.budget(reordered.policy.node_level(lo));
            let u = reordered.new_to_old[lo as usize];
            let v = reordered.new_to_old[hi as usize];
            ledger.charge(u, v, "triangle-round1", cfg.alpha * uploader_eps)?;
            ledger.charge(u, v, "triangle-round2", (1.0 - cfg.alpha) * checker_eps)?;
        }
        Some(ledger)
    } else {
        None
    };

    Ok(TriangleEstimate {
        estimate,
        per_node_reports: reports,
        level_node_counts: policy.level_counts(),
        matrix_digest: matrix.digest(),
        ledger,
    })
}

fn per_level_bound_terms(alpha: f64, epsilon: f64, d_tilde: usize) -> (f64, f64) {
    let a = alpha * epsilon;
    let d = d_tilde as f64;
    // e^a/(e^a-1)² written as 1/(e^a - 2 + e^{-a}) so huge budgets
    // underflow to zero instead of overflowing to NaN.
    let rr_factor = 1.0 / (a.exp() - 2.0 + (-a).exp());
    // e^{2a}/(e^a-1)² = (1/(1-e^{-a}))², same stability concern.
    let lap_factor = {
        let r = 1.0 / (1.0 - (-a).exp());
        r * r
    };
    let residual = (1.0 - alpha) * epsilon;
    let cubic = rr_factor * d * d * d;
    let laplace = lap_factor / (residual * residual) * d * d;
    (cubic, laplace)
}

/// Closed-form error bound Σ_l n_l·f(ε_l) with
/// f(x) = e^{αx}/(e^{αx}-1)² · (d̃³ + e^{αx}/((1-α)x)² · d̃²).
///
/// The figure's Laplace term omits the factor two in Var[Lap(λ)] = 2λ²
/// and keeps e^{αx} where the actual scale carries e^{αx}+1, so a
/// faithful run can exceed this bound by a small constant factor at
/// tight budgets. It is kept as stated because the acceptance checks
/// pin this exact form.
pub fn variance_bound(
    level_node_counts: &[usize],
    budgets: &[f64],
    alpha: f64,
    d_tilde: usize,
) -> Result<f64> {
    let (cubic, laplace) = variance_bound_components(level_node_counts, budgets, alpha, d_tilde)?;
    Ok(cubic + laplace)
}

/// The two addends of [`variance_bound`]: the randomized-response term
/// (cubic in d̃) and the Laplace term (quadratic in d̃).
pub fn variance_bound_components(
    level_node_counts: &[usize],
    budgets: &[f64],
    alpha: f64,
    d_tilde: usize,
) -> Result<(f64, f64)> {
    validate_alpha(alpha)?;
    if level_node_counts.len() != budgets.len() {
        return Err(Error::InvalidArgument(format!(
            "{} level counts for {} budgets",
            level_node_counts.len(),
            budgets.len()
        )));
    }
    if budgets.iter().any(|&b| !b.is_finite() || b <= 0.0) {
        return Err(Error::InvalidArgument(
            "budgets must be positive and finite".into(),
        ));
    }
    let mut cubic_sum = 0.0;
    let mut laplace_sum = 0.0;
    for (&n, &eps) in level_node_counts.iter().zip(budgets) {
        let (cubic, laplace) = per_level_bound_terms(alpha, eps, d_tilde);
        cubic_sum += n as f64 * cubic;
        laplace_sum += n as f64 * laplace;
    }
    Ok((cubic_sum, laplace_sum))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::gnp;
    use crate::graph::exact_triangle_count;
    use crate::privacy::{assign_edge_levels, ledger_check, reorder_by_level};

    fn mean_and_std(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
        (mean, var.sqrt())
    }

    #[test]
    fn retention_examples() {
        // αε = ln 3 keeps a bit with probability 3/4.
        let p = rr_retention(0.5, 2.0 * 3.0f64.ln()).unwrap();
        assert!((p - 0.75).abs() < 1e-12);
        assert!(rr_retention(0.0, 1.0).is_err());
        assert!(rr_retention(1.0, 1.0).is_err());
        assert!(rr_retention(-0.2, 1.0).is_err());
    }

    #[test]
    fn retention_grows_with_budget() {
        let mut last = 0.5;
        for eps in [0.1, 0.5, 1.0, 2.0, 5.0, 20.0] {
            let p = rr_retention(0.5, eps).unwrap();
            assert!(p > last, "retention must increase, got {p} after {last}");
            last = p;
        }
    }

    #[test]
    fn vanishing_margin_is_rejected() {
        let g = gnp(20, 0.2, 1).unwrap();
        let policy = PrivacyPolicy::uniform(&g, 1e-10).unwrap();
        let err = run_triangle(&g, &policy, &TriangleConfig::new(0.5, 5, 0)).unwrap_err();
        assert!(err.to_string().contains("margin"));
    }

    #[test]
    fn corrected_count_example() {
        // keep 3/4, 10 pairs, 4 matches: (4 - 2.5)/0.5 = 3.
        assert!((corrected_count(4, 10, 0.75) - 3.0).abs() < 1e-12);
        assert_eq!(corrected_count(0, 0, 0.75), 0.0);
    }

    #[test]
    fn round1_with_huge_budget_reproduces_adjacency() {
        let g = gnp(40, 0.2, 7).unwrap();
        let policy = PrivacyPolicy::uniform(&g, 1e6).unwrap();
        let reordered = reorder_by_level(&g, &policy).unwrap();
        let matrix = round1_upload(&reordered, 0.5, 3).unwrap();
        for i in 0..40u32 {
            for j in 0..i {
                assert_eq!(matrix.get(i, j), reordered.graph.has_edge(i, j));
            }
        }
    }

    #[test]
    fn round1_rejects_unordered_input() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let policy = PrivacyPolicy::from_edge_levels(&g, &[0.5, 1.0], |u, v| {
            if (u, v) == (0, 1) {
                2
            } else {
                1
            }
        })
        .unwrap();
        // Node levels are [2, 1, 1]: decreasing, so a hand-built
        // ReorderedGraph around this policy must be refused.
        let bogus = ReorderedGraph {
            graph: g,
            policy,
            new_to_old: vec![0, 1, 2],
            old_to_new: vec![0, 1, 2],
        };
        assert!(round1_upload(&bogus, 0.5, 0).is_err());
    }

    #[test]
    fn round1_flip_rate_matches_retention() {
        // An edgeless graph uploads all-zero rows, so every set bit in
        // the matrix is a flip. With ε=1, α=0.5 the flip probability is
        // 1/(1+e^{0.5}) ≈ 0.37754.
        let n = 1415usize;
        let g = Graph::from_edges(n, &[]).unwrap();
        let policy = PrivacyPolicy::uniform(&g, 1.0).unwrap();
        let reordered = reorder_by_level(&g, &policy).unwrap();
        let matrix = round1_upload(&reordered, 0.5, 12).unwrap();
        let total = n * (n - 1) / 2;
        let mut ones = 0usize;
        for i in 0..n as u32 {
            for j in 0..i {
                if matrix.get(i, j) {
                    ones += 1;
                }
            }
        }
        let flip = 1.0 / (1.0 + 0.5f64.exp());
        let sigma = (flip * (1.0 - flip) / total as f64).sqrt();
        let observed = ones as f64 / total as f64;
        assert!(
            (observed - flip).abs() < 3.0 * sigma,
            "flip rate {observed} vs expected {flip} (sigma {sigma})"
        );
    }

    #[test]
    fn round2_groups_pairs_by_uploader_level() {
        // Star around node 0 with leaf 3 at level 2: the (1,2) wedge is
        // checked against a level-1 upload, the two wedges through 3
        // against a level-2 upload.
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let policy = PrivacyPolicy::from_edge_levels(&g, &[1e6, 2e6], |_, v| {
            if v == 3 {
                2
            } else {
                1
            }
        })
        .unwrap();
        let reordered = reorder_by_level(&g, &policy).unwrap();
        let matrix = round1_upload(&reordered, 0.5, 0).unwrap();
        let stats = round2_local_estimate(&reordered, 0, &matrix, 0.5, 3).unwrap();
        assert_eq!(stats.slices.len(), 2);
        assert_eq!(stats.slices[0].level, 1);
        assert_eq!(stats.slices[0].pairs, 1);
        assert_eq!(stats.slices[1].level, 2);
        assert_eq!(stats.slices[1].pairs, 2);
        assert_eq!(stats.corrected_total(), 0.0);
    }

    #[test]
    fn round2_respects_the_degree_cap() {
        let g = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let policy = PrivacyPolicy::uniform(&g, 1e6).unwrap();
        let reordered = reorder_by_level(&g, &policy).unwrap();
        let matrix = round1_upload(&reordered, 0.5, 0).unwrap();
        let stats = round2_local_estimate(&reordered, 0, &matrix, 0.5, 2).unwrap();
        // Only neighbors 1 and 2 survive the cap, leaving one pair.
        assert_eq!(stats.slices[0].pairs, 1);
    }

    #[test]
    fn debiasing_is_conditionally_unbiased_given_any_true_graph() {
        // Exhaustive check over every randomized-response outcome. Six
        // nodes, K4 plus a fringe; monotone levels so reordering is the
        // identity: nodes 0-3 at level 1, nodes 4-5 at level 2.
        let edges = [
            (0, 1),
            (0, 2),
            (0, 3),
            (1, 2),
            (1, 3),
            (2, 3),
            (2, 4),
            (3, 4),
            (3, 5),
            (4, 5),
        ];
        let g = Graph::from_edges(6, &edges).unwrap();
        let budgets = [0.6, 1.2];
        let policy = PrivacyPolicy::from_edge_levels(&g, &budgets, |u, v| {
            if v >= 4 || u >= 4 {
                2
            } else {
                1
            }
        })
        .unwrap();
        assert_eq!(policy.node_levels(), &[1, 1, 1, 1, 2, 2]);
        let reordered = reorder_by_level(&g, &policy).unwrap();
        assert_eq!(reordered.new_to_old, vec![0, 1, 2, 3, 4, 5]);

        let alpha = 0.5;
        let d_max = g.max_degree();

        // Wedge slots (j, k) that round two reads, and their uploaders.
        let mut slots: Vec<(u32, u32)> = Vec::new();
        for i in 0..6u32 {
            let nbrs: Vec<u32> = g.neighbors(i).iter().copied().filter(|&v| v > i).collect();
            for (a, &j) in nbrs.iter().enumerate() {
                for &k in &nbrs[a + 1..] {
                    if !slots.contains(&(j, k)) {
                        slots.push((j, k));
                    }
                }
            }
        }
        assert_eq!(slots.len(), 5);

        let keep: Vec<f64> = slots
            .iter()
            .map(|&(_, k)| rr_retention(alpha, budgets[policy.node_level(k) - 1]).unwrap())
            .collect();

        let mut expected = [0.0f64; 6];
        for outcome in 0u32..(1 << slots.len()) {
            let mut matrix = ObfuscatedMatrix::new(6, 0);
            let mut weight = 1.0;
            for (s, &(j, k)) in slots.iter().enumerate() {
                let bit = outcome >> s & 1 == 1;
                matrix.set(k, j, bit);
                let truth = g.has_edge(j, k);
                weight *= if bit == truth {
                    keep[s]
                } else {
                    1.0 - keep[s]
                };
            }
            for i in 0..6u32 {
                let stats =
                    round2_local_estimate(&reordered, i, &matrix, alpha, d_max).unwrap();
                expected[i as usize] += weight * stats.corrected_total();
            }
        }

        // True per-node wedge-closure counts: node 0 sees the three K4
        // triangles it anchors, nodes 1-3 anchor one each.
        let truth = [3.0, 1.0, 1.0, 1.0, 0.0, 0.0];
        for (i, (&got, &want)) in expected.iter().zip(&truth).enumerate() {
            assert!(
                (got - want).abs() < 1e-9,
                "node {i}: conditional mean {got} vs true count {want}"
            );
        }
        assert_eq!(exact_triangle_count(&g), 6);
    }

    #[test]
    fn huge_budget_recovers_the_exact_count() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let policy = PrivacyPolicy::uniform(&g, 1e6).unwrap();
        let cfg = TriangleConfig::new(0.5, g.max_degree(), 17);
        let out = run_triangle(&g, &policy, &cfg).unwrap();
        assert!((out.estimate - 4.0).abs() < 0.01, "estimate {}", out.estimate);
    }

    #[test]
    fn round_one_only_sum_is_unbiased() {
        let g = gnp(150, 0.1, 19).unwrap();
        let policy = PrivacyPolicy::uniform(&g, 1.5).unwrap();
        let reordered = reorder_by_level(&g, &policy).unwrap();
        let d_max = g.max_degree();
        let truth = exact_triangle_count(&g) as f64;

        let repeats = 2500;
        let mut sums = Vec::with_capacity(repeats);
        for r in 0..repeats {
            let matrix = round1_upload(&reordered, 0.5, 40_000 + r as u64).unwrap();
            let mut sum = 0.0;
            for i in 0..g.node_count() as u32 {
                sum += round2_local_estimate(&reordered, i, &matrix, 0.5, d_max)
                    .unwrap()
                    .corrected_total();
            }
            sums.push(sum);
        }
        let (mean, std) = mean_and_std(&sums);
        let band = 5.0 * std / (repeats as f64).sqrt();
        assert!(
            (mean - truth).abs() < band,
            "mean {mean} vs truth {truth} (band {band})"
        );
    }

    #[test]
    fn full_protocol_mean_matches_truth_on_two_levels() {
        let g = gnp(100, 0.1, 23).unwrap();
        let policy = assign_edge_levels(&g, &[0.8, 1.6], &[0.3, 0.7], 29).unwrap();
        let d_max = g.max_degree();
        let truth = exact_triangle_count(&g) as f64;

        let repeats = 2500;
        let mut estimates = Vec::with_capacity(repeats);
        for r in 0..repeats {
            let mut cfg = TriangleConfig::new(0.5, d_max, 60_000 + r as u64);
            cfg.record_ledger = false;
            estimates.push(run_triangle(&g, &policy, &cfg).unwrap().estimate);
        }
        let (mean, std) = mean_and_std(&estimates);
        let band = 5.0 * std / (repeats as f64).sqrt();
        assert!(
            (mean - truth).abs() < band,
            "mean {mean} vs truth {truth} (band {band})"
        );
    }

    #[test]
    fn triangle_free_graph_centers_on_zero() {
        // Complete bipartite K(4,4): plenty of wedges, no triangles.
        let mut edges = Vec::new();
        for u in 0..4u32 {
            for v in 4..8u32 {
                edges.push((u, v));
            }
        }
        let g = Graph::from_edges(8, &edges).unwrap();
        let policy = assign_edge_levels(&g, &[0.5, 1.0], &[0.5, 0.5], 31).unwrap();

        let repeats = 3000;
        let mut estimates = Vec::with_capacity(repeats);
        for r in 0..repeats {
            let mut cfg = TriangleConfig::new(0.5, 4, 80_000 + r as u64);
            cfg.record_ledger = false;
            estimates.push(run_triangle(&g, &policy, &cfg).unwrap().estimate);
        }
        let (mean, std) = mean_and_std(&estimates);
        let band = 5.0 * std / (repeats as f64).sqrt();
        assert!(mean.abs() < band, "mean {mean} not within 5σ band {band}");
    }

    #[test]
    fn runs_are_deterministic_per_seed() {
        let g = gnp(60, 0.15, 37).unwrap();
        let policy = assign_edge_levels(&g, &[0.5, 1.0], &[0.4, 0.6], 41).unwrap();
        let cfg = TriangleConfig::new(0.4, g.max_degree(), 7);
        let a = run_triangle(&g, &policy, &cfg).unwrap();
        let b = run_triangle(&g, &policy, &cfg).unwrap();
        assert_eq!(a.estimate, b.estimate);
        assert_eq!(a.matrix_digest, b.matrix_digest);
        let mut cfg2 = cfg.clone();
        cfg2.seed = 8;
        let c = run_triangle(&g, &policy, &cfg2).unwrap();
        assert_ne!(a.estimate, c.estimate);
        assert_ne!(a.matrix_digest, c.matrix_digest);
    }

    #[test]
    fn retained_reports_sum_to_the_estimate() {
        let g = gnp(50, 0.2, 43).unwrap();
        let policy = assign_edge_levels(&g, &[0.5, 1.0], &[0.5, 0.5], 47).unwrap();
        let mut cfg = TriangleConfig::new(0.5, g.max_degree(), 5);
        cfg.retain_reports = true;
        let out = run_triangle(&g, &policy, &cfg).unwrap();
        let sum: f64 = out.per_node_reports.as_ref().unwrap().iter().sum();
        assert!((sum - out.estimate).abs() < 1e-6);
    }

    #[test]
    fn ledger_splits_budget_across_rounds() {
        let g = gnp(40, 0.2, 53).unwrap();
        let budgets = [0.5, 1.0];
        let policy = assign_edge_levels(&g, &budgets, &[0.4, 0.6], 59).unwrap();
        let alpha = 0.3;
        let out = run_triangle(&g, &policy, &TriangleConfig::new(alpha, g.max_degree(), 2)).unwrap();
        let ledger = out.ledger.unwrap();
        let report = ledger_check(&ledger, &policy).unwrap();
        assert!(report.is_ok(), "violations: {:?}", report.violations);

        let reordered = reorder_by_level(&g, &policy).unwrap();
        for ((u, v), level) in policy.edge_levels() {
            let (new_u, new_v) = (reordered.old_to_new[u as usize], reordered.old_to_new[v as usize]);
            let (lo, hi) = if new_u < new_v {
                (new_u, new_v)
            } else {
                (new_v, new_u)
            };
            let expected = alpha * policy.budget(reordered.policy.node_level(hi))
                + (1.0 - alpha) * policy.budget(reordered.policy.node_level(lo));
            let total = ledger.total(u, v).unwrap();
            assert!(
                (total - expected).abs() < 1e-12,
                "edge ({u},{v}): total {total} vs expected {expected}"
            );
            let u_level = policy.node_level(u);
            let v_level = policy.node_level(v);
            if u_level == level && v_level == level {
                assert!((total - policy.budget(level)).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn uniform_ledger_is_tight_on_every_edge() {
        let g = gnp(30, 0.2, 61).unwrap();
        let policy = PrivacyPolicy::uniform(&g, 1.2).unwrap();
        let out = run_triangle(&g, &policy, &TriangleConfig::new(0.5, g.max_degree(), 4)).unwrap();
        let report = ledger_check(&out.ledger.unwrap(), &policy).unwrap();
        assert!(report.is_ok());
        assert_eq!(report.tight_edges, g.edge_count());
    }

    #[test]
    fn zero_degree_cap_reports_zero_everywhere() {
        let g = gnp(20, 0.3, 67).unwrap();
        let policy = PrivacyPolicy::uniform(&g, 1.0).unwrap();
        let out = run_triangle(&g, &policy, &TriangleConfig::new(0.5, 0, 9)).unwrap();
        assert_eq!(out.estimate, 0.0);
    }

    #[test]
    fn variance_bound_single_level_scales_with_node_count() {
        let one = variance_bound(&[1], &[1.0], 0.5, 10).unwrap();
        let many = variance_bound(&[500], &[1.0], 0.5, 10).unwrap();
        assert!((many - 500.0 * one).abs() < 1e-6);
    }

    #[test]
    fn variance_bound_decreases_in_budget() {
        let mut last = f64::INFINITY;
        for eps in [0.1, 0.3, 0.5, 1.0, 2.0, 5.0] {
            let b = variance_bound(&[100], &[eps], 0.5, 10).unwrap();
            assert!(b < last, "bound must shrink with budget: {b} after {last}");
            last = b;
        }
    }

    #[test]
    fn variance_bound_component_degree_scaling() {
        let (cubic1, lap1) = variance_bound_components(&[100], &[1.0], 0.5, 10).unwrap();
        let (cubic2, lap2) = variance_bound_components(&[100], &[1.0], 0.5, 20).unwrap();
        assert!((cubic2 / cubic1 - 8.0).abs() < 1e-9);
        assert!((lap2 / lap1 - 4.0).abs() < 1e-9);
    }

    #[test]
    fn variance_bound_survives_huge_budgets() {
        let b = variance_bound(&[100], &[1e6], 0.5, 10).unwrap();
        assert!(b.is_finite());
        assert!(b >= 0.0);
        assert!(b < 1e-6);
    }

    #[test]
    fn variance_bound_validates_input() {
        assert!(variance_bound(&[100], &[1.0, 2.0], 0.5, 10).is_err());
        assert!(variance_bound(&[100], &[0.0], 0.5, 10).is_err());
        assert!(variance_bound(&[100], &[1.0], 1.0, 10).is_err());
    }

    #[test]
    fn single_node_graph_is_handled() {
        let g = Graph::from_edges(1, &[]).unwrap();
        let policy = PrivacyPolicy::uniform(&g, 1.0).unwrap();
        let out = run_triangle(&g, &policy, &TriangleConfig::new(0.5, 3, 0)).unwrap();
        assert!(out.estimate.is_finite());
    }
}
