//! Accuracy metrics for repeated protocol runs.
//!
//! The squared-error metrics normalize by the true count so results
//! are comparable across graphs of different sizes. A true count of
//! zero makes that normalization meaningless, which is reported as an
//! error rather than an infinity.

use crate::error::{Error, Result};

fn validate(estimates: &[f64], truth: f64) -> Result<()> {
    if estimates.is_empty() {
        return Err(Error::InvalidArgument("no estimates supplied".into()));
    }
    if !truth.is_finite() || truth < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "true count must be finite and non-negative, got {truth}"
        )));
    }
    if truth == 0.0 {
        return Err(Error::TruthZero);
    }
    Ok(())
}

/// Mean squared error relative to the true count:
/// mean over runs of (estimate - truth)² / truth.
pub fn metric_mse(estimates: &[f64], truth: f64) -> Result<f64> {
    validate(estimates, truth)?;
    let n = estimates.len() as f64;
    Ok(estimates
        .iter()
        .map(|&e| (e - truth) * (e - truth) / truth)
        .sum::<f64>()
        / n)
}

/// Mean relative error: mean over runs of |estimate - truth| / truth.
pub fn metric_mre(estimates: &[f64], truth: f64) -> Result<f64> {
    validate(estimates, truth)?;
    let n = estimates.len() as f64;
    Ok(estimates.iter().map(|&e| (e - truth).abs() / truth).sum::<f64>() / n)
}

/// Unnormalized mean squared error, usable when the true count is zero.
pub fn raw_mse(estimates: &[f64], truth: f64) -> Result<f64> {
    if estimates.is_empty() {
        return Err(Error::InvalidArgument("no estimates supplied".into()));
    }
    if !truth.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "true count must be finite, got {truth}"
        )));
    }
    let n = estimates.len() as f64;
    Ok(estimates
        .iter()
        .map(|&e| (e - truth) * (e - truth))
        .sum::<f64>()
        / n)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClusteringEstimate {
    pub value: f64,
    /// Set when noisy inputs pushed the raw ratio outside [0, 1].
    pub clamped: bool,
}

/// Global clustering coefficient 3·triangles / two-stars, clamped to
/// [0, 1] because noisy counts can stray outside it.
pub fn clustering_coefficient(triangles: f64, two_stars: f64) -> Result<ClusteringEstimate> {
    if !triangles.is_finite() || !two_stars.is_finite() {
        return Err(Error::InvalidArgument(
            "clustering inputs must be finite".into(),
        ));
    }
    if two_stars <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "two-star count must be positive, got {two_stars}"
        )));
    }
    let raw = 3.0 * triangles / two_stars;
    let value = raw.clamp(0.0, 1.0);
    Ok(ClusteringEstimate {
        value,
        clamped: value != raw,
    })
}

fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut ranks = vec![0.0; xs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && xs[order[j + 1]] == xs[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidArgument(format!(
            "{} x values against {} y values",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 3 {
        return Err(Error::InvalidArgument(
            "rank correlation needs at least three points".into(),
        ));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(
            "rank correlation inputs must be finite".into(),
        ));
    }
    let rx = average_ranks(xs);
    let ry = average_ranks(ys);
    let n = rx.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (x, y) in rx.iter().zip(&ry) {
        cov += (x - mx) * (y - my);
        vx += (x - mx) * (x - mx);
        vy += (y - my) * (y - my);
    }
    if vx == 0.0 || vy == 0.0 {
        return Err(Error::InvalidArgument(
            "rank correlation is undefined for constant input".into(),
        ));
    }
    Ok(cov / (vx * vy).sqrt())
}
