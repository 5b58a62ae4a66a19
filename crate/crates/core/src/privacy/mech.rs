//! Local randomizers: randomized response, Laplace noise, degree
//! clipping.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::uniform_open01;

/// Probability of keeping a bit under ε-randomized response,
/// p = e^ε / (1 + e^ε), so the likelihood ratio p/(1-p) is exactly e^ε.
///
/// Computed as 1/(1 + e^-ε), which stays finite for any positive ε.
pub fn keep_probability(epsilon: f64) -> Result<f64> {
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "randomized response needs a positive finite budget, got {epsilon}"
        )));
    }
    Ok(1.0 / (1.0 + (-epsilon).exp()))
}

/// Randomized response at budget `epsilon`: returns the input bit with
/// probability e^ε/(1+e^ε), the flipped bit otherwise.
pub fn rr_perturb_bit<R: Rng + ?Sized>(bit: bool, epsilon: f64, rng: &mut R) -> Result<bool> {
    Ok(rr_perturb_with(keep_probability(epsilon)?, bit, rng))
}

/// Randomized response with a precomputed keep probability, for callers
/// perturbing many bits at the same budget.
pub fn rr_perturb_with<R: Rng + ?Sized>(keep: f64, bit: bool, rng: &mut R) -> bool {
    if rng.random::<f64>() < keep {
        bit
    } else {
        !bit
    }
}

/// Zero-mean Laplace draw with the given scale λ (density
/// (1/2λ)·e^(-|x|/λ), variance 2λ²), via inverse-CDF on one uniform.
pub fn laplace_sample<R: Rng + ?Sized>(scale: f64, rng: &mut R) -> Result<f64> {
    if !scale.is_finite() || scale <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "Laplace scale must be positive and finite, got {scale}"
        )));
    }
    Ok(laplace_from_uniform(uniform_open01(rng), scale))
}

/// Inverse Laplace CDF: maps u ∈ (0, 1) to a deviate; u = 0.5 maps to
/// exactly 0.
pub fn laplace_from_uniform(u: f64, scale: f64) -> f64 {
    debug_assert!(u > 0.0 && u < 1.0, "u must be in (0, 1), got {u}");
    let centered = u - 0.5;
    -scale * centered.signum() * (1.0 - 2.0 * centered.abs()).ln()
}

/// The `d_tilde` lowest-indexed neighbors of `v` (all of them if the
/// degree is already within the cap).
pub fn clip_neighbors(g: &Graph, v: u32, d_tilde: usize) -> &[u32] {
    let row = g.neighbors(v);
    &row[..row.len().min(d_tilde)]
}
