//! Choosing chain length and chain count from detection budgets.
//!
//! A pattern of per-row frequency `p` survives to the tail of a length-`L`
//! chain with probability `p^L`, so at least one of `M` chains catches it
//! with probability `g(p; L, M) = 1 - (1 - p^L)^M`. The planner picks the
//! smallest `M` that catches frequent patterns (`p ≥ p1`) with probability
//! `1 - η₁`, then the smallest `L` for which infrequent ones (`p ≤ p2`)
//! slip in with probability at most `η₂`.

use alloc::vec::Vec;

use crate::error::{OricError, Result};
use crate::math::{ceil, exp_m1, ln, ln_1p, powi, round};

pub const DEFAULT_L_MAX: u32 = 64;

/// `g(p; L, M)` for a real-valued chain count.
pub fn detection_probability_real(p: f64, length: u32, chains: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&p));
    if chains <= 0.0 || p <= 0.0 {
        return 0.0;
    }
    let survive = powi(p, length);
    if survive >= 1.0 {
        return 1.0;
    }
    // (1 - q)^M underflows for large M; go through logs.
    (-exp_m1(chains * ln_1p(-survive))).clamp(0.0, 1.0)
}

/// Probability that at least one of `chains` length-`length` chains keeps a
/// pattern of frequency `p` in its tail.
pub fn detection_probability(p: f64, length: u32, chains: u64) -> f64 {
    detection_probability_real(p, length, chains as f64)
}

/// `log η₁ / log(1 - p1^L)`, the real-valued chain count at which the miss
/// probability is exactly `η₁`.
fn chains_for_budget(p1: f64, length: u32, eta1: f64) -> Result<f64> {
    let survive = powi(p1, length);
    if survive >= 1.0 {
        return Ok(0.0);
    }
    if survive <= 0.0 {
        return Err(OricError::Overflow { length });
    }
    let x = ln(eta1) / ln_1p(-survive);
    if !x.is_finite() {
        return Err(OricError::Overflow { length });
    }
    Ok(x)
}

fn check_budget(eta: f64) -> Result<()> {
    if eta > 0.0 && eta < 1.0 {
        Ok(())
    } else {
        Err(OricError::InvalidConfig("budgets must lie in (0, 1)"))
    }
}

/// Smallest `M` with `g(p1; L, M) ≥ 1 - η₁`, i.e. `⌈log η₁ / log(1 - p1^L)⌉`.
pub fn required_chains(p1: f64, length: u32, eta1: f64) -> Result<u64> {
    if !(p1 > 0.0 && p1 <= 1.0) {
        return Err(OricError::InvalidConfig("p1 must lie in (0, 1]"));
    }
    if length == 0 {
        return Err(OricError::InvalidConfig("chain length must be at least 1"));
    }
    check_budget(eta1)?;
    let x = chains_for_budget(p1, length, eta1)?;
    // Snap ratios that are integers up to rounding, e.g. log 0.1 / log 0.1.
    if x >= u64::MAX as f64 {
        return Err(OricError::Overflow { length });
    }
    let nearest = round(x);
    let m = if (x - nearest).abs() <= 1e-12 * x.max(1.0) {
        nearest
    } else {
        ceil(x)
    };
    Ok((m as u64).max(1))
}

/// Detection budgets for [`plan`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PlannerSpec {
    /// Frequency threshold separating frequent from infrequent patterns.
    pub theta: f64,
    /// Allowed probability of missing a frequent pattern.
    pub eta1: f64,
    /// Allowed per-update probability of detecting an infrequent pattern.
    pub eta2: f64,
    /// Smallest frequency at or above `theta`.
    pub p1: f64,
    /// Largest frequency below `theta`.
    pub p2: f64,
    /// Number of updates the false-positive bound should cover.
    pub horizon: u32,
}

impl PlannerSpec {
    pub fn validate(&self) -> Result<()> {
        check_budget(self.eta1)?;
        check_budget(self.eta2)?;
        if !(self.theta > 0.0 && self.theta <= 1.0) {
            return Err(OricError::InvalidConfig("theta must lie in (0, 1]"));
        }
        if !(0.0 <= self.p2 && self.p2 < self.theta && self.theta <= self.p1 && self.p1 <= 1.0) {
            return Err(OricError::InvalidConfig("need 0 <= p2 < theta <= p1 <= 1"));
        }
        if self.horizon == 0 {
            return Err(OricError::InvalidConfig("horizon must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlannerResult {
    pub l_star: u32,
    /// Integer chain count recommended for `l_star`.
    pub m_star: u64,
    /// Conservative real-valued count `log η₁ / log(1 - p1^L) + 1`.
    pub m_bar: f64,
    /// `g(p1; L*, M*)`.
    pub detect_prob_frequent: f64,
    /// `g(p2; L*, M*)`.
    pub detect_prob_infrequent: f64,
    /// `g(p2; L*, M̄)`, the quantity held under `η₂`.
    pub false_positive_bound: f64,
    /// `η₂ · T`.
    pub multi_update_fp_bound: f64,
    /// `g(p2; L, M̄(L))` for `L = 1..=L*`.
    pub false_positive_curve: Vec<f64>,
}

/// `g(p2; L, M̄(L))` for `L = 1..=l_max`, stopping early where `p1^L`
/// underflows.
pub fn false_positive_curve(spec: &PlannerSpec, l_max: u32) -> Result<Vec<f64>> {
    spec.validate()?;
    let mut curve = Vec::new();
    for length in 1..=l_max {
        match chains_for_budget(spec.p1, length, spec.eta1) {
            Ok(x) => curve.push(detection_probability_real(spec.p2, length, x + 1.0)),
            Err(OricError::Overflow { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    Ok(curve)
}

/// Scans `L = 1..=l_max` for the first length whose false-positive
/// probability `g(p2; L, M̄(L))` is within `η₂`.
pub fn plan(spec: &PlannerSpec, l_max: u32) -> Result<PlannerResult> {
    spec.validate()?;
    if l_max == 0 {
        return Err(OricError::InvalidConfig("l_max must be at least 1"));
    }
    let mut curve = Vec::new();
    let mut best = f64::INFINITY;
    for length in 1..=l_max {
        let x = match chains_for_budget(spec.p1, length, spec.eta1) {
            Ok(x) => x,
            Err(OricError::Overflow { .. }) => break,
            Err(e) => return Err(e),
        };
        let m_bar = x + 1.0;
        let fp = detection_probability_real(spec.p2, length, m_bar);
        if let Some(&prev) = curve.last() {
            debug_assert!(
                fp <= prev + 1e-12,
                "false-positive curve increased at L={length}: {prev} -> {fp}"
            );
        }
        curve.push(fp);
        best = best.min(fp);
        if fp <= spec.eta2 {
            let m_star = required_chains(spec.p1, length, spec.eta1)?;
            return Ok(PlannerResult {
                l_star: length,
                m_star,
                m_bar,
                detect_prob_frequent: detection_probability(spec.p1, length, m_star),
                detect_prob_infrequent: detection_probability(spec.p2, length, m_star),
                false_positive_bound: fp,
                multi_update_fp_bound: spec.eta2 * spec.horizon as f64,
                false_positive_curve: curve,
            });
        }
    }
    Err(OricError::Infeasible {
        best_probability: best,
        l_max,
    })
}
