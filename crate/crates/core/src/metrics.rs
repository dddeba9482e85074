//! Fairness and decentralization measurement over per-bridge success points:
//! the Gini index (two formulations cross-checking each other), the Lorenz
//! curve, the Nakamoto coefficient, and Lorenz dominance as a reusable check.
//!
//! Conventions for degenerate inputs:
//! - a zero-total distribution has Gini 0 (an all-zero economy is perfectly
//!   equal) but no Lorenz curve or Nakamoto coefficient (both are undefined
//!   without resources to share);
//! - a single-value distribution has Gini 0 and Nakamoto coefficient 1.
//!
//! Sorting is stable and callers are expected to pass values in canonical
//! bridge-id order, so ties break by id and snapshots are reproducible.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A set of non-negative per-bridge values (raw or decayed success points).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    values: Vec<f64>,
}

impl Distribution {
    /// Validates and wraps the values: at least one entry, all finite and
    /// non-negative. A zero total is allowed (see module conventions).
    pub fn new(values: Vec<f64>) -> Result<Self, MetricsError> {
        if values.is_empty() {
            return Err(MetricsError::EmptyDistribution);
        }
        for &v in &values {
            if !v.is_finite() {
                return Err(MetricsError::NonFiniteValue(v));
            }
            if v < 0.0 {
                return Err(MetricsError::NegativeValue(v));
            }
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    fn sorted_ascending(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        // Stable sort: ties keep input (id) order.
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    fn sorted_descending(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.sort_by(|a, b| b.partial_cmp(a).unwrap());
        v
    }
}

/// Cumulative shares of the total held by the bottom-k bridges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LorenzCurve {
    coords: Vec<f64>,
}

impl LorenzCurve {
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

/// Nakamoto coefficient plus the cumulative sums that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NakamotoResult {
    /// Minimum number of top bridges whose combined points reach half the
    /// total.
    pub coefficient: usize,
    /// Descending cumulative sums C_1..C_n used in the search.
    pub cumulative: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("distribution must contain at least one value")]
    EmptyDistribution,
    #[error("distribution values must be non-negative; got {0}")]
    NegativeValue(f64),
    #[error("distribution values must be finite; got {0}")]
    NonFiniteValue(f64),
    #[error("metric undefined for a zero-total distribution")]
    DegenerateDistribution,
    #[error("curves have mismatched lengths: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
}

/// Gini index computed directly from the sorted values:
/// `G = (1 / (n*S)) * sum_i (2i - n - 1) * x_(i)` with `x` ascending.
///
/// Result lies in `[0, (n-1)/n]`. Zero-total and single-value distributions
/// return 0 by convention.
pub fn gini_direct(d: &Distribution) -> f64 {
    let n = d.len();
    let total = d.total();
    if total == 0.0 || n == 1 {
        return 0.0;
    }
    let sorted = d.sorted_ascending();
    let n_f = n as f64;
    let mut acc = 0.0;
    for (i, x) in sorted.iter().enumerate() {
        let rank = (i + 1) as f64;
        acc += (2.0 * rank - n_f - 1.0) * x;
    }
    acc / (n_f * total)
}

/// Lorenz curve of the distribution: values sorted ascending, coordinate `k`
/// is the share of the total held by the bottom `k` bridges.
pub fn lorenz(d: &Distribution) -> Result<LorenzCurve, MetricsError> {
    let total = d.total();
    if total == 0.0 {
        return Err(MetricsError::DegenerateDistribution);
    }
    let sorted = d.sorted_ascending();
    let mut coords = Vec::with_capacity(sorted.len());
    let mut acc = 0.0;
    for x in sorted {
        acc += x;
        coords.push(acc / total);
    }
    Ok(LorenzCurve { coords })
}

/// Gini index from Lorenz coordinates with the trapezoid (mid-point)
/// convention: `G = 1 - (1/n) * sum_k (L_k + L_{k-1})` with `L_0 = 0`.
///
/// This convention makes the Lorenz route agree with [`gini_direct`] exactly
/// (they are algebraically identical), which is the contract the snapshot
/// pipeline relies on. See [`gini_from_lorenz_raw`] for the right-endpoint
/// variant.
pub fn gini_from_lorenz(curve: &LorenzCurve) -> f64 {
    let n = curve.len() as f64;
    let mut acc = 0.0;
    let mut prev = 0.0;
    for &l in curve.coords() {
        acc += l + prev;
        prev = l;
    }
    1.0 - acc / n
}

/// Gini index from Lorenz coordinates with the right-endpoint convention:
/// `G_L = 1 - (2/n) * sum_k L_k`.
///
/// Kept for transparency: at small `n` it differs from [`gini_direct`] by a
/// discretization offset of up to `1/n` (for example `[0, 1]` yields 0.0
/// here versus 0.5 from the direct formula). The trapezoid variant is the
/// canonical one.
pub fn gini_from_lorenz_raw(curve: &LorenzCurve) -> f64 {
    let n = curve.len() as f64;
    let sum: f64 = curve.coords().iter().sum();
    1.0 - 2.0 * sum / n
}

/// Nakamoto coefficient: sort descending and find the smallest `k` whose
/// cumulative sum reaches half the total.
pub fn nakamoto(d: &Distribution) -> Result<NakamotoResult, MetricsError> {
    let total = d.total();
    if total == 0.0 {
        return Err(MetricsError::DegenerateDistribution);
    }
    let sorted = d.sorted_descending();
    let half = total / 2.0;
    let mut cumulative = Vec::with_capacity(sorted.len());
    let mut acc = 0.0;
    let mut coefficient = sorted.len();
    let mut found = false;
    for (i, x) in sorted.iter().enumerate() {
        acc += x;
        cumulative.push(acc);
        if !found && acc >= half {
            coefficient = i + 1;
            found = true;
        }
    }
    Ok(NakamotoResult {
        coefficient,
        cumulative,
    })
}

/// Whether `after` (weakly) Lorenz-dominates `before`: every coordinate of
/// `after` is at least the matching coordinate of `before`, within a 1e-12
/// slack for floating error.
pub fn lorenz_dominates(
    after: &LorenzCurve,
    before: &LorenzCurve,
) -> Result<bool, MetricsError> {
    if after.len() != before.len() {
        return Err(MetricsError::LengthMismatch {
            left: after.len(),
            right: before.len(),
        });
    }
    Ok(after
        .coords()
        .iter()
        .zip(before.coords())
        .all(|(a, b)| *a >= b - 1e-12))
}
