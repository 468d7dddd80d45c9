//! Depth ordering consistency: the share of pixel pairs on different
//! ground-truth layers whose relative order the prediction preserves.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::depth::DepthMap;
use crate::error::{check_dims, Error, Result};

/// How pairs with equal predicted depth are scored. Only one policy exists:
/// a tie never establishes an ordering, so it counts as not preserved.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum TiePolicy {
    #[default]
    PredTieFails,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderMetricConfig {
    /// Number of sampled location pairs; `None` means `max(1, H·W / 50)`.
    pub pair_count: Option<usize>,
    pub seed: u64,
    pub tie_policy: TiePolicy,
}

impl OrderMetricConfig {
    pub fn with_pairs(pair_count: usize, seed: u64) -> Self {
        OrderMetricConfig { pair_count: Some(pair_count), seed, tie_policy: TiePolicy::PredTieFails }
    }

    pub fn pairs_for(&self, pixels: usize) -> usize {
        self.pair_count.unwrap_or(pixels / 50).max(1)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderCounts {
    pub preserved: u64,
    pub kept: u64,
}

impl OrderCounts {
    pub fn ratio(&self) -> Result<f64> {
        if self.kept == 0 {
            return Err(Error::NoValidPairs);
        }
        Ok(self.preserved as f64 / self.kept as f64)
    }

    fn add(self, o: OrderCounts) -> OrderCounts {
        OrderCounts { preserved: self.preserved + o.preserved, kept: self.kept + o.kept }
    }
}

#[inline]
fn score(gt: &[f64], pred: &[f64], p: usize, q: usize) -> OrderCounts {
    let dg = gt[p] - gt[q];
    if dg == 0.0 {
        return OrderCounts::default();
    }
    let dp = pred[p] - pred[q];
    let preserved = dp != 0.0 && (dg > 0.0) == (dp > 0.0);
    OrderCounts { preserved: u64::from(preserved), kept: 1 }
}

/// Location pair number `i`; drawn from its own stream so the sample does not
/// depend on evaluation order.
fn sample_pair(base: &ChaCha8Rng, i: usize, n: usize) -> (usize, usize) {
    let mut rng = base.clone();
    rng.set_stream(i as u64);
    (rng.gen_range(0..n), rng.gen_range(0..n))
}

pub fn order_counts(gt: &DepthMap, pred: &DepthMap, cfg: &OrderMetricConfig) -> Result<OrderCounts> {
    check_dims(gt.width, gt.height, pred.width, pred.height)?;
    let n = gt.len();
    if n == 0 {
        return Err(Error::NoValidPairs);
    }
    let pairs = cfg.pairs_for(n);
    let base = ChaCha8Rng::seed_from_u64(cfg.seed);
    let one = |i: usize| {
        let (p, q) = sample_pair(&base, i, n);
        score(&gt.values, &pred.values, p, q)
    };
    #[cfg(feature = "parallel")]
    let counts = {
        use rayon::prelude::*;
        (0..pairs).into_par_iter().map(one).reduce(OrderCounts::default, OrderCounts::add)
    };
    #[cfg(not(feature = "parallel"))]
    let counts = (0..pairs).map(one).fold(OrderCounts::default(), OrderCounts::add);
    Ok(counts)
}

/// Sampled ordering consistency with uniform, with-replacement location pairs.
/// Pairs on the same ground-truth layer are dropped, not redrawn.
pub fn order_consistency(gt: &DepthMap, pred: &DepthMap, cfg: &OrderMetricConfig) -> Result<f64> {
    order_counts(gt, pred, cfg)?.ratio()
}

/// Same quantity over every unordered pixel pair. Quadratic; meant for small maps.
pub fn order_consistency_exhaustive(gt: &DepthMap, pred: &DepthMap) -> Result<f64> {
    check_dims(gt.width, gt.height, pred.width, pred.height)?;
    let n = gt.len();
    let mut counts = OrderCounts::default();
    for p in 0..n {
        for q in p + 1..n {
            counts = counts.add(score(&gt.values, &pred.values, p, q));
        }
    }
    counts.ratio()
}
