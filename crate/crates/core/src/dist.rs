//! Exact finitely-supported probability tables.
//!
//! Outcomes are configurations of at most 64 bits (edges or spins), stored as
//! `u64` masks with bit `i` for index `i`.

use std::collections::BTreeMap;

use crate::bits::EdgeConfig;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    bits: usize,
    probs: BTreeMap<u64, f64>,
}

impl Distribution {
    pub fn point(bits: usize, outcome: u64) -> Self {
        assert!(bits <= 64);
        let mut probs = BTreeMap::new();
        probs.insert(outcome, 1.0);
        Self { bits, probs }
    }

    /// Normalises nonnegative weights. Repeated outcomes are summed; zero
    /// weights are dropped.
    pub fn from_weights<I: IntoIterator<Item = (u64, f64)>>(bits: usize, weights: I) -> Result<Self> {
        if bits > 64 {
            return Err(Error::CapExceeded {
                what: "outcome width",
                actual: bits,
                limit: 64,
            });
        }
        let mut probs = BTreeMap::new();
        for (k, w) in weights {
            if w.is_nan() || w < 0.0 || w.is_infinite() {
                return Err(Error::InvalidArgument(format!("weight {w} for outcome {k:#x}")));
            }
            if w > 0.0 {
                *probs.entry(k).or_insert(0.0) += w;
            }
        }
        let total: f64 = probs.values().sum();
        if total <= 0.0 {
            return Err(Error::InvalidArgument("all weights vanish".into()));
        }
        for p in probs.values_mut() {
            *p /= total;
        }
        Ok(Self { bits, probs })
    }

    /// Weights given in log space, normalised stably.
    pub fn from_log_weights<I: IntoIterator<Item = (u64, f64)>>(bits: usize, log_weights: I) -> Result<Self> {
        let lw: Vec<(u64, f64)> = log_weights.into_iter().filter(|(_, l)| *l > f64::NEG_INFINITY).collect();
        let max = lw.iter().map(|(_, l)| *l).fold(f64::NEG_INFINITY, f64::max);
        if !max.is_finite() {
            return Err(Error::InvalidArgument("all weights vanish".into()));
        }
        Self::from_weights(bits, lw.into_iter().map(|(k, l)| (k, (l - max).exp())))
    }

    /// Uniform law on the given distinct outcomes.
    pub fn uniform<I: IntoIterator<Item = u64>>(bits: usize, outcomes: I) -> Result<Self> {
        Self::from_weights(bits, outcomes.into_iter().map(|k| (k, 1.0)))
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn prob(&self, outcome: u64) -> f64 {
        self.probs.get(&outcome).copied().unwrap_or(0.0)
    }

    pub fn prob_config(&self, c: &EdgeConfig) -> f64 {
        self.prob(c.to_mask())
    }

    pub fn support_len(&self) -> usize {
        self.probs.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.probs.iter().map(|(k, p)| (*k, *p))
    }

    pub fn total(&self) -> f64 {
        self.probs.values().sum()
    }

    /// Probability of the outcomes accepted by `event`.
    pub fn prob_of<F: Fn(u64) -> bool>(&self, event: F) -> f64 {
        self.iter().filter(|(k, _)| event(*k)).map(|(_, p)| p).sum()
    }

    pub fn expectation<F: Fn(u64) -> f64>(&self, f: F) -> f64 {
        self.iter().map(|(k, p)| p * f(k)).sum()
    }

    /// Law of the image under an arbitrary map of outcomes.
    pub fn map<F: Fn(u64) -> u64>(&self, bits: usize, f: F) -> Self {
        let mut probs = BTreeMap::new();
        for (k, p) in self.iter() {
            *probs.entry(f(k)).or_insert(0.0) += p;
        }
        Self { bits, probs }
    }

    /// Marginal on the listed indices; bit `i` of the result is index `idx[i]`.
    pub fn marginal(&self, idx: &[usize]) -> Self {
        self.map(idx.len(), |k| project(k, idx))
    }

    /// Law of two independent draws, concatenated: `self` in the low bits.
    pub fn product(&self, other: &Self) -> Result<Self> {
        let bits = self.bits + other.bits;
        if bits > 64 {
            return Err(Error::CapExceeded {
                what: "product outcome width",
                actual: bits,
                limit: 64,
            });
        }
        let mut probs = BTreeMap::new();
        for (a, pa) in self.iter() {
            for (b, pb) in other.iter() {
                *probs.entry(a | (b << self.bits)).or_insert(0.0) += pa * pb;
            }
        }
        Ok(Self { bits, probs })
    }

    /// Checks nonnegativity and normalisation within `tol`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        if self.probs.values().any(|p| p.is_nan() || *p < 0.0) {
            return Err(Error::InvalidArgument("negative probability".into()));
        }
        if self.bits < 64 && self.probs.keys().any(|k| k >> self.bits != 0) {
            return Err(Error::InvalidArgument("outcome wider than declared".into()));
        }
        let t = self.total();
        if (t - 1.0).abs() > tol {
            return Err(Error::InvalidArgument(format!("total mass {t}")));
        }
        Ok(())
    }
}

/// Total variation distance `½ Σ |p − q|`.
pub fn tv_distance(a: &Distribution, b: &Distribution) -> Result<f64> {
    if a.bits != b.bits {
        return Err(Error::Mismatch(format!("{} vs {} outcome bits", a.bits, b.bits)));
    }
    let mut s = 0.0;
    for (k, p) in a.iter() {
        s += (p - b.prob(k)).abs();
    }
    for (k, q) in b.iter() {
        if !a.probs.contains_key(&k) {
            s += q;
        }
    }
    Ok(0.5 * s)
}

/// Packs bits `idx[0], idx[1], …` of `k` into the low bits of the result.
pub fn project(k: u64, idx: &[usize]) -> u64 {
    idx.iter().enumerate().fold(0u64, |m, (i, &j)| m | (((k >> j) & 1) << i))
}
