//! Randomized greedy selection rules, driven by a fixed, seedable,
//! platform-independent generator.
//!
//! Two rules are provided. [`reservoir_select`] scans a candidate stream
//! keeping the running minimum cost and lets any candidate within a factor
//! `alpha` of it displace the current selection with probability `1/r`.
//! [`top2_select`] picks the best move with probability 2/3 and the second
//! best with probability 1/3. Both are deterministic functions of the seed
//! and the candidate order, which each caller fixes and documents.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// A seeded pseudo-random stream. The generator is ChaCha with 8 rounds:
/// identical seeds produce identical sequences on every platform.
///
/// A `RandomSource` is single-owner; concurrent replications each derive
/// their own independent stream with [`RandomSource::replication`].
#[derive(Debug, Clone)]
pub struct RandomSource {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        RandomSource {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent stream for replication `index` of a multi-start run
    /// seeded with `master_seed`. Streams never overlap, so the multiset
    /// of per-replication results is the same however replications are
    /// scheduled.
    pub fn replication(master_seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(index);
        RandomSource {
            seed: master_seed,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform draw from `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random()
    }

    /// Uniform index in `[0, n)`.
    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    /// Bernoulli draw with success probability `p`.
    pub fn chance(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    /// Two distinct uniform indices in `[0, n)`; requires `n >= 2`.
    pub fn distinct_pair(&mut self, n: usize) -> (usize, usize) {
        assert!(n >= 2);
        let a = self.index(n);
        let mut b = self.index(n - 1);
        if b >= a {
            b += 1;
        }
        (a, b)
    }
}

/// The factor by which a candidate's cost may exceed the running minimum
/// and still be eligible for random selection. `alpha = 1` is pure greedy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaRule {
    alpha: f64,
}

impl AlphaRule {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha < 1.0 {
            return Err(Error::InvalidAlpha { alpha });
        }
        Ok(AlphaRule { alpha })
    }

    /// Deterministic greedy: always the first candidate attaining the
    /// minimum cost.
    pub fn greedy() -> Self {
        AlphaRule { alpha: 1.0 }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

impl Default for AlphaRule {
    fn default() -> Self {
        AlphaRule { alpha: 1.5 }
    }
}

/// Scans `candidates` in order, maintaining the best cost seen so far.
/// A new best cost becomes the selection and resets the replacement
/// counter `r` to 1. Any later candidate with cost below `alpha` times the
/// running best increments `r` and displaces the selection with
/// probability `1/r`. Returns the id selected when the stream ends.
///
/// With `alpha = 1` no displacement is possible, so the result is the
/// first candidate attaining the minimum cost.
pub fn reservoir_select<I, It>(candidates: It, rule: AlphaRule, rng: &mut RandomSource) -> Result<I>
where
    I: Copy,
    It: IntoIterator<Item = (I, f64)>,
{
    let mut selected: Option<I> = None;
    let mut best = f64::INFINITY;
    let mut r = 1u64;
    for (id, cost) in candidates {
        debug_assert!(
            cost.is_finite() && cost >= 0.0,
            "costs must be finite and non-negative"
        );
        if cost < best {
            best = cost;
            selected = Some(id);
            r = 1;
        } else if cost < rule.alpha() * best {
            r += 1;
            if rng.chance(1.0 / r as f64) {
                selected = Some(id);
            }
        }
    }
    selected.ok_or(Error::EmptyCandidates)
}

/// Returns `best` with probability 2/3 and `second` with probability 1/3;
/// `best` always wins when there is no runner-up.
pub fn top2_select<I>(best: I, second: Option<I>, rng: &mut RandomSource) -> I {
    match second {
        Some(second) if !rng.chance(2.0 / 3.0) => second,
        _ => best,
    }
}
