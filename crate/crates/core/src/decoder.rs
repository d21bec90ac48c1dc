//! Bob's decoder and the exact posterior quantities behind event E0.

use std::collections::HashMap;

use rand::Rng;

use crate::bits::BitWord;
use crate::codes::Codebook;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::transcript::MessagePair;

/// Decoding radius; `None` means the adversary's flip budget.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DecoderConfig {
    pub radius: Option<usize>,
}

impl DecoderConfig {
    pub fn radius_or(&self, budget: usize) -> usize {
        self.radius.unwrap_or(budget)
    }
}

/// Minimum-distance decoding with a forced decision.
///
/// Among codewords within `radius` of `y` the closest wins; when none is in
/// range the globally nearest wins. Ties between distinct messages are broken
/// uniformly at random, so on an equidistant output the decision is a fair
/// coin.
pub fn min_distance_decode<R: Rng + ?Sized>(
    cb: &Codebook,
    y: &BitWord,
    radius: usize,
    rng: &mut R,
) -> usize {
    let dists: Vec<(usize, usize)> = cb.iter().map(|(p, x)| (p.u, x.distance(y))).collect();
    let in_ball = dists.iter().any(|&(_, d)| d <= radius);
    let eligible = |d: usize| !in_ball || d <= radius;
    let best = dists
        .iter()
        .filter(|&&(_, d)| eligible(d))
        .map(|&(_, d)| d)
        .min()
        .expect("codebooks are nonempty");
    let mut tied: Vec<usize> = Vec::new();
    for &(u, d) in &dists {
        if d == best && !tied.contains(&u) {
            tied.push(u);
        }
    }
    if tied.len() == 1 {
        tied[0]
    } else {
        tied[rng.random_range(0..tied.len())]
    }
}

/// Entropy of the message marginal of the uniform law on `pairs`.
pub fn message_entropy<T: Real>(pairs: &[MessagePair]) -> T {
    if pairs.is_empty() {
        return T::zero();
    }
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for p in pairs {
        *counts.entry(p.u).or_default() += 1;
    }
    let total = T::from_count(pairs.len());
    let mut keys: Vec<_> = counts.into_iter().collect();
    // fixed summation order keeps results reproducible
    keys.sort_unstable();
    keys.into_iter().fold(T::zero(), |h, (_, c)| {
        let q = T::from_count(c) / total;
        h - q * q.log2()
    })
}

/// `H(U | Y1 = y1)` under the babble-and-push attack: the posterior of
/// `(u, r)` given `y1` is uniform on `B_{y1}`, the pairs whose prefix sits at
/// distance exactly `babble_flips` from `y1`. Empty `B` gives 0.
pub fn posterior_message_entropy<T: Real>(cb: &Codebook, y1: &BitWord, babble_flips: usize) -> T {
    let b: Vec<MessagePair> = cb
        .iter()
        .filter(|(_, x)| y1.distance_to_prefix(x) == babble_flips)
        .map(|(p, _)| p)
        .collect();
    message_entropy(&b)
}

/// Lower bound `max(0, (lambda - 1 - log2 m) / log_support)^(m - 1)` on the
/// probability that `m` i.i.d. draws from a law with entropy at least
/// `lambda` on `2^log_support` points are pairwise distinct.
pub fn sampling_lemma_bound<T: Real>(lambda: T, m: usize, log_support: T) -> T {
    if m <= 1 {
        return T::one();
    }
    let base = (lambda - T::one() - T::from_count(m).log2()) / log_support;
    base.max(T::zero()).powi(m as i32 - 1)
}

/// Largest support and draw count accepted by [`lemma1_oracle`].
pub const ORACLE_MAX_SUPPORT: usize = 64;
pub const ORACLE_MAX_DRAWS: usize = 4;

/// Exact probability that `m` i.i.d. draws from `dist` are all distinct,
/// summed over ordered tuples of distinct support points.
pub fn lemma1_oracle<T: Real>(dist: &[T], m: usize) -> Result<T> {
    if dist.len() > ORACLE_MAX_SUPPORT || m > ORACLE_MAX_DRAWS {
        return Err(Error::TooLarge(format!(
            "support {} / draws {m} (limits {ORACLE_MAX_SUPPORT} / {ORACLE_MAX_DRAWS})",
            dist.len()
        )));
    }
    fn rec<T: Real>(dist: &[T], left: usize, used: &mut Vec<usize>) -> T {
        if left == 0 {
            return T::one();
        }
        let mut acc = T::zero();
        for (i, &q) in dist.iter().enumerate() {
            if q > T::zero() && !used.contains(&i) {
                used.push(i);
                acc = acc + q * rec(dist, left - 1, used);
                used.pop();
            }
        }
        acc
    }
    Ok(rec(dist, m, &mut Vec::with_capacity(m)))
}

/// Shannon entropy in bits of an explicit distribution.
pub fn entropy_of<T: Real>(dist: &[T]) -> T {
    dist.iter()
        .filter(|&&q| q > T::zero())
        .fold(T::zero(), |h, &q| h - q * q.log2())
}
