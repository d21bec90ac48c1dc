//! Exhaustive enumeration of the babble-and-push coin space on tiny codes.
//!
//! Every path (Alice's pair, babble set, push target, push coins) has
//! probability `1 / (P * C(ell, k) * |B| * 2^d)`. Paths are grouped by the
//! key `(y1, u, r, u', r')` and the output `y`; only paths whose push coins
//! were emitted in full and whose weight lies in the E4 window contribute to
//! the output law.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::adversary::{build_b, AdversaryConfig, FlipBudget};
use crate::bits::BitWord;
use crate::codes::Codebook;
use crate::error::{Error, Result};
use crate::transcript::MessagePair;
use crate::Exact;

pub const EXACT_MAX_N: usize = 12;
pub const EXACT_MAX_PAIRS: usize = 4;
/// Cap on the number of enumerated paths.
pub const EXACT_MAX_OUTCOMES: u128 = 1 << 24;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymmetryReport {
    /// Enumerated paths.
    pub paths: u64,
    /// Keys with distinct messages and close suffixes.
    pub keys_checked: usize,
    /// `(key, y)` combinations compared against the swapped key.
    pub outputs_checked: usize,
    /// Keys whose probability differs from the swapped key's.
    pub key_violations: usize,
    /// Outputs whose conditional probability differs under the swap.
    pub law_violations: usize,
    /// Coin vectors whose complement has a different probability.
    pub complement_violations: usize,
    /// Total probability of all paths; exactly one on success.
    pub total_mass: Exact,
}

impl SymmetryReport {
    pub fn passed(&self) -> bool {
        self.key_violations == 0
            && self.law_violations == 0
            && self.complement_violations == 0
            && self.total_mass == Exact::one()
    }

    /// No key satisfied E2 and E3, so the check holds vacuously.
    pub fn vacuous(&self) -> bool {
        self.keys_checked == 0
    }
}

type Key = (BitWord, MessagePair, MessagePair);

#[derive(Default)]
struct KeyLaw {
    mass: Exact,
    outputs: BTreeMap<BitWord, Exact>,
    coins: BTreeMap<Vec<bool>, Exact>,
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn in_e4_window(d: usize, w: usize, half_width: f64) -> bool {
    if d == 0 {
        return w == 0;
    }
    let mid = d as f64 / 2.0;
    let w = w as f64;
    mid - half_width < w && w < mid + half_width
}

fn check_preconditions(cb: &Codebook, cfg: &AdversaryConfig) -> Result<()> {
    if cb.n() != cfg.n {
        return Err(Error::InvalidConfig(format!(
            "codebook has n = {} but the attack is configured for n = {}",
            cb.n(),
            cfg.n
        )));
    }
    if cfg.is_bsc_mode() {
        return Err(Error::InvalidConfig(
            "exact symmetry check needs pbar < p (babble-and-push mode)".into(),
        ));
    }
    if cb.n() > EXACT_MAX_N || cb.num_pairs() > EXACT_MAX_PAIRS {
        return Err(Error::TooLarge(format!(
            "exact enumeration supports n <= {EXACT_MAX_N} and at most {EXACT_MAX_PAIRS} pairs, got n = {} with {} pairs",
            cb.n(),
            cb.num_pairs()
        )));
    }
    let suffix = cb.n() - cfg.ell;
    let paths = cb.num_pairs() as u128
        * binomial(cfg.ell, cfg.babble_flips)
        * cb.num_pairs() as u128
        * (1u128 << suffix);
    if paths > EXACT_MAX_OUTCOMES {
        return Err(Error::TooLarge(format!(
            "coin space of up to {paths} paths exceeds {EXACT_MAX_OUTCOMES}"
        )));
    }
    Ok(())
}

/// Verifies the swap symmetry of the output law exactly.
///
/// For every key `(y1, u, r, u', r')` with `u != u'` and suffix distance
/// within the E3 threshold, and every output `y` reachable through an
/// untruncated in-window push, checks
/// `P(y | y1, u, r, u', r') = P(y | y1, u', r', u, r)` in rational
/// arithmetic, together with equal key probabilities and equal probability
/// of each coin vector and its complement.
pub fn exact_symmetry_check(cb: &Codebook, cfg: &AdversaryConfig) -> Result<SymmetryReport> {
    check_preconditions(cb, cfg)?;
    let n = cb.n();
    let ell = cfg.ell;
    let k = cfg.babble_flips;
    let half = cfg.e4_half_width();
    let babble_sets = subsets(ell, k);
    let p_den = cb.num_pairs() as u128 * babble_sets.len() as u128;

    let mut laws: BTreeMap<Key, KeyLaw> = BTreeMap::new();
    let mut report = SymmetryReport {
        total_mass: Exact::zero(),
        ..Default::default()
    };

    for (alice, x) in cb.iter() {
        for gamma in &babble_sets {
            let mut y1 = x.slice(0, ell);
            let mut budget = FlipBudget::new(cfg.budget);
            for &g in gamma {
                if budget.request(true) {
                    y1.flip(g);
                }
            }
            let b = build_b(cb, &y1, k);
            for &target in &b {
                let x2 = cb.encode(target)?;
                let diff: Vec<usize> = (ell..n).filter(|&i| x.get(i) != x2.get(i)).collect();
                let d = diff.len();
                let weight = Exact::new(1, p_den * b.len() as u128 * (1u128 << d));
                let law = laws.entry((y1.clone(), alice, target)).or_default();
                for mask in 0u64..(1u64 << d) {
                    report.paths += 1;
                    report.total_mass += weight;
                    law.mass += weight;
                    let coins: Vec<bool> = (0..d).map(|j| mask >> j & 1 == 1).collect();
                    let mut push = budget.clone();
                    let mut y = y1.concat(&x.slice(ell, n));
                    for (j, &pos) in diff.iter().enumerate() {
                        if push.request(coins[j]) {
                            y.flip(pos);
                        }
                    }
                    let w = coins.iter().filter(|&&c| c).count();
                    if push.truncated || !in_e4_window(d, w, half) {
                        continue;
                    }
                    *law.outputs.entry(y).or_insert_with(Exact::zero) += weight;
                    *law.coins.entry(coins).or_insert_with(Exact::zero) += weight;
                }
            }
        }
    }

    let empty = KeyLaw::default();
    for ((y1, a, c), law) in &laws {
        if a.u == c.u {
            continue;
        }
        let x = cb.encode(*a)?;
        let x2 = cb.encode(*c)?;
        let d = x.distance_in_range(x2, ell, n);
        if d as f64 > cfg.e3_threshold() {
            continue;
        }
        report.keys_checked += 1;
        let swapped = laws.get(&(y1.clone(), *c, *a)).unwrap_or(&empty);
        if swapped.mass != law.mass {
            report.key_violations += 1;
        }
        for (y, mass) in &law.outputs {
            report.outputs_checked += 1;
            let other = swapped.outputs.get(y).copied().unwrap_or_else(Exact::zero);
            // equal key masses make joint and conditional equality coincide;
            // compare conditionals so a key mismatch is not double counted
            let lhs = *mass / law.mass;
            let rhs = if swapped.mass.is_zero() {
                Exact::zero()
            } else {
                other / swapped.mass
            };
            if lhs != rhs {
                report.law_violations += 1;
            }
        }
        for (coins, mass) in &law.coins {
            let comp: Vec<bool> = coins.iter().map(|&c| !c).collect();
            if law.coins.get(&comp) != Some(mass) {
                report.complement_violations += 1;
            }
        }
    }
    Ok(report)
}
