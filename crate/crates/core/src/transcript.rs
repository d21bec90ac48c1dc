//! Message/randomness pairs and the per-trial attack record.

use std::fmt;

use crate::bits::BitWord;
use crate::error::{Error, Result};

/// Message index `u` and encoder-randomness index `r`, both 0-based.
///
/// The valid ranges are owned by the [`Codebook`](crate::Codebook) the pair
/// refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MessagePair {
    pub u: usize,
    pub r: usize,
}

impl MessagePair {
    pub const fn new(u: usize, r: usize) -> Self {
        MessagePair { u, r }
    }
}

impl fmt::Display for MessagePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.r)
    }
}

/// Analysis events of the babble-and-push attack.
///
/// `e0`: the posterior message entropy after the babble phase is at least
/// `n eps / 4`. `e2`: the push target carries a different message.
/// `e3`: the push-phase suffixes are close. `e4`: the intended error weight
/// lies in the window around half the suffix disagreement.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct EventFlags {
    pub e0: bool,
    pub e2: bool,
    pub e3: bool,
    pub e4: bool,
}

impl EventFlags {
    /// `E2 ∧ E3 ∧ E4`, the condition under which the output is symmetrized.
    pub fn symmetrizing(&self) -> bool {
        self.e2 && self.e3 && self.e4
    }
}

/// Full record of one transmission under attack.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttackTranscript {
    pub x: BitWord,
    pub e: BitWord,
    pub y: BitWord,
    /// Length of the babble phase (0 for strategies without one).
    pub ell: usize,
    /// Babble positions, ascending, all `< ell`.
    pub gamma: Vec<usize>,
    pub alice_pair: MessagePair,
    /// Push target chosen by the adversary, if the strategy has one.
    pub calvin_pair: Option<MessagePair>,
    /// Fair coins drawn on the push-phase disagreement positions, in order.
    pub intended_error: BitWord,
    /// Resolved flip budget `floor(p n)`.
    pub budget: usize,
    pub budget_used: usize,
    /// True when some intended flip was suppressed by the budget.
    pub truncated: bool,
    /// `|B_{y1}|`, the number of candidate pairs after the babble phase.
    pub b_size: Option<usize>,
    pub events: EventFlags,
}

impl AttackTranscript {
    /// Checks `y = x ⊕ e`, the budget, and the babble-set shape.
    ///
    /// `babble_flips` is the expected `|Γ|`, when the strategy babbles.
    pub fn validate(&self, babble_flips: Option<usize>) -> Result<()> {
        let n = self.x.len();
        if self.e.len() != n || self.y.len() != n {
            return Err(Error::Invariant(format!(
                "lengths x={} e={} y={}",
                n,
                self.e.len(),
                self.y.len()
            )));
        }
        if self.x.xor(&self.e) != self.y {
            return Err(Error::Invariant("y != x xor e".into()));
        }
        let used = self.e.weight();
        if used != self.budget_used {
            return Err(Error::Invariant(format!(
                "budget_used {} disagrees with wt(e) = {used}",
                self.budget_used
            )));
        }
        if used > self.budget {
            return Err(Error::Invariant(format!(
                "adversary used {used} flips with budget {}",
                self.budget
            )));
        }
        if self.ell > n {
            return Err(Error::Invariant(format!("ell = {} exceeds n = {n}", self.ell)));
        }
        if let Some(k) = babble_flips {
            if self.gamma.len() != k {
                return Err(Error::Invariant(format!(
                    "|gamma| = {} but babble_flips = {k}",
                    self.gamma.len()
                )));
            }
        }
        if self.gamma.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invariant("gamma not strictly ascending".into()));
        }
        if self.gamma.last().is_some_and(|&g| g >= self.ell) {
            return Err(Error::Invariant("gamma escapes the babble phase".into()));
        }
        Ok(())
    }
}
