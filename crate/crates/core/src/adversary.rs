//! Causal jamming strategies.
//!
//! An adversary sees the transmitted codeword one bit at a time through
//! [`CausalAdversary::observe_and_decide`] and must commit to its flip for
//! position `i` before seeing bit `i + 1`. Every strategy carries a hard flip
//! cap of `floor(p n)`.
//!
//! The main strategy is babble-and-push: flip a uniformly random set `Γ` of
//! `floor(pbar n)` positions among the first `ell`, then pick a pair
//! `(u', r')` uniformly among those whose codeword prefix lies at distance
//! exactly `|Γ|` from the received prefix, and on every later position where
//! the transmitted bit disagrees with `x(u', r')` flip with a fair coin.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::BitWord;
use crate::codes::Codebook;
use crate::error::{Error, Result};
use crate::transcript::MessagePair;

/// `floor(x)` that tolerates representation error just below an integer,
/// e.g. `(1/3) * 6`.
pub(crate) fn floor_count(x: f64) -> usize {
    (x + 1e-9).floor().max(0.0) as usize
}

/// Attack parameters together with their resolved integer counts.
#[derive(Clone, Debug, PartialEq)]
pub struct AdversaryConfig {
    pub n: usize,
    /// Flip budget fraction.
    pub p: f64,
    /// Babble fraction, at most `p`.
    pub pbar: f64,
    /// Slack parameter.
    pub epsilon: f64,
    /// `floor(p n)`.
    pub budget: usize,
    /// `floor(pbar n)`.
    pub babble_flips: usize,
    /// `round((alpha + eps/2) n)` clamped into `[babble_flips, n]`.
    pub ell: usize,
    /// `1 - 4 (p - pbar)`.
    pub alpha: f64,
    /// Crossover used by the BSC-mimicking strategy; defaults to `p`.
    pub bsc_crossover: f64,
}

impl AdversaryConfig {
    pub fn new(n: usize, p: f64, pbar: f64, epsilon: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidConfig("block length n must be positive".into()));
        }
        if !(0.0..=0.5).contains(&p) {
            return Err(Error::InvalidConfig(format!("p = {p} must lie in [0, 1/2]")));
        }
        if !(0.0..=p).contains(&pbar) {
            return Err(Error::InvalidConfig(format!(
                "pbar = {pbar} must lie in [0, p] = [0, {p}]"
            )));
        }
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidConfig(format!("epsilon = {epsilon} must be positive")));
        }
        if pbar < p && epsilon >= 2.0 * (p - pbar) {
            return Err(Error::InvalidConfig(format!(
                "epsilon = {epsilon} must be below 2(p - pbar) = {}",
                2.0 * (p - pbar)
            )));
        }
        let nf = n as f64;
        let budget = floor_count(p * nf);
        let babble_flips = floor_count(pbar * nf).min(budget);
        let alpha = 1.0 - 4.0 * (p - pbar);
        let ell = ((alpha + epsilon / 2.0) * nf)
            .round()
            .clamp(babble_flips as f64, nf) as usize;
        Ok(AdversaryConfig {
            n,
            p,
            pbar,
            epsilon,
            budget,
            babble_flips,
            ell,
            alpha,
            bsc_crossover: p,
        })
    }

    pub fn with_bsc_crossover(mut self, q: f64) -> Result<Self> {
        if !(0.0..=self.p).contains(&q) {
            return Err(Error::InvalidConfig(format!(
                "BSC crossover q = {q} must lie in [0, p] = [0, {}]",
                self.p
            )));
        }
        self.bsc_crossover = q;
        Ok(self)
    }

    /// `pbar = p`: babble-and-push degenerates to mimicking a BSC.
    pub fn is_bsc_mode(&self) -> bool {
        self.pbar >= self.p
    }

    /// E0 threshold `n eps / 4` on the posterior message entropy.
    pub fn e0_threshold(&self) -> f64 {
        self.n as f64 * self.epsilon / 4.0
    }

    /// E3 threshold `2 (p - pbar) n - eps n / 8` on the suffix distance.
    pub fn e3_threshold(&self) -> f64 {
        let nf = self.n as f64;
        2.0 * (self.p - self.pbar) * nf - self.epsilon * nf / 8.0
    }

    /// Half-width `eps n / 16` of the E4 window around `d / 2`.
    pub fn e4_half_width(&self) -> f64 {
        self.n as f64 * self.epsilon / 16.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    Passive,
    BscMimic,
    BabblePush,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Passive, Strategy::BscMimic, Strategy::BabblePush];

    /// Instantiates the strategy. Babble-and-push with `pbar = p` runs as the
    /// BSC mimic.
    pub fn build<'a>(
        self,
        cb: &'a Codebook,
        cfg: &'a AdversaryConfig,
    ) -> Box<dyn CausalAdversary + Send + 'a> {
        match self {
            Strategy::Passive => Box::new(Passive::new(cfg)),
            Strategy::BscMimic => Box::new(BscMimic::new(cfg)),
            Strategy::BabblePush if cfg.is_bsc_mode() => Box::new(BscMimic::new(cfg)),
            Strategy::BabblePush => Box::new(BabblePush::new(cb, cfg)),
        }
    }

    /// Whether the built adversary actually runs babble-and-push.
    pub fn runs_babble_push(self, cfg: &AdversaryConfig) -> bool {
        self == Strategy::BabblePush && !cfg.is_bsc_mode()
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Passive => "passive",
            Strategy::BscMimic => "bsc",
            Strategy::BabblePush => "babble-push",
        })
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "passive" => Ok(Strategy::Passive),
            "bsc" | "bsc-mimic" => Ok(Strategy::BscMimic),
            "babble-push" | "babble-and-push" => Ok(Strategy::BabblePush),
            other => Err(format!(
                "unknown strategy {other:?} (expected passive, bsc, babble-push)"
            )),
        }
    }
}

/// Strategy-specific facts recorded into the transcript.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AdversaryRecord {
    pub ell: usize,
    pub gamma: Vec<usize>,
    pub calvin_pair: Option<MessagePair>,
    pub intended_error: Vec<bool>,
    pub truncated: bool,
    pub b_size: Option<usize>,
}

/// A jammer that decides flip `i` from `x_1..x_i`, its own earlier outputs,
/// its private randomness and the public codebook.
pub trait CausalAdversary {
    /// Starts a fresh transmission with the given randomness.
    fn reset(&mut self, seed: u64);

    /// Consumes bit `i` (called for `i = 0, 1, ..., n-1` in order) and
    /// returns whether to flip it.
    fn observe_and_decide(&mut self, i: usize, x_i: bool) -> bool;

    fn record(&self) -> AdversaryRecord {
        AdversaryRecord::default()
    }
}

/// Flip counter with a hard cap.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FlipBudget {
    pub cap: usize,
    pub used: usize,
    /// Set once a requested flip has been refused.
    pub truncated: bool,
}

impl FlipBudget {
    pub fn new(cap: usize) -> Self {
        FlipBudget {
            cap,
            used: 0,
            truncated: false,
        }
    }

    /// Grants a requested flip if the cap allows it.
    pub fn request(&mut self, want: bool) -> bool {
        if !want {
            return false;
        }
        if self.used < self.cap {
            self.used += 1;
            true
        } else {
            self.truncated = true;
            false
        }
    }
}

#[derive(Clone, Debug)]
struct Cursor {
    next: usize,
}

impl Cursor {
    fn advance(&mut self, i: usize) {
        assert_eq!(i, self.next, "bits must be revealed in order (expected {})", self.next);
        self.next += 1;
    }
}

/// Never flips.
#[derive(Clone, Debug)]
pub struct Passive {
    cursor: Cursor,
}

impl Passive {
    pub fn new(_cfg: &AdversaryConfig) -> Self {
        Passive {
            cursor: Cursor { next: 0 },
        }
    }

    pub fn passive_step(&mut self, i: usize, _x_i: bool) -> bool {
        self.cursor.advance(i);
        false
    }
}

impl CausalAdversary for Passive {
    fn reset(&mut self, _seed: u64) {
        self.cursor.next = 0;
    }

    fn observe_and_decide(&mut self, i: usize, x_i: bool) -> bool {
        self.passive_step(i, x_i)
    }
}

/// i.i.d. Bernoulli(q) flips, suppressed once the cap is reached.
#[derive(Clone, Debug)]
pub struct BscMimic {
    q: f64,
    budget: FlipBudget,
    rng: ChaCha8Rng,
    cursor: Cursor,
}

impl BscMimic {
    pub fn new(cfg: &AdversaryConfig) -> Self {
        BscMimic {
            q: cfg.bsc_crossover,
            budget: FlipBudget::new(cfg.budget),
            rng: ChaCha8Rng::seed_from_u64(0),
            cursor: Cursor { next: 0 },
        }
    }

    pub fn bsc_mimic_step(&mut self, i: usize, _x_i: bool) -> bool {
        self.cursor.advance(i);
        let coin = self.rng.random_bool(self.q);
        self.budget.request(coin)
    }
}

impl CausalAdversary for BscMimic {
    fn reset(&mut self, seed: u64) {
        self.rng = ChaCha8Rng::seed_from_u64(seed);
        self.budget = FlipBudget::new(self.budget.cap);
        self.cursor.next = 0;
    }

    fn observe_and_decide(&mut self, i: usize, x_i: bool) -> bool {
        self.bsc_mimic_step(i, x_i)
    }

    fn record(&self) -> AdversaryRecord {
        AdversaryRecord {
            truncated: self.budget.truncated,
            ..AdversaryRecord::default()
        }
    }
}

/// Uniform `k`-subset of `0..ell`, ascending.
pub fn draw_babble_set<R: Rng + ?Sized>(ell: usize, k: usize, rng: &mut R) -> Vec<usize> {
    let mut g = sample(rng, ell, k).into_vec();
    g.sort_unstable();
    g
}

/// `B_{y1}`: pairs whose codeword prefix lies at distance exactly
/// `babble_flips` from `y1`.
pub fn build_b(cb: &Codebook, y1: &BitWord, babble_flips: usize) -> Vec<MessagePair> {
    cb.iter()
        .filter(|(_, x)| y1.distance_to_prefix(x) == babble_flips)
        .map(|(p, _)| p)
        .collect()
}

/// Uniform element of `b`.
pub fn select_push_target<R: Rng + ?Sized>(b: &[MessagePair], rng: &mut R) -> MessagePair {
    assert!(!b.is_empty(), "B_y1 always contains the transmitted pair");
    b[rng.random_range(0..b.len())]
}

/// Push-phase emission rule.
///
/// Disagreement positions draw a fair coin into the intended error vector;
/// the coin is emitted unless the budget is exhausted. Agreement positions
/// emit 0 and draw nothing.
pub fn push_emit(
    x_i: bool,
    target_i: bool,
    budget: &mut FlipBudget,
    intended: &mut Vec<bool>,
    coin: impl FnOnce() -> bool,
) -> bool {
    if x_i == target_i {
        return false;
    }
    let c = coin();
    intended.push(c);
    budget.request(c)
}

/// The babble-and-push attack.
#[derive(Clone, Debug)]
pub struct BabblePush<'a> {
    cb: &'a Codebook,
    cfg: &'a AdversaryConfig,
    rng: ChaCha8Rng,
    gamma: Vec<usize>,
    in_gamma: Vec<bool>,
    y1: Vec<bool>,
    b_size: Option<usize>,
    target: Option<MessagePair>,
    budget: FlipBudget,
    intended: Vec<bool>,
    cursor: Cursor,
}

impl<'a> BabblePush<'a> {
    pub fn new(cb: &'a Codebook, cfg: &'a AdversaryConfig) -> Self {
        assert_eq!(cb.n(), cfg.n, "codebook and config disagree on n");
        let mut adv = BabblePush {
            cb,
            cfg,
            rng: ChaCha8Rng::seed_from_u64(0),
            gamma: Vec::new(),
            in_gamma: Vec::new(),
            y1: Vec::new(),
            b_size: None,
            target: None,
            budget: FlipBudget::new(cfg.budget),
            intended: Vec::new(),
            cursor: Cursor { next: 0 },
        };
        adv.reset(0);
        adv
    }

    pub fn gamma(&self) -> &[usize] {
        &self.gamma
    }

    pub fn target(&self) -> Option<MessagePair> {
        self.target
    }

    fn choose_target(&mut self) {
        let y1 = BitWord::from_bits(self.y1.iter().copied());
        let b = build_b(self.cb, &y1, self.cfg.babble_flips);
        self.b_size = Some(b.len());
        self.target = Some(select_push_target(&b, &mut self.rng));
    }

    /// Phase one: flip exactly the positions in `Γ`.
    pub fn babble_step(&mut self, i: usize, x_i: bool) -> bool {
        assert!(i < self.cfg.ell, "babble_step past the babble phase (i = {i})");
        self.cursor.advance(i);
        let e = self.budget.request(self.in_gamma[i]);
        self.y1.push(x_i ^ e);
        if i + 1 == self.cfg.ell {
            self.choose_target();
        }
        e
    }

    /// Phase two: fair-coin flips where `x` disagrees with the target.
    pub fn push_step(&mut self, i: usize, x_i: bool) -> bool {
        assert!(i >= self.cfg.ell, "push_step inside the babble phase (i = {i})");
        self.cursor.advance(i);
        if self.target.is_none() {
            self.choose_target();
        }
        let target = self.cb.word(self.target.expect("target chosen")).get(i);
        let rng = &mut self.rng;
        push_emit(x_i, target, &mut self.budget, &mut self.intended, || {
            rng.random_bool(0.5)
        })
    }
}

impl CausalAdversary for BabblePush<'_> {
    fn reset(&mut self, seed: u64) {
        self.rng = ChaCha8Rng::seed_from_u64(seed);
        self.gamma = draw_babble_set(self.cfg.ell, self.cfg.babble_flips, &mut self.rng);
        self.in_gamma = vec![false; self.cfg.ell];
        for &g in &self.gamma {
            self.in_gamma[g] = true;
        }
        self.y1.clear();
        self.b_size = None;
        self.target = None;
        self.budget = FlipBudget::new(self.cfg.budget);
        self.intended.clear();
        self.cursor.next = 0;
    }

    fn observe_and_decide(&mut self, i: usize, x_i: bool) -> bool {
        if i < self.cfg.ell {
            self.babble_step(i, x_i)
        } else {
            self.push_step(i, x_i)
        }
    }

    fn record(&self) -> AdversaryRecord {
        AdversaryRecord {
            ell: self.cfg.ell,
            gamma: self.gamma.clone(),
            calvin_pair: self.target,
            intended_error: self.intended.clone(),
            truncated: self.budget.truncated,
            b_size: self.b_size,
        }
    }
}
