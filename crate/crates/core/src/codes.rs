//! Deterministic and stochastic codebooks.
//!
//! A codebook lists, for every message `u`, the codewords `x(u, r)` the
//! encoder may send. The joint law of `(u, r)` is uniform over the flattened
//! list of pairs: rational encoder distributions reduce to this form by
//! repeating codewords, so no weights are stored.
//!
//! # Text format
//!
//! ```text
//! # comments and blank lines are ignored
//! <n> <M> <deterministic|stochastic>
//! <u> <r> <bitstring of length n>
//! ...
//! ```
//!
//! Indices are 0-based. Every message `0..M` must appear, and for each
//! message the `r` values must be exactly `0..N_u` (any line order).
//! [`Codebook::to_text`] writes pairs sorted by `(u, r)`.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::BitWord;
use crate::error::{Error, Result};
use crate::transcript::MessagePair;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CodeKind {
    /// One codeword per message, all distinct.
    Deterministic,
    /// Any number of codewords per message.
    Stochastic,
}

impl fmt::Display for CodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CodeKind::Deterministic => "deterministic",
            CodeKind::Stochastic => "stochastic",
        })
    }
}

impl FromStr for CodeKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "deterministic" => Ok(CodeKind::Deterministic),
            "stochastic" => Ok(CodeKind::Stochastic),
            other => Err(format!("unknown code kind {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Codebook {
    n: usize,
    kind: CodeKind,
    lists: Vec<Vec<BitWord>>,
    /// Flattened `(u, r)` listing; index into this is the uniform draw.
    pairs: Vec<MessagePair>,
}

impl Codebook {
    pub fn new(n: usize, lists: Vec<Vec<BitWord>>, kind: CodeKind) -> Result<Self> {
        if lists.is_empty() {
            return Err(Error::InvalidConfig("codebook has no messages".into()));
        }
        for (u, list) in lists.iter().enumerate() {
            if list.is_empty() {
                return Err(Error::InvalidConfig(format!("message {u} has no codewords")));
            }
            if let Some(bad) = list.iter().find(|x| x.len() != n) {
                return Err(Error::InvalidConfig(format!(
                    "message {u} has a codeword of length {} (n = {n})",
                    bad.len()
                )));
            }
        }
        if kind == CodeKind::Deterministic {
            if lists.iter().any(|l| l.len() != 1) {
                return Err(Error::InvalidConfig(
                    "deterministic code needs exactly one codeword per message".into(),
                ));
            }
            let distinct: HashSet<&BitWord> = lists.iter().map(|l| &l[0]).collect();
            if distinct.len() != lists.len() {
                return Err(Error::InvalidConfig(
                    "deterministic code has repeated codewords".into(),
                ));
            }
        }
        let pairs = lists
            .iter()
            .enumerate()
            .flat_map(|(u, l)| (0..l.len()).map(move |r| MessagePair::new(u, r)))
            .collect();
        Ok(Codebook {
            n,
            kind,
            lists,
            pairs,
        })
    }

    /// Deterministic code with one codeword per message.
    pub fn deterministic(n: usize, codewords: Vec<BitWord>) -> Result<Self> {
        Codebook::new(
            n,
            codewords.into_iter().map(|x| vec![x]).collect(),
            CodeKind::Deterministic,
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> CodeKind {
        self.kind
    }

    pub fn num_messages(&self) -> usize {
        self.lists.len()
    }

    /// Number of codewords of message `u`.
    pub fn randomness_count(&self, u: usize) -> usize {
        self.lists.get(u).map_or(0, Vec::len)
    }

    /// Total number of `(u, r)` pairs.
    pub fn num_pairs(&self) -> usize {
        self.pairs.len()
    }

    /// `log2(M) / n`.
    pub fn rate(&self) -> f64 {
        (self.num_messages() as f64).log2() / self.n as f64
    }

    pub fn pair_at(&self, index: usize) -> MessagePair {
        self.pairs[index]
    }

    pub fn pairs(&self) -> &[MessagePair] {
        &self.pairs
    }

    /// The codeword `x(u, r)`.
    pub fn encode(&self, pair: MessagePair) -> Result<&BitWord> {
        self.lists
            .get(pair.u)
            .and_then(|l| l.get(pair.r))
            .ok_or(Error::UnknownPair {
                u: pair.u,
                r: pair.r,
            })
    }

    /// Codeword lookup for pairs known to be valid (e.g. from [`Self::pairs`]).
    pub(crate) fn word(&self, pair: MessagePair) -> &BitWord {
        &self.lists[pair.u][pair.r]
    }

    pub fn iter(&self) -> impl Iterator<Item = (MessagePair, &BitWord)> + '_ {
        self.pairs.iter().map(move |&p| (p, self.word(p)))
    }

    /// Draws `(u, r)` from the uniform joint law.
    pub fn draw_pair<R: Rng + ?Sized>(&self, rng: &mut R) -> MessagePair {
        self.pairs[rng.random_range(0..self.pairs.len())]
    }

    /// Minimum distance over codeword pairs with distinct messages, or
    /// `None` for a single-message code.
    pub fn min_distance(&self) -> Option<usize> {
        let mut best = None;
        for (i, (p, x)) in self.iter().enumerate() {
            for (q, z) in self.iter().skip(i + 1) {
                if p.u != q.u {
                    let d = x.distance(z);
                    best = Some(best.map_or(d, |b: usize| b.min(d)));
                }
            }
        }
        best
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.n, self.num_messages(), self.kind);
        for (p, x) in self.iter() {
            s.push_str(&format!("{} {} {}\n", p.u, p.r, x));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let perr = |line: usize, msg: String| Error::Parse { line, msg };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (hline, header) = lines.next().ok_or_else(|| perr(0, "missing header".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(perr(hline, "header must be `n M kind`".into()));
        }
        let n: usize = fields[0]
            .parse()
            .map_err(|e| perr(hline, format!("bad n: {e}")))?;
        let m: usize = fields[1]
            .parse()
            .map_err(|e| perr(hline, format!("bad M: {e}")))?;
        let kind: CodeKind = fields[2].parse().map_err(|e| perr(hline, e))?;

        let mut slots: Vec<Vec<Option<BitWord>>> = vec![Vec::new(); m];
        for (lno, line) in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 3 {
                return Err(perr(lno, "expected `u r bits`".into()));
            }
            let u: usize = f[0].parse().map_err(|e| perr(lno, format!("bad u: {e}")))?;
            let r: usize = f[1].parse().map_err(|e| perr(lno, format!("bad r: {e}")))?;
            let x: BitWord = f[2].parse().map_err(|e| perr(lno, e))?;
            if u >= m {
                return Err(perr(lno, format!("u = {u} not below M = {m}")));
            }
            if x.len() != n {
                return Err(perr(lno, format!("codeword length {} != n = {n}", x.len())));
            }
            let list = &mut slots[u];
            if list.len() <= r {
                list.resize(r + 1, None);
            }
            if list[r].is_some() {
                return Err(perr(lno, format!("duplicate pair ({u}, {r})")));
            }
            list[r] = Some(x);
        }
        let mut lists = Vec::with_capacity(m);
        for (u, list) in slots.into_iter().enumerate() {
            let list: Option<Vec<BitWord>> = list.into_iter().collect();
            match list {
                Some(l) if !l.is_empty() => lists.push(l),
                _ => {
                    return Err(perr(
                        0,
                        format!("message {u} is missing or has gaps in its r indices"),
                    ))
                }
            }
        }
        Codebook::new(n, lists, kind)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Codebook::from_text(&std::fs::read_to_string(path)?)
    }

    pub fn store(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

/// `M` distinct uniformly drawn codewords of length `n`.
pub fn make_random_code(n: usize, m: usize, seed: u64) -> Result<Codebook> {
    if m == 0 {
        return Err(Error::Infeasible("need at least one message".into()));
    }
    if n < 64 && m > 1usize << n {
        return Err(Error::Infeasible(format!("M = {m} exceeds 2^{n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words: Vec<BitWord> = if n <= 24 {
        // exact sampling without replacement over the whole space
        sample(&mut rng, 1usize << n, m)
            .into_iter()
            .map(|v| BitWord::from_u64(v as u64, n))
            .collect()
    } else {
        let mut seen = HashSet::with_capacity(m);
        let mut out = Vec::with_capacity(m);
        while out.len() < m {
            let w = BitWord::random(n, &mut rng);
            if seen.insert(w.clone()) {
                out.push(w);
            }
        }
        out
    };
    Codebook::deterministic(n, words)
}

/// `{0^n, 1^n}`.
pub fn make_repetition_code(n: usize) -> Result<Codebook> {
    if n == 0 {
        return Err(Error::Infeasible("repetition code needs n >= 1".into()));
    }
    Codebook::deterministic(n, vec![BitWord::zeros(n), BitWord::ones(n)])
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Uniform point of the Hamming ball of `radius` around `center`.
fn ball_point<R: Rng + ?Sized>(center: &BitWord, radius: usize, rng: &mut R) -> BitWord {
    let n = center.len();
    let weights: Vec<f64> = (0..=radius).map(|k| binomial(n, k)).collect();
    let total: f64 = weights.iter().sum();
    let mut t = rng.random::<f64>() * total;
    let mut k = radius;
    for (j, w) in weights.iter().enumerate() {
        if t < *w {
            k = j;
            break;
        }
        t -= w;
    }
    let mut x = center.clone();
    for i in sample(rng, n, k) {
        x.flip(i);
    }
    x
}

/// Stochastic code: each message gets `spread` distinct codewords within
/// Hamming distance `radius` of its own random center. All `M * spread`
/// codewords are distinct. `spread = 1` yields a deterministic code.
pub fn make_stochastic_cloud(
    n: usize,
    m: usize,
    spread: usize,
    radius: usize,
    seed: u64,
) -> Result<Codebook> {
    if m == 0 || spread == 0 {
        return Err(Error::Infeasible("need M >= 1 and spread >= 1".into()));
    }
    let radius = radius.min(n);
    let ball: f64 = (0..=radius).map(|k| binomial(n, k)).sum();
    if (spread as f64) > ball {
        return Err(Error::Infeasible(format!(
            "spread {spread} exceeds the radius-{radius} ball size {ball}"
        )));
    }
    if n < 64 && m.saturating_mul(spread) > 1usize << n {
        return Err(Error::Infeasible(format!(
            "M * spread = {} exceeds 2^{n}",
            m * spread
        )));
    }
    if spread == 1 {
        return make_random_code(n, m, seed);
    }
    const CENTER_ATTEMPTS: usize = 64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut used: HashSet<BitWord> = HashSet::new();
    let mut lists = Vec::with_capacity(m);
    for u in 0..m {
        let mut placed = None;
        for _ in 0..CENTER_ATTEMPTS {
            let center = BitWord::random(n, &mut rng);
            let mut cloud: Vec<BitWord> = Vec::with_capacity(spread);
            let mut tries = 0;
            while cloud.len() < spread && tries < 64 * spread {
                tries += 1;
                let x = ball_point(&center, radius, &mut rng);
                if !used.contains(&x) && !cloud.contains(&x) {
                    cloud.push(x);
                }
            }
            if cloud.len() == spread {
                placed = Some(cloud);
                break;
            }
        }
        let cloud = placed.ok_or_else(|| {
            Error::Infeasible(format!("could not place {spread} fresh codewords for message {u}"))
        })?;
        used.extend(cloud.iter().cloned());
        lists.push(cloud);
    }
    Codebook::new(n, lists, CodeKind::Stochastic)
}

/// `M = ceil(2^(R n))`, the message count used for a requested rate.
pub fn messages_for_rate(rate: f64, n: usize) -> Result<usize> {
    if !(0.0..=1.0).contains(&rate) {
        return Err(Error::out_of_range("rate", rate, "[0, 1]"));
    }
    // absorb representation error such as 0.3 * 10 = 3.0000000000000004
    let m = ((rate * n as f64).exp2() - 1e-9).ceil();
    if m > (1u64 << 40) as f64 {
        return Err(Error::Infeasible(format!("2^(R n) = {m} messages")));
    }
    Ok((m as usize).max(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn random_code_contracts() {
        let cb = make_random_code(4, 2, 7).unwrap();
        assert_eq!(cb.num_messages(), 2);
        assert_ne!(cb.encode(MessagePair::new(0, 0)).unwrap(), cb.encode(MessagePair::new(1, 0)).unwrap());

        let all = make_random_code(5, 32, 1).unwrap();
        let words: HashSet<u64> = all.iter().map(|(_, x)| x.to_u64()).collect();
        assert_eq!(words, (0..32).collect());

        assert_eq!(make_random_code(30, 50, 3).unwrap(), make_random_code(30, 50, 3).unwrap());
        assert_eq!(make_random_code(8, 50, 3).unwrap(), make_random_code(8, 50, 3).unwrap());
        assert!(make_random_code(3, 9, 0).is_err());
    }

    #[test]
    fn repetition_code() {
        let cb = make_repetition_code(3).unwrap();
        assert_eq!(cb.encode(MessagePair::new(0, 0)).unwrap().to_string(), "000");
        assert_eq!(cb.encode(MessagePair::new(1, 0)).unwrap().to_string(), "111");
        assert_eq!(cb.min_distance(), Some(3));
        let one = make_repetition_code(1).unwrap();
        assert_eq!(one.to_text(), "1 2 deterministic\n0 0 0\n1 0 1\n");
        assert!(cb.encode(MessagePair::new(2, 0)).is_err());
        assert!(cb.encode(MessagePair::new(0, 1)).is_err());
    }

    #[test]
    fn cloud_construction() {
        let cb = make_stochastic_cloud(4, 2, 2, 1, 11).unwrap();
        assert_eq!(cb.kind(), CodeKind::Stochastic);
        assert_eq!(cb.num_pairs(), 4);
        let all: HashSet<&BitWord> = cb.iter().map(|(_, x)| x).collect();
        assert_eq!(all.len(), 4);
        // two codewords within radius 1 of a common center are within 2 of each other
        for u in 0..2 {
            let a = cb.encode(MessagePair::new(u, 0)).unwrap();
            let b = cb.encode(MessagePair::new(u, 1)).unwrap();
            assert!(a.distance(b) <= 2);
        }
        let det = make_stochastic_cloud(6, 3, 1, 2, 5).unwrap();
        assert_eq!(det.kind(), CodeKind::Deterministic);
        assert!(make_stochastic_cloud(4, 2, 6, 1, 0).is_err());
        assert!(make_stochastic_cloud(3, 5, 2, 3, 0).is_err());
    }

    #[test]
    fn distinct_r_can_differ() {
        let cb = make_stochastic_cloud(10, 3, 3, 3, 2).unwrap();
        let a = cb.encode(MessagePair::new(1, 0)).unwrap();
        let b = cb.encode(MessagePair::new(1, 1)).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn uniform_pair_law() {
        let cb = make_stochastic_cloud(8, 3, 2, 2, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut counts = [0usize; 6];
        let trials = 60_000;
        for _ in 0..trials {
            let p = cb.draw_pair(&mut rng);
            counts[p.u * 2 + p.r] += 1;
        }
        let expect = trials as f64 / 6.0;
        let sigma = (trials as f64 * (1.0 / 6.0) * (5.0 / 6.0)).sqrt();
        for c in counts {
            assert!((c as f64 - expect).abs() < 5.0 * sigma);
        }
    }

    #[test]
    fn deterministic_rejects_duplicates() {
        let w: BitWord = "0101".parse().unwrap();
        assert!(Codebook::deterministic(4, vec![w.clone(), w.clone()]).is_err());
        let st = Codebook::new(4, vec![vec![w.clone()], vec![w]], CodeKind::Stochastic).unwrap();
        assert_eq!(st.num_pairs(), 2);
    }

    #[test]
    fn text_format_errors() {
        assert!(Codebook::from_text("").is_err());
        assert!(Codebook::from_text("4 1 deterministic\n0 0 010\n").is_err());
        assert!(Codebook::from_text("3 2 deterministic\n0 0 010\n").is_err());
        assert!(Codebook::from_text("3 1 stochastic\n0 1 010\n").is_err());
        assert!(Codebook::from_text("3 1 weird\n0 0 010\n").is_err());
        assert!(Codebook::from_text("3 1 stochastic\n0 0 010\n0 0 011\n").is_err());
        let cb = Codebook::from_text("# two words\n3 2 stochastic\n\n1 0 111\n0 0 000\n").unwrap();
        assert_eq!(cb.to_text(), "3 2 stochastic\n0 0 000\n1 0 111\n");
    }

    #[test]
    fn rate_accounting() {
        assert_eq!(messages_for_rate(0.5, 8).unwrap(), 16);
        assert_eq!(messages_for_rate(0.3, 10).unwrap(), 8);
        let cb = make_random_code(8, 16, 0).unwrap();
        assert_eq!(cb.rate(), 0.5);
    }

    proptest! {
        #[test]
        fn text_round_trip(n in 1usize..12, m in 1usize..5, spread in 1usize..3, seed in any::<u64>()) {
            let cb = make_stochastic_cloud(n, m, spread, n, seed);
            prop_assume!(cb.is_ok());
            let cb = cb.unwrap();
            let back = Codebook::from_text(&cb.to_text()).unwrap();
            prop_assert_eq!(back, cb);
        }
    }
}
