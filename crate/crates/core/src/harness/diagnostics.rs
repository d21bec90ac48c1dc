use crate::adversary::{build_b, draw_babble_set, AdversaryConfig};
use crate::bits::BitWord;
use crate::codes::{CodeKind, Codebook};
use crate::error::{Error, Result};
use crate::transcript::MessagePair;

use super::trial_rng;

/// Largest `B_{y1}` the gamma diagnostic will enumerate.
pub const GAMMA_MAX_B: usize = 10_000;

/// Fraction of ordered pairs in `b` (diagonal included) with distinct
/// messages and push-phase distance below `threshold`.
pub fn gamma_fraction(cb: &Codebook, b: &[MessagePair], ell: usize, threshold: f64) -> f64 {
    if b.is_empty() {
        return 0.0;
    }
    let n = cb.n();
    let mut hits = 0u64;
    for &a in b {
        for &c in b {
            if a.u != c.u && (cb.word(a).distance_in_range(cb.word(c), ell, n) as f64) < threshold {
                hits += 1;
            }
        }
    }
    hits as f64 / (b.len() * b.len()) as f64
}

/// Gamma for an observed babble output `y1`.
pub fn gamma_diagnostic(cb: &Codebook, y1: &BitWord, cfg: &AdversaryConfig) -> Result<f64> {
    if y1.len() != cfg.ell {
        return Err(Error::InvalidConfig(format!(
            "y1 has length {} but the babble phase has length {}",
            y1.len(),
            cfg.ell
        )));
    }
    let b = build_b(cb, y1, cfg.babble_flips);
    if b.len() > GAMMA_MAX_B {
        return Err(Error::TooLarge(format!(
            "|B| = {} exceeds {GAMMA_MAX_B}",
            b.len()
        )));
    }
    Ok(gamma_fraction(cb, &b, cfg.ell, cfg.e3_threshold()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BSizeReport {
    pub trials: u64,
    pub min: usize,
    pub max: usize,
    pub mean: f64,
    /// `2^{eps n / 4} / 2`.
    pub threshold: f64,
    /// Fraction of trials with `|B| >= threshold`.
    pub above_threshold: f64,
}

/// Empirical law of `|B_{y1}|` under the babble phase.
pub fn b_size_diagnostic(cb: &Codebook, cfg: &AdversaryConfig, trials: u64, seed: u64) -> Result<BSizeReport> {
    if cb.kind() != CodeKind::Deterministic {
        return Err(Error::InvalidConfig("b_size_diagnostic needs a deterministic codebook".into()));
    }
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    let threshold = (cfg.n as f64 * cfg.epsilon / 4.0).exp2() / 2.0;
    let (mut min, mut max, mut sum, mut above) = (usize::MAX, 0, 0u64, 0u64);
    for t in 0..trials {
        let mut rng = trial_rng(seed, t);
        let pair = cb.draw_pair(&mut rng);
        let mut y1 = cb.word(pair).slice(0, cfg.ell);
        for g in draw_babble_set(cfg.ell, cfg.babble_flips, &mut rng) {
            y1.flip(g);
        }
        let size = build_b(cb, &y1, cfg.babble_flips).len();
        min = min.min(size);
        max = max.max(size);
        sum += size as u64;
        above += (size as f64 >= threshold) as u64;
    }
    Ok(BSizeReport {
        trials,
        min,
        max,
        mean: sum as f64 / trials as f64,
        threshold,
        above_threshold: above as f64 / trials as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::make_random_code;

    fn w(s: &str) -> BitWord {
        s.parse().unwrap()
    }

    #[test]
    fn gamma_examples() {
        let cb = Codebook::deterministic(4, vec![w("0000"), w("0001"), w("1100")]).unwrap();
        assert_eq!(gamma_fraction(&cb, &[MessagePair::new(0, 0)], 2, 2.0), 0.0);
        // suffixes 00 and 01 sit at distance 1 < 2: 2 of 4 ordered pairs
        let b = [MessagePair::new(0, 0), MessagePair::new(1, 0)];
        assert_eq!(gamma_fraction(&cb, &b, 2, 2.0), 0.5);

        let stoch = Codebook::new(4, vec![vec![w("0000"), w("0001")]], CodeKind::Stochastic).unwrap();
        let b = [MessagePair::new(0, 0), MessagePair::new(0, 1)];
        assert_eq!(gamma_fraction(&stoch, &b, 2, 2.0), 0.0);
    }

    #[test]
    fn gamma_diagnostic_checks_inputs() {
        let cb = Codebook::deterministic(8, vec![w("00000000"), w("11000000")]).unwrap();
        let cfg = AdversaryConfig::new(8, 0.25, 0.125, 0.1).unwrap();
        assert!(gamma_diagnostic(&cb, &w("0"), &cfg).is_err());
        let y1 = BitWord::zeros(cfg.ell);
        let g = gamma_diagnostic(&cb, &y1, &cfg).unwrap();
        assert!((0.0..=1.0).contains(&g));
    }

    #[test]
    fn single_codeword_has_b_of_one() {
        let cb = Codebook::deterministic(10, vec![w("0110100110")]).unwrap();
        let cfg = AdversaryConfig::new(10, 0.2, 0.1, 0.1).unwrap();
        let r = b_size_diagnostic(&cb, &cfg, 50, 1).unwrap();
        assert_eq!((r.min, r.max), (1, 1));
    }

    #[test]
    fn all_words_code_has_exact_b() {
        let n = 8;
        let words: Vec<BitWord> = (0..1u64 << n).map(|v| BitWord::from_u64(v, n)).collect();
        let cb = Codebook::deterministic(n, words).unwrap();
        let cfg = AdversaryConfig::new(n, 0.25, 0.125, 0.1).unwrap();
        let (ell, k) = (cfg.ell, cfg.babble_flips);
        let choose = (0..k).fold(1usize, |a, i| a * (ell - i) / (i + 1));
        let expected = choose << (n - ell);
        let r = b_size_diagnostic(&cb, &cfg, 40, 2).unwrap();
        assert_eq!((r.min, r.max), (expected, expected));
    }

    #[test]
    fn random_code_mean_matches_expectation() {
        let (n, m) = (20, 4096);
        let cb = make_random_code(n, m, 11).unwrap();
        let cfg = AdversaryConfig::new(n, 0.2, 0.05, 0.1).unwrap();
        let (ell, k) = (cfg.ell, cfg.babble_flips);
        let choose = (0..k).fold(1.0, |a, i| a * (ell - i) as f64 / (i + 1) as f64);
        // the sent pair is always in B; the other m - 1 join independently
        let expected = 1.0 + (m - 1) as f64 * choose / (ell as f64).exp2();
        let r = b_size_diagnostic(&cb, &cfg, 2000, 3).unwrap();
        assert!((r.mean - expected).abs() < 0.1 * expected, "{} vs {expected}", r.mean);
        assert!(b_size_diagnostic(
            &Codebook::new(4, vec![vec![w("0000"), w("1111")]], CodeKind::Stochastic).unwrap(),
            &AdversaryConfig::new(4, 0.25, 0.0, 0.1).unwrap(),
            1,
            0
        )
        .is_err());
    }
}
