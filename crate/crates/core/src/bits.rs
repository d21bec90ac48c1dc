//! Packed binary words.
//!
//! Positions are 0-based throughout the crate. Bit `i` lives in
//! `words[i / 64]` at bit `i % 64`; bits past `len` are kept zero so that
//! equality, hashing and popcounts can work word-at-a-time.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitWord {
    len: usize,
    words: Vec<u64>,
}

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

impl BitWord {
    pub fn zeros(len: usize) -> Self {
        BitWord {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut w = BitWord {
            len,
            words: vec![u64::MAX; words_for(len)],
        };
        w.clear_tail();
        w
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for b in bits {
            if len % WORD == 0 {
                words.push(0);
            }
            if b {
                words[len / WORD] |= 1 << (len % WORD);
            }
            len += 1;
        }
        BitWord { len, words }
    }

    /// Word whose bit `i` is bit `i` of `value`. Requires `len <= 64`.
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= WORD, "from_u64 supports at most 64 bits");
        let mut w = BitWord {
            len,
            words: if len == 0 { Vec::new() } else { vec![value] },
        };
        w.clear_tail();
        w
    }

    /// Inverse of [`BitWord::from_u64`].
    pub fn to_u64(&self) -> u64 {
        assert!(self.len <= WORD, "to_u64 supports at most 64 bits");
        self.words.first().copied().unwrap_or(0)
    }

    /// Uniformly random word.
    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut w = BitWord {
            len,
            words: (0..words_for(len)).map(|_| rng.random()).collect(),
        };
        w.clear_tail();
        w
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if bit {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        let b = self.get(i);
        self.set(i, !b);
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Positions holding a one, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.iter()
            .enumerate()
            .filter_map(|(i, b)| b.then_some(i))
            .collect()
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Hamming distance. Panics if the lengths differ.
    pub fn distance(&self, other: &BitWord) -> usize {
        self.assert_same_len(other);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Distance between `self` and the first `self.len()` bits of `longer`.
    pub fn distance_to_prefix(&self, longer: &BitWord) -> usize {
        assert!(
            self.len <= longer.len,
            "prefix of length {} exceeds word length {}",
            self.len,
            longer.len
        );
        let full = self.len / WORD;
        let mut d: usize = self.words[..full]
            .iter()
            .zip(&longer.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum();
        let rem = self.len % WORD;
        if rem != 0 {
            let mask = (1u64 << rem) - 1;
            d += ((self.words[full] ^ longer.words[full]) & mask).count_ones() as usize;
        }
        d
    }

    /// Number of positions in `start..end` where the two words differ.
    pub fn distance_in_range(&self, other: &BitWord, start: usize, end: usize) -> usize {
        self.assert_same_len(other);
        assert!(start <= end && end <= self.len, "range {start}..{end} out of bounds");
        let mut d = 0;
        let mut i = start;
        while i < end {
            let wi = i / WORD;
            let lo = i % WORD;
            let hi = (end - wi * WORD).min(WORD);
            let span = hi - lo;
            let mask = if span == WORD {
                u64::MAX
            } else {
                ((1u64 << span) - 1) << lo
            };
            d += ((self.words[wi] ^ other.words[wi]) & mask).count_ones() as usize;
            i += span;
        }
        d
    }

    /// Positionwise exclusive-or. Panics if the lengths differ.
    pub fn xor(&self, other: &BitWord) -> BitWord {
        self.assert_same_len(other);
        BitWord {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a ^ b).collect(),
        }
    }

    /// Bits `start..end` as a new word.
    pub fn slice(&self, start: usize, end: usize) -> BitWord {
        assert!(start <= end && end <= self.len, "range {start}..{end} out of bounds");
        BitWord::from_bits((start..end).map(|i| self.get(i)))
    }

    pub fn concat(&self, tail: &BitWord) -> BitWord {
        BitWord::from_bits(self.iter().chain(tail.iter()))
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    fn assert_same_len(&self, other: &BitWord) {
        assert_eq!(
            self.len, other.len,
            "length mismatch: {} vs {}",
            self.len, other.len
        );
    }
}

pub fn hamming_distance(a: &BitWord, b: &BitWord) -> usize {
    a.distance(b)
}

pub fn xor(a: &BitWord, b: &BitWord) -> BitWord {
    a.xor(b)
}

/// Splits `w` into its first `ell` bits and the remainder.
pub fn split(w: &BitWord, ell: usize) -> Result<(BitWord, BitWord)> {
    if ell > w.len() {
        return Err(Error::out_of_range("ell", ell as f64, "[0, n]"));
    }
    Ok((w.slice(0, ell), w.slice(ell, w.len())))
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitWord({self})")
    }
}

impl FromStr for BitWord {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(format!("invalid bit character {other:?}")),
            })
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(BitWord::from_bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> BitWord {
        s.parse().unwrap()
    }

    #[test]
    fn distance_examples() {
        assert_eq!(hamming_distance(&w("0000"), &w("0000")), 0);
        assert_eq!(hamming_distance(&w("0000"), &w("1111")), 4);
        assert_eq!(hamming_distance(&w("1010"), &w("0110")), 2);
    }

    #[test]
    fn xor_examples() {
        assert_eq!(xor(&w("1010"), &w("0000")), w("1010"));
        assert_eq!(xor(&w("1010"), &w("1010")), w("0000"));
        assert_eq!(xor(&w("1100"), &w("0110")), w("1010"));
    }

    #[test]
    fn split_examples() {
        assert_eq!(split(&w("101101"), 3).unwrap(), (w("101"), w("101")));
        assert_eq!(split(&w("1010"), 0).unwrap(), (BitWord::zeros(0), w("1010")));
        assert_eq!(split(&w("1010"), 4).unwrap(), (w("1010"), BitWord::zeros(0)));
        assert!(split(&w("1010"), 5).is_err());
    }

    #[test]
    #[should_panic(expected = "length mismatch")]
    fn distance_length_mismatch_panics() {
        hamming_distance(&w("010"), &w("0101"));
    }

    #[test]
    #[should_panic(expected = "length mismatch")]
    fn xor_length_mismatch_panics() {
        xor(&w("010"), &w("0101"));
    }

    #[test]
    fn ones_and_display() {
        let o = BitWord::ones(70);
        assert_eq!(o.weight(), 70);
        assert_eq!(w("0110").to_string(), "0110");
        assert!("01x".parse::<BitWord>().is_err());
        assert_eq!(BitWord::from_u64(0b0110, 4), w("0110"));
        assert_eq!(w("0110").to_u64(), 0b0110);
    }

    fn arb_pair() -> impl Strategy<Value = (Vec<bool>, Vec<bool>)> {
        (0usize..200).prop_flat_map(|n| {
            (
                proptest::collection::vec(any::<bool>(), n),
                proptest::collection::vec(any::<bool>(), n),
            )
        })
    }

    proptest! {
        #[test]
        fn distance_is_weight_of_xor((a, b) in arb_pair()) {
            let (a, b) = (BitWord::from_bits(a), BitWord::from_bits(b));
            prop_assert_eq!(a.distance(&b), a.xor(&b).weight());
            prop_assert_eq!(a.distance(&b), b.distance(&a));
        }

        #[test]
        fn split_concat_round_trip(bits in proptest::collection::vec(any::<bool>(), 0..200), frac in 0.0f64..=1.0) {
            let word = BitWord::from_bits(bits);
            let ell = (frac * word.len() as f64).floor() as usize;
            let (head, tail) = split(&word, ell).unwrap();
            prop_assert_eq!(head.len(), ell);
            prop_assert_eq!(head.concat(&tail), word);
        }

        #[test]
        fn range_and_prefix_distances_agree((a, b) in arb_pair(), s in 0.0f64..=1.0, t in 0.0f64..=1.0) {
            let (a, b) = (BitWord::from_bits(a), BitWord::from_bits(b));
            let n = a.len();
            let (lo, hi) = {
                let x = (s * n as f64) as usize;
                let y = (t * n as f64) as usize;
                (x.min(y), x.max(y))
            };
            let naive = (lo..hi).filter(|&i| a.get(i) != b.get(i)).count();
            prop_assert_eq!(a.distance_in_range(&b, lo, hi), naive);
            let prefix = a.slice(0, hi);
            prop_assert_eq!(prefix.distance_to_prefix(&b), (0..hi).filter(|&i| a.get(i) != b.get(i)).count());
        }

        #[test]
        fn triangle_inequality(bits in proptest::collection::vec(any::<(bool, bool, bool)>(), 0..150)) {
            let a = BitWord::from_bits(bits.iter().map(|t| t.0));
            let b = BitWord::from_bits(bits.iter().map(|t| t.1));
            let c = BitWord::from_bits(bits.iter().map(|t| t.2));
            prop_assert!(a.distance(&c) <= a.distance(&b) + b.distance(&c));
        }
    }
}
