//! Shipped instances for the exact and crafted checks.
//!
//! The codebooks live in `fixtures/*.code` (text format, see
//! [`codes`](crate::codes)); the attack parameters each was designed for are
//! fixed here.

use crate::adversary::AdversaryConfig;
use crate::bounds::optimal_pbar;
use crate::codes::Codebook;
use crate::error::Result;

const SYMMETRY_PAIR: &str = include_str!("../fixtures/symmetry_pair.code");
const SYMMETRY_STOCHASTIC: &str = include_str!("../fixtures/symmetry_stochastic.code");
const SYMMETRIZATION_PAIR: &str = include_str!("../fixtures/symmetrization_pair.code");

/// Two codewords, `n = 6`, babble phase of 2 positions with one flip,
/// suffixes 2 apart.
pub fn symmetry_pair() -> Result<(Codebook, AdversaryConfig)> {
    let cb = Codebook::from_text(SYMMETRY_PAIR)?;
    let cfg = AdversaryConfig::new(6, 11.0 / 30.0, 1.0 / 6.0, 0.2)?;
    Ok((cb, cfg))
}

/// Two messages with two codewords each, `n = 12`, babble phase of 2
/// positions with one flip, budget 3.
pub fn symmetry_stochastic() -> Result<(Codebook, AdversaryConfig)> {
    let cb = Codebook::from_text(SYMMETRY_STOCHASTIC)?;
    let cfg = AdversaryConfig::new(12, 0.3, 1.0 / 12.0, 0.1)?;
    Ok((cb, cfg))
}

/// Two messages at `n = 64` whose codewords share a prefix and differ in
/// their last 4 bits. Under babble-and-push at `p = 0.2` with the optimal
/// babble fraction and `eps = 0.1`, E3 always holds and, given E2 and E4,
/// the output is equidistant from both codewords.
pub fn symmetrization_pair() -> Result<(Codebook, AdversaryConfig)> {
    let cb = Codebook::from_text(SYMMETRIZATION_PAIR)?;
    let cfg = AdversaryConfig::new(64, 0.2, optimal_pbar(0.2)?, 0.1)?;
    Ok((cb, cfg))
}
