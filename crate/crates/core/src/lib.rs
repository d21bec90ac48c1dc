//! Simulation and bounds toolkit for binary channels jammed by a causal
//! (online) adversary.
//!
//! The crate is organised bottom-up:
//!
//! - [`bits`]: packed binary words and Hamming-space primitives.
//! - [`transcript`]: message/randomness pairs and the per-trial attack record.
//! - [`bounds`]: the babble-and-push capacity upper bound, its closed-form
//!   minimiser, Plotkin's bound and comparison curves.
//! - [`codes`]: deterministic and stochastic codebooks plus a text format.
//! - [`adversary`]: causal jamming strategies behind a bit-by-bit interface.
//! - [`decoder`]: minimum-distance decoding and exact posterior quantities.
//! - [`harness`]: trial driver, event bookkeeping, Monte Carlo aggregation
//!   and exact enumeration checks.
//! - [`verify`]: oracle suites used by the `verify` command.
//!
//! The floating-point math is generic over [`Real`] (`f32`/`f64`); the
//! aliases below pin the double-precision instantiations used by the CLI.

pub mod adversary;
pub mod bits;
pub mod bounds;
pub mod codes;
pub mod decoder;
mod error;
pub mod fixtures;
pub mod harness;
pub mod numfmt;
mod scalar;
pub mod transcript;
pub mod verify;

pub use adversary::{AdversaryConfig, CausalAdversary, Strategy};
pub use bits::BitWord;
pub use codes::{CodeKind, Codebook};
pub use decoder::DecoderConfig;
pub use error::{Error, Result};
pub use harness::{TrialStats, TrialOutcome};
pub use scalar::Real;
pub use transcript::{AttackTranscript, EventFlags, MessagePair};

/// Double-precision bound point, the form serialised by the CLI.
pub type BoundPoint = bounds::BoundPoint<f64>;
/// Single-precision bound point.
pub type BoundPoint32 = bounds::BoundPoint<f32>;
/// Exact probabilities used by the enumeration checks.
pub type Exact = num_rational::Ratio<u128>;
