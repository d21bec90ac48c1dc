use crate::adversary::{build_b, AdversaryConfig};
use crate::codes::Codebook;
use crate::decoder::message_entropy;
use crate::transcript::{AttackTranscript, EventFlags, MessagePair};

#[derive(Clone, Debug, PartialEq)]
pub struct EventReport {
    pub flags: EventFlags,
    /// `B_{y1}` recomputed from the transcript.
    pub b: Vec<MessagePair>,
    /// `H(U | Y1 = y1)` in bits.
    pub posterior_entropy: f64,
    /// Push-phase disagreement count between `x` and `x'`.
    pub suffix_distance: usize,
}

/// Evaluates E0, E2, E3 and E4 on a babble-and-push transcript.
///
/// Transcripts without a push target get all-false flags.
pub fn compute_events(t: &AttackTranscript, cb: &Codebook, cfg: &AdversaryConfig) -> EventReport {
    let Some(target) = t.calvin_pair else {
        return EventReport {
            flags: EventFlags::default(),
            b: Vec::new(),
            posterior_entropy: 0.0,
            suffix_distance: 0,
        };
    };
    let n = t.x.len();
    let y1 = t.y.slice(0, t.ell);
    let b = build_b(cb, &y1, cfg.babble_flips);
    let posterior_entropy: f64 = message_entropy(&b);

    let x_prime = cb.encode(target).expect("push target comes from the codebook");
    let d = t.x.distance_in_range(x_prime, t.ell, n);
    debug_assert_eq!(t.intended_error.len(), d);

    let e4 = if d == 0 {
        // the window collapses to wt = 0, which is what the push emits
        true
    } else {
        let w = t.intended_error.weight() as f64;
        let mid = d as f64 / 2.0;
        let h = cfg.e4_half_width();
        mid - h < w && w < mid + h
    };
    EventReport {
        flags: EventFlags {
            e0: posterior_entropy >= cfg.e0_threshold(),
            e2: target.u != t.alice_pair.u,
            e3: d as f64 <= cfg.e3_threshold(),
            e4,
        },
        b,
        posterior_entropy,
        suffix_distance: d,
    }
}

/// For transcripts with E2, E3, E4 and no truncated flip, whether the output
/// is within the budget of both the sent codeword and the push target.
/// `None` when the condition does not apply.
pub fn symmetrization_holds(t: &AttackTranscript, cb: &Codebook) -> Option<bool> {
    let target = t.calvin_pair?;
    if !t.events.symmetrizing() || t.truncated {
        return None;
    }
    let x_prime = cb.encode(target).ok()?;
    Some(t.y.distance(&t.x) <= t.budget && t.y.distance(x_prime) <= t.budget)
}
