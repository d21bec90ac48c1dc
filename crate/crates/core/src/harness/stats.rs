use crate::adversary::AdversaryConfig;
use crate::codes::Codebook;
use crate::numfmt::format_sig;
use crate::transcript::EventFlags;

use super::diagnostics::gamma_fraction;
use super::events::{compute_events, symmetrization_holds};
use super::TrialOutcome;

/// Campaigns estimate gamma only on trials with `|B|` at most this.
pub const STATS_GAMMA_MAX_B: usize = 512;

/// The per-trial facts that feed [`TrialStats`].
#[derive(Clone, Debug, PartialEq)]
pub struct TrialSummary {
    /// Decoder error in a trial whose flips were all granted.
    pub error: bool,
    pub events: EventFlags,
    pub babble_push: bool,
    pub truncated: bool,
    pub budget_used: usize,
    pub b_size: Option<usize>,
    pub gamma: Option<f64>,
    /// Symmetrization distance check, when it applies.
    pub symmetrized: Option<bool>,
}

impl TrialSummary {
    pub fn from_outcome(o: &TrialOutcome, cb: &Codebook, cfg: &AdversaryConfig) -> Self {
        let t = &o.transcript;
        let babble_push = t.calvin_pair.is_some();
        let gamma = if babble_push && t.b_size.is_some_and(|b| b <= STATS_GAMMA_MAX_B) {
            let report = compute_events(t, cb, cfg);
            Some(gamma_fraction(cb, &report.b, t.ell, cfg.e3_threshold()))
        } else {
            None
        };
        TrialSummary {
            // a truncated trial is a failed attack, not a decoding error
            error: o.error && !t.truncated,
            events: t.events,
            babble_push,
            truncated: t.truncated,
            budget_used: t.budget_used,
            b_size: t.b_size,
            gamma,
            symmetrized: symmetrization_holds(t, cb),
        }
    }
}

/// Aggregated campaign counters.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrialStats {
    pub trials: u64,
    pub errors: u64,
    pub e0: u64,
    pub e2: u64,
    pub e3: u64,
    pub e4: u64,
    pub e2_e3: u64,
    pub e2_e3_e4: u64,
    /// Decoding errors among trials with E2, E3 and E4.
    pub errors_given_events: u64,
    /// Trials in which the flip cap refused at least one requested flip.
    pub budget_exhausted: u64,
    pub flips_total: u64,
    pub gamma_sum: f64,
    pub gamma_trials: u64,
    pub b_min: Option<usize>,
    pub b_max: Option<usize>,
    pub b_sum: u64,
    pub b_trials: u64,
    /// Trials where the symmetrization distance check applied.
    pub sym_checked: u64,
    pub sym_violations: u64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

const COLUMNS: [&str; 21] = [
    "trials",
    "errors",
    "error_rate",
    "e0",
    "e2",
    "e3",
    "e4",
    "e2_e3",
    "e2_e3_e4",
    "errors_given_events",
    "error_rate_given_events",
    "e4_fail_given_e2_e3",
    "budget_exhausted",
    "mean_budget_used",
    "gamma_estimate",
    "gamma_trials",
    "b_min",
    "b_mean",
    "b_max",
    "sym_checked",
    "sym_violations",
];

impl TrialStats {
    pub fn absorb(&mut self, s: &TrialSummary) {
        let f = s.events;
        self.trials += 1;
        self.errors += s.error as u64;
        self.e0 += f.e0 as u64;
        self.e2 += f.e2 as u64;
        self.e3 += f.e3 as u64;
        self.e4 += f.e4 as u64;
        self.e2_e3 += (f.e2 && f.e3) as u64;
        self.e2_e3_e4 += f.symmetrizing() as u64;
        self.errors_given_events += (f.symmetrizing() && s.error) as u64;
        self.budget_exhausted += s.truncated as u64;
        self.flips_total += s.budget_used as u64;
        if let Some(g) = s.gamma {
            self.gamma_sum += g;
            self.gamma_trials += 1;
        }
        if let Some(b) = s.b_size {
            self.b_min = Some(self.b_min.map_or(b, |m| m.min(b)));
            self.b_max = Some(self.b_max.map_or(b, |m| m.max(b)));
            self.b_sum += b as u64;
            self.b_trials += 1;
        }
        if let Some(ok) = s.symmetrized {
            self.sym_checked += 1;
            self.sym_violations += (!ok) as u64;
        }
    }

    /// Combines two disjoint campaigns. Counters add exactly; `gamma_sum`
    /// is a float sum, so merge in a fixed order for bit-identical output.
    pub fn merge(&mut self, o: &TrialStats) {
        self.trials += o.trials;
        self.errors += o.errors;
        self.e0 += o.e0;
        self.e2 += o.e2;
        self.e3 += o.e3;
        self.e4 += o.e4;
        self.e2_e3 += o.e2_e3;
        self.e2_e3_e4 += o.e2_e3_e4;
        self.errors_given_events += o.errors_given_events;
        self.budget_exhausted += o.budget_exhausted;
        self.flips_total += o.flips_total;
        self.gamma_sum += o.gamma_sum;
        self.gamma_trials += o.gamma_trials;
        self.b_min = match (self.b_min, o.b_min) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.b_max = self.b_max.max(o.b_max);
        self.b_sum += o.b_sum;
        self.b_trials += o.b_trials;
        self.sym_checked += o.sym_checked;
        self.sym_violations += o.sym_violations;
    }

    /// Average error probability estimate.
    pub fn error_rate(&self) -> f64 {
        ratio(self.errors, self.trials)
    }

    pub fn error_rate_given_events(&self) -> f64 {
        ratio(self.errors_given_events, self.e2_e3_e4)
    }

    pub fn e4_failures_given_e2_e3(&self) -> u64 {
        self.e2_e3 - self.e2_e3_e4
    }

    pub fn e4_fail_rate_given_e2_e3(&self) -> f64 {
        ratio(self.e4_failures_given_e2_e3(), self.e2_e3)
    }

    pub fn mean_budget_used(&self) -> f64 {
        ratio(self.flips_total, self.trials)
    }

    /// Mean over trials of the fraction of close, distinct-message pairs
    /// in `B_{y1}`.
    pub fn gamma_estimate(&self) -> f64 {
        if self.gamma_trials == 0 {
            0.0
        } else {
            self.gamma_sum / self.gamma_trials as f64
        }
    }

    pub fn b_mean(&self) -> f64 {
        ratio(self.b_sum, self.b_trials)
    }

    pub fn csv_header() -> String {
        COLUMNS.join(",")
    }

    /// One CSV row in [`Self::csv_header`] order. Missing `|B|` extremes
    /// (no babble-and-push trials) are written as empty fields.
    pub fn csv_row(&self) -> String {
        let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
        [
            self.trials.to_string(),
            self.errors.to_string(),
            format_sig(self.error_rate()),
            self.e0.to_string(),
            self.e2.to_string(),
            self.e3.to_string(),
            self.e4.to_string(),
            self.e2_e3.to_string(),
            self.e2_e3_e4.to_string(),
            self.errors_given_events.to_string(),
            format_sig(self.error_rate_given_events()),
            self.e4_failures_given_e2_e3().to_string(),
            self.budget_exhausted.to_string(),
            format_sig(self.mean_budget_used()),
            format_sig(self.gamma_estimate()),
            self.gamma_trials.to_string(),
            opt(self.b_min),
            format_sig(self.b_mean()),
            opt(self.b_max),
            self.sym_checked.to_string(),
            self.sym_violations.to_string(),
        ]
        .join(",")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn summary(error: bool, e2: bool, e3: bool, e4: bool, b: usize) -> TrialSummary {
        TrialSummary {
            error,
            events: EventFlags { e0: true, e2, e3, e4 },
            babble_push: true,
            truncated: false,
            budget_used: 3,
            b_size: Some(b),
            gamma: Some(0.5),
            symmetrized: (e2 && e3 && e4).then_some(true),
        }
    }

    #[test]
    fn counts_and_conditionals() {
        let mut s = TrialStats::default();
        s.absorb(&summary(true, true, true, true, 2));
        s.absorb(&summary(false, true, true, false, 5));
        s.absorb(&summary(true, false, true, true, 1));
        assert_eq!(s.trials, 3);
        assert_eq!(s.errors, 2);
        assert_eq!(s.e2_e3, 2);
        assert_eq!(s.e2_e3_e4, 1);
        assert_eq!(s.errors_given_events, 1);
        assert_eq!(s.e4_failures_given_e2_e3(), 1);
        assert_eq!((s.b_min, s.b_max), (Some(1), Some(5)));
        assert_eq!(s.sym_checked, 1);
        assert!(s.errors <= s.trials && s.errors_given_events <= s.e2_e3_e4);
    }

    #[test]
    fn merge_matches_sequential_absorb() {
        let items: Vec<TrialSummary> = (0..10)
            .map(|k| summary(k % 3 == 0, k % 2 == 0, k % 5 != 0, k % 4 != 1, k + 1))
            .collect();
        let mut all = TrialStats::default();
        items.iter().for_each(|s| all.absorb(s));
        let (mut a, mut b) = (TrialStats::default(), TrialStats::default());
        items[..4].iter().for_each(|s| a.absorb(s));
        items[4..].iter().for_each(|s| b.absorb(s));
        a.merge(&b);
        assert_eq!(a, all);
    }

    #[test]
    fn csv_shape() {
        let s = TrialStats::default();
        assert_eq!(
            TrialStats::csv_header().split(',').count(),
            s.csv_row().split(',').count()
        );
        assert!(TrialStats::csv_header().starts_with("trials,errors,error_rate,"));
    }
}
