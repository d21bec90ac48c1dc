//! Oracle suites behind the `verify` command.
//!
//! Each suite compares a closed form or a fast routine against a slow,
//! independent computation and reports one [`Check`] per property.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{
    a0_constant, brute_force_a, bsc_departure_threshold, capacity_upper, objective_derivative,
    optimal_pbar, plotkin_max,
};
use crate::decoder::{entropy_of, lemma1_oracle, sampling_lemma_bound};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::harness::exact_symmetry_check;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Bounds,
    Plotkin,
    Lemma1,
    Symmetry,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 5] = ["bounds", "plotkin", "lemma1", "symmetry", "all"];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = match self {
            Suite::Bounds => 0,
            Suite::Plotkin => 1,
            Suite::Lemma1 => 2,
            Suite::Symmetry => 3,
            Suite::All => 4,
        };
        f.write_str(Self::NAMES[i])
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bounds" => Ok(Suite::Bounds),
            "plotkin" => Ok(Suite::Plotkin),
            "lemma1" => Ok(Suite::Lemma1),
            "symmetry" => Ok(Suite::Symmetry),
            "all" => Ok(Suite::All),
            _ => Err(Error::InvalidConfig(format!(
                "unknown suite '{s}' (expected one of {})",
                Self::NAMES.join(", ")
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub property: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(suite: &'static str, property: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            suite,
            property: property.into(),
            passed,
            detail: detail.into(),
        }
    }

    pub fn csv_header() -> &'static str {
        "suite,property,passed,detail"
    }

    /// CSV row; the detail field is quoted.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},\"{}\"",
            self.suite,
            self.property,
            self.passed,
            self.detail.replace('"', "\"\"")
        )
    }
}

pub fn run_suite(suite: Suite) -> Result<Vec<Check>> {
    match suite {
        Suite::Bounds => bounds_suite(),
        Suite::Plotkin => plotkin_suite(),
        Suite::Lemma1 => lemma1_suite(),
        Suite::Symmetry => symmetry_suite(),
        Suite::All => {
            let mut all = bounds_suite()?;
            all.extend(plotkin_suite()?);
            all.extend(lemma1_suite()?);
            all.extend(symmetry_suite()?);
            Ok(all)
        }
    }
}

/// Objective `alpha (1 - H(x / alpha))` evaluated from scratch.
fn objective(p: f64, x: f64) -> f64 {
    let a = 1.0 - 4.0 * (p - x);
    if a <= 0.0 {
        return 0.0;
    }
    let r = (x / a).min(1.0);
    let h = |q: f64| if q <= 0.0 || q >= 1.0 { 0.0 } else { -q * q.log2() - (1.0 - q) * (1.0 - q).log2() };
    a * (1.0 - h(r))
}

/// Minimiser of the objective over `x in {0, step, 2 step, ...} u {p}`.
pub fn grid_argmin(p: f64, step: f64) -> (f64, f64) {
    let mut best = (p, objective(p, p));
    let steps = (p / step).floor() as u64;
    for i in 0..=steps {
        let x = i as f64 * step;
        let v = objective(p, x);
        if v < best.1 {
            best = (x, v);
        }
    }
    best
}

pub const GRID_STEP: f64 = 1e-6;
pub const GRID_POINTS: usize = 200;

fn bounds_suite() -> Result<Vec<Check>> {
    const S: &str = "bounds";
    let mut out = Vec::new();

    let a0: f64 = a0_constant();
    let cubic = a0.powi(3) - 11.0 * a0 * a0 - 5.0 * a0 - 1.0;
    out.push(Check::new(S, "a0_value", (a0 - 11.4445).abs() <= 1e-4, format!("a0 = {a0}")));
    out.push(Check::new(S, "a0_cubic_root", cubic.abs() <= 1e-9, format!("residual {cubic:e}")));

    let mut worst_x = 0.0f64;
    let mut worst_v = 0.0f64;
    for i in 0..GRID_POINTS {
        let p = 0.25 * i as f64 / (GRID_POINTS - 1) as f64;
        let (gx, gv) = grid_argmin(p, GRID_STEP);
        worst_x = worst_x.max((gx - optimal_pbar(p)?).abs());
        worst_v = worst_v.max((gv - capacity_upper(p)?).abs());
    }
    out.push(Check::new(
        S,
        "optimal_pbar_vs_grid",
        worst_x <= 1e-5,
        format!("max |grid - closed form| = {worst_x:e} over {GRID_POINTS} points"),
    ));
    out.push(Check::new(
        S,
        "c_upper_vs_grid",
        worst_v <= 1e-6,
        format!("max |grid min - c_upper| = {worst_v:e}"),
    ));

    let t: f64 = bsc_departure_threshold();
    let mut sign_fail = 0;
    let mut sampled = 0;
    for i in 1..GRID_POINTS {
        let p = 0.25 * i as f64 / GRID_POINTS as f64;
        if p <= t {
            for f in [0.1, 0.5, 0.9] {
                sampled += 1;
                sign_fail += (objective_derivative(p, f * p)? >= 0.0) as usize;
            }
            continue;
        }
        let root: f64 = optimal_pbar(p)?;
        for f in [0.5, 0.9, 0.99] {
            sampled += 1;
            sign_fail += (objective_derivative(p, f * root)? >= 0.0) as usize;
        }
        for f in [1.01, 1.1, 1.5] {
            let x = f * root;
            if x <= p {
                sampled += 1;
                sign_fail += (objective_derivative(p, x)? <= 0.0) as usize;
            }
        }
    }
    out.push(Check::new(
        S,
        "derivative_signs",
        sign_fail == 0,
        format!("{sign_fail} sign violations at {sampled} sampled points"),
    ));

    let mut worst_ratio = 0.0f64;
    for i in 1..=100 {
        let p = t + (0.25 - t) * i as f64 / 101.0;
        let pb: f64 = optimal_pbar(p)?;
        let a = 1.0 - 4.0 * (p - pb);
        worst_ratio = worst_ratio.max((pb / a - t).abs());
    }
    out.push(Check::new(
        S,
        "interior_ratio",
        worst_ratio <= 1e-9,
        format!("max |pbar*/alpha* - 1/(a0+1)| = {worst_ratio:e}"),
    ));

    let c = capacity_upper(0.25f64)?;
    out.push(Check::new(S, "zero_at_quarter", c == 0.0, format!("c_upper(1/4) = {c}")));
    Ok(out)
}

fn plotkin_suite() -> Result<Vec<Check>> {
    const S: &str = "plotkin";
    let mut out = Vec::new();
    for n in 1..=10 {
        for d in (n / 2 + 1)..=n {
            let pm = plotkin_max(n, d)?;
            let bf = brute_force_a(n, d)?;
            out.push(Check::new(
                S,
                format!("n{n}_d{d}"),
                pm >= bf,
                format!("plotkin {pm} brute force {bf}"),
            ));
        }
    }
    let (pm, bf) = (plotkin_max(2, 2)?, brute_force_a(2, 2)?);
    out.push(Check::new(S, "tight_n2_d2", pm == bf, format!("plotkin {pm} brute force {bf}")));
    Ok(out)
}

pub const LEMMA1_DISTRIBUTIONS: usize = 100;
pub const LEMMA1_SEED: u64 = 0x1e44a1;

/// Random law on at most 16 points, plus a draw count in `1..=3`.
pub fn random_lemma1_case(rng: &mut ChaCha8Rng) -> (Vec<f64>, usize) {
    let support = rng.random_range(1..=16usize);
    let skew = rng.random_range(0.5..4.0f64);
    let raw: Vec<f64> = (0..support).map(|_| rng.random::<f64>().powf(skew) + 1e-3).collect();
    let total: f64 = raw.iter().sum();
    let m = rng.random_range(1..=3usize);
    (raw.into_iter().map(|q| q / total).collect(), m)
}

fn lemma1_suite() -> Result<Vec<Check>> {
    const S: &str = "lemma1";
    let mut rng = ChaCha8Rng::seed_from_u64(LEMMA1_SEED);
    let mut out = Vec::new();
    for i in 0..LEMMA1_DISTRIBUTIONS {
        let (dist, m) = random_lemma1_case(&mut rng);
        let h = entropy_of(&dist);
        let exact: f64 = lemma1_oracle(&dist, m)?;
        let bound = sampling_lemma_bound(h, m, 4.0);
        out.push(Check::new(
            S,
            format!("case{i}"),
            exact + 1e-12 >= bound,
            format!("support {} m {m} H {h:.4} exact {exact:.6} bound {bound:.6}", dist.len()),
        ));
    }
    Ok(out)
}

fn symmetry_suite() -> Result<Vec<Check>> {
    const S: &str = "symmetry";
    let mut out = Vec::new();
    for (name, (cb, cfg)) in [
        ("symmetry_pair", fixtures::symmetry_pair()?),
        ("symmetry_stochastic", fixtures::symmetry_stochastic()?),
    ] {
        let r = exact_symmetry_check(&cb, &cfg)?;
        out.push(Check::new(
            S,
            name,
            r.passed() && !r.vacuous(),
            format!(
                "{} paths, {} keys, {} outputs, violations key {} law {} complement {}",
                r.paths, r.keys_checked, r.outputs_checked, r.key_violations, r.law_violations, r.complement_violations
            ),
        ));
    }
    Ok(out)
}
