//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use jamsim_core::bits::BitWord;
use jamsim_core::bounds::{
    a0_constant, brute_force_a, bsc_departure_threshold, capacity_upper, objective_derivative,
    optimal_pbar, plotkin_max,
};
use jamsim_core::codes::{make_random_code, make_repetition_code, make_stochastic_cloud};
use jamsim_core::decoder::sampling_lemma_bound;
use jamsim_core::fixtures;
use jamsim_core::harness::{exact_symmetry_check, monte_carlo, run_campaign};
use jamsim_core::{AdversaryConfig, CausalAdversary, Codebook, DecoderConfig, Strategy};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        passed,
        detail: detail.into(),
    }
}

fn h2(q: f64) -> f64 {
    if q <= 0.0 || q >= 1.0 {
        0.0
    } else {
        -q * q.log2() - (1.0 - q) * (1.0 - q).log2()
    }
}

fn objective(p: f64, x: f64) -> f64 {
    let a = 1.0 - 4.0 * (p - x);
    if a <= 0.0 {
        0.0
    } else {
        a * (1.0 - h2((x / a).min(1.0)))
    }
}

fn within(t: Instant, limit: Duration) -> (bool, String) {
    let e = t.elapsed();
    (e < limit, format!("{:.2?} (limit {:?})", e, limit))
}

fn c1_bound_curve() -> Verdict {
    let t = Instant::now();
    let zero = capacity_upper(0.25f64).unwrap() == 0.0;
    let thr: f64 = bsc_departure_threshold();
    let mut worst = 0.0f64;
    for i in 0..=2000 {
        let p = thr * i as f64 / 2000.0;
        worst = worst.max((capacity_upper(p).unwrap() - (1.0 - h2(p))).abs());
    }
    let mut departure = 0.0;
    let mut p = 0.07;
    while p <= 0.1 {
        if (capacity_upper(p).unwrap() - (1.0 - h2(p))).abs() <= 1e-9 {
            departure = p;
        }
        p += 1e-6;
    }
    let (fast, time) = within(t, Duration::from_secs(1));
    verdict(
        zero && worst <= 1e-12 && (0.0800..=0.0807).contains(&departure) && fast,
        format!("C(1/4)=0 {zero}, max |C-(1-H)| below 1/(a0+1) = {worst:e}, departure at {departure:.6}, {time}"),
    )
}

fn c2_closed_form() -> Verdict {
    let t = Instant::now();
    let a0: f64 = a0_constant();
    let residual = a0.powi(3) - 11.0 * a0 * a0 - 5.0 * a0 - 1.0;
    let mut worst = 0.0f64;
    for i in 0..200 {
        let p = 0.25 * i as f64 / 199.0;
        let mut best = (p, objective(p, p));
        let steps = (p / 1e-6).floor() as u64;
        for j in 0..=steps {
            let x = j as f64 * 1e-6;
            let v = objective(p, x);
            if v < best.1 {
                best = (x, v);
            }
        }
        worst = worst.max((best.0 - optimal_pbar(p).unwrap()).abs());
    }
    let thr: f64 = bsc_departure_threshold();
    let mut sign_errors = 0;
    for i in 1..50 {
        let p = thr + (0.25 - thr) * i as f64 / 50.0;
        let root = optimal_pbar(p).unwrap();
        for f in [0.3, 0.8, 0.99] {
            sign_errors += (objective_derivative(p, f * root).unwrap() >= 0.0) as usize;
        }
        for f in [1.01, 1.2, 2.0] {
            if f * root <= p {
                sign_errors += (objective_derivative(p, f * root).unwrap() <= 0.0) as usize;
            }
        }
    }
    let (fast, time) = within(t, Duration::from_secs(30));
    verdict(
        (a0 - 11.4445).abs() <= 1e-4 && residual.abs() <= 1e-9 && worst <= 1e-5 && sign_errors == 0 && fast,
        format!("a0 = {a0:.6}, cubic residual {residual:e}, max grid gap {worst:e}, sign errors {sign_errors}, {time}"),
    )
}

fn c3_interior_ratio() -> Verdict {
    let thr: f64 = bsc_departure_threshold();
    let mut worst = 0.0f64;
    for i in 1..=100 {
        let p = thr + (0.25 - thr) * i as f64 / 101.0;
        let pb = optimal_pbar(p).unwrap();
        worst = worst.max((pb / (1.0 - 4.0 * (p - pb)) - thr).abs());
    }
    verdict(worst <= 1e-9, format!("max deviation {worst:e} over 100 points"))
}

fn c4_plotkin() -> Verdict {
    let t = Instant::now();
    let mut bad = Vec::new();
    let mut cases = 0;
    for n in 1..=10 {
        for d in n / 2 + 1..=n {
            cases += 1;
            let (pm, bf) = (plotkin_max(n, d).unwrap(), brute_force_a(n, d).unwrap());
            if pm < bf {
                bad.push((n, d));
            }
        }
    }
    let tight = plotkin_max(2, 2).unwrap() == brute_force_a(2, 2).unwrap();
    let (fast, time) = within(t, Duration::from_secs(60));
    verdict(
        bad.is_empty() && tight && fast,
        format!("{cases} cases, violations {bad:?}, tight at (2,2) {tight}, {time}"),
    )
}

/// All-distinct probability by inclusion-exclusion over coincidences.
fn all_distinct(dist: &[f64], m: usize) -> f64 {
    let s = |k: i32| dist.iter().map(|q| q.powi(k)).sum::<f64>();
    match m {
        0 | 1 => 1.0,
        2 => 1.0 - s(2),
        3 => 1.0 - 3.0 * s(2) + 2.0 * s(3),
        _ => unreachable!(),
    }
}

fn c5_lemma1() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut failures = 0;
    let mut min_slack = f64::INFINITY;
    for _ in 0..100 {
        let support = rng.random_range(1..=16usize);
        let raw: Vec<f64> = (0..support).map(|_| rng.random::<f64>().powi(3) + 1e-4).collect();
        let total: f64 = raw.iter().sum();
        let dist: Vec<f64> = raw.iter().map(|q| q / total).collect();
        let m = rng.random_range(1..=3usize);
        let h: f64 = dist.iter().map(|&q| -q * q.log2()).sum();
        let bound = sampling_lemma_bound(h, m, 4.0);
        let exact = all_distinct(&dist, m);
        min_slack = min_slack.min(exact - bound);
        failures += (exact + 1e-12 < bound) as usize;
    }
    verdict(failures == 0, format!("{failures} failures, min slack {min_slack:.4}"))
}

fn all_words(n: usize) -> Codebook {
    Codebook::deterministic(n, (0..1u64 << n).map(|v| BitWord::from_u64(v, n)).collect()).unwrap()
}

fn c6_budget_and_causality() -> Verdict {
    let configs = [(0.1, 0.05, 0.05), (0.2, 0.0236, 0.05), (0.25, 0.02, 0.1), (0.35, 0.0, 0.1), (0.15, 0.15, 0.05)];
    let codes = [
        make_random_code(40, 512, 1).unwrap(),
        make_stochastic_cloud(40, 64, 4, 5, 2).unwrap(),
    ];
    let mut trials = 0u64;
    let mut violations = 0u64;
    let per = 100_000 / (configs.len() * codes.len() * Strategy::ALL.len()) as u64 + 1;
    for (ci, &(p, pbar, eps)) in configs.iter().enumerate() {
        let cfg = AdversaryConfig::new(40, p, pbar, eps).unwrap();
        for code in &codes {
            for strategy in Strategy::ALL {
                let outs = run_campaign(code, strategy, &cfg, DecoderConfig::default(), per, ci as u64, 8).unwrap();
                for o in outs {
                    trials += 1;
                    let t = &o.transcript;
                    violations += (t.e.weight() > cfg.budget || t.y != t.x.xor(&t.e)) as u64;
                }
            }
        }
    }

    let n = 10;
    let cb = all_words(n);
    let cfg = AdversaryConfig::new(n, 0.2, 0.1, 0.1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut replay_failures = 0;
    for strategy in Strategy::ALL {
        let mut adv = strategy.build(&cb, &cfg);
        for _ in 0..1000 {
            let x = BitWord::random(n, &mut rng);
            let mut x2 = BitWord::random(n, &mut rng);
            let k = rng.random_range(0..=n);
            for i in 0..k {
                x2.set(i, x.get(i));
            }
            let seed: u64 = rng.random();
            let run = |adv: &mut dyn CausalAdversary, w: &BitWord| -> Vec<bool> {
                adv.reset(seed);
                (0..n).map(|i| adv.observe_and_decide(i, w.get(i))).collect()
            };
            let a = run(adv.as_mut(), &x);
            let b = run(adv.as_mut(), &x2);
            replay_failures += (a[..k] != b[..k]) as usize;
        }
    }
    verdict(
        trials >= 100_000 && violations == 0 && replay_failures == 0,
        format!("{trials} trials, {violations} budget violations, {replay_failures} replay failures in 3000 pairs"),
    )
}

fn c7_symmetrization_invariant() -> Verdict {
    let cb = make_random_code(48, 4096, 7).unwrap();
    let cfg = AdversaryConfig::new(48, 0.2, optimal_pbar(0.2).unwrap(), 0.05).unwrap();
    let outs = run_campaign(&cb, Strategy::BabblePush, &cfg, DecoderConfig::default(), 10_000, 7, 8).unwrap();
    let (mut checked, mut bad) = (0, 0);
    for o in &outs {
        let t = &o.transcript;
        if t.events.e2 && t.events.e3 && t.events.e4 && !t.truncated {
            checked += 1;
            let x2 = cb.encode(t.calvin_pair.unwrap()).unwrap();
            bad += (t.y.distance(&t.x) > cfg.budget || t.y.distance(x2) > cfg.budget) as usize;
        }
    }
    verdict(
        checked > 0 && bad == 0,
        format!("{checked} conditioned trials, {bad} violations (budget {})", cfg.budget),
    )
}

fn c8_exact_symmetry() -> Verdict {
    let t = Instant::now();
    let mut details = Vec::new();
    let mut ok = true;
    for (name, (cb, cfg)) in [
        ("pair", fixtures::symmetry_pair().unwrap()),
        ("stochastic", fixtures::symmetry_stochastic().unwrap()),
    ] {
        let r = exact_symmetry_check(&cb, &cfg).unwrap();
        ok &= r.passed() && !r.vacuous() && cb.n() <= 12 && cb.num_pairs() <= 4;
        details.push(format!("{name}: {} keys, {} outputs, {} violations", r.keys_checked, r.outputs_checked, r.law_violations + r.key_violations + r.complement_violations));
    }
    let (fast, time) = within(t, Duration::from_secs(120));
    verdict(ok && fast, format!("{}; {time}", details.join("; ")))
}

fn c9_symmetrized_error() -> Verdict {
    let (cb, cfg) = fixtures::symmetrization_pair().unwrap();
    let s = monte_carlo(&cb, Strategy::BabblePush, &cfg, DecoderConfig::default(), 20_000, 9, 8).unwrap();
    let k = s.e2_e3_e4 as f64;
    let sigma = (0.25 / k).sqrt();
    let rate = s.error_rate_given_events();
    let e3_always = s.e3 == s.trials;
    verdict(
        s.trials >= 10_000 && e3_always && rate >= 0.5 - 3.0 * sigma,
        format!("{} trials, E3 in all {e3_always}, {} conditioned, error rate {rate:.4} (floor {:.4})", s.trials, s.e2_e3_e4, 0.5 - 3.0 * sigma),
    )
}

fn c10_chernoff_trend() -> Verdict {
    let mut rates = Vec::new();
    for n in [24usize, 48, 96] {
        let cb = make_random_code(n, 1 << 14, 10).unwrap();
        let cfg = AdversaryConfig::new(n, 0.2, optimal_pbar(0.2).unwrap(), 0.05).unwrap();
        let s = monte_carlo(&cb, Strategy::BabblePush, &cfg, DecoderConfig::default(), 10_000, 10, 8).unwrap();
        let k = s.e2_e3.max(1) as f64;
        let f = s.e4_fail_rate_given_e2_e3();
        rates.push((n, f, (f * (1.0 - f) / k).sqrt(), s.e2_e3));
    }
    let mut inversions = 0;
    let mut large = 0;
    for w in rates.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b.1 > a.1 {
            inversions += 1;
            let sigma = (a.2 * a.2 + b.2 * b.2).sqrt();
            large += (b.1 - a.1 > 2.0 * sigma) as usize;
        }
    }
    let shown: Vec<String> = rates
        .iter()
        .map(|(n, f, sd, k)| format!("n={n}: {f:.4} +- {sd:.4} of {k}"))
        .collect();
    verdict(
        inversions <= 1 && large == 0,
        format!("{}; {inversions} inversions, {large} beyond 2 sigma", shown.join(", ")),
    )
}

fn c11_repetition() -> Verdict {
    let cb = make_repetition_code(5).unwrap();
    let cfg = AdversaryConfig::new(5, 0.4, 0.2, 0.1).unwrap();
    let mut errors = Vec::new();
    for strategy in Strategy::ALL {
        let s = monte_carlo(&cb, strategy, &cfg, DecoderConfig::default(), 1000, 11, 4).unwrap();
        errors.push(format!("{strategy} {}", s.errors));
    }
    let total: u64 = errors.iter().map(|e| e.rsplit(' ').next().unwrap().parse::<u64>().unwrap()).sum();
    verdict(cfg.budget == 2 && total == 0, format!("budget {}, errors: {}", cfg.budget, errors.join(", ")))
}

fn c12_determinism() -> Verdict {
    let exe = env!("CARGO_BIN_EXE_jamsim");
    let run = |workers: &str| {
        let out = Command::new(exe)
            .args(["attack", "--n", "32", "--messages", "256", "--p", "0.2", "--epsilon", "0.05"])
            .args(["--trials", "3000", "--seed", "12", "--workers", workers])
            .output()
            .expect("run jamsim");
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        out.stdout
    };
    let a = run("1");
    let b = run("1");
    let c = run("8");
    let d = run("8");
    verdict(
        a == b && a == c && c == d && !a.is_empty(),
        format!("{} bytes, repeat equal {}, workers 1 vs 8 equal {}", a.len(), a == b && c == d, a == c),
    )
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("bound curve fidelity", c1_bound_curve),
        ("closed-form minimiser", c2_closed_form),
        ("interior-optimum ratio", c3_interior_ratio),
        ("Plotkin oracle", c4_plotkin),
        ("sampling lemma oracle", c5_lemma1),
        ("budget and causality", c6_budget_and_causality),
        ("symmetrization invariant", c7_symmetrization_invariant),
        ("exact symmetry", c8_exact_symmetry),
        ("symmetrized error", c9_symmetrized_error),
        ("Chernoff trend", c10_chernoff_trend),
        ("repetition-code sanity", c11_repetition),
        ("determinism", c12_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let v = f();
        failed += !v.passed as usize;
        println!(
            "criterion {:>2} {}: {} ({})",
            i + 1,
            if v.passed { "PASS" } else { "FAIL" },
            name,
            v.detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
