use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use jamsim_core::bounds::bound_curve;
use jamsim_core::harness::{monte_carlo, run_campaign, TrialOutcome};
use jamsim_core::numfmt::format_sig;
use jamsim_core::verify::{run_suite, Check, Suite};
use jamsim_core::TrialStats;

mod settings;

use settings::{AttackArgs, Campaign};

#[derive(Parser, Debug)]
#[command(name = "jamsim", version, about = "Causal-adversary channel simulator and bounds engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Capacity bound curves on a p grid
    Bounds {
        #[arg(long, default_value_t = 0.0)]
        p_min: f64,
        #[arg(long, default_value_t = 0.25)]
        p_max: f64,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        /// Output file (standard output when absent)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one attack campaign and print its statistics
    Attack {
        #[command(flatten)]
        args: AttackArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write one row per trial to this file
        #[arg(long)]
        transcripts: Option<PathBuf>,
    },
    /// Repeat a campaign over a grid of p or rate values
    Sweep {
        #[arg(long, value_enum)]
        vary: Vary,
        /// Comma-separated grid values
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        #[command(flatten)]
        args: AttackArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an oracle suite: bounds, plotkin, lemma1, symmetry or all
    Verify {
        suite: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Vary {
    P,
    Rate,
}

fn sink(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(0.0..=0.5).contains(&lo) || !(0.0..=0.5).contains(&hi) || lo > hi {
        bail!("need 0 <= p-min <= p-max <= 1/2, got [{lo}, {hi}]");
    }
    if lo == hi {
        return Ok(vec![lo]);
    }
    if step.is_nan() || step <= 0.0 {
        bail!("step must be positive");
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| (lo + i as f64 * step).min(hi)).collect())
}

fn cmd_bounds(p_min: f64, p_max: f64, step: f64, out: &Option<PathBuf>) -> Result<()> {
    let pts = bound_curve(&grid(p_min, p_max, step)?)?;
    let mut w = sink(out)?;
    writeln!(w, "p,pbar_star,alpha,c_upper,bsc,gv")?;
    for pt in pts {
        let row = [pt.p, pt.pbar_star, pt.alpha, pt.c_upper, pt.bsc, pt.gv].map(format_sig);
        writeln!(w, "{}", row.join(","))?;
    }
    w.flush()?;
    Ok(())
}

fn transcript_header() -> &'static str {
    "trial,u,r,u_prime,r_prime,decoded,error,ell,gamma,budget,budget_used,truncated,b_size,e0,e2,e3,e4,x,e,y,intended_error"
}

fn transcript_row(k: usize, o: &TrialOutcome) -> String {
    let t = &o.transcript;
    let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
    let gamma: Vec<String> = t.gamma.iter().map(|g| g.to_string()).collect();
    let b = |v: bool| (v as u8).to_string();
    [
        k.to_string(),
        t.alice_pair.u.to_string(),
        t.alice_pair.r.to_string(),
        opt(t.calvin_pair.map(|c| c.u)),
        opt(t.calvin_pair.map(|c| c.r)),
        o.decoded.to_string(),
        b(o.error),
        t.ell.to_string(),
        gamma.join(" "),
        t.budget.to_string(),
        t.budget_used.to_string(),
        b(t.truncated),
        opt(t.b_size),
        b(t.events.e0),
        b(t.events.e2),
        b(t.events.e3),
        b(t.events.e4),
        t.x.to_string(),
        t.e.to_string(),
        t.y.to_string(),
        t.intended_error.to_string(),
    ]
    .join(",")
}

fn run(c: &Campaign) -> Result<TrialStats> {
    Ok(monte_carlo(
        &c.codebook,
        c.strategy,
        &c.adversary,
        c.decoder,
        c.trials,
        c.seed,
        c.workers,
    )?)
}

fn cmd_attack(args: AttackArgs, out: &Option<PathBuf>, transcripts: &Option<PathBuf>) -> Result<()> {
    let c = Campaign::resolve(&args.with_file()?)?;
    let stats = run(&c)?;
    let mut w = sink(out)?;
    writeln!(w, "{}", TrialStats::csv_header())?;
    writeln!(w, "{}", stats.csv_row())?;
    w.flush()?;
    if let Some(path) = transcripts {
        let outcomes = run_campaign(
            &c.codebook,
            c.strategy,
            &c.adversary,
            c.decoder,
            c.trials,
            c.seed,
            c.workers,
        )?;
        let mut w = sink(&Some(path.clone()))?;
        writeln!(w, "{}", transcript_header())?;
        for (k, o) in outcomes.iter().enumerate() {
            writeln!(w, "{}", transcript_row(k, o))?;
        }
        w.flush()?;
    }
    Ok(())
}

fn cmd_sweep(vary: Vary, values: &[f64], args: AttackArgs, out: &Option<PathBuf>) -> Result<()> {
    let base = args.with_file()?;
    let mut w = sink(out)?;
    let name = match vary {
        Vary::P => "p",
        Vary::Rate => "rate",
    };
    writeln!(w, "{name},{}", TrialStats::csv_header())?;
    for &v in values {
        let mut a = base.clone();
        match vary {
            Vary::P => a.p = Some(v),
            Vary::Rate => {
                a.rate = Some(v);
                a.messages = None;
            }
        }
        let c = Campaign::resolve(&a).with_context(|| format!("at {name} = {v}"))?;
        writeln!(w, "{},{}", format_sig(v), run(&c)?.csv_row())?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_verify(suite: &str, out: &Option<PathBuf>) -> Result<bool> {
    let suite: Suite = suite.parse()?;
    let checks = run_suite(suite)?;
    let mut w = sink(out)?;
    writeln!(w, "{}", Check::csv_header())?;
    for c in &checks {
        writeln!(w, "{}", c.csv_row())?;
    }
    w.flush()?;
    let failed = checks.iter().filter(|c| !c.passed).count();
    for c in checks.iter().filter(|c| !c.passed) {
        eprintln!("FAIL {}/{}: {}", c.suite, c.property, c.detail);
    }
    eprintln!("{suite}: {} of {} checks passed", checks.len() - failed, checks.len());
    Ok(failed == 0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bounds {
            p_min,
            p_max,
            step,
            out,
        } => cmd_bounds(p_min, p_max, step, &out).map(|_| true),
        Command::Attack {
            args,
            out,
            transcripts,
        } => cmd_attack(args, &out, &transcripts).map(|_| true),
        Command::Sweep {
            vary,
            values,
            args,
            out,
        } => cmd_sweep(vary, &values, args, &out).map(|_| true),
        Command::Verify { suite, out } => cmd_verify(&suite, &out),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
