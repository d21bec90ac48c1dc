//! Attack settings: command-line flags layered over an optional
//! `key = value` file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, ValueEnum};

use jamsim_core::bounds::bound_point;
use jamsim_core::codes::{
    make_random_code, make_repetition_code, make_stochastic_cloud, messages_for_rate,
};
use jamsim_core::{AdversaryConfig, Codebook, DecoderConfig, Strategy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CodeChoice {
    Random,
    Repetition,
    Cloud,
    File,
}

impl FromStr for CodeChoice {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        <Self as ValueEnum>::from_str(s, true).map_err(|e| anyhow!(e))
    }
}

#[derive(Args, Clone, Debug, Default)]
pub struct AttackArgs {
    /// key = value file; flags given on the command line take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Block length
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of messages M
    #[arg(long, conflicts_with = "rate")]
    pub messages: Option<usize>,
    /// Rate R; M = ceil(2^(R n))
    #[arg(long)]
    pub rate: Option<f64>,
    /// Codebook construction
    #[arg(long, value_enum)]
    pub code: Option<CodeChoice>,
    /// Codebook file for --code file
    #[arg(long)]
    pub code_file: Option<PathBuf>,
    /// Codewords per message for --code cloud
    #[arg(long)]
    pub spread: Option<usize>,
    /// Cloud radius for --code cloud
    #[arg(long)]
    pub cloud_radius: Option<usize>,
    /// Seed for the code construction (defaults to --seed)
    #[arg(long)]
    pub code_seed: Option<u64>,
    /// passive, bsc or babble-push
    #[arg(long)]
    pub strategy: Option<String>,
    /// Flip budget fraction
    #[arg(long)]
    pub p: Option<f64>,
    /// Babble fraction (defaults to the bound-minimising value)
    #[arg(long)]
    pub pbar: Option<f64>,
    /// Slack parameter
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Crossover of the BSC-mimicking strategy (defaults to p)
    #[arg(long)]
    pub q: Option<f64>,
    /// Decoder search radius (defaults to the flip budget)
    #[arg(long)]
    pub decode_radius: Option<usize>,
    #[arg(long)]
    pub trials: Option<u64>,
    /// Master seed
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads
    #[arg(long)]
    pub workers: Option<usize>,
}

pub fn read_kv_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config file {}", path.display()))?;
    parse_kv(&text).with_context(|| format!("in config file {}", path.display()))
}

pub fn parse_kv(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("line {}: expected key = value", i + 1))?;
        map.insert(k.trim().replace('-', "_"), v.trim().to_string());
    }
    Ok(map)
}

macro_rules! fill {
    ($args:ident, $map:ident, $($field:ident),*) => {
        $(
            if let Some(v) = $map.remove(stringify!($field)) {
                let parsed = v.parse().map_err(|e| {
                    anyhow!("config key {}: cannot parse '{}': {}", stringify!($field), v, e)
                })?;
                $args.$field.get_or_insert(parsed);
            }
        )*
    };
}

impl AttackArgs {
    /// Fills unset flags from the config file, if one was given.
    pub fn with_file(mut self) -> Result<Self> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let mut map = read_kv_file(&path)?;
        let args = &mut self;
        fill!(
            args, map, n, messages, rate, code, code_file, spread, cloud_radius, code_seed,
            strategy, p, pbar, epsilon, q, decode_radius, trials, seed, workers
        );
        if let Some(k) = map.keys().next() {
            bail!("unknown config key '{k}'");
        }
        if self.messages.is_some() && self.rate.is_some() {
            bail!("set either messages or rate, not both");
        }
        Ok(self)
    }
}

/// Fully resolved attack campaign.
#[derive(Clone, Debug)]
pub struct Campaign {
    pub codebook: Codebook,
    pub strategy: Strategy,
    pub adversary: AdversaryConfig,
    pub decoder: DecoderConfig,
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
}

pub const DEFAULT_EPSILON: f64 = 0.05;
pub const DEFAULT_TRIALS: u64 = 1000;

fn require<T>(v: Option<T>, name: &str) -> Result<T> {
    v.ok_or_else(|| anyhow!("missing required setting --{name}"))
}

fn build_code(a: &AttackArgs, seed: u64) -> Result<Codebook> {
    let kind = a.code.unwrap_or(CodeChoice::Random);
    if kind == CodeChoice::File {
        let path = a
            .code_file
            .as_ref()
            .ok_or_else(|| anyhow!("--code file needs --code-file"))?;
        let cb = Codebook::load(path).with_context(|| format!("loading {}", path.display()))?;
        if let Some(n) = a.n {
            if n != cb.n() {
                bail!("--n {n} disagrees with codebook length {}", cb.n());
            }
        }
        return Ok(cb);
    }
    let n = require(a.n, "n")?;
    let messages = || -> Result<usize> {
        match (a.messages, a.rate) {
            (Some(m), _) => Ok(m),
            (None, Some(r)) => Ok(messages_for_rate(r, n)?),
            (None, None) => bail!("set --messages or --rate"),
        }
    };
    Ok(match kind {
        CodeChoice::Random => make_random_code(n, messages()?, seed)?,
        CodeChoice::Repetition => make_repetition_code(n)?,
        CodeChoice::Cloud => make_stochastic_cloud(
            n,
            messages()?,
            a.spread.unwrap_or(2),
            a.cloud_radius.unwrap_or(1),
            seed,
        )?,
        CodeChoice::File => unreachable!(),
    })
}

/// Adversary parameters alone; pbar defaults to the minimiser at `p`.
pub fn adversary_config(a: &AttackArgs, n: usize) -> Result<AdversaryConfig> {
    let p = require(a.p, "p")?;
    let pbar = match a.pbar {
        Some(v) => v,
        None => {
            if !(0.0..=0.5).contains(&p) {
                bail!("p = {p} must lie in [0, 1/2]");
            }
            bound_point(p)?.pbar_star
        }
    };
    let mut cfg = AdversaryConfig::new(n, p, pbar, a.epsilon.unwrap_or(DEFAULT_EPSILON))?;
    if let Some(q) = a.q {
        cfg = cfg.with_bsc_crossover(q)?;
    }
    Ok(cfg)
}

impl Campaign {
    pub fn resolve(a: &AttackArgs) -> Result<Self> {
        let seed = a.seed.unwrap_or(0);
        let codebook = build_code(a, a.code_seed.unwrap_or(seed))?;
        let adversary = adversary_config(a, codebook.n())?;
        let strategy: Strategy = a
            .strategy
            .as_deref()
            .unwrap_or("babble-push")
            .parse()
            .map_err(|e: String| anyhow!(e))?;
        let trials = a.trials.unwrap_or(DEFAULT_TRIALS);
        if trials == 0 {
            bail!("--trials must be at least 1");
        }
        let workers = a.workers.unwrap_or(1);
        if workers == 0 {
            bail!("--workers must be at least 1");
        }
        Ok(Campaign {
            codebook,
            strategy,
            adversary,
            decoder: DecoderConfig {
                radius: a.decode_radius,
            },
            trials,
            seed,
            workers,
        })
    }
}
