//! Flag parsing, config-file loading, and the merged run configuration.
//! Precedence: CLI flags, then config-file keys, then defaults.

use clap::Parser;
use std::collections::BTreeMap;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "zal",
    version,
    about = "Argument functions S_n(sigma, t) of zeta: evaluation, prime-sum \
             verification, bound tables, and resonator scans"
)]
pub struct Cli {
    /// eval | scan | resonator | verify-convolution | moments | bounds-table
    #[arg(long)]
    pub command: Option<String>,
    /// antiderivative order n >= 0
    #[arg(long)]
    pub n: Option<u32>,
    /// abscissa; eval, scan, and moments accept 0.4 <= sigma <= 1
    #[arg(long)]
    pub sigma: Option<f64>,
    /// single ordinate t; for moments, the upper integration limit
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    /// grid start (eval ranges, scans, bounds tables)
    #[arg(long = "t-lo", allow_hyphen_values = true)]
    pub t_lo: Option<f64>,
    /// grid end
    #[arg(long = "t-hi", allow_hyphen_values = true)]
    pub t_hi: Option<f64>,
    /// grid spacing
    #[arg(long)]
    pub step: Option<f64>,
    /// resonance interval length T (resonator, scan)
    #[arg(long = "T")]
    pub big_t: Option<f64>,
    /// exponent control: N = floor(T^((1-beta)/2)), 0 <= beta < 1
    #[arg(long)]
    pub beta: Option<f64>,
    /// half | edge: sigma = 1/2 or 1/2 + 1/log log N
    #[arg(long = "sigma-mode")]
    pub sigma_mode: Option<String>,
    /// bracket constant d in (0, 1) for the filtration thresholds
    #[arg(long)]
    pub d: Option<f64>,
    /// verify-convolution row set; only "default" names one
    #[arg(long)]
    pub grid: Option<String>,
    /// prime-power cap for the sum side
    #[arg(long = "m-cap")]
    pub m_cap: Option<u64>,
    /// rows kept by scan
    #[arg(long = "top-q")]
    pub top_q: Option<usize>,
    /// worker threads, >= 1
    #[arg(long)]
    pub threads: Option<usize>,
    /// seed for the sampled resonator estimators
    #[arg(long)]
    pub seed: Option<u64>,
    /// output path; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// evaluation cache path; env ZAL_CACHE is the fallback
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// key=value config file, '#' comments
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Eval,
    Scan,
    Resonator,
    VerifyConvolution,
    Moments,
    BoundsTable,
}

impl Command {
    fn parse(s: &str) -> Option<Command> {
        match s {
            "eval" => Some(Command::Eval),
            "scan" => Some(Command::Scan),
            "resonator" => Some(Command::Resonator),
            "verify-convolution" => Some(Command::VerifyConvolution),
            "moments" => Some(Command::Moments),
            "bounds-table" => Some(Command::BoundsTable),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub n: u32,
    pub sigma: f64,
    pub t: Option<f64>,
    pub t_lo: f64,
    pub t_hi: f64,
    pub step: f64,
    pub big_t: f64,
    pub beta: f64,
    pub sigma_mode: zal_core::SigmaMode,
    pub d: f64,
    pub grid: String,
    pub m_cap: u64,
    pub top_q: usize,
    pub threads: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub cache: Option<PathBuf>,
}

pub struct Usage(pub String);

fn parse_file(path: &PathBuf) -> Result<BTreeMap<String, String>, Usage> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Usage(format!("config line {}: expected key=value", lineno + 1)))?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn pick<T, F>(
    flag: Option<T>,
    file: &BTreeMap<String, String>,
    key: &str,
    parse: F,
    default: T,
) -> Result<T, Usage>
where
    F: Fn(&str) -> Option<T>,
{
    if let Some(v) = flag {
        return Ok(v);
    }
    match file.get(key) {
        Some(raw) => {
            parse(raw).ok_or_else(|| Usage(format!("config key {key}: bad value '{raw}'")))
        }
        None => Ok(default),
    }
}

/// Merge flags over config-file keys over defaults and validate the result.
pub fn resolve(cli: Cli) -> Result<RunConfig, Usage> {
    let file = match &cli.config {
        Some(p) => parse_file(p)?,
        None => BTreeMap::new(),
    };
    let command_name = pick(
        cli.command,
        &file,
        "command",
        |s| Some(s.to_string()),
        String::new(),
    )?;
    if command_name.is_empty() {
        return Err(Usage("--command is required".into()));
    }
    let command = Command::parse(&command_name)
        .ok_or_else(|| Usage(format!("unknown command '{command_name}'")))?;
    let sigma_mode_name = pick(
        cli.sigma_mode,
        &file,
        "sigma-mode",
        |s| Some(s.to_string()),
        "half".into(),
    )?;
    let sigma_mode = match sigma_mode_name.as_str() {
        "half" => zal_core::SigmaMode::Half,
        "edge" => zal_core::SigmaMode::Edge,
        other => {
            return Err(Usage(format!(
                "sigma-mode must be half or edge, got '{other}'"
            )))
        }
    };
    let default_threads = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    let cache = match cli.cache {
        Some(p) => Some(p),
        None => match file.get("cache") {
            Some(p) => Some(PathBuf::from(p)),
            None => std::env::var_os("ZAL_CACHE").map(PathBuf::from),
        },
    };
    let out = match cli.out {
        Some(p) => Some(p),
        None => file.get("out").map(PathBuf::from),
    };
    let t = match cli.t {
        Some(v) => Some(v),
        None => match file.get("t") {
            Some(raw) => Some(
                raw.parse()
                    .map_err(|_| Usage(format!("config key t: bad value '{raw}'")))?,
            ),
            None => None,
        },
    };
    let config = RunConfig {
        command,
        n: pick(cli.n, &file, "n", |s| s.parse().ok(), 0)?,
        sigma: pick(cli.sigma, &file, "sigma", |s| s.parse().ok(), 0.5)?,
        t,
        t_lo: pick(cli.t_lo, &file, "t-lo", |s| s.parse().ok(), 20.0)?,
        t_hi: pick(cli.t_hi, &file, "t-hi", |s| s.parse().ok(), 100.0)?,
        step: pick(cli.step, &file, "step", |s| s.parse().ok(), 1.0)?,
        big_t: pick(cli.big_t, &file, "T", |s| s.parse().ok(), 1e16)?,
        beta: pick(cli.beta, &file, "beta", |s| s.parse().ok(), 0.0)?,
        sigma_mode,
        d: pick(cli.d, &file, "d", |s| s.parse().ok(), 0.1)?,
        grid: pick(
            cli.grid,
            &file,
            "grid",
            |s| Some(s.to_string()),
            "default".into(),
        )?,
        m_cap: pick(cli.m_cap, &file, "m-cap", |s| s.parse().ok(), 100_000_000)?,
        top_q: pick(cli.top_q, &file, "top-q", |s| s.parse().ok(), 10)?,
        threads: pick(
            cli.threads,
            &file,
            "threads",
            |s| s.parse().ok(),
            default_threads,
        )?,
        seed: pick(cli.seed, &file, "seed", |s| s.parse().ok(), 42)?,
        out,
        cache,
    };
    if config.threads < 1 {
        return Err(Usage("threads must be >= 1".into()));
    }
    if !(config.step > 0.0) {
        return Err(Usage(format!("step must be > 0, got {}", config.step)));
    }
    if !(0.0..1.0).contains(&config.beta) {
        return Err(Usage(format!(
            "beta must lie in [0, 1), got {}",
            config.beta
        )));
    }
    if !(0.0 < config.d && config.d < 1.0) {
        return Err(Usage(format!("d must lie in (0, 1), got {}", config.d)));
    }
    match config.command {
        Command::Eval | Command::Scan | Command::Moments => {
            if !(0.4..=1.0).contains(&config.sigma) {
                return Err(Usage(format!(
                    "sigma must lie in [0.4, 1] for this command, got {}",
                    config.sigma
                )));
            }
        }
        Command::VerifyConvolution => {
            if config.grid != "default" {
                return Err(Usage(format!("grid '{}' names no row set", config.grid)));
            }
        }
        _ => {}
    }
    Ok(config)
}
