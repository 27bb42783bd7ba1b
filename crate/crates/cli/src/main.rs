//! zal: evaluate the argument functions S_n(sigma, t), check their smoothed
//! prime-sum identities, and build resonator sets for extreme-value scans.
//!
//! Exit codes: 0 success, 2 usage or malformed input, 3 parameters outside
//! the feasible range, 4 a numerical target could not be met.

mod cache;
mod commands;
mod config;

use clap::Parser;

fn main() {
    let cli = config::Cli::parse();
    let cfg = match config::resolve(cli) {
        Ok(cfg) => cfg,
        Err(config::Usage(message)) => {
            eprintln!("zal: {message}");
            std::process::exit(2);
        }
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build_global()
        .ok();
    if let Err(failure) = commands::dispatch(&cfg) {
        eprintln!("zal: {}", failure.message);
        std::process::exit(failure.code);
    }
}
