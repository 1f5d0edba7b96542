use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use mmsurf_cli::config::{ChainConfig, GroupConfig};
use mmsurf_cli::output::write_outputs;
use mmsurf_cli::{
    parse_config, run, Command, ConfigError, Manifest, RunConfig, EXIT_FAIL, EXIT_IO, EXIT_PASS, EXIT_SEMANTIC,
    EXIT_SYNTAX,
};

/// Yang–Mills measure on surface graphs: Wilson loops and Makeenko–Migdal checks.
#[derive(Parser, Debug)]
#[command(name = "mmsurf", version)]
struct Cli {
    /// TOML run configuration. Optional for `selftest`.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Command to run; overrides `command` in the configuration.
    #[arg(long, value_enum)]
    command: Option<Command>,
    /// Directory for `results.csv` and `manifest.json`.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Overrides the configuration seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the number of chains.
    #[arg(long)]
    chains: Option<usize>,
}

fn fail(code: i32, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("mmsurf: {msg}");
    ExitCode::from(code as u8)
}

fn selftest_config() -> RunConfig {
    RunConfig {
        command: Some(Command::Selftest),
        seed: 0,
        normalized: true,
        group: GroupConfig {
            n: 1,
            tolerance: 1e-12,
            cutoff: None,
            brownian_step: 1e-3,
        },
        chain: ChainConfig::default(),
        graph: None,
        loops: Default::default(),
        crossings: Vec::new(),
        constraints: Vec::new(),
        partition: None,
        wilson: None,
        mm_check: None,
        local_mm: None,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => return fail(EXIT_IO, format!("{}: {e}", path.display())),
            };
            match parse_config(&text) {
                Ok(c) => c,
                Err(e @ ConfigError::Syntax(_)) => return fail(EXIT_SYNTAX, e),
                Err(e @ ConfigError::Semantic(_)) => return fail(EXIT_SEMANTIC, e),
            }
        }
        None if cli.command == Some(Command::Selftest) => selftest_config(),
        None => return fail(EXIT_SYNTAX, "--config is required for this command"),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(c) = cli.chains {
        cfg.chain.chains = c;
    }
    let Some(command) = cli.command.or(cfg.command) else {
        return fail(EXIT_SYNTAX, "no command given (use --command or `command = ...`)");
    };
    let resolved = match cfg.resolve() {
        Ok(r) => r,
        Err(e) => return fail(EXIT_SEMANTIC, e),
    };
    let rows = match run(command, &cfg, &resolved) {
        Ok(rows) => rows,
        Err(e) => return fail(EXIT_SEMANTIC, e),
    };
    for r in &rows {
        let verdict = match r.pass {
            Some(true) => "pass",
            Some(false) => "FAIL",
            None => "",
        };
        println!(
            "{:<32} {:<32} {:>+.6e} {:>+.6e}i ± {:.2e} {}",
            r.quantity, r.method, r.mean_re, r.mean_im, r.stderr, verdict
        );
    }
    let passed = !rows.iter().any(|r| r.failed());
    let manifest = Manifest {
        command: command.to_string(),
        config: cli.config.as_ref().map(|p| p.display().to_string()),
        seed: cfg.seed,
        chains: cfg.chain.chains,
        version: env!("CARGO_PKG_VERSION"),
        rows: rows.len(),
        passed,
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    if let Err(e) = write_outputs(&cli.out, &rows, &manifest) {
        return fail(EXIT_IO, format!("{}: {e}", cli.out.display()));
    }
    ExitCode::from(if passed { EXIT_PASS } else { EXIT_FAIL } as u8)
}
