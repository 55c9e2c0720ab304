use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use negpell_lab::{write_outputs, Experiment, ExperimentConfig, Ordering, Thresholds, CACHE_ENV};

/// Run one registered experiment and write its tables and manifest.
#[derive(Debug, Parser)]
#[command(name = "negpell-lab", version)]
struct Cli {
    #[arg(value_enum)]
    experiment: Experiment,
    /// Experiment size; see the README for its meaning per experiment.
    #[arg(long)]
    limit: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Scan cache file; falls back to $NEGPELL_CACHE.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[arg(long)]
    threshold_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Ordering::Radicand)]
    order: Ordering,
}

fn config(cli: Cli) -> negpell_lab::Result<ExperimentConfig> {
    let mut config = ExperimentConfig::new(cli.experiment);
    if let Some(limit) = cli.limit {
        config.limit = limit;
    }
    config.seed = cli.seed;
    config.out = cli.out;
    config.cache = cli.cache.or_else(|| {
        std::env::var_os(CACHE_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
    });
    config.threads = cli.threads;
    config.order = cli.order;
    if let Some(path) = cli.threshold_file {
        config.thresholds = Thresholds::load(&path)?;
        config.threshold_file = Some(path);
    }
    Ok(config)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = Instant::now();
    let result = config(cli).and_then(|config| {
        let report = negpell_lab::run(&config)?;
        let manifest = write_outputs(&config, &report, start.elapsed().as_secs_f64())?;
        Ok((report, manifest))
    });
    match result {
        Ok((report, manifest)) => {
            for check in &report.checks {
                println!("{check}");
            }
            for path in &manifest.outputs {
                println!("wrote {}", path.display());
            }
            println!("status: {:?}", report.status());
            ExitCode::from(report.status().exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
