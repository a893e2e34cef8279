use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use oscquad_cli::config::{ProblemConfig, QSpec};
use oscquad_cli::experiments::{self, Experiment};
use oscquad_cli::published::Published;
use oscquad_cli::report::{write_rows, Format};
use oscquad_cli::{configure_threads, integrate};

/// Filon-Clenshaw-Curtis quadrature for oscillatory integrals.
#[derive(Parser)]
#[command(name = "oscquad", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a problem described by a JSON file.
    Integrate {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated wavenumbers, replacing the list in the file.
        #[arg(long, value_delimiter = ',')]
        k: Option<Vec<f64>>,
        #[arg(long)]
        format: Option<Format>,
        /// FCC degree.
        #[arg(long = "n")]
        n: Option<usize>,
        /// Mesh cells per singular piece.
        #[arg(long = "m")]
        m: Option<usize>,
        /// Grading exponent, or `auto`.
        #[arg(long)]
        q: Option<QSpec>,
        /// Target decay rate for automatic grading.
        #[arg(long)]
        r: Option<f64>,
    },
    /// Regenerate one of the experiment tables.
    Experiment {
        /// 1, 2, 3, 4, scattering or timing.
        id: Experiment,
        #[arg(long, default_value = "text")]
        format: Format,
        /// Print the published error and ratio next to each cell.
        #[arg(long)]
        compare_paper: bool,
    },
}

fn run(cli: Cli) -> Result<bool> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Integrate {
            config,
            k,
            format,
            n,
            m,
            q,
            r,
        } => {
            let text = std::fs::read_to_string(&config)
                .with_context(|| format!("reading {}", config.display()))?;
            let mut cfg = ProblemConfig::from_json(&text)?;
            if let Some(k) = k {
                cfg.k = k;
            }
            if let Some(f) = format {
                cfg.format = f;
            }
            if let Some(n) = n {
                cfg.rule.n = n;
            }
            if let Some(m) = m {
                cfg.rule.m = m;
            }
            if let Some(q) = q {
                cfg.rule.q = q;
            }
            if let Some(r) = r {
                cfg.rule.r = r;
            }
            let rows = integrate::run(&cfg)?;
            integrate::write(&mut out, &rows, cfg.format)?;
            Ok(true)
        }
        Command::Experiment {
            id,
            format,
            compare_paper,
        } => {
            let published = if compare_paper { Some(Published::load()?) } else { None };
            let rows = experiments::run(id);
            write_rows(&mut out, &rows, format, published.as_ref())?;
            out.flush()?;
            let failed: Vec<_> = rows.iter().filter_map(|r| r.failure.as_ref()).collect();
            for f in &failed {
                eprintln!("oscquad: cell failed: {f}");
            }
            Ok(failed.is_empty())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = configure_threads().and_then(|()| run(cli));
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("oscquad: {e:#}");
            ExitCode::FAILURE
        }
    }
}
