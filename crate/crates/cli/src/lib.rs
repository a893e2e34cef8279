//! Command-line front end.

pub mod config;
pub mod experiments;
pub mod integrate;
pub mod published;
pub mod report;

use anyhow::{Context, Result};

/// Caps the global thread pool at `OSCQUAD_THREADS` when it is set.
pub fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("OSCQUAD_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .with_context(|| format!("OSCQUAD_THREADS must be a positive integer, got '{value}'"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .context("configuring the thread pool")?;
    Ok(())
}
