//! Runs a declarative parameter sweep from a TOML recipe and writes the
//! resulting table as CSV on stdout.
//!
//! `cargo run --example config_sweep -- recipes/noise_vs_photons.toml`

use std::path::PathBuf;

use transducer_sim::config::SweepConfig;
use transducer_sim::sweep::run_sweep;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../recipes/cooling_vs_bias.toml")
        });
    let cfg = SweepConfig::load(&path)?;
    let table = run_sweep(&cfg, 0)?;
    eprintln!(
        "{}: {} rows x {} columns",
        path.display(),
        table.rows().len(),
        table.columns().len()
    );
    table.write_csv(std::io::stdout().lock())?;
    Ok(())
}
