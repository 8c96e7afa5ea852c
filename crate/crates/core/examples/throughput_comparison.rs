//! Recomputes the quantum throughput of published transducers from their
//! quoted ingredients and flags rows that disagree with the quoted value.

use std::path::Path;

use transducer_sim::comparison::{comparison_report, format_report, load_rows};
use transducer_sim::device::{DeviceParams, OperatingPoint};
use transducer_sim::metrics::evaluate;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../recipes/comparison.toml");
    let rows = load_rows(&path)?;
    print!("{}", format_report(&comparison_report(&rows)));

    let m = evaluate(
        &DeviceParams::reference(),
        &OperatingPoint::new(50.0, 232.0),
    )?;
    println!(
        "simulated reference point: eta_ext = {:.4}, B = {:.1} kHz, throughput = {:.0} Hz",
        m.eta_ext,
        m.bandwidth_hz / 1e3,
        m.throughput_hz
    );
    Ok(())
}
