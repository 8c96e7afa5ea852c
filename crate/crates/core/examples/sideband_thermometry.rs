//! Sideband-asymmetry thermometry: the red and blue motional sidebands
//! weigh n_m and n_m + 1, so their areas fix n_m without a gain calibration.

use transducer_sim::device::{assemble, DeviceParams, OperatingPoint, MODE_M};
use transducer_sim::lab::{sideband_asymmetry, synthetic_sideband_pair, SeededNoise};
use transducer_sim::network::{mode_occupancy_numeric, mode_psd, Ordering};
use transducer_sim::spectrum::linear_grid;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = linear_grid(-50e3, 50e3, 2001);
    for seed in 0..4 {
        let mut noise = SeededNoise::new(seed);
        let pair = synthetic_sideband_pair(1.6, 0.0, 5e3, &grid, 1.0, 0.05, &mut noise)?;
        println!(
            "seed {seed}: n_m = {:.3} (true 1.6)",
            sideband_asymmetry(&pair.red, &pair.blue)?
        );
    }

    // The network's own normally and anti-normally ordered mechanical spectra.
    let dev = DeviceParams::reference();
    let mut op = OperatingPoint::new(5.0, 1.0);
    op.n_f = 2.0;
    let asm = assemble(&dev, &op)?;
    let w = asm.rates.gamma_tot();
    let band = linear_grid(dev.omega_m - 400.0 * w, dev.omega_m + 400.0 * w, 20001);
    let red = mode_psd(
        &asm.system,
        &asm.occupancies,
        MODE_M,
        &band,
        Ordering::Normal,
    )?;
    let blue = mode_psd(
        &asm.system,
        &asm.occupancies,
        MODE_M,
        &band,
        Ordering::AntiNormal,
    )?;
    let exact = mode_occupancy_numeric(&asm.system, &asm.occupancies, MODE_M)?.value;
    println!(
        "network sidebands: n_m = {:.4} (steady state {exact:.4})",
        sideband_asymmetry(&red, &blue)?
    );
    Ok(())
}
