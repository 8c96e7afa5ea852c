//! Conversion efficiency across the mechanical band: the exact state-space
//! value, the three-susceptibility closed form and the Lorentzian shape.

use transducer_sim::device::{assemble, DeviceParams, OperatingPoint, BATH_E_EXT, BATH_O_EXT};
use transducer_sim::metrics::{eta_ext_at, s_oe_susceptibility};
use transducer_sim::network::transfer_element;
use transducer_sim::spectrum::linear_grid;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dev = DeviceParams::reference();
    let op = OperatingPoint::new(50.0, 232.0);
    let asm = assemble(&dev, &op)?;
    let tot = asm.rates.gamma_tot();
    let grid = linear_grid(dev.omega_m - 5.0 * tot, dev.omega_m + 5.0 * tot, 11);

    let exact = transfer_element(&asm.system, BATH_O_EXT, BATH_E_EXT, &grid)?.power();
    println!("Gamma_tot = {:.1} kHz", tot / 1e3);
    println!(
        "{:>12} {:>10} {:>10} {:>10}",
        "offset/kHz", "network", "suscept.", "lorentz"
    );
    for (f, net) in grid.iter().zip(exact) {
        let sus = s_oe_susceptibility(&dev, &op, &asm.rates, *f).norm_sqr();
        let lor = eta_ext_at(&asm.rates, *f, dev.omega_m);
        println!(
            "{:>12.1} {net:>10.5} {sus:>10.5} {lor:>10.5}",
            (f - dev.omega_m) / 1e3
        );
    }
    Ok(())
}
