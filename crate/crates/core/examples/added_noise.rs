//! Input-referred added noise, computed from the mechanical occupancy and
//! independently from the optical output flux of the network.

use transducer_sim::device::{
    assemble, DeviceParams, HotBathModel, OperatingPoint, BATH_O_EXT, MODE_M,
};
use transducer_sim::metrics::{
    added_noise, added_noise_from_occupancy, added_noise_optical_route, eta_ext,
};
use transducer_sim::network::{mode_occupancy_numeric, output_flux_psd};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dev = DeviceParams::reference();
    println!(
        "{:>8} {:>10} {:>12} {:>12}",
        "n_c", "closed", "occupancy", "optical"
    );
    for &n_c in &[5.0, 20.0, 80.0, 232.0] {
        let mut op = OperatingPoint::new(50.0, n_c);
        op.n_f = 0.3;
        op.n_e_int = 0.12;
        op.hot_bath = HotBathModel::PowerLaw {
            gamma_p0: 29.28,
            n_p0: 7.81,
            alpha: 0.5,
            beta: 0.3,
        };
        let asm = assemble(&dev, &op)?;
        let closed = added_noise(&asm.rates, &asm.baths)?;
        let n_m = mode_occupancy_numeric(&asm.system, &asm.occupancies, MODE_M)?.value;
        let via_occupancy = added_noise_from_occupancy(&asm.rates, n_m)?;
        let flux = output_flux_psd(&asm.system, &asm.occupancies, BATH_O_EXT, &[dev.omega_m])?;
        let via_optics =
            added_noise_optical_route(flux.real().expect("real")[0], eta_ext(&asm.rates))?;
        println!("{n_c:>8.1} {closed:>10.4} {via_occupancy:>12.4} {via_optics:>12.4}");
    }
    Ok(())
}
