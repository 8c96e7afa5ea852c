//! Derives the coupling and damping rates of the reference transducer at a
//! few operating points and prints the closed-form figures of merit.

use transducer_sim::device::{derive, intracavity_photons, DeviceParams, OperatingPoint, Pump};
use transducer_sim::metrics::evaluate;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dev = DeviceParams::reference();
    println!(
        "kappa_e = {:.3} MHz, kappa_o = {:.3} GHz, eta_e = {:.3}, eta_o = {:.3}",
        dev.kappa_e() / 1e6,
        dev.kappa_o() / 1e9,
        dev.eta_e(),
        dev.eta_o()
    );
    println!(
        "{:>6} {:>8} {:>10} {:>10} {:>10} {:>9} {:>9}",
        "V_DC", "n_c", "G_em/kHz", "Γ_em/kHz", "Γ_om/kHz", "eta_ext", "B/kHz"
    );
    for &(v, n_c) in &[(10.0, 1.0), (30.0, 50.0), (50.0, 232.0)] {
        let op = OperatingPoint::new(v, n_c);
        let (r, _) = derive(&dev, &op)?;
        let m = evaluate(&dev, &op)?;
        println!(
            "{v:>6.1} {n_c:>8.1} {:>10.2} {:>10.2} {:>10.2} {:>9.4} {:>9.2}",
            r.coupling_em / 1e3,
            r.gamma_em / 1e3,
            r.gamma_om / 1e3,
            m.eta_ext,
            m.bandwidth_hz / 1e3
        );
    }

    // A waveguide pump power resolves to an intracavity photon number.
    let p = 1e-6;
    let n_c = intracavity_photons(&dev, p, dev.omega_m);
    let mut op = OperatingPoint::new(50.0, 0.0);
    op.pump = Pump::WaveguidePower(p);
    println!(
        "1 uW on the red sideband -> n_c = {n_c:.2} (resolved {:.2})",
        op.n_c(&dev)
    );
    Ok(())
}
