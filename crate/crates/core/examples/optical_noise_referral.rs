//! Added noise referred from detected optical powers: the noise floor with
//! no drive over the coherently converted tone, in photon units.

use transducer_sim::device::{assemble, DeviceParams, HotBathModel, OperatingPoint};
use transducer_sim::lab::{
    synthetic_optical_noise_measurement, ChainGains, OpticalReadout, SeededNoise,
};
use transducer_sim::metrics::added_noise;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dev = DeviceParams::reference();
    let mut op = OperatingPoint::new(50.0, 232.0);
    op.n_f = 0.3;
    op.n_e_int = 0.12;
    op.hot_bath = HotBathModel::Constant {
        gamma_p: 446.0,
        n_p: 40.0,
    };
    let asm = assemble(&dev, &op)?;
    let chain = ChainGains {
        optical_gain_db: 7.9,
        f_if: 2e3,
        ..ChainGains::UNITY
    };
    println!(
        "closed-form n_add = {:.4}",
        added_noise(&asm.rates, &asm.baths)?
    );
    for averages in [1, 100, 10_000] {
        let readout = OpticalReadout {
            omega_o_hz: dev.omega_o,
            p_e_w: 1e-15,
            rel_noise: 0.01,
            averages,
        };
        let m = synthetic_optical_noise_measurement(
            &asm,
            dev.omega_m,
            &chain,
            &readout,
            &mut SeededNoise::new(5),
        )?;
        println!("{averages:>6} averages: n_add = {:.4}", m.added_noise()?);
    }
    Ok(())
}
