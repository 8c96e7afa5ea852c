//! Amplifier-chain calibration from output noise power versus the
//! temperature of a matched load.

use transducer_sim::lab::{
    gain_cal_temperature_sweep, synthetic_temperature_sweep, ChainGains, SeededNoise,
};
use transducer_sim::spectrum::linear_grid;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let chain = ChainGains {
        gain_db: 56.59,
        n_amp: 12.0,
        f_if: 2e3,
        ..ChainGains::UNITY
    };
    let freq = 5.0745e9;
    let temps = linear_grid(0.02, 4.0, 25);
    for rel in [0.0, 0.01] {
        let mut noise = SeededNoise::new(3);
        let data = synthetic_temperature_sweep(&temps, freq, &chain, rel, &mut noise);
        let cal = gain_cal_temperature_sweep(&data, freq, chain.f_if)?;
        println!(
            "noise {:>4.1}%: G_A = {:.3} dB (true {}), n_amp = {:.3} (true {}), rms {:.2e}",
            rel * 100.0,
            cal.gain_db,
            chain.gain_db,
            cal.n_amp,
            chain.n_amp,
            cal.residual_rms_rel
        );
    }
    Ok(())
}
