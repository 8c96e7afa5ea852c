//! Referral of optical-output noise to an equivalent microwave input.

use serde::{Deserialize, Serialize};

use super::{ChainGains, LabError, SeededNoise};
use crate::constants::photon_energy;
use crate::device::{Assembly, BATH_E_EXT, BATH_O_EXT};
use crate::network::{output_flux_psd, transfer_matrix};

/// Detected powers from one optical-noise run, all after the same detector gain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpticalNoiseMeasurement {
    /// Noise power in the integration bandwidth with no microwave drive, W.
    pub p_noise_w: f64,
    /// Coherently transduced power with drive `p_e_w`, W.
    pub p_oe_w: f64,
    /// Microwave drive at the device, W.
    pub p_e_w: f64,
    pub f_if: f64,
    pub omega_o_hz: f64,
    pub omega_e_hz: f64,
    pub seed: u64,
}

/// Added noise n_add = N_o,noise/η_tot.
///
/// N_o,noise = P_noise/(f_IF ħω_o) and η_tot = (P_oe/ħω_o)/(P_e/ħω_e), so the
/// detector gain and ħω_o cancel.
pub fn optical_noise_referral(
    p_noise_w: f64,
    p_oe_w: f64,
    p_e_w: f64,
    f_if: f64,
    omega_o_hz: f64,
    omega_e_hz: f64,
) -> Result<f64, LabError> {
    if p_oe_w <= 0.0 {
        return Err(LabError::ZeroDenominator("coherent transduction power"));
    }
    if !(p_e_w > 0.0 && f_if > 0.0 && omega_o_hz > 0.0 && omega_e_hz > 0.0) {
        return Err(LabError::Unphysical(
            "drive power, f_IF and carrier frequencies must be positive".into(),
        ));
    }
    let n_noise = p_noise_w / (f_if * photon_energy(omega_o_hz));
    let eta_tot = (p_oe_w / photon_energy(omega_o_hz)) / (p_e_w / photon_energy(omega_e_hz));
    Ok(n_noise / eta_tot)
}

/// Readout settings for [`synthetic_optical_noise_measurement`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpticalReadout {
    /// Absolute optical carrier, Hz.
    pub omega_o_hz: f64,
    /// Microwave drive at the device, W.
    pub p_e_w: f64,
    /// Per-shot relative Gaussian noise on each detected power.
    pub rel_noise: f64,
    /// Shots averaged per reported power.
    pub averages: usize,
}

/// Detected powers at `probe_hz` generated from the network's own output
/// noise density and conversion amplitude, seen through `chain.optical_gain()`.
pub fn synthetic_optical_noise_measurement(
    asm: &Assembly,
    probe_hz: f64,
    chain: &ChainGains,
    readout: &OpticalReadout,
    noise: &mut SeededNoise,
) -> Result<OpticalNoiseMeasurement, LabError> {
    chain.validate()?;
    if readout.averages == 0 {
        return Err(LabError::Degenerate("zero averages".into()));
    }
    let sys = &asm.system;
    let n_out = output_flux_psd(sys, &asm.occupancies, BATH_O_EXT, &[probe_hz])?
        .real()
        .expect("flux densities are real")[0];
    let xi = transfer_matrix(sys, probe_hz)?;
    let eta = xi[(sys.output_index(BATH_O_EXT)?, sys.input_index(BATH_E_EXT)?)].norm_sqr();

    let g = chain.optical_gain();
    let ratio = readout.omega_o_hz / probe_hz;
    let noise_power = g * chain.f_if * photon_energy(readout.omega_o_hz) * n_out;
    let coherent_power = g * eta * readout.p_e_w * ratio;
    let mut averaged = |p: f64| {
        (0..readout.averages)
            .map(|_| noise.relative(p, readout.rel_noise))
            .sum::<f64>()
            / readout.averages as f64
    };
    let p_noise_w = averaged(noise_power);
    let p_oe_w = averaged(coherent_power);
    Ok(OpticalNoiseMeasurement {
        p_noise_w,
        p_oe_w,
        p_e_w: readout.p_e_w,
        f_if: chain.f_if,
        omega_o_hz: readout.omega_o_hz,
        omega_e_hz: probe_hz,
        seed: noise.seed(),
    })
}

impl OpticalNoiseMeasurement {
    pub fn added_noise(&self) -> Result<f64, LabError> {
        optical_noise_referral(
            self.p_noise_w,
            self.p_oe_w,
            self.p_e_w,
            self.f_if,
            self.omega_o_hz,
            self.omega_e_hz,
        )
    }
}
