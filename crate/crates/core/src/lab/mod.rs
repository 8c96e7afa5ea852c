//! Virtual calibration lab: replays the measurement procedures used to
//! characterize a transducer on synthetic data, so every estimator can be
//! checked against the parameters that generated its input.

mod fit;
mod four_port;
mod gain_cal;
mod noise;
mod optical_noise;
mod sideband;
mod thermometry;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constants::db_to_linear;
use crate::network::NetworkError;
use crate::spectrum::SpectrumError;

pub use fit::{fit_coupling_slope, lorentzian_fit, FitError, LorentzianFit};
pub use four_port::{four_port_run, FourPortOptions, FourPortResult, ReflectionModel};
pub use gain_cal::{
    gain_cal_temperature_sweep, synthetic_temperature_sweep, GainCalibration, GainSweepPoint,
};
pub use noise::SeededNoise;
pub use optical_noise::{
    optical_noise_referral, synthetic_optical_noise_measurement, OpticalNoiseMeasurement,
    OpticalReadout,
};
pub use sideband::{
    sideband_asymmetry, sideband_gain_referral, synthetic_sideband_pair, SidebandPair,
};
pub use thermometry::{
    electrical_psd, extract_mechanical_occupancy, extract_microwave_occupancy, squash_numerator,
    MechanicalOccupancy, MicrowaveOccupancy, Regime, ThermometryContext,
};

#[derive(Debug, Error)]
pub enum LabError {
    #[error(transparent)]
    Fit(#[from] FitError),
    #[error("chain parameter `{name}` = {value} is out of range ({rule})")]
    Chain {
        name: &'static str,
        value: f64,
        rule: &'static str,
    },
    #[error("unphysical input: {0}")]
    Unphysical(String),
    #[error("degenerate design: {0}")]
    Degenerate(String),
    #[error("least squares did not converge within {iterations} iterations")]
    NonConvergent { iterations: usize },
    #[error("zero {0}: ratio undefined")]
    ZeroDenominator(&'static str),
    #[error("spectra must share one frequency grid")]
    GridMismatch,
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
}

/// Losses, gains and noise of the measurement chains around the device.
///
/// α are input-path power transmissions, β output-path power gains.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainGains {
    pub alpha_e: f64,
    pub alpha_o: f64,
    pub beta_e: f64,
    pub beta_o: f64,
    /// Net electrical output gain G_A, dB.
    pub gain_db: f64,
    /// Optical detection gain G_o, dB.
    pub optical_gain_db: f64,
    /// Amplifier-chain added noise, photons.
    pub n_amp: f64,
    /// Integration bandwidth, Hz.
    pub f_if: f64,
}

impl ChainGains {
    /// Lossless, unity-gain, noiseless chain with a 1 Hz integration bandwidth.
    pub const UNITY: Self = Self {
        alpha_e: 1.0,
        alpha_o: 1.0,
        beta_e: 1.0,
        beta_o: 1.0,
        gain_db: 0.0,
        optical_gain_db: 0.0,
        n_amp: 0.0,
        f_if: 1.0,
    };

    pub fn validate(&self) -> Result<(), LabError> {
        let check = |name, value: f64, ok: bool, rule| {
            if ok && value.is_finite() {
                Ok(())
            } else {
                Err(LabError::Chain { name, value, rule })
            }
        };
        check(
            "alpha_e",
            self.alpha_e,
            self.alpha_e > 0.0 && self.alpha_e <= 1.0,
            "0 < α ≤ 1",
        )?;
        check(
            "alpha_o",
            self.alpha_o,
            self.alpha_o > 0.0 && self.alpha_o <= 1.0,
            "0 < α ≤ 1",
        )?;
        check("beta_e", self.beta_e, self.beta_e > 0.0, "β > 0")?;
        check("beta_o", self.beta_o, self.beta_o > 0.0, "β > 0")?;
        check("gain_db", self.gain_db, true, "finite")?;
        check("optical_gain_db", self.optical_gain_db, true, "finite")?;
        check("n_amp", self.n_amp, self.n_amp >= 0.0, "n_amp ≥ 0")?;
        check("f_if", self.f_if, self.f_if > 0.0, "f_IF > 0")
    }

    /// Linear electrical power gain 10^(G_A/10).
    pub fn electrical_gain(&self) -> f64 {
        db_to_linear(self.gain_db)
    }

    /// Linear optical detection gain 10^(G_o/10).
    pub fn optical_gain(&self) -> f64 {
        db_to_linear(self.optical_gain_db)
    }
}
