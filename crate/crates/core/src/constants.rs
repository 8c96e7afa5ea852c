//! Physical constants (CODATA 2018, exact SI values) and unit helpers.
//!
//! Every public interface in this crate takes ordinary frequencies and rates
//! in Hz. The state-space model stores angular rates (rad/s); conversions
//! happen only through [`to_angular`] and [`to_hz`].

use std::f64::consts::TAU;

/// Planck constant, J·s.
pub const PLANCK: f64 = 6.626_070_15e-34;

/// Reduced Planck constant ħ = h/2π, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Ordinary frequency (Hz) to angular frequency (rad/s).
#[inline]
pub fn to_angular(hz: f64) -> f64 {
    hz * TAU
}

/// Angular frequency (rad/s) to ordinary frequency (Hz).
#[inline]
pub fn to_hz(rad_per_s: f64) -> f64 {
    rad_per_s / TAU
}

/// Photon energy ħω for an ordinary frequency given in Hz.
#[inline]
pub fn photon_energy(freq_hz: f64) -> f64 {
    HBAR * to_angular(freq_hz)
}

/// Bose–Einstein occupancy of a mode at `freq_hz` in equilibrium at `kelvin`.
pub fn bose_occupancy(freq_hz: f64, kelvin: f64) -> f64 {
    if kelvin <= 0.0 {
        return 0.0;
    }
    let x = photon_energy(freq_hz) / (BOLTZMANN * kelvin);
    1.0 / x.exp_m1()
}

/// Decibels to a linear power ratio.
#[inline]
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Linear power ratio to decibels.
#[inline]
pub fn linear_to_db(ratio: f64) -> f64 {
    10.0 * ratio.log10()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hbar_matches_planck_over_tau() {
        assert!((PLANCK / TAU - HBAR).abs() / HBAR < 1e-9);
    }

    #[test]
    fn bose_limits() {
        assert_eq!(bose_occupancy(5e9, 0.0), 0.0);
        // High-temperature limit approaches k_B T / ħω.
        let n = bose_occupancy(5e9, 100.0);
        let classical = BOLTZMANN * 100.0 / photon_energy(5e9);
        assert!((n - (classical - 0.5)).abs() / n < 1e-4);
    }

    #[test]
    fn db_round_trip() {
        assert!((linear_to_db(db_to_linear(56.59)) - 56.59).abs() < 1e-12);
        assert_eq!(db_to_linear(0.0), 1.0);
    }
}
