//! Amplifier-chain calibration from thermal noise of a stepped-temperature load.

use serde::{Deserialize, Serialize};

use super::{ChainGains, LabError, SeededNoise};
use crate::constants::{bose_occupancy, linear_to_db, photon_energy};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GainSweepPoint {
    pub temperature_k: f64,
    pub power_w: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GainCalibration {
    pub gain_db: f64,
    pub n_amp: f64,
    /// RMS of P_model/P − 1 over the sweep.
    pub residual_rms_rel: f64,
}

/// P = f_IF ħω 10^(G/10) (n_B(T) + n_amp) sampled at `temperatures_k`, each
/// sample multiplied by (1 + ε) with ε ~ N(0, `rel_noise`²).
pub fn synthetic_temperature_sweep(
    temperatures_k: &[f64],
    freq_hz: f64,
    chain: &ChainGains,
    rel_noise: f64,
    noise: &mut SeededNoise,
) -> Vec<GainSweepPoint> {
    let scale = chain.f_if * photon_energy(freq_hz) * chain.electrical_gain();
    temperatures_k
        .iter()
        .map(|&t| GainSweepPoint {
            temperature_k: t,
            power_w: noise.relative(
                scale * (bose_occupancy(freq_hz, t) + chain.n_amp),
                rel_noise,
            ),
        })
        .collect()
}

/// Least-squares (G_A, n_amp) from a temperature sweep, minimizing relative
/// power residuals.
///
/// In (a, a·n_amp) with a = 10^(G_A/10) the model is linear, so the
/// weighted linear solve is the exact minimizer over (G_A, n_amp).
pub fn gain_cal_temperature_sweep(
    data: &[GainSweepPoint],
    freq_hz: f64,
    f_if: f64,
) -> Result<GainCalibration, LabError> {
    if !(f_if > 0.0 && freq_hz > 0.0) {
        return Err(LabError::Unphysical("f_IF and ω must be positive".into()));
    }
    if let Some(p) = data
        .iter()
        .find(|p| !(p.temperature_k > 0.0 && p.power_w > 0.0 && p.power_w.is_finite()))
    {
        return Err(LabError::Unphysical(format!(
            "sweep point T = {} K, P = {} W",
            p.temperature_k, p.power_w
        )));
    }
    let mut temps: Vec<f64> = data.iter().map(|p| p.temperature_k).collect();
    temps.sort_by(f64::total_cmp);
    temps.dedup();
    if temps.len() < 3 {
        return Err(LabError::Degenerate(format!(
            "{} distinct temperatures, need at least 3",
            temps.len()
        )));
    }

    let unit = f_if * photon_energy(freq_hz);
    // Row i: (x_i, 1)·(a, a n_amp) ≈ y_i, weighted by 1/y_i.
    let (mut sxx, mut sx, mut s1, mut sxy, mut sy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for p in data {
        let x = bose_occupancy(freq_hz, p.temperature_k);
        let y = p.power_w / unit;
        let w = 1.0 / (y * y);
        sxx += w * x * x;
        sx += w * x;
        s1 += w;
        sxy += w * x * y;
        sy += w * y;
    }
    let det = sxx * s1 - sx * sx;
    if !(det > 1e-12 * sxx * s1) {
        return Err(LabError::Degenerate(
            "thermal occupancies are indistinguishable across the sweep".into(),
        ));
    }
    let a = (sxy * s1 - sx * sy) / det;
    let b = (sxx * sy - sx * sxy) / det;
    if a <= 0.0 {
        return Err(LabError::Unphysical(format!(
            "power falls with temperature (slope {a})"
        )));
    }
    let n_amp = b / a;
    let ss: f64 = data
        .iter()
        .map(|p| {
            let model = unit * a * (bose_occupancy(freq_hz, p.temperature_k) + n_amp);
            (model / p.power_w - 1.0).powi(2)
        })
        .sum();
    Ok(GainCalibration {
        gain_db: linear_to_db(a),
        n_amp,
        residual_rms_rel: (ss / data.len() as f64).sqrt(),
    })
}
