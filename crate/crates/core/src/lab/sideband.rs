//! Sideband-asymmetry thermometry and the gain referral it enables.

use super::fit::lorentzian_fit;
use super::thermometry::{resonator_background, squash_numerator};
use super::{LabError, Regime, SeededNoise, ThermometryContext};
use crate::constants::linear_to_db;
use crate::spectrum::{Spectrum, SpectrumKind};

/// Background-subtracted red- and blue-sideband spectra on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SidebandPair {
    pub red: Spectrum,
    pub blue: Spectrum,
    pub seed: u64,
}

fn area(s: &Spectrum) -> Result<f64, LabError> {
    s.trapezoid()
        .ok_or_else(|| LabError::Unphysical("sideband spectra must be real".into()))
}

/// n_m from 1/n_m = ∫S_b/∫S_r − 1, trapezoid integrals over the common grid.
pub fn sideband_asymmetry(red: &Spectrum, blue: &Spectrum) -> Result<f64, LabError> {
    if red.frequencies() != blue.frequencies() {
        return Err(LabError::GridMismatch);
    }
    let (ir, ib) = (area(red)?, area(blue)?);
    if ir <= 0.0 {
        return Err(LabError::Unphysical(format!("red-sideband area {ir} ≤ 0")));
    }
    if ib <= ir {
        return Err(LabError::Unphysical(format!(
            "blue-sideband area {ib} does not exceed red area {ir}"
        )));
    }
    Ok(ir / (ib - ir))
}

/// Lorentzian sidebands with areas ∝ n_m (red) and n_m + 1 (blue).
///
/// `amplitude` is the peak of a one-quantum line; white Gaussian noise of
/// σ = `rel_noise` × blue peak is added to every sample.
pub fn synthetic_sideband_pair(
    n_m: f64,
    center_hz: f64,
    linewidth_hz: f64,
    grid: &[f64],
    amplitude: f64,
    rel_noise: f64,
    noise: &mut SeededNoise,
) -> Result<SidebandPair, LabError> {
    let h = linewidth_hz / 2.0;
    let line = |weight: f64| -> Vec<f64> {
        grid.iter()
            .map(|&f| amplitude * weight * h * h / ((f - center_hz).powi(2) + h * h))
            .collect()
    };
    let sigma = rel_noise * amplitude * (n_m + 1.0);
    let mut red = line(n_m);
    let mut blue = line(n_m + 1.0);
    noise.add_white(&mut red, sigma);
    noise.add_white(&mut blue, sigma);
    Ok(SidebandPair {
        red: Spectrum::new_real(grid.to_vec(), red, SpectrumKind::Measured)?,
        blue: Spectrum::new_real(grid.to_vec(), blue, SpectrumKind::Measured)?,
        seed: noise.seed(),
    })
}

/// Chain gain G_A in dB that maps the emission line of an electrical
/// spectrum onto the mechanical occupancy `n_m` fixed by sideband asymmetry.
///
/// Inverts the thermometry line numerator
/// η_e Γ_em (Γ_tot n_m − Γ_em n_mw) + s·|χ_e|² κ_ext κ_int n_e,int.
pub fn sideband_gain_referral(
    emission: &Spectrum,
    n_m: f64,
    ctx: &ThermometryContext,
    n_mw: f64,
    regime: Regime,
) -> Result<f64, LabError> {
    let r = &ctx.rates;
    let fit = lorentzian_fit(emission)?;
    let tot = fit.fwhm;
    let expected = r.eta_e * r.gamma_em * (tot * n_m - r.gamma_em * n_mw)
        + squash_numerator(r.gamma_em, tot) * resonator_background(ctx, regime, n_mw);
    let ratio = fit.numerator() / expected;
    if !(ratio > 0.0 && ratio.is_finite()) {
        return Err(LabError::Unphysical(format!(
            "emission line numerator {} inconsistent with n_m = {n_m}",
            fit.numerator()
        )));
    }
    Ok(linear_to_db(ratio))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::device::{Baths, DerivedRates};
    use crate::lab::{electrical_psd, ChainGains};
    use crate::spectrum::linear_grid;
    use proptest::prelude::*;

    fn pair(n: f64, rel: f64, seed: u64) -> SidebandPair {
        let grid = linear_grid(-10.0 * 5e3, 10.0 * 5e3, 2001);
        synthetic_sideband_pair(n, 0.0, 5e3, &grid, 1.0, rel, &mut SeededNoise::new(seed)).unwrap()
    }

    #[test]
    fn noiseless_recovery() {
        let p = pair(1.81, 0.0, 0);
        let n = sideband_asymmetry(&p.red, &p.blue).unwrap();
        assert!((n / 1.81 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ratio_two_is_one_quantum() {
        let p = pair(1.0, 0.0, 0);
        assert!((sideband_asymmetry(&p.red, &p.blue).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_inverted_or_mismatched_pairs() {
        let p = pair(1.0, 0.0, 0);
        assert!(matches!(
            sideband_asymmetry(&p.blue, &p.red),
            Err(LabError::Unphysical(_))
        ));
        let short =
            Spectrum::new_real(vec![0.0, 1.0], vec![1.0, 1.0], SpectrumKind::Measured).unwrap();
        assert!(matches!(
            sideband_asymmetry(&p.red, &short),
            Err(LabError::GridMismatch)
        ));
    }

    #[test]
    fn gain_referral_round_trip() {
        let ctx = ThermometryContext {
            rates: DerivedRates {
                coupling_em: 0.0,
                coupling_om: 0.0,
                gamma_em: 20e3,
                gamma_om: 797.0,
                gamma_i: 1338.0,
                eta_e: 0.8,
                eta_o: 0.5,
            },
            baths: Baths {
                n_e_int: 0.12,
                n_f: 0.3,
                n_p: 40.0,
                gamma_f: 892.0,
                gamma_p: 446.0,
                kappa_e_ext: 1.33e6,
                kappa_e_int: 0.33e6,
            },
            omega_e: 5.0745e9,
            omega_m: 5.0745e9,
        };
        let chain = ChainGains {
            gain_db: 55.83,
            n_amp: 10.0,
            ..ChainGains::UNITY
        };
        let tot = ctx.rates.gamma_tot();
        let grid = linear_grid(ctx.omega_m - 10.0 * tot, ctx.omega_m + 10.0 * tot, 401);
        let s = electrical_psd(&ctx, &chain, &grid, Regime::OnResonance).unwrap();
        let n_mw = crate::metrics::microwave_occupancy(&ctx.baths);
        let n_m = crate::metrics::occupancies(&ctx.rates, &ctx.baths, Default::default()).n_m;
        let g = sideband_gain_referral(&s, n_m, &ctx, n_mw, Regime::OnResonance).unwrap();
        assert!((g - 55.83).abs() < 1e-8, "{g}");
    }

    proptest! {
        #[test]
        fn common_rescaling_is_invisible(n in 0.05..20.0f64, k in 1e-6..1e6f64) {
            let p = pair(n, 0.0, 0);
            let a = sideband_asymmetry(&p.red, &p.blue).unwrap();
            let b = sideband_asymmetry(&p.red.scaled(k), &p.blue.scaled(k)).unwrap();
            prop_assert!((a / b - 1.0).abs() < 1e-12);
        }
    }
}
