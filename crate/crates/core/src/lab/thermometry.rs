//! Electrical thermometry through an amplifier chain.
//!
//! Spectra are S(ω)/ħω in quanta, multiplied by the chain gain 10^(G_A/10).
//! Frequencies and rates are in Hz throughout.

use serde::{Deserialize, Serialize};

use super::fit::{lorentzian_fit, LorentzianFit};
use super::{ChainGains, LabError};
use crate::device::{derive, Baths, DerivedRates, DeviceError, DeviceParams, OperatingPoint};
use crate::spectrum::{Spectrum, SpectrumKind};

/// Which approximation of the microwave susceptibility the spectrum uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Microwave resonator far from ω_m; χ_e(ω) kept frequency dependent.
    Detuned,
    /// ω_e = ω_m; χ_e is flat at 2/κ_e across the mechanical band.
    OnResonance,
}

/// Device state as seen by the thermometry chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermometryContext {
    pub rates: DerivedRates,
    pub baths: Baths,
    /// Tuned microwave resonance, Hz.
    pub omega_e: f64,
    pub omega_m: f64,
}

impl ThermometryContext {
    /// Context of the device at `op`.
    pub fn new(dev: &DeviceParams, op: &OperatingPoint) -> Result<Self, DeviceError> {
        let (rates, baths) = derive(dev, op)?;
        Ok(Self {
            rates,
            baths,
            omega_e: op.microwave_freq(dev),
            omega_m: dev.omega_m,
        })
    }
}

/// Noise-squashing numerator Γ_em²/4 − Γ_em Γ_tot/2; ≤ 0 whenever Γ_em ≤ Γ_tot.
pub fn squash_numerator(gamma_em: f64, gamma_tot: f64) -> f64 {
    gamma_em * gamma_em / 4.0 - gamma_em * gamma_tot / 2.0
}

fn chi_e_sqr(ctx: &ThermometryContext, regime: Regime, omega: f64) -> f64 {
    let half = ctx.baths.kappa_e() / 2.0;
    match regime {
        Regime::Detuned => 1.0 / ((ctx.omega_e - omega).powi(2) + half * half),
        Regime::OnResonance => 1.0 / (half * half),
    }
}

/// |χ_e(ω_m)|² κ_ext κ_int n_e,int, written through n_e,int = κ_e n_mw/κ_int.
pub(super) fn resonator_background(ctx: &ThermometryContext, regime: Regime, n_mw: f64) -> f64 {
    chi_e_sqr(ctx, regime, ctx.omega_m) * ctx.baths.kappa_e_ext * ctx.baths.kappa_e() * n_mw
}

/// Amplified symmetrized output noise of the microwave port.
///
/// G·(n_amp + ½ + η_e Γ_em H/L + (1 + s/L)·|χ_e|² κ_ext κ_int n_e,int) with
/// H = Γ_f n_f + Γ_p n_p, L = (ω − ω_m)² + Γ_tot²/4 and s the squash numerator.
pub fn electrical_psd(
    ctx: &ThermometryContext,
    chain: &ChainGains,
    grid: &[f64],
    regime: Regime,
) -> Result<Spectrum, LabError> {
    chain.validate()?;
    let r = &ctx.rates;
    let b = &ctx.baths;
    let tot = r.gamma_tot();
    let heating = b.gamma_f * b.n_f + b.gamma_p * b.n_p;
    let squash = squash_numerator(r.gamma_em, tot);
    let gain = chain.electrical_gain();
    let values = grid
        .iter()
        .map(|&w| {
            let l = (w - ctx.omega_m).powi(2) + tot * tot / 4.0;
            let mech = if r.gamma_em > 0.0 {
                r.eta_e * r.gamma_em * heating / l
            } else {
                0.0
            };
            let resonator = (1.0 + squash / l)
                * chi_e_sqr(ctx, regime, w)
                * b.kappa_e_ext
                * b.kappa_e_int
                * b.n_e_int;
            gain * (chain.n_amp + 0.5 + mech + resonator)
        })
        .collect();
    Ok(Spectrum::new_real(
        grid.to_vec(),
        values,
        SpectrumKind::SymmetrizedPsd,
    )?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MicrowaveOccupancy {
    pub n_e_int: f64,
    pub n_mw: f64,
    /// `None` when the spectrum is flat.
    pub fit: Option<LorentzianFit>,
}

fn is_flat(ys: &[f64]) -> bool {
    let scale = ys.iter().fold(0.0f64, |m, y| m.max(y.abs()));
    let lo = ys.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    hi - lo <= 1e-12 * scale
}

/// Internal bath occupancy of the microwave resonator from a V_DC = 0 spectrum.
///
/// The resonator peak over the amplifier floor fixes n_e,int without the
/// absolute gain: n_e,int = (peak/offset)(n_amp + ½) κ_e²/(4κ_ext κ_int).
pub fn extract_microwave_occupancy(
    spectrum: &Spectrum,
    chain: &ChainGains,
    kappa_e_ext: f64,
    kappa_e_int: f64,
) -> Result<MicrowaveOccupancy, LabError> {
    chain.validate()?;
    if !(kappa_e_ext > 0.0 && kappa_e_int > 0.0) {
        return Err(LabError::Unphysical(
            "both microwave decay rates must be positive".into(),
        ));
    }
    let ys = spectrum.real().ok_or(super::FitError::ComplexData)?;
    if is_flat(ys) {
        return Ok(MicrowaveOccupancy {
            n_e_int: 0.0,
            n_mw: 0.0,
            fit: None,
        });
    }
    let fit = lorentzian_fit(spectrum)?;
    if fit.offset <= 0.0 {
        return Err(LabError::Unphysical(format!(
            "non-positive amplifier floor {}",
            fit.offset
        )));
    }
    let kappa = kappa_e_ext + kappa_e_int;
    let n_e_int = fit.peak / fit.offset * (chain.n_amp + 0.5) * kappa * kappa
        / (4.0 * kappa_e_ext * kappa_e_int);
    if n_e_int < 0.0 {
        return Err(LabError::Unphysical(format!(
            "resonator feature is a dip (n_e,int = {n_e_int})"
        )));
    }
    Ok(MicrowaveOccupancy {
        n_e_int,
        n_mw: kappa_e_int * n_e_int / kappa,
        fit: Some(fit),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MechanicalOccupancy {
    pub n_m: f64,
    /// Γ_f n_f + Γ_p n_p, Hz.
    pub heating_rate: f64,
    /// Fitted mechanical linewidth, Hz; Γ_tot from `rates` for a flat spectrum.
    pub gamma_tot: f64,
    /// `None` when the spectrum is flat.
    pub fit: Option<LorentzianFit>,
}

/// Mechanical occupancy from the emission line in an electrical spectrum.
///
/// Uses `ctx.rates` (Γ_em, η_e), `ctx.omega_e`, `ctx.omega_m` and the
/// microwave decay rates in `ctx.baths`; bath occupancies in `ctx` are
/// ignored. The squash contribution implied by `n_mw` is removed from the
/// fitted line numerator before the heating rate is inferred.
pub fn extract_mechanical_occupancy(
    spectrum: &Spectrum,
    chain: &ChainGains,
    ctx: &ThermometryContext,
    n_mw: f64,
    regime: Regime,
) -> Result<MechanicalOccupancy, LabError> {
    chain.validate()?;
    let r = &ctx.rates;
    if !(r.gamma_em > 0.0 && r.eta_e > 0.0) {
        return Err(LabError::Unphysical(
            "mechanical emission needs Γ_em > 0 and η_e > 0".into(),
        ));
    }
    let ys = spectrum.real().ok_or(super::FitError::ComplexData)?;
    if is_flat(ys) {
        return Ok(MechanicalOccupancy {
            n_m: r.gamma_em * n_mw / r.gamma_tot(),
            heating_rate: 0.0,
            gamma_tot: r.gamma_tot(),
            fit: None,
        });
    }
    let fit = lorentzian_fit(&spectrum.scaled(1.0 / chain.electrical_gain()))?;
    let tot = fit.fwhm;
    let numerator = fit.numerator()
        - squash_numerator(r.gamma_em, tot) * resonator_background(ctx, regime, n_mw);
    let heating_rate = numerator / (r.eta_e * r.gamma_em);
    if heating_rate < -1e-9 * (r.gamma_em * n_mw).abs().max(f64::MIN_POSITIVE) {
        return Err(LabError::Unphysical(format!(
            "negative inferred heating rate {heating_rate} Hz"
        )));
    }
    let heating_rate = heating_rate.max(0.0);
    Ok(MechanicalOccupancy {
        n_m: (r.gamma_em * n_mw + heating_rate) / tot,
        heating_rate,
        gamma_tot: tot,
        fit: Some(fit),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{occupancies, OccupancyModel};
    use crate::spectrum::linear_grid;
    use proptest::prelude::*;

    fn context(gamma_em: f64, n_f: f64, n_p: f64, n_e_int: f64) -> ThermometryContext {
        let kappa_e_ext = 1.33e6;
        let kappa_e_int = 0.33e6;
        ThermometryContext {
            rates: DerivedRates {
                coupling_em: 0.0,
                coupling_om: 0.0,
                gamma_em,
                gamma_om: 797.0,
                gamma_i: 892.0 + 446.0,
                eta_e: kappa_e_ext / (kappa_e_ext + kappa_e_int),
                eta_o: 0.5,
            },
            baths: Baths {
                n_e_int,
                n_f,
                n_p,
                gamma_f: 892.0,
                gamma_p: 446.0,
                kappa_e_ext,
                kappa_e_int,
            },
            omega_e: 5.0745e9,
            omega_m: 5.0745e9,
        }
    }

    fn chain(gain_db: f64) -> ChainGains {
        ChainGains {
            gain_db,
            n_amp: 12.0,
            ..ChainGains::UNITY
        }
    }

    #[test]
    fn decoupled_mechanics_leaves_bare_resonator() {
        let ctx = context(0.0, 0.3, 40.0, 0.6);
        let grid = linear_grid(ctx.omega_e - 5e6, ctx.omega_e + 5e6, 11);
        let s = electrical_psd(&ctx, &chain(0.0), &grid, Regime::Detuned).unwrap();
        let k = ctx.baths.kappa_e();
        for (w, v) in grid.iter().zip(s.real().unwrap()) {
            let bare = 1.33e6 * 0.33e6 * 0.6 / ((w - ctx.omega_e).powi(2) + k * k / 4.0);
            assert!((v - (12.5 + bare)).abs() < 1e-12 * v);
        }
    }

    #[test]
    fn microwave_occupancy_round_trip() {
        let ctx = context(0.0, 0.0, 0.0, 0.6);
        let grid = linear_grid(ctx.omega_e - 8e6, ctx.omega_e + 8e6, 401);
        for g in [0.0, 56.59, 80.0] {
            let s = electrical_psd(&ctx, &chain(g), &grid, Regime::Detuned).unwrap();
            let m = extract_microwave_occupancy(&s, &chain(g), 1.33e6, 0.33e6).unwrap();
            assert!((m.n_e_int - 0.6).abs() < 1e-8, "{m:?}");
            assert!((m.n_mw - 0.6 * 0.33 / 1.66).abs() < 1e-8);
        }
    }

    #[test]
    fn flat_spectrum_means_cold_resonator() {
        let ctx = context(0.0, 0.0, 0.0, 0.0);
        let grid = linear_grid(ctx.omega_e - 8e6, ctx.omega_e + 8e6, 51);
        let s = electrical_psd(&ctx, &chain(50.0), &grid, Regime::Detuned).unwrap();
        let m = extract_microwave_occupancy(&s, &chain(50.0), 1.33e6, 0.33e6).unwrap();
        assert_eq!((m.n_e_int, m.n_mw), (0.0, 0.0));
    }

    #[test]
    fn mechanical_occupancy_round_trip_on_resonance() {
        let ctx = context(20e3, 0.3, 40.0, 0.12);
        let tot = ctx.rates.gamma_tot();
        let grid = linear_grid(ctx.omega_m - 10.0 * tot, ctx.omega_m + 10.0 * tot, 401);
        let s = electrical_psd(&ctx, &chain(56.59), &grid, Regime::OnResonance).unwrap();
        let n_mw = crate::metrics::microwave_occupancy(&ctx.baths);
        let got = extract_mechanical_occupancy(&s, &chain(56.59), &ctx, n_mw, Regime::OnResonance)
            .unwrap();
        let want = occupancies(&ctx.rates, &ctx.baths, OccupancyModel::Full).n_m;
        assert!((got.n_m / want - 1.0).abs() < 1e-8, "{} vs {want}", got.n_m);
    }

    #[test]
    fn zero_heating_gives_zero_occupancy() {
        let ctx = context(20e3, 0.0, 0.0, 0.0);
        let tot = ctx.rates.gamma_tot();
        let grid = linear_grid(ctx.omega_m - 10.0 * tot, ctx.omega_m + 10.0 * tot, 101);
        let s = electrical_psd(&ctx, &chain(0.0), &grid, Regime::OnResonance).unwrap();
        let m =
            extract_mechanical_occupancy(&s, &chain(0.0), &ctx, 0.0, Regime::OnResonance).unwrap();
        assert_eq!(m.n_m, 0.0);
    }

    #[test]
    fn resonator_noise_alone_is_a_dip() {
        let ctx = context(20e3, 0.0, 0.0, 0.5);
        let tot = ctx.rates.gamma_tot();
        let grid = linear_grid(ctx.omega_m - 10.0 * tot, ctx.omega_m + 10.0 * tot, 201);
        let s = electrical_psd(&ctx, &chain(0.0), &grid, Regime::OnResonance).unwrap();
        let fit = lorentzian_fit(&s).unwrap();
        assert!(fit.peak < 0.0);
    }

    proptest! {
        #[test]
        fn squash_never_adds_noise(tot in 1.0..1e6f64, frac in 0.0..=1.0f64) {
            prop_assert!(squash_numerator(frac * tot, tot) <= 0.0);
            if frac > 0.0 {
                prop_assert!(squash_numerator(frac * tot, tot) <= -(frac * tot).powi(2) / 4.0 * (1.0 - 1e-12));
            }
        }

        #[test]
        fn microwave_occupancy_ignores_gain(g in -20.0..90.0f64, n in 0.01..5.0f64) {
            let ctx = context(0.0, 0.0, 0.0, n);
            let grid = linear_grid(ctx.omega_e - 8e6, ctx.omega_e + 8e6, 201);
            let s = electrical_psd(&ctx, &chain(g), &grid, Regime::Detuned).unwrap();
            let m = extract_microwave_occupancy(&s, &chain(g), 1.33e6, 0.33e6).unwrap();
            prop_assert!((m.n_e_int / n - 1.0).abs() < 1e-7);
        }
    }
}
