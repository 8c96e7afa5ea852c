//! Closed-form figures of merit for the three-mode transducer.
//!
//! All inputs and outputs are in Hz. The Lorentzian forms assume the
//! resonators are much broader than the mechanical features; the exact
//! three-mode amplitude is [`s_oe_susceptibility`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::device::{derive, Baths, DerivedRates, DeviceError, DeviceParams, OperatingPoint};

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("noise referral undefined: {0}")]
    UndefinedReferral(&'static str),
    #[error("duty cycle {0} outside (0, 1]")]
    DutyCycle(f64),
}

/// Weak-coupling microwave-to-optical amplitude
/// −√(η_e η_o Γ_em Γ_om)/(i(ω_m − ω) + Γ_tot/2).
pub fn s_oe_analytic(rates: &DerivedRates, omega: f64, omega_m: f64) -> Complex64 {
    let num = (rates.eta_e * rates.eta_o * rates.gamma_em * rates.gamma_om).sqrt();
    -num / Complex64::new(rates.gamma_tot() / 2.0, omega_m - omega)
}

/// Inverse susceptibility i(ω_j − ω) + κ_j/2.
fn inv_chi(omega_j: f64, kappa: f64, omega: f64) -> Complex64 {
    Complex64::new(kappa / 2.0, omega_j - omega)
}

/// Microwave-to-optical amplitude with the full resonator susceptibilities,
/// exact for the linearized three-mode network at any coupling strength.
pub fn s_oe_susceptibility(
    dev: &DeviceParams,
    op: &OperatingPoint,
    rates: &DerivedRates,
    omega: f64,
) -> Complex64 {
    let chi_e = inv_chi(op.microwave_freq(dev), dev.kappa_e(), omega).inv();
    let chi_o = inv_chi(op.detuning(dev), dev.kappa_o(), omega).inv();
    let inv_chi_m = inv_chi(dev.omega_m, rates.gamma_i, omega);
    let (g_em, g_om) = (rates.coupling_em, rates.coupling_om);
    let den = g_em * g_em * chi_e + g_om * g_om * chi_o + inv_chi_m;
    -(dev.kappa_e_ext * dev.kappa_o_ext).sqrt() * g_em * g_om * chi_e * chi_o / den
}

/// Peak external efficiency η_e η_o · 4Γ_em Γ_om/Γ_tot².
pub fn eta_ext(rates: &DerivedRates) -> f64 {
    let tot = rates.gamma_tot();
    if tot == 0.0 {
        return 0.0;
    }
    rates.eta_e * rates.eta_o * 4.0 * rates.gamma_em * rates.gamma_om / (tot * tot)
}

/// External efficiency |s_oe(ω)|² at probe frequency `omega`.
pub fn eta_ext_at(rates: &DerivedRates, omega: f64, omega_m: f64) -> f64 {
    s_oe_analytic(rates, omega, omega_m).norm_sqr()
}

/// Internal efficiency η_ext/(η_e η_o).
pub fn eta_int(rates: &DerivedRates) -> f64 {
    eta_ext(rates) / (rates.eta_e * rates.eta_o)
}

/// Transduction bandwidth, the total mechanical linewidth Γ_tot.
pub fn bandwidth(rates: &DerivedRates) -> f64 {
    rates.gamma_tot()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OccupancyModel {
    /// Includes mechanical heating by the microwave resonator's occupancy.
    #[default]
    Full,
    /// Hot bath only: Γ_p n_p/Γ_tot.
    HotBathOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Occupancies {
    pub n_mw: f64,
    pub n_m: f64,
}

/// Microwave occupancy κ_e,int n_e,int/κ_e.
pub fn microwave_occupancy(baths: &Baths) -> f64 {
    baths.kappa_e_int * baths.n_e_int / baths.kappa_e()
}

/// (n_mw, n_m) at equilibrium.
///
/// Full: n_m = (Γ_em n_mw + Γ_f n_f + Γ_p n_p)/Γ_tot.
pub fn occupancies(rates: &DerivedRates, baths: &Baths, model: OccupancyModel) -> Occupancies {
    let n_mw = microwave_occupancy(baths);
    let heating = match model {
        OccupancyModel::Full => {
            rates.gamma_em * n_mw + baths.gamma_f * baths.n_f + baths.gamma_p * baths.n_p
        }
        OccupancyModel::HotBathOnly => baths.gamma_p * baths.n_p,
    };
    let tot = rates.gamma_tot();
    Occupancies {
        n_mw,
        n_m: if heating == 0.0 { 0.0 } else { heating / tot },
    }
}

fn referral_denominator(rates: &DerivedRates) -> Result<f64, MetricsError> {
    let den = rates.eta_e * rates.gamma_em;
    if den > 0.0 {
        Ok(den)
    } else if rates.gamma_em <= 0.0 {
        Err(MetricsError::UndefinedReferral("Γ_em = 0"))
    } else {
        Err(MetricsError::UndefinedReferral("η_e = 0"))
    }
}

/// Input-referred added noise from the bath occupancies:
/// (κ_e,int/κ_e,ext) n_e,int + (Γ_f n_f + Γ_p n_p)/(η_e Γ_em).
pub fn added_noise(rates: &DerivedRates, baths: &Baths) -> Result<f64, MetricsError> {
    let den = referral_denominator(rates)?;
    Ok(baths.kappa_e_int / baths.kappa_e_ext * baths.n_e_int
        + (baths.gamma_f * baths.n_f + baths.gamma_p * baths.n_p) / den)
}

/// Input-referred added noise from the mechanical occupancy: n_m Γ_tot/(η_e Γ_em).
pub fn added_noise_from_occupancy(rates: &DerivedRates, n_m: f64) -> Result<f64, MetricsError> {
    Ok(n_m * rates.gamma_tot() / referral_denominator(rates)?)
}

/// Input-referred added noise from a measured optical output noise n_o,out.
pub fn added_noise_optical_route(n_o_out: f64, eta_ext: f64) -> Result<f64, MetricsError> {
    if eta_ext > 0.0 {
        Ok(n_o_out / eta_ext)
    } else {
        Err(MetricsError::UndefinedReferral("η_ext = 0"))
    }
}

/// Thermal photon flux density at the optical output, three Lorentzian terms
/// driven by n_e,int, n_f and n_p.
pub fn optical_output_noise(rates: &DerivedRates, baths: &Baths, omega: f64, omega_m: f64) -> f64 {
    let d = omega_m - omega;
    let lorentz = rates.eta_o * rates.gamma_om / (d * d + 0.25 * rates.gamma_tot().powi(2));
    lorentz
        * (rates.eta_e * rates.gamma_em * baths.kappa_e_int / baths.kappa_e_ext * baths.n_e_int
            + baths.gamma_f * baths.n_f
            + baths.gamma_p * baths.n_p)
}

/// Throughput η_ext · B · D, Hz.
pub fn throughput(eta_ext: f64, bandwidth_hz: f64, duty_cycle: f64) -> Result<f64, MetricsError> {
    if !(duty_cycle > 0.0 && duty_cycle <= 1.0) {
        return Err(MetricsError::DutyCycle(duty_cycle));
    }
    Ok(eta_ext * bandwidth_hz * duty_cycle)
}

/// Rates echoed next to every metrics record, Hz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatesEcho {
    #[serde(rename = "G_em_Hz")]
    pub coupling_em: f64,
    #[serde(rename = "G_om_Hz")]
    pub coupling_om: f64,
    #[serde(rename = "Gamma_em_Hz")]
    pub gamma_em: f64,
    #[serde(rename = "Gamma_om_Hz")]
    pub gamma_om: f64,
    #[serde(rename = "Gamma_i_Hz")]
    pub gamma_i: f64,
    #[serde(rename = "Gamma_tot_Hz")]
    pub gamma_tot: f64,
    pub eta_e: f64,
    pub eta_o: f64,
}

impl From<&DerivedRates> for RatesEcho {
    fn from(r: &DerivedRates) -> Self {
        Self {
            coupling_em: r.coupling_em,
            coupling_om: r.coupling_om,
            gamma_em: r.gamma_em,
            gamma_om: r.gamma_om,
            gamma_i: r.gamma_i,
            gamma_tot: r.gamma_tot(),
            eta_e: r.eta_e,
            eta_o: r.eta_o,
        }
    }
}

/// Scalar figures of merit at one operating point.
///
/// `n_add` is `None` when the referral is undefined (Γ_em = 0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub eta_ext: f64,
    pub eta_int: f64,
    #[serde(rename = "B_Hz")]
    pub bandwidth_hz: f64,
    pub n_mw: f64,
    pub n_m: f64,
    pub n_add: Option<f64>,
    #[serde(rename = "throughput_Hz")]
    pub throughput_hz: f64,
    pub rates: RatesEcho,
}

impl MetricsReport {
    pub fn from_rates(
        rates: &DerivedRates,
        baths: &Baths,
        duty_cycle: f64,
    ) -> Result<Self, MetricsError> {
        let occ = occupancies(rates, baths, OccupancyModel::Full);
        let eta = eta_ext(rates);
        let b = bandwidth(rates);
        let n_add = match added_noise(rates, baths) {
            Ok(n) => Some(n),
            Err(MetricsError::UndefinedReferral(_)) => None,
            Err(e) => return Err(e),
        };
        Ok(Self {
            eta_ext: eta,
            eta_int: if eta == 0.0 { 0.0 } else { eta_int(rates) },
            bandwidth_hz: b,
            n_mw: occ.n_mw,
            n_m: occ.n_m,
            n_add,
            throughput_hz: throughput(eta, b, duty_cycle)?,
            rates: rates.into(),
        })
    }
}

#[derive(Debug, Error)]
pub enum EvaluateError {
    #[error(transparent)]
    Device(#[from] DeviceError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

/// Derives rates for `op` and evaluates every closed-form metric.
pub fn evaluate(dev: &DeviceParams, op: &OperatingPoint) -> Result<MetricsReport, EvaluateError> {
    let (rates, baths) = derive(dev, op)?;
    Ok(MetricsReport::from_rates(&rates, &baths, op.duty_cycle.d)?)
}
