//! Transducer hardware parameters, operating points, derived rates, and the
//! assembly of the three-mode electro-optomechanical network.
//!
//! The network has modes `e` (microwave), `m` (mechanics) and `o` (optics,
//! in the pump-laser frame) and six baths in this order:
//! `e_ext`, `e_int`, `o_ext`, `o_int`, `f` (fridge), `p` (laser-induced hot
//! bath). `e_ext` and `o_ext` are the ports.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constants::{to_angular, HBAR};
use crate::network::{
    build_system, transfer_matrix, BathDecl, CouplingDecl, LinearSystem, ModeDecl, NetworkError,
    OccupancyMap,
};

pub const MODE_E: &str = "e";
pub const MODE_M: &str = "m";
pub const MODE_O: &str = "o";
pub const BATH_E_EXT: &str = "e_ext";
pub const BATH_E_INT: &str = "e_int";
pub const BATH_O_EXT: &str = "o_ext";
pub const BATH_O_INT: &str = "o_int";
pub const BATH_F: &str = "f";
pub const BATH_P: &str = "p";

#[derive(Debug, Error)]
pub enum DeviceError {
    #[error("device parameter `{name}` = {value} is out of range ({rule})")]
    Param {
        name: &'static str,
        value: f64,
        rule: &'static str,
    },
    #[error("operating point `{name}` = {value} is out of range ({rule})")]
    Operating {
        name: &'static str,
        value: f64,
        rule: &'static str,
    },
    #[error("duty cycle D = {d} does not equal T_d·R_p = {product}")]
    DutyCycle { d: f64, product: f64 },
    #[error("pulse duration and repetition rate must be given together")]
    DutyCycleIncomplete,
    #[error("hot-bath table covers n_c ∈ [{min}, {max}]; n_c = {n_c} would extrapolate")]
    HotBathRange { n_c: f64, min: f64, max: f64 },
    #[error("hot-bath model invalid: {0}")]
    HotBath(String),
    #[error("target efficiency {target} is not reachable (max found {best})")]
    Unreachable { target: f64, best: f64 },
    #[error(transparent)]
    Network(#[from] NetworkError),
}

fn positive(name: &'static str, value: f64) -> Result<(), DeviceError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(DeviceError::Param {
            name,
            value,
            rule: "finite and > 0",
        })
    }
}

fn non_negative(name: &'static str, value: f64) -> Result<(), DeviceError> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(DeviceError::Operating {
            name,
            value,
            rule: "finite and ≥ 0",
        })
    }
}

/// Fixed hardware numbers. Frequencies and rates in Hz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceParams {
    pub omega_e: f64,
    pub kappa_e_ext: f64,
    pub kappa_e_int: f64,
    pub omega_o: f64,
    pub kappa_o_ext: f64,
    pub kappa_o_int: f64,
    pub omega_m: f64,
    /// Intrinsic mechanical linewidth with the laser off, microwave-saturated.
    pub gamma_i_saturated: f64,
    /// Electromechanical vacuum coupling per volt of bias, Hz/V.
    pub g_em_per_volt: f64,
    pub g_om: f64,
    /// Fiber-to-waveguide power efficiency.
    pub eta_f: f64,
}

impl DeviceParams {
    /// The characterized reference device.
    pub fn reference() -> Self {
        Self {
            omega_e: 5.0745e9,
            kappa_e_ext: 1.33e6,
            kappa_e_int: 330e3,
            omega_o: 192.9263e12,
            kappa_o_ext: 1.35e9,
            kappa_o_int: 404e6,
            omega_m: 5.0745e9,
            gamma_i_saturated: 892.0,
            g_em_per_volt: 3.81e3,
            g_om: 343e3,
            eta_f: 0.35,
        }
    }

    pub fn validate(&self) -> Result<(), DeviceError> {
        positive("omega_e", self.omega_e)?;
        positive("kappa_e_ext", self.kappa_e_ext)?;
        positive("kappa_e_int", self.kappa_e_int)?;
        positive("omega_o", self.omega_o)?;
        positive("kappa_o_ext", self.kappa_o_ext)?;
        positive("kappa_o_int", self.kappa_o_int)?;
        positive("omega_m", self.omega_m)?;
        positive("gamma_i_saturated", self.gamma_i_saturated)?;
        positive("g_em_per_volt", self.g_em_per_volt)?;
        positive("g_om", self.g_om)?;
        if !(self.eta_f > 0.0 && self.eta_f <= 1.0) {
            return Err(DeviceError::Param {
                name: "eta_f",
                value: self.eta_f,
                rule: "0 < eta_f ≤ 1",
            });
        }
        Ok(())
    }

    pub fn kappa_e(&self) -> f64 {
        self.kappa_e_ext + self.kappa_e_int
    }

    pub fn kappa_o(&self) -> f64 {
        self.kappa_o_ext + self.kappa_o_int
    }

    pub fn eta_e(&self) -> f64 {
        self.kappa_e_ext / self.kappa_e()
    }

    pub fn eta_o(&self) -> f64 {
        self.kappa_o_ext / self.kappa_o()
    }
}

/// How the optical pump strength is specified.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Pump {
    /// Intracavity photon number n_c.
    IntracavityPhotons(f64),
    /// Pump power at the optical waveguide, W.
    WaveguidePower(f64),
}

/// Continuous (D = 1) or pulsed operation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DutyCycle {
    pub d: f64,
    /// Pulse duration T_d, s.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pulse_duration_s: Option<f64>,
    /// Repetition rate R_p, Hz.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub repetition_rate_hz: Option<f64>,
}

impl DutyCycle {
    pub const CONTINUOUS: Self = Self {
        d: 1.0,
        pulse_duration_s: None,
        repetition_rate_hz: None,
    };

    /// D = T_d·R_p.
    pub fn pulsed(pulse_duration_s: f64, repetition_rate_hz: f64) -> Result<Self, DeviceError> {
        let dc = Self {
            d: pulse_duration_s * repetition_rate_hz,
            pulse_duration_s: Some(pulse_duration_s),
            repetition_rate_hz: Some(repetition_rate_hz),
        };
        dc.validate()?;
        Ok(dc)
    }

    pub fn validate(&self) -> Result<(), DeviceError> {
        if !(self.d > 0.0 && self.d <= 1.0) {
            return Err(DeviceError::Operating {
                name: "duty_cycle.d",
                value: self.d,
                rule: "0 < D ≤ 1",
            });
        }
        match (self.pulse_duration_s, self.repetition_rate_hz) {
            (None, None) => Ok(()),
            (Some(t), Some(r)) => {
                let product = t * r;
                if (self.d - product).abs() < 1e-12 * self.d {
                    Ok(())
                } else {
                    Err(DeviceError::DutyCycle { d: self.d, product })
                }
            }
            _ => Err(DeviceError::DutyCycleIncomplete),
        }
    }
}

/// One sample of a tabulated hot bath.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HotBathPoint {
    pub n_c: f64,
    pub gamma_p: f64,
    pub n_p: f64,
}

/// Laser-induced hot bath coupled to the mechanics, as a function of n_c.
///
/// No law is implied by the physics; every variant is phenomenological.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum HotBathModel {
    Constant {
        gamma_p: f64,
        n_p: f64,
    },
    /// Γ_p = Γ_p0·n_c^α, n_p = n_p0·n_c^β.
    PowerLaw {
        gamma_p0: f64,
        n_p0: f64,
        alpha: f64,
        beta: f64,
    },
    /// Linear interpolation on a strictly increasing n_c grid; no extrapolation.
    Table {
        points: Vec<HotBathPoint>,
    },
}

impl HotBathModel {
    pub const NONE: Self = Self::Constant {
        gamma_p: 0.0,
        n_p: 0.0,
    };

    /// (Γ_p in Hz, n_p) at intracavity photon number `n_c`.
    pub fn evaluate(&self, n_c: f64) -> Result<(f64, f64), DeviceError> {
        let (g, n) = match self {
            Self::Constant { gamma_p, n_p } => (*gamma_p, *n_p),
            Self::PowerLaw {
                gamma_p0,
                n_p0,
                alpha,
                beta,
            } => (gamma_p0 * n_c.powf(*alpha), n_p0 * n_c.powf(*beta)),
            Self::Table { points } => {
                if points.is_empty() {
                    return Err(DeviceError::HotBath("table has no points".into()));
                }
                if points.windows(2).any(|w| !(w[1].n_c > w[0].n_c)) {
                    return Err(DeviceError::HotBath(
                        "table n_c grid must be strictly increasing".into(),
                    ));
                }
                let (lo, hi) = (points[0].n_c, points[points.len() - 1].n_c);
                if !(n_c >= lo && n_c <= hi) {
                    return Err(DeviceError::HotBathRange {
                        n_c,
                        min: lo,
                        max: hi,
                    });
                }
                match points.windows(2).find(|w| n_c <= w[1].n_c) {
                    Some(w) => {
                        let t = (n_c - w[0].n_c) / (w[1].n_c - w[0].n_c);
                        (
                            w[0].gamma_p + t * (w[1].gamma_p - w[0].gamma_p),
                            w[0].n_p + t * (w[1].n_p - w[0].n_p),
                        )
                    }
                    None => (points[0].gamma_p, points[0].n_p),
                }
            }
        };
        if !(g.is_finite() && g >= 0.0 && n.is_finite() && n >= 0.0) {
            return Err(DeviceError::HotBath(format!(
                "evaluates to Γ_p = {g}, n_p = {n} at n_c = {n_c}"
            )));
        }
        Ok((g, n))
    }
}

/// The tunable knobs of one experiment. Frequencies in Hz.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatingPoint {
    pub v_dc: f64,
    pub pump: Pump,
    /// Δ_o = ω_o − ω_L; `None` means ω_m (red sideband).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optical_detuning: Option<f64>,
    /// Flux-tuned microwave frequency; `None` means the device's ω_e.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub microwave_freq_tuned: Option<f64>,
    pub n_f: f64,
    // TODO: optional user table n_c -> (n_e_int, κ_e,int) for pump-induced
    // microwave-resonator degradation; κ_e,int is currently fixed by the device.
    pub n_e_int: f64,
    pub hot_bath: HotBathModel,
    pub duty_cycle: DutyCycle,
}

impl OperatingPoint {
    /// Continuous operation at the given bias and intracavity photon number,
    /// red-sideband pumped, resonant microwave mode, cold baths.
    pub fn new(v_dc: f64, n_c: f64) -> Self {
        Self {
            v_dc,
            pump: Pump::IntracavityPhotons(n_c),
            optical_detuning: None,
            microwave_freq_tuned: None,
            n_f: 0.0,
            n_e_int: 0.0,
            hot_bath: HotBathModel::NONE,
            duty_cycle: DutyCycle::CONTINUOUS,
        }
    }

    pub fn validate(&self) -> Result<(), DeviceError> {
        non_negative("v_dc", self.v_dc)?;
        match self.pump {
            Pump::IntracavityPhotons(n) => non_negative("pump.intracavity_photons", n)?,
            Pump::WaveguidePower(p) => non_negative("pump.waveguide_power", p)?,
        }
        if let Some(d) = self.optical_detuning {
            non_negative("optical_detuning", d)?;
        }
        if let Some(w) = self.microwave_freq_tuned {
            non_negative("microwave_freq_tuned", w)?;
        }
        non_negative("n_f", self.n_f)?;
        non_negative("n_e_int", self.n_e_int)?;
        self.duty_cycle.validate()
    }

    pub fn detuning(&self, dev: &DeviceParams) -> f64 {
        self.optical_detuning.unwrap_or(dev.omega_m)
    }

    pub fn microwave_freq(&self, dev: &DeviceParams) -> f64 {
        self.microwave_freq_tuned.unwrap_or(dev.omega_e)
    }

    /// Resolved intracavity photon number.
    pub fn n_c(&self, dev: &DeviceParams) -> f64 {
        match self.pump {
            Pump::IntracavityPhotons(n) => n,
            Pump::WaveguidePower(p) => intracavity_photons(dev, p, self.detuning(dev)),
        }
    }
}

/// Rates derived from a device and operating point, Hz.
///
/// Γ_tot is not stored: [`DerivedRates::gamma_tot`] is Γ_i + Γ_em + Γ_om.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedRates {
    pub coupling_em: f64,
    pub coupling_om: f64,
    pub gamma_em: f64,
    pub gamma_om: f64,
    pub gamma_i: f64,
    pub eta_e: f64,
    pub eta_o: f64,
}

impl DerivedRates {
    pub fn gamma_tot(&self) -> f64 {
        self.gamma_i + self.gamma_em + self.gamma_om
    }

    /// Mechanical quality factor ω_m/Γ_i.
    pub fn q_m(&self, omega_m: f64) -> f64 {
        omega_m / self.gamma_i
    }
}

/// Bath occupancies and the rates that weight them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Baths {
    pub n_e_int: f64,
    pub n_f: f64,
    pub n_p: f64,
    pub gamma_f: f64,
    pub gamma_p: f64,
    pub kappa_e_ext: f64,
    pub kappa_e_int: f64,
}

impl Baths {
    pub fn kappa_e(&self) -> f64 {
        self.kappa_e_ext + self.kappa_e_int
    }
}

/// (G_em, G_om) in Hz.
pub fn coupling_rates(dev: &DeviceParams, op: &OperatingPoint) -> (f64, f64) {
    (dev.g_em_per_volt * op.v_dc, dev.g_om * op.n_c(dev).sqrt())
}

/// Resonator-mediated damping Γ = G²κ/(Δ² + (κ/2)²); 4G²/κ on resonance.
pub fn mediated_damping(coupling: f64, kappa: f64, detuning: f64) -> f64 {
    coupling * coupling * kappa / (detuning * detuning + 0.25 * kappa * kappa)
}

/// Driven-cavity steady state n_c = P·κ_ext/(ħω_L(Δ_L² + (κ/2)²)),
/// with ω_L = ω_o − Δ_L. `p_in` in W, `laser_detuning` in Hz.
pub fn intracavity_photons(dev: &DeviceParams, p_in: f64, laser_detuning: f64) -> f64 {
    let kappa_ext = to_angular(dev.kappa_o_ext);
    let kappa = to_angular(dev.kappa_o());
    let delta = to_angular(laser_detuning);
    let omega_l = to_angular(dev.omega_o - laser_detuning);
    p_in * kappa_ext / (HBAR * omega_l * (delta * delta + 0.25 * kappa * kappa))
}

/// Derived rates and bath data for an operating point, without building the network.
pub fn derive(
    dev: &DeviceParams,
    op: &OperatingPoint,
) -> Result<(DerivedRates, Baths), DeviceError> {
    dev.validate()?;
    op.validate()?;
    let n_c = op.n_c(dev);
    let (g_em, g_om) = coupling_rates(dev, op);
    let (gamma_p, n_p) = op.hot_bath.evaluate(n_c)?;
    let rates = DerivedRates {
        coupling_em: g_em,
        coupling_om: g_om,
        gamma_em: mediated_damping(g_em, dev.kappa_e(), op.microwave_freq(dev) - dev.omega_m),
        gamma_om: mediated_damping(g_om, dev.kappa_o(), op.detuning(dev) - dev.omega_m),
        gamma_i: dev.gamma_i_saturated + gamma_p,
        eta_e: dev.eta_e(),
        eta_o: dev.eta_o(),
    };
    let baths = Baths {
        n_e_int: op.n_e_int,
        n_f: op.n_f,
        n_p,
        gamma_f: dev.gamma_i_saturated,
        gamma_p,
        kappa_e_ext: dev.kappa_e_ext,
        kappa_e_int: dev.kappa_e_int,
    };
    Ok((rates, baths))
}

/// A compiled device network plus the scalars it was built from.
#[derive(Debug, Clone)]
pub struct Assembly {
    pub system: LinearSystem,
    pub rates: DerivedRates,
    pub baths: Baths,
    /// n_e_int, n_f, n_p keyed by bath label; all other baths are vacuum.
    pub occupancies: OccupancyMap,
    pub n_c: f64,
}

/// Builds the three-mode, six-bath network for `op`.
pub fn assemble(dev: &DeviceParams, op: &OperatingPoint) -> Result<Assembly, DeviceError> {
    let (rates, baths) = derive(dev, op)?;
    let modes = [
        ModeDecl::new(MODE_E, op.microwave_freq(dev)),
        ModeDecl::new(MODE_M, dev.omega_m),
        ModeDecl::new(MODE_O, op.detuning(dev)),
    ];
    let couplings = [
        CouplingDecl::new(MODE_E, MODE_M, rates.coupling_em),
        CouplingDecl::new(MODE_O, MODE_M, rates.coupling_om),
    ];
    let bath_decls = [
        BathDecl::port(BATH_E_EXT, MODE_E, dev.kappa_e_ext),
        BathDecl::internal(BATH_E_INT, MODE_E, dev.kappa_e_int, baths.n_e_int),
        BathDecl::port(BATH_O_EXT, MODE_O, dev.kappa_o_ext),
        BathDecl::internal(BATH_O_INT, MODE_O, dev.kappa_o_int, 0.0),
        BathDecl::internal(BATH_F, MODE_M, baths.gamma_f, baths.n_f),
        BathDecl::internal(BATH_P, MODE_M, baths.gamma_p, baths.n_p),
    ];
    let system = build_system(&modes, &couplings, &bath_decls)?;
    let occupancies = OccupancyMap::from([
        (BATH_E_INT.to_owned(), baths.n_e_int),
        (BATH_F.to_owned(), baths.n_f),
        (BATH_P.to_owned(), baths.n_p),
    ]);
    Ok(Assembly {
        system,
        rates,
        baths,
        occupancies,
        n_c: op.n_c(dev),
    })
}

/// |ξ_{o_ext ← e_ext}(ω_m)|² from the assembled network.
pub fn numeric_peak_efficiency(
    dev: &DeviceParams,
    op: &OperatingPoint,
) -> Result<f64, DeviceError> {
    let asm = assemble(dev, op)?;
    let xi = transfer_matrix(&asm.system, dev.omega_m)?;
    let row = asm.system.output_index(BATH_O_EXT)?;
    let col = asm.system.input_index(BATH_E_EXT)?;
    Ok(xi[(row, col)].norm_sqr())
}

/// Smallest intracavity photon number at which the network's peak
/// conversion efficiency reaches `target`, by bracketing then bisection.
///
/// The pump in `op` is replaced; all other knobs are kept.
pub fn pump_for_efficiency(
    dev: &DeviceParams,
    op: &OperatingPoint,
    target: f64,
) -> Result<f64, DeviceError> {
    let eta = |n_c: f64| {
        let mut trial = op.clone();
        trial.pump = Pump::IntracavityPhotons(n_c);
        numeric_peak_efficiency(dev, &trial)
    };
    let (mut lo, mut hi) = (0.0, 1e-6);
    let mut best: f64 = 0.0;
    loop {
        let e = eta(hi)?;
        best = best.max(e);
        if e >= target {
            break;
        }
        // Past the matched point the efficiency only falls.
        if e < best || hi > 1e12 {
            return Err(DeviceError::Unreachable { target, best });
        }
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if eta(mid)? >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
