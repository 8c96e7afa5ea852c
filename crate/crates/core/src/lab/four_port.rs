//! Four-port efficiency extraction with unknown chain losses and gains.

use serde::{Deserialize, Serialize};

use super::{ChainGains, LabError};
use crate::constants::to_hz;
use crate::device::{BATH_E_EXT, BATH_O_EXT};
use crate::network::{transfer_matrix, LinearSystem};

/// Off-resonance reflection sits this many linewidths from the port's resonator.
pub const REFLECTION_OFFSET_LINEWIDTHS: f64 = 10.0;

/// How the off-resonance reflectances are synthesized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReflectionModel {
    /// The device reflects unit power far from resonance: R = α·β.
    #[default]
    Ideal,
    /// R = α·|ξ_jj(ω_off)|²·β, carrying the residual resonator loss.
    FromNetwork,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourPortOptions {
    /// Transmission probe frequency, Hz.
    pub probe_hz: f64,
    pub reflection: ReflectionModel,
    pub microwave_port: String,
    pub optical_port: String,
}

impl FourPortOptions {
    pub fn at(probe_hz: f64) -> Self {
        Self {
            probe_hz,
            reflection: ReflectionModel::Ideal,
            microwave_port: BATH_E_EXT.to_owned(),
            optical_port: BATH_O_EXT.to_owned(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourPortResult {
    pub t_oe: f64,
    pub t_eo: f64,
    pub r_ee: f64,
    pub r_oo: f64,
    /// √(T_eo T_oe/(R_ee R_oo)).
    pub eta_ext_est: f64,
    /// α_e·β_o recovered as T_oe/η_ext_est.
    pub alpha_e_beta_o: f64,
    /// |ξ_oe(probe)|² from the network, for comparison.
    pub eta_ext_true: f64,
    pub reflection_freq_e_hz: f64,
    pub reflection_freq_o_hz: f64,
}

/// (frequency, linewidth) in Hz of the mode a port couples to.
fn port_resonator(sys: &LinearSystem, port: &str) -> Result<(f64, f64), LabError> {
    let col = sys.input_index(port)?;
    let n = sys.num_modes();
    let mode = (0..n)
        .find(|&j| sys.b()[(j, col)].norm() > 0.0)
        .ok_or_else(|| LabError::Degenerate(format!("port `{port}` has zero coupling rate")))?;
    let a = sys.a()[(mode, mode)];
    Ok((to_hz(-a.im), to_hz(-2.0 * a.re)))
}

/// Synthesizes the four chain-dressed observables and the gain-free
/// efficiency estimate.
pub fn four_port_run(
    sys: &LinearSystem,
    chain: &ChainGains,
    options: &FourPortOptions,
) -> Result<FourPortResult, LabError> {
    chain.validate()?;
    let (e, o) = (
        options.microwave_port.as_str(),
        options.optical_port.as_str(),
    );
    let (ie, io) = (sys.input_index(e)?, sys.input_index(o)?);
    let (oe, oo) = (sys.output_index(e)?, sys.output_index(o)?);

    let xi = transfer_matrix(sys, options.probe_hz)?;
    let s_oe = xi[(oo, ie)].norm_sqr();
    let s_eo = xi[(oe, io)].norm_sqr();

    let (fe, we) = port_resonator(sys, e)?;
    let (fo, wo) = port_resonator(sys, o)?;
    let off_e = fe + REFLECTION_OFFSET_LINEWIDTHS * we;
    let off_o = fo + REFLECTION_OFFSET_LINEWIDTHS * wo;
    let (s_ee, s_oo) = match options.reflection {
        ReflectionModel::Ideal => (1.0, 1.0),
        ReflectionModel::FromNetwork => {
            let re = transfer_matrix(sys, off_e)?[(oe, ie)].norm_sqr();
            let ro = transfer_matrix(sys, off_o)?[(oo, io)].norm_sqr();
            (re, ro)
        }
    };

    let t_oe = chain.alpha_e * s_oe * chain.beta_o;
    let t_eo = chain.alpha_o * s_eo * chain.beta_e;
    let r_ee = chain.alpha_e * s_ee * chain.beta_e;
    let r_oo = chain.alpha_o * s_oo * chain.beta_o;
    if r_ee <= 0.0 {
        return Err(LabError::ZeroDenominator("microwave reflectance"));
    }
    if r_oo <= 0.0 {
        return Err(LabError::ZeroDenominator("optical reflectance"));
    }
    let eta_ext_est = (t_eo / r_ee).sqrt() * (t_oe / r_oo).sqrt();
    let alpha_e_beta_o = if eta_ext_est > 0.0 {
        t_oe / eta_ext_est
    } else {
        f64::NAN
    };
    Ok(FourPortResult {
        t_oe,
        t_eo,
        r_ee,
        r_oo,
        eta_ext_est,
        alpha_e_beta_o,
        eta_ext_true: s_oe,
        reflection_freq_e_hz: off_e,
        reflection_freq_o_hz: off_o,
    })
}
