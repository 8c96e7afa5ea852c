//! Run configuration files.
//!
//! One TOML document with `[device]`, `[operating_point]`, optional `[chain]`,
//! `[[axes]]` and top-level `outputs`, `seed`, `probe_hz`. Unknown keys are
//! rejected at every level.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::device::{DeviceError, DeviceParams, OperatingPoint};
use crate::lab::{ChainGains, LabError};
use crate::spectrum::linear_grid;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("parsing config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("axis `{path}`: {reason}")]
    Axis { path: String, reason: String },
    #[error("config has no axes")]
    NoAxes,
    #[error("output `{output}` needs {missing}")]
    Output {
        output: &'static str,
        missing: &'static str,
    },
    #[error(transparent)]
    Device(#[from] DeviceError),
    #[error(transparent)]
    Chain(#[from] LabError),
}

/// A swept knob. Each accepts the plain name and its symbolic spelling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisPath {
    /// DC bias, V.
    #[serde(alias = "V_DC")]
    VDc,
    /// Intracavity photon number; replaces the configured pump.
    NC,
    /// Optical detuning Δ_o, Hz.
    #[serde(alias = "Δ_o")]
    DeltaO,
    /// Tuned microwave resonance, Hz.
    #[serde(alias = "ω_e_tuned")]
    OmegaETuned,
    /// Probe frequency, Hz.
    #[serde(alias = "ω")]
    Omega,
}

impl AxisPath {
    /// Column name including the unit.
    pub fn column(self) -> &'static str {
        match self {
            Self::VDc => "op.v_dc_V",
            Self::NC => "op.n_c",
            Self::DeltaO => "op.delta_o_Hz",
            Self::OmegaETuned => "op.omega_e_tuned_Hz",
            Self::Omega => "probe_Hz",
        }
    }
}

/// One axis: either explicit `values` or `start`/`stop`/`points`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub path: AxisPath,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
}

impl Axis {
    pub fn values(path: AxisPath, values: Vec<f64>) -> Self {
        Self {
            path,
            values: Some(values),
            start: None,
            stop: None,
            points: None,
        }
    }

    pub fn linear(path: AxisPath, start: f64, stop: f64, points: usize) -> Self {
        Self {
            path,
            values: None,
            start: Some(start),
            stop: Some(stop),
            points: Some(points),
        }
    }

    /// The resolved, validated grid.
    pub fn grid(&self) -> Result<Vec<f64>, ConfigError> {
        let err = |reason: &str| ConfigError::Axis {
            path: self.path.column().to_owned(),
            reason: reason.to_owned(),
        };
        let grid = match (&self.values, self.start, self.stop, self.points) {
            (Some(v), None, None, None) => v.clone(),
            (None, Some(a), Some(b), Some(n)) => {
                if n == 0 {
                    return Err(err("points must be ≥ 1"));
                }
                if n == 1 && a != b {
                    return Err(err("a single point needs start = stop"));
                }
                linear_grid(a, b, n)
            }
            _ => {
                return Err(err(
                    "give either `values` or all of `start`, `stop`, `points`",
                ))
            }
        };
        if grid.is_empty() {
            return Err(err("grid is empty"));
        }
        if grid.iter().any(|x| !x.is_finite()) {
            return Err(err("grid values must be finite"));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(err("grid must be strictly increasing"));
        }
        Ok(grid)
    }
}

/// Per-row quantities a sweep can emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    /// Every closed-form scalar: η_ext, η_int, B, n_mw, n_m, n_add, throughput.
    Metrics,
    /// Closed-form η_ext at the probe frequency.
    EtaExtProbe,
    /// |ξ_oe|² at the probe frequency from the state-space network.
    EtaExtNumeric,
    /// Mechanical occupancy from integrating the network's mode spectrum.
    NMNumeric,
    /// Optical-port output flux density at the probe, quanta.
    NOOutNumeric,
    /// Four-port efficiency estimate at the probe through `[chain]`.
    FourPort,
}

impl Output {
    pub fn name(self) -> &'static str {
        match self {
            Self::Metrics => "metrics",
            Self::EtaExtProbe => "eta_ext_probe",
            Self::EtaExtNumeric => "eta_ext_numeric",
            Self::NMNumeric => "n_m_numeric",
            Self::NOOutNumeric => "n_o_out_numeric",
            Self::FourPort => "four_port",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub device: DeviceParams,
    pub operating_point: OperatingPoint,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<ChainGains>,
    #[serde(default)]
    pub axes: Vec<Axis>,
    pub outputs: Vec<Output>,
    /// Probe frequency when no `omega` axis is given; `None` means ω_m.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe_hz: Option<f64>,
    #[serde(default)]
    pub seed: u64,
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: Self = toml::from_str(text)?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config types serialize to TOML")
    }

    pub fn probe(&self) -> f64 {
        self.probe_hz.unwrap_or(self.device.omega_m)
    }

    /// Checks everything a sweep needs before any point is evaluated.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.device.validate()?;
        self.operating_point.validate()?;
        if let Some(chain) = &self.chain {
            chain.validate()?;
        }
        if self.axes.is_empty() {
            return Err(ConfigError::NoAxes);
        }
        for (i, axis) in self.axes.iter().enumerate() {
            axis.grid()?;
            if self.axes[..i].iter().any(|a| a.path == axis.path) {
                return Err(ConfigError::Axis {
                    path: axis.path.column().to_owned(),
                    reason: "declared twice".into(),
                });
            }
        }
        if self.outputs.contains(&Output::FourPort) && self.chain.is_none() {
            return Err(ConfigError::Output {
                output: Output::FourPort.name(),
                missing: "a [chain] section",
            });
        }
        Ok(())
    }
}
