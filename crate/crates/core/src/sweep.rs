//! Cartesian-product sweeps over operating-point knobs.

use rayon::prelude::*;
use thiserror::Error;

use crate::config::{AxisPath, ConfigError, Output, SweepConfig};
use crate::device::{
    assemble, derive, Assembly, DeviceError, OperatingPoint, Pump, BATH_E_EXT, BATH_O_EXT, MODE_M,
};
use crate::lab::{four_port_run, FourPortOptions, LabError};
use crate::metrics::{eta_ext_at, MetricsError, MetricsReport, RatesEcho};
use crate::network::{mode_occupancy_numeric, output_flux_psd, transfer_matrix, NetworkError};
use crate::report::{Cell, Table};

#[derive(Debug, Error)]
pub enum PointError {
    #[error(transparent)]
    Device(#[from] DeviceError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Lab(#[from] LabError),
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("grid point {index}: {source}")]
    Point { index: usize, source: PointError },
    #[error("worker pool: {0}")]
    Pool(String),
}

const INPUT_COLUMNS: [AxisPath; 5] = [
    AxisPath::VDc,
    AxisPath::NC,
    AxisPath::DeltaO,
    AxisPath::OmegaETuned,
    AxisPath::Omega,
];

const RATE_COLUMNS: [&str; 8] = [
    "rates.G_em_Hz",
    "rates.G_om_Hz",
    "rates.Gamma_em_Hz",
    "rates.Gamma_om_Hz",
    "rates.Gamma_i_Hz",
    "rates.Gamma_tot_Hz",
    "rates.eta_e",
    "rates.eta_o",
];

fn output_columns(output: Output) -> &'static [&'static str] {
    match output {
        Output::Metrics => &[
            "metrics.eta_ext",
            "metrics.eta_int",
            "metrics.B_Hz",
            "metrics.n_mw",
            "metrics.n_m",
            "metrics.n_add",
            "metrics.throughput_Hz",
        ],
        Output::EtaExtProbe => &["metrics.eta_ext_probe"],
        Output::EtaExtNumeric => &["network.eta_ext_numeric"],
        Output::NMNumeric => &["network.n_m_numeric", "network.n_m_numeric_error"],
        Output::NOOutNumeric => &["network.n_o_out_quanta"],
        Output::FourPort => &["lab.four_port.eta_ext_est", "lab.four_port.alpha_e_beta_o"],
    }
}

/// Column names of a sweep table: inputs, rates, then each requested output.
pub fn columns(cfg: &SweepConfig) -> Vec<String> {
    INPUT_COLUMNS
        .iter()
        .map(|p| p.column())
        .chain(RATE_COLUMNS)
        .chain(
            cfg.outputs
                .iter()
                .flat_map(|&o| output_columns(o).iter().copied()),
        )
        .map(str::to_owned)
        .collect()
}

/// Every grid coordinate in row-major order (last axis fastest).
pub fn grid_points(cfg: &SweepConfig) -> Result<Vec<Vec<f64>>, ConfigError> {
    let grids = cfg
        .axes
        .iter()
        .map(|a| a.grid())
        .collect::<Result<Vec<_>, _>>()?;
    let mut points = vec![Vec::new()];
    for grid in &grids {
        points = points
            .into_iter()
            .flat_map(|p| {
                grid.iter().map(move |&x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    Ok(points)
}

/// The operating point and probe frequency at one coordinate.
pub fn apply_axes(cfg: &SweepConfig, coords: &[f64]) -> (OperatingPoint, f64) {
    let mut op = cfg.operating_point.clone();
    let mut probe = cfg.probe();
    for (axis, &x) in cfg.axes.iter().zip(coords) {
        match axis.path {
            AxisPath::VDc => op.v_dc = x,
            AxisPath::NC => op.pump = Pump::IntracavityPhotons(x),
            AxisPath::DeltaO => op.optical_detuning = Some(x),
            AxisPath::OmegaETuned => op.microwave_freq_tuned = Some(x),
            AxisPath::Omega => probe = x,
        }
    }
    (op, probe)
}

/// One table row, computed by the same calls a user would make directly.
pub fn evaluate_point(cfg: &SweepConfig, coords: &[f64]) -> Result<Vec<Cell>, PointError> {
    let dev = &cfg.device;
    let (op, probe) = apply_axes(cfg, coords);
    let (rates, baths) = derive(dev, &op)?;
    let echo = RatesEcho::from(&rates);
    let mut row: Vec<Cell> = vec![
        op.v_dc.into(),
        op.n_c(dev).into(),
        op.detuning(dev).into(),
        op.microwave_freq(dev).into(),
        probe.into(),
        echo.coupling_em.into(),
        echo.coupling_om.into(),
        echo.gamma_em.into(),
        echo.gamma_om.into(),
        echo.gamma_i.into(),
        echo.gamma_tot.into(),
        echo.eta_e.into(),
        echo.eta_o.into(),
    ];
    let needs_network = cfg.outputs.iter().any(|o| {
        matches!(
            o,
            Output::EtaExtNumeric | Output::NMNumeric | Output::NOOutNumeric | Output::FourPort
        )
    });
    let asm: Option<Assembly> = if needs_network {
        Some(assemble(dev, &op)?)
    } else {
        None
    };
    for &output in &cfg.outputs {
        match output {
            Output::Metrics => {
                let m = MetricsReport::from_rates(&rates, &baths, op.duty_cycle.d)?;
                row.extend([
                    m.eta_ext.into(),
                    m.eta_int.into(),
                    m.bandwidth_hz.into(),
                    m.n_mw.into(),
                    m.n_m.into(),
                    m.n_add.into(),
                    m.throughput_hz.into(),
                ]);
            }
            Output::EtaExtProbe => row.push(eta_ext_at(&rates, probe, dev.omega_m).into()),
            Output::EtaExtNumeric => {
                let sys = &asm.as_ref().expect("assembled").system;
                let xi = transfer_matrix(sys, probe)?;
                let eta =
                    xi[(sys.output_index(BATH_O_EXT)?, sys.input_index(BATH_E_EXT)?)].norm_sqr();
                row.push(eta.into());
            }
            Output::NMNumeric => {
                let asm = asm.as_ref().expect("assembled");
                let est = mode_occupancy_numeric(&asm.system, &asm.occupancies, MODE_M)?;
                row.extend([est.value.into(), est.error_estimate.into()]);
            }
            Output::NOOutNumeric => {
                let asm = asm.as_ref().expect("assembled");
                let s = output_flux_psd(&asm.system, &asm.occupancies, BATH_O_EXT, &[probe])?;
                row.push(s.real().expect("flux densities are real")[0].into());
            }
            Output::FourPort => {
                let asm = asm.as_ref().expect("assembled");
                let chain = cfg.chain.as_ref().expect("validated");
                let r = four_port_run(&asm.system, chain, &FourPortOptions::at(probe))?;
                row.extend([r.eta_ext_est.into(), r.alpha_e_beta_o.into()]);
            }
        }
    }
    Ok(row)
}

/// Evaluates every grid point; `workers = 0` uses the global pool size.
///
/// Rows are in grid order whatever the worker count.
pub fn run_sweep(cfg: &SweepConfig, workers: usize) -> Result<Table, SweepError> {
    cfg.validate()?;
    let points = grid_points(cfg)?;
    let eval = || {
        points
            .par_iter()
            .enumerate()
            .map(|(index, p)| {
                evaluate_point(cfg, p).map_err(|source| SweepError::Point { index, source })
            })
            .collect::<Result<Vec<_>, _>>()
    };
    let rows = if workers == 0 {
        eval()?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| SweepError::Pool(e.to_string()))?
            .install(eval)?
    };
    let mut table = Table::new(columns(cfg));
    for row in rows {
        table.push_row(row).expect("row width matches columns");
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Axis;
    use crate::device::DeviceParams;

    fn config(axes: Vec<Axis>, outputs: Vec<Output>) -> SweepConfig {
        SweepConfig {
            device: DeviceParams::reference(),
            operating_point: OperatingPoint::new(50.0, 232.0),
            chain: None,
            axes,
            outputs,
            probe_hz: None,
            seed: 0,
        }
    }

    #[test]
    fn row_major_order() {
        let cfg = config(
            vec![
                Axis::values(AxisPath::VDc, vec![1.0, 2.0]),
                Axis::values(AxisPath::NC, vec![10.0, 20.0, 30.0]),
            ],
            vec![Output::Metrics],
        );
        let pts = grid_points(&cfg).unwrap();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[1], vec![1.0, 20.0]);
        assert_eq!(pts[3], vec![2.0, 10.0]);
        let t = run_sweep(&cfg, 2).unwrap();
        assert_eq!(t.column("op.n_c").unwrap()[4], Some(20.0));
        assert_eq!(t.columns().len(), 5 + 8 + 7);
    }

    #[test]
    fn zero_bias_leaves_noise_referral_undefined() {
        let cfg = config(
            vec![Axis::values(AxisPath::VDc, vec![0.0])],
            vec![Output::Metrics],
        );
        let t = run_sweep(&cfg, 1).unwrap();
        assert_eq!(t.column("metrics.n_add").unwrap(), vec![None]);
        assert!(t.to_csv_string().contains("undefined"));
    }
}
