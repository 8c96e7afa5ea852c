//! Sweep tables against the direct library calls they are built from.

use std::path::PathBuf;

use proptest::prelude::*;

use transducer_sim::config::{Axis, AxisPath, ConfigError, Output, SweepConfig};
use transducer_sim::device::{assemble, DeviceParams, OperatingPoint, Pump, MODE_M};
use transducer_sim::lab::lorentzian_fit;
use transducer_sim::metrics::evaluate;
use transducer_sim::network::mode_occupancy_numeric;
use transducer_sim::spectrum::{Spectrum, SpectrumKind};
use transducer_sim::sweep::{columns, run_sweep, SweepError};

const RECIPES: [&str; 6] = [
    "efficiency_spectrum.toml",
    "cooling_vs_bias.toml",
    "noise_vs_photons.toml",
    "noise_vs_photons_and_bias.toml",
    "efficiency_vs_photons_and_bias.toml",
    "lab_reference.toml",
];

fn recipe(name: &str) -> SweepConfig {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../recipes")
        .join(name);
    SweepConfig::load(&path).unwrap()
}

fn base() -> SweepConfig {
    SweepConfig {
        device: DeviceParams::reference(),
        operating_point: OperatingPoint::new(50.0, 232.0),
        chain: None,
        axes: vec![],
        outputs: vec![Output::Metrics],
        probe_hz: None,
        seed: 0,
    }
}

#[test]
fn recipes_round_trip_through_toml() {
    for name in RECIPES {
        let cfg = recipe(name);
        cfg.validate().unwrap();
        assert_eq!(
            SweepConfig::from_toml(&cfg.to_toml()).unwrap(),
            cfg,
            "{name}"
        );
    }
}

#[test]
fn metrics_columns_equal_direct_evaluation() {
    let cfg = recipe("noise_vs_photons_and_bias.toml");
    let table = run_sweep(&cfg, 2).unwrap();
    let col = |name: &str| table.column(name).unwrap();
    let (v, n_c, n_m, n_add) = (
        col("op.v_dc_V"),
        col("op.n_c"),
        col("metrics.n_m"),
        col("metrics.n_add"),
    );
    for i in 0..table.rows().len() {
        let mut op = cfg.operating_point.clone();
        op.v_dc = v[i].unwrap();
        op.pump = Pump::IntracavityPhotons(n_c[i].unwrap());
        let m = evaluate(&cfg.device, &op).unwrap();
        assert_eq!(n_m[i], Some(m.n_m));
        assert_eq!(n_add[i], m.n_add);
    }
}

#[test]
fn numeric_occupancy_column_equals_direct_quadrature() {
    let cfg = recipe("cooling_vs_bias.toml");
    let table = run_sweep(&cfg, 0).unwrap();
    let v = table.column("op.v_dc_V").unwrap();
    let numeric = table.column("network.n_m_numeric").unwrap();
    for (vi, ni) in v.iter().zip(&numeric) {
        let mut op = cfg.operating_point.clone();
        op.v_dc = vi.unwrap();
        let asm = assemble(&cfg.device, &op).unwrap();
        let direct = mode_occupancy_numeric(&asm.system, &asm.occupancies, MODE_M).unwrap();
        assert_eq!(*ni, Some(direct.value));
    }
}

#[test]
fn cooling_recipe_crosses_one_quantum_monotonically() {
    let table = run_sweep(&recipe("cooling_vs_bias.toml"), 0).unwrap();
    let n_m: Vec<f64> = table
        .column("metrics.n_m")
        .unwrap()
        .into_iter()
        .map(Option::unwrap)
        .collect();
    assert!(n_m[0] > 1.0 && *n_m.last().unwrap() < 1.0);
    assert!(n_m.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn frequency_axis_line_has_the_mechanical_linewidth() {
    let cfg = recipe("efficiency_spectrum.toml");
    let table = run_sweep(&cfg, 0).unwrap();
    let f: Vec<f64> = table
        .column("probe_Hz")
        .unwrap()
        .into_iter()
        .flatten()
        .collect();
    let gamma_tot = table.column("rates.Gamma_tot_Hz").unwrap()[0].unwrap();
    let eta: Vec<f64> = table
        .column("metrics.eta_ext_probe")
        .unwrap()
        .into_iter()
        .flatten()
        .collect();
    let fit = lorentzian_fit(&Spectrum::new_real(f, eta, SpectrumKind::Measured).unwrap()).unwrap();
    assert!(
        (fit.fwhm / gamma_tot - 1.0).abs() < 1e-6,
        "{} vs {gamma_tot}",
        fit.fwhm
    );
    assert!((fit.center - cfg.device.omega_m).abs() < 1e-6 * gamma_tot);
}

#[test]
fn rows_follow_row_major_axis_order() {
    let mut cfg = base();
    cfg.axes = vec![
        Axis::values(AxisPath::VDc, vec![10.0, 20.0]),
        Axis::values(AxisPath::NC, vec![1.0, 2.0, 3.0]),
    ];
    let table = run_sweep(&cfg, 0).unwrap();
    assert_eq!(table.columns(), columns(&cfg).as_slice());
    let v: Vec<f64> = table
        .column("op.v_dc_V")
        .unwrap()
        .into_iter()
        .flatten()
        .collect();
    let n: Vec<f64> = table
        .column("op.n_c")
        .unwrap()
        .into_iter()
        .flatten()
        .collect();
    assert_eq!(v, [10.0, 10.0, 10.0, 20.0, 20.0, 20.0]);
    assert_eq!(n, [1.0, 2.0, 3.0, 1.0, 2.0, 3.0]);
}

#[test]
fn undefined_referral_is_reported_not_dropped() {
    let mut cfg = base();
    cfg.axes = vec![Axis::values(AxisPath::VDc, vec![0.0, 10.0])];
    let table = run_sweep(&cfg, 0).unwrap();
    let n_add = table.column("metrics.n_add").unwrap();
    assert_eq!(n_add[0], None);
    assert!(n_add[1].is_some());
    assert!(table
        .to_csv_string()
        .lines()
        .nth(1)
        .unwrap()
        .contains("undefined"));
}

#[test]
fn bad_configs_fail_before_any_point_runs() {
    let mut cfg = base();
    assert!(matches!(
        run_sweep(&cfg, 0),
        Err(SweepError::Config(ConfigError::NoAxes))
    ));
    cfg.axes = vec![Axis::values(AxisPath::VDc, vec![1.0, 1.0])];
    assert!(matches!(run_sweep(&cfg, 0), Err(SweepError::Config(_))));
    cfg.axes = vec![Axis::values(AxisPath::VDc, vec![1.0])];
    cfg.outputs = vec![Output::FourPort];
    assert!(matches!(
        run_sweep(&cfg, 0),
        Err(SweepError::Config(ConfigError::Output { .. }))
    ));
    assert!(SweepConfig::from_toml("outputs = [\"metrics\"]\nbogus = 1").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn worker_count_never_changes_the_table(
        v in proptest::collection::vec(0.0f64..60.0, 1..6),
        workers in 1usize..6,
    ) {
        let mut v = v;
        v.sort_by(f64::total_cmp);
        v.dedup();
        let mut cfg = base();
        cfg.axes = vec![
            Axis::values(AxisPath::VDc, v),
            Axis::linear(AxisPath::NC, 1.0, 200.0, 3),
        ];
        cfg.outputs = vec![Output::Metrics, Output::EtaExtNumeric];
        let serial = run_sweep(&cfg, 1).unwrap().to_csv_string();
        prop_assert_eq!(serial, run_sweep(&cfg, workers).unwrap().to_csv_string());
    }

    #[test]
    fn generated_configs_round_trip(
        v_dc in 0.0f64..100.0,
        n_c in 0.0f64..1000.0,
        points in 2usize..50,
        seed in any::<u64>(),
    ) {
        let mut cfg = base();
        cfg.operating_point = OperatingPoint::new(v_dc, n_c);
        cfg.axes = vec![Axis::linear(AxisPath::Omega, 5.07e9, 5.08e9, points)];
        cfg.outputs = vec![Output::EtaExtProbe, Output::NOOutNumeric];
        cfg.seed = seed;
        prop_assert_eq!(SweepConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
    }
}
