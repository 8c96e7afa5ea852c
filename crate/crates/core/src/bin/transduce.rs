//! Command-line front end: spectra, single-point metrics, sweeps and the
//! virtual-lab procedures, all emitting CSV or JSON tables.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use transducer_sim::comparison::{
    comparison_report, format_report, load_rows, report_table, ComparisonError,
};
use transducer_sim::config::{ConfigError, SweepConfig};
use transducer_sim::device::{assemble, DeviceError, BATH_E_EXT, BATH_O_EXT};
use transducer_sim::lab::{
    electrical_psd, extract_mechanical_occupancy, extract_microwave_occupancy, four_port_run,
    gain_cal_temperature_sweep, sideband_asymmetry, synthetic_sideband_pair,
    synthetic_temperature_sweep, ChainGains, FourPortOptions, GainSweepPoint, LabError, Regime,
    SeededNoise, ThermometryContext,
};
use transducer_sim::metrics::MetricsError;
use transducer_sim::network::{
    output_flux_psd, output_symmetrized_psd, transfer_element, NetworkError,
};
use transducer_sim::report::{Cell, Table, TableError};
use transducer_sim::spectrum::{linear_grid, Spectrum, SpectrumError};
use transducer_sim::sweep::{columns, evaluate_point, run_sweep, PointError, SweepError};

#[derive(Parser)]
#[command(
    name = "transduce",
    version,
    about = "Electro-optomechanical transducer simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Common {
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Quantity {
    /// Complex scattering amplitude output ← input.
    Transfer,
    /// Normal-ordered output photon flux density.
    Flux,
    /// Symmetrized output noise density.
    Symmetrized,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegimeArg {
    Detuned,
    OnResonance,
}

impl From<RegimeArg> for Regime {
    fn from(r: RegimeArg) -> Self {
        match r {
            RegimeArg::Detuned => Regime::Detuned,
            RegimeArg::OnResonance => Regime::OnResonance,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Scattering elements or output noise densities over frequency.
    Spectrum {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value = "transfer")]
        quantity: Quantity,
        /// Input port for `transfer`.
        #[arg(long, default_value = BATH_E_EXT)]
        from: String,
        /// Output port.
        #[arg(long, default_value = BATH_O_EXT)]
        to: String,
        /// Grid start, Hz; default ω_m − 5Γ_tot.
        #[arg(long)]
        start: Option<f64>,
        /// Grid stop, Hz; default ω_m + 5Γ_tot.
        #[arg(long)]
        stop: Option<f64>,
        #[arg(long, default_value_t = 201)]
        points: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Every configured output at the base operating point.
    Metrics {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Cartesian-product sweep over the configured axes.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Four-port efficiency extraction through the configured chain.
    Fourport {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Synthetic electrical thermometry: generate, add noise, extract.
    Thermometry {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value = "on-resonance")]
        regime: RegimeArg,
        /// White noise σ relative to each spectrum's peak-to-floor excursion.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, default_value_t = 401)]
        points: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Amplifier gain and noise from a temperature sweep.
    Gaincal {
        /// CSV with columns temperature_K, power_W; synthesized from
        /// `--config` when omitted.
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long, required_unless_present = "data")]
        config: Option<PathBuf>,
        /// Measurement frequency, Hz; default the device's ω_e.
        #[arg(long)]
        freq: Option<f64>,
        /// Integration bandwidth, Hz; default the chain's f_IF.
        #[arg(long)]
        f_if: Option<f64>,
        /// Relative noise on synthesized powers.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Sideband-asymmetry thermometry.
    Sideband {
        /// Red-sideband spectrum CSV.
        #[arg(long, requires = "blue")]
        red: Option<PathBuf>,
        /// Blue-sideband spectrum CSV.
        #[arg(long, requires = "red")]
        blue: Option<PathBuf>,
        /// Synthesize a pair at this occupancy instead of reading files.
        #[arg(long, conflicts_with = "red")]
        synthetic_n_m: Option<f64>,
        /// White noise σ relative to the blue peak.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Recompute a throughput comparison table.
    Compare {
        /// TOML file with `[[rows]]`.
        #[arg(long)]
        rows: PathBuf,
        /// Print an aligned text table instead of CSV/JSON.
        #[arg(long)]
        text: bool,
        #[command(flatten)]
        common: Common,
    },
}

/// Error with a stable class name and exit code.
struct Failure {
    class: &'static str,
    code: u8,
    message: String,
}

impl Failure {
    fn new(class: &'static str, code: u8, message: impl ToString) -> Self {
        Self {
            class,
            code,
            message: message.to_string(),
        }
    }
}

macro_rules! failure_from {
    ($($ty:ty => $class:literal, $code:literal;)*) => {
        $(impl From<$ty> for Failure {
            fn from(e: $ty) -> Self {
                Self::new($class, $code, e)
            }
        })*
    };
}

failure_from! {
    io::Error => "io", 3;
    ConfigError => "config", 4;
    DeviceError => "device", 5;
    NetworkError => "numerical", 6;
    MetricsError => "numerical", 6;
    LabError => "lab", 7;
    SpectrumError => "data", 8;
    TableError => "data", 8;
    csv::Error => "data", 8;
    ComparisonError => "data", 8;
}

impl From<PointError> for Failure {
    fn from(e: PointError) -> Self {
        match e {
            PointError::Device(e) => e.into(),
            PointError::Metrics(e) => e.into(),
            PointError::Network(e) => e.into(),
            PointError::Lab(e) => e.into(),
        }
    }
}

impl From<SweepError> for Failure {
    fn from(e: SweepError) -> Self {
        match e {
            SweepError::Config(e) => e.into(),
            SweepError::Point { index, source } => {
                let mut f = Failure::from(source);
                f.message = format!("grid point {index}: {}", f.message);
                f
            }
            SweepError::Pool(m) => Failure::new("runtime", 9, m),
        }
    }
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(table: &Table, common: &Common) -> Result<(), Failure> {
    let mut w = sink(&common.out)?;
    match common.format {
        Format::Csv => table.write_csv(&mut w)?,
        Format::Json => {
            table.write_json(&mut w)?;
            writeln!(w)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn spectrum_table(s: &Spectrum) -> Result<Table, Failure> {
    let mut buf = Vec::new();
    s.write_csv(&mut buf)?;
    Ok(Table::read_csv(buf.as_slice())?)
}

fn key_value_table(pairs: Vec<(&str, Cell)>) -> Table {
    let (names, cells): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    let mut t = Table::new(names.into_iter().map(str::to_owned).collect());
    t.push_row(cells).expect("one cell per column");
    t
}

fn require_chain(cfg: &SweepConfig) -> Result<ChainGains, Failure> {
    cfg.chain
        .ok_or_else(|| Failure::new("config", 4, "this subcommand needs a [chain] section"))
}

fn read_gain_sweep(path: &Path) -> Result<Vec<GainSweepPoint>, Failure> {
    let table = Table::read_csv(File::open(path)?)?;
    let col = |name: &str| {
        table
            .column(name)
            .ok_or_else(|| Failure::new("data", 8, format!("missing column `{name}`")))?
            .into_iter()
            .map(|v| v.ok_or_else(|| Failure::new("data", 8, format!("non-numeric `{name}`"))))
            .collect::<Result<Vec<f64>, _>>()
    };
    let (t, p) = (col("temperature_K")?, col("power_W")?);
    Ok(t.into_iter()
        .zip(p)
        .map(|(temperature_k, power_w)| GainSweepPoint {
            temperature_k,
            power_w,
        })
        .collect())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Spectrum {
            config,
            quantity,
            from,
            to,
            start,
            stop,
            points,
            common,
        } => {
            let cfg = SweepConfig::load(&config)?;
            let asm = assemble(&cfg.device, &cfg.operating_point)?;
            let half = 5.0 * asm.rates.gamma_tot();
            let grid = linear_grid(
                start.unwrap_or(cfg.device.omega_m - half),
                stop.unwrap_or(cfg.device.omega_m + half),
                points,
            );
            let s = match quantity {
                Quantity::Transfer => transfer_element(&asm.system, &to, &from, &grid)?,
                Quantity::Flux => output_flux_psd(&asm.system, &asm.occupancies, &to, &grid)?,
                Quantity::Symmetrized => {
                    output_symmetrized_psd(&asm.system, &asm.occupancies, &to, &grid)?
                }
            };
            emit(&spectrum_table(&s)?, &common)
        }
        Command::Metrics { config, common } => {
            let cfg = SweepConfig::load(&config)?;
            cfg.device.validate()?;
            cfg.operating_point.validate()?;
            let mut t = Table::new(columns(&cfg));
            t.push_row(evaluate_point(&cfg, &[])?)?;
            emit(&t, &common)
        }
        Command::Sweep {
            config,
            workers,
            seed,
            common,
        } => {
            let mut cfg = SweepConfig::load(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            emit(&run_sweep(&cfg, workers)?, &common)
        }
        Command::Fourport { config, common } => {
            let cfg = SweepConfig::load(&config)?;
            let chain = require_chain(&cfg)?;
            let asm = assemble(&cfg.device, &cfg.operating_point)?;
            let r = four_port_run(&asm.system, &chain, &FourPortOptions::at(cfg.probe()))?;
            emit(
                &key_value_table(vec![
                    ("probe_Hz", cfg.probe().into()),
                    ("T_oe", r.t_oe.into()),
                    ("T_eo", r.t_eo.into()),
                    ("R_ee", r.r_ee.into()),
                    ("R_oo", r.r_oo.into()),
                    ("eta_ext_est", r.eta_ext_est.into()),
                    ("alpha_e_beta_o", r.alpha_e_beta_o.into()),
                    ("eta_ext_true", r.eta_ext_true.into()),
                ]),
                &common,
            )
        }
        Command::Thermometry {
            config,
            regime,
            noise,
            points,
            seed,
            common,
        } => {
            let cfg = SweepConfig::load(&config)?;
            let chain = require_chain(&cfg)?;
            let regime = Regime::from(regime);
            let mut rng = SeededNoise::new(seed.unwrap_or(cfg.seed));
            let mut noisy = |s: Spectrum| rng.add_feature_noise(&s, noise);

            let mut cold = cfg.operating_point.clone();
            cold.v_dc = 0.0;
            let cold_ctx = ThermometryContext::new(&cfg.device, &cold)?;
            let k = cold_ctx.baths.kappa_e();
            let wide = linear_grid(
                cold_ctx.omega_e - 5.0 * k,
                cold_ctx.omega_e + 5.0 * k,
                points,
            );
            let s0 = noisy(electrical_psd(&cold_ctx, &chain, &wide, Regime::Detuned)?);
            let mw = extract_microwave_occupancy(
                &s0,
                &chain,
                cold_ctx.baths.kappa_e_ext,
                cold_ctx.baths.kappa_e_int,
            )?;

            let ctx = ThermometryContext::new(&cfg.device, &cfg.operating_point)?;
            let tot = ctx.rates.gamma_tot();
            let narrow = linear_grid(ctx.omega_m - 10.0 * tot, ctx.omega_m + 10.0 * tot, points);
            let s1 = noisy(electrical_psd(&ctx, &chain, &narrow, regime)?);
            let mech = extract_mechanical_occupancy(&s1, &chain, &ctx, mw.n_mw, regime)?;
            let truth =
                transducer_sim::metrics::occupancies(&ctx.rates, &ctx.baths, Default::default());
            emit(
                &key_value_table(vec![
                    ("seed", (rng.seed() as f64).into()),
                    ("noise_rel", noise.into()),
                    ("n_e_int_true", ctx.baths.n_e_int.into()),
                    ("n_e_int_est", mw.n_e_int.into()),
                    ("n_mw_true", truth.n_mw.into()),
                    ("n_mw_est", mw.n_mw.into()),
                    ("n_m_true", truth.n_m.into()),
                    ("n_m_est", mech.n_m.into()),
                    ("heating_rate_est_Hz", mech.heating_rate.into()),
                    ("Gamma_tot_fit_Hz", mech.gamma_tot.into()),
                ]),
                &common,
            )
        }
        Command::Gaincal {
            data,
            config,
            freq,
            f_if,
            noise,
            seed,
            common,
        } => {
            let cfg = config.as_deref().map(SweepConfig::load).transpose()?;
            let freq = match (freq, &cfg) {
                (Some(f), _) => f,
                (None, Some(c)) => c.device.omega_e,
                (None, None) => {
                    return Err(Failure::new(
                        "usage",
                        2,
                        "--freq is required with --data alone",
                    ))
                }
            };
            let (points, f_if) = match data {
                Some(path) => {
                    let f_if = f_if
                        .or(cfg.as_ref().and_then(|c| c.chain).map(|c| c.f_if))
                        .ok_or_else(|| Failure::new("usage", 2, "--f-if is required"))?;
                    (read_gain_sweep(&path)?, f_if)
                }
                None => {
                    let mut chain = require_chain(cfg.as_ref().expect("clap requires config"))?;
                    if let Some(f) = f_if {
                        chain.f_if = f;
                    }
                    let temps = linear_grid(0.02, 1.0, 15);
                    let pts = synthetic_temperature_sweep(
                        &temps,
                        freq,
                        &chain,
                        noise,
                        &mut SeededNoise::new(seed),
                    );
                    (pts, chain.f_if)
                }
            };
            let cal = gain_cal_temperature_sweep(&points, freq, f_if)?;
            emit(
                &key_value_table(vec![
                    ("G_A_dB", cal.gain_db.into()),
                    ("n_amp", cal.n_amp.into()),
                    ("residual_rms_rel", cal.residual_rms_rel.into()),
                    ("points", (points.len() as f64).into()),
                ]),
                &common,
            )
        }
        Command::Sideband {
            red,
            blue,
            synthetic_n_m,
            noise,
            seed,
            common,
        } => {
            let (r, b) = match (red, blue, synthetic_n_m) {
                (Some(r), Some(b), None) => (
                    Spectrum::read_csv(File::open(r)?)?,
                    Spectrum::read_csv(File::open(b)?)?,
                ),
                (None, None, Some(n)) => {
                    let width = 1e3;
                    let grid = linear_grid(-10.0 * width, 10.0 * width, 2001);
                    let p = synthetic_sideband_pair(
                        n,
                        0.0,
                        width,
                        &grid,
                        1.0,
                        noise,
                        &mut SeededNoise::new(seed),
                    )?;
                    (p.red, p.blue)
                }
                _ => {
                    return Err(Failure::new(
                        "usage",
                        2,
                        "give --red and --blue, or --synthetic-n-m",
                    ))
                }
            };
            let n = sideband_asymmetry(&r, &b)?;
            emit(
                &key_value_table(vec![("n_m", n.into()), ("seed", (seed as f64).into())]),
                &common,
            )
        }
        Command::Compare { rows, text, common } => {
            let entries = comparison_report(&load_rows(&rows)?);
            if text {
                let mut w = sink(&common.out)?;
                w.write_all(format_report(&entries).as_bytes())?;
                w.flush()?;
                Ok(())
            } else {
                emit(&report_table(&entries), &common)
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!(
                "{}",
                json!({ "error": { "class": f.class, "message": f.message } })
            );
            ExitCode::from(f.code)
        }
    }
}
