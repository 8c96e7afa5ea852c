//! End-to-end runs of the `transduce` binary on the shipped recipes.

use std::path::PathBuf;
use std::process::{Command, Output};

use transducer_sim::config::SweepConfig;
use transducer_sim::report::Table;
use transducer_sim::spectrum::Spectrum;
use transducer_sim::sweep::run_sweep;

fn recipe(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../recipes")
        .join(name)
}

fn transduce(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_transduce"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok_stdout(args: &[&str]) -> Vec<u8> {
    let out = transduce(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

fn error_class(out: &Output) -> String {
    let v: serde_json::Value = serde_json::from_slice(&out.stderr).expect("JSON error on stderr");
    v["error"]["class"].as_str().expect("class").to_owned()
}

#[test]
fn sweep_output_is_byte_identical_across_runs_and_worker_counts() {
    let path = recipe("noise_vs_photons_and_bias.toml");
    let p = path.to_str().unwrap();
    let serial = ok_stdout(&["sweep", "--config", p, "--workers", "1"]);
    let again = ok_stdout(&["sweep", "--config", p, "--workers", "1"]);
    let parallel = ok_stdout(&["sweep", "--config", p, "--workers", "4"]);
    assert_eq!(serial, again);
    assert_eq!(serial, parallel);

    let library = run_sweep(&SweepConfig::load(&path).unwrap(), 3)
        .unwrap()
        .to_csv_string();
    assert_eq!(String::from_utf8(serial).unwrap(), library);
}

#[test]
fn every_recipe_sweeps_cleanly() {
    for name in [
        "efficiency_spectrum.toml",
        "cooling_vs_bias.toml",
        "noise_vs_photons.toml",
        "noise_vs_photons_and_bias.toml",
        "efficiency_vs_photons_and_bias.toml",
        "lab_reference.toml",
    ] {
        let csv = ok_stdout(&["sweep", "--config", recipe(name).to_str().unwrap()]);
        let table = Table::read_csv(csv.as_slice()).unwrap();
        assert!(!table.rows().is_empty(), "{name}");
    }
}

#[test]
fn json_and_csv_carry_the_same_numbers() {
    let p = recipe("lab_reference.toml");
    let p = p.to_str().unwrap();
    let csv = Table::read_csv(ok_stdout(&["metrics", "--config", p]).as_slice()).unwrap();
    let json: serde_json::Value =
        serde_json::from_slice(&ok_stdout(&["metrics", "--config", p, "--format", "json"]))
            .unwrap();
    let cols = json["columns"].as_array().unwrap();
    assert_eq!(cols.len(), csv.columns().len());
    for (k, name) in cols.iter().enumerate() {
        let name = name.as_str().unwrap();
        let from_csv = csv.column(name).unwrap()[0];
        let from_json = json["rows"][0][k].as_f64();
        assert_eq!(from_csv, from_json, "{name}");
    }
}

#[test]
fn spectrum_subcommand_writes_a_readable_spectrum_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("flux.csv");
    let p = recipe("lab_reference.toml");
    ok_stdout(&[
        "spectrum",
        "--config",
        p.to_str().unwrap(),
        "--quantity",
        "flux",
        "--from",
        "o_ext",
        "--points",
        "51",
        "--out",
        out.to_str().unwrap(),
    ]);
    let s = Spectrum::read_csv(std::fs::File::open(&out).unwrap()).unwrap();
    assert_eq!(s.len(), 51);
    let ys = s.real().unwrap();
    assert!(ys.iter().all(|&y| y >= 0.0));
    assert!(ys[25] > ys[0], "flux peaks at the mechanical resonance");
}

#[test]
fn lab_subcommands_recover_their_inputs() {
    let p = recipe("lab_reference.toml");
    let p = p.to_str().unwrap();

    let fp = Table::read_csv(ok_stdout(&["fourport", "--config", p]).as_slice()).unwrap();
    let est = fp.column("eta_ext_est").unwrap()[0].unwrap();
    let truth = fp.column("eta_ext_true").unwrap()[0].unwrap();
    assert!((est / truth - 1.0).abs() < 1e-12);

    let th = Table::read_csv(
        ok_stdout(&[
            "thermometry",
            "--config",
            p,
            "--noise",
            "0.01",
            "--seed",
            "4",
        ])
        .as_slice(),
    )
    .unwrap();
    let get = |t: &Table, c: &str| t.column(c).unwrap()[0].unwrap();
    assert!((get(&th, "n_m_est") / get(&th, "n_m_true") - 1.0).abs() < 0.05);
    assert!((get(&th, "n_e_int_est") / get(&th, "n_e_int_true") - 1.0).abs() < 0.05);

    let gc = Table::read_csv(ok_stdout(&["gaincal", "--config", p]).as_slice()).unwrap();
    assert!((get(&gc, "G_A_dB") - 56.59).abs() < 0.01);
    assert!((get(&gc, "n_amp") - 12.0).abs() < 1e-6);

    let sb =
        Table::read_csv(ok_stdout(&["sideband", "--synthetic-n-m", "1.6"]).as_slice()).unwrap();
    assert!((get(&sb, "n_m") / 1.6 - 1.0).abs() < 0.02);
}

#[test]
fn gaincal_reads_a_user_data_file() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("sweep.csv");
    let (freq, f_if, gain, n_amp) = (5.0745e9_f64, 2e3, 40.0, 8.0);
    let mut text = String::from("temperature_K,power_W\n");
    for t in [0.05, 0.5, 1.0, 2.0, 3.0] {
        let n = transducer_sim::constants::bose_occupancy(freq, t);
        let p = f_if * transducer_sim::constants::photon_energy(freq) * 1e4 * (n + n_amp);
        text.push_str(&format!("{t},{p:e}\n"));
    }
    std::fs::write(&data, text).unwrap();
    let out = ok_stdout(&[
        "gaincal",
        "--data",
        data.to_str().unwrap(),
        "--freq",
        "5.0745e9",
        "--f-if",
        "2e3",
    ]);
    let t = Table::read_csv(out.as_slice()).unwrap();
    assert!((t.column("G_A_dB").unwrap()[0].unwrap() - gain).abs() < 1e-9);
    assert!((t.column("n_amp").unwrap()[0].unwrap() - n_amp).abs() < 1e-9);
}

#[test]
fn compare_flags_nothing_on_the_shipped_rows() {
    let p = recipe("comparison.toml");
    let t =
        Table::read_csv(ok_stdout(&["compare", "--rows", p.to_str().unwrap()]).as_slice()).unwrap();
    assert_eq!(t.rows().len(), 8);
    let text = String::from_utf8(ok_stdout(&[
        "compare",
        "--rows",
        p.to_str().unwrap(),
        "--text",
    ]))
    .unwrap();
    assert!(text.contains("+2.94%"));
}

#[test]
fn failures_report_class_and_exit_code() {
    let missing = transduce(&["metrics", "--config", "/nonexistent/recipe.toml"]);
    assert_eq!(missing.status.code(), Some(4));
    assert_eq!(error_class(&missing), "config");

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    let text = std::fs::read_to_string(recipe("lab_reference.toml"))
        .unwrap()
        .replace("kappa_e_int = 330e3", "kappa_e_int = -330e3");
    std::fs::write(&bad, text).unwrap();
    let out = transduce(&["metrics", "--config", bad.to_str().unwrap()]);
    assert!(matches!(out.status.code(), Some(4) | Some(5)));
    assert!(matches!(error_class(&out).as_str(), "config" | "device"));

    let no_chain = transduce(&[
        "fourport",
        "--config",
        recipe("cooling_vs_bias.toml").to_str().unwrap(),
    ]);
    assert_eq!(no_chain.status.code(), Some(4));

    let usage = transduce(&["sweep"]);
    assert_eq!(usage.status.code(), Some(2));

    let data = dir.path().join("two.csv");
    std::fs::write(&data, "temperature_K,power_W\n0.1,1e-15\n0.2,2e-15\n").unwrap();
    let degenerate = transduce(&[
        "gaincal",
        "--data",
        data.to_str().unwrap(),
        "--freq",
        "5e9",
        "--f-if",
        "1e3",
    ]);
    assert_eq!(degenerate.status.code(), Some(7));
    assert_eq!(error_class(&degenerate), "lab");
}
