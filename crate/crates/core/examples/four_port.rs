//! Four-port calibration: transmission and reflection through unknown lossy
//! input lines and amplifying output lines recover the bare efficiency.

use transducer_sim::device::{assemble, DeviceParams, OperatingPoint};
use transducer_sim::lab::{four_port_run, ChainGains, FourPortOptions, ReflectionModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dev = DeviceParams::reference();
    let asm = assemble(&dev, &OperatingPoint::new(40.0, 9.2))?;
    let chain = ChainGains {
        alpha_e: 0.1,
        alpha_o: 0.3,
        beta_e: 398107.0,
        beta_o: 2.0,
        ..ChainGains::UNITY
    };
    for reflection in [ReflectionModel::Ideal, ReflectionModel::FromNetwork] {
        let options = FourPortOptions {
            reflection,
            ..FourPortOptions::at(dev.omega_m)
        };
        let r = four_port_run(&asm.system, &chain, &options)?;
        println!("{reflection:?}");
        println!("  T_oe = {:.4e}  T_eo = {:.4e}", r.t_oe, r.t_eo);
        println!("  R_ee = {:.4e}  R_oo = {:.4e}", r.r_ee, r.r_oo);
        println!(
            "  eta_ext estimate {:.5}, network {:.5}, alpha_e*beta_o = {:.4}",
            r.eta_ext_est, r.eta_ext_true, r.alpha_e_beta_o
        );
    }
    Ok(())
}
