//! Electromechanical cooling of the mechanics under a constant laser-induced
//! hot bath: closed-form and exact occupancy versus bias voltage.

use transducer_sim::device::{assemble, DeviceParams, HotBathModel, OperatingPoint, MODE_M};
use transducer_sim::metrics::{occupancies, OccupancyModel};
use transducer_sim::network::mode_occupancy_numeric;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dev = DeviceParams::reference();
    println!(
        "{:>6} {:>10} {:>10} {:>10}",
        "V_DC", "n_m", "n_m exact", "n_mw"
    );
    let mut crossing = None;
    let mut prev: Option<(f64, f64)> = None;
    for k in 0..=10 {
        let v = 5.0 * k as f64;
        let mut op = OperatingPoint::new(v, 2.3);
        op.n_f = 0.3;
        op.n_e_int = 0.6;
        op.hot_bath = HotBathModel::Constant {
            gamma_p: 100.0,
            n_p: 30.0,
        };
        let asm = assemble(&dev, &op)?;
        let occ = occupancies(&asm.rates, &asm.baths, OccupancyModel::Full);
        let exact = mode_occupancy_numeric(&asm.system, &asm.occupancies, MODE_M)?.value;
        println!(
            "{v:>6.1} {:>10.4} {exact:>10.4} {:>10.4}",
            occ.n_m, occ.n_mw
        );
        if let Some((pv, pn)) = prev {
            if pn > 1.0 && occ.n_m <= 1.0 {
                crossing = Some(pv + (v - pv) * (pn - 1.0) / (pn - occ.n_m));
            }
        }
        prev = Some((v, occ.n_m));
    }
    match crossing {
        Some(v) => println!("n_m drops below one quantum near V_DC = {v:.1} V"),
        None => println!("n_m never crosses one quantum on this grid"),
    }
    Ok(())
}
