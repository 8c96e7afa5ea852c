//! Declares a small mode network from labels and rates, compiles it to a
//! state-space system and evaluates its scattering matrix.
//!
//! Two resonators at 5 GHz exchange excitations at 200 kHz; each has one
//! external port and one internal loss channel.

use transducer_sim::network::{
    build_system, check_passivity, mode_occupancy_numeric, transfer_matrix, BathDecl, CouplingDecl,
    ModeDecl,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f0 = 5.0e9;
    let modes = [ModeDecl::new("a", f0), ModeDecl::new("b", f0)];
    let couplings = [CouplingDecl::new("a", "b", 200e3)];
    let baths = [
        BathDecl::port("a_ext", "a", 800e3),
        BathDecl::internal("a_int", "a", 100e3, 0.5),
        BathDecl::port("b_ext", "b", 800e3),
        BathDecl::internal("b_int", "b", 100e3, 0.0),
    ];
    let sys = build_system(&modes, &couplings, &baths)?;

    println!("modes   {:?}", sys.mode_labels());
    println!("inputs  {:?}", sys.input_labels());
    println!("outputs {:?}", sys.output_labels());
    println!(
        "stable  {} (spectral abscissa {:.3e} rad/s)",
        sys.is_stable(),
        sys.spectral_abscissa()
    );
    for ev in sys.eigenvalues() {
        println!("  eigenvalue {:.6e} {:+.6e}i", ev.re, ev.im);
    }

    let xi = transfer_matrix(&sys, f0)?;
    let (row, col) = (sys.output_index("b_ext")?, sys.input_index("a_ext")?);
    println!(
        "|xi(b_ext <- a_ext)|^2 at resonance = {:.6}",
        xi[(row, col)].norm_sqr()
    );
    println!(
        "internal loss, max|S S^dag - I|    = {:.3e}",
        check_passivity(&sys, f0)?
    );

    let occ = sys.declared_occupancies().clone();
    let n_b = mode_occupancy_numeric(&sys, &occ, "b")?;
    println!(
        "<b^dag b> = {:.6} (quadrature error {:.1e})",
        n_b.value, n_b.error_estimate
    );
    Ok(())
}
