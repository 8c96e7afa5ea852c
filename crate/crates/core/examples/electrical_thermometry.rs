//! Electrical-noise thermometry: the microwave bath occupancy from a
//! zero-bias resonator spectrum, the mechanical occupancy from the emission
//! line under bias, and the coupling per volt from fitted linewidths.

use transducer_sim::device::{DeviceParams, HotBathModel, OperatingPoint};
use transducer_sim::lab::{
    electrical_psd, extract_mechanical_occupancy, extract_microwave_occupancy, fit_coupling_slope,
    lorentzian_fit, ChainGains, Regime, SeededNoise, ThermometryContext,
};
use transducer_sim::metrics::{occupancies, OccupancyModel};
use transducer_sim::spectrum::linear_grid;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dev = DeviceParams::reference();
    let chain = ChainGains {
        gain_db: 56.59,
        n_amp: 12.0,
        f_if: 2e3,
        ..ChainGains::UNITY
    };
    let mut noise = SeededNoise::new(11);
    let mut op = OperatingPoint::new(40.0, 9.2);
    op.n_f = 0.3;
    op.n_e_int = 0.6;
    op.hot_bath = HotBathModel::Constant {
        gamma_p: 100.0,
        n_p: 30.0,
    };

    let mut off = op.clone();
    off.v_dc = 0.0;
    let ctx0 = ThermometryContext::new(&dev, &off)?;
    let kappa = dev.kappa_e();
    let band = linear_grid(dev.omega_e - 5.0 * kappa, dev.omega_e + 5.0 * kappa, 401);
    let resonator = electrical_psd(&ctx0, &chain, &band, Regime::Detuned)?;
    let mw = extract_microwave_occupancy(
        &noise.add_feature_noise(&resonator, 0.01),
        &chain,
        dev.kappa_e_ext,
        dev.kappa_e_int,
    )?;
    println!(
        "n_e,int = {:.4} (true {}), n_mw = {:.4}",
        mw.n_e_int, op.n_e_int, mw.n_mw
    );

    let ctx = ThermometryContext::new(&dev, &op)?;
    let tot = ctx.rates.gamma_tot();
    let line = linear_grid(dev.omega_m - 5.0 * tot, dev.omega_m + 5.0 * tot, 401);
    let emission = electrical_psd(&ctx, &chain, &line, Regime::OnResonance)?;
    let measured = noise.add_feature_noise(&emission, 0.01);
    let mech = extract_mechanical_occupancy(&measured, &chain, &ctx, mw.n_mw, Regime::OnResonance)?;
    let truth = occupancies(&ctx.rates, &ctx.baths, OccupancyModel::Full).n_m;
    println!(
        "n_m = {:.4} (closed form {truth:.4}), Gamma_tot fit {:.1} Hz vs {tot:.1} Hz",
        mech.n_m, mech.gamma_tot
    );

    // Laser off: the fitted linewidth is Γ_i,sat + Γ_em(V).
    let mut voltages = Vec::new();
    let mut gamma_em = Vec::new();
    for v in [10.0, 20.0, 30.0, 40.0, 50.0] {
        let mut dark = OperatingPoint::new(v, 0.0);
        dark.n_f = 0.3;
        let c = ThermometryContext::new(&dev, &dark)?;
        let w = c.rates.gamma_tot();
        let grid = linear_grid(dev.omega_m - 5.0 * w, dev.omega_m + 5.0 * w, 401);
        let psd = electrical_psd(&c, &chain, &grid, Regime::OnResonance)?;
        let fit = lorentzian_fit(&noise.add_feature_noise(&psd, 0.01))?;
        voltages.push(v);
        gamma_em.push(fit.fwhm - dev.gamma_i_saturated);
    }
    let g = fit_coupling_slope(&voltages, &gamma_em, kappa)?;
    println!(
        "g_em = {:.3} kHz/V (device {:.3})",
        g / 1e3,
        dev.g_em_per_volt / 1e3
    );
    Ok(())
}
