//! Least-squares Lorentzian fitting.

use nalgebra::{Matrix4, Vector4};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spectrum::Spectrum;

const MAX_ITERATIONS: usize = 200;
const STEP_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("need at least 5 real samples, got {0}")]
    TooFewPoints(usize),
    #[error("complex spectrum cannot be fitted as a line shape")]
    ComplexData,
    #[error("line width is not resolvable on this grid: {0}")]
    Unresolvable(&'static str),
    #[error("Lorentzian fit did not converge in {iterations} iterations")]
    NonConvergent { iterations: usize },
    #[error("slope fit needs at least one nonzero abscissa")]
    EmptyRegression,
}

/// `offset + peak·(fwhm/2)²/((f − center)² + (fwhm/2)²)`.
///
/// `peak` is signed; a negative value is a dip.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LorentzianFit {
    pub center: f64,
    pub fwhm: f64,
    pub peak: f64,
    pub offset: f64,
    pub residual_rms: f64,
    pub iterations: usize,
}

impl LorentzianFit {
    pub fn evaluate(&self, f: f64) -> f64 {
        let h = 0.5 * self.fwhm;
        let d = f - self.center;
        self.offset + self.peak * h * h / (d * d + h * h)
    }

    /// Area under the line above the offset, ∫ peak·(fwhm/2)²/(…) df.
    pub fn area(&self) -> f64 {
        self.peak * std::f64::consts::FRAC_PI_2 * self.fwhm
    }

    /// Lorentzian numerator peak·(fwhm/2)².
    pub fn numerator(&self) -> f64 {
        self.peak * 0.25 * self.fwhm * self.fwhm
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Model and Jacobian in scaled coordinates: p = (center, half-width, peak, offset).
fn model(p: &Vector4<f64>, x: f64) -> (f64, Vector4<f64>) {
    let (c, h, a, o) = (p[0], p[1], p[2], p[3]);
    let d = x - c;
    let den = d * d + h * h;
    let shape = h * h / den;
    let v = o + a * shape;
    let d_c = a * 2.0 * d * h * h / (den * den);
    let d_h = a * 2.0 * h * d * d / (den * den);
    (v, Vector4::new(d_c, d_h, shape, 1.0))
}

fn cost(p: &Vector4<f64>, xs: &[f64], ys: &[f64]) -> f64 {
    xs.iter()
        .zip(ys)
        .map(|(&x, &y)| (model(p, x).0 - y).powi(2))
        .sum()
}

/// Fits a Lorentzian plus constant offset by damped Gauss–Newton.
///
/// The start point is fixed: offset is the median of the outer 20% of
/// samples, center the sample farthest from that offset (a peak or a dip),
/// and FWHM the frequency span of samples beyond half that excursion.
pub fn lorentzian_fit(spectrum: &Spectrum) -> Result<LorentzianFit, FitError> {
    let ys = spectrum.real().ok_or(FitError::ComplexData)?;
    let fs = spectrum.frequencies();
    let n = fs.len();
    if n < 5 {
        return Err(FitError::TooFewPoints(n));
    }

    let edge = (n / 10).max(1);
    let outer: Vec<f64> = ys[..edge].iter().chain(&ys[n - edge..]).copied().collect();
    let offset0 = median(outer);
    let (imax, excursion) = ys
        .iter()
        .enumerate()
        .map(|(i, &y)| (i, y - offset0))
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .expect("n ≥ 5");
    let y_scale = ys.iter().fold(0.0f64, |m, y| m.max(y.abs()));
    if !(excursion.abs() > 1e-12 * y_scale) {
        return Err(FitError::Unresolvable("no line above the background"));
    }
    let above: Vec<usize> = (0..n)
        .filter(|&i| (ys[i] - offset0) * excursion.signum() >= 0.5 * excursion.abs())
        .collect();
    if above.len() < 2 {
        return Err(FitError::Unresolvable(
            "fewer than two samples above half maximum",
        ));
    }
    let fwhm0 = fs[above[above.len() - 1]] - fs[above[0]];

    // Scaled abscissa keeps the normal equations well conditioned.
    let x_mid = 0.5 * (fs[0] + fs[n - 1]);
    let x_scale = 0.5 * (fs[n - 1] - fs[0]);
    let xs: Vec<f64> = fs.iter().map(|f| (f - x_mid) / x_scale).collect();
    let mut p = Vector4::new(xs[imax], 0.5 * fwhm0 / x_scale, excursion, offset0);
    let typical = Vector4::new(1.0, 1.0, y_scale, y_scale);

    let mut c = cost(&p, &xs, ys);
    let mut lambda = 1e-3;
    for iteration in 1..=MAX_ITERATIONS {
        let mut jtj = Matrix4::zeros();
        let mut jtr = Vector4::zeros();
        for (&x, &y) in xs.iter().zip(ys) {
            let (v, g) = model(&p, x);
            jtj += g * g.transpose();
            jtr += g * (v - y);
        }
        let mut accepted = None;
        for _ in 0..60 {
            let mut damped = jtj;
            for k in 0..4 {
                damped[(k, k)] += lambda * jtj[(k, k)].max(1e-300);
            }
            let Some(step) = damped.lu().solve(&(-jtr)) else {
                lambda *= 10.0;
                continue;
            };
            let trial = p + step;
            let tc = cost(&trial, &xs, ys);
            if tc <= c {
                accepted = Some((trial, tc, step));
                lambda = (lambda * 0.3).max(1e-12);
                break;
            }
            lambda *= 10.0;
        }
        let Some((trial, tc, step)) = accepted else {
            // No descent direction left: the current point is the minimum.
            return finish(p, c, n, iteration, x_mid, x_scale);
        };
        p = trial;
        c = tc;
        let rel = (0..4)
            .map(|k| step[k].abs() / p[k].abs().max(typical[k]))
            .fold(0.0, f64::max);
        if rel < STEP_TOLERANCE {
            return finish(p, c, n, iteration, x_mid, x_scale);
        }
    }
    Err(FitError::NonConvergent {
        iterations: MAX_ITERATIONS,
    })
}

fn finish(
    p: Vector4<f64>,
    cost: f64,
    n: usize,
    iterations: usize,
    x_mid: f64,
    x_scale: f64,
) -> Result<LorentzianFit, FitError> {
    let fwhm = 2.0 * p[1].abs() * x_scale;
    if !(fwhm > 0.0 && fwhm.is_finite()) {
        return Err(FitError::Unresolvable("fitted width collapsed"));
    }
    Ok(LorentzianFit {
        center: x_mid + p[0] * x_scale,
        fwhm,
        peak: p[2],
        offset: p[3],
        residual_rms: (cost / n as f64).sqrt(),
        iterations,
    })
}

/// Vacuum coupling per volt from fitted electromechanical damping rates.
///
/// Regresses √(Γ_em κ_e/4) = g_em·V through the origin; all rates in Hz.
pub fn fit_coupling_slope(
    voltages: &[f64],
    gamma_em: &[f64],
    kappa_e: f64,
) -> Result<f64, FitError> {
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (&v, &g) in voltages.iter().zip(gamma_em) {
        let y = (g.max(0.0) * kappa_e / 4.0).sqrt();
        sxy += v * y;
        sxx += v * v;
    }
    if sxx == 0.0 {
        return Err(FitError::EmptyRegression);
    }
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{linear_grid, SpectrumKind};

    fn sample(center: f64, fwhm: f64, peak: f64, offset: f64, grid: Vec<f64>) -> Spectrum {
        let truth = LorentzianFit {
            center,
            fwhm,
            peak,
            offset,
            residual_rms: 0.0,
            iterations: 0,
        };
        let ys = grid.iter().map(|&f| truth.evaluate(f)).collect();
        Spectrum::new_real(grid, ys, SpectrumKind::Measured).unwrap()
    }

    #[test]
    fn recovers_mechanical_line() {
        let (c, w) = (5.0745e9, 892.0);
        let s = sample(
            c + 37.0,
            w,
            3.2,
            0.7,
            linear_grid(c - 5.0 * w, c + 5.0 * w, 201),
        );
        let fit = lorentzian_fit(&s).unwrap();
        assert!((fit.fwhm - w).abs() < 1e-3 * w, "{fit:?}");
        assert!((fit.center - (c + 37.0)).abs() < 1e-3 * w);
        assert!((fit.peak - 3.2).abs() < 1e-9 && (fit.offset - 0.7).abs() < 1e-9);
        assert!(fit.residual_rms < 1e-9);
    }

    #[test]
    fn recovers_dip() {
        let s = sample(10.0, 2.0, -0.4, 1.0, linear_grid(0.0, 20.0, 101));
        let fit = lorentzian_fit(&s).unwrap();
        assert!((fit.peak + 0.4).abs() < 1e-9 && (fit.fwhm - 2.0).abs() < 1e-9);
    }

    #[test]
    fn flat_data_is_unresolvable() {
        let grid = linear_grid(0.0, 1.0, 50);
        let s = Spectrum::new_real(grid, vec![2.0; 50], SpectrumKind::Measured).unwrap();
        assert!(matches!(lorentzian_fit(&s), Err(FitError::Unresolvable(_))));
        let short =
            Spectrum::new_real(vec![0.0, 1.0], vec![0.0, 1.0], SpectrumKind::Measured).unwrap();
        assert!(matches!(
            lorentzian_fit(&short),
            Err(FitError::TooFewPoints(2))
        ));
    }

    #[test]
    fn line_narrower_than_grid_is_unresolvable() {
        let s = sample(5.0, 1e-4, 1.0, 0.0, linear_grid(0.0, 10.0, 11));
        assert!(matches!(lorentzian_fit(&s), Err(FitError::Unresolvable(_))));
    }

    #[test]
    fn slope_through_origin() {
        let kappa = 1.66e6;
        let v = [10.0, 20.0, 30.0, 40.0, 50.0];
        let g: Vec<f64> = v
            .iter()
            .map(|x: &f64| 4.0 * (3.81e3 * x).powi(2) / kappa)
            .collect();
        assert!((fit_coupling_slope(&v, &g, kappa).unwrap() - 3.81e3).abs() < 1e-9);
        assert!(fit_coupling_slope(&[0.0], &[1.0], kappa).is_err());
    }
}
