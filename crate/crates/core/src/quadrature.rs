//! Adaptive Gauss–Kronrod (7/15) quadrature, including a tangent-mapped
//! variant for integrands on the whole real line with Lorentzian tails.

use std::f64::consts::FRAC_PI_2;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for the odd Kronrod nodes (indices 1, 3, 5, 7).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct QuadSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadSettings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-300,
            max_intervals: 4000,
        }
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK[..7].iter().zip(&WGK[..7]).enumerate() {
        let dx = h * x;
        let pair = f(c - dx) + f(c + dx);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Integrates `f` over `[a, b]` split at `breaks`, refining the panel with the
/// largest error estimate until the global tolerance is met.
///
/// On failure the best estimate is returned in `Err`.
pub(crate) fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    settings: QuadSettings,
) -> Result<QuadResult, QuadResult> {
    let mut edges: Vec<f64> = Vec::with_capacity(breaks.len() + 2);
    edges.push(a);
    edges.extend(breaks.iter().copied().filter(|x| *x > a && *x < b));
    edges.push(b);
    edges.sort_by(f64::total_cmp);
    edges.dedup();

    // (a, b, value, error)
    let mut panels: Vec<(f64, f64, f64, f64)> = edges
        .windows(2)
        .map(|w| {
            let (v, e) = gk15(&f, w[0], w[1]);
            (w[0], w[1], v, e)
        })
        .collect();

    loop {
        let value: f64 = panels.iter().map(|p| p.2).sum();
        let error: f64 = panels.iter().map(|p| p.3).sum();
        let result = QuadResult {
            value,
            error_estimate: error,
            intervals: panels.len(),
        };
        if error <= settings.abs_tol.max(settings.rel_tol * value.abs()) {
            return Ok(result);
        }
        if panels.len() >= settings.max_intervals {
            return Err(result);
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .expect("at least one panel");
        let (pa, pb, _, _) = panels.swap_remove(worst);
        let mid = 0.5 * (pa + pb);
        if mid <= pa || mid >= pb {
            // Panel can no longer be bisected in floating point.
            return Err(result);
        }
        let (v1, e1) = gk15(&f, pa, mid);
        let (v2, e2) = gk15(&f, mid, pb);
        panels.push((pa, mid, v1, e1));
        panels.push((mid, pb, v2, e2));
    }
}

/// Integrates `f` over the whole real line via `x = center + scale·tan(θ)`.
///
/// `features` are abscissae (peaks, half-widths) that become panel breaks in
/// the mapped variable, so narrow structure far from `center` is not missed.
pub(crate) fn integrate_real_line<F: Fn(f64) -> f64>(
    f: F,
    center: f64,
    scale: f64,
    features: &[f64],
    settings: QuadSettings,
) -> Result<QuadResult, QuadResult> {
    assert!(scale > 0.0, "tangent map scale must be positive");
    let breaks: Vec<f64> = features
        .iter()
        .map(|x| ((x - center) / scale).atan())
        .collect();
    let mapped = |theta: f64| {
        let t = theta.tan();
        let sec2 = 1.0 + t * t;
        f(center + scale * t) * scale * sec2
    };
    integrate(mapped, -FRAC_PI_2, FRAC_PI_2, &breaks, settings)
}
