//! Linear input–output networks of bosonic modes.
//!
//! A network is a set of modes, beam-splitter couplings between them, and
//! white thermal baths attached to individual modes. [`build_system`] compiles
//! it into the state-space form
//!
//! ```text
//! da/dt = A a + B a_in,     a_out = C a + D a_in
//! ```
//!
//! in the doubled basis `[a_1..a_M, a_1†..a_M†]`, and the remaining functions
//! evaluate the transfer matrix `ξ(ω) = C(−iωI − A)⁻¹B + D`, output noise
//! densities and steady-state mode occupancies from it.
//!
//! Frequencies and rates cross this module's boundary in Hz. Internally the
//! matrices hold angular rates.

use std::collections::{BTreeMap, HashSet};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::constants::{to_angular, to_hz};
use crate::quadrature::{integrate_real_line, QuadSettings};
use crate::spectrum::{Spectrum, SpectrumError, SpectrumKind};

/// Bath label → thermal occupancy (photons). Missing labels mean vacuum.
pub type OccupancyMap = BTreeMap<String, f64>;

#[derive(Debug, Error)]
pub enum NetworkError {
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("{decl} references unknown mode `{mode}`")]
    UnknownMode { decl: String, mode: String },
    #[error("{decl}: rate {rate} Hz must be finite and non-negative")]
    InvalidRate { decl: String, rate: f64 },
    #[error("mode `{label}`: frequency {freq} Hz must be finite and non-negative")]
    InvalidFrequency { label: String, freq: f64 },
    #[error("bath `{label}`: occupancy {value} must be finite and non-negative")]
    InvalidOccupancy { label: String, value: f64 },
    #[error("coupling couples mode `{0}` to itself")]
    SelfCoupling(String),
    #[error("unknown port `{0}`")]
    UnknownPort(String),
    #[error("unknown mode `{0}`")]
    UnknownModeLabel(String),
    #[error("unknown bath `{0}`")]
    UnknownBath(String),
    #[error("(-iωI - A) is singular at {freq_hz} Hz: unstable or degenerate system")]
    Singular { freq_hz: f64 },
    #[error("system is unstable: max Re(eig A) = {abscissa} rad/s")]
    Unstable { abscissa: f64 },
    #[error(
        "occupancy integral did not converge: estimate {value}, error estimate {error_estimate}"
    )]
    NonConvergent { value: f64, error_estimate: f64 },
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
}

/// A bosonic mode. `frequency` is the rotating-frame frequency in Hz.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeDecl {
    pub label: String,
    pub frequency: f64,
}

impl ModeDecl {
    pub fn new(label: impl Into<String>, frequency: f64) -> Self {
        Self {
            label: label.into(),
            frequency,
        }
    }

    /// Optical mode in the frame of a pump laser: stores Δ = ω_cavity − ω_laser.
    pub fn in_laser_frame(label: impl Into<String>, cavity_hz: f64, laser_hz: f64) -> Self {
        Self::new(label, cavity_hz - laser_hz)
    }
}

/// A white thermal bath damping `attached_mode` at `rate` (Hz).
///
/// Baths with `is_port` appear as rows of C and D, i.e. as observable outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct BathDecl {
    pub label: String,
    pub attached_mode: String,
    pub rate: f64,
    pub occupancy: f64,
    pub is_port: bool,
}

impl BathDecl {
    pub fn port(label: impl Into<String>, mode: impl Into<String>, rate: f64) -> Self {
        Self {
            label: label.into(),
            attached_mode: mode.into(),
            rate,
            occupancy: 0.0,
            is_port: true,
        }
    }

    pub fn internal(
        label: impl Into<String>,
        mode: impl Into<String>,
        rate: f64,
        occupancy: f64,
    ) -> Self {
        Self {
            label: label.into(),
            attached_mode: mode.into(),
            rate,
            occupancy,
            is_port: false,
        }
    }
}

/// Beam-splitter coupling `G (a† b + a b†)` with `rate = G` in Hz.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingDecl {
    pub mode_a: String,
    pub mode_b: String,
    pub rate: f64,
}

impl CouplingDecl {
    pub fn new(a: impl Into<String>, b: impl Into<String>, rate: f64) -> Self {
        Self {
            mode_a: a.into(),
            mode_b: b.into(),
            rate,
        }
    }
}

/// Compiled state-space model; immutable once built.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    a: DMatrix<Complex64>,
    b: DMatrix<Complex64>,
    c: DMatrix<Complex64>,
    d: DMatrix<Complex64>,
    mode_labels: Vec<String>,
    input_labels: Vec<String>,
    output_labels: Vec<String>,
    declared_occupancies: OccupancyMap,
}

fn check_unique<'a>(labels: impl Iterator<Item = &'a str>) -> Result<(), NetworkError> {
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l) {
            return Err(NetworkError::DuplicateLabel(l.to_owned()));
        }
    }
    Ok(())
}

fn check_rate(decl: impl FnOnce() -> String, rate: f64) -> Result<(), NetworkError> {
    if rate.is_finite() && rate >= 0.0 {
        Ok(())
    } else {
        Err(NetworkError::InvalidRate { decl: decl(), rate })
    }
}

/// Compiles modes, couplings and baths into the doubled-basis state space.
///
/// Matrix rows and columns follow the declaration order: modes as declared,
/// inputs as the baths are declared, outputs as the port baths are declared.
pub fn build_system(
    modes: &[ModeDecl],
    couplings: &[CouplingDecl],
    baths: &[BathDecl],
) -> Result<LinearSystem, NetworkError> {
    check_unique(
        modes
            .iter()
            .map(|m| m.label.as_str())
            .chain(baths.iter().map(|b| b.label.as_str())),
    )?;
    for m in modes {
        if !(m.frequency.is_finite() && m.frequency >= 0.0) {
            return Err(NetworkError::InvalidFrequency {
                label: m.label.clone(),
                freq: m.frequency,
            });
        }
    }
    let index_of = |decl: &dyn Fn() -> String, label: &str| {
        modes
            .iter()
            .position(|m| m.label == label)
            .ok_or_else(|| NetworkError::UnknownMode {
                decl: decl(),
                mode: label.to_owned(),
            })
    };

    let m = modes.len();
    let p_in = baths.len();
    let ports: Vec<usize> = (0..p_in).filter(|&k| baths[k].is_port).collect();
    let p_out = ports.len();
    let zero = Complex64::new(0.0, 0.0);
    let i = Complex64::i();

    let mut a = DMatrix::from_element(2 * m, 2 * m, zero);
    let mut b = DMatrix::from_element(2 * m, 2 * p_in, zero);
    let mut c = DMatrix::from_element(2 * p_out, 2 * m, zero);
    let mut d = DMatrix::from_element(2 * p_out, 2 * p_in, zero);

    let mut damping = vec![0.0; m];
    let mut bath_mode = Vec::with_capacity(p_in);
    for (k, bath) in baths.iter().enumerate() {
        let name = || format!("bath `{}`", bath.label);
        check_rate(name, bath.rate)?;
        if !(bath.occupancy.is_finite() && bath.occupancy >= 0.0) {
            return Err(NetworkError::InvalidOccupancy {
                label: bath.label.clone(),
                value: bath.occupancy,
            });
        }
        let j = index_of(&name, &bath.attached_mode)?;
        let rate = to_angular(bath.rate);
        damping[j] += rate;
        let amp = Complex64::new(rate.sqrt(), 0.0);
        b[(j, k)] = amp;
        b[(m + j, p_in + k)] = amp;
        bath_mode.push((j, amp));
    }

    for (j, mode) in modes.iter().enumerate() {
        let diag = -(i * to_angular(mode.frequency) + damping[j] / 2.0);
        a[(j, j)] = diag;
        a[(m + j, m + j)] = diag.conj();
    }

    for cpl in couplings {
        let name = || format!("coupling `{}`-`{}`", cpl.mode_a, cpl.mode_b);
        if !cpl.rate.is_finite() {
            return Err(NetworkError::InvalidRate {
                decl: name(),
                rate: cpl.rate,
            });
        }
        let ja = index_of(&name, &cpl.mode_a)?;
        let jb = index_of(&name, &cpl.mode_b)?;
        if ja == jb {
            return Err(NetworkError::SelfCoupling(cpl.mode_a.clone()));
        }
        let g = -i * to_angular(cpl.rate);
        for (r, s) in [(ja, jb), (jb, ja)] {
            a[(r, s)] += g;
            a[(m + r, m + s)] += g.conj();
        }
    }

    for (row, &k) in ports.iter().enumerate() {
        let (j, amp) = bath_mode[k];
        c[(row, j)] = amp;
        c[(p_out + row, m + j)] = amp;
        d[(row, k)] = Complex64::new(-1.0, 0.0);
        d[(p_out + row, p_in + k)] = Complex64::new(-1.0, 0.0);
    }

    Ok(LinearSystem {
        a,
        b,
        c,
        d,
        mode_labels: modes.iter().map(|m| m.label.clone()).collect(),
        input_labels: baths.iter().map(|b| b.label.clone()).collect(),
        output_labels: ports.iter().map(|&k| baths[k].label.clone()).collect(),
        declared_occupancies: baths
            .iter()
            .map(|b| (b.label.clone(), b.occupancy))
            .collect(),
    })
}

impl LinearSystem {
    /// Drift matrix, angular units.
    pub fn a(&self) -> &DMatrix<Complex64> {
        &self.a
    }

    pub fn b(&self) -> &DMatrix<Complex64> {
        &self.b
    }

    pub fn c(&self) -> &DMatrix<Complex64> {
        &self.c
    }

    pub fn d(&self) -> &DMatrix<Complex64> {
        &self.d
    }

    pub fn mode_labels(&self) -> &[String] {
        &self.mode_labels
    }

    /// Bath labels in input-column order (annihilation half).
    pub fn input_labels(&self) -> &[String] {
        &self.input_labels
    }

    /// Port labels in output-row order (annihilation half).
    pub fn output_labels(&self) -> &[String] {
        &self.output_labels
    }

    /// Occupancies given on the bath declarations.
    pub fn declared_occupancies(&self) -> &OccupancyMap {
        &self.declared_occupancies
    }

    pub fn num_modes(&self) -> usize {
        self.mode_labels.len()
    }

    pub fn mode_index(&self, label: &str) -> Result<usize, NetworkError> {
        self.mode_labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| NetworkError::UnknownModeLabel(label.to_owned()))
    }

    pub fn input_index(&self, label: &str) -> Result<usize, NetworkError> {
        self.input_labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| NetworkError::UnknownBath(label.to_owned()))
    }

    pub fn output_index(&self, label: &str) -> Result<usize, NetworkError> {
        self.output_labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| NetworkError::UnknownPort(label.to_owned()))
    }

    /// Eigenvalues of A (angular units).
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        self.a
            .clone()
            .eigenvalues()
            .map(|v| v.iter().copied().collect())
            .unwrap_or_default()
    }

    /// Largest real part over the spectrum of A, rad/s.
    pub fn spectral_abscissa(&self) -> f64 {
        self.eigenvalues()
            .iter()
            .map(|z| z.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_stable(&self) -> bool {
        self.spectral_abscissa() < 0.0
    }

    pub fn ensure_stable(&self) -> Result<(), NetworkError> {
        let abscissa = self.spectral_abscissa();
        if abscissa < 0.0 {
            Ok(())
        } else {
            Err(NetworkError::Unstable { abscissa })
        }
    }

    /// Internal response `(−iωI − A)⁻¹B` at angular frequency `w`.
    fn mode_response(&self, w: f64, freq_hz: f64) -> Result<DMatrix<Complex64>, NetworkError> {
        let n = self.a.nrows();
        let mut lhs = -&self.a;
        for j in 0..n {
            lhs[(j, j)] -= Complex64::new(0.0, w);
        }
        lhs.lu()
            .solve(&self.b)
            .ok_or(NetworkError::Singular { freq_hz })
    }
}

/// Transfer matrix ξ(ω) at ordinary frequency `freq_hz`, shape 2P_out × 2P_in.
///
/// Uses an LU solve per frequency; A is never inverted.
pub fn transfer_matrix(
    sys: &LinearSystem,
    freq_hz: f64,
) -> Result<DMatrix<Complex64>, NetworkError> {
    let x = sys.mode_response(to_angular(freq_hz), freq_hz)?;
    Ok(&sys.c * x + &sys.d)
}

/// One transfer element `output ← input` evaluated over a grid.
pub fn transfer_element(
    sys: &LinearSystem,
    output: &str,
    input: &str,
    grid: &[f64],
) -> Result<Spectrum, NetworkError> {
    let row = sys.output_index(output)?;
    let col = sys.input_index(input)?;
    let values = grid
        .par_iter()
        .map(|&f| transfer_matrix(sys, f).map(|xi| xi[(row, col)]))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Spectrum::new_complex(grid.to_vec(), values)?)
}

/// Occupancy vector in input-column order; unknown labels are rejected.
fn occupancy_vector(sys: &LinearSystem, occ: &OccupancyMap) -> Result<Vec<f64>, NetworkError> {
    let mut v = vec![0.0; sys.input_labels.len()];
    for (label, &n) in occ {
        if !(n.is_finite() && n >= 0.0) {
            return Err(NetworkError::InvalidOccupancy {
                label: label.clone(),
                value: n,
            });
        }
        v[sys.input_index(label)?] = n;
    }
    Ok(v)
}

/// Σ_k |row_k|² (n_k + shift) over both halves of the doubled input basis.
///
/// For a doubled row `r`, the annihilation columns carry `n + shift` and the
/// creation columns `n + 1 − shift`; `shift = 0` gives ⟨x†x⟩, `shift = 1`
/// gives ⟨x x†⟩ and `shift = 1/2` the symmetrized value.
fn weighted_power(row: impl Iterator<Item = Complex64>, occ: &[f64], shift: f64) -> f64 {
    let p = occ.len();
    row.enumerate()
        .map(|(k, z)| {
            let n = if k < p {
                occ[k] + shift
            } else {
                occ[k - p] + 1.0 - shift
            };
            z.norm_sqr() * n
        })
        .sum()
}

fn port_density(
    sys: &LinearSystem,
    occ: &OccupancyMap,
    port: &str,
    grid: &[f64],
    shift: f64,
) -> Result<Vec<f64>, NetworkError> {
    let row = sys.output_index(port)?;
    let n = occupancy_vector(sys, occ)?;
    grid.par_iter()
        .map(|&f| {
            let xi = transfer_matrix(sys, f)?;
            Ok(weighted_power(xi.row(row).iter().copied(), &n, shift))
        })
        .collect()
}

/// Normal-ordered photon flux density ⟨a_out† a_out⟩(ω) at `port`.
pub fn output_flux_psd(
    sys: &LinearSystem,
    occ: &OccupancyMap,
    port: &str,
    grid: &[f64],
) -> Result<Spectrum, NetworkError> {
    let values = port_density(sys, occ, port, grid, 0.0)?
        .into_iter()
        .map(|v| v.max(0.0))
        .collect();
    Ok(Spectrum::new_real(
        grid.to_vec(),
        values,
        SpectrumKind::FluxPsd,
    )?)
}

/// Symmetrized output noise density S(ω)/ħω in quanta (vacuum gives 1/2).
pub fn output_symmetrized_psd(
    sys: &LinearSystem,
    occ: &OccupancyMap,
    port: &str,
    grid: &[f64],
) -> Result<Spectrum, NetworkError> {
    let values = port_density(sys, occ, port, grid, 0.5)?;
    Ok(Spectrum::new_real(
        grid.to_vec(),
        values,
        SpectrumKind::SymmetrizedPsd,
    )?)
}

/// Operator ordering for intracavity spectra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ordering {
    /// ⟨a† a⟩: anti-Stokes (red-sideband) weight, integrates to n.
    Normal,
    /// ⟨a a†⟩: Stokes (blue-sideband) weight, integrates to n + 1.
    AntiNormal,
}

impl Ordering {
    fn shift(self) -> f64 {
        match self {
            Self::Normal => 0.0,
            Self::AntiNormal => 1.0,
        }
    }
}

/// Density of mode `j` at angular frequency `w`, per unit ordinary frequency.
fn mode_density_at(
    sys: &LinearSystem,
    j: usize,
    occ: &[f64],
    w: f64,
    shift: f64,
) -> Result<f64, NetworkError> {
    let x = sys.mode_response(w, to_hz(w))?;
    Ok(weighted_power(x.row(j).iter().copied(), occ, shift))
}

/// Intracavity spectral density of `mode`, in quanta per Hz.
///
/// `∫ S(f) df` over the real line equals ⟨a†a⟩ (Normal) or ⟨a a†⟩ (AntiNormal).
pub fn mode_psd(
    sys: &LinearSystem,
    occ: &OccupancyMap,
    mode: &str,
    grid: &[f64],
    ordering: Ordering,
) -> Result<Spectrum, NetworkError> {
    let j = sys.mode_index(mode)?;
    let n = occupancy_vector(sys, occ)?;
    let values = grid
        .par_iter()
        .map(|&f| mode_density_at(sys, j, &n, to_angular(f), ordering.shift()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Spectrum::new_real(
        grid.to_vec(),
        values,
        SpectrumKind::ModeDensity,
    )?)
}

/// Result of the occupancy quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OccupancyEstimate {
    pub value: f64,
    pub error_estimate: f64,
}

/// Steady-state ⟨a†a⟩ of `mode` by integrating its spectral density over
/// the whole frequency axis.
///
/// The axis is tangent-mapped around the mode frequency and split at every
/// normal-mode frequency and half-width of A, then integrated with adaptive
/// Gauss–Kronrod to a relative tolerance of 1e-10.
pub fn mode_occupancy_numeric(
    sys: &LinearSystem,
    occ: &OccupancyMap,
    mode: &str,
) -> Result<OccupancyEstimate, NetworkError> {
    sys.ensure_stable()?;
    let j = sys.mode_index(mode)?;
    let n = occupancy_vector(sys, occ)?;

    let center = -sys.a[(j, j)].im;
    let eig = sys.eigenvalues();
    let scale = eig
        .iter()
        .map(|z| -z.re)
        .fold(f64::INFINITY, f64::min)
        .max(f64::MIN_POSITIVE);
    let features: Vec<f64> = eig
        .iter()
        .flat_map(|z| {
            let (w, hw) = (-z.im, -z.re);
            [w - hw, w, w + hw]
        })
        .collect();

    // The integrand cannot fail for a stable system; a failed solve is
    // surfaced through this cell instead of panicking inside the quadrature.
    let failure = std::cell::Cell::new(None);
    let integrand = |w: f64| match mode_density_at(sys, j, &n, w, 0.0) {
        Ok(v) => v,
        Err(_) => {
            failure.set(Some(w));
            0.0
        }
    };
    let result = integrate_real_line(integrand, center, scale, &features, QuadSettings::default());
    if let Some(w) = failure.get() {
        return Err(NetworkError::Singular { freq_hz: to_hz(w) });
    }
    // ∫ dω/2π |M(ω)|² n = ⟨a†a⟩
    let norm = std::f64::consts::TAU;
    match result {
        Ok(r) => Ok(OccupancyEstimate {
            value: r.value / norm,
            error_estimate: r.error_estimate / norm,
        }),
        Err(r) => Err(NetworkError::NonConvergent {
            value: r.value / norm,
            error_estimate: r.error_estimate / norm,
        }),
    }
}

/// ‖S S† − I‖_max for the port-to-port annihilation block S of ξ(ω).
///
/// Zero (to rounding) for a lossless beam-splitter network in which every
/// bath is a port; with non-port baths the diagonal deficit is the fraction
/// of each port's output drawn from the internal baths.
pub fn check_passivity(sys: &LinearSystem, freq_hz: f64) -> Result<f64, NetworkError> {
    let xi = transfer_matrix(sys, freq_hz)?;
    let p_out = sys.output_labels.len();
    let port_cols: Vec<usize> = sys
        .output_labels
        .iter()
        .map(|l| sys.input_index(l))
        .collect::<Result<_, _>>()?;
    let s = DMatrix::from_fn(p_out, p_out, |r, c| xi[(r, port_cols[c])]);
    let prod = &s * s.adjoint();
    let mut dev: f64 = 0.0;
    for r in 0..p_out {
        for c in 0..p_out {
            let target = if r == c { 1.0 } else { 0.0 };
            dev = dev.max((prod[(r, c)] - Complex64::new(target, 0.0)).norm());
        }
    }
    Ok(dev)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(kappa: f64, freq: f64, port: bool) -> LinearSystem {
        let bath = if port {
            BathDecl::port("x", "a", kappa)
        } else {
            BathDecl::internal("x", "a", kappa, 0.0)
        };
        build_system(&[ModeDecl::new("a", freq)], &[], &[bath]).unwrap()
    }

    #[test]
    fn single_mode_matrices() {
        let (k, w) = (2.0e3, 1.0e6);
        let sys = single(k, w, true);
        let (kw, ww) = (to_angular(k), to_angular(w));
        assert_eq!(sys.a()[(0, 0)], Complex64::new(-kw / 2.0, -ww));
        assert_eq!(sys.a()[(1, 1)], Complex64::new(-kw / 2.0, ww));
        assert_eq!(sys.a()[(0, 1)], Complex64::new(0.0, 0.0));
        assert_eq!(sys.b()[(0, 0)].re, kw.sqrt());
        assert_eq!(sys.d()[(0, 0)].re, -1.0);
    }

    #[test]
    fn lossless_cavity_reflects_fully_with_phase_flip() {
        let sys = single(3.0e3, 2.0e6, true);
        let xi = transfer_matrix(&sys, 2.0e6).unwrap();
        // On resonance: κ/(κ/2) − 1 = +1.
        assert!((xi[(0, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        for f in [1.99e6, 2.0e6, 2.003e6] {
            assert!(check_passivity(&sys, f).unwrap() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_declarations() {
        let m = [ModeDecl::new("a", 1.0)];
        assert!(matches!(
            build_system(&m, &[], &[BathDecl::port("a", "a", 1.0)]),
            Err(NetworkError::DuplicateLabel(_))
        ));
        assert!(matches!(
            build_system(&m, &[], &[BathDecl::port("x", "b", 1.0)]),
            Err(NetworkError::UnknownMode { .. })
        ));
        let err = build_system(&m, &[], &[BathDecl::port("x", "a", -1.0)]).unwrap_err();
        assert!(err.to_string().contains("bath `x`"), "{err}");
        assert!(matches!(
            build_system(&m, &[CouplingDecl::new("a", "a", 1.0)], &[]),
            Err(NetworkError::SelfCoupling(_))
        ));
        assert!(matches!(
            build_system(&[ModeDecl::new("a", -1.0)], &[], &[]),
            Err(NetworkError::InvalidFrequency { .. })
        ));
    }

    #[test]
    fn undamped_mode_is_unstable_and_singular_on_resonance() {
        let bath = BathDecl::internal("x", "a", 0.0, 0.0);
        let sys = build_system(&[ModeDecl::new("a", 1e3)], &[], &[bath]).unwrap();
        assert!(!sys.is_stable());
        assert!(matches!(
            mode_occupancy_numeric(&sys, &OccupancyMap::new(), "a"),
            Err(NetworkError::Unstable { .. })
        ));
        assert!(matches!(
            transfer_matrix(&sys, 1e3),
            Err(NetworkError::Singular { .. })
        ));
    }

    #[test]
    fn single_bath_occupancy() {
        let sys = single(1e3, 5e6, false);
        let occ = OccupancyMap::from([("x".to_owned(), 2.0)]);
        let n = mode_occupancy_numeric(&sys, &occ, "a").unwrap();
        assert!((n.value - 2.0).abs() < 1e-8, "{n:?}");
        let zero = mode_occupancy_numeric(&sys, &OccupancyMap::new(), "a").unwrap();
        assert_eq!(zero.value, 0.0);
    }

    #[test]
    fn unknown_labels_are_rejected() {
        let sys = single(1e3, 5e6, true);
        let grid = [5e6];
        assert!(matches!(
            output_flux_psd(&sys, &OccupancyMap::new(), "nope", &grid),
            Err(NetworkError::UnknownPort(_))
        ));
        let occ = OccupancyMap::from([("nope".to_owned(), 1.0)]);
        assert!(matches!(
            output_flux_psd(&sys, &occ, "x", &grid),
            Err(NetworkError::UnknownBath(_))
        ));
    }
}
