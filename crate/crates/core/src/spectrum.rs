//! Sampled frequency-domain data and its CSV form.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::report::format_float;

#[derive(Debug, Error)]
pub enum SpectrumError {
    #[error("frequency grid must be strictly increasing and finite (index {0})")]
    NotIncreasing(usize),
    #[error("{values} values for {freqs} frequencies")]
    LengthMismatch { freqs: usize, values: usize },
    #[error("negative flux density {value} at index {index}")]
    NegativeFlux { index: usize, value: f64 },
    #[error("unrecognised spectrum column layout: {0:?}")]
    UnknownLayout(Vec<String>),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("cannot parse `{text}` as a number")]
    Parse { text: String },
}

/// What a [`Spectrum`]'s samples represent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumKind {
    /// Complex scattering amplitude ξ_ij(ω), dimensionless.
    ScatteringAmplitude,
    /// Normal-ordered output photon flux density (photons/s/Hz).
    FluxPsd,
    /// Symmetrized noise density in quanta, S(ω)/ħω, possibly amplified.
    SymmetrizedPsd,
    /// Intracavity mode density in quanta per Hz; integrates to ⟨a†a⟩.
    ModeDensity,
    /// Lab data (noisy, background-subtracted); no sign constraint.
    Measured,
}

impl SpectrumKind {
    fn column(self) -> &'static str {
        match self {
            Self::ScatteringAmplitude => "scattering_amplitude",
            Self::FluxPsd => "flux_psd_photons_per_s_per_Hz",
            Self::SymmetrizedPsd => "symmetrized_psd_quanta",
            Self::ModeDensity => "mode_density_quanta_per_Hz",
            Self::Measured => "measured",
        }
    }

    fn from_column(name: &str) -> Option<Self> {
        [
            Self::FluxPsd,
            Self::SymmetrizedPsd,
            Self::ModeDensity,
            Self::Measured,
        ]
        .into_iter()
        .find(|k| k.column() == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpectrumValues {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

impl SpectrumValues {
    pub fn len(&self) -> usize {
        match self {
            Self::Real(v) => v.len(),
            Self::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Samples on a strictly increasing frequency grid (Hz).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    frequencies: Vec<f64>,
    values: SpectrumValues,
    kind: SpectrumKind,
}

impl Spectrum {
    pub fn new_real(
        frequencies: Vec<f64>,
        values: Vec<f64>,
        kind: SpectrumKind,
    ) -> Result<Self, SpectrumError> {
        check_grid(&frequencies, values.len())?;
        if kind == SpectrumKind::FluxPsd {
            if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| **v < 0.0) {
                return Err(SpectrumError::NegativeFlux { index, value });
            }
        }
        Ok(Self {
            frequencies,
            values: SpectrumValues::Real(values),
            kind,
        })
    }

    pub fn new_complex(
        frequencies: Vec<f64>,
        values: Vec<Complex64>,
    ) -> Result<Self, SpectrumError> {
        check_grid(&frequencies, values.len())?;
        Ok(Self {
            frequencies,
            values: SpectrumValues::Complex(values),
            kind: SpectrumKind::ScatteringAmplitude,
        })
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn values(&self) -> &SpectrumValues {
        &self.values
    }

    pub fn kind(&self) -> SpectrumKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }

    /// Real samples, or `None` for a complex amplitude spectrum.
    pub fn real(&self) -> Option<&[f64]> {
        match &self.values {
            SpectrumValues::Real(v) => Some(v),
            SpectrumValues::Complex(_) => None,
        }
    }

    /// |value|² per sample (identity-squared for real data).
    pub fn power(&self) -> Vec<f64> {
        match &self.values {
            SpectrumValues::Real(v) => v.iter().map(|x| x * x).collect(),
            SpectrumValues::Complex(v) => v.iter().map(|z| z.norm_sqr()).collect(),
        }
    }

    /// Returns a copy with every real sample scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let values = match &self.values {
            SpectrumValues::Real(v) => SpectrumValues::Real(v.iter().map(|x| x * factor).collect()),
            SpectrumValues::Complex(v) => {
                SpectrumValues::Complex(v.iter().map(|z| z * factor).collect())
            }
        };
        Self {
            frequencies: self.frequencies.clone(),
            values,
            kind: self.kind,
        }
    }

    /// Trapezoid integral of the real samples over frequency (Hz).
    pub fn trapezoid(&self) -> Option<f64> {
        let v = self.real()?;
        Some(
            self.frequencies
                .windows(2)
                .zip(v.windows(2))
                .map(|(f, y)| 0.5 * (f[1] - f[0]) * (y[0] + y[1]))
                .sum(),
        )
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), SpectrumError> {
        let mut w = csv::Writer::from_writer(writer);
        match &self.values {
            SpectrumValues::Real(v) => {
                w.write_record(["frequency_Hz", self.kind.column()])?;
                for (f, y) in self.frequencies.iter().zip(v) {
                    w.write_record([format_float(*f), format_float(*y)])?;
                }
            }
            SpectrumValues::Complex(v) => {
                w.write_record([
                    "frequency_Hz",
                    "scattering_amplitude_re",
                    "scattering_amplitude_im",
                ])?;
                for (f, z) in self.frequencies.iter().zip(v) {
                    w.write_record([format_float(*f), format_float(z.re), format_float(z.im)])?;
                }
            }
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self, SpectrumError> {
        let mut r = csv::Reader::from_reader(reader);
        let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| SpectrumError::Parse { text: s.to_owned() })
        };
        let mut freqs = Vec::new();
        match header.as_slice() {
            [f, re, im]
                if f == "frequency_Hz"
                    && re == "scattering_amplitude_re"
                    && im == "scattering_amplitude_im" =>
            {
                let mut vals = Vec::new();
                for rec in r.records() {
                    let rec = rec?;
                    freqs.push(parse(&rec[0])?);
                    vals.push(Complex64::new(parse(&rec[1])?, parse(&rec[2])?));
                }
                Self::new_complex(freqs, vals)
            }
            [f, col] if f == "frequency_Hz" => {
                let kind = SpectrumKind::from_column(col)
                    .ok_or_else(|| SpectrumError::UnknownLayout(header.clone()))?;
                let mut vals = Vec::new();
                for rec in r.records() {
                    let rec = rec?;
                    freqs.push(parse(&rec[0])?);
                    vals.push(parse(&rec[1])?);
                }
                Self::new_real(freqs, vals, kind)
            }
            _ => Err(SpectrumError::UnknownLayout(header)),
        }
    }
}

fn check_grid(freqs: &[f64], n_values: usize) -> Result<(), SpectrumError> {
    if freqs.len() != n_values {
        return Err(SpectrumError::LengthMismatch {
            freqs: freqs.len(),
            values: n_values,
        });
    }
    if let Some(i) = freqs.iter().position(|f| !f.is_finite()) {
        return Err(SpectrumError::NotIncreasing(i));
    }
    if let Some(i) = freqs.windows(2).position(|w| w[1] <= w[0]) {
        return Err(SpectrumError::NotIncreasing(i + 1));
    }
    Ok(())
}

/// `points` evenly spaced frequencies from `start` to `stop` inclusive.
pub fn linear_grid(start: f64, stop: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![start],
        n => {
            let step = (stop - start) / (n - 1) as f64;
            (0..n).map(|i| start + step * i as f64).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_unsorted_and_mismatched() {
        assert!(matches!(
            Spectrum::new_real(vec![1.0, 1.0], vec![0.0, 0.0], SpectrumKind::Measured),
            Err(SpectrumError::NotIncreasing(1))
        ));
        assert!(matches!(
            Spectrum::new_real(vec![1.0, 2.0], vec![0.0], SpectrumKind::Measured),
            Err(SpectrumError::LengthMismatch { .. })
        ));
        assert!(matches!(
            Spectrum::new_real(vec![1.0, 2.0], vec![0.0, -1e-3], SpectrumKind::FluxPsd),
            Err(SpectrumError::NegativeFlux { index: 1, .. })
        ));
    }

    #[test]
    fn trapezoid_of_line() {
        let s = Spectrum::new_real(
            linear_grid(0.0, 2.0, 21),
            linear_grid(0.0, 2.0, 21),
            SpectrumKind::Measured,
        )
        .unwrap();
        assert!((s.trapezoid().unwrap() - 2.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn csv_round_trip_is_exact(
            start in 1e3f64..1e10,
            vals in proptest::collection::vec(-1e6f64..1e6, 2..40),
            im in proptest::collection::vec(-1.0f64..1.0, 40),
        ) {
            let freqs: Vec<f64> = (0..vals.len()).map(|i| start + 0.37 * i as f64 + 1.0).collect();
            let real = Spectrum::new_real(freqs.clone(), vals.clone(), SpectrumKind::Measured).unwrap();
            let mut buf = Vec::new();
            real.write_csv(&mut buf).unwrap();
            prop_assert_eq!(Spectrum::read_csv(buf.as_slice()).unwrap(), real);

            let z: Vec<Complex64> = vals.iter().zip(&im).map(|(a, b)| Complex64::new(*a, *b)).collect();
            let cplx = Spectrum::new_complex(freqs, z).unwrap();
            let mut buf = Vec::new();
            cplx.write_csv(&mut buf).unwrap();
            prop_assert_eq!(Spectrum::read_csv(buf.as_slice()).unwrap(), cplx);
        }
    }
}
