use rand::SeedableRng;

use crate::spectrum::{Spectrum, SpectrumKind};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Gaussian noise source whose stream is fixed by its seed.
#[derive(Debug, Clone)]
pub struct SeededNoise {
    seed: u64,
    rng: ChaCha8Rng,
}

impl SeededNoise {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// One N(0, σ²) draw.
    pub fn gaussian(&mut self, sigma: f64) -> f64 {
        let z: f64 = StandardNormal.sample(&mut self.rng);
        sigma * z
    }

    /// `x·(1 + ε)` with ε ~ N(0, rel²).
    pub fn relative(&mut self, x: f64, rel: f64) -> f64 {
        x * (1.0 + self.gaussian(rel))
    }

    /// Adds N(0, σ²) independently to every element.
    pub fn add_white(&mut self, values: &mut [f64], sigma: f64) {
        for v in values {
            *v += self.gaussian(sigma);
        }
    }

    /// Copy of a real spectrum with white noise of σ = `rel` × its
    /// peak-to-floor excursion (max − min) added to every sample; the copy
    /// is tagged as measured data.
    pub fn add_feature_noise(&mut self, spectrum: &Spectrum, rel: f64) -> Spectrum {
        let mut v = spectrum.real().expect("real spectrum").to_vec();
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        self.add_white(&mut v, rel * (hi - lo));
        Spectrum::new_real(spectrum.frequencies().to_vec(), v, SpectrumKind::Measured)
            .expect("grid unchanged")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let (mut a, mut b) = (SeededNoise::new(42), SeededNoise::new(42));
        for _ in 0..100 {
            assert_eq!(a.gaussian(1.0).to_bits(), b.gaussian(1.0).to_bits());
        }
        assert_eq!(a.seed(), 42);
    }

    #[test]
    fn unit_variance() {
        let mut n = SeededNoise::new(1);
        let xs: Vec<f64> = (0..20_000).map(|_| n.gaussian(2.0)).collect();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / xs.len() as f64;
        assert!(mean.abs() < 0.05 && (var - 4.0).abs() < 0.15);
    }
}
