//! Seeded instance generators.
//!
//! All randomness flows through [`Sampler`], a ChaCha8 stream keyed by a
//! 64-bit seed and a stream id. Checks derive one stream per instance, so
//! results do not depend on scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matcore::{c64, CMatrix, HermitianMatrix, InvertibleMatrix, PosDefMatrix, Spectrum, UnitaryMatrix};

/// FNV-1a, used to turn check ids into stream keys.
pub fn stable_hash(text: &str) -> u64 {
    text.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

#[derive(Clone, Debug)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Independent stream `stream` under `seed`.
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng }
    }

    /// Stream for instance `index` of the check named `key`.
    pub fn for_instance(seed: u64, key: &str, index: u64) -> Self {
        Self::with_stream(seed ^ stable_hash(key), index)
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.random()
    }

    /// Complex Gaussian matrix with unit-variance real and imaginary parts.
    pub fn gaussian(&mut self, n: usize) -> CMatrix {
        CMatrix::from_fn(n, n, |_, _| c64(self.rng.sample(StandardNormal), self.rng.sample(StandardNormal)))
    }

    /// `scale · (G + G*)/(2√n)`: spectrum of order `scale`.
    pub fn hermitian(&mut self, n: usize, scale: f64) -> HermitianMatrix {
        let g = self.gaussian(n);
        HermitianMatrix::hermitian_part(&g).scale(scale / (n as f64).sqrt())
    }

    pub fn real_diagonal(&mut self, n: usize, scale: f64) -> HermitianMatrix {
        let values: Vec<f64> = (0..n).map(|_| scale * self.normal()).collect();
        HermitianMatrix::diagonal(&values)
    }

    /// `exp` of a scaled random Hermitian.
    pub fn posdef(&mut self, n: usize, scale: f64) -> PosDefMatrix {
        self.hermitian(n, scale).exp()
    }

    /// Haar-distributed unitary from the QR factorization of a Gaussian.
    pub fn unitary(&mut self, n: usize) -> UnitaryMatrix {
        let qr = self.gaussian(n).qr();
        let (mut q, r) = (qr.q(), qr.r());
        for j in 0..n {
            let d = r[(j, j)];
            let phase = if d.norm() > 0.0 { d / d.norm() } else { c64(1.0, 0.0) };
            q.column_mut(j).iter_mut().for_each(|z| *z *= phase);
        }
        UnitaryMatrix::trusted(q)
    }

    /// Random invertible `u · p` with `p` positive of log-spread `scale`.
    pub fn invertible(&mut self, n: usize, scale: f64) -> InvertibleMatrix {
        let p = self.posdef(n, scale);
        let u = self.unitary(n);
        InvertibleMatrix::new(u.matrix() * p.matrix()).expect("unitary times positive is invertible")
    }

    /// Positive matrix with random frame and condition number exactly `cond`,
    /// spectrum symmetric about 1 on a log scale.
    pub fn posdef_with_condition(&mut self, n: usize, cond: f64) -> PosDefMatrix {
        assert!(cond >= 1.0);
        let half = 0.5 * cond.ln();
        let mut values: Vec<f64> = if n == 1 {
            vec![1.0]
        } else {
            (0..n).map(|i| (-half + 2.0 * half * i as f64 / (n - 1) as f64).exp()).collect()
        };
        // interior eigenvalues random in the allowed band
        for v in values.iter_mut().skip(1).take(n.saturating_sub(2)) {
            *v = self.uniform(-half, half).exp();
        }
        let u = self.unitary(n);
        PosDefMatrix::from_spectrum(Spectrum::from_parts(values, u.into_matrix()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::unitarity_residual;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = Sampler::for_instance(7, "x", 3).gaussian(3);
        let b = Sampler::for_instance(7, "x", 3).gaussian(3);
        let c = Sampler::for_instance(7, "x", 4).gaussian(3);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn generated_unitaries_and_conditioning() {
        let mut s = Sampler::new(1);
        for n in [1, 2, 5, 9] {
            assert!(unitarity_residual(s.unitary(n).matrix()) < 1e-12);
            let p = s.posdef_with_condition(n, 16.0);
            if n > 1 {
                assert!((p.condition_number() - 16.0).abs() < 1e-8);
                assert!((p.lambda_max() * p.lambda_min() - 1.0).abs() < 1e-10);
            }
        }
    }
}
