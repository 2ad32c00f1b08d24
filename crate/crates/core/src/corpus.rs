//! Seeded families of test polynomials: random-phase ensembles with a few
//! amplitude laws, the classical positive and oscillatory kernels, and a
//! nonincreasing-amplitude family with seeded phases.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::poly::{TrigPolynomial, TrigTerm};

/// Amplitude profile for the random-phase family.
#[derive(Debug, Clone, PartialEq)]
pub enum AmplitudeLaw {
    /// `d_k = 1`.
    Constant,
    /// `d_k = k^(-a)`.
    PowerLaw(f64),
    /// Explicit amplitudes for `k = 1, 2, ...`; shorter lists truncate the
    /// polynomial, longer lists are cut at the requested degree.
    Custom(Vec<f64>),
}

impl AmplitudeLaw {
    fn amplitude(&self, k: u32) -> Option<f64> {
        match self {
            AmplitudeLaw::Constant => Some(1.0),
            AmplitudeLaw::PowerLaw(a) => Some((k as f64).powf(-a)),
            AmplitudeLaw::Custom(list) => list.get(k as usize - 1).copied(),
        }
    }
}

/// The generator families.
#[derive(Debug, Clone, PartialEq)]
pub enum CorpusKind {
    /// Independent uniform phases with the given amplitude law.
    RandomPhase(AmplitudeLaw),
    /// The positive kernel `1 + sum 2 (1 - k/(n+1)) cos kx`, peaking at
    /// `x = 0` with value `n + 1`.
    Fejer,
    /// The oscillatory kernel `1 + sum 2 cos kx` (value `2n + 1` at 0,
    /// norm far above its coefficients' scale).
    DirichletLike,
    /// Nonincreasing amplitudes `1 / (sqrt(k) ln(k + 2))` with seeded
    /// phases, mimicking the shape of classical divergence examples.
    SalemStyle,
}

/// A fully reproducible description of one test polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusSpec {
    pub kind: CorpusKind,
    pub degree: u32,
    pub seed: u64,
}

/// Builds the polynomial a spec describes. Deterministic given the spec.
pub fn generate(spec: &CorpusSpec) -> Result<TrigPolynomial> {
    let n = spec.degree;
    if n == 0 {
        return Err(Error::DegreeTooSmall { min: 1, got: 0 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut terms: Vec<TrigTerm> = Vec::with_capacity(n as usize);
    let mut d0 = 0.0;
    match &spec.kind {
        CorpusKind::RandomPhase(law) => {
            for k in 1..=n {
                let phi = rng.gen_range(0.0..TAU);
                if let Some(d) = law.amplitude(k) {
                    terms.push(TrigTerm::new(k, d, phi));
                }
            }
        }
        CorpusKind::Fejer => {
            d0 = 1.0;
            for k in 1..=n {
                let d = 2.0 * (1.0 - k as f64 / (n as f64 + 1.0));
                terms.push(TrigTerm::new(k, d, 0.0));
            }
        }
        CorpusKind::DirichletLike => {
            d0 = 1.0;
            for k in 1..=n {
                terms.push(TrigTerm::new(k, 2.0, 0.0));
            }
        }
        CorpusKind::SalemStyle => {
            for k in 1..=n {
                let d = 1.0 / ((k as f64).sqrt() * (k as f64 + 2.0).ln());
                let phi = rng.gen_range(0.0..TAU);
                terms.push(TrigTerm::new(k, d, phi));
            }
        }
    }
    TrigPolynomial::from_terms(d0, terms)
}
