//! Real trigonometric polynomials in canonical cosine form.
//!
//! A polynomial is stored as `T(x) = d0 + sum_{k in F} d_k cos(k x + phi_k)`
//! with `d_k >= 0` and `phi_k in [0, 2 pi)`, one term per frequency. The
//! canonical form makes equality, serialization, and subset extraction
//! unambiguous: `-d cos(k x + phi)` and `d cos(k x + phi + pi)` are the same
//! term and normalize to the same representation.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid;
use crate::index_set::IndexSet;

/// Amplitudes below this are treated as absent frequencies when extracting
/// coefficients from samples.
pub const AMPLITUDE_FLOOR: f64 = 1e-15;

/// Default grid-refinement factor for norm estimation: the certified upper
/// bound always comes from the base grid, while the lower bound is sharpened
/// on a grid this many times finer.
pub const DEFAULT_REFINE: u32 = 8;

/// One cosine term `d * cos(k x + phi)` in canonical form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrigTerm {
    pub k: u32,
    pub d: f64,
    pub phi: f64,
}

impl TrigTerm {
    /// Canonicalizes on construction: a negative amplitude flips the phase by
    /// `pi`, and the phase is reduced to `[0, 2 pi)`.
    pub fn new(k: u32, d: f64, phi: f64) -> Self {
        let (d, phi) = if d < 0.0 { (-d, phi + PI) } else { (d, phi) };
        let mut phi = phi.rem_euclid(TAU);
        // rem_euclid can round up to TAU for tiny negative inputs.
        if phi >= TAU {
            phi = 0.0;
        }
        TrigTerm { k, d, phi }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.d * (self.k as f64 * x + self.phi).cos()
    }
}

/// A trigonometric polynomial in canonical form, keyed by frequency.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrigPolynomial {
    d0: f64,
    terms: BTreeMap<u32, TrigTerm>,
}

impl TrigPolynomial {
    pub fn zero() -> Self {
        TrigPolynomial::default()
    }

    pub fn constant(d0: f64) -> Self {
        TrigPolynomial { d0, terms: BTreeMap::new() }
    }

    /// Builds from a constant term and a list of cosine terms. Terms are
    /// canonicalized; exact zero amplitudes are dropped; duplicate
    /// frequencies or `k = 0` entries are rejected.
    pub fn from_terms(d0: f64, terms: impl IntoIterator<Item = TrigTerm>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for t in terms {
            if t.k == 0 {
                return Err(Error::IndexOutOfRange(0, u32::MAX));
            }
            if !(t.d.is_finite() && t.phi.is_finite()) {
                return Err(Error::NonFinite("term coefficients"));
            }
            let t = TrigTerm::new(t.k, t.d, t.phi);
            if t.d == 0.0 {
                continue;
            }
            if map.insert(t.k, t).is_some() {
                return Err(Error::DuplicateIndex(t.k));
            }
        }
        if !d0.is_finite() {
            return Err(Error::NonFinite("constant term"));
        }
        Ok(TrigPolynomial { d0, terms: map })
    }

    /// Inserts or replaces the term at `term.k` (dropped if the canonical
    /// amplitude is zero).
    pub fn set_term(&mut self, term: TrigTerm) {
        assert!(term.k > 0, "frequency 0 is the constant term");
        let term = TrigTerm::new(term.k, term.d, term.phi);
        if term.d == 0.0 {
            self.terms.remove(&term.k);
        } else {
            self.terms.insert(term.k, term);
        }
    }

    pub fn d0(&self) -> f64 {
        self.d0
    }

    pub fn set_d0(&mut self, d0: f64) {
        self.d0 = d0;
    }

    /// Largest frequency present, 0 for constants.
    pub fn degree(&self) -> u32 {
        self.terms.keys().next_back().copied().unwrap_or(0)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.d0 == 0.0 && self.terms.is_empty()
    }

    pub fn term(&self, k: u32) -> Option<&TrigTerm> {
        self.terms.get(&k)
    }

    /// Terms in ascending frequency order.
    pub fn terms(&self) -> impl Iterator<Item = &TrigTerm> {
        self.terms.values()
    }

    pub fn frequencies(&self) -> impl Iterator<Item = u32> + '_ {
        self.terms.keys().copied()
    }

    /// The set of present frequencies over the ambient range `[1, degree]`.
    pub fn frequency_set(&self) -> IndexSet {
        IndexSet::from_sorted_unchecked(self.degree(), self.terms.keys().copied().collect())
    }

    /// Direct pointwise evaluation (independent of the FFT grid path).
    pub fn evaluate(&self, x: f64) -> f64 {
        self.d0 + self.terms.values().map(|t| t.eval(x)).sum::<f64>()
    }

    /// Values on the uniform grid `x_j = 2 pi j / n_points`.
    pub fn grid_values(&self, n_points: usize) -> Vec<f64> {
        grid::eval_uniform(self, n_points)
    }

    /// Coefficientwise sum, combining same-frequency terms through their
    /// complex representations.
    pub fn add(&self, other: &TrigPolynomial) -> TrigPolynomial {
        let mut out = self.clone();
        out.d0 += other.d0;
        for t in other.terms() {
            match out.terms.get(&t.k).copied() {
                None => out.set_term(*t),
                Some(existing) => {
                    let c = Complex64::from_polar(existing.d, existing.phi)
                        + Complex64::from_polar(t.d, t.phi);
                    out.set_term(TrigTerm::new(t.k, c.norm(), c.arg()));
                }
            }
        }
        out
    }

    /// Coefficientwise scaling (negative factors flip phases by `pi`).
    pub fn scale(&self, factor: f64) -> TrigPolynomial {
        let terms = self.terms.values().map(|t| TrigTerm::new(t.k, t.d * factor, t.phi));
        let mut out = TrigPolynomial::from_terms(self.d0 * factor, terms)
            .expect("scaling canonical terms cannot fail");
        out.d0 = self.d0 * factor;
        out
    }
}

/// Two-sided bracket for the sup norm of a polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NormEstimate {
    /// Largest sampled value: a certified lower bound.
    pub lower: f64,
    /// `3 x` the maximum over the base grid of `10 n` points: a certified
    /// upper bound for degree-`n` polynomials.
    pub upper: f64,
    /// Size of the (refined) grid that produced `lower`.
    pub grid_size: usize,
}

/// Brackets the sup norm of `t`.
///
/// The base grid has `10 n` points (`n` the degree); three times its maximum
/// bounds the true norm from above. `refine >= 1` multiplies the grid size
/// used for the lower bound. Degree-0 polynomials are exact.
pub fn sup_norm(t: &TrigPolynomial, refine: u32) -> NormEstimate {
    let n = t.degree() as usize;
    if n == 0 {
        return NormEstimate { lower: t.d0.abs(), upper: t.d0.abs(), grid_size: 1 };
    }
    let refine = refine.max(1) as usize;
    let base = 10 * n;
    let coarse_max = grid::sup(&t.grid_values(base));
    let lower = if refine == 1 {
        coarse_max
    } else {
        grid::sup(&t.grid_values(base * refine))
    };
    NormEstimate { lower, upper: 3.0 * coarse_max, grid_size: base * refine }
}

/// Shorthand for the refined lower estimate, the working value used by all
/// achieved-versus-bound comparisons.
pub fn norm_lower(t: &TrigPolynomial, refine: u32) -> f64 {
    sup_norm(t, refine).lower
}

/// Complex exponential coefficients `c_k`, `-n <= k <= n`, of a real
/// polynomial: `c_k = (d_k / 2) e^{i phi_k}`, `c_{-k} = conj(c_k)`,
/// `c_0 = d0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexCoeffs {
    n: u32,
    c: Vec<Complex64>,
}

impl ComplexCoeffs {
    /// Wraps a coefficient vector of length `2 n + 1` indexed by `k + n`.
    pub fn new(n: u32, c: Vec<Complex64>) -> Result<Self> {
        if c.len() != 2 * n as usize + 1 {
            return Err(Error::LengthMismatch("complex coefficients must have length 2n + 1"));
        }
        Ok(ComplexCoeffs { n, c })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn get(&self, k: i64) -> Complex64 {
        assert!(k.unsigned_abs() <= self.n as u64);
        self.c[(k + self.n as i64) as usize]
    }
}

/// Converts to complex exponential coefficients.
pub fn to_complex(t: &TrigPolynomial) -> ComplexCoeffs {
    let n = t.degree();
    let mut c = vec![Complex64::new(0.0, 0.0); 2 * n as usize + 1];
    c[n as usize] = Complex64::new(t.d0, 0.0);
    for term in t.terms() {
        let ck = Complex64::from_polar(term.d / 2.0, term.phi);
        c[(n + term.k) as usize] = ck;
        c[(n - term.k) as usize] = ck.conj();
    }
    ComplexCoeffs { n, c }
}

/// Recovers the canonical real form; rejects inputs that are not conjugate
/// symmetric within `1e-12`.
pub fn from_complex(c: &ComplexCoeffs) -> Result<TrigPolynomial> {
    const SYM_TOL: f64 = 1e-12;
    let c0 = c.get(0);
    if c0.im.abs() > SYM_TOL {
        return Err(Error::ConjugateSymmetry { k: 0, deviation: c0.im.abs() });
    }
    let mut terms = Vec::new();
    for k in 1..=c.n() {
        let pos = c.get(k as i64);
        let neg = c.get(-(k as i64));
        let dev = (neg - pos.conj()).norm();
        if dev > SYM_TOL {
            return Err(Error::ConjugateSymmetry { k, deviation: dev });
        }
        let d = 2.0 * pos.norm();
        if d > 0.0 {
            terms.push(TrigTerm::new(k, d, pos.arg()));
        }
    }
    TrigPolynomial::from_terms(c0.re, terms)
}

/// Extracts the subpolynomial `sum_{k in K} A_k` (no constant term). Every
/// requested index must be a present frequency.
pub fn subsum(t: &TrigPolynomial, k: &IndexSet) -> Result<TrigPolynomial> {
    let mut terms = Vec::with_capacity(k.len());
    for idx in k.iter() {
        match t.term(idx) {
            Some(term) => terms.push(*term),
            None => return Err(Error::MissingFrequency(idx)),
        }
    }
    TrigPolynomial::from_terms(0.0, terms)
}

/// Like [`subsum`] but treats absent frequencies as zero terms. Used
/// internally where index sets range over an ambient `[1, n]` that may be
/// wider than the polynomial's support.
pub(crate) fn subsum_clipped(t: &TrigPolynomial, k: &IndexSet) -> TrigPolynomial {
    let terms: Vec<TrigTerm> = k.iter().filter_map(|idx| t.term(idx).copied()).collect();
    TrigPolynomial::from_terms(0.0, terms).expect("clipped terms are canonical and distinct")
}

/// The de la Vallee Poussin sum `V_{m,n}`: coefficients through `m` pass
/// unchanged, those in `(m, n]` are damped linearly by `(n - k) / (n - m)`,
/// and everything beyond `n` is discarded.
pub fn vallee_poussin(source: &TrigPolynomial, m: u32, n: u32) -> Result<TrigPolynomial> {
    if m >= n {
        return Err(Error::BadBlockOrders { m, n });
    }
    let terms = source.terms().filter(|t| t.k <= n).map(|t| {
        let w = if t.k <= m {
            1.0
        } else {
            (n - t.k) as f64 / (n - m) as f64
        };
        TrigTerm::new(t.k, w * t.d, t.phi)
    });
    TrigPolynomial::from_terms(source.d0(), terms)
}

/// Function samples `f(2 pi j / N)`, `j = 0..N`, on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput("sample vector"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("samples"));
        }
        Ok(SampledFunction { values })
    }

    /// Samples a polynomial on the uniform grid of `n_points` points.
    pub fn from_polynomial(t: &TrigPolynomial, n_points: usize) -> Result<Self> {
        if n_points <= t.degree() as usize {
            return Err(Error::GridTooSmall { n: n_points, maxk: t.degree() });
        }
        SampledFunction::new(t.grid_values(n_points))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // constructor rejects empty sample vectors
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Largest frequency this grid can resolve under the `N >= 2 maxk + 2`
    /// sampling requirement.
    pub fn max_resolvable(&self) -> u32 {
        ((self.values.len().saturating_sub(2)) / 2) as u32
    }
}

/// Recovers canonical coefficients up to `maxk` from uniform samples.
///
/// Requires `N >= 2 maxk + 2`; amplitudes below [`AMPLITUDE_FLOOR`] are
/// dropped. Exact (to roundoff) when the samples come from a polynomial of
/// degree at most `maxk`.
pub fn fourier_coeffs(f: &SampledFunction, maxk: u32) -> Result<TrigPolynomial> {
    let n = f.len();
    if n < 2 * maxk as usize + 2 {
        return Err(Error::GridTooSmall { n, maxk });
    }
    let spectrum = grid::forward_dft(f.values());
    let scale = 1.0 / n as f64;
    let d0 = spectrum[0].re * scale;
    let terms = (1..=maxk).filter_map(|k| {
        let ck = spectrum[k as usize] * scale;
        let d = 2.0 * ck.norm();
        (d >= AMPLITUDE_FLOOR).then(|| TrigTerm::new(k, d, ck.arg()))
    });
    TrigPolynomial::from_terms(d0, terms.collect::<Vec<_>>())
}
