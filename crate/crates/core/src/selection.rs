//! Choosing `m` of `n` terms with small uniform norm.
//!
//! The construction layers number theory over the discrepancy machinery:
//! a greedy Egyptian-fraction expansion turns the fractional part of the
//! target density into a family of sparse symmetric residue classes, a
//! collision-minimizing prime supplies one more class for padding, and a
//! deterministic greedy repair guarantees the exact cardinality contract at
//! desk scale, where the asymptotic slack of the analysis is unavailable.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, ToPrimitive, Zero};
use serde::Serialize;
use std::f64::consts::TAU;

use crate::discrepancy::{balanced_ordering, mix_seed, DiscrepancyConfig, Permutation};
use crate::error::{Error, Result};
use crate::grid;
use crate::index_set::IndexSet;
use crate::poly::{norm_lower, subsum_clipped, TrigPolynomial, DEFAULT_REFINE};

/// Egyptian-fraction denominators grow doubly exponentially; past this many
/// bits the expansion is truncated rather than computed.
const DENOM_BIT_BUDGET: u64 = 4096;

/// Rough operation count above which an internal balanced ordering is
/// replaced by ascending order (the search cost scales like
/// `r^2 * dim * restarts`).
const ORDER_OP_BUDGET: u64 = 2_000_000_000;

/// Peak points tracked by the greedy repair's cheap candidate filter.
const PEAK_COUNT: usize = 32;

/// Candidates surviving the filter and scored exactly per greedy step.
const SHORTLIST: usize = 8;

/// Degrees up to which an exhaustive swap polish runs after the greedy
/// repair (everything fits in cache and the cost is negligible).
const SWAP_POLISH_MAX_N: u32 = 64;
const SWAP_POLISH_ROUNDS: usize = 50;

/// Seed tags for the independent searches inside a selection.
const PAD_ORDER_TAG: u64 = 0x7061_645f;
const CLASS_ORDER_TAG: u64 = 0x636c_735f;

/// A greedy expansion `alpha = 1/l_1 + ... + 1/l_s + remainder` in exact
/// rational arithmetic.
///
/// Each denominator is the smallest integer whose reciprocal still fits
/// under the running remainder (strictly), which forces the remainders down
/// doubly exponentially: after `s` steps the remainder is positive and at
/// most `2^(-2^(s-1))`.
#[derive(Debug, Clone)]
pub struct EgyptianDecomposition {
    pub alpha: BigRational,
    pub denominators: Vec<BigInt>,
    pub remainders: Vec<BigRational>,
    /// Set when the bit budget stopped the expansion before `s` steps.
    pub truncated: bool,
}

impl EgyptianDecomposition {
    pub fn steps(&self) -> usize {
        self.denominators.len()
    }

    pub fn final_remainder(&self) -> BigRational {
        self.remainders.last().cloned().unwrap_or_else(|| self.alpha.clone())
    }

    /// Exact check of the prefix bounds `0 < r_s <= 2^(-2^(s-1))`.
    pub fn prefix_bounds_hold(&self) -> bool {
        for (i, rem) in self.remainders.iter().enumerate() {
            if *rem <= BigRational::zero() {
                return false;
            }
            if i > 20 {
                // The bit budget truncates long before the bound exponent
                // 2^i itself becomes unrepresentable; positivity checked.
                continue;
            }
            let exponent = 1usize << i;
            let bound = BigRational::new(BigInt::one(), BigInt::one() << exponent);
            if *rem > bound {
                return false;
            }
        }
        true
    }

    /// Exact check that every denominator is minimal: shrinking any `l_j` to
    /// `l_j - 1` would overshoot the remainder before it.
    pub fn minimality_holds(&self) -> bool {
        let mut before = self.alpha.clone();
        for (l, rem) in self.denominators.iter().zip(&self.remainders) {
            let shrunk = l - BigInt::one();
            if shrunk.is_zero() {
                return false;
            }
            if before > BigRational::new(BigInt::one(), shrunk) {
                return false;
            }
            before = rem.clone();
        }
        true
    }
}

/// Expands `alpha` in `(0, 1]` greedily into `s` unit fractions.
///
/// Exact rational arithmetic throughout; if the denominators outgrow the
/// bit budget the expansion stops early with `truncated` set.
pub fn egyptian_greedy(alpha: &BigRational, s: u32) -> Result<EgyptianDecomposition> {
    if s == 0 {
        return Err(Error::EmptyInput("expansion steps"));
    }
    if *alpha <= BigRational::zero() || *alpha > BigRational::one() {
        return Err(Error::AlphaOutOfRange);
    }
    let mut rem = alpha.clone();
    let mut denominators = Vec::new();
    let mut remainders = Vec::new();
    let mut truncated = false;
    for _ in 0..s {
        if rem.denom().bits() > DENOM_BIT_BUDGET {
            truncated = true;
            break;
        }
        // Smallest l with 1/l strictly below the remainder p/q is
        // floor(q/p) + 1 (strictness matters when p divides q).
        let l = rem.denom() / rem.numer() + BigInt::one();
        rem -= BigRational::new(BigInt::one(), l.clone());
        denominators.push(l);
        remainders.push(rem.clone());
    }
    Ok(EgyptianDecomposition {
        alpha: alpha.clone(),
        denominators,
        remainders,
        truncated,
    })
}

/// The symmetric residue class `{k in [1, n] : k = +-j (mod l)}`.
pub fn residue_class(n: u32, l: u64, j: u64) -> IndexSet {
    assert!(l >= 1, "modulus must be positive");
    let jm = j % l;
    let jc = (l - jm) % l;
    let elems: Vec<u32> = (1..=n)
        .filter(|&k| {
            let r = k as u64 % l;
            r == jm || r == jc
        })
        .collect();
    IndexSet::from_sorted_unchecked(n, elems)
}

/// [`residue_class`] for moduli that may exceed machine words (Egyptian
/// denominators can be astronomically large). A modulus beyond `n + j` can
/// only catch `k = j` itself inside `[1, n]`.
fn residue_class_big(n: u32, modulus: &BigInt, j: u64) -> IndexSet {
    match modulus.to_u64() {
        Some(l) => residue_class(n, l, j),
        None => {
            let elems = if 1 <= j && j <= n as u64 { vec![j as u32] } else { Vec::new() };
            IndexSet::from_sorted_unchecked(n, elems)
        }
    }
}

/// Estimated sup norm of the subsum of `t` over the residue class
/// `(l, j)` within `[1, degree]`; for `|t| <= 1` these stay below 2 plus
/// grid slack, which the test suite verifies.
pub fn class_subsum_norm(t: &TrigPolynomial, l: u64, j: u64, refine: u32) -> f64 {
    let class = residue_class(t.degree(), l, j);
    norm_lower(&subsum_clipped(t, &class), refine)
}

/// An odd prime with few coefficient collisions among the residue classes
/// it induces.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PrimeReport {
    pub p: u64,
    /// `S(p) = sum over ordered pairs k1 != k2, k1 = k2 (mod p) of
    /// d_{k1}^2 d_{k2}^2`.
    pub collision_weight: f64,
    pub search_bound: f64,
    /// Every candidate examined, ascending, with its weight.
    pub candidates: Vec<(u64, f64)>,
}

impl PrimeReport {
    /// `S(p) * ln^2(n + 1)`: how close the winner gets to the theoretical
    /// `C / ln^2(n + 1)` collision decay, tracked by the bench harness.
    pub fn implied_constant(&self, n: u32) -> f64 {
        self.collision_weight * (n as f64 + 1.0).ln().powi(2)
    }
}

fn is_prime(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    if x % 2 == 0 {
        return x == 2;
    }
    let mut d = 3;
    while d * d <= x {
        if x % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn odd_primes_up_to(bound: f64) -> Vec<u64> {
    let cap = if bound.is_finite() && bound >= 3.0 { bound.floor() as u64 } else { 0 };
    let mut primes: Vec<u64> = (3..=cap.max(2)).filter(|&x| x % 2 == 1 && is_prime(x)).collect();
    if primes.is_empty() {
        // An odd prime is always returned, even under a tiny search bound.
        primes.push(3);
    }
    primes
}

fn collision_weight(t: &TrigPolynomial, p: u64) -> f64 {
    // Bucket sums per residue class: with Q_c = sum of d_k^2 and
    // P_c = sum of d_k^4 over k = c (mod p), the ordered-pair collision
    // weight is sum_c (Q_c^2 - P_c).
    let mut q = vec![0.0f64; p as usize];
    let mut quartic = vec![0.0f64; p as usize];
    for term in t.terms() {
        let c = (term.k as u64 % p) as usize;
        let d2 = term.d * term.d;
        q[c] += d2;
        quartic[c] += d2 * d2;
    }
    q.iter().zip(&quartic).map(|(a, b)| a * a - b).sum()
}

/// Scans odd primes up to `bound` (at least `p = 3`) and returns the one
/// with the smallest collision weight, ties to the smallest prime.
pub fn find_prime_with_bound(t: &TrigPolynomial, bound: f64) -> Result<PrimeReport> {
    let n = t.degree();
    if n < 2 {
        return Err(Error::DegreeTooSmall { min: 2, got: n });
    }
    let candidates: Vec<(u64, f64)> = odd_primes_up_to(bound)
        .into_iter()
        .map(|p| (p, collision_weight(t, p)))
        .collect();
    let &(p, weight) = candidates
        .iter()
        .min_by(|a, b| (a.1, a.0).partial_cmp(&(b.1, b.0)).expect("finite weights"))
        .expect("candidate list is never empty");
    Ok(PrimeReport { p, collision_weight: weight, search_bound: bound, candidates })
}

/// [`find_prime_with_bound`] with the default search window
/// `p <= 2 ln^3(n + 3)`, inside which a low-collision prime provably exists
/// for normalized polynomials.
pub fn find_prime(t: &TrigPolynomial) -> Result<PrimeReport> {
    let n = t.degree();
    if n < 2 {
        return Err(Error::DegreeTooSmall { min: 2, got: n });
    }
    find_prime_with_bound(t, 2.0 * (n as f64 + 3.0).ln().powi(3))
}

/// Knobs for [`select_terms`] and [`class_ordering`].
#[derive(Debug, Clone, Copy)]
pub struct SelectionConfig {
    pub seed: u64,
    /// Grid refinement for all reported norms.
    pub refine: u32,
    /// Restarts for embedded discrepancy searches.
    pub restarts: u32,
    pub max_flips: u32,
}

impl Default for SelectionConfig {
    fn default() -> Self {
        SelectionConfig { seed: 0, refine: DEFAULT_REFINE, restarts: 16, max_flips: 1024 }
    }
}

impl SelectionConfig {
    pub fn with_seed(seed: u64) -> Self {
        SelectionConfig { seed, ..Default::default() }
    }

    fn discrepancy(&self, tag: u64) -> DiscrepancyConfig {
        DiscrepancyConfig {
            seed: mix_seed(self.seed, tag),
            restarts: self.restarts,
            max_flips: self.max_flips,
            ..Default::default()
        }
    }
}

/// An ordering of a residue class whose every prefix subsum stays small.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassOrdering {
    pub tau: Permutation,
    /// Worst estimated norm over all prefix subsums `sum_{i <= m} A_tau(i)`.
    pub max_prefix_norm: f64,
    /// The balanced-ordering reference bound that produced `tau`.
    pub deviation_bound: f64,
}

/// Orders a residue class of `t` so every prefix subsum has small norm.
///
/// Every class element must be a present frequency of `t`; the ordering
/// itself delegates to the recursive balanced ordering.
pub fn class_ordering(
    t: &TrigPolynomial,
    class: &IndexSet,
    config: &SelectionConfig,
) -> Result<ClassOrdering> {
    if class.is_empty() {
        return Err(Error::EmptyInput("residue class"));
    }
    for k in class.iter() {
        if t.term(k).is_none() {
            return Err(Error::MissingFrequency(k));
        }
    }
    let ordering = balanced_ordering(t, class, &config.discrepancy(CLASS_ORDER_TAG))?;
    let mut prefix = IndexSet::empty(class.ambient());
    let mut worst = 0.0f64;
    for k in ordering.sigma.iter() {
        prefix.insert(k)?;
        worst = worst.max(norm_lower(&subsum_clipped(t, &prefix), config.refine));
    }
    Ok(ClassOrdering {
        tau: ordering.sigma,
        max_prefix_norm: worst,
        deviation_bound: ordering.bound,
    })
}

/// One residue class as actually used by a selection (after any
/// disjointness trimming). The modulus is a decimal string because
/// Egyptian moduli can exceed any machine integer.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassUse {
    pub modulus: String,
    pub residue: u32,
    pub size: usize,
}

/// The outcome of [`select_terms`].
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SelectionResult {
    pub k: IndexSet,
    pub n: u32,
    pub m: u32,
    /// Whether the construction ran on the complement (`2m > n`) and
    /// returned the complementary set.
    pub complemented: bool,
    pub l0: u32,
    pub g: u32,
    pub s: u32,
    pub gamma: f64,
    pub alpha: f64,
    pub classes_used: Vec<ClassUse>,
    /// Elements appended from the ordered padding class.
    pub padded: usize,
    /// Whether greedy repair (resize or swap polish) modified the set.
    pub fallback: bool,
    /// Estimated `|sum_K A_k| / |T|`.
    pub norm_ratio: f64,
}

struct CoreOutcome {
    set: IndexSet,
    l0: u32,
    g: u32,
    s: u32,
    gamma: f64,
    alpha: f64,
    classes: Vec<ClassUse>,
    padded: usize,
    fallback: bool,
}

/// Selects exactly `m` of the `n = degree(t)` frequencies so that the
/// selected subsum has small uniform norm relative to `|t|`.
///
/// For `2m > n` the construction runs on the complementary count and the
/// complement set is returned. Otherwise residue classes modulo `2 l_0`
/// (and modulo `2 l_0 l_j` for the Egyptian denominators `l_j`) supply the
/// bulk, a low-collision prime class supplies ordered padding, and a greedy
/// grid search repairs any remaining cardinality gap deterministically.
pub fn select_terms(
    t: &TrigPolynomial,
    m: u32,
    config: &SelectionConfig,
) -> Result<SelectionResult> {
    let n = t.degree();
    if n == 0 {
        return Err(Error::DegreeTooSmall { min: 1, got: 0 });
    }
    if m > n {
        return Err(Error::SelectionTooLarge { m, n });
    }
    let complemented = 2 * m as u64 > n as u64;
    let inner_m = if complemented { n - m } else { m };
    let core = structured_core(t, inner_m, config)?;
    debug_assert_eq!(core.set.len(), inner_m as usize);
    let set = if complemented { core.set.complement() } else { core.set };

    let denom = norm_lower(t, config.refine);
    let numer = norm_lower(&subsum_clipped(t, &set), config.refine);
    let norm_ratio = if denom > 0.0 { numer / denom } else { 0.0 };

    Ok(SelectionResult {
        k: set,
        n,
        m,
        complemented,
        l0: core.l0,
        g: core.g,
        s: core.s,
        gamma: core.gamma,
        alpha: core.alpha,
        classes_used: core.classes,
        padded: core.padded,
        fallback: core.fallback,
        norm_ratio,
    })
}

/// The structured construction for `m <= n/2` (callers arrange that),
/// guaranteed to return exactly `m` elements.
fn structured_core(t: &TrigPolynomial, m: u32, config: &SelectionConfig) -> Result<CoreOutcome> {
    let n = t.degree();
    let nf = n as f64;
    let ln3 = nf.ln().powi(3);
    // Below e^e the iterated logarithm is meaningless, and for very sparse
    // targets the density-based classes would be empty anyway.
    let degenerate = n < 16 || (m as f64) <= 0.2 * nf / ln3;

    let (l0, s_steps, gamma) = if degenerate {
        (0u32, 0u32, 0.0f64)
    } else {
        let lll = nf.ln().ln().ln();
        let l0 = ((5.0 * lll).floor() as i64).max(2) as u32;
        let s = ((2.0 * lll).floor() as i64).max(1) as u32;
        let gamma = (l0 as f64 * m as f64 / nf - 0.1 / ln3).max(0.0);
        (l0, s, gamma)
    };
    let g = gamma.floor() as u32;
    let alpha = gamma - g as f64;

    let mut classes: Vec<ClassUse> = Vec::new();
    let mut chosen = IndexSet::empty(n);
    let mut fallback = false;

    let add_class = |chosen: &mut IndexSet,
                         classes: &mut Vec<ClassUse>,
                         fallback: &mut bool,
                         cls: IndexSet,
                         modulus: String,
                         residue: u32|
     -> Result<()> {
        let fresh = cls.difference(chosen);
        if fresh.len() < cls.len() {
            // Classes overlap once the clamped parameters leave the regime
            // g + s < l_0 - 1; keep only the new elements and record that
            // the construction deviated.
            *fallback = true;
        }
        if !fresh.is_empty() {
            classes.push(ClassUse { modulus, residue, size: fresh.len() });
            *chosen = chosen.union(&fresh)?;
        }
        Ok(())
    };

    if !degenerate {
        for j in 1..=g {
            let modulus = 2 * l0 as u64;
            let cls = residue_class(n, modulus, j as u64);
            add_class(&mut chosen, &mut classes, &mut fallback, cls, modulus.to_string(), j)?;
        }
        if alpha > 0.0 {
            let alpha_exact =
                BigRational::from_f64(alpha).expect("fractional part is finite");
            let expansion = egyptian_greedy(&alpha_exact, s_steps)?;
            for (i, lj) in expansion.denominators.iter().enumerate() {
                let residue = g + i as u32 + 1;
                let modulus = BigInt::from(2 * l0 as u64) * lj;
                let cls = residue_class_big(n, &modulus, residue as u64);
                add_class(
                    &mut chosen,
                    &mut classes,
                    &mut fallback,
                    cls,
                    modulus.to_string(),
                    residue,
                )?;
            }
        }
    }

    // Padding: one more residue class, modulo a low-collision prime of the
    // complement polynomial, appended in balanced order until the count is
    // reached (or the class runs out).
    let mut padded = 0usize;
    if chosen.len() < m as usize {
        let complement_poly = subsum_clipped(t, &chosen.complement());
        if complement_poly.degree() >= 2 && complement_poly.num_terms() >= 2 {
            let report = find_prime(&complement_poly)?;
            let p = report.p;
            let mut best: Option<(usize, u64, IndexSet)> = None;
            for j in 0..=p / 2 {
                let cls = residue_class(n, p, j);
                let fresh_len = cls.difference(&chosen).len();
                if best.as_ref().map_or(true, |(len, _, _)| fresh_len > *len) {
                    best = Some((fresh_len, j, cls));
                }
            }
            if let Some((fresh_len, j, cls)) = best {
                if fresh_len > 0 {
                    let tau = padding_order(&complement_poly, &cls, config)?;
                    for k in tau {
                        if chosen.len() == m as usize {
                            break;
                        }
                        if !chosen.contains(k) {
                            chosen.insert(k)?;
                            padded += 1;
                        }
                    }
                    if padded > 0 {
                        classes.push(ClassUse {
                            modulus: p.to_string(),
                            residue: j as u32,
                            size: padded,
                        });
                    }
                }
            }
        }
    }

    if chosen.len() != m as usize {
        fallback = true;
        greedy_resize(t, &mut chosen, m as usize);
    }
    if n <= SWAP_POLISH_MAX_N && m > 0 && m < n && swap_polish(t, &mut chosen) {
        fallback = true;
    }

    Ok(CoreOutcome { set: chosen, l0, g, s: s_steps, gamma, alpha, classes, padded, fallback })
}

/// Order in which a padding class is consumed: balanced when affordable,
/// ascending otherwise (or when the class misses the polynomial entirely).
fn padding_order(
    t: &TrigPolynomial,
    class: &IndexSet,
    config: &SelectionConfig,
) -> Result<Vec<u32>> {
    let r = class.len() as u64;
    let dim = 10 * class.ambient() as u64 + 1;
    let est = 2 * r * r * dim * config.restarts.max(1) as u64;
    let any_present = class.iter().any(|k| t.term(k).is_some());
    if est > ORDER_OP_BUDGET || !any_present {
        return Ok(class.iter().collect());
    }
    let ordering = balanced_ordering(t, class, &config.discrepancy(PAD_ORDER_TAG))?;
    Ok(ordering.sigma.as_slice().to_vec())
}

/// Adds `sign * A_k` to uniform grid values via a complex rotor (one
/// multiply per point instead of a cosine).
fn accumulate_term(values: &mut [f64], k: u32, d: f64, phi: f64, sign: f64) {
    let rot = Complex64::from_polar(1.0, TAU * k as f64 / values.len() as f64);
    let mut z = Complex64::from_polar(d, phi);
    for v in values.iter_mut() {
        *v += sign * z.re;
        z *= rot;
    }
}

/// `max_l |values[l] + sign * A_k(x_l)|` without materializing the row.
fn appended_norm(values: &[f64], k: u32, term: Option<(f64, f64)>, sign: f64) -> f64 {
    match term {
        None => grid::sup(values),
        Some((d, phi)) => {
            let rot = Complex64::from_polar(1.0, TAU * k as f64 / values.len() as f64);
            let mut z = Complex64::from_polar(d, phi);
            let mut worst = 0.0f64;
            for v in values {
                worst = worst.max((v + sign * z.re).abs());
                z *= rot;
            }
            worst
        }
    }
}

fn top_peaks(values: &[f64], count: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    let count = count.min(values.len());
    if count < values.len() {
        idx.select_nth_unstable_by(count - 1, |&a, &b| {
            values[b].abs().partial_cmp(&values[a].abs()).expect("finite grid values")
        });
        idx.truncate(count);
    }
    idx
}

enum GreedyMode {
    Add,
    Remove,
}

/// Grows or shrinks `set` to exactly `target` elements, each step taking
/// the candidate that minimizes the grid sup norm of the running subsum.
/// A peak filter keeps the scan cheap; the shortlist is scored exactly.
fn greedy_resize(t: &TrigPolynomial, set: &mut IndexSet, target: usize) {
    let n = set.ambient();
    let points = 10 * n as usize;
    let mut values = vec![0.0f64; points];
    for k in set.iter() {
        if let Some(term) = t.term(k) {
            accumulate_term(&mut values, k, term.d, term.phi, 1.0);
        }
    }
    while set.len() != target {
        let mode = if set.len() < target { GreedyMode::Add } else { GreedyMode::Remove };
        let sign = match mode {
            GreedyMode::Add => 1.0,
            GreedyMode::Remove => -1.0,
        };
        let candidates: Vec<u32> = match mode {
            GreedyMode::Add => (1..=n).filter(|&k| !set.contains(k)).collect(),
            GreedyMode::Remove => set.iter().collect(),
        };
        let peaks = top_peaks(&values, PEAK_COUNT);
        let mut scored: Vec<(f64, u32)> = candidates
            .iter()
            .map(|&k| {
                let proxy = match t.term(k) {
                    None => peaks.iter().map(|&l| values[l].abs()).fold(0.0, f64::max),
                    Some(term) => peaks
                        .iter()
                        .map(|&l| {
                            let x = TAU * l as f64 / points as f64;
                            (values[l] + sign * term.d * (k as f64 * x + term.phi).cos()).abs()
                        })
                        .fold(0.0, f64::max),
                };
                (proxy, k)
            })
            .collect();
        scored.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite scores").then(a.1.cmp(&b.1)));
        scored.truncate(SHORTLIST);
        let (_, k) = scored
            .into_iter()
            .map(|(_, k)| {
                let exact =
                    appended_norm(&values, k, t.term(k).map(|t| (t.d, t.phi)), sign);
                (exact, k)
            })
            .min_by(|a, b| a.0.partial_cmp(&b.0).expect("finite scores").then(a.1.cmp(&b.1)))
            .expect("shortlist is nonempty");
        if let Some(term) = t.term(k) {
            accumulate_term(&mut values, k, term.d, term.phi, sign);
        }
        match mode {
            GreedyMode::Add => set.insert(k).expect("candidate within ambient range"),
            GreedyMode::Remove => {
                set.remove(k);
            }
        }
    }
}

/// Exhaustive single-swap descent for small degrees: repeatedly exchanges
/// one chosen frequency for one unchosen frequency while that strictly
/// lowers the grid sup norm. Returns whether anything changed.
fn swap_polish(t: &TrigPolynomial, set: &mut IndexSet) -> bool {
    let n = set.ambient();
    let points = 10 * n as usize;
    let rows: Vec<Vec<f64>> = (1..=n)
        .map(|k| {
            let mut row = vec![0.0f64; points];
            if let Some(term) = t.term(k) {
                accumulate_term(&mut row, k, term.d, term.phi, 1.0);
            }
            row
        })
        .collect();
    let mut values = vec![0.0f64; points];
    for k in set.iter() {
        for (v, r) in values.iter_mut().zip(&rows[k as usize - 1]) {
            *v += r;
        }
    }
    let mut changed = false;
    for _ in 0..SWAP_POLISH_ROUNDS {
        let current = grid::sup(&values);
        let mut best: Option<(f64, u32, u32)> = None;
        for out in set.iter() {
            let out_row = &rows[out as usize - 1];
            for inn in 1..=n {
                if set.contains(inn) {
                    continue;
                }
                let in_row = &rows[inn as usize - 1];
                let cap = best.map_or(current, |(v, _, _)| v);
                let mut worst = 0.0f64;
                for ((v, o), i) in values.iter().zip(out_row).zip(in_row) {
                    let x = (v - o + i).abs();
                    if x > worst {
                        if x >= cap {
                            worst = x;
                            break;
                        }
                        worst = x;
                    }
                }
                if worst < cap {
                    best = Some((worst, out, inn));
                }
            }
        }
        let Some((value, out, inn)) = best else { break };
        if value >= current {
            break;
        }
        for ((v, o), i) in values
            .iter_mut()
            .zip(&rows[out as usize - 1])
            .zip(&rows[inn as usize - 1])
        {
            *v = *v - o + i;
        }
        set.remove(out);
        set.insert(inn).expect("swap candidate within range");
        changed = true;
    }
    changed
}
