//! Rearrangement schedules built from tapered partial sums: pick a chain of
//! block orders whose tapered sums track the target function, round the
//! taper weights to {0, 1} so every level is an honest subsum, order each
//! new block of frequencies, and emit the flattened plan with measured
//! uniform errors.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::TAU;

use crate::discrepancy::{
    balanced_ordering, mix_seed, round_coefficients, DiscrepancyConfig, Permutation,
};
use crate::error::{Error, Result};
use crate::index_set::IndexSet;
use crate::poly::{fourier_coeffs, vallee_poussin, SampledFunction, TrigPolynomial};

/// Ordering searches above this rough operation count fall back to
/// ascending order (blocks are normally tiny, so this rarely fires).
const ORDER_OP_BUDGET: u64 = 2_000_000_000;

/// Seed-tag bases separating the per-level rounding and ordering searches.
const ROUND_TAG: u64 = 1 << 32;
const ORDER_TAG: u64 = 2 << 32;

/// How the relative window `(N, ceil((1 + delta) N) + 1]` shrinks with the
/// level index (1-based).
#[derive(Debug, Clone, PartialEq)]
pub enum SlackSchedule {
    /// `delta = 1 / level`: windows shrink, so block ratios tend to 1.
    Harmonic,
    /// Fixed `delta` (useful in tests to force geometric growth).
    Constant(f64),
    /// Explicit per-level values; the last entry repeats if levels run
    /// past the list.
    Custom(Vec<f64>),
}

impl SlackSchedule {
    pub fn delta(&self, level: u32) -> f64 {
        match self {
            SlackSchedule::Harmonic => 1.0 / level.max(1) as f64,
            SlackSchedule::Constant(d) => *d,
            SlackSchedule::Custom(list) => {
                let i = (level.max(1) as usize - 1).min(list.len().saturating_sub(1));
                list.get(i).copied().unwrap_or(1.0)
            }
        }
    }
}

/// Knobs for the whole pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct RearrangeConfig {
    pub seed: u64,
    pub slack: SlackSchedule,
    pub restarts: u32,
    pub max_flips: u32,
}

impl Default for RearrangeConfig {
    fn default() -> Self {
        RearrangeConfig {
            seed: 0,
            slack: SlackSchedule::Harmonic,
            restarts: 8,
            max_flips: 1024,
        }
    }
}

impl RearrangeConfig {
    pub fn with_seed(seed: u64) -> Self {
        RearrangeConfig { seed, ..Default::default() }
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

/// The chosen block orders and the tapered-sum errors that chose them.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BlockChoice {
    /// `N_1 = 1 < N_2 < ...`, strictly increasing.
    pub n_seq: Vec<u32>,
    /// `|V_{N_l, N_{l+1}} - f|` on the sample grid, one per step.
    pub vp_errors: Vec<f64>,
    /// Set when the resolvable coefficient range ended the chain early.
    pub truncated: bool,
}

/// Picks each next order inside a shrinking relative window by direct
/// search: `N_{l+1}` minimizes the tapered-sum error over
/// `(N_l, ceil((1 + delta_l) N_l) + 1]`, ties to the smaller order.
/// Candidates never exceed what the samples can resolve; an empty window
/// truncates the chain instead of failing.
pub fn choose_blocks(
    coeffs: &TrigPolynomial,
    samples: &SampledFunction,
    levels: u32,
    slack: &SlackSchedule,
) -> Result<BlockChoice> {
    if levels == 0 {
        return Err(Error::EmptyInput("level count"));
    }
    let cap = samples.max_resolvable();
    let mut n_seq = vec![1u32];
    let mut vp_errors = Vec::new();
    let mut truncated = false;
    for level in 1..levels {
        let current = *n_seq.last().expect("chain starts nonempty");
        let delta = slack.delta(level);
        let hi_raw = ((1.0 + delta) * current as f64).ceil() as u32 + 1;
        let hi = hi_raw.min(cap);
        if current + 1 > hi {
            truncated = true;
            break;
        }
        let mut best: Option<(f64, u32)> = None;
        for candidate in current + 1..=hi {
            let v = vallee_poussin(coeffs, current, candidate)?;
            let values = v.grid_values(samples.len());
            let err = values
                .iter()
                .zip(samples.values())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            if best.map_or(true, |(e, _)| err < e) {
                best = Some((err, candidate));
            }
        }
        let (err, chosen) = best.expect("window verified nonempty");
        n_seq.push(chosen);
        vp_errors.push(err);
    }
    Ok(BlockChoice { n_seq, vp_errors, truncated })
}

/// Rounds the taper weights of the block `(m, n]` to {0, 1} and returns the
/// level set `L = {1..m} union {k in (m, n] : beta_k = 1}` together with
/// the rounding error `|sum (alpha_k - beta_k) A_k|`.
///
/// Only present frequencies enter the search; absent ones have zero terms
/// and always round to 0, so `L` never acquires spurious members.
pub fn vp_round_block(
    coeffs: &TrigPolynomial,
    m: u32,
    n: u32,
    config: &RearrangeConfig,
    tag: u64,
) -> Result<(IndexSet, f64)> {
    if m >= n {
        return Err(Error::BadBlockOrders { m, n });
    }
    let tail: Vec<u32> =
        coeffs.frequencies().filter(|&k| k > m && k <= n).collect();
    let alphas: Vec<f64> =
        tail.iter().map(|&k| (n - k) as f64 / (n - m) as f64).collect();
    let tail_set = IndexSet::new(n, tail.iter().copied())?;
    let rounding =
        round_coefficients(coeffs, &tail_set, &alphas, &config.discrepancy(ROUND_TAG + tag))?;
    let chosen = (1..=m).chain(
        tail.iter()
            .zip(&rounding.betas)
            .filter(|(_, &b)| b == 1)
            .map(|(&k, _)| k),
    );
    Ok((IndexSet::new(n, chosen)?, rounding.error))
}

/// Orders one block of newly appearing frequencies with the balanced
/// recursive ordering; tiny, all-absent, or over-budget blocks fall back
/// to ascending order (which satisfies the small-set bound anyway).
pub fn order_block(
    coeffs: &TrigPolynomial,
    block: &IndexSet,
    config: &RearrangeConfig,
    tag: u64,
) -> Result<Permutation> {
    if block.is_empty() {
        return Err(Error::EmptyInput("block"));
    }
    let r = block.len() as u64;
    let dim = 10 * block.ambient() as u64 + 1;
    let est = 2 * r * r * dim * config.restarts.max(1) as u64;
    let any_present = block.iter().any(|k| coeffs.term(k).is_some());
    if r <= 8 || !any_present || est > ORDER_OP_BUDGET {
        return Permutation::new(block.iter().collect());
    }
    let ordering = balanced_ordering(coeffs, block, &config.discrepancy(ORDER_TAG + tag))?;
    Ok(ordering.sigma)
}

/// Everything a rearrangement run produces, level by level.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BlockSchedule {
    #[serde(rename = "N")]
    pub n_seq: Vec<u32>,
    /// `L_1 subset L_2 subset ...`; `L_l` lives in `[1, N_{l+1}]`.
    pub levels: Vec<IndexSet>,
    /// `orderings[0]` orders `L_1`; `orderings[l]` orders `L_{l+1} - L_l`.
    /// Empty blocks carry empty permutations.
    pub orderings: Vec<Permutation>,
    pub vp_errors: Vec<f64>,
    pub round_errors: Vec<f64>,
    pub truncated: bool,
}

/// Runs block choice, weight rounding, and block ordering for `levels`
/// levels against the sampled function.
pub fn build_schedule(
    f: &SampledFunction,
    levels: u32,
    config: &RearrangeConfig,
) -> Result<BlockSchedule> {
    let maxk = f.max_resolvable();
    let coeffs = fourier_coeffs(f, maxk)?;
    let choice = choose_blocks(&coeffs, f, levels, &config.slack)?;

    let mut level_sets: Vec<IndexSet> = Vec::new();
    let mut round_errors = Vec::new();
    for l in 0..choice.n_seq.len().saturating_sub(1) {
        let (set, err) =
            vp_round_block(&coeffs, choice.n_seq[l], choice.n_seq[l + 1], config, l as u64)?;
        level_sets.push(set);
        round_errors.push(err);
    }

    let mut orderings = Vec::new();
    for l in 0..level_sets.len() {
        let block = if l == 0 {
            level_sets[0].clone()
        } else {
            level_sets[l].difference(&level_sets[l - 1])
        };
        let ordering = if block.is_empty() {
            Permutation::empty()
        } else {
            order_block(&coeffs, &block, config, l as u64)?
        };
        orderings.push(ordering);
    }

    Ok(BlockSchedule {
        n_seq: choice.n_seq,
        levels: level_sets,
        orderings,
        vp_errors: choice.vp_errors,
        round_errors,
        truncated: choice.truncated,
    })
}

/// One measured prefix error of the flattened plan.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PrefixError {
    /// Number of terms placed when the error was measured.
    pub pos: usize,
    /// `max_j |f(x_j) - d_0 - sum_prefix A_k(x_j)|` on the sample grid.
    pub error: f64,
}

/// The flattened rearrangement with its error trace.
#[derive(Debug, Clone, Serialize)]
pub struct RearrangePlan {
    #[serde(rename = "N")]
    pub n_seq: Vec<u32>,
    /// Concatenating these gives the rearrangement prefix; block `l` is
    /// `orderings[l]` from the schedule.
    pub blocks: Vec<Vec<u32>>,
    #[serde(rename = "prefixErrors")]
    pub prefix_errors: Vec<PrefixError>,
    /// Measured `sup_k sqrt(k) d_k`, a diagnostic for the square-root
    /// amplitude-decay hypothesis (reported, never enforced).
    #[serde(rename = "hypothesisConstant")]
    pub hypothesis_constant: f64,
}

impl RearrangePlan {
    /// The blocks flattened into one duplicate-free frequency sequence.
    pub fn permutation_prefix(&self) -> Vec<u32> {
        self.blocks.iter().flatten().copied().collect()
    }

    /// One frequency per row, for external replay.
    pub fn permutation_csv(&self) -> String {
        let mut out = String::from("k\n");
        for k in self.permutation_prefix() {
            out.push_str(&format!("{k}\n"));
        }
        out
    }
}

/// Builds the full plan: schedule, flattened blocks, and prefix errors
/// measured against the samples at block boundaries and at interior
/// checkpoints every `ceil(len / 8)` terms within a block.
pub fn build_plan(
    f: &SampledFunction,
    levels: u32,
    config: &RearrangeConfig,
) -> Result<(RearrangePlan, BlockSchedule)> {
    let schedule = build_schedule(f, levels, config)?;
    let maxk = f.max_resolvable();
    let coeffs = fourier_coeffs(f, maxk)?;

    let blocks: Vec<Vec<u32>> =
        schedule.orderings.iter().map(|p| p.as_slice().to_vec()).collect();

    let points = f.len();
    let mut residual: Vec<f64> =
        f.values().iter().map(|v| v - coeffs.d0()).collect();
    let sup = |vals: &[f64]| vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));

    let mut prefix_errors = Vec::new();
    let mut pos = 0usize;
    for block in &blocks {
        if block.is_empty() {
            continue;
        }
        let stride = block.len().div_ceil(8);
        for (i, &k) in block.iter().enumerate() {
            if let Some(term) = coeffs.term(k) {
                let rot = Complex64::from_polar(1.0, TAU * k as f64 / points as f64);
                let mut z = Complex64::from_polar(term.d, term.phi);
                for r in residual.iter_mut() {
                    *r -= z.re;
                    z *= rot;
                }
            }
            pos += 1;
            let boundary = i + 1 == block.len();
            if boundary || (i + 1) % stride == 0 {
                prefix_errors.push(PrefixError { pos, error: sup(&residual) });
            }
        }
    }

    let hypothesis_constant = coeffs
        .terms()
        .map(|t| (t.k as f64).sqrt() * t.d)
        .fold(0.0f64, f64::max);

    let plan = RearrangePlan {
        n_seq: schedule.n_seq.clone(),
        blocks,
        prefix_errors,
        hypothesis_constant,
    };
    Ok((plan, schedule))
}
