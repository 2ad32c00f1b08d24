//! The acceptance gate: one test per criterion, each printing a single
//! PASS/FAIL line with its measured constants before asserting.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines;
//! tolerances and runtime budgets are pinned here and never adjusted to the
//! run at hand.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;
use std::time::Instant;

use trigrearr::corpus::{generate, AmplitudeLaw, CorpusKind, CorpusSpec};
use trigrearr::discrepancy::{
    balance_signs, balanced_ordering, bound_shape, split_terms, DiscrepancyConfig,
};
use trigrearr::poly::vallee_poussin;
use trigrearr::rearrange::{
    build_plan, choose_blocks, vp_round_block, RearrangeConfig, SlackSchedule,
};
use trigrearr::selection::{class_subsum_norm, egyptian_greedy, select_terms, SelectionConfig};
use trigrearr::{
    fourier_coeffs, norm_lower, sup_norm, IndexSet, SampledFunction, TrigPolynomial, TrigTerm,
};

fn report(idx: u32, name: &str, pass: bool, detail: &str) {
    println!("ACCEPTANCE {idx} {name}: {} ({detail})", if pass { "PASS" } else { "FAIL" });
}

fn corpus_poly(n: u32, seed: u64) -> TrigPolynomial {
    let kind = match seed % 4 {
        0 => CorpusKind::RandomPhase(AmplitudeLaw::Constant),
        1 => CorpusKind::RandomPhase(AmplitudeLaw::PowerLaw(0.4)),
        2 => CorpusKind::Fejer,
        _ => CorpusKind::SalemStyle,
    };
    generate(&CorpusSpec { kind, degree: n, seed }).unwrap()
}

fn sup_of(values: &[f64]) -> f64 {
    values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

#[test]
fn criterion_1_egyptian_exactness() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut ok = true;
    for _ in 0..1000 {
        let q = rng.gen_range(1u64..=1_000_000);
        let p = rng.gen_range(1u64..=q);
        let s = rng.gen_range(1u32..=5);
        let alpha = BigRational::new(BigInt::from(p), BigInt::from(q));
        let dec = egyptian_greedy(&alpha, s).unwrap();
        ok &= !dec.truncated && dec.prefix_bounds_hold() && dec.minimality_holds();
    }

    let one = egyptian_greedy(&BigRational::one(), 3).unwrap();
    let dens: Vec<u64> = one.denominators.iter().map(|d| u64::try_from(d).unwrap()).collect();
    ok &= dens == [2, 3, 7];
    ok &= one.final_remainder() == BigRational::new(BigInt::from(1), BigInt::from(42));

    let secs = start.elapsed().as_secs_f64();
    let in_budget = secs < 10.0;
    report(
        1,
        "egyptian-exactness",
        ok && in_budget,
        &format!("1000 rationals exact, alpha=1 -> [2,3,7] rem 1/42, {secs:.1}s"),
    );
    assert!(ok && in_budget);
}

#[test]
fn criterion_2_residue_class_norms() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for seed in 0..100u64 {
        let n = 32 + (seed * 41 % 481) as u32;
        let t = corpus_poly(n, seed);
        let norm = sup_norm(&t, 8).lower;
        for l in 1u64..=8 {
            for j in 0..=l {
                let ratio = class_subsum_norm(&t, l, j, 8) / norm;
                worst = worst.max(ratio);
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = worst <= 2.05 && secs < 120.0;
    report(
        2,
        "residue-class-norms",
        pass,
        &format!("100 polynomials, moduli <= 8, worst |subsum|/|T| = {worst:.4}, {secs:.1}s"),
    );
    assert!(pass);
}

/// Exhaustive minimum discrepancy over all 2^r signings, visiting the
/// patterns in Gray-code order so each step updates one sign.
fn exhaustive_signing(vectors: &[Vec<f64>]) -> f64 {
    let r = vectors.len();
    let dim = vectors[0].len();
    let mut sum = vec![0.0f64; dim];
    for v in vectors {
        for (s, x) in sum.iter_mut().zip(v) {
            *s -= x;
        }
    }
    let mut gray = 0u32;
    let mut best = sup_of(&sum);
    for i in 1u32..1 << r {
        let bit = i.trailing_zeros();
        gray ^= 1 << bit;
        let dir = if gray >> bit & 1 == 1 { 2.0 } else { -2.0 };
        for (s, x) in sum.iter_mut().zip(&vectors[bit as usize]) {
            *s += dir * x;
        }
        best = best.min(sup_of(&sum));
    }
    best
}

#[test]
fn criterion_3_sign_search_quality() {
    let start = Instant::now();
    let instances = 200u64;
    let dim = 24;
    let mut exact = 0u64;
    let mut worst_ratio = 0.0f64;
    for seed in 0..instances {
        let r = 4 + (seed % 13) as usize; // 4..=16
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vectors: Vec<Vec<f64>> =
            (0..r).map(|_| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        let opt = exhaustive_signing(&vectors);

        let config = DiscrepancyConfig { seed, restarts: 80, ..Default::default() };
        let got = balance_signs(&vectors, &config).unwrap().discrepancy;
        if got <= opt + 1e-9 {
            exact += 1;
        }
        worst_ratio = worst_ratio.max(got / opt);
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = exact * 100 >= instances * 95 && worst_ratio <= 1.5 && secs < 120.0;
    report(
        3,
        "sign-search-quality",
        pass,
        &format!(
            "{exact}/{instances} exact vs exhaustive optimum, worst ratio {worst_ratio:.3}, {secs:.1}s"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_4_split_and_ordering_bounds() {
    let start = Instant::now();
    let mut worst_split = 0.0f64;
    let mut worst_order = 0.0f64;
    for seed in 0..50u64 {
        let n = 64 + (seed * 31 % 449) as u32;
        let r = 8 + (seed * 7 % 57) as usize;
        let t = corpus_poly(n, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let mut ks: Vec<u32> = rand::seq::index::sample(&mut rng, n as usize, r)
            .into_iter()
            .map(|i| i as u32 + 1)
            .collect();
        ks.sort_unstable();
        let k = IndexSet::new(n, ks.iter().copied()).unwrap();
        let maxd =
            ks.iter().filter_map(|&i| t.term(i).map(|term| term.d)).fold(0.0f64, f64::max);
        let scale = bound_shape(r, n) * maxd;

        let config = DiscrepancyConfig::with_seed(seed);
        let split = split_terms(&t, &k, &config).unwrap();
        worst_split = worst_split.max(split.deviation / scale);

        let ordering = balanced_ordering(&t, &k, &config).unwrap();
        worst_order = worst_order.max(ordering.max_deviation / scale);
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = worst_split <= 6.0 && worst_order <= 6.0 && secs < 300.0;
    report(
        4,
        "split-and-ordering-bounds",
        pass,
        &format!(
            "50 instances n<=512 r<=64: smallest working constants split {worst_split:.3}, \
             ordering {worst_order:.3} (gate 6), {secs:.1}s"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_5_small_set_chain() {
    let start = Instant::now();
    let mut ok = true;
    let mut worst_shape = 0.0f64;
    for seed in 0..20u64 {
        let r = 1 + (seed % 8) as usize;
        let n = (5 * r as u32) + (seed as u32 * 13) % 64;
        let t = corpus_poly(n, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut ks: Vec<u32> = rand::seq::index::sample(&mut rng, n as usize, r)
            .into_iter()
            .map(|i| i as u32 + 1)
            .collect();
        ks.sort_unstable();
        let maxd =
            ks.iter().filter_map(|&i| t.term(i).map(|term| term.d)).fold(0.0f64, f64::max);

        // A handful of arbitrary orders; the claim is order-free.
        let mut orders: Vec<Vec<u32>> = vec![ks.clone()];
        for _ in 0..5 {
            let mut shuffled = ks.clone();
            for i in (1..shuffled.len()).rev() {
                shuffled.swap(i, rng.gen_range(0..=i));
            }
            orders.push(shuffled);
        }

        let total = TrigPolynomial::from_terms(
            0.0,
            ks.iter().filter_map(|&i| t.term(i)).copied(),
        )
        .unwrap();
        for order in &orders {
            for m in 1..=r {
                let prefix = TrigPolynomial::from_terms(
                    0.0,
                    order[..m].iter().filter_map(|&i| t.term(i)).copied(),
                )
                .unwrap();
                let dev_poly = prefix.add(&total.scale(-(m as f64) / r as f64));
                let dev = norm_lower(&dev_poly, 8);
                // The elementary chain, link by link: triangle inequality,
                // then monotonicity, then the shape factor.
                let link1 = 2.0 * m as f64 * maxd;
                let link2 = 2.0 * r as f64 * maxd;
                let link3 = 4.0 * bound_shape(r, n) * maxd;
                ok &= dev <= link1 + 1e-9 && link1 <= link2 + 1e-9 && link2 <= link3 + 1e-9;
                if maxd > 0.0 {
                    worst_shape = worst_shape.max(dev / (bound_shape(r, n) * maxd));
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = ok && secs < 10.0;
    report(
        5,
        "small-set-chain",
        pass,
        &format!(
            "r<=8, n>=5r: every prefix of every order within the 2m d <= 2r d <= \
             4 sqrt(r log(2n/r)) d chain, worst shape constant {worst_shape:.3}, {secs:.1}s"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_6_selection_sweep() {
    let start = Instant::now();
    let mut worst_implied = 0.0f64;
    let mut sizes_ok = true;
    for &n in &[64u32, 128, 256, 512, 1024, 2048, 4096] {
        for m in [n / 8, n / 4, n / 2, 3 * n / 4] {
            for seed in 0..10u64 {
                let t = generate(&CorpusSpec {
                    kind: CorpusKind::RandomPhase(AmplitudeLaw::Constant),
                    degree: n,
                    seed,
                })
                .unwrap();
                let result = select_terms(&t, m, &SelectionConfig::with_seed(seed)).unwrap();
                sizes_ok &= result.k.len() == m as usize;
                let implied = result.norm_ratio / (n as f64 + 20.0).ln().ln().ln();
                worst_implied = worst_implied.max(implied);
            }
        }
    }

    // Exhaustive n = 16: the selected half vs the best of all C(16,8)
    // subsets, both measured on the same shared grid.
    let n16 = 16u32;
    let t16 = generate(&CorpusSpec {
        kind: CorpusKind::RandomPhase(AmplitudeLaw::Constant),
        degree: n16,
        seed: 0,
    })
    .unwrap();
    let points = 80 * n16 as usize;
    let rows: Vec<Vec<f64>> = t16
        .terms()
        .map(|term| (0..points).map(|j| term.eval(TAU * j as f64 / points as f64)).collect())
        .collect();
    let norm_of_mask = |mask: u32| -> f64 {
        let mut sum = vec![0.0f64; points];
        for (i, row) in rows.iter().enumerate() {
            if mask >> i & 1 == 1 {
                for (s, x) in sum.iter_mut().zip(row) {
                    *s += x;
                }
            }
        }
        sup_of(&sum)
    };
    let mut opt16 = f64::INFINITY;
    for mask in 0u32..1 << 16 {
        if mask.count_ones() == 8 {
            opt16 = opt16.min(norm_of_mask(mask));
        }
    }
    let sel16 = select_terms(&t16, 8, &SelectionConfig::with_seed(0)).unwrap();
    let mut mask16 = 0u32;
    for k in sel16.k.iter() {
        mask16 |= 1 << (k - 1);
    }
    let ratio16 = norm_of_mask(mask16) / opt16;

    let secs = start.elapsed().as_secs_f64();
    let pass = sizes_ok && worst_implied <= 64.0 && ratio16 <= 3.0 && secs < 900.0;
    report(
        6,
        "selection-sweep",
        pass,
        &format!(
            "280 cells |K|=m: {sizes_ok}, worst normRatio/logloglog(n+20) = {worst_implied:.3} \
             (gate 64), exhaustive n=16 ratio {ratio16:.3} (gate 3), {secs:.1}s"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_7_tapered_sum_identity_and_scaling() {
    let start = Instant::now();

    // Exactness on inputs of degree <= m, coefficient by coefficient.
    let mut exact_ok = true;
    for (deg, m, n) in [(8u32, 8u32, 16u32), (5, 7, 9), (12, 12, 20)] {
        let t = corpus_poly(deg, u64::from(deg));
        let v = vallee_poussin(&t, m, n).unwrap();
        exact_ok &= (v.d0() - t.d0()).abs() <= 1e-12;
        exact_ok &= v.num_terms() == t.num_terms();
        for term in t.terms() {
            match v.term(term.k) {
                Some(got) => {
                    exact_ok &= (got.d - term.d).abs() <= 1e-12
                        && (got.phi - term.phi).abs() <= 1e-12;
                }
                None => exact_ok = false,
            }
        }
    }

    // Rounding errors across a block chain, each normalized by the window
    // shape sqrt((n-m)/n * log(2n/(n-m))).
    let degree = 512u32;
    let t = generate(&CorpusSpec {
        kind: CorpusKind::RandomPhase(AmplitudeLaw::PowerLaw(0.6)),
        degree,
        seed: 7,
    })
    .unwrap();
    let f = SampledFunction::from_polynomial(&t, 2048).unwrap();
    let coeffs = fourier_coeffs(&f, f.max_resolvable()).unwrap();
    let config = RearrangeConfig { seed: 7, restarts: 4, ..Default::default() };
    let choice = choose_blocks(&coeffs, &f, 12, &config.slack).unwrap();
    let mut worst_scaled = 0.0f64;
    for l in 0..choice.n_seq.len() - 1 {
        let (m, n) = (choice.n_seq[l], choice.n_seq[l + 1]);
        let (_, err) = vp_round_block(&coeffs, m, n, &config, l as u64).unwrap();
        let gap = (n - m) as f64;
        let shape = (gap / n as f64 * (2.0 * n as f64 / gap).ln()).sqrt();
        worst_scaled = worst_scaled.max(err / shape);
    }

    let secs = start.elapsed().as_secs_f64();
    let pass = exact_ok && worst_scaled <= 6.0 && secs < 120.0;
    report(
        7,
        "tapered-sum-identity-and-scaling",
        pass,
        &format!(
            "degree<=m inputs reproduced to 1e-12: {exact_ok}, worst scaled round error \
             {worst_scaled:.3} (gate 6), {secs:.1}s"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_8_block_plan_trend() {
    let start = Instant::now();
    let degree = 2304u32;
    let t = generate(&CorpusSpec {
        kind: CorpusKind::RandomPhase(AmplitudeLaw::PowerLaw(0.6)),
        degree,
        seed: 11,
    })
    .unwrap();
    let f = SampledFunction::from_polynomial(&t, 5120).unwrap();
    let config = RearrangeConfig {
        seed: 11,
        slack: SlackSchedule::Constant(0.5),
        restarts: 2,
        max_flips: 256,
    };
    let (plan, _schedule) = build_plan(&f, 24, &config).unwrap();

    let reached = *plan.n_seq.last().unwrap();
    let deep_enough = reached >= 2048;

    // Errors at block boundaries only.
    let mut boundary = Vec::new();
    let mut pos = 0usize;
    for block in &plan.blocks {
        pos += block.len();
        if let Some(entry) = plan.prefix_errors.iter().find(|e| e.pos == pos) {
            boundary.push(entry.error);
        }
    }
    let mut monotone = true;
    for w in boundary[2..].windows(2) {
        monotone &= w[1] <= 1.1 * w[0] + 1e-9;
    }
    let first = boundary[0];
    let last = *boundary.last().unwrap();
    let shrinks = last < first / 5.0;

    let secs = start.elapsed().as_secs_f64();
    let pass = deep_enough && monotone && shrinks && secs < 600.0;
    report(
        8,
        "block-plan-trend",
        pass,
        &format!(
            "reached N={reached}, boundary errors {first:.3} -> {last:.3} \
             (need < {:.3}), non-increasing after level 2 (10% slack): {monotone}, {secs:.1}s",
            first / 5.0
        ),
    );
    assert!(pass);
}
