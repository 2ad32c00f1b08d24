//! Shell driver for the rearrangement toolkit: norm estimates, term
//! selection, discrepancy utilities, block rearrangement plans, corpus
//! generation, and a seeded measurement bench.
//!
//! Every command is deterministic given its inputs and `--seed`: repeated
//! runs emit byte-identical files. The bench runs its sweep cells in
//! parallel (capped by `TRIGREARR_THREADS`) and sorts rows before writing,
//! so its output is schedule-independent; wall-clock columns stay zero
//! unless `--timings` opts out of that guarantee.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use trigrearr::corpus::{self, AmplitudeLaw, CorpusKind, CorpusSpec};
use trigrearr::discrepancy::{
    balanced_ordering, bound_shape, round_coefficients, split_terms, DiscrepancyConfig,
};
use trigrearr::rearrange::{build_plan, RearrangeConfig, SlackSchedule};
use trigrearr::selection::{select_terms, SelectionConfig};
use trigrearr::{
    io, sup_norm, Error, Fault, IndexSet, SampledFunction, TrigPolynomial, TrigTerm,
    DEFAULT_REFINE,
};

#[derive(Parser)]
#[command(
    name = "trigrearr",
    version,
    about = "Selection, balancing, and rearrangement of trigonometric sums",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Bracket the uniform norm of a polynomial file
    Norm(NormArgs),
    /// Pick m of the n frequencies so the chosen subsum stays small
    Select(SelectArgs),
    /// Split the terms into two halves with close partial sums
    Split(SplitArgs),
    /// Round the coefficients to integers, keeping the error sum small
    Round(RoundArgs),
    /// Order the terms so every prefix tracks its proportional share
    Order(OrderArgs),
    /// Build a block rearrangement plan from uniform samples
    Rearrange(RearrangeArgs),
    /// Sweep the measurement bench and write one CSV row per cell
    Bench(BenchArgs),
    /// Generate a corpus polynomial, or its samples
    Gen(GenArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct CommonArgs {
    /// Seed for all randomized searches
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output encoding
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Grid refinement factor for norm lower estimates
    #[arg(long, default_value_t = DEFAULT_REFINE)]
    refine: u32,
    /// Independent local-search restarts
    #[arg(long, default_value_t = 16)]
    restarts: u32,
    /// Cap on accepted flips per restart
    #[arg(long, default_value_t = 1024)]
    max_flips: u32,
}

impl CommonArgs {
    fn discrepancy(&self) -> DiscrepancyConfig {
        DiscrepancyConfig {
            seed: self.seed,
            restarts: self.restarts,
            max_flips: self.max_flips,
            ..Default::default()
        }
    }
}

#[derive(Args)]
struct NormArgs {
    /// Polynomial file (.json or .csv)
    file: PathBuf,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct SelectArgs {
    file: PathBuf,
    /// How many terms to keep
    #[arg(short, long)]
    m: u32,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct SplitArgs {
    file: PathBuf,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct RoundArgs {
    file: PathBuf,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct OrderArgs {
    file: PathBuf,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct RearrangeArgs {
    /// Uniform samples of one period, CSV with a `value` header
    file: PathBuf,
    /// Number of block levels to build
    #[arg(long, default_value_t = 8)]
    levels: u32,
    /// Window slack: `harmonic`, `constant:<x>`, or a comma list
    #[arg(long, default_value = "harmonic")]
    slack: String,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenKind {
    /// Uniform random phases under an amplitude law
    Random,
    /// The positive tapered kernel, peak n + 1 at zero
    Fejer,
    /// The oscillatory kernel with all amplitudes 2
    Dirichlet,
    /// Nonincreasing amplitudes 1/(sqrt(k) ln(k + 2)), seeded phases
    Salem,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum, default_value_t = GenKind::Random)]
    kind: GenKind,
    #[arg(long)]
    degree: u32,
    /// Amplitude law for --kind random: `constant`, `pow:<a>`, or a comma list
    #[arg(long, default_value = "constant")]
    amp: String,
    /// Emit this many uniform samples of the polynomial instead of its terms
    #[arg(long)]
    samples: Option<usize>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Select,
    Order,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Select => "select",
            Method::Order => "order",
        }
    }
}

#[derive(Args)]
struct BenchArgs {
    /// Degrees to sweep
    #[arg(long, value_delimiter = ',', default_value = "64,128,256,512,1024,2048,4096")]
    n: Vec<u32>,
    /// Kept fractions m/n to sweep
    #[arg(long = "m-frac", value_delimiter = ',', default_value = "0.125,0.25,0.5,0.75")]
    m_frac: Vec<f64>,
    /// Methods to measure
    #[arg(long, value_enum, value_delimiter = ',', default_value = "select,order")]
    methods: Vec<Method>,
    /// Seeds per cell: seed, seed+1, ...
    #[arg(long, default_value_t = 1)]
    seeds: u64,
    /// First seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cap on the ordered subset size for the order method
    #[arg(long, default_value_t = 64)]
    order_cap: u32,
    /// Record wall-clock times (leaves the byte-determinism guarantee)
    #[arg(long)]
    timings: bool,
    #[arg(long, default_value_t = 16)]
    restarts: u32,
    #[arg(long, default_value_t = 1024)]
    max_flips: u32,
    #[arg(long, default_value_t = DEFAULT_REFINE)]
    refine: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.fault() {
                Fault::Parse => 2,
                Fault::Domain => 3,
                Fault::Budget => 4,
            })
        }
    }
}

fn run(cmd: Cmd) -> Result<(), Error> {
    match cmd {
        Cmd::Norm(a) => {
            let text = cmd_norm(&a)?;
            emit(&a.common.out, &text)
        }
        Cmd::Select(a) => {
            let text = cmd_select(&a)?;
            emit(&a.common.out, &text)
        }
        Cmd::Split(a) => {
            let text = cmd_split(&a)?;
            emit(&a.common.out, &text)
        }
        Cmd::Round(a) => {
            let text = cmd_round(&a)?;
            emit(&a.common.out, &text)
        }
        Cmd::Order(a) => {
            let text = cmd_order(&a)?;
            emit(&a.common.out, &text)
        }
        Cmd::Rearrange(a) => {
            let text = cmd_rearrange(&a)?;
            emit(&a.common.out, &text)
        }
        Cmd::Gen(a) => {
            let text = cmd_gen(&a)?;
            emit(&a.common.out, &text)
        }
        Cmd::Bench(a) => {
            let text = cmd_bench(&a)?;
            emit(&a.out, &text)
        }
    }
}

fn cmd_norm(a: &NormArgs) -> Result<String, Error> {
    let t = read_poly(&a.file)?;
    let est = sup_norm(&t, a.common.refine);
    Ok(match a.common.format {
        Format::Json => json_line(&est),
        Format::Csv => {
            format!("lower,upper,gridSize\n{},{},{}\n", est.lower, est.upper, est.grid_size)
        }
    })
}

fn cmd_select(a: &SelectArgs) -> Result<String, Error> {
    let t = read_poly(&a.file)?;
    let config = SelectionConfig {
        seed: a.common.seed,
        refine: a.common.refine,
        restarts: a.common.restarts,
        max_flips: a.common.max_flips,
    };
    let result = select_terms(&t, a.m, &config)?;
    Ok(match a.common.format {
        Format::Json => json_line(&result),
        Format::Csv => index_csv(result.k.iter()),
    })
}

fn cmd_split(a: &SplitArgs) -> Result<String, Error> {
    let t = read_poly(&a.file)?;
    let k = t.frequency_set();
    let config = a.common.discrepancy();
    let split = split_terms(&t, &k, &config)?;

    #[derive(Serialize)]
    #[serde(rename_all = "camelCase")]
    struct Report<'a> {
        k_plus: &'a IndexSet,
        k_minus: &'a IndexSet,
        deviation: f64,
        bound: f64,
    }
    let maxd = t.terms().map(|term| term.d).fold(0.0f64, f64::max);
    let bound = config.constant_c * bound_shape(k.len(), t.degree()) * maxd;
    Ok(match a.common.format {
        Format::Json => json_line(&Report {
            k_plus: &split.kplus,
            k_minus: &split.kminus,
            deviation: split.deviation,
            bound,
        }),
        Format::Csv => {
            let mut out = String::from("k,side\n");
            for k in split.kplus.iter() {
                out.push_str(&format!("{k},plus\n"));
            }
            for k in split.kminus.iter() {
                out.push_str(&format!("{k},minus\n"));
            }
            out
        }
    })
}

/// Rounds the polynomial's own amplitudes: the terms are read as weights
/// `d_k` on unit cosines, and each weight moves to `floor(d_k)` or
/// `floor(d_k) + 1`.
fn cmd_round(a: &RoundArgs) -> Result<String, Error> {
    let t = read_poly(&a.file)?;
    let k = t.frequency_set();
    let alphas: Vec<f64> = t.terms().map(|term| term.d).collect();
    let unit = TrigPolynomial::from_terms(
        0.0,
        t.terms().map(|term| TrigTerm::new(term.k, 1.0, term.phi)),
    )?;
    let rounding = round_coefficients(&unit, &k, &alphas, &a.common.discrepancy())?;

    #[derive(Serialize)]
    struct Report<'a> {
        k: &'a IndexSet,
        betas: &'a [i64],
        error: f64,
        bound: f64,
    }
    Ok(match a.common.format {
        Format::Json => json_line(&Report {
            k: &k,
            betas: &rounding.betas,
            error: rounding.error,
            bound: rounding.bound,
        }),
        Format::Csv => {
            let mut out = String::from("k,beta\n");
            for (k, beta) in k.iter().zip(&rounding.betas) {
                out.push_str(&format!("{k},{beta}\n"));
            }
            out
        }
    })
}

fn cmd_order(a: &OrderArgs) -> Result<String, Error> {
    let t = read_poly(&a.file)?;
    let k = t.frequency_set();
    let result = balanced_ordering(&t, &k, &a.common.discrepancy())?;
    Ok(match a.common.format {
        Format::Json => json_line(&result),
        Format::Csv => index_csv(result.sigma.iter()),
    })
}

fn cmd_rearrange(a: &RearrangeArgs) -> Result<String, Error> {
    let f = io::samples_from_csv(&read_text(&a.file)?)?;
    let config = RearrangeConfig {
        seed: a.common.seed,
        slack: parse_slack(&a.slack)?,
        restarts: a.common.restarts,
        max_flips: a.common.max_flips,
    };
    let (plan, _schedule) = build_plan(&f, a.levels, &config)?;
    Ok(match a.common.format {
        Format::Json => json_line(&plan),
        Format::Csv => plan.permutation_csv(),
    })
}

fn cmd_gen(a: &GenArgs) -> Result<String, Error> {
    let kind = match a.kind {
        GenKind::Random => CorpusKind::RandomPhase(parse_amp(&a.amp)?),
        GenKind::Fejer => CorpusKind::Fejer,
        GenKind::Dirichlet => CorpusKind::DirichletLike,
        GenKind::Salem => CorpusKind::SalemStyle,
    };
    let spec = CorpusSpec { kind, degree: a.degree, seed: a.common.seed };
    let t = corpus::generate(&spec)?;
    Ok(if let Some(points) = a.samples {
        let f = SampledFunction::from_polynomial(&t, points)?;
        io::samples_to_csv(&f)
    } else {
        match a.common.format {
            Format::Json => io::poly_to_json(&t),
            Format::Csv => io::poly_to_csv(&t),
        }
    })
}

const BENCH_HEADER: &str = "n,m,method,normRatio,bound,impliedConstant,seed,wallTimeMs";

#[derive(PartialEq)]
struct BenchRow {
    n: u32,
    m: u32,
    method: Method,
    norm_ratio: f64,
    bound: f64,
    implied: f64,
    seed: u64,
    wall_ms: u64,
}

impl BenchRow {
    fn key(&self) -> (u32, u32, &'static str, u64) {
        (self.n, self.m, self.method.name(), self.seed)
    }

    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}\n",
            self.n,
            self.m,
            self.method.name(),
            self.norm_ratio,
            self.bound,
            self.implied,
            self.seed,
            self.wall_ms
        )
    }
}

fn cmd_bench(a: &BenchArgs) -> Result<String, Error> {
    if let Ok(threads) = std::env::var("TRIGREARR_THREADS") {
        let threads: usize = threads
            .parse()
            .map_err(|_| Error::Parse(format!("TRIGREARR_THREADS: bad count `{threads}`")))?;
        // Fails only if a global pool already exists, which is fine.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    for &frac in &a.m_frac {
        if !(frac > 0.0 && frac <= 1.0) {
            return Err(Error::Parse(format!("--m-frac entries must lie in (0, 1], got {frac}")));
        }
    }

    let mut cells = Vec::new();
    for &n in &a.n {
        for &frac in &a.m_frac {
            let m = (((frac * n as f64).round() as u32).max(1)).min(n);
            for s in 0..a.seeds {
                for &method in &a.methods {
                    cells.push((n, m, method, a.seed + s));
                }
            }
        }
    }

    let mut rows: Vec<BenchRow> =
        cells.par_iter().map(|&(n, m, method, seed)| bench_cell(a, n, m, method, seed)).collect();
    rows.sort_by(|x, y| x.key().cmp(&y.key()));
    rows.dedup_by(|x, y| x.key() == y.key());

    let mut out = String::from(BENCH_HEADER);
    out.push('\n');
    for row in &rows {
        out.push_str(&row.csv());
    }
    Ok(out)
}

fn bench_cell(a: &BenchArgs, n: u32, m: u32, method: Method, seed: u64) -> BenchRow {
    let start = Instant::now();
    // The order method measures a capped subset; its row reports the size
    // actually ordered.
    let m_used = match method {
        Method::Select => m,
        Method::Order => m.min(a.order_cap),
    };
    let outcome = match method {
        Method::Select => bench_select(a, n, m, seed),
        Method::Order => bench_order(a, n, m_used, seed),
    };
    let wall_ms = if a.timings { start.elapsed().as_millis() as u64 } else { 0 };
    match outcome {
        Ok((norm_ratio, bound)) => BenchRow {
            n,
            m: m_used,
            method,
            norm_ratio,
            bound,
            implied: norm_ratio / log3(n),
            seed,
            wall_ms,
        },
        Err(e) => {
            eprintln!("bench: n={n} m={m_used} {} seed={seed}: {e}", method.name());
            BenchRow {
                n,
                m: m_used,
                method,
                norm_ratio: f64::NAN,
                bound: f64::NAN,
                implied: f64::NAN,
                seed,
                wall_ms,
            }
        }
    }
}

fn bench_corpus(n: u32, seed: u64) -> Result<TrigPolynomial, Error> {
    corpus::generate(&CorpusSpec {
        kind: CorpusKind::RandomPhase(AmplitudeLaw::Constant),
        degree: n,
        seed,
    })
}

/// normRatio = |chosen subsum| / |T|; the bound column carries the
/// triple-log growth factor, so impliedConstant is the measured constant in
/// front of it.
fn bench_select(a: &BenchArgs, n: u32, m: u32, seed: u64) -> Result<(f64, f64), Error> {
    let t = bench_corpus(n, seed)?;
    let config = SelectionConfig {
        seed,
        refine: a.refine,
        restarts: a.restarts,
        max_flips: a.max_flips,
    };
    let result = select_terms(&t, m, &config)?;
    Ok((result.norm_ratio, log3(n)))
}

/// normRatio = maxDeviation / (sqrt(r log(2n/r)) max d); the bound column
/// carries that denominator. Frequencies are spread evenly across [1, n] so
/// the shape factor keeps its meaning at every degree.
fn bench_order(a: &BenchArgs, n: u32, r: u32, seed: u64) -> Result<(f64, f64), Error> {
    let t = bench_corpus(n, seed)?;
    let ks: Vec<u32> =
        (1..=r as u64).map(|i| (i * n as u64).div_ceil(r as u64) as u32).collect();
    let k = IndexSet::new(n, ks)?;
    let config = DiscrepancyConfig {
        seed,
        restarts: a.restarts,
        max_flips: a.max_flips,
        ..Default::default()
    };
    let result = balanced_ordering(&t, &k, &config)?;
    let maxd = k.iter().filter_map(|i| t.term(i).map(|term| term.d)).fold(0.0f64, f64::max);
    let scale = bound_shape(r as usize, n) * maxd;
    Ok((result.max_deviation / scale, scale))
}

/// ln ln ln(n + 20); n + 20 > e^e keeps it positive.
fn log3(n: u32) -> f64 {
    (n as f64 + 20.0).ln().ln().ln()
}

fn parse_slack(s: &str) -> Result<SlackSchedule, Error> {
    if s == "harmonic" {
        return Ok(SlackSchedule::Harmonic);
    }
    if let Some(rest) = s.strip_prefix("constant:") {
        let v: f64 = rest
            .parse()
            .map_err(|_| Error::Parse(format!("--slack constant: bad number `{rest}`")))?;
        return Ok(SlackSchedule::Constant(v));
    }
    let list = parse_f64_list(s, "--slack")?;
    Ok(SlackSchedule::Custom(list))
}

fn parse_amp(s: &str) -> Result<AmplitudeLaw, Error> {
    if s == "constant" {
        return Ok(AmplitudeLaw::Constant);
    }
    if let Some(rest) = s.strip_prefix("pow:") {
        let a: f64 = rest
            .parse()
            .map_err(|_| Error::Parse(format!("--amp pow: bad exponent `{rest}`")))?;
        return Ok(AmplitudeLaw::PowerLaw(a));
    }
    let list = parse_f64_list(s, "--amp")?;
    Ok(AmplitudeLaw::Custom(list))
}

fn parse_f64_list(s: &str, flag: &str) -> Result<Vec<f64>, Error> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("{flag}: bad number `{part}`")))
        })
        .collect()
}

fn read_text(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn read_poly(path: &Path) -> Result<TrigPolynomial, Error> {
    let text = read_text(path)?;
    if path.extension().is_some_and(|ext| ext == "csv") {
        io::poly_from_csv(&text)
    } else {
        io::poly_from_json(&text)
    }
}

fn json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("report types serialize");
    s.push('\n');
    s
}

fn index_csv(iter: impl Iterator<Item = u32>) -> String {
    let mut out = String::from("k\n");
    for k in iter {
        out.push_str(&format!("{k}\n"));
    }
    out
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
