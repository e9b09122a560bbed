//! Command-line front end. [`run`] parses arguments, dispatches to the library and returns
//! the process exit code: 0 success, 1 no solution within budget, 2 usage or input error,
//! 3 infeasible parameters.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::algebraic_decoders::{bw_decode, hamming_decode};
use crate::codes::{dual_multipliers, grs_code, grs_parity_check, hamming_code, LinearCode};
use crate::error::{Error, Result};
use crate::exponents::{emit_curve, tau_grid, Algorithm, ExponentQuery, LogBase, WeightGoal};
use crate::generic_decoders::{
    dumer, isd, prange, wagner, DumerConfig, IsdParams, PrangeConfig, SolveReport, SubDecoder, WagnerConfig, WagnerMode,
};
use crate::gf_linalg::{FieldCtx, FqMatrix, FqVector};
use crate::instances::{
    gen_dp, gen_dp_exact, noisy_to_syndrome, parse_dpi, random_weight_vector, render_dpi, verify, DecodingInstance,
    NoisyCodewordInstance,
};
use crate::randcode_stats::{
    expected_solutions, gv_distance, lhl_bound, lhl_empirical, min_distance_concentration, rational_to_f64, tau_minus,
    tau_plus,
};
use crate::reductions::{lpn_collect, tdm_decoding_instance, LpnOracle, ThreeDmInstance};
use crate::rng::rng_from_seed;

#[derive(Parser, Debug)]
#[command(name = "syndec", version, about = "Syndrome decoding toolkit for random linear codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a decoding instance (.dpi).
    Gen(GenArgs),
    /// Solve a .dpi instance.
    Solve(SolveArgs),
    /// Random-code statistics.
    Stats {
        #[command(subcommand)]
        what: StatsCommand,
    },
    /// Complexity-exponent values or curves as CSV.
    Exponent(ExponentArgs),
    /// Reductions to decoding instances.
    Reduce {
        #[command(subcommand)]
        what: ReduceCommand,
    },
    /// LPN sample collection.
    Lpn {
        #[command(subcommand)]
        what: LpnCommand,
    },
    /// Median-of-5 wall time of a solver on a generated instance.
    Bench(BenchArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum CodeKind {
    Random,
    Grs,
    Hamming,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum, default_value = "random")]
    code: CodeKind,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long = "R")]
    rate: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    /// Redundancy of the Hamming code.
    #[arg(long)]
    r: Option<usize>,
    #[arg(long, default_value_t = 2)]
    q: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Omit the planted error comment line.
    #[arg(long)]
    no_planted: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SolveAlg {
    Prange,
    Dumer,
    Wagner,
    #[value(name = "isd-dumer")]
    IsdDumer,
    #[value(name = "isd-wagner")]
    IsdWagner,
    Bw,
    Hamming,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ModeArg {
    One,
    Amortized,
}

#[derive(Args, Clone, Debug)]
struct SolveArgs {
    #[arg(long, value_enum)]
    alg: SolveAlg,
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long)]
    a: Option<usize>,
    #[arg(long, value_enum, default_value = "one")]
    mode: ModeArg,
    #[arg(long = "list-size")]
    list_size: Option<usize>,
    /// Print every solution found, not just the first.
    #[arg(long)]
    all: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long = "max-iters")]
    max_iters: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum StatsCommand {
    /// Gilbert-Varshamov distance of [n,k]_q.
    Gv {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = 2)]
        q: u32,
    },
    /// Relative GV bounds τ⁻ and τ⁺.
    Tau {
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long = "R")]
        rate: f64,
    },
    /// Expected number of weight-t solutions.
    Expected {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        t: u64,
        #[arg(long, default_value_t = 2)]
        q: u32,
    },
    /// Syndrome statistical distance vs. the left-over hash bound.
    Lhl {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Fraction of random codes whose minimum distance is within ε of the GV distance.
    Mindist {
        #[arg(long)]
        n: usize,
        #[arg(long = "R")]
        rate: f64,
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum BaseArg {
    #[value(name = "2")]
    Two,
    #[value(name = "q")]
    Q,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum GoalArg {
    Auto,
    Short,
    Large,
}

#[derive(Args, Debug)]
struct ExponentArgs {
    /// prange, dumer, isd-dumer, wagner, wagner-amortized, isd-wagner or expected.
    #[arg(long)]
    alg: String,
    #[arg(long, default_value_t = 2)]
    q: u32,
    #[arg(long = "R")]
    rate: f64,
    #[arg(long, conflicts_with = "tau_range")]
    tau: Option<f64>,
    /// lo:hi:step (default 0.001:0.999:0.001).
    #[arg(long = "tau-range")]
    tau_range: Option<String>,
    #[arg(long, value_enum, default_value = "2")]
    base: BaseArg,
    #[arg(long, value_enum, default_value = "auto")]
    goal: GoalArg,
    #[arg(long, default_value_t = crate::exponents::DEFAULT_TOLERANCE)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum ReduceCommand {
    /// 3DM instance file to a binary decoding instance.
    #[command(name = "3dm")]
    ThreeDm {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum LpnCommand {
    /// Collect n LPN samples and write the equivalent syndrome instance.
    Gen {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        tau: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Use the realized error weight as t and record the error (testing only).
        #[arg(long)]
        white_box: bool,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, value_enum)]
    alg: SolveAlg,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    t: usize,
    #[arg(long, default_value_t = 2)]
    q: u64,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long)]
    a: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Failure of a command, carrying its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::IterationBudgetExceeded(_) | Error::NoSolution | Error::DecodingFailure => 1,
            Error::Parse(_) | Error::DimensionMismatch(_) | Error::InvalidInstance(_) => 2,
            _ => 3,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

type CmdResult = std::result::Result<(), Failure>;

/// Runs the CLI with the given arguments (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(&a, out),
        Command::Solve(a) => cmd_solve(&a, out),
        Command::Stats { what } => cmd_stats(&what, out),
        Command::Exponent(a) => cmd_exponent(&a, out),
        Command::Reduce { what: ReduceCommand::ThreeDm { input, out: path } } => cmd_reduce_3dm(&input, &path, out),
        Command::Lpn { what } => cmd_lpn(&what, out),
        Command::Bench(a) => cmd_bench(&a, out),
    };
    match result {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn read_file(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> CmdResult {
    fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

fn field(q: u64) -> std::result::Result<FieldCtx, Failure> {
    FieldCtx::new(q).map_err(|e| usage(e.to_string()))
}

// ---------------------------------------------------------------------------------------------
// gen

fn cmd_gen(a: &GenArgs, out: &mut dyn Write) -> CmdResult {
    let ctx = field(a.q)?;
    let inst = match a.code {
        CodeKind::Random => {
            let n = a.n.ok_or_else(|| usage("--n is required"))?;
            match (a.rate, a.tau, a.k, a.t) {
                (Some(r), Some(tau), None, None) => gen_dp(&ctx, n, r, tau, a.seed)?,
                (None, None, Some(k), Some(t)) => gen_dp_exact(&ctx, n, k, t, a.seed)?,
                _ => return Err(usage("give either --R and --tau or --k and --t")),
            }
        }
        CodeKind::Grs => gen_grs(&ctx, a)?,
        CodeKind::Hamming => {
            let r = a.r.ok_or_else(|| usage("--r is required for --code hamming"))?;
            let code = hamming_code(r)?;
            planted_instance(&code, a.t.unwrap_or(1), a.seed)?
        }
    };
    let inst = if a.no_planted { inst.without_planted() } else { inst };
    write_file(&a.out, &render_dpi(&inst))?;
    let _ = writeln!(out, "RESULT ok=1 n={} k={} t={}", inst.n(), inst.k(), inst.t());
    Ok(())
}

fn planted_instance(code: &LinearCode, t: usize, seed: u64) -> Result<DecodingInstance> {
    let mut rng = rng_from_seed(seed);
    let x = random_weight_vector(code.ctx(), code.n(), t, &mut rng);
    let h = code.parity_check().clone();
    let s = h.mul_vec(&x);
    DecodingInstance::new(h, s, t, Some(x))
}

/// GRS code with points 0, 1, …, n−1 and random nonzero multipliers; t defaults to ⌊(n−k)/2⌋.
fn gen_grs(ctx: &FieldCtx, a: &GenArgs) -> std::result::Result<DecodingInstance, Failure> {
    let n = a.n.ok_or_else(|| usage("--n is required"))?;
    let k = match (a.k, a.rate) {
        (Some(k), _) => k,
        (None, Some(r)) => (r * n as f64 + 1e-9).floor() as usize,
        _ => return Err(usage("--k or --R is required for --code grs")),
    };
    if k == 0 || k >= n {
        return Err(Error::DegenerateParams(format!("k = {k} for n = {n}")).into());
    }
    let mut rng = rng_from_seed(a.seed);
    let x: Vec<u32> = (0..n as u32).collect();
    let z: Vec<u32> = (0..n).map(|_| ctx.random_nonzero(&mut rng)).collect();
    let grs = grs_code(ctx, &x, &z, k)?;
    let t = a.t.unwrap_or((n - k) / 2);
    Ok(planted_instance(&grs.code, t, rand::Rng::gen(&mut rng))?)
}

// ---------------------------------------------------------------------------------------------
// solve

fn default_isd_params(inst: &DecodingInstance, a: &SolveArgs) -> IsdParams {
    let k = inst.k();
    let r = inst.redundancy();
    let p = a.p.unwrap_or(2.min(inst.t())).min(inst.t());
    let sub = match a.alg {
        SolveAlg::IsdWagner => SubDecoder::Wagner { a: a.a.unwrap_or(1) },
        _ => SubDecoder::Dumer { list_size: a.list_size },
    };
    // Default ℓ balances the list size against the collision rate: q^ℓ ≈ √(C(k,p)(q−1)^p).
    let ell = a.ell.unwrap_or_else(|| {
        let q = inst.ctx().q() as f64;
        let lists = 0.5 * (crate::randcode_stats::ln_binomial(k as u64, p as u64) + p as f64 * (q - 1.0).ln());
        ((lists / q.ln()).round() as usize).min(r)
    });
    IsdParams {
        p,
        ell,
        sub,
        seed: a.seed,
        max_iterations: a.max_iters,
        workers: a.workers,
        candidate_cap: crate::generic_decoders::DEFAULT_CANDIDATE_CAP,
    }
}

fn run_solver(inst: &DecodingInstance, a: &SolveArgs) -> Result<SolveReport> {
    match a.alg {
        SolveAlg::Prange => {
            prange(inst, &PrangeConfig { max_iterations: a.max_iters, seed: a.seed, workers: a.workers })
        }
        SolveAlg::Dumer => dumer(
            inst,
            &DumerConfig {
                list_size: a.list_size,
                seed: a.seed,
                max_iterations: a.max_iters,
                workers: a.workers,
                candidate_cap: crate::generic_decoders::DEFAULT_CANDIDATE_CAP,
            },
        ),
        SolveAlg::Wagner => {
            let mode = match a.mode {
                ModeArg::One => WagnerMode::OneSolution,
                ModeArg::Amortized => WagnerMode::Amortized,
            };
            let mut cfg = WagnerConfig::new(a.a.unwrap_or(1), mode, a.seed);
            cfg.max_iterations = a.max_iters;
            cfg.workers = a.workers;
            cfg.list_size = a.list_size;
            wagner(inst, &cfg)
        }
        SolveAlg::IsdDumer | SolveAlg::IsdWagner => isd(inst, &default_isd_params(inst, a)),
        SolveAlg::Bw => algebraic_solve(inst, true),
        SolveAlg::Hamming => algebraic_solve(inst, false),
    }
}

/// Reads x and z off a GRS parity-check matrix (rows z′_j x_j^i) and checks the reconstruction.
fn grs_from_parity_check(inst: &DecodingInstance) -> Result<crate::codes::GrsCode> {
    let h = inst.h();
    let ctx = h.ctx();
    if h.rows() < 2 {
        return Err(Error::NotSupported("GRS recovery needs at least two parity rows".into()));
    }
    let zp: Vec<u32> = h.row(0).to_vec();
    if zp.contains(&0) {
        return Err(Error::NotSupported("not a GRS parity-check matrix".into()));
    }
    let x: Vec<u32> = (0..h.cols()).map(|j| ctx.mul(h.get(1, j), ctx.inv(zp[j]))).collect();
    let z = dual_multipliers(ctx, &x, &zp);
    let grs =
        grs_code(ctx, &x, &z, inst.k()).map_err(|_| Error::NotSupported("not a GRS parity-check matrix".into()))?;
    if &grs_parity_check(&grs) != h {
        return Err(Error::NotSupported("not a GRS parity-check matrix".into()));
    }
    Ok(grs)
}

fn algebraic_solve(inst: &DecodingInstance, grs: bool) -> Result<SolveReport> {
    let start = Instant::now();
    let y = inst.h().solve_linear(inst.s())?;
    let e = if grs {
        let code = grs_from_parity_check(inst)?;
        bw_decode(&code, &y)?.1
    } else {
        let r = inst.redundancy();
        if inst.ctx().q() != 2 || hamming_code(r).map(|c| c.parity_check() != inst.h()).unwrap_or(true) {
            return Err(Error::NotSupported("not a binary Hamming parity-check matrix".into()));
        }
        hamming_decode(r, &y)?.1
    };
    let ok = verify(inst, &e);
    if !ok {
        return Err(Error::DecodingFailure);
    }
    Ok(SolveReport {
        solutions: vec![e],
        iterations: 1,
        accepted: 1,
        candidates: 1,
        sub_decoder_calls: 0,
        elapsed: start.elapsed(),
        success: true,
    })
}

fn cmd_solve(a: &SolveArgs, out: &mut dyn Write) -> CmdResult {
    let inst = parse_dpi(&read_file(&a.instance)?)?;
    match run_solver(&inst, a) {
        Ok(rep) => {
            let sols: Vec<&FqVector> = rep.solutions.iter().filter(|e| verify(&inst, e)).collect();
            if sols.is_empty() {
                let _ = writeln!(out, "RESULT ok=0 iters={} time_ms={}", rep.iterations, rep.elapsed.as_millis());
                return Err(Failure { code: 1, message: "no verified solution".into() });
            }
            let shown = if a.all { sols.len() } else { 1 };
            for e in &sols[..shown] {
                let _ = writeln!(out, "{e}");
            }
            let _ = writeln!(out, "RESULT ok=1 iters={} time_ms={}", rep.iterations, rep.elapsed.as_millis());
            Ok(())
        }
        Err(Error::IterationBudgetExceeded(iters)) => {
            let _ = writeln!(out, "RESULT ok=0 iters={iters} time_ms=0");
            Err(Error::IterationBudgetExceeded(iters).into())
        }
        Err(Error::DecodingFailure) => {
            let _ = writeln!(out, "RESULT ok=0 iters=1 time_ms=0");
            Err(Error::DecodingFailure.into())
        }
        Err(e) => Err(e.into()),
    }
}

// ---------------------------------------------------------------------------------------------
// stats

fn cmd_stats(what: &StatsCommand, out: &mut dyn Write) -> CmdResult {
    match *what {
        StatsCommand::Gv { n, k, q } => {
            let d = gv_distance(n, k, q)?;
            let _ = writeln!(out, "GV {d}");
        }
        StatsCommand::Tau { q, rate } => {
            let lo = tau_minus(q, rate)?;
            let _ = writeln!(out, "TAU_MINUS {lo:.12}");
            match tau_plus(q, rate) {
                Ok(hi) => {
                    let _ = writeln!(out, "TAU_PLUS {hi:.12}");
                }
                Err(_) => {
                    let _ = writeln!(out, "TAU_PLUS undefined");
                }
            }
        }
        StatsCommand::Expected { n, k, t, q } => {
            if k > n || t > n {
                return Err(Error::DegenerateParams(format!("need k, t <= n = {n}")).into());
            }
            let e = expected_solutions(n, k, t, q);
            let _ = writeln!(out, "EXPECTED_EXACT {e}");
            let _ = writeln!(out, "EXPECTED {:.12e}", rational_to_f64(&e));
        }
        StatsCommand::Lhl { n, k, t, q, samples, seed } => {
            let (mean, sigma) = lhl_empirical(n, k, t, q, samples, seed)?;
            let _ = writeln!(out, "DELTA_MEAN {mean:.12e}");
            let _ = writeln!(out, "DELTA_SIGMA {sigma:.12e}");
            let _ = writeln!(out, "LHL_BOUND {:.12e}", lhl_bound(n as u64, k as u64, t as u64, q));
        }
        StatsCommand::Mindist { n, rate, q, eps, samples, seed } => {
            let frac = min_distance_concentration(n, rate, q, eps, samples, seed)?;
            let _ = writeln!(out, "FRACTION_WITHIN {frac:.12}");
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------------------------
// exponent

fn parse_range(s: &str) -> std::result::Result<(f64, f64, f64), Failure> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || usage(format!("bad --tau-range '{s}', expected lo:hi:step"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let v: Vec<f64> =
        parts.iter().map(|p| p.parse::<f64>()).collect::<std::result::Result<_, _>>().map_err(|_| bad())?;
    Ok((v[0], v[1], v[2]))
}

fn cmd_exponent(a: &ExponentArgs, out: &mut dyn Write) -> CmdResult {
    let alg = Algorithm::parse(&a.alg).map_err(|e| usage(e.to_string()))?;
    let taus = match (&a.tau, &a.tau_range) {
        (Some(t), _) => vec![*t],
        (None, Some(r)) => {
            let (lo, hi, step) = parse_range(r)?;
            tau_grid(lo, hi, step)?
        }
        (None, None) => tau_grid(0.001, 0.999, 0.001)?,
    };
    let template = ExponentQuery {
        q: a.q,
        rate: a.rate,
        tau: 0.5,
        base: match a.base {
            BaseArg::Two => LogBase::Two,
            BaseArg::Q => LogBase::Q,
        },
        tolerance: a.tol,
        goal: match a.goal {
            GoalArg::Auto => WeightGoal::Auto,
            GoalArg::Short => WeightGoal::Short,
            GoalArg::Large => WeightGoal::Large,
        },
    };
    let curve = emit_curve(alg, &template, &taus)?;
    let csv = curve.to_csv();
    match &a.out {
        Some(path) => write_file(path, &csv)?,
        None => {
            let _ = write!(out, "{csv}");
        }
    }
    let warnings = curve.points.iter().filter(|p| p.value.warning).count();
    if let (Some(_), [p]) = (a.tau, &curve.points[..]) {
        let _ = writeln!(out, "EXPONENT {:.9}", p.value.value);
    }
    if curve.points.is_empty() {
        let _ = writeln!(out, "RESULT ok=0 points=0 warnings=0");
        return Err(Error::DepthInfeasible("no feasible tau in range".into()).into());
    }
    let _ = writeln!(out, "RESULT ok=1 points={} warnings={warnings}", curve.points.len());
    Ok(())
}

// ---------------------------------------------------------------------------------------------
// reduce / lpn

fn cmd_reduce_3dm(input: &Path, path: &Path, out: &mut dyn Write) -> CmdResult {
    let tdm = ThreeDmInstance::parse(&read_file(input)?)?;
    let inst = tdm_decoding_instance(&tdm)?;
    write_file(path, &render_dpi(&inst))?;
    let _ = writeln!(out, "RESULT ok=1 rows={} n={} t={}", inst.redundancy(), inst.n(), inst.t());
    Ok(())
}

/// Syndrome form of an LPN sample set; a rank-deficient G is replaced by a row basis.
fn lpn_syndrome_instance(inst: &NoisyCodewordInstance) -> Result<DecodingInstance> {
    let basis = inst.g.row_basis();
    if basis.rows() == inst.g.rows() {
        return noisy_to_syndrome(inst);
    }
    if basis.rows() == 0 {
        let h = FqMatrix::identity(inst.g.ctx(), inst.g.cols());
        return DecodingInstance::new(h, inst.y.clone(), inst.t, inst.planted_error.clone());
    }
    noisy_to_syndrome(&NoisyCodewordInstance { g: basis, ..inst.clone() })
}

fn cmd_lpn(what: &LpnCommand, out: &mut dyn Write) -> CmdResult {
    let LpnCommand::Gen { k, tau, n, seed, white_box, out: path } = what;
    let mut oracle = LpnOracle::new(*k, *tau, *seed)?;
    if *white_box {
        oracle = oracle.with_white_box();
    }
    let noisy = lpn_collect(&mut oracle, *n)?;
    let inst = lpn_syndrome_instance(&noisy)?;
    write_file(path, &render_dpi(&inst))?;
    let _ = writeln!(out, "RESULT ok=1 n={} k={} t={}", inst.n(), inst.k(), inst.t());
    Ok(())
}

// ---------------------------------------------------------------------------------------------
// bench

fn cmd_bench(a: &BenchArgs, out: &mut dyn Write) -> CmdResult {
    let ctx = field(a.q)?;
    let inst = gen_dp_exact(&ctx, a.n, a.k, a.t, a.seed)?;
    let args = SolveArgs {
        alg: a.alg,
        instance: PathBuf::new(),
        p: a.p,
        ell: a.ell,
        a: a.a,
        mode: ModeArg::One,
        list_size: None,
        all: false,
        seed: 0,
        workers: 1,
        max_iters: None,
    };
    let mut times = Vec::with_capacity(5);
    let mut iters = Vec::with_capacity(5);
    let mut solved = 0;
    for run in 0..5u64 {
        let start = Instant::now();
        let rep = run_solver(&inst, &SolveArgs { seed: a.seed.wrapping_add(run), ..args.clone() });
        times.push(start.elapsed().as_secs_f64() * 1e3);
        match rep {
            Ok(r) => {
                solved += usize::from(r.solutions.iter().all(|e| verify(&inst, e)) && !r.solutions.is_empty());
                iters.push(r.iterations);
            }
            Err(Error::IterationBudgetExceeded(i)) => iters.push(i),
            Err(e) => return Err(e.into()),
        }
        let _ = writeln!(out, "RUN {run} iters={} time_ms={:.3}", iters[run as usize], times[run as usize]);
    }
    times.sort_by(f64::total_cmp);
    let _ = writeln!(out, "RESULT ok={solved}/5 median_ms={:.3}", times[2]);
    if solved == 5 {
        Ok(())
    } else {
        Err(Failure { code: 1, message: format!("{solved} of 5 runs solved") })
    }
}
