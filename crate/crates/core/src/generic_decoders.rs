//! Generic syndrome decoders: Prange, Dumer, Wagner (generalized birthday) and the
//! information-set-decoding framework that runs Dumer or Wagner on a punctured code.
//!
//! All collision searches share one sort-merge join: list entries carry a syndrome and
//! a sparse error; the join key packs as many leading window symbols as fit in a `u64`
//! and the remaining window symbols are compared before a pair is emitted.

use std::collections::HashSet;
use std::ops::Range;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::codes::complement;
use crate::enumerate::{columns_at, for_each_weight_vector};
use crate::error::{Error, Result};
use crate::gf_linalg::{FieldCtx, FqMatrix, FqVector};
use crate::instances::{random_weight_vector, verify, DecodingInstance};
use crate::randcode_stats::ln_binomial;
use crate::rng::{random_subset, rng_stream, SeededRng};

pub const DEFAULT_CANDIDATE_CAP: usize = 1 << 20;
const SINGULAR_STREAK: usize = 64;
const MAX_DEFAULT_ITERATIONS: u64 = 1_000_000_000;

#[derive(Clone, Debug, Default)]
pub struct SolveReport {
    pub solutions: Vec<FqVector>,
    pub iterations: u64,
    pub sub_decoder_calls: u64,
    pub candidates: u64,
    pub accepted: u64,
    pub elapsed: Duration,
    pub success: bool,
}

/// What one iteration of a solver produced.
#[derive(Clone, Debug, Default)]
pub struct IterationOutcome {
    pub solutions: Vec<FqVector>,
    pub sub_decoder_calls: u64,
    pub candidates: u64,
    pub accepted: u64,
}

/// Runs `step` until it yields a solution or the budget is spent. With `workers > 1`
/// every worker draws from its own stream `(seed, index)` and the first success stops the rest.
fn drive<F>(workers: usize, seed: u64, max_iterations: u64, step: F) -> Result<SolveReport>
where
    F: Fn(&mut SeededRng) -> Result<IterationOutcome> + Sync,
{
    let start = Instant::now();
    let workers = workers.max(1);
    let stop = AtomicBool::new(false);
    let iterations = AtomicU64::new(0);
    let winner: Mutex<Option<(IterationOutcome, u64)>> = Mutex::new(None);
    let failure: Mutex<Option<Error>> = Mutex::new(None);
    let totals = Mutex::new((0u64, 0u64, 0u64));

    let work = |index: usize| {
        let mut rng = rng_stream(seed, index as u64);
        let budget = max_iterations / workers as u64 + u64::from((index as u64) < max_iterations % workers as u64);
        for _ in 0..budget {
            if stop.load(Ordering::Relaxed) {
                return;
            }
            let outcome = match step(&mut rng) {
                Ok(o) => o,
                Err(e) => {
                    failure.lock().unwrap().get_or_insert(e);
                    stop.store(true, Ordering::Relaxed);
                    return;
                }
            };
            let done = iterations.fetch_add(1, Ordering::Relaxed) + 1;
            {
                let mut t = totals.lock().unwrap();
                t.0 += outcome.sub_decoder_calls;
                t.1 += outcome.candidates;
                t.2 += outcome.accepted;
            }
            if !outcome.solutions.is_empty() {
                let mut w = winner.lock().unwrap();
                if w.is_none() {
                    *w = Some((outcome, done));
                }
                stop.store(true, Ordering::Relaxed);
                return;
            }
        }
    };

    if workers == 1 {
        work(0);
    } else {
        std::thread::scope(|scope| {
            for index in 0..workers {
                let work = &work;
                scope.spawn(move || work(index));
            }
        });
    }

    let (sub, cand, acc) = *totals.lock().unwrap();
    let winner = winner.into_inner().unwrap();
    if let Some((outcome, at)) = winner {
        let mut solutions = outcome.solutions;
        solutions.sort();
        solutions.dedup();
        return Ok(SolveReport {
            solutions,
            iterations: if workers == 1 { at } else { iterations.load(Ordering::Relaxed) },
            sub_decoder_calls: sub,
            candidates: cand,
            accepted: acc,
            elapsed: start.elapsed(),
            success: true,
        });
    }
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    Err(Error::IterationBudgetExceeded(iterations.load(Ordering::Relaxed)))
}

fn default_budget(p_success: f64) -> u64 {
    if p_success.is_nan() || p_success <= 0.0 {
        return MAX_DEFAULT_ITERATIONS;
    }
    let inv = (1.0 / p_success.min(1.0)).ceil();
    (1000.0 * inv).min(MAX_DEFAULT_ITERATIONS as f64) as u64
}

fn ln_sphere(n: usize, t: usize, q: u32) -> f64 {
    ln_binomial(n as u64, t as u64) + t as f64 * (q as f64 - 1.0).ln()
}

/// Draws column sets until `H` restricted to the complement admits the block elimination.
/// Returns `(J, J̄, S, S H)` with `(S H)[:, J̄] = (I ; 0)`.
fn draw_eliminated<R: Rng + ?Sized>(
    h: &FqMatrix,
    size: usize,
    rng: &mut R,
) -> Result<(Vec<usize>, Vec<usize>, FqMatrix, FqMatrix)> {
    let n = h.cols();
    for _ in 0..SINGULAR_STREAK {
        let j = random_subset(rng, n, size);
        let jbar = complement(n, &j);
        if let Some((s, sh)) = h.eliminate_on_columns(&jbar) {
            return Ok((j, jbar, s, sh));
        }
    }
    Err(Error::SingularStreak)
}

// ---------------------------------------------------------------------------------------------
// Prange

#[derive(Clone, Debug)]
pub struct PrangeConfig {
    pub max_iterations: Option<u64>,
    pub seed: u64,
    pub workers: usize,
}

impl PrangeConfig {
    pub fn with_seed(seed: u64) -> Self {
        PrangeConfig { max_iterations: None, seed, workers: 1 }
    }
}

/// Weight j of the information-set part drawn from D_t.
pub fn prange_weight_class(n: usize, k: usize, t: usize, q: u32) -> usize {
    let b = (q as usize - 1) * (n - k) / q as usize;
    if t < b {
        0
    } else {
        (t - b).min(k)
    }
}

/// C(n−k,t−j)(q−1)^{t−j} / min(q^{n−k}, C(n,t)(q−1)^t).
pub fn prange_success_estimate(n: usize, k: usize, t: usize, q: u32) -> f64 {
    let j = prange_weight_class(n, k, t, q);
    if t - j > n - k {
        return 0.0;
    }
    let num = ln_sphere(n - k, t - j, q);
    let den = ((n - k) as f64 * (q as f64).ln()).min(ln_sphere(n, t, q));
    (num - den).exp().min(1.0)
}

/// One Prange candidate (before the weight test). `e Hᵀ = s` holds by construction.
pub fn prange_candidate<R: Rng + ?Sized>(inst: &DecodingInstance, j: usize, rng: &mut R) -> Result<FqVector> {
    let ctx = inst.ctx();
    let (n, r) = (inst.n(), inst.redundancy());
    if r > n {
        return Err(Error::NotSupported("parity-check matrix has more rows than columns".into()));
    }
    let (i_set, ibar, s_mat, sh) = draw_eliminated(inst.h(), n - r, rng)?;
    let x = random_weight_vector(ctx, i_set.len(), j, rng);
    let ss = s_mat.mul_vec(inst.s());
    let mut e = vec![0u32; n];
    for (pos, &c) in i_set.iter().enumerate() {
        e[c] = x.get(pos);
    }
    let support: Vec<(usize, u32)> =
        i_set.iter().zip(x.entries()).filter(|(_, &v)| v != 0).map(|(&c, &v)| (c, v)).collect();
    for (row, &c) in ibar.iter().enumerate() {
        let acc = support.iter().fold(0u32, |acc, &(col, v)| ctx.add(acc, ctx.mul(sh.get(row, col), v)));
        e[c] = ctx.sub(ss.get(row), acc);
    }
    FqVector::new(ctx, e)
}

pub fn prange(inst: &DecodingInstance, cfg: &PrangeConfig) -> Result<SolveReport> {
    let (n, k, t, q) = (inst.n(), inst.k(), inst.t(), inst.ctx().q());
    let j = prange_weight_class(n, k, t, q);
    let budget = cfg.max_iterations.unwrap_or_else(|| default_budget(prange_success_estimate(n, k, t, q)));
    drive(cfg.workers, cfg.seed, budget, |rng| {
        let e = prange_candidate(inst, j, rng)?;
        let mut out = IterationOutcome { candidates: 1, ..Default::default() };
        if verify(inst, &e) {
            out.accepted = 1;
            out.solutions.push(e);
        }
        Ok(out)
    })
}

/// Runs exactly `iterations` Prange iterations and counts those whose candidate has weight t.
pub fn prange_trials(inst: &DecodingInstance, iterations: u64, seed: u64) -> Result<u64> {
    let (n, k, t, q) = (inst.n(), inst.k(), inst.t(), inst.ctx().q());
    let j = prange_weight_class(n, k, t, q);
    let mut rng = rng_stream(seed, 0);
    let mut hits = 0;
    for _ in 0..iterations {
        if verify(inst, &prange_candidate(inst, j, &mut rng)?) {
            hits += 1;
        }
    }
    Ok(hits)
}

// ---------------------------------------------------------------------------------------------
// Collision lists

/// Sparse error as (column index in the sub-matrix, value).
type Sparse = Vec<(u32, u32)>;

#[derive(Clone, Debug)]
struct Entry {
    syn: Vec<u32>,
    err: Sparse,
}

/// Packs the leading symbols of a window into one machine word.
struct KeyPacker {
    q: u64,
    symbols: usize,
}

impl KeyPacker {
    fn new(q: u32, window: usize) -> Self {
        let mut symbols = 0;
        let mut acc: u128 = 1;
        while symbols < window && acc * q as u128 <= 1u128 << 63 {
            acc *= q as u128;
            symbols += 1;
        }
        KeyPacker { q: q as u64, symbols }
    }

    fn pack(&self, syms: impl Iterator<Item = u32>) -> u64 {
        syms.take(self.symbols).fold(0u64, |acc, s| acc * self.q + s as u64)
    }
}

fn capacity(len: usize, w: usize, q: u32) -> f64 {
    if w > len {
        return 0.0;
    }
    ln_sphere(len, w, q).exp()
}

/// Weight-`w` vectors on `positions` of `m` with their syndromes, minus `fold` when given.
/// `size = None` (or a size at least the capacity) enumerates everything; otherwise a
/// uniformly random set of `size` distinct vectors is drawn.
fn build_list<R: Rng + ?Sized>(
    ctx: &FieldCtx,
    m: &FqMatrix,
    positions: &[usize],
    w: usize,
    size: Option<usize>,
    fold: Option<&[u32]>,
    rng: &mut R,
) -> Vec<Entry> {
    let rows = m.rows();
    let cap = capacity(positions.len(), w, ctx.q());
    let finish = |mut syn: Vec<u32>| {
        if let Some(s) = fold {
            for (x, &y) in syn.iter_mut().zip(s) {
                *x = ctx.sub(*x, y);
            }
        }
        syn
    };
    let cols = columns_at(m, positions);
    let enumerate_all = |out: &mut Vec<Entry>| {
        for_each_weight_vector(ctx, &cols, rows, w, |idx, vals, syn| {
            let err = idx.iter().zip(vals).map(|(&i, &v)| (positions[i] as u32, v)).collect();
            out.push(Entry { syn: finish(syn.to_vec()), err });
        });
    };
    match size {
        Some(l) if (l as f64) < cap => {
            if (l as f64) * 2.0 > cap {
                let mut all = Vec::new();
                enumerate_all(&mut all);
                let (chosen, _) = all.partial_shuffle(rng, l);
                return chosen.to_vec();
            }
            let mut seen: HashSet<Sparse> = HashSet::with_capacity(l);
            let mut out = Vec::with_capacity(l);
            while out.len() < l {
                let mut idx = sample(rng, positions.len(), w).into_vec();
                idx.sort_unstable();
                let err: Sparse = idx.iter().map(|&i| (positions[i] as u32, ctx.random_nonzero(rng))).collect();
                if !seen.insert(err.clone()) {
                    continue;
                }
                let mut syn = vec![0u32; rows];
                for &(c, v) in &err {
                    for (r, s) in syn.iter_mut().enumerate() {
                        *s = ctx.add(*s, ctx.mul(v, m.get(r, c as usize)));
                    }
                }
                out.push(Entry { syn: finish(syn), err });
            }
            out
        }
        _ => {
            let mut out = Vec::new();
            enumerate_all(&mut out);
            out
        }
    }
}

/// All pairs with `a.syn + b.syn ≡ 0` on `window`, up to `cap` outputs.
fn merge(ctx: &FieldCtx, a: &[Entry], b: &[Entry], window: Range<usize>, cap: usize) -> Vec<Entry> {
    let packer = KeyPacker::new(ctx.q(), window.len());
    let mut ka: Vec<(u64, usize)> =
        a.iter().enumerate().map(|(i, e)| (packer.pack(e.syn[window.clone()].iter().copied()), i)).collect();
    let mut kb: Vec<(u64, usize)> = b
        .iter()
        .enumerate()
        .map(|(i, e)| (packer.pack(e.syn[window.clone()].iter().map(|&x| ctx.neg(x))), i))
        .collect();
    ka.sort_unstable();
    kb.sort_unstable();
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < ka.len() && j < kb.len() {
        match ka[i].0.cmp(&kb[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                let key = ka[i].0;
                let i_end = ka[i..].iter().position(|x| x.0 != key).map_or(ka.len(), |p| i + p);
                let j_end = kb[j..].iter().position(|x| x.0 != key).map_or(kb.len(), |p| j + p);
                for &(_, ia) in &ka[i..i_end] {
                    for &(_, ib) in &kb[j..j_end] {
                        let (ea, eb) = (&a[ia], &b[ib]);
                        if window.clone().any(|r| ctx.add(ea.syn[r], eb.syn[r]) != 0) {
                            continue;
                        }
                        let syn = ea.syn.iter().zip(&eb.syn).map(|(&x, &y)| ctx.add(x, y)).collect();
                        let mut err = ea.err.clone();
                        err.extend_from_slice(&eb.err);
                        out.push(Entry { syn, err });
                        if out.len() >= cap {
                            return out;
                        }
                    }
                }
                i = i_end;
                j = j_end;
            }
        }
    }
    out
}

fn dense(ctx: &FieldCtx, len: usize, err: &[(u32, u32)]) -> FqVector {
    let mut e = vec![0u32; len];
    for &(c, v) in err {
        e[c as usize] = v;
    }
    FqVector::new(ctx, e).expect("residues in range")
}

// ---------------------------------------------------------------------------------------------
// Dumer

#[derive(Clone, Debug)]
pub struct DumerConfig {
    pub list_size: Option<usize>,
    pub seed: u64,
    pub max_iterations: Option<u64>,
    pub workers: usize,
    pub candidate_cap: usize,
}

impl DumerConfig {
    pub fn with_seed(seed: u64) -> Self {
        DumerConfig { list_size: None, seed, max_iterations: None, workers: 1, candidate_cap: DEFAULT_CANDIDATE_CAP }
    }
}

/// Solutions of `M eᵀ = target`, `|e| = w`, with ⌊w/2⌋ nonzeros on `split` and ⌈w/2⌉ on the rest.
#[allow(clippy::too_many_arguments)]
fn dumer_core<R: Rng + ?Sized>(
    ctx: &FieldCtx,
    m: &FqMatrix,
    target: &[u32],
    w: usize,
    split: &[usize],
    list_size: Option<usize>,
    cap: usize,
    rng: &mut R,
) -> Vec<Sparse> {
    let rest = complement(m.cols(), split);
    let (w1, w2) = (w / 2, w - w / 2);
    let l1 = build_list(ctx, m, split, w1, list_size, None, rng);
    let l2 = build_list(ctx, m, &rest, w2, list_size, Some(target), rng);
    merge(ctx, &l1, &l2, 0..m.rows(), cap).into_iter().map(|e| e.err).collect()
}

fn check_dumer_list_size(len: usize, w: usize, q: u32, list_size: Option<usize>) -> Result<()> {
    if let Some(l) = list_size {
        let cap = capacity(len / 2, w / 2, q);
        if l as f64 > cap * (1.0 + 1e-9) {
            return Err(Error::DomainError(format!("list size {l} exceeds the {cap:.0} available vectors")));
        }
    }
    Ok(())
}

/// One Dumer iteration with the given split set; returns every solution it finds.
pub fn dumer_split<R: Rng + ?Sized>(
    inst: &DecodingInstance,
    split: &[usize],
    list_size: Option<usize>,
    rng: &mut R,
) -> Vec<FqVector> {
    let found =
        dumer_core(inst.ctx(), inst.h(), inst.s().entries(), inst.t(), split, list_size, DEFAULT_CANDIDATE_CAP, rng);
    let mut sols: Vec<FqVector> =
        found.iter().map(|err| dense(inst.ctx(), inst.n(), err)).filter(|e| verify(inst, e)).collect();
    sols.sort();
    sols
}

/// Dumer with a fresh random half split per iteration, retried until some solution appears.
pub fn dumer(inst: &DecodingInstance, cfg: &DumerConfig) -> Result<SolveReport> {
    let (n, t, q) = (inst.n(), inst.t(), inst.ctx().q());
    check_dumer_list_size(n, t, q, cfg.list_size)?;
    let budget = cfg.max_iterations.unwrap_or_else(|| {
        let (w1, w2) = (t / 2, t - t / 2);
        let shape = (ln_binomial(t as u64, w1 as u64) + ln_binomial((n - t) as u64, (n / 2 - w1) as u64)
            - ln_binomial(n as u64, (n / 2) as u64))
        .exp();
        let l_full = capacity(n / 2, w1, q).max(1.0);
        let keep = cfg.list_size.map_or(1.0, |l| (l as f64 / l_full).min(1.0))
            * cfg.list_size.map_or(1.0, |l| (l as f64 / capacity(n - n / 2, w2, q).max(1.0)).min(1.0));
        default_budget(shape * keep)
    });
    drive(cfg.workers, cfg.seed, budget, |rng| {
        let split = random_subset(rng, n, n / 2);
        let found =
            dumer_core(inst.ctx(), inst.h(), inst.s().entries(), t, &split, cfg.list_size, cfg.candidate_cap, rng);
        let mut out = IterationOutcome { candidates: found.len() as u64, ..Default::default() };
        for err in found {
            let e = dense(inst.ctx(), n, &err);
            if verify(inst, &e) {
                out.solutions.push(e);
            }
        }
        out.accepted = out.solutions.len() as u64;
        Ok(out)
    })
}

// ---------------------------------------------------------------------------------------------
// Wagner

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WagnerMode {
    OneSolution,
    Amortized,
}

#[derive(Clone, Debug)]
pub struct WagnerConfig {
    pub a: usize,
    pub mode: WagnerMode,
    pub seed: u64,
    pub max_iterations: Option<u64>,
    pub workers: usize,
    /// Overrides the base list size q^ℓ; sizes above a branch's capacity mean the full list.
    pub list_size: Option<usize>,
    pub candidate_cap: usize,
}

impl WagnerConfig {
    pub fn new(a: usize, mode: WagnerMode, seed: u64) -> Self {
        WagnerConfig {
            a,
            mode,
            seed,
            max_iterations: None,
            workers: 1,
            list_size: None,
            candidate_cap: DEFAULT_CANDIDATE_CAP,
        }
    }
}

/// Result of one Wagner tree: solutions and the list sizes after every level
/// (level 0 = base lists, last = final list).
#[derive(Clone, Debug)]
pub struct WagnerRun {
    pub solutions: Vec<FqVector>,
    pub level_sizes: Vec<Vec<usize>>,
    pub ell: usize,
    pub list_size: usize,
}

/// Merge window size ℓ = ⌈r/(a+1)⌉ (one solution) or ⌈r/a⌉ (amortized).
pub fn wagner_ell(r: usize, a: usize, mode: WagnerMode) -> usize {
    let d = match mode {
        WagnerMode::OneSolution => a + 1,
        WagnerMode::Amortized => a,
    };
    r.div_ceil(d)
}

/// Part sizes and weights for a 2^a split: remainders go to the first parts/branches.
fn wagner_shape(len: usize, w: usize, a: usize) -> (Vec<usize>, Vec<usize>) {
    let parts = 1usize << a;
    let sizes = (0..parts).map(|i| len / parts + usize::from(i < len % parts)).collect();
    let weights = (0..parts).map(|i| w / parts + usize::from(i < w % parts)).collect();
    (sizes, weights)
}

/// Checks q^ℓ ≤ C(len/2^a, w/2^a)(q−1)^{w/2^a} for every branch.
fn wagner_feasible(len: usize, w: usize, a: usize, ell: usize, q: u32) -> Result<()> {
    wagner_capacity_check(len, w, a, ell as f64 * (q as f64).ln(), &format!("q^ell = {q}^{ell}"), q)
}

/// Checks that a list of size e^{need} fits every branch of a depth-a tree.
fn wagner_capacity_check(len: usize, w: usize, a: usize, need: f64, what: &str, q: u32) -> Result<()> {
    if a == 0 || a > 20 || (1usize << a) > len.max(1) {
        return Err(Error::DepthInfeasible(format!("depth a = {a} for length {len}")));
    }
    let (sizes, weights) = wagner_shape(len, w, a);
    for (&s, &wi) in sizes.iter().zip(&weights) {
        let have = if wi > s { f64::NEG_INFINITY } else { ln_sphere(s, wi, q) };
        if need > have + 1e-9 {
            return Err(Error::DepthInfeasible(format!("{what} exceeds C({s},{wi})(q-1)^{wi} = {:.0}", have.exp())));
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn wagner_core<R: Rng + ?Sized>(
    ctx: &FieldCtx,
    m: &FqMatrix,
    target: &[u32],
    w: usize,
    a: usize,
    ell: usize,
    list_size: usize,
    cap: usize,
    rng: &mut R,
) -> (Vec<Sparse>, Vec<Vec<usize>>) {
    let (len, r) = (m.cols(), m.rows());
    let parts = 1usize << a;
    let (sizes, weights) = wagner_shape(len, w, a);
    let mut perm: Vec<usize> = (0..len).collect();
    perm.shuffle(rng);
    let mut lists = Vec::with_capacity(parts);
    let mut offset = 0;
    for i in 0..parts {
        let positions = &perm[offset..offset + sizes[i]];
        offset += sizes[i];
        let fold = (i == parts - 1).then_some(target);
        lists.push(build_list(ctx, m, positions, weights[i], Some(list_size), fold, rng));
    }
    let mut levels = vec![lists.iter().map(Vec::len).collect::<Vec<_>>()];
    for level in 1..=a {
        let window = if level < a { r.saturating_sub(level * ell)..r.saturating_sub((level - 1) * ell) } else { 0..r };
        lists = lists.chunks(2).map(|pair| merge(ctx, &pair[0], &pair[1], window.clone(), cap)).collect();
        levels.push(lists.iter().map(Vec::len).collect());
    }
    let out = lists.pop().unwrap_or_default().into_iter().map(|e| e.err).collect();
    (out, levels)
}

/// Depth constraint for the default list size q^ℓ; an explicit size only needs a valid depth.
fn check_wagner_config(n: usize, t: usize, ell: usize, q: u32, cfg: &WagnerConfig) -> Result<()> {
    match cfg.list_size {
        None => wagner_feasible(n, t, cfg.a, ell, q),
        Some(_) => wagner_capacity_check(n, t, cfg.a, f64::NEG_INFINITY, "", q),
    }
}

/// One Wagner tree on the instance (fresh random partition drawn from `rng`).
pub fn wagner_run<R: Rng + ?Sized>(inst: &DecodingInstance, cfg: &WagnerConfig, rng: &mut R) -> Result<WagnerRun> {
    let (n, r, t, q) = (inst.n(), inst.redundancy(), inst.t(), inst.ctx().q());
    let ell = wagner_ell(r, cfg.a, cfg.mode);
    check_wagner_config(n, t, ell, q, cfg)?;
    let list_size = match cfg.list_size {
        Some(l) => l,
        None => (q as f64).powi(ell as i32).round() as usize,
    };
    let (found, level_sizes) =
        wagner_core(inst.ctx(), inst.h(), inst.s().entries(), t, cfg.a, ell, list_size, cfg.candidate_cap, rng);
    let mut solutions: Vec<FqVector> = found.iter().map(|err| dense(inst.ctx(), n, err)).collect();
    solutions.sort();
    Ok(WagnerRun { solutions, level_sizes, ell, list_size })
}

/// Wagner's algorithm, repeated with fresh partitions until a run produces output.
pub fn wagner(inst: &DecodingInstance, cfg: &WagnerConfig) -> Result<SolveReport> {
    let (r, q) = (inst.redundancy(), inst.ctx().q());
    let ell = wagner_ell(r, cfg.a, cfg.mode);
    check_wagner_config(inst.n(), inst.t(), ell, q, cfg)?;
    let budget = cfg.max_iterations.unwrap_or(10_000);
    drive(cfg.workers, cfg.seed, budget, |rng| {
        let run = wagner_run(inst, cfg, rng)?;
        let mut out = IterationOutcome { candidates: run.solutions.len() as u64, ..Default::default() };
        out.solutions = run.solutions.into_iter().filter(|e| verify(inst, e)).collect();
        out.accepted = out.solutions.len() as u64;
        Ok(out)
    })
}

// ---------------------------------------------------------------------------------------------
// ISD framework

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubDecoder {
    Dumer { list_size: Option<usize> },
    Wagner { a: usize },
}

#[derive(Clone, Debug)]
pub struct IsdParams {
    pub p: usize,
    pub ell: usize,
    pub sub: SubDecoder,
    pub seed: u64,
    pub max_iterations: Option<u64>,
    pub workers: usize,
    pub candidate_cap: usize,
}

impl IsdParams {
    pub fn new(p: usize, ell: usize, sub: SubDecoder, seed: u64) -> Self {
        IsdParams { p, ell, sub, seed, max_iterations: None, workers: 1, candidate_cap: DEFAULT_CANDIDATE_CAP }
    }
}

/// α_{p,ℓ} = C(n−k−ℓ,t−p)(q−1)^{t−p} / min(q^{n−k−ℓ}, C(n,t)(q−1)^t q^{−ℓ}).
pub fn isd_alpha(n: usize, k: usize, t: usize, q: u32, p: usize, ell: usize) -> f64 {
    if p > t || t - p > n - k - ell {
        return 0.0;
    }
    let lq = (q as f64).ln();
    let num = ln_sphere(n - k - ell, t - p, q);
    let den = ((n - k - ell) as f64 * lq).min(ln_sphere(n, t, q) - ell as f64 * lq);
    (num - den).exp()
}

/// Validates the parameter invariants for an instance with redundancy r and dimension k.
pub fn check_isd_params(n: usize, k: usize, t: usize, q: u32, params: &IsdParams) -> Result<()> {
    let r = n - k;
    if params.ell > r {
        return Err(Error::DomainError(format!("ell = {} exceeds n - k = {r}", params.ell)));
    }
    if params.p > t.min(k + params.ell) {
        return Err(Error::DomainError(format!("p = {} exceeds min(t, k + ell)", params.p)));
    }
    match params.sub {
        SubDecoder::Dumer { list_size } => check_dumer_list_size(k + params.ell, params.p, q, list_size),
        SubDecoder::Wagner { a } => {
            wagner_feasible(k + params.ell, params.p, a, wagner_ell(params.ell, a, WagnerMode::Amortized), q)
        }
    }
}

fn expected_sub_candidates(k: usize, q: u32, params: &IsdParams) -> f64 {
    let len = k + params.ell;
    let lq = (q as f64).ln();
    match params.sub {
        SubDecoder::Dumer { list_size } => {
            let (w1, w2) = (params.p / 2, params.p - params.p / 2);
            let c1 = capacity(len / 2, w1, q);
            let c2 = capacity(len - len / 2, w2, q);
            let (l1, l2) = match list_size {
                Some(l) => (c1.min(l as f64), c2.min(l as f64)),
                None => (c1, c2),
            };
            l1 * l2 * (-(params.ell as f64) * lq).exp()
        }
        SubDecoder::Wagner { a } => (wagner_ell(params.ell, a, WagnerMode::Amortized) as f64 * lq).exp(),
    }
}

/// Sub-decoder candidates `e''` (length k+ℓ) with `H'' e''ᵀ = s''`, `|e''| = p`.
fn sub_decode<R: Rng + ?Sized>(
    ctx: &FieldCtx,
    h2: &FqMatrix,
    s2: &[u32],
    params: &IsdParams,
    rng: &mut R,
) -> Vec<Sparse> {
    let len = h2.cols();
    match params.sub {
        SubDecoder::Dumer { list_size } => {
            let split = random_subset(rng, len, len / 2);
            dumer_core(ctx, h2, s2, params.p, &split, list_size, params.candidate_cap, rng)
        }
        SubDecoder::Wagner { a } => {
            let ell = wagner_ell(h2.rows(), a, WagnerMode::Amortized);
            let l = (ctx.q() as f64).powi(ell as i32).round() as usize;
            wagner_core(ctx, h2, s2, params.p, a, ell, l, params.candidate_cap, rng).0
        }
    }
}

/// Per-iteration statistics used by the ISD trial runner.
#[derive(Clone, Debug, Default)]
pub struct IsdTrialStats {
    pub iterations: u64,
    pub successful_iterations: u64,
    pub candidates: u64,
    pub accepted: u64,
    /// Sum and sum of squares of lifted weights |e| = p + |e_J̄| over all candidates.
    pub lifted_weight_sum: f64,
    pub lifted_weight_sq_sum: f64,
}

struct IsdIteration {
    outcome: IterationOutcome,
    lifted_weights: Vec<usize>,
}

fn isd_iteration<R: Rng + ?Sized>(inst: &DecodingInstance, params: &IsdParams, rng: &mut R) -> Result<IsdIteration> {
    let ctx = inst.ctx();
    let (n, r, t) = (inst.n(), inst.redundancy(), inst.t());
    let k = n - r;
    let top = r - params.ell;
    let (j, jbar, s_mat, sh) = draw_eliminated(inst.h(), k + params.ell, rng)?;
    let ss = s_mat.mul_vec(inst.s());
    let rows_bottom: Vec<usize> = (top..r).collect();
    let h2 = sh.select_rows(&rows_bottom).select_columns(&j);
    let s2 = &ss.entries()[top..];
    let candidates = sub_decode(ctx, &h2, s2, params, rng);
    let mut outcome =
        IterationOutcome { sub_decoder_calls: 1, candidates: candidates.len() as u64, ..Default::default() };
    let mut lifted_weights = Vec::with_capacity(candidates.len());
    for err in candidates {
        // e_J̄ = s' − H' e''ᵀ, with H' the top rows of S H restricted to J.
        let mut e_bar: Vec<u32> = ss.entries()[..top].to_vec();
        for &(c, v) in &err {
            let col = j[c as usize];
            for (row, x) in e_bar.iter_mut().enumerate() {
                *x = ctx.sub(*x, ctx.mul(sh.get(row, col), v));
            }
        }
        let wbar = e_bar.iter().filter(|&&x| x != 0).count();
        lifted_weights.push(err.len() + wbar);
        if wbar + params.p != t {
            continue;
        }
        let mut e = vec![0u32; n];
        for &(c, v) in &err {
            e[j[c as usize]] = v;
        }
        for (row, &c) in jbar.iter().enumerate() {
            e[c] = e_bar[row];
        }
        let e = FqVector::new(ctx, e)?;
        if verify(inst, &e) {
            outcome.accepted += 1;
            outcome.solutions.push(e);
        }
    }
    Ok(IsdIteration { outcome, lifted_weights })
}

pub fn isd(inst: &DecodingInstance, params: &IsdParams) -> Result<SolveReport> {
    let (n, k, t, q) = (inst.n(), inst.k(), inst.t(), inst.ctx().q());
    if inst.redundancy() > n {
        return Err(Error::NotSupported("parity-check matrix has more rows than columns".into()));
    }
    check_isd_params(n, k, t, q, params)?;
    let budget = params.max_iterations.unwrap_or_else(|| {
        let p_iter = expected_sub_candidates(k, q, params) * isd_alpha(n, k, t, q, params.p, params.ell);
        default_budget(p_iter)
    });
    drive(params.workers, params.seed, budget, |rng| Ok(isd_iteration(inst, params, rng)?.outcome))
}

/// Runs exactly `iterations` ISD iterations and aggregates candidate statistics.
pub fn isd_trials(inst: &DecodingInstance, params: &IsdParams, iterations: u64, seed: u64) -> Result<IsdTrialStats> {
    check_isd_params(inst.n(), inst.k(), inst.t(), inst.ctx().q(), params)?;
    let mut rng = rng_stream(seed, 0);
    let mut stats = IsdTrialStats::default();
    for _ in 0..iterations {
        let it = isd_iteration(inst, params, &mut rng)?;
        stats.iterations += 1;
        stats.candidates += it.outcome.candidates;
        stats.accepted += it.outcome.accepted;
        stats.successful_iterations += u64::from(it.outcome.accepted > 0);
        for w in it.lifted_weights {
            stats.lifted_weight_sum += w as f64;
            stats.lifted_weight_sq_sum += (w * w) as f64;
        }
    }
    Ok(stats)
}
