//! Reductions: three-dimensional matching to binary syndrome decoding, LPN samples to a
//! noisy-codeword instance, and the predictor that turns a decision-decoding distinguisher
//! into a guesser for the inner product x·r.

use std::collections::BTreeSet;

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf_linalg::{FieldCtx, FqMatrix, FqVector};
use crate::instances::{random_weight_vector, DecodingInstance, NoisyCodewordInstance};
use crate::randcode_stats::mean_and_sigma;
use crate::rng::{rng_from_seed, SeededRng};

// ---------------------------------------------------------------------------------------------
// 3DM

/// A 3DM instance: triples over T = {1, …, size}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeDmInstance {
    size: usize,
    triples: Vec<[usize; 3]>,
}

impl ThreeDmInstance {
    pub fn new(size: usize, triples: Vec<[usize; 3]>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for t in &triples {
            if t.iter().any(|&v| v == 0 || v > size) {
                return Err(Error::InvalidInstance(format!("triple {t:?} outside 1..={size}")));
            }
            if !seen.insert(*t) {
                return Err(Error::InvalidInstance(format!("duplicate triple {t:?}")));
            }
        }
        Ok(ThreeDmInstance { size, triples })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn triples(&self) -> &[[usize; 3]] {
        &self.triples
    }

    /// Text form: `|T| |U|`, then one `x y z` line per triple (1-indexed).
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty 3DM file".into()))?;
        let nums = parse_numbers(header)?;
        let [size, count] = nums[..] else {
            return Err(Error::Parse(format!("expected '|T| |U|', got '{header}'")));
        };
        let mut triples = Vec::with_capacity(count);
        for line in lines.by_ref().take(count) {
            let v = parse_numbers(line)?;
            let [x, y, z] = v[..] else {
                return Err(Error::Parse(format!("expected a triple, got '{line}'")));
            };
            triples.push([x, y, z]);
        }
        if triples.len() != count || lines.next().is_some() {
            return Err(Error::Parse(format!("expected exactly {count} triples")));
        }
        Self::new(size, triples)
    }

    pub fn render(&self) -> String {
        let mut out = format!("{} {}\n", self.size, self.triples.len());
        for [x, y, z] in &self.triples {
            out.push_str(&format!("{x} {y} {z}\n"));
        }
        out
    }

    /// Whether the chosen triples (0-indexed into U) form a perfect matching.
    pub fn is_matching(&self, chosen: &[usize]) -> bool {
        if chosen.len() != self.size {
            return false;
        }
        let mut used = vec![vec![false; self.size + 1]; 3];
        for &c in chosen {
            let Some(t) = self.triples.get(c) else { return false };
            for (axis, &v) in t.iter().enumerate() {
                if used[axis][v] {
                    return false;
                }
                used[axis][v] = true;
            }
        }
        true
    }
}

fn parse_numbers(line: &str) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|w| w.parse::<usize>().map_err(|_| Error::Parse(format!("not a number: '{w}'"))))
        .collect()
}

/// Incidence matrix over F_2 of size 3|T| × |U|: row c·|T| + (v−1) of column j is set
/// when coordinate c of triple j equals v.
pub fn tdm_to_matrix(inst: &ThreeDmInstance) -> FqMatrix {
    let ctx = FieldCtx::new(2).expect("2 is prime");
    let m = inst.size;
    let mut h = FqMatrix::zeros(&ctx, 3 * m, inst.triples.len());
    for (j, t) in inst.triples.iter().enumerate() {
        for (c, &v) in t.iter().enumerate() {
            h.set(c * m + v - 1, j, 1);
        }
    }
    h
}

/// Decoding instance (H_3DM, all-ones, |T|). H_3DM usually has more rows than columns and is
/// rarely full rank, so the instance is built without a rank check.
pub fn tdm_decoding_instance(inst: &ThreeDmInstance) -> Result<DecodingInstance> {
    let h = tdm_to_matrix(inst);
    let ctx = h.ctx().clone();
    let s = FqVector::new(&ctx, vec![1; 3 * inst.size])?;
    DecodingInstance::new_general(h, s, inst.size, None)
}

/// Reads a matching off a decoding solution and checks it independently.
pub fn matching_from_solution(inst: &ThreeDmInstance, e: &FqVector) -> Result<Vec<usize>> {
    let chosen = e.support();
    if inst.is_matching(&chosen) {
        Ok(chosen)
    } else {
        Err(Error::InvalidInstance("solution support is not a perfect matching".into()))
    }
}

/// Random instance with a planted perfect matching plus `extra` random triples.
pub fn random_satisfiable_tdm<R: Rng + ?Sized>(size: usize, extra: usize, rng: &mut R) -> ThreeDmInstance {
    use rand::seq::SliceRandom;
    let mut ys: Vec<usize> = (1..=size).collect();
    let mut zs: Vec<usize> = (1..=size).collect();
    ys.shuffle(rng);
    zs.shuffle(rng);
    let mut set: BTreeSet<[usize; 3]> = (0..size).map(|i| [i + 1, ys[i], zs[i]]).collect();
    let target = (set.len() + extra).min(size * size * size);
    while set.len() < target {
        set.insert([rng.gen_range(1..=size), rng.gen_range(1..=size), rng.gen_range(1..=size)]);
    }
    let mut triples: Vec<[usize; 3]> = set.into_iter().collect();
    triples.shuffle(rng);
    ThreeDmInstance { size, triples }
}

// ---------------------------------------------------------------------------------------------
// LPN

/// LPN oracle over F_2: each query returns (a, ⟨s,a⟩ + e) with a uniform and e ~ Bernoulli(τ).
#[derive(Clone, Debug)]
pub struct LpnOracle {
    ctx: FieldCtx,
    k: usize,
    tau: f64,
    secret: FqVector,
    rng: SeededRng,
    queries: u64,
    white_box: bool,
    errors: Vec<u32>,
}

impl LpnOracle {
    pub fn new(k: usize, tau: f64, seed: u64) -> Result<Self> {
        if !(0.0..0.5).contains(&tau) {
            return Err(Error::DomainError(format!("tau = {tau} must lie in [0, 1/2)")));
        }
        let ctx = FieldCtx::new(2)?;
        let mut rng = rng_from_seed(seed);
        let secret = FqVector::random(&ctx, k, &mut rng);
        Ok(LpnOracle { ctx, k, tau, secret, rng, queries: 0, white_box: false, errors: Vec::new() })
    }

    /// Records the error bits so tests can inspect them; never enabled by default.
    pub fn with_white_box(mut self) -> Self {
        self.white_box = true;
        self
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn queries(&self) -> u64 {
        self.queries
    }

    pub fn query(&mut self) -> (FqVector, u32) {
        let a = FqVector::random(&self.ctx, self.k, &mut self.rng);
        let e = u32::from(self.rng.gen_bool(self.tau));
        self.queries += 1;
        if self.white_box {
            self.errors.push(e);
        }
        (a.clone(), self.ctx.add(a.dot(&self.secret), e))
    }

    /// The hidden secret; white-box mode only.
    pub fn secret(&self) -> Option<&FqVector> {
        self.white_box.then_some(&self.secret)
    }

    /// Error bits of all queries so far; white-box mode only.
    pub fn errors(&self) -> Option<&[u32]> {
        self.white_box.then_some(&self.errors[..])
    }
}

/// Gathers `n` samples as `y = s G + e`, the columns of G being the queried vectors.
/// The target weight is the realized |e| in white-box mode, else ⌈τn + 3√(nτ(1−τ))⌉.
pub fn lpn_collect(oracle: &mut LpnOracle, n: usize) -> Result<NoisyCodewordInstance> {
    if n < oracle.k {
        return Err(Error::DomainError(format!("need n >= k = {}, got {n}", oracle.k)));
    }
    let ctx = oracle.ctx.clone();
    let start = oracle.errors.len();
    let mut g = FqMatrix::zeros(&ctx, oracle.k, n);
    let mut y = Vec::with_capacity(n);
    for j in 0..n {
        let (a, b) = oracle.query();
        for i in 0..oracle.k {
            g.set(i, j, a.get(i));
        }
        y.push(b);
    }
    let (t, planted) = match oracle.errors() {
        Some(errs) => {
            let e = errs[start..].to_vec();
            (e.iter().filter(|&&x| x != 0).count(), Some(FqVector::new(&ctx, e)?))
        }
        None => {
            let tau = oracle.tau;
            let nf = n as f64;
            (((tau * nf + 3.0 * (nf * tau * (1.0 - tau)).sqrt()).ceil() as usize).min(n), None)
        }
    };
    Ok(NoisyCodewordInstance { g, y: FqVector::new(&ctx, y)?, t, planted_error: planted })
}

/// Recovers the secret from a noisy-codeword solution: solves s G = y − e.
pub fn lpn_secret_from_error(inst: &NoisyCodewordInstance, e: &FqVector) -> Result<FqVector> {
    inst.g.transpose().solve_linear(&inst.y.sub(e))
}

// ---------------------------------------------------------------------------------------------
// Decision decoding

/// A decision-decoding distinguisher: returns its guess of b for (H, s).
pub trait Distinguisher {
    fn decide(&mut self, h: &FqMatrix, s: &FqVector, rng: &mut SeededRng) -> bool;
}

impl<F: FnMut(&FqMatrix, &FqVector, &mut SeededRng) -> bool> Distinguisher for F {
    fn decide(&mut self, h: &FqMatrix, s: &FqVector, rng: &mut SeededRng) -> bool {
        self(h, s, rng)
    }
}

/// Outputs 1 iff some error of weight ≤ `w` has syndrome s (exhaustive search).
pub fn coset_weight_distinguisher(w: usize) -> impl Distinguisher {
    move |h: &FqMatrix, s: &FqVector, _: &mut SeededRng| coset_has_weight_at_most(h, s, w)
}

/// Outputs 1 iff some error of weight exactly `t` has syndrome s.
pub fn exact_weight_distinguisher(t: usize) -> impl Distinguisher {
    move |h: &FqMatrix, s: &FqVector, _: &mut SeededRng| {
        let mut found = false;
        crate::enumerate::for_each_weight_vector(
            h.ctx(),
            &crate::enumerate::columns_at(h, &(0..h.cols()).collect::<Vec<_>>()),
            h.rows(),
            t,
            |_, _, syn| found |= syn == s.entries(),
        );
        found
    }
}

fn coset_has_weight_at_most(h: &FqMatrix, s: &FqVector, w: usize) -> bool {
    let cols = crate::enumerate::columns_at(h, &(0..h.cols()).collect::<Vec<_>>());
    (0..=w).any(|wt| {
        let mut found = false;
        crate::enumerate::for_each_weight_vector(h.ctx(), &cols, h.rows(), wt, |_, _, syn| found |= syn == s.entries());
        found
    })
}

pub fn coin_flip_distinguisher() -> impl Distinguisher {
    |_: &FqMatrix, _: &FqVector, rng: &mut SeededRng| rng.gen_bool(0.5)
}

pub fn constant_distinguisher(bit: bool) -> impl Distinguisher {
    move |_: &FqMatrix, _: &FqVector, _: &mut SeededRng| bit
}

/// Guess of x·r from (H, s = x Hᵀ, r): draws u uniform, sets H' = H − uᵀ r and returns
/// 1 ⊕ 𝒜(H', s). When x·r = 0 the pair (H', s) is a planted sample, when x·r = 1 the syndrome
/// is uniform, so a distinguisher answering 1 on planted samples must be negated.
pub fn std_predictor<D: Distinguisher + ?Sized>(
    ddp: &mut D,
    h: &FqMatrix,
    s: &FqVector,
    r: &FqVector,
    rng: &mut SeededRng,
) -> Result<u32> {
    if h.ctx().q() != 2 {
        return Err(Error::NotSupported("the predictor is defined over F_2".into()));
    }
    if r.len() != h.cols() || s.len() != h.rows() {
        return Err(Error::DimensionMismatch("r must have length n and s length n - k".into()));
    }
    let u = FqVector::random(h.ctx(), h.rows(), rng);
    let h_prime = randomize(h, &u, r);
    Ok(u32::from(!ddp.decide(&h_prime, s, rng)))
}

/// H − uᵀ r.
pub(crate) fn randomize(h: &FqMatrix, u: &FqVector, r: &FqVector) -> FqMatrix {
    let ctx = h.ctx();
    FqMatrix::from_fn(ctx, h.rows(), h.cols(), |i, j| ctx.sub(h.get(i, j), ctx.mul(u.get(i), r.get(j))))
}

/// Agreement rate of the predictor with x·r over uniform (H, x of weight t, r); returns (rate, σ).
pub fn std_agreement<D: Distinguisher + ?Sized>(
    ddp: &mut D,
    n: usize,
    k: usize,
    t: usize,
    trials: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    let ctx = FieldCtx::new(2)?;
    let mut rng = rng_from_seed(seed);
    let mut hits = Vec::with_capacity(trials);
    for _ in 0..trials {
        let h = FqMatrix::random(&ctx, n - k, n, &mut rng);
        let x = random_weight_vector(&ctx, n, t, &mut rng);
        let r = FqVector::random(&ctx, n, &mut rng);
        let s = h.mul_vec(&x);
        let guess = std_predictor(ddp, &h, &s, &r, &mut rng)?;
        hits.push(f64::from(u8::from(guess == x.dot(&r))));
    }
    let (rate, _) = mean_and_sigma(&hits);
    Ok((rate, (rate * (1.0 - rate) / trials as f64).sqrt()))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdvantageEstimate {
    pub advantage: f64,
    pub sigma: f64,
    /// Empirical P(𝒜(H,s) = b).
    pub correct_rate: f64,
}

/// Monte-Carlo estimate of ½(P(𝒜=1 | b=1) − P(𝒜=1 | b=0)) with b uniform.
pub fn ddp_advantage<D: Distinguisher + ?Sized>(
    ddp: &mut D,
    n: usize,
    k: usize,
    t: usize,
    q: u32,
    samples: usize,
    seed: u64,
) -> Result<AdvantageEstimate> {
    let ctx = FieldCtx::new(q as u64)?;
    let mut rng = rng_from_seed(seed);
    let (mut n1, mut ones1, mut n0, mut ones0, mut correct) = (0u64, 0u64, 0u64, 0u64, 0u64);
    for _ in 0..samples {
        let b = rng.gen_bool(0.5);
        let h = FqMatrix::random(&ctx, n - k, n, &mut rng);
        let s = if b {
            h.mul_vec(&random_weight_vector(&ctx, n, t, &mut rng))
        } else {
            FqVector::random(&ctx, n - k, &mut rng)
        };
        let out = ddp.decide(&h, &s, &mut rng);
        correct += u64::from(out == b);
        if b {
            n1 += 1;
            ones1 += u64::from(out);
        } else {
            n0 += 1;
            ones0 += u64::from(out);
        }
    }
    let p1 = if n1 > 0 { ones1 as f64 / n1 as f64 } else { 0.0 };
    let p0 = if n0 > 0 { ones0 as f64 / n0 as f64 } else { 0.0 };
    let var = |p: f64, m: u64| if m > 0 { p * (1.0 - p) / m as f64 } else { 0.0 };
    Ok(AdvantageEstimate {
        advantage: 0.5 * (p1 - p0),
        sigma: 0.5 * (var(p1, n1) + var(p0, n0)).sqrt(),
        correct_rate: correct as f64 / samples.max(1) as f64,
    })
}
