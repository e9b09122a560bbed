//! Decoding-problem instances: generation, verification, the `.dpi` text format,
//! and conversion between the syndrome and noisy-codeword forms.
//!
//! `.dpi` layout:
//!
//! ```text
//! DPI 1
//! q n k t
//! <n−k rows of H, space-separated residues>
//! <s>
//! # e <planted error>        (optional)
//! ```
//!
//! `k` is written as `n − rows(H)` and may be negative for instances whose `H` has more
//! rows than columns (the 3DM incidence instances).

use std::fmt::Write as _;

use rand::Rng;

use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::gf_linalg::{hamming_weight, FieldCtx, FqMatrix, FqVector};
use crate::rng::{fisher_yates_prefix, rng_from_seed};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodingInstance {
    h: FqMatrix,
    s: FqVector,
    t: usize,
    planted: Option<FqVector>,
}

impl DecodingInstance {
    /// Checked constructor: `H` must have full row rank.
    pub fn new(h: FqMatrix, s: FqVector, t: usize, planted: Option<FqVector>) -> Result<Self> {
        if h.rank() != h.rows() {
            return Err(Error::RankDeficient);
        }
        if t > h.cols() {
            return Err(Error::InvalidInstance(format!("weight {t} exceeds length {}", h.cols())));
        }
        Self::new_general(h, s, t, planted)
    }

    /// Like [`DecodingInstance::new`] but accepts any `H` (e.g. incidence matrices with
    /// more rows than columns) and weights above the length, which have no solution.
    /// Decoders that need an invertible block report it themselves.
    pub fn new_general(h: FqMatrix, s: FqVector, t: usize, planted: Option<FqVector>) -> Result<Self> {
        if s.len() != h.rows() || s.ctx() != h.ctx() {
            return Err(Error::DimensionMismatch(format!("syndrome length {} for {} rows", s.len(), h.rows())));
        }
        let inst = DecodingInstance { h, s, t, planted };
        if let Some(x) = &inst.planted {
            if x.len() != inst.n() || !inst.verify(x) {
                return Err(Error::InvalidInstance("planted error does not verify".into()));
            }
        }
        Ok(inst)
    }

    pub fn ctx(&self) -> &FieldCtx {
        self.h.ctx()
    }

    pub fn h(&self) -> &FqMatrix {
        &self.h
    }

    pub fn s(&self) -> &FqVector {
        &self.s
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn n(&self) -> usize {
        self.h.cols()
    }

    /// Number of parity equations, `n − k` for a full-rank `H`.
    pub fn redundancy(&self) -> usize {
        self.h.rows()
    }

    pub fn k(&self) -> usize {
        self.n().saturating_sub(self.redundancy())
    }

    pub fn planted(&self) -> Option<&FqVector> {
        self.planted.as_ref()
    }

    pub fn without_planted(&self) -> Self {
        DecodingInstance { planted: None, ..self.clone() }
    }

    pub fn verify(&self, e: &FqVector) -> bool {
        verify(self, e)
    }

    pub fn render(&self) -> String {
        render_dpi(self)
    }
}

/// `|e| = t` and `e Hᵀ = s`.
pub fn verify(inst: &DecodingInstance, e: &FqVector) -> bool {
    e.len() == inst.n() && e.ctx() == inst.ctx() && hamming_weight(e) == inst.t && inst.h.mul_vec(e) == inst.s
}

/// Uniform vector on the sphere of weight `t`: Fisher-Yates support, nonzero values uniform.
pub fn random_weight_vector<R: Rng + ?Sized>(ctx: &FieldCtx, n: usize, t: usize, rng: &mut R) -> FqVector {
    let mut e = vec![0u32; n];
    for i in fisher_yates_prefix(rng, n, t) {
        e[i] = ctx.random_nonzero(rng);
    }
    FqVector::new(ctx, e).expect("residues in range")
}

/// `k = ⌊R n⌋` and `t = ⌊τ n⌋`, with a small tolerance so that e.g. `0.3 * 10` gives 3.
pub fn dp_dimensions(n: usize, rate: f64, tau: f64) -> (usize, usize) {
    let k = (rate * n as f64 + 1e-9).floor() as usize;
    let t = (tau * n as f64 + 1e-9).floor() as usize;
    (k, t)
}

/// A DP instance: uniform full-rank `H`, uniform `x` of weight `t`, `s = x Hᵀ`.
pub fn gen_dp(ctx: &FieldCtx, n: usize, rate: f64, tau: f64, seed: u64) -> Result<DecodingInstance> {
    if !(rate > 0.0 && rate < 1.0) || !(0.0..=1.0).contains(&tau) {
        return Err(Error::DegenerateParams(format!("need 0 < R < 1 and 0 <= tau <= 1, got R={rate}, tau={tau}")));
    }
    let (k, t) = dp_dimensions(n, rate, tau);
    gen_dp_exact(ctx, n, k, t, seed)
}

pub fn gen_dp_exact(ctx: &FieldCtx, n: usize, k: usize, t: usize, seed: u64) -> Result<DecodingInstance> {
    if k == 0 || k >= n {
        return Err(Error::DegenerateParams(format!("k = {k} for n = {n}")));
    }
    if t > n {
        return Err(Error::DegenerateParams(format!("t = {t} exceeds n = {n}")));
    }
    let mut rng = rng_from_seed(seed);
    let h = loop {
        let h = FqMatrix::random(ctx, n - k, n, &mut rng);
        if h.rank() == n - k {
            break h;
        }
    };
    let x = random_weight_vector(ctx, n, t, &mut rng);
    let s = h.mul_vec(&x);
    Ok(DecodingInstance { h, s, t, planted: Some(x) })
}

/// Noisy-codeword form: `y = c + e` with `c` in the code generated by `G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoisyCodewordInstance {
    pub g: FqMatrix,
    pub y: FqVector,
    pub t: usize,
    pub planted_error: Option<FqVector>,
}

impl NoisyCodewordInstance {
    /// `e` solves the instance iff `|e| = t` and `y − e` lies in the code.
    pub fn verify(&self, e: &FqVector) -> Result<bool> {
        if hamming_weight(e) != self.t {
            return Ok(false);
        }
        let diff = self.y.sub(e);
        Ok(self.g.transpose().solve_linear(&diff).is_ok())
    }
}

/// `G` with `G Hᵀ = 0`, and `y = a + c` where `a` solves `H aᵀ = sᵀ` and `c` is a random codeword.
pub fn syndrome_to_noisy(inst: &DecodingInstance, seed: u64) -> Result<NoisyCodewordInstance> {
    let code = LinearCode::from_parity_check(inst.h.clone())?;
    let a = inst.h.solve_linear(&inst.s)?;
    let mut rng = rng_from_seed(seed);
    let m = FqVector::random(inst.ctx(), code.k(), &mut rng);
    let y = a.add(&code.encode(&m));
    Ok(NoisyCodewordInstance { g: code.generator().clone(), y, t: inst.t, planted_error: inst.planted.clone() })
}

pub fn noisy_to_syndrome(inst: &NoisyCodewordInstance) -> Result<DecodingInstance> {
    let code = LinearCode::from_generator(inst.g.clone())?;
    let h = code.parity_check().clone();
    let s = h.mul_vec(&inst.y);
    DecodingInstance::new(h, s, inst.t, inst.planted_error.clone())
}

pub fn render_dpi(inst: &DecodingInstance) -> String {
    let mut out = String::new();
    let n = inst.n() as i64;
    let k = n - inst.redundancy() as i64;
    writeln!(out, "DPI 1").unwrap();
    writeln!(out, "{} {} {} {}", inst.ctx().q(), n, k, inst.t).unwrap();
    for i in 0..inst.redundancy() {
        writeln!(out, "{}", inst.h.row_vector(i)).unwrap();
    }
    writeln!(out, "{}", inst.s).unwrap();
    if let Some(e) = &inst.planted {
        writeln!(out, "# e {e}").unwrap();
    }
    out
}

fn parse_residues(line: &str, expected: usize, q: u32, what: &str) -> Result<Vec<u32>> {
    let v: Vec<u32> = line
        .split_whitespace()
        .map(|w| w.parse::<u32>().map_err(|_| Error::Parse(format!("bad residue {w:?} in {what}"))))
        .collect::<Result<_>>()?;
    if v.len() != expected {
        return Err(Error::Parse(format!("{what}: expected {expected} entries, found {}", v.len())));
    }
    if let Some(&bad) = v.iter().find(|&&x| x >= q) {
        return Err(Error::Parse(format!("{what}: residue {bad} not below q = {q}")));
    }
    Ok(v)
}

pub fn parse_dpi(text: &str) -> Result<DecodingInstance> {
    let mut lines = text.lines();
    let magic = lines.next().ok_or_else(|| Error::Parse("empty input".into()))?;
    if magic.trim() != "DPI 1" {
        return Err(Error::Parse(format!("bad magic line {magic:?}")));
    }
    let header = lines.next().ok_or_else(|| Error::Parse("missing header".into()))?;
    let fields: Vec<i64> = header
        .split_whitespace()
        .map(|w| w.parse::<i64>().map_err(|_| Error::Parse(format!("bad header field {w:?}"))))
        .collect::<Result<_>>()?;
    let [q, n, k, t] = fields[..] else {
        return Err(Error::Parse("header must be `q n k t`".into()));
    };
    if q < 2 || n < 0 || t < 0 || k > n {
        return Err(Error::Parse(format!("invalid header {header:?}")));
    }
    let ctx = FieldCtx::new(q as u64).map_err(|e| Error::Parse(e.to_string()))?;
    let (n, rows) = (n as usize, (n - k) as usize);
    let mut h_rows = Vec::with_capacity(rows);
    for i in 0..rows {
        let line = lines.next().ok_or_else(|| Error::Parse(format!("missing row {i} of H")))?;
        h_rows.push(parse_residues(line, n, ctx.q(), "H row")?);
    }
    let s_line = lines.next().ok_or_else(|| Error::Parse("missing syndrome line".into()))?;
    let s = FqVector::new(&ctx, parse_residues(s_line, rows, ctx.q(), "syndrome")?)?;
    let mut planted = None;
    for line in lines {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("# e") {
            planted = Some(FqVector::new(&ctx, parse_residues(rest, n, ctx.q(), "planted error")?)?);
        } else if !line.is_empty() && !line.starts_with('#') {
            return Err(Error::Parse(format!("unexpected trailing line {line:?}")));
        }
    }
    let h = if rows == 0 { FqMatrix::zeros(&ctx, 0, n) } else { FqMatrix::from_rows(&ctx, &h_rows)? };
    DecodingInstance::new_general(h, s, t as usize, planted).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit::all_weight_solutions;
    use proptest::prelude::*;

    fn f(q: u64) -> FieldCtx {
        FieldCtx::new(q).unwrap()
    }

    #[test]
    fn zero_weight_instance() {
        let inst = gen_dp(&f(3), 12, 0.5, 0.0, 4).unwrap();
        assert_eq!(inst.t(), 0);
        assert!(inst.s().is_zero());
        assert!(inst.planted().unwrap().is_zero());
    }

    #[test]
    fn generation_is_deterministic_and_planted_verifies() {
        let a = gen_dp(&f(2), 40, 0.5, 0.1, 17).unwrap();
        let b = gen_dp(&f(2), 40, 0.5, 0.1, 17).unwrap();
        assert_eq!(a, b);
        assert_eq!((a.k(), a.t()), (20, 4));
        assert!(a.verify(a.planted().unwrap()));
        assert_ne!(a, gen_dp(&f(2), 40, 0.5, 0.1, 18).unwrap());
    }

    #[test]
    fn degenerate_dimensions_rejected() {
        assert!(matches!(gen_dp(&f(2), 3, 0.2, 0.1, 0), Err(Error::DegenerateParams(_))));
        assert!(matches!(gen_dp(&f(2), 10, 1.0, 0.1, 0), Err(Error::DegenerateParams(_))));
        assert_eq!(dp_dimensions(10, 0.3, 0.3), (3, 3));
    }

    #[test]
    fn verify_checks_weight_and_syndrome() {
        let inst = gen_dp(&f(3), 14, 0.5, 0.2, 2).unwrap();
        let x = inst.planted().unwrap().clone();
        assert!(verify(&inst, &x));
        // Same syndrome, wrong weight: add a codeword.
        let code = LinearCode::from_parity_check(inst.h().clone()).unwrap();
        let c = code.generator().row_vector(0);
        let y = x.add(&c);
        assert_eq!(inst.h().mul_vec(&y), *inst.s());
        assert_eq!(verify(&inst, &y), hamming_weight(&y) == inst.t());
    }

    #[test]
    fn verify_agrees_with_enumeration() {
        let inst = gen_dp(&f(2), 14, 0.5, 0.25, 3).unwrap();
        let sols = all_weight_solutions(&inst);
        assert!(sols.contains(inst.planted().unwrap()));
        let mut count = 0;
        for idx in 0u32..1 << 14 {
            let e = FqVector::new(inst.ctx(), (0..14).map(|i| (idx >> i) & 1).collect()).unwrap();
            if verify(&inst, &e) {
                count += 1;
                assert!(sols.contains(&e));
            }
        }
        assert_eq!(count, sols.len());
    }

    #[test]
    fn expected_solution_count_with_planted_vector() {
        // 1 + (C(n,t)(q−1)^t − 1)/q^{n−k} for n=20, R=0.5, τ=0.1, q=2.
        let samples = 10_000u64;
        let mut counts = Vec::with_capacity(samples as usize);
        for seed in 0..samples {
            let inst = gen_dp(&f(2), 20, 0.5, 0.1, seed).unwrap();
            counts.push(all_weight_solutions(&inst).len() as f64);
        }
        let mean = counts.iter().sum::<f64>() / samples as f64;
        let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (samples - 1) as f64;
        let expect = 1.0 + (190.0 - 1.0) / 1024.0;
        let sigma = (var / samples as f64).sqrt();
        assert!((mean - expect).abs() <= 3.0 * sigma, "mean {mean} expect {expect} sigma {sigma}");
    }

    #[test]
    fn conversion_preserves_solutions() {
        for (q, seed) in [(2u64, 1u64), (3, 2), (2, 3)] {
            let inst = gen_dp(&f(q), 10, 0.5, 0.2, seed).unwrap();
            let noisy = syndrome_to_noisy(&inst, seed).unwrap();
            let back = noisy_to_syndrome(&noisy).unwrap();
            let a = all_weight_solutions(&inst);
            let b = all_weight_solutions(&back);
            assert_eq!(a, b);
            for e in &a {
                assert!(noisy.verify(e).unwrap());
                assert!(verify(&inst, e));
            }
            assert!(back.verify(inst.planted().unwrap()));
        }
    }

    #[test]
    fn zero_syndrome_gives_codeword() {
        let inst = gen_dp(&f(5), 10, 0.5, 0.0, 8).unwrap();
        let noisy = syndrome_to_noisy(&inst, 1).unwrap();
        let code = LinearCode::from_generator(noisy.g.clone()).unwrap();
        assert!(code.contains(&noisy.y));
        assert!(noisy.verify(&FqVector::zeros(&f(5), 10)).unwrap());
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_dpi("").is_err());
        assert!(parse_dpi("DPI 2\n2 3 1 1\n").is_err());
        assert!(parse_dpi("DPI 1\n4 3 1 1\n1 0 1\n0 1 1\n1 1\n").is_err());
        assert!(parse_dpi("DPI 1\n2 3 1 1\n1 0 1\n0 1 1\n").is_err());
        assert!(parse_dpi("DPI 1\n2 3 1 1\n1 0 2\n0 1 1\n1 1\n").is_err());
    }

    #[test]
    fn render_layout() {
        let k = f(2);
        let h = FqMatrix::from_bit_strings(&k, &["101", "011"]).unwrap();
        let s = FqVector::new(&k, vec![1, 1]).unwrap();
        let e = FqVector::new(&k, vec![0, 0, 1]).unwrap();
        let inst = DecodingInstance::new(h, s, 1, Some(e)).unwrap();
        assert_eq!(inst.render(), "DPI 1\n2 3 1 1\n1 0 1\n0 1 1\n1 1\n# e 0 0 1\n");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn dpi_round_trip(q in prop::sample::select(vec![2u64, 3, 5, 7, 65521]), n in 2usize..30,
                          seed in any::<u64>(), keep in any::<bool>()) {
            let k = 1 + (seed as usize % (n - 1));
            let t = (seed as usize / 7) % (n + 1);
            let inst = gen_dp_exact(&f(q), n, k, t, seed).unwrap();
            let inst = if keep { inst } else { inst.without_planted() };
            let text = inst.render();
            prop_assert_eq!(parse_dpi(&text).unwrap(), inst);
        }
    }
}
