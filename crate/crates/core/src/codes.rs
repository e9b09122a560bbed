//! Linear codes: random codes, Hamming and GRS constructions, duals, punctured
//! codes, information sets, cosets and brute-force minimum distance.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::gf_linalg::{FieldCtx, FqMatrix, FqVector};
use crate::rng::rng_from_seed;

/// An `[n, k]_q` code. At least one of `G`, `H` is given; the other is derived on first use.
#[derive(Debug)]
pub struct LinearCode {
    ctx: FieldCtx,
    n: usize,
    k: usize,
    g: OnceLock<FqMatrix>,
    h: OnceLock<FqMatrix>,
}

impl Clone for LinearCode {
    fn clone(&self) -> Self {
        LinearCode {
            ctx: self.ctx.clone(),
            n: self.n,
            k: self.k,
            g: self.g.get().cloned().map(OnceLock::from).unwrap_or_default(),
            h: self.h.get().cloned().map(OnceLock::from).unwrap_or_default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CodeModel {
    Generator,
    ParityCheck,
}

/// Given a full-rank `M` (r×n), returns a full-rank `(n−r)×n` matrix `N` with `M Nᵀ = 0`.
fn complement_matrix(m: &FqMatrix) -> Result<FqMatrix> {
    let ctx = m.ctx();
    let (r, n) = (m.rows(), m.cols());
    let sys = m.row_reduce_systematic()?;
    // S M P = (I | A)  ⇒  N' = (−Aᵀ | I) satisfies (I | A) N'ᵀ = 0; then undo P.
    let mut out = FqMatrix::zeros(ctx, n - r, n);
    for i in 0..n - r {
        for j in 0..r {
            out.set(i, sys.colperm[j], ctx.neg(sys.reduced.get(j, r + i)));
        }
        out.set(i, sys.colperm[r + i], 1);
    }
    Ok(out)
}

impl LinearCode {
    pub fn from_generator(g: FqMatrix) -> Result<Self> {
        if g.rank() != g.rows() {
            return Err(Error::RankDeficient);
        }
        Ok(LinearCode { ctx: g.ctx().clone(), n: g.cols(), k: g.rows(), g: OnceLock::from(g), h: OnceLock::new() })
    }

    pub fn from_parity_check(h: FqMatrix) -> Result<Self> {
        if h.rank() != h.rows() {
            return Err(Error::RankDeficient);
        }
        let (n, k) = (h.cols(), h.cols() - h.rows());
        Ok(LinearCode { ctx: h.ctx().clone(), n, k, g: OnceLock::new(), h: OnceLock::from(h) })
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    pub fn generator(&self) -> &FqMatrix {
        self.g.get_or_init(|| {
            let h = self.h.get().expect("code holds at least one matrix");
            complement_matrix(h).expect("stored parity-check matrix has full rank")
        })
    }

    pub fn parity_check(&self) -> &FqMatrix {
        self.h.get_or_init(|| {
            let g = self.g.get().expect("code holds at least one matrix");
            complement_matrix(g).expect("stored generator matrix has full rank")
        })
    }

    pub fn dual(&self) -> LinearCode {
        LinearCode {
            ctx: self.ctx.clone(),
            n: self.n,
            k: self.n - self.k,
            g: OnceLock::from(self.parity_check().clone()),
            h: OnceLock::from(self.generator().clone()),
        }
    }

    pub fn encode(&self, m: &FqVector) -> FqVector {
        self.generator().left_mul_vec(m)
    }

    pub fn syndrome(&self, y: &FqVector) -> FqVector {
        self.parity_check().mul_vec(y)
    }

    pub fn contains(&self, y: &FqVector) -> bool {
        self.syndrome(y).is_zero()
    }

    /// Canonical coset representative: the elimination solution of `H aᵀ = sᵀ`.
    pub fn coset_representative(&self, s: &FqVector) -> Result<FqVector> {
        self.parity_check().solve_linear(s)
    }

    pub fn same_coset(&self, a: &FqVector, b: &FqVector) -> bool {
        self.syndrome(a) == self.syndrome(b)
    }

    /// Code generated by the columns `positions` of `G`; its dimension is computed.
    pub fn puncture(&self, positions: &[usize]) -> LinearCode {
        let gj = self.generator().select_columns(positions);
        let basis = gj.row_basis();
        LinearCode {
            ctx: self.ctx.clone(),
            n: positions.len(),
            k: basis.rows(),
            g: OnceLock::from(basis),
            h: OnceLock::new(),
        }
    }

    /// `positions` (size k, or k+ℓ) is an information set iff `G` restricted to it has rank k.
    pub fn is_information_set(&self, positions: &[usize]) -> bool {
        self.generator().select_columns(positions).rank() == self.k
    }

    /// Same predicate through `H`: the complement columns of `H` have full column rank.
    pub fn is_information_set_via_parity(&self, positions: &[usize]) -> bool {
        let comp = complement(self.n, positions);
        self.parity_check().select_columns(&comp).rank() == comp.len()
    }

    /// All codewords, enumerated message by message. Guarded at q^k ≤ 2^24.
    pub fn codewords(&self) -> Result<Vec<FqVector>> {
        let mut out = Vec::new();
        self.for_each_codeword(|c| out.push(FqVector::from_raw_entries(&self.ctx, c)))?;
        Ok(out)
    }

    fn for_each_codeword(&self, mut f: impl FnMut(&[u32])) -> Result<()> {
        let q = self.ctx.q() as u64;
        let total = (q as f64).powi(self.k as i32);
        if total > (1u64 << 24) as f64 {
            return Err(Error::TooLarge(format!("q^k = {q}^{} exceeds 2^24", self.k)));
        }
        let g = self.generator();
        let mut digits = vec![0u32; self.k];
        let mut word = vec![0u32; self.n];
        loop {
            f(&word);
            // Odometer increment: every digit that changes adds its row once (wrap q−1 → 0 included).
            let mut i = 0;
            loop {
                if i == self.k {
                    return Ok(());
                }
                digits[i] = (digits[i] + 1) % q as u32;
                for (w, &x) in word.iter_mut().zip(g.row(i)) {
                    *w = self.ctx.add(*w, x);
                }
                if digits[i] != 0 {
                    break;
                }
                i += 1;
            }
        }
    }

    pub fn min_distance_bruteforce(&self) -> Result<usize> {
        let mut best = usize::MAX;
        self.for_each_codeword(|c| {
            let w = c.iter().filter(|&&x| x != 0).count();
            if w > 0 && w < best {
                best = w;
            }
        })?;
        Ok(if best == usize::MAX { 0 } else { best })
    }
}

pub(crate) fn complement(n: usize, positions: &[usize]) -> Vec<usize> {
    let mut mark = vec![false; n];
    for &p in positions {
        mark[p] = true;
    }
    (0..n).filter(|&i| !mark[i]).collect()
}

/// Uniform code in the chosen model. With `resample` the matrix is redrawn until it has
/// full rank; otherwise the raw draw is returned as a matrix (which may be singular).
pub fn random_matrix(ctx: &FieldCtx, n: usize, k: usize, model: CodeModel, seed: u64, resample: bool) -> FqMatrix {
    let rows = match model {
        CodeModel::Generator => k,
        CodeModel::ParityCheck => n - k,
    };
    let mut rng = rng_from_seed(seed);
    loop {
        let m = FqMatrix::random(ctx, rows, n, &mut rng);
        if !resample || m.rank() == rows {
            return m;
        }
    }
}

pub fn random_code(ctx: &FieldCtx, n: usize, k: usize, model: CodeModel, seed: u64) -> Result<LinearCode> {
    if k == 0 || k >= n {
        return Err(Error::DegenerateParams(format!("need 0 < k < n, got k={k}, n={n}")));
    }
    let m = random_matrix(ctx, n, k, model, seed, true);
    match model {
        CodeModel::Generator => LinearCode::from_generator(m),
        CodeModel::ParityCheck => LinearCode::from_parity_check(m),
    }
}

/// Binary Hamming code of length 2^r − 1; column i (1-based) of H is i in binary, MSB on top.
pub fn hamming_code(r: usize) -> Result<LinearCode> {
    if r < 2 {
        return Err(Error::DegenerateParams("hamming code needs r >= 2".into()));
    }
    let ctx = FieldCtx::new(2)?;
    let n = (1usize << r) - 1;
    let h = FqMatrix::from_fn(&ctx, r, n, |i, j| (((j + 1) >> (r - 1 - i)) & 1) as u32);
    LinearCode::from_parity_check(h)
}

#[derive(Clone, Debug)]
pub struct GrsCode {
    pub code: LinearCode,
    pub x: Vec<u32>,
    pub z: Vec<u32>,
}

pub fn grs_code(ctx: &FieldCtx, x: &[u32], z: &[u32], k: usize) -> Result<GrsCode> {
    let n = x.len();
    if z.len() != n {
        return Err(Error::DimensionMismatch("x and z lengths differ".into()));
    }
    if k > n || n > ctx.q() as usize {
        return Err(Error::DegenerateParams(format!("GRS needs k <= n <= q, got k={k}, n={n}")));
    }
    if x.iter().chain(z).any(|&v| v >= ctx.q()) {
        return Err(Error::DegenerateParams("residue out of range".into()));
    }
    let mut sorted = x.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::DuplicatePoints);
    }
    if z.contains(&0) {
        return Err(Error::ZeroMultiplier);
    }
    let g = FqMatrix::from_fn(ctx, k, n, |j, i| ctx.mul(z[i], ctx.pow(x[i], j as u32)));
    let code = LinearCode::from_generator(g)?;
    let grs = GrsCode { code, x: x.to_vec(), z: z.to_vec() };
    let h = grs_parity_check(&grs);
    grs.code.h.set(h).expect("parity check not yet initialised");
    Ok(grs)
}

/// Multipliers of the dual code: z′_i = 1 / (z_i ∏_{j≠i} (x_i − x_j)).
pub fn dual_multipliers(ctx: &FieldCtx, x: &[u32], z: &[u32]) -> Vec<u32> {
    (0..x.len())
        .map(|i| {
            let mut d = z[i];
            for j in 0..x.len() {
                if j != i {
                    d = ctx.mul(d, ctx.sub(x[i], x[j]));
                }
            }
            ctx.inv(d)
        })
        .collect()
}

/// `Vandermonde(x, n−k rows) · diag(z′)`.
pub fn grs_parity_check(code: &GrsCode) -> FqMatrix {
    let ctx = code.code.ctx();
    let n = code.x.len();
    let zp = dual_multipliers(ctx, &code.x, &code.z);
    FqMatrix::from_fn(ctx, n - code.code.k(), n, |j, i| ctx.mul(zp[i], ctx.pow(code.x[i], j as u32)))
}

impl FqVector {
    pub(crate) fn from_raw_entries(ctx: &FieldCtx, e: &[u32]) -> FqVector {
        FqVector::new(ctx, e.to_vec()).expect("entries reduced")
    }
}
