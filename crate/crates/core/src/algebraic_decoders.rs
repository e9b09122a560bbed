//! Exact decoders for structured codes: Hamming single-error correction and
//! Berlekamp-Welch for generalized Reed-Solomon codes.

use crate::codes::GrsCode;
use crate::error::{Error, Result};
use crate::gf_linalg::{hamming_weight, FieldCtx, FqMatrix, FqVector};

/// Polynomial over F_q, coefficients low to high, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyFq {
    ctx: FieldCtx,
    coeffs: Vec<u32>,
}

impl PolyFq {
    pub fn new(ctx: &FieldCtx, mut coeffs: Vec<u32>) -> Self {
        for c in &mut coeffs {
            *c %= ctx.q();
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        PolyFq { ctx: ctx.clone(), coeffs }
    }

    pub fn zero(ctx: &FieldCtx) -> Self {
        PolyFq { ctx: ctx.clone(), coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: u32) -> u32 {
        self.coeffs.iter().rev().fold(0, |acc, &c| self.ctx.add(self.ctx.mul(acc, x), c))
    }

    pub fn add(&self, other: &PolyFq) -> PolyFq {
        let len = self.coeffs.len().max(other.coeffs.len());
        let c = (0..len)
            .map(|i| self.ctx.add(*self.coeffs.get(i).unwrap_or(&0), *other.coeffs.get(i).unwrap_or(&0)))
            .collect();
        PolyFq::new(&self.ctx, c)
    }

    pub fn sub(&self, other: &PolyFq) -> PolyFq {
        let len = self.coeffs.len().max(other.coeffs.len());
        let c = (0..len)
            .map(|i| self.ctx.sub(*self.coeffs.get(i).unwrap_or(&0), *other.coeffs.get(i).unwrap_or(&0)))
            .collect();
        PolyFq::new(&self.ctx, c)
    }

    pub fn mul(&self, other: &PolyFq) -> PolyFq {
        if self.is_zero() || other.is_zero() {
            return PolyFq::zero(&self.ctx);
        }
        let mut c = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = self.ctx.add(c[i + j], self.ctx.mul(a, b));
            }
        }
        PolyFq::new(&self.ctx, c)
    }

    /// Euclidean division; `divisor` must be nonzero.
    pub fn div_rem(&self, divisor: &PolyFq) -> (PolyFq, PolyFq) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = self.ctx.inv(divisor.coeffs[dd]);
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u32; self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let top = rem.len() - 1;
            let c = self.ctx.mul(rem[top], lead_inv);
            let shift = top - dd;
            quot[shift] = c;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[shift + j] = self.ctx.sub(rem[shift + j], self.ctx.mul(c, d));
            }
            while rem.last() == Some(&0) {
                rem.pop();
            }
        }
        (PolyFq::new(&self.ctx, quot), PolyFq::new(&self.ctx, rem))
    }
}

/// Corrects up to one error in the binary Hamming code of length 2^r − 1.
/// Returns `(c, e)` with `y = c + e`.
pub fn hamming_decode(r: usize, y: &FqVector) -> Result<(FqVector, FqVector)> {
    let n = (1usize << r) - 1;
    if y.len() != n || y.ctx().q() != 2 {
        return Err(Error::DimensionMismatch(format!("expected a binary vector of length {n}")));
    }
    // Row i of H holds bit (r−1−i) of the column index, so the syndrome reads the position MSB first.
    let mut pos = 0usize;
    for i in 0..r {
        let bit = (0..n).filter(|&j| ((j + 1) >> (r - 1 - i)) & 1 == 1).fold(0, |acc, j| acc ^ y.get(j));
        pos = (pos << 1) | bit as usize;
    }
    let mut e = FqVector::zeros(y.ctx(), n);
    if pos != 0 {
        e.set(pos - 1, 1);
    }
    Ok((y.sub(&e), e))
}

/// Decodes `y` in a GRS code up to ⌊(n−k)/2⌋ errors. Returns the message polynomial `f`
/// and the error `e = y − (z_i f(x_i))_i`.
pub fn bw_decode(code: &GrsCode, y: &FqVector) -> Result<(PolyFq, FqVector)> {
    let ctx = code.code.ctx();
    let (n, k) = (code.code.n(), code.code.k());
    if y.len() != n || y.ctx() != ctx {
        return Err(Error::NotSupported(format!("received word of length {} for a length-{n} code", y.len())));
    }
    // Reduce to z = 1 by scaling coordinates with z_i^{-1}.
    let yz: Vec<u32> = (0..n).map(|i| ctx.mul(y.get(i), ctx.inv(code.z[i]))).collect();
    let radius = (n - k) / 2;
    for deg_e in (0..=radius).rev() {
        let Some((f, _)) = bw_attempt(ctx, &code.x, &yz, k, deg_e) else {
            continue;
        };
        let c: Vec<u32> = (0..n).map(|i| ctx.mul(code.z[i], f.eval(code.x[i]))).collect();
        let c = FqVector::new(ctx, c)?;
        let e = y.sub(&c);
        if hamming_weight(&e) > radius {
            return Err(Error::DecodingFailure);
        }
        return Ok((f, e));
    }
    Err(Error::DecodingFailure)
}

/// One solve of `y_i E(x_i) = N(x_i)` with `E` monic of degree `deg_e` and `deg N < k + deg_e`.
/// Returns `(f, E)` when the system is consistent and `E` divides `N` with `deg f < k`.
fn bw_attempt(ctx: &FieldCtx, x: &[u32], y: &[u32], k: usize, deg_e: usize) -> Option<(PolyFq, PolyFq)> {
    let n = x.len();
    let n_len = k + deg_e;
    // Unknowns: E_0..E_{deg_e−1}, then N_0..N_{n_len−1}.
    let a = FqMatrix::from_fn(ctx, n, deg_e + n_len, |i, j| {
        if j < deg_e {
            ctx.mul(y[i], ctx.pow(x[i], j as u32))
        } else {
            ctx.neg(ctx.pow(x[i], (j - deg_e) as u32))
        }
    });
    let rhs: Vec<u32> = (0..n).map(|i| ctx.neg(ctx.mul(y[i], ctx.pow(x[i], deg_e as u32)))).collect();
    let sol = a.solve_linear(&FqVector::new(ctx, rhs).ok()?).ok()?;
    let mut e_coeffs = sol.entries()[..deg_e].to_vec();
    e_coeffs.push(1);
    let e_poly = PolyFq::new(ctx, e_coeffs);
    let n_poly = PolyFq::new(ctx, sol.entries()[deg_e..].to_vec());
    let (f, rem) = n_poly.div_rem(&e_poly);
    if !rem.is_zero() || f.degree().is_some_and(|d| d >= k) {
        return None;
    }
    Some((f, e_poly))
}
