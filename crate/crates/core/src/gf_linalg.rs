//! Prime-field arithmetic and dense linear algebra.
//!
//! Residues are stored as `u32` in `[0, q)`. Dot products accumulate in `u64` and
//! reduce once at the end, which cannot overflow for `q <= 2^16` and length `<= 2^20`.
//! Elimination always pivots on the first nonzero entry, so results are deterministic.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};

const INV_TABLE_LIMIT: u32 = 1 << 12;

#[derive(Clone)]
pub struct FieldCtx {
    q: u32,
    inv: Option<Arc<[u32]>>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)
    }
}

impl PartialOrd for FieldCtx {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldCtx {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.q.cmp(&other.q)
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
    }
}
impl Eq for FieldCtx {}

impl std::hash::Hash for FieldCtx {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.q.hash(state);
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldCtx {
    pub fn new(q: u64) -> Result<Self> {
        if q > 1 << 16 || !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        let q = q as u32;
        let mut ctx = FieldCtx { q, inv: None };
        if q < INV_TABLE_LIMIT {
            let mut table = vec![0u32; q as usize];
            for x in 1..q {
                table[x as usize] = ctx.pow(x, q - 2);
            }
            ctx.inv = Some(table.into());
        }
        Ok(ctx)
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.q as u64) as u32
    }

    pub fn pow(&self, mut base: u32, mut exp: u32) -> u32 {
        let mut acc = 1 % self.q;
        base %= self.q;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `x` must be nonzero.
    #[inline]
    pub fn inv(&self, x: u32) -> u32 {
        debug_assert!(x != 0 && x < self.q);
        match &self.inv {
            Some(t) => t[x as usize],
            None => self.pow(x, self.q - 2),
        }
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u32 {
        (x % self.q as u64) as u32
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.q)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.gen_range(1..self.q)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqVector {
    ctx: FieldCtx,
    entries: Vec<u32>,
}

impl FqVector {
    pub fn new(ctx: &FieldCtx, entries: Vec<u32>) -> Result<Self> {
        if let Some(&bad) = entries.iter().find(|&&x| x >= ctx.q) {
            return Err(Error::OutOfRange(bad as u64, ctx.q));
        }
        Ok(FqVector { ctx: ctx.clone(), entries })
    }

    /// Builds a vector from arbitrary integers, reducing them modulo q.
    pub fn from_ints(ctx: &FieldCtx, values: &[i64]) -> Self {
        let q = ctx.q as i64;
        let entries = values.iter().map(|v| v.rem_euclid(q) as u32).collect();
        FqVector { ctx: ctx.clone(), entries }
    }

    pub(crate) fn from_raw(ctx: &FieldCtx, entries: Vec<u32>) -> Self {
        debug_assert!(entries.iter().all(|&x| x < ctx.q));
        FqVector { ctx: ctx.clone(), entries }
    }

    pub fn zeros(ctx: &FieldCtx, n: usize) -> Self {
        FqVector { ctx: ctx.clone(), entries: vec![0; n] }
    }

    pub fn random<R: Rng + ?Sized>(ctx: &FieldCtx, n: usize, rng: &mut R) -> Self {
        let entries = (0..n).map(|_| ctx.random_element(rng)).collect();
        FqVector { ctx: ctx.clone(), entries }
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<u32> {
        self.entries
    }

    pub fn get(&self, i: usize) -> u32 {
        self.entries[i]
    }

    pub fn set(&mut self, i: usize, v: u32) {
        assert!(v < self.ctx.q);
        self.entries[i] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.entries[i] != 0).collect()
    }

    pub fn add(&self, other: &FqVector) -> FqVector {
        assert_eq!(self.len(), other.len());
        let e = self.entries.iter().zip(&other.entries).map(|(&a, &b)| self.ctx.add(a, b)).collect();
        FqVector::from_raw(&self.ctx, e)
    }

    pub fn sub(&self, other: &FqVector) -> FqVector {
        assert_eq!(self.len(), other.len());
        let e = self.entries.iter().zip(&other.entries).map(|(&a, &b)| self.ctx.sub(a, b)).collect();
        FqVector::from_raw(&self.ctx, e)
    }

    pub fn scale(&self, c: u32) -> FqVector {
        let e = self.entries.iter().map(|&a| self.ctx.mul(a, c)).collect();
        FqVector::from_raw(&self.ctx, e)
    }

    pub fn dot(&self, other: &FqVector) -> u32 {
        assert_eq!(self.len(), other.len());
        dot(&self.ctx, &self.entries, &other.entries)
    }
}

impl fmt::Display for FqVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_residues(f, &self.entries)
    }
}

fn write_residues(f: &mut fmt::Formatter<'_>, xs: &[u32]) -> fmt::Result {
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

pub fn hamming_weight(v: &FqVector) -> usize {
    v.entries.iter().filter(|&&x| x != 0).count()
}

#[inline]
pub(crate) fn dot(ctx: &FieldCtx, a: &[u32], b: &[u32]) -> u32 {
    let acc: u64 = a.iter().zip(b).map(|(&x, &y)| x as u64 * y as u64).sum();
    ctx.reduce(acc)
}

/// `dst += c * src`, entrywise.
#[inline]
fn axpy(ctx: &FieldCtx, dst: &mut [u32], c: u32, src: &[u32]) {
    if c == 0 {
        return;
    }
    if ctx.q == 2 {
        for (d, &s) in dst.iter_mut().zip(src) {
            *d ^= s;
        }
        return;
    }
    let q = ctx.q as u64;
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = ((*d as u64 + c as u64 * s as u64) % q) as u32;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqMatrix {
    ctx: FieldCtx,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Output of [`FqMatrix::row_reduce_systematic`]: `S * M * P = reduced = (I | A)`,
/// where column `j` of `M * P` is column `colperm[j]` of `M`.
#[derive(Clone, Debug)]
pub struct Systematic {
    pub s: FqMatrix,
    pub colperm: Vec<usize>,
    pub reduced: FqMatrix,
}

impl FqMatrix {
    pub fn zeros(ctx: &FieldCtx, rows: usize, cols: usize) -> Self {
        FqMatrix { ctx: ctx.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(ctx: &FieldCtx, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % ctx.q;
        }
        m
    }

    pub fn from_rows(ctx: &FieldCtx, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            if let Some(&bad) = r.iter().find(|&&x| x >= ctx.q) {
                return Err(Error::OutOfRange(bad as u64, ctx.q));
            }
            data.extend_from_slice(r);
        }
        Ok(FqMatrix { ctx: ctx.clone(), rows: rows.len(), cols, data })
    }

    /// Parses rows of 0/1 characters, e.g. `["1001", "0110"]`. Intended for small literals.
    pub fn from_bit_strings(ctx: &FieldCtx, rows: &[&str]) -> Result<Self> {
        let rows: Vec<Vec<u32>> = rows
            .iter()
            .map(|r| r.chars().filter(|c| !c.is_whitespace()).map(|c| c.to_digit(10).unwrap_or(u32::MAX)).collect())
            .collect();
        Self::from_rows(ctx, &rows)
    }

    pub fn from_fn(ctx: &FieldCtx, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u32) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j) % ctx.q);
            }
        }
        FqMatrix { ctx: ctx.clone(), rows, cols, data }
    }

    pub fn random<R: Rng + ?Sized>(ctx: &FieldCtx, rows: usize, cols: usize, rng: &mut R) -> Self {
        let data = (0..rows * cols).map(|_| ctx.random_element(rng)).collect();
        FqMatrix { ctx: ctx.clone(), rows, cols, data }
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        assert!(v < self.ctx.q);
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vector(&self, i: usize) -> FqVector {
        FqVector::from_raw(&self.ctx, self.row(i).to_vec())
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> FqMatrix {
        FqMatrix::from_fn(&self.ctx, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn mul(&self, other: &FqMatrix) -> FqMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let ot = other.transpose();
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                data.push(dot(&self.ctx, self.row(i), ot.row(j)));
            }
        }
        FqMatrix { ctx: self.ctx.clone(), rows: self.rows, cols: other.cols, data }
    }

    /// `M xᵀ` as a vector of length `rows`; equivalently `x Mᵀ`.
    pub fn mul_vec(&self, x: &FqVector) -> FqVector {
        assert_eq!(self.cols, x.len(), "matrix-vector dimension mismatch");
        let e = (0..self.rows).map(|i| dot(&self.ctx, self.row(i), x.entries())).collect();
        FqVector::from_raw(&self.ctx, e)
    }

    /// `x M` for a row vector `x` of length `rows`.
    pub fn left_mul_vec(&self, x: &FqVector) -> FqVector {
        assert_eq!(self.rows, x.len(), "vector-matrix dimension mismatch");
        let mut acc = vec![0u32; self.cols];
        for i in 0..self.rows {
            axpy(&self.ctx, &mut acc, x.get(i), self.row(i));
        }
        FqVector::from_raw(&self.ctx, acc)
    }

    pub fn select_columns(&self, cols: &[usize]) -> FqMatrix {
        FqMatrix::from_fn(&self.ctx, self.rows, cols.len(), |i, j| self.get(i, cols[j]))
    }

    pub fn select_rows(&self, rows: &[usize]) -> FqMatrix {
        FqMatrix::from_fn(&self.ctx, rows.len(), self.cols, |i, j| self.get(rows[i], j))
    }

    pub fn hstack(&self, other: &FqMatrix) -> FqMatrix {
        assert_eq!(self.rows, other.rows);
        let c = self.cols;
        FqMatrix::from_fn(&self.ctx, self.rows, c + other.cols, |i, j| {
            if j < c {
                self.get(i, j)
            } else {
                other.get(i, j - c)
            }
        })
    }

    pub fn vstack(&self, other: &FqMatrix) -> FqMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        FqMatrix { ctx: self.ctx.clone(), rows: self.rows + other.rows, cols: self.cols, data }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let c = self.cols;
        let (lo, hi) = (a.min(b), a.max(b));
        let (left, right) = self.data.split_at_mut(hi * c);
        left[lo * c..lo * c + c].swap_with_slice(&mut right[..c]);
    }

    fn scale_row(&mut self, i: usize, c: u32) {
        let ctx = self.ctx.clone();
        for x in &mut self.data[i * self.cols..(i + 1) * self.cols] {
            *x = ctx.mul(*x, c);
        }
    }

    /// Clears column `col` in every row except `pivot_row`, whose pivot entry must be 1.
    fn clear_column(&mut self, pivot_row: usize, col: usize) {
        let c = self.cols;
        let pivot: Vec<u32> = self.row(pivot_row).to_vec();
        for i in 0..self.rows {
            if i == pivot_row {
                continue;
            }
            let f = self.data[i * c + col];
            if f != 0 {
                let factor = self.ctx.neg(f);
                axpy(&self.ctx, &mut self.data[i * c..(i + 1) * c], factor, &pivot);
            }
        }
    }

    /// Gauss-Jordan on the columns listed in `cols`, in order, looking for pivots
    /// among rows not yet used. Returns the pivot columns found (row `i` holds pivot `i`).
    fn gauss_jordan(&mut self, cols: impl IntoIterator<Item = usize>) -> Vec<usize> {
        let mut pivots = Vec::new();
        for col in cols {
            let r = pivots.len();
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, col) != 0) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self.ctx.inv(self.get(r, col));
            self.scale_row(r, inv);
            self.clear_column(r, col);
            pivots.push(col);
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.gauss_jordan(0..self.cols).len()
    }

    /// Reduced row echelon form (pivot columns returned alongside).
    pub fn rref(&self) -> (FqMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.gauss_jordan(0..self.cols);
        (m, pivots)
    }

    /// A basis of the row space, as the nonzero rows of the RREF.
    pub fn row_basis(&self) -> FqMatrix {
        let (m, pivots) = self.rref();
        m.select_rows(&(0..pivots.len()).collect::<Vec<_>>())
    }

    pub fn row_reduce_systematic(&self) -> Result<Systematic> {
        let r = self.rows;
        let mut aug = self.hstack(&FqMatrix::identity(&self.ctx, r));
        let pivots = aug.gauss_jordan(0..self.cols);
        if pivots.len() < r {
            return Err(Error::RankDeficient);
        }
        let mut colperm = pivots.clone();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        colperm.extend((0..self.cols).filter(|&j| !is_pivot[j]));
        let s = aug.select_columns(&(self.cols..self.cols + r).collect::<Vec<_>>());
        let reduced = aug.select_columns(&colperm);
        Ok(Systematic { s, colperm, reduced })
    }

    /// Finds an invertible `S` with `(S M)[:, cols] = (I_m ; 0)` where `m = cols.len()`.
    /// Returns `(S, S M)`, or `None` when the selected columns are linearly dependent.
    pub fn eliminate_on_columns(&self, cols: &[usize]) -> Option<(FqMatrix, FqMatrix)> {
        let r = self.rows;
        let n = self.cols;
        let mut aug = self.hstack(&FqMatrix::identity(&self.ctx, r));
        for (j, &col) in cols.iter().enumerate() {
            let p = (j..r).find(|&i| aug.get(i, col) != 0)?;
            aug.swap_rows(j, p);
            let inv = self.ctx.inv(aug.get(j, col));
            aug.scale_row(j, inv);
            aug.clear_column(j, col);
        }
        let s = aug.select_columns(&(n..n + r).collect::<Vec<_>>());
        let sm = aug.select_columns(&(0..n).collect::<Vec<_>>());
        Some((s, sm))
    }

    /// Some `x` with `M xᵀ = bᵀ`; free variables are set to zero.
    pub fn solve_linear(&self, b: &FqVector) -> Result<FqVector> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!("rhs length {} for {} rows", b.len(), self.rows)));
        }
        let n = self.cols;
        let bm = FqMatrix { ctx: self.ctx.clone(), rows: self.rows, cols: 1, data: b.entries().to_vec() };
        let mut aug = self.hstack(&bm);
        let pivots = aug.gauss_jordan(0..n);
        if (pivots.len()..self.rows).any(|i| aug.get(i, n) != 0) {
            return Err(Error::NoSolution);
        }
        let mut x = vec![0u32; n];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(i, n);
        }
        Ok(FqVector::from_raw(&self.ctx, x))
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<FqMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let cols: Vec<usize> = (0..self.cols).collect();
        self.eliminate_on_columns(&cols).map(|(s, _)| s)
    }
}

impl fmt::Display for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write_residues(f, self.row(i))?;
            writeln!(f)?;
        }
        Ok(())
    }
}
