//! Depth-first enumeration of fixed-weight vectors with incrementally updated syndromes.

use crate::gf_linalg::{FieldCtx, FqMatrix};

/// Columns of `h` at `positions`, each as a vector of length `rows(h)`.
pub(crate) fn columns_at(h: &FqMatrix, positions: &[usize]) -> Vec<Vec<u32>> {
    positions.iter().map(|&p| h.column(p)).collect()
}

/// Calls `f(indices, values, syndrome)` for every vector of weight exactly `w` supported on
/// the given columns, where `indices` index into `cols` and `syndrome = Σ values[j]·cols[indices[j]]`.
/// Enumeration order: supports in lexicographic order, values lexicographic within a support.
pub(crate) fn for_each_weight_vector<F>(ctx: &FieldCtx, cols: &[Vec<u32>], rows: usize, w: usize, mut f: F)
where
    F: FnMut(&[usize], &[u32], &[u32]),
{
    if w > cols.len() {
        return;
    }
    let mut synd = vec![vec![0u32; rows]; w + 1];
    let mut idx = Vec::with_capacity(w);
    let mut vals = Vec::with_capacity(w);
    rec(ctx, cols, w, 0, &mut idx, &mut vals, &mut synd, &mut f);
}

#[allow(clippy::too_many_arguments)]
fn rec<F>(
    ctx: &FieldCtx,
    cols: &[Vec<u32>],
    w: usize,
    start: usize,
    idx: &mut Vec<usize>,
    vals: &mut Vec<u32>,
    synd: &mut [Vec<u32>],
    f: &mut F,
) where
    F: FnMut(&[usize], &[u32], &[u32]),
{
    let depth = idx.len();
    if depth == w {
        f(idx, vals, &synd[depth]);
        return;
    }
    let remaining = w - depth;
    for i in start..=cols.len() - remaining {
        {
            let (lo, hi) = synd.split_at_mut(depth + 1);
            hi[0].copy_from_slice(&lo[depth]);
        }
        idx.push(i);
        vals.push(0);
        for v in 1..ctx.q() {
            for (s, &c) in synd[depth + 1].iter_mut().zip(&cols[i]) {
                *s = ctx.add(*s, c);
            }
            *vals.last_mut().unwrap() = v;
            rec(ctx, cols, w, i + 1, idx, vals, synd, f);
        }
        idx.pop();
        vals.pop();
    }
}
