//! Brute-force oracles shared by unit tests. Deliberately naive: every candidate
//! vector is built explicitly and checked with a full matrix-vector product.

use std::collections::BTreeSet;

use crate::gf_linalg::{hamming_weight, FqVector};
use crate::instances::DecodingInstance;

/// Every vector of length `n` and weight exactly `w` over F_q, in lexicographic support order.
pub fn weight_vectors(q: u32, n: usize, w: usize) -> Vec<Vec<u32>> {
    fn rec(q: u32, n: usize, w: usize, start: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if w == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < w {
                break;
            }
            for v in 1..q {
                cur[i] = v;
                rec(q, n, w - 1, i + 1, cur, out);
            }
            cur[i] = 0;
        }
    }
    let mut out = Vec::new();
    rec(q, n, w, 0, &mut vec![0; n], &mut out);
    out
}

pub fn all_weight_solutions(inst: &DecodingInstance) -> BTreeSet<FqVector> {
    weight_vectors(inst.ctx().q(), inst.n(), inst.t())
        .into_iter()
        .map(|v| FqVector::new(inst.ctx(), v).unwrap())
        .filter(|e| hamming_weight(e) == inst.t() && inst.h().mul_vec(e) == *inst.s())
        .collect()
}
