//! Statistics of random codes: q-ary entropy and its inverses, sphere sizes, the
//! Gilbert-Varshamov distance, expected solution counts and tail bounds, statistical
//! distance, and left-over-hash style uniformity of syndromes.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::codes::{random_code, CodeModel};
use crate::enumerate::{columns_at, for_each_weight_vector};
use crate::error::{Error, Result};
use crate::gf_linalg::{FieldCtx, FqMatrix, FqVector};
use crate::rng::rng_from_seed;

const ENUMERATION_LIMIT: f64 = (1u64 << 22) as f64;
const HISTOGRAM_LIMIT: f64 = (1u64 << 24) as f64;

/// h_q(x) without domain checks; arguments are clamped to [0, 1].
pub(crate) fn hq(q: u32, x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    let lq = (q as f64).ln();
    let mut h = 0.0;
    if x > 0.0 {
        h -= x * (x / (q as f64 - 1.0)).ln();
    }
    if x < 1.0 {
        h -= (1.0 - x) * (1.0 - x).ln();
    }
    h / lq
}

pub fn entropy(q: u32, x: f64) -> Result<f64> {
    if q < 2 || !(0.0..=1.0).contains(&x) {
        return Err(Error::DomainError(format!("entropy needs q >= 2 and x in [0,1], got q={q}, x={x}")));
    }
    Ok(hq(q, x))
}

pub(crate) fn log_q(q: u32, x: f64) -> f64 {
    x.ln() / (q as f64).ln()
}

fn bisect(mut lo: f64, mut hi: f64, increasing: bool, y: f64, q: u32) -> f64 {
    for _ in 0..200 {
        if hi - lo < 1e-13 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if (hq(q, mid) < y) == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Inverse of h_q on [0, (q−1)/q].
pub(crate) fn g_minus(q: u32, y: f64) -> f64 {
    bisect(0.0, (q as f64 - 1.0) / q as f64, true, y.clamp(0.0, 1.0), q)
}

/// Inverse of h_q on [(q−1)/q, 1].
pub(crate) fn g_plus(q: u32, y: f64) -> f64 {
    bisect((q as f64 - 1.0) / q as f64, 1.0, false, y, q)
}

pub fn entropy_inv_minus(q: u32, y: f64) -> Result<f64> {
    if q < 2 || !(0.0..=1.0).contains(&y) {
        return Err(Error::DomainError(format!("g_minus needs y in [0,1], got {y}")));
    }
    Ok(g_minus(q, y))
}

pub fn entropy_inv_plus(q: u32, y: f64) -> Result<f64> {
    let lo = log_q(q, q as f64 - 1.0);
    if q < 2 || !(lo - 1e-15..=1.0).contains(&y) {
        return Err(Error::DomainError(format!("g_plus needs y in [{lo}, 1], got {y}")));
    }
    Ok(g_plus(q, y))
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Natural log of a big integer (−∞ for zero).
pub fn big_ln(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// ln C(n, k): exact for n ≤ 10^4, log-gamma above.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    if n <= 10_000 {
        return big_ln(&binomial(n, k));
    }
    use statrs::function::gamma::ln_gamma;
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

/// ♯S_t = C(n,t)(q−1)^t.
pub fn sphere_size(n: u64, t: u64, q: u32) -> BigUint {
    binomial(n, t) * BigUint::from(q - 1).pow(t as u32)
}

/// (1/n) log_q ♯S_t for finite n.
pub fn sphere_log_rate(n: u64, t: u64, q: u32) -> f64 {
    big_ln(&sphere_size(n, t, q)) / (n as f64 * (q as f64).ln())
}

/// Asymptotic exponent of ♯S_{τn}, i.e. h_q(τ).
pub fn sphere_exponent(tau: f64, q: u32) -> Result<f64> {
    entropy(q, tau)
}

fn qpow(q: u32, e: usize) -> BigUint {
    BigUint::from(q).pow(e as u32)
}

/// Largest t with Σ_{ℓ≤t} C(n,ℓ)(q−1)^ℓ ≤ q^{n−k}.
pub fn gv_distance(n: u64, k: u64, q: u32) -> Result<u64> {
    if k > n || q < 2 {
        return Err(Error::DomainError(format!("gv_distance needs k <= n, q >= 2, got n={n}, k={k}, q={q}")));
    }
    let bound = qpow(q, (n - k) as usize);
    let mut term = BigUint::one();
    let mut sum = BigUint::one();
    let mut t = 0;
    while t < n {
        term = term * (n - t) * (q - 1) / (t + 1);
        if &sum + &term > bound {
            break;
        }
        sum += &term;
        t += 1;
    }
    Ok(t)
}

/// Σ_{ℓ≤t} C(n,ℓ)(q−1)^ℓ.
pub fn ball_size(n: u64, t: u64, q: u32) -> BigUint {
    (0..=t.min(n)).map(|l| sphere_size(n, l, q)).sum()
}

pub fn tau_minus(q: u32, rate: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&rate) {
        return Err(Error::DomainError(format!("rate {rate} outside [0,1]")));
    }
    Ok(g_minus(q, 1.0 - rate))
}

pub fn tau_plus(q: u32, rate: f64) -> Result<f64> {
    let limit = 1.0 - log_q(q, q as f64 - 1.0);
    if !(0.0..=1.0).contains(&rate) || rate > limit + 1e-15 {
        return Err(Error::DomainError(format!("tau_plus needs R <= {limit}, got {rate}")));
    }
    Ok(g_plus(q, (1.0 - rate).max(log_q(q, q as f64 - 1.0))))
}

/// E_H[N_t] = C(n,t)(q−1)^t / q^{n−k}, exactly.
pub fn expected_solutions(n: u64, k: u64, t: u64, q: u32) -> BigRational {
    BigRational::new(sphere_size(n, t, q).into(), qpow(q, (n - k) as usize).into())
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    let (num, den) = (r.numer(), r.denom());
    let num = num.magnitude();
    let den = den.magnitude();
    let sign = if r.numer().sign() == num_bigint::Sign::Minus { -1.0 } else { 1.0 };
    if num.bits() < 1000 && den.bits() < 1000 {
        return sign * num.to_f64().unwrap() / den.to_f64().unwrap();
    }
    sign * (big_ln(num) - big_ln(den)).exp()
}

/// `(markov, chebyshev)` tail bounds for N_t at threshold `a`:
/// P(N_t > a) ≤ E/a and P(|N_t − E| ≥ a) ≤ (q−1)E/a².
pub fn moment_bounds(n: u64, k: u64, t: u64, q: u32, a: f64) -> Result<(f64, f64)> {
    if a <= 0.0 {
        return Err(Error::DomainError(format!("threshold must be positive, got {a}")));
    }
    let e = rational_to_f64(&expected_solutions(n, k, t, q));
    Ok((e / a, (q as f64 - 1.0) * e / (a * a)))
}

/// Number of e with |e| = t and e Hᵀ = s. Full enumeration up to 2^22 candidates,
/// meet-in-the-middle above that when t ≤ n/2.
pub fn count_solutions(h: &FqMatrix, s: &FqVector, t: usize) -> Result<u64> {
    let ctx = h.ctx();
    let n = h.cols();
    let size = rational_to_f64(&BigRational::from_integer(sphere_size(n as u64, t as u64, ctx.q()).into()));
    let all: Vec<usize> = (0..n).collect();
    if size <= ENUMERATION_LIMIT {
        let cols = columns_at(h, &all);
        let mut count = 0u64;
        for_each_weight_vector(ctx, &cols, h.rows(), t, |_, _, syn| {
            if syn == s.entries() {
                count += 1;
            }
        });
        return Ok(count);
    }
    if t > n / 2 {
        return Err(Error::TooLarge(format!("sphere of size {size:.3e} with t > n/2")));
    }
    let half = n / 2;
    let left = columns_at(h, &all[..half]);
    let right = columns_at(h, &all[half..]);
    let rows = h.rows();
    let mut count = 0u64;
    for w1 in 0..=t.min(half) {
        let w2 = t - w1;
        if w2 > n - half {
            continue;
        }
        let mut table: HashMap<Vec<u32>, u64> = HashMap::new();
        for_each_weight_vector(ctx, &left, rows, w1, |_, _, syn| {
            *table.entry(syn.to_vec()).or_default() += 1;
        });
        for_each_weight_vector(ctx, &right, rows, w2, |_, _, syn| {
            let need: Vec<u32> = s.entries().iter().zip(syn).map(|(&a, &b)| ctx.sub(a, b)).collect();
            count += table.get(&need).copied().unwrap_or(0);
        });
    }
    Ok(count)
}

/// Δ(P, Q) = ½ Σ |P(a) − Q(a)| over a common finite support.
pub fn statistical_distance(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::SupportMismatch);
    }
    Ok(0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

fn syndrome_index(q: u32, s: &[u32]) -> usize {
    s.iter().rev().fold(0usize, |acc, &x| acc * q as usize + x as usize)
}

/// Exact Δ(e Hᵀ, uniform) for e uniform on S_t, by enumerating S_t.
pub fn syndrome_distance(h: &FqMatrix, t: usize) -> Result<f64> {
    let ctx = h.ctx();
    let q = ctx.q();
    let (n, r) = (h.cols(), h.rows());
    let size = rational_to_f64(&BigRational::from_integer(sphere_size(n as u64, t as u64, q).into()));
    let bins = (q as f64).powi(r as i32);
    if size > ENUMERATION_LIMIT || bins > HISTOGRAM_LIMIT {
        return Err(Error::TooLarge(format!("|S_t| = {size:.3e}, q^(n-k) = {bins:.3e}")));
    }
    let mut hist = vec![0u64; bins as usize];
    let cols = columns_at(h, &(0..n).collect::<Vec<_>>());
    for_each_weight_vector(ctx, &cols, r, t, |_, _, syn| hist[syndrome_index(q, syn)] += 1);
    // Integer numerators keep the k = n case exactly zero.
    let total: f64 = hist.iter().map(|&c| (c as f64 * bins - size).abs()).sum();
    Ok(0.5 * total / (size * bins))
}

/// Closed-form ½ √((q^{n−k} − 1)/(C(n,t)(q−1)^t)).
pub fn lhl_bound(n: u64, k: u64, t: u64, q: u32) -> f64 {
    let num = qpow(q, (n - k) as usize) - BigUint::one();
    if num.is_zero() {
        return 0.0;
    }
    0.5 * ((big_ln(&num) - big_ln(&sphere_size(n, t, q))) / 2.0).exp()
}

/// Mean and standard error of a sample.
pub fn mean_and_sigma(xs: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / m;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}

/// Exact Δ for each of `samples` uniform H (no rank resampling).
pub fn lhl_distances(n: usize, k: usize, t: usize, q: u32, samples: usize, seed: u64) -> Result<Vec<f64>> {
    let ctx = FieldCtx::new(q as u64)?;
    let mut rng = rng_from_seed(seed);
    (0..samples)
        .map(|_| {
            let h = FqMatrix::random(&ctx, n - k, n, &mut rng);
            syndrome_distance(&h, t)
        })
        .collect()
}

/// `(mean, σ)` of the exact Δ(e Hᵀ, uniform) over sampled H.
pub fn lhl_empirical(n: usize, k: usize, t: usize, q: u32, samples: usize, seed: u64) -> Result<(f64, f64)> {
    Ok(mean_and_sigma(&lhl_distances(n, k, t, q, samples, seed)?))
}

/// A matrix drawn with E_H[Δ] ≤ ε has Δ ≥ √ε with probability at most √ε.
pub fn fixed_matrix_tail(eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::DomainError(format!("epsilon must be in (0,1], got {eps}")));
    }
    Ok(eps.sqrt())
}

/// ½ √(2^{−k} (1 + (1−2τ)²)^n) for binary Bernoulli(τ) errors.
pub fn bernoulli_lhl_bound(n: u64, k: u64, tau: f64, q: u32) -> Result<f64> {
    if q != 2 {
        return Err(Error::DomainError("the Bernoulli bound is binary only".into()));
    }
    if !(0.0..=0.5).contains(&tau) {
        return Err(Error::DomainError(format!("tau must be in [0, 1/2], got {tau}")));
    }
    let b = 1.0 + (1.0 - 2.0 * tau).powi(2);
    Ok(0.5 * ((n as f64 * b.ln() - k as f64 * std::f64::consts::LN_2) / 2.0).exp())
}

/// Exact Δ(e Hᵀ, uniform) for binary H and e with i.i.d. Bernoulli(τ) coordinates.
pub fn bernoulli_syndrome_distance(h: &FqMatrix, tau: f64) -> Result<f64> {
    let (n, r) = (h.cols(), h.rows());
    if h.ctx().q() != 2 || n > 24 || r > 24 {
        return Err(Error::TooLarge(format!("binary n <= 24 required, got q={}, n={n}", h.ctx().q())));
    }
    let cols: Vec<usize> = (0..n).map(|j| (0..r).fold(0usize, |acc, i| acc | ((h.get(i, j) as usize) << i))).collect();
    let prob: Vec<f64> = (0..=n).map(|w| tau.powi(w as i32) * (1.0 - tau).powi((n - w) as i32)).collect();
    let mut hist = vec![0f64; 1 << r];
    // Gray-code walk: consecutive error vectors differ in one bit.
    let (mut syn, mut weight) = (0usize, 0usize);
    hist[0] += prob[0];
    for i in 1u64..1 << n {
        let bit = i.trailing_zeros() as usize;
        syn ^= cols[bit];
        let gray = i ^ (i >> 1);
        weight = if gray >> bit & 1 == 1 { weight + 1 } else { weight - 1 };
        hist[syn] += prob[weight];
    }
    let uniform = 1.0 / (1u64 << r) as f64;
    Ok(0.5 * hist.iter().map(|p| (p - uniform).abs()).sum::<f64>())
}

pub fn bernoulli_lhl_empirical(n: usize, k: usize, tau: f64, samples: usize, seed: u64) -> Result<(f64, f64)> {
    let ctx = FieldCtx::new(2)?;
    let mut rng = rng_from_seed(seed);
    let ds: Vec<f64> = (0..samples)
        .map(|_| bernoulli_syndrome_distance(&FqMatrix::random(&ctx, n - k, n, &mut rng), tau))
        .collect::<Result<_>>()?;
    Ok(mean_and_sigma(&ds))
}

/// Fraction of sampled [n, ⌊Rn⌋]_q codes with (1−ε)τ⁻ < d_min/n < (1+ε)τ⁻.
pub fn min_distance_concentration(n: usize, rate: f64, q: u32, eps: f64, samples: usize, seed: u64) -> Result<f64> {
    let ctx = FieldCtx::new(q as u64)?;
    let k = (rate * n as f64 + 1e-9).floor() as usize;
    if (q as f64).powi(k as i32) > ENUMERATION_LIMIT {
        return Err(Error::TooLarge(format!("q^k = {q}^{k} exceeds 2^22")));
    }
    let tm = tau_minus(q, rate)?;
    let mut rng = rng_from_seed(seed);
    let mut hits = 0usize;
    for _ in 0..samples {
        let code = random_code(&ctx, n, k, CodeModel::ParityCheck, rng.gen())?;
        let d = code.min_distance_bruteforce()? as f64 / n as f64;
        if (1.0 - eps) * tm < d && d < (1.0 + eps) * tm {
            hits += 1;
        }
    }
    Ok(hits as f64 / samples as f64)
}

/// N_t for `samples` uniform H (no rank resampling) against one fixed uniform s.
pub fn coset_count_samples(n: usize, k: usize, t: usize, q: u32, samples: usize, seed: u64) -> Result<Vec<u64>> {
    let ctx = FieldCtx::new(q as u64)?;
    let mut rng = rng_from_seed(seed);
    let s = FqVector::random(&ctx, n - k, &mut rng);
    (0..samples).map(|_| count_solutions(&FqMatrix::random(&ctx, n - k, n, &mut rng), &s, t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit::weight_vectors;
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn entropy_landmarks() {
        for q in [2u32, 3, 5] {
            let top = (q as f64 - 1.0) / q as f64;
            assert!((entropy(q, top).unwrap() - 1.0).abs() < 1e-12);
            assert_eq!(entropy(q, 0.0).unwrap(), 0.0);
            assert!((entropy(q, 1.0).unwrap() - log_q(q, q as f64 - 1.0)).abs() < 1e-12);
        }
        assert!(entropy(2, 1.5).is_err());
        assert!((entropy_inv_minus(2, 0.5).unwrap() - 0.110028).abs() < 1e-6);
        assert!(entropy_inv_plus(3, 0.1).is_err());
    }

    #[test]
    fn sphere_sizes() {
        assert_eq!(sphere_size(10, 0, 3), BigUint::one());
        assert_eq!(sphere_size(7, 1, 2), BigUint::from(7u32));
        assert_eq!(sphere_size(20, 4, 2), BigUint::from(4845u32));
        // (1/n) log_q ♯S_t lies in [h_q(τ) − c log_q(n)/n, h_q(τ)]; c = 1 suffices here.
        for n in [50u64, 100, 200] {
            let t = n / 5;
            let rate = sphere_log_rate(n, t, 3);
            let h = hq(3, 0.2);
            assert!(rate <= h && rate >= h - log_q(3, n as f64) / n as f64, "{n}: {rate} vs {h}");
        }
    }

    #[test]
    fn gv_examples() {
        assert_eq!(gv_distance(7, 4, 2).unwrap(), 1);
        assert_eq!(gv_distance(9, 9, 3).unwrap(), 0);
        assert_eq!(gv_distance(5, 0, 2).unwrap(), 5);
        let t = gv_distance(10_000, 5_000, 2).unwrap() as f64 / 10_000.0;
        assert!((t - tau_minus(2, 0.5).unwrap()).abs() < 0.01);
    }

    #[test]
    fn tau_plus_domain() {
        assert!(tau_plus(3, 0.5).is_err());
        let tp = tau_plus(3, 0.3).unwrap();
        assert!((hq(3, tp) - 0.7).abs() < 1e-9 && tp > 2.0 / 3.0);
        assert!((tau_plus(2, 0.5).unwrap() - (1.0 - tau_minus(2, 0.5).unwrap())).abs() < 1e-9);
    }

    #[test]
    fn expectation_is_exact() {
        let e = expected_solutions(20, 10, 4, 2);
        assert_eq!(e, BigRational::new(4845.into(), 1024.into()));
        assert!((rational_to_f64(&e) - 4.731_445_312_5).abs() < 1e-12);
        assert_eq!(expected_solutions(9, 4, 0, 3), BigRational::new(1.into(), 243.into()));
    }

    #[test]
    fn count_solutions_mitm_matches_full() {
        let ctx = FieldCtx::new(2).unwrap();
        let mut rng = rng_from_seed(12);
        let h = FqMatrix::random(&ctx, 16, 32, &mut rng);
        let x = crate::instances::random_weight_vector(&ctx, 32, 6, &mut rng);
        let s = h.mul_vec(&x);
        // C(32,6) = 906192 is under the enumeration limit; C(32,8) ≈ 1.05e7 is not.
        let full = count_solutions(&h, &s, 6).unwrap();
        assert!(full >= 1);
        let x8 = crate::instances::random_weight_vector(&ctx, 32, 8, &mut rng);
        let s8 = h.mul_vec(&x8);
        let mitm = count_solutions(&h, &s8, 8).unwrap();
        let cols = columns_at(&h, &(0..32).collect::<Vec<_>>());
        let mut brute = 0u64;
        for_each_weight_vector(&ctx, &cols, 16, 8, |_, _, syn| brute += u64::from(syn == s8.entries()));
        assert_eq!(mitm, brute);
    }

    #[test]
    fn distance_examples() {
        let p = [0.2, 0.3, 0.5];
        assert_eq!(statistical_distance(&p, &p).unwrap(), 0.0);
        for q in [2usize, 3, 7] {
            let mut point = vec![0.0; q];
            point[0] = 1.0;
            let uniform = vec![1.0 / q as f64; q];
            let d = statistical_distance(&point, &uniform).unwrap();
            assert!((d - (q as f64 - 1.0) / q as f64).abs() < 1e-12);
        }
        assert_eq!(statistical_distance(&[1.0], &[0.5, 0.5]).unwrap_err(), Error::SupportMismatch);
    }

    #[test]
    fn lhl_examples() {
        // k = n: no parity checks, syndrome space is a single point.
        assert_eq!(syndrome_distance(&FqMatrix::zeros(&FieldCtx::new(2).unwrap(), 0, 8), 3).unwrap(), 0.0);
        // C(16,8) = 12870 ≥ (2^6)^2: bound ≤ ½ q^{−(n−k)/2}.
        let b = lhl_bound(16, 10, 8, 2);
        assert!(b <= 0.5 * 2f64.powf(-3.0));
        let (mean, _) = lhl_empirical(16, 10, 8, 2, 50, 3).unwrap();
        assert!(mean <= b);
        let (mean, _) = lhl_empirical(16, 8, 6, 2, 200, 1).unwrap();
        assert!(mean <= lhl_bound(16, 8, 6, 2), "{mean}");
    }

    #[test]
    fn fixed_matrix_tail_law() {
        assert_eq!(fixed_matrix_tail(1.0).unwrap(), 1.0);
        assert!((fixed_matrix_tail(0.04).unwrap() - 0.2).abs() < 1e-15);
        let bound = lhl_bound(14, 7, 5, 2);
        let threshold = bound.sqrt();
        let ds = lhl_distances(14, 7, 5, 2, 500, 9).unwrap();
        let frac = ds.iter().filter(|&&d| d >= threshold).count() as f64 / 500.0;
        let sigma = (threshold * (1.0 - threshold) / 500.0).sqrt();
        assert!(frac <= threshold + 3.0 * sigma, "{frac} vs {threshold}");
    }

    #[test]
    fn bernoulli_bound() {
        assert!((bernoulli_lhl_bound(16, 8, 0.5, 2).unwrap() - 0.5 * 2f64.powf(-4.0)).abs() < 1e-15);
        assert!((bernoulli_lhl_bound(16, 8, 0.0, 2).unwrap() - 0.5 * 2f64.powf(4.0)).abs() < 1e-12);
        assert!(bernoulli_lhl_bound(16, 8, 0.1, 3).is_err());
        let (mean, _) = bernoulli_lhl_empirical(16, 8, 0.25, 40, 2).unwrap();
        assert!(mean <= bernoulli_lhl_bound(16, 8, 0.25, 2).unwrap(), "{mean}");
    }

    #[test]
    fn bernoulli_distance_matches_direct_sum() {
        let ctx = FieldCtx::new(2).unwrap();
        let h = FqMatrix::random(&ctx, 4, 9, &mut rng_from_seed(4));
        let tau: f64 = 0.3;
        let mut hist = vec![0f64; 16];
        for w in 0..=9 {
            for e in weight_vectors(2, 9, w) {
                let s = h.mul_vec(&FqVector::new(&ctx, e).unwrap());
                hist[syndrome_index(2, s.entries())] += tau.powi(w as i32) * (1.0 - tau).powi(9 - w as i32);
            }
        }
        let want = statistical_distance(&hist, &[1.0 / 16.0; 16]).unwrap();
        assert!((bernoulli_syndrome_distance(&h, tau).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn coset_expectation_small() {
        // Mean of N_t over sampled H against the exact rational expectation.
        let counts = coset_count_samples(12, 6, 3, 2, 4000, 5).unwrap();
        let xs: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
        let (mean, sigma) = mean_and_sigma(&xs);
        let expect = rational_to_f64(&expected_solutions(12, 6, 3, 2));
        assert!((mean - expect).abs() <= 3.0 * sigma, "{mean} vs {expect}");
    }

    #[test]
    fn min_distance_windows() {
        // ε = 10 makes the window (−∞, 11τ⁻) ⊇ [1/n, 1] at R = 0.5.
        assert_eq!(min_distance_concentration(12, 0.5, 2, 10.0, 20, 1).unwrap(), 1.0);
        let small = min_distance_concentration(14, 0.5, 2, 0.6, 300, 2).unwrap();
        let large = min_distance_concentration(24, 0.5, 2, 0.6, 300, 3).unwrap();
        assert!(large >= small, "{small} -> {large}");
        assert!(large >= 0.9, "{large}");
    }

    fn max_event_distance(p: &[f64], q: &[f64]) -> f64 {
        let m = p.len();
        (0u32..1 << m)
            .map(|mask| (0..m).filter(|&i| mask >> i & 1 == 1).map(|i| p[i] - q[i]).sum::<f64>().abs())
            .fold(0.0, f64::max)
    }

    fn normalise(v: Vec<f64>) -> Vec<f64> {
        let s: f64 = v.iter().sum();
        v.into_iter().map(|x| x / s).collect()
    }

    fn arb_dist(len: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.01f64..1.0, len).prop_map(normalise)
    }

    proptest! {
        #[test]
        fn inverse_round_trips(q in prop::sample::select(vec![2u32, 3, 5, 7]), u in 0.0f64..1.0) {
            let top = (q as f64 - 1.0) / q as f64;
            let x = u * top;
            prop_assert!((entropy_inv_minus(q, hq(q, x)).unwrap() - x).abs() < 1e-9);
            let y = top + u * (1.0 - top);
            prop_assert!((entropy_inv_plus(q, hq(q, y)).unwrap() - y).abs() < 1e-9);
        }

        #[test]
        fn gv_is_exact_argmax(q in prop::sample::select(vec![2u32, 3, 5]), n in 1u64..=64, kf in 0.0f64..=1.0) {
            let k = (kf * n as f64) as u64;
            let t = gv_distance(n, k, q).unwrap();
            let bound = qpow(q, (n - k) as usize);
            prop_assert!(ball_size(n, t, q) <= bound);
            prop_assert!(t == n || ball_size(n, t + 1, q) > bound);
        }

        #[test]
        fn expectation_equals_sphere_ratio(q in prop::sample::select(vec![2u32, 3, 5]), n in 1u64..40, kf in 0.0f64..1.0, tf in 0.0f64..=1.0) {
            let k = (kf * n as f64) as u64;
            let t = (tf * n as f64) as u64;
            let e = expected_solutions(n, k, t, q);
            prop_assert_eq!(e * BigRational::from_integer(qpow(q, (n - k) as usize).into()),
                            BigRational::from_integer(sphere_size(n, t, q).into()));
        }

        #[test]
        fn distance_metric_laws(len in 1usize..=12, seed in any::<u64>()) {
            let mut rng = rng_from_seed(seed);
            let mut draw = || normalise((0..len).map(|_| rng.gen_range(0.0..1.0) + 1e-3).collect());
            let (a, b, c) = (draw(), draw(), draw());
            let ab = statistical_distance(&a, &b).unwrap();
            prop_assert!((ab - statistical_distance(&b, &a).unwrap()).abs() < 1e-15);
            prop_assert!(ab <= statistical_distance(&a, &c).unwrap() + statistical_distance(&c, &b).unwrap() + 1e-12);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&ab));
            prop_assert!((ab - max_event_distance(&a, &b)).abs() < 1e-12);
        }

        #[test]
        fn data_processing(p in arb_dist(8), q in arb_dist(8), map in prop::collection::vec(0usize..4, 8)) {
            let mut fp = vec![0.0; 4];
            let mut fq = vec![0.0; 4];
            for i in 0..8 {
                fp[map[i]] += p[i];
                fq[map[i]] += q[i];
            }
            prop_assert!(statistical_distance(&fp, &fq).unwrap() <= statistical_distance(&p, &q).unwrap() + 1e-12);
        }
    }
}
