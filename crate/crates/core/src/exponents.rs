//! Asymptotic complexity exponents (1/n)·log_q(cost) of generic decoders as functions of
//! the relative weight τ = t/n at rate R = k/n, plus CSV curve emission.
//!
//! Optimized exponents use golden-section search; every result is cross-checked against a
//! uniform grid and flagged when the grid finds a value lower by more than [`GRID_SLACK`].

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::randcode_stats::{g_minus, g_plus, hq, log_q};

pub const DEFAULT_TOLERANCE: f64 = 1e-7;
pub const GRID_SLACK: f64 = 1e-4;
const GRID_PROBES: usize = 32;
const GOLDEN_BUDGET: usize = 400;
const MAX_DEPTH: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Prange,
    Dumer,
    DumerIsd,
    Wagner,
    WagnerAmortized,
    WagnerIsd,
    /// h_q(τ) − (1−R): exponent of the expected number of solutions.
    Expected,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Prange => "prange",
            Algorithm::Dumer => "dumer",
            Algorithm::DumerIsd => "isd-dumer",
            Algorithm::Wagner => "wagner",
            Algorithm::WagnerAmortized => "wagner-amortized",
            Algorithm::WagnerIsd => "isd-wagner",
            Algorithm::Expected => "expected",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        [
            Algorithm::Prange,
            Algorithm::Dumer,
            Algorithm::DumerIsd,
            Algorithm::Wagner,
            Algorithm::WagnerAmortized,
            Algorithm::WagnerIsd,
            Algorithm::Expected,
        ]
        .into_iter()
        .find(|a| a.name() == s)
        .ok_or_else(|| Error::Parse(format!("unknown algorithm '{s}'")))
    }

    /// Names of the argmin parameters reported alongside the exponent.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Algorithm::Prange => &["gamma"],
            Algorithm::Dumer | Algorithm::Expected => &[],
            Algorithm::DumerIsd => &["lambda", "pi", "sigma"],
            Algorithm::Wagner | Algorithm::WagnerAmortized => &["a"],
            Algorithm::WagnerIsd => &["lambda", "pi", "a"],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightGoal {
    Short,
    Large,
    /// Short below (q−1)(1−R)/q, large above R + (q−1)(1−R)/q, zero in between.
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogBase {
    Q,
    Two,
}

#[derive(Clone, Copy, Debug)]
pub struct ExponentQuery {
    pub q: u32,
    pub rate: f64,
    pub tau: f64,
    pub base: LogBase,
    pub tolerance: f64,
    pub goal: WeightGoal,
}

impl ExponentQuery {
    pub fn new(q: u32, rate: f64, tau: f64) -> Self {
        ExponentQuery { q, rate, tau, base: LogBase::Q, tolerance: DEFAULT_TOLERANCE, goal: WeightGoal::Auto }
    }

    fn validate(&self) -> Result<()> {
        if self.q < 2 {
            return Err(Error::DomainError(format!("q = {} < 2", self.q)));
        }
        if !(self.rate > 0.0 && self.rate < 1.0) || !(self.tau > 0.0 && self.tau < 1.0) {
            return Err(Error::DomainError(format!("R = {} and tau = {} must lie in (0,1)", self.rate, self.tau)));
        }
        Ok(())
    }

    /// (q−1)(1−R)/q, the lower end of the easy band.
    pub fn easy_low(&self) -> f64 {
        (self.q as f64 - 1.0) * (1.0 - self.rate) / self.q as f64
    }

    pub fn easy_high(&self) -> f64 {
        self.rate + self.easy_low()
    }

    fn scale(&self) -> f64 {
        match self.base {
            LogBase::Q => 1.0,
            LogBase::Two => (self.q as f64).log2(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExponentValue {
    pub value: f64,
    pub params: Vec<f64>,
    /// Set when the grid cross-check beat golden-section search by more than [`GRID_SLACK`].
    pub warning: bool,
}

/// (1−R−λ)·h_q(x/(1−R−λ)) with the continuous extension at a vanishing length.
/// Returns None when x exceeds the available length.
fn scaled_entropy(q: u32, x: f64, len: f64) -> Option<f64> {
    if len <= 1e-15 {
        return (x.abs() <= 1e-12).then_some(0.0);
    }
    let y = x / len;
    if !(-1e-12..=1.0 + 1e-12).contains(&y) {
        return None;
    }
    Some(len * hq(q, y))
}

// ---------------------------------------------------------------------------------------------
// One-dimensional optimization

/// Golden-section minimum of `f` on [lo, hi]; returns (argmin, min).
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..GOLDEN_BUDGET {
        if (b - a).abs() <= tol {
            let x = 0.5 * (a + b);
            let fx = f(x);
            let (fa, fb) = (f(lo), f(hi));
            // Endpoints are admissible and often optimal for these piecewise functions.
            let best = [(x, fx), (lo, fa), (hi, fb), (c, fc), (d, fd)].into_iter().fold((x, fx), |acc, p| {
                if p.1 < acc.1 {
                    p
                } else {
                    acc
                }
            });
            return Ok(best);
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    Err(Error::OptimizerNoConverge)
}

/// Golden-section result combined with a grid scan; the grid winner is kept (with a warning)
/// when it is lower by more than [`GRID_SLACK`].
fn minimize<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64, bool)> {
    let (x, fx) = golden_section(&mut f, lo, hi, tol)?;
    let (gx, gfx) = (0..GRID_PROBES)
        .map(|i| lo + (hi - lo) * i as f64 / (GRID_PROBES - 1) as f64)
        .map(|p| (p, f(p)))
        .fold((lo, f64::INFINITY), |acc, p| if p.1 < acc.1 { p } else { acc });
    if gfx < fx - GRID_SLACK {
        Ok((gx, gfx, true))
    } else if gfx < fx {
        Ok((gx, gfx, false))
    } else {
        Ok((x, fx, false))
    }
}

/// Largest λ in [0, hi] with `ok(λ)` assuming `ok` holds on an initial interval.
fn feasible_upper(mut ok: impl FnMut(f64) -> bool, hi: f64) -> f64 {
    if ok(hi) {
        return hi;
    }
    let (mut a, mut b) = (0.0, hi);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if ok(m) {
            a = m;
        } else {
            b = m;
        }
    }
    a
}

// ---------------------------------------------------------------------------------------------
// Closed forms

/// γ of the Prange exponent, by regime.
pub fn prange_gamma(q: u32, rate: f64, tau: f64) -> f64 {
    let b = (q as f64 - 1.0) * (1.0 - rate) / q as f64;
    if tau < b {
        0.0
    } else if tau <= rate + b {
        tau - b
    } else {
        rate
    }
}

fn prange_raw(q: u32, rate: f64, tau: f64) -> f64 {
    let gamma = prange_gamma(q, rate, tau);
    (1.0 - rate).min(hq(q, tau)) - (1.0 - rate) * hq(q, (tau - gamma) / (1.0 - rate))
}

/// Prange's exponent min(1−R, h_q(τ)) − (1−R)·h_q((τ−γ)/(1−R)).
pub fn prange_exponent(query: &ExponentQuery) -> Result<ExponentValue> {
    query.validate()?;
    let (q, r, tau) = (query.q, query.rate, query.tau);
    Ok(ExponentValue {
        value: prange_raw(q, r, tau) * query.scale(),
        params: vec![prange_gamma(q, r, tau)],
        warning: false,
    })
}

/// Plain Dumer: max(h_q(τ)/2, h_q(τ) − (1−R)).
pub fn dumer_plain_exponent(query: &ExponentQuery) -> Result<ExponentValue> {
    query.validate()?;
    let h = hq(query.q, query.tau);
    Ok(ExponentValue { value: (h / 2.0).max(h - (1.0 - query.rate)) * query.scale(), params: vec![], warning: false })
}

pub fn expected_solutions_exponent(query: &ExponentQuery) -> Result<ExponentValue> {
    query.validate()?;
    let h = hq(query.q, query.tau);
    Ok(ExponentValue { value: (h - (1.0 - query.rate)) * query.scale(), params: vec![], warning: false })
}

// ---------------------------------------------------------------------------------------------
// Dumer-ISD

/// π(λ) = (R+λ)·g⁻(2λ/(R+λ)), the weight that makes Dumer output in amortized time one.
pub fn dumer_pi(q: u32, rate: f64, lambda: f64) -> Option<f64> {
    let y = 2.0 * lambda / (rate + lambda);
    (y <= 1.0 + 1e-15).then(|| (rate + lambda) * g_minus(q, y))
}

/// f(λ); infinite outside the admissible region.
pub fn dumer_isd_f(q: u32, rate: f64, tau: f64, lambda: f64) -> f64 {
    let Some(pi) = dumer_pi(q, rate, lambda) else { return f64::INFINITY };
    if pi > tau + 1e-15 {
        return f64::INFINITY;
    }
    let Some(rest) = scaled_entropy(q, tau - pi, 1.0 - rate - lambda) else { return f64::INFINITY };
    lambda + (0.0f64).max((1.0 - rate).min(hq(q, tau)) - rest - 2.0 * lambda)
}

fn dumer_isd_short_raw(q: u32, rate: f64, tau: f64, tol: f64) -> Result<(f64, f64, f64, bool)> {
    let hi = feasible_upper(|l| dumer_isd_f(q, rate, tau, l).is_finite(), (1.0 - rate).min(rate));
    let (lambda, value, warning) = minimize(|l| dumer_isd_f(q, rate, tau, l), 0.0, hi, tol)?;
    let pi = dumer_pi(q, rate, lambda).unwrap_or(0.0);
    Ok((value, lambda, pi, warning))
}

/// Short-weight Dumer-ISD: minimum of f over λ; params (λ*, π*, σ* = λ*).
pub fn dumer_isd_exponent_short(query: &ExponentQuery) -> Result<ExponentValue> {
    query.validate()?;
    let (value, lambda, pi, warning) = dumer_isd_short_raw(query.q, query.rate, query.tau, query.tolerance)?;
    Ok(ExponentValue { value: value * query.scale(), params: vec![lambda, pi, lambda], warning })
}

/// Upper bound on σ in the large-weight strategy, (R+λ)/2·log_q(q−1).
pub fn sigma_max(q: u32, rate: f64, lambda: f64) -> f64 {
    (rate + lambda) / 2.0 * log_q(q, q as f64 - 1.0)
}

/// λ at which σ_max(λ) = λ: (R/2)·c/(1 − c/2) with c = log_q(q−1).
pub fn large_weight_amortized_lambda(q: u32, rate: f64) -> f64 {
    let c = log_q(q, q as f64 - 1.0);
    rate / 2.0 * c / (1.0 - c / 2.0)
}

/// g(λ,σ); infinite outside the admissible region.
pub fn dumer_isd_g(q: u32, rate: f64, tau: f64, lambda: f64, sigma: f64) -> f64 {
    if sigma < -1e-15 || sigma > sigma_max(q, rate, lambda) + 1e-12 {
        return f64::INFINITY;
    }
    let Some(rest) = scaled_entropy(q, tau - rate - lambda, 1.0 - rate - lambda) else { return f64::INFINITY };
    sigma.max(2.0 * sigma - lambda) + (0.0f64).max((1.0 - rate).min(hq(q, tau)) - rest - 2.0 * sigma)
}

/// Large-weight Dumer-ISD; for q = 2 the short-weight exponent at 1−τ.
/// Params (λ*, π* = R+λ*, σ*).
pub fn dumer_isd_exponent_large(query: &ExponentQuery) -> Result<ExponentValue> {
    query.validate()?;
    let (q, rate, tau, tol) = (query.q, query.rate, query.tau, query.tolerance);
    if q == 2 {
        let (value, lambda, pi, warning) = dumer_isd_short_raw(2, rate, 1.0 - tau, tol)?;
        return Ok(ExponentValue { value: value * query.scale(), params: vec![lambda, pi, lambda], warning });
    }
    if tau < rate {
        return Err(Error::DomainError(format!("large-weight strategy needs tau >= R, got tau = {tau}")));
    }
    let hi = (1.0 - rate).min(tau - rate);
    let mut inner_warning = false;
    let mut inner = |lambda: f64| -> (f64, f64) {
        let smax = sigma_max(q, rate, lambda);
        match minimize(|s| dumer_isd_g(q, rate, tau, lambda, s), 0.0, smax, tol) {
            Ok((s, v, w)) => {
                inner_warning |= w;
                (s, v)
            }
            Err(_) => (0.0, f64::INFINITY),
        }
    };
    let (lambda, value, warning) = minimize(|l| inner(l).1, 0.0, hi, tol)?;
    let (sigma, _) = inner(lambda);
    Ok(ExponentValue {
        value: value * query.scale(),
        params: vec![lambda, rate + lambda, sigma],
        warning: warning || inner_warning,
    })
}

/// Dumer-ISD with the weight goal resolved (Auto: short / zero / large by band).
pub fn dumer_isd_exponent(query: &ExponentQuery) -> Result<ExponentValue> {
    match resolve_goal(query) {
        Some(WeightGoal::Short) => dumer_isd_exponent_short(query),
        Some(_) => dumer_isd_exponent_large(query),
        None => {
            query.validate()?;
            Ok(ExponentValue { value: 0.0, params: vec![0.0, 0.0, 0.0], warning: false })
        }
    }
}

/// Short or Large, or None for the easy band under Auto.
fn resolve_goal(query: &ExponentQuery) -> Option<WeightGoal> {
    match query.goal {
        WeightGoal::Auto if query.tau <= query.easy_low() => Some(WeightGoal::Short),
        WeightGoal::Auto if query.tau >= query.easy_high() => Some(WeightGoal::Large),
        WeightGoal::Auto => None,
        g => Some(g),
    }
}

// ---------------------------------------------------------------------------------------------
// Wagner

/// Whether depth a is admissible: (1−R)/h_q(τ) ≤ (a+1)/2^a (one solution) or a/2^a (amortized).
pub fn wagner_depth_ok(q: u32, rate: f64, tau: f64, a: usize, amortized: bool) -> bool {
    let h = hq(q, tau);
    let num = if amortized { a as f64 } else { a as f64 + 1.0 };
    h > 0.0 && (1.0 - rate) / h <= num / 2f64.powi(a as i32)
}

/// Wagner with the largest admissible depth a ∈ 1..=40: (1−R)/(a+1) or (1−R)/a.
pub fn wagner_exponent(query: &ExponentQuery, amortized: bool) -> Result<ExponentValue> {
    query.validate()?;
    let (q, rate, tau) = (query.q, query.rate, query.tau);
    let a = (1..=MAX_DEPTH)
        .rev()
        .find(|&a| wagner_depth_ok(q, rate, tau, a, amortized))
        .ok_or_else(|| Error::DepthInfeasible(format!("no depth a in 1..={MAX_DEPTH} for tau = {tau}")))?;
    let div = if amortized { a as f64 } else { a as f64 + 1.0 };
    Ok(ExponentValue { value: (1.0 - rate) / div * query.scale(), params: vec![a as f64], warning: false })
}

/// π for Wagner-ISD at depth a: list size q^{λ/a} equal to its capacity.
pub fn wagner_pi(q: u32, rate: f64, lambda: f64, a: usize, large: bool) -> Option<f64> {
    let y = 2f64.powi(a as i32) * lambda / (a as f64 * (rate + lambda));
    if large {
        let c = log_q(q, q as f64 - 1.0);
        if y < c {
            return Some(rate + lambda);
        }
        (y <= 1.0 + 1e-15).then(|| (rate + lambda) * g_plus(q, y.min(1.0)))
    } else {
        (y <= 1.0 + 1e-15).then(|| (rate + lambda) * g_minus(q, y))
    }
}

/// λ/a + max(0, min(1−R−λ, h_q(τ)−λ) − (1−R−λ)·h_q((τ−π)/(1−R−λ)) − λ/a).
pub fn wagner_isd_cost(q: u32, rate: f64, tau: f64, lambda: f64, a: usize, large: bool) -> f64 {
    let Some(pi) = wagner_pi(q, rate, lambda, a, large) else { return f64::INFINITY };
    if pi > tau + 1e-15 {
        return f64::INFINITY;
    }
    let len = 1.0 - rate - lambda;
    let Some(rest) = scaled_entropy(q, tau - pi, len) else { return f64::INFINITY };
    let step = lambda / a as f64;
    step + (0.0f64).max(len.min(hq(q, tau) - lambda) - rest - step)
}

fn wagner_isd_raw(q: u32, rate: f64, tau: f64, large: bool, tol: f64) -> Result<(f64, f64, f64, usize, bool)> {
    let mut best: Option<(f64, f64, f64, usize, bool)> = None;
    for a in 1..=MAX_DEPTH {
        let hi = feasible_upper(|l| wagner_isd_cost(q, rate, tau, l, a, large).is_finite(), 1.0 - rate);
        if !wagner_isd_cost(q, rate, tau, 0.0, a, large).is_finite() {
            continue;
        }
        let (lambda, value, warning) = minimize(|l| wagner_isd_cost(q, rate, tau, l, a, large), 0.0, hi, tol)?;
        if best.is_none_or(|b| value < b.0 - 1e-12) {
            let pi = wagner_pi(q, rate, lambda, a, large).unwrap_or(0.0);
            best = Some((value, lambda, pi, a, warning));
        }
    }
    best.ok_or_else(|| Error::DepthInfeasible(format!("no admissible depth for tau = {tau}")))
}

/// Wagner-ISD minimized over depth a and λ. Params (λ*, π*, a*).
pub fn wagner_isd_exponent(query: &ExponentQuery) -> Result<ExponentValue> {
    query.validate()?;
    let (q, rate, tau, tol) = (query.q, query.rate, query.tau, query.tolerance);
    let (tau_eff, large) = match resolve_goal(query) {
        None => return Ok(ExponentValue { value: 0.0, params: vec![0.0, 0.0, 1.0], warning: false }),
        Some(WeightGoal::Large) if q == 2 => (1.0 - tau, false),
        Some(WeightGoal::Large) => (tau, true),
        Some(_) => (tau, false),
    };
    let (value, lambda, pi, a, warning) = wagner_isd_raw(q, rate, tau_eff, large, tol)?;
    Ok(ExponentValue { value: value * query.scale(), params: vec![lambda, pi, a as f64], warning })
}

/// Dispatches on the algorithm tag.
pub fn exponent(alg: Algorithm, query: &ExponentQuery) -> Result<ExponentValue> {
    match alg {
        Algorithm::Prange => prange_exponent(query),
        Algorithm::Dumer => dumer_plain_exponent(query),
        Algorithm::DumerIsd => dumer_isd_exponent(query),
        Algorithm::Wagner => wagner_exponent(query, false),
        Algorithm::WagnerAmortized => wagner_exponent(query, true),
        Algorithm::WagnerIsd => wagner_isd_exponent(query),
        Algorithm::Expected => expected_solutions_exponent(query),
    }
}

// ---------------------------------------------------------------------------------------------
// Curves

#[derive(Clone, Debug, PartialEq)]
pub struct CurvePoint {
    pub tau: f64,
    pub value: ExponentValue,
}

#[derive(Clone, Debug)]
pub struct ExponentCurve {
    pub q: u32,
    pub rate: f64,
    pub algorithm: Algorithm,
    pub base: LogBase,
    pub points: Vec<CurvePoint>,
}

impl ExponentCurve {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("tau,exponent");
        for name in self.algorithm.param_names() {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for p in &self.points {
            let _ = write!(out, "{:.6},{:.9}", p.tau, p.value.value);
            for v in &p.value.params {
                let _ = write!(out, ",{v:.9}");
            }
            out.push('\n');
        }
        out
    }
}

/// τ values lo, lo+step, … ≤ hi (inclusive up to rounding), computed from integer indices.
pub fn tau_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if step.is_nan() || step <= 0.0 || lo.is_nan() || hi.is_nan() || lo > hi {
        return Err(Error::DomainError(format!("bad range {lo}:{hi}:{step}")));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| lo + step * i as f64).collect())
}

/// Evaluates the exponent at each τ; τ where the algorithm is infeasible are skipped.
pub fn emit_curve(alg: Algorithm, template: &ExponentQuery, taus: &[f64]) -> Result<ExponentCurve> {
    let mut points = Vec::with_capacity(taus.len());
    for &tau in taus {
        let query = ExponentQuery { tau, ..*template };
        match exponent(alg, &query) {
            Ok(value) => points.push(CurvePoint { tau, value }),
            Err(Error::DepthInfeasible(_)) => {}
            Err(e) => return Err(e),
        }
    }
    points.sort_by(|a, b| a.tau.total_cmp(&b.tau));
    Ok(ExponentCurve { q: template.q, rate: template.rate, algorithm: alg, base: template.base, points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randcode_stats::{tau_minus, tau_plus};
    use proptest::prelude::*;

    fn query(q: u32, rate: f64, tau: f64) -> ExponentQuery {
        ExponentQuery::new(q, rate, tau)
    }

    /// Independent Prange formula written directly from the three regimes.
    fn prange_oracle(q: u32, r: f64, tau: f64) -> f64 {
        let h = |x: f64| {
            let qf = q as f64;
            let mut v = 0.0;
            if x > 0.0 {
                v -= x * (x / (qf - 1.0)).log(qf);
            }
            if x < 1.0 {
                v -= (1.0 - x) * (1.0 - x).log(qf);
            }
            v
        };
        let b = (q as f64 - 1.0) / q as f64 * (1.0 - r);
        let g = if tau < b {
            0.0
        } else if tau <= r + b {
            tau - b
        } else {
            r
        };
        (1.0 - r).min(h(tau)) - (1.0 - r) * h((tau - g) / (1.0 - r))
    }

    #[test]
    fn prange_matches_oracle() {
        for q in [2, 3, 7] {
            for r in [0.2, 0.5, 0.8] {
                for i in 1..100 {
                    let tau = i as f64 / 100.0;
                    let got = prange_exponent(&query(q, r, tau)).unwrap().value;
                    assert!((got - prange_oracle(q, r, tau)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn prange_zero_at_band_edge_and_inside() {
        for q in [2, 3, 5] {
            for r in [0.3, 0.5, 0.7] {
                let qq = query(q, r, 0.5);
                let (lo, hi) = (qq.easy_low(), qq.easy_high().min(1.0 - 1e-9));
                for i in 0..100 {
                    let tau = lo + (hi - lo) * i as f64 / 99.0;
                    assert!(prange_exponent(&query(q, r, tau)).unwrap().value.abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn prange_sublinear_slope() {
        for q in [2, 3, 5] {
            for r in [0.3, 0.5, 0.7] {
                let tau = 1e-4;
                let slope = prange_exponent(&query(q, r, tau)).unwrap().value / tau;
                let want = -log_q(q, 1.0 - r);
                assert!((slope / want - 1.0).abs() < 0.01, "q={q} r={r}: {slope} vs {want}");
            }
        }
    }

    #[test]
    fn binary_symmetry() {
        for i in 1..50 {
            let tau = i as f64 / 100.0;
            for alg in [Algorithm::Prange, Algorithm::DumerIsd, Algorithm::WagnerIsd] {
                let a = exponent(alg, &query(2, 0.5, tau)).unwrap().value;
                let b = exponent(alg, &query(2, 0.5, 1.0 - tau)).unwrap().value;
                assert!((a - b).abs() < 1e-9, "{alg:?} tau={tau}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn dumer_plain_at_gv() {
        for (q, r) in [(2, 0.5), (3, 0.3), (5, 0.7)] {
            let tau = tau_minus(q, r).unwrap();
            let v = dumer_plain_exponent(&query(q, r, tau)).unwrap().value;
            assert!((v - (1.0 - r) / 2.0).abs() < 1e-9);
            // Below GV: h/2 arm.
            let low = dumer_plain_exponent(&query(q, r, tau / 2.0)).unwrap().value;
            assert!((low - hq(q, tau / 2.0) / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn dumer_isd_endpoint_is_prange() {
        for (q, r, tau) in [(2, 0.5, 0.08), (3, 0.4, 0.2), (5, 0.7, 0.1)] {
            let f0 = dumer_isd_f(q, r, tau, 0.0);
            assert!((f0 - prange_raw(q, r, tau)).abs() < 1e-12);
        }
    }

    #[test]
    fn dumer_isd_improves_on_prange_at_gv() {
        let tau = tau_minus(2, 0.5).unwrap();
        let d = dumer_isd_exponent(&query(2, 0.5, tau)).unwrap();
        let p = prange_exponent(&query(2, 0.5, tau)).unwrap().value;
        assert!(d.value < p - 1e-4, "{} vs {p}", d.value);
        assert!(!d.warning);
    }

    #[test]
    fn dumer_isd_beats_grid() {
        for (q, r, tau) in [(2, 0.5, 0.1), (3, 0.5, 0.2), (2, 0.3, 0.15)] {
            let v = dumer_isd_exponent_short(&query(q, r, tau)).unwrap();
            for i in 0..32 {
                let l = (1.0 - r).min(r) * i as f64 / 31.0;
                assert!(v.value <= dumer_isd_f(q, r, tau, l) + 1e-9);
            }
        }
    }

    #[test]
    fn large_weight_binary_delegates_to_short() {
        for tau in [0.6, 0.8, 0.95] {
            let mut q = query(2, 0.5, tau);
            q.goal = WeightGoal::Large;
            let large = dumer_isd_exponent_large(&q).unwrap().value;
            let short = dumer_isd_exponent_short(&query(2, 0.5, 1.0 - tau)).unwrap().value;
            assert!((large - short).abs() < 1e-12);
        }
    }

    #[test]
    fn large_weight_closed_form_lambda() {
        for q in [3, 5, 7] {
            for r in [0.3, 0.5] {
                let l = large_weight_amortized_lambda(q, r);
                assert!((sigma_max(q, r, l) - l).abs() < 1e-6);
                // Oracle: bisection on σ_max(λ) − λ, which is decreasing in λ.
                let (mut a, mut b) = (0.0, 1.0);
                for _ in 0..100 {
                    let m = 0.5 * (a + b);
                    if sigma_max(q, r, m) > m {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                assert!((a - l).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn large_weight_q3_below_prange_and_grid() {
        let (q, r) = (3, 0.5);
        for tau in [0.85, 0.9, 0.95] {
            let qq = query(q, r, tau);
            let v = dumer_isd_exponent(&qq).unwrap();
            let p = prange_exponent(&qq).unwrap().value;
            assert!(v.value <= p + 1e-9 && v.value >= 0.0);
            let hi = (1.0 - r).min(tau - r);
            for i in 0..32 {
                let l = hi * i as f64 / 31.0;
                for j in 0..32 {
                    let s = sigma_max(q, r, l) * j as f64 / 31.0;
                    assert!(v.value <= dumer_isd_g(q, r, tau, l, s) + 1e-9);
                }
            }
        }
        // Improvement is strict somewhere in the large-weight regime.
        let qq = query(q, r, 0.95);
        assert!(dumer_isd_exponent(&qq).unwrap().value < prange_exponent(&qq).unwrap().value - 1e-4);
    }

    #[test]
    fn wagner_depth_one_is_half_redundancy() {
        for (q, r) in [(2, 0.5), (3, 0.3)] {
            let tau = tau_minus(q, r).unwrap() + 1e-9;
            let v = wagner_exponent(&query(q, r, tau), false).unwrap();
            assert_eq!(v.params, vec![1.0]);
            assert!((v.value - (1.0 - r) / 2.0).abs() < 1e-12);
            let d = dumer_plain_exponent(&query(q, r, tau)).unwrap().value;
            assert!((v.value - d).abs() < 1e-6);
        }
    }

    #[test]
    fn wagner_below_gv_is_infeasible() {
        let tau = tau_minus(2, 0.5).unwrap() * 0.9;
        assert!(matches!(wagner_exponent(&query(2, 0.5, tau), false), Err(Error::DepthInfeasible(_))));
    }

    #[test]
    fn wagner_depth_boundary_flips() {
        // Bisection on τ for (1−R)/h = 3/4, the a=2 one-solution boundary at q=3.
        let (q, r) = (3u32, 0.5);
        let target = (1.0 - r) / 0.75;
        let (mut lo, mut hi) = (0.0, (q as f64 - 1.0) / q as f64);
        for _ in 0..200 {
            let m = 0.5 * (lo + hi);
            if hq(q, m) < target {
                lo = m;
            } else {
                hi = m;
            }
        }
        assert!(!wagner_depth_ok(q, r, lo - 1e-9, 2, false));
        assert!(wagner_depth_ok(q, r, hi + 1e-9, 2, false));
        let below = wagner_exponent(&query(q, r, lo - 1e-6), false).unwrap();
        let above = wagner_exponent(&query(q, r, hi + 1e-6), false).unwrap();
        assert_eq!(below.params[0], 1.0);
        assert!(above.params[0] >= 2.0);
        assert!(above.value < below.value);
    }

    #[test]
    fn wagner_curve_non_increasing_up_to_half() {
        let t = query(2, 0.5, 0.5);
        let taus = tau_grid(0.01, 0.5, 0.001).unwrap();
        let curve = emit_curve(Algorithm::Wagner, &t, &taus).unwrap();
        assert!(curve.points.first().unwrap().tau >= tau_minus(2, 0.5).unwrap());
        for w in curve.points.windows(2) {
            assert!(w[1].value.value <= w[0].value.value + 1e-12);
        }
    }

    #[test]
    fn wagner_isd_not_worse_than_prange() {
        for (q, r) in [(2u32, 0.5), (3, 0.5)] {
            for i in 1..20 {
                let tau = i as f64 / 20.0;
                let qq = query(q, r, tau);
                let w = wagner_isd_exponent(&qq).unwrap().value;
                let p = prange_exponent(&qq).unwrap().value;
                assert!(w >= -1e-12 && w <= p + 1e-9, "q={q} tau={tau}: {w} vs {p}");
            }
        }
    }

    #[test]
    fn easy_band_curve_is_zero() {
        for alg in [Algorithm::Prange, Algorithm::DumerIsd, Algorithm::WagnerIsd] {
            let t = query(3, 0.25, 0.5);
            let taus = tau_grid(t.easy_low(), t.easy_high(), 0.01).unwrap();
            let curve = emit_curve(alg, &t, &taus).unwrap();
            assert!(curve.points.iter().all(|p| p.value.value.abs() < 1e-9));
        }
    }

    #[test]
    fn expected_curve_crosses_zero_at_tau_bounds() {
        let (q, r) = (3, 0.25);
        let (lo, hi) = (tau_minus(q, r).unwrap(), tau_plus(q, r).unwrap());
        for tau in [lo, hi] {
            assert!(expected_solutions_exponent(&query(q, r, tau)).unwrap().value.abs() < 1e-9);
        }
        assert!(expected_solutions_exponent(&query(q, r, lo * 0.9)).unwrap().value < 0.0);
        assert!(expected_solutions_exponent(&query(q, r, (lo + hi) / 2.0)).unwrap().value > 0.0);
        assert!(expected_solutions_exponent(&query(q, r, (hi + 1.0) / 2.0)).unwrap().value < 0.0);
    }

    #[test]
    fn base_two_scaling() {
        for alg in [Algorithm::Prange, Algorithm::DumerIsd, Algorithm::Wagner] {
            let mut qq = query(3, 0.5, 0.3);
            let a = exponent(alg, &qq).unwrap().value;
            qq.base = LogBase::Two;
            let b = exponent(alg, &qq).unwrap().value;
            assert_eq!(b, a * 3f64.log2());
        }
    }

    #[test]
    fn csv_layout() {
        let t = query(2, 0.5, 0.5);
        let curve = emit_curve(Algorithm::Prange, &t, &[0.1, 0.2]).unwrap();
        let csv = curve.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "tau,exponent,gamma");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("0.100000,"));
    }

    #[test]
    fn tau_grid_is_inclusive() {
        let g = tau_grid(0.001, 0.999, 0.001).unwrap();
        assert_eq!(g.len(), 999);
        assert!((g[998] - 0.999).abs() < 1e-12);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(prange_exponent(&query(2, 0.5, 0.0)).is_err());
        assert!(prange_exponent(&query(2, 1.0, 0.3)).is_err());
        assert!(Algorithm::parse("nope").is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn optimized_isd_between_zero_and_prange(qi in 0usize..3, r in 0.1f64..0.9, tau in 0.01f64..0.99) {
            let q = [2u32, 3, 5][qi];
            let qq = query(q, r, tau);
            let p = prange_exponent(&qq).unwrap().value;
            let d = dumer_isd_exponent(&qq).unwrap().value;
            prop_assert!(d >= -1e-12 && d <= p + 1e-9, "{} vs {}", d, p);
        }

        #[test]
        fn tolerance_halving_is_stable(qi in 0usize..2, r in 0.2f64..0.8, frac in 0.05f64..0.95) {
            let q = [2u32, 3][qi];
            let mut qq = query(q, r, frac * query(q, r, 0.5).easy_low());
            let a = dumer_isd_exponent(&qq).unwrap().value;
            qq.tolerance /= 2.0;
            let b = dumer_isd_exponent(&qq).unwrap().value;
            prop_assert!((a - b).abs() < 1e-6);
        }
    }
}
