//! Farey dissection and the quadratic exponential sums it controls.
//!
//! The order-`F` dissection assigns to every real `x` the Farey fraction
//! `a/q` (`q <= F`) whose arc `[(a + a-)/(q + q-), (a + a+)/(q + q+))`
//! contains `x`, where `a-/q- < a/q < a+/q+` are consecutive fractions of
//! order `F`. Sums are measured against
//!
//! - `|sum_{Q(n) <= N} e(alpha n1 + beta n2 + x Q(n))| <= C N (log N)^2 / (q + N |q x - a|)`
//! - `|sum_{|n| <= N} e(n^2 x)| <= C q^(-1/2) N`
//!
//! with the arc taken at order `floor(sqrt N)`; the ratios below estimate `C`.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dirichlet::CompensatedSum;
use crate::lattice::{visit_form_points, RatQuadForm};
use crate::{Error, Result};

/// Largest Farey order supported.
pub const MAX_FAREY_ORDER: u64 = 1 << 31;

/// Largest `N` for the theta and Weyl sums.
pub const MAX_SUM_LENGTH: u64 = 1_000_000;

/// The arc of a Farey fraction `a/q`, as a half-open interval `[lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FareyArc {
    pub a: i64,
    pub q: u64,
    pub lo: Ratio<i64>,
    pub hi: Ratio<i64>,
}

impl FareyArc {
    pub fn contains(&self, x: Ratio<i64>) -> bool {
        self.lo <= x && x < self.hi
    }

    /// `|q x - a|` for `x` already reduced into the arc's period.
    pub fn distance(&self, x: f64) -> f64 {
        (self.q as f64 * x - self.a as f64).abs()
    }
}

/// Consecutive neighbours `(a-, q-)` and `(a+, q+)` of `a/q` in the Farey
/// sequence of order `order`, extended periodically.
pub fn farey_neighbors(a: i64, q: u64, order: u64) -> ((i64, u64), (i64, u64)) {
    let qi = q as i64;
    let f = order as i64;
    // a q- = 1 (mod q) and a+ q = 1 + a q+, with q-, q+ the largest admissible values <= order
    let inv = if q == 1 { 0 } else { a.rem_euclid(qi).extended_gcd(&qi).x.rem_euclid(qi) };
    let largest = |residue: i64| f - (f - residue).rem_euclid(qi);
    let q_minus = largest(inv);
    let q_plus = largest((-inv).rem_euclid(qi));
    let a_minus = (a * q_minus - 1) / qi;
    let a_plus = (a * q_plus + 1) / qi;
    ((a_minus, q_minus as u64), (a_plus, q_plus as u64))
}

fn arc_of(a: i64, q: u64, order: u64) -> FareyArc {
    let ((am, qm), (ap, qp)) = farey_neighbors(a, q, order);
    let qi = q as i64;
    FareyArc { a, q, lo: Ratio::new(a + am, qi + qm as i64), hi: Ratio::new(a + ap, qi + qp as i64) }
}

// Stern-Brocot descent on [0, 1]; `cmp(a, q)` compares x with a/q.
fn locate(order: u64, cmp: impl Fn(i64, i64) -> Ordering) -> FareyArc {
    let (mut la, mut lq, mut ra, mut rq) = (0i64, 1i64, 1i64, 1i64);
    if cmp(0, 1) == Ordering::Equal {
        return arc_of(0, 1, order);
    }
    while ((lq + rq) as u64) <= order {
        let (ma, mq) = (la + ra, lq + rq);
        match cmp(ma, mq) {
            Ordering::Less => (ra, rq) = (ma, mq),
            Ordering::Greater => (la, lq) = (ma, mq),
            Ordering::Equal => return arc_of(ma, mq as u64, order),
        }
    }
    // la/lq <= x < ra/rq are neighbours; their mediant splits the two arcs
    if cmp(la + ra, lq + rq) == Ordering::Less {
        arc_of(la, lq as u64, order)
    } else {
        arc_of(ra, rq as u64, order)
    }
}

fn check_order(order: u64) -> Result<()> {
    if order == 0 {
        return Err(Error::NonPositive);
    }
    if order > MAX_FAREY_ORDER {
        return Err(Error::too_large("Farey order", order, MAX_FAREY_ORDER));
    }
    Ok(())
}

/// Arc of the order-`order` dissection containing `x mod 1`, located with
/// exact comparisons on the binary value of `x`.
pub fn farey_locate(x: f64, order: u64) -> Result<FareyArc> {
    check_order(order)?;
    let exact = BigRational::from_float(x).ok_or_else(|| Error::InvalidParameter(format!("x = {x}")))?;
    let reduced = &exact - exact.floor();
    let (num, den) = (reduced.numer().clone(), reduced.denom().clone());
    Ok(locate(order, |a, q| (&num * BigInt::from(q)).cmp(&(&den * BigInt::from(a)))))
}

/// [`farey_locate`] for an exact rational `x`.
pub fn farey_locate_exact(x: Ratio<i64>, order: u64) -> Result<FareyArc> {
    check_order(order)?;
    let reduced = x - x.floor();
    let (num, den) = (*reduced.numer() as i128, *reduced.denom() as i128);
    Ok(locate(order, |a, q| (num * q as i128).cmp(&(den * a as i128))))
}

/// `frac(x k)` without forming the large product `x k` in floating point:
/// `x = hi + lo` with `hi` a multiple of `2^-64`, so `frac(hi k)` is an exact
/// 64-bit wrapping product.
pub(crate) fn frac_mul(x: f64, k: i64) -> f64 {
    const SCALE: f64 = 18_446_744_073_709_551_616.0; // 2^64
    let mut x = x.rem_euclid(1.0);
    if x >= 1.0 {
        x = 0.0;
    }
    let top = (x * SCALE).floor();
    let hi_bits = top as u64;
    let lo = x - top / SCALE;
    let wrapped = hi_bits.wrapping_mul(k as u64) as f64 / SCALE;
    (wrapped + lo * k as f64).rem_euclid(1.0)
}

fn phase(theta: f64) -> Complex64 {
    let (s, c) = (2.0 * PI * theta).sin_cos();
    Complex64::new(c, s)
}

fn check_binary(form: &RatQuadForm) -> Result<()> {
    if form.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: "a binary form".into(), found: format!("dimension {}", form.dim()) });
    }
    if !form.is_integral() {
        return Err(Error::NotIntegral);
    }
    Ok(())
}

fn check_length(n: u64) -> Result<()> {
    if n > MAX_SUM_LENGTH {
        return Err(Error::too_large("N", n, MAX_SUM_LENGTH));
    }
    Ok(())
}

/// `r_{alpha,beta}(n) = sum_{Q(n1, n2) = n} e(alpha n1 + beta n2)`.
pub fn weighted_rep_sum(form: &RatQuadForm, n: u64, alpha: f64, beta: f64) -> Result<Complex64> {
    check_binary(form)?;
    check_length(n)?;
    let mut acc = CompensatedSum::default();
    visit_form_points(form, n, |p, value| {
        if value == n {
            acc.add(phase(frac_mul(alpha, p[0]) + frac_mul(beta, p[1])));
        }
    })?;
    Ok(acc.value())
}

/// `sum_{0 <= n <= N} r_{alpha,beta}(n) e(n x)`, summed directly over the
/// lattice points of the ellipse `Q <= N`.
pub fn theta_partial_sum(form: &RatQuadForm, alpha: f64, beta: f64, x: f64, n: u64) -> Result<Complex64> {
    check_binary(form)?;
    check_length(n)?;
    let mut acc = CompensatedSum::default();
    visit_form_points(form, n, |p, value| {
        acc.add(phase(frac_mul(alpha, p[0]) + frac_mul(beta, p[1]) + frac_mul(x, value as i64)));
    })?;
    Ok(acc.value())
}

/// One evaluation of the elliptic sum against its Farey-arc bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prop31Sample {
    pub x: f64,
    pub alpha: f64,
    pub beta: f64,
    pub n: u64,
    pub arc: FareyArc,
    pub sum_abs: f64,
    pub ratio: f64,
}

/// Ratio `|S| (q + N |q x - a|) / (N (log N)^2)` with `a/q` the order
/// `floor(sqrt N)` arc of `x`.
pub fn prop31_sample(form: &RatQuadForm, alpha: f64, beta: f64, x: f64, n: u64) -> Result<Prop31Sample> {
    if n < 2 {
        return Err(Error::InvalidParameter("N must be at least 2".into()));
    }
    let arc = farey_locate(x, n.isqrt())?;
    let sum_abs = theta_partial_sum(form, alpha, beta, x, n)?.norm();
    let nf = n as f64;
    let reduced = x - x.floor();
    let ratio = sum_abs * (arc.q as f64 + nf * arc.distance(reduced)) / (nf * nf.ln().powi(2));
    Ok(Prop31Sample { x, alpha, beta, n, arc, sum_abs, ratio })
}

pub fn prop31_ratio(form: &RatQuadForm, alpha: f64, beta: f64, x: f64, n: u64) -> Result<f64> {
    prop31_sample(form, alpha, beta, x, n).map(|s| s.ratio)
}

/// `sum_{n=-N}^{N} e(n^2 x)`.
pub fn weyl_sum(x: f64, n: u64) -> Result<Complex64> {
    check_length(n)?;
    let mut acc = CompensatedSum::default();
    for k in 1..=n as i64 {
        acc.add(phase(frac_mul(x, k * k)) * 2.0);
    }
    acc.add(Complex64::new(1.0, 0.0));
    Ok(acc.value())
}

/// One evaluation of the quadratic Weyl sum against `q^(-1/2) N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HlSample {
    pub x: f64,
    pub n: u64,
    pub arc: FareyArc,
    pub sum_abs: f64,
    pub ratio: f64,
    /// Whether `|x - a/q| <= 1/(q N)` with `q <= N` also holds for the arc fraction.
    pub classical_condition: bool,
}

pub fn hl_sample(x: f64, n: u64) -> Result<HlSample> {
    if n == 0 {
        return Err(Error::NonPositive);
    }
    let arc = farey_locate(x, n.isqrt().max(1))?;
    let sum_abs = weyl_sum(x, n)?.norm();
    let qf = arc.q as f64;
    let reduced = x - x.floor();
    let classical_condition = arc.q <= n && arc.distance(reduced) / qf <= 1.0 / (qf * n as f64);
    Ok(HlSample { x, n, arc, sum_abs, ratio: sum_abs * qf.sqrt() / n as f64, classical_condition })
}

/// `|sum_{|n| <= N} e(n^2 x)| sqrt(q) / N`.
pub fn hl_ratio(x: f64, n: u64) -> Result<f64> {
    hl_sample(x, n).map(|s| s.ratio)
}

/// A sample point `(x, alpha, beta)` of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub x: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// `count` points drawn uniformly from `[0, 1)^3` by ChaCha8 seeded with `seed`.
pub fn sweep_points(seed: u64, count: usize) -> Vec<SweepPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| SweepPoint { x: rng.random(), alpha: rng.random(), beta: rng.random() })
        .collect()
}

/// Evaluates every point at every `N`, ordered by `N` then point index.
pub fn prop31_sweep(form: &RatQuadForm, ns: &[u64], points: &[SweepPoint]) -> Result<Vec<Prop31Sample>> {
    let jobs: Vec<(u64, SweepPoint)> = ns.iter().flat_map(|&n| points.iter().map(move |p| (n, *p))).collect();
    jobs.par_iter().map(|(n, p)| prop31_sample(form, p.alpha, p.beta, p.x, *n)).collect()
}

pub fn hl_sweep(ns: &[u64], points: &[SweepPoint]) -> Result<Vec<HlSample>> {
    let jobs: Vec<(u64, f64)> = ns.iter().flat_map(|&n| points.iter().map(move |p| (n, p.x))).collect();
    jobs.par_iter().map(|(n, x)| hl_sample(*x, *n)).collect()
}

/// Largest ratio per `N`, in the order of `ns`.
pub fn max_ratio_by_n(ns: &[u64], samples: impl IntoIterator<Item = (u64, f64)>) -> Vec<(u64, f64)> {
    let mut best: Vec<(u64, f64)> = ns.iter().map(|&n| (n, 0.0)).collect();
    for (n, ratio) in samples {
        if let Some(slot) = best.iter_mut().find(|(m, _)| *m == n) {
            slot.1 = slot.1.max(ratio);
        }
    }
    best
}
