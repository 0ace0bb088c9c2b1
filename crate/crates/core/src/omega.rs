//! Witnesses for large positive and negative values of the error term and
//! for many lattice points on the boundary.

use rayon::prelude::*;

use crate::arith::{exact_sqrt, factorize};
use crate::formula::{error_term_cor_4k1, error_term_cor_sqfree};
use crate::lattice::{boundary_count, ParaboloidSpec, RatQuadForm};
use crate::rational::to_f64;
use crate::{Error, Rational, Result};

pub const MAX_OMEGA_N: u64 = 100_000;

/// The `4M` points `(kM, +-(M^2 - k^2))`, `|k| <= M`, on the boundary of
/// `M^2 P` for `P: |y| <= 1 - x^2`. Sorted.
pub fn boundary_family_2d(m: u64) -> Result<Vec<(i64, i64)>> {
    if m == 0 {
        return Err(Error::NonPositive);
    }
    if m > 1 << 20 {
        return Err(Error::too_large("M", m, 1u64 << 20));
    }
    let m = m as i64;
    let r = m * m;
    let mut points = Vec::with_capacity(4 * m as usize);
    for k in -m..=m {
        let y = r - k * k;
        points.push((k * m, y));
        if y != 0 {
            points.push((k * m, -y));
        }
    }
    points.sort_unstable();
    debug_assert!(points.iter().all(|&(x, y)| on_planar_boundary(r, x, y)));
    Ok(points)
}

/// `|y| R = R^2 - x^2`, i.e. `(x, y)` lies on the boundary of `R P`.
pub fn on_planar_boundary(r: i64, x: i64, y: i64) -> bool {
    let (r, x, y) = (r as i128, x as i128, y as i128);
    y.abs() * r == r * r - x * x
}

#[derive(Debug, Clone, PartialEq)]
pub struct OmegaRecord {
    pub n: u64,
    pub error: Rational,
    /// `E(N) / sqrt(N)`.
    pub normalized: f64,
}

/// `E(N)/sqrt(N)` for every odd squarefree `N <= n_max`, most negative first.
pub fn omega_minus_scan(n_max: u64) -> Result<Vec<OmegaRecord>> {
    if n_max > MAX_OMEGA_N {
        return Err(Error::too_large("N_max", n_max, MAX_OMEGA_N));
    }
    let odd: Vec<u64> = (1..=n_max).step_by(2).collect();
    let mut records = odd
        .par_iter()
        .map(|&n| {
            if !factorize(n)?.is_squarefree() {
                return Ok(None);
            }
            let error = error_term_cor_sqfree(n)?;
            Ok(Some(OmegaRecord { n, error, normalized: to_f64(&error) / (n as f64).sqrt() }))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect::<Vec<_>>();
    records.sort_by(|a, b| a.normalized.total_cmp(&b.normalized).then(a.n.cmp(&b.n)));
    Ok(records)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OmegaPlusRecord {
    pub m: u64,
    pub n: u64,
    pub error: Rational,
    /// `E(M^2) / M`.
    pub normalized: Rational,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OmegaPlusFamily {
    pub records: Vec<OmegaPlusRecord>,
    /// `M` with a prime factor not `1 (mod 4)`.
    pub skipped: Vec<u64>,
}

/// `E(M^2)/M` for every `M <= m_max` whose prime factors are all `1 (mod 4)`.
pub fn omega_plus_family(m_max: u64) -> Result<OmegaPlusFamily> {
    if m_max.saturating_mul(m_max) > crate::formula::MAX_FORMULA_N {
        return Err(Error::too_large("M_max", m_max, (crate::formula::MAX_FORMULA_N as f64).sqrt() as u64));
    }
    let mut family = OmegaPlusFamily::default();
    for m in 1..=m_max {
        match error_term_cor_4k1(m * m) {
            Ok(error) => family.records.push(OmegaPlusRecord {
                m,
                n: m * m,
                error,
                normalized: error / Rational::from_integer(m as i128),
            }),
            Err(Error::PrimeNotOneModFour { .. }) => family.skipped.push(m),
            Err(e) => return Err(e),
        }
    }
    Ok(family)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthRecord {
    pub r: u64,
    pub boundary_count: u128,
    /// `boundary_count / R`.
    pub ratio: f64,
}

/// Boundary counts of `R P` for `P: |y| <= c - Q1(x)` in dimension 3 at square `R`.
pub fn boundary_growth_3d(form: &RatQuadForm, c: Rational, rs: &[u64]) -> Result<Vec<GrowthRecord>> {
    if form.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: "a binary form".into(), found: format!("dimension {}", form.dim()) });
    }
    if !form.is_integral() {
        return Err(Error::NotIntegral);
    }
    if !form.is_primitive() {
        return Err(Error::NotPrimitive);
    }
    if let Some(&r) = rs.iter().find(|&&r| r == 0 || exact_sqrt(r).is_none()) {
        return Err(if r == 0 { Error::NonPositive } else { Error::NotSquare(r) });
    }
    let spec = ParaboloidSpec::centered(form.clone(), c)?;
    rs.par_iter()
        .map(|&r| {
            let count = boundary_count(&spec, r)?;
            Ok(GrowthRecord { r, boundary_count: count, ratio: count as f64 / r as f64 })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirichlet::class_number;

    #[test]
    fn family_examples() {
        assert_eq!(boundary_family_2d(1).unwrap(), vec![(-1, 0), (0, -1), (0, 1), (1, 0)]);
        assert_eq!(boundary_family_2d(2).unwrap().len(), 8);
        assert!(boundary_family_2d(0).is_err());
    }

    #[test]
    fn family_lies_on_boundary_and_is_distinct() {
        for m in 1..=60u64 {
            let pts = boundary_family_2d(m).unwrap();
            assert_eq!(pts.len() as u64, 4 * m);
            let mut dedup = pts.clone();
            dedup.dedup();
            assert_eq!(dedup.len(), pts.len());
            let r = (m * m) as i64;
            assert!(pts.iter().all(|&(x, y)| on_planar_boundary(r, x, y)));
            // a full boundary enumeration contains the family
            let all: Vec<(i64, i64)> = (-r..=r)
                .filter(|x| (r * r - x * x) % r == 0)
                .flat_map(|x| {
                    let y = (r * r - x * x) / r;
                    [(x, y), (x, -y)]
                })
                .collect();
            assert!(pts.iter().all(|p| all.contains(p)));
        }
    }

    #[test]
    fn minus_scan_examples() {
        let scan = omega_minus_scan(101).unwrap();
        let seven = scan.iter().find(|r| r.n == 7).unwrap();
        assert_eq!(seven.error, Rational::new(-5, 3));
        assert!((seven.normalized + 0.6299).abs() < 1e-4);
        assert!(scan.windows(2).all(|w| w[0].normalized <= w[1].normalized));
        assert!(scan.iter().all(|r| r.n % 2 == 1 && r.n != 9 && r.n != 25));
        assert!(omega_minus_scan(MAX_OMEGA_N + 1).is_err());
    }

    #[test]
    fn minus_scan_at_primes_uses_class_numbers() {
        for rec in omega_minus_scan(2000).unwrap() {
            let p = rec.n;
            if p % 4 == 3 && crate::arith::is_prime(p) {
                let weight = if p == 3 { 1.0 / 3.0 } else { 1.0 };
                let expected = 7.0 / (3.0 * (p as f64).sqrt())
                    - 4.0 * weight * class_number(p).unwrap() as f64 / (p as f64).sqrt();
                assert!((rec.normalized - expected).abs() < 1e-12, "{p}");
            }
        }
    }

    #[test]
    fn plus_family_examples() {
        let fam = omega_plus_family(13).unwrap();
        let get = |m| fam.records.iter().find(|r| r.m == m).unwrap().normalized;
        assert_eq!(get(1), Rational::new(7, 3));
        assert_eq!(get(5), Rational::new(31, 15));
        assert_eq!(get(13), Rational::new(79, 39));
        assert_eq!(fam.records.iter().map(|r| r.m).collect::<Vec<_>>(), vec![1, 5, 13]);
        assert!(fam.skipped.contains(&3) && fam.skipped.contains(&2));
    }

    #[test]
    fn growth_examples() {
        let circle = RatQuadForm::binary(1, 0, 1).unwrap();
        let recs = boundary_growth_3d(&circle, Rational::from_integer(1), &[1, 4]).unwrap();
        assert!(recs[0].boundary_count >= 5);
        assert_eq!(recs[1].boundary_count, 22);
        assert_eq!(recs[1].ratio, 5.5);
        assert_eq!(boundary_growth_3d(&circle, Rational::from_integer(1), &[4, 5]), Err(Error::NotSquare(5)));
        let imprimitive = RatQuadForm::binary(2, 0, 2).unwrap();
        assert_eq!(boundary_growth_3d(&imprimitive, Rational::from_integer(1), &[4]), Err(Error::NotPrimitive));
    }
}
