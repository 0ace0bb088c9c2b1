use num_traits::{Signed, Zero};
use rayon::prelude::*;

use super::enumerate::Ellipsoid;
use super::{ErrorRecord, ParaboloidSpec, RatQuadForm, Shift, AMBIGUITY_TOLERANCE, MAX_PLANAR_DILATION};
use crate::rational::{lcm_i128, to_f64};
use crate::{Error, Rational, Result};

/// Lattice point count of `R P`. On the float path `count` includes only the
/// points that are certain; each ambiguous fiber may hide up to two more.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CountOutcome {
    pub count: u128,
    pub ambiguous_fibers: u64,
}

/// `N_2(R)` for `|y| <= 1 - x^2`: `sum_{|n| <= R} (2 floor((R^2 - n^2) / R) + 1)`.
pub fn count_parabola_2d(dilation: Rational) -> Result<u128> {
    if !dilation.is_positive() {
        return Err(Error::NonPositive);
    }
    if dilation > Rational::from_integer(MAX_PLANAR_DILATION) {
        return Err(Error::too_large("R", dilation, MAX_PLANAR_DILATION));
    }
    let (p, q) = (*dilation.numer(), *dilation.denom());
    let overflow = || Error::Overflow("counting the planar region");
    let p2 = p.checked_mul(p).ok_or_else(overflow)?;
    let pq = p.checked_mul(q).ok_or_else(overflow)?;
    let q2 = q.checked_mul(q).ok_or_else(overflow)?;
    let top = p / q;
    let fiber = |n: i128| 2 * (p2 - n * n * q2).div_euclid(pq) + 1;
    let mut total = fiber(0);
    for n in 1..=top {
        total += 2 * fiber(n);
    }
    Ok(total as u128)
}

// Integer-scaled data for the rational path.
//
// With beta = b / B, r = (R b) mod B and z = B n + r:
//   c R^2 - Q(n + R beta) = V / T,  V = K - c_den z^T M z,  T = c_den A_den B^2,
// where A = M / A_den and K = c_num A_den B^2 R^2.
struct ExactSetup {
    dim: usize,
    mat: Vec<i128>,
    b_den: i128,
    residues: Vec<i128>,
    big_k: i128,
    c_den: i128,
    tr: i128,
    shift: Vec<f64>,
    radius: f64,
}

impl ExactSetup {
    fn new(spec: &ParaboloidSpec, r: u64) -> Result<Self> {
        let Shift::Rational(beta) = spec.shift() else {
            return Err(Error::IrrationalShift);
        };
        let overflow = || Error::Overflow("scaling the region");
        let (a_den, mat) = spec.form().scaled()?;
        let mut b_den = 1i128;
        for b in beta {
            b_den = lcm_i128(b_den, *b.denom()).ok_or_else(overflow)?;
        }
        let r_big = r as i128;
        let residues = beta
            .iter()
            .map(|b| {
                let num = b.numer().checked_mul(b_den / b.denom()).ok_or_else(overflow)?;
                Ok((num.rem_euclid(b_den) * (r_big % b_den)).rem_euclid(b_den))
            })
            .collect::<Result<Vec<_>>>()?;
        let c = spec.height();
        let b2 = b_den.checked_mul(b_den).ok_or_else(overflow)?;
        let base = a_den.checked_mul(b2).ok_or_else(overflow)?;
        let big_k = c
            .numer()
            .checked_mul(base)
            .and_then(|v| v.checked_mul(r_big))
            .and_then(|v| v.checked_mul(r_big))
            .ok_or_else(overflow)?;
        let t = c.denom().checked_mul(base).ok_or_else(overflow)?;
        let tr = t.checked_mul(r_big).ok_or_else(overflow)?;
        let shift = residues.iter().map(|&x| x as f64 / b_den as f64).collect();
        let radius = to_f64(&c) * (r as f64) * (r as f64);
        Ok(ExactSetup {
            dim: spec.form().dim(),
            mat,
            b_den,
            residues,
            big_k,
            c_den: *c.denom(),
            tr,
            shift,
            radius,
        })
    }

    /// `V` for the fiber over `n`.
    fn fiber_value(&self, n: &[i64]) -> Result<i128> {
        let overflow = || Error::Overflow("evaluating the form");
        let k = self.dim;
        let mut z = [0i128; 16];
        let z = if k <= 16 { &mut z[..k] } else { unreachable!("dimension checked") };
        for i in 0..k {
            z[i] = (n[i] as i128)
                .checked_mul(self.b_den)
                .and_then(|v| v.checked_add(self.residues[i]))
                .ok_or_else(overflow)?;
        }
        let mut q = 0i128;
        for i in 0..k {
            let mut row = 0i128;
            for (m, zj) in self.mat[i * k..(i + 1) * k].iter().zip(z.iter()) {
                row = m.checked_mul(*zj).and_then(|v| v.checked_add(row)).ok_or_else(overflow)?;
            }
            q = row.checked_mul(z[i]).and_then(|v| v.checked_add(q)).ok_or_else(overflow)?;
        }
        self.c_den.checked_mul(q).and_then(|v| self.big_k.checked_sub(v)).ok_or_else(overflow)
    }
}

fn check_dim(spec: &ParaboloidSpec) -> Result<()> {
    if spec.form().dim() > 16 {
        return Err(Error::too_large("d - 1", spec.form().dim(), 16));
    }
    Ok(())
}

fn sum_over_slices(
    ellipsoid: &Ellipsoid,
    shift: &[f64],
    radius: f64,
    per_point: impl Fn(&[i64]) -> Result<(u128, u64)> + Sync,
) -> Result<(u128, u64)> {
    let Some((lo, hi)) = ellipsoid.outer_range(shift, radius) else {
        return Ok((0, 0));
    };
    (lo..=hi)
        .into_par_iter()
        .map(|outer| {
            let mut acc = (0u128, 0u64);
            let mut failure = None;
            ellipsoid.for_each_with_outer(shift, radius, outer, &mut |n| {
                if failure.is_some() {
                    return;
                }
                match per_point(n) {
                    Ok((c, a)) => {
                        acc.0 += c;
                        acc.1 += a;
                    }
                    Err(e) => failure = Some(e),
                }
            });
            failure.map_or(Ok(acc), Err)
        })
        .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))
}

/// Exact `N(R) = #{(n, m) in Z^d : |m| R <= c R^2 - Q(n + R beta)}`.
///
/// `R beta` only matters modulo 1, so it is reduced componentwise first.
pub fn count_paraboloid(spec: &ParaboloidSpec, r: u64) -> Result<CountOutcome> {
    if r == 0 {
        return Err(Error::NonPositive);
    }
    check_dim(spec)?;
    let ellipsoid = Ellipsoid::new(spec.form());
    match spec.shift() {
        Shift::Rational(_) => {
            let setup = ExactSetup::new(spec, r)?;
            let (count, _) = sum_over_slices(&ellipsoid, &setup.shift, setup.radius, |n| {
                let v = setup.fiber_value(n)?;
                Ok(if v < 0 { (0, 0) } else { ((2 * v.div_euclid(setup.tr) + 1) as u128, 0) })
            })?;
            Ok(CountOutcome { count, ambiguous_fibers: 0 })
        }
        Shift::Real(beta) => {
            let rf = r as f64;
            let shift: Vec<f64> = beta.iter().map(|b| (b * rf).rem_euclid(1.0)).collect();
            let c = to_f64(&spec.height());
            let radius = c * rf * rf;
            let k = spec.form().dim();
            let mat: Vec<f64> = spec.form().matrix().iter().map(to_f64).collect();
            let (count, ambiguous_fibers) = sum_over_slices(&ellipsoid, &shift, radius, |n| {
                let mut y = [0.0f64; 16];
                for i in 0..k {
                    y[i] = n[i] as f64 + shift[i];
                }
                let mut q = 0.0;
                for i in 0..k {
                    let row: f64 = (0..k).map(|j| mat[i * k + j] * y[j]).sum();
                    q += row * y[i];
                }
                let t = (radius - q) / rf;
                let nearest = t.round();
                Ok(if (t - nearest).abs() < AMBIGUITY_TOLERANCE && nearest >= 0.0 {
                    let certain = if nearest >= 1.0 { 2 * nearest as u128 - 1 } else { 0 };
                    (certain, 1)
                } else if t < 0.0 {
                    (0, 0)
                } else {
                    (2 * t.floor() as u128 + 1, 0)
                })
            })?;
            Ok(CountOutcome { count, ambiguous_fibers })
        }
    }
}

/// Number of lattice points on the boundary of `R P`, i.e. with
/// `|m| R = c R^2 - Q(n + R beta)`. Needs a rational shift.
pub fn boundary_count(spec: &ParaboloidSpec, r: u64) -> Result<u128> {
    if r == 0 {
        return Err(Error::NonPositive);
    }
    check_dim(spec)?;
    let setup = ExactSetup::new(spec, r)?;
    let ellipsoid = Ellipsoid::new(spec.form());
    let (count, _) = sum_over_slices(&ellipsoid, &setup.shift, setup.radius, |n| {
        let v = setup.fiber_value(n)?;
        Ok(match v {
            0 => (1, 0),
            v if v > 0 && (v % setup.tr).is_zero() => (2, 0),
            _ => (0, 0),
        })
    })?;
    Ok(count)
}

/// Assembles `N(R)`, `|P| R^d` and their difference.
pub fn error_record(spec: &ParaboloidSpec, r: u64) -> Result<ErrorRecord> {
    let outcome = count_paraboloid(spec, r)?;
    let volume_term = super::volume(spec) * (r as f64).powi(spec.dim() as i32);
    Ok(ErrorRecord {
        r,
        count: outcome.count,
        volume_term,
        error: outcome.count as f64 - volume_term,
        ambiguous_fibers: outcome.ambiguous_fibers,
    })
}

/// Visits every `x` with `Q(x) <= bound` for an integral form, passing `Q(x)`.
pub(crate) fn visit_form_points(form: &RatQuadForm, bound: u64, mut f: impl FnMut(&[i64], u64)) -> Result<()> {
    if !form.is_integral() {
        return Err(Error::NotIntegral);
    }
    let (den, mat) = form.scaled()?;
    let k = form.dim();
    let ellipsoid = Ellipsoid::new(form);
    let zero = vec![0.0; k];
    let mut failure = None;
    ellipsoid.for_each(&zero, bound as f64, &mut |x| {
        let mut q = 0i128;
        for i in 0..k {
            for j in 0..k {
                q += mat[i * k + j] * x[i] as i128 * x[j] as i128;
            }
        }
        if q % den != 0 {
            failure = Some(Error::NotIntegral);
            return;
        }
        let value = q / den;
        if value <= bound as i128 {
            f(x, value as u64);
        }
    });
    failure.map_or(Ok(()), Err)
}

/// Largest `n` accepted by [`rep_count`].
pub const MAX_REPRESENTED: u64 = 1 << 40;

/// `r_Q(n) = #{x in Z^k : Q(x) = n}` for an integral form.
pub fn rep_count(form: &RatQuadForm, n: u64) -> Result<u64> {
    if n > MAX_REPRESENTED {
        return Err(Error::too_large("n", n, MAX_REPRESENTED));
    }
    let mut count = 0u64;
    visit_form_points(form, n, |_, value| count += u64::from(value == n))?;
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i128) -> Rational {
        Rational::from_integer(n)
    }

    // direct double loop over the bounding box, exact rationals throughout
    fn brute_count(spec: &ParaboloidSpec, dilation: i64) -> (u128, u128) {
        let Shift::Rational(beta) = spec.shift() else { panic!("rational only") };
        let k = spec.form().dim();
        let rr = Rational::from_integer(dilation as i128);
        let c = spec.height();
        let reach = (to_f64(&(c * rr * rr)).sqrt() * 4.0) as i64 + 3 + dilation;
        let side = 2 * reach + 1;
        let (mut inside, mut boundary) = (0u128, 0u128);
        for idx in 0..side.pow(k as u32) {
            let mut rest = idx;
            let y: Vec<Rational> = (0..k)
                .map(|i| {
                    let v = rest % side - reach;
                    rest /= side;
                    Rational::from_integer(v as i128) + rr * beta[i]
                })
                .collect();
            let v = c * rr * rr - spec.form().eval(&y);
            let top = (c * rr * rr).to_integer() + 2;
            for m in -top..=top {
                let lhs = Rational::from_integer(m.abs()) * rr;
                if lhs <= v {
                    inside += 1;
                }
                if lhs == v {
                    boundary += 1;
                }
            }
        }
        (inside, boundary)
    }

    fn spec(q: &str, c: Rational) -> ParaboloidSpec {
        ParaboloidSpec::centered(RatQuadForm::parse(q).unwrap(), c).unwrap()
    }

    #[test]
    fn planar_count_examples() {
        assert_eq!(count_parabola_2d(r(1)).unwrap(), 5);
        assert_eq!(count_parabola_2d(r(3)).unwrap(), 25);
        assert_eq!(count_parabola_2d(r(5)).unwrap(), 69);
        assert_eq!(count_parabola_2d(r(7)).unwrap(), 129);
        assert_eq!(count_parabola_2d(r(9)).unwrap(), 221);
        assert_eq!(count_parabola_2d(r(0)), Err(Error::NonPositive));
        assert!(count_parabola_2d(r(MAX_PLANAR_DILATION + 1)).is_err());
    }

    #[test]
    fn planar_count_rational_dilation() {
        // R = 3/2: n in {-1, 0, 1}; fibers floor(3/2) = 1 and floor((9/4 - 1) * 2/3) = 0
        assert_eq!(count_parabola_2d(Rational::new(3, 2)).unwrap(), 3 + 2);
        assert_eq!(count_parabola_2d(Rational::new(1, 2)).unwrap(), 1);
        let p2 = ParaboloidSpec::parabola_2d();
        for big in [1i128, 2, 4, 10, 37] {
            assert_eq!(count_parabola_2d(r(big)).unwrap(), count_paraboloid(&p2, big as u64).unwrap().count);
        }
    }

    #[test]
    fn paraboloid_examples() {
        let disk = spec("1,0,1", r(1));
        assert_eq!(count_paraboloid(&disk, 1).unwrap().count, 7);
        assert_eq!(count_paraboloid(&disk, 2).unwrap().count, 33);
        let p2 = ParaboloidSpec::parabola_2d();
        assert_eq!(count_paraboloid(&p2, 7).unwrap(), CountOutcome { count: 129, ambiguous_fibers: 0 });
        assert_eq!(count_paraboloid(&p2, 0), Err(Error::NonPositive));
    }

    #[test]
    fn paraboloid_matches_brute_force() {
        let cases = [
            spec("1,0,1", r(1)),
            spec("1,1/2,2", r(1)),
            spec("2,-1/3,1", Rational::new(3, 2)),
            ParaboloidSpec::new(
                RatQuadForm::parse("1,1/2,2").unwrap(),
                Shift::Rational(vec![Rational::new(1, 3), Rational::new(-2, 5)]),
                Rational::new(5, 4),
            )
            .unwrap(),
            ParaboloidSpec::new(
                RatQuadForm::parse("3/2").unwrap(),
                Shift::Rational(vec![Rational::new(1, 7)]),
                Rational::new(2, 3),
            )
            .unwrap(),
        ];
        for s in &cases {
            for dilation in 1..=6 {
                let (inside, boundary) = brute_count(s, dilation);
                assert_eq!(count_paraboloid(s, dilation as u64).unwrap().count, inside, "{s:?} R={dilation}");
                assert_eq!(boundary_count(s, dilation as u64).unwrap(), boundary, "{s:?} R={dilation}");
            }
        }
    }

    #[test]
    fn four_dimensional_matches_brute_force() {
        let s = spec("1,0,0,1,1/2,2", r(1));
        for dilation in 1..=3 {
            assert_eq!(count_paraboloid(&s, dilation as u64).unwrap().count, brute_count(&s, dilation).0);
        }
    }

    #[test]
    fn planar_general_path_agrees_up_to_500() {
        let p2 = ParaboloidSpec::parabola_2d();
        for big in 1..=500u64 {
            assert_eq!(count_paraboloid(&p2, big).unwrap().count, count_parabola_2d(r(big as i128)).unwrap());
        }
    }

    #[test]
    fn boundary_examples() {
        let p2 = ParaboloidSpec::parabola_2d();
        assert_eq!(boundary_count(&p2, 1).unwrap(), 4);
        // (0, +-4), (+-2, +-3), (+-4, 0)
        assert_eq!(boundary_count(&p2, 4).unwrap(), 8);
        let disk = spec("1,0,1", r(1));
        assert_eq!(boundary_count(&disk, 1).unwrap(), 6);
        assert_eq!(boundary_count(&disk, 4).unwrap(), 22);
        let real = ParaboloidSpec::new(RatQuadForm::sum_of_squares(1), Shift::Real(vec![0.5f64.sqrt()]), r(1)).unwrap();
        assert_eq!(boundary_count(&real, 3), Err(Error::IrrationalShift));
    }

    #[test]
    fn boundary_points_satisfy_equality() {
        // every enumerated boundary point is re-checked against the defining equation
        let s = spec("1,1/2,2", r(1));
        for dilation in [2u64, 4, 9] {
            let setup = ExactSetup::new(&s, dilation).unwrap();
            let e = Ellipsoid::new(s.form());
            let mut found = 0u128;
            e.for_each(&setup.shift, setup.radius, &mut |n| {
                let v = setup.fiber_value(n).unwrap();
                if v >= 0 && v % setup.tr == 0 {
                    let m = v / setup.tr;
                    let y: Vec<Rational> = n.iter().map(|&x| Rational::from_integer(x as i128)).collect();
                    let rr = Rational::from_integer(dilation as i128);
                    assert_eq!(Rational::from_integer(m) * rr, s.height() * rr * rr - s.form().eval(&y));
                    found += if m == 0 { 1 } else { 2 };
                }
            });
            assert_eq!(found, boundary_count(&s, dilation).unwrap());
        }
    }

    #[test]
    fn float_path_matches_rational_away_from_boundary() {
        let form = RatQuadForm::parse("1,1/2,2").unwrap();
        let exact = ParaboloidSpec::new(
            form.clone(),
            Shift::Rational(vec![Rational::new(1, 3), Rational::new(2, 7)]),
            r(1),
        )
        .unwrap();
        let real = ParaboloidSpec::new(form, Shift::Real(vec![1.0 / 3.0, 2.0 / 7.0]), r(1)).unwrap();
        for dilation in [5u64, 11, 20, 31] {
            let a = count_paraboloid(&exact, dilation).unwrap().count;
            let b = count_paraboloid(&real, dilation).unwrap();
            assert!(b.count <= a && a <= b.count + 2 * b.ambiguous_fibers as u128, "R={dilation}");
        }
    }

    #[test]
    fn float_path_flags_exact_jumps() {
        // beta = 0 given as floats: every fiber sits on an integer jump at R = 1
        let real = ParaboloidSpec::new(RatQuadForm::sum_of_squares(2), Shift::Real(vec![0.0, 0.0]), r(1)).unwrap();
        let out = count_paraboloid(&real, 1).unwrap();
        assert_eq!(out.ambiguous_fibers, 5);
        assert_eq!(out.count, 1);
        let irrational = ParaboloidSpec::new(
            RatQuadForm::sum_of_squares(2),
            Shift::Real(vec![2f64.sqrt(), 3f64.sqrt()]),
            r(1),
        )
        .unwrap();
        let out = count_paraboloid(&irrational, 17).unwrap();
        assert_eq!(out.ambiguous_fibers, 0);
    }

    #[test]
    fn diagonal_sign_symmetry() {
        // for beta = 0 and diagonal Q the count splits into symmetric half-spaces
        let s = spec("2,0,3", r(1));
        for dilation in [3u64, 8, 13] {
            let total = count_paraboloid(&s, dilation).unwrap().count;
            let mut positive_x = 0u128;
            let mut zero_x = 0u128;
            let setup = ExactSetup::new(&s, dilation).unwrap();
            Ellipsoid::new(s.form()).for_each(&setup.shift, setup.radius, &mut |n| {
                let v = setup.fiber_value(n).unwrap();
                if v >= 0 {
                    let fiber = (2 * v.div_euclid(setup.tr) + 1) as u128;
                    match n[0].signum() {
                        1 => positive_x += fiber,
                        0 => zero_x += fiber,
                        _ => {}
                    }
                }
            });
            assert_eq!(total, 2 * positive_x + zero_x);
        }
    }

    #[test]
    fn rep_count_examples() {
        let circle = RatQuadForm::binary(1, 0, 1).unwrap();
        assert_eq!(rep_count(&circle, 0).unwrap(), 1);
        assert_eq!(rep_count(&circle, 1).unwrap(), 4);
        assert_eq!(rep_count(&circle, 5).unwrap(), 8);
        assert_eq!(rep_count(&circle, 25).unwrap(), 12);
        let other = RatQuadForm::binary(1, 1, 2).unwrap();
        let brute = |n: i64| {
            let mut c = 0;
            for x in -20i64..=20 {
                for y in -20i64..=20 {
                    c += u64::from(x * x + x * y + 2 * y * y == n);
                }
            }
            c
        };
        for n in 0..60 {
            assert_eq!(rep_count(&other, n as u64).unwrap(), brute(n), "n = {n}");
        }
        assert_eq!(rep_count(&RatQuadForm::parse("1/2,0,1").unwrap(), 3), Err(Error::NotIntegral));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn integer_shift_of_beta_is_invisible(
            b1 in -20i128..20, b2 in -20i128..20, den in 1i128..9,
            s1 in -3i128..3, s2 in -3i128..3, dilation in 1u64..12,
        ) {
            let form = RatQuadForm::parse("1,1/2,2").unwrap();
            let beta = vec![Rational::new(b1, den), Rational::new(b2, den)];
            let moved = vec![beta[0] + Rational::from_integer(s1), beta[1] + Rational::from_integer(s2)];
            let a = ParaboloidSpec::new(form.clone(), Shift::Rational(beta), Rational::new(3, 2)).unwrap();
            let b = ParaboloidSpec::new(form, Shift::Rational(moved), Rational::new(3, 2)).unwrap();
            prop_assert_eq!(count_paraboloid(&a, dilation).unwrap(), count_paraboloid(&b, dilation).unwrap());
        }
    }
}
