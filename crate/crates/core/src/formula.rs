//! Closed form of the error term `E(N) = N_2(N) - (8/3) N^2` for the planar
//! region `|y| <= 1 - x^2` at odd integral dilations `N`:
//!
//! `E(N) = 1/3 + 2 sqrt(N*) - (4/pi) sum_{d | N, d = 3 (4)} sqrt(d) L(1, chi_{-d})`.
//!
//! Since `L(1, chi_{-d}) = r_d pi / sqrt(d)` with `r_d` rational, each summand
//! is the rational `4 r_d` and `E(N)` is computed exactly.

use num_traits::Zero;
use rayon::prelude::*;

use crate::arith::{divisors_congruent, exact_sqrt, factorize, greatest_square_divisor};
use crate::dirichlet::{class_number, l_value};
use crate::lattice::count_parabola_2d;
use crate::rational::to_f64;
use crate::{Error, Rational, Result};

pub const MAX_FORMULA_N: u64 = 10_000_000;
pub const MAX_VERIFY_N: u64 = 100_000;

/// `E(N)` with the pieces of the closed form kept.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormError {
    pub n: u64,
    /// `sqrt(N*)`, an integer.
    pub sqrt_nstar: u64,
    /// `(d, (4/pi) sqrt(d) L(1, chi_{-d}))` for each divisor `d = 3 (mod 4)`.
    pub class_terms: Vec<(u64, Rational)>,
    pub value: Rational,
}

impl ClosedFormError {
    pub fn to_f64(&self) -> f64 {
        to_f64(&self.value)
    }
}

fn check_odd(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::NonPositive);
    }
    if n.is_multiple_of(2) {
        return Err(Error::EvenModulus(n));
    }
    if n > MAX_FORMULA_N {
        return Err(Error::too_large("N", n, MAX_FORMULA_N));
    }
    Ok(())
}

fn third() -> Rational {
    Rational::new(1, 3)
}

/// `E(N)` for odd `N` through Gauss sums and exact L-values.
pub fn error_term_exact(n: u64) -> Result<ClosedFormError> {
    check_odd(n)?;
    let sqrt_nstar = exact_sqrt(greatest_square_divisor(n)?).expect("N* is a square");
    let mut value = third() + Rational::from_integer(2 * sqrt_nstar as i128);
    let mut class_terms = Vec::new();
    for d in divisors_congruent(n, 3, 4)? {
        let term = l_value(d)?.rational_part * 4;
        value -= term;
        class_terms.push((d, term));
    }
    Ok(ClosedFormError { n, sqrt_nstar, class_terms, value })
}

/// `E(N) = 1/3 + 2 sqrt(N*)` when every prime factor of `N` is `1 (mod 4)`.
pub fn error_term_cor_4k1(n: u64) -> Result<Rational> {
    if n > MAX_FORMULA_N {
        return Err(Error::too_large("N", n, MAX_FORMULA_N));
    }
    let factors = factorize(n)?;
    if let Some(prime) = factors.primes().find(|p| p % 4 != 1) {
        return Err(Error::PrimeNotOneModFour { n, prime });
    }
    let sqrt_nstar = exact_sqrt(greatest_square_divisor(n)?).expect("N* is a square");
    Ok(third() + Rational::from_integer(2 * sqrt_nstar as i128))
}

/// `E(N) = 7/3 - 4 sum_{d | N, d = 3 (4)} w_d h(-d)` for odd squarefree `N`,
/// with `w_3 = 1/3` and `w_d = 1` otherwise.
pub fn error_term_cor_sqfree(n: u64) -> Result<Rational> {
    check_odd(n)?;
    if !factorize(n)?.is_squarefree() {
        return Err(Error::NotSquarefree(n));
    }
    let mut sum = Rational::zero();
    for d in divisors_congruent(n, 3, 4)? {
        let h = Rational::from_integer(class_number(d)? as i128);
        sum += if d == 3 { h * third() } else { h };
    }
    Ok(Rational::new(7, 3) - sum * 4)
}

/// `N_2(N) - (8/3) N^2` from the exact lattice point count.
pub fn counted_error(n: u64) -> Result<Rational> {
    let big = Rational::from_integer(n as i128);
    let count = count_parabola_2d(big)?;
    Ok(Rational::from_integer(count as i128) - Rational::new(8, 3) * big * big)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormulaMismatch {
    pub n: u64,
    pub formula: Rational,
    pub counted: Rational,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FormulaReport {
    pub checked: u64,
    pub mismatches: Vec<FormulaMismatch>,
}

/// Compares the closed form with the lattice count for every odd `N <= n_max`.
/// Both sides are exact, so any nonzero difference is a mismatch.
pub fn verify_formula_range(n_max: u64) -> Result<FormulaReport> {
    if n_max > MAX_VERIFY_N {
        return Err(Error::too_large("N_max", n_max, MAX_VERIFY_N));
    }
    let odd: Vec<u64> = (1..=n_max).step_by(2).collect();
    let results = odd
        .par_iter()
        .map(|&n| {
            let formula = error_term_exact(n)?.value;
            let counted = counted_error(n)?;
            Ok((formula != counted).then_some(FormulaMismatch { n, formula, counted }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FormulaReport { checked: odd.len() as u64, mismatches: results.into_iter().flatten().collect() })
}
