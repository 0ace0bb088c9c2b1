use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{fmt_rational, lcm_i128, to_f64};
use crate::{parse_rational, Error, Rational, Result};

/// Positive definite quadratic form `Q(x) = x^T A x` with an exact rational
/// symmetric matrix `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatQuadForm {
    dim: usize,
    matrix: Vec<Rational>,
}

impl RatQuadForm {
    /// Builds a form from a row-major `dim x dim` matrix.
    pub fn new(dim: usize, matrix: Vec<Rational>) -> Result<Self> {
        if dim == 0 || matrix.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: format!("a non-empty square matrix with {} entries", dim * dim),
                found: format!("{} entries", matrix.len()),
            });
        }
        for i in 0..dim {
            for j in 0..i {
                if matrix[i * dim + j] != matrix[j * dim + i] {
                    return Err(Error::InvalidParameter(format!("matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        let form = RatQuadForm { dim, matrix };
        form.ldl().ok_or(Error::NotPositiveDefinite)?;
        Ok(form)
    }

    /// Builds a form from the upper triangle `a11, a12, ..., a1k, a22, ...`.
    pub fn from_upper_triangle(entries: &[Rational]) -> Result<Self> {
        let dim = (1..=64).find(|k| k * (k + 1) / 2 == entries.len()).ok_or_else(|| {
            Error::DimensionMismatch {
                expected: "a triangular number of upper-triangle entries".into(),
                found: entries.len().to_string(),
            }
        })?;
        let mut matrix = vec![Rational::zero(); dim * dim];
        let mut it = entries.iter();
        for i in 0..dim {
            for j in i..dim {
                let v = *it.next().expect("length checked");
                matrix[i * dim + j] = v;
                matrix[j * dim + i] = v;
            }
        }
        Self::new(dim, matrix)
    }

    /// Parses comma-separated upper-triangle entries such as `"1,1/2,2"`.
    pub fn parse(text: &str) -> Result<Self> {
        let entries = text.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
        Self::from_upper_triangle(&entries)
    }

    pub fn diagonal(coefficients: &[Rational]) -> Result<Self> {
        let dim = coefficients.len();
        let mut matrix = vec![Rational::zero(); dim * dim];
        for (i, c) in coefficients.iter().enumerate() {
            matrix[i * dim + i] = *c;
        }
        Self::new(dim, matrix)
    }

    /// `x_1^2 + ... + x_k^2`.
    pub fn sum_of_squares(dim: usize) -> Self {
        Self::diagonal(&vec![Rational::one(); dim]).expect("identity is positive definite")
    }

    /// Integer binary form `a x^2 + b x y + c y^2`.
    pub fn binary(a: i64, b: i64, c: i64) -> Result<Self> {
        let half = Rational::new(b as i128, 2);
        Self::new(2, vec![Rational::from(a as i128), half, half, Rational::from(c as i128)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> Rational {
        self.matrix[i * self.dim + j]
    }

    pub fn matrix(&self) -> &[Rational] {
        &self.matrix
    }

    pub fn upper_triangle(&self) -> Vec<Rational> {
        (0..self.dim).flat_map(|i| (i..self.dim).map(move |j| (i, j))).map(|(i, j)| self.entry(i, j)).collect()
    }

    /// Exact `Q(x)`.
    pub fn eval(&self, x: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc += self.matrix[i * self.dim + j] * x[i] * x[j];
            }
        }
        acc
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim {
            let row: f64 = (0..self.dim).map(|j| to_f64(&self.matrix[i * self.dim + j]) * x[j]).sum();
            acc += row * x[i];
        }
        acc
    }

    pub fn determinant(&self) -> Rational {
        self.ldl().expect("validated positive definite").0.iter().product()
    }

    /// Leading principal minors, all positive for a valid form.
    pub fn leading_minors(&self) -> Vec<Rational> {
        let (pivots, _) = self.ldl().expect("validated positive definite");
        pivots
            .iter()
            .scan(Rational::one(), |acc, p| {
                *acc *= *p;
                Some(*acc)
            })
            .collect()
    }

    /// Integer valued on `Z^k`: diagonal entries integral, off-diagonal in `Z/2`.
    pub fn is_integral(&self) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| {
                let v = self.entry(i, j);
                if i == j {
                    v.is_integer()
                } else {
                    (v * 2).is_integer()
                }
            })
        })
    }

    /// For an integral form, whether the gcd of its coefficients
    /// `a_ii` and `2 a_ij` is one.
    pub fn is_primitive(&self) -> bool {
        if !self.is_integral() {
            return false;
        }
        let mut g = 0i128;
        for i in 0..self.dim {
            for j in i..self.dim {
                let v = self.entry(i, j);
                let coefficient = if i == j { v } else { v * 2 };
                g = g.gcd(coefficient.numer());
            }
        }
        g == 1
    }

    /// `(den, M)` with `A = M / den` and `M` integral.
    pub(crate) fn scaled(&self) -> Result<(i128, Vec<i128>)> {
        let mut den = 1i128;
        for v in &self.matrix {
            den = lcm_i128(den, *v.denom()).ok_or(Error::Overflow("scaling the form"))?;
        }
        let mat = self
            .matrix
            .iter()
            .map(|v| v.numer().checked_mul(den / v.denom()).ok_or(Error::Overflow("scaling the form")))
            .collect::<Result<Vec<_>>>()?;
        Ok((den, mat))
    }

    /// `A = U^T D U` with `U` unit upper triangular, by Gaussian elimination
    /// without pivoting. `None` when a pivot is not positive.
    pub(crate) fn ldl(&self) -> Option<(Vec<Rational>, Vec<Rational>)> {
        let k = self.dim;
        let mut work = self.matrix.clone();
        let mut pivots = Vec::with_capacity(k);
        let mut upper = vec![Rational::zero(); k * k];
        for i in 0..k {
            let pivot = work[i * k + i];
            if !pivot.is_positive() {
                return None;
            }
            pivots.push(pivot);
            upper[i * k + i] = Rational::one();
            for j in i + 1..k {
                upper[i * k + j] = work[i * k + j] / pivot;
            }
            for r in i + 1..k {
                let factor = work[r * k + i] / pivot;
                for c in i..k {
                    let delta = factor * work[i * k + c];
                    work[r * k + c] -= delta;
                }
            }
        }
        Some((pivots, upper))
    }
}

impl fmt::Display for RatQuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.upper_triangle().iter().map(fmt_rational).collect();
        write!(f, "{}", parts.join(","))
    }
}
