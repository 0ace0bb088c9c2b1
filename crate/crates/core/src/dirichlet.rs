//! Quadratic Gauss sums, reduced binary quadratic forms, class numbers and
//! the values `L(1, chi_{-d})` of the Kronecker characters attached to
//! `d = 3 (mod 4)`.
//!
//! L-values are produced exactly: Dirichlet's class number formula for the
//! fundamental part of `-d`, corrected by the Euler factors at the primes
//! of the conductor, gives `L(1, chi_{-d}) = r * pi / sqrt(d)` with `r`
//! rational.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;

use crate::arith::{exact_sqrt, factorize, kronecker, squarefree_part};
use crate::{Error, Rational, Result};

/// Largest modulus accepted by [`gauss_sum_direct`].
pub const MAX_GAUSS_MODULUS: u64 = 1_000_000;

/// Largest `|D|` accepted by the reduced-form enumeration.
pub const MAX_DISCRIMINANT: u64 = 1_000_000_000_000;

/// Neumaier-compensated complex accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    re: f64,
    re_comp: f64,
    im: f64,
    im_comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, z: Complex64) {
        neumaier(&mut self.re, &mut self.re_comp, z.re);
        neumaier(&mut self.im, &mut self.im_comp, z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re + self.re_comp, self.im + self.im_comp)
    }
}

fn neumaier(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

/// `e(num / den) = exp(2 pi i num / den)` for `0 <= num < den`.
pub(crate) fn unit_root(num: u64, den: u64) -> Complex64 {
    let (s, c) = (2.0 * PI * num as f64 / den as f64).sin_cos();
    Complex64::new(c, s)
}

/// `G(m; N) = sum_{n=1}^{N} e(m n^2 / N)` by direct summation.
pub fn gauss_sum_direct(m: u64, modulus: u64) -> Result<Complex64> {
    if m == 0 || modulus == 0 {
        return Err(Error::NonPositive);
    }
    if modulus > MAX_GAUSS_MODULUS {
        return Err(Error::too_large("N", modulus, MAX_GAUSS_MODULUS));
    }
    let m = (m % modulus) as u128;
    let big = modulus as u128;
    let mut acc = CompensatedSum::default();
    for n in 1..=modulus as u128 {
        let r = (m * (n * n % big) % big) as u64;
        acc.add(unit_root(r, modulus));
    }
    Ok(acc.value())
}

/// Exact value `coefficient * sqrt(radicand)` of `Im G(m; N)` for odd `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ImGaussSum {
    pub coefficient: i64,
    pub radicand: u64,
}

impl ImGaussSum {
    pub fn value(&self) -> f64 {
        self.coefficient as f64 * (self.radicand as f64).sqrt()
    }
}

/// Closed form of `Im G(m; N)` for odd `N`.
///
/// With `d = N / gcd(m, N)`: zero when `d = 1 (mod 4)`, otherwise
/// `(N / sqrt d) * ((m d / N) / d)`, i.e. `gcd(m, N) * (m' / d) * sqrt d`.
pub fn gauss_sum_im_exact(m: u64, modulus: u64) -> Result<ImGaussSum> {
    if m == 0 || modulus == 0 {
        return Err(Error::NonPositive);
    }
    if modulus.is_multiple_of(2) {
        return Err(Error::EvenModulus(modulus));
    }
    let g = m.gcd(&modulus);
    let d = modulus / g;
    if d % 4 == 1 {
        return Ok(ImGaussSum { coefficient: 0, radicand: d });
    }
    let reduced = ((m / g) % d) as i64;
    let symbol = kronecker(reduced, d as i64) as i64;
    Ok(ImGaussSum { coefficient: symbol * g as i64, radicand: d })
}

/// [`gauss_sum_im_exact`] as a real number.
pub fn gauss_sum_im_closed(m: u64, modulus: u64) -> Result<f64> {
    gauss_sum_im_exact(m, modulus).map(|v| v.value())
}

/// A binary quadratic form `a x^2 + b x y + c y^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BinaryFormClass {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl BinaryFormClass {
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    /// Reduced: `|b| <= a <= c`, and `b >= 0` when `|b| = a` or `a = c`.
    pub fn is_reduced(&self) -> bool {
        self.a > 0
            && self.b.abs() <= self.a
            && self.a <= self.c
            && (self.b >= 0 || (self.b.abs() != self.a && self.a != self.c))
    }

    pub fn eval(&self, x: i64, y: i64) -> i64 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }
}

impl fmt::Display for BinaryFormClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

fn check_discriminant(disc: i64) -> Result<u64> {
    if disc >= 0 || !matches!(disc.rem_euclid(4), 0 | 1) {
        return Err(Error::InvalidDiscriminant(disc));
    }
    let abs = disc.unsigned_abs();
    if abs > MAX_DISCRIMINANT {
        return Err(Error::too_large("|D|", abs, MAX_DISCRIMINANT));
    }
    Ok(abs)
}

fn for_each_reduced(disc: i64, abs: u64, mut f: impl FnMut(BinaryFormClass)) {
    let parity = disc.rem_euclid(2);
    let mut a = 1i64;
    while 3 * (a as u64) * (a as u64) <= abs {
        let mut b = -a + 1;
        if b.rem_euclid(2) != parity {
            b += 1;
        }
        while b <= a {
            let num = b * b - disc;
            if num % (4 * a) == 0 {
                let c = num / (4 * a);
                let form = BinaryFormClass { a, b, c };
                if c >= a && (b >= 0 || a != c) {
                    f(form);
                }
            }
            b += 2;
        }
        a += 1;
    }
}

/// All reduced forms of discriminant `disc < 0`, primitive or not,
/// sorted lexicographically by `(a, b, c)`.
pub fn reduced_forms(disc: i64) -> Result<Vec<BinaryFormClass>> {
    let abs = check_discriminant(disc)?;
    let mut forms = Vec::new();
    for_each_reduced(disc, abs, |form| forms.push(form));
    Ok(forms)
}

/// Whether `disc` is the discriminant of an imaginary quadratic field.
pub fn is_fundamental(disc: i64) -> bool {
    if disc >= 0 {
        return false;
    }
    let abs = disc.unsigned_abs();
    match disc.rem_euclid(4) {
        1 => squarefree_part(abs).map(|s| s == abs).unwrap_or(false),
        0 => {
            let m = disc / 4;
            matches!(m.rem_euclid(4), 2 | 3)
                && squarefree_part(m.unsigned_abs()).map(|s| s == m.unsigned_abs()).unwrap_or(false)
        }
        _ => false,
    }
}

/// Number of primitive reduced forms of discriminant `disc`.
pub fn form_class_number(disc: i64) -> Result<u64> {
    let abs = check_discriminant(disc)?;
    let mut count = 0u64;
    for_each_reduced(disc, abs, |form| count += u64::from(form.is_primitive()));
    Ok(count)
}

/// `h(-d)` for a fundamental discriminant `-d`.
pub fn class_number(d: u64) -> Result<u64> {
    if d == 0 {
        return Err(Error::NonPositive);
    }
    let disc = i64::try_from(d).map_err(|_| Error::too_large("d", d, MAX_DISCRIMINANT))?;
    if !is_fundamental(-disc) {
        return Err(Error::NotFundamental(d));
    }
    form_class_number(-disc)
}

/// Number of units `w(D)` in the order of discriminant `D`.
pub fn unit_count(disc: i64) -> u64 {
    match disc {
        -3 => 6,
        -4 => 4,
        _ => 2,
    }
}

/// Splits a negative discriminant as `D0 * f^2` with `D0` fundamental.
pub fn fundamental_decomposition(disc: i64) -> Result<(i64, u64)> {
    let abs = check_discriminant(disc)?;
    let kernel = squarefree_part(abs)?;
    let f = exact_sqrt(abs / kernel).expect("quotient by squarefree kernel is a square");
    let kernel = kernel as i64;
    if (-kernel).rem_euclid(4) == 1 {
        Ok((-kernel, f))
    } else {
        // D = 0 mod 4 forces f even here
        Ok((-4 * kernel, f / 2))
    }
}

/// `L(1, chi_{-d})` for `d = 3 (mod 4)`, held exactly as
/// `rational_part * pi / sqrt(d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LValue {
    pub d: u64,
    pub rational_part: Rational,
    pub value: f64,
    /// Fundamental discriminant `D0` with `-d = D0 f^2`.
    pub fundamental: i64,
    /// Conductor factor `f`.
    pub conductor: u64,
}

pub fn l_value(d: u64) -> Result<LValue> {
    if d % 4 != 3 {
        return Err(Error::NotThreeModFour(d));
    }
    let disc = i64::try_from(d).map_err(|_| Error::too_large("d", d, MAX_DISCRIMINANT))?;
    let (fundamental, conductor) = fundamental_decomposition(-disc)?;
    let h = form_class_number(fundamental)?;
    let w = unit_count(fundamental);
    // L(1, chi_D0) = 2 pi h / (w sqrt|D0|) and sqrt|D0| = sqrt(d) / f
    let mut rational_part = Rational::new(2 * h as i128 * conductor as i128, w as i128);
    if conductor > 1 {
        for p in factorize(conductor)?.primes() {
            let chi = kronecker(fundamental, p as i64) as i128;
            rational_part *= Rational::new(p as i128 - chi, p as i128);
        }
    }
    let value = crate::rational::to_f64(&rational_part) * PI / (d as f64).sqrt();
    Ok(LValue { d, rational_part, value, fundamental, conductor })
}
