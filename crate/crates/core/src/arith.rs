//! Exact integer utilities: factorization, divisors, square parts and the
//! Kronecker symbol.
//!
//! Inputs are bounded by [`MAX_INPUT`]; intermediate products run in 128 bits.

use num_integer::Integer;

use crate::{Error, Result};

/// Largest accepted input, `2^63`.
pub const MAX_INPUT: u64 = 1 << 63;

const TRIAL_LIMIT: u64 = 1_000_000;

/// Prime factorization `n = prod p^e`, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Reconstructs the factored integer.
    pub fn value(&self) -> u64 {
        self.factors.iter().map(|&(p, e)| p.pow(e)).product()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// All divisors in ascending order.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

fn check_width(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::NonPositive);
    }
    if n > MAX_INPUT {
        return Err(Error::too_large("n", n, MAX_INPUT));
    }
    Ok(())
}

/// Factors `1 <= n <= 2^63`: trial division up to `10^6`, then Pollard rho.
pub fn factorize(n: u64) -> Result<Factorization> {
    check_width(n)?;
    let mut factors = Vec::new();
    let mut rest = n;
    for p in [2u64, 3, 5] {
        push_power(&mut rest, p, &mut factors);
    }
    // 6k +- 1 wheel
    let mut p = 7u64;
    let mut step = 4u64;
    while p <= TRIAL_LIMIT && p * p <= rest {
        push_power(&mut rest, p, &mut factors);
        p += step;
        step = 6 - step;
    }
    if rest > 1 {
        if p * p > rest {
            factors.push((rest, 1));
        } else {
            let mut large = Vec::new();
            split_large(rest, &mut large);
            large.sort_unstable();
            for q in large {
                match factors.last_mut() {
                    Some((last, e)) if *last == q => *e += 1,
                    _ => factors.push((q, 1)),
                }
            }
        }
    }
    Ok(Factorization { factors })
}

fn push_power(rest: &mut u64, p: u64, factors: &mut Vec<(u64, u32)>) {
    let mut e = 0;
    while (*rest).is_multiple_of(p) {
        *rest /= p;
        e += 1;
    }
    if e > 0 {
        factors.push((p, e));
    }
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    split_large(d, out);
    split_large(n / d, out);
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// Brent's variant of Pollard rho; n is odd, composite and has no factor below 10^6.
fn pollard_brent(n: u64) -> u64 {
    for c in 1u64.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let mut x;
        let mut g = 1u64;
        let mut ys = y;
        loop {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..(128.min(r - k)) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += 128;
            }
            r *= 2;
            if g != 1 {
                break;
            }
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!("Pollard rho exhausted all increments")
}

/// `N*`, the largest perfect square dividing `n`.
pub fn greatest_square_divisor(n: u64) -> Result<u64> {
    Ok(factorize(n)?.factors.iter().map(|&(p, e)| p.pow(e - e % 2)).product())
}

/// Squarefree kernel `n / N*`.
pub fn squarefree_part(n: u64) -> Result<u64> {
    Ok(factorize(n)?.factors.iter().filter(|&&(_, e)| e % 2 == 1).map(|&(p, _)| p).product())
}

pub fn is_squarefree(n: u64) -> Result<bool> {
    Ok(factorize(n)?.is_squarefree())
}

/// Divisors `d` of `n` with `d = r (mod m)`, ascending.
pub fn divisors_congruent(n: u64, r: u64, m: u64) -> Result<Vec<u64>> {
    if m == 0 || r >= m {
        return Err(Error::InvalidParameter(format!("residue {r} modulo {m}")));
    }
    let mut divs = factorize(n)?.divisors();
    divs.retain(|d| d % m == r);
    Ok(divs)
}

/// Integer square root when `n` is a perfect square.
pub fn exact_sqrt(n: u64) -> Option<u64> {
    let s = n.isqrt();
    (s * s == n).then_some(s)
}

// (2/n) for odd n, indexed by n mod 8
const TWO_TABLE: [i8; 8] = [0, 1, 0, -1, 0, -1, 0, 1];

/// Kronecker symbol `(a/b)`, extended to every integer `b` including `0`,
/// negative values and powers of two.
pub fn kronecker(a: i64, b: i64) -> i8 {
    let (mut a, mut b) = (a as i128, b as i128);
    if b == 0 {
        return i8::from(a.abs() == 1);
    }
    if a % 2 == 0 && b % 2 == 0 {
        return 0;
    }
    let v = b.trailing_zeros();
    b >>= v;
    let mut k = if v % 2 == 0 { 1 } else { TWO_TABLE[(a & 7) as usize] };
    if b < 0 {
        b = -b;
        if a < 0 {
            k = -k;
        }
    }
    a = a.rem_euclid(b);
    loop {
        if a == 0 {
            return if b == 1 { k } else { 0 };
        }
        let v = a.trailing_zeros();
        a >>= v;
        if v % 2 == 1 {
            k *= TWO_TABLE[(b & 7) as usize];
        }
        if a & b & 2 != 0 {
            k = -k;
        }
        let r = a;
        a = b % r;
        b = r;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn trial_division(mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut p = 2;
        while p * p <= n {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            if e > 0 {
                out.push((p, e));
            }
            p += 1;
        }
        if n > 1 {
            out.push((n, 1));
        }
        out
    }

    fn legendre_by_squares(a: i64, p: i64) -> i8 {
        let r = a.rem_euclid(p);
        if r == 0 {
            return 0;
        }
        if (1..p).any(|x| (x * x) % p == r) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn factorize_examples() {
        assert!(factorize(1).unwrap().factors().is_empty());
        assert_eq!(factorize(12).unwrap().factors(), &[(2, 2), (3, 1)]);
        assert_eq!(factorize(9973).unwrap().factors(), &[(9973, 1)]);
        assert_eq!(factorize(0), Err(Error::NonPositive));
        assert!(matches!(factorize(MAX_INPUT + 1), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn factorize_beyond_trial_division() {
        // products of primes above the trial-division limit
        let p = 1_000_003u64;
        let q = 999_999_937u64;
        assert_eq!(factorize(p * q).unwrap().factors(), &[(p, 1), (q, 1)]);
        assert_eq!(factorize(p * p * 7).unwrap().factors(), &[(7, 1), (p, 2)]);
        let big = 4_611_686_014_132_420_609u64; // (2^31 - 1)^2
        assert_eq!(factorize(big).unwrap().factors(), &[(2_147_483_647, 2)]);
        assert_eq!(factorize(MAX_INPUT).unwrap().factors(), &[(2, 63)]);
        let f = factorize(9_223_372_036_854_775_783).unwrap(); // largest prime below 2^63
        assert_eq!(f.factors(), &[(9_223_372_036_854_775_783, 1)]);
    }

    #[test]
    fn factorization_matches_trial_division_up_to_1e5() {
        for n in 1..=100_000u64 {
            let f = factorize(n).unwrap();
            assert_eq!(f.value(), n);
            assert_eq!(f.factors(), trial_division(n).as_slice(), "n = {n}");
            assert!(f.primes().all(is_prime));
        }
    }

    #[test]
    fn greatest_square_divisor_examples() {
        assert_eq!(greatest_square_divisor(1).unwrap(), 1);
        assert_eq!(greatest_square_divisor(48).unwrap(), 16);
        assert_eq!(greatest_square_divisor(45).unwrap(), 9);
    }

    #[test]
    fn greatest_square_divisor_matches_exhaustive_search() {
        for n in 1..=3000u64 {
            let brute = (1..=n.isqrt()).filter(|s| n % (s * s) == 0).map(|s| s * s).max().unwrap();
            let sq = greatest_square_divisor(n).unwrap();
            assert_eq!(sq, brute, "n = {n}");
            let kernel = squarefree_part(n).unwrap();
            assert_eq!(sq * kernel, n);
            assert!(is_squarefree(kernel).unwrap());
        }
    }

    #[test]
    fn divisors_congruent_examples() {
        assert_eq!(divisors_congruent(21, 3, 4).unwrap(), vec![3, 7]);
        assert!(divisors_congruent(25, 3, 4).unwrap().is_empty());
        assert_eq!(divisors_congruent(36, 0, 1).unwrap(), vec![1, 2, 3, 4, 6, 9, 12, 18, 36]);
        assert!(divisors_congruent(10, 4, 4).is_err());
    }

    #[test]
    fn divisors_match_enumeration() {
        for n in 1..=2000u64 {
            let brute: Vec<u64> = (1..=n).filter(|d| n % d == 0 && d % 4 == 3).collect();
            assert_eq!(divisors_congruent(n, 3, 4).unwrap(), brute);
        }
    }

    #[test]
    fn kronecker_examples() {
        for d in [-7, -3, 0, 5, 12] {
            assert_eq!(kronecker(d, 1), 1);
        }
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(-4, 5), 1);
        assert_eq!(kronecker(-7, 2), 1);
        assert_eq!(kronecker(5, 0), 0);
        assert_eq!(kronecker(-1, 0), 1);
        assert_eq!(kronecker(-3, -1), -1);
        assert_eq!(kronecker(4, 6), 0);
        assert_eq!(kronecker(i64::MIN, 3), kronecker(-(1i64 << 62), 3) * kronecker(2, 3));
    }

    #[test]
    fn kronecker_is_legendre_for_odd_primes() {
        let primes: Vec<i64> = (3..200).filter(|&p| is_prime(p as u64)).collect();
        for p in primes {
            for a in -60..60 {
                assert_eq!(kronecker(a, p), legendre_by_squares(a, p), "({a}/{p})");
            }
        }
    }

    proptest! {
        #[test]
        fn kronecker_is_multiplicative(
            d in -10_000i64..10_000,
            m1 in -100_000i64..100_000,
            m2 in -100_000i64..100_000,
        ) {
            prop_assume!(m1 != 0 && m2 != 0);
            prop_assert_eq!(kronecker(d, m1 * m2), kronecker(d, m1) * kronecker(d, m2));
        }

        #[test]
        fn factorization_reconstructs(n in 1u64..=MAX_INPUT) {
            let f = factorize(n).unwrap();
            prop_assert_eq!(f.value(), n);
            prop_assert!(f.factors().windows(2).all(|w| w[0].0 < w[1].0));
            prop_assert!(f.primes().all(is_prime));
        }
    }
}
