//! Lattice point counting in parabolic regions and elliptic paraboloids.
//!
//! The crate counts integer points in dilates of
//! `P = {(x, y) : |y| <= c - Q(x + beta)}` exactly, evaluates the closed
//! form of the error term for the planar region `|y| <= 1 - x^2` at odd
//! integral dilations through quadratic Gauss sums, class numbers and
//! `L(1, chi_{-d})`, and measures the exponential sum bounds and
//! Omega-type growth that control the error term in higher dimension.
//!
//! Module map:
//! - [`arith`]: factorization, square divisors, Kronecker symbol.
//! - [`dirichlet`]: Gauss sums, reduced binary forms, class numbers, L-values.
//! - [`lattice`]: quadratic forms, paraboloid regions, exact counting, volumes.
//! - [`formula`]: closed-form error term for the planar region and its checks.
//! - [`expsum`]: Farey dissection and weighted theta sums.
//! - [`omega`]: boundary witnesses and error-term extremal scans.
//! - [`asymptotics`]: error scans and growth-exponent fits.
//! - [`cli`]: the command-line front end.

pub mod arith;
pub mod asymptotics;
pub mod cli;
pub mod dirichlet;
mod error;
pub mod expsum;
pub mod formula;
pub mod lattice;
pub mod omega;
mod rational;

pub use error::{Error, Result};
pub use rational::{parse_rational, Rational};
