//! Paraboloid regions `P = {(x, y) in R^(d-1) x R : |y| <= c - Q(x + beta)}`,
//! exact lattice point counts of their dilates `R P`, boundary counts and
//! volumes.
//!
//! A point `(n, m)` lies in `R P` exactly when `|m| R <= c R^2 - Q(n + R beta)`,
//! so each admissible `n` contributes a fiber of `2 floor((c R^2 - Q(n + R beta)) / R) + 1`
//! points. When `Q`, `beta` and `c` are rational every comparison is done in
//! scaled 128-bit integers; a real shift uses floating point and reports
//! fibers that sit within `1e-9` of a jump instead of resolving them.

mod count;
mod enumerate;
mod form;
mod volume;

pub use count::{boundary_count, count_parabola_2d, count_paraboloid, error_record, rep_count, CountOutcome};
pub(crate) use count::visit_form_points;
pub use form::RatQuadForm;
pub use volume::{unit_ball_volume, unit_sublevel_volume, volume};

use num_traits::{One, Signed, Zero};

use crate::{Error, Rational, Result};

/// Largest dilation accepted by [`count_parabola_2d`].
pub const MAX_PLANAR_DILATION: i128 = 10_000_000;

/// Distance to a fiber jump below which the float path declines to decide.
pub const AMBIGUITY_TOLERANCE: f64 = 1e-9;

/// The shift vector `beta`.
#[derive(Debug, Clone, PartialEq)]
pub enum Shift {
    Rational(Vec<Rational>),
    Real(Vec<f64>),
}

impl Shift {
    pub fn zero(dim: usize) -> Self {
        Shift::Rational(vec![Rational::zero(); dim])
    }

    pub fn len(&self) -> usize {
        match self {
            Shift::Rational(v) => v.len(),
            Shift::Real(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Shift::Rational(_))
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            Shift::Rational(v) => v.iter().map(crate::rational::to_f64).collect(),
            Shift::Real(v) => v.clone(),
        }
    }
}

/// The region `|y| <= c - Q(x + beta)` in dimension `d = dim Q + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParaboloidSpec {
    form: RatQuadForm,
    shift: Shift,
    height: Rational,
}

impl ParaboloidSpec {
    pub fn new(form: RatQuadForm, shift: Shift, height: Rational) -> Result<Self> {
        if !height.is_positive() {
            return Err(Error::NonPositive);
        }
        if shift.len() != form.dim() {
            return Err(Error::DimensionMismatch {
                expected: format!("shift of length {}", form.dim()),
                found: format!("length {}", shift.len()),
            });
        }
        if let Shift::Real(v) = &shift {
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidParameter("shift must be finite".into()));
            }
        }
        Ok(ParaboloidSpec { form, shift, height })
    }

    /// `beta = 0`.
    pub fn centered(form: RatQuadForm, height: Rational) -> Result<Self> {
        let dim = form.dim();
        Self::new(form, Shift::zero(dim), height)
    }

    /// The planar region `|y| <= 1 - x^2`.
    pub fn parabola_2d() -> Self {
        Self::centered(RatQuadForm::sum_of_squares(1), Rational::one()).expect("valid region")
    }

    /// Ambient dimension `d`.
    pub fn dim(&self) -> usize {
        self.form.dim() + 1
    }

    pub fn form(&self) -> &RatQuadForm {
        &self.form
    }

    pub fn shift(&self) -> &Shift {
        &self.shift
    }

    pub fn height(&self) -> Rational {
        self.height
    }

    pub fn is_rational(&self) -> bool {
        self.shift.is_rational()
    }
}

/// Count, main term `|P| R^d` and error `E(R) = count - |P| R^d` at one dilation.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRecord {
    pub r: u64,
    pub count: u128,
    pub volume_term: f64,
    pub error: f64,
    /// Fibers the float path left undecided; zero on the rational path.
    pub ambiguous_fibers: u64,
}
