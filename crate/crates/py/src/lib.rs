//! Python bindings. Exact rationals are returned as `fractions.Fraction`.

use paralattice::asymptotics::{error_scan, fit_exponent};
use paralattice::lattice::{ParaboloidSpec, RatQuadForm, Shift};
use paralattice::{arith, dirichlet, expsum, formula, lattice, omega, parse_rational, Error, Rational};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyComplex, PyDict};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((*r.numer(), *r.denom()))
}

fn ratio64<'py>(py: Python<'py>, num: i64, den: i64) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((num, den))
}

// Accepts int, Fraction or a string such as "5/3".
fn rational_arg(value: &Bound<'_, PyAny>) -> PyResult<Rational> {
    parse_rational(&value.str()?.to_string()).map_err(err)
}

/// The region `|y| <= c - Q(x + beta)`.
#[pyclass(name = "Paraboloid", module = "pyparalattice", frozen)]
struct PyParaboloid {
    spec: ParaboloidSpec,
}

#[pymethods]
impl PyParaboloid {
    /// `q` is the upper triangle of the form, e.g. "1,1/2,2"; `beta` holds exact
    /// rationals and `beta_float` floats (at most one of the two).
    #[new]
    #[pyo3(signature = (q = "1", c = None, beta = None, beta_float = None))]
    fn new(
        q: &str,
        c: Option<&Bound<'_, PyAny>>,
        beta: Option<Vec<Bound<'_, PyAny>>>,
        beta_float: Option<Vec<f64>>,
    ) -> PyResult<Self> {
        let form = RatQuadForm::parse(q).map_err(err)?;
        let height = match c {
            Some(c) => rational_arg(c)?,
            None => Rational::from_integer(1),
        };
        let shift = match (beta, beta_float) {
            (Some(_), Some(_)) => return Err(PyValueError::new_err("give beta or beta_float, not both")),
            (Some(b), None) => Shift::Rational(b.iter().map(rational_arg).collect::<PyResult<_>>()?),
            (None, Some(b)) => Shift::Real(b),
            (None, None) => Shift::zero(form.dim()),
        };
        Ok(PyParaboloid { spec: ParaboloidSpec::new(form, shift, height).map_err(err)? })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.spec.dim()
    }

    /// Lattice points in `R P`.
    fn count(&self, r: u64) -> PyResult<u128> {
        Ok(lattice::count_paraboloid(&self.spec, r).map_err(err)?.count)
    }

    /// `(count, ambiguous_fibers)`; the second entry is nonzero only for float shifts.
    fn count_outcome(&self, r: u64) -> PyResult<(u128, u64)> {
        let o = lattice::count_paraboloid(&self.spec, r).map_err(err)?;
        Ok((o.count, o.ambiguous_fibers))
    }

    fn boundary_count(&self, r: u64) -> PyResult<u128> {
        lattice::boundary_count(&self.spec, r).map_err(err)
    }

    fn volume(&self) -> f64 {
        lattice::volume(&self.spec)
    }

    /// `count - volume * R^d`.
    fn error(&self, r: u64) -> PyResult<f64> {
        Ok(lattice::error_record(&self.spec, r).map_err(err)?.error)
    }

    /// Power-law fit of `|E(R)|` over `rs` as a dict.
    fn fit_exponent<'py>(&self, py: Python<'py>, rs: Vec<u64>) -> PyResult<Bound<'py, PyDict>> {
        let records = error_scan(&self.spec, &rs).map_err(err)?;
        let fit = fit_exponent(&records).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("slope", fit.slope)?;
        d.set_item("intercept", fit.intercept)?;
        d.set_item("max_normalized", fit.max_normalized)?;
        d.set_item("p95_normalized", fit.p95_normalized)?;
        d.set_item("used", fit.used)?;
        d.set_item("dropped", fit.dropped)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!("Paraboloid(q=\"{}\", dim={})", self.spec.form(), self.spec.dim())
    }
}

/// Lattice points in `N P` for `P: |y| <= 1 - x^2`; `n` may be rational.
#[pyfunction]
fn count_parabola_2d(n: &Bound<'_, PyAny>) -> PyResult<u128> {
    lattice::count_parabola_2d(rational_arg(n)?).map_err(err)
}

/// Exact `E(N)` for odd `N`.
#[pyfunction]
fn error_term_exact(py: Python<'_>, n: u64) -> PyResult<Bound<'_, PyAny>> {
    fraction(py, &formula::error_term_exact(n).map_err(err)?.value)
}

#[pyfunction]
fn error_term_cor_4k1(py: Python<'_>, n: u64) -> PyResult<Bound<'_, PyAny>> {
    fraction(py, &formula::error_term_cor_4k1(n).map_err(err)?)
}

#[pyfunction]
fn error_term_cor_sqfree(py: Python<'_>, n: u64) -> PyResult<Bound<'_, PyAny>> {
    fraction(py, &formula::error_term_cor_sqfree(n).map_err(err)?)
}

/// `(checked, [N with a mismatch])` over odd `N <= n_max`.
#[pyfunction]
fn verify_formula_range(n_max: u64) -> PyResult<(u64, Vec<u64>)> {
    let report = formula::verify_formula_range(n_max).map_err(err)?;
    Ok((report.checked, report.mismatches.iter().map(|m| m.n).collect()))
}

#[pyfunction]
fn factorize(n: u64) -> PyResult<Vec<(u64, u32)>> {
    Ok(arith::factorize(n).map_err(err)?.factors().to_vec())
}

#[pyfunction]
fn kronecker(a: i64, b: i64) -> i8 {
    arith::kronecker(a, b)
}

#[pyfunction]
fn gauss_sum_direct(py: Python<'_>, m: u64, n: u64) -> PyResult<Bound<'_, PyComplex>> {
    let g = dirichlet::gauss_sum_direct(m, n).map_err(err)?;
    Ok(PyComplex::from_doubles(py, g.re, g.im))
}

#[pyfunction]
fn gauss_sum_im_closed(m: u64, n: u64) -> PyResult<f64> {
    dirichlet::gauss_sum_im_closed(m, n).map_err(err)
}

#[pyfunction]
fn class_number(d: u64) -> PyResult<u64> {
    dirichlet::class_number(d).map_err(err)
}

/// Reduced forms `(a, b, c)` of discriminant `disc < 0`.
#[pyfunction]
fn reduced_forms(disc: i64) -> PyResult<Vec<(i64, i64, i64)>> {
    Ok(dirichlet::reduced_forms(disc).map_err(err)?.iter().map(|f| (f.a, f.b, f.c)).collect())
}

/// `(value, rational_part)` with `L(1, chi_{-d}) = rational_part * pi / sqrt(d)`.
#[pyfunction]
fn l_value(py: Python<'_>, d: u64) -> PyResult<(f64, Bound<'_, PyAny>)> {
    let l = dirichlet::l_value(d).map_err(err)?;
    Ok((l.value, fraction(py, &l.rational_part)?))
}

/// `(a, q, lo, hi)` for the Farey arc containing `x mod 1`.
#[pyfunction]
fn farey_locate(py: Python<'_>, x: f64, order: u64) -> PyResult<(i64, u64, Bound<'_, PyAny>, Bound<'_, PyAny>)> {
    let arc = expsum::farey_locate(x, order).map_err(err)?;
    Ok((arc.a, arc.q, ratio64(py, *arc.lo.numer(), *arc.lo.denom())?, ratio64(py, *arc.hi.numer(), *arc.hi.denom())?))
}

#[pyfunction]
fn prop31_ratio(q: &str, alpha: f64, beta: f64, x: f64, n: u64) -> PyResult<f64> {
    let form = RatQuadForm::parse(q).map_err(err)?;
    expsum::prop31_ratio(&form, alpha, beta, x, n).map_err(err)
}

#[pyfunction]
fn hl_ratio(x: f64, n: u64) -> PyResult<f64> {
    expsum::hl_ratio(x, n).map_err(err)
}

#[pyfunction]
fn boundary_family_2d(m: u64) -> PyResult<Vec<(i64, i64)>> {
    omega::boundary_family_2d(m).map_err(err)
}

/// `[(N, E(N), E(N)/sqrt(N))]`, most negative first.
#[pyfunction]
fn omega_minus_scan(py: Python<'_>, n_max: u64) -> PyResult<Vec<(u64, Bound<'_, PyAny>, f64)>> {
    omega::omega_minus_scan(n_max)
        .map_err(err)?
        .iter()
        .map(|r| Ok((r.n, fraction(py, &r.error)?, r.normalized)))
        .collect()
}

/// `[(M, E(M^2)/M)]` for admissible `M <= m_max`.
#[pyfunction]
fn omega_plus_family(py: Python<'_>, m_max: u64) -> PyResult<Vec<(u64, Bound<'_, PyAny>)>> {
    omega::omega_plus_family(m_max)
        .map_err(err)?
        .records
        .iter()
        .map(|r| Ok((r.m, fraction(py, &r.normalized)?)))
        .collect()
}

#[pymodule]
fn pyparalattice(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyParaboloid>()?;
    m.add_function(wrap_pyfunction!(count_parabola_2d, m)?)?;
    m.add_function(wrap_pyfunction!(error_term_exact, m)?)?;
    m.add_function(wrap_pyfunction!(error_term_cor_4k1, m)?)?;
    m.add_function(wrap_pyfunction!(error_term_cor_sqfree, m)?)?;
    m.add_function(wrap_pyfunction!(verify_formula_range, m)?)?;
    m.add_function(wrap_pyfunction!(factorize, m)?)?;
    m.add_function(wrap_pyfunction!(kronecker, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_sum_direct, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_sum_im_closed, m)?)?;
    m.add_function(wrap_pyfunction!(class_number, m)?)?;
    m.add_function(wrap_pyfunction!(reduced_forms, m)?)?;
    m.add_function(wrap_pyfunction!(l_value, m)?)?;
    m.add_function(wrap_pyfunction!(farey_locate, m)?)?;
    m.add_function(wrap_pyfunction!(prop31_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(hl_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(boundary_family_2d, m)?)?;
    m.add_function(wrap_pyfunction!(omega_minus_scan, m)?)?;
    m.add_function(wrap_pyfunction!(omega_plus_family, m)?)?;
    Ok(())
}
