// Fincke-Pohst style enumeration of integer points n with Q(n + s) <= radius.
//
// Bounds come from a floating-point LDL^T factorization and are widened, so
// the visited set is a superset of the true one. Callers decide membership
// with exact arithmetic.

use super::RatQuadForm;
use crate::rational::to_f64;

const RELATIVE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone)]
pub(crate) struct Ellipsoid {
    dim: usize,
    diag: Vec<f64>,
    // row-major unit upper triangular factor
    upper: Vec<f64>,
}

impl Ellipsoid {
    pub(crate) fn new(form: &RatQuadForm) -> Self {
        let (pivots, upper) = form.ldl().expect("validated positive definite");
        Ellipsoid {
            dim: form.dim(),
            diag: pivots.iter().map(to_f64).collect(),
            upper: upper.iter().map(to_f64).collect(),
        }
    }

    fn coordinate_range(&self, level: usize, y: &[f64], shift: f64, budget: f64, radius: f64) -> Option<(i64, i64)> {
        let k = self.dim;
        let center: f64 = -(level + 1..k).map(|j| self.upper[level * k + j] * y[j]).sum::<f64>();
        let rem = budget + RELATIVE_SLACK * (radius + 1.0);
        if rem < 0.0 {
            return None;
        }
        let half = (rem / self.diag[level]).sqrt();
        let pad = RELATIVE_SLACK * (1.0 + center.abs() + half);
        let lo = (center - half - pad - shift).ceil();
        let hi = (center + half + pad - shift).floor();
        (lo <= hi).then_some((lo as i64, hi as i64))
    }

    /// Candidate values of the last coordinate.
    pub(crate) fn outer_range(&self, shift: &[f64], radius: f64) -> Option<(i64, i64)> {
        let y = vec![0.0; self.dim];
        self.coordinate_range(self.dim - 1, &y, shift[self.dim - 1], radius, radius)
    }

    /// Visits every candidate point whose last coordinate equals `outer`.
    pub(crate) fn for_each_with_outer(
        &self,
        shift: &[f64],
        radius: f64,
        outer: i64,
        f: &mut impl FnMut(&[i64]),
    ) {
        let k = self.dim;
        let mut n = vec![0i64; k];
        let mut y = vec![0.0; k];
        n[k - 1] = outer;
        y[k - 1] = outer as f64 + shift[k - 1];
        let used = self.diag[k - 1] * y[k - 1] * y[k - 1];
        self.descend(k - 1, shift, radius, radius - used, &mut n, &mut y, f);
    }

    pub(crate) fn for_each(&self, shift: &[f64], radius: f64, f: &mut impl FnMut(&[i64])) {
        if let Some((lo, hi)) = self.outer_range(shift, radius) {
            for outer in lo..=hi {
                self.for_each_with_outer(shift, radius, outer, f);
            }
        }
    }

    // Coordinates at index >= `fixed` are set; `budget` is what remains of the radius.
    #[allow(clippy::too_many_arguments)]
    fn descend(
        &self,
        fixed: usize,
        shift: &[f64],
        radius: f64,
        budget: f64,
        n: &mut [i64],
        y: &mut [f64],
        f: &mut impl FnMut(&[i64]),
    ) {
        if fixed == 0 {
            f(n);
            return;
        }
        let level = fixed - 1;
        let k = self.dim;
        let Some((lo, hi)) = self.coordinate_range(level, y, shift[level], budget, radius) else {
            return;
        };
        let offset: f64 = (level + 1..k).map(|j| self.upper[level * k + j] * y[j]).sum();
        for v in lo..=hi {
            n[level] = v;
            y[level] = v as f64 + shift[level];
            let t = y[level] + offset;
            self.descend(level, shift, radius, budget - self.diag[level] * t * t, n, y, f);
        }
    }
}
