use std::f64::consts::PI;

use super::{ParaboloidSpec, RatQuadForm};
use crate::rational::to_f64;

/// Volume of the unit ball in `R^k`, by the slicing recursion
/// `V_k = V_{k-2} * 2 pi / k`.
pub fn unit_ball_volume(k: usize) -> f64 {
    match k {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(k - 2) * 2.0 * PI / k as f64,
    }
}

/// `vol{x : Q(x) <= 1} = V_k / sqrt(det A)`; for `k = 2` this is `pi / sqrt(det A)`.
pub fn unit_sublevel_volume(form: &RatQuadForm) -> f64 {
    unit_ball_volume(form.dim()) / to_f64(&form.determinant()).sqrt()
}

/// `|P| = 4 V_1 c^((d+1)/2) / (d+1)` with `V_1 = vol{Q <= 1}`, from
/// `|P| = int 2 (c - Q(x))_+ dx`. Independent of the shift.
pub fn volume(spec: &ParaboloidSpec) -> f64 {
    let d = spec.dim() as f64;
    let c = to_f64(&spec.height());
    4.0 * unit_sublevel_volume(spec.form()) * c.powf((d + 1.0) / 2.0) / (d + 1.0)
}
