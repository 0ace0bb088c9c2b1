//! Error-term scans over dilations and power-law fits `|E(R)| ~ C R^alpha`.

use rayon::prelude::*;

use crate::lattice::{error_record, ErrorRecord, ParaboloidSpec};
use crate::{Error, Result};

/// Errors smaller than this are dropped before fitting.
pub const FIT_ERROR_FLOOR: f64 = 1e-9;

/// One [`ErrorRecord`] per dilation, in input order.
pub fn error_scan(spec: &ParaboloidSpec, rs: &[u64]) -> Result<Vec<ErrorRecord>> {
    rs.par_iter().map(|&r| error_record(spec, r)).collect()
}

/// Least-squares fit of `log |E|` against `log R`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    /// `max |E(R)| / R^slope` over retained records.
    pub max_normalized: f64,
    /// 95th percentile of `|E(R)| / R^slope`.
    pub p95_normalized: f64,
    pub used: usize,
    pub dropped: usize,
}

pub fn fit_exponent(records: &[ErrorRecord]) -> Result<ExponentFit> {
    let usable: Vec<(f64, f64)> = records
        .iter()
        .filter(|rec| rec.error.abs() >= FIT_ERROR_FLOOR && rec.r > 0)
        .map(|rec| ((rec.r as f64).ln(), rec.error.abs().ln()))
        .collect();
    let dropped = records.len() - usable.len();
    if usable.len() < 3 {
        return Err(Error::TooFewRecords { needed: 3, usable: usable.len(), dropped });
    }
    let n = usable.len() as f64;
    let (mx, my) = usable.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x / n, b + y / n));
    let (sxy, sxx) = usable
        .iter()
        .fold((0.0, 0.0), |(sxy, sxx), (x, y)| (sxy + (x - mx) * (y - my), sxx + (x - mx) * (x - mx)));
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("fit needs at least two distinct dilations".into()));
    }
    let slope = sxy / sxx;
    let normalized: Vec<f64> = normalized_errors(records, slope).into_iter().filter(|v| *v > 0.0).collect();
    Ok(ExponentFit {
        slope,
        intercept: my - slope * mx,
        max_normalized: normalized.iter().copied().fold(0.0, f64::max),
        p95_normalized: quantile(&normalized, 0.95),
        used: usable.len(),
        dropped,
    })
}

/// `|E(R)| / R^exponent` per record, with errors below the floor mapped to zero.
pub fn normalized_errors(records: &[ErrorRecord], exponent: f64) -> Vec<f64> {
    records
        .iter()
        .map(|rec| {
            if rec.error.abs() < FIT_ERROR_FLOOR || rec.r == 0 {
                0.0
            } else {
                rec.error.abs() / (rec.r as f64).powf(exponent)
            }
        })
        .collect()
}

/// Nearest-rank quantile; `0.0` for an empty slice.
pub fn quantile(values: &[f64], q: f64) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rank = ((q.clamp(0.0, 1.0) * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    sorted[rank - 1]
}
