use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `|E - E_g| / |E_g|`.
pub fn relative_error(energy: f64, ground: f64) -> Result<f64> {
    if ground == 0.0 {
        return Err(Error::UndefinedMetric(
            "relative error against a zero ground energy".into(),
        ));
    }
    Ok((energy - ground).abs() / ground.abs())
}

/// Box-plot statistics with linearly interpolated quartiles and whiskers
/// at the most extreme data inside `[Q1 - 1.5 IQR, Q3 + 1.5 IQR]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub count: usize,
    pub mean: f64,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub whisker_low: f64,
    pub whisker_high: f64,
    pub min: f64,
    pub max: f64,
}

/// Quantile of sorted data, interpolating between order statistics at
/// position `(len - 1) * p`.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let pos = (sorted.len() - 1) as f64 * p;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub fn compute_stats(values: &[f64]) -> Result<SummaryStats> {
    if values.is_empty() {
        return Err(Error::config("statistics of an empty sample"));
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::numeric("statistics of a sample containing NaN"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q1 = quantile_sorted(&sorted, 0.25);
    let q3 = quantile_sorted(&sorted, 0.75);
    let iqr = q3 - q1;
    let (lo_fence, hi_fence) = (q1 - 1.5 * iqr, q3 + 1.5 * iqr);
    let whisker_low = sorted.iter().copied().find(|v| *v >= lo_fence).unwrap_or(q1);
    let whisker_high = sorted.iter().rev().copied().find(|v| *v <= hi_fence).unwrap_or(q3);
    Ok(SummaryStats {
        count: sorted.len(),
        mean: sorted.iter().sum::<f64>() / sorted.len() as f64,
        median: quantile_sorted(&sorted, 0.5),
        q1,
        q3,
        whisker_low,
        whisker_high,
        min: sorted[0],
        max: sorted[sorted.len() - 1],
    })
}
