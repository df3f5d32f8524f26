//! Binomial confidence intervals and a two-sample chi-squared test.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use statrs::function::beta::beta_reg;

/// Exact (Clopper–Pearson) two-sided interval for a binomial proportion.
pub fn clopper_pearson(successes: u64, trials: u64, confidence: f64) -> (f64, f64) {
    assert!(successes <= trials);
    if trials == 0 {
        return (0.0, 1.0);
    }
    let alpha = 1.0 - confidence;
    let (k, n) = (successes as f64, trials as f64);
    let lo = if successes == 0 { 0.0 } else { beta_quantile(k, n - k + 1.0, alpha / 2.0) };
    let hi = if successes == trials { 1.0 } else { beta_quantile(k + 1.0, n - k, 1.0 - alpha / 2.0) };
    (lo, hi)
}

/// Quantile of Beta(a, b) by bisection on the regularized incomplete beta
/// function (the distribution's own inverse is only accurate to ~1e−5).
fn beta_quantile(a: f64, b: f64, q: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if beta_reg(a, b, mid) < q {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChiSquaredTest {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
    /// value ranges after merging sparse bins, as (first, last) inclusive
    pub bins: Vec<(u64, u64)>,
}

/// Smallest expected count per cell after merging.
pub const MIN_EXPECTED: f64 = 5.0;

/// Chi-squared test of homogeneity between two samples of non-negative
/// integers. Adjacent values are merged into bins until every expected
/// cell count is at least [`MIN_EXPECTED`]; a single remaining bin gives
/// p = 1.
pub fn chi_squared_two_sample(a: &[u64], b: &[u64]) -> ChiSquaredTest {
    let mut hist: BTreeMap<u64, (u64, u64)> = BTreeMap::new();
    for &x in a {
        hist.entry(x).or_default().0 += 1;
    }
    for &x in b {
        hist.entry(x).or_default().1 += 1;
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let total = na + nb;
    let smaller = na.min(nb) / total;
    // a bin is large enough when its smaller expected cell reaches MIN_EXPECTED
    let enough = |count: u64| count as f64 * smaller >= MIN_EXPECTED;
    let mut bins: Vec<((u64, u64), (u64, u64))> = Vec::new();
    let mut cur: Option<((u64, u64), (u64, u64))> = None;
    for (&v, &(ca, cb)) in &hist {
        let c = match cur.take() {
            Some(((lo, _), (xa, xb))) => ((lo, v), (xa + ca, xb + cb)),
            None => ((v, v), (ca, cb)),
        };
        if enough(c.1 .0 + c.1 .1) {
            bins.push(c);
        } else {
            cur = Some(c);
        }
    }
    if let Some(c) = cur {
        match bins.last_mut() {
            Some(last) => {
                last.0 .1 = c.0 .1;
                last.1 .0 += c.1 .0;
                last.1 .1 += c.1 .1;
            }
            None => bins.push(c),
        }
    }
    let ranges: Vec<(u64, u64)> = bins.iter().map(|b| b.0).collect();
    if bins.len() < 2 || na == 0.0 || nb == 0.0 {
        return ChiSquaredTest { statistic: 0.0, df: 0, p_value: 1.0, bins: ranges };
    }
    let mut stat = 0.0;
    for (_, (ca, cb)) in &bins {
        let row = (ca + cb) as f64;
        let (ea, eb) = (row * na / total, row * nb / total);
        stat += (*ca as f64 - ea).powi(2) / ea + (*cb as f64 - eb).powi(2) / eb;
    }
    let df = bins.len() - 1;
    let p_value = 1.0 - ChiSquared::new(df as f64).unwrap().cdf(stat);
    ChiSquaredTest { statistic: stat, df, p_value, bins: ranges }
}

/// Median and quartiles by linear interpolation between order statistics.
pub fn quartiles(values: &[f64]) -> (f64, f64, f64) {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let q = |t: f64| {
        if v.is_empty() {
            return f64::NAN;
        }
        let x = t * (v.len() - 1) as f64;
        let i = x.floor() as usize;
        let f = x - i as f64;
        if i + 1 < v.len() {
            v[i] * (1.0 - f) + v[i + 1] * f
        } else {
            v[i]
        }
    };
    (q(0.25), q(0.5), q(0.75))
}
