//! Closed-form thresholds, constants and first-order predictions for the
//! random models.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstantKind {
    /// c_d: d-collapsibility threshold
    Collapse,
    /// c_d*: top homology threshold
    TopHomology,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdConstant {
    pub d: usize,
    pub value: f64,
    pub kind: ConstantKind,
    /// |defining equation| at the computed root
    pub residual: f64,
}

pub const BISECTION_TOLERANCE: f64 = 1e-15;

/// Bisection on [lo, hi] for a sign change of `f`, to relative width `tol`
/// (or until the midpoint stops moving).
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut flo = f(lo);
    assert!(flo * f(hi) <= 0.0, "no sign change on [{lo}, {hi}]");
    while hi - lo > tol * hi.abs().max(lo.abs()) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn check_d(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::domain(format!("threshold constants are defined for d ≥ 2, got {d}")));
    }
    Ok(())
}

/// (d+1)(1−x) + (1+dx) ln x, whose root in (0, 1) defines c_d*.
pub fn c_star_equation(d: usize, x: f64) -> f64 {
    let d = d as f64;
    (d + 1.0) * (1.0 - x) + (1.0 + d * x) * x.ln()
}

/// e^x − 1 − dx: stationarity of x/(1−e^{−x})^d, whose minimum over x > 0
/// is the peeling threshold c_d. x = 0 is a spurious root.
pub fn c_collapse_equation(d: usize, x: f64) -> f64 {
    x.exp_m1() - d as f64 * x
}

pub fn c_star_with_tolerance(d: usize, tol: f64) -> Result<ThresholdConstant> {
    check_d(d)?;
    let x = bisect(|x| c_star_equation(d, x), 1e-12, 1.0 - 1e-12, tol);
    Ok(ThresholdConstant {
        d,
        value: -x.ln() / (1.0 - x).powi(d as i32),
        kind: ConstantKind::TopHomology,
        residual: c_star_equation(d, x).abs(),
    })
}

/// c_d* = −ln x / (1−x)^d for the root x of [`c_star_equation`].
pub fn c_star(d: usize) -> Result<ThresholdConstant> {
    c_star_with_tolerance(d, BISECTION_TOLERANCE)
}

pub fn c_collapse_with_tolerance(d: usize, tol: f64) -> Result<ThresholdConstant> {
    check_d(d)?;
    let x = bisect(|x| c_collapse_equation(d, x), 1e-6, 50.0, tol);
    Ok(ThresholdConstant {
        d,
        value: x / (-(-x).exp_m1()).powi(d as i32),
        kind: ConstantKind::Collapse,
        residual: c_collapse_equation(d, x).abs(),
    })
}

/// c_d = min_{x>0} x/(1−e^{−x})^d. Greedy collapsing of Y_d(n, c/n) peels
/// (d−1)-faces of degree one; their degrees are asymptotically Poisson(c),
/// and the peeling leaves a nonempty core exactly when the fixed point
/// x = c(1−e^{−x})^d has a positive solution.
pub fn c_collapse(d: usize) -> Result<ThresholdConstant> {
    c_collapse_with_tolerance(d, BISECTION_TOLERANCE)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ThresholdModel {
    /// G(n, p) connectivity: ln n / n
    GnpConnectivity,
    /// H_{d−1}(Y_d(n, p); F) = 0: d ln n / n
    LmHomology,
    /// H_k(X(n, p); Q) = 0 above ((k/2+1) ln n + (k/2) ln ln n) / n)^{1/(k+1)}
    CliqueVanishing,
}

pub const THRESHOLD_MODELS: &str = "gnp-connectivity, lm-homology, clique-vanishing";

impl FromStr for ThresholdModel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gnp-connectivity" => Ok(ThresholdModel::GnpConnectivity),
            "lm-homology" => Ok(ThresholdModel::LmHomology),
            "clique-vanishing" => Ok(ThresholdModel::CliqueVanishing),
            _ => Err(Error::domain(format!("unknown threshold model '{s}'; supported: {THRESHOLD_MODELS}"))),
        }
    }
}

impl fmt::Display for ThresholdModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ThresholdModel::GnpConnectivity => "gnp-connectivity",
            ThresholdModel::LmHomology => "lm-homology",
            ThresholdModel::CliqueVanishing => "clique-vanishing",
        })
    }
}

/// Leading-order threshold value; `d_or_k` is d for Linial–Meshulam and k
/// for clique complexes, ignored for G(n, p).
pub fn threshold_function(model: ThresholdModel, n: usize, d_or_k: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::domain("threshold functions need n ≥ 3"));
    }
    let nf = n as f64;
    let ln = nf.ln();
    match model {
        ThresholdModel::GnpConnectivity => Ok(ln / nf),
        ThresholdModel::LmHomology => {
            if d_or_k == 0 {
                return Err(Error::domain("lm-homology needs d ≥ 1"));
            }
            Ok(d_or_k as f64 * ln / nf)
        }
        ThresholdModel::CliqueVanishing => {
            if d_or_k == 0 {
                return Err(Error::domain("clique-vanishing needs k ≥ 1"));
            }
            let k = d_or_k as f64;
            Ok((((k / 2.0 + 1.0) * ln + (k / 2.0) * ln.ln()) / nf).powf(1.0 / (k + 1.0)))
        }
    }
}

/// Limit of P[H_1(G(n, c/n)) = 0] for c < 1: √(1−c) exp(c/2 + c²/4).
pub fn prob_acyclic_limit(c: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&c) {
        return Err(Error::domain(format!("the acyclicity limit is stated for 0 ≤ c < 1 (it is 0 for c ≥ 1), got {c}")));
    }
    Ok((1.0 - c).sqrt() * (c / 2.0 + c * c / 4.0).exp())
}

fn ln_factorial(k: usize) -> f64 {
    ln_gamma(k as f64 + 1.0)
}

/// Limit of the expected number of ∂Δ^{d+1} subcomplexes of Y_d(n, c/n):
/// c^{d+2}/(d+2)!.
pub fn expected_simplex_boundaries(d: usize, c: f64) -> Result<f64> {
    if c < 0.0 {
        return Err(Error::domain("c must be non-negative"));
    }
    if c == 0.0 {
        return Ok(0.0);
    }
    Ok(((d as f64 + 2.0) * c.ln() - ln_factorial(d + 2)).exp())
}

/// exp(−c^{d+2}/(d+2)!), the limiting probability that H_d(Y_d(n, c/n)) = 0
/// for c below c_d*.
pub fn prob_top_vanishing_limit(d: usize, c: f64) -> Result<f64> {
    let cs = c_star(d)?.value;
    if c >= cs {
        return Err(Error::domain(format!("the vanishing limit is stated for c < c_{d}* = {cs:.6}")));
    }
    Ok((-expected_simplex_boundaries(d, c)?).exp())
}

fn ln_binomial(n: f64, k: f64) -> f64 {
    ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0)
}

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("probability {p} outside [0, 1]")));
    }
    Ok(())
}

/// E[f_i(X(n, p))] = C(n, i+1) p^{C(i+1, 2)}.
pub fn expected_faces_clique(n: usize, p: f64, i: usize) -> Result<f64> {
    check_p(p)?;
    if i + 1 > n {
        return Ok(0.0);
    }
    let e = ((i + 1) * i / 2) as f64;
    if e == 0.0 {
        return Ok(n as f64);
    }
    if p == 0.0 {
        return Ok(0.0);
    }
    Ok((ln_binomial(n as f64, i as f64 + 1.0) + e * p.ln()).exp())
}

/// |Σ_i (−1)^i E[f_i]|, truncated once a term drops below 1e−15 of the
/// running magnitude (after the peak of the terms).
pub fn euler_prediction(n: usize, p: f64) -> Result<f64> {
    check_p(p)?;
    let mut sum = 0.0;
    let mut prev = f64::INFINITY;
    for i in 0..n {
        let t = expected_faces_clique(n, p, i)?;
        sum += if i % 2 == 0 { t } else { -t };
        if t < prev && t < 1e-15 * sum.abs().max(1.0) {
            break;
        }
        prev = t;
    }
    Ok(sum.abs())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BettiPrediction {
    pub value: f64,
    /// 1/n^{1/k} < p < 1/n^{1/(k+1)}, the regime where the prediction applies
    pub in_window: bool,
    pub window: (f64, f64),
}

/// First-order E[β_k(X(n, p))] ≈ C(n, k+1) p^{C(k+1, 2)}.
pub fn expected_betti_first_order(n: usize, p: f64, k: usize) -> Result<BettiPrediction> {
    if k == 0 {
        return Err(Error::domain("the first-order Betti prediction is stated for k ≥ 1"));
    }
    let nf = n as f64;
    let window = (nf.powf(-1.0 / k as f64), nf.powf(-1.0 / (k as f64 + 1.0)));
    Ok(BettiPrediction {
        value: expected_faces_clique(n, p, k)?,
        in_window: window.0 < p && p < window.1,
        window,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Domination {
    Vanishes,
    Nonvanishes,
    Indeterminate,
}

impl fmt::Display for Domination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Domination::Vanishes => "vanishes",
            Domination::Nonvanishes => "nonvanishes",
            Domination::Indeterminate => "indeterminate",
        })
    }
}

/// Σ_{i=1}^{m} α_i C(m, i).
fn weighted(alphas: &[f64], m: usize) -> f64 {
    alphas.iter().take(m).enumerate().map(|(i, a)| a * crate::rng::binomial(m as u64, i as u64 + 1) as f64).sum()
}

/// For p_i = n^{−α_i}: H^{k−1}(X; Q) = 0 w.h.p. when Σ α_i C(k, i) < 1, and
/// nonzero w.h.p. when that sum is ≥ 1 but the same sum for k−1 is < 1.
pub fn fowler_domination(alphas: &[f64], k: usize) -> Result<Domination> {
    if k == 0 || k > alphas.len() {
        return Err(Error::domain(format!("need 1 ≤ k ≤ {} exponents, got k = {k}", alphas.len())));
    }
    if alphas.iter().any(|a| !(a.is_finite() && *a >= 0.0)) {
        return Err(Error::domain("exponents must be finite and non-negative"));
    }
    Ok(if weighted(alphas, k) < 1.0 {
        Domination::Vanishes
    } else if weighted(alphas, k - 1) < 1.0 {
        Domination::Nonvanishes
    } else {
        Domination::Indeterminate
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeometricModel {
    Rips,
    Cech,
}

impl FromStr for GeometricModel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rips" | "vr" => Ok(GeometricModel::Rips),
            "cech" | "čech" => Ok(GeometricModel::Cech),
            _ => Err(Error::domain(format!("unknown geometric model '{s}'; supported: rips, cech"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometricScaling {
    /// E[β_k] / (n^{n_exp} r^{r_exp}) tends to a constant in the subcritical
    /// regime
    pub n_exp: u32,
    pub r_exp: u32,
}

/// Subcritical normalisation of E[β_k]: (2k+2, d(2k+1)) for Rips and
/// (k+2, d(k+1)) for Čech.
pub fn geometric_scaling(model: GeometricModel, d: usize, k: usize) -> Result<GeometricScaling> {
    if d == 0 || k == 0 {
        return Err(Error::domain("geometric scaling needs d ≥ 1 and k ≥ 1"));
    }
    let (d, k) = (d as u32, k as u32);
    match model {
        GeometricModel::Rips => Ok(GeometricScaling { n_exp: 2 * k + 2, r_exp: d * (2 * k + 1) }),
        GeometricModel::Cech => {
            if k >= d {
                return Err(Error::domain(format!("Čech homology in degree {k} vanishes in ambient dimension {d}")));
            }
            Ok(GeometricScaling { n_exp: k + 2, r_exp: d * (k + 1) })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomologyWindow {
    /// nr^d above which H_k(Čech) vanishes w.h.p.: ln n + k ln ln n
    pub vanish: f64,
    /// nr^d below which H_k is still nonzero w.h.p.: ln n + (k−2) ln ln n
    pub persist: f64,
}

/// The window in nr^d around the vanishing of H_k of a Čech complex on n
/// uniform points, for 1 ≤ k ≤ d−1.
pub fn homology_window(n: usize, d: usize, k: usize) -> Result<HomologyWindow> {
    if k == 0 || k + 1 > d {
        return Err(Error::domain(format!("the vanishing window is stated for 1 ≤ k ≤ d−1, got k = {k}, d = {d}")));
    }
    if n < 3 {
        return Err(Error::domain("need n ≥ 3"));
    }
    let ln = (n as f64).ln();
    Ok(HomologyWindow { vanish: ln + k as f64 * ln.ln(), persist: ln + (k as f64 - 2.0) * ln.ln() })
}

/// Positive root of x = 1 − e^{−cx} (the giant component fraction), 0 for
/// c ≤ 1.
pub fn giant_fraction(c: f64) -> f64 {
    if c <= 1.0 {
        return 0.0;
    }
    bisect(|x| x - 1.0 + (-c * x).exp(), 1e-9, 1.0, BISECTION_TOLERANCE)
}
