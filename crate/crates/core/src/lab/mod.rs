//! Seeded Monte Carlo harness: property estimation, coupled threshold
//! scans, and the experiments built on them.
//!
//! Trial `i` of a run with master seed `s` always uses `RngSeed::new(s, i)`,
//! and aggregation only counts outcomes, so results do not depend on the
//! number of worker threads.

pub mod experiments;
pub mod property;
pub mod stats;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::geometry::{gen_points, Distribution};
use crate::linalg::{Domain, F2Basis};
use crate::models::{cech, gen_clique_complex, gen_gnp, gen_linial_meshulam, gen_multiparameter, vietoris_rips};
use crate::rng::{binomial, RngSeed};

pub use property::{betti_vanishes, PropertySpec};
pub use stats::{chi_squared_two_sample, clopper_pearson, quartiles, ChiSquaredTest};

/// Confidence level of every reported interval.
pub const CONFIDENCE: f64 = 0.95;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum ModelConfig {
    Gnp { n: usize, p: f64 },
    LinialMeshulam { n: usize, d: usize, p: f64 },
    Clique { n: usize, p: f64, max_dim: usize },
    /// X(n; p_1, p_2, …); scans vary p_1
    Multiparameter { n: usize, probs: Vec<f64> },
    Rips { n: usize, dim: usize, distribution: Distribution, r: f64, max_dim: usize },
    Cech { n: usize, dim: usize, distribution: Distribution, r: f64, max_dim: usize },
}

impl ModelConfig {
    pub fn n(&self) -> usize {
        match *self {
            ModelConfig::Gnp { n, .. }
            | ModelConfig::LinialMeshulam { n, .. }
            | ModelConfig::Clique { n, .. }
            | ModelConfig::Multiparameter { n, .. }
            | ModelConfig::Rips { n, .. }
            | ModelConfig::Cech { n, .. } => n,
        }
    }

    /// The scanned parameter: p, p_1, or r.
    pub fn param(&self) -> f64 {
        match self {
            ModelConfig::Gnp { p, .. } | ModelConfig::LinialMeshulam { p, .. } | ModelConfig::Clique { p, .. } => *p,
            ModelConfig::Multiparameter { probs, .. } => probs.first().copied().unwrap_or(0.0),
            ModelConfig::Rips { r, .. } | ModelConfig::Cech { r, .. } => *r,
        }
    }

    pub fn with_param(&self, x: f64) -> ModelConfig {
        let mut m = self.clone();
        match &mut m {
            ModelConfig::Gnp { p, .. } | ModelConfig::LinialMeshulam { p, .. } | ModelConfig::Clique { p, .. } => *p = x,
            ModelConfig::Multiparameter { probs, .. } => {
                if let Some(p) = probs.first_mut() {
                    *p = x;
                }
            }
            ModelConfig::Rips { r, .. } | ModelConfig::Cech { r, .. } => *r = x,
        }
        m
    }

    pub fn is_geometric(&self) -> bool {
        matches!(self, ModelConfig::Rips { .. } | ModelConfig::Cech { .. })
    }

    /// Parameter checks, so that bad configurations fail up front instead
    /// of being counted as per-trial errors.
    pub fn validate(&self) -> Result<()> {
        let prob = |p: f64| {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(Error::domain(format!("probability {p} outside [0, 1]")))
            }
        };
        if self.n() == 0 {
            return Err(Error::domain("models need n ≥ 1"));
        }
        match self {
            ModelConfig::Gnp { p, .. } | ModelConfig::Clique { p, .. } => prob(*p),
            ModelConfig::LinialMeshulam { n, d, p } => {
                if *d == 0 || d >= n {
                    return Err(Error::domain(format!("Y_d(n, p) needs 1 ≤ d ≤ n − 1, got d = {d}, n = {n}")));
                }
                prob(*p)
            }
            ModelConfig::Multiparameter { probs, .. } => {
                if probs.is_empty() {
                    return Err(Error::domain("the multi-parameter model needs at least one probability"));
                }
                probs.iter().try_for_each(|&p| prob(p))
            }
            ModelConfig::Rips { dim, r, .. } | ModelConfig::Cech { dim, r, .. } => {
                if *dim == 0 {
                    return Err(Error::domain("point clouds need ambient dimension ≥ 1"));
                }
                if !(*r >= 0.0) {
                    return Err(Error::domain("radius must be non-negative"));
                }
                Ok(())
            }
        }
    }

    pub fn sample(&self, seed: RngSeed) -> Result<SimplicialComplex> {
        match self {
            ModelConfig::Gnp { n, p } => gen_gnp(*n, *p, seed),
            ModelConfig::LinialMeshulam { n, d, p } => gen_linial_meshulam(*n, *d, *p, seed),
            ModelConfig::Clique { n, p, max_dim } => gen_clique_complex(*n, *p, *max_dim, seed),
            ModelConfig::Multiparameter { n, probs } => gen_multiparameter(*n, probs, seed),
            ModelConfig::Rips { n, dim, distribution, r, max_dim } => {
                vietoris_rips(&gen_points(*n, *dim, *distribution, seed)?, *r, *max_dim)
            }
            ModelConfig::Cech { n, dim, distribution, r, max_dim } => {
                cech(&gen_points(*n, *dim, *distribution, seed)?, *r, *max_dim)
            }
        }
    }
}

impl fmt::Display for ModelConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelConfig::Gnp { n, p } => write!(f, "gnp(n={n},p={p})"),
            ModelConfig::LinialMeshulam { n, d, p } => write!(f, "lm(n={n},d={d},p={p})"),
            ModelConfig::Clique { n, p, max_dim } => write!(f, "clique(n={n},p={p},max_dim={max_dim})"),
            ModelConfig::Multiparameter { n, probs } => {
                let ps: Vec<String> = probs.iter().map(f64::to_string).collect();
                write!(f, "multi(n={n},probs={})", ps.join(":"))
            }
            ModelConfig::Rips { n, dim, distribution, r, max_dim } => {
                write!(f, "rips(n={n},dim={dim},{distribution},r={r},max_dim={max_dim})")
            }
            ModelConfig::Cech { n, dim, distribution, r, max_dim } => {
                write!(f, "cech(n={n},dim={dim},{distribution},r={r},max_dim={max_dim})")
            }
        }
    }
}

/// How scan grid values map to the model parameter.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridScale {
    #[default]
    Absolute,
    /// grid value c means parameter c/n
    PerN,
}

impl GridScale {
    pub fn apply(self, x: f64, n: usize) -> f64 {
        match self {
            GridScale::Absolute => x,
            GridScale::PerN => x / n as f64,
        }
    }
}

impl FromStr for GridScale {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "absolute" | "abs" => Ok(GridScale::Absolute),
            "per-n" | "c/n" => Ok(GridScale::PerN),
            _ => Err(Error::domain(format!("unknown grid scale '{s}'; supported: absolute, per-n"))),
        }
    }
}

/// Outcome of one property on one trial; errors carry their message.
pub type Outcome = std::result::Result<bool, String>;

fn outcome(r: Result<bool>) -> Outcome {
    r.map_err(|e| e.to_string())
}

/// One trial: its seed, configuration, outcomes and timings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub seed: RngSeed,
    pub model: ModelConfig,
    pub properties: Vec<PropertySpec>,
    pub outcomes: Vec<Outcome>,
    pub sample_ms: f64,
    /// evaluation time per property
    pub timings_ms: Vec<f64>,
}

impl TrialRecord {
    pub fn run(model: &ModelConfig, properties: &[PropertySpec], seed: RngSeed) -> TrialRecord {
        let start = Instant::now();
        let sampled = model.sample(seed);
        let sample_ms = start.elapsed().as_secs_f64() * 1e3;
        let mut outcomes = Vec::with_capacity(properties.len());
        let mut timings_ms = Vec::with_capacity(properties.len());
        for prop in properties {
            let t = Instant::now();
            outcomes.push(match &sampled {
                Ok(x) => outcome(prop.evaluate(x)),
                Err(e) => Err(e.to_string()),
            });
            timings_ms.push(t.elapsed().as_secs_f64() * 1e3);
        }
        TrialRecord { seed, model: model.clone(), properties: properties.to_vec(), outcomes, sample_ms, timings_ms }
    }

    /// Re-executes the trial from its seed.
    pub fn replay(&self) -> TrialRecord {
        TrialRecord::run(&self.model, &self.properties, self.seed)
    }

    pub fn replays_identically(&self) -> bool {
        self.replay().outcomes == self.outcomes
    }
}

/// Fraction of trials with a property, with an exact binomial interval.
/// Trials whose evaluation failed are counted in `errors` and excluded
/// from the proportion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub successes: u64,
    /// trials with a definite outcome
    pub trials: u64,
    pub errors: u64,
    pub estimate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub first_error: Option<String>,
}

impl Estimate {
    pub fn from_outcomes<'a>(outcomes: impl IntoIterator<Item = &'a Outcome>) -> Estimate {
        let (mut successes, mut trials, mut errors, mut first_error) = (0, 0, 0, None);
        for o in outcomes {
            match o {
                Ok(b) => {
                    trials += 1;
                    successes += *b as u64;
                }
                Err(e) => {
                    errors += 1;
                    first_error.get_or_insert_with(|| e.clone());
                }
            }
        }
        let (ci_lo, ci_hi) = clopper_pearson(successes, trials, CONFIDENCE);
        let estimate = if trials == 0 { f64::NAN } else { successes as f64 / trials as f64 };
        Estimate { successes, trials, errors, estimate, ci_lo, ci_hi, first_error }
    }

    pub fn ci_halfwidth(&self) -> f64 {
        0.5 * (self.ci_hi - self.ci_lo)
    }
}

/// Runs `f(i)` for `i in 0..trials` on `jobs` threads (0 means all cores),
/// returning results in trial order.
pub fn run_trials<T, F>(trials: u64, jobs: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().expect("thread pool");
    pool.install(|| (0..trials).into_par_iter().map(&f).collect())
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::domain("need at least one trial"));
    }
    Ok(())
}

/// Estimates P[property] over `trials` independent draws.
pub fn estimate(model: &ModelConfig, property: &PropertySpec, trials: u64, seed: u64, jobs: usize) -> Result<Estimate> {
    Ok(estimate_many(model, std::slice::from_ref(property), trials, seed, jobs)?.remove(0))
}

/// Several properties evaluated on the same draws.
pub fn estimate_many(
    model: &ModelConfig,
    properties: &[PropertySpec],
    trials: u64,
    seed: u64,
    jobs: usize,
) -> Result<Vec<Estimate>> {
    check_trials(trials)?;
    model.validate()?;
    let records = run_trials(trials, jobs, |i| TrialRecord::run(model, properties, RngSeed::new(seed, i)));
    Ok((0..properties.len()).map(|j| Estimate::from_outcomes(records.iter().map(|r| &r.outcomes[j]))).collect())
}

/// Direction in which a property changes along a coupled scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
}

impl PropertySpec {
    /// Direction of the property along the scanned parameter of `model`
    /// when draws are coupled, if it is monotone.
    pub fn monotonicity(&self, model: &ModelConfig) -> Option<Monotonicity> {
        use Monotonicity::*;
        use PropertySpec as P;
        match (model, self) {
            (_, P::Connected) => Some(Increasing),
            (ModelConfig::Gnp { .. }, P::HasGiant { .. }) => Some(Increasing),
            (ModelConfig::Gnp { .. }, P::Pure { d: 1 }) => Some(Increasing),
            (ModelConfig::Gnp { .. }, P::Acyclic) | (ModelConfig::Gnp { .. }, P::BettiZero { k: 1, .. }) => Some(Decreasing),
            (ModelConfig::Gnp { .. }, P::BettiNonzero { k: 1, .. }) => Some(Increasing),
            (ModelConfig::LinialMeshulam { d, .. }, p) => match *p {
                P::Pure { d: e } if e == *d => Some(Increasing),
                P::Collapsible { d: e } if e == *d => Some(Decreasing),
                P::BettiZero { k, .. } if k + 1 == *d => Some(Increasing),
                P::BettiNonzero { k, .. } if k + 1 == *d => Some(Decreasing),
                P::BettiZero { k, .. } if k == *d => Some(Decreasing),
                P::BettiNonzero { k, .. } if k == *d => Some(Increasing),
                _ => None,
            },
            _ => None,
        }
    }
}

/// How a scan evaluates each trial across the grid.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ScanStrategy {
    /// bisection for monotone properties and an incremental rank for
    /// β_{d−1} of Y_d over F₂; full evaluation otherwise
    #[default]
    Auto,
    /// sample and evaluate at every grid point
    Full,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    /// grid value (before scaling)
    pub param: f64,
    pub estimate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub trials: u64,
    pub errors: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub model: ModelConfig,
    pub property: PropertySpec,
    pub scale: GridScale,
    pub rows: Vec<ScanRow>,
    /// grid value where the estimate crosses 1/2, by linear interpolation
    pub crossing: Option<f64>,
    pub first_error: Option<String>,
}

impl ScanResult {
    pub fn grid(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.param).collect()
    }

    pub fn estimates(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.estimate).collect()
    }

    pub fn ci_halfwidths(&self) -> Vec<f64> {
        self.rows.iter().map(|r| 0.5 * (r.ci_hi - r.ci_lo)).collect()
    }

    pub fn total_errors(&self) -> u64 {
        self.rows.iter().map(|r| r.errors).sum()
    }

    /// CSV with columns param,estimate,ci_lo,ci_hi,trials,errors.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("param,estimate,ci_lo,ci_hi,trials,errors\n");
        for r in &self.rows {
            s.push_str(&format!("{},{},{},{},{},{}\n", r.param, r.estimate, r.ci_lo, r.ci_hi, r.trials, r.errors));
        }
        s
    }
}

/// First crossing of 1/2 between adjacent grid points, linearly
/// interpolated. Points without a defined estimate are skipped.
pub fn interpolate_crossing(grid: &[f64], estimates: &[f64]) -> Option<f64> {
    interpolate_level(grid, estimates, 0.5)
}

/// First crossing of `level` by the estimate curve, in either direction.
pub fn interpolate_level(grid: &[f64], estimates: &[f64], level: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = grid.iter().zip(estimates).filter(|(_, e)| e.is_finite()).map(|(&x, &e)| (x, e)).collect();
    if let Some(&(x0, e0)) = pts.first() {
        if e0 == level {
            return Some(x0);
        }
    }
    for w in pts.windows(2) {
        let ((x0, e0), (x1, e1)) = (w[0], w[1]);
        if (e0 < level && e1 >= level) || (e0 > level && e1 <= level) {
            return Some(x0 + (level - e0) * (x1 - x0) / (e1 - e0));
        }
    }
    None
}

/// Estimates the property at every grid point. Trial `i` uses the same
/// seed at every grid point, so the draws are coupled (nested for the
/// probability models, same points for the geometric ones).
pub fn scan(
    model: &ModelConfig,
    property: &PropertySpec,
    grid: &[f64],
    scale: GridScale,
    trials: u64,
    seed: u64,
    jobs: usize,
) -> Result<ScanResult> {
    scan_with(model, property, grid, scale, trials, seed, jobs, ScanStrategy::Auto)
}

#[allow(clippy::too_many_arguments)]
pub fn scan_with(
    model: &ModelConfig,
    property: &PropertySpec,
    grid: &[f64],
    scale: GridScale,
    trials: u64,
    seed: u64,
    jobs: usize,
    strategy: ScanStrategy,
) -> Result<ScanResult> {
    check_trials(trials)?;
    if grid.is_empty() {
        return Err(Error::domain("empty scan grid"));
    }
    if grid.iter().any(|x| !x.is_finite()) || grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::domain("scan grid must be finite and sorted"));
    }
    let models: Vec<ModelConfig> = grid.iter().map(|&x| model.with_param(scale.apply(x, model.n()))).collect();
    for m in &models {
        m.validate()?;
    }
    let fast_lm = match (model, property) {
        (ModelConfig::LinialMeshulam { d, .. }, PropertySpec::BettiZero { k, field: Domain::F2 })
        | (ModelConfig::LinialMeshulam { d, .. }, PropertySpec::BettiNonzero { k, field: Domain::F2 })
            if *d >= 2 && k + 1 == *d =>
        {
            Some(matches!(property, PropertySpec::BettiZero { .. }))
        }
        _ => None,
    };
    let monotone = property.monotonicity(model);
    let per_trial: Vec<Vec<Outcome>> = run_trials(trials, jobs, |i| {
        let s = RngSeed::new(seed, i);
        match (strategy, fast_lm, monotone) {
            (ScanStrategy::Auto, Some(zero), _) => lm_codim_one_scan(&models, s)
                .into_iter()
                .map(|vanishes| Ok(vanishes == zero))
                .collect(),
            (ScanStrategy::Auto, None, Some(direction)) => bisect_trial(&models, property, direction, s),
            _ => models.iter().map(|m| outcome(m.sample(s).and_then(|x| property.evaluate(&x)))).collect(),
        }
    });
    let mut rows = Vec::with_capacity(grid.len());
    let mut first_error = None;
    for (j, &x) in grid.iter().enumerate() {
        let e = Estimate::from_outcomes(per_trial.iter().map(|o| &o[j]));
        if first_error.is_none() {
            first_error = e.first_error.clone();
        }
        rows.push(ScanRow { param: x, estimate: e.estimate, ci_lo: e.ci_lo, ci_hi: e.ci_hi, trials: e.trials, errors: e.errors });
    }
    let crossing = interpolate_crossing(grid, &rows.iter().map(|r| r.estimate).collect::<Vec<_>>());
    Ok(ScanResult { model: model.clone(), property: property.clone(), scale, rows, crossing, first_error })
}

/// For a monotone property, finds the grid index where the outcome flips
/// by bisection. Falls back to evaluating every point if anything fails.
fn bisect_trial(models: &[ModelConfig], property: &PropertySpec, direction: Monotonicity, seed: RngSeed) -> Vec<Outcome> {
    let m = models.len();
    let target = direction == Monotonicity::Increasing;
    let eval = |j: usize| models[j].sample(seed).and_then(|x| property.evaluate(&x));
    // first index where the outcome equals `target`
    let (mut lo, mut hi) = (0, m);
    while lo < hi {
        let mid = (lo + hi) / 2;
        match eval(mid) {
            Ok(b) if b == target => hi = mid,
            Ok(_) => lo = mid + 1,
            Err(_) => return models.iter().map(|md| outcome(md.sample(seed).and_then(|x| property.evaluate(&x)))).collect(),
        }
    }
    (0..m).map(|j| Ok((j >= lo) == target)).collect()
}

/// For Y_d(n, p_j) under one seed: whether β_{d−1}(F₂) = 0 at each grid
/// point. The d-faces are inserted in order of their uniforms into one
/// F₂ basis; β_{d−1} vanishes once the rank reaches C(n−1, d).
fn lm_codim_one_scan(models: &[ModelConfig], seed: RngSeed) -> Vec<bool> {
    let ModelConfig::LinialMeshulam { n, d, .. } = models[0] else { unreachable!("checked by the caller") };
    let probs: Vec<f64> = models.iter().map(ModelConfig::param).collect();
    let p_max = probs.iter().copied().fold(0.0, f64::max);
    let draws = seed.face_draws(d);
    let mut faces: Vec<(f64, u64)> = Vec::new();
    let mut subset: Vec<u32> = (0..=d as u32).collect();
    let mut rank = 0u64;
    loop {
        let u = draws.uniform(rank);
        if u < p_max {
            faces.push((u, rank));
        }
        rank += 1;
        if !next_colex(&mut subset, n as u32) {
            break;
        }
    }
    faces.sort_by(|a, b| a.0.total_cmp(&b.0));
    let target = binomial(n as u64 - 1, d as u64) as usize;
    let mut basis = F2Basis::new(binomial(n as u64, d as u64) as usize);
    let mut out = vec![false; probs.len()];
    let mut next = 0;
    for (j, &p) in probs.iter().enumerate() {
        while basis.rank() < target && next < faces.len() && faces[next].0 < p {
            let verts = colex_unrank(faces[next].1, d + 1);
            let facets = (0..=d).map(|skip| {
                let f: Vec<u32> = verts.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                crate::rng::colex_rank(&f) as usize
            });
            let v = basis.vector(facets);
            basis.insert(v);
            next += 1;
        }
        out[j] = basis.rank() == target;
    }
    out
}

/// Advances a sorted subset of {0, …, n−1} to its colex successor.
fn next_colex(s: &mut [u32], n: u32) -> bool {
    let k = s.len();
    for i in 0..k {
        let limit = if i + 1 < k { s[i + 1] } else { n };
        if s[i] + 1 < limit {
            s[i] += 1;
            for (j, x) in s.iter_mut().enumerate().take(i) {
                *x = j as u32;
            }
            return true;
        }
    }
    false
}

/// The k-subset with the given colex rank.
fn colex_unrank(mut rank: u64, k: usize) -> Vec<u32> {
    let mut out = vec![0u32; k];
    for i in (0..k).rev() {
        // largest c with C(c, i+1) ≤ rank
        let mut c = i as u32;
        while binomial(c as u64 + 1, i as u64 + 1) <= rank {
            c += 1;
        }
        rank -= binomial(c as u64, i as u64 + 1);
        out[i] = c;
    }
    out
}
