//! Experiments with their own summaries: giant components, subcomplex
//! counts, vertex links, maximal persistence and Betti curves.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::run_trials;
use super::stats::{chi_squared_two_sample, quartiles, ChiSquaredTest};
use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::geometry::{gen_points, Distribution};
use crate::homology::betti_numbers;
use crate::linalg::Domain;
use crate::models::{gen_clique_complex, gen_linial_meshulam, gnp_edges, linial_meshulam_vertex_link};
use crate::persistence::{cech_filtration, max_persistence, persistence_diagram, rips_filtration};
use crate::rng::{binomial, RngSeed};
use crate::theory::{euler_prediction, GeometricModel};

/// Component sizes of a graph on `n` vertices.
pub fn component_sizes(n: usize, edges: &[(u32, u32)]) -> Vec<usize> {
    let mut parent: Vec<u32> = (0..n as u32).collect();
    fn find(parent: &mut [u32], mut v: u32) -> u32 {
        while parent[v as usize] != v {
            let p = parent[v as usize];
            parent[v as usize] = parent[p as usize];
            v = p;
        }
        v
    }
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb) as usize] = ra.min(rb);
        }
    }
    let mut size = vec![0usize; n];
    for v in 0..n as u32 {
        let r = find(&mut parent, v);
        size[r as usize] += 1;
    }
    size.retain(|&s| s > 0);
    size
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GiantRow {
    pub c: f64,
    pub n: usize,
    /// mean of (largest component order)/n
    pub mean_fraction: f64,
    /// standard error of that mean
    pub std_error: f64,
    pub mean_largest: f64,
    /// mean order of the component containing a uniform random vertex
    pub mean_component_order: f64,
    pub ln_n: f64,
    pub trials: u64,
}

/// Largest component of G(n, c/n) for each c.
pub fn giant_component_experiment(n: usize, c_grid: &[f64], trials: u64, seed: u64, jobs: usize) -> Result<Vec<GiantRow>> {
    if n == 0 || trials == 0 {
        return Err(Error::domain("need n ≥ 1 and at least one trial"));
    }
    if c_grid.iter().any(|&c| !(c >= 0.0) || c > n as f64) {
        return Err(Error::domain("c must lie in [0, n]"));
    }
    let mut rows = Vec::new();
    for (j, &c) in c_grid.iter().enumerate() {
        let p = c / n as f64;
        let base = RngSeed::new(seed, 0).derive(j as u64);
        let samples: Vec<(f64, f64)> = run_trials(trials, jobs, |i| {
            let edges = gnp_edges(n, p, base.trial(i)).expect("p validated");
            let sizes = component_sizes(n, &edges);
            let largest = *sizes.iter().max().unwrap() as f64;
            let susceptibility = sizes.iter().map(|&s| (s * s) as f64).sum::<f64>() / n as f64;
            (largest, susceptibility)
        });
        let t = trials as f64;
        let fractions: Vec<f64> = samples.iter().map(|s| s.0 / n as f64).collect();
        let mean = fractions.iter().sum::<f64>() / t;
        let var = if trials > 1 { fractions.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / (t - 1.0) } else { 0.0 };
        rows.push(GiantRow {
            c,
            n,
            mean_fraction: mean,
            std_error: (var / t).sqrt(),
            mean_largest: samples.iter().map(|s| s.0).sum::<f64>() / t,
            mean_component_order: samples.iter().map(|s| s.1).sum::<f64>() / t,
            ln_n: (n as f64).ln(),
            trials,
        });
    }
    Ok(rows)
}

pub fn giant_csv(rows: &[GiantRow]) -> String {
    let mut s = String::from("c,n,mean_fraction,std_error,mean_largest,mean_component_order,ln_n,trials\n");
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.c, r.n, r.mean_fraction, r.std_error, r.mean_largest, r.mean_component_order, r.ln_n, r.trials
        ));
    }
    s
}

/// Number of (d+2)-vertex sets all of whose (d+1)-subsets are d-faces,
/// i.e. copies of the boundary of a (d+1)-simplex among the top faces.
pub fn count_simplex_boundaries(x: &SimplicialComplex, d: usize) -> u64 {
    let top: HashSet<&Simplex> = x.faces(d).iter().collect();
    // (d−1)-face → larger vertices completing it to a d-face
    let mut ext: HashMap<&[u32], Vec<u32>> = HashMap::new();
    for s in x.faces(d) {
        let v = s.vertices();
        ext.entry(&v[..d]).or_default().push(v[d]);
    }
    let mut count = 0;
    for s in x.faces(d) {
        let v = s.vertices();
        // extend σ by w > max σ through the facet that drops v[0]; every
        // (d+2)-set is counted once, from the face omitting its maximum
        let Some(ws) = ext.get(&v[1..]) else { continue };
        for &w in ws {
            let mut tau = v.to_vec();
            tau.push(w);
            let all = (1..=d).all(|skip| {
                let f: Vec<u32> = tau.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &u)| u).collect();
                top.contains(&Simplex::from_sorted(f))
            });
            if all {
                count += 1;
            }
        }
    }
    count
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountSummary {
    pub mean: f64,
    pub std_error: f64,
    /// C(n, d+2) p^{d+2}
    pub expected: f64,
    pub trials: u64,
    pub counts: Vec<u64>,
}

/// Counts of boundaries of (d+1)-simplices in Y_d(n, c/n).
pub fn boundary_count_experiment(n: usize, d: usize, c: f64, trials: u64, seed: u64, jobs: usize) -> Result<CountSummary> {
    let p = c / n as f64;
    if trials == 0 {
        return Err(Error::domain("need at least one trial"));
    }
    gen_linial_meshulam(n, d, p, RngSeed::new(seed, 0))?;
    let counts: Vec<u64> = run_trials(trials, jobs, |i| {
        let x = gen_linial_meshulam(n, d, p, RngSeed::new(seed, i)).expect("parameters validated");
        count_simplex_boundaries(&x, d)
    });
    let t = trials as f64;
    let mean = counts.iter().sum::<u64>() as f64 / t;
    let var = if trials > 1 { counts.iter().map(|&k| (k as f64 - mean).powi(2)).sum::<f64>() / (t - 1.0) } else { 0.0 };
    Ok(CountSummary {
        mean,
        std_error: (var / t).sqrt(),
        expected: binomial(n as u64, d as u64 + 2) as f64 * p.powi(d as i32 + 2),
        trials,
        counts,
    })
}

/// Two-sample test between the edge counts of the link of vertex 0 in
/// Y_2(n, p) and of G(n−1, p).
pub fn link_distribution_check(n: usize, p: f64, trials: u64, seed: u64) -> Result<ChiSquaredTest> {
    link_distribution_check_against(n, p, p, trials, seed)
}

/// As [`link_distribution_check`], with a separate probability for the
/// comparison graph (used to measure power).
pub fn link_distribution_check_against(n: usize, p_complex: f64, p_graph: f64, trials: u64, seed: u64) -> Result<ChiSquaredTest> {
    if trials == 0 {
        return Err(Error::domain("need at least one trial"));
    }
    let base = RngSeed::new(seed, 0);
    let (a_seed, b_seed) = (base.derive(1), base.derive(2));
    let mut a = Vec::with_capacity(trials as usize);
    let mut b = Vec::with_capacity(trials as usize);
    for i in 0..trials {
        a.push(linial_meshulam_vertex_link(n, p_complex, 0, a_seed.trial(i))?.len() as u64);
        b.push(gnp_edges(n - 1, p_graph, b_seed.trial(i))?.len() as u64);
    }
    Ok(chi_squared_two_sample(&a, &b))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PersistenceRow {
    pub n: usize,
    /// filtration scale cap
    pub cap: f64,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    /// median / (ln n / ln ln n)^{1/k}
    pub ratio: f64,
    /// mean number of k-classes still alive at the cap
    pub mean_censored: f64,
    pub trials: u64,
}

/// Scale cap used for n points: `factor`·(ln n / n)^{1/d}.
pub fn persistence_cap(n: usize, d: usize, factor: f64) -> f64 {
    let nf = n as f64;
    factor * (nf.ln() / nf).powf(1.0 / d as f64)
}

/// Default factor for [`persistence_cap`].
pub const PERSISTENCE_CAP_FACTOR: f64 = 1.5;

/// Maximal k-persistence (death/birth) of n uniform points in [0,1]^d,
/// summarised per n. Classes alive at the cap are left out of the maximum
/// and counted separately.
#[allow(clippy::too_many_arguments)]
pub fn persistence_experiment(
    model: GeometricModel,
    n_list: &[usize],
    d: usize,
    k: usize,
    cap_factor: f64,
    trials: u64,
    seed: u64,
    jobs: usize,
) -> Result<Vec<PersistenceRow>> {
    if trials == 0 || k == 0 || k >= d {
        return Err(Error::domain("need trials ≥ 1 and 1 ≤ k < d"));
    }
    if n_list.iter().any(|&n| n < 3) {
        return Err(Error::domain("need at least 3 points"));
    }
    let mut rows = Vec::new();
    for &n in n_list {
        let cap = persistence_cap(n, d, cap_factor);
        let base = RngSeed::new(seed, 0).derive(n as u64);
        let samples: Vec<(f64, usize)> = run_trials(trials, jobs, |i| {
            let points = gen_points(n, d, Distribution::UniformCube, base.trial(i)).expect("n, d validated");
            let f = match model {
                GeometricModel::Rips => rips_filtration(&points, cap, k + 1),
                GeometricModel::Cech => cech_filtration(&points, cap, k + 1),
            }
            .expect("cap is positive");
            let censored = persistence_diagram(&f, k).iter().filter(|p| p.censored).count();
            (max_persistence(&f, k), censored)
        });
        let values: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let (q1, median, q3) = quartiles(&values);
        let nf = n as f64;
        let scale = (nf.ln() / nf.ln().ln()).powf(1.0 / k as f64);
        rows.push(PersistenceRow {
            n,
            cap,
            median,
            q1,
            q3,
            ratio: median / scale,
            mean_censored: samples.iter().map(|s| s.1 as f64).sum::<f64>() / trials as f64,
            trials,
        });
    }
    Ok(rows)
}

pub fn persistence_csv(rows: &[PersistenceRow]) -> String {
    let mut s = String::from("n,cap,median,q1,q3,ratio,mean_censored,trials\n");
    for r in rows {
        s.push_str(&format!("{},{},{},{},{},{},{},{}\n", r.n, r.cap, r.median, r.q1, r.q3, r.ratio, r.mean_censored, r.trials));
    }
    s
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BettiCurveRow {
    pub p: f64,
    /// C(n, 2) p
    pub expected_edges: f64,
    /// |E[χ]|
    pub euler_prediction: f64,
    /// mean reduced rational Betti numbers, degrees 0 ..= max_dim − 1
    pub mean_betti: Vec<f64>,
}

/// Mean Betti numbers of the clique complex X(n, p) over a p-grid.
/// Faces are built up to `max_dim`, so degrees below it are exact.
pub fn betti_curves(n: usize, p_grid: &[f64], max_dim: usize, trials: u64, seed: u64, jobs: usize) -> Result<Vec<BettiCurveRow>> {
    if trials == 0 || max_dim == 0 {
        return Err(Error::domain("need trials ≥ 1 and max_dim ≥ 1"));
    }
    let mut rows = Vec::new();
    for &p in p_grid {
        let e = euler_prediction(n, p)?;
        let betti: Vec<Vec<usize>> = run_trials(trials, jobs, |i| {
            let x = gen_clique_complex(n, p, max_dim, RngSeed::new(seed, i)).expect("p validated");
            let b = betti_numbers(&x, Domain::Rational, true);
            (0..max_dim).map(|k| b.get(k)).collect()
        });
        let mean_betti =
            (0..max_dim).map(|k| betti.iter().map(|b| b[k] as f64).sum::<f64>() / trials as f64).collect();
        rows.push(BettiCurveRow { p, expected_edges: binomial(n as u64, 2) as f64 * p, euler_prediction: e, mean_betti });
    }
    Ok(rows)
}

/// CSV with columns p,expected_edges,euler_prediction,beta_0,…
pub fn betti_curves_csv(rows: &[BettiCurveRow]) -> String {
    let m = rows.first().map_or(0, |r| r.mean_betti.len());
    let mut s = String::from("p,expected_edges,euler_prediction");
    for k in 0..m {
        s.push_str(&format!(",beta_{k}"));
    }
    s.push('\n');
    for r in rows {
        s.push_str(&format!("{},{},{}", r.p, r.expected_edges, r.euler_prediction));
        for b in &r.mean_betti {
            s.push_str(&format!(",{b}"));
        }
        s.push('\n');
    }
    s
}
