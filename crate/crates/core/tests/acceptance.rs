//! Acceptance checks, one line per criterion. Runs as a plain binary
//! (`harness = false`) so the summary is always printed.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use randcomplex::collapse::{apply_steps, collapse};
use randcomplex::geometry::{gen_points, Distribution};
use randcomplex::homology::{betti_number, betti_numbers, boundary_matrix};
use randcomplex::lab::experiments::{
    boundary_count_experiment, giant_component_experiment, link_distribution_check, link_distribution_check_against,
    persistence_experiment, PERSISTENCE_CAP_FACTOR,
};
use randcomplex::lab::{
    chi_squared_two_sample, clopper_pearson, estimate, interpolate_level, scan, GridScale, ModelConfig, PropertySpec,
};
use randcomplex::linalg::is_prime;
use randcomplex::models::{
    cech, gen_clique_complex, gen_gnp, gen_linial_meshulam, gen_multiparameter, vietoris_rips,
};
use randcomplex::persistence::{cech_filtration, persistence_diagram, persistence_diagram_standard, rips_filtration, Filtration};
use randcomplex::snf::{integer_homology, DEFAULT_SNF_BUDGET};
use randcomplex::spectral::{cheeger_number, garland_certificate, spectral_gap};
use randcomplex::theory::{c_collapse, c_star, fowler_domination, giant_fraction, prob_acyclic_limit, Domination, GeometricModel};
use randcomplex::{Domain, RngSeed, Simplex, SimplicialComplex};

/// Worker threads; 0 lets the pool use every core.
const JOBS: usize = 0;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict { passed, detail: detail.into() }
}

fn within(elapsed: Duration, limit_s: f64) -> bool {
    elapsed.as_secs_f64() < limit_s
}

fn cx(facets: &[&[u32]]) -> SimplicialComplex {
    SimplicialComplex::from_facets(facets.iter().map(|f| f.to_vec()), None).unwrap()
}

// ---------------------------------------------------------------- oracles

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        if off < 1e-26 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// min over nonempty proper S of |E(S, S^c)| / min(vol S, vol S^c).
fn brute_cheeger(n: usize, edges: &[(u32, u32)]) -> f64 {
    let mut deg = vec![0usize; n];
    for &(a, b) in edges {
        deg[a as usize] += 1;
        deg[b as usize] += 1;
    }
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << n) - 1 {
        let inside = |v: u32| mask >> v & 1 == 1;
        let cut = edges.iter().filter(|&&(a, b)| inside(a) != inside(b)).count();
        let vol_s: usize = (0..n as u32).filter(|&v| inside(v)).map(|v| deg[v as usize]).sum();
        let vol_c: usize = deg.iter().sum::<usize>() - vol_s;
        best = best.min(cut as f64 / vol_s.min(vol_c) as f64);
    }
    best
}

/// Dense F₂ row-echelon basis, kept deliberately simple.
struct Gf2 {
    pivots: HashMap<usize, Vec<u64>>,
}

impl Gf2 {
    fn new() -> Self {
        Gf2 { pivots: HashMap::new() }
    }

    fn insert(&mut self, mut v: Vec<u64>) {
        loop {
            let Some(top) = (0..v.len()).rev().find(|&w| v[w] != 0).map(|w| w * 64 + 63 - v[w].leading_zeros() as usize) else {
                return;
            };
            match self.pivots.get(&top) {
                Some(p) => v.iter_mut().zip(p).for_each(|(x, y)| *x ^= y),
                None => {
                    self.pivots.insert(top, v);
                    return;
                }
            }
        }
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Persistent Betti numbers β_k^{a,b} of a filtration at every pair of
/// critical values a ≤ b, recomputed from scratch with plain linear algebra.
fn brute_persistent_betti(f: &Filtration, k: usize) -> Vec<(f64, f64, usize)> {
    let faces = f.faces();
    let values = f.values();
    let mut crit: Vec<f64> = values.to_vec();
    crit.dedup();
    let rows: Vec<usize> = (0..faces.len()).filter(|&i| faces[i].dim() == k).collect();
    let row_of: HashMap<&Simplex, usize> = rows.iter().enumerate().map(|(r, &i)| (&faces[i], r)).collect();
    let words = rows.len().div_ceil(64).max(1);
    let column = |i: usize, keep: &dyn Fn(usize) -> bool| -> Vec<u64> {
        let mut v = vec![0u64; words];
        for b in faces[i].boundary() {
            let r = row_of[&b];
            if keep(r) {
                v[r / 64] ^= 1 << (r % 64);
            }
        }
        v
    };
    let cols: Vec<usize> = (0..faces.len()).filter(|&i| faces[i].dim() == k + 1).collect();
    let mut out = Vec::new();
    for &a in &crit {
        let in_a = |r: usize| values[rows[r]] <= a;
        let cycles = if k == 0 {
            rows.iter().filter(|&&i| values[i] <= a).count()
        } else {
            let lower_row: HashMap<&Simplex, usize> =
                (0..faces.len()).filter(|&i| faces[i].dim() == k - 1).enumerate().map(|(r, i)| (&faces[i], r)).collect();
            let w = lower_row.len().div_ceil(64).max(1);
            let mut basis = Gf2::new();
            let mut count = 0;
            for &i in rows.iter().filter(|&&i| values[i] <= a) {
                let mut v = vec![0u64; w];
                for b in faces[i].boundary() {
                    let r = lower_row[&b];
                    v[r / 64] ^= 1 << (r % 64);
                }
                basis.insert(v);
                count += 1;
            }
            count - basis.rank()
        };
        let (mut full, mut outside) = (Gf2::new(), Gf2::new());
        let mut next = 0;
        for &b in crit.iter().filter(|&&b| b >= a) {
            while next < cols.len() && values[cols[next]] <= b {
                full.insert(column(cols[next], &|_| true));
                outside.insert(column(cols[next], &|r| !in_a(r)));
                next += 1;
            }
            out.push((a, b, cycles - (full.rank() - outside.rank())));
        }
    }
    out
}

// ---------------------------------------------------------------- criteria

fn constants() -> Verdict {
    let start = Instant::now();
    let cc = c_collapse(2).unwrap();
    let cs = c_star(2).unwrap();
    let elapsed = start.elapsed();
    let ok = (cc.value - 2.455).abs() <= 1e-3
        && (cs.value - 2.753).abs() <= 1e-3
        && cc.residual.abs() < 1e-12
        && cs.residual.abs() < 1e-12
        && within(elapsed, 1.0);
    verdict(
        ok,
        format!(
            "c_collapse(2) = {:.6} (residual {:.1e}), c_star(2) = {:.6} (residual {:.1e}), {:?}",
            cc.value, cc.residual, cs.value, cs.residual, elapsed
        ),
    )
}

fn random_large_prime(rng: &mut ChaCha8Rng) -> u64 {
    loop {
        let c = rng.gen_range(1u64 << 40..1u64 << 61) | 1;
        if is_prime(c) {
            return c;
        }
    }
}

fn random_complex(i: usize, rng: &mut ChaCha8Rng) -> SimplicialComplex {
    let s = RngSeed::new(77, i as u64);
    match i % 7 {
        0 => gen_gnp(rng.gen_range(5..20), rng.gen_range(0.05..0.6), s).unwrap(),
        1 => gen_linial_meshulam(rng.gen_range(5..12), 2, rng.gen_range(0.05..0.7), s).unwrap(),
        2 => gen_linial_meshulam(rng.gen_range(6..10), 3, rng.gen_range(0.05..0.5), s).unwrap(),
        3 => gen_clique_complex(rng.gen_range(6..15), rng.gen_range(0.2..0.8), 4, s).unwrap(),
        4 => {
            let m = rng.gen_range(1..4);
            let probs: Vec<f64> = (0..m).map(|_| rng.gen_range(0.2..1.0)).collect();
            gen_multiparameter(rng.gen_range(6..13), &probs, s).unwrap()
        }
        5 => {
            let pts = gen_points(rng.gen_range(8..20), 2, Distribution::UniformCube, s).unwrap();
            vietoris_rips(&pts, rng.gen_range(0.2..0.6), 3).unwrap()
        }
        _ => {
            let pts = gen_points(rng.gen_range(8..18), 3, Distribution::UniformCube, s).unwrap();
            cech(&pts, rng.gen_range(0.3..0.8), 3).unwrap()
        }
    }
}

fn homology_oracles() -> Verdict {
    let start = Instant::now();
    let mut failures = Vec::new();
    let tetra = cx(&[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]]);
    if betti_numbers(&tetra, Domain::Rational, false).betti != vec![1, 0, 1] {
        failures.push("∂Δ³".to_string());
    }
    let torus: Vec<Vec<u32>> =
        (0..7u32).flat_map(|i| [vec![i, (i + 1) % 7, (i + 3) % 7], vec![i, (i + 2) % 7, (i + 3) % 7]]).collect();
    let torus = SimplicialComplex::from_facets(torus, None).unwrap();
    if betti_numbers(&torus, Domain::Rational, false).betti != vec![1, 2, 1] {
        failures.push("torus".to_string());
    }
    let rp2 = cx(&[
        &[0, 1, 2],
        &[0, 2, 3],
        &[0, 3, 4],
        &[0, 4, 5],
        &[0, 1, 5],
        &[1, 2, 4],
        &[2, 3, 5],
        &[1, 3, 4],
        &[2, 4, 5],
        &[1, 3, 5],
    ]);
    let h = integer_homology(&rp2, DEFAULT_SNF_BUDGET).unwrap();
    if h.get(1).free != 0 || h.get(1).torsion != vec![2] || betti_number(&rp2, 1, Domain::F2) != 1 || betti_number(&rp2, 1, Domain::Rational) != 0 {
        failures.push("RP²".to_string());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2718);
    let prime = random_large_prime(&mut rng);
    let mut ep_failures = 0;
    for i in 0..1000 {
        let x = random_complex(i, &mut rng);
        let chi = x.euler_characteristic();
        for field in [Domain::F2, Domain::Fp(prime)] {
            if betti_numbers(&x, field, false).alternating_sum() != chi {
                ep_failures += 1;
            }
            // ∂_k ∂_{k+1} = 0 over the same field
            for k in 1..x.dim().unwrap_or(0) {
                let prod = boundary_matrix(&x, k, field).unwrap().mul(&boundary_matrix(&x, k + 1, field).unwrap());
                if prod.to_dense().iter().flatten().any(|&e| e != 0) {
                    ep_failures += 1;
                }
            }
        }
    }
    if ep_failures > 0 {
        failures.push(format!("{ep_failures} Euler–Poincaré/∂∂ failures"));
    }
    let elapsed = start.elapsed();
    verdict(
        failures.is_empty() && within(elapsed, 120.0),
        format!("fixtures ok = {}, 1000 random complexes over F2 and F_{prime}, failures {failures:?}, {elapsed:?}", failures.is_empty()),
    )
}

fn pittel() -> Verdict {
    let start = Instant::now();
    let n = 2000;
    let e = estimate(&ModelConfig::Gnp { n, p: 0.5 / n as f64 }, &PropertySpec::Acyclic, 10_000, 11, JOBS).unwrap();
    let (lo, hi) = clopper_pearson(e.successes, e.trials, 0.99);
    let target = prob_acyclic_limit(0.5).unwrap();
    let elapsed = start.elapsed();
    verdict(
        lo <= target && target <= hi && e.errors == 0 && within(elapsed, 300.0),
        format!("{}/{} acyclic, 99% CI [{lo:.5}, {hi:.5}] vs {target:.5}, {elapsed:?}", e.successes, e.trials),
    )
}

fn poisson_boundaries() -> Verdict {
    let start = Instant::now();
    let s = boundary_count_experiment(150, 2, 1.0, 10_000, 12, JOBS).unwrap();
    let target = 1.0 / 24.0;
    let elapsed = start.elapsed();
    verdict(
        (s.mean - target).abs() <= 3.0 * s.std_error && within(elapsed, 600.0),
        format!(
            "mean {:.5} ± {:.5} (σ of mean) vs 1/24 = {target:.5} (finite-n {:.5}), {elapsed:?}",
            s.mean, s.std_error, s.expected
        ),
    )
}

fn thresholds() -> Verdict {
    let start = Instant::now();
    let trials = 2000;
    let mut parts = Vec::new();
    let mut ok = true;

    let n = 200;
    let th = (n as f64).ln() / n as f64;
    let grid: Vec<f64> = (0..12).map(|i| th * (0.6 + 0.1 * i as f64)).collect();
    let s = scan(&ModelConfig::Gnp { n, p: 0.0 }, &PropertySpec::Connected, &grid, GridScale::Absolute, trials, 21, JOBS).unwrap();
    let ratio = s.crossing.map(|c| c / th);
    ok &= ratio.is_some_and(|r| (r - 1.0).abs() <= 0.30) && s.total_errors() == 0;
    parts.push(format!("gnp connectivity crossing / (ln n/n) = {ratio:.3?}"));

    let n = 60;
    let th = 2.0 * (n as f64).ln() / n as f64;
    let grid: Vec<f64> = (0..12).map(|i| th * (0.55 + 0.08 * i as f64)).collect();
    let prop = PropertySpec::BettiZero { k: 1, field: Domain::F2 };
    let s = scan(&ModelConfig::LinialMeshulam { n, d: 2, p: 0.0 }, &prop, &grid, GridScale::Absolute, trials, 22, JOBS).unwrap();
    let ratio = s.crossing.map(|c| c / th);
    ok &= ratio.is_some_and(|r| (r - 1.0).abs() <= 0.35) && s.total_errors() == 0;
    parts.push(format!("Y2 betti-zero(1) crossing / (2 ln n/n) = {ratio:.3?}"));

    let n = 100;
    let grid: Vec<f64> = (0..12).map(|i| 1.6 + 0.2 * i as f64).collect();
    let lm = ModelConfig::LinialMeshulam { n, d: 2, p: 0.0 };
    let coll = scan(&lm, &PropertySpec::Collapsible { d: 2 }, &grid, GridScale::PerN, trials, 23, JOBS).unwrap();
    let top = scan(&lm, &PropertySpec::BettiNonzero { k: 2, field: Domain::F2 }, &grid, GridScale::PerN, trials, 23, JOBS).unwrap();
    // Only the high side is pinned down: above c_2 the complex is not collapsible w.h.p., above
    // c_2* it carries a 2-cycle w.h.p. Compare where each reaches 95%; the 1/2 crossings are
    // reported but both are set by the same small obstructions at this n.
    let coll_whp = interpolate_level(&coll.grid(), &coll.estimates(), 0.05);
    let top_whp = interpolate_level(&top.grid(), &top.estimates(), 0.95);
    ok &= matches!((coll_whp, top_whp), (Some(a), Some(b)) if a < b);
    ok &= coll.total_errors() + top.total_errors() == 0;
    parts.push(format!(
        "n=100 non-collapsible w.h.p. (P ≥ 0.95) from c = {coll_whp:.3?} vs β₂ ≠ 0 w.h.p. from c = {top_whp:.3?}; 1/2 crossings {:.4?} and {:.4?}",
        coll.crossing, top.crossing,
    ));
    let elapsed = start.elapsed();
    ok &= within(elapsed, 1800.0);
    verdict(ok, format!("{}; {elapsed:?}", parts.join("; ")))
}

fn garland_soundness() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let (mut certified, mut counterexamples) = (0, 0);
    for i in 0..5000u64 {
        let n = rng.gen_range(12..=25usize);
        let th = 2.0 * (n as f64).ln() / n as f64;
        let p = (th * rng.gen_range(0.5..3.0)).min(1.0);
        let x = gen_linial_meshulam(n, 2, p, RngSeed::new(32, i)).unwrap();
        if x.is_pure(2) && garland_certificate(&x, 2).unwrap().certified {
            certified += 1;
            if betti_number(&x, 1, Domain::Rational) != 0 {
                counterexamples += 1;
            }
        }
    }
    verdict(
        counterexamples == 0 && certified > 0,
        format!("5000 draws, {certified} certified, {counterexamples} counterexamples"),
    )
}

fn collapse_soundness() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let (mut collapsed, mut bad_draws) = (0, 0);
    for i in 0..2000u64 {
        let n = rng.gen_range(10..=30usize);
        let p = rng.gen_range(1.0..4.0) / n as f64;
        let x = gen_linial_meshulam(n, 2, p, RngSeed::new(42, i)).unwrap();
        if collapse(&x, 2).unwrap().collapsed {
            collapsed += 1;
            if betti_number(&x, 2, Domain::Rational) != 0 {
                bad_draws += 1;
            }
        }
    }
    let (mut complexes, mut steps, mut bad_steps) = (0, 0, 0);
    for i in 0..300u64 {
        let x = if i % 2 == 0 {
            gen_linial_meshulam(9, 2, rng.gen_range(0.1..0.7), RngSeed::new(43, i)).unwrap()
        } else {
            gen_multiparameter(10, &[rng.gen_range(0.5..0.9), rng.gen_range(0.3..0.9)], RngSeed::new(43, i)).unwrap()
        };
        if x.total_faces() > 200 || x.dim() != Some(2) {
            continue;
        }
        complexes += 1;
        let report = collapse(&x, 2).unwrap();
        let profile = |y: &SimplicialComplex| -> Vec<usize> {
            let b = betti_numbers(y, Domain::Rational, false);
            (0..=2).map(|k| b.get(k)).collect()
        };
        let base = profile(&x);
        for j in 1..=report.steps.len() {
            steps += 1;
            if profile(&apply_steps(&x, &report.steps[..j])) != base {
                bad_steps += 1;
            }
        }
    }
    verdict(
        bad_draws == 0 && bad_steps == 0,
        format!(
            "{collapsed}/2000 draws collapsed, {bad_draws} with β₂ ≠ 0; {steps} single steps on {complexes} complexes, {bad_steps} changed the Betti profile"
        ),
    )
}

fn spectral() -> Verdict {
    let mut notes = Vec::new();
    let mut ok = true;
    for n in 2..=8usize {
        let kn = gen_gnp(n, 1.0, RngSeed::new(0, 0)).unwrap();
        let lambda2 = spectral_gap(&kn).unwrap().lambda2;
        let lap: Vec<Vec<f64>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { -1.0 / (n - 1) as f64 }).collect()).collect();
        let oracle = jacobi_eigenvalues(lap)[1];
        let expected = n as f64 / (n - 1) as f64;
        if (lambda2 - oracle).abs() > 1e-9 || (lambda2 - expected).abs() > 1e-9 {
            ok = false;
            notes.push(format!("K{n}: {lambda2} vs oracle {oracle}"));
        }
    }
    let k4_edges: Vec<(u32, u32)> = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let h_k4 = cheeger_number(&gen_gnp(4, 1.0, RngSeed::new(0, 0)).unwrap()).unwrap();
    let brute_k4 = brute_cheeger(4, &k4_edges);
    ok &= h_k4 == 2.0 / 3.0 && brute_k4 == 2.0 / 3.0;
    notes.push(format!("h(K4) = {h_k4} (brute force {brute_k4})"));
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    let (mut graphs, mut violations, mut i) = (0, 0, 0u64);
    while graphs < 500 {
        i += 1;
        let n = rng.gen_range(3..=16usize);
        let g = gen_gnp(n, rng.gen_range(0.15..0.9), RngSeed::new(52, i)).unwrap();
        let rep = match spectral_gap(&g) {
            Ok(r) if r.connected => r,
            _ => continue,
        };
        graphs += 1;
        let h = cheeger_number(&g).unwrap();
        if rep.lambda2 / 2.0 > h + 1e-12 {
            violations += 1;
        }
    }
    ok &= violations == 0;
    notes.push(format!("λ₂/2 ≤ h on {graphs} connected graphs, {violations} violations"));
    verdict(ok, notes.join("; "))
}

fn giant() -> Verdict {
    let rows = giant_component_experiment(5000, &[0.5, 2.0], 200, 61, JOBS).unwrap();
    let target = giant_fraction(2.0);
    let (sub, sup) = (&rows[0], &rows[1]);
    verdict(
        (sup.mean_fraction - target).abs() <= 3.0 * sup.std_error && sub.mean_fraction < 0.01,
        format!(
            "c=2: {:.5} ± {:.5} vs {target:.5}; c=0.5: fraction {:.5} (mean largest {:.1}, ln n = {:.2})",
            sup.mean_fraction, sup.std_error, sub.mean_fraction, sub.mean_largest, sub.ln_n
        ),
    )
}

fn link_distribution() -> Verdict {
    let (n, p) = (100, 0.05);
    let reps = 100;
    let rejections = (0..reps).filter(|&r| link_distribution_check(n, p, 2000, 700 + r).unwrap().p_value < 0.01).count();
    let power_hits =
        (0..reps).filter(|&r| link_distribution_check_against(n, p, 2.0 * p, 10_000, 900 + r).unwrap().p_value < 0.01).count();
    let power = power_hits as f64 / reps as f64;
    // P[Bin(100, 0.01) ≥ 5] ≈ 0.003
    verdict(
        rejections <= 4 && power > 0.99,
        format!("matched: {rejections}/{reps} rejections at 1%; mismatched 2p: power {power:.2}"),
    )
}

fn persistence() -> Verdict {
    let mut mismatches = 0;
    let mut checked = 0;
    for i in 0..50u64 {
        let pts = gen_points(20, 2, Distribution::UniformCube, RngSeed::new(71, i)).unwrap();
        let f = if i % 2 == 0 { rips_filtration(&pts, 0.5, 2) } else { cech_filtration(&pts, 0.5, 2) }.unwrap();
        for k in 0..=1 {
            let std_pairs = persistence_diagram_standard(&f, k);
            if std_pairs != persistence_diagram(&f, k) {
                mismatches += 1;
            }
            for (a, b, beta) in brute_persistent_betti(&f, k) {
                checked += 1;
                let alive = std_pairs.iter().filter(|q| q.birth <= a && (q.censored || q.death > b)).count();
                if alive != beta {
                    mismatches += 1;
                }
            }
        }
    }
    let rows = persistence_experiment(GeometricModel::Rips, &[100, 300, 1000], 2, 1, PERSISTENCE_CAP_FACTOR, 50, 72, JOBS).unwrap();
    let medians: Vec<f64> = rows.iter().map(|r| r.median).collect();
    let ratios: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
    let increasing = medians.windows(2).all(|w| w[0] < w[1]);
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &r| (l.min(r), h.max(r)));
    let spread = hi / lo - 1.0;
    let censored: Vec<f64> = rows.iter().map(|r| r.mean_censored).collect();
    verdict(
        mismatches == 0 && increasing && spread < 0.5,
        format!(
            "{checked} persistent Betti numbers on 50 clouds, {mismatches} mismatches; medians {medians:.3?}, normalized ratios {ratios:.3?} (spread {:.0}%), mean censored {censored:.2?}; the asymptotic law itself is not checked at this scale",
            100.0 * spread
        ),
    )
}

fn multiparameter() -> Verdict {
    let samples = 2000u64;
    let mut ok = true;
    let mut notes = Vec::new();
    let mut compare = |label: &str, multi: &dyn Fn(RngSeed) -> SimplicialComplex, dedicated: &dyn Fn(RngSeed) -> SimplicialComplex, dims: &[usize]| {
        let a: Vec<SimplicialComplex> = (0..samples).map(|i| multi(RngSeed::new(81, i))).collect();
        let b: Vec<SimplicialComplex> = (0..samples).map(|i| dedicated(RngSeed::new(82, i))).collect();
        for &k in dims {
            let fa: Vec<u64> = a.iter().map(|x| x.num_faces(k) as u64).collect();
            let fb: Vec<u64> = b.iter().map(|x| x.num_faces(k) as u64).collect();
            let t = chi_squared_two_sample(&fa, &fb);
            ok &= t.p_value >= 0.01;
            notes.push(format!("{label} f_{k}: p = {:.3}", t.p_value));
        }
    };
    compare(
        "X(12;1,0.3) vs Y2(12,0.3)",
        &|s| gen_multiparameter(12, &[1.0, 0.3], s).unwrap(),
        &|s| gen_linial_meshulam(12, 2, 0.3, s).unwrap(),
        &[1, 2],
    );
    compare(
        "X(10;1,1,0.2) vs Y3(10,0.2)",
        &|s| gen_multiparameter(10, &[1.0, 1.0, 0.2], s).unwrap(),
        &|s| gen_linial_meshulam(10, 3, 0.2, s).unwrap(),
        &[3],
    );
    compare(
        "X(14;0.4,1,1) vs X(14,0.4)",
        &|s| gen_multiparameter(14, &[0.4, 1.0, 1.0], s).unwrap(),
        &|s| gen_clique_complex(14, 0.4, 3, s).unwrap(),
        &[1, 2, 3],
    );

    let n = 120usize;
    let vectors: [(&[f64], usize); 6] = [
        (&[0.5], 1),
        (&[1.2], 1),
        (&[0.2, 0.1], 2),
        (&[0.5, 0.2], 2),
        (&[0.3, 0.45], 2),
        (&[0.1, 0.1, 0.6], 3),
    ];
    for (alphas, k) in vectors {
        let predicted = fowler_domination(alphas, k).unwrap();
        let probs: Vec<f64> = alphas.iter().map(|a| (n as f64).powf(-a)).collect();
        // reduced H^0 vanishes iff the complex is connected
        let prop = if k == 1 { PropertySpec::Connected } else { PropertySpec::BettiZero { k: k - 1, field: Domain::Rational } };
        let e = estimate(&ModelConfig::Multiparameter { n, probs }, &prop, 500, 83, JOBS).unwrap();
        let empirical = if e.estimate > 0.5 { Domination::Vanishes } else { Domination::Nonvanishes };
        ok &= empirical == predicted && e.errors == 0;
        notes.push(format!("α = {alphas:?}, k = {k}: predicted {predicted}, vanishing in {:.3} of trials", e.estimate));
    }
    verdict(ok, notes.join("; "))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 12] = [
        ("threshold constants", constants),
        ("exact homology oracle suite", homology_oracles),
        ("acyclicity of G(n, c/n)", pittel),
        ("Poisson count of tetrahedral boundaries", poisson_boundaries),
        ("threshold locations", thresholds),
        ("Garland soundness", garland_soundness),
        ("collapse soundness", collapse_soundness),
        ("spectral oracles", spectral),
        ("giant component", giant),
        ("vertex link distribution", link_distribution),
        ("persistence", persistence),
        ("multi-parameter model", multiparameter),
    ];
    // optional substring filters, e.g. `cargo test --test acceptance -- giant`
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let selected: Vec<_> = criteria.iter().filter(|(name, _)| filters.is_empty() || filters.iter().any(|f| name.contains(f.as_str()))).collect();
    let mut failed = 0;
    for &&(name, check) in &selected {
        let start = Instant::now();
        let v = check();
        let tag = if v.passed { "PASS" } else { "FAIL" };
        println!("{tag}  {name}: {} [{:.1?}]", v.detail, start.elapsed());
        failed += !v.passed as usize;
    }
    println!("{} of {} criteria passed", selected.len() - failed, selected.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
