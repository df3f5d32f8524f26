//! Seeded generators for the random models.
//!
//! Each candidate face has exactly one uniform (see [`crate::rng`]), and a
//! face is present at probability `p` iff its uniform is below `p`. Draws at
//! two probabilities under one seed are therefore nested.

use std::collections::HashSet;

use crate::complex::{Simplex, SimplicialComplex, Vertex};
use crate::error::{Error, Result};
use crate::geometry::{enclosing_radius, PointCloud, RADIUS_TOLERANCE};
use crate::rng::{binomial, colex_rank, edge_rank, triangle_rank, RngSeed};

fn check_prob(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::domain(format!("probability {p} outside [0, 1]")));
    }
    Ok(())
}

/// Edge list of G(n, p), in colex order.
pub fn gnp_edges(n: usize, p: f64, seed: RngSeed) -> Result<Vec<(Vertex, Vertex)>> {
    check_prob(p)?;
    if n == 0 {
        return Err(Error::domain("G(n, p) needs n ≥ 1"));
    }
    let draws = seed.face_draws(1);
    let threshold = p;
    let mut edges = Vec::new();
    if p == 0.0 {
        return Ok(edges);
    }
    let mut rank = 0u64;
    for b in 1..n as Vertex {
        for a in 0..b {
            if draws.uniform(rank) < threshold {
                edges.push((a, b));
            }
            rank += 1;
        }
    }
    Ok(edges)
}

pub(crate) fn graph_complex(n: usize, edges: &[(Vertex, Vertex)]) -> SimplicialComplex {
    let vertices = (0..n as Vertex).map(Simplex::vertex).collect();
    let mut levels = vec![vertices];
    if !edges.is_empty() {
        levels.push(edges.iter().map(|&(a, b)| Simplex::edge(a, b)).collect());
    }
    SimplicialComplex::from_closed_faces(levels).expect("graphs are closed")
}

/// Erdős–Rényi graph G(n, p) as a 1-dimensional complex on `0..n`.
pub fn gen_gnp(n: usize, p: f64, seed: RngSeed) -> Result<SimplicialComplex> {
    let edges = gnp_edges(n, p, seed)?;
    Ok(graph_complex(n, &edges))
}

/// All k-subsets of `0..n` in colex order; the i-th has colex rank i.
struct ColexSubsets {
    n: u32,
    cur: Vec<u32>,
    done: bool,
}

impl ColexSubsets {
    fn new(n: usize, k: usize) -> Self {
        ColexSubsets { n: n as u32, cur: (0..k as u32).collect(), done: k > n || k == 0 }
    }
}

impl Iterator for ColexSubsets {
    type Item = Vec<u32>;
    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let out = self.cur.clone();
        let k = self.cur.len();
        let mut i = 0;
        loop {
            let limit = if i + 1 < k { self.cur[i + 1] } else { self.n };
            if self.cur[i] + 1 < limit {
                self.cur[i] += 1;
                for j in 0..i {
                    self.cur[j] = j as u32;
                }
                break;
            }
            i += 1;
            if i == k {
                self.done = true;
                break;
            }
        }
        Some(out)
    }
}

/// Linial–Meshulam complex Y_d(n, p): complete (d−1)-skeleton plus each
/// d-face independently with probability `p`.
pub fn gen_linial_meshulam(n: usize, d: usize, p: f64, seed: RngSeed) -> Result<SimplicialComplex> {
    check_prob(p)?;
    if d == 0 || d >= n {
        return Err(Error::domain(format!("Y_d(n, p) needs 1 ≤ d ≤ n − 1, got d = {d}, n = {n}")));
    }
    let mut levels: Vec<Vec<Simplex>> = (1..=d)
        .map(|k| ColexSubsets::new(n, k).map(Simplex::from_sorted).collect())
        .collect();
    let draws = seed.face_draws(d);
    let top: Vec<Simplex> = if d == 2 {
        // specialised loop: the colex rank is the loop counter
        let mut out = Vec::new();
        let mut rank = 0u64;
        for c in 2..n as u32 {
            for b in 1..c {
                for a in 0..b {
                    if draws.present(rank, p) {
                        out.push(Simplex::from_sorted(vec![a, b, c]));
                    }
                    rank += 1;
                }
            }
        }
        out
    } else {
        ColexSubsets::new(n, d + 1)
            .enumerate()
            .filter(|(r, _)| draws.present(*r as u64, p))
            .map(|(_, s)| Simplex::from_sorted(s))
            .collect()
    };
    levels.push(top);
    Ok(SimplicialComplex::from_closed_faces(levels).expect("closed by construction"))
}

/// Link of vertex `v` in Y_2(n, p), drawn directly from the same uniforms
/// that [`gen_linial_meshulam`] uses, without building the whole complex.
pub fn linial_meshulam_vertex_link(n: usize, p: f64, v: Vertex, seed: RngSeed) -> Result<Vec<(Vertex, Vertex)>> {
    check_prob(p)?;
    if n < 3 || v as usize >= n {
        return Err(Error::domain("vertex link needs n ≥ 3 and v < n"));
    }
    let draws = seed.face_draws(2);
    let mut edges = Vec::new();
    for b in 1..n as u32 {
        for a in 0..b {
            if a == v || b == v {
                continue;
            }
            let mut t = [a, b, v];
            t.sort_unstable();
            if draws.present(triangle_rank(t[0], t[1], t[2]), p) {
                edges.push((a, b));
            }
        }
    }
    Ok(edges)
}

/// Adjacency lists (sorted) of a complex's 1-skeleton, indexed by vertex id.
pub(crate) fn adjacency(graph: &SimplicialComplex) -> Vec<Vec<Vertex>> {
    let mut adj = vec![Vec::new(); graph.vertex_bound()];
    for (a, b) in graph.edges() {
        adj[a as usize].push(b);
        adj[b as usize].push(a);
    }
    for l in adj.iter_mut() {
        l.sort_unstable();
    }
    adj
}

fn intersect_sorted(a: &[Vertex], b: &[Vertex]) -> Vec<Vertex> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Enumerates cliques by extending each clique with common neighbours
/// larger than its last vertex. `accept` may veto a clique (and with it
/// every extension); accepted cliques of size `k+1` land in `levels[k]`.
pub(crate) fn expand_cliques(
    adj: &[Vec<Vertex>],
    vertices: &[Vertex],
    max_dim: usize,
    accept: &mut dyn FnMut(&[Vertex]) -> bool,
) -> Vec<Vec<Simplex>> {
    let mut levels: Vec<Vec<Simplex>> = vec![Vec::new(); max_dim + 1];
    let mut stack: Vec<Vertex> = Vec::new();
    fn rec(
        adj: &[Vec<Vertex>],
        stack: &mut Vec<Vertex>,
        cands: Vec<Vertex>,
        max_dim: usize,
        levels: &mut Vec<Vec<Simplex>>,
        accept: &mut dyn FnMut(&[Vertex]) -> bool,
    ) {
        for (idx, &w) in cands.iter().enumerate() {
            stack.push(w);
            if accept(stack) {
                levels[stack.len() - 1].push(Simplex::from_sorted(stack.clone()));
                if stack.len() <= max_dim {
                    let next = intersect_sorted(&cands[idx + 1..], &adj[w as usize]);
                    if !next.is_empty() {
                        rec(adj, stack, next, max_dim, levels, accept);
                    }
                }
            }
            stack.pop();
        }
    }
    for &v in vertices {
        stack.push(v);
        levels[0].push(Simplex::vertex(v));
        if max_dim > 0 {
            let cands: Vec<Vertex> = adj[v as usize].iter().copied().filter(|&w| w > v).collect();
            rec(adj, &mut stack, cands, max_dim, &mut levels, accept);
        }
        stack.pop();
    }
    levels
}

/// Clique (flag) complex of a graph, truncated at `max_dim`.
pub fn clique_complex(graph: &SimplicialComplex, max_dim: usize) -> Result<SimplicialComplex> {
    if graph.dim().unwrap_or(0) > 1 {
        return Err(Error::domain("clique_complex expects a graph (no faces of dimension ≥ 2)"));
    }
    let adj = adjacency(graph);
    let vertices: Vec<Vertex> = graph.vertices().collect();
    let levels = expand_cliques(&adj, &vertices, max_dim, &mut |_| true);
    Ok(SimplicialComplex::from_closed_faces(levels).expect("cliques are closed"))
}

/// Random clique complex X(n, p), truncated at `max_dim`.
pub fn gen_clique_complex(n: usize, p: f64, max_dim: usize, seed: RngSeed) -> Result<SimplicialComplex> {
    clique_complex(&gen_gnp(n, p, seed)?, max_dim)
}

/// Multi-parameter complex X(n; p_1, …, p_m): edges with probability p_1,
/// then each i-face whose boundary is present with probability p_i. Levels
/// beyond the list have probability zero.
pub fn gen_multiparameter(n: usize, probs: &[f64], seed: RngSeed) -> Result<SimplicialComplex> {
    if probs.is_empty() {
        return Err(Error::domain("the multi-parameter model needs at least one probability"));
    }
    for &p in probs {
        check_prob(p)?;
    }
    let edges = gnp_edges(n, probs[0], seed)?;
    let mut levels: Vec<Vec<Simplex>> = vec![(0..n as Vertex).map(Simplex::vertex).collect()];
    levels.push(edges.iter().map(|&(a, b)| Simplex::edge(a, b)).collect());
    let graph = graph_complex(n, &edges);
    let adj = adjacency(&graph);
    for (i, &p) in probs.iter().enumerate().skip(1) {
        let dim = i + 1;
        let prev = &levels[dim - 1];
        if prev.is_empty() || p == 0.0 {
            break;
        }
        let present: HashSet<&Simplex> = prev.iter().collect();
        let draws = seed.face_draws(dim);
        let mut next = Vec::new();
        for sigma in prev {
            let vs = sigma.vertices();
            let last = *vs.last().unwrap();
            // common neighbours above the last vertex
            let mut cands: Vec<Vertex> = adj[last as usize].iter().copied().filter(|&w| w > last).collect();
            for &u in &vs[..vs.len() - 1] {
                cands = intersect_sorted(&cands, &adj[u as usize]);
            }
            for w in cands {
                let mut tau = vs.to_vec();
                tau.push(w);
                let tau = Simplex::from_sorted(tau);
                // facet dropping w is sigma itself
                let complete = (0..vs.len()).all(|j| present.contains(&tau.facet_without(j).unwrap()));
                if complete && draws.present(colex_rank(tau.vertices()), p) {
                    next.push(tau);
                }
            }
        }
        levels.push(next);
    }
    Ok(SimplicialComplex::from_closed_faces(levels).expect("closed by construction"))
}

/// Vietoris–Rips complex: an edge for every pair at distance ≤ r, and all
/// cliques of that graph up to `max_dim`.
pub fn vietoris_rips(points: &PointCloud, r: f64, max_dim: usize) -> Result<SimplicialComplex> {
    if r < 0.0 || r.is_nan() {
        return Err(Error::domain("radius must be non-negative"));
    }
    let graph = proximity_graph(points, r);
    clique_complex(&graph, max_dim)
}

pub(crate) fn proximity_graph(points: &PointCloud, r: f64) -> SimplicialComplex {
    let n = points.len();
    let r2 = r * r;
    let mut edges = Vec::new();
    for b in 1..n {
        for a in 0..b {
            if points.dist2(a, b) <= r2 {
                edges.push((a as Vertex, b as Vertex));
            }
        }
    }
    graph_complex(n, &edges)
}

/// Čech complex: σ is a face iff the minimum enclosing ball of its points
/// has radius ≤ r/2 (ties within [`RADIUS_TOLERANCE`] included).
pub fn cech(points: &PointCloud, r: f64, max_dim: usize) -> Result<SimplicialComplex> {
    if r < 0.0 || r.is_nan() {
        return Err(Error::domain("radius must be non-negative"));
    }
    let graph = proximity_graph(points, r);
    let adj = adjacency(&graph);
    let vertices: Vec<Vertex> = graph.vertices().collect();
    let half = 0.5 * r + RADIUS_TOLERANCE;
    let levels = expand_cliques(&adj, &vertices, max_dim, &mut |s| s.len() <= 2 || enclosing_radius(points, s) <= half);
    Ok(SimplicialComplex::from_closed_faces(levels).expect("Čech complexes are closed"))
}

/// Expected number of k-faces of Y_d(n, p) (used by statistical tests).
pub fn expected_lm_faces(n: usize, d: usize, p: f64) -> f64 {
    binomial(n as u64, d as u64 + 1) as f64 * p
}

/// Rank of an edge, exposed for callers that draw edges directly.
pub fn gnp_edge_rank(a: Vertex, b: Vertex) -> u64 {
    edge_rank(a, b)
}
