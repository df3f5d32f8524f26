//! Normalized graph Laplacians, spectral gaps, Cheeger numbers and the
//! per-link spectral certificate for vanishing of (d−1)-homology.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::complex::{Simplex, SimplicialComplex, Vertex};
use crate::error::{Error, Result};

/// Tolerance for λ₁ = 0 and for the connectivity test λ₂ > 0.
pub const EIGEN_TOLERANCE: f64 = 1e-9;
/// Largest vertex count handled by the dense eigensolver.
pub const DENSE_EIGEN_LIMIT: usize = 3000;
/// Largest vertex count for the exhaustive Cheeger search.
pub const CHEEGER_LIMIT: usize = 24;

/// `I − D^{-1/2} A D^{-1/2}` on the non-isolated vertices of a graph.
#[derive(Clone, Debug)]
pub struct Laplacian {
    /// row/column i corresponds to `vertices[i]`
    pub vertices: Vec<Vertex>,
    /// isolated vertices left out of the matrix
    pub isolated: Vec<Vertex>,
    pub matrix: DMatrix<f64>,
}

pub fn normalized_laplacian(graph: &SimplicialComplex) -> Result<Laplacian> {
    if graph.num_faces(1) == 0 {
        return Err(Error::domain("normalized Laplacian of a graph without edges"));
    }
    let bound = graph.vertex_bound();
    let mut degree = vec![0usize; bound];
    for (a, b) in graph.edges() {
        degree[a as usize] += 1;
        degree[b as usize] += 1;
    }
    let (vertices, isolated): (Vec<Vertex>, Vec<Vertex>) = graph.vertices().partition(|&v| degree[v as usize] > 0);
    let mut pos = vec![usize::MAX; bound];
    for (i, &v) in vertices.iter().enumerate() {
        pos[v as usize] = i;
    }
    let n = vertices.len();
    let mut m = DMatrix::<f64>::identity(n, n);
    for (a, b) in graph.edges() {
        let w = -1.0 / ((degree[a as usize] * degree[b as usize]) as f64).sqrt();
        let (i, j) = (pos[a as usize], pos[b as usize]);
        m[(i, j)] = w;
        m[(j, i)] = w;
    }
    Ok(Laplacian { vertices, isolated, matrix: m })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    /// ascending
    pub eigenvalues: Vec<f64>,
    pub lambda2: f64,
    pub connected: bool,
    pub isolated: Vec<Vertex>,
}

pub fn spectral_gap(graph: &SimplicialComplex) -> Result<SpectrumReport> {
    if graph.n_vertices() > DENSE_EIGEN_LIMIT {
        return Err(Error::resource(format!(
            "dense eigendecomposition is limited to {DENSE_EIGEN_LIMIT} vertices"
        )));
    }
    let lap = normalized_laplacian(graph)?;
    let mut eigenvalues: Vec<f64> = SymmetricEigen::new(lap.matrix).eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(f64::total_cmp);
    let lambda2 = eigenvalues.get(1).copied().unwrap_or(0.0);
    let connected = lambda2 > EIGEN_TOLERANCE && lap.isolated.is_empty();
    Ok(SpectrumReport { eigenvalues, lambda2, connected, isolated: lap.isolated })
}

/// Exact Cheeger number `min #E(A, Ā) / min(vol A, vol Ā)` over all
/// bipartitions, by Gray-code enumeration.
pub fn cheeger_number(graph: &SimplicialComplex) -> Result<f64> {
    let vs: Vec<Vertex> = graph.vertices().collect();
    let n = vs.len();
    if n > CHEEGER_LIMIT {
        return Err(Error::resource(format!(
            "exhaustive Cheeger search is limited to {CHEEGER_LIMIT} vertices (got {n}); use λ₂/2 ≤ h(G) instead"
        )));
    }
    if n < 2 {
        return Err(Error::domain("Cheeger number needs at least two vertices"));
    }
    let mut pos = vec![usize::MAX; graph.vertex_bound()];
    for (i, &v) in vs.iter().enumerate() {
        pos[v as usize] = i;
    }
    let mut adj = vec![0u32; n];
    for (a, b) in graph.edges() {
        let (i, j) = (pos[a as usize], pos[b as usize]);
        adj[i] |= 1 << j;
        adj[j] |= 1 << i;
    }
    let deg: Vec<u32> = adj.iter().map(|m| m.count_ones()).collect();
    if deg.contains(&0) {
        return Err(Error::domain("Cheeger number is undefined with isolated vertices"));
    }
    let total: u32 = deg.iter().sum();
    // vertex n−1 always stays outside A, so every bipartition is seen once
    let (mut set, mut cut, mut vol) = (0u32, 0i64, 0u32);
    let mut best = f64::INFINITY;
    for g in 1u32..(1 << (n - 1)) {
        let v = g.trailing_zeros() as usize;
        let inside = (adj[v] & set).count_ones() as i64;
        if set >> v & 1 == 0 {
            cut += deg[v] as i64 - 2 * inside;
            vol += deg[v];
            set |= 1 << v;
        } else {
            set &= !(1 << v);
            cut -= deg[v] as i64 - 2 * inside;
            vol -= deg[v];
        }
        let q = cut as f64 / vol.min(total - vol) as f64;
        if q < best {
            best = q;
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GarlandReport {
    pub certified: bool,
    /// first failing (d−2)-face and its link's λ₂; `None` face means the
    /// empty face (d = 1)
    pub witness: Option<(Option<Simplex>, f64)>,
    pub links_checked: usize,
}

/// Graph of a link, as a complex; only its 1-skeleton matters here.
fn link_graph(complex: &SimplicialComplex, sigma: Option<&Simplex>) -> Result<SimplicialComplex> {
    match sigma {
        None => Ok(complex.skeleton(1)),
        Some(s) => Ok(complex.link(s)?.skeleton(1)),
    }
}

/// Checks λ₂(lk σ) > 1 − 1/d for every (d−2)-face σ of a pure
/// d-dimensional complex. When it holds, H_{d−1}(Δ; R) = 0.
pub fn garland_certificate(complex: &SimplicialComplex, d: usize) -> Result<GarlandReport> {
    if d == 0 || !complex.is_pure(d) || complex.is_empty() {
        return Err(Error::domain(format!("garland certificate needs a pure {d}-dimensional complex")));
    }
    let bound = 1.0 - 1.0 / d as f64;
    let sigmas: Vec<Option<&Simplex>> = if d == 1 {
        vec![None]
    } else {
        complex.faces(d - 2).iter().map(Some).collect()
    };
    let mut checked = 0;
    for sigma in sigmas {
        checked += 1;
        let g = link_graph(complex, sigma)?;
        let lambda2 = if g.num_faces(1) == 0 {
            0.0
        } else {
            let rep = spectral_gap(&g)?;
            if rep.isolated.is_empty() {
                rep.lambda2
            } else {
                0.0
            }
        };
        if lambda2 <= bound || lambda2 <= EIGEN_TOLERANCE {
            return Ok(GarlandReport {
                certified: false,
                witness: Some((sigma.cloned(), lambda2)),
                links_checked: checked,
            });
        }
    }
    Ok(GarlandReport { certified: true, witness: None, links_checked: checked })
}
