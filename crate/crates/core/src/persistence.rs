//! Filtrations and persistence diagrams over F2 by column reduction.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::complex::{Simplex, SimplicialComplex, Vertex};
use crate::error::{Error, Result};
use crate::geometry::{enclosing_radius, PointCloud, RADIUS_TOLERANCE};
use crate::models::{adjacency, expand_cliques, proximity_graph};

/// Faces in appearance order. Ties in value are broken by dimension, then
/// lexicographically, so a face never precedes its boundary.
#[derive(Clone, Debug)]
pub struct Filtration {
    faces: Vec<Simplex>,
    values: Vec<f64>,
    /// for each face, the positions of its facets
    boundaries: Vec<Vec<u32>>,
    cap: f64,
}

fn tie_order(a: &(Simplex, f64), b: &(Simplex, f64)) -> Ordering {
    a.1.total_cmp(&b.1).then(a.0.len().cmp(&b.0.len())).then_with(|| a.0.cmp(&b.0))
}

impl Filtration {
    /// Sorts `entries` into canonical order and validates them. `cap` is the
    /// value at which the scan stopped; cycles still alive there are
    /// reported as censored with death = cap.
    pub fn new(mut entries: Vec<(Simplex, f64)>, cap: f64) -> Result<Self> {
        entries.sort_by(tie_order);
        Self::from_ordered(entries, cap)
    }

    /// Takes `entries` in the given order, which must have non-decreasing
    /// values and list every facet before its coface.
    pub fn from_ordered(entries: Vec<(Simplex, f64)>, cap: f64) -> Result<Self> {
        let mut index: HashMap<&Simplex, u32> = HashMap::with_capacity(entries.len());
        let mut boundaries = Vec::with_capacity(entries.len());
        let mut prev = 0.0f64;
        for (i, (s, v)) in entries.iter().enumerate() {
            if !(v.is_finite() && *v >= 0.0) {
                return Err(Error::malformed(format!("filtration value {v} for {s} is not a finite non-negative number")));
            }
            if *v < prev {
                return Err(Error::malformed(format!("filtration values decrease at {s}")));
            }
            prev = *v;
            if s.is_empty() {
                return Err(Error::malformed("the empty face cannot appear in a filtration"));
            }
            let mut b = Vec::with_capacity(s.len());
            if s.len() > 1 {
                for f in s.boundary() {
                    match index.get(&f) {
                        Some(&j) => b.push(j),
                        None => {
                            return Err(Error::malformed(format!("face {s} appears before its boundary face {f}")));
                        }
                    }
                }
            }
            b.sort_unstable();
            boundaries.push(b);
            if index.insert(s, i as u32).is_some() {
                return Err(Error::malformed(format!("face {s} appears twice")));
            }
        }
        if cap < prev {
            return Err(Error::malformed(format!("scan cap {cap} is below the last filtration value {prev}")));
        }
        let (faces, values) = entries.into_iter().unzip();
        Ok(Filtration { faces, values, boundaries, cap })
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn faces(&self) -> &[Simplex] {
        &self.faces
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn cap(&self) -> f64 {
        self.cap
    }

    /// Sub-complex of faces with value ≤ r.
    pub fn complex_at(&self, r: f64) -> SimplicialComplex {
        let end = self.values.partition_point(|&v| v <= r);
        let mut levels: Vec<Vec<Simplex>> = Vec::new();
        for s in &self.faces[..end] {
            let d = s.dim();
            if levels.len() <= d {
                levels.resize(d + 1, Vec::new());
            }
            levels[d].push(s.clone());
        }
        SimplicialComplex::from_closed_faces(levels).expect("filtration prefixes are closed")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PersistencePair {
    pub degree: usize,
    pub birth: f64,
    pub death: f64,
    /// still alive at the scan cap; `death` is the cap
    pub censored: bool,
}

impl PersistencePair {
    /// d/b; infinite for classes born at 0.
    pub fn persistence(&self) -> f64 {
        if self.birth > 0.0 {
            self.death / self.birth
        } else {
            f64::INFINITY
        }
    }
}

/// Symmetric difference of two ascending index lists.
fn add_column(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Column reduction state: `pivot_col[row]` is the column whose reduced
/// form has lowest one at `row`.
struct Reducer {
    pivot_col: Vec<u32>,
    reduced: HashMap<u32, Vec<u32>>,
}

const NONE: u32 = u32::MAX;

impl Reducer {
    fn new(n: usize) -> Self {
        Reducer { pivot_col: vec![NONE; n], reduced: HashMap::new() }
    }

    /// Reduces column `j` and returns its pivot, if any.
    fn reduce(&mut self, j: u32, mut col: Vec<u32>) -> Option<u32> {
        while let Some(&low) = col.last() {
            let other = self.pivot_col[low as usize];
            if other == NONE {
                self.pivot_col[low as usize] = j;
                self.reduced.insert(j, col);
                return Some(low);
            }
            col = add_column(&col, &self.reduced[&other]);
        }
        None
    }

    fn pivot_of_row(&self, row: u32) -> Option<u32> {
        let c = self.pivot_col[row as usize];
        (c != NONE).then_some(c)
    }
}

fn collect_pairs(f: &Filtration, k: usize, positive: &[u32], red: &Reducer) -> Vec<PersistencePair> {
    let mut out = Vec::new();
    for &s in positive {
        let birth = f.values[s as usize];
        let pair = match red.pivot_of_row(s) {
            Some(t) => PersistencePair { degree: k, birth, death: f.values[t as usize], censored: false },
            None => PersistencePair { degree: k, birth, death: f.cap, censored: true },
        };
        if pair.death > pair.birth {
            out.push(pair);
        }
    }
    out.sort_by(|a, b| a.birth.total_cmp(&b.birth).then(a.death.total_cmp(&b.death)));
    out
}

/// Degree-k diagram. Reduces the (k+1)-columns first; k-faces that become
/// pivots there are cycles without further work, and the remaining
/// k-columns are reduced (or, for edges, resolved by union-find) only to
/// decide whether they create a class.
pub fn persistence_diagram(f: &Filtration, k: usize) -> Vec<PersistencePair> {
    let n = f.len();
    let mut red = Reducer::new(n);
    for (j, s) in f.faces.iter().enumerate() {
        if s.dim() == k + 1 {
            red.reduce(j as u32, f.boundaries[j].clone());
        }
    }
    let mut positive = Vec::new();
    match k {
        0 => positive.extend((0..n as u32).filter(|&j| f.faces[j as usize].dim() == 0)),
        1 => {
            let mut uf = UnionFind::new(f.faces.iter().filter(|s| s.dim() == 0).map(|s| s.vertices()[0]).max().map_or(0, |v| v as usize + 1));
            for (j, s) in f.faces.iter().enumerate() {
                if s.dim() == 1 && !uf.union(s.vertices()[0], s.vertices()[1]) {
                    positive.push(j as u32);
                }
            }
        }
        _ => {
            let mut lower = Reducer::new(n);
            for (j, s) in f.faces.iter().enumerate() {
                if s.dim() != k {
                    continue;
                }
                if red.pivot_of_row(j as u32).is_some() || lower.reduce(j as u32, f.boundaries[j].clone()).is_none() {
                    positive.push(j as u32);
                }
            }
        }
    }
    collect_pairs(f, k, &positive, &red)
}

/// Plain standard reduction of the whole boundary matrix, without any
/// shortcuts; a second route to the same diagram.
pub fn persistence_diagram_standard(f: &Filtration, k: usize) -> Vec<PersistencePair> {
    let mut red = Reducer::new(f.len());
    let mut positive = Vec::new();
    for (j, s) in f.faces.iter().enumerate() {
        if s.dim() > k + 1 {
            continue;
        }
        let zero = red.reduce(j as u32, f.boundaries[j].clone()).is_none();
        if zero && s.dim() == k {
            positive.push(j as u32);
        }
    }
    collect_pairs(f, k, &positive, &red)
}

/// Largest d/b over finite pairs; 0 when there are none.
pub fn max_persistence(f: &Filtration, k: usize) -> f64 {
    persistence_diagram(f, k).iter().filter(|p| !p.censored).map(PersistencePair::persistence).fold(0.0, f64::max)
}

/// CSV with columns degree,birth,death,persistence.
pub fn diagram_csv(pairs: &[PersistencePair]) -> String {
    let mut s = String::from("degree,birth,death,persistence\n");
    for p in pairs {
        let _ = writeln!(s, "{},{},{},{}", p.degree, p.birth, p.death, p.persistence());
    }
    s
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect() }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    /// false if already connected
    fn union(&mut self, a: Vertex, b: Vertex) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb) as usize] = ra.min(rb);
        true
    }
}

fn check_radius(max_r: f64) -> Result<()> {
    if !(max_r.is_finite() && max_r >= 0.0) {
        return Err(Error::domain("maximum radius must be finite and non-negative"));
    }
    Ok(())
}

/// Vietoris–Rips filtration up to scale `max_r`; a face appears at its
/// diameter.
pub fn rips_filtration(points: &PointCloud, max_r: f64, max_dim: usize) -> Result<Filtration> {
    check_radius(max_r)?;
    let graph = proximity_graph(points, max_r);
    let adj = adjacency(&graph);
    let vertices: Vec<Vertex> = (0..points.len() as Vertex).collect();
    let levels = expand_cliques(&adj, &vertices, max_dim, &mut |_| true);
    let mut entries = Vec::with_capacity(levels.iter().map(Vec::len).sum());
    for s in levels.into_iter().flatten() {
        let vs = s.vertices();
        let mut diam = 0.0f64;
        for (i, &a) in vs.iter().enumerate() {
            for &b in &vs[i + 1..] {
                diam = diam.max(points.dist(a as usize, b as usize));
            }
        }
        entries.push((s, diam));
    }
    Filtration::new(entries, max_r)
}

/// Čech filtration up to scale `max_r`; a face appears at twice the radius
/// of its minimum enclosing ball (the convention of [`crate::models::cech`]).
pub fn cech_filtration(points: &PointCloud, max_r: f64, max_dim: usize) -> Result<Filtration> {
    check_radius(max_r)?;
    let graph = proximity_graph(points, max_r);
    let adj = adjacency(&graph);
    let vertices: Vec<Vertex> = (0..points.len() as Vertex).collect();
    let half = 0.5 * max_r + RADIUS_TOLERANCE;
    let levels = expand_cliques(&adj, &vertices, max_dim, &mut |s| s.len() <= 2 || enclosing_radius(points, s) <= half);
    let mut entries = Vec::with_capacity(levels.iter().map(Vec::len).sum());
    for s in levels.into_iter().flatten() {
        let v = (2.0 * enclosing_radius(points, s.vertices())).min(max_r);
        entries.push((s, v));
    }
    // a face's enclosing radius is at least each facet's, up to rounding
    let mut index: HashMap<Simplex, f64> = HashMap::with_capacity(entries.len());
    entries.sort_by(|a, b| a.0.len().cmp(&b.0.len()));
    for (s, v) in entries.iter_mut() {
        if s.len() > 1 {
            for f in s.boundary() {
                *v = v.max(index[&f]);
            }
        }
        index.insert(s.clone(), *v);
    }
    Filtration::new(entries, max_r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{gen_points, Distribution};
    use crate::homology::betti_numbers;
    use crate::linalg::{Domain, F2Basis};
    use crate::models::tests::hexagon;
    use crate::models::{cech, vietoris_rips};
    use crate::rng::RngSeed;
    use rand::seq::SliceRandom;

    #[test]
    fn single_growing_edge() {
        let f = Filtration::new(
            vec![(Simplex::vertex(0), 0.0), (Simplex::vertex(1), 0.0), (Simplex::edge(0, 1), 2.0)],
            3.0,
        )
        .unwrap();
        let d = persistence_diagram(&f, 0);
        assert_eq!(d.len(), 2);
        assert_eq!((d[0].birth, d[0].death, d[0].censored), (0.0, 2.0, false));
        assert_eq!((d[1].birth, d[1].death, d[1].censored), (0.0, 3.0, true));
        assert_eq!(max_persistence(&f, 1), 0.0);
    }

    #[test]
    fn malformed_filtrations() {
        let bad = Filtration::from_ordered(vec![(Simplex::edge(0, 1), 0.0), (Simplex::vertex(0), 0.0)], 1.0);
        assert!(matches!(bad, Err(Error::Malformed(_))));
        let dec = Filtration::from_ordered(vec![(Simplex::vertex(0), 1.0), (Simplex::vertex(1), 0.5)], 1.0);
        assert!(dec.is_err());
        assert!(Filtration::new(vec![(Simplex::vertex(0), 0.0), (Simplex::edge(0, 1), 1.0)], 2.0).is_err());
        assert!(Filtration::new(vec![(Simplex::vertex(0), 2.0)], 1.0).is_err());
    }

    #[test]
    fn hexagon_has_one_prominent_cycle() {
        let s = 0.5;
        let h = hexagon(s);
        let f = rips_filtration(&h, 3.0, 2).unwrap();
        let d = persistence_diagram(&f, 1);
        assert_eq!(d.len(), 1);
        assert!((d[0].birth - s).abs() < 1e-12);
        assert!((d[0].death - s * 3f64.sqrt()).abs() < 1e-12);
        assert!(!d[0].censored);
        assert!((max_persistence(&f, 1) - 3f64.sqrt()).abs() < 1e-12);
        // a cap below the filling scale censors the class
        let f = rips_filtration(&h, 0.6, 2).unwrap();
        let d = persistence_diagram(&f, 1);
        assert!(d[0].censored && d[0].death == 0.6);
        assert_eq!(max_persistence(&f, 1), 0.0);
    }

    #[test]
    fn prefixes_match_direct_constructions() {
        let cloud = gen_points(25, 2, Distribution::UniformCube, RngSeed::new(8, 0)).unwrap();
        let f = rips_filtration(&cloud, 0.5, 2).unwrap();
        let c = cech_filtration(&cloud, 0.5, 2).unwrap();
        for r in [0.1, 0.2, 0.33, 0.5] {
            assert_eq!(f.complex_at(r), vietoris_rips(&cloud, r, 2).unwrap());
            assert_eq!(c.complex_at(r).f_vector(), cech(&cloud, r, 2).unwrap().f_vector());
        }
    }

    /// Diagram from persistent Betti numbers β^{a,b} = dim Z_a − dim(B_b ∩ C_a),
    /// using only F2 ranks of boundary submatrices.
    fn brute_force_diagram(f: &Filtration, k: usize) -> Vec<(f64, f64)> {
        let crit: Vec<f64> = {
            let mut v = f.values().to_vec();
            v.dedup();
            v
        };
        let n = f.len();
        let pos = |r: f64| f.values().partition_point(|&v| v <= r);
        let dim_of = |j: usize| f.faces()[j].dim();
        // dim Z_k at each critical value: f_k − rank ∂_k, by incremental insertion
        let z_at: Vec<usize> = crit
            .iter()
            .map(|&a| {
                let end = pos(a);
                let mut basis = F2Basis::new(n);
                let mut z = 0;
                for j in 0..end {
                    if dim_of(j) == k && (k == 0 || !basis.insert(basis.vector(f.boundaries[j].iter().map(|&x| x as usize)))) {
                        z += 1;
                    }
                }
                z
            })
            .collect();
        // beta[i][j] for a = crit[i], b = crit[j] (j ≥ i), plus b = ∞ at index m
        let m = crit.len();
        let mut beta = vec![vec![0i64; m + 1]; m];
        for (i, &a) in crit.iter().enumerate() {
            let end_a = pos(a);
            let outside: Vec<bool> = (0..n).map(|x| x >= end_a).collect();
            let mut full = F2Basis::new(n);
            let mut proj = F2Basis::new(n);
            let mut next = 0usize;
            for jj in i..=m {
                let end_b = if jj < m { pos(crit[jj]) } else { n };
                while next < end_b {
                    if dim_of(next) == k + 1 {
                        let col: Vec<usize> = f.boundaries[next].iter().map(|&x| x as usize).collect();
                        full.insert(full.vector(col.iter().copied()));
                        proj.insert(proj.vector(col.iter().copied().filter(|&x| outside[x])));
                    }
                    next += 1;
                }
                beta[i][jj] = z_at[i] as i64 - (full.rank() - proj.rank()) as i64;
            }
        }
        let b = |i: Option<usize>, j: usize| i.map_or(0, |i| beta[i][j]);
        let mut out = Vec::new();
        for i in 0..m {
            let prev = i.checked_sub(1);
            for j in i + 1..=m {
                let (mu, death) = if j == m {
                    (b(Some(i), m) - b(prev, m), f.cap())
                } else {
                    (b(Some(i), j - 1) - b(Some(i), j) - b(prev, j - 1) + b(prev, j), crit[j])
                };
                assert!(mu >= 0);
                if death > crit[i] {
                    out.extend(std::iter::repeat((crit[i], death)).take(mu as usize));
                }
            }
        }
        out.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
        out
    }

    fn as_points(d: &[PersistencePair]) -> Vec<(f64, f64)> {
        d.iter().map(|p| (p.birth, p.death)).collect()
    }

    #[test]
    fn matches_brute_force_on_random_clouds() {
        for t in 0..8 {
            let cloud = gen_points(14, 2, Distribution::UniformCube, RngSeed::new(21, t)).unwrap();
            let f = rips_filtration(&cloud, 0.45, 2).unwrap();
            for k in 0..2 {
                let fast = persistence_diagram(&f, k);
                assert_eq!(fast, persistence_diagram_standard(&f, k));
                assert_eq!(as_points(&fast), brute_force_diagram(&f, k), "trial {t} degree {k}");
            }
        }
    }

    #[test]
    fn final_betti_numbers_are_the_censored_classes() {
        for t in 0..5 {
            let cloud = gen_points(40, 2, Distribution::UniformCube, RngSeed::new(22, t)).unwrap();
            let f = rips_filtration(&cloud, 0.3, 3).unwrap();
            let x = f.complex_at(f.cap());
            let b = betti_numbers(&x, Domain::F2, false);
            for k in 0..3 {
                let d = persistence_diagram(&f, k);
                assert_eq!(d.iter().filter(|p| p.censored).count(), b.get(k));
                assert_eq!(d, persistence_diagram_standard(&f, k));
            }
        }
    }

    #[test]
    fn equal_values_can_be_permuted() {
        // integer lattice points: many equal distances
        let rows: Vec<Vec<f64>> = (0..4).flat_map(|i| (0..4).map(move |j| vec![i as f64, j as f64])).collect();
        let cloud = PointCloud::from_rows(&rows).unwrap();
        let f = rips_filtration(&cloud, 2.0, 2).unwrap();
        let base: Vec<_> = (0..2).map(|k| persistence_diagram(&f, k)).collect();
        assert!(!base[1].is_empty());
        let mut rng = RngSeed::new(5, 5).rng(1);
        for _ in 0..10 {
            let mut entries: Vec<(Simplex, f64)> = f.faces().iter().cloned().zip(f.values().iter().copied()).collect();
            // shuffle inside each (value, dimension) block
            let mut start = 0;
            while start < entries.len() {
                let key = (entries[start].1, entries[start].0.len());
                let mut end = start;
                while end < entries.len() && (entries[end].1, entries[end].0.len()) == key {
                    end += 1;
                }
                entries[start..end].shuffle(&mut rng);
                start = end;
            }
            let g = Filtration::from_ordered(entries, f.cap()).unwrap();
            for k in 0..2 {
                assert_eq!(persistence_diagram(&g, k), base[k]);
            }
        }
    }

    #[test]
    fn csv_layout() {
        let p = PersistencePair { degree: 1, birth: 0.5, death: 1.5, censored: false };
        assert_eq!(diagram_csv(&[p]), "degree,birth,death,persistence\n1,0.5,1.5,3\n");
    }
}
