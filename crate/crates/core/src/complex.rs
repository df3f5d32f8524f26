//! Combinatorial simplicial complexes.
//!
//! A [`SimplicialComplex`] is immutable once built. Faces are kept per
//! dimension in lexicographic order, with a hash index for membership
//! queries, so every enumeration (boundary matrix columns, file output) is
//! deterministic.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = u32;

/// A face given by its strictly increasing vertex list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Simplex(Vec<Vertex>);

impl Simplex {
    /// Builds a simplex from an arbitrary vertex list, sorting it.
    /// Repeated vertices and empty lists are rejected.
    pub fn new(mut vertices: Vec<Vertex>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::malformed("a simplex needs at least one vertex"));
        }
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::malformed(format!("repeated vertex in {vertices:?}")));
        }
        Ok(Simplex(vertices))
    }

    /// Wraps a vertex list that the caller guarantees is strictly increasing.
    pub fn from_sorted(vertices: Vec<Vertex>) -> Self {
        debug_assert!(!vertices.is_empty());
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Simplex(vertices)
    }

    pub fn vertex(v: Vertex) -> Self {
        Simplex(vec![v])
    }

    pub fn edge(a: Vertex, b: Vertex) -> Self {
        debug_assert!(a != b);
        if a < b {
            Simplex(vec![a, b])
        } else {
            Simplex(vec![b, a])
        }
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// True when every vertex of `self` is a vertex of `other`.
    pub fn is_face_of(&self, other: &Simplex) -> bool {
        if self.0.len() > other.0.len() {
            return false;
        }
        let mut it = other.0.iter();
        'outer: for v in &self.0 {
            for w in it.by_ref() {
                if w == v {
                    continue 'outer;
                }
                if w > v {
                    return false;
                }
            }
            return false;
        }
        true
    }

    pub fn is_disjoint(&self, other: &Simplex) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn union(&self, other: &Simplex) -> Simplex {
        let mut v: Vec<Vertex> = self.0.iter().chain(&other.0).copied().collect();
        v.sort_unstable();
        v.dedup();
        Simplex(v)
    }

    /// Vertices of `self` not in `other`, or `None` when nothing is left.
    pub fn difference(&self, other: &Simplex) -> Option<Simplex> {
        let v: Vec<Vertex> = self.0.iter().copied().filter(|x| !other.contains_vertex(*x)).collect();
        (!v.is_empty()).then_some(Simplex(v))
    }

    /// The face obtained by dropping the vertex at position `j`.
    pub fn facet_without(&self, j: usize) -> Option<Simplex> {
        if self.0.len() < 2 {
            return None;
        }
        let mut v = self.0.clone();
        v.remove(j);
        Some(Simplex(v))
    }

    /// Codimension-one faces in vertex-drop order: position 0 first.
    pub fn boundary(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = if self.0.len() < 2 { 0 } else { self.0.len() };
        (0..n).map(move |j| self.facet_without(j).unwrap())
    }

    /// All nonempty subsets with at most `max_len` vertices.
    fn subsets_up_to(&self, max_len: usize, out: &mut [HashSet<Simplex>]) {
        let n = self.0.len();
        let max_len = max_len.min(n);
        for k in 1..=max_len {
            let mut idx: Vec<usize> = (0..k).collect();
            loop {
                out[k - 1].insert(Simplex(idx.iter().map(|&i| self.0[i]).collect()));
                // next combination
                let mut i = k;
                while i > 0 && idx[i - 1] == n - k + i - 1 {
                    i -= 1;
                }
                if i == 0 {
                    break;
                }
                idx[i - 1] += 1;
                for j in i..k {
                    idx[j] = idx[j - 1] + 1;
                }
            }
        }
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl TryFrom<Vec<Vertex>> for Simplex {
    type Error = Error;
    fn try_from(v: Vec<Vertex>) -> Result<Self> {
        Simplex::new(v)
    }
}

/// Face counts per dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FVector(pub Vec<usize>);

impl FVector {
    pub fn get(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &f)| if i % 2 == 0 { f as i64 } else { -(f as i64) })
            .sum()
    }
}

impl fmt::Display for FVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A downward-closed family of simplices.
#[derive(Clone, Default)]
pub struct SimplicialComplex {
    faces: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Downward closure of `facets`, truncated above `max_dim` when given.
    pub fn from_facets<I>(facets: I, max_dim: Option<usize>) -> Result<Self>
    where
        I: IntoIterator,
        I::Item: Into<Vec<Vertex>>,
    {
        let mut levels: Vec<HashSet<Simplex>> = Vec::new();
        for facet in facets {
            let s = Simplex::new(facet.into())?;
            let top = match max_dim {
                Some(m) => s.dim().min(m),
                None => s.dim(),
            };
            if levels.len() < top + 1 {
                levels.resize_with(top + 1, HashSet::new);
            }
            s.subsets_up_to(top + 1, &mut levels);
        }
        Ok(Self::from_levels(levels.into_iter().map(|l| l.into_iter().collect()).collect()))
    }

    /// Builds a complex from per-dimension face lists that are already
    /// downward closed. Closure is verified.
    pub fn from_closed_faces(levels: Vec<Vec<Simplex>>) -> Result<Self> {
        let c = Self::from_levels(levels);
        for k in 1..c.faces.len() {
            for s in &c.faces[k] {
                if s.dim() != k {
                    return Err(Error::malformed(format!("face {s} listed in dimension {k}")));
                }
                for b in s.boundary() {
                    if !c.index[k - 1].contains_key(&b) {
                        return Err(Error::malformed(format!("face {s} is missing boundary face {b}")));
                    }
                }
            }
        }
        Ok(c)
    }

    fn from_levels(mut levels: Vec<Vec<Simplex>>) -> Self {
        while levels.last().is_some_and(|l| l.is_empty()) {
            levels.pop();
        }
        let mut index = Vec::with_capacity(levels.len());
        for level in levels.iter_mut() {
            level.sort_unstable();
            level.dedup();
            index.push(level.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect());
        }
        SimplicialComplex { faces: levels, index }
    }

    /// Dimension of the complex, `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.faces.len().checked_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// Faces of dimension `k` in lexicographic order.
    pub fn faces(&self, k: usize) -> &[Simplex] {
        self.faces.get(k).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn all_faces(&self) -> impl Iterator<Item = &Simplex> {
        self.faces.iter().flatten()
    }

    pub fn num_faces(&self, k: usize) -> usize {
        self.faces(k).len()
    }

    pub fn total_faces(&self) -> usize {
        self.faces.iter().map(|l| l.len()).sum()
    }

    pub fn n_vertices(&self) -> usize {
        self.num_faces(0)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.faces(0).iter().map(|s| s.vertices()[0])
    }

    /// Position of `s` within its dimension's lexicographic order.
    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s.dim())?.get(s).copied()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index_of(s).is_some()
    }

    pub fn f_vector(&self) -> FVector {
        FVector(self.faces.iter().map(|l| l.len()).collect())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().euler_characteristic()
    }

    /// The subcomplex of faces of dimension at most `k`.
    pub fn skeleton(&self, k: usize) -> SimplicialComplex {
        let levels = self.faces.iter().take(k + 1).cloned().collect();
        Self::from_levels(levels)
    }

    /// Largest vertex id plus one, or zero when empty.
    pub fn vertex_bound(&self) -> usize {
        self.vertices().max().map(|v| v as usize + 1).unwrap_or(0)
    }

    /// Edges as vertex pairs, lexicographic.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.faces(1).iter().map(|s| (s.vertices()[0], s.vertices()[1]))
    }

    /// Inclusion-maximal faces in lexicographic order.
    pub fn facets(&self) -> Vec<Simplex> {
        let mut out = Vec::new();
        for k in 0..self.faces.len() {
            let covered: HashSet<Simplex> = self
                .faces
                .get(k + 1)
                .map(|up| up.iter().flat_map(|s| s.boundary()).collect())
                .unwrap_or_default();
            out.extend(self.faces[k].iter().filter(|s| !covered.contains(*s)).cloned());
        }
        out.sort_unstable();
        out
    }

    /// `{ τ : τ ∩ σ = ∅, τ ∪ σ ∈ Δ }`.
    pub fn link(&self, sigma: &Simplex) -> Result<SimplicialComplex> {
        if !self.contains(sigma) {
            return Err(Error::domain(format!("{sigma} is not a face of the complex")));
        }
        let d = sigma.dim();
        let mut levels: Vec<Vec<Simplex>> = Vec::new();
        for k in (d + 1)..self.faces.len() {
            let mut level = Vec::new();
            for tau in &self.faces[k] {
                if sigma.is_face_of(tau) {
                    level.push(tau.difference(sigma).expect("proper superset"));
                }
            }
            levels.push(level);
        }
        Ok(Self::from_levels(levels))
    }

    /// True iff every face lies in some `d`-dimensional face.
    pub fn is_pure(&self, d: usize) -> bool {
        if self.is_empty() {
            return true;
        }
        if self.faces.len() != d + 1 {
            return false;
        }
        let mut covered: HashSet<&Simplex> = self.faces[d].iter().collect();
        for k in (0..d).rev() {
            let next: HashSet<Simplex> = covered.iter().flat_map(|s| s.boundary()).collect();
            if next.len() != self.faces[k].len() {
                return false;
            }
            covered = self.faces[k].iter().filter(|s| next.contains(*s)).collect();
        }
        true
    }

    /// Sub-complex obtained by deleting `removed` faces, which the caller
    /// guarantees leaves a downward-closed family.
    pub(crate) fn without_faces(&self, removed: &[HashSet<Simplex>]) -> SimplicialComplex {
        let levels = self
            .faces
            .iter()
            .enumerate()
            .map(|(k, level)| match removed.get(k) {
                Some(r) if !r.is_empty() => level.iter().filter(|s| !r.contains(*s)).cloned().collect(),
                _ => level.clone(),
            })
            .collect();
        Self::from_levels(levels)
    }
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.faces == other.faces
    }
}

impl Eq for SimplicialComplex {}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimplicialComplex(f = {}, facets = {:?})", self.f_vector(), self.facets())
    }
}
