//! Elementary collapses of top-dimensional faces.
//!
//! A (d−1)-face lying in exactly one d-face is free; removing the pair is an
//! elementary collapse. The set of d-faces that survive greedy collapsing
//! does not depend on the order in which free pairs are taken, since a face
//! only stops being free when its last coface disappears.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::complex::{FVector, Simplex, SimplicialComplex};
use crate::error::{Error, Result};

/// Largest number of d-faces for which [`collapse_exhaustive`] runs.
pub const EXHAUSTIVE_LIMIT: usize = 30;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollapseStep {
    pub free_face: Simplex,
    pub coface: Simplex,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollapseReport {
    pub collapsed: bool,
    pub steps: Vec<CollapseStep>,
    pub residual: FVector,
}

struct Incidence {
    /// for each (d−1)-face, the d-faces containing it
    cofaces: Vec<Vec<usize>>,
    /// for each d-face, its (d−1)-faces
    facets: Vec<Vec<usize>>,
}

fn incidence(complex: &SimplicialComplex, d: usize) -> Incidence {
    let mut cofaces = vec![Vec::new(); complex.num_faces(d - 1)];
    let mut facets = Vec::with_capacity(complex.num_faces(d));
    for (t, tau) in complex.faces(d).iter().enumerate() {
        let fs: Vec<usize> = tau.boundary().map(|b| complex.index_of(&b).expect("closed")).collect();
        for &f in &fs {
            cofaces[f].push(t);
        }
        facets.push(fs);
    }
    Incidence { cofaces, facets }
}

fn check_dims(complex: &SimplicialComplex, d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::domain("collapse dimension must be at least 1"));
    }
    if complex.dim().is_some_and(|k| k > d) {
        return Err(Error::domain(format!("complex has faces above dimension {d}")));
    }
    Ok(())
}

/// Greedy d-collapse, always taking the lexicographically smallest free
/// (d−1)-face.
pub fn collapse(complex: &SimplicialComplex, d: usize) -> Result<CollapseReport> {
    check_dims(complex, d)?;
    if complex.num_faces(d) == 0 {
        return Ok(CollapseReport { collapsed: true, steps: Vec::new(), residual: complex.f_vector() });
    }
    let inc = incidence(complex, d);
    let mut count: Vec<usize> = inc.cofaces.iter().map(|c| c.len()).collect();
    let mut alive = vec![true; complex.num_faces(d)];
    let mut free: BTreeSet<usize> = (0..count.len()).filter(|&i| count[i] == 1).collect();
    let mut steps = Vec::new();
    let mut removed_facets = 0usize;
    while let Some(sigma) = free.pop_first() {
        let tau = *inc.cofaces[sigma].iter().find(|&&t| alive[t]).expect("free face has a live coface");
        alive[tau] = false;
        for &f in &inc.facets[tau] {
            count[f] -= 1;
            match count[f] {
                1 => {
                    free.insert(f);
                }
                0 => {
                    free.remove(&f);
                }
                _ => {}
            }
        }
        removed_facets += 1;
        steps.push(CollapseStep {
            free_face: complex.faces(d - 1)[sigma].clone(),
            coface: complex.faces(d)[tau].clone(),
        });
    }
    let remaining = alive.iter().filter(|&&a| a).count();
    let mut residual = complex.f_vector();
    residual.0[d] = remaining;
    residual.0[d - 1] -= removed_facets;
    if remaining == 0 {
        residual.0.pop();
    }
    Ok(CollapseReport { collapsed: remaining == 0, steps, residual })
}

/// The complex left after applying `steps` in order.
pub fn apply_steps(complex: &SimplicialComplex, steps: &[CollapseStep]) -> SimplicialComplex {
    let Some(first) = steps.first() else {
        return complex.clone();
    };
    let d = first.coface.dim();
    let mut removed = vec![HashSet::new(); d + 1];
    for s in steps {
        removed[d - 1].insert(s.free_face.clone());
        removed[d].insert(s.coface.clone());
    }
    complex.without_faces(&removed)
}

/// The d-core: what greedy collapsing leaves behind, as a complex.
pub fn core(complex: &SimplicialComplex, d: usize) -> Result<SimplicialComplex> {
    let report = collapse(complex, d)?;
    Ok(apply_steps(complex, &report.steps))
}

/// Exhaustive search for any collapsing sequence that removes every
/// d-face. Only for complexes with at most [`EXHAUSTIVE_LIMIT`] d-faces.
pub fn collapse_exhaustive(complex: &SimplicialComplex, d: usize) -> Result<bool> {
    check_dims(complex, d)?;
    let m = complex.num_faces(d);
    if m > EXHAUSTIVE_LIMIT {
        return Err(Error::resource(format!(
            "exhaustive collapse search is limited to {EXHAUSTIVE_LIMIT} top faces, got {m}"
        )));
    }
    if m == 0 {
        return Ok(true);
    }
    let inc = incidence(complex, d);
    let mut seen: HashMap<u32, bool> = HashMap::new();
    fn search(inc: &Incidence, alive: u32, seen: &mut HashMap<u32, bool>) -> bool {
        if alive == 0 {
            return true;
        }
        if let Some(&r) = seen.get(&alive) {
            return r;
        }
        let mut result = false;
        for cof in &inc.cofaces {
            let live: Vec<usize> = cof.iter().copied().filter(|&t| alive >> t & 1 == 1).collect();
            if live.len() == 1 {
                if search(inc, alive & !(1u32 << live[0]), seen) {
                    result = true;
                    break;
                }
            }
        }
        seen.insert(alive, result);
        result
    }
    let all = (1u32 << m) - 1;
    Ok(search(&inc, all, &mut seen))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::betti_numbers;
    use crate::homology::fixtures::*;
    use crate::linalg::Domain;
    use crate::models::{gen_gnp, gen_linial_meshulam};
    use crate::rng::RngSeed;

    #[test]
    fn trees_collapse() {
        let path = cx(&[&[0, 1], &[1, 2], &[2, 3], &[1, 4]]);
        let r = collapse(&path, 1).unwrap();
        assert!(r.collapsed);
        assert_eq!(r.steps.len(), 4);
        assert_eq!(r.residual, FVector(vec![1]));
        assert_eq!(r.steps[0], CollapseStep { free_face: Simplex::vertex(0), coface: Simplex::edge(0, 1) });
    }

    #[test]
    fn cycles_and_spheres_do_not_collapse() {
        let tri = cx(&[&[0, 1], &[1, 2], &[0, 2]]);
        let r = collapse(&tri, 1).unwrap();
        assert!(!r.collapsed);
        assert!(r.steps.is_empty());
        for d in 1..5u32 {
            let facets: Vec<Vec<u32>> = (0..=d + 1).map(|skip| (0..=d + 1).filter(|&v| v != skip).collect()).collect();
            let sphere = SimplicialComplex::from_facets(facets, None).unwrap();
            let r = collapse(&sphere, d as usize).unwrap();
            assert!(!r.collapsed && r.steps.is_empty());
        }
    }

    #[test]
    fn disk_collapses_to_its_edges() {
        let disk = cx(&[&[0, 1, 2], &[0, 2, 3], &[0, 3, 4]]);
        let r = collapse(&disk, 2).unwrap();
        assert!(r.collapsed);
        assert_eq!(r.steps.len(), 3);
        assert_eq!(r.residual, FVector(vec![5, 4]));
        assert_eq!(apply_steps(&disk, &r.steps).f_vector(), r.residual);
    }

    #[test]
    fn dimension_guard() {
        let t = cx(&[&[0, 1, 2]]);
        assert!(collapse(&t, 1).is_err());
        assert!(collapse(&t, 0).is_err());
    }

    #[test]
    fn steps_preserve_homology() {
        for t in 0..30 {
            let y = gen_linial_meshulam(8, 2, 0.35, RngSeed::new(11, t)).unwrap();
            let r = collapse(&y, 2).unwrap();
            let base = betti_numbers(&y, Domain::F2, false);
            let base_q = betti_numbers(&y, Domain::Rational, false);
            for k in 1..=r.steps.len() {
                let c = apply_steps(&y, &r.steps[..k]);
                let (b, bq) = (betti_numbers(&c, Domain::F2, false), betti_numbers(&c, Domain::Rational, false));
                for i in 0..3 {
                    assert_eq!(b.get(i), base.get(i));
                    assert_eq!(bq.get(i), base_q.get(i));
                }
            }
            if r.collapsed {
                assert_eq!(base.get(2), 0);
            }
        }
    }

    #[test]
    fn greedy_agrees_with_exhaustive_search() {
        let mut both = [0usize; 2];
        for t in 0..200 {
            let y = gen_linial_meshulam(7, 2, 0.5, RngSeed::new(5, t)).unwrap();
            if y.num_faces(2) > EXHAUSTIVE_LIMIT {
                continue;
            }
            let g = collapse(&y, 2).unwrap().collapsed;
            assert_eq!(g, collapse_exhaustive(&y, 2).unwrap());
            both[g as usize] += 1;
        }
        assert!(both[0] > 0 && both[1] > 0, "{both:?}");
        for t in 0..50 {
            let g = gen_gnp(9, 0.25, RngSeed::new(6, t)).unwrap();
            assert_eq!(collapse(&g, 1).unwrap().collapsed, collapse_exhaustive(&g, 1).unwrap());
        }
    }

    #[test]
    fn exhaustive_budget() {
        let y = gen_linial_meshulam(10, 2, 1.0, RngSeed::new(1, 1)).unwrap();
        assert!(collapse_exhaustive(&y, 2).unwrap_err().is_resource());
    }
}
