//! Named properties of a complex and their evaluators.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::collapse::{collapse, core};
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::homology::boundary_rank_capped;
use crate::linalg::Domain;
use crate::snf::{integer_homology, DEFAULT_SNF_BUDGET};
use crate::spectral::garland_certificate;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum PropertySpec {
    Connected,
    /// pure of dimension d
    Pure { d: usize },
    BettiZero { k: usize, field: Domain },
    BettiNonzero { k: usize, field: Domain },
    Collapsible { d: usize },
    /// the spectral certificate for H_{d−1} = 0 holds (false when not pure)
    Garland { d: usize },
    /// H_k(X; Q) = 0 for every k ≥ 1
    Acyclic,
    /// largest component has at least this fraction of the vertices
    HasGiant { fraction: f64 },
    TorsionFree { k: usize },
}

pub const PROPERTY_NAMES: &str = "connected, pure(d), betti-zero(k[,field]), betti-nonzero(k[,field]), \
     collapsible(d), garland(d), acyclic, has-giant(fraction), torsion-free(k)";

impl FromStr for PropertySpec {
    type Err = Error;

    /// Forms like `connected`, `collapsible(2)`, `betti-zero(1,f2)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, args) = match s.find('(') {
            Some(i) if s.ends_with(')') => (&s[..i], s[i + 1..s.len() - 1].split(',').map(str::trim).collect::<Vec<_>>()),
            Some(_) => return Err(Error::domain(format!("unbalanced parentheses in property '{s}'"))),
            None => (s, Vec::new()),
        };
        let bad = || Error::domain(format!("cannot parse property '{s}'; supported: {PROPERTY_NAMES}"));
        let int = |i: usize| -> Result<usize> { args.get(i).ok_or_else(bad)?.parse().map_err(|_| bad()) };
        let field = || -> Result<Domain> { args.get(1).map_or(Ok(Domain::F2), |f| Domain::parse(f)) };
        let arity = |n: usize| if args.len() == n { Ok(()) } else { Err(bad()) };
        Ok(match name {
            "connected" => {
                arity(0)?;
                PropertySpec::Connected
            }
            "acyclic" => {
                arity(0)?;
                PropertySpec::Acyclic
            }
            "pure" | "pure-d" => {
                arity(1)?;
                PropertySpec::Pure { d: int(0)? }
            }
            "betti-zero" | "betti-nonzero" => {
                if args.is_empty() || args.len() > 2 {
                    return Err(bad());
                }
                let (k, field) = (int(0)?, field()?);
                if name == "betti-zero" {
                    PropertySpec::BettiZero { k, field }
                } else {
                    PropertySpec::BettiNonzero { k, field }
                }
            }
            "collapsible" => {
                arity(1)?;
                PropertySpec::Collapsible { d: int(0)? }
            }
            "garland" => {
                arity(1)?;
                PropertySpec::Garland { d: int(0)? }
            }
            "has-giant" => {
                arity(1)?;
                let fraction: f64 = args[0].parse().map_err(|_| bad())?;
                if !(0.0..=1.0).contains(&fraction) {
                    return Err(Error::domain("giant fraction must lie in [0, 1]"));
                }
                PropertySpec::HasGiant { fraction }
            }
            "torsion-free" => {
                arity(1)?;
                PropertySpec::TorsionFree { k: int(0)? }
            }
            _ => return Err(bad()),
        })
    }
}

impl fmt::Display for PropertySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropertySpec::Connected => write!(f, "connected"),
            PropertySpec::Pure { d } => write!(f, "pure({d})"),
            PropertySpec::BettiZero { k, field } => write!(f, "betti-zero({k},{field})"),
            PropertySpec::BettiNonzero { k, field } => write!(f, "betti-nonzero({k},{field})"),
            PropertySpec::Collapsible { d } => write!(f, "collapsible({d})"),
            PropertySpec::Garland { d } => write!(f, "garland({d})"),
            PropertySpec::Acyclic => write!(f, "acyclic"),
            PropertySpec::HasGiant { fraction } => write!(f, "has-giant({fraction})"),
            PropertySpec::TorsionFree { k } => write!(f, "torsion-free({k})"),
        }
    }
}

impl PropertySpec {
    pub fn evaluate(&self, x: &SimplicialComplex) -> Result<bool> {
        match *self {
            PropertySpec::Connected => Ok(!x.is_empty() && components(x).count == 1),
            PropertySpec::Pure { d } => Ok(x.is_pure(d)),
            PropertySpec::BettiZero { k, field } => betti_vanishes(x, k, field),
            PropertySpec::BettiNonzero { k, field } => betti_vanishes(x, k, field).map(|z| !z),
            PropertySpec::Collapsible { d } => Ok(collapse(x, d)?.collapsed),
            PropertySpec::Garland { d } => {
                if x.is_empty() || !x.is_pure(d) {
                    return Ok(false);
                }
                Ok(garland_certificate(x, d)?.certified)
            }
            PropertySpec::Acyclic => {
                let top = x.dim().unwrap_or(0);
                for k in 1..=top {
                    if !betti_vanishes(x, k, Domain::Rational)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            PropertySpec::HasGiant { fraction } => {
                let c = components(x);
                Ok(x.n_vertices() > 0 && c.largest as f64 >= fraction * x.n_vertices() as f64)
            }
            PropertySpec::TorsionFree { k } => Ok(integer_homology(x, DEFAULT_SNF_BUDGET)?.is_torsion_free(k)),
        }
    }
}

pub(crate) struct Components {
    pub count: usize,
    pub largest: usize,
}

/// Connected components of the 1-skeleton by union-find.
pub(crate) fn components(x: &SimplicialComplex) -> Components {
    let bound = x.vertex_bound();
    let mut parent: Vec<u32> = (0..bound as u32).collect();
    fn find(parent: &mut [u32], mut v: u32) -> u32 {
        while parent[v as usize] != v {
            let p = parent[v as usize];
            parent[v as usize] = parent[p as usize];
            v = p;
        }
        v
    }
    for (a, b) in x.edges() {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb) as usize] = ra.min(rb);
        }
    }
    let mut size = vec![0usize; bound];
    for v in x.vertices() {
        let r = find(&mut parent, v);
        size[r as usize] += 1;
    }
    Components { count: size.iter().filter(|&&s| s > 0).count(), largest: size.into_iter().max().unwrap_or(0) }
}

/// Decides β_k(X; field) = 0 (unreduced), computing as little as possible:
///
/// * rank ∂_1 = f_0 − #components over every field;
/// * for k = dim X, β_k is unchanged by collapsing to the k-core;
/// * β_k ≥ f_k − rank ∂_k − f_{k+1}, with rank ∂_k ≤ f_{k−1} − rank ∂_{k−1};
/// * β_k(F_2) = 0 forces β_k(Q) = 0;
/// * the final rank of ∂_{k+1} only needs to reach f_k − rank ∂_k.
pub fn betti_vanishes(x: &SimplicialComplex, k: usize, field: Domain) -> Result<bool> {
    if x.num_faces(k) == 0 {
        return Ok(true);
    }
    if k == 0 {
        return Ok(false);
    }
    if k >= 2 && Some(k) == x.dim() {
        let c = core(x, k)?;
        if c.num_faces(k) == 0 {
            return Ok(true);
        }
        if c.num_faces(k) < x.num_faces(k) {
            return betti_vanishes_inner(&c, k, field);
        }
    }
    betti_vanishes_inner(x, k, field)
}

fn exact_rank(x: &SimplicialComplex, k: usize, field: Domain, cap: usize) -> usize {
    if k == 1 {
        (x.n_vertices() - components(x).count).min(cap)
    } else {
        boundary_rank_capped(x, k, field, cap)
    }
}

fn betti_vanishes_inner(x: &SimplicialComplex, k: usize, field: Domain) -> Result<bool> {
    let (fk, fk1) = (x.num_faces(k), x.num_faces(k + 1));
    if k >= 2 {
        let below = exact_rank(x, k - 1, field, usize::MAX);
        let upper = (x.num_faces(k - 1) - below).min(fk);
        if fk - upper > fk1 {
            return Ok(false);
        }
    }
    if matches!(field, Domain::Rational | Domain::Integer) && betti_vanishes_inner(x, k, Domain::F2)? {
        return Ok(true);
    }
    let rk = exact_rank(x, k, field, usize::MAX);
    let cycles = fk - rk;
    if cycles == 0 {
        return Ok(true);
    }
    if cycles > fk1 {
        return Ok(false);
    }
    Ok(boundary_rank_capped(x, k + 1, field, cycles) == cycles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::betti_number;
    use crate::homology::fixtures::*;
    use crate::models::{gen_clique_complex, gen_gnp, gen_linial_meshulam, gen_multiparameter};
    use crate::rng::RngSeed;

    #[test]
    fn parse_and_display_round_trip() {
        for s in [
            "connected",
            "pure(2)",
            "betti-zero(1,f2)",
            "betti-nonzero(2,rational)",
            "collapsible(2)",
            "garland(2)",
            "acyclic",
            "has-giant(0.5)",
            "torsion-free(1)",
        ] {
            let p: PropertySpec = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
        }
        assert_eq!("betti-zero(1)".parse::<PropertySpec>().unwrap(), PropertySpec::BettiZero { k: 1, field: Domain::F2 });
        assert!("betti-zero".parse::<PropertySpec>().is_err());
        assert!("nonsense(1)".parse::<PropertySpec>().unwrap_err().to_string().contains("supported"));
        assert!("has-giant(2)".parse::<PropertySpec>().is_err());
    }

    #[test]
    fn simple_evaluations() {
        let k5 = gen_gnp(5, 1.0, RngSeed::new(0, 0)).unwrap();
        assert!(PropertySpec::Connected.evaluate(&k5).unwrap());
        assert!(!PropertySpec::Acyclic.evaluate(&k5).unwrap());
        let tree = cx(&[&[0, 1], &[1, 2], &[1, 3]]);
        assert!(PropertySpec::Acyclic.evaluate(&tree).unwrap());
        assert!(PropertySpec::HasGiant { fraction: 1.0 }.evaluate(&tree).unwrap());
        let split = cx(&[&[0, 1], &[2, 3], &[4]]);
        assert!(!PropertySpec::Connected.evaluate(&split).unwrap());
        assert!(PropertySpec::HasGiant { fraction: 0.4 }.evaluate(&split).unwrap());
        assert!(!PropertySpec::HasGiant { fraction: 0.41 }.evaluate(&split).unwrap());
        assert!(!PropertySpec::TorsionFree { k: 1 }.evaluate(&rp2()).unwrap());
        assert!(PropertySpec::TorsionFree { k: 1 }.evaluate(&torus7()).unwrap());
        assert!(!PropertySpec::Garland { d: 2 }.evaluate(&cx(&[&[0, 1, 2], &[2, 3]])).unwrap());
        assert!(PropertySpec::Garland { d: 2 }.evaluate(&tetra_boundary()).unwrap());
        // complete 1-skeleton of Y_2(60, 0) has β₁ = C(59, 2)
        let y = gen_linial_meshulam(60, 2, 0.0, RngSeed::new(0, 0)).unwrap();
        assert!(!PropertySpec::BettiZero { k: 1, field: Domain::F2 }.evaluate(&y).unwrap());
    }

    #[test]
    fn shortcuts_agree_with_full_betti_numbers() {
        let mut complexes = Vec::new();
        for t in 0..40 {
            let s = RngSeed::new(31, t);
            complexes.push(gen_linial_meshulam(9, 2, 0.1 + 0.02 * t as f64, s).unwrap());
            complexes.push(gen_clique_complex(12, 0.2 + 0.015 * t as f64, 4, s).unwrap());
            complexes.push(gen_multiparameter(11, &[0.5, 0.4, 0.3], s).unwrap());
            complexes.push(gen_gnp(10, 0.05 + 0.01 * t as f64, s).unwrap());
        }
        complexes.extend([rp2(), torus7(), tetra_boundary()]);
        for x in &complexes {
            for k in 0..4 {
                for field in [Domain::F2, Domain::Fp(3), Domain::Rational] {
                    let full = betti_number(x, k, field);
                    assert_eq!(betti_vanishes(x, k, field).unwrap(), full == 0, "k = {k} {field} {:?}", x.f_vector());
                }
            }
        }
    }
}
