//! Boundary operators and Betti numbers over fields.

use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::linalg::{Domain, SparseMatrix, EXACT_RATIONAL_LIMIT, LARGE_PRIME};

/// Matrix of ∂_k: rows are (k−1)-faces, columns k-faces, both in
/// lexicographic order. Dropping the vertex at position j contributes
/// (−1)^j.
pub fn boundary_matrix(complex: &SimplicialComplex, k: usize, domain: Domain) -> Result<SparseMatrix> {
    let top = complex.dim().unwrap_or(0);
    if k == 0 || k > top {
        return Err(Error::domain(format!("boundary degree {k} outside 1..={top}")));
    }
    Ok(boundary_matrix_unchecked(complex, k, domain))
}

pub(crate) fn boundary_matrix_unchecked(complex: &SimplicialComplex, k: usize, domain: Domain) -> SparseMatrix {
    let mut m = SparseMatrix::new(complex.num_faces(k - 1), domain);
    for s in complex.faces(k) {
        m.push_column(s.boundary().enumerate().map(|(j, b)| {
            let row = complex.index_of(&b).expect("complex is downward closed") as u32;
            (row, if j % 2 == 0 { 1 } else { -1 })
        }));
    }
    m
}

/// Rank of ∂_k over `domain`; zero outside `1..=dim`.
pub fn boundary_rank(complex: &SimplicialComplex, k: usize, domain: Domain) -> usize {
    if k == 0 || complex.num_faces(k) == 0 {
        return 0;
    }
    let domain = effective_domain(complex, domain);
    boundary_matrix_unchecked(complex, k, domain).rank()
}

/// min(rank ∂_k, cap) over `domain`.
pub fn boundary_rank_capped(complex: &SimplicialComplex, k: usize, domain: Domain, cap: usize) -> usize {
    if k == 0 || complex.num_faces(k) == 0 || cap == 0 {
        return 0;
    }
    let domain = effective_domain(complex, domain);
    boundary_matrix_unchecked(complex, k, domain).rank_capped(cap)
}

/// Small complexes keep exact rational arithmetic; large ones use the
/// large prime.
fn effective_domain(complex: &SimplicialComplex, domain: Domain) -> Domain {
    match domain {
        Domain::Rational | Domain::Integer if complex.total_faces() >= EXACT_RATIONAL_LIMIT => Domain::Fp(LARGE_PRIME),
        Domain::Integer => Domain::Rational,
        d => d,
    }
}

/// Betti numbers β_0 … β_dim over one field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiProfile {
    pub betti: Vec<usize>,
    pub field: Domain,
    pub reduced: bool,
}

impl BettiProfile {
    pub fn get(&self, k: usize) -> usize {
        self.betti.get(k).copied().unwrap_or(0)
    }

    pub fn alternating_sum(&self) -> i64 {
        let s: i64 = self
            .betti
            .iter()
            .enumerate()
            .map(|(i, &b)| if i % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum();
        if self.reduced && !self.betti.is_empty() {
            s + 1
        } else {
            s
        }
    }
}

/// β_k = f_k − rank ∂_k − rank ∂_{k+1}; the reduced variant subtracts one
/// from β_0 of a nonempty complex.
pub fn betti_numbers(complex: &SimplicialComplex, field: Domain, reduced: bool) -> BettiProfile {
    let Some(top) = complex.dim() else {
        return BettiProfile { betti: Vec::new(), field, reduced };
    };
    let ranks: Vec<usize> = (0..=top + 1).map(|k| boundary_rank(complex, k, field)).collect();
    let mut betti: Vec<usize> = (0..=top).map(|k| complex.num_faces(k) - ranks[k] - ranks[k + 1]).collect();
    if reduced {
        betti[0] -= 1;
    }
    BettiProfile { betti, field, reduced }
}

/// A single Betti number, computing only the two ranks it needs.
pub fn betti_number(complex: &SimplicialComplex, k: usize, field: Domain) -> usize {
    if complex.num_faces(k) == 0 {
        return 0;
    }
    complex.num_faces(k) - boundary_rank(complex, k, field) - boundary_rank(complex, k + 1, field)
}
