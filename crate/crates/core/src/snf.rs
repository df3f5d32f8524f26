//! Integer homology via Smith normal form of the boundary operators.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::homology::boundary_matrix_unchecked;
use crate::linalg::{Domain, SparseMatrix};

pub const DEFAULT_SNF_BUDGET: usize = 2000;

/// H_k(·, Z) ≅ Z^free ⊕ ⊕ Z/t_i with t_1 | t_2 | ….
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub free: usize,
    pub torsion: Vec<u64>,
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.free == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegerHomology {
    pub groups: Vec<HomologyGroup>,
}

impl IntegerHomology {
    pub fn get(&self, k: usize) -> HomologyGroup {
        self.groups.get(k).cloned().unwrap_or(HomologyGroup { free: 0, torsion: Vec::new() })
    }

    pub fn is_torsion_free(&self, k: usize) -> bool {
        self.get(k).torsion.is_empty()
    }
}

/// Nonzero diagonal of the Smith normal form, as invariant factors
/// d_1 | d_2 | … (all positive).
pub fn smith_diagonal(m: &SparseMatrix) -> Vec<BigInt> {
    let mut a = DenseInt::from_sparse(m);
    let diag = a.diagonalize();
    invariant_factors(diag)
}

struct DenseInt {
    rows: usize,
    cols: usize,
    a: Vec<Vec<BigInt>>,
}

impl DenseInt {
    fn from_sparse(m: &SparseMatrix) -> Self {
        let mut a = vec![vec![BigInt::zero(); m.cols]; m.rows];
        for (j, col) in m.columns().enumerate() {
            for &(r, v) in col {
                a[r as usize][j] = BigInt::from(v);
            }
        }
        DenseInt { rows: m.rows, cols: m.cols, a }
    }

    /// Smallest-magnitude nonzero entry of the active block, stopping at
    /// the first unit.
    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                if x.abs().is_one() {
                    return Some((i, j));
                }
                match best {
                    Some((bi, bj)) if self.a[bi][bj].abs() <= x.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }

    fn swap_cols(&mut self, x: usize, y: usize) {
        if x != y {
            for row in self.a.iter_mut() {
                row.swap(x, y);
            }
        }
    }

    /// row_i ← row_i − q·row_t over the nonzero entries of row t.
    fn row_op(&mut self, i: usize, t: usize, q: &BigInt, support: &[usize]) {
        let (lo, hi) = self.a.split_at_mut(i.max(t));
        let (src, dst) = if t < i { (&lo[t], &mut hi[0]) } else { (&hi[0], &mut lo[i]) };
        for &j in support {
            dst[j] -= q * &src[j];
        }
    }

    fn col_op(&mut self, j: usize, t: usize, q: &BigInt, support: &[usize]) {
        for &i in support {
            let s = q * &self.a[i][t];
            self.a[i][j] -= s;
        }
    }

    fn diagonalize(&mut self) -> Vec<BigInt> {
        let mut diag = Vec::new();
        for t in 0..self.rows.min(self.cols) {
            let Some((pi, pj)) = self.find_pivot(t) else { break };
            self.a.swap(pi, t);
            self.swap_cols(pj, t);
            loop {
                let mut changed = false;
                let row_support: Vec<usize> = (t..self.cols).filter(|&j| !self.a[t][j].is_zero()).collect();
                for i in (t + 1)..self.rows {
                    if self.a[i][t].is_zero() {
                        continue;
                    }
                    let q = self.a[i][t].div_floor(&self.a[t][t]);
                    self.row_op(i, t, &q, &row_support);
                    if !self.a[i][t].is_zero() {
                        self.a.swap(i, t);
                        changed = true;
                        break;
                    }
                }
                if changed {
                    continue;
                }
                let col_support: Vec<usize> = (t..self.rows).filter(|&i| !self.a[i][t].is_zero()).collect();
                for j in (t + 1)..self.cols {
                    if self.a[t][j].is_zero() {
                        continue;
                    }
                    let q = self.a[t][j].div_floor(&self.a[t][t]);
                    self.col_op(j, t, &q, &col_support);
                    if !self.a[t][j].is_zero() {
                        self.swap_cols(j, t);
                        changed = true;
                        break;
                    }
                }
                if !changed {
                    break;
                }
            }
            diag.push(self.a[t][t].abs());
        }
        diag
    }
}

/// Turns a diagonal into invariant factors by repeated (gcd, lcm)
/// replacement on the non-unit entries.
fn invariant_factors(diag: Vec<BigInt>) -> Vec<BigInt> {
    let units = diag.iter().filter(|d| d.is_one()).count();
    let mut rest: Vec<BigInt> = diag.into_iter().filter(|d| !d.is_one()).collect();
    for i in 0..rest.len() {
        for j in (i + 1)..rest.len() {
            let g = rest[i].gcd(&rest[j]);
            let l = &rest[i] / &g * &rest[j];
            rest[i] = g;
            rest[j] = l;
        }
    }
    let mut out = vec![BigInt::one(); units];
    out.extend(rest);
    out.sort();
    out
}

/// Free ranks and torsion of every H_k(·, Z).
pub fn integer_homology(complex: &SimplicialComplex, budget: usize) -> Result<IntegerHomology> {
    let Some(top) = complex.dim() else {
        return Ok(IntegerHomology { groups: Vec::new() });
    };
    for k in 0..=top {
        if complex.num_faces(k) > budget {
            return Err(Error::resource(format!(
                "Smith normal form budget of {budget} faces per degree exceeded: f_{k} = {}",
                complex.num_faces(k)
            )));
        }
    }
    // factors[k] = invariant factors of ∂_k
    let mut factors: Vec<Vec<BigInt>> = vec![Vec::new(); top + 2];
    for (k, f) in factors.iter_mut().enumerate().take(top + 1).skip(1) {
        *f = smith_diagonal(&boundary_matrix_unchecked(complex, k, Domain::Integer));
    }
    let mut groups = Vec::with_capacity(top + 1);
    for k in 0..=top {
        let free = complex.num_faces(k) - factors[k].len() - factors[k + 1].len();
        let torsion = factors[k + 1]
            .iter()
            .filter(|d| !d.is_one())
            .map(|d| {
                u64::try_from(d).map_err(|_| Error::resource(format!("torsion coefficient {d} exceeds 64 bits")))
            })
            .collect::<Result<Vec<_>>>()?;
        groups.push(HomologyGroup { free, torsion });
    }
    Ok(IntegerHomology { groups })
}
