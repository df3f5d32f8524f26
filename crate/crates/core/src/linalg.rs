//! Exact sparse matrices and ranks over F₂, F_p and Q.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// 2^61 − 1. Ranks over this prime stand in for rational ranks on large
/// inputs; they differ only if the prime divides a torsion coefficient.
pub const LARGE_PRIME: u64 = (1u64 << 61) - 1;

/// Inputs with fewer faces than this use exact rational elimination when
/// rational Betti numbers are requested.
pub const EXACT_RATIONAL_LIMIT: usize = 500;

/// Coefficient domain of a matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Domain {
    F2,
    Fp(u64),
    Rational,
    Integer,
}

impl Domain {
    /// Reduces an integer into the canonical representative of the domain.
    pub fn reduce(self, x: i64) -> i64 {
        match self {
            Domain::F2 => x.rem_euclid(2),
            Domain::Fp(p) => (x as i128).rem_euclid(p as i128) as i64,
            Domain::Rational | Domain::Integer => x,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "f2" => Ok(Domain::F2),
            "q" | "rational" => Ok(Domain::Rational),
            "z" | "integer" => Ok(Domain::Integer),
            _ => {
                if let Some(q) = s.strip_prefix("fp:") {
                    let p: u64 = q.parse().map_err(|_| Error::domain(format!("bad prime {q:?}")))?;
                    if !is_prime(p) {
                        return Err(Error::domain(format!("{p} is not prime")));
                    }
                    Ok(if p == 2 { Domain::F2 } else { Domain::Fp(p) })
                } else {
                    Err(Error::domain(format!("unknown field {s:?}; expected f2, fp:q, rational")))
                }
            }
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::F2 => write!(f, "f2"),
            Domain::Fp(p) => write!(f, "fp:{p}"),
            Domain::Rational => write!(f, "rational"),
            Domain::Integer => write!(f, "integer"),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    // Deterministic Miller–Rabin for 64-bit inputs.
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

#[inline]
pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Column-major sparse matrix with integer entries interpreted in `domain`.
/// No zero entries are stored; row indices within a column are increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub domain: Domain,
    columns: Vec<Vec<(u32, i64)>>,
}

impl SparseMatrix {
    pub fn new(rows: usize, domain: Domain) -> Self {
        SparseMatrix { rows, cols: 0, domain, columns: Vec::new() }
    }

    /// Appends a column. Entries are reduced into the domain, sorted, and
    /// zeros dropped.
    pub fn push_column(&mut self, entries: impl IntoIterator<Item = (u32, i64)>) {
        let mut col: Vec<(u32, i64)> = Vec::new();
        for (r, v) in entries {
            debug_assert!((r as usize) < self.rows);
            col.push((r, v));
        }
        col.sort_unstable_by_key(|e| e.0);
        let mut merged: Vec<(u32, i64)> = Vec::with_capacity(col.len());
        for (r, v) in col {
            match merged.last_mut() {
                Some(last) if last.0 == r => last.1 += v,
                _ => merged.push((r, v)),
            }
        }
        let domain = self.domain;
        merged.retain_mut(|e| {
            e.1 = domain.reduce(e.1);
            e.1 != 0
        });
        self.columns.push(merged);
        self.cols += 1;
    }

    pub fn column(&self, j: usize) -> &[(u32, i64)] {
        &self.columns[j]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[(u32, i64)]> {
        self.columns.iter().map(|c| c.as_slice())
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.len()).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.columns[c]
            .binary_search_by_key(&(r as u32), |e| e.0)
            .map(|i| self.columns[c][i].1)
            .unwrap_or(0)
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0i64; self.cols]; self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                m[r as usize][j] = v;
            }
        }
        m
    }

    /// Integer product `self · other`, reduced into `self.domain`.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = SparseMatrix::new(self.rows, self.domain);
        let modulus: Option<i128> = match self.domain {
            Domain::F2 => Some(2),
            Domain::Fp(p) => Some(p as i128),
            Domain::Rational | Domain::Integer => None,
        };
        for col in &other.columns {
            // i128 accumulation: entries mod a 61-bit prime overflow i64 products
            let mut acc: std::collections::BTreeMap<u32, i128> = std::collections::BTreeMap::new();
            for &(k, b) in col {
                for &(i, a) in &self.columns[k as usize] {
                    let e = acc.entry(i).or_insert(0);
                    *e += a as i128 * b as i128;
                    if let Some(m) = modulus {
                        *e = e.rem_euclid(m);
                    }
                }
            }
            out.push_column(acc.into_iter().map(|(i, v)| (i, i64::try_from(v).expect("integer product overflows i64"))));
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.rank_capped(usize::MAX)
    }

    /// min(rank, cap), possibly computed with less work than the full rank.
    pub fn rank_capped(&self, cap: usize) -> usize {
        match self.domain {
            Domain::F2 => rank_f2_capped(self, cap),
            Domain::Fp(p) => rank_fp_capped(self, p, cap),
            Domain::Rational | Domain::Integer => {
                if self.rows.min(self.cols) == 0 {
                    0
                } else if self.rows + self.cols < EXACT_RATIONAL_LIMIT {
                    rank_rational(self).min(cap)
                } else {
                    rank_fp_capped(self, LARGE_PRIME, cap)
                }
            }
        }
    }
}

/// Incremental basis of F₂ vectors stored as packed words, keyed by the
/// highest set bit.
#[derive(Clone)]
pub struct F2Basis {
    words: usize,
    pivots: Vec<Option<Box<[u64]>>>,
    rank: usize,
}

impl F2Basis {
    pub fn new(len: usize) -> Self {
        F2Basis { words: len.div_ceil(64).max(1), pivots: vec![None; len.max(1)], rank: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn words(&self) -> usize {
        self.words
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0u64; self.words]
    }

    /// Vector with the given bits set (each index toggles).
    pub fn vector(&self, bits: impl IntoIterator<Item = usize>) -> Vec<u64> {
        let mut v = self.zero();
        for b in bits {
            v[b / 64] ^= 1u64 << (b % 64);
        }
        v
    }

    #[inline]
    fn top_bit(v: &[u64]) -> Option<usize> {
        for w in (0..v.len()).rev() {
            if v[w] != 0 {
                return Some(w * 64 + 63 - v[w].leading_zeros() as usize);
            }
        }
        None
    }

    /// Reduces `v` in place; returns its final top bit, `None` if it
    /// reduced to zero.
    pub fn reduce(&self, v: &mut [u64]) -> Option<usize> {
        let mut hi = v.len();
        loop {
            let top = Self::top_bit(&v[..hi])?;
            match &self.pivots[top] {
                Some(b) => {
                    let w = top / 64 + 1;
                    for (x, y) in v[..w].iter_mut().zip(b.iter()) {
                        *x ^= *y;
                    }
                    hi = w;
                }
                None => return Some(top),
            }
        }
    }

    /// Inserts `v`; returns true when it was independent of the basis.
    pub fn insert(&mut self, mut v: Vec<u64>) -> bool {
        match self.reduce(&mut v) {
            Some(top) => {
                v.truncate(top / 64 + 1);
                self.pivots[top] = Some(v.into_boxed_slice());
                self.rank += 1;
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut v = v.to_vec();
        self.reduce(&mut v).is_none()
    }
}

pub fn rank_f2(m: &SparseMatrix) -> usize {
    rank_f2_capped(m, usize::MAX)
}

/// Rank over F₂, stopping early once it reaches `cap`.
pub fn rank_f2_capped(m: &SparseMatrix, cap: usize) -> usize {
    let mut order: Vec<usize> = (0..m.cols).collect();
    order.sort_by_key(|&j| m.column(j).len());
    let mut basis = F2Basis::new(m.rows);
    let max_rank = m.rows.min(m.cols).min(cap);
    for j in order {
        let v = basis.vector(m.column(j).iter().filter(|e| e.1 & 1 == 1).map(|e| e.0 as usize));
        basis.insert(v);
        if basis.rank() == max_rank {
            break;
        }
    }
    basis.rank()
}

/// Incremental basis of sparse vectors over F_p, keyed by the largest row
/// index, each normalized to a unit leading coefficient.
#[derive(Clone)]
pub struct FpBasis {
    p: u64,
    pivots: Vec<Option<Vec<(u32, u64)>>>,
    rank: usize,
}

impl FpBasis {
    pub fn new(len: usize, p: u64) -> Self {
        FpBasis { p, pivots: vec![None; len.max(1)], rank: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `v ← v − c·b` on sorted sparse vectors.
    fn axpy(v: &[(u32, u64)], c: u64, b: &[(u32, u64)], p: u64, out: &mut Vec<(u32, u64)>) {
        out.clear();
        let (mut i, mut j) = (0, 0);
        let neg = |x: u64| if x == 0 { 0 } else { p - x };
        while i < v.len() || j < b.len() {
            let take_v = j >= b.len() || (i < v.len() && v[i].0 < b[j].0);
            let take_b = i >= v.len() || (j < b.len() && b[j].0 < v[i].0);
            if take_v {
                out.push(v[i]);
                i += 1;
            } else if take_b {
                out.push((b[j].0, neg(mul_mod(c, b[j].1, p))));
                j += 1;
            } else {
                let x = (v[i].1 + neg(mul_mod(c, b[j].1, p))) % p;
                if x != 0 {
                    out.push((v[i].0, x));
                }
                i += 1;
                j += 1;
            }
        }
    }

    pub fn insert(&mut self, mut v: Vec<(u32, u64)>) -> bool {
        let mut scratch = Vec::new();
        while let Some(&(top, c)) = v.last() {
            match &self.pivots[top as usize] {
                Some(b) => {
                    Self::axpy(&v, c, b, self.p, &mut scratch);
                    std::mem::swap(&mut v, &mut scratch);
                }
                None => {
                    let inv = inv_mod(c, self.p);
                    for e in v.iter_mut() {
                        e.1 = mul_mod(e.1, inv, self.p);
                    }
                    self.pivots[top as usize] = Some(v);
                    self.rank += 1;
                    return true;
                }
            }
        }
        false
    }
}

pub fn rank_fp(m: &SparseMatrix, p: u64) -> usize {
    rank_fp_capped(m, p, usize::MAX)
}

/// Rank over F_p, stopping early once it reaches `cap`.
pub fn rank_fp_capped(m: &SparseMatrix, p: u64, cap: usize) -> usize {
    let mut order: Vec<usize> = (0..m.cols).collect();
    order.sort_by_key(|&j| m.column(j).len());
    let mut basis = FpBasis::new(m.rows, p);
    let max_rank = m.rows.min(m.cols).min(cap);
    for j in order {
        let v: Vec<(u32, u64)> = m
            .column(j)
            .iter()
            .map(|&(r, x)| (r, (x as i128).rem_euclid(p as i128) as u64))
            .filter(|e| e.1 != 0)
            .collect();
        basis.insert(v);
        if basis.rank() == max_rank {
            break;
        }
    }
    basis.rank()
}

/// Exact rank over Q by dense fraction-valued Gaussian elimination.
pub fn rank_rational(m: &SparseMatrix) -> usize {
    let mut a: Vec<Vec<BigRational>> = m
        .to_dense()
        .into_iter()
        .map(|row| row.into_iter().map(|x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    rank_dense_rational(&mut a)
}

pub fn rank_dense_rational(a: &mut [Vec<BigRational>]) -> usize {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = BigRational::one() / a[rank][c].clone();
        for r in 0..rows {
            if r != rank && !a[r][c].is_zero() {
                let f = a[r][c].clone() * inv.clone();
                for k in c..cols {
                    if !a[rank][k].is_zero() {
                        let t = f.clone() * a[rank][k].clone();
                        a[r][k] -= t;
                    }
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Absolute value helper for big integers (re-exported for SNF users).
pub fn big_abs(x: &BigInt) -> BigInt {
    x.abs()
}
