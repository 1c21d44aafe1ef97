//! Exact linear algebra over the rationals.
//!
//! Ranks and kernels come from one elimination routine that works on
//! integer rows (denominators cleared, content divided out). Large inputs go
//! through a sparse elimination with Markowitz pivot selection; small ones
//! through a dense fraction-free (Bareiss) elimination.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Row-major sparse matrix; each row is sorted by column with no zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, Rational)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let data = (0..n).map(|i| vec![(i, Rational::one())]).collect();
        SparseMatrix { rows: n, cols: n, data }
    }

    /// Duplicate positions are summed; zero results are dropped.
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let mut data: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); rows];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "entry ({r},{c}) outside {rows}x{cols}");
            data[r].push((c, v));
        }
        for row in &mut data {
            row.sort_by_key(|(c, _)| *c);
            let mut merged: Vec<(usize, Rational)> = Vec::with_capacity(row.len());
            for (c, v) in row.drain(..) {
                match merged.last_mut() {
                    Some((lc, lv)) if *lc == c => *lv += v,
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|(_, v)| !v.is_zero());
            *row = merged;
        }
        SparseMatrix { rows, cols, data }
    }

    pub fn from_dense(rows: usize, cols: usize, dense: &[Vec<Rational>]) -> Self {
        assert_eq!(dense.len(), rows);
        let trip = dense.iter().enumerate().flat_map(|(r, row)| {
            assert_eq!(row.len(), cols);
            row.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(move |(c, v)| (r, c, v.clone()))
        });
        Self::from_triplets(rows, cols, trip)
    }

    pub fn from_i64(rows: usize, cols: usize, dense: &[&[i64]]) -> Self {
        let trip = dense.iter().enumerate().flat_map(|(r, row)| {
            assert_eq!(row.len(), cols);
            row.iter()
                .enumerate()
                .filter(|(_, v)| **v != 0)
                .map(move |(c, v)| (r, c, rat(*v)))
        });
        Self::from_triplets(rows, cols, trip)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Self {
        let trip = columns.iter().enumerate().flat_map(|(c, col)| {
            assert_eq!(col.len(), rows);
            col.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(move |(r, v)| (r, c, v.clone()))
        });
        Self::from_triplets(rows, columns.len(), trip)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn row(&self, r: usize) -> &[(usize, Rational)] {
        &self.data[r]
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        match self.data[r].binary_search_by_key(&c, |(cc, _)| *cc) {
            Ok(i) => self.data[r][i].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        let mut out = vec![vec![Rational::zero(); self.cols]; self.rows];
        for (r, c, v) in self.entries() {
            out[r][c] = v.clone();
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut data: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); self.cols];
        for (r, c, v) in self.entries() {
            data[c].push((r, v.clone()));
        }
        SparseMatrix { rows: self.cols, cols: self.rows, data }
    }

    /// `self * other`.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut data = Vec::with_capacity(self.rows);
        let mut acc: Vec<Option<Rational>> = vec![None; other.cols];
        let mut touched: Vec<usize> = Vec::new();
        for row in &self.data {
            for (k, a) in row {
                for (c, b) in &other.data[*k] {
                    let prod = a * b;
                    match &mut acc[*c] {
                        Some(v) => *v += prod,
                        slot @ None => {
                            *slot = Some(prod);
                            touched.push(*c);
                        }
                    }
                }
            }
            touched.sort_unstable();
            let mut out_row = Vec::with_capacity(touched.len());
            for c in touched.drain(..) {
                let v = acc[c].take().unwrap();
                if !v.is_zero() {
                    out_row.push((c, v));
                }
            }
            data.push(out_row);
        }
        SparseMatrix { rows: self.rows, cols: other.cols, data }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        self.data
            .iter()
            .map(|row| row.iter().fold(Rational::zero(), |acc, (c, a)| acc + a * &v[*c]))
            .collect()
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let trip = self
            .entries()
            .chain(other.entries())
            .map(|(r, c, v)| (r, c, v.clone()));
        Self::from_triplets(self.rows, self.cols, trip)
    }

    pub fn scale(&self, k: &Rational) -> SparseMatrix {
        if k.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        let data = self
            .data
            .iter()
            .map(|row| row.iter().map(|(c, v)| (*c, v * k)).collect())
            .collect();
        SparseMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> SparseMatrix {
        self.scale(&rat(-1))
    }

    /// Place `other` with its top-left corner at (r0, c0) inside a copy of `self`,
    /// adding to whatever is already there.
    pub fn add_block(&self, r0: usize, c0: usize, other: &SparseMatrix) -> SparseMatrix {
        assert!(r0 + other.rows <= self.rows && c0 + other.cols <= self.cols);
        let trip = self
            .entries()
            .map(|(r, c, v)| (r, c, v.clone()))
            .chain(other.entries().map(|(r, c, v)| (r + r0, c + c0, v.clone())));
        Self::from_triplets(self.rows, self.cols, trip)
    }

    pub fn vstack(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        SparseMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn hstack(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.rows, other.rows);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut row = a.clone();
                row.extend(b.iter().map(|(c, v)| (c + self.cols, v.clone())));
                row
            })
            .collect();
        SparseMatrix { rows: self.rows, cols: self.cols + other.cols, data }
    }

    pub fn block_diag(blocks: &[SparseMatrix]) -> SparseMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut trip = Vec::new();
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            trip.extend(b.entries().map(|(r, c, v)| (r + r0, c + c0, v.clone())));
            r0 += b.rows;
            c0 += b.cols;
        }
        Self::from_triplets(rows, cols, trip)
    }

    /// Rows selected in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> SparseMatrix {
        let data = rows.iter().map(|r| self.data[*r].clone()).collect();
        SparseMatrix { rows: rows.len(), cols: self.cols, data }
    }
}

/// Tuning for the elimination backends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EliminationConfig {
    /// Matrices with both dimensions at most this size use dense elimination.
    pub dense_threshold: usize,
}

impl Default for EliminationConfig {
    fn default() -> Self {
        EliminationConfig { dense_threshold: 64 }
    }
}

type IntRow = Vec<(usize, BigInt)>;

/// Echelon rows: each pivot row has zeros in the pivot columns of all
/// earlier pivot rows.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub cols: usize,
    pivots: Vec<(usize, IntRow)>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.iter().map(|(c, _)| *c).collect()
    }

    /// Back substitution with prescribed values on the free columns.
    fn back_substitute(&self, x: &mut [Rational]) {
        for (pc, row) in self.pivots.iter().rev() {
            let mut s = Rational::zero();
            let mut pv = None;
            for (c, a) in row {
                if c == pc {
                    pv = Some(a);
                } else if !x[*c].is_zero() {
                    s += &x[*c] * Rational::from_integer(a.clone());
                }
            }
            let pv = Rational::from_integer(pv.expect("pivot entry present").clone());
            x[*pc] = -s / pv;
        }
    }

    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let pivot_set: BTreeSet<usize> = self.pivots.iter().map(|(c, _)| *c).collect();
        (0..self.cols)
            .filter(|c| !pivot_set.contains(c))
            .map(|f| {
                let mut x = vec![Rational::zero(); self.cols];
                x[f] = Rational::one();
                self.back_substitute(&mut x);
                x
            })
            .collect()
    }
}

fn int_row(row: &[(usize, Rational)]) -> IntRow {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
    let mut out: IntRow = row
        .iter()
        .map(|(c, v)| (*c, v.numer() * (&lcm / v.denom())))
        .collect();
    remove_content(&mut out);
    out
}

fn remove_content(row: &mut IntRow) {
    let g = row.iter().fold(BigInt::zero(), |acc, (_, v)| acc.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v /= &g;
        }
    }
}

/// `ca * a - cb * b` with zeros dropped.
fn combine(a: &IntRow, ca: &BigInt, b: &IntRow, cb: &BigInt) -> IntRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push((a[i].0, ca * &a[i].1));
            i += 1;
        } else if take_b {
            out.push((b[j].0, -(cb * &b[j].1)));
            j += 1;
        } else {
            let v = ca * &a[i].1 - cb * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn entry_of(row: &IntRow, c: usize) -> Option<&BigInt> {
    row.binary_search_by_key(&c, |(cc, _)| *cc).ok().map(|i| &row[i].1)
}

fn sparse_echelon(rows: Vec<IntRow>, ncols: usize) -> Vec<(usize, IntRow)> {
    let mut active: Vec<Option<IntRow>> = rows
        .into_iter()
        .map(|r| if r.is_empty() { None } else { Some(r) })
        .collect();
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ncols];
    for (i, r) in active.iter().enumerate() {
        if let Some(r) = r {
            for (c, _) in r {
                col_rows[*c].insert(i);
            }
        }
    }
    let mut pivots = Vec::new();
    loop {
        // Markowitz cost (r_i - 1)(c_j - 1); ties broken by entry size, then position.
        let mut best: Option<(usize, u64, usize, usize)> = None;
        for (i, r) in active.iter().enumerate() {
            let Some(r) = r else { continue };
            let rl = r.len() - 1;
            for (c, v) in r {
                let cost = rl * (col_rows[*c].len() - 1);
                let bits = v.bits();
                let better = match best {
                    None => true,
                    Some((bc, bb, _, _)) => (cost, bits) < (bc, bb),
                };
                if better {
                    best = Some((cost, bits, i, *c));
                }
            }
            if matches!(best, Some((0, 1, _, _))) {
                break;
            }
        }
        let Some((_, _, pi, pc)) = best else { break };
        let prow = active[pi].take().unwrap();
        for (c, _) in &prow {
            col_rows[*c].remove(&pi);
        }
        let pv = entry_of(&prow, pc).unwrap().clone();
        let targets: Vec<usize> = col_rows[pc].iter().copied().collect();
        for ti in targets {
            let trow = active[ti].take().unwrap();
            for (c, _) in &trow {
                col_rows[*c].remove(&ti);
            }
            let tv = entry_of(&trow, pc).unwrap().clone();
            let g = pv.gcd(&tv);
            let mut nrow = combine(&trow, &(&pv / &g), &prow, &(&tv / &g));
            remove_content(&mut nrow);
            if !nrow.is_empty() {
                for (c, _) in &nrow {
                    col_rows[*c].insert(ti);
                }
                active[ti] = Some(nrow);
            }
        }
        pivots.push((pc, prow));
    }
    pivots
}

/// Bareiss elimination on a dense integer matrix with column-wise pivot search.
fn dense_echelon(rows: Vec<IntRow>, ncols: usize) -> Vec<(usize, IntRow)> {
    let mut a: Vec<Vec<BigInt>> = rows
        .into_iter()
        .map(|r| {
            let mut d = vec![BigInt::zero(); ncols];
            for (c, v) in r {
                d[c] = v;
            }
            d
        })
        .collect();
    let nrows = a.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut top = 0;
    for c in 0..ncols {
        if top == nrows {
            break;
        }
        let Some(p) = (top..nrows)
            .filter(|&r| !a[r][c].is_zero())
            .min_by_key(|&r| a[r][c].bits())
        else {
            continue;
        };
        a.swap(top, p);
        let pv = a[top][c].clone();
        for r in top + 1..nrows {
            let rv = a[r][c].clone();
            for k in c..ncols {
                let v = (&pv * &a[r][k] - &rv * &a[top][k]) / &prev;
                a[r][k] = v;
            }
        }
        prev = pv;
        let row: IntRow = a[top]
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, v)| (k, v.clone()))
            .collect();
        pivots.push((c, row));
        top += 1;
    }
    pivots
}

pub fn echelon_with(m: &SparseMatrix, cfg: &EliminationConfig) -> Echelon {
    let rows: Vec<IntRow> = m.data.iter().map(|r| int_row(r)).collect();
    let pivots = if m.rows <= cfg.dense_threshold && m.cols <= cfg.dense_threshold {
        dense_echelon(rows, m.cols)
    } else {
        sparse_echelon(rows, m.cols)
    };
    Echelon { cols: m.cols, pivots }
}

pub fn echelon(m: &SparseMatrix) -> Echelon {
    echelon_with(m, &EliminationConfig::default())
}

pub fn rank(m: &SparseMatrix) -> usize {
    echelon(m).rank()
}

pub fn rank_with(m: &SparseMatrix, cfg: &EliminationConfig) -> usize {
    echelon_with(m, cfg).rank()
}

pub fn kernel_basis(m: &SparseMatrix) -> Vec<Vec<Rational>> {
    echelon(m).kernel_basis()
}

pub fn kernel_basis_with(m: &SparseMatrix, cfg: &EliminationConfig) -> Vec<Vec<Rational>> {
    echelon_with(m, cfg).kernel_basis()
}

/// One solution of `m x = b`, or `None` if the system is inconsistent.
pub fn solve(m: &SparseMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(b.len(), m.rows);
    let rhs = SparseMatrix::from_columns(m.rows, &[b.to_vec()]);
    let ech = echelon(&m.hstack(&rhs));
    if ech.pivots.iter().any(|(c, _)| *c == m.cols) {
        return None;
    }
    let mut x = vec![Rational::zero(); m.cols + 1];
    x[m.cols] = rat(-1);
    ech.back_substitute(&mut x);
    x.truncate(m.cols);
    Some(x)
}

/// Inverse of a square matrix, or `None` if it is singular.
pub fn inverse(m: &SparseMatrix) -> Option<SparseMatrix> {
    if m.rows != m.cols || rank(m) != m.rows {
        return None;
    }
    let n = m.rows;
    let cols: Option<Vec<Vec<Rational>>> = (0..n)
        .map(|c| {
            let mut e = vec![Rational::zero(); n];
            e[c] = Rational::one();
            solve(m, &e)
        })
        .collect();
    Some(SparseMatrix::from_columns(n, &cols?))
}

/// Random invertible matrix `L U`, with small integer entries, unit lower
/// factor and upper diagonal in `{1, 2}`.
pub fn random_invertible<R: rand::Rng>(rng: &mut R, n: usize) -> SparseMatrix {
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if j < i {
                lower.push((i, j, rat(rng.gen_range(-2..=2))));
            } else if j > i {
                upper.push((i, j, rat(rng.gen_range(-2..=2))));
            } else {
                lower.push((i, i, rat(1)));
                upper.push((i, i, rat(rng.gen_range(1..=2))));
            }
        }
    }
    SparseMatrix::from_triplets(n, n, lower).mul(&SparseMatrix::from_triplets(n, n, upper))
}

/// Indices of a maximal linearly independent subset of the columns, chosen greedily
/// from the left.
pub fn independent_columns(m: &SparseMatrix) -> Vec<usize> {
    // Dense elimination scans columns left to right, which gives the greedy choice.
    let rows: Vec<IntRow> = m.data.iter().map(|r| int_row(r)).collect();
    dense_echelon(rows, m.cols).into_iter().map(|(c, _)| c).collect()
}

/// A chain of vector spaces with differentials raising the degree by one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteComplex {
    spaces: Vec<usize>,
    maps: Vec<SparseMatrix>,
}

impl FiniteComplex {
    /// `maps[p]` goes from degree p to degree p+1.
    pub fn new(spaces: Vec<usize>, maps: Vec<SparseMatrix>) -> Result<Self> {
        if maps.len() + 1 != spaces.len().max(1) {
            return Err(Error::ShapeMismatch(format!(
                "{} spaces need {} maps, got {}",
                spaces.len(),
                spaces.len().saturating_sub(1),
                maps.len()
            )));
        }
        for (p, m) in maps.iter().enumerate() {
            if m.cols() != spaces[p] || m.rows() != spaces[p + 1] {
                return Err(Error::ShapeMismatch(format!(
                    "map {p} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    spaces[p + 1],
                    spaces[p]
                )));
            }
        }
        Ok(FiniteComplex { spaces, maps })
    }

    pub fn spaces(&self) -> &[usize] {
        &self.spaces
    }

    pub fn maps(&self) -> &[SparseMatrix] {
        &self.maps
    }

    pub fn euler_characteristic(&self) -> i64 {
        alternating_sum(&self.spaces)
    }
}

pub fn alternating_sum(dims: &[usize]) -> i64 {
    dims.iter()
        .enumerate()
        .map(|(p, d)| if p % 2 == 0 { *d as i64 } else { -(*d as i64) })
        .sum()
}

pub fn cohomology_dims(c: &FiniteComplex) -> Result<Vec<usize>> {
    for (p, w) in c.maps.windows(2).enumerate() {
        if !w[1].mul(&w[0]).is_zero() {
            return Err(Error::NotComposable { degree: p });
        }
    }
    let ranks: Vec<usize> = c.maps.iter().map(rank).collect();
    Ok(c.spaces
        .iter()
        .enumerate()
        .map(|(p, dim)| {
            let out = ranks.get(p).copied().unwrap_or(0);
            let inc = if p > 0 { ranks[p - 1] } else { 0 };
            dim - out - inc
        })
        .collect())
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Absolute value of the largest numerator or denominator, in bits.
pub fn max_bits(m: &SparseMatrix) -> u64 {
    m.entries()
        .map(|(_, _, v)| v.numer().abs().bits().max(v.denom().bits()))
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: usize, cols: usize, d: &[&[i64]]) -> SparseMatrix {
        SparseMatrix::from_i64(rows, cols, d)
    }

    #[test]
    fn inverse_of_unimodular() {
        let a = m(3, 3, &[&[1, 2, 0], &[0, 1, 3], &[1, 0, 1]]);
        let inv = inverse(&a).unwrap();
        assert_eq!(a.mul(&inv), SparseMatrix::identity(3));
        assert!(inverse(&m(2, 2, &[&[1, 2], &[2, 4]])).is_none());
    }

    fn tiny() -> EliminationConfig {
        EliminationConfig { dense_threshold: 0 }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&SparseMatrix::zeros(0, 0)), 0);
        assert_eq!(rank(&SparseMatrix::identity(2)), 2);
        let p = m(2, 2, &[&[1, 2], &[2, 4]]);
        assert_eq!(rank(&p), 1);
        assert_eq!(rank_with(&p, &tiny()), 1);
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&m(1, 2, &[&[1, 1]]));
        assert_eq!(k, vec![vec![rat(-1), rat(1)]]);
        assert!(kernel_basis(&SparseMatrix::identity(3)).is_empty());
        let k = kernel_basis(&m(2, 2, &[&[1, 2], &[2, 4]]));
        assert_eq!(k.len(), 1);
        assert_eq!(&k[0][0] * rat(-1), &k[0][1] * rat(2));
    }

    #[test]
    fn rational_entries_are_cleared() {
        let a = SparseMatrix::from_triplets(
            2,
            2,
            vec![
                (0, 0, rat_frac(1, 2)),
                (0, 1, rat_frac(1, 3)),
                (1, 0, rat_frac(3, 2)),
                (1, 1, rat(1)),
            ],
        );
        assert_eq!(rank(&a), 1);
        assert_eq!(rank_with(&a, &tiny()), 1);
    }

    #[test]
    fn triplets_merge_and_drop_zeros() {
        let a = SparseMatrix::from_triplets(1, 2, vec![(0, 0, rat(1)), (0, 0, rat(-1)), (0, 1, rat(2))]);
        assert_eq!(a.nnz(), 1);
        assert_eq!(a.get(0, 1), rat(2));
    }

    #[test]
    fn solve_consistent_and_not() {
        let a = m(2, 2, &[&[1, 2], &[2, 4]]);
        let x = solve(&a, &[rat(3), rat(6)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![rat(3), rat(6)]);
        assert!(solve(&a, &[rat(3), rat(5)]).is_none());
    }

    #[test]
    fn zero_differentials_give_space_dims() {
        let c = FiniteComplex::new(vec![2, 3], vec![SparseMatrix::zeros(3, 2)]).unwrap();
        assert_eq!(cohomology_dims(&c).unwrap(), vec![2, 3]);
    }

    #[test]
    fn acyclic_two_term() {
        let c = FiniteComplex::new(vec![1, 1], vec![m(1, 1, &[&[1]])]).unwrap();
        assert_eq!(cohomology_dims(&c).unwrap(), vec![0, 0]);
    }

    // Koszul complex of k[x] truncated to degree < 3 with differential
    // multiplication by x: k{1,x,x^2} -> k{1,x,x^2}, the map sends x^i to x^{i+1}.
    // Kernel is spanned by x^2, image by x and x^2, so H^0 = 1 and H^1 = 1 (the class of 1).
    #[test]
    fn truncated_koszul_by_hand() {
        let mult = m(3, 3, &[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]);
        let c = FiniteComplex::new(vec![3, 3], vec![mult]).unwrap();
        assert_eq!(cohomology_dims(&c).unwrap(), vec![1, 1]);
    }

    #[test]
    fn composability_error_reports_degree() {
        let one = m(1, 1, &[&[1]]);
        let c = FiniteComplex::new(vec![1, 1, 1], vec![one.clone(), one]).unwrap();
        assert_eq!(cohomology_dims(&c), Err(Error::NotComposable { degree: 0 }));
    }

    #[test]
    fn shape_mismatch_rejected() {
        assert!(FiniteComplex::new(vec![1, 2], vec![SparseMatrix::zeros(1, 1)]).is_err());
    }

    fn small_matrix() -> impl Strategy<Value = SparseMatrix> {
        (0usize..7, 0usize..7).prop_flat_map(|(r, c)| {
            prop::collection::vec(
                prop_oneof![4 => Just(0i64), 3 => -3i64..=3],
                r * c,
            )
            .prop_map(move |v| {
                let trip = v
                    .into_iter()
                    .enumerate()
                    .map(|(k, x)| (k / c.max(1), k % c.max(1), rat(x)));
                SparseMatrix::from_triplets(r, c, trip)
            })
        })
    }

    proptest! {
        #[test]
        fn rank_equals_transpose_rank(a in small_matrix()) {
            prop_assert_eq!(rank(&a), rank(&a.transpose()));
            prop_assert_eq!(rank_with(&a, &tiny()), rank(&a));
        }

        #[test]
        fn kernel_is_annihilated(a in small_matrix()) {
            let ker = kernel_basis_with(&a, &tiny());
            prop_assert_eq!(ker.len(), a.cols() - rank(&a));
            for v in &ker {
                prop_assert!(is_zero_vec(&a.mul_vec(v)));
            }
            let dense_ker = kernel_basis(&a);
            prop_assert_eq!(dense_ker.len(), ker.len());
            if !ker.is_empty() {
                prop_assert_eq!(rank(&SparseMatrix::from_columns(a.cols(), &ker)), ker.len());
            }
        }

        #[test]
        fn euler_characteristic_conserved(
            a in small_matrix(),
            n2 in 0usize..5,
            bvals in prop::collection::vec(-2i64..=2, 36),
        ) {
            // Second map = B * C where the rows of C span the annihilator of im a.
            let n1 = a.rows();
            let ann = kernel_basis(&a.transpose());
            let c_rows = SparseMatrix::from_columns(n1, &ann).transpose();
            let k = c_rows.rows();
            let b = SparseMatrix::from_triplets(
                n2,
                k,
                (0..n2 * k).map(|t| (t / k.max(1), t % k.max(1), rat(bvals[t % bvals.len()]))),
            );
            let second = if k == 0 { SparseMatrix::zeros(n2, n1) } else { b.mul(&c_rows) };
            let c = FiniteComplex::new(vec![a.cols(), n1, n2], vec![a, second]).unwrap();
            let h = cohomology_dims(&c).unwrap();
            prop_assert_eq!(alternating_sum(&h), c.euler_characteristic());
        }

        #[test]
        fn product_is_associative_with_vectors(a in small_matrix()) {
            let v: Vec<Rational> = (0..a.cols()).map(|i| rat(i as i64 + 1)).collect();
            let col = SparseMatrix::from_columns(a.cols(), &[v.clone()]);
            let lhs = a.mul(&col);
            let rhs = a.mul_vec(&v);
            for (r, x) in rhs.iter().enumerate() {
                prop_assert_eq!(&lhs.get(r, 0), x);
            }
        }
    }

    #[test]
    fn sparse_backend_handles_larger_matrices() {
        // Tridiagonal 80x80 with 2 on the diagonal and -1 off it is nonsingular.
        let n = 80;
        let mut trip = Vec::new();
        for i in 0..n {
            trip.push((i, i, rat(2)));
            if i + 1 < n {
                trip.push((i, i + 1, rat(-1)));
                trip.push((i + 1, i, rat(-1)));
            }
        }
        let a = SparseMatrix::from_triplets(n, n, trip);
        assert_eq!(rank(&a), n);
        // Graph Laplacian of a path has rank n-1.
        let mut trip = Vec::new();
        for i in 0..n - 1 {
            trip.push((i, i, rat(1)));
            trip.push((i + 1, i + 1, rat(1)));
            trip.push((i, i + 1, rat(-1)));
            trip.push((i + 1, i, rat(-1)));
        }
        let l = SparseMatrix::from_triplets(n, n, trip);
        assert_eq!(rank(&l), n - 1);
        let ker = kernel_basis(&l);
        assert_eq!(ker.len(), 1);
        assert!(is_zero_vec(&l.mul_vec(&ker[0])));
    }
}
