//! Mixed complexes: graded modules over the exterior algebra on `d`
//! (degree `+1`) and `δ` (degree `-1`).
//!
//! Computed here: `d`-cohomology, the single-graded spectral sequence of the
//! Connes bicomplex and formality, cyclic cohomology as a graded
//! `k[u]`-module, decomposition into indecomposables, and spectral
//! morphisms. The sl(1|1) module arithmetic lives in [`sl11`].

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_linalg::{kernel_basis, rank, rat, solve, Rational, SparseMatrix};

pub mod graded;
pub mod sl11;

pub use graded::{GradedPair, Interchange};

pub const MIXED_HEADER: &str = "mixed-complex";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedComplex {
    space: GradedPair,
}

/// Dimensions indexed by degree, from `lo`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedDims {
    pub lo: i64,
    pub dims: Vec<usize>,
}

impl GradedDims {
    pub fn get(&self, p: i64) -> usize {
        if p < self.lo {
            return 0;
        }
        self.dims.get((p - self.lo) as usize).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.dims.iter().sum()
    }
}

fn vectors_rank(rows: usize, vectors: &[Vec<Rational>]) -> usize {
    if vectors.is_empty() || rows == 0 {
        return 0;
    }
    rank(&SparseMatrix::from_columns(rows, vectors))
}

fn columns(m: &SparseMatrix) -> Vec<Vec<Rational>> {
    let dense = m.to_dense();
    (0..m.cols()).map(|c| dense.iter().map(|row| row[c].clone()).collect()).collect()
}

impl MixedComplex {
    /// `d[k]` and `delta[k]` connect degrees `lo + k` and `lo + k + 1`.
    pub fn new(lo: i64, dims: Vec<usize>, d: Vec<SparseMatrix>, delta: Vec<SparseMatrix>) -> Result<Self> {
        Self::from_pair(GradedPair::new(lo, dims, d, delta)?)
    }

    /// Validates the three relations.
    pub fn from_pair(space: GradedPair) -> Result<Self> {
        let m = MixedComplex { space };
        m.validate()?;
        Ok(m)
    }

    pub fn zero(lo: i64, dims: Vec<usize>) -> Self {
        let n = dims.len();
        let d = (0..n.saturating_sub(1)).map(|k| SparseMatrix::zeros(dims[k + 1], dims[k])).collect();
        let delta = (0..n.saturating_sub(1)).map(|k| SparseMatrix::zeros(dims[k], dims[k + 1])).collect();
        Self::new(lo, dims, d, delta).unwrap()
    }

    pub fn space(&self) -> &GradedPair {
        &self.space
    }

    pub fn lo(&self) -> i64 {
        self.space.lo()
    }

    pub fn hi(&self) -> i64 {
        self.space.hi()
    }

    pub fn dim(&self, p: i64) -> usize {
        self.space.dim(p)
    }

    pub fn dims(&self) -> GradedDims {
        GradedDims { lo: self.lo(), dims: self.space.dims().to_vec() }
    }

    pub fn total_dim(&self) -> usize {
        self.space.total_dim()
    }

    /// Degree `p` to `p + 1`.
    pub fn d(&self, p: i64) -> SparseMatrix {
        self.space.up(p)
    }

    /// Degree `p` to `p - 1`.
    pub fn delta(&self, p: i64) -> SparseMatrix {
        self.space.down(p)
    }

    /// `d² = 0`, `δ² = 0` and `dδ + δd = 0`, reporting the first failure by
    /// source degree.
    pub fn validate(&self) -> Result<()> {
        check_relations(&self.space, |_| None)
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    pub fn direct_sum(parts: &[&MixedComplex]) -> MixedComplex {
        let spaces: Vec<&GradedPair> = parts.iter().map(|m| &m.space).collect();
        MixedComplex { space: GradedPair::direct_sum(&spaces) }
    }

    pub fn tensor(&self, other: &MixedComplex) -> MixedComplex {
        MixedComplex { space: self.space.tensor(&other.space) }
    }

    /// Change of basis by one invertible matrix per degree, from `lo`.
    pub fn conjugate(&self, g: &[SparseMatrix]) -> Result<MixedComplex> {
        Self::from_pair(self.space.conjugate(g)?)
    }

    pub fn shifted(&self, by: i64) -> MixedComplex {
        let s = &self.space;
        let n = s.dims().len().saturating_sub(1);
        let space = GradedPair::new(
            s.lo() + by,
            s.dims().to_vec(),
            (0..n).map(|k| s.up(s.lo() + k as i64)).collect(),
            (0..n).map(|k| s.down(s.lo() + k as i64 + 1)).collect(),
        )
        .unwrap();
        MixedComplex { space }
    }

    pub fn to_interchange(&self) -> Interchange {
        let s = &self.space;
        let mut blocks = graded::nonzero_blocks("d", (s.lo()..s.hi()).map(|p| (p, s.up(p))));
        blocks.extend(graded::nonzero_blocks("delta", (s.lo() + 1..=s.hi()).map(|p| (p, s.down(p)))));
        Interchange { header: MIXED_HEADER.into(), lo: s.lo(), dims: s.dims().to_vec(), blocks }
    }

    pub fn to_text(&self) -> String {
        self.to_interchange().to_text()
    }

    pub fn from_interchange(ix: &Interchange) -> Result<MixedComplex> {
        if ix.header != MIXED_HEADER {
            return Err(Error::Parse(format!("expected header `{MIXED_HEADER}`, got `{}`", ix.header)));
        }
        ix.check_names(&["d", "delta"])?;
        let n = ix.dims.len().saturating_sub(1);
        let d = (0..n).map(|k| ix.operator("d", ix.lo + k as i64, ix.lo + k as i64 + 1)).collect::<Result<_>>()?;
        let delta = (0..n).map(|k| ix.operator("delta", ix.lo + k as i64 + 1, ix.lo + k as i64)).collect::<Result<_>>()?;
        Self::new(ix.lo, ix.dims.clone(), d, delta)
    }

    pub fn parse(text: &str) -> Result<MixedComplex> {
        Self::from_interchange(&Interchange::parse(text)?)
    }
}

/// Relation check shared with sl(1|1)-modules: `up² = down² = 0` and
/// `up·down + down·up` equal to `anti(p)` (zero when `None`).
pub(crate) fn check_relations(space: &GradedPair, anti: impl Fn(i64) -> Option<SparseMatrix>) -> Result<()> {
    for p in space.lo()..=space.hi() {
        if !space.up(p + 1).mul(&space.up(p)).is_zero() {
            return Err(Error::InvalidMixedComplex { relation: "d^2 = 0", degree: p });
        }
        if !space.down(p - 1).mul(&space.down(p)).is_zero() {
            return Err(Error::InvalidMixedComplex { relation: "delta^2 = 0", degree: p });
        }
        let sum = space.down(p + 1).mul(&space.up(p)).add(&space.up(p - 1).mul(&space.down(p)));
        let expected = anti(p).unwrap_or_else(|| SparseMatrix::zeros(space.dim(p), space.dim(p)));
        if sum != expected {
            return Err(Error::InvalidMixedComplex { relation: "d delta + delta d = 0", degree: p });
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// d-cohomology and the spectral sequence

pub fn d_cohomology(m: &MixedComplex) -> GradedDims {
    let dims = (m.lo()..=m.hi())
        .map(|p| m.dim(p) - rank(&m.d(p)) - rank(&m.d(p - 1)))
        .collect();
    GradedDims { lo: m.lo(), dims }
}

/// Kernel of the zig-zag conditions `d x_0 = 0`, `δ x_{k-1} + d x_k = 0`
/// for `x_k` in degree `p - 2k`, `k < len`; each basis vector split into
/// its blocks.
fn zigzags(m: &MixedComplex, p: i64, len: usize) -> Vec<Vec<Vec<Rational>>> {
    let col_deg: Vec<i64> = (0..len).map(|k| p - 2 * k as i64).collect();
    let mut col_off = vec![0];
    for &q in &col_deg {
        col_off.push(col_off.last().unwrap() + m.dim(q));
    }
    let mut trip = Vec::new();
    let mut row = 0;
    graded::place(&mut trip, row, col_off[0], &m.d(p));
    row += m.dim(p + 1);
    for k in 1..len {
        let target = col_deg[k] + 1;
        graded::place(&mut trip, row, col_off[k - 1], &m.delta(col_deg[k - 1]));
        graded::place(&mut trip, row, col_off[k], &m.d(col_deg[k]));
        row += m.dim(target);
    }
    let cols = *col_off.last().unwrap();
    if cols == 0 {
        return Vec::new();
    }
    kernel_basis(&SparseMatrix::from_triplets(row, cols, trip))
        .into_iter()
        .map(|v| (0..len).map(|k| v[col_off[k]..col_off[k + 1]].to_vec()).collect())
        .collect()
}

/// `dim E_r^p`: classes in degree `p` that survive to page `r` (page 1 is
/// `d`-cohomology).
pub fn page_dim(m: &MixedComplex, p: i64, r: usize) -> usize {
    assert!(r >= 1);
    let dim = m.dim(p);
    if dim == 0 {
        return 0;
    }
    let cycles: Vec<Vec<Rational>> = zigzags(m, p, r).into_iter().map(|mut v| v.swap_remove(0)).collect();
    let z = vectors_rank(dim, &cycles);
    let mut boundaries = columns(&m.d(p - 1));
    if r >= 2 {
        let start = p + 2 * r as i64 - 3;
        let delta = m.delta(p + 1);
        for mut v in zigzags(m, start, r - 1) {
            let end = v.pop().unwrap();
            boundaries.push(delta.mul_vec(&end));
        }
    }
    z - vectors_rank(dim, &boundaries)
}

/// The differential `λ_r` on page `r`, of degree `1 - 2r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PageDifferential {
    pub r: usize,
    pub rank: usize,
    /// `(source degree, rank)` where nonzero.
    pub by_degree: Vec<(i64, usize)>,
}

/// Ranks of `λ_1, …, λ_{r_max}`, from the page dimensions.
pub fn higher_differentials(m: &MixedComplex, r_max: usize) -> Vec<PageDifferential> {
    let degrees: Vec<i64> = (m.lo()..=m.hi()).collect();
    let mut page: Vec<usize> = degrees.iter().map(|&p| page_dim(m, p, 1)).collect();
    let mut out = Vec::new();
    for r in 1..=r_max {
        let next: Vec<usize> = degrees.iter().map(|&p| page_dim(m, p, r + 1)).collect();
        // E_{r+1}^p = E_r^p - out(p) - out(p + 2r - 1); solve from the top.
        let step = 2 * r as i64 - 1;
        let mut outgoing: BTreeMap<i64, usize> = BTreeMap::new();
        for (k, &p) in degrees.iter().enumerate().rev() {
            let incoming = outgoing.get(&(p + step)).copied().unwrap_or(0);
            let o = page[k] - next[k] - incoming;
            if o > 0 {
                outgoing.insert(p, o);
            }
        }
        out.push(PageDifferential { r, rank: outgoing.values().sum(), by_degree: outgoing.into_iter().collect() });
        page = next;
    }
    out
}

/// Pages beyond this index carry no nonzero differential: `λ_r` lowers the
/// degree by `2r - 1`.
pub fn last_page(m: &MixedComplex) -> usize {
    ((m.hi() - m.lo()).max(0) as usize) / 2 + 1
}

pub fn is_formal(m: &MixedComplex) -> bool {
    higher_differentials(m, last_page(m)).iter().all(|l| l.rank == 0)
}

// ---------------------------------------------------------------------------
// Cyclic cohomology

/// Cyclic cohomology as a graded `k[u]`-module, `deg u = 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclicCohomology {
    /// `dim HC^n` for `n` from `lo` to `hi + 1` (constant in each parity beyond).
    pub dims: GradedDims,
    /// Degrees of the free generators.
    pub free: Vec<i64>,
    /// `(generator degree, exponent e)` for each summand `k[u]/(u^e)`.
    pub torsion: Vec<(i64, usize)>,
    /// Powers of `u` used.
    pub u_cap: usize,
}

impl CyclicCohomology {
    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn torsion_exponents(&self) -> Vec<usize> {
        let mut e: Vec<usize> = self.torsion.iter().map(|t| t.1).collect();
        e.sort();
        e
    }

    /// `dim (HC / u HC)` by degree.
    pub fn generator_dims(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for &g in self.free.iter().chain(self.torsion.iter().map(|t| &t.0)) {
            *out.entry(g).or_default() += 1;
        }
        out
    }
}

/// Powers of `u` needed to certify the module structure.
pub fn required_u_cap(m: &MixedComplex) -> usize {
    ((m.hi() + 2 - m.lo()).max(0) as usize) / 2
}

/// The total complex `C[u]` in degree `n`: columns `u^k C^{n-2k}`.
struct ConnesDegree {
    columns: Vec<(usize, i64, usize)>, // (k, degree of C, offset)
    size: usize,
}

fn connes_degree(m: &MixedComplex, n: i64) -> ConnesDegree {
    let mut columns = Vec::new();
    let mut size = 0;
    let mut k = 0usize;
    loop {
        let q = n - 2 * k as i64;
        if q < m.lo() {
            break;
        }
        if q <= m.hi() && m.dim(q) > 0 {
            columns.push((k, q, size));
            size += m.dim(q);
        }
        k += 1;
    }
    ConnesDegree { columns, size }
}

/// `D = d + uδ` from degree `n` to `n + 1`.
fn connes_differential(m: &MixedComplex, n: i64) -> SparseMatrix {
    let src = connes_degree(m, n);
    let dst = connes_degree(m, n + 1);
    let at: HashMap<usize, usize> = dst.columns.iter().map(|&(k, _, off)| (k, off)).collect();
    let mut trip = Vec::new();
    for &(k, q, off) in &src.columns {
        if let Some(&t) = at.get(&k) {
            graded::place(&mut trip, t, off, &m.d(q));
        }
        if let Some(&t) = at.get(&(k + 1)) {
            graded::place(&mut trip, t, off, &m.delta(q));
        }
    }
    SparseMatrix::from_triplets(dst.size, src.size, trip)
}

/// Multiplication by `u^j` from degree `n` to `n + 2j`.
fn connes_shift(m: &MixedComplex, n: i64, j: usize) -> SparseMatrix {
    let src = connes_degree(m, n);
    let dst = connes_degree(m, n + 2 * j as i64);
    let at: HashMap<usize, usize> = dst.columns.iter().map(|&(k, _, off)| (k, off)).collect();
    let mut trip = Vec::new();
    for &(k, q, off) in &src.columns {
        let t = at[&(k + j)];
        for i in 0..m.dim(q) {
            trip.push((t + i, off + i, Rational::one()));
        }
    }
    SparseMatrix::from_triplets(dst.size, src.size, trip)
}

struct ConnesHomology<'a> {
    m: &'a MixedComplex,
    cycles: BTreeMap<i64, Vec<Vec<Rational>>>,
    boundaries: BTreeMap<i64, Vec<Vec<Rational>>>,
    size: BTreeMap<i64, usize>,
}

impl<'a> ConnesHomology<'a> {
    fn new(m: &'a MixedComplex, lo: i64, hi: i64) -> Self {
        let mut cycles = BTreeMap::new();
        let mut boundaries = BTreeMap::new();
        let mut size = BTreeMap::new();
        for n in lo..=hi {
            let s = connes_degree(m, n).size;
            size.insert(n, s);
            cycles.insert(n, if s == 0 { Vec::new() } else { kernel_basis(&connes_differential(m, n)) });
            boundaries.insert(n, columns(&connes_differential(m, n - 1)));
        }
        ConnesHomology { m, cycles, boundaries, size }
    }

    fn dim(&self, n: i64) -> usize {
        let s = self.size[&n];
        self.cycles[&n].len() - vectors_rank(s, &self.boundaries[&n])
    }

    /// Rank of `u^j : HC^n -> HC^{n+2j}`.
    fn u_rank(&self, n: i64, j: usize) -> usize {
        let target = n + 2 * j as i64;
        if !self.size.contains_key(&n) || !self.size.contains_key(&target) {
            return 0;
        }
        let s = self.size[&target];
        let shift = connes_shift(self.m, n, j);
        let b = &self.boundaries[&target];
        let mut all = b.clone();
        all.extend(self.cycles[&n].iter().map(|z| shift.mul_vec(z)));
        vectors_rank(s, &all) - vectors_rank(s, b)
    }
}

/// `HC` of the Connes bicomplex. The structure is read off degrees
/// `lo ..= hi + 1`: from degree `hi` on, `u` is an isomorphism, so every
/// generator lives below `hi + 2` and every torsion class dies before
/// reaching degree `hi`.
pub fn cyclic_cohomology(m: &MixedComplex, u_cap: usize) -> Result<CyclicCohomology> {
    let needed = required_u_cap(m);
    if u_cap < needed {
        return Err(Error::CapTooSmall { needed });
    }
    if m.total_dim() == 0 {
        return Ok(CyclicCohomology { dims: GradedDims { lo: 0, dims: Vec::new() }, free: Vec::new(), torsion: Vec::new(), u_cap });
    }
    let (lo, top) = (m.lo(), m.hi() + 1);
    let h = ConnesHomology::new(m, lo, top);
    // Rank of u^j from degree n, continued past `top` by stability.
    let u_rank = |n: i64, j: usize| -> usize {
        if n < lo {
            return 0;
        }
        let mut j = j;
        while n + 2 * j as i64 > top {
            j -= 1;
        }
        h.u_rank(n, j)
    };
    // Summands generated in degree n of length at least e.
    let at_least = |n: i64, e: usize| u_rank(n, e - 1) - u_rank(n - 2, e);
    let e_max = ((top - lo) as usize) / 2 + 2;
    let mut free = Vec::new();
    let mut torsion = Vec::new();
    for n in lo..=top {
        for e in 1..=e_max {
            for _ in 0..at_least(n, e) - at_least(n, e + 1) {
                torsion.push((n, e));
            }
        }
        for _ in 0..at_least(n, e_max + 1) {
            free.push(n);
        }
    }
    let dims = GradedDims { lo, dims: (lo..=top).map(|n| h.dim(n)).collect() };
    Ok(CyclicCohomology { dims, free, torsion, u_cap })
}

/// Whether `(C[u, u^{-1}], d + uδ)` is acyclic. Its degree-`n` part is the
/// even or odd part of `C` with differential `d + δ`, so acyclicity means
/// `rank(d + δ) = dim C / 2` on the total space.
pub fn periodic_acyclic(m: &MixedComplex) -> bool {
    periodic_rank(m, &Rational::one()) * 2 == m.total_dim()
}

/// Rank of `d + uδ` on the total space at a scalar `u`.
pub fn periodic_rank(m: &MixedComplex, u: &Rational) -> usize {
    let (d, delta) = m.space.total_operators();
    rank(&d.add(&delta.scale(u)))
}

// ---------------------------------------------------------------------------
// Indecomposables

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Arrow {
    D,
    Delta,
}

impl Arrow {
    fn name(self) -> &'static str {
        match self {
            Arrow::D => "d",
            Arrow::Delta => "delta",
        }
    }

    fn flip(self) -> Arrow {
        match self {
            Arrow::D => Arrow::Delta,
            Arrow::Delta => Arrow::D,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum IndecompKind {
    /// The free module of rank one.
    Diamond,
    /// String module with first arrow `first` and last arrow `last`;
    /// `2n` vertices when they agree, `2n - 1` otherwise. The one-dimensional
    /// module is `Zigzag { n: 1, first: D, last: Delta }`.
    Zigzag { n: usize, first: Arrow, last: Arrow },
}

impl IndecompKind {
    pub fn zigzag(n: usize, first: Arrow, last: Arrow) -> Result<IndecompKind> {
        if n == 0 {
            return Err(Error::UnknownLabel("zig-zag with n = 0".into()));
        }
        // k has no arrows; one name for it.
        if n == 1 && first == Arrow::Delta && last == Arrow::D {
            return Ok(IndecompKind::Zigzag { n: 1, first: Arrow::D, last: Arrow::Delta });
        }
        Ok(IndecompKind::Zigzag { n, first, last })
    }

    /// Number of vertices (the dimension).
    pub fn dim(&self) -> usize {
        match *self {
            IndecompKind::Diamond => 4,
            IndecompKind::Zigzag { n, first, last } => {
                if first == last {
                    2 * n
                } else {
                    2 * n - 1
                }
            }
        }
    }

    /// Number of degrees spanned.
    pub fn span(&self) -> usize {
        match self {
            IndecompKind::Diamond => 3,
            z => z.dim(),
        }
    }

    /// Whether `HC` is a free `k[u]`-module of rank one (zig-zags with
    /// different end arrows, including `k`).
    pub fn has_free_cyclic_cohomology(&self) -> bool {
        matches!(self, IndecompKind::Zigzag { first, last, .. } if first != last)
    }

    /// The only non-formal kind: `F_n(δ, δ)`.
    pub fn is_delta_delta(&self) -> bool {
        matches!(self, IndecompKind::Zigzag { first: Arrow::Delta, last: Arrow::Delta, .. })
    }

    /// All kinds spanning at most `span` degrees.
    pub fn all_up_to_span(span: usize) -> Vec<IndecompKind> {
        let mut out = Vec::new();
        if span >= 3 {
            out.push(IndecompKind::Diamond);
        }
        for len in 1..=span {
            if len % 2 == 0 {
                for a in [Arrow::D, Arrow::Delta] {
                    out.push(IndecompKind::Zigzag { n: len / 2, first: a, last: a });
                }
            } else if len == 1 {
                out.push(IndecompKind::Zigzag { n: 1, first: Arrow::D, last: Arrow::Delta });
            } else {
                for a in [Arrow::D, Arrow::Delta] {
                    out.push(IndecompKind::Zigzag { n: (len + 1) / 2, first: a, last: a.flip() });
                }
            }
        }
        out
    }
}

/// An indecomposable placed with its lowest vertex in degree `offset`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct IndecompLabel {
    pub kind: IndecompKind,
    pub offset: i64,
}

impl fmt::Display for IndecompKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndecompKind::Diamond => write!(f, "D"),
            IndecompKind::Zigzag { n, first, last } => write!(f, "F_{n}({},{})", first.name(), last.name()),
        }
    }
}

impl fmt::Display for IndecompLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.kind, self.offset)
    }
}

impl IndecompLabel {
    pub fn new(kind: IndecompKind, offset: i64) -> Self {
        IndecompLabel { kind, offset }
    }

    /// The module with the standard basis: vertices `v_1, …, v_N` in
    /// increasing degree for zig-zags; `v_1 | v_0, v_3 | v_2` for the diamond
    /// with `d v_0 = v_2`, `δ v_0 = v_1`, `d v_1 = -v_3`, `δ v_2 = v_3`.
    pub fn module(&self) -> MixedComplex {
        let o = self.offset;
        match self.kind {
            IndecompKind::Diamond => MixedComplex::new(
                o,
                vec![1, 2, 1],
                vec![SparseMatrix::from_i64(2, 1, &[&[0], &[-1]]), SparseMatrix::from_i64(1, 2, &[&[1, 0]])],
                vec![SparseMatrix::from_i64(1, 2, &[&[1, 0]]), SparseMatrix::from_i64(2, 1, &[&[0], &[1]])],
            )
            .expect("diamond relations"),
            IndecompKind::Zigzag { first, .. } => {
                let len = self.kind.dim();
                let one = SparseMatrix::identity(1);
                let zero = SparseMatrix::zeros(1, 1);
                // Arrow k joins v_{k+1} and v_{k+2}; arrows alternate from `first`.
                let arrow = |k: usize| if k % 2 == 0 { first } else { first.flip() };
                let d = (0..len - 1).map(|k| if arrow(k) == Arrow::D { one.clone() } else { zero.clone() }).collect();
                let delta = (0..len - 1).map(|k| if arrow(k) == Arrow::Delta { one.clone() } else { zero.clone() }).collect();
                MixedComplex::new(o, vec![1; len], d, delta).expect("zig-zag relations")
            }
        }
    }
}

/// `dim Hom(A, B)` in graded mixed complexes.
pub fn hom_dim(a: &MixedComplex, b: &MixedComplex) -> usize {
    let lo = a.lo().max(b.lo());
    let hi = a.hi().min(b.hi());
    if lo > hi {
        return 0;
    }
    // Unknown f_p : A^p -> B^p, row-major.
    let mut off = BTreeMap::new();
    let mut unknowns = 0;
    for p in lo..=hi {
        off.insert(p, unknowns);
        unknowns += a.dim(p) * b.dim(p);
    }
    if unknowns == 0 {
        return 0;
    }
    let var = |p: i64, i: usize, j: usize| off.get(&p).map(|o| o + i * a.dim(p) + j);
    let mut trip = Vec::new();
    let mut row = 0;
    // f_{p+s} x_A - x_B f_p = 0 for x = d (s = 1) and x = δ (s = -1).
    for p in lo - 1..=hi + 1 {
        for s in [1i64, -1] {
            let (xa, xb) = if s == 1 { (a.d(p), b.d(p)) } else { (a.delta(p), b.delta(p)) };
            let q = p + s;
            let (rows, cols) = (b.dim(q), a.dim(p));
            let xa = xa.to_dense();
            let xb = xb.to_dense();
            for i in 0..rows {
                for j in 0..cols {
                    for (k, row_a) in xa.iter().enumerate() {
                        if !row_a[j].is_zero() {
                            if let Some(v) = var(q, i, k) {
                                trip.push((row, v, row_a[j].clone()));
                            }
                        }
                    }
                    for l in 0..b.dim(p) {
                        if !xb[i][l].is_zero() {
                            if let Some(v) = var(p, l, j) {
                                trip.push((row, v, -xb[i][l].clone()));
                            }
                        }
                    }
                    row += 1;
                }
            }
        }
    }
    unknowns - rank(&SparseMatrix::from_triplets(row, unknowns, trip))
}

fn hom_between(y: &IndecompLabel, x: &IndecompLabel) -> usize {
    static CACHE: OnceLock<Mutex<HashMap<(IndecompKind, IndecompKind, i64), usize>>> = OnceLock::new();
    let key = (y.kind, x.kind, x.offset - y.offset);
    let cache = CACHE.get_or_init(Default::default);
    if let Some(&v) = cache.lock().unwrap().get(&key) {
        return v;
    }
    let v = hom_dim(&IndecompLabel::new(y.kind, 0).module(), &IndecompLabel::new(x.kind, key.2).module());
    cache.lock().unwrap().insert(key, v);
    v
}

/// Indecomposables supported in `lo ..= hi`.
pub fn indecomposables_in(lo: i64, hi: i64) -> Vec<IndecompLabel> {
    if hi < lo {
        return Vec::new();
    }
    let span = (hi - lo + 1) as usize;
    let mut out = Vec::new();
    for kind in IndecompKind::all_up_to_span(span) {
        for offset in lo..=hi + 1 - kind.span() as i64 {
            out.push(IndecompLabel::new(kind, offset));
        }
    }
    out
}

/// Multiset of indecomposable summands, sorted.
///
/// Graded modules supported in `lo ..= hi` are the modules of a
/// finite-dimensional algebra whose indecomposables are the labels fitting
/// in that range, so a module is determined by the numbers
/// `dim Hom(Y, M)` over those labels `Y`. Multiplicities solve
/// `Σ_X m_X dim Hom(Y, X) = dim Hom(Y, M)`; the solution is certified to be
/// unique, non-negative and integral, and to account for every dimension.
pub fn decompose(m: &MixedComplex) -> Result<Vec<IndecompLabel>> {
    if m.total_dim() == 0 {
        return Ok(Vec::new());
    }
    let tests = indecomposables_in(m.lo(), m.hi());
    let summands: Vec<IndecompLabel> = tests
        .iter()
        .copied()
        .filter(|x| {
            let module = x.module();
            (x.offset..x.offset + x.kind.span() as i64).all(|p| module.dim(p) <= m.dim(p))
        })
        .collect();
    let rhs: Vec<Rational> = tests.iter().map(|y| rat(hom_dim(&y.module(), m) as i64)).collect();
    let mut trip = Vec::new();
    for (r, y) in tests.iter().enumerate() {
        for (c, x) in summands.iter().enumerate() {
            let v = hom_between(y, x);
            if v > 0 {
                trip.push((r, c, rat(v as i64)));
            }
        }
    }
    let system = SparseMatrix::from_triplets(tests.len(), summands.len(), trip);
    if rank(&system) != summands.len() {
        return Err(Error::DecompositionFailure("Hom dimensions do not separate the candidate summands".into()));
    }
    let mult = solve(&system, &rhs).ok_or_else(|| Error::DecompositionFailure("Hom dimensions are inconsistent".into()))?;
    let mut out = Vec::new();
    for (x, c) in summands.iter().zip(&mult) {
        if !c.is_integer() || c.is_negative() {
            return Err(Error::DecompositionFailure(format!("multiplicity {c} for {x}")));
        }
        let count: usize = c.to_integer().try_into().unwrap();
        out.extend(std::iter::repeat(*x).take(count));
    }
    for p in m.lo()..=m.hi() {
        let total: usize = out.iter().map(|x| x.module().dim(p)).sum();
        if total != m.dim(p) {
            return Err(Error::DecompositionFailure(format!("degree {p}: summands give {total}, module has {}", m.dim(p))));
        }
    }
    out.sort();
    Ok(out)
}

// ---------------------------------------------------------------------------
// Spectral morphisms

/// A degree-preserving map `f_p : C_1^p -> C_2^p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedMorphism {
    pub source: MixedComplex,
    pub target: MixedComplex,
    maps: BTreeMap<i64, SparseMatrix>,
}

impl MixedMorphism {
    /// Missing degrees are zero. Checks sizes and that `f` commutes with `d`
    /// and `δ`.
    pub fn new(source: MixedComplex, target: MixedComplex, maps: BTreeMap<i64, SparseMatrix>) -> Result<Self> {
        for (&p, f) in &maps {
            if (f.rows(), f.cols()) != (target.dim(p), source.dim(p)) {
                return Err(Error::NotAMorphism(format!("degree {p}: {}x{} map between dimensions {} and {}", f.rows(), f.cols(), source.dim(p), target.dim(p))));
            }
        }
        let f = MixedMorphism { source, target, maps };
        let lo = f.source.lo().min(f.target.lo());
        let hi = f.source.hi().max(f.target.hi());
        for p in lo..=hi {
            if f.at(p + 1).mul(&f.source.d(p)) != f.target.d(p).mul(&f.at(p)) {
                return Err(Error::NotAMorphism(format!("does not commute with d from degree {p}")));
            }
            if f.at(p - 1).mul(&f.source.delta(p)) != f.target.delta(p).mul(&f.at(p)) {
                return Err(Error::NotAMorphism(format!("does not commute with delta from degree {p}")));
            }
        }
        Ok(f)
    }

    pub fn identity(m: &MixedComplex) -> Self {
        let maps = (m.lo()..=m.hi()).map(|p| (p, SparseMatrix::identity(m.dim(p)))).collect();
        MixedMorphism { source: m.clone(), target: m.clone(), maps }
    }

    pub fn at(&self, p: i64) -> SparseMatrix {
        self.maps.get(&p).cloned().unwrap_or_else(|| SparseMatrix::zeros(self.target.dim(p), self.source.dim(p)))
    }

    /// `Cone^p = C_1^{p+1} ⊕ C_2^p` with `d = [[-d_1, 0], [f, d_2]]` and
    /// `δ = [[-δ_1, 0], [0, δ_2]]`.
    pub fn cone(&self) -> MixedComplex {
        let (s, t) = (&self.source, &self.target);
        if s.total_dim() + t.total_dim() == 0 {
            return MixedComplex::zero(0, Vec::new());
        }
        let lo = (s.lo() - 1).min(t.lo());
        let hi = (s.hi() - 1).max(t.hi());
        let dims: Vec<usize> = (lo..=hi).map(|p| s.dim(p + 1) + t.dim(p)).collect();
        let block = |p: i64, q: i64, a: SparseMatrix, f: Option<SparseMatrix>, b: SparseMatrix| {
            let mut trip = Vec::new();
            graded::place(&mut trip, 0, 0, &a.neg());
            if let Some(f) = f {
                graded::place(&mut trip, s.dim(q + 1), 0, &f);
            }
            graded::place(&mut trip, s.dim(q + 1), s.dim(p + 1), &b);
            SparseMatrix::from_triplets(s.dim(q + 1) + t.dim(q), s.dim(p + 1) + t.dim(p), trip)
        };
        let space = GradedPair::from_fn(
            lo,
            dims,
            |p| block(p, p + 1, s.d(p + 1), Some(self.at(p + 1)), t.d(p)),
            |p| block(p + 1, p, s.delta(p + 2), None, t.delta(p + 1)),
        )
        .unwrap();
        MixedComplex::from_pair(space).expect("cone of a morphism is a mixed complex")
    }
}

/// A morphism is spectral when it becomes a quasi-isomorphism after
/// inverting `u`, i.e. when its cone has pure torsion cyclic cohomology: no
/// cone summand is a zig-zag with different end arrows.
pub fn is_spectral(f: &MixedMorphism) -> Result<bool> {
    Ok(decompose(&f.cone())?.iter().all(|x| !x.kind.has_free_cyclic_cohomology()))
}

/// The three formality verdicts: page differentials, freeness of `HC`, and
/// absence of `F_n(δ, δ)` summands.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormalityVerdicts {
    pub spectral_sequence: bool,
    pub cyclic_free: bool,
    pub no_delta_delta: bool,
}

impl FormalityVerdicts {
    pub fn agree(&self) -> bool {
        self.spectral_sequence == self.cyclic_free && self.cyclic_free == self.no_delta_delta
    }
}

pub fn formality_verdicts(m: &MixedComplex) -> Result<FormalityVerdicts> {
    Ok(FormalityVerdicts {
        spectral_sequence: is_formal(m),
        cyclic_free: cyclic_cohomology(m, required_u_cap(m))?.is_free(),
        no_delta_delta: decompose(m)?.iter().all(|x| !x.kind.is_delta_delta()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::{random_invertible, rat_frac};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn zz(n: usize, a: Arrow, b: Arrow) -> MixedComplex {
        IndecompLabel::new(IndecompKind::zigzag(n, a, b).unwrap(), 0).module()
    }

    fn diamond() -> MixedComplex {
        IndecompLabel::new(IndecompKind::Diamond, 0).module()
    }

    fn k() -> MixedComplex {
        MixedComplex::zero(0, vec![1])
    }

    use Arrow::{Delta, D};

    fn scramble(m: &MixedComplex, rng: &mut ChaCha8Rng) -> MixedComplex {
        let g: Vec<SparseMatrix> = m.space().dims().iter().map(|&d| random_invertible(rng, d)).collect();
        m.conjugate(&g).unwrap()
    }

    #[test]
    fn zero_differentials_are_valid() {
        assert!(MixedComplex::zero(-1, vec![2, 0, 3]).is_valid());
    }

    #[test]
    fn diamond_needs_its_sign() {
        assert!(diamond().is_valid());
        let bad = MixedComplex::new(
            0,
            vec![1, 2, 1],
            vec![SparseMatrix::from_i64(2, 1, &[&[0], &[1]]), SparseMatrix::from_i64(1, 2, &[&[1, 0]])],
            vec![SparseMatrix::from_i64(1, 2, &[&[1, 0]]), SparseMatrix::from_i64(2, 1, &[&[0], &[1]])],
        );
        assert!(matches!(bad, Err(Error::InvalidMixedComplex { relation: "d delta + delta d = 0", degree: 1 })));
    }

    #[test]
    fn d_cohomology_of_indecomposables() {
        assert_eq!(d_cohomology(&diamond()).total(), 0);
        for n in 1..=4 {
            let h = d_cohomology(&zz(n, D, Delta));
            assert_eq!(h.total(), 1);
            // The class sits at the last vertex.
            assert_eq!(h.get(2 * n as i64 - 2), 1);
            let h = d_cohomology(&zz(n, Delta, Delta));
            assert_eq!((h.total(), h.get(0), h.get(2 * n as i64 - 1)), (2, 1, 1));
            assert_eq!(d_cohomology(&zz(n, D, D)).total(), 0);
            let h = d_cohomology(&zz(n, Delta, D));
            assert_eq!((h.total(), h.get(0)), (1, 1));
        }
    }

    #[test]
    fn delta_delta_has_one_page_differential() {
        for n in 1..=4 {
            let ranks: Vec<usize> = higher_differentials(&zz(n, Delta, Delta), 5).iter().map(|l| l.rank).collect();
            let expected: Vec<usize> = (1..=5).map(|r| usize::from(r == n)).collect();
            assert_eq!(ranks, expected, "n = {n}");
            let l = &higher_differentials(&zz(n, Delta, Delta), n)[n - 1];
            assert_eq!(l.by_degree, vec![(2 * n as i64 - 1, 1)]);
        }
    }

    #[test]
    fn block_sum_has_two_page_differentials() {
        let m = MixedComplex::direct_sum(&[&zz(1, Delta, Delta), &zz(2, Delta, Delta)]);
        let ranks: Vec<usize> = higher_differentials(&m, 3).iter().map(|l| l.rank).collect();
        assert_eq!(ranks, vec![1, 1, 0]);
    }

    #[test]
    fn formality_of_indecomposables() {
        assert!(is_formal(&diamond()));
        assert!(is_formal(&k()));
        for n in 1..=4 {
            assert!(!is_formal(&zz(n, Delta, Delta)));
            assert!(is_formal(&zz(n, D, Delta)) && is_formal(&zz(n, Delta, D)) && is_formal(&zz(n, D, D)));
        }
    }

    #[test]
    fn cyclic_cohomology_examples() {
        let hc = cyclic_cohomology(&k(), 1).unwrap();
        assert_eq!((hc.free.clone(), hc.torsion.clone()), (vec![0], vec![]));
        for n in 1..=4 {
            let m = zz(n, Delta, Delta);
            let hc = cyclic_cohomology(&m, required_u_cap(&m)).unwrap();
            assert!(hc.free.is_empty());
            assert_eq!(hc.torsion, vec![(0, n)], "HC(F_{n}(δ,δ)) = k[u]/(u^n)·[v_1]");
            let m = zz(n, D, Delta);
            let hc = cyclic_cohomology(&m, required_u_cap(&m)).unwrap();
            assert_eq!((hc.free.clone(), hc.torsion.len()), (vec![2 * n as i64 - 2], 0));
            let m = zz(n, Delta, D);
            assert_eq!(cyclic_cohomology(&m, 10).unwrap().free, vec![0]);
            let m = zz(n, D, D);
            let hc = cyclic_cohomology(&m, 10).unwrap();
            assert!(hc.free.is_empty() && hc.torsion.is_empty());
        }
        let hc = cyclic_cohomology(&diamond(), 4).unwrap();
        assert!(hc.free.is_empty() && hc.torsion.is_empty());
    }

    #[test]
    fn cyclic_cohomology_needs_enough_columns() {
        let m = zz(3, Delta, Delta);
        assert_eq!(cyclic_cohomology(&m, 1), Err(Error::CapTooSmall { needed: 3 }));
    }

    #[test]
    fn decompose_indecomposables() {
        for label in indecomposables_in(-1, 4) {
            assert_eq!(decompose(&label.module()).unwrap(), vec![label]);
        }
    }

    #[test]
    fn decompose_block_sum() {
        let m = MixedComplex::direct_sum(&[&diamond(), &zz(2, Delta, Delta).shifted(1)]);
        let got = decompose(&m).unwrap();
        assert_eq!(
            got,
            vec![IndecompLabel::new(IndecompKind::Diamond, 0), IndecompLabel::new(IndecompKind::zigzag(2, Delta, Delta).unwrap(), 1)]
        );
    }

    #[test]
    fn decompose_after_basis_change() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = MixedComplex::direct_sum(&[&zz(3, D, Delta), &zz(3, D, Delta), &diamond().shifted(2)]);
        let scrambled = scramble(&m, &mut rng);
        assert_ne!(scrambled, m);
        assert_eq!(decompose(&scrambled).unwrap(), decompose(&m).unwrap());
        let single = scramble(&zz(3, D, Delta), &mut rng);
        assert_eq!(decompose(&single).unwrap(), vec![IndecompLabel::new(IndecompKind::zigzag(3, D, Delta).unwrap(), 0)]);
    }

    #[test]
    fn spectral_morphisms() {
        assert!(is_spectral(&MixedMorphism::identity(&k())).unwrap());
        assert!(is_spectral(&MixedMorphism::identity(&zz(2, Delta, D))).unwrap());
        let zero = MixedMorphism::new(k(), k(), BTreeMap::new()).unwrap();
        assert!(!is_spectral(&zero).unwrap());
        // The image of δ in F_1(δ,δ) is the bottom vertex.
        let target = zz(1, Delta, Delta);
        let inclusion = MixedMorphism::new(k(), target, BTreeMap::from([(0, SparseMatrix::identity(1))])).unwrap();
        let verdict = is_spectral(&inclusion).unwrap();
        // Cross-check: over k(u) the cone is acyclic iff d + uδ has half rank.
        let cone = inclusion.cone();
        let generic = (1..=cone.total_dim() as i64 + 1).map(|u| periodic_rank(&cone, &rat(u))).max().unwrap();
        assert_eq!(verdict, generic * 2 == cone.total_dim());
        assert!(!verdict);
    }

    #[test]
    fn non_morphism_is_rejected() {
        // k at degree 0 into F_1(d,d) hitting the source of d does not commute.
        let target = zz(1, D, D);
        let f = MixedMorphism::new(k(), target, BTreeMap::from([(0, SparseMatrix::identity(1))]));
        assert!(matches!(f, Err(Error::NotAMorphism(_))));
    }

    #[test]
    fn interchange_round_trip() {
        let m = MixedComplex::direct_sum(&[&diamond(), &zz(2, Delta, D).shifted(-1)]);
        let again = MixedComplex::parse(&m.to_text()).unwrap();
        assert_eq!(again, m);
        let scaled = m.conjugate(&[SparseMatrix::identity(1), SparseMatrix::identity(2), SparseMatrix::from_dense(3, 3, &[
            vec![rat_frac(1, 2), rat(0), rat(0)],
            vec![rat(0), rat(1), rat(0)],
            vec![rat(0), rat(1), rat(1)],
        ]), SparseMatrix::identity(1)]).unwrap();
        assert_eq!(MixedComplex::parse(&scaled.to_text()).unwrap(), scaled);
    }

    fn formal_kind(rng: &mut ChaCha8Rng) -> MixedComplex {
        match rng.gen_range(0..4) {
            0 => diamond(),
            1 => zz(rng.gen_range(1..=2), D, Delta),
            2 => zz(rng.gen_range(1..=2), Delta, D),
            _ => zz(1, D, D),
        }
        .shifted(rng.gen_range(-1..=1))
    }

    #[test]
    fn tensor_of_formal_is_formal() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..6 {
            let a = MixedComplex::direct_sum(&[&formal_kind(&mut rng), &formal_kind(&mut rng)]);
            let b = formal_kind(&mut rng);
            let t = a.tensor(&b);
            assert!(t.is_valid());
            let v = formality_verdicts(&t).unwrap();
            assert!(v.spectral_sequence && v.agree(), "{v:?}");
        }
    }

    #[test]
    fn formal_d_cohomology_is_hc_mod_u() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let m = MixedComplex::direct_sum(&[&formal_kind(&mut rng), &formal_kind(&mut rng), &formal_kind(&mut rng)]);
            let hc = cyclic_cohomology(&m, required_u_cap(&m)).unwrap();
            let h = d_cohomology(&m);
            let gens = hc.generator_dims();
            for p in m.lo()..=m.hi() + 1 {
                assert_eq!(h.get(p), gens.get(&p).copied().unwrap_or(0), "degree {p}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn verdicts_agree_and_decomposition_is_exact(seed in any::<u64>(), parts in 1usize..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let kinds = IndecompKind::all_up_to_span(5);
            let pieces: Vec<MixedComplex> = (0..parts)
                .map(|_| IndecompLabel::new(kinds[rng.gen_range(0..kinds.len())], rng.gen_range(-1..=1)).module())
                .collect();
            let refs: Vec<&MixedComplex> = pieces.iter().collect();
            let m = scramble(&MixedComplex::direct_sum(&refs), &mut rng);
            let v = formality_verdicts(&m).unwrap();
            prop_assert!(v.agree(), "{:?}", v);
            let parts = decompose(&m).unwrap();
            let modules: Vec<MixedComplex> = parts.iter().map(|x| x.module()).collect();
            let sum = MixedComplex::direct_sum(&modules.iter().collect::<Vec<_>>());
            prop_assert_eq!(sum.dims(), m.dims());
        }
    }
}
