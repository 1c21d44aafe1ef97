//! Shuffles, parabolic shapes, weights, roots and sectors.
//!
//! Indices are 0-based internally; the text forms and `Display` use 1-based
//! permutations. Weights are flat integer vectors with one coordinate per
//! basis vector of the underlying superspace, blocks laid out in index order
//! (even blocks first, then odd blocks).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Weight = Vec<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(b: u8) -> Self {
        if b % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn add(self, other: Parity) -> Parity {
        Parity::from_bit(self.bit() + other.bit())
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }
}

/// An (M,N)-shuffle: a permutation of M+N indices increasing on the first M
/// and on the last N. `pos[i]` is the position of index i.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Shuffle {
    m: usize,
    n: usize,
    pos: Vec<usize>,
}

impl Shuffle {
    /// `positions` is 0-based.
    pub fn new(m: usize, n: usize, positions: Vec<usize>) -> Result<Self> {
        let bad = || Error::NotAShuffle { perm: positions.iter().map(|p| p + 1).collect(), m, n };
        if positions.len() != m + n {
            return Err(bad());
        }
        let mut seen = vec![false; m + n];
        for &p in &positions {
            if p >= m + n || seen[p] {
                return Err(bad());
            }
            seen[p] = true;
        }
        let increasing = |s: &[usize]| s.windows(2).all(|w| w[0] < w[1]);
        if !increasing(&positions[..m]) || !increasing(&positions[m..]) {
            return Err(bad());
        }
        Ok(Shuffle { m, n, pos: positions })
    }

    /// 1-based one-line notation.
    pub fn from_one_based(m: usize, n: usize, perm: &[usize]) -> Result<Self> {
        if perm.iter().any(|&p| p == 0) {
            return Err(Error::NotAShuffle { perm: perm.to_vec(), m, n });
        }
        Self::new(m, n, perm.iter().map(|p| p - 1).collect())
    }

    pub fn parse(text: &str, m: usize, n: usize) -> Result<Self> {
        let perm = parse_list(text)?;
        Self::from_one_based(m, n, &perm)
    }

    pub fn identity(m: usize, n: usize) -> Self {
        Shuffle { m, n, pos: (0..m + n).collect() }
    }

    /// The alternating (N,N)-shuffle whose positions read 1, N+1, 2, N+2, ...
    pub fn alternating(n: usize) -> Self {
        let pos = (0..n).map(|i| 2 * i).chain((0..n).map(|k| 2 * k + 1)).collect();
        Shuffle { m: n, n, pos }
    }

    /// All (M,N)-shuffles in lexicographic order of their one-line notation.
    pub fn all(m: usize, n: usize) -> Vec<Shuffle> {
        let mut out = Vec::new();
        // Choose the positions of the first M indices.
        fn rec(start: usize, total: usize, left: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if left == 0 {
                out.push(acc.clone());
                return;
            }
            for p in start..=total - left {
                acc.push(p);
                rec(p + 1, total, left - 1, acc, out);
                acc.pop();
            }
        }
        let mut sets = Vec::new();
        rec(0, m + n, m, &mut Vec::new(), &mut sets);
        for first in sets {
            let rest: Vec<usize> = (0..m + n).filter(|p| !first.contains(p)).collect();
            let mut pos = first;
            pos.extend(rest);
            out.push(Shuffle { m, n, pos });
        }
        out.sort();
        out
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.m + self.n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn position(&self, i: usize) -> usize {
        self.pos[i]
    }

    pub fn positions(&self) -> &[usize] {
        &self.pos
    }

    /// `i` comes strictly before `j` in the shuffle order.
    pub fn precedes(&self, i: usize, j: usize) -> bool {
        self.pos[i] < self.pos[j]
    }

    pub fn is_odd_index(&self, i: usize) -> bool {
        i >= self.m
    }

    /// Index sitting at each position.
    pub fn order(&self) -> Vec<usize> {
        let mut out = vec![0; self.len()];
        for (i, &p) in self.pos.iter().enumerate() {
            out[p] = i;
        }
        out
    }

    /// Number of inverted (even, odd) pairs.
    pub fn length(&self) -> usize {
        (0..self.m)
            .flat_map(|i| (self.m..self.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| self.pos[j] < self.pos[i])
            .count()
    }

    /// The shuffle obtained by exchanging the positions of i and j.
    pub fn swapped(&self, i: usize, j: usize) -> Result<Shuffle> {
        let mut pos = self.pos.clone();
        pos.swap(i, j);
        Shuffle::new(self.m, self.n, pos)
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.pos.iter().map(|p| p + 1).collect()
    }
}

impl fmt::Display for Shuffle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_based().iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// The indices (first, second) exchanged between two shuffles that differ by
/// swapping neighbouring indices of opposite parity; `first` precedes
/// `second` in `pi`.
pub fn adjacent_transposition(pi: &Shuffle, pi_prime: &Shuffle) -> Result<(usize, usize)> {
    if pi.m != pi_prime.m || pi.n != pi_prime.n {
        return Err(Error::NotAdjacent(format!("{pi} and {pi_prime} have different sizes")));
    }
    let diff: Vec<usize> = (0..pi.len()).filter(|&i| pi.pos[i] != pi_prime.pos[i]).collect();
    let not_adj = || Error::NotAdjacent(format!("{pi} -> {pi_prime}"));
    let [a, b] = diff[..] else { return Err(not_adj()) };
    let (first, second) = if pi.pos[a] < pi.pos[b] { (a, b) } else { (b, a) };
    let ok = pi.pos[second] == pi.pos[first] + 1
        && pi_prime.pos[first] == pi.pos[second]
        && pi_prime.pos[second] == pi.pos[first]
        && pi.is_odd_index(first) != pi.is_odd_index(second);
    if ok {
        Ok((first, second))
    } else {
        Err(not_adj())
    }
}

/// Block sizes of a Levi subalgebra together with the shuffle ordering the
/// blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParabolicShape {
    even_blocks: Vec<usize>,
    odd_blocks: Vec<usize>,
    shuffle: Shuffle,
}

impl ParabolicShape {
    pub fn new(even_blocks: Vec<usize>, odd_blocks: Vec<usize>, shuffle: Shuffle) -> Result<Self> {
        if let Some(i) = even_blocks.iter().chain(&odd_blocks).position(|&b| b == 0) {
            return Err(Error::EmptyBlock { index: i });
        }
        if shuffle.m != even_blocks.len() || shuffle.n != odd_blocks.len() {
            return Err(Error::ShapeMismatch(format!(
                "shuffle is ({},{}) but shape has {}|{} blocks",
                shuffle.m,
                shuffle.n,
                even_blocks.len(),
                odd_blocks.len()
            )));
        }
        Ok(ParabolicShape { even_blocks, odd_blocks, shuffle })
    }

    /// Parse the text forms `"m1,..,mM|mM+1,..,mM+N"` and `"1,3,2,4"`.
    pub fn parse(shape: &str, shuffle: &str) -> Result<Self> {
        let (ev, od) = shape
            .split_once('|')
            .ok_or_else(|| Error::Parse(format!("shape {shape:?} lacks '|'")))?;
        let even_blocks = parse_list(ev)?;
        let odd_blocks = parse_list(od)?;
        if let Some(i) = even_blocks.iter().chain(&odd_blocks).position(|&b| b == 0) {
            return Err(Error::EmptyBlock { index: i });
        }
        let shuffle = Shuffle::parse(shuffle, even_blocks.len(), odd_blocks.len())?;
        Self::new(even_blocks, odd_blocks, shuffle)
    }

    /// Standard parabolic for the given blocks.
    pub fn standard(even_blocks: Vec<usize>, odd_blocks: Vec<usize>) -> Result<Self> {
        let s = Shuffle::identity(even_blocks.len(), odd_blocks.len());
        Self::new(even_blocks, odd_blocks, s)
    }

    pub fn borel(m: usize, n: usize, shuffle: Shuffle) -> Result<Self> {
        Self::new(vec![1; m], vec![1; n], shuffle)
    }

    pub fn even_blocks(&self) -> &[usize] {
        &self.even_blocks
    }

    pub fn odd_blocks(&self) -> &[usize] {
        &self.odd_blocks
    }

    pub fn shuffle(&self) -> &Shuffle {
        &self.shuffle
    }

    pub fn num_blocks(&self) -> usize {
        self.even_blocks.len() + self.odd_blocks.len()
    }

    pub fn block_size(&self, b: usize) -> usize {
        if b < self.even_blocks.len() {
            self.even_blocks[b]
        } else {
            self.odd_blocks[b - self.even_blocks.len()]
        }
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.even_blocks.iter().chain(&self.odd_blocks).copied().collect()
    }

    pub fn block_parity(&self, b: usize) -> Parity {
        if b < self.even_blocks.len() {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Total number of coordinates m.
    pub fn dim(&self) -> usize {
        self.even_blocks.iter().chain(&self.odd_blocks).sum()
    }

    pub fn block_start(&self, b: usize) -> usize {
        (0..b).map(|k| self.block_size(k)).sum()
    }

    pub fn block_range(&self, b: usize) -> std::ops::Range<usize> {
        let s = self.block_start(b);
        s..s + self.block_size(b)
    }

    pub fn block_of(&self, coord: usize) -> usize {
        let mut acc = 0;
        for b in 0..self.num_blocks() {
            acc += self.block_size(b);
            if coord < acc {
                return b;
            }
        }
        panic!("coordinate {coord} out of range");
    }

    pub fn coord_parity(&self, coord: usize) -> Parity {
        self.block_parity(self.block_of(coord))
    }

    /// Shuffle position of the block containing a coordinate.
    pub fn coord_position(&self, coord: usize) -> usize {
        self.shuffle.position(self.block_of(coord))
    }

    pub fn is_borel(&self) -> bool {
        self.block_sizes().iter().all(|&b| b == 1)
    }

    /// The Borel refinement: unit blocks, ordered by block position and then
    /// within each block by coordinate.
    pub fn refine(&self) -> ParabolicShape {
        let ev: usize = self.even_blocks.iter().sum();
        let od: usize = self.odd_blocks.iter().sum();
        let order = self.shuffle.order();
        let mut pos = vec![0; ev + od];
        let mut next = 0;
        for b in order {
            for c in self.block_range(b) {
                pos[c] = next;
                next += 1;
            }
        }
        let shuffle = Shuffle::new(ev, od, pos).expect("refinement of a shuffle is a shuffle");
        ParabolicShape::new(vec![1; ev], vec![1; od], shuffle).expect("unit blocks")
    }

    /// `rho_k = (k-1, ..., 1, 0)` placed on each block's coordinates.
    pub fn block_rho(&self) -> Weight {
        let mut out = Vec::with_capacity(self.dim());
        for b in 0..self.num_blocks() {
            let k = self.block_size(b) as i64;
            out.extend((0..k).map(|i| k - 1 - i));
        }
        out
    }

    /// `rho*_k = (0, 1, ..., k-1)` placed on each block's coordinates.
    pub fn block_rho_star(&self) -> Weight {
        let mut out = Vec::with_capacity(self.dim());
        for b in 0..self.num_blocks() {
            out.extend(0..self.block_size(b) as i64);
        }
        out
    }

    /// Restriction of a weight to every block is weakly decreasing.
    pub fn is_block_dominant(&self, w: &[i64]) -> bool {
        (0..self.num_blocks()).all(|b| w[self.block_range(b)].windows(2).all(|p| p[0] >= p[1]))
    }

    pub fn shape_text(&self) -> String {
        let j = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        format!("{}|{}", j(&self.even_blocks), j(&self.odd_blocks))
    }

    /// Every shape with total dimension `m` (ordered block compositions for
    /// each split into even and odd parts) with every shuffle.
    pub fn all_of_dim(m: usize) -> Vec<ParabolicShape> {
        let mut out = Vec::new();
        for ev in 0..=m {
            for even in compositions(ev) {
                for odd in compositions(m - ev) {
                    for s in Shuffle::all(even.len(), odd.len()) {
                        out.push(ParabolicShape::new(even.clone(), odd.clone(), s).unwrap());
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for ParabolicShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.shape_text(), self.shuffle)
    }
}

/// Ordered compositions of `n` into positive parts.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Roots of the nilradical, in the global basis order: (position of source
/// block, position of target block, row, column). Each entry is the
/// coordinate pair (p, q) with the weight `e_p - e_q` and its parity.
pub fn root_pairs(shape: &ParabolicShape) -> Vec<(usize, usize)> {
    let order = shape.shuffle.order();
    let mut out = Vec::new();
    for (a_pos, &a) in order.iter().enumerate() {
        for &b in &order[a_pos + 1..] {
            for p in shape.block_range(a) {
                for q in shape.block_range(b) {
                    out.push((p, q));
                }
            }
        }
    }
    out
}

pub fn root_weight(m: usize, p: usize, q: usize) -> Weight {
    let mut w = vec![0; m];
    w[p] += 1;
    w[q] -= 1;
    w
}

pub fn positive_roots(shape: &ParabolicShape) -> Vec<(Weight, Parity)> {
    root_pairs(shape)
        .into_iter()
        .map(|(p, q)| {
            let par = shape.coord_parity(p).add(shape.coord_parity(q));
            (root_weight(shape.dim(), p, q), par)
        })
        .collect()
}

/// Sum of `e_j - e_i` over even i, odd j with j before i.
pub fn delta_pi(pi: &Shuffle) -> Weight {
    let mut w = vec![0; pi.len()];
    for i in 0..pi.m {
        for j in pi.m..pi.len() {
            if pi.precedes(j, i) {
                w[j] += 1;
                w[i] -= 1;
            }
        }
    }
    w
}

/// A bijection from the first N indices onto the last N together with an
/// (N,N)-shuffle. `phi[i]` lies in `N..2N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorSpec {
    pub phi: Vec<usize>,
    pub pi: Shuffle,
}

impl SectorSpec {
    pub fn new(phi: Vec<usize>, pi: Shuffle) -> Result<Self> {
        let n = pi.m;
        if pi.n != n || phi.len() != n {
            return Err(Error::ShapeMismatch("sector needs an (N,N)-shuffle and N images".into()));
        }
        let mut seen = vec![false; n];
        for &t in &phi {
            if t < n || t >= 2 * n || seen[t - n] {
                return Err(Error::ShapeMismatch(format!("{phi:?} is not a bijection onto N..2N")));
            }
            seen[t - n] = true;
        }
        Ok(SectorSpec { phi, pi })
    }
}

/// All bijections `{0..N} -> {N..2N}` in lexicographic order.
pub fn bijections(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn rec(n: usize, acc: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if acc.len() == n {
            out.push(acc.clone());
            return;
        }
        for t in 0..n {
            if !used[t] {
                used[t] = true;
                acc.push(n + t);
                rec(n, acc, used, out);
                acc.pop();
                used[t] = false;
            }
        }
    }
    rec(n, &mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Chords (p,q) and (r,s) with four distinct endpoints on a circle cross iff
/// exactly one of r, s lies strictly inside the arc from p to q.
pub fn chords_cross(a: (usize, usize), b: (usize, usize)) -> bool {
    let (lo, hi) = (a.0.min(a.1), a.0.max(a.1));
    let inside = |x: usize| lo < x && x < hi;
    inside(b.0) != inside(b.1)
}

pub fn crossing_count(spec: &SectorSpec) -> usize {
    let chords: Vec<(usize, usize)> = spec
        .phi
        .iter()
        .enumerate()
        .map(|(i, &t)| (spec.pi.position(i), spec.pi.position(t)))
        .collect();
    let mut count = 0;
    for x in 0..chords.len() {
        for y in x + 1..chords.len() {
            if chords_cross(chords[x], chords[y]) {
                count += 1;
            }
        }
    }
    count
}

pub fn arc_crossing_sign(spec: &SectorSpec) -> i64 {
    if crossing_count(spec) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Whether `lambda = sum_i c_i (e_i - e_phi(i))` with `c_i >= 0` when i
/// precedes phi(i) and `c_i < 0` otherwise.
pub fn sector_membership(lambda: &[i64], spec: &SectorSpec) -> bool {
    let n = spec.pi.m;
    assert_eq!(lambda.len(), 2 * n);
    spec.phi.iter().enumerate().all(|(i, &t)| {
        let c = lambda[i];
        lambda[t] == -c && if spec.pi.precedes(i, t) { c >= 0 } else { c < 0 }
    })
}

/// Sign of a permutation given as images of `0..n` (values may be offset).
pub fn permutation_sign(images: &[usize]) -> i64 {
    let mut inv = 0;
    for a in 0..images.len() {
        for b in a + 1..images.len() {
            if images[a] > images[b] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Componentwise integer box `lo[k] <= w[k] <= hi[k]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightBox {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl WeightBox {
    pub fn cube(dim: usize, lo: i64, hi: i64) -> Self {
        WeightBox { lo: vec![lo; dim], hi: vec![hi; dim] }
    }

    /// Parse `"a..b"`, applied to every coordinate.
    pub fn parse(text: &str, dim: usize) -> Result<Self> {
        let (a, b) = text
            .split_once("..")
            .ok_or_else(|| Error::Parse(format!("box {text:?} is not of the form a..b")))?;
        let p = |s: &str| {
            s.trim()
                .parse::<i64>()
                .map_err(|e| Error::Parse(format!("box bound {s:?}: {e}")))
        };
        let (lo, hi) = (p(a)?, p(b)?);
        if lo > hi {
            return Err(Error::Parse(format!("empty box {text:?}")));
        }
        Ok(Self::cube(dim, lo, hi))
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, w: &[i64]) -> bool {
        w.len() == self.dim() && w.iter().zip(self.lo.iter().zip(&self.hi)).all(|(x, (l, h))| l <= x && x <= h)
    }

    pub fn len(&self) -> usize {
        self.lo.iter().zip(&self.hi).map(|(l, h)| (h - l + 1).max(0) as usize).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All weights in lexicographic order.
    pub fn points(&self) -> Vec<Weight> {
        let mut out = Vec::with_capacity(self.len());
        if self.lo.iter().zip(&self.hi).any(|(l, h)| l > h) {
            return out;
        }
        let mut cur = self.lo.clone();
        loop {
            out.push(cur.clone());
            let mut k = self.dim();
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if cur[k] < self.hi[k] {
                    cur[k] += 1;
                    for r in k + 1..self.dim() {
                        cur[r] = self.lo[r];
                    }
                    break;
                }
            }
        }
    }

    pub fn grow(&self, by: i64) -> Self {
        WeightBox {
            lo: self.lo.iter().map(|x| x - by).collect(),
            hi: self.hi.iter().map(|x| x + by).collect(),
        }
    }
}

impl fmt::Display for WeightBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let all_same = self.lo.windows(2).all(|w| w[0] == w[1]) && self.hi.windows(2).all(|w| w[0] == w[1]);
        match (self.lo.first(), self.hi.first()) {
            (Some(l), Some(h)) if all_same => write!(f, "[{l},{h}]^{}", self.dim()),
            _ => write!(f, "{:?}..{:?}", self.lo, self.hi),
        }
    }
}

pub fn parse_list(text: &str) -> Result<Vec<usize>> {
    let t = text.trim();
    if t.is_empty() {
        return Ok(Vec::new());
    }
    t.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("{s:?} in {text:?}: {e}")))
        })
        .collect()
}

pub fn add_weights(a: &[i64], b: &[i64]) -> Weight {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_weights(a: &[i64], b: &[i64]) -> Weight {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn neg_weight(a: &[i64]) -> Weight {
    a.iter().map(|x| -x).collect()
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn rec(n: usize, acc: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if acc.len() == n {
            out.push(acc.clone());
            return;
        }
        for t in 0..n {
            if !used[t] {
                used[t] = true;
                acc.push(t);
                rec(n, acc, used, out);
                acc.pop();
                used[t] = false;
            }
        }
    }
    rec(n, &mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn make_shape_examples() {
        let b = ParabolicShape::parse("1|1", "1,2").unwrap();
        assert!(b.is_borel());
        let p1 = ParabolicShape::parse("1,1|1,1", "1,3,2,4").unwrap();
        assert_eq!(p1.shuffle(), &Shuffle::alternating(2));
        assert!(ParabolicShape::parse("1|1", "2,1").is_ok());
        assert!(matches!(
            ParabolicShape::parse("1,1|1", "2,1,3"),
            Err(Error::NotAShuffle { .. })
        ));
        assert!(matches!(ParabolicShape::parse("1,0|1", "1,2,3"), Err(Error::EmptyBlock { index: 1 })));
    }

    #[test]
    fn positive_root_examples() {
        let b = ParabolicShape::parse("1|1", "1,2").unwrap();
        assert_eq!(positive_roots(&b), vec![(vec![1, -1], Parity::Odd)]);
        let e = ParabolicShape::parse("1,1|", "1,2").unwrap();
        assert_eq!(positive_roots(&e), vec![(vec![1, -1], Parity::Even)]);
        // Block pairs (1,2), (1,3), (2,3): same parity, then two mixed pairs.
        let s = ParabolicShape::parse("1,1|1", "1,2,3").unwrap();
        let pars: Vec<Parity> = positive_roots(&s).into_iter().map(|(_, p)| p).collect();
        assert_eq!(pars, vec![Parity::Even, Parity::Odd, Parity::Odd]);
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta_pi(&Shuffle::identity(2, 2)), vec![0; 4]);
        assert_eq!(delta_pi(&Shuffle::from_one_based(1, 1, &[2, 1]).unwrap()), vec![-1, 1]);
        // The alternating shuffle for N=2 puts index 3 (odd) before index 2 (even):
        // the only inverted pair is (i=2, j=3), contributing e_3 - e_2.
        assert_eq!(delta_pi(&Shuffle::alternating(2)), vec![0, -1, 1, 0]);
    }

    #[test]
    fn crossing_examples() {
        let e2 = Shuffle::identity(2, 2);
        let nested = SectorSpec::new(vec![3, 2], e2.clone()).unwrap();
        let crossing = SectorSpec::new(vec![2, 3], e2).unwrap();
        assert_eq!(arc_crossing_sign(&nested), 1);
        assert_eq!(arc_crossing_sign(&crossing), -1);
        let e1 = Shuffle::identity(1, 1);
        assert_eq!(arc_crossing_sign(&SectorSpec::new(vec![1], e1).unwrap()), 1);
    }

    #[test]
    fn identity_crossings_match_permutation_sign() {
        for n in 1..=4 {
            let e = Shuffle::identity(n, n);
            let base = if (n * (n - 1) / 2) % 2 == 0 { 1 } else { -1 };
            for phi in bijections(n) {
                let sgn = permutation_sign(&phi);
                let spec = SectorSpec::new(phi, e.clone()).unwrap();
                assert_eq!(arc_crossing_sign(&spec), base * sgn);
            }
        }
    }

    #[test]
    fn sector_examples() {
        let e = Shuffle::identity(2, 2);
        for phi in bijections(2) {
            let spec = SectorSpec::new(phi.clone(), e.clone()).unwrap();
            assert!(sector_membership(&[0, 0, 0, 0], &spec));
            let a = root_weight(4, 0, phi[0]);
            assert!(sector_membership(&a, &spec));
            assert!(!sector_membership(&neg_weight(&a), &spec));
        }
    }

    #[test]
    fn shuffle_enumeration_counts() {
        assert_eq!(Shuffle::all(2, 2).len(), 6);
        assert_eq!(Shuffle::all(3, 1).len(), 4);
        assert_eq!(Shuffle::all(0, 3).len(), 1);
        for s in Shuffle::all(2, 3) {
            assert!(Shuffle::new(2, 3, s.positions().to_vec()).is_ok());
        }
    }

    #[test]
    fn adjacency_detection() {
        let e = Shuffle::identity(1, 1);
        let f = Shuffle::from_one_based(1, 1, &[2, 1]).unwrap();
        assert_eq!(adjacent_transposition(&e, &f).unwrap(), (0, 1));
        assert_eq!(adjacent_transposition(&f, &e).unwrap(), (1, 0));
        assert!(adjacent_transposition(&e, &e).is_err());
        let a = Shuffle::identity(2, 2);
        let b = Shuffle::from_one_based(2, 2, &[2, 3, 1, 4]).unwrap();
        assert!(adjacent_transposition(&a, &b).is_err());
    }

    #[test]
    fn refinement_orders_blocks() {
        let s = ParabolicShape::parse("2|1", "2,1").unwrap();
        let r = s.refine();
        assert_eq!(r.shuffle().positions(), &[1, 2, 0]);
        assert_eq!(s.block_rho(), vec![1, 0, 0]);
        assert_eq!(s.block_rho_star(), vec![0, 1, 0]);
    }

    #[test]
    fn shapes_of_dim_two() {
        // 0|2 blocks: (2),(1,1) ; 1|1: 2 shuffles ; 2|0: (2),(1,1) ; plus shuffles of 2-block shapes.
        let all = ParabolicShape::all_of_dim(2);
        assert_eq!(all.len(), 2 + 2 + 2);
    }

    #[test]
    fn box_points_are_lexicographic() {
        let b = WeightBox::parse("-1..1", 2).unwrap();
        let pts = b.points();
        assert_eq!(pts.len(), 9);
        assert_eq!(pts[0], vec![-1, -1]);
        assert_eq!(pts[1], vec![-1, 0]);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
    }

    fn shuffle_strategy() -> impl Strategy<Value = Shuffle> {
        (1usize..4, 1usize..4).prop_flat_map(|(m, n)| {
            let all = Shuffle::all(m, n);
            (0..all.len()).prop_map(move |k| all[k].clone())
        })
    }

    proptest! {
        #[test]
        fn crossing_parity_is_rotation_invariant(n in 1usize..5, pick in 0usize..1000, rot in 0usize..8) {
            let phis = bijections(n);
            let phi = &phis[pick % phis.len()];
            let shuffles = Shuffle::all(n, n);
            let pi = &shuffles[pick % shuffles.len()];
            let spec = SectorSpec::new(phi.clone(), pi.clone()).unwrap();
            let r = rot % (2 * n);
            let rotate = |p: usize| (p + r) % (2 * n);
            let chords: Vec<(usize, usize)> = phi
                .iter()
                .enumerate()
                .map(|(i, &t)| (rotate(pi.position(i)), rotate(pi.position(t))))
                .collect();
            let mut count = 0;
            for x in 0..n {
                for y in x + 1..n {
                    if chords_cross(chords[x], chords[y]) { count += 1; }
                }
            }
            prop_assert_eq!(count % 2, crossing_count(&spec) % 2);
        }

        #[test]
        fn adjacent_shuffles_shift_delta_by_a_root(pi in shuffle_strategy()) {
            let order = pi.order();
            for w in order.windows(2) {
                let (a, b) = (w[0], w[1]);
                if pi.is_odd_index(a) == pi.is_odd_index(b) { continue; }
                let q = pi.swapped(a, b).unwrap();
                prop_assert_eq!(adjacent_transposition(&pi, &q).unwrap(), (a, b));
                let diff = sub_weights(&delta_pi(&q), &delta_pi(&pi));
                let root = root_weight(pi.len(), a, b);
                prop_assert!(diff == root || diff == neg_weight(&root));
            }
        }

        #[test]
        fn sector_decomposition_is_unique(n in 1usize..4, pick in 0usize..1000, coeffs in prop::collection::vec(-3i64..=3, 3)) {
            let phis = bijections(n);
            let phi = phis[pick % phis.len()].clone();
            let shuffles = Shuffle::all(n, n);
            let pi = shuffles[pick % shuffles.len()].clone();
            let mut lambda = vec![0; 2 * n];
            for i in 0..n {
                lambda[i] += coeffs[i];
                lambda[phi[i]] -= coeffs[i];
            }
            let spec = SectorSpec::new(phi.clone(), pi.clone()).unwrap();
            let expected = (0..n).all(|i| if pi.precedes(i, phi[i]) { coeffs[i] >= 0 } else { coeffs[i] < 0 });
            prop_assert_eq!(sector_membership(&lambda, &spec), expected);
        }
    }
}
