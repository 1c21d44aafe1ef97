//! Finite-dimensional graded spaces carrying one operator of degree `+1` and
//! one of degree `-1`, with the shared plumbing for mixed complexes and
//! sl(1|1)-modules: direct sums, Koszul tensor products, change of basis and
//! the text interchange format.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::exact_linalg::{inverse, Rational, SparseMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPair {
    lo: i64,
    dims: Vec<usize>,
    /// `up[k]`: degree `lo + k` to `lo + k + 1`.
    up: Vec<SparseMatrix>,
    /// `down[k]`: degree `lo + k + 1` to `lo + k`.
    down: Vec<SparseMatrix>,
}

pub(crate) fn place(trip: &mut Vec<(usize, usize, Rational)>, r0: usize, c0: usize, m: &SparseMatrix) {
    trip.extend(m.entries().map(|(r, c, v)| (r0 + r, c0 + c, v.clone())));
}

impl GradedPair {
    /// Zero-dimensional degrees at either end are dropped.
    pub fn new(lo: i64, dims: Vec<usize>, up: Vec<SparseMatrix>, down: Vec<SparseMatrix>) -> Result<Self> {
        let len = dims.len();
        if up.len() != len.saturating_sub(1) || down.len() != len.saturating_sub(1) {
            return Err(Error::ShapeMismatch(format!("{len} degrees need {} maps each way", len.saturating_sub(1))));
        }
        for k in 0..up.len() {
            if (up[k].rows(), up[k].cols()) != (dims[k + 1], dims[k]) {
                return Err(Error::ShapeMismatch(format!("raising map from degree {} is {}x{}", lo + k as i64, up[k].rows(), up[k].cols())));
            }
            if (down[k].rows(), down[k].cols()) != (dims[k], dims[k + 1]) {
                return Err(Error::ShapeMismatch(format!(
                    "lowering map from degree {} is {}x{}",
                    lo + k as i64 + 1,
                    down[k].rows(),
                    down[k].cols()
                )));
            }
        }
        let first = dims.iter().position(|&d| d > 0);
        let Some(first) = first else {
            return Ok(GradedPair { lo: 0, dims: Vec::new(), up: Vec::new(), down: Vec::new() });
        };
        let last = dims.iter().rposition(|&d| d > 0).unwrap();
        Ok(GradedPair {
            lo: lo + first as i64,
            dims: dims[first..=last].to_vec(),
            up: up[first..last].to_vec(),
            down: down[first..last].to_vec(),
        })
    }

    /// Builds the maps from closures `up(p)` (degree `p` to `p+1`) and
    /// `down(p)` (degree `p+1` to `p`).
    pub fn from_fn(
        lo: i64,
        dims: Vec<usize>,
        up: impl Fn(i64) -> SparseMatrix,
        down: impl Fn(i64) -> SparseMatrix,
    ) -> Result<Self> {
        let n = dims.len().saturating_sub(1);
        let ups = (0..n).map(|k| up(lo + k as i64)).collect();
        let downs = (0..n).map(|k| down(lo + k as i64)).collect();
        Self::new(lo, dims, ups, downs)
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Highest degree; `lo - 1` for the zero space.
    pub fn hi(&self) -> i64 {
        self.lo + self.dims.len() as i64 - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, p: i64) -> usize {
        if p < self.lo || p > self.hi() {
            0
        } else {
            self.dims[(p - self.lo) as usize]
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Degree `p` to `p + 1`.
    pub fn up(&self, p: i64) -> SparseMatrix {
        if p < self.lo || p >= self.hi() {
            return SparseMatrix::zeros(self.dim(p + 1), self.dim(p));
        }
        self.up[(p - self.lo) as usize].clone()
    }

    /// Degree `p` to `p - 1`.
    pub fn down(&self, p: i64) -> SparseMatrix {
        if p <= self.lo || p > self.hi() {
            return SparseMatrix::zeros(self.dim(p - 1), self.dim(p));
        }
        self.down[(p - 1 - self.lo) as usize].clone()
    }

    /// Start of each degree in the total space, indexed from `lo`.
    pub fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.dims.len() + 1);
        let mut acc = 0;
        out.push(0);
        for d in &self.dims {
            acc += d;
            out.push(acc);
        }
        out
    }

    /// The raising and lowering operators on the total space.
    pub fn total_operators(&self) -> (SparseMatrix, SparseMatrix) {
        let off = self.offsets();
        let n = self.total_dim();
        let (mut u, mut d) = (Vec::new(), Vec::new());
        for k in 0..self.up.len() {
            place(&mut u, off[k + 1], off[k], &self.up[k]);
            place(&mut d, off[k], off[k + 1], &self.down[k]);
        }
        (SparseMatrix::from_triplets(n, n, u), SparseMatrix::from_triplets(n, n, d))
    }

    pub fn direct_sum(parts: &[&GradedPair]) -> GradedPair {
        let nonempty: Vec<&&GradedPair> = parts.iter().filter(|g| !g.dims.is_empty()).collect();
        if nonempty.is_empty() {
            return GradedPair::new(0, Vec::new(), Vec::new(), Vec::new()).unwrap();
        }
        let lo = nonempty.iter().map(|g| g.lo).min().unwrap();
        let hi = nonempty.iter().map(|g| g.hi()).max().unwrap();
        let dims = (lo..=hi).map(|p| parts.iter().map(|g| g.dim(p)).sum()).collect();
        let block = |f: &dyn Fn(&GradedPair) -> SparseMatrix| SparseMatrix::block_diag(&parts.iter().map(|g| f(g)).collect::<Vec<_>>());
        GradedPair::from_fn(lo, dims, |p| block(&|g| g.up(p)), |p| block(&|g| g.down(p + 1))).unwrap()
    }

    /// Basis of degree `n` in a tensor product: pairs `(p, q)` with
    /// `p + q = n`, by increasing `p`, then row-major within the block.
    fn tensor_blocks(&self, other: &GradedPair, n: i64) -> Vec<(i64, usize)> {
        let mut out = Vec::new();
        let mut start = 0;
        for p in self.lo..=self.hi() {
            let q = n - p;
            let size = self.dim(p) * other.dim(q);
            if size > 0 {
                out.push((p, start));
                start += size;
            }
        }
        out
    }

    /// `x(a ⊗ b) = xa ⊗ b + (-1)^{deg a} a ⊗ xb` for both operators.
    pub fn tensor(&self, other: &GradedPair) -> GradedPair {
        if self.dims.is_empty() || other.dims.is_empty() {
            return GradedPair::new(0, Vec::new(), Vec::new(), Vec::new()).unwrap();
        }
        let lo = self.lo + other.lo;
        let hi = self.hi() + other.hi();
        let dims: Vec<usize> = (lo..=hi).map(|n| (self.lo..=self.hi()).map(|p| self.dim(p) * other.dim(n - p)).sum()).collect();
        let op = |n: i64, step: i64| -> SparseMatrix {
            let src = self.tensor_blocks(other, n);
            let dst: BTreeMap<i64, usize> = self.tensor_blocks(other, n + step).into_iter().collect();
            let mut trip = Vec::new();
            for (p, start) in src {
                let q = n - p;
                let (da, db) = (self.dim(p), other.dim(q));
                let (ma, mb) = if step > 0 { (self.up(p), other.up(q)) } else { (self.down(p), other.down(q)) };
                let sign = if p.rem_euclid(2) == 0 { Rational::from_integer(1.into()) } else { Rational::from_integer((-1).into()) };
                // xa ⊗ b
                if let Some(&t) = dst.get(&(p + step)) {
                    for (r, c, v) in ma.entries() {
                        for j in 0..db {
                            trip.push((t + r * db + j, start + c * db + j, v.clone()));
                        }
                    }
                }
                // ± a ⊗ xb
                if let Some(&t) = dst.get(&p) {
                    let db2 = other.dim(q + step);
                    for (r, c, v) in mb.entries() {
                        for i in 0..da {
                            trip.push((t + i * db2 + r, start + i * db + c, &sign * v));
                        }
                    }
                }
            }
            let rows = (self.lo..=self.hi()).map(|p| self.dim(p) * other.dim(n + step - p)).sum();
            let cols = (self.lo..=self.hi()).map(|p| self.dim(p) * other.dim(n - p)).sum();
            SparseMatrix::from_triplets(rows, cols, trip)
        };
        GradedPair::from_fn(lo, dims, |n| op(n, 1), |n| op(n + 1, -1)).unwrap()
    }

    /// Change of basis: `g[k]` acts on degree `lo + k`, new operators are
    /// `g x g^{-1}`.
    pub fn conjugate(&self, g: &[SparseMatrix]) -> Result<GradedPair> {
        if g.len() != self.dims.len() {
            return Err(Error::ShapeMismatch(format!("{} basis changes for {} degrees", g.len(), self.dims.len())));
        }
        let inv: Vec<SparseMatrix> = g
            .iter()
            .enumerate()
            .map(|(k, m)| {
                if m.rows() != self.dims[k] {
                    return Err(Error::ShapeMismatch(format!("basis change {k} has size {}", m.rows())));
                }
                inverse(m).ok_or_else(|| Error::ShapeMismatch(format!("basis change {k} is singular")))
            })
            .collect::<Result<_>>()?;
        let up = (0..self.up.len()).map(|k| g[k + 1].mul(&self.up[k]).mul(&inv[k])).collect();
        let down = (0..self.down.len()).map(|k| g[k].mul(&self.down[k]).mul(&inv[k + 1])).collect();
        GradedPair::new(self.lo, self.dims.clone(), up, down)
    }
}

/// Named operator blocks read from or written to the interchange format.
/// `degree` is the source degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorBlock {
    pub name: String,
    pub degree: i64,
    pub matrix: SparseMatrix,
}

/// Parsed interchange text: a header word, the degree range and the blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interchange {
    pub header: String,
    pub lo: i64,
    pub dims: Vec<usize>,
    pub blocks: Vec<OperatorBlock>,
}

impl Interchange {
    /// ```text
    /// mixed-complex
    /// lo -1
    /// dims 1 2 1
    /// d -1 2x1
    /// 0
    /// -1
    /// ```
    /// Blank lines and `#` comments are ignored; missing blocks are zero.
    pub fn parse(text: &str) -> Result<Interchange> {
        let mut lines = text.lines().map(|l| l.split('#').next().unwrap().trim()).filter(|l| !l.is_empty());
        let bad = |msg: String| Error::Parse(msg);
        let header = lines.next().ok_or_else(|| bad("empty input".into()))?.to_string();
        let mut lo = None;
        let mut dims = None;
        let mut blocks = Vec::new();
        while let Some(line) = lines.next() {
            let words: Vec<&str> = line.split_whitespace().collect();
            match words[0] {
                "lo" => lo = Some(words.get(1).and_then(|w| w.parse::<i64>().ok()).ok_or_else(|| bad(format!("bad line: {line}")))?),
                "dims" => {
                    dims = Some(
                        words[1..].iter().map(|w| w.parse::<usize>().map_err(|_| bad(format!("bad dimension {w}")))).collect::<Result<Vec<_>>>()?,
                    )
                }
                name => {
                    if words.len() != 3 {
                        return Err(bad(format!("expected `<operator> <degree> <rows>x<cols>`, got `{line}`")));
                    }
                    let degree: i64 = words[1].parse().map_err(|_| bad(format!("bad degree {}", words[1])))?;
                    let (r, c) = words[2].split_once('x').ok_or_else(|| bad(format!("bad size {}", words[2])))?;
                    let rows: usize = r.parse().map_err(|_| bad(format!("bad size {}", words[2])))?;
                    let cols: usize = c.parse().map_err(|_| bad(format!("bad size {}", words[2])))?;
                    let mut dense = Vec::with_capacity(rows);
                    for _ in 0..rows {
                        let row = lines.next().ok_or_else(|| bad(format!("block {name} {degree} is truncated")))?;
                        let vals = row
                            .split_whitespace()
                            .map(|w| w.parse::<Rational>().map_err(|_| bad(format!("bad entry {w}"))))
                            .collect::<Result<Vec<_>>>()?;
                        if vals.len() != cols {
                            return Err(bad(format!("block {name} {degree}: row has {} entries, expected {cols}", vals.len())));
                        }
                        dense.push(vals);
                    }
                    blocks.push(OperatorBlock { name: name.to_string(), degree, matrix: SparseMatrix::from_dense(rows, cols, &dense) });
                }
            }
        }
        Ok(Interchange {
            header,
            lo: lo.ok_or_else(|| bad("missing `lo` line".into()))?,
            dims: dims.ok_or_else(|| bad("missing `dims` line".into()))?,
            blocks,
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\nlo {}\ndims", self.header, self.lo);
        for d in &self.dims {
            write!(s, " {d}").unwrap();
        }
        s.push('\n');
        for b in &self.blocks {
            writeln!(s, "{} {} {}x{}", b.name, b.degree, b.matrix.rows(), b.matrix.cols()).unwrap();
            for row in b.matrix.to_dense() {
                let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                writeln!(s, "{}", cells.join(" ")).unwrap();
            }
        }
        s
    }

    /// Matrix of the named block from degree `p` with the given target
    /// degree, zero if absent; checks the declared size.
    pub fn operator(&self, name: &str, p: i64, target: i64) -> Result<SparseMatrix> {
        let dim = |q: i64| if q < self.lo || q >= self.lo + self.dims.len() as i64 { 0 } else { self.dims[(q - self.lo) as usize] };
        let (rows, cols) = (dim(target), dim(p));
        match self.blocks.iter().find(|b| b.name == name && b.degree == p) {
            None => Ok(SparseMatrix::zeros(rows, cols)),
            Some(b) if (b.matrix.rows(), b.matrix.cols()) == (rows, cols) => Ok(b.matrix.clone()),
            Some(b) => Err(Error::ShapeMismatch(format!(
                "{name} from degree {p} is {}x{}, expected {rows}x{cols}",
                b.matrix.rows(),
                b.matrix.cols()
            ))),
        }
    }

    /// Rejects blocks whose name is not in `known` or whose degree is outside the range.
    pub fn check_names(&self, known: &[&str]) -> Result<()> {
        let hi = self.lo + self.dims.len() as i64 - 1;
        for b in &self.blocks {
            if !known.contains(&b.name.as_str()) {
                return Err(Error::Parse(format!("unknown operator `{}`; expected one of {known:?}", b.name)));
            }
            if b.degree < self.lo || b.degree > hi {
                return Err(Error::Parse(format!("{} block at degree {} outside {}..{hi}", b.name, b.degree, self.lo)));
            }
        }
        Ok(())
    }
}

pub(crate) fn nonzero_blocks(name: &str, maps: impl Iterator<Item = (i64, SparseMatrix)>) -> Vec<OperatorBlock> {
    maps.filter(|(_, m)| !m.is_zero()).map(|(degree, matrix)| OperatorBlock { name: name.to_string(), degree, matrix }).collect()
}
