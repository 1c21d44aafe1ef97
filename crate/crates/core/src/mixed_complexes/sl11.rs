//! Liftable sl(1|1)-modules: `Q_+` of degree `+1`, `Q_-` of degree `-1`,
//! `[Q_+, Q_-] = H` central. Constructors for the classification list,
//! tensor products with their decomposition, the closed multiplication law
//! of cyclic modules, and Lie algebra cohomology with coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use super::graded::{self, GradedPair, Interchange};
use super::{check_relations, decompose, Arrow, IndecompKind, IndecompLabel, MixedComplex};
use crate::error::{Error, Result};
use crate::exact_linalg::{kernel_basis, rank, rat, solve, Rational, SparseMatrix};

pub const SL11_HEADER: &str = "sl11-module";

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Sl11Kind {
    I,
    IIPlus,
    IIMinus,
    IILambda(#[serde(serialize_with = "crate::mixed_complexes::sl11::rational_text")] Rational),
    III0,
    III,
    /// `Z^N`: zig-zag whose first and last arrows are `Q_-` (even `N`) or
    /// `Q_+` then `Q_-` (odd `N`).
    Z(usize),
    /// `Z̄^N`: the other orientation.
    ZBar(usize),
}

pub(crate) fn rational_text<S: serde::Serializer>(v: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl fmt::Display for Sl11Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sl11Kind::I => write!(f, "I"),
            Sl11Kind::IIPlus => write!(f, "II+"),
            Sl11Kind::IIMinus => write!(f, "II-"),
            Sl11Kind::IILambda(l) => write!(f, "II_{l}"),
            Sl11Kind::III0 => write!(f, "III0"),
            Sl11Kind::III => write!(f, "III"),
            Sl11Kind::Z(n) => write!(f, "Z^{n}"),
            Sl11Kind::ZBar(n) => write!(f, "Zbar^{n}"),
        }
    }
}

impl Sl11Kind {
    /// `I`, `II+`, `II-`, `II_<λ>` (e.g. `II_-3`, `II_1/2`), `III0`, `III`,
    /// `Z^<N>`, `Zbar^<N>`. Zig-zags that coincide with a cyclic type are
    /// returned under the cyclic name.
    pub fn parse(text: &str) -> Result<Sl11Kind> {
        let t = text.trim();
        let unknown = || Error::UnknownLabel(t.to_string());
        let kind = match t {
            "I" => Sl11Kind::I,
            "II+" => Sl11Kind::IIPlus,
            "II-" => Sl11Kind::IIMinus,
            "III0" => Sl11Kind::III0,
            "III" => Sl11Kind::III,
            _ => {
                if let Some(l) = t.strip_prefix("II_") {
                    Sl11Kind::IILambda(l.parse::<Rational>().map_err(|_| unknown())?)
                } else if let Some(n) = t.strip_prefix("Zbar^") {
                    Sl11Kind::ZBar(n.parse().map_err(|_| unknown())?)
                } else if let Some(n) = t.strip_prefix("Z^") {
                    Sl11Kind::Z(n.parse().map_err(|_| unknown())?)
                } else {
                    return Err(unknown());
                }
            }
        };
        kind.canonical()
    }

    /// Identifies `Z^1 = Zbar^1 = I`, `Zbar^2 = II+`, `Z^2 = II-`,
    /// `Zbar^3 = III0`.
    pub fn canonical(self) -> Result<Sl11Kind> {
        Ok(match self {
            Sl11Kind::Z(0) | Sl11Kind::ZBar(0) => return Err(Error::UnknownLabel(self.to_string())),
            Sl11Kind::Z(1) | Sl11Kind::ZBar(1) => Sl11Kind::I,
            Sl11Kind::ZBar(2) => Sl11Kind::IIPlus,
            Sl11Kind::Z(2) => Sl11Kind::IIMinus,
            Sl11Kind::ZBar(3) => Sl11Kind::III0,
            other => other,
        })
    }

    pub fn is_cyclic(&self) -> bool {
        !matches!(self, Sl11Kind::Z(_) | Sl11Kind::ZBar(_))
    }

    /// The mixed-complex kind of an `H = 0` module.
    fn mixed_kind(&self) -> Option<IndecompKind> {
        use Arrow::{Delta, D};
        let zz = |n, a, b| IndecompKind::zigzag(n, a, b).ok();
        match *self {
            Sl11Kind::I => zz(1, D, Delta),
            Sl11Kind::IIPlus => zz(1, D, D),
            Sl11Kind::IIMinus => zz(1, Delta, Delta),
            Sl11Kind::III0 => zz(2, Delta, D),
            Sl11Kind::III => Some(IndecompKind::Diamond),
            Sl11Kind::Z(n) if n % 2 == 0 => zz(n / 2, Delta, Delta),
            Sl11Kind::Z(n) => zz((n + 1) / 2, D, Delta),
            Sl11Kind::ZBar(n) if n % 2 == 0 => zz(n / 2, D, D),
            Sl11Kind::ZBar(n) => zz((n + 1) / 2, Delta, D),
            Sl11Kind::IILambda(_) => None,
        }
    }

    fn from_mixed_kind(kind: IndecompKind) -> Sl11Kind {
        use Arrow::{Delta, D};
        let z = match kind {
            IndecompKind::Diamond => return Sl11Kind::III,
            IndecompKind::Zigzag { n, first: Delta, last: Delta } => Sl11Kind::Z(2 * n),
            IndecompKind::Zigzag { n, first: D, last: D } => Sl11Kind::ZBar(2 * n),
            IndecompKind::Zigzag { n, first: D, last: Delta } => Sl11Kind::Z(2 * n - 1),
            IndecompKind::Zigzag { n, first: Delta, last: D } => Sl11Kind::ZBar(2 * n - 1),
        };
        z.canonical().expect("nonzero length")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl11Module {
    space: GradedPair,
    /// `H` on each degree from `lo`.
    h: Vec<SparseMatrix>,
}

impl Sl11Module {
    /// Validates `Q_±² = 0`, `Q_+Q_- + Q_-Q_+ = H` and `[H, Q_±] = 0`.
    pub fn new(space: GradedPair, h: Vec<SparseMatrix>) -> Result<Self> {
        if h.len() != space.dims().len() || h.iter().zip(space.dims()).any(|(m, &d)| m.rows() != d || m.cols() != d) {
            return Err(Error::ShapeMismatch("H must be square on every degree".into()));
        }
        let v = Sl11Module { space, h };
        check_relations(&v.space, |p| Some(v.h(p))).map_err(|e| Error::InvalidModule(e.to_string().replace("d delta + delta d = 0", "Q+Q- + Q-Q+ = H")))?;
        for p in v.lo()..=v.hi() {
            if v.h(p + 1).mul(&v.space.up(p)) != v.space.up(p).mul(&v.h(p)) || v.h(p - 1).mul(&v.space.down(p)) != v.space.down(p).mul(&v.h(p)) {
                return Err(Error::InvalidModule(format!("H does not commute with Q at degree {p}")));
            }
        }
        Ok(v)
    }

    pub fn lo(&self) -> i64 {
        self.space.lo()
    }

    pub fn hi(&self) -> i64 {
        self.space.hi()
    }

    pub fn space(&self) -> &GradedPair {
        &self.space
    }

    pub fn total_dim(&self) -> usize {
        self.space.total_dim()
    }

    pub fn h(&self, p: i64) -> SparseMatrix {
        if p < self.lo() || p > self.hi() {
            let d = self.space.dim(p);
            return SparseMatrix::zeros(d, d);
        }
        self.h[(p - self.lo()) as usize].clone()
    }

    pub fn tensor(&self, other: &Sl11Module) -> Sl11Module {
        let space = self.space.tensor(&other.space);
        // H ⊗ 1 + 1 ⊗ H, block by block in the tensor basis order.
        let h = (space.lo()..=space.hi())
            .map(|n| {
                let blocks: Vec<SparseMatrix> = (self.lo()..=self.hi())
                    .filter(|&p| self.space.dim(p) * other.space.dim(n - p) > 0)
                    .map(|p| kron(&self.h(p), &SparseMatrix::identity(other.space.dim(n - p))).add(&kron(&SparseMatrix::identity(self.space.dim(p)), &other.h(n - p))))
                    .collect();
                SparseMatrix::block_diag(&blocks)
            })
            .collect();
        Sl11Module::new(space, h).expect("tensor product of modules")
    }

    /// `d = Q_+`, `δ = Q_-`; requires `H = 0`.
    pub fn to_mixed(&self) -> Result<MixedComplex> {
        if self.h.iter().any(|m| !m.is_zero()) {
            return Err(Error::HNonzero);
        }
        MixedComplex::from_pair(self.space.clone())
    }

    pub fn to_text(&self) -> String {
        let s = &self.space;
        let mut blocks = graded::nonzero_blocks("Q+", (s.lo()..s.hi()).map(|p| (p, s.up(p))));
        blocks.extend(graded::nonzero_blocks("Q-", (s.lo() + 1..=s.hi()).map(|p| (p, s.down(p)))));
        blocks.extend(graded::nonzero_blocks("H", (s.lo()..=s.hi()).map(|p| (p, self.h(p)))));
        Interchange { header: SL11_HEADER.into(), lo: s.lo(), dims: s.dims().to_vec(), blocks }.to_text()
    }

    pub fn parse(text: &str) -> Result<Sl11Module> {
        let ix = Interchange::parse(text)?;
        if ix.header != SL11_HEADER {
            return Err(Error::Parse(format!("expected header `{SL11_HEADER}`, got `{}`", ix.header)));
        }
        ix.check_names(&["Q+", "Q-", "H"])?;
        let n = ix.dims.len();
        let lo = ix.lo;
        let up = (0..n.saturating_sub(1)).map(|k| ix.operator("Q+", lo + k as i64, lo + k as i64 + 1)).collect::<Result<_>>()?;
        let down = (0..n.saturating_sub(1)).map(|k| ix.operator("Q-", lo + k as i64 + 1, lo + k as i64)).collect::<Result<_>>()?;
        let h: Vec<SparseMatrix> = (0..n).map(|k| ix.operator("H", lo + k as i64, lo + k as i64)).collect::<Result<_>>()?;
        let first = ix.dims.iter().position(|&d| d > 0).unwrap_or(n);
        let last = ix.dims.iter().rposition(|&d| d > 0).map_or(first, |l| l + 1);
        let space = GradedPair::new(lo, ix.dims.clone(), up, down)?;
        Sl11Module::new(space, h[first..last].to_vec())
    }
}

fn kron(a: &SparseMatrix, b: &SparseMatrix) -> SparseMatrix {
    let trip = a.entries().flat_map(|(i, j, x)| b.entries().map(move |(k, l, y)| (i * b.rows() + k, j * b.cols() + l, x * y)));
    SparseMatrix::from_triplets(a.rows() * b.rows(), a.cols() * b.cols(), trip.collect::<Vec<_>>())
}

/// The module of the given kind with its lowest vertex in degree 0.
pub fn sl11_module(kind: &Sl11Kind) -> Result<Sl11Module> {
    let kind = kind.clone().canonical()?;
    if let Sl11Kind::IILambda(l) = &kind {
        // Q_+ v_1 = v_2, Q_- v_2 = λ v_1.
        let space = GradedPair::new(0, vec![1, 1], vec![SparseMatrix::identity(1)], vec![SparseMatrix::identity(1).scale(l)])?;
        let h = vec![SparseMatrix::identity(1).scale(l); 2];
        return Sl11Module::new(space, h);
    }
    let mixed = IndecompLabel::new(kind.mixed_kind().ok_or_else(|| Error::UnknownLabel(kind.to_string()))?, 0).module();
    let h = mixed.space().dims().iter().map(|&d| SparseMatrix::zeros(d, d)).collect();
    Sl11Module::new(mixed.space().clone(), h)
}

/// The cyclic types with `λ` running over `lambdas`.
pub fn cyclic_kinds(lambdas: &[i64]) -> Vec<Sl11Kind> {
    let mut out = vec![Sl11Kind::I, Sl11Kind::IIPlus, Sl11Kind::IIMinus];
    out.extend(lambdas.iter().map(|&l| Sl11Kind::IILambda(rat(l))));
    out.extend([Sl11Kind::III0, Sl11Kind::III]);
    out
}

/// A summand found by [`sl11_decompose`], with its lowest degree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Sl11Summand {
    pub kind: Sl11Kind,
    pub offset: i64,
}

/// Restriction of `v` to the subspaces spanned by `basis[p - lo]`, which
/// must form a submodule.
fn restrict(v: &Sl11Module, lo: i64, basis: &[Vec<Vec<Rational>>]) -> Result<Sl11Module> {
    let dims: Vec<usize> = basis.iter().map(Vec::len).collect();
    let at = |p: i64| &basis[(p - lo) as usize];
    // Matrix of `op` from degree `p` to `target` in the chosen bases.
    let restricted = |op: &SparseMatrix, p: i64, target: i64| -> Result<SparseMatrix> {
        let b = SparseMatrix::from_columns(v.space.dim(target), at(target));
        let cols: Vec<Vec<Rational>> = at(p)
            .iter()
            .map(|x| solve(&b, &op.mul_vec(x)).ok_or_else(|| Error::DecompositionFailure(format!("eigenspace not stable at degree {target}"))))
            .collect::<Result<_>>()?;
        Ok(SparseMatrix::from_columns(at(target).len(), &cols))
    };
    let n = basis.len();
    let mut up = Vec::new();
    let mut down = Vec::new();
    for k in 0..n.saturating_sub(1) {
        let p = lo + k as i64;
        up.push(restricted(&v.space.up(p), p, p + 1)?);
        down.push(restricted(&v.space.down(p + 1), p + 1, p)?);
    }
    let h = (0..n).map(|k| restricted(&v.h(lo + k as i64), lo + k as i64, lo + k as i64)).collect::<Result<Vec<_>>>()?;
    let first = dims.iter().position(|&d| d > 0).unwrap_or(n);
    let last = dims.iter().rposition(|&d| d > 0).map_or(first, |l| l + 1);
    let space = GradedPair::new(lo, dims, up, down)?;
    Sl11Module::new(space, h[first..last].to_vec())
}

/// Indecomposable summands of a module whose `H` has its eigenvalues on the
/// diagonal (true for tensor products of the listed modules). The module
/// splits into generalized eigenspaces of `H`; on an eigenvalue `c ≠ 0`,
/// `H` must act as `c` and the block is a sum of `II_c`; the `H = 0` block is
/// a mixed complex and is decomposed as such.
pub fn sl11_decompose(v: &Sl11Module) -> Result<Vec<Sl11Summand>> {
    let (lo, hi) = (v.lo(), v.hi());
    let mut eigen: Vec<Rational> = Vec::new();
    for p in lo..=hi {
        let h = v.h(p);
        for i in 0..h.rows() {
            let c = h.get(i, i);
            if !eigen.contains(&c) {
                eigen.push(c);
            }
        }
    }
    eigen.sort();
    let mut out = Vec::new();
    let mut found = 0;
    for c in eigen {
        let basis: Vec<Vec<Vec<Rational>>> = (lo..=hi)
            .map(|p| {
                let d = v.space.dim(p);
                let shifted = v.h(p).add(&SparseMatrix::identity(d).scale(&-c.clone()));
                let mut power = SparseMatrix::identity(d);
                for _ in 0..d {
                    power = power.mul(&shifted);
                }
                if d == 0 {
                    Vec::new()
                } else {
                    kernel_basis(&power)
                }
            })
            .collect();
        let size: usize = basis.iter().map(Vec::len).sum();
        if size == 0 {
            continue;
        }
        found += size;
        let block = restrict(v, lo, &basis)?;
        if c.is_zero() {
            for label in decompose(&block.to_mixed()?)? {
                out.push(Sl11Summand { kind: Sl11Kind::from_mixed_kind(label.kind), offset: label.offset });
            }
        } else {
            for p in block.lo()..=block.hi() {
                let d = block.space.dim(p);
                if block.h(p) != SparseMatrix::identity(d).scale(&c) {
                    return Err(Error::DecompositionFailure(format!("H is not semisimple on the eigenvalue {c}")));
                }
            }
            // Each summand II_c has one vertex outside the image of Q_+, its
            // bottom one.
            for p in block.lo()..=block.hi() {
                let starts = block.space.dim(p) - rank(&block.space.up(p - 1));
                for _ in 0..starts {
                    out.push(Sl11Summand { kind: Sl11Kind::IILambda(c.clone()), offset: p });
                }
            }
        }
    }
    if found != v.total_dim() {
        return Err(Error::Unsupported("H has eigenvalues off the diagonal".into()));
    }
    out.sort();
    Ok(out)
}

/// Decomposition of `A ⊗ B` into indecomposables.
pub fn sl11_tensor_decompose(a: &Sl11Module, b: &Sl11Module) -> Result<Vec<Sl11Summand>> {
    sl11_decompose(&a.tensor(b))
}

/// The closed multiplication law of cyclic modules, as a sorted multiset.
pub fn sl11_tensor_table(a: &Sl11Kind, b: &Sl11Kind) -> Result<Vec<Sl11Kind>> {
    use Sl11Kind::*;
    let a = a.clone().canonical()?;
    let b = b.clone().canonical()?;
    for k in [&a, &b] {
        if !k.is_cyclic() || matches!(k, IILambda(l) if l.is_zero()) {
            return Err(Error::Unsupported(format!("{k} is not a cyclic type with λ ≠ 0")));
        }
    }
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    let n = |k: usize, kind: Sl11Kind| vec![kind; k];
    let mut out = match (&a, &b) {
        (I, v) | (v, I) => vec![v.clone()],
        (IILambda(l), IILambda(m)) => {
            let s = l + m;
            if s.is_zero() {
                vec![III]
            } else {
                n(2, IILambda(s))
            }
        }
        (IIPlus | IIMinus, IILambda(l)) => n(2, IILambda(l.clone())),
        (IIPlus, IIPlus) => n(2, IIPlus),
        (IIMinus, IIMinus) => n(2, IIMinus),
        (IIPlus, IIMinus) => vec![III],
        (IILambda(l), III0) => n(3, IILambda(l.clone())),
        (x @ (IIPlus | IIMinus), III0) => vec![x.clone(), III],
        (III0, III0) => vec![IIPlus, III0, I, I, IIMinus],
        (IILambda(l), III) => n(4, IILambda(l.clone())),
        (IIPlus | IIMinus, III) => n(2, III),
        (III0, III) => n(3, III),
        (III, III) => n(4, III),
        _ => unreachable!("ordered pair of cyclic kinds"),
    };
    out.sort();
    Ok(out)
}

/// `dim H^i(sl(1|1), V)` for `i < degree_cap`.
///
/// Cochains are `k[x, y] ⊗ Λ[t] ⊗ V` with `x, y` dual to `Q_+, Q_-` (even)
/// and `t` dual to `H` (odd), graded by total polynomial degree, with
/// `d = d_0 + (-1)^{t}(x Q_+ + y Q_-) - t H` and `d_0 t = xy`.
pub fn sl11_cohomology(v: &Sl11Module, degree_cap: usize) -> Result<Vec<usize>> {
    let (qp, qm) = v.space.total_operators();
    let off = v.space.offsets();
    let n = v.total_dim();
    let mut htot = Vec::new();
    for (k, p) in (v.lo()..=v.hi()).enumerate() {
        graded::place(&mut htot, off[k], off[k], &v.h(p));
    }
    let h = SparseMatrix::from_triplets(n, n, htot);
    // Monomials x^a y^b t^c of degree m, indexed in a fixed order.
    let monomials = |m: usize| -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for c in 0..=1.min(m) {
            for a in 0..=m - c {
                out.push((a, m - c - a, c));
            }
        }
        out
    };
    let differential = |m: usize| -> SparseMatrix {
        let src = monomials(m);
        let dst = monomials(m + 1);
        let index: BTreeMap<(usize, usize, usize), usize> = dst.iter().enumerate().map(|(i, &mono)| (mono, i)).collect();
        let mut trip = Vec::new();
        for (s, &(a, b, c)) in src.iter().enumerate() {
            let sign = if c == 1 { rat(-1) } else { rat(1) };
            let col = s * n;
            let mut put = |target: (usize, usize, usize), op: &SparseMatrix, coeff: Rational| {
                let t = index[&target] * n;
                trip.extend(op.entries().map(|(r, cc, x)| (t + r, col + cc, x * &coeff)));
            };
            if c == 1 {
                put((a + 1, b + 1, 0), &SparseMatrix::identity(n), rat(1));
            }
            put((a + 1, b, c), &qp, sign.clone());
            put((a, b + 1, c), &qm, sign);
            if c == 0 {
                put((a, b, 1), &h, rat(-1));
            }
        }
        SparseMatrix::from_triplets(dst.len() * n, src.len() * n, trip)
    };
    let maps: Vec<SparseMatrix> = (0..=degree_cap).map(differential).collect();
    for m in 0..degree_cap {
        if !maps[m + 1].mul(&maps[m]).is_zero() {
            return Err(Error::InvalidModule(format!("cochain differential does not square to zero at degree {m}")));
        }
    }
    let ranks: Vec<usize> = maps.iter().map(rank).collect();
    Ok((0..degree_cap).map(|m| monomials(m).len() * n - ranks[m] - if m > 0 { ranks[m - 1] } else { 0 }).collect())
}

/// `dim H(V, Q_+)` and `dim H(V, Q_-)`. Both are multiplicative under
/// tensor products (Künneth), which certifies or refutes a claimed
/// decomposition independently of [`sl11_decompose`].
pub fn q_cohomology(v: &Sl11Module) -> (usize, usize) {
    let (qp, qm) = v.space.total_operators();
    let n = v.total_dim();
    (n - 2 * rank(&qp), n - 2 * rank(&qm))
}

/// One product of cyclic types checked by brute force.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TensorCheck {
    pub left: String,
    pub right: String,
    pub computed: Vec<String>,
    pub table: Vec<String>,
    pub agree: bool,
    /// Whether the table's summands have the `Q_±`-cohomology that Künneth
    /// forces on the product.
    pub table_consistent: bool,
}

/// Brute-force decompositions of all ordered pairs of cyclic types against
/// the closed table.
pub fn tensor_table_checks(lambdas: &[i64]) -> Result<Vec<TensorCheck>> {
    let kinds = cyclic_kinds(lambdas);
    let mut out = Vec::new();
    for a in &kinds {
        for b in &kinds {
            let (ma, mb) = (sl11_module(a)?, sl11_module(b)?);
            let computed: Vec<Sl11Kind> = sl11_tensor_decompose(&ma, &mb)?.into_iter().map(|s| s.kind).collect();
            let mut sorted = computed.clone();
            sorted.sort();
            let table = sl11_tensor_table(a, b)?;
            let (pa, na) = q_cohomology(&ma);
            let (pb, nb) = q_cohomology(&mb);
            let mut table_q = (0, 0);
            for k in &table {
                let (p, n) = q_cohomology(&sl11_module(k)?);
                table_q = (table_q.0 + p, table_q.1 + n);
            }
            out.push(TensorCheck {
                left: a.to_string(),
                right: b.to_string(),
                agree: sorted == table,
                table_consistent: table_q == (pa * pb, na * nb),
                computed: sorted.iter().map(ToString::to_string).collect(),
                table: table.iter().map(ToString::to_string).collect(),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn module(t: &str) -> Sl11Module {
        sl11_module(&Sl11Kind::parse(t).unwrap()).unwrap()
    }

    #[test]
    fn trivial_module_is_one_dimensional() {
        let v = module("I");
        assert_eq!(v.total_dim(), 1);
        assert!(v.h(0).is_zero());
    }

    #[test]
    fn ii_lambda_has_scalar_h() {
        let v = module("II_3");
        assert_eq!(v.h(0), SparseMatrix::identity(1).scale(&rat(3)));
        assert_eq!(v.h(1), SparseMatrix::identity(1).scale(&rat(3)));
    }

    #[test]
    fn labels() {
        assert_eq!(Sl11Kind::parse("Z^1").unwrap(), Sl11Kind::I);
        assert_eq!(Sl11Kind::parse("Zbar^3").unwrap(), Sl11Kind::III0);
        assert_eq!(Sl11Kind::parse("Z^2").unwrap(), Sl11Kind::IIMinus);
        assert!(matches!(Sl11Kind::parse("IV"), Err(Error::UnknownLabel(_))));
        assert!(matches!(Sl11Kind::parse("Z^0"), Err(Error::UnknownLabel(_))));
        assert_eq!(Sl11Kind::parse("II_-1/2").unwrap().to_string(), "II_-1/2");
    }

    #[test]
    fn diamond_is_the_mixed_diamond() {
        let m = module("III").to_mixed().unwrap();
        assert_eq!(m, IndecompLabel::new(IndecompKind::Diamond, 0).module());
        let m = module("III0").to_mixed().unwrap();
        assert_eq!(decompose(&m).unwrap(), vec![IndecompLabel::new(IndecompKind::zigzag(2, Arrow::Delta, Arrow::D).unwrap(), 0)]);
        assert_eq!(module("II_1").to_mixed(), Err(Error::HNonzero));
    }

    #[test]
    fn tensor_examples() {
        let kinds = |a: &str, b: &str| -> Vec<Sl11Kind> {
            sl11_tensor_decompose(&module(a), &module(b)).unwrap().into_iter().map(|s| s.kind).collect()
        };
        assert_eq!(kinds("II_1", "II_-1"), vec![Sl11Kind::III]);
        assert_eq!(kinds("II+", "II-"), vec![Sl11Kind::III]);
        assert_eq!(kinds("III", "III"), vec![Sl11Kind::III; 4]);
        assert_eq!(kinds("II_1", "II_2"), vec![Sl11Kind::IILambda(rat(3)); 2]);
    }

    #[test]
    fn brute_force_against_table() {
        let checks = tensor_table_checks(&[1, -1, 2, -2, 3, -3]).unwrap();
        assert_eq!(checks.len(), 121);
        let mut disagreements = Vec::new();
        for check in &checks {
            // Every brute-force answer satisfies Künneth.
            let left = module(&check.left);
            let right = module(&check.right);
            let (p, n) = q_cohomology(&left.tensor(&right));
            let (pa, na) = q_cohomology(&left);
            let (pb, nb) = q_cohomology(&right);
            assert_eq!((p, n), (pa * pb, na * nb));
            if !check.agree {
                disagreements.push((check.left.clone(), check.right.clone(), check.table_consistent));
            }
        }
        // The only disagreement is III0 ⊗ III0, where the table's summands
        // have five-dimensional Q_+-cohomology against one for the product.
        assert_eq!(disagreements, vec![("III0".to_string(), "III0".to_string(), false)]);
        let line = checks.iter().find(|c| c.left == "III0" && c.right == "III0").unwrap();
        assert_eq!(line.computed, vec!["III", "Zbar^5"]);
    }

    #[test]
    fn cohomology_examples() {
        assert_eq!(sl11_cohomology(&module("I"), 6).unwrap(), vec![1, 2, 2, 2, 2, 2]);
        for l in [-3, -1, 1, 2] {
            assert_eq!(sl11_cohomology(&module(&format!("II_{l}")), 5).unwrap(), vec![0; 5]);
        }
        assert_eq!(sl11_cohomology(&module("III"), 6).unwrap(), vec![1, 1, 0, 0, 0, 0]);
    }

    #[test]
    fn relations_are_checked() {
        let space = GradedPair::new(0, vec![1, 1], vec![SparseMatrix::identity(1)], vec![SparseMatrix::identity(1)]).unwrap();
        assert!(matches!(Sl11Module::new(space, vec![SparseMatrix::zeros(1, 1); 2]), Err(Error::InvalidModule(_))));
    }

    #[test]
    fn interchange_round_trip() {
        let v = module("II_2").tensor(&module("III0"));
        assert_eq!(Sl11Module::parse(&v.to_text()).unwrap(), v);
    }
}
