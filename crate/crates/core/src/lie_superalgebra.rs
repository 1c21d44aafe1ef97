//! Finite-dimensional Lie superalgebras given by structure constants, and the
//! concrete algebras built from matrix units: nilradicals of parabolics,
//! the algebra interpolating two adjacent Borels, its invariant ideal, and
//! sl(1|1).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact_linalg::{kernel_basis, rat, Rational, SparseMatrix};
use crate::root_data::{adjacent_transposition, root_pairs, root_weight, ParabolicShape, Parity, Shuffle, Weight};

/// Weight of the maximal torus acting on a cochain of bookkeeping weight `w`.
///
/// Basis elements and their dual cochain generators are both labelled by the
/// weight of the matrix unit, `e_p - e_q` for `E_pq`; the torus acts on the
/// dual generator by the opposite character.
pub fn torus_weight(w: &[i64]) -> Weight {
    w.iter().map(|x| -x).collect()
}

/// Sparse vector in a basis: sorted (index, coefficient) pairs, no zeros.
pub type SparseVec = Vec<(usize, Rational)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperLie {
    labels: Vec<String>,
    weights: Vec<Weight>,
    parities: Vec<Parity>,
    grading: Option<Vec<i64>>,
    /// Shuffle position of each weight coordinate when the weights of all
    /// basis elements are positive for the induced order.
    coordinate_positions: Option<Vec<usize>>,
    brackets: Vec<Vec<SparseVec>>,
}

fn normalize(mut v: SparseVec) -> SparseVec {
    v.sort_by_key(|(i, _)| *i);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (i, c) in v {
        match out.last_mut() {
            Some((j, d)) if *j == i => *d += c,
            _ => out.push((i, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

fn sign(bit: u8) -> Rational {
    if bit % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

impl SuperLie {
    pub fn new(
        labels: Vec<String>,
        weights: Vec<Weight>,
        parities: Vec<Parity>,
        grading: Option<Vec<i64>>,
        brackets: Vec<Vec<SparseVec>>,
    ) -> Result<Self> {
        let n = labels.len();
        let ok = weights.len() == n
            && parities.len() == n
            && grading.as_ref().map_or(true, |g| g.len() == n)
            && brackets.len() == n
            && brackets.iter().all(|row| row.len() == n);
        if !ok {
            return Err(Error::ShapeMismatch("inconsistent SuperLie tables".into()));
        }
        let brackets = brackets
            .into_iter()
            .map(|row| row.into_iter().map(normalize).collect())
            .collect();
        Ok(SuperLie { labels, weights, parities, grading, coordinate_positions: None, brackets })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, k: usize) -> &str {
        &self.labels[k]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn weight(&self, k: usize) -> &Weight {
        &self.weights[k]
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn parity(&self, k: usize) -> Parity {
        self.parities[k]
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }

    pub fn grading(&self) -> Option<&[i64]> {
        self.grading.as_deref()
    }

    pub fn weight_dim(&self) -> usize {
        self.weights.first().map_or(0, Vec::len)
    }

    pub fn coordinate_positions(&self) -> Option<&[usize]> {
        self.coordinate_positions.as_deref()
    }

    pub fn with_coordinate_positions(mut self, pos: Vec<usize>) -> Self {
        self.coordinate_positions = Some(pos);
        self
    }

    pub fn bracket(&self, a: usize, b: usize) -> &SparseVec {
        &self.brackets[a][b]
    }

    pub fn set_bracket(&mut self, a: usize, b: usize, v: SparseVec) {
        self.brackets[a][b] = normalize(v);
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.iter().all(|row| row.iter().all(Vec::is_empty))
    }

    /// Bracket extended bilinearly to sparse vectors.
    pub fn bracket_vecs(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut out = Vec::new();
        for (a, ca) in x {
            for (b, cb) in y {
                let coef = ca * cb;
                for (c, s) in &self.brackets[*a][*b] {
                    out.push((*c, &coef * s));
                }
            }
        }
        normalize(out)
    }

    /// Canonical text used for content hashing.
    pub fn canonical_text(&self) -> String {
        let mut s = String::new();
        for k in 0..self.dim() {
            let _ = writeln!(
                s,
                "{}|{:?}|{}|{:?}",
                self.labels[k],
                self.weights[k],
                self.parities[k].bit(),
                self.grading.as_ref().map(|g| g[k])
            );
        }
        let _ = writeln!(s, "pos {:?}", self.coordinate_positions);
        for a in 0..self.dim() {
            for b in 0..self.dim() {
                for (c, v) in &self.brackets[a][b] {
                    let _ = writeln!(s, "{a},{b}->{c}:{v}");
                }
            }
        }
        s
    }

    pub fn super_antisymmetric(&self) -> bool {
        (0..self.dim()).all(|a| {
            (0..self.dim()).all(|b| {
                let s = -sign(self.parities[a].bit() * self.parities[b].bit());
                let flipped: SparseVec =
                    self.brackets[b][a].iter().map(|(c, v)| (*c, v * &s)).collect();
                normalize(flipped) == self.brackets[a][b]
            })
        })
    }

    /// Weight and parity additivity of every nonzero bracket.
    pub fn respects_gradings(&self) -> bool {
        (0..self.dim()).all(|a| {
            (0..self.dim()).all(|b| {
                self.brackets[a][b].iter().all(|(c, _)| {
                    let w: Weight =
                        self.weights[a].iter().zip(&self.weights[b]).map(|(x, y)| x + y).collect();
                    w == self.weights[*c]
                        && self.parities[a].add(self.parities[b]) == self.parities[*c]
                        && self.grading.as_ref().map_or(true, |g| g[a] + g[b] == g[*c])
                })
            })
        })
    }

    /// Subalgebra spanned by the given basis elements; fails if not closed.
    pub fn restrict(&self, keep: &[usize]) -> Result<SuperLie> {
        let mut index = BTreeMap::new();
        for (new, &old) in keep.iter().enumerate() {
            index.insert(old, new);
        }
        let mut brackets = vec![vec![Vec::new(); keep.len()]; keep.len()];
        for (na, &a) in keep.iter().enumerate() {
            for (nb, &b) in keep.iter().enumerate() {
                let mut v = Vec::new();
                for (c, s) in &self.brackets[a][b] {
                    let nc = index.get(c).ok_or_else(|| {
                        Error::InvalidModule(format!("span not closed: [{},{}]", self.labels[a], self.labels[b]))
                    })?;
                    v.push((*nc, s.clone()));
                }
                brackets[na][nb] = v;
            }
        }
        SuperLie::new(
            keep.iter().map(|&k| self.labels[k].clone()).collect(),
            keep.iter().map(|&k| self.weights[k].clone()).collect(),
            keep.iter().map(|&k| self.parities[k]).collect(),
            self.grading.as_ref().map(|g| keep.iter().map(|&k| g[k]).collect()),
            brackets,
        )
    }
}

/// Graded Jacobi identity
/// `[a,[b,c]] = [[a,b],c] + (-1)^{|a||b|} [b,[a,c]]` on all basis triples,
/// together with super-antisymmetry.
pub fn verify_jacobi(alg: &SuperLie) -> bool {
    if !alg.super_antisymmetric() {
        return false;
    }
    let n = alg.dim();
    let unit = |k: usize| vec![(k, Rational::one())];
    for a in 0..n {
        for b in 0..n {
            let ab = alg.bracket(a, b).clone();
            let s = sign(alg.parity(a).bit() * alg.parity(b).bit());
            for c in 0..n {
                let lhs = alg.bracket_vecs(&unit(a), alg.bracket(b, c));
                let first = alg.bracket_vecs(&ab, &unit(c));
                let second = alg.bracket_vecs(&unit(b), alg.bracket(a, c));
                let mut rhs = first;
                rhs.extend(second.into_iter().map(|(k, v)| (k, v * &s)));
                if normalize(rhs) != lhs {
                    return false;
                }
            }
        }
    }
    true
}

/// A matrix in gl(m|n) as sparse entries (row, col, value).
type MatrixEntries = Vec<(usize, usize, Rational)>;

/// Supercommutator of two homogeneous supermatrices with given parities.
fn supercommutator(x: &MatrixEntries, px: Parity, y: &MatrixEntries, py: Parity) -> MatrixEntries {
    let mut acc: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
    for (r1, c1, v1) in x {
        for (r2, c2, v2) in y {
            if c1 == r2 {
                *acc.entry((*r1, *c2)).or_insert_with(Rational::zero) += v1 * v2;
            }
        }
    }
    let s = sign(px.bit() * py.bit());
    for (r2, c2, v2) in y {
        for (r1, c1, v1) in x {
            if c2 == r1 {
                *acc.entry((*r2, *c1)).or_insert_with(Rational::zero) -= &s * v2 * v1;
            }
        }
    }
    acc.into_iter().filter(|(_, v)| !v.is_zero()).map(|((r, c), v)| (r, c, v)).collect()
}

/// Lie superalgebra spanned by homogeneous supermatrices that is closed
/// under the supercommutator. Brackets are expressed in the basis by exact
/// linear solving.
fn from_matrix_basis(
    labels: Vec<String>,
    basis: Vec<MatrixEntries>,
    parities: Vec<Parity>,
    weights: Vec<Weight>,
    grading: Option<Vec<i64>>,
) -> Result<SuperLie> {
    let n = basis.len();
    // Flatten each basis matrix into a vector over the positions used.
    let mut positions: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for m in &basis {
        for (r, c, _) in m {
            let next = positions.len();
            positions.entry((*r, *c)).or_insert(next);
        }
    }
    let columns: Vec<Vec<Rational>> = basis
        .iter()
        .map(|m| {
            let mut v = vec![Rational::zero(); positions.len()];
            for (r, c, x) in m {
                v[positions[&(*r, *c)]] += x;
            }
            v
        })
        .collect();
    let a = SparseMatrix::from_columns(positions.len(), &columns);
    let mut brackets = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let prod = supercommutator(&basis[i], parities[i], &basis[j], parities[j]);
            if prod.is_empty() {
                continue;
            }
            let mut rhs = vec![Rational::zero(); positions.len()];
            for (r, c, x) in &prod {
                let p = positions.get(&(*r, *c)).ok_or_else(|| {
                    Error::InvalidModule(format!("span not closed under [{},{}]", labels[i], labels[j]))
                })?;
                rhs[*p] += x;
            }
            let sol = crate::exact_linalg::solve(&a, &rhs).ok_or_else(|| {
                Error::InvalidModule(format!("span not closed under [{},{}]", labels[i], labels[j]))
            })?;
            brackets[i][j] = sol.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect();
        }
    }
    SuperLie::new(labels, weights, parities, grading, brackets)
}

fn unit_label(p: usize, q: usize) -> String {
    format!("e{},{}", p + 1, q + 1)
}

/// Nilradical of the parabolic: matrix units E_pq with the block of p
/// strictly before the block of q, in the global basis order.
pub fn build_nilradical(shape: &ParabolicShape) -> SuperLie {
    nilradical_with_grading(shape, None)
}

fn nilradical_with_grading(shape: &ParabolicShape, block_degrees: Option<&[i64]>) -> SuperLie {
    let m = shape.dim();
    let pairs = root_pairs(shape);
    let parity = |p: usize, q: usize| shape.coord_parity(p).add(shape.coord_parity(q));
    let labels = pairs.iter().map(|&(p, q)| unit_label(p, q)).collect();
    let basis = pairs.iter().map(|&(p, q)| vec![(p, q, Rational::one())]).collect();
    let parities = pairs.iter().map(|&(p, q)| parity(p, q)).collect();
    let weights = pairs.iter().map(|&(p, q)| root_weight(m, p, q)).collect();
    let grading = block_degrees.map(|deg| {
        pairs
            .iter()
            .map(|&(p, q)| deg[shape.block_of(q)] - deg[shape.block_of(p)])
            .collect()
    });
    let positions = (0..m).map(|c| shape.coord_position(c)).collect();
    from_matrix_basis(labels, basis, parities, weights, grading)
        .expect("matrix units of a nilradical close under the bracket")
        .with_coordinate_positions(positions)
}

/// A graded vector space given as (degree, dimension) pairs, turned into a
/// parabolic shape: even degrees give even blocks, odd degrees odd blocks,
/// each in increasing degree, and the shuffle orders blocks by degree.
#[derive(Clone, Debug)]
pub struct GradedSpace {
    pub shape: ParabolicShape,
    /// Degree of each block in block index order.
    pub block_degrees: Vec<i64>,
}

impl GradedSpace {
    pub fn new(spaces: &[(i64, usize)]) -> Result<Self> {
        let mut nonzero: Vec<(i64, usize)> = spaces.iter().copied().filter(|(_, d)| *d > 0).collect();
        nonzero.sort();
        if nonzero.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Parse("repeated degree in graded space".into()));
        }
        let even: Vec<(i64, usize)> = nonzero.iter().copied().filter(|(i, _)| i.rem_euclid(2) == 0).collect();
        let odd: Vec<(i64, usize)> = nonzero.iter().copied().filter(|(i, _)| i.rem_euclid(2) == 1).collect();
        let block_degrees: Vec<i64> = even.iter().chain(&odd).map(|(i, _)| *i).collect();
        let mut sorted = block_degrees.clone();
        sorted.sort();
        let positions = block_degrees
            .iter()
            .map(|d| sorted.binary_search(d).unwrap())
            .collect();
        let shuffle = Shuffle::new(even.len(), odd.len(), positions)?;
        let shape = ParabolicShape::new(
            even.iter().map(|(_, d)| *d).collect(),
            odd.iter().map(|(_, d)| *d).collect(),
            shuffle,
        )?;
        Ok(GradedSpace { shape, block_degrees })
    }

    /// Coordinate range of the block of the given degree.
    pub fn coords_of_degree(&self, degree: i64) -> Option<std::ops::Range<usize>> {
        let b = self.block_degrees.iter().position(|&d| d == degree)?;
        Some(self.shape.block_range(b))
    }

    pub fn nilradical(&self) -> SuperLie {
        nilradical_with_grading(&self.shape, Some(&self.block_degrees))
    }
}

/// The algebra spanned by two adjacent Borel nilradicals, the invariant part
/// of their intersection, and the distinguished elements.
#[derive(Clone, Debug)]
pub struct Interpolating {
    pub l: SuperLie,
    pub j: SuperLie,
    /// Index in `l` of each basis element of `j`.
    pub j_in_l: Vec<usize>,
    pub h: usize,
    /// `e_ij`, positive for the first shuffle.
    pub x: usize,
    /// `e_ji`, positive for the second shuffle.
    pub y: usize,
    /// The exchanged indices (i before j in the first shuffle).
    pub i: usize,
    pub jdx: usize,
}

/// Build L = span(n_pi, n_pi') for adjacent Borel shuffles of gl(M|N), and the
/// subalgebra J of sl(1|1)-invariants in n_pi ∩ n_pi'.
pub fn build_interpolating_l(pi: &Shuffle, pi_prime: &Shuffle) -> Result<Interpolating> {
    let (i, j) = adjacent_transposition(pi, pi_prime)?;
    let shape = ParabolicShape::borel(pi.m(), pi.n(), pi.clone())?;
    let shape_p = ParabolicShape::borel(pi.m(), pi.n(), pi_prime.clone())?;
    let m = shape.dim();
    let common: Vec<(usize, usize)> = root_pairs(&shape)
        .into_iter()
        .filter(|&(p, q)| !(p == i && q == j))
        .collect();
    debug_assert!(common.iter().all(|pq| root_pairs(&shape_p).contains(pq)));
    let par = |p: usize| shape.coord_parity(p);
    let mut labels: Vec<String> = Vec::new();
    let mut basis: Vec<MatrixEntries> = Vec::new();
    let mut parities = Vec::new();
    let mut weights = Vec::new();
    for &(p, q) in &common {
        labels.push(unit_label(p, q));
        basis.push(vec![(p, q, Rational::one())]);
        parities.push(par(p).add(par(q)));
        weights.push(root_weight(m, p, q));
    }
    let x = basis.len();
    labels.push(unit_label(i, j));
    basis.push(vec![(i, j, Rational::one())]);
    parities.push(Parity::Odd);
    weights.push(root_weight(m, i, j));
    let y = basis.len();
    labels.push(unit_label(j, i));
    basis.push(vec![(j, i, Rational::one())]);
    parities.push(Parity::Odd);
    weights.push(root_weight(m, j, i));
    let h = basis.len();
    let hmat = supercommutator(&basis[x], Parity::Odd, &basis[y], Parity::Odd);
    labels.push("h".into());
    basis.push(hmat);
    parities.push(Parity::Even);
    weights.push(vec![0; m]);
    let l = from_matrix_basis(labels, basis, parities, weights, None)?;

    // J: elements of the intersection killed by ad x and ad y.
    let k = common.len();
    let mut trip = Vec::new();
    for (row_block, e) in [x, y].into_iter().enumerate() {
        for c in 0..k {
            for (t, v) in l.bracket(e, c) {
                trip.push((row_block * l.dim() + t, c, v.clone()));
            }
        }
    }
    let ad = SparseMatrix::from_triplets(2 * l.dim(), k, trip);
    let ker = kernel_basis(&ad);
    let avoid: Vec<usize> = (0..k)
        .filter(|&c| {
            let (p, q) = common[c];
            p != i && p != j && q != i && q != j
        })
        .collect();
    let avoid_span_matches = ker.len() == avoid.len()
        && ker.iter().all(|v| v.iter().enumerate().all(|(c, x)| x.is_zero() || avoid.contains(&c)));
    if !avoid_span_matches {
        return Err(Error::InvalidModule(
            "invariants of the intersection are not spanned by matrix units avoiding i, j".into(),
        ));
    }
    let jalg = l.restrict(&avoid)?.with_coordinate_positions(pi.positions().to_vec());
    Ok(Interpolating { l, j: jalg, j_in_l: avoid, h, x, y, i, jdx: j })
}

/// sl(1|1) with basis Q+, Q-, H; `[Q+,Q-] = H`, H central. Weights are those
/// of e12, e21 and e11+e22 in gl(1|1).
pub fn sl11() -> SuperLie {
    let labels = vec!["Q+".to_string(), "Q-".to_string(), "H".to_string()];
    let mut brackets = vec![vec![Vec::new(); 3]; 3];
    brackets[0][1] = vec![(2, rat(1))];
    brackets[1][0] = vec![(2, rat(1))];
    SuperLie::new(
        labels,
        vec![vec![1, -1], vec![-1, 1], vec![0, 0]],
        vec![Parity::Odd, Parity::Odd, Parity::Even],
        None,
        brackets,
    )
    .expect("sl(1|1) tables are consistent")
}
