//! Generating functions of Euler characteristics: the factorized rational
//! function `Phi_pi`, its Laurent expansions in the regions `U_pi`, the ratio
//! law between shuffles, the closed sector formula for the coefficients and
//! the delta-function re-expansion across a wall.
//!
//! A monomial `s^lambda` is indexed by the coordinate weight `lambda`; the
//! factor `(1 - s_a/s_b)` contributes the exponent `e_a - e_b`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::characters::{partitions_up_to, schur_polynomial};
use crate::error::{Error, Result};
use crate::exact_linalg::Rational;
use crate::root_data::{
    adjacent_transposition, add_weights, arc_crossing_sign, bijections, delta_pi, root_pairs, root_weight,
    sector_membership, ParabolicShape, SectorSpec, Shuffle, Weight, WeightBox,
};

/// Largest N accepted by the sector formula (N! bijections).
pub const MAX_SECTOR_N: usize = 6;

/// `sign * s^exponent`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignedMonomial {
    pub sign: i64,
    pub exponent: Weight,
}

impl SignedMonomial {
    pub fn one(dim: usize) -> Self {
        SignedMonomial { sign: 1, exponent: vec![0; dim] }
    }

    pub fn mul(&self, other: &SignedMonomial) -> SignedMonomial {
        SignedMonomial { sign: self.sign * other.sign, exponent: add_weights(&self.exponent, &other.exponent) }
    }

    pub fn evaluate(&self, s: &[Rational]) -> Rational {
        let mut v = Rational::from_integer(BigInt::from(self.sign));
        for (x, &e) in s.iter().zip(&self.exponent) {
            v *= pow(x, e);
        }
        v
    }
}

impl fmt::Display for SignedMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.sign < 0 { "-" } else { "+" };
        write!(f, "{sign}s^{:?}", self.exponent)
    }
}

fn pow(x: &Rational, e: i64) -> Rational {
    let mut v = Rational::one();
    for _ in 0..e.unsigned_abs() {
        v *= x;
    }
    if e < 0 {
        v.recip()
    } else {
        v
    }
}

/// `prefactor * prod_num (1 - s_a/s_b) / prod_den (1 - s_a/s_b)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalFactorization {
    pub dim: usize,
    pub numerator: Vec<(usize, usize)>,
    pub denominator: Vec<(usize, usize)>,
    pub prefactor: SignedMonomial,
}

impl RationalFactorization {
    pub fn mul(&self, other: &RationalFactorization) -> Result<RationalFactorization> {
        if self.dim != other.dim {
            return Err(Error::ShapeMismatch(format!("{} vs {} variables", self.dim, other.dim)));
        }
        Ok(RationalFactorization {
            dim: self.dim,
            numerator: self.numerator.iter().chain(&other.numerator).copied().collect(),
            denominator: self.denominator.iter().chain(&other.denominator).copied().collect(),
            prefactor: self.prefactor.mul(&other.prefactor),
        })
    }

    pub fn times_monomial(&self, m: &SignedMonomial) -> RationalFactorization {
        RationalFactorization { prefactor: self.prefactor.mul(m), ..self.clone() }
    }

    /// The same function with every factor `(1 - s_a/s_b)` rewritten so that
    /// `a` comes strictly before `b` in `positions`, using
    /// `1 - s_a/s_b = -(s_a/s_b)(1 - s_b/s_a)`.
    pub fn oriented(&self, positions: &[usize]) -> RationalFactorization {
        let mut pre = self.prefactor.clone();
        let mut flip = |(a, b): (usize, usize), into_den: bool| {
            if positions[a] > positions[b] {
                pre.sign = -pre.sign;
                let d = if into_den { -1 } else { 1 };
                pre.exponent[a] += d;
                pre.exponent[b] -= d;
                (b, a)
            } else {
                (a, b)
            }
        };
        let numerator = self.numerator.iter().map(|&f| flip(f, false)).collect();
        let denominator = self.denominator.iter().map(|&f| flip(f, true)).collect();
        RationalFactorization { dim: self.dim, numerator, denominator, prefactor: pre }
    }

    /// Value at a point; `None` on a pole.
    pub fn evaluate(&self, s: &[Rational]) -> Option<Rational> {
        let factor = |&(a, b): &(usize, usize)| Rational::one() - &s[a] / &s[b];
        let mut v = self.prefactor.evaluate(s);
        for f in &self.numerator {
            v *= factor(f);
        }
        for f in &self.denominator {
            let d = factor(f);
            if d.is_zero() {
                return None;
            }
            v /= d;
        }
        Some(v)
    }
}

/// `Phi_pi`: even pairs in the numerator, odd pairs positive for the shuffle
/// in the denominator, over the coordinates of the shape.
pub fn phi_rational(shape: &ParabolicShape) -> RationalFactorization {
    let mut numerator = Vec::new();
    let mut denominator = Vec::new();
    for (p, q) in root_pairs(shape) {
        if shape.coord_parity(p) == shape.coord_parity(q) {
            numerator.push((p, q));
        } else {
            denominator.push((p, q));
        }
    }
    RationalFactorization { dim: shape.dim(), numerator, denominator, prefactor: SignedMonomial::one(shape.dim()) }
}

/// Position of each coordinate in the order defining `U_pi`.
pub fn region_positions(shape: &ParabolicShape) -> Vec<usize> {
    (0..shape.dim()).map(|c| shape.coord_position(c)).collect()
}

/// `Phi_pi' / Phi_pi` for two shuffles of the same blocks: a product over
/// the odd block pairs whose order is reversed.
pub fn ratio_monomial(shape: &ParabolicShape, pi_prime: &Shuffle) -> Result<SignedMonomial> {
    let pi = shape.shuffle();
    if pi.m() != pi_prime.m() || pi.n() != pi_prime.n() {
        return Err(Error::ShapeMismatch(format!("{pi} and {pi_prime} shuffle different blocks")));
    }
    let mut out = SignedMonomial::one(shape.dim());
    for a in 0..shape.num_blocks() {
        for b in 0..shape.num_blocks() {
            let odd = shape.block_parity(a) != shape.block_parity(b);
            if odd && pi.precedes(a, b) && pi_prime.precedes(b, a) {
                out = out.mul(&block_swap_monomial(shape, a, b));
            }
        }
    }
    Ok(out)
}

/// The single-step ratio `(-1)^{m_a m_b} prod s_a^{m_b} / prod s_b^{m_a}` for
/// adjacent shuffles, `a` before `b` in the first.
pub fn adjacent_ratio_monomial(shape: &ParabolicShape, pi_prime: &Shuffle) -> Result<SignedMonomial> {
    let (a, b) = adjacent_transposition(shape.shuffle(), pi_prime)?;
    Ok(block_swap_monomial(shape, a, b))
}

fn block_swap_monomial(shape: &ParabolicShape, a: usize, b: usize) -> SignedMonomial {
    let (ma, mb) = (shape.block_size(a) as i64, shape.block_size(b) as i64);
    let mut exponent = vec![0; shape.dim()];
    for c in shape.block_range(a) {
        exponent[c] += mb;
    }
    for c in shape.block_range(b) {
        exponent[c] -= ma;
    }
    SignedMonomial { sign: if (ma * mb) % 2 == 0 { 1 } else { -1 }, exponent }
}

/// Laurent series coefficients known exactly inside a box. Coefficients
/// outside the box are not claimed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentTable {
    support: BTreeMap<Weight, BigInt>,
    bounds: WeightBox,
}

impl LaurentTable {
    pub fn new(bounds: WeightBox) -> Self {
        LaurentTable { support: BTreeMap::new(), bounds }
    }

    /// Terms outside `bounds` are dropped; repeated weights are summed.
    pub fn from_terms(bounds: WeightBox, terms: impl IntoIterator<Item = (Weight, BigInt)>) -> Self {
        let mut support: BTreeMap<Weight, BigInt> = BTreeMap::new();
        for (w, c) in terms {
            if bounds.contains(&w) {
                *support.entry(w).or_default() += c;
            }
        }
        support.retain(|_, c| !c.is_zero());
        LaurentTable { support, bounds }
    }

    pub fn dim(&self) -> usize {
        self.bounds.dim()
    }

    pub fn bounds(&self) -> &WeightBox {
        &self.bounds
    }

    pub fn support(&self) -> &BTreeMap<Weight, BigInt> {
        &self.support
    }

    /// Coefficient at `lambda`, or `None` if `lambda` is outside the box.
    pub fn coefficient(&self, lambda: &[i64]) -> Option<BigInt> {
        if !self.bounds.contains(lambda) {
            return None;
        }
        Some(self.support.get(lambda).cloned().unwrap_or_default())
    }

    pub fn max_abs(&self) -> BigInt {
        self.support.values().map(|c| c.abs()).max().unwrap_or_default()
    }

    pub fn restrict(&self, to: &WeightBox) -> Result<LaurentTable> {
        let inside = to.lo.iter().zip(&self.bounds.lo).all(|(a, b)| a >= b)
            && to.hi.iter().zip(&self.bounds.hi).all(|(a, b)| a <= b);
        if to.dim() != self.dim() || !inside {
            return Err(Error::BoxTooSmall(format!("{to} is not inside {}", self.bounds)));
        }
        Ok(LaurentTable::from_terms(to.clone(), self.support.iter().map(|(w, c)| (w.clone(), c.clone()))))
    }

    fn intersection(&self, other: &LaurentTable) -> WeightBox {
        WeightBox {
            lo: self.bounds.lo.iter().zip(&other.bounds.lo).map(|(a, b)| *a.max(b)).collect(),
            hi: self.bounds.hi.iter().zip(&other.bounds.hi).map(|(a, b)| *a.min(b)).collect(),
        }
    }

    /// Difference over the intersection of the two boxes.
    pub fn sub(&self, other: &LaurentTable) -> LaurentTable {
        let b = self.intersection(other);
        let terms = self
            .support
            .iter()
            .map(|(w, c)| (w.clone(), c.clone()))
            .chain(other.support.iter().map(|(w, c)| (w.clone(), -c.clone())));
        LaurentTable::from_terms(b, terms)
    }

    pub fn add(&self, other: &LaurentTable) -> LaurentTable {
        let b = self.intersection(other);
        let terms = self.support.iter().chain(&other.support).map(|(w, c)| (w.clone(), c.clone()));
        LaurentTable::from_terms(b, terms)
    }

    /// Multiplication by a signed monomial; the box moves with it.
    pub fn shifted(&self, m: &SignedMonomial) -> LaurentTable {
        let bounds = WeightBox { lo: add_weights(&self.bounds.lo, &m.exponent), hi: add_weights(&self.bounds.hi, &m.exponent) };
        let support = self
            .support
            .iter()
            .map(|(w, c)| (add_weights(w, &m.exponent), c * BigInt::from(m.sign)))
            .collect();
        LaurentTable { support, bounds }
    }

    /// Whether two tables agree on the intersection of their boxes.
    pub fn agrees_with(&self, other: &LaurentTable) -> bool {
        self.sub(other).support.is_empty()
    }

    /// One line `lo..hi` for the box, then `weight<TAB>coefficient` per
    /// nonzero term in lexicographic order.
    pub fn to_text(&self) -> String {
        let j = |w: &[i64]| w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let mut s = format!("{}..{}\n", j(&self.bounds.lo), j(&self.bounds.hi));
        for (w, c) in &self.support {
            s.push_str(&format!("{}\t{}\n", j(w), c));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<LaurentTable> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty table".into()))?;
        let (lo, hi) = header.split_once("..").ok_or_else(|| Error::Parse(format!("bad box line {header:?}")))?;
        let bounds = WeightBox { lo: parse_weight(lo)?, hi: parse_weight(hi)? };
        if bounds.lo.len() != bounds.hi.len() {
            return Err(Error::Parse(format!("bad box line {header:?}")));
        }
        let mut terms = Vec::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let (w, c) = line.split_once('\t').ok_or_else(|| Error::Parse(format!("bad record {line:?}")))?;
            let w = parse_weight(w)?;
            if !bounds.contains(&w) {
                return Err(Error::Parse(format!("record {line:?} outside the box")));
            }
            let c: BigInt = c.trim().parse().map_err(|_| Error::Parse(format!("bad coefficient in {line:?}")))?;
            terms.push((w, c));
        }
        Ok(LaurentTable::from_terms(bounds, terms))
    }
}

fn parse_weight(text: &str) -> Result<Weight> {
    let t = text.trim();
    if t.is_empty() {
        return Ok(Vec::new());
    }
    t.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|e| Error::Parse(format!("{x:?}: {e}"))))
        .collect()
}

/// Cut functionals `f_t(w) = sum of w_x over coordinates with position <= t`.
struct CutBounds {
    positions: Vec<usize>,
    levels: Vec<usize>,
    upper: Vec<i64>,
}

impl CutBounds {
    fn new(positions: &[usize], bounds: &WeightBox) -> Self {
        let mut levels: Vec<usize> = positions.to_vec();
        levels.sort_unstable();
        levels.dedup();
        let mut me = CutBounds { positions: positions.to_vec(), levels, upper: Vec::new() };
        me.upper = me.eval(&bounds.hi);
        me
    }

    fn eval(&self, w: &[i64]) -> Vec<i64> {
        self.levels
            .iter()
            .map(|&t| self.positions.iter().zip(w).filter(|(p, _)| **p <= t).map(|(_, x)| x).sum())
            .collect()
    }

    fn admissible(&self, w: &[i64]) -> bool {
        self.eval(w).iter().zip(&self.upper).all(|(v, u)| v <= u)
    }
}

/// Laurent expansion of `f` in the region where `|s_a| < |s_b|` whenever
/// `positions[a] < positions[b]`, complete inside `bounds`.
///
/// Every factor, once oriented, multiplies by series whose exponents do not
/// decrease any cut functional, so terms whose cuts already exceed the box
/// can be dropped without losing a coefficient inside it.
pub fn expand_in_region(f: &RationalFactorization, positions: &[usize], bounds: &WeightBox) -> Result<LaurentTable> {
    if positions.len() != f.dim || bounds.dim() != f.dim {
        return Err(Error::ShapeMismatch(format!("{} variables, {} positions, box of dim {}", f.dim, positions.len(), bounds.dim())));
    }
    for &(a, b) in &f.denominator {
        if positions[a] >= positions[b] {
            return Err(Error::NonExpandableFactor { a, b });
        }
    }
    for &(a, b) in &f.numerator {
        if positions[a] == positions[b] {
            return Err(Error::NonExpandableFactor { a, b });
        }
    }
    let g = f.oriented(positions);
    let cuts = CutBounds::new(positions, bounds);
    let mut terms: HashMap<Weight, BigInt> = HashMap::new();
    if cuts.admissible(&g.prefactor.exponent) {
        terms.insert(g.prefactor.exponent.clone(), BigInt::from(g.prefactor.sign));
    }
    let root = |a: usize, b: usize| root_weight(f.dim, a, b);
    for &(a, b) in &g.numerator {
        let r = root(a, b);
        let mut next = terms.clone();
        for (w, c) in &terms {
            let v = add_weights(w, &r);
            if cuts.admissible(&v) {
                *next.entry(v).or_default() -= c;
            }
        }
        next.retain(|_, c| !c.is_zero());
        terms = next;
    }
    for &(a, b) in &g.denominator {
        let r = root(a, b);
        let mut next: HashMap<Weight, BigInt> = HashMap::new();
        for (w, c) in &terms {
            let mut v = w.clone();
            while cuts.admissible(&v) {
                *next.entry(v.clone()).or_default() += c;
                v = add_weights(&v, &r);
            }
        }
        next.retain(|_, c| !c.is_zero());
        terms = next;
    }
    Ok(LaurentTable::from_terms(bounds.clone(), terms))
}

/// `F_pi` inside the box: `Phi_pi` expanded in `U_pi`.
pub fn euler_series(shape: &ParabolicShape, bounds: &WeightBox) -> Result<LaurentTable> {
    expand_in_region(&phi_rational(shape), &region_positions(shape), bounds)
}

/// Value of the sector formula and whether it lies in `{0, ±1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FormulaValue {
    pub value: i64,
    pub in_range: bool,
}

/// `sum over bijections phi of I^phi_pi(mu)`.
pub fn sector_sum(pi: &Shuffle, mu: &[i64]) -> Result<i64> {
    let n = pi.m();
    if pi.n() != n {
        return Err(Error::Unsupported(format!("sector formula needs an (N,N)-shuffle, got ({},{})", pi.m(), pi.n())));
    }
    if n > MAX_SECTOR_N {
        return Err(Error::Unsupported(format!("sector formula supports N <= {MAX_SECTOR_N}, got {n}")));
    }
    if mu.len() != 2 * n {
        return Err(Error::ShapeMismatch(format!("weight of length {} for N = {n}", mu.len())));
    }
    let mut total = 0;
    for phi in bijections(n) {
        let spec = SectorSpec::new(phi, pi.clone())?;
        if sector_membership(mu, &spec) {
            total += arc_crossing_sign(&spec);
        }
    }
    Ok(total)
}

/// Closed formula for the coefficient of `s^lambda` in `F_pi`, `pi` an
/// (N,N)-shuffle: the sector sum at `lambda - delta^{pi_1} + delta^pi` with
/// `pi_1` the alternating shuffle.
pub fn euler_coefficient_formula(pi: &Shuffle, lambda: &[i64]) -> Result<FormulaValue> {
    let pi_1 = Shuffle::alternating(pi.m());
    let mu: Weight = lambda
        .iter()
        .zip(delta_pi(&pi_1))
        .zip(delta_pi(pi))
        .map(|((l, a), b)| l - a + b)
        .collect();
    let value = sector_sum(pi, &mu)?;
    Ok(FormulaValue { value, in_range: value.abs() <= 1 })
}

/// Embed a Borel shuffle of gl(M|N) into gl(K|K), K = max(M, N), by adding
/// coordinates of the smaller parity in front of everything: as the first
/// indices of that parity, at the first positions. Returns the padded
/// shuffle and the index of each original coordinate.
pub fn pad_to_square(pi: &Shuffle) -> (Shuffle, Vec<usize>) {
    let (m, n) = (pi.m(), pi.n());
    let k = m.max(n);
    let extra = k - m.min(n);
    let mut pos = vec![0; 2 * k];
    let mut index = Vec::with_capacity(m + n);
    for x in 0..m + n {
        let new = if m >= n && x < m { x } else { x + extra };
        index.push(new);
        pos[new] = pi.position(x) + extra;
    }
    let first_padded = if m < n { 0 } else { m };
    for t in 0..extra {
        pos[first_padded + t] = t;
    }
    (Shuffle::new(k, k, pos).expect("padding keeps a shuffle"), index)
}

/// The sector formula for any Borel shuffle of gl(M|N), through the square
/// padding: coefficients of the padded series free of the new variables.
pub fn borel_coefficient_formula(pi: &Shuffle, lambda: &[i64]) -> Result<FormulaValue> {
    let (padded, index) = pad_to_square(pi);
    let mut w = vec![0; padded.len()];
    for (x, &v) in lambda.iter().enumerate() {
        w[index[x]] = v;
    }
    euler_coefficient_formula(&padded, &w)
}

/// Multiplicity of `sigma_{alpha^(1)}(s_1)...sigma_{alpha^(k)}(s_k)` in `F_pi`
/// for a parabolic shape, via the Borel refinement and the leading monomial
/// `alpha + rho - rho*` of `sigma_alpha * prod_{p<q}(1 - s_p/s_q)`.
pub fn schur_coefficient_formula(shape: &ParabolicShape, alpha: &[i64]) -> Result<i64> {
    if alpha.len() != shape.dim() {
        return Err(Error::ShapeMismatch(format!("weight of length {} for dimension {}", alpha.len(), shape.dim())));
    }
    if !shape.is_block_dominant(alpha) {
        return Err(Error::NotBlockDominant(alpha.to_vec()));
    }
    let refined = shape.refine();
    let shift: Weight = shape.block_rho().iter().zip(shape.block_rho_star()).map(|(a, b)| a - b).collect();
    let mu = add_weights(alpha, &shift);
    let sign_exp: usize = shape.block_sizes().iter().map(|m| m * (m.saturating_sub(1)) / 2).sum();
    let v = borel_coefficient_formula(refined.shuffle(), &mu)?.value;
    Ok(if sign_exp % 2 == 0 { v } else { -v })
}

/// The (N-1,N-1)-shuffle ordering the coordinates other than `i` and `j`
/// (one even, one odd) by their positions, and the old index of each new
/// coordinate.
pub fn monotone_relabel(pi: &Shuffle, i: usize, j: usize) -> Result<(Shuffle, Vec<usize>)> {
    if pi.is_odd_index(i) == pi.is_odd_index(j) {
        return Err(Error::NotAdjacent(format!("indices {i} and {j} of {pi} have the same parity")));
    }
    let keep: Vec<usize> = (0..pi.len()).filter(|&x| x != i && x != j).collect();
    let mut order: Vec<usize> = keep.iter().map(|&x| pi.position(x)).collect();
    order.sort_unstable();
    let pos: Vec<usize> = keep.iter().map(|&x| order.binary_search(&pi.position(x)).unwrap()).collect();
    let tau = Shuffle::new(pi.m() - 1, pi.n() - 1, pos)?;
    Ok((tau, keep))
}

/// `F_tau(rest) * delta(s_i / s_j)` with the delta-series kept symbolic.
#[derive(Clone, Debug)]
pub struct DeltaProduct {
    pub base: LaurentTable,
    /// Coordinate of the full space carrying each coordinate of `base`.
    pub embedding: Vec<usize>,
    pub first: usize,
    pub second: usize,
}

impl DeltaProduct {
    /// Coefficient at `lambda`, `None` if the projected weight is outside the
    /// base box.
    pub fn coefficient(&self, lambda: &[i64]) -> Option<BigInt> {
        let rest: Weight = self.embedding.iter().map(|&x| lambda[x]).collect();
        let c = self.base.coefficient(&rest)?;
        Some(if lambda[self.first] + lambda[self.second] == 0 { c } else { BigInt::zero() })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaReport {
    pub pi: String,
    pub pi_prime: String,
    pub tau: String,
    /// Weights compared for `F_pi - G_pi' = F_tau delta(s_i/s_j)`.
    pub delta_weights: usize,
    pub delta_failures: Vec<Weight>,
    /// Weights compared for `F_pi' = -(s_i/s_j) G_pi'`.
    pub ratio_weights: usize,
    pub ratio_failures: Vec<Weight>,
}

impl DeltaReport {
    pub fn passed(&self) -> bool {
        self.delta_failures.is_empty() && self.ratio_failures.is_empty()
    }
}

/// Re-expansion of `Phi_pi` across the wall `s_i = s_j` separating `U_pi` from
/// `U_pi'`, for adjacent (N,N)-shuffles.
pub fn delta_reexpansion_check(pi: &Shuffle, pi_prime: &Shuffle, bounds: &WeightBox) -> Result<DeltaReport> {
    let (i, j) = adjacent_transposition(pi, pi_prime)?;
    let n = pi.m();
    if pi.n() != n {
        return Err(Error::Unsupported("re-expansion check needs (N,N)-shuffles".into()));
    }
    let shape = ParabolicShape::borel(n, n, pi.clone())?;
    let shape_p = ParabolicShape::borel(n, n, pi_prime.clone())?;
    let phi = phi_rational(&shape);
    let pos_p = region_positions(&shape_p);
    let f_pi = expand_in_region(&phi, &region_positions(&shape), bounds)?;
    let g = expand_in_region(&phi.oriented(&pos_p), &pos_p, bounds)?;
    let (tau, keep) = monotone_relabel(pi, i, j)?;
    let sub_box = WeightBox {
        lo: keep.iter().map(|&x| bounds.lo[x]).collect(),
        hi: keep.iter().map(|&x| bounds.hi[x]).collect(),
    };
    let f_tau = if n == 1 {
        LaurentTable::from_terms(sub_box, [(Vec::new(), BigInt::one())])
    } else {
        euler_series(&ParabolicShape::borel(n - 1, n - 1, tau.clone())?, &sub_box)?
    };
    let delta = DeltaProduct { base: f_tau, embedding: keep, first: i, second: j };
    let diff = f_pi.sub(&g);
    let mut report = DeltaReport {
        pi: pi.to_string(),
        pi_prime: pi_prime.to_string(),
        tau: tau.to_string(),
        delta_weights: 0,
        delta_failures: Vec::new(),
        ratio_weights: 0,
        ratio_failures: Vec::new(),
    };
    for lambda in bounds.points() {
        report.delta_weights += 1;
        let lhs = diff.coefficient(&lambda).expect("inside the box");
        let rhs = delta.coefficient(&lambda).expect("projection inside the box");
        if lhs != rhs {
            report.delta_failures.push(lambda);
        }
    }
    let f_prime = expand_in_region(&phi_rational(&shape_p), &pos_p, bounds)?;
    let mut step = SignedMonomial::one(2 * n);
    step.sign = -1;
    step.exponent[i] += 1;
    step.exponent[j] -= 1;
    let rhs = g.shifted(&step);
    for lambda in bounds.points() {
        if let (Some(a), Some(b)) = (f_prime.coefficient(&lambda), rhs.coefficient(&lambda)) {
            report.ratio_weights += 1;
            if a != b {
                report.ratio_failures.push(lambda);
            }
        }
    }
    Ok(report)
}

/// `prod_{i<=a, j<=b} (1 - u_i/v_j)^{-1} = sum_alpha sigma_alpha(u) sigma_alpha(v^{-1})`
/// coefficientwise through total u-degree `p_max`.
pub fn cauchy_check(a: usize, b: usize, p_max: usize) -> Result<bool> {
    let dim = a + b;
    let p = p_max as i64;
    let bounds = WeightBox {
        lo: (0..dim).map(|x| if x < a { 0 } else { -p }).collect(),
        hi: (0..dim).map(|x| if x < a { p } else { 0 }).collect(),
    };
    let positions: Vec<usize> = (0..dim).map(|x| usize::from(x >= a)).collect();
    let f = RationalFactorization {
        dim,
        numerator: Vec::new(),
        denominator: (0..a).flat_map(|i| (a..dim).map(move |j| (i, j))).collect(),
        prefactor: SignedMonomial::one(dim),
    };
    let lhs = expand_in_region(&f, &positions, &bounds)?;
    let mut rhs: BTreeMap<Weight, BigInt> = BTreeMap::new();
    for alpha in partitions_up_to(p_max, a.min(b)) {
        let pad = |len: usize| {
            let mut v: Weight = alpha.iter().map(|&x| x as i64).collect();
            v.resize(len, 0);
            v
        };
        if a == 0 || b == 0 {
            if alpha.is_empty() {
                rhs.insert(vec![0; dim], BigInt::one());
            }
            continue;
        }
        let su = schur_polynomial(&pad(a), a)?;
        let sv = schur_polynomial(&pad(b), b)?;
        for (wu, cu) in su.support() {
            for (wv, cv) in sv.support() {
                let w: Weight = wu.iter().copied().chain(wv.iter().map(|x| -x)).collect();
                *rhs.entry(w).or_default() += cu * cv;
            }
        }
    }
    let degree = |w: &[i64]| w[..a].iter().sum::<i64>();
    for w in bounds.points() {
        if degree(&w) > p {
            continue;
        }
        let l = lhs.coefficient(&w).expect("inside the box");
        let r = rhs.get(&w).cloned().unwrap_or_default();
        if l != r {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ce_cohomology::super_euler_at_weight;
    use crate::exact_linalg::rat_frac;
    use crate::lie_superalgebra::build_nilradical;
    use proptest::prelude::*;

    fn borel(m: usize, n: usize, one_based: &[usize]) -> ParabolicShape {
        ParabolicShape::borel(m, n, Shuffle::from_one_based(m, n, one_based).unwrap()).unwrap()
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn phi_for_small_borels() {
        let f = phi_rational(&borel(1, 1, &[1, 2]));
        assert_eq!((f.numerator.clone(), f.denominator.clone()), (vec![], vec![(0, 1)]));
        let f = phi_rational(&borel(2, 0, &[1, 2]));
        assert_eq!((f.numerator.clone(), f.denominator.clone()), (vec![(0, 1)], vec![]));
    }

    #[test]
    fn standard_borel_numerators_are_vandermonde() {
        let f = phi_rational(&borel(2, 2, &[1, 2, 3, 4]));
        assert_eq!(f.numerator, vec![(0, 1), (2, 3)]);
        let mut den = f.denominator.clone();
        den.sort();
        assert_eq!(den, vec![(0, 2), (0, 3), (1, 2), (1, 3)]);
    }

    #[test]
    fn geometric_series_in_box() {
        let f = phi_rational(&borel(1, 1, &[1, 2]));
        let t = expand_in_region(&f, &[0, 1], &WeightBox::cube(2, -3, 3)).unwrap();
        let expected: BTreeMap<Weight, BigInt> = (0..=3).map(|p| (vec![p, -p], big(1))).collect();
        assert_eq!(t.support(), &expected);
    }

    #[test]
    fn opposing_denominator_is_rejected() {
        let f = phi_rational(&borel(1, 1, &[1, 2]));
        assert_eq!(
            expand_in_region(&f, &[1, 0], &WeightBox::cube(2, -1, 1)),
            Err(Error::NonExpandableFactor { a: 0, b: 1 })
        );
    }

    #[test]
    fn gl11_ratio() {
        let shape = borel(1, 1, &[1, 2]);
        let q = Shuffle::from_one_based(1, 1, &[2, 1]).unwrap();
        assert_eq!(ratio_monomial(&shape, &q).unwrap(), SignedMonomial { sign: -1, exponent: vec![1, -1] });
    }

    #[test]
    fn block_ratio_sign_and_exponent() {
        let shape = ParabolicShape::parse("2|1", "1,2").unwrap();
        let q = Shuffle::from_one_based(1, 1, &[2, 1]).unwrap();
        let r = adjacent_ratio_monomial(&shape, &q).unwrap();
        assert_eq!(r, SignedMonomial { sign: 1, exponent: vec![1, 1, -2] });
        assert_eq!(ratio_monomial(&shape, &q).unwrap(), r);
    }

    #[test]
    fn ratio_law_holds_pointwise() {
        let points = [
            vec![rat_frac(2, 3), rat_frac(5, 7), rat_frac(-3, 11), rat_frac(13, 4)],
            vec![rat_frac(1, 9), rat_frac(7, 2), rat_frac(3, 5), rat_frac(-8, 3)],
        ];
        for pi in Shuffle::all(2, 2) {
            let shape = ParabolicShape::borel(2, 2, pi.clone()).unwrap();
            for q in Shuffle::all(2, 2) {
                let r = ratio_monomial(&shape, &q).unwrap();
                let lhs = phi_rational(&ParabolicShape::borel(2, 2, q).unwrap());
                for s in &points {
                    let a = lhs.evaluate(s).unwrap();
                    let b = phi_rational(&shape).evaluate(s).unwrap() * r.evaluate(s);
                    assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn series_matches_cochain_super_euler() {
        for shape in ParabolicShape::all_of_dim(3) {
            let bx = WeightBox::cube(3, -2, 2);
            let t = euler_series(&shape, &bx).unwrap();
            let alg = build_nilradical(&shape);
            for w in bx.points() {
                let c = super_euler_at_weight(&alg, &w).unwrap();
                assert_eq!(t.coefficient(&w).unwrap(), big(c), "{shape} at {w:?}");
            }
        }
    }

    #[test]
    fn sector_formula_n1() {
        let e = Shuffle::identity(1, 1);
        for p in -3..=3 {
            for q in -3..=3 {
                let v = euler_coefficient_formula(&e, &[p, q]).unwrap().value;
                assert_eq!(v, i64::from(p >= 0 && q == -p), "{p},{q}");
            }
        }
    }

    #[test]
    fn sector_formula_matches_cochains_gl22() {
        let bx = WeightBox::cube(4, -2, 2);
        for pi in Shuffle::all(2, 2) {
            let alg = build_nilradical(&ParabolicShape::borel(2, 2, pi.clone()).unwrap());
            for w in bx.points() {
                let f = euler_coefficient_formula(&pi, &w).unwrap();
                assert!(f.in_range);
                assert_eq!(f.value, super_euler_at_weight(&alg, &w).unwrap(), "{pi} at {w:?}");
            }
        }
    }

    #[test]
    fn sector_formula_n6_is_supported_and_n7_rejected() {
        let pi = Shuffle::alternating(6);
        assert!(euler_coefficient_formula(&pi, &[0; 12]).is_ok());
        let pi = Shuffle::alternating(7);
        assert!(matches!(euler_coefficient_formula(&pi, &[0; 14]), Err(Error::Unsupported(_))));
    }

    #[test]
    fn padded_formula_matches_rectangular_borels() {
        for (m, n) in [(1, 2), (2, 1), (1, 3), (3, 1)] {
            let bx = WeightBox::cube(m + n, -2, 2);
            for pi in Shuffle::all(m, n) {
                let t = euler_series(&ParabolicShape::borel(m, n, pi.clone()).unwrap(), &bx).unwrap();
                for w in bx.points() {
                    let f = borel_coefficient_formula(&pi, &w).unwrap().value;
                    assert_eq!(big(f), t.coefficient(&w).unwrap(), "{pi} ({m}|{n}) at {w:?}");
                }
            }
        }
    }

    #[test]
    fn schur_formula_trivial_class() {
        for shape in ParabolicShape::all_of_dim(3) {
            assert_eq!(schur_coefficient_formula(&shape, &[0, 0, 0]).unwrap(), 1, "{shape}");
        }
    }

    #[test]
    fn schur_formula_rejects_non_dominant() {
        let shape = ParabolicShape::parse("2|", "1").unwrap();
        assert_eq!(schur_coefficient_formula(&shape, &[0, 1]), Err(Error::NotBlockDominant(vec![0, 1])));
    }

    #[test]
    fn gl11_schur_pattern() {
        let shape = ParabolicShape::parse("1|1", "1,2").unwrap();
        for p in 0..4 {
            assert_eq!(schur_coefficient_formula(&shape, &[p, -p]).unwrap(), 1);
            assert_eq!(schur_coefficient_formula(&shape, &[-p - 1, p + 1]).unwrap(), 0);
        }
    }

    #[test]
    fn delta_identity_n1() {
        let e = Shuffle::identity(1, 1);
        let q = Shuffle::from_one_based(1, 1, &[2, 1]).unwrap();
        let r = delta_reexpansion_check(&e, &q, &WeightBox::cube(2, -3, 3)).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.tau, "");
    }

    #[test]
    fn delta_identity_n2_from_alternating() {
        let pi = Shuffle::alternating(2);
        for q in crate::ce_cohomology::odd_reflection::adjacent_shuffles(&pi) {
            let r = delta_reexpansion_check(&pi, &q, &WeightBox::cube(4, -2, 2)).unwrap();
            assert!(r.passed(), "{r:?}");
            assert!(r.ratio_weights > 0);
        }
    }

    #[test]
    fn tau_is_a_shuffle() {
        let pi = Shuffle::from_one_based(2, 2, &[1, 3, 2, 4]).unwrap();
        let (tau, keep) = monotone_relabel(&pi, 1, 2).unwrap();
        assert_eq!(keep, vec![0, 3]);
        assert_eq!(tau.one_based(), vec![1, 2]);
    }

    #[test]
    fn cauchy_identities() {
        assert!(cauchy_check(1, 1, 5).unwrap());
        assert!(cauchy_check(2, 2, 4).unwrap());
        assert!(cauchy_check(2, 3, 3).unwrap());
    }

    #[test]
    fn text_round_trip() {
        let t = euler_series(&borel(2, 1, &[1, 3, 2]), &WeightBox::cube(3, -2, 2)).unwrap();
        let back = LaurentTable::from_text(&t.to_text()).unwrap();
        assert_eq!(back, t);
        assert!(t.to_text().lines().nth(1).unwrap().contains('\t'));
    }

    #[test]
    fn restrict_outside_is_box_too_small() {
        let t = euler_series(&borel(1, 1, &[1, 2]), &WeightBox::cube(2, -1, 1)).unwrap();
        assert!(matches!(t.restrict(&WeightBox::cube(2, -2, 2)), Err(Error::BoxTooSmall(_))));
    }

    fn shuffle_strategy(m: usize, n: usize) -> impl Strategy<Value = Shuffle> {
        let all = Shuffle::all(m, n);
        (0..all.len()).prop_map(move |k| all[k].clone())
    }

    fn gl_shuffle() -> impl Strategy<Value = Shuffle> {
        prop_oneof![shuffle_strategy(1, 2), shuffle_strategy(2, 1), shuffle_strategy(2, 2), shuffle_strategy(1, 3)]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn expansions_in_every_region_are_unit(pi in gl_shuffle(), k in 0usize..24) {
            let (m, n) = (pi.m(), pi.n());
            let all = Shuffle::all(m, n);
            let region = ParabolicShape::borel(m, n, all[k % all.len()].clone()).unwrap();
            let pos = region_positions(&region);
            let phi = phi_rational(&ParabolicShape::borel(m, n, pi).unwrap()).oriented(&pos);
            let t = expand_in_region(&phi, &pos, &WeightBox::cube(m + n, -2, 2)).unwrap();
            prop_assert!(t.max_abs() <= BigInt::one());
        }

        #[test]
        fn ratio_law_in_target_region(pi in gl_shuffle(), k in 0usize..24) {
            let (m, n) = (pi.m(), pi.n());
            let all = Shuffle::all(m, n);
            let q = all[k % all.len()].clone();
            let shape = ParabolicShape::borel(m, n, pi).unwrap();
            let shape_q = ParabolicShape::borel(m, n, q.clone()).unwrap();
            let pos = region_positions(&shape_q);
            let bx = WeightBox::cube(m + n, -2, 2);
            let lhs = euler_series(&shape_q, &bx).unwrap();
            let r = ratio_monomial(&shape, &q).unwrap();
            let inner = expand_in_region(&phi_rational(&shape).oriented(&pos), &pos, &bx.grow(2)).unwrap();
            prop_assert!(lhs.agrees_with(&inner.shifted(&r)));
        }

        #[test]
        fn dropping_a_smallest_variable(pi in prop_oneof![shuffle_strategy(1, 2), shuffle_strategy(1, 1), shuffle_strategy(2, 3)]) {
            // F^{M,N} is the part of F^{M+1,N} free of the new first variable.
            let (m, n) = (pi.m(), pi.n());
            let pos: Vec<usize> = std::iter::once(0).chain(pi.positions().iter().map(|p| p + 1)).collect();
            let big_pi = Shuffle::new(m + 1, n, pos).unwrap();
            let bx = WeightBox::cube(m + n, -2, 2);
            let small = euler_series(&ParabolicShape::borel(m, n, pi).unwrap(), &bx).unwrap();
            let mut lo = vec![0]; lo.extend(&bx.lo);
            let mut hi = vec![0]; hi.extend(&bx.hi);
            let large = euler_series(&ParabolicShape::borel(m + 1, n, big_pi).unwrap(), &WeightBox { lo, hi }).unwrap();
            for w in bx.points() {
                let mut v = vec![0]; v.extend(&w);
                prop_assert_eq!(small.coefficient(&w), large.coefficient(&v));
            }
        }
    }

    #[test]
    fn region_product_law() {
        // Phi_e(gl(2|1)) = [(1 - s1/s2)] * [1 / ((1 - s1/s3)(1 - s2/s3))]: the
        // expansion of the product is the convolution of the expansions.
        let pos = vec![0, 1, 2];
        let num = RationalFactorization { dim: 3, numerator: vec![(0, 1)], denominator: vec![], prefactor: SignedMonomial::one(3) };
        let den = RationalFactorization { dim: 3, numerator: vec![], denominator: vec![(0, 2), (1, 2)], prefactor: SignedMonomial::one(3) };
        let bx = WeightBox::cube(3, -2, 2);
        let whole = expand_in_region(&num.mul(&den).unwrap(), &pos, &bx).unwrap();
        // Cuts of every term lie between 0 and the cuts of the target, so
        // every contributing exponent lies in [-4, 4]^3.
        let wide = WeightBox::cube(3, -4, 4);
        let a = expand_in_region(&num, &pos, &wide).unwrap();
        let b = expand_in_region(&den, &pos, &wide).unwrap();
        let mut conv: BTreeMap<Weight, BigInt> = BTreeMap::new();
        for (wa, ca) in a.support() {
            for (wb, cb) in b.support() {
                *conv.entry(add_weights(wa, wb)).or_default() += ca * cb;
            }
        }
        let conv = LaurentTable::from_terms(bx.clone(), conv);
        assert_eq!(conv, whole);
    }
}
