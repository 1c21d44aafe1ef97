//! Characters of Levi subgroups: Schur polynomials, the even Kostant formula,
//! multiplicities of Schur products in a weight table, and the
//! simple-spectrum verdict on cohomology tables.
//!
//! Cohomology tables are keyed by bookkeeping weights; the Levi acts on a
//! class of bookkeeping weight `w` by the torus weight `-w`
//! ([`crate::lie_superalgebra::torus_weight`]), and decompositions of
//! cohomology are taken in torus weights.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::ce_cohomology::{cohomology_table, CohomTable, SweepOptions};
use crate::error::{Error, Result};
use crate::euler_series::LaurentTable;
use crate::lie_superalgebra::{build_nilradical, torus_weight};
use crate::root_data::{permutation_sign, permutations, ParabolicShape, Weight, WeightBox};

/// One dominant weight per Levi block.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PartitionSeq {
    pub blocks: Vec<Vec<i64>>,
}

impl PartitionSeq {
    pub fn from_weight(block_sizes: &[usize], w: &[i64]) -> Result<Self> {
        if block_sizes.iter().sum::<usize>() != w.len() {
            return Err(Error::ShapeMismatch(format!("weight {w:?} for blocks {block_sizes:?}")));
        }
        let mut blocks = Vec::with_capacity(block_sizes.len());
        let mut start = 0;
        for &m in block_sizes {
            let b = w[start..start + m].to_vec();
            if b.windows(2).any(|p| p[0] < p[1]) {
                return Err(Error::NotBlockDominant(w.to_vec()));
            }
            blocks.push(b);
            start += m;
        }
        Ok(PartitionSeq { blocks })
    }

    pub fn weight(&self) -> Weight {
        self.blocks.concat()
    }
}

fn is_dominant(w: &[i64]) -> bool {
    w.windows(2).all(|p| p[0] >= p[1])
}

/// Partitions of size at most `total` with at most `max_parts` parts, in
/// lexicographic order; the empty partition first.
pub fn partitions_up_to(total: usize, max_parts: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, cap: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        if parts == 0 {
            return;
        }
        for p in 1..=left.min(cap) {
            cur.push(p);
            rec(left - p, p, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, total, max_parts, &mut Vec::new(), &mut out);
    out
}

/// Weight multiplicities of the irreducible GL(n)-module with highest weight
/// `alpha`, by the branching rule to GL(n-1). Negative entries are handled by
/// twisting with a power of the determinant.
pub fn schur_polynomial(alpha: &[i64], num_vars: usize) -> Result<LaurentTable> {
    let mut a = alpha.to_vec();
    if a.len() > num_vars {
        return Err(Error::ShapeMismatch(format!("{} parts for {num_vars} variables", a.len())));
    }
    a.resize(num_vars, 0);
    if !is_dominant(&a) {
        return Err(Error::NotDominant(alpha.to_vec()));
    }
    let twist = a.last().copied().unwrap_or(0);
    let part: Vec<i64> = a.iter().map(|x| x - twist).collect();
    let mut terms: BTreeMap<Weight, BigInt> = BTreeMap::new();
    branch(&part, &mut Vec::new(), &mut terms);
    let lo = a.last().copied().unwrap_or(0);
    let hi = a.first().copied().unwrap_or(0);
    let bounds = WeightBox::cube(num_vars, lo, hi);
    Ok(LaurentTable::from_terms(
        bounds,
        terms.into_iter().map(|(w, c)| (w.into_iter().map(|x| x + twist).collect(), c)),
    ))
}

/// Exponents are built from the last variable backwards.
fn branch(lambda: &[i64], suffix: &mut Vec<i64>, out: &mut BTreeMap<Weight, BigInt>) {
    let n = lambda.len();
    if n == 0 {
        let mut w = suffix.clone();
        w.reverse();
        *out.entry(w).or_default() += BigInt::one();
        return;
    }
    if n == 1 {
        suffix.push(lambda[0]);
        branch(&[], suffix, out);
        suffix.pop();
        return;
    }
    let total: i64 = lambda.iter().sum();
    let mut mu = vec![0; n - 1];
    interlace(lambda, 0, &mut mu, &mut |mu| {
        suffix.push(total - mu.iter().sum::<i64>());
        branch(mu, suffix, out);
        suffix.pop();
    });
}

fn interlace(lambda: &[i64], k: usize, mu: &mut Vec<i64>, f: &mut dyn FnMut(&[i64])) {
    if k == mu.len() {
        f(mu);
        return;
    }
    for v in lambda[k + 1]..=lambda[k] {
        mu[k] = v;
        interlace(lambda, k + 1, mu, f);
    }
}

/// `rho` on each block: `(m-1, ..., 0)`.
fn blockwise_rho(block_sizes: &[usize]) -> Weight {
    block_sizes.iter().flat_map(|&m| (0..m as i64).rev()).collect()
}

/// Each element of the product of the blocks' symmetric groups, as a
/// permutation of coordinates with its sign.
fn block_weyl_group(block_sizes: &[usize]) -> Vec<(Vec<usize>, i64)> {
    let mut out = vec![(Vec::new(), 1i64)];
    let mut start = 0;
    for &m in block_sizes {
        let perms = permutations(m);
        let mut next = Vec::with_capacity(out.len() * perms.len());
        for (p, s) in &out {
            for q in &perms {
                let mut r = p.clone();
                r.extend(q.iter().map(|x| x + start));
                next.push((r, s * permutation_sign(q)));
            }
        }
        out = next;
        start += m;
    }
    out
}

/// `w(alpha + rho) - rho` for every block Weyl element, with signs.
fn dot_orbit(block_sizes: &[usize], alpha: &[i64]) -> Vec<(Weight, i64)> {
    let rho = blockwise_rho(block_sizes);
    let shifted: Weight = alpha.iter().zip(&rho).map(|(a, r)| a + r).collect();
    block_weyl_group(block_sizes)
        .into_iter()
        .map(|(perm, sign)| (perm.iter().enumerate().map(|(k, &src)| shifted[src] - rho[k]).collect(), sign))
        .collect()
}

/// Even Kostant formula for the nilradical with the given blocks and
/// coefficients in the irreducible gl(m)-module of highest weight `beta`:
/// one class `(l(w), w(beta + rho) - rho)` per block shuffle `w`, in torus
/// weights.
pub fn kostant_formula(block_sizes: &[usize], beta: &[i64]) -> Result<Vec<(usize, Weight)>> {
    let m: usize = block_sizes.iter().sum();
    if beta.len() != m {
        return Err(Error::ShapeMismatch(format!("weight {beta:?} for blocks {block_sizes:?}")));
    }
    if !is_dominant(beta) {
        return Err(Error::NotDominant(beta.to_vec()));
    }
    let rho: Weight = (0..m as i64).rev().collect();
    let shifted: Weight = beta.iter().zip(&rho).map(|(a, r)| a + r).collect();
    let mut out = Vec::new();
    for perm in permutations(m) {
        let v: Weight = perm.iter().map(|&src| shifted[src]).collect();
        let mut start = 0;
        let mut ok = true;
        for &b in block_sizes {
            ok &= v[start..start + b].windows(2).all(|p| p[0] > p[1]);
            start += b;
        }
        if ok {
            let length = (0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b))).filter(|&(a, b)| perm[a] > perm[b]).count();
            let w: Weight = v.iter().zip(&rho).map(|(x, r)| x - r).collect();
            out.push((length, w));
        }
    }
    out.sort();
    Ok(out)
}

/// Multiplicity of the Schur product with highest weight `alpha` in a
/// block-symmetric weight table, by the Weyl alternating sum. Weights absent
/// from the table but inside `bounds` count as zero.
pub fn schur_multiplicity(
    table: &BTreeMap<Weight, i64>,
    block_sizes: &[usize],
    bounds: &WeightBox,
    alpha: &[i64],
) -> Result<i64> {
    PartitionSeq::from_weight(block_sizes, alpha)?;
    let mut total = 0;
    for (w, sign) in dot_orbit(block_sizes, alpha) {
        if !bounds.contains(&w) {
            return Err(Error::BoxTooSmall(format!("orbit weight {w:?} of {alpha:?} is outside {bounds}")));
        }
        total += sign * table.get(&w).copied().unwrap_or(0);
    }
    Ok(total)
}

/// Multiplicities of every Schur product whose dot-orbit lies in `bounds`.
/// Zero multiplicities are omitted.
pub fn decompose_into_schur_products(
    table: &BTreeMap<Weight, i64>,
    block_sizes: &[usize],
    bounds: &WeightBox,
) -> Result<BTreeMap<PartitionSeq, i64>> {
    let mut out = BTreeMap::new();
    for alpha in bounds.points() {
        let Ok(seq) = PartitionSeq::from_weight(block_sizes, &alpha) else { continue };
        if dot_orbit(block_sizes, &alpha).iter().any(|(w, _)| !bounds.contains(w)) {
            continue;
        }
        let m = schur_multiplicity(table, block_sizes, bounds, &alpha)?;
        if m != 0 {
            out.insert(seq, m);
        }
    }
    Ok(out)
}

/// Character of a sum of Schur products.
pub fn assemble_character(block_sizes: &[usize], mults: &BTreeMap<PartitionSeq, i64>) -> Result<BTreeMap<Weight, i64>> {
    let mut out: BTreeMap<Weight, i64> = BTreeMap::new();
    for (seq, &mult) in mults {
        let mut acc: BTreeMap<Weight, i64> = BTreeMap::from([(Vec::new(), mult)]);
        for (b, &m) in seq.blocks.iter().zip(block_sizes) {
            let s = schur_polynomial(b, m)?;
            let mut next = BTreeMap::new();
            for (w, c) in &acc {
                for (v, d) in s.support() {
                    let mut u = w.clone();
                    u.extend(v);
                    *next.entry(u).or_default() += c * i64::try_from(d).expect("small multiplicity");
                }
            }
            acc = next;
        }
        for (w, c) in acc {
            *out.entry(w).or_default() += c;
        }
    }
    out.retain(|_, c| *c != 0);
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumEntry {
    pub alpha: PartitionSeq,
    /// `(degree, multiplicity)` for each degree where it occurs.
    pub profile: Vec<(usize, i64)>,
    pub total: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimpleSpectrumReport {
    pub shape: String,
    pub shuffle: String,
    /// Certified region of highest weights (torus weights).
    pub weight_box: String,
    pub degree_cap: Option<usize>,
    pub entries: Vec<SpectrumEntry>,
    pub pass: bool,
}

/// Simple-spectrum verdict for the cohomology table of `n_pi`: every
/// irreducible Levi module with highest weight in `bounds` (torus weights)
/// occurs with total multiplicity at most one across all degrees. The table
/// must cover the dot-orbits of those weights.
pub fn simple_spectrum_check(table: &CohomTable, shape: &ParabolicShape, bounds: &WeightBox) -> Result<SimpleSpectrumReport> {
    let blocks = shape.block_sizes();
    let top = table.max_degree();
    let mut by_alpha: BTreeMap<PartitionSeq, Vec<(usize, i64)>> = BTreeMap::new();
    for alpha in bounds.points() {
        let Ok(seq) = PartitionSeq::from_weight(&blocks, &alpha) else { continue };
        for (w, _) in dot_orbit(&blocks, &alpha) {
            if !table.contains(&torus_weight(&w)) {
                return Err(Error::BoxTooSmall(format!("table has no entry at {:?}", torus_weight(&w))));
            }
        }
        for p in 0..=top {
            let mut mult = 0;
            for (w, sign) in dot_orbit(&blocks, &alpha) {
                mult += sign * table.get(&torus_weight(&w), p) as i64;
            }
            if mult != 0 {
                by_alpha.entry(seq.clone()).or_default().push((p, mult));
            }
        }
    }
    let entries: Vec<SpectrumEntry> = by_alpha
        .into_iter()
        .map(|(alpha, profile)| {
            let total = profile.iter().map(|(_, m)| m).sum();
            SpectrumEntry { alpha, profile, total }
        })
        .collect();
    let pass = entries.iter().all(|e| e.total <= 1 && e.profile.iter().all(|(_, m)| *m >= 0));
    Ok(SimpleSpectrumReport {
        shape: shape.shape_text(),
        shuffle: shape.shuffle().to_string(),
        weight_box: bounds.to_string(),
        degree_cap: table.degree_cap,
        entries,
        pass,
    })
}

/// Bookkeeping weights needed to certify highest weights in `bounds`.
pub fn required_weights(shape: &ParabolicShape, bounds: &WeightBox) -> Vec<Weight> {
    let blocks = shape.block_sizes();
    let grow = blocks.iter().copied().max().unwrap_or(1) as i64 - 1;
    bounds.grow(grow).points().into_iter().map(|w| torus_weight(&w)).collect()
}

/// Compute the table and the verdict for one shape.
pub fn simple_spectrum_sweep(shape: &ParabolicShape, bounds: &WeightBox, opts: &SweepOptions) -> Result<SimpleSpectrumReport> {
    let alg = build_nilradical(shape);
    let table = cohomology_table(&alg, &required_weights(shape, bounds), None, opts)?;
    simple_spectrum_check(&table, shape, bounds)
}

/// Classes of the second page of the Hochschild-Serre sequence for the
/// standard Borel of gl(M|N) relative to its odd ideal: `S(n_odd^*)` split by
/// the Cauchy formula, then Kostant for both even parts. Keys are torus
/// weights, values per-degree dimensions; only weights in `bounds` are kept.
pub fn standard_borel_second_page(m: usize, n: usize, bounds: &WeightBox) -> Result<BTreeMap<Weight, Vec<usize>>> {
    let mut out: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
    // Each odd-side class has a coordinate sum of |alpha|, bounded by the box.
    let max_size = bounds.hi[m..].iter().map(|x| x.max(&0)).sum::<i64>().max(0) as usize
        + bounds.hi[m..].len() * m.max(n);
    for alpha in partitions_up_to(max_size, m.min(n)) {
        let size: usize = alpha.iter().sum();
        // Even side: the dual of Sigma^alpha, highest weight (0..0, -alpha reversed).
        let mut even = vec![0i64; m];
        for (k, &a) in alpha.iter().enumerate() {
            even[m - 1 - k] = -(a as i64);
        }
        let mut odd = vec![0i64; n];
        for (k, &a) in alpha.iter().enumerate() {
            odd[k] = a as i64;
        }
        let ones_m = vec![1; m];
        let ones_n = vec![1; n];
        let ev = if m == 0 { vec![(0, Vec::new())] } else { kostant_formula(&ones_m, &even)? };
        let od = if n == 0 { vec![(0, Vec::new())] } else { kostant_formula(&ones_n, &odd)? };
        for (p, we) in &ev {
            for (q, wo) in &od {
                let mut w = we.clone();
                w.extend(wo);
                if !bounds.contains(&w) {
                    continue;
                }
                let deg = size + p + q;
                let slot = out.entry(w).or_default();
                if slot.len() <= deg {
                    slot.resize(deg + 1, 0);
                }
                slot[deg] += 1;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ce_cohomology::cohomology_at_weight;
    use crate::euler_series::{euler_series, schur_coefficient_formula};
    use crate::root_data::Shuffle;
    use proptest::prelude::*;

    fn poly(alpha: &[i64], n: usize) -> BTreeMap<Weight, i64> {
        schur_polynomial(alpha, n)
            .unwrap()
            .support()
            .iter()
            .map(|(w, c)| (w.clone(), i64::try_from(c).unwrap()))
            .collect()
    }

    #[test]
    fn small_schur_polynomials() {
        assert_eq!(poly(&[1, 0], 2), BTreeMap::from([(vec![1, 0], 1), (vec![0, 1], 1)]));
        assert_eq!(poly(&[2, 0], 2), BTreeMap::from([(vec![2, 0], 1), (vec![1, 1], 1), (vec![0, 2], 1)]));
        assert_eq!(poly(&[1, 1], 2), BTreeMap::from([(vec![1, 1], 1)]));
        assert_eq!(poly(&[0, -1], 2), BTreeMap::from([(vec![-1, 0], 1), (vec![0, -1], 1)]));
    }

    #[test]
    fn schur_rejects_non_dominant() {
        assert_eq!(schur_polynomial(&[0, 1], 2), Err(Error::NotDominant(vec![0, 1])));
    }

    #[test]
    fn schur_dimension_matches_hook_content() {
        // dim of (2,1) on 3 variables is 8, of (3,1,0) on 3 variables is 15.
        let dim = |a: &[i64], n| poly(a, n).values().sum::<i64>();
        assert_eq!(dim(&[2, 1, 0], 3), 8);
        assert_eq!(dim(&[3, 1, 0], 3), 15);
        assert_eq!(dim(&[1, 1, 1], 3), 1);
    }

    #[test]
    fn schur_is_symmetric() {
        let t = poly(&[3, 1, -1], 3);
        for (w, c) in &t {
            for p in permutations(3) {
                let v: Weight = p.iter().map(|&k| w[k]).collect();
                assert_eq!(t.get(&v), Some(c));
            }
        }
    }

    #[test]
    fn kostant_examples() {
        assert_eq!(kostant_formula(&[1, 1], &[0, 0]).unwrap(), vec![(0, vec![0, 0]), (1, vec![-1, 1])]);
        let classes = kostant_formula(&[1, 1, 1], &[0, 0, 0]).unwrap();
        let mut by_degree = [0; 4];
        for (p, _) in &classes {
            by_degree[*p] += 1;
        }
        assert_eq!(by_degree, [1, 2, 2, 1]);
        assert_eq!(kostant_formula(&[2], &[1, 0]).unwrap(), vec![(0, vec![1, 0])]);
    }

    #[test]
    fn kostant_matches_cochains_for_even_shapes() {
        for shape in ParabolicShape::all_of_dim(3).into_iter().filter(|s| s.odd_blocks().is_empty()) {
            let alg = build_nilradical(&shape);
            // Each class is an irreducible Levi module; expand to torus weights.
            let blocks = shape.block_sizes();
            let mut expected: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
            for (p, w) in kostant_formula(&blocks, &[0, 0, 0]).unwrap() {
                let seq = PartitionSeq::from_weight(&blocks, &w).unwrap();
                for (v, c) in assemble_character(&blocks, &BTreeMap::from([(seq, 1)])).unwrap() {
                    let slot = expected.entry(torus_weight(&v)).or_default();
                    slot.resize(slot.len().max(p + 1), 0);
                    slot[p] += c as usize;
                }
            }
            for w in WeightBox::cube(3, -3, 3).points() {
                let dims = cohomology_at_weight(&alg, &w, None).unwrap().dims;
                assert_eq!(dims, expected.get(&w).cloned().unwrap_or_default(), "{shape} at {w:?}");
            }
        }
    }

    #[test]
    fn kostant_weights_distinct_and_block_dominant() {
        for blocks in [vec![1, 2], vec![2, 1], vec![1, 1, 2], vec![3]] {
            let m: usize = blocks.iter().sum();
            let beta: Weight = (0..m as i64).rev().map(|x| x - 1).collect();
            let classes = kostant_formula(&blocks, &beta).unwrap();
            let mut ws: Vec<_> = classes.iter().map(|(_, w)| w.clone()).collect();
            ws.sort();
            ws.dedup();
            assert_eq!(ws.len(), classes.len());
            for w in ws {
                assert!(PartitionSeq::from_weight(&blocks, &w).is_ok());
            }
        }
    }

    #[test]
    fn dual_standard_in_exterior_algebra() {
        // Lambda^1 of the dual of k^2 has weights -e1, -e2.
        let table = BTreeMap::from([(vec![-1, 0], 1), (vec![0, -1], 1)]);
        let d = decompose_into_schur_products(&table, &[2], &WeightBox::cube(2, -2, 2)).unwrap();
        assert_eq!(d, BTreeMap::from([(PartitionSeq { blocks: vec![vec![0, -1]] }, 1)]));
    }

    #[test]
    fn symmetric_square_of_tensor_product() {
        // S^2(V ⊗ W), dim V = dim W = 2: weights of v_a w_b v_c w_d.
        let mut table: BTreeMap<Weight, i64> = BTreeMap::new();
        let basis: Vec<(usize, usize)> = (0..2).flat_map(|a| (0..2).map(move |b| (a, b))).collect();
        for x in 0..4 {
            for y in x..4 {
                let mut w = vec![0; 4];
                for &(a, b) in [basis[x], basis[y]].iter() {
                    w[a] += 1;
                    w[2 + b] += 1;
                }
                *table.entry(w).or_default() += 1;
            }
        }
        let d = decompose_into_schur_products(&table, &[2, 2], &WeightBox::cube(4, -1, 3)).unwrap();
        let seq = |a: [i64; 2]| PartitionSeq { blocks: vec![a.to_vec(), a.to_vec()] };
        assert_eq!(d, BTreeMap::from([(seq([2, 0]), 1), (seq([1, 1]), 1)]));
    }

    #[test]
    fn orbit_outside_box() {
        let table = BTreeMap::new();
        assert!(matches!(
            schur_multiplicity(&table, &[2], &WeightBox::cube(2, 0, 1), &[1, 0]),
            Err(Error::BoxTooSmall(_))
        ));
    }

    #[test]
    fn wall_weights_contribute_nothing() {
        // alpha = (0, 1) shifted by rho is (1, 1): on a wall, so its signed
        // orbit cancels; it is not dominant and never reported.
        let table = poly(&[1, 0], 2);
        let d = decompose_into_schur_products(&table, &[2], &WeightBox::cube(2, -2, 2)).unwrap();
        assert_eq!(d.len(), 1);
        let orbit = dot_orbit(&[2], &[0, 1]);
        assert_eq!(orbit[0].0, orbit[1].0);
        assert_eq!(orbit[0].1 + orbit[1].1, 0);
    }

    #[test]
    fn gl11_simple_spectrum() {
        for s in ["1,2", "2,1"] {
            let shape = ParabolicShape::parse("1|1", s).unwrap();
            let r = simple_spectrum_sweep(&shape, &WeightBox::cube(2, -3, 3), &SweepOptions::default()).unwrap();
            assert!(r.pass);
            assert_eq!(r.entries.len(), 4);
            assert!(r.entries.iter().all(|e| e.profile.len() == 1));
        }
    }

    #[test]
    fn gl21_simple_spectrum() {
        for pi in Shuffle::all(2, 1) {
            let shape = ParabolicShape::borel(2, 1, pi).unwrap();
            let r = simple_spectrum_sweep(&shape, &WeightBox::cube(3, -2, 2), &SweepOptions::default()).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn standard_borel_degenerates() {
        for (m, n) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
            let bx = WeightBox::cube(m + n, -2, 2);
            let e2 = standard_borel_second_page(m, n, &bx).unwrap();
            let alg = build_nilradical(&ParabolicShape::borel(m, n, Shuffle::identity(m, n)).unwrap());
            for w in bx.points() {
                let dims = cohomology_at_weight(&alg, &torus_weight(&w), None).unwrap().dims;
                assert_eq!(dims, e2.get(&w).cloned().unwrap_or_default(), "gl({m}|{n}) at {w:?}");
            }
        }
    }

    #[test]
    fn schur_formula_matches_series_decomposition() {
        for m in 2..=3 {
            for shape in ParabolicShape::all_of_dim(m) {
                let bx = WeightBox::cube(m, -2, 2);
                let series = euler_series(&shape, &bx.grow(2)).unwrap();
                let table: BTreeMap<Weight, i64> =
                    series.support().iter().map(|(w, c)| (w.clone(), i64::try_from(c).unwrap())).collect();
                for alpha in bx.points() {
                    if !shape.is_block_dominant(&alpha) {
                        continue;
                    }
                    let oracle = schur_multiplicity(&table, &shape.block_sizes(), &bx.grow(2), &alpha).unwrap();
                    let formula = schur_coefficient_formula(&shape, &alpha).unwrap();
                    assert_eq!(formula, oracle, "{shape} at {alpha:?}");
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn inversion_is_two_sided(
            entries in proptest::collection::vec((-1i64..=2, -1i64..=2, -1i64..=1, 1i64..=3), 0..4)
        ) {
            // Random sums of Schur products for blocks (2, 1).
            let blocks = [2usize, 1];
            let mut mults: BTreeMap<PartitionSeq, i64> = BTreeMap::new();
            for (a, b, c, k) in entries {
                let (hi, lo) = (a.max(b), a.min(b));
                *mults.entry(PartitionSeq { blocks: vec![vec![hi, lo], vec![c]] }).or_default() += k;
            }
            let table = assemble_character(&blocks, &mults).unwrap();
            let back = decompose_into_schur_products(&table, &blocks, &WeightBox::cube(3, -3, 4)).unwrap();
            prop_assert_eq!(back, mults);
        }
    }
}
