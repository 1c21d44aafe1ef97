//! Weight-graded Chevalley–Eilenberg cochains of a Lie superalgebra.
//!
//! The cochain algebra is free graded-commutative on generators `xi^k` dual
//! to the basis. `xi^k` has parity `p_k + 1`: generators dual to even
//! elements are exterior, generators dual to odd elements are polynomial.
//! Each generator carries the weight of its basis element; this is the
//! bookkeeping weight used throughout (see [`crate::lie_superalgebra::torus_weight`]).
//! On generators
//! `d xi^c = -1/2 sum_{a,b} (-1)^{p_a (p_b + 1)} c^c_{ab} xi^a xi^b`,
//! extended as an odd derivation.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};

use num_traits::{One, Zero};
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exact_linalg::{rank, rat, rat_frac, Rational, SparseMatrix};
use crate::lie_superalgebra::SuperLie;
use crate::root_data::Weight;

pub mod tangent;
pub mod odd_reflection;

pub use odd_reflection::{odd_reflection_report, OddReflectionReport};
pub use tangent::tangent_cohomology;

/// Exponent of each generator, indexed by basis element.
pub type Monomial = Vec<u32>;

pub fn degree(m: &Monomial) -> usize {
    m.iter().map(|&e| e as usize).sum()
}

/// The cochain algebra of a Lie superalgebra with its differential on
/// generators.
#[derive(Clone, Debug)]
pub struct CochainAlgebra {
    /// `true` for exterior (odd cochain) generators.
    exterior: Vec<bool>,
    dgen: Vec<Vec<(Monomial, Rational)>>,
    weights: Vec<Weight>,
}

fn unit(n: usize, k: usize) -> Monomial {
    let mut m = vec![0; n];
    m[k] = 1;
    m
}

impl CochainAlgebra {
    pub fn new(alg: &SuperLie) -> Self {
        let n = alg.dim();
        let exterior: Vec<bool> = (0..n).map(|k| !alg.parity(k).is_odd()).collect();
        let mut ca = CochainAlgebra { exterior, dgen: vec![Vec::new(); n], weights: alg.weights().to_vec() };
        let half = rat_frac(-1, 2);
        for c in 0..n {
            let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
            for a in 0..n {
                for b in 0..n {
                    for (t, s) in alg.bracket(a, b) {
                        if *t != c {
                            continue;
                        }
                        let pa = alg.parity(a).bit();
                        let pb = alg.parity(b).bit();
                        let koszul = if (pa * (pb + 1)) % 2 == 0 { rat(1) } else { rat(-1) };
                        if let Some((sg, m)) = ca.product(&unit(n, a), &unit(n, b)) {
                            *acc.entry(m).or_insert_with(Rational::zero) += &half * &koszul * s * rat(sg);
                        }
                    }
                }
            }
            ca.dgen[c] = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        }
        ca
    }

    pub fn num_generators(&self) -> usize {
        self.exterior.len()
    }

    pub fn is_exterior(&self, k: usize) -> bool {
        self.exterior[k]
    }

    pub fn generator_differential(&self, k: usize) -> &[(Monomial, Rational)] {
        &self.dgen[k]
    }

    /// Cochain parity of a monomial (number of exterior factors mod 2).
    pub fn parity(&self, m: &Monomial) -> u32 {
        m.iter().zip(&self.exterior).filter(|(_, &x)| x).map(|(e, _)| *e).sum::<u32>() % 2
    }

    pub fn exterior_count(&self, m: &Monomial) -> u32 {
        m.iter().zip(&self.exterior).filter(|(_, &x)| x).map(|(e, _)| *e).sum()
    }

    pub fn weight(&self, m: &Monomial) -> Weight {
        let dim = self.weights.first().map_or(0, Vec::len);
        let mut w = vec![0i64; dim];
        for (k, &e) in m.iter().enumerate() {
            if e > 0 {
                for (x, y) in w.iter_mut().zip(&self.weights[k]) {
                    *x += e as i64 * y;
                }
            }
        }
        w
    }

    /// Product of two sorted monomials, normalized to sorted order, with
    /// the Koszul sign; `None` if an exterior generator repeats.
    pub fn product(&self, a: &Monomial, b: &Monomial) -> Option<(i64, Monomial)> {
        let mut out = a.clone();
        let mut swaps = 0u64;
        // Odd factors of `a` strictly after position l.
        let mut odd_after = 0u64;
        for l in (0..a.len()).rev() {
            if self.exterior[l] {
                if b[l] > 0 {
                    if a[l] > 0 || b[l] > 1 {
                        return None;
                    }
                    swaps += odd_after * b[l] as u64;
                }
                odd_after += a[l] as u64;
            }
            out[l] += b[l];
        }
        Some((if swaps % 2 == 0 { 1 } else { -1 }, out))
    }

    /// The differential of a monomial as a sparse combination.
    pub fn differential(&self, m: &Monomial) -> Vec<(Monomial, Rational)> {
        let n = m.len();
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        let mut prefix_odd = 0u32;
        for k in 0..n {
            let e = m[k];
            if e == 0 {
                continue;
            }
            if !self.dgen[k].is_empty() {
                let mut prefix = vec![0; n];
                prefix[..k].copy_from_slice(&m[..k]);
                let mut suffix = vec![0; n];
                suffix[k + 1..].copy_from_slice(&m[k + 1..]);
                suffix[k] = e - 1;
                let sign_pre = if prefix_odd % 2 == 0 { 1 } else { -1 };
                let mult = rat(e as i64 * sign_pre);
                for (q, c) in &self.dgen[k] {
                    let Some((s1, pq)) = self.product(&prefix, q) else { continue };
                    let Some((s2, full)) = self.product(&pq, &suffix) else { continue };
                    *acc.entry(full).or_insert_with(Rational::zero) += c * &mult * rat(s1 * s2);
                }
            }
            if self.exterior[k] {
                prefix_odd += e;
            }
        }
        acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }
}

/// Linear functionals certifying that a weight component is finite.
///
/// For a nilradical the cut functionals `f_t(e_x) = [pos(x) <= t]` take the
/// value 0 or 1 on every generator weight and sum to at least 1, so the
/// CE degree at weight `lambda` is at most `sum_t f_t(lambda)`.
#[derive(Clone, Debug)]
struct Cuts {
    per_generator: Vec<Vec<u8>>,
    coord_pos: Vec<usize>,
    count: usize,
}

impl Cuts {
    fn new(alg: &SuperLie) -> Option<Cuts> {
        let pos = alg.coordinate_positions()?.to_vec();
        let count = pos.iter().copied().max().unwrap_or(0);
        let mut per_generator = Vec::with_capacity(alg.dim());
        for w in alg.weights() {
            let vals = Self::eval(&pos, count, w);
            if vals.iter().any(|&v| v != 0 && v != 1) || vals.iter().all(|&v| v == 0) {
                return None;
            }
            per_generator.push(vals.iter().map(|&v| v as u8).collect());
        }
        Some(Cuts { per_generator, coord_pos: pos, count })
    }

    fn eval(pos: &[usize], count: usize, w: &[i64]) -> Vec<i64> {
        (0..count)
            .map(|t| pos.iter().zip(w).filter(|(p, _)| **p <= t).map(|(_, x)| x).sum())
            .collect()
    }
}

/// Whether weight components are finite-dimensional without a degree cap.
pub fn is_pointed(alg: &SuperLie) -> bool {
    alg.dim() == 0 || Cuts::new(alg).is_some()
}

/// All monomials of weight `lambda` (and CE degree `< degree_cap` when set).
pub fn weight_monomials(alg: &SuperLie, lambda: &[i64], degree_cap: Option<usize>) -> Result<Vec<Monomial>> {
    let ca = CochainAlgebra::new(alg);
    monomials_for(&ca, alg, lambda, degree_cap)
}

fn monomials_for(
    ca: &CochainAlgebra,
    alg: &SuperLie,
    lambda: &[i64],
    degree_cap: Option<usize>,
) -> Result<Vec<Monomial>> {
    let n = alg.dim();
    if n == 0 {
        return Ok(if lambda.iter().all(|&x| x == 0) && degree_cap != Some(0) { vec![Vec::new()] } else { vec![] });
    }
    let mut out = Vec::new();
    match Cuts::new(alg) {
        Some(cuts) => {
            let budgets = Cuts::eval(&cuts.coord_pos, cuts.count, lambda);
            if budgets.iter().any(|&b| b < 0) {
                return Ok(out);
            }
            // covers[k][t]: some generator with index >= k has f_t = 1.
            let mut covers = vec![vec![false; cuts.count]; n + 1];
            for k in (0..n).rev() {
                for t in 0..cuts.count {
                    covers[k][t] = covers[k + 1][t] || cuts.per_generator[k][t] == 1;
                }
            }
            let mut st = PointedSearch {
                ca,
                cuts: &cuts,
                covers: &covers,
                cap: degree_cap.unwrap_or(usize::MAX),
                residual: lambda.to_vec(),
                budgets,
                current: vec![0; n],
                degree: 0,
                out: &mut out,
            };
            st.run(0);
        }
        None => {
            let cap = degree_cap.ok_or(Error::UnboundedWeightComponent)?;
            let spread: i64 = alg
                .weights()
                .iter()
                .map(|w| w.iter().map(|x| x.abs()).sum::<i64>())
                .max()
                .unwrap_or(0);
            let mut st = CappedSearch {
                ca,
                spread,
                cap,
                residual: lambda.to_vec(),
                current: vec![0; n],
                degree: 0,
                out: &mut out,
            };
            st.run(0);
        }
    }
    Ok(out)
}

struct PointedSearch<'a> {
    ca: &'a CochainAlgebra,
    cuts: &'a Cuts,
    covers: &'a [Vec<bool>],
    cap: usize,
    residual: Vec<i64>,
    budgets: Vec<i64>,
    current: Monomial,
    degree: usize,
    out: &'a mut Vec<Monomial>,
}

impl PointedSearch<'_> {
    fn run(&mut self, k: usize) {
        let n = self.current.len();
        if (0..self.cuts.count).any(|t| self.budgets[t] > 0 && !self.covers[k][t]) {
            return;
        }
        if k == n {
            if self.residual.iter().all(|&x| x == 0) {
                self.out.push(self.current.clone());
            }
            return;
        }
        let fk = &self.cuts.per_generator[k];
        let mut max_e = (0..self.cuts.count)
            .filter(|&t| fk[t] == 1)
            .map(|t| self.budgets[t])
            .min()
            .unwrap_or(0)
            .max(0) as usize;
        if self.ca.exterior[k] {
            max_e = max_e.min(1);
        }
        max_e = max_e.min(self.cap.saturating_sub(1).saturating_sub(self.degree));
        if self.degree >= self.cap {
            max_e = 0;
        }
        let w = self.ca.weights[k].clone();
        // e = 0 first, then increasing exponents.
        self.run(k + 1);
        for e in 1..=max_e {
            for (x, y) in self.residual.iter_mut().zip(&w) {
                *x -= y;
            }
            for t in 0..self.cuts.count {
                self.budgets[t] -= fk[t] as i64;
            }
            self.current[k] = e as u32;
            self.degree += 1;
            self.run(k + 1);
        }
        for (x, y) in self.residual.iter_mut().zip(&w) {
            *x += max_e as i64 * y;
        }
        for t in 0..self.cuts.count {
            self.budgets[t] += (max_e as i64) * fk[t] as i64;
        }
        self.current[k] = 0;
        self.degree -= max_e;
    }
}

struct CappedSearch<'a> {
    ca: &'a CochainAlgebra,
    spread: i64,
    cap: usize,
    residual: Vec<i64>,
    current: Monomial,
    degree: usize,
    out: &'a mut Vec<Monomial>,
}

impl CappedSearch<'_> {
    fn run(&mut self, k: usize) {
        let n = self.current.len();
        let remaining = self.cap.saturating_sub(1).saturating_sub(self.degree) as i64;
        let l1: i64 = self.residual.iter().map(|x| x.abs()).sum();
        if l1 > remaining * self.spread || self.degree >= self.cap {
            return;
        }
        if k == n {
            if l1 == 0 {
                self.out.push(self.current.clone());
            }
            return;
        }
        let mut max_e = remaining as usize;
        if self.ca.exterior[k] {
            max_e = max_e.min(1);
        }
        let w = self.ca.weights[k].clone();
        self.run(k + 1);
        for e in 1..=max_e {
            for (x, y) in self.residual.iter_mut().zip(&w) {
                *x -= y;
            }
            self.current[k] = e as u32;
            self.degree += 1;
            self.run(k + 1);
        }
        for (x, y) in self.residual.iter_mut().zip(&w) {
            *x += max_e as i64 * y;
        }
        self.current[k] = 0;
        self.degree -= max_e;
    }
}

/// Monomials of one weight grouped by CE degree.
#[derive(Clone, Debug)]
pub struct WeightComponent {
    pub weight: Weight,
    pub by_degree: Vec<Vec<Monomial>>,
}

impl WeightComponent {
    fn new(weight: Weight, monomials: Vec<Monomial>) -> Self {
        let top = monomials.iter().map(degree).max();
        let mut by_degree = vec![Vec::new(); top.map_or(0, |t| t + 1)];
        for m in monomials {
            by_degree[degree(&m)].push(m);
        }
        for v in &mut by_degree {
            v.sort();
        }
        WeightComponent { weight, by_degree }
    }

    pub fn dims(&self) -> Vec<usize> {
        self.by_degree.iter().map(Vec::len).collect()
    }
}

pub fn weight_component(alg: &SuperLie, lambda: &[i64], degree_cap: Option<usize>) -> Result<WeightComponent> {
    let ca = CochainAlgebra::new(alg);
    let mons = monomials_for(&ca, alg, lambda, degree_cap)?;
    Ok(WeightComponent::new(lambda.to_vec(), mons))
}

fn differential_matrix(ca: &CochainAlgebra, src: &[Monomial], dst: &[Monomial]) -> SparseMatrix {
    let index: HashMap<&Monomial, usize> = dst.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut trip = Vec::new();
    for (c, m) in src.iter().enumerate() {
        for (t, v) in ca.differential(m) {
            let r = *index
                .get(&t)
                .expect("differential preserves weight and raises degree by one");
            trip.push((r, c, v));
        }
    }
    SparseMatrix::from_triplets(dst.len(), src.len(), trip)
}

/// Matrix of d from CE degree p to p+1 at weight `lambda`.
pub fn ce_differential(alg: &SuperLie, lambda: &[i64], p: usize) -> Result<SparseMatrix> {
    let comp = weight_component(alg, lambda, Some(p + 2))?;
    let ca = CochainAlgebra::new(alg);
    let empty = Vec::new();
    let src = comp.by_degree.get(p).unwrap_or(&empty);
    let dst = comp.by_degree.get(p + 1).unwrap_or(&empty);
    Ok(differential_matrix(&ca, src, dst))
}

/// Cohomology dimensions at one weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightCohomology {
    /// `dims[p]` for every certified degree p.
    pub dims: Vec<usize>,
    /// Alternating sum of cochain dimensions over all degrees, when the
    /// component is finite.
    pub cochain_euler: Option<i64>,
    /// Sum over cochain monomials of `(-1)^(number of exterior factors)`.
    pub cochain_super_euler: Option<i64>,
}

fn component_cohomology(
    ca: &CochainAlgebra,
    comp: &WeightComponent,
    certified: usize,
) -> Result<Vec<usize>> {
    let top = comp.by_degree.len();
    let maps: Vec<SparseMatrix> = (0..top.saturating_sub(1))
        .map(|p| differential_matrix(ca, &comp.by_degree[p], &comp.by_degree[p + 1]))
        .collect();
    for (p, w) in maps.windows(2).enumerate() {
        if !w[1].mul(&w[0]).is_zero() {
            return Err(Error::DSquareNonzero { degree: p });
        }
    }
    let ranks: Vec<usize> = maps.iter().map(rank).collect();
    Ok((0..certified)
        .map(|p| {
            let dim = comp.by_degree.get(p).map_or(0, Vec::len);
            let out = ranks.get(p).copied().unwrap_or(0);
            let inc = if p > 0 { ranks.get(p - 1).copied().unwrap_or(0) } else { 0 };
            dim - out - inc
        })
        .collect())
}

/// Exact cohomology at weight `lambda`.
///
/// Pointed algebras: every degree is certified, `degree_cap` only truncates
/// the reported list. Otherwise the cap is mandatory and degrees `< cap - 1`
/// are certified.
pub fn cohomology_at_weight(
    alg: &SuperLie,
    lambda: &[i64],
    degree_cap: Option<usize>,
) -> Result<WeightCohomology> {
    let ca = CochainAlgebra::new(alg);
    let pointed = is_pointed(alg);
    if pointed {
        let mons = monomials_for(&ca, alg, lambda, None)?;
        let euler = mons.iter().map(|m| if degree(m) % 2 == 0 { 1 } else { -1 }).sum();
        let super_euler = mons.iter().map(|m| if ca.exterior_count(m) % 2 == 0 { 1 } else { -1 }).sum();
        let comp = WeightComponent::new(lambda.to_vec(), mons);
        let full = comp.by_degree.len();
        let mut dims = component_cohomology(&ca, &comp, full)?;
        if let Some(cap) = degree_cap {
            dims.truncate(cap);
        }
        while dims.last() == Some(&0) {
            dims.pop();
        }
        Ok(WeightCohomology { dims, cochain_euler: Some(euler), cochain_super_euler: Some(super_euler) })
    } else {
        let cap = degree_cap.ok_or(Error::UnboundedWeightComponent)?;
        let mons = monomials_for(&ca, alg, lambda, Some(cap))?;
        let comp = WeightComponent::new(lambda.to_vec(), mons);
        let dims = component_cohomology(&ca, &comp, cap.saturating_sub(1))?;
        Ok(WeightCohomology { dims, cochain_euler: None, cochain_super_euler: None })
    }
}

/// `sum_p (-1)^p dim H^p` at `lambda`.
pub fn euler_at_weight(alg: &SuperLie, lambda: &[i64], degree_cap: Option<usize>) -> Result<i64> {
    if !is_pointed(alg) {
        let h = cohomology_at_weight(alg, lambda, degree_cap)?;
        return Ok(alternating(&h.dims));
    }
    let h = cohomology_at_weight(alg, lambda, None)?;
    Ok(alternating(&h.dims))
}

/// Euler characteristic counting cochain parity (exterior factors only),
/// which is the coefficient of the generating function `Phi`.
pub fn super_euler_at_weight(alg: &SuperLie, lambda: &[i64]) -> Result<i64> {
    let ca = CochainAlgebra::new(alg);
    let mons = monomials_for(&ca, alg, lambda, None)?;
    Ok(mons.iter().map(|m| if ca.exterior_count(m) % 2 == 0 { 1 } else { -1 }).sum())
}

fn alternating(dims: &[usize]) -> i64 {
    dims.iter()
        .enumerate()
        .map(|(p, &d)| if p % 2 == 0 { d as i64 } else { -(d as i64) })
        .sum()
}

/// Cohomology dimensions for a set of weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomTable {
    pub algebra_id: String,
    pub degree_cap: Option<usize>,
    /// Every computed weight, including those with zero cohomology.
    pub entries: BTreeMap<Weight, Vec<usize>>,
}

impl CohomTable {
    pub fn get(&self, lambda: &[i64], p: usize) -> usize {
        self.entries.get(lambda).and_then(|d| d.get(p)).copied().unwrap_or(0)
    }

    pub fn contains(&self, lambda: &[i64]) -> bool {
        self.entries.contains_key(lambda)
    }

    /// Nonzero entries as (weight, degree, dim), ordered by weight then degree.
    pub fn nonzero(&self) -> Vec<(Weight, usize, usize)> {
        self.entries
            .iter()
            .flat_map(|(w, dims)| {
                dims.iter()
                    .enumerate()
                    .filter(|(_, &d)| d > 0)
                    .map(move |(p, &d)| (w.clone(), p, d))
            })
            .collect()
    }

    pub fn max_degree(&self) -> usize {
        self.entries.values().map(Vec::len).max().unwrap_or(0)
    }
}

/// Content hash identifying an algebra.
pub fn algebra_id(alg: &SuperLie) -> String {
    let digest = Sha256::digest(alg.canonical_text().as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

pub const CACHE_FORMAT: &str = "superchain-cohom v1";

/// On-disk store of per-weight cohomology, keyed by a hash of the algebra,
/// the weight and the degree cap.
#[derive(Clone, Debug)]
pub struct CohomCache {
    dir: PathBuf,
}

impl CohomCache {
    pub fn new(dir: impl AsRef<Path>) -> Result<Self> {
        std::fs::create_dir_all(dir.as_ref()).map_err(|e| Error::Io(e.to_string()))?;
        Ok(CohomCache { dir: dir.as_ref().to_path_buf() })
    }

    fn key(alg_text: &str, lambda: &[i64], cap: Option<usize>) -> String {
        let mut h = Sha256::new();
        h.update(CACHE_FORMAT.as_bytes());
        h.update(alg_text.as_bytes());
        h.update(format!("{lambda:?}|{cap:?}").as_bytes());
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(&key[..2]).join(format!("{}.txt", &key[2..]))
    }

    pub fn get(&self, alg_text: &str, lambda: &[i64], cap: Option<usize>) -> Option<Vec<usize>> {
        let text = std::fs::read_to_string(self.path(&Self::key(alg_text, lambda, cap))).ok()?;
        let mut lines = text.lines();
        if lines.next()? != CACHE_FORMAT {
            return None;
        }
        let body = lines.next().unwrap_or("");
        if body.is_empty() {
            return Some(Vec::new());
        }
        body.split(',').map(|s| s.parse().ok()).collect()
    }

    pub fn put(&self, alg_text: &str, lambda: &[i64], cap: Option<usize>, dims: &[usize]) -> Result<()> {
        let path = self.path(&Self::key(alg_text, lambda, cap));
        std::fs::create_dir_all(path.parent().unwrap()).map_err(|e| Error::Io(e.to_string()))?;
        let body: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        std::fs::write(&tmp, format!("{CACHE_FORMAT}\n{}\n", body.join(",")))
            .and_then(|_| std::fs::rename(&tmp, &path))
            .map_err(|e| Error::Io(e.to_string()))
    }
}

/// Sweep settings: worker count and optional cache.
#[derive(Clone, Debug, Default)]
pub struct SweepOptions {
    pub jobs: Option<usize>,
    pub cache: Option<CohomCache>,
}

pub fn run_parallel<T, F>(jobs: Option<usize>, f: F) -> T
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    match jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}

/// Cohomology at each weight, computed in parallel and merged in weight order.
pub fn cohomology_table(
    alg: &SuperLie,
    weights: &[Weight],
    degree_cap: Option<usize>,
    opts: &SweepOptions,
) -> Result<CohomTable> {
    let text = alg.canonical_text();
    let compute = |w: &Weight| -> Result<(Weight, Vec<usize>)> {
        if let Some(c) = &opts.cache {
            if let Some(d) = c.get(&text, w, degree_cap) {
                return Ok((w.clone(), d));
            }
        }
        let d = cohomology_at_weight(alg, w, degree_cap)?.dims;
        if let Some(c) = &opts.cache {
            c.put(&text, w, degree_cap, &d)?;
        }
        Ok((w.clone(), d))
    };
    let results: Result<Vec<(Weight, Vec<usize>)>> =
        run_parallel(opts.jobs, || weights.par_iter().map(compute).collect());
    Ok(CohomTable { algebra_id: algebra_id(alg), degree_cap, entries: results?.into_iter().collect() })
}

/// Every weight with a nonzero cochain, for a pointed algebra, whose CE
/// degree is below `cap`; used to enumerate the support of small algebras.
pub fn all_monomials_below(alg: &SuperLie, cap: usize) -> Vec<Monomial> {
    let ca = CochainAlgebra::new(alg);
    let n = alg.dim();
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(ca: &CochainAlgebra, k: usize, left: usize, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        let max = if ca.exterior[k] { left.min(1) } else { left };
        for e in 0..=max {
            cur[k] = e as u32;
            rec(ca, k + 1, left - e, cur, out);
        }
        cur[k] = 0;
    }
    rec(&ca, 0, cap.saturating_sub(1), &mut cur, &mut out);
    out
}

/// Check that `d^2 = 0` on every monomial of CE degree below `cap`.
pub fn d_squared_vanishes(alg: &SuperLie, cap: usize) -> bool {
    let ca = CochainAlgebra::new(alg);
    all_monomials_below(alg, cap).iter().all(|m| {
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (t, v) in ca.differential(m) {
            for (u, w) in ca.differential(&t) {
                *acc.entry(u).or_insert_with(Rational::zero) += &v * &w;
            }
        }
        acc.values().all(Zero::is_zero)
    })
}

pub fn one() -> Rational {
    Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::{cohomology_dims, FiniteComplex};
    use crate::lie_superalgebra::{build_nilradical, sl11, GradedSpace};
    use crate::root_data::{ParabolicShape, WeightBox};
    use proptest::prelude::*;

    fn shape(s: &str, p: &str) -> ParabolicShape {
        ParabolicShape::parse(s, p).unwrap()
    }

    #[test]
    fn gl11_borel_single_class() {
        let n = build_nilradical(&shape("1|1", "1,2"));
        for p in 0..6i64 {
            let lam = vec![p, -p];
            let mons = weight_monomials(&n, &lam, None).unwrap();
            assert_eq!(mons, vec![vec![p as u32]]);
            let h = cohomology_at_weight(&n, &lam, None).unwrap();
            let mut expect = vec![0; p as usize + 1];
            expect[p as usize] = 1;
            assert_eq!(h.dims, expect);
            assert_eq!(euler_at_weight(&n, &lam, None).unwrap(), if p % 2 == 0 { 1 } else { -1 });
            assert_eq!(super_euler_at_weight(&n, &lam).unwrap(), 1);
        }
        assert!(weight_monomials(&n, &[-1, 1], None).unwrap().is_empty());
    }

    #[test]
    fn zero_weight_is_trivial() {
        for (s, p) in [("1|1", "2,1"), ("1,1|1", "1,3,2"), ("2|1,1", "2,1,3"), ("1,1,1|", "1,2,3")] {
            let n = build_nilradical(&shape(s, p));
            let m = n.weight_dim();
            assert_eq!(weight_monomials(&n, &vec![0; m], None).unwrap(), vec![vec![0; n.dim()]]);
            assert_eq!(euler_at_weight(&n, &vec![0; m], None).unwrap(), 1);
        }
    }

    #[test]
    fn non_pointed_requires_cap() {
        let s = sl11();
        assert!(!is_pointed(&s));
        assert_eq!(weight_monomials(&s, &[0, 0], None), Err(Error::UnboundedWeightComponent));
        assert!(weight_monomials(&s, &[0, 0], Some(4)).is_ok());
    }

    #[test]
    fn abelian_differential_is_zero() {
        let n = build_nilradical(&shape("1|2", "1,2"));
        assert!(n.is_abelian());
        let d = ce_differential(&n, &[2, -1, -1], 1).unwrap();
        // Degree 1 is empty at this weight; degree 2 holds the single product.
        assert!(d.is_zero());
        assert_eq!((d.rows(), d.cols()), (1, 0));
        assert!(ce_differential(&n, &[2, -1, -1], 2).unwrap().is_zero());
    }

    // k in degrees 1, 2, 4: coordinates (V2, V4, V1); x dual to Hom(V2,V4), y dual to
    // Hom(V1,V2), z dual to Hom(V1,V4).
    fn three_step() -> (GradedSpace, SuperLie) {
        let g = GradedSpace::new(&[(1, 1), (2, 1), (4, 1)]).unwrap();
        let n = g.nilradical();
        (g, n)
    }

    #[test]
    fn three_step_differential() {
        let (_, n) = three_step();
        let ca = CochainAlgebra::new(&n);
        let x = n.index_of("e1,2").unwrap();
        let y = n.index_of("e3,1").unwrap();
        let z = n.index_of("e3,2").unwrap();
        assert!(ca.generator_differential(x).is_empty());
        assert!(ca.generator_differential(y).is_empty());
        let dz = ca.generator_differential(z);
        assert_eq!(dz.len(), 1);
        let mut xy = vec![0; 3];
        xy[x] = 1;
        xy[y] = 1;
        assert_eq!(dz[0].0, xy);
        assert!(dz[0].1 == rat(1) || dz[0].1 == rat(-1));
        assert!(ca.is_exterior(x) && !ca.is_exterior(y) && !ca.is_exterior(z));
    }

    // Hand oracle for the degrees 1, 2, 4 space: monomials x^e y^a z^b with e in {0,1} of weight
    // (e - a, -e - b, a + b).
    #[test]
    fn three_step_monomials_match_hand_enumeration() {
        let (_, n) = three_step();
        let x = n.index_of("e1,2").unwrap();
        let y = n.index_of("e3,1").unwrap();
        let z = n.index_of("e3,2").unwrap();
        for b in 0..4i64 {
            let lam = vec![1, -1 - b, b];
            let mut got = weight_monomials(&n, &lam, None).unwrap();
            got.sort();
            let mut expect = Vec::new();
            for e in 0..=1i64 {
                for a in 0..6i64 {
                    for bb in 0..6i64 {
                        if e - a == lam[0] && -e - bb == lam[1] && a + bb == lam[2] {
                            let mut m = vec![0u32; 3];
                            m[x] = e as u32;
                            m[y] = a as u32;
                            m[z] = bb as u32;
                            expect.push(m);
                        }
                    }
                }
            }
            expect.sort();
            assert_eq!(got, expect);
        }
    }

    #[test]
    fn three_step_classes() {
        let (_, n) = three_step();
        for a in 0..5i64 {
            let h = cohomology_at_weight(&n, &[-a, 0, a], None).unwrap();
            let mut e = vec![0; a as usize + 1];
            e[a as usize] = 1;
            assert_eq!(h.dims, e);
        }
        for b in 0..4i64 {
            let h = cohomology_at_weight(&n, &[1, -1 - b, b], None).unwrap();
            let mut e = vec![0; b as usize + 2];
            e[b as usize + 1] = 1;
            assert_eq!(h.dims, e);
        }
    }

    #[test]
    fn four_step_differential_has_two_terms() {
        let g = GradedSpace::new(&[(1, 1), (2, 1), (3, 1), (4, 1)]).unwrap();
        let n = g.nilradical();
        let c = |d: i64| g.coords_of_degree(d).unwrap().start;
        let label = |i: i64, j: i64| {
            // Hom(V^i, V^j) is the unit with the lower-degree block first.
            format!("e{},{}", c(i) + 1, c(j) + 1)
        };
        let ca = CochainAlgebra::new(&n);
        let x14 = n.index_of(&label(1, 4)).unwrap();
        let d = ca.generator_differential(x14);
        assert_eq!(d.len(), 2);
        assert_eq!(&d[0].1 + &d[1].1, rat(0));
        let expect_pairs = [(label(1, 2), label(2, 4)), (label(1, 3), label(3, 4))];
        for (a, b) in expect_pairs {
            let mut m = vec![0; n.dim()];
            m[n.index_of(&a).unwrap()] = 1;
            m[n.index_of(&b).unwrap()] = 1;
            assert!(d.iter().any(|(t, _)| *t == m));
        }
    }

    #[test]
    fn d_squared_on_assorted_algebras() {
        for (s, p) in [
            ("1,1|1,1", "1,3,2,4"),
            ("1,1|1,1", "2,4,1,3"),
            ("2|1", "2,1"),
            ("1,1,1|", "1,2,3"),
            ("1|1,1", "2,1,3"),
            ("1,1|1", "2,3,1"),
        ] {
            let n = build_nilradical(&shape(s, p));
            assert!(d_squared_vanishes(&n, 5), "{s} {p}");
        }
        assert!(d_squared_vanishes(&sl11(), 5));
    }

    // Independent dense recomputation: enumerate monomials by brute force over a
    // bounded exponent range, build the differential densely, compare dims.
    #[test]
    fn brute_force_oracle_small_shape() {
        let n = build_nilradical(&shape("1,1|1", "1,2,3"));
        let ca = CochainAlgebra::new(&n);
        let all = all_monomials_below(&n, 8);
        for lam in WeightBox::cube(3, -2, 2).points() {
            let mut by_deg: BTreeMap<usize, Vec<Monomial>> = BTreeMap::new();
            for m in &all {
                if ca.weight(m) == lam {
                    by_deg.entry(degree(m)).or_default().push(m.clone());
                }
            }
            let top = by_deg.keys().max().copied().map_or(0, |t| t + 1);
            let spaces: Vec<Vec<Monomial>> = (0..top).map(|p| by_deg.get(&p).cloned().unwrap_or_default()).collect();
            let mut maps = Vec::new();
            for p in 0..top.saturating_sub(1) {
                let mut dense = vec![vec![rat(0); spaces[p].len()]; spaces[p + 1].len()];
                for (c, m) in spaces[p].iter().enumerate() {
                    for (t, v) in ca.differential(m) {
                        let r = spaces[p + 1].iter().position(|x| *x == t).unwrap();
                        dense[r][c] += v;
                    }
                }
                maps.push(SparseMatrix::from_dense(spaces[p + 1].len(), spaces[p].len(), &dense));
            }
            let fc = FiniteComplex::new(spaces.iter().map(Vec::len).collect(), maps).unwrap();
            let mut expect = cohomology_dims(&fc).unwrap();
            while expect.last() == Some(&0) {
                expect.pop();
            }
            let got = cohomology_at_weight(&n, &lam, None).unwrap().dims;
            assert_eq!(got, expect, "weight {lam:?}");
        }
    }

    #[test]
    fn cache_round_trip_and_table_order() {
        let dir = tempfile::tempdir().unwrap();
        let n = build_nilradical(&shape("1|1", "1,2"));
        let weights = WeightBox::cube(2, -2, 2).points();
        let opts = SweepOptions { jobs: Some(2), cache: Some(CohomCache::new(dir.path()).unwrap()) };
        let t1 = cohomology_table(&n, &weights, None, &opts).unwrap();
        let t2 = cohomology_table(&n, &weights, None, &opts).unwrap();
        let t3 = cohomology_table(&n, &weights, None, &SweepOptions::default()).unwrap();
        assert_eq!(t1, t2);
        assert_eq!(t1, t3);
        assert_eq!(t1.get(&[2, -2], 2), 1);
        let cache = CohomCache::new(dir.path()).unwrap();
        assert_eq!(cache.get(&n.canonical_text(), &[1, -1], None), Some(vec![0, 1]));
    }

    fn shape_strategy() -> impl Strategy<Value = ParabolicShape> {
        (2usize..=3).prop_flat_map(|m| {
            let all = ParabolicShape::all_of_dim(m);
            (0..all.len()).prop_map(move |k| all[k].clone())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn euler_conservation(s in shape_strategy(), w in prop::collection::vec(-2i64..=2, 3)) {
            let n = build_nilradical(&s);
            let lam: Weight = w[..s.dim()].to_vec();
            let h = cohomology_at_weight(&n, &lam, None).unwrap();
            prop_assert_eq!(alternating(&h.dims), h.cochain_euler.unwrap());
        }

        #[test]
        fn block_weyl_symmetry(w in prop::collection::vec(-2i64..=2, 3)) {
            // Levi GL(2) x GL(1|..): swapping the two coordinates of a size-2 block
            // preserves cohomology dims.
            for (sh, p) in [("2|1", "1,2"), ("2|1", "2,1"), ("1|2", "2,1")] {
                let s = shape(sh, p);
                let n = build_nilradical(&s);
                let b = if s.block_size(0) == 2 { 0 } else { 1 };
                let r = s.block_range(b);
                let mut sw = w.clone();
                sw.swap(r.start, r.start + 1);
                let a = cohomology_at_weight(&n, &w, None).unwrap().dims;
                let c = cohomology_at_weight(&n, &sw, None).unwrap().dims;
                prop_assert_eq!(a, c);
            }
        }
    }
}
