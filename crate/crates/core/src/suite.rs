//! The acceptance suite: eleven end-to-end checks, each pairing a computation
//! with an independent oracle, run with a shared worker count and seed.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::ce_cohomology::odd_reflection::adjacent_shuffles;
use crate::ce_cohomology::tangent::ComplexDecomposition;
use crate::ce_cohomology::{
    cohomology_table, euler_at_weight, odd_reflection_report, run_parallel, super_euler_at_weight,
    tangent_cohomology, CohomCache, SweepOptions,
};
use crate::characters::{assemble_character, kostant_formula, simple_spectrum_sweep, PartitionSeq};
use crate::error::Result;
use crate::euler_series::{delta_reexpansion_check, euler_coefficient_formula, euler_series};
use crate::exact_linalg::{inverse, random_invertible, rat, SparseMatrix};
use crate::lie_superalgebra::{build_nilradical, torus_weight, GradedSpace};
use crate::mixed_complexes::sl11::{sl11_cohomology, sl11_module, tensor_table_checks, Sl11Kind};
use crate::mixed_complexes::{
    cyclic_cohomology, decompose, formality_verdicts, required_u_cap, Arrow, IndecompKind, IndecompLabel, MixedComplex,
};
use crate::root_data::{ParabolicShape, Shuffle, Weight, WeightBox};

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    /// Largest `m` (or `M + N`) swept by the shape-enumerating checks.
    pub max_dim: usize,
    pub jobs: Option<usize>,
    pub seed: u64,
    pub cache: Option<CohomCache>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { max_dim: 4, jobs: None, seed: DEFAULT_SEED, cache: None }
    }
}

impl SuiteOptions {
    fn sweep(&self) -> SweepOptions {
        SweepOptions { jobs: self.jobs, cache: self.cache.clone() }
    }
}

/// What one check saw: how many cases it compared and which disagreed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Findings {
    pub checked: usize,
    pub failures: Vec<String>,
    pub note: String,
}

impl Findings {
    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: usize,
    pub name: &'static str,
    pub pass: bool,
    pub checked: usize,
    pub failures: Vec<String>,
    pub note: String,
    pub seconds: f64,
    pub budget_seconds: u64,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        let mut s = format!(
            "[{verdict}] {:>2} {:<24} {:>7} cases {:>8.2}s (budget {}s)",
            self.id, self.name, self.checked, self.seconds, self.budget_seconds
        );
        if let Some(first) = self.failures.first() {
            s.push_str(&format!(" first failure: {first}"));
        }
        s
    }
}

pub trait Criterion: Send + Sync {
    fn id(&self) -> usize;
    fn name(&self) -> &'static str;
    fn budget(&self) -> Duration;
    fn check(&self, opts: &SuiteOptions) -> Result<Findings>;

    fn run(&self, opts: &SuiteOptions) -> CriterionReport {
        let start = Instant::now();
        let findings = self.check(opts).unwrap_or_else(|e| Findings {
            checked: 0,
            failures: vec![format!("error: {e}")],
            note: String::new(),
        });
        let elapsed = start.elapsed();
        let mut failures = findings.failures;
        if elapsed > self.budget() {
            failures.push(format!("took {:.1}s, over the {}s budget", elapsed.as_secs_f64(), self.budget().as_secs()));
        }
        CriterionReport {
            id: self.id(),
            name: self.name(),
            pass: failures.is_empty() && findings.checked > 0,
            checked: findings.checked,
            failures,
            note: findings.note,
            seconds: elapsed.as_secs_f64(),
            budget_seconds: self.budget().as_secs(),
        }
    }
}

struct Check {
    id: usize,
    name: &'static str,
    budget_secs: u64,
    run: fn(&SuiteOptions) -> Result<Findings>,
}

impl Criterion for Check {
    fn id(&self) -> usize {
        self.id
    }

    fn name(&self) -> &'static str {
        self.name
    }

    fn budget(&self) -> Duration {
        Duration::from_secs(self.budget_secs)
    }

    fn check(&self, opts: &SuiteOptions) -> Result<Findings> {
        (self.run)(opts)
    }
}

pub fn criteria() -> Vec<Box<dyn Criterion>> {
    let table: [(&'static str, u64, fn(&SuiteOptions) -> Result<Findings>); 11] = [
        ("three-step-golden", 10, three_step_golden),
        ("four-step-even-classes", 60, four_step_even_classes),
        ("even-kostant", 60, even_kostant),
        ("borel-euler-range", 300, borel_euler_range),
        ("sector-formula-bridge", 300, sector_formula_bridge),
        ("delta-reexpansion", 120, delta_reexpansion),
        ("simple-spectrum", 600, simple_spectrum),
        ("odd-reflection", 300, odd_reflection),
        ("mixed-formality", 120, mixed_formality),
        ("sl11-tables", 60, sl11_tables),
        ("tangent-oracle", 60, tangent_oracle),
    ];
    table
        .into_iter()
        .enumerate()
        .map(|(k, (name, budget_secs, run))| Box::new(Check { id: k + 1, name, budget_secs, run }) as Box<dyn Criterion>)
        .collect()
}

pub fn run_suite(opts: &SuiteOptions) -> Vec<CriterionReport> {
    criteria().iter().map(|c| c.run(opts)).collect()
}

/// Graded space `k` in degrees 1, 2, 4. With coordinates (V2, V4, V1), the
/// classes are `y^a` at `(-a, 0, a)` in degree `a` and `z^b x` at
/// `(1, -1-b, b)` in degree `b + 1`; nothing else.
fn three_step_golden(opts: &SuiteOptions) -> Result<Findings> {
    let alg = GradedSpace::new(&[(1, 1), (2, 1), (4, 1)])?.nilradical();
    let bounds = WeightBox::cube(3, -6, 6);
    let mut expected: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
    for a in 0..=6 {
        let mut d = vec![0; a as usize + 1];
        d[a as usize] = 1;
        expected.insert(vec![-a, 0, a], d);
    }
    for b in 0..=6 {
        let w = vec![1, -1 - b, b];
        if bounds.contains(&w) {
            let mut d = vec![0; b as usize + 2];
            d[b as usize + 1] = 1;
            expected.insert(w, d);
        }
    }
    let table = cohomology_table(&alg, &bounds.points(), None, &opts.sweep())?;
    let mut f = Findings::default();
    for (w, dims) in &table.entries {
        let want = expected.get(w).cloned().unwrap_or_default();
        f.expect(*dims == want, || format!("{w:?}: {dims:?}, expected {want:?}"));
    }
    f.note = format!("{} weights, {} classes", table.entries.len(), expected.len());
    Ok(f)
}

/// Graded space `k` in degrees 1..4: every class has even total degree (CE
/// degree plus internal degree), and the generating classes are present.
fn four_step_even_classes(opts: &SuiteOptions) -> Result<Findings> {
    let space = GradedSpace::new(&[(1, 1), (2, 1), (3, 1), (4, 1)])?;
    let alg = space.nilradical();
    let coord = |d: i64| space.coords_of_degree(d).expect("degree present").start;
    let internal: Vec<i64> = (0..4).map(|c| space.block_degrees[space.shape.block_of(c)]).collect();
    let gen_weight = |i: i64, j: i64| -> Weight {
        let k = alg.index_of(&format!("e{},{}", coord(i) + 1, coord(j) + 1)).expect("root present");
        alg.weight(k).clone()
    };
    let bounds = WeightBox::cube(4, -4, 4);
    let table = cohomology_table(&alg, &bounds.points(), None, &opts.sweep())?;
    let mut f = Findings::default();
    for (w, p, dim) in table.nonzero() {
        let inner: i64 = w.iter().zip(&internal).map(|(x, d)| x * d).sum();
        f.expect((p as i64 + inner).rem_euclid(2) == 0, || format!("{dim} classes at {w:?} in CE degree {p}, odd total degree"));
    }
    let (x14, x23) = (gen_weight(1, 4), gen_weight(2, 3));
    let mut wanted = vec![("x12", gen_weight(1, 2)), ("x23", x23.clone()), ("x34", gen_weight(3, 4))];
    for i in 1..=2 {
        wanted.push((if i == 1 { "e1" } else { "e2" }, x14.iter().zip(&x23).map(|(a, b)| i * a + b).collect()));
    }
    for (name, w) in wanted {
        let total: usize = table.entries.get(&w).map_or(0, |d| d.iter().sum());
        f.expect(total >= 1, || format!("no class at the weight {w:?} of {name}"));
    }
    f.note = format!("{} nonzero (weight, degree) slices", table.nonzero().len());
    Ok(f)
}

/// Purely even shapes: the cohomology equals the sum of the Levi modules
/// listed by the closed formula, expanded to torus weights.
fn even_kostant(opts: &SuiteOptions) -> Result<Findings> {
    let mut f = Findings::default();
    for m in 1..=opts.max_dim {
        for shape in ParabolicShape::all_of_dim(m).into_iter().filter(|s| s.odd_blocks().is_empty()) {
            let blocks = shape.block_sizes();
            let mut expected: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
            for (p, w) in kostant_formula(&blocks, &vec![0; m])? {
                let seq = PartitionSeq::from_weight(&blocks, &w)?;
                for (v, c) in assemble_character(&blocks, &BTreeMap::from([(seq, 1)]))? {
                    let slot = expected.entry(torus_weight(&v)).or_default();
                    slot.resize(slot.len().max(p + 1), 0);
                    slot[p] += c as usize;
                }
            }
            // Cochains are products of distinct roots: each coordinate lies in [1-m, m-1].
            let reach = m as i64 - 1;
            let alg = build_nilradical(&shape);
            let table = cohomology_table(&alg, &WeightBox::cube(m, -reach, reach).points(), None, &opts.sweep())?;
            for (w, dims) in &table.entries {
                let want = expected.get(w).cloned().unwrap_or_default();
                f.expect(*dims == want, || format!("{shape} at {w:?}: {dims:?}, expected {want:?}"));
            }
            for w in expected.keys() {
                f.expect(table.contains(w), || format!("{shape}: formula class at {w:?} outside the cochain range"));
            }
        }
    }
    Ok(f)
}

fn borel_shapes(max_dim: usize) -> Vec<ParabolicShape> {
    let mut out = Vec::new();
    for total in 1..=max_dim {
        for m in 0..=total {
            for pi in Shuffle::all(m, total - m) {
                out.push(ParabolicShape::borel(m, total - m, pi).expect("Borel shape"));
            }
        }
    }
    out
}

fn borel_euler_range(opts: &SuiteOptions) -> Result<Findings> {
    let mut f = Findings::default();
    for shape in borel_shapes(opts.max_dim) {
        let alg = build_nilradical(&shape);
        let points = WeightBox::cube(shape.dim(), -2, 2).points();
        let values: Vec<(Weight, i64)> = run_parallel(opts.jobs, || {
            points.par_iter().map(|w| Ok((w.clone(), euler_at_weight(&alg, w, None)?))).collect::<Result<_>>()
        })?;
        for (w, e) in values {
            f.expect(e.abs() <= 1, || format!("{shape} at {w:?}: Euler characteristic {e}"));
        }
    }
    Ok(f)
}

/// Closed formula, signed cochain count and series expansion agree exactly;
/// the CE-degree Euler characteristic equals them up to the sign
/// `(-1)^(sum of the odd coordinates)`.
fn sector_formula_bridge(opts: &SuiteOptions) -> Result<Findings> {
    let mut f = Findings::default();
    for n in 1..=2usize {
        let bounds = WeightBox::cube(2 * n, -2, 2);
        for pi in Shuffle::all(n, n) {
            let shape = ParabolicShape::borel(n, n, pi.clone())?;
            let alg = build_nilradical(&shape);
            let series = euler_series(&shape, &bounds)?;
            let odd: Vec<bool> = (0..2 * n).map(|c| shape.coord_parity(c).is_odd()).collect();
            let rows: Vec<(Weight, i64, i64, i64)> = run_parallel(opts.jobs, || {
                bounds
                    .points()
                    .par_iter()
                    .map(|w| {
                        let formula = euler_coefficient_formula(&pi, w)?.value;
                        Ok((w.clone(), formula, super_euler_at_weight(&alg, w)?, euler_at_weight(&alg, w, None)?))
                    })
                    .collect::<Result<_>>()
            })?;
            for (w, formula, signed, euler) in rows {
                let expansion = series.coefficient(&w).unwrap_or_default();
                f.expect(expansion == formula.into() && signed == formula, || {
                    format!("{pi} at {w:?}: formula {formula}, cochains {signed}, expansion {expansion}")
                });
                let odd_sum: i64 = w.iter().zip(&odd).filter(|(_, &o)| o).map(|(x, _)| x).sum();
                let sign = if odd_sum.rem_euclid(2) == 0 { 1 } else { -1 };
                f.expect(euler == sign * signed, || format!("{pi} at {w:?}: CE Euler {euler} vs signed count {signed}"));
            }
        }
    }
    f.note = "CE-degree Euler characteristic compared up to the odd-coordinate sign".into();
    Ok(f)
}

fn adjacent_pairs(n: usize) -> Vec<(Shuffle, Shuffle)> {
    Shuffle::all(n, n).into_iter().flat_map(|pi| adjacent_shuffles(&pi).into_iter().map(move |q| (pi.clone(), q))).collect()
}

fn delta_reexpansion(_: &SuiteOptions) -> Result<Findings> {
    let mut f = Findings::default();
    for n in 1..=2 {
        for (pi, q) in adjacent_pairs(n) {
            let report = delta_reexpansion_check(&pi, &q, &WeightBox::cube(2 * n, -2, 2))?;
            f.expect(report.passed(), || {
                format!("{pi} -> {q}: {} delta and {} ratio failures", report.delta_failures.len(), report.ratio_failures.len())
            });
        }
    }
    Ok(f)
}

fn simple_spectrum(opts: &SuiteOptions) -> Result<Findings> {
    let mut f = Findings::default();
    for m in 1..=opts.max_dim {
        for shape in ParabolicShape::all_of_dim(m) {
            let report = simple_spectrum_sweep(&shape, &WeightBox::cube(m, -2, 2), &opts.sweep())?;
            f.expect(report.pass, || {
                let bad: Vec<String> = report.entries.iter().filter(|e| e.total > 1).map(|e| format!("{:?}", e.alpha)).collect();
                format!("{shape}: repeated {}", bad.join(", "))
            });
        }
    }
    Ok(f)
}

fn odd_reflection(opts: &SuiteOptions) -> Result<Findings> {
    let mut f = Findings::default();
    for n in 1..=2 {
        for (pi, q) in adjacent_pairs(n) {
            let report = odd_reflection_report(&pi, &q, &WeightBox::cube(2 * n, -2, 2), 8, opts.jobs)?;
            f.expect(report.passed(), || format!("{pi} -> {q}: {:?}", report.mismatches.first()));
        }
    }
    Ok(f)
}

/// Indecomposables, then seeded random sums in scrambled bases: the three
/// formality tests agree with each other and with the known summands, and
/// `HC(F_n(delta, delta))` is `k[u]/(u^n)`.
fn mixed_formality(opts: &SuiteOptions) -> Result<Findings> {
    let mut f = Findings::default();
    for kind in IndecompKind::all_up_to_span(8) {
        let m = IndecompLabel::new(kind, 0).module();
        let v = formality_verdicts(&m)?;
        f.expect(v.agree() && v.spectral_sequence == !kind.is_delta_delta(), || format!("{kind:?}: {v:?}"));
    }
    let kinds = IndecompKind::all_up_to_span(5);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for trial in 0..100 {
        let count = rng.gen_range(1..=3);
        let mut labels: Vec<IndecompLabel> =
            (0..count).map(|_| IndecompLabel::new(kinds[rng.gen_range(0..kinds.len())], rng.gen_range(-1..=2))).collect();
        labels.sort();
        let parts: Vec<MixedComplex> = labels.iter().map(IndecompLabel::module).collect();
        let sum = MixedComplex::direct_sum(&parts.iter().collect::<Vec<_>>());
        let g: Vec<SparseMatrix> = sum.space().dims().iter().map(|&d| random_invertible(&mut rng, d)).collect();
        let scrambled = sum.conjugate(&g)?;
        let v = formality_verdicts(&scrambled)?;
        let formal = labels.iter().all(|l| !l.kind.is_delta_delta());
        let mut found = decompose(&scrambled)?;
        found.sort();
        f.expect(v.agree() && v.spectral_sequence == formal && found == labels, || {
            format!("trial {trial}: summands {labels:?}, found {found:?}, verdicts {v:?}")
        });
    }
    for n in 1..=4 {
        let m = IndecompLabel::new(IndecompKind::zigzag(n, Arrow::Delta, Arrow::Delta)?, 0).module();
        let hc = cyclic_cohomology(&m, required_u_cap(&m))?;
        f.expect(hc.free.is_empty() && hc.torsion_exponents() == vec![n], || format!("HC of F_{n}(delta,delta): {hc:?}"));
    }
    Ok(f)
}

/// Brute-force tensor decompositions against the closed multiplication table,
/// and low-degree cohomology of the basic modules.
fn sl11_tables(_: &SuiteOptions) -> Result<Findings> {
    let lambdas = [-3, -2, -1, 1, 2, 3];
    let mut f = Findings::default();
    let checks = tensor_table_checks(&lambdas)?;
    for c in &checks {
        f.expect(c.agree, || {
            let why = if c.table_consistent { "" } else { "; the table's summands contradict the Künneth count of Q-cohomology" };
            format!("{} ⊗ {}: computed {:?}, table {:?}{why}", c.left, c.right, c.computed, c.table)
        });
    }
    let cap = 8;
    let trivial = sl11_cohomology(&sl11_module(&Sl11Kind::I)?, cap)?;
    let mut want = vec![2; cap];
    want[0] = 1;
    f.expect(trivial == want, || format!("H(I) = {trivial:?}"));
    for &l in &lambdas {
        let h = sl11_cohomology(&sl11_module(&Sl11Kind::IILambda(rat(l)))?, cap)?;
        f.expect(h.iter().all(|&d| d == 0), || format!("H(II_{l}) = {h:?}"));
    }
    let three = sl11_cohomology(&sl11_module(&Sl11Kind::III)?, cap)?;
    let mut want = vec![0; cap];
    want[..2].copy_from_slice(&[1, 1]);
    f.expect(three == want, || format!("H(III) = {three:?}"));
    f.note = format!("{} ordered pairs", checks.len());
    Ok(f)
}

/// Random complexes assembled from known summands and scrambled, compared
/// with the count of maps between summands in the homotopy category.
fn tangent_oracle(opts: &SuiteOptions) -> Result<Findings> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x7a9);
    let mut f = Findings::default();
    for _ in 0..20 {
        let len = rng.gen_range(2..=4);
        let mut dec = ComplexDecomposition { classes: vec![0; len], pairs: vec![0; len] };
        let budget = rng.gen_range(1..=6);
        let mut total = 0;
        while total < budget {
            if total + 2 <= 6 && rng.gen_bool(0.5) {
                dec.pairs[rng.gen_range(0..len - 1)] += 1;
                total += 2;
            } else {
                dec.classes[rng.gen_range(0..len)] += 1;
                total += 1;
            }
        }
        let dims = dec.dims();
        let basis: Vec<SparseMatrix> = dims.iter().map(|&n| random_invertible(&mut rng, n)).collect();
        let inv: Vec<SparseMatrix> = basis.iter().map(|b| inverse(b).expect("invertible")).collect();
        let ds: Vec<SparseMatrix> =
            dec.differentials().iter().enumerate().map(|(p, d)| basis[p + 1].mul(d).mul(&inv[p])).collect();
        let got = tangent_cohomology(&dims, &ds)?;
        let want = dec.tangent_oracle();
        f.expect(got == want, || format!("{dec:?}: {got:?}, oracle {want:?}"));
    }
    Ok(f)
}
