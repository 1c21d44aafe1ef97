use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Map, Value};

use superchain::ce_cohomology::odd_reflection::adjacent_shuffles;
use superchain::ce_cohomology::{cohomology_table, odd_reflection_report, CohomCache, SweepOptions};
use superchain::characters::simple_spectrum_sweep;
use superchain::lie_superalgebra::build_nilradical;
use superchain::mixed_complexes::sl11::{
    sl11_cohomology, sl11_decompose, sl11_module, sl11_tensor_decompose, sl11_tensor_table, tensor_table_checks, Sl11Kind,
    Sl11Module,
};
use superchain::mixed_complexes::{
    cyclic_cohomology, d_cohomology, decompose, formality_verdicts, last_page, required_u_cap, MixedComplex,
};
use superchain::registry::strategy;
use superchain::root_data::{ParabolicShape, Shuffle, WeightBox};
use superchain::suite::{run_suite, SuiteOptions};

use crate::output::{int, ints, Report, Verdict};
use crate::{Cli, Command};

const DEFAULT_BOX: &str = "-2..2";
const DEFAULT_SL11_CAP: usize = 6;
const DEFAULT_REFLECTION_CAP: usize = 8;

pub fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Cohomology => cohomology(cli),
        Command::Euler => euler(cli),
        Command::EulerFormula { against } => euler_formula(cli, against),
        Command::Expand { strategy } => expand(cli, strategy),
        Command::SimpleSpectrum => simple_spectrum(cli),
        Command::OddReflection { to } => odd_reflection(cli, to.as_deref()),
        Command::Mixed { input } => mixed(cli, input),
        Command::Sl11 { input, module, with, table, lambdas } => {
            if let Some(path) = input {
                sl11_file(cli, path)
            } else if *table {
                sl11_table(cli, lambdas)
            } else if let Some(label) = module {
                sl11_labels(cli, label, with.as_deref())
            } else {
                bail!("sl11 needs one of --input, --module or --table")
            }
        }
        Command::VerifyAll { max_dim } => verify_all(cli, *max_dim),
    }
}

fn command_name(cli: &Cli) -> &'static str {
    match cli.command {
        Command::Cohomology => "cohomology",
        Command::Euler => "euler",
        Command::EulerFormula { .. } => "euler-formula",
        Command::Expand { .. } => "expand",
        Command::SimpleSpectrum => "simple-spectrum",
        Command::OddReflection { .. } => "odd-reflection",
        Command::Mixed { .. } => "mixed",
        Command::Sl11 { .. } => "sl11",
        Command::VerifyAll { .. } => "verify-all",
    }
}

/// The echoed job description. Worker count and cache location are left out
/// so that output does not depend on them.
fn base_input(cli: &Cli) -> Map<String, Value> {
    let mut m = Map::new();
    if let Some(s) = &cli.shape {
        m.insert("shape".into(), json!(s));
    }
    if let Some(s) = &cli.shuffle {
        m.insert("shuffle".into(), json!(s));
    }
    if let Some(c) = cli.degree_cap {
        m.insert("degree_cap".into(), json!(c));
    }
    m
}

fn report(cli: &Cli, input: Map<String, Value>, results: Vec<Value>, weight_box: Option<String>, verdict: Verdict) -> Report {
    Report { command: command_name(cli), input, results, weight_box, degree_cap: cap(cli), verdict }
}

fn cap(cli: &Cli) -> Option<usize> {
    cli.degree_cap.map(|c| c as usize)
}

fn jobs(cli: &Cli) -> Option<usize> {
    cli.jobs.map(|j| j as usize)
}

fn shape(cli: &Cli) -> Result<ParabolicShape> {
    let text = cli.shape.as_deref().ok_or_else(|| anyhow!("--shape is required, e.g. --shape \"1,1|1\""))?;
    let shuffle = match &cli.shuffle {
        Some(s) => s.clone(),
        None => {
            let blocks = text.split(['|', ',']).filter(|t| !t.trim().is_empty()).count();
            (1..=blocks).map(|k| k.to_string()).collect::<Vec<_>>().join(",")
        }
    };
    ParabolicShape::parse(text, &shuffle).with_context(|| format!("bad shape {text:?} with shuffle {shuffle:?}"))
}

fn weight_box(cli: &Cli, dim: usize) -> Result<WeightBox> {
    let text = cli.weight_box.as_deref().unwrap_or(DEFAULT_BOX);
    WeightBox::parse(text, dim).with_context(|| format!("bad --box {text:?}"))
}

fn sweep(cli: &Cli) -> Result<SweepOptions> {
    let cache = match &cli.cache_dir {
        Some(dir) => Some(CohomCache::new(dir).with_context(|| format!("cache directory {}", dir.display()))?),
        None => None,
    };
    Ok(SweepOptions { jobs: jobs(cli), cache })
}

fn cohomology(cli: &Cli) -> Result<Report> {
    let shape = shape(cli)?;
    let bounds = weight_box(cli, shape.dim())?;
    let table = cohomology_table(&build_nilradical(&shape), &bounds.points(), cap(cli), &sweep(cli)?)?;
    let results = table
        .entries
        .iter()
        .filter(|(_, d)| d.iter().any(|&x| x > 0))
        .map(|(w, d)| json!({ "weight": ints(w), "dims": d }))
        .collect();
    Ok(report(cli, base_input(cli), results, Some(bounds.to_string()), Verdict::Ok))
}

fn euler(cli: &Cli) -> Result<Report> {
    let shape = shape(cli)?;
    let bounds = weight_box(cli, shape.dim())?;
    let table = cohomology_table(&build_nilradical(&shape), &bounds.points(), cap(cli), &sweep(cli)?)?;
    let results = table
        .entries
        .iter()
        .filter_map(|(w, d)| {
            let e: i64 = d.iter().enumerate().map(|(p, &x)| if p % 2 == 0 { x as i64 } else { -(x as i64) }).sum();
            (e != 0).then(|| json!({ "weight": ints(w), "euler": int(e) }))
        })
        .collect();
    Ok(report(cli, base_input(cli), results, Some(bounds.to_string()), Verdict::Ok))
}

fn euler_formula(cli: &Cli, against: &str) -> Result<Report> {
    let shape = shape(cli)?;
    let bounds = weight_box(cli, shape.dim())?;
    let formula = strategy("formula")?.coefficients(&shape, &bounds)?;
    let other = strategy(against)?.coefficients(&shape, &bounds)?;
    let mut pass = true;
    let mut results = Vec::new();
    for (w, f) in &formula {
        let g = other.get(w).copied().unwrap_or(0);
        pass &= *f == g;
        if *f != 0 || g != 0 {
            results.push(json!({ "weight": ints(w), "formula": int(*f), against: int(g), "agree": *f == g }));
        }
    }
    let mut input = base_input(cli);
    input.insert("against".into(), json!(against));
    Ok(report(cli, input, results, Some(bounds.to_string()), Verdict::from_pass(pass)))
}

fn expand(cli: &Cli, name: &str) -> Result<Report> {
    let shape = shape(cli)?;
    let bounds = weight_box(cli, shape.dim())?;
    let results = strategy(name)?
        .coefficients(&shape, &bounds)?
        .into_iter()
        .filter(|(_, c)| *c != 0)
        .map(|(w, c)| json!({ "weight": ints(&w), "coefficient": int(c) }))
        .collect();
    let mut input = base_input(cli);
    input.insert("strategy".into(), json!(name));
    Ok(report(cli, input, results, Some(bounds.to_string()), Verdict::Ok))
}

fn simple_spectrum(cli: &Cli) -> Result<Report> {
    let shape = shape(cli)?;
    let bounds = weight_box(cli, shape.dim())?;
    let r = simple_spectrum_sweep(&shape, &bounds, &sweep(cli)?)?;
    let results = r
        .entries
        .iter()
        .map(|e| json!({ "highest_weight": e.alpha.blocks, "profile": e.profile, "total": int(e.total) }))
        .collect();
    Ok(report(cli, base_input(cli), results, Some(r.weight_box), Verdict::from_pass(r.pass)))
}

fn odd_reflection(cli: &Cli, to: Option<&str>) -> Result<Report> {
    let shape = shape(cli)?;
    if !shape.is_borel() {
        bail!("odd-reflection needs a Borel shape (all blocks of size 1), got {}", shape.shape_text());
    }
    let pi = shape.shuffle().clone();
    let targets = match to {
        Some(t) => vec![Shuffle::parse(t, pi.m(), pi.n()).with_context(|| format!("bad --to {t:?}"))?],
        None => adjacent_shuffles(&pi),
    };
    let bounds = weight_box(cli, shape.dim())?;
    let degree_cap = cap(cli).unwrap_or(DEFAULT_REFLECTION_CAP);
    let mut pass = true;
    let mut results = Vec::new();
    for q in targets {
        let r = odd_reflection_report(&pi, &q, &bounds, degree_cap, jobs(cli))?;
        pass &= r.passed();
        results.push(serde_json::to_value(&r)?);
    }
    let mut out = report(cli, base_input(cli), results, Some(bounds.to_string()), Verdict::from_pass(pass));
    out.degree_cap = Some(degree_cap);
    Ok(out)
}

fn read(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn mixed(cli: &Cli, path: &std::path::Path) -> Result<Report> {
    let m = MixedComplex::parse(&read(path)?).with_context(|| format!("{} is not a mixed complex", path.display()))?;
    let verdicts = formality_verdicts(&m)?;
    let hc = cyclic_cohomology(&m, required_u_cap(&m))?;
    let summands: Vec<String> = decompose(&m)?.iter().map(ToString::to_string).collect();
    let row = json!({
        "lo": int(m.lo()),
        "dims": m.dims().dims,
        "d_cohomology": serde_json::to_value(d_cohomology(&m))?,
        "last_page": last_page(&m),
        "summands": summands,
        "cyclic_free_generators": ints(&hc.free),
        "cyclic_torsion": hc.torsion.iter().map(|(g, e)| json!([int(*g), e])).collect::<Vec<_>>(),
        "cyclic_dims": serde_json::to_value(&hc.dims)?,
        "formal_by_spectral_sequence": verdicts.spectral_sequence,
        "formal_by_cyclic_freeness": verdicts.cyclic_free,
        "formal_by_summands": verdicts.no_delta_delta,
    });
    let mut input = Map::new();
    input.insert("input".into(), json!(path.display().to_string()));
    Ok(report(cli, input, vec![row], None, Verdict::from_pass(verdicts.agree())))
}

fn summand_rows(summands: &[superchain::mixed_complexes::sl11::Sl11Summand]) -> Vec<Value> {
    summands.iter().map(|s| json!({ "kind": s.kind.to_string(), "offset": int(s.offset) })).collect()
}

fn sl11_file(cli: &Cli, path: &std::path::Path) -> Result<Report> {
    let v = Sl11Module::parse(&read(path)?).with_context(|| format!("{} is not an sl(1|1)-module", path.display()))?;
    let mut input = Map::new();
    input.insert("input".into(), json!(path.display().to_string()));
    Ok(report(cli, input, summand_rows(&sl11_decompose(&v)?), None, Verdict::Ok))
}

fn sl11_labels(cli: &Cli, label: &str, with: Option<&str>) -> Result<Report> {
    let a = Sl11Kind::parse(label)?;
    let mut input = Map::new();
    input.insert("module".into(), json!(label));
    let Some(with) = with else {
        let degree_cap = cap(cli).unwrap_or(DEFAULT_SL11_CAP);
        let dims = sl11_cohomology(&sl11_module(&a)?, degree_cap)?;
        let mut out = report(cli, input, vec![json!({ "module": a.to_string(), "cohomology": dims })], None, Verdict::Ok);
        out.degree_cap = Some(degree_cap);
        return Ok(out);
    };
    let b = Sl11Kind::parse(with)?;
    input.insert("with".into(), json!(with));
    let computed = sl11_tensor_decompose(&sl11_module(&a)?, &sl11_module(&b)?)?;
    let mut results = summand_rows(&computed);
    // Compare with the closed table when both factors are in its scope.
    let verdict = match sl11_tensor_table(&a, &b) {
        Ok(table) => {
            let mut got: Vec<Sl11Kind> = computed.iter().map(|s| s.kind.clone()).collect();
            let mut want = table.clone();
            got.sort();
            want.sort();
            results.push(json!({ "table": table.iter().map(ToString::to_string).collect::<Vec<_>>() }));
            Verdict::from_pass(got == want)
        }
        Err(_) => Verdict::Ok,
    };
    Ok(report(cli, input, results, None, verdict))
}

fn sl11_table(cli: &Cli, lambdas: &[i64]) -> Result<Report> {
    let checks = tensor_table_checks(lambdas)?;
    let pass = checks.iter().all(|c| c.agree);
    let results = checks.iter().map(serde_json::to_value).collect::<Result<Vec<_>, _>>()?;
    let mut input = Map::new();
    input.insert("lambdas".into(), ints(lambdas));
    Ok(report(cli, input, results, None, Verdict::from_pass(pass)))
}

fn verify_all(cli: &Cli, max_dim: usize) -> Result<Report> {
    let opts = SuiteOptions { max_dim, jobs: jobs(cli), seed: cli.seed, cache: sweep(cli)?.cache };
    let reports = run_suite(&opts);
    for r in &reports {
        eprintln!("{}", r.line());
    }
    let pass = reports.iter().all(|r| r.pass);
    let results = reports
        .iter()
        .map(|r| {
            json!({
                "id": r.id,
                "name": r.name,
                "pass": r.pass,
                "checked": r.checked,
                "failures": r.failures,
                "note": r.note,
            })
        })
        .collect();
    let mut input = Map::new();
    input.insert("max_dim".into(), json!(max_dim));
    input.insert("seed".into(), json!(cli.seed.to_string()));
    Ok(report(cli, input, results, None, Verdict::from_pass(pass)))
}
