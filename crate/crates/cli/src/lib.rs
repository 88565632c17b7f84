//! Command-line front end: argument parsing, report writing and exit codes.
//!
//! Exit codes: 0 on success or a true verdict, 1 on a false verdict (the
//! report carries the witness), 2 on usage, input or precondition errors.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use posetdim::acceptance::{run_criterion, SuiteConfig, SuiteSummary};
use posetdim::dimension::{exact_dimension, DimensionOutcome};
use posetdim::integers::{
    build_divisibility_poset, build_interval_realiser, decompose_interval, dimension_bound_interval,
    verify_appendix_a, Check, IntervalSpec,
};
use posetdim::multiset::{build_realiser_multiset, WeightVector};
use posetdim::poly::{
    build_poly_poset, build_poly_realiser, dimension_bound_poly, irreducibles_up_to_degree, verify_appendix_b,
    FieldSpec,
};
use posetdim::poset::{is_realiser, ElementId, PosetJson, RealiserVerdict};
use posetdim::rational::{format_rational, parse_rational};
use posetdim::report::{BoundRow, Report};
use posetdim::{Caps, Poset, Realiser};

#[derive(Debug, Parser)]
#[command(name = "posetdim", version, about = "Dimension of multiset and divisibility posets")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Master seed for randomized constructions.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON file overriding the default size caps.
    #[arg(long, global = true)]
    caps: Option<PathBuf>,
    /// Worker threads for the acceptance suite.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write bound-versus-size rows as CSV.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Poset utilities.
    #[command(subcommand)]
    Poset(PosetCmd),
    /// Exact dimension.
    #[command(subcommand)]
    Dim(DimCmd),
    /// Weighted multiset posets.
    #[command(subcommand)]
    Multiset(MultisetCmd),
    /// Divisibility on integer intervals.
    #[command(subcommand)]
    Div(DivCmd),
    /// Divisibility on monic polynomials over a finite field.
    #[command(subcommand)]
    Poly(PolyCmd),
    /// Run the acceptance suite.
    Accept(AcceptArgs),
}

#[derive(Debug, Subcommand)]
enum PosetCmd {
    /// Check that a list of linear extensions realises a poset.
    CheckRealiser {
        #[arg(long)]
        poset: PathBuf,
        #[arg(long)]
        realiser: PathBuf,
    },
    /// List the critical pairs of a poset.
    CriticalPairs {
        #[arg(long)]
        poset: PathBuf,
    },
    /// Emit the subsets of `[n]` with sizes in `layers`.
    Hypercube {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        layers: Vec<usize>,
    },
}

#[derive(Debug, Subcommand)]
enum DimCmd {
    /// Exact dimension by branch and bound.
    Exact {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_d: usize,
    },
}

#[derive(Debug, Subcommand)]
enum MultisetCmd {
    /// Build and certify a realiser of `M^{n,v}_{[k,l]}`.
    Realiser {
        #[arg(long)]
        n: usize,
        /// `ones`, `log-primes`, `degrees:1,1,2` or `rationals:1/2,1,3/2`.
        #[arg(long, default_value = "ones")]
        weights: String,
        /// Lower size bound; for log-primes, the `A` in `log A`.
        #[arg(long)]
        k: String,
        #[arg(long)]
        l: String,
    },
}

#[derive(Debug, Args)]
struct IntervalArgs {
    #[arg(long = "n")]
    n: u64,
    #[arg(long)]
    kappa: String,
}

#[derive(Debug, Subcommand)]
enum DivCmd {
    /// Emit the divisibility poset on `[N/κ, N]`.
    Build(IntervalArgs),
    /// Split the interval into components and run the isomorphism checks.
    Decompose(IntervalArgs),
    /// Evaluate both dimension bounds for each `κ`.
    Bound {
        #[arg(long, value_delimiter = ',', required = true)]
        kappa: Vec<String>,
    },
    /// Build and certify a realiser of the interval.
    Realiser(IntervalArgs),
    /// Check the prime-sum inequality for `κ`.
    VerifyAppendixA {
        #[arg(long)]
        kappa: String,
    },
}

#[derive(Debug, Subcommand)]
enum PolyCmd {
    /// Monic irreducibles of degree at most `delta`.
    Irreducibles {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        delta: usize,
    },
    /// Emit the divisibility poset of monic polynomials with degree in `[d0 − δ, d0]`.
    Build {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        d0: usize,
        #[arg(long)]
        delta: usize,
    },
    /// Evaluate the dimension bound for each `δ`.
    Bound {
        #[arg(long)]
        q: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        delta: Vec<usize>,
    },
    /// Build and certify a realiser.
    Realiser {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        d0: usize,
        #[arg(long)]
        delta: usize,
    },
    /// Check the irreducible-count inequalities for `(q, δ)`.
    VerifyAppendixB {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        delta: usize,
    },
}

#[derive(Debug, Args)]
struct AcceptArgs {
    /// JSON suite config: `criteria`, `seed`, `caps`, `corrupt`.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Criteria to run, overriding the config.
    #[arg(long, value_delimiter = ',')]
    criteria: Option<Vec<u8>>,
    /// Criteria to run against a corrupted fixture.
    #[arg(long, value_delimiter = ',')]
    corrupt: Vec<u8>,
}

/// What a command hands back before it is wrapped in a report.
struct Outcome {
    command: &'static str,
    params: Value,
    verdict: Option<bool>,
    result: Value,
    rows: Vec<BoundRow>,
    timings: Value,
}

impl Outcome {
    fn new(command: &'static str, params: Value, verdict: Option<bool>, result: impl Serialize) -> Result<Self> {
        Ok(Outcome {
            command,
            params,
            verdict,
            result: serde_json::to_value(result)?,
            rows: Vec::new(),
            timings: Value::Null,
        })
    }

    fn with_rows(mut self, rows: Vec<BoundRow>) -> Self {
        self.rows = rows;
        self
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("malformed JSON in {}", path.display()))
}

fn load_poset(path: &Path, caps: &Caps) -> Result<Poset> {
    let json: PosetJson = read_json(path)?;
    Ok(Poset::from_json(&json, caps)?)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RealiserFile {
    Lists(Vec<Vec<ElementId>>),
    Object { extensions: Vec<Vec<ElementId>> },
}

fn interval(args: &IntervalArgs) -> Result<IntervalSpec> {
    Ok(IntervalSpec::new(args.n, parse_rational(&args.kappa)?)?)
}

fn verdict_json(p: &Poset, v: RealiserVerdict) -> Value {
    match v {
        RealiserVerdict::Realiser => json!({"realiser": true}),
        RealiserVerdict::Unreversed { x, y } => json!({
            "realiser": false,
            "witness": {"x": p.id(x), "y": p.id(y)},
        }),
    }
}

fn check_json(c: &Check) -> Value {
    serde_json::to_value(c).unwrap_or(Value::Null)
}

fn poset_cmd(cmd: &PosetCmd, caps: &Caps) -> Result<Outcome> {
    match cmd {
        PosetCmd::CheckRealiser { poset, realiser } => {
            let p = load_poset(poset, caps)?;
            let lists = match read_json::<RealiserFile>(realiser)? {
                RealiserFile::Lists(l) | RealiserFile::Object { extensions: l } => l,
            };
            let r = Realiser::from_ids(&p, &lists)?;
            let v = is_realiser(&p, &r.extensions)?;
            let params = json!({"poset": poset, "realiser": realiser});
            Outcome::new("poset check-realiser", params, Some(v.holds()), verdict_json(&p, v))
        }
        PosetCmd::CriticalPairs { poset } => {
            let p = load_poset(poset, caps)?;
            let pairs: Vec<(&ElementId, &ElementId)> =
                p.critical_pairs().into_iter().map(|(x, y)| (p.id(x), p.id(y))).collect();
            Outcome::new(
                "poset critical-pairs",
                json!({"poset": poset}),
                None,
                json!({"elements": p.len(), "critical_pairs": pairs}),
            )
        }
        PosetCmd::Hypercube { n, layers } => {
            let p = Poset::hypercube_layers(*n, layers, caps)?;
            Outcome::new("poset hypercube", json!({"n": n, "layers": layers}), None, p.to_json())
        }
    }
}

fn dim_cmd(cmd: &DimCmd, caps: &Caps) -> Result<Outcome> {
    let DimCmd::Exact { input, max_d } = cmd;
    let p = load_poset(input, caps)?;
    let params = json!({"input": input, "max_d": max_d});
    match exact_dimension(&p, *max_d, caps)? {
        DimensionOutcome::Exact { dimension, realiser } => Outcome::new(
            "dim exact",
            params,
            Some(true),
            json!({"dimension": dimension, "elements": p.len(), "realiser": realiser.to_ids(&p)}),
        ),
        DimensionOutcome::ExceedsMax { max_d, lower_bound } => Outcome::new(
            "dim exact",
            params,
            Some(false),
            json!({"dimension": null, "exceeds": max_d, "lower_bound": lower_bound}),
        ),
    }
}

fn multiset_cmd(cmd: &MultisetCmd, seed: u64, caps: &Caps) -> Result<Outcome> {
    let MultisetCmd::Realiser { n, weights, k, l } = cmd;
    let w = WeightVector::parse(weights, *n)?;
    let (ks, ls) = (w.scalar(parse_rational(k)?), w.scalar(parse_rational(l)?));
    let out = build_realiser_multiset(&w, &ks, &ls, seed, caps)?;
    let rep = &out.report;
    let fam = &rep.family;
    let row = BoundRow {
        instance: format!("n={n} v={} [{k},{l}]", w.label()),
        elements: rep.elements,
        size: Some(fam.total),
        bound: fam.theorem_bound,
        allowed: Some(fam.allowed),
        certified: rep.certified,
    };
    let verdict = rep.certified.map(|c| c && fam.within_bound);
    let params = json!({"n": n, "weights": weights, "k": k, "l": l});
    Ok(Outcome::new("multiset realiser", params, verdict, json!({"report": rep}))?.with_rows(vec![row]))
}

fn div_cmd(cmd: &DivCmd, seed: u64, caps: &Caps) -> Result<Outcome> {
    match cmd {
        DivCmd::Build(a) => {
            let spec = interval(a)?;
            let p = build_divisibility_poset(&spec.integers(caps)?, caps)?;
            Outcome::new("div build", json!(spec), None, p.to_json())
        }
        DivCmd::Decompose(a) => {
            let spec = interval(a)?;
            let d = decompose_interval(&spec, caps)?;
            let partition = d.check_partition();
            let cross = d.check_cross_components();
            let iso: Vec<Value> = d
                .components
                .iter()
                .map(|c| json!({"m": c.m, "size": c.members.len(), "iso": check_json(&d.component_iso_check(c))}))
                .collect();
            let all_iso = d.components.iter().all(|c| d.component_iso_check(c).holds());
            let verdict = partition.holds() && cross.holds() && all_iso;
            let result = json!({
                "small_primes": d.small_primes,
                "components": d.components,
                "partition": check_json(&partition),
                "cross_components": check_json(&cross),
                "iso_checks": iso,
            });
            Outcome::new("div decompose", json!(spec), Some(verdict), result)
        }
        DivCmd::Bound { kappa } => {
            let mut bounds = Vec::new();
            let mut rows = Vec::new();
            for k in kappa {
                let b = dimension_bound_interval(&parse_rational(k)?, caps)?;
                rows.push(BoundRow {
                    instance: format!("kappa={}", format_rational(&b.kappa)),
                    elements: None,
                    size: None,
                    bound: b.min,
                    allowed: None,
                    certified: None,
                });
                bounds.push(b);
            }
            Ok(Outcome::new("div bound", json!({"kappa": kappa}), None, bounds)?.with_rows(rows))
        }
        DivCmd::Realiser(a) => {
            let spec = interval(a)?;
            let out = build_interval_realiser(&spec, seed, caps)?;
            let bound = dimension_bound_interval(&spec.kappa, caps)?;
            let rep = &out.report;
            let row = BoundRow {
                instance: format!("N={} kappa={}", spec.n, format_rational(&spec.kappa)),
                elements: Some(rep.elements),
                size: Some(rep.size),
                bound: bound.min,
                allowed: Some(rep.coordinate_route_size as u64),
                certified: Some(rep.certified),
            };
            let result = json!({"report": rep, "bound": bound, "realiser": out.realiser.to_ids(&out.poset)});
            Ok(Outcome::new("div realiser", json!(spec), Some(rep.certified), result)?.with_rows(vec![row]))
        }
        DivCmd::VerifyAppendixA { kappa } => {
            let a = verify_appendix_a(&parse_rational(kappa)?, caps)?;
            let verdict = a.holds && a.robin.holds;
            Outcome::new("div verify-appendix-a", json!({"kappa": kappa}), Some(verdict), a)
        }
    }
}

fn poly_cmd(cmd: &PolyCmd, seed: u64, caps: &Caps) -> Result<Outcome> {
    match cmd {
        PolyCmd::Irreducibles { q, delta } => {
            let f = FieldSpec::new(*q)?;
            let irr = irreducibles_up_to_degree(&f, *delta, caps)?;
            let listed: Vec<Vec<String>> =
                irr.polys.iter().map(|d| d.iter().map(|m| m.to_string()).collect()).collect();
            let result = json!({
                "field": f.summary(),
                "counts": irr.counts,
                "total": irr.total,
                "oracle_agrees": irr.oracle_agrees,
                "irreducibles": listed,
            });
            Outcome::new("poly irreducibles", json!({"q": q, "delta": delta}), Some(irr.oracle_agrees), result)
        }
        PolyCmd::Build { q, d0, delta } => {
            let f = FieldSpec::new(*q)?;
            let pp = build_poly_poset(&f, *d0, *delta, caps)?;
            let result = json!({"field": f.summary(), "poset": pp.poset.to_json()});
            Outcome::new("poly build", json!({"q": q, "d0": d0, "delta": delta}), None, result)
        }
        PolyCmd::Bound { q, delta } => {
            let mut bounds = Vec::new();
            let mut rows = Vec::new();
            for &d in delta {
                let b = dimension_bound_poly(*q, d)?;
                rows.push(BoundRow {
                    instance: format!("q={q} delta={d}"),
                    elements: None,
                    size: None,
                    bound: b.min,
                    allowed: None,
                    certified: None,
                });
                bounds.push(b);
            }
            Ok(Outcome::new("poly bound", json!({"q": q, "delta": delta}), None, bounds)?.with_rows(rows))
        }
        PolyCmd::Realiser { q, d0, delta } => {
            let f = FieldSpec::new(*q)?;
            let out = build_poly_realiser(&f, *d0, *delta, seed, caps)?;
            let rep = &out.report;
            let row = BoundRow {
                instance: format!("q={q} d0={d0} delta={delta}"),
                elements: Some(rep.elements),
                size: Some(rep.size),
                bound: rep.bound.as_ref().map_or(f64::NAN, |b| b.min),
                allowed: rep.allowed,
                certified: Some(rep.certified),
            };
            let verdict = rep.certified && rep.within_bound != Some(false);
            let result = json!({"report": rep, "realiser": out.realiser.to_ids(&out.poset)});
            let params = json!({"q": q, "d0": d0, "delta": delta});
            Ok(Outcome::new("poly realiser", params, Some(verdict), result)?.with_rows(vec![row]))
        }
        PolyCmd::VerifyAppendixB { q, delta } => {
            let f = FieldSpec::new(*q)?;
            let b = verify_appendix_b(&f, *delta, caps)?;
            Outcome::new("poly verify-appendix-b", json!({"q": q, "delta": delta}), Some(b.holds), b)
        }
    }
}

fn accept_cmd(args: &AcceptArgs, global: &Global, caps: Option<Caps>) -> Result<Outcome> {
    let mut cfg = match &args.config {
        Some(path) => read_json::<SuiteConfig>(path)?,
        None => SuiteConfig::default(),
    };
    if let Some(c) = &args.criteria {
        cfg.criteria = c.clone();
    }
    cfg.corrupt.extend(&args.corrupt);
    if let Some(seed) = global.seed {
        cfg.seed = seed;
    }
    if let Some(caps) = caps {
        cfg.caps = caps;
    }
    if let Some(bad) = cfg.criteria.iter().find(|&&id| !(1..=10).contains(&id)) {
        bail!("no criterion {bad}");
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(global.jobs.unwrap_or(1).max(1))
        .build()?;
    let timed = pool.install(|| cfg.criteria.par_iter().map(|&id| run_criterion(id, &cfg)).collect());
    let summary = SuiteSummary::from_outcomes(cfg.seed, timed);
    for o in &summary.outcomes {
        let status = if o.passed { "PASS" } else { "FAIL" };
        eprintln!("criterion {:>2} {status} {}", o.id, o.name);
        if let Some(w) = &o.witness {
            eprintln!("    witness: {w}");
        }
    }
    let mut result = serde_json::to_value(&summary)?;
    let timings = result
        .as_object_mut()
        .and_then(|m| m.remove("timings_ms"))
        .unwrap_or(Value::Null);
    let params = json!({"config": cfg});
    let mut outcome = Outcome::new("accept", params, Some(summary.all_passed()), result)?;
    outcome.timings = json!({"criteria_ms": timings});
    Ok(outcome)
}

fn write_csv(path: &Path, rows: &[BoundRow]) -> Result<()> {
    if rows.is_empty() {
        bail!("this command produces no bound-versus-size rows");
    }
    let mut w = csv::Writer::from_path(path).with_context(|| format!("cannot write {}", path.display()))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn execute(cli: &Cli) -> Result<i32> {
    let start = Instant::now();
    let caps_override = match &cli.global.caps {
        Some(path) => Some(read_json::<Caps>(path)?),
        None => None,
    };
    let caps = caps_override.clone().unwrap_or_default();
    let seed = cli.global.seed.unwrap_or(0);
    let outcome = match &cli.command {
        Command::Poset(c) => poset_cmd(c, &caps)?,
        Command::Dim(c) => dim_cmd(c, &caps)?,
        Command::Multiset(c) => multiset_cmd(c, seed, &caps)?,
        Command::Div(c) => div_cmd(c, seed, &caps)?,
        Command::Poly(c) => poly_cmd(c, seed, &caps)?,
        Command::Accept(a) => accept_cmd(a, &cli.global, caps_override)?,
    };
    let mut params = outcome.params;
    if let Value::Object(map) = &mut params {
        map.insert("seed".into(), json!(seed));
        map.insert("caps".into(), serde_json::to_value(&caps)?);
    }
    let mut report = Report::new(outcome.command, params, outcome.verdict, outcome.result, start.elapsed())?;
    report.timing.breakdown = outcome.timings;
    let text = report.to_json_pretty()?;
    match &cli.global.out {
        Some(path) => fs::write(path, text + "\n").with_context(|| format!("cannot write {}", path.display()))?,
        None => println!("{text}"),
    }
    if let Some(path) = &cli.global.csv {
        write_csv(path, &outcome.rows)?;
    }
    Ok(match outcome.verdict {
        Some(false) => 1,
        _ => 0,
    })
}

/// Parses `argv` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}
