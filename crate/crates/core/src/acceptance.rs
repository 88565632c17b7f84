//! The ten acceptance criteria as library functions.
//!
//! Each criterion returns a pass/fail outcome with a witness on failure. A
//! criterion listed in [`SuiteConfig::corrupt`] runs against a deliberately
//! damaged fixture and is expected to fail; this is the negative control.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::dimension::exact_dimension;
use crate::integers::{build_divisibility_poset, build_interval_realiser, decompose_interval, verify_appendix_a, IntervalSpec};
use crate::multiset::l1::coverage_witness;
use crate::multiset::l2::l2_params;
use crate::multiset::{
    build_l1, build_realiser_multiset, derive_seed, good_function_condition, sample_good_function, GoodFunction,
    WeightVector,
};
use crate::poly::{
    build_poly_realiser, irreducibles_up_to_degree, necklace_count, verify_appendix_b, FieldSpec,
};
use crate::poset::{is_realiser, ElementId, LinearExtension, Poset, RealiserVerdict};
use crate::rational::{from_u64, parse_rational};
use crate::{Caps, Result};

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "exact dimension oracle"),
    (2, "layer collapse"),
    (3, "lexicographic family coverage"),
    (4, "good functions"),
    (5, "multiset realisers"),
    (6, "interval decomposition"),
    (7, "interval realiser end to end"),
    (8, "prime sums for integer intervals"),
    (9, "irreducible counts and polynomial realiser"),
    (10, "determinism"),
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteConfig {
    pub criteria: Vec<u8>,
    pub seed: u64,
    pub caps: Caps,
    /// Criteria to run against a corrupted fixture.
    pub corrupt: Vec<u8>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            criteria: CRITERIA.iter().map(|c| c.0).collect(),
            seed: 0,
            caps: Caps::default(),
            corrupt: Vec::new(),
        }
    }
}

impl SuiteConfig {
    pub fn empty() -> Self {
        SuiteConfig {
            criteria: Vec::new(),
            ..SuiteConfig::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub corrupted: bool,
    pub detail: Vec<String>,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteSummary {
    pub seed: u64,
    pub outcomes: Vec<CriterionOutcome>,
    pub passed: usize,
    pub failed: usize,
    /// Wall-clock milliseconds per criterion, kept apart from the outcomes.
    pub timings_ms: BTreeMap<u8, f64>,
}

impl SuiteSummary {
    pub fn from_outcomes(seed: u64, timed: Vec<(CriterionOutcome, f64)>) -> Self {
        let mut outcomes = Vec::with_capacity(timed.len());
        let mut timings_ms = BTreeMap::new();
        for (o, ms) in timed {
            timings_ms.insert(o.id, ms);
            outcomes.push(o);
        }
        outcomes.sort_by_key(|o| o.id);
        let passed = outcomes.iter().filter(|o| o.passed).count();
        SuiteSummary {
            seed,
            failed: outcomes.len() - passed,
            passed,
            outcomes,
            timings_ms,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Default)]
struct Checks {
    notes: Vec<String>,
    failures: Vec<String>,
}

impl Checks {
    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(witness());
        }
    }

    /// Runs `f`, recording an error as a failure.
    fn attempt<T>(&mut self, what: &str, f: impl FnOnce() -> Result<T>) -> Option<T> {
        match f() {
            Ok(v) => Some(v),
            Err(e) => {
                self.failures.push(format!("{what}: {e}"));
                None
            }
        }
    }
}

fn name_of(id: u8) -> &'static str {
    CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .map_or("unknown criterion", |c| c.1)
}

/// Runs one criterion and returns its outcome and elapsed milliseconds.
pub fn run_criterion(id: u8, cfg: &SuiteConfig) -> (CriterionOutcome, f64) {
    let start = Instant::now();
    let corrupt = cfg.corrupt.contains(&id);
    let mut c = Checks::default();
    match id {
        1 => criterion_1(&mut c, cfg, corrupt),
        2 => criterion_2(&mut c, cfg, corrupt),
        3 => drop(criterion_3(&mut c, cfg, corrupt)),
        4 => drop(criterion_4(&mut c, cfg, corrupt)),
        5 => drop(criterion_5(&mut c, cfg, corrupt)),
        6 => criterion_6(&mut c, cfg, corrupt),
        7 => drop(criterion_7(&mut c, cfg, corrupt)),
        8 => criterion_8(&mut c, cfg, corrupt),
        9 => criterion_9(&mut c, cfg, corrupt),
        10 => criterion_10(&mut c, cfg, corrupt),
        _ => c.failures.push(format!("no criterion {id}")),
    }
    let outcome = CriterionOutcome {
        id,
        name: name_of(id),
        passed: c.failures.is_empty(),
        corrupted: corrupt,
        detail: c.notes,
        witness: c.failures.into_iter().next(),
    };
    (outcome, start.elapsed().as_secs_f64() * 1e3)
}

/// Runs the configured criteria in order.
pub fn run_suite(cfg: &SuiteConfig) -> SuiteSummary {
    let timed = cfg.criteria.iter().map(|&id| run_criterion(id, cfg)).collect();
    SuiteSummary::from_outcomes(cfg.seed, timed)
}

fn dim_of(c: &mut Checks, label: &str, p: &Poset, caps: &Caps) -> Option<usize> {
    let max_d = p.len().max(2);
    let out = c.attempt(label, || exact_dimension(p, max_d, caps))?;
    let d = out.dimension();
    c.check(d.is_some(), || format!("{label}: no realiser within {max_d}"));
    d
}

fn random_poset(rng: &mut ChaCha8Rng, max: usize) -> Poset {
    let n = rng.gen_range(1..=max);
    let arcs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|_| rng.gen_bool(0.35))
        .collect();
    let ids = (0..n as i64).map(ElementId::Int).collect();
    Poset::from_arcs(ids, arcs, &Caps::default()).expect("forward arcs are acyclic")
}

fn criterion_1(c: &mut Checks, cfg: &SuiteConfig, corrupt: bool) {
    let caps = &cfg.caps;
    let d6_expected = if corrupt { 3 } else { 2 };
    if let Some(d6) = c.attempt("D_[6]", || build_divisibility_poset(&[1, 2, 3, 4, 5, 6], caps)) {
        let d = dim_of(c, "D_[6]", &d6, caps);
        c.check(d == Some(d6_expected), || format!("dim D_[6] = {d:?}, expected {d6_expected}"));
    }
    for n in 1..=4 {
        let layers: Vec<usize> = (0..=n).collect();
        if let Some(q) = c.attempt("hypercube", || Poset::hypercube_layers(n, &layers, caps)) {
            let d = dim_of(c, "hypercube", &q, caps);
            c.check(d == Some(n), || format!("dim Q^{n} = {d:?}"));
        }
    }
    for k in 1..=6 {
        let d = dim_of(c, "chain", &Poset::chain(k), caps);
        c.check(d == Some(1), || format!("dim chain_{k} = {d:?}"));
        if k >= 2 {
            let d = dim_of(c, "antichain", &Poset::antichain(k), caps);
            c.check(d == Some(2), || format!("dim antichain_{k} = {d:?}"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, 0xd1));
    let mut pairs = 0;
    for _ in 0..100 {
        let p = random_poset(&mut rng, 6);
        let q = random_poset(&mut rng, 6);
        let Some(u) = c.attempt("union", || p.disjoint_union(&q, caps)) else { continue };
        let (dp, dq, du) = (dim_of(c, "P", &p, caps), dim_of(c, "Q", &q, caps), dim_of(c, "P+Q", &u, caps));
        if let (Some(dp), Some(dq), Some(du)) = (dp, dq, du) {
            let want = dp.max(dq).max(2);
            c.check(du == want, || {
                format!("dim(P+Q) = {du} but max(dim P, dim Q, 2) = {want} for |P|={}, |Q|={}", p.len(), q.len())
            });
            pairs += 1;
        }
    }
    c.note(format!("D_[6], Q^1..Q^4, chains, antichains and {pairs} random unions"));
}

fn criterion_2(c: &mut Checks, cfg: &SuiteConfig, corrupt: bool) {
    let caps = &cfg.caps;
    let mut cases = 0;
    for n in 1..=4usize {
        for k in 1..n {
            for l in k + 1..n {
                let ends = c.attempt("layers", || Poset::hypercube_layers(n, &[k, l], caps));
                let range: Vec<usize> = (k..=l).collect();
                let full = c.attempt("layers", || Poset::hypercube_layers(n, &range, caps));
                let (Some(ends), Some(full)) = (ends, full) else { continue };
                let a = dim_of(c, "end layers", &ends, caps);
                let b = dim_of(c, "layer range", &full, caps);
                let b = if corrupt && cases == 0 { b.map(|x| x + 1) } else { b };
                c.check(a.is_some() && a == b, || {
                    format!("n={n} k={k} l={l}: dim of end layers {a:?} vs range {b:?}")
                });
                c.note(format!("n={n} [{k},{l}]: {a:?}"));
                cases += 1;
            }
        }
    }
}

fn criterion_3(c: &mut Checks, cfg: &SuiteConfig, corrupt: bool) -> Value {
    let mut artifact = Vec::new();
    for (n, r) in [(6usize, 1usize), (8, 1), (10, 2)] {
        let Some(f) = c.attempt("L1", || build_l1(n, r as f64, cfg.seed, &cfg.caps)) else { continue };
        let sigmas = if corrupt { f.sigmas[..1].to_vec() } else { f.sigmas.clone() };
        c.check(f.len() as u64 <= f.size_bound, || {
            format!("(n={n}, r={r}): {} orders exceed {}", f.len(), f.size_bound)
        });
        c.check(f.verification.is_verified(), || format!("(n={n}, r={r}) not verified"));
        c.check(f.rounds <= 3, || format!("(n={n}, r={r}) took {} rounds", f.rounds));
        let miss = coverage_witness(n, f.y_size, &sigmas);
        c.check(miss.is_none(), || {
            let (x, y) = miss.clone().unwrap();
            format!("(n={n}, r={r}): {x} is never above {y:?}")
        });
        c.note(format!("(n={n}, r={r}): {} orders, bound {}, rounds {}", f.len(), f.size_bound, f.rounds));
        artifact.push(json!({"n": n, "r": r, "sigmas": f.sigmas, "rounds": f.rounds}));
    }
    Value::Array(artifact)
}

fn criterion_4(c: &mut Checks, cfg: &SuiteConfig, corrupt: bool) -> Value {
    let params = l2_params(8, 2);
    c.check(params.a == 6 && params.b == 6 && params.t == 7, || format!("unexpected parameters {params:?}"));
    if let Some(cond) = c.attempt("condition", || good_function_condition(params)) {
        c.check(cond.holds, || format!("condition value 10^{} is not below 1", cond.log10_value));
        c.note(format!("condition value 10^{:.3}", cond.log10_value));
    }
    let Some(f) = c.attempt("sampling", || sample_good_function(params, cfg.seed, &cfg.caps)) else {
        return Value::Null;
    };
    c.check(f.rounds <= 5, || format!("{} rounds", f.rounds));
    c.check(f.verification.is_verified(), || "table not verified".into());
    let table = if corrupt { vec![vec![0; params.n]; params.t] } else { f.table.clone() };
    if let Some(g) = c.attempt("table", || GoodFunction::from_table(params, table)) {
        let bad = g.find_bad_subset();
        c.check(bad.is_none(), || format!("subset {:?} is split into <= r parts by every τ", bad.clone().unwrap()));
    }
    c.note(format!("verified table in {} round(s)", f.rounds));
    json!({"table": f.table, "rounds": f.rounds})
}

fn criterion_5(c: &mut Checks, cfg: &SuiteConfig, corrupt: bool) -> Value {
    let half = || parse_rational("1/2").unwrap();
    let rationals = || -> Result<WeightVector> {
        WeightVector::rationals(vec![half(), half(), from_u64(1), parse_rational("3/2")?, from_u64(2)])
    };
    let instances: Vec<(&str, Result<WeightVector>, u64, u64)> = vec![
        ("ones(6) [1,3]", Ok(WeightVector::ones(6)), 1, 3),
        ("(1,1,2,3) [2,4]", WeightVector::degrees(vec![1, 1, 2, 3]), 2, 4),
        ("(1/2,1/2,1,3/2,2) [1,2]", rationals(), 1, 2),
    ];
    let mut artifact = Vec::new();
    for (label, w, k, l) in instances {
        let Some(w) = c.attempt(label, || w) else { continue };
        let (ks, ls) = (w.scalar(from_u64(k)), w.scalar(from_u64(l)));
        let Some(out) = c.attempt(label, || build_realiser_multiset(&w, &ks, &ls, cfg.seed, &cfg.caps)) else {
            continue;
        };
        let rep = &out.report;
        let Some(realiser) = out.realiser.as_ref() else {
            c.check(false, || format!("{label}: poset not enumerated"));
            continue;
        };
        let Some(mp) = c.attempt(label, || crate::multiset::enumerate_poset(&w, &ks, &ls, &cfg.caps)) else {
            continue;
        };
        let exts: Vec<LinearExtension> = if corrupt {
            realiser.extensions[..1].to_vec()
        } else {
            realiser.extensions.clone()
        };
        if let Some(v) = c.attempt(label, || is_realiser(&mp.poset, &exts)) {
            c.check(v.holds(), || match &v {
                RealiserVerdict::Unreversed { x, y } => format!("{label}: ({x}, {y}) never reversed"),
                RealiserVerdict::Realiser => unreachable!(),
            });
        }
        let fam = &rep.family;
        c.check(fam.within_bound, || {
            format!("{label}: {} extensions exceed the allowed {}", fam.total, fam.allowed)
        });
        c.note(format!(
            "{label}: {} elements, {} extensions, theorem bound {:.1}, allowed {}",
            mp.elements.len(),
            fam.total,
            fam.theorem_bound,
            fam.allowed
        ));
        artifact.push(json!({
            "instance": label,
            "report": rep,
            "realiser": realiser.to_ids(&mp.poset),
        }));
    }
    Value::Array(artifact)
}

fn kappa_grid() -> Vec<BigRational> {
    ["3/2", "3", "5", "10"].iter().map(|s| parse_rational(s).unwrap()).collect()
}

fn criterion_6(c: &mut Checks, cfg: &SuiteConfig, corrupt: bool) {
    let mut instances = 0;
    let mut components = 0usize;
    for kappa in kappa_grid() {
        for n in 1..=2000u64 {
            let Some(spec) = c.attempt("interval", || IntervalSpec::new(n, kappa.clone())) else { continue };
            let Some(d) = c.attempt("decomposition", || decompose_interval(&spec, &cfg.caps)) else { continue };
            let tag = || format!("N={n} κ={kappa}");
            let part = d.check_partition();
            c.check(part.holds(), || format!("{}: {part:?}", tag()));
            let cross = d.check_cross_components();
            c.check(cross.holds(), || format!("{}: {cross:?}", tag()));
            for (i, comp) in d.components.iter().enumerate() {
                let mut comp = comp.clone();
                if corrupt && instances == 0 && i == 0 && comp.images.len() >= 2 {
                    comp.images.swap(0, 1);
                }
                let iso = d.component_iso_check(&comp);
                c.check(iso.holds(), || format!("{} component M={}: {iso:?}", tag(), comp.m));
            }
            components += d.components.len();
            if corrupt && instances == 0 && d.components.iter().all(|x| x.images.len() < 2) {
                continue;
            }
            instances += 1;
        }
    }
    c.note(format!("{instances} intervals, {components} components"));
}

fn criterion_7(c: &mut Checks, cfg: &SuiteConfig, corrupt: bool) -> Value {
    let mut artifact = json!(null);
    let spec = IntervalSpec::new(720, from_u64(6));
    if let Some(out) = c.attempt("N=720 κ=6", || build_interval_realiser(&spec?, cfg.seed, &cfg.caps)) {
        let rep = &out.report;
        let exts: Vec<LinearExtension> = if corrupt {
            out.realiser.extensions[..1].to_vec()
        } else {
            out.realiser.extensions.clone()
        };
        c.check(out.poset.len() == 601, || format!("{} elements, expected 601", out.poset.len()));
        if let Some(v) = c.attempt("is_realiser", || is_realiser(&out.poset, &exts)) {
            c.check(v.holds(), || format!("N=720 κ=6: {v:?}"));
        }
        c.check(rep.size <= 4, || format!("size {} exceeds π(6)+1 = 4", rep.size));
        c.check(rep.size <= rep.coordinate_route_size, || {
            format!("size {} exceeds max(π(6), 2) = {}", rep.size, rep.coordinate_route_size)
        });
        if let Some(b) = rep.family_route_bound {
            c.check(rep.size as f64 <= b, || format!("size {} exceeds the family route value {b}", rep.size));
        }
        c.note(format!(
            "N=720 κ=6: {} extensions over {} components, route {:?}",
            rep.size, rep.components, rep.route
        ));
        artifact = json!({"report": rep, "realiser": out.realiser.to_ids(&out.poset)});
    }
    let small = IntervalSpec::new(30, from_u64(5));
    if let Some(out) = c.attempt("N=30 κ=5", || build_interval_realiser(&small?, cfg.seed, &cfg.caps)) {
        c.check(out.report.certified, || format!("D_[6,30] realiser not certified: {:?}", out.report.witness));
        let size = out.report.size;
        if let Some(dim) = c.attempt("exact", || exact_dimension(&out.poset, size, &cfg.caps)) {
            let d = dim.dimension();
            c.check(d.is_some_and(|d| d <= size), || format!("dim D_[6,30] exceeds realiser size {size}"));
            c.note(format!("dim D_[6,30] = {d:?}, certified realiser size {size}"));
        }
    }
    artifact
}

fn criterion_8(c: &mut Checks, cfg: &SuiteConfig, corrupt: bool) {
    for kappa in [3u64, 10, 100, 10_000, 1_000_000] {
        let Some(a) = c.attempt("appendix", || verify_appendix_a(&BigRational::from(BigInt::from(kappa)), &cfg.caps))
        else {
            continue;
        };
        c.check(a.holds, || format!("κ={kappa}: θ = {} < 2 log κ = {}", a.theta, a.two_log_kappa));
        c.check(a.robin.holds, || {
            format!("κ={kappa}: θ(p_{}) = {} below {}", a.robin.m, a.robin.theta, a.robin.lower_bound)
        });
        if corrupt {
            c.check(a.truncated.holds, || format!("κ={kappa}: truncated sum {} too small", a.truncated.m_value));
        }
        c.note(format!("κ={kappa}: ⌊r⌋={}, θ={:.4}, 2 log κ={:.4}", a.r_floor, a.theta, a.two_log_kappa));
    }
}

fn criterion_9(c: &mut Checks, cfg: &SuiteConfig, corrupt: bool) {
    for q in [2u32, 3, 4, 5] {
        let Some(f) = c.attempt("field", || FieldSpec::new(q)) else { continue };
        let Some(irr) = c.attempt("irreducibles", || irreducibles_up_to_degree(&f, 6, &cfg.caps)) else { continue };
        for (i, &n_i) in irr.counts.iter().enumerate() {
            let i = i as u32 + 1;
            let mut want = necklace_count(q as u64, i);
            if corrupt && q == 2 && i == 1 {
                want += 1;
            }
            c.check(n_i as u128 == want, || format!("q={q} i={i}: {n_i} irreducibles, necklace count {want}"));
            c.check(i as u128 * n_i as u128 <= (q as u128).pow(i), || format!("q={q}: n_{i} > q^{i}/{i}"));
        }
        let mut n = 0u128;
        for (d, &n_i) in irr.counts.iter().enumerate() {
            n += n_i as u128;
            let delta = d as u32 + 1;
            c.check(n <= (q as u128).pow(delta), || format!("q={q} δ={delta}: n = {n} > q^δ"));
        }
        c.note(format!("q={q}: counts {:?}", irr.counts));
    }
    for (q, delta) in [(2u32, 4usize), (3, 3), (5, 2)] {
        let Some(f) = c.attempt("field", || FieldSpec::new(q)) else { continue };
        if let Some(b) = c.attempt("appendix", || verify_appendix_b(&f, delta, &cfg.caps)) {
            c.check(b.holds, || format!("(q={q}, δ={delta}): {b:?}"));
            c.note(format!("(q={q}, δ={delta}): v = {:?}, m(v,r) = {:?}", b.degree_vector, b.m_at_r));
        }
    }
    let Some(f) = c.attempt("field", || FieldSpec::new(2)) else { return };
    if let Some(out) = c.attempt("poly realiser", || build_poly_realiser(&f, 3, 3, cfg.seed, &cfg.caps)) {
        let rep = &out.report;
        c.check(rep.certified, || format!("(2,3,3) not certified: {:?}", rep.witness));
        c.check(rep.within_bound == Some(true), || {
            format!("(2,3,3): {} extensions exceed {:?}", rep.size, rep.allowed)
        });
        c.note(format!(
            "(2,3,3): {} elements, {} extensions, bound {:.1}",
            rep.elements,
            rep.size,
            rep.bound.as_ref().map_or(f64::NAN, |b| b.min)
        ));
    }
}

fn artifacts(cfg: &SuiteConfig) -> (Value, bool) {
    let mut c = Checks::default();
    let v = json!({
        "3": criterion_3(&mut c, cfg, false),
        "4": criterion_4(&mut c, cfg, false),
        "5": criterion_5(&mut c, cfg, false),
        "7": criterion_7(&mut c, cfg, false),
    });
    (v, c.failures.is_empty())
}

fn criterion_10(c: &mut Checks, cfg: &SuiteConfig, corrupt: bool) {
    let (a, ok_a) = artifacts(cfg);
    let second = SuiteConfig {
        seed: if corrupt { cfg.seed.wrapping_add(1) } else { cfg.seed },
        ..cfg.clone()
    };
    let (b, ok_b) = artifacts(&second);
    c.check(ok_a && ok_b, || "an underlying criterion failed".into());
    for key in ["3", "4", "5", "7"] {
        let (x, y) = (a[key].to_string(), b[key].to_string());
        c.check(x == y, || format!("criterion {key} differs between runs"));
        c.note(format!("criterion {key}: {} bytes identical", x.len()));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_gives_empty_summary() {
        let s = run_suite(&SuiteConfig::empty());
        assert!(s.outcomes.is_empty());
        assert!(s.all_passed());
    }

    #[test]
    fn unknown_criterion_fails() {
        let (o, _) = run_criterion(42, &SuiteConfig::default());
        assert!(!o.passed);
    }

    #[test]
    fn corrupted_fixtures_fail_with_witness() {
        for id in [1, 3, 4, 9] {
            let cfg = SuiteConfig {
                criteria: vec![id],
                corrupt: vec![id],
                ..SuiteConfig::default()
            };
            let (o, _) = run_criterion(id, &cfg);
            assert!(!o.passed, "criterion {id}");
            assert!(o.witness.is_some());
        }
    }
}
