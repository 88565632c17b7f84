//! Divisibility posets of monic polynomials over `F_q`.
//!
//! Irreducibles of degree `<= δ` are small. Each monic polynomial factors as
//! `M·Q` with `Q` a product of small irreducibles and `M` free of them; the
//! polynomials sharing `M` form a component isomorphic to a multiset poset
//! with degree weights.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::components::{component_family, component_realiser, ComponentElements, ComponentRoute};
use crate::integers::Check;
use crate::multiset::{enumerate_multisets, FamilyReport, Multiset, WeightVector};
use crate::poset::{is_realiser, ElementId, Poset, Realiser, RealiserVerdict};
use crate::{Caps, Error, Result};

const MAX_FIELD: u32 = 1 << 12;

/// `F_q` with `q = p^e`, elements coded `0..q`. For `e > 1` an element's
/// code is its coefficient vector over `F_p` read in base `p`, reduced
/// modulo the least monic irreducible of degree `e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u32,
    pub e: u32,
    pub q: u32,
    /// Coefficients over `F_p`, low to high; `None` for prime `q`.
    pub modulus: Option<Vec<u32>>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldSummary {
    pub q: u32,
    pub p: u32,
    pub e: u32,
    pub modulus: Option<Vec<u32>>,
}

fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..).take_while(|d| d * d <= q).find(|d| q % d == 0).unwrap_or(q);
    let (mut rest, mut e) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

impl FieldSpec {
    fn prime(p: u32) -> Self {
        let n = p as usize;
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        for a in 0..p {
            for b in 0..p {
                add[(a * p + b) as usize] = (a + b) % p;
                mul[(a * p + b) as usize] = (a * b) % p;
            }
        }
        let neg = (0..p).map(|a| (p - a) % p).collect();
        FieldSpec {
            p,
            e: 1,
            q: p,
            modulus: None,
            add,
            mul,
            neg,
        }
    }

    pub fn new(q: u32) -> Result<Self> {
        let (p, e) = prime_power(q)
            .ok_or_else(|| Error::precondition(format!("q = {q} is not a prime power")))?;
        if q > MAX_FIELD {
            return Err(Error::precondition(format!("q = {q} exceeds {MAX_FIELD}")));
        }
        let base = FieldSpec::prime(p);
        if e == 1 {
            return Ok(base);
        }
        let modulus = MonicPoly::all_of_degree(&base, e as usize)
            .find(|m| is_irreducible_brute(&base, m))
            .expect("irreducibles exist in every degree")
            .0;
        let digits = |c: u32| -> Vec<u32> {
            let mut v = Vec::with_capacity(e as usize);
            let mut c = c;
            for _ in 0..e {
                v.push(c % p);
                c /= p;
            }
            v
        };
        let code = |v: &[u32]| -> u32 { v.iter().rev().fold(0, |acc, &d| acc * p + d) };
        let n = q as usize;
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = code(&sum);
                let prod = base.poly_rem(&base.poly_mul(&da, &db), &modulus);
                let mut padded = prod;
                padded.resize(e as usize, 0);
                mul[(a * q + b) as usize] = code(&padded);
            }
        }
        let neg = (0..q)
            .map(|a| code(&digits(a).iter().map(|&d| (p - d) % p).collect::<Vec<_>>()))
            .collect();
        Ok(FieldSpec {
            p,
            e,
            q,
            modulus: Some(modulus),
            add,
            mul,
            neg,
        })
    }

    pub fn summary(&self) -> FieldSummary {
        FieldSummary {
            q: self.q,
            p: self.p,
            e: self.e,
            modulus: self.modulus.clone(),
        }
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[(a * self.q + b) as usize]
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.q + b) as usize]
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    fn trim(mut v: Vec<u32>) -> Vec<u32> {
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    /// Product of coefficient vectors, low to high.
    pub fn poly_mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = self.add(out[i + j], self.mul(x, y));
            }
        }
        Self::trim(out)
    }

    /// Quotient and remainder by a monic divisor.
    pub fn poly_divmod(&self, a: &[u32], monic: &[u32]) -> (Vec<u32>, Vec<u32>) {
        let d = monic.len() - 1;
        let mut rem = Self::trim(a.to_vec());
        if rem.len() <= d {
            return (Vec::new(), rem);
        }
        let mut quot = vec![0; rem.len() - d];
        while rem.len() > d {
            let shift = rem.len() - 1 - d;
            let c = *rem.last().unwrap();
            quot[shift] = c;
            let nc = self.neg(c);
            for (i, &m) in monic.iter().enumerate() {
                rem[shift + i] = self.add(rem[shift + i], self.mul(nc, m));
            }
            rem = Self::trim(rem);
        }
        (Self::trim(quot), rem)
    }

    pub fn poly_rem(&self, a: &[u32], monic: &[u32]) -> Vec<u32> {
        self.poly_divmod(a, monic).1
    }
}

/// A monic polynomial, coefficients low to high with leading 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct MonicPoly(pub Vec<u32>);

impl MonicPoly {
    pub fn one() -> Self {
        MonicPoly(vec![1])
    }

    pub fn new(coeffs: Vec<u32>) -> Result<Self> {
        if coeffs.last() != Some(&1) {
            return Err(Error::precondition("polynomial is not monic"));
        }
        Ok(MonicPoly(coeffs))
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.0
    }

    /// Monic polynomials of degree `d` in code order, where the code is
    /// `Σ c_i q^i` over the non-leading coefficients.
    pub fn all_of_degree(field: &FieldSpec, d: usize) -> impl Iterator<Item = MonicPoly> + '_ {
        let count = (field.q as u64).pow(d as u32);
        (0..count).map(move |mut code| {
            let mut c = Vec::with_capacity(d + 1);
            for _ in 0..d {
                c.push((code % field.q as u64) as u32);
                code /= field.q as u64;
            }
            c.push(1);
            MonicPoly(c)
        })
    }

    pub fn mul(&self, other: &MonicPoly, field: &FieldSpec) -> MonicPoly {
        MonicPoly(field.poly_mul(&self.0, &other.0))
    }

    /// `self | other`.
    pub fn divides(&self, other: &MonicPoly, field: &FieldSpec) -> bool {
        self.degree() <= other.degree() && field.poly_rem(&other.0, &self.0).is_empty()
    }

    /// `other / self` when exact.
    pub fn quotient_of(&self, other: &MonicPoly, field: &FieldSpec) -> Option<MonicPoly> {
        let (q, r) = field.poly_divmod(&other.0, &self.0);
        r.is_empty().then(|| MonicPoly(q))
    }
}

impl Ord for MonicPoly {
    /// By degree, then by code.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for MonicPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MonicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, &c) in self.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coef = if c == 1 && i > 0 { String::new() } else { c.to_string() };
            terms.push(match i {
                0 => coef,
                1 => format!("{coef}x"),
                _ => format!("{coef}x^{i}"),
            });
        }
        f.write_str(&terms.join("+"))
    }
}

fn is_irreducible_brute(field: &FieldSpec, m: &MonicPoly) -> bool {
    let d = m.degree();
    d >= 1
        && (1..=d / 2).all(|k| MonicPoly::all_of_degree(field, k).all(|g| !g.divides(m, field)))
}

/// `(1/i) Σ_{d | i} μ(d) q^{i/d}`.
pub fn necklace_count(q: u64, i: u32) -> u128 {
    fn mobius(mut n: u32) -> i32 {
        let mut result = 1;
        let mut p = 2;
        while p * p <= n {
            if n % p == 0 {
                n /= p;
                if n % p == 0 {
                    return 0;
                }
                result = -result;
            }
            p += 1;
        }
        if n > 1 {
            result = -result;
        }
        result
    }
    let mut total = BigInt::zero();
    for d in 1..=i {
        if i % d == 0 {
            total += BigInt::from(mobius(d)) * num_traits::pow(BigInt::from(q), (i / d) as usize);
        }
    }
    let v: BigInt = total / BigInt::from(i);
    u128::try_from(v).expect("count fits")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Irreducibles {
    pub q: u32,
    pub delta: usize,
    /// `polys[i]` lists the monic irreducibles of degree `i + 1` in code order.
    pub polys: Vec<Vec<MonicPoly>>,
    /// `n_i` for `i = 1..=δ`.
    pub counts: Vec<usize>,
    pub total: usize,
    pub oracle_agrees: bool,
}

impl Irreducibles {
    /// All of them ordered by degree then code.
    pub fn flat(&self) -> Vec<MonicPoly> {
        self.polys.iter().flatten().cloned().collect()
    }

    pub fn degrees(&self) -> Vec<u64> {
        self.flat().iter().map(|m| m.degree() as u64).collect()
    }
}

fn check_enumeration(field: &FieldSpec, degrees: std::ops::RangeInclusive<usize>, caps: &Caps) -> Result<()> {
    let mut total: u128 = 0;
    for d in degrees {
        total = total.saturating_add((field.q as u128).saturating_pow(d as u32));
    }
    Error::check_cap("polynomial enumeration", total, caps.poly_enumeration as u128)
}

/// Monic irreducibles of degree `1..=δ` by trial division, with counts
/// checked against the necklace formula.
pub fn irreducibles_up_to_degree(field: &FieldSpec, delta: usize, caps: &Caps) -> Result<Irreducibles> {
    check_enumeration(field, 1..=delta, caps)?;
    let mut polys: Vec<Vec<MonicPoly>> = Vec::with_capacity(delta);
    for d in 1..=delta {
        let found: Vec<MonicPoly> = MonicPoly::all_of_degree(field, d)
            .filter(|m| {
                polys[..d / 2]
                    .iter()
                    .flatten()
                    .all(|g| !g.divides(m, field))
            })
            .collect();
        polys.push(found);
    }
    let counts: Vec<usize> = polys.iter().map(Vec::len).collect();
    let oracle_agrees = counts
        .iter()
        .enumerate()
        .all(|(i, &c)| necklace_count(field.q as u64, i as u32 + 1) == c as u128);
    Ok(Irreducibles {
        q: field.q,
        delta,
        total: counts.iter().sum(),
        polys,
        counts,
        oracle_agrees,
    })
}

/// Full factorisation by trial division against `irreducibles` (which must
/// reach degree `deg / 2` at least). Returns `(factor, multiplicity)` pairs.
pub fn factor(field: &FieldSpec, poly: &MonicPoly, irreducibles: &Irreducibles) -> Vec<(MonicPoly, u32)> {
    let mut rest = poly.clone();
    let mut out = Vec::new();
    for g in irreducibles.polys.iter().flatten() {
        if 2 * g.degree() > rest.degree() {
            break;
        }
        let mut mult = 0;
        while let Some(q) = g.quotient_of(&rest, field) {
            rest = q;
            mult += 1;
        }
        if mult > 0 {
            out.push((g.clone(), mult));
        }
    }
    if rest.degree() > 0 {
        let pos = out.iter().position(|(g, _)| g == &rest);
        match pos {
            Some(i) => out[i].1 += 1,
            None => out.push((rest, 1)),
        }
    }
    out.sort();
    out
}

/// `P(F_q)_{[d0−δ, d0]}`: all monic polynomials in the degree window,
/// ordered by degree then code.
#[derive(Clone, Debug)]
pub struct PolyPoset {
    pub field: FieldSpec,
    pub d0: usize,
    pub delta: usize,
    pub polys: Vec<MonicPoly>,
    pub poset: Poset,
}

fn check_window(d0: usize, delta: usize) -> Result<()> {
    if delta > d0 {
        return Err(Error::precondition(format!("delta = {delta} exceeds d0 = {d0}")));
    }
    Ok(())
}

pub fn build_poly_poset(field: &FieldSpec, d0: usize, delta: usize, caps: &Caps) -> Result<PolyPoset> {
    check_window(d0, delta)?;
    check_enumeration(field, d0 - delta..=d0, caps)?;
    let polys: Vec<MonicPoly> = (d0 - delta..=d0)
        .flat_map(|d| MonicPoly::all_of_degree(field, d))
        .collect();
    let ids: Vec<ElementId> = polys.iter().map(|m| ElementId::Str(m.to_string())).collect();
    let poset = Poset::from_strict_order(ids, caps, |a, b| {
        a != b && polys[a].divides(&polys[b], field)
    })?;
    Ok(PolyPoset {
        field: field.clone(),
        d0,
        delta,
        polys,
        poset,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolyComponent {
    /// Product of the irreducible factors of degree `> δ`.
    pub key: MonicPoly,
    /// Indices into the poset's polynomial list, ascending.
    pub members: Vec<usize>,
    /// Multiplicities of the small irreducibles.
    pub images: Vec<Multiset>,
}

#[derive(Clone, Debug)]
pub struct PolyDecomposition {
    pub poset: PolyPoset,
    pub small: Irreducibles,
    /// Ascending in key.
    pub components: Vec<PolyComponent>,
}

/// Splits the window into components keyed by the large-degree part.
pub fn decompose_poly_poset(field: &FieldSpec, d0: usize, delta: usize, caps: &Caps) -> Result<PolyDecomposition> {
    let pp = build_poly_poset(field, d0, delta, caps)?;
    let small = irreducibles_up_to_degree(field, delta, caps)?;
    let flat = small.flat();
    let mut groups: BTreeMap<MonicPoly, PolyComponent> = BTreeMap::new();
    for (idx, poly) in pp.polys.iter().enumerate() {
        let mut rest = poly.clone();
        let mut exps = vec![0u32; flat.len()];
        for (e, g) in exps.iter_mut().zip(&flat) {
            while let Some(q) = g.quotient_of(&rest, field) {
                rest = q;
                *e += 1;
            }
        }
        let c = groups.entry(rest.clone()).or_insert_with(|| PolyComponent {
            key: rest,
            members: Vec::new(),
            images: Vec::new(),
        });
        c.members.push(idx);
        c.images.push(Multiset::new(exps));
    }
    Ok(PolyDecomposition {
        poset: pp,
        small,
        components: groups.into_values().collect(),
    })
}

impl PolyDecomposition {
    pub fn weights(&self) -> Result<WeightVector> {
        WeightVector::degrees(self.small.degrees())
    }

    pub fn check_partition(&self) -> Check {
        let mut seen = vec![false; self.poset.polys.len()];
        for c in &self.components {
            for &i in &c.members {
                if seen[i] {
                    return Check::Fails {
                        witness: format!("{} appears twice", self.poset.polys[i]),
                    };
                }
                seen[i] = true;
            }
        }
        match seen.iter().position(|&s| !s) {
            Some(i) => Check::Fails {
                witness: format!("{} is missing", self.poset.polys[i]),
            },
            None => Check::Holds,
        }
    }

    /// Every dividing pair lies inside one component.
    pub fn check_cross_components(&self) -> Check {
        let mut owner = vec![0; self.poset.polys.len()];
        for (ci, c) in self.components.iter().enumerate() {
            for &i in &c.members {
                owner[i] = ci;
            }
        }
        let p = &self.poset.poset;
        for a in 0..p.len() {
            for b in 0..p.len() {
                if p.less(a, b) && owner[a] != owner[b] {
                    return Check::Fails {
                        witness: format!(
                            "{} divides {} across components",
                            self.poset.polys[a], self.poset.polys[b]
                        ),
                    };
                }
            }
        }
        Check::Holds
    }

    /// Images evaluate back to members, are distinct, and are exactly the
    /// multisets with degree sum in `[d0−δ−deg M, d0−deg M]`; divisibility
    /// matches inclusion both ways.
    pub fn component_iso_check(&self, c: &PolyComponent) -> Check {
        let field = &self.poset.field;
        let polys = &self.poset.polys;
        let flat = self.small.flat();
        let fail = |witness: String| Check::Fails { witness };
        for (&i, img) in c.members.iter().zip(&c.images) {
            let mut prod = c.key.clone();
            for (g, &e) in flat.iter().zip(img.exponents()) {
                for _ in 0..e {
                    prod = prod.mul(g, field);
                }
            }
            if prod != polys[i] {
                return fail(format!("image {img} does not evaluate to {}", polys[i]));
            }
        }
        for (x, &i) in c.members.iter().enumerate() {
            for (y, &j) in c.members.iter().enumerate() {
                if x == y {
                    continue;
                }
                let divides = polys[i].divides(&polys[j], field);
                let included = c.images[x].is_subset(&c.images[y]);
                if divides != included {
                    return fail(format!(
                        "{} | {} is {divides} but {} ⊆ {} is {included}",
                        polys[i], polys[j], c.images[x], c.images[y]
                    ));
                }
            }
        }
        let Ok(w) = self.weights() else {
            return if c.members.len() == 1 {
                Check::Holds
            } else {
                fail("several members without small irreducibles".into())
            };
        };
        let dm = c.key.degree() as i64;
        let lo = self.poset.d0 as i64 - self.poset.delta as i64 - dm;
        let hi = self.poset.d0 as i64 - dm;
        let k = w.scalar(BigRational::from_integer(lo.into()));
        let l = w.scalar(BigRational::from_integer(hi.into()));
        let mut expected = match enumerate_multisets(&w, &k, &l, usize::MAX) {
            Ok(v) => v,
            Err(e) => return fail(e.to_string()),
        };
        let mut got = c.images.clone();
        expected.sort();
        got.sort();
        if got.windows(2).any(|p| p[0] == p[1]) {
            return fail("two members share an image".into());
        }
        if got != expected {
            return fail(format!(
                "component {} has {} members, the multiset poset has {}",
                c.key,
                got.len(),
                expected.len()
            ));
        }
        Check::Holds
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolyBound {
    pub q: u32,
    pub delta: usize,
    /// `910 (δ log q)³ / (log δ)²`, for `δ >= 2`; the `q < δ` regime.
    pub branch_910: Option<f64>,
    /// `172 δ³ log q`; the `q >= δ` regime.
    pub branch_172: f64,
    pub min: f64,
    pub regime: &'static str,
}

/// Both branches of the bound on `dim P(F_q)_{[d0−δ, d0]}`.
pub fn dimension_bound_poly(q: u32, delta: usize) -> Result<PolyBound> {
    if delta == 0 {
        return Err(Error::precondition("delta must be at least 1"));
    }
    if prime_power(q).is_none() {
        return Err(Error::precondition(format!("q = {q} is not a prime power")));
    }
    let (d, lq) = (delta as f64, (q as f64).ln());
    let branch_172 = 172.0 * d.powi(3) * lq;
    let branch_910 = (delta >= 2).then(|| 910.0 * (d * lq).powi(3) / d.ln().powi(2));
    let min = branch_910.map_or(branch_172, |b| b.min(branch_172));
    Ok(PolyBound {
        q,
        delta,
        branch_910,
        branch_172,
        min,
        regime: if (q as usize) < delta { "q < delta" } else { "q >= delta" },
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AppendixB {
    pub q: u32,
    pub delta: usize,
    pub counts: Vec<usize>,
    pub n: usize,
    pub q_pow_delta: u128,
    /// `n <= q^δ`.
    pub n_bound_holds: bool,
    /// `i·n_i <= q^i` for every `i`.
    pub ni_bounds_hold: bool,
    pub oracle_agrees: bool,
    /// Sorted degree vector and its prefix sums `m(v, j)`.
    pub degree_vector: Vec<u64>,
    pub prefix_sums: Vec<u64>,
    /// `4.6 δ log q / log δ`, for `δ >= 2`.
    pub r: Option<f64>,
    pub m_at_r: Option<u64>,
    pub r_branch_holds: Option<bool>,
    /// `m(v, 2δ)`.
    pub m_at_two_delta: u64,
    pub trivial_branch_holds: bool,
    pub holds: bool,
}

/// `n <= q^δ`, `n_i <= q^i / i` and `m(v, r) >= 2δ` for the degree weights.
pub fn verify_appendix_b(field: &FieldSpec, delta: usize, caps: &Caps) -> Result<AppendixB> {
    if delta == 0 {
        return Err(Error::precondition("delta must be at least 1"));
    }
    let irr = irreducibles_up_to_degree(field, delta, caps)?;
    let q = field.q as u128;
    let q_pow_delta = q.pow(delta as u32);
    let ni_bounds_hold = irr
        .counts
        .iter()
        .enumerate()
        .all(|(i, &c)| (i as u128 + 1) * c as u128 <= q.pow(i as u32 + 1));
    let mut degree_vector = irr.degrees();
    degree_vector.sort_unstable();
    let prefix_sums: Vec<u64> = degree_vector
        .iter()
        .scan(0, |acc, &d| {
            *acc += d;
            Some(*acc)
        })
        .collect();
    let m_of = |c: usize| -> u64 {
        match c {
            0 => 0,
            c => prefix_sums[(c - 1).min(prefix_sums.len() - 1)],
        }
    };
    let target = 2 * delta as u64;
    let r = (delta >= 2)
        .then(|| 4.6 * delta as f64 * (field.q as f64).ln() / (delta as f64).ln());
    let m_at_r = r.map(|r| m_of(r.floor() as usize));
    let r_branch_holds = m_at_r.map(|m| m >= target);
    let m_at_two_delta = m_of(2 * delta);
    let trivial_branch_holds = m_at_two_delta >= target;
    let n_bound_holds = irr.total as u128 <= q_pow_delta;
    Ok(AppendixB {
        q: field.q,
        delta,
        counts: irr.counts.clone(),
        n: irr.total,
        q_pow_delta,
        n_bound_holds,
        ni_bounds_hold,
        oracle_agrees: irr.oracle_agrees,
        degree_vector,
        prefix_sums,
        r,
        m_at_r,
        r_branch_holds,
        m_at_two_delta,
        trivial_branch_holds,
        holds: n_bound_holds
            && ni_bounds_hold
            && irr.oracle_agrees
            && trivial_branch_holds
            && r_branch_holds.unwrap_or(true),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolyRealiserReport {
    pub field: FieldSummary,
    pub d0: usize,
    pub delta: usize,
    pub elements: usize,
    pub components: usize,
    pub small_irreducibles: usize,
    pub route: ComponentRoute,
    pub per_component: usize,
    pub size: usize,
    pub bound: Option<PolyBound>,
    /// `max(⌈bound⌉, family ceiling bound, n, 2)`.
    pub allowed: Option<u64>,
    pub within_bound: Option<bool>,
    pub family: Option<FamilyReport>,
    pub certified: bool,
    pub witness: Option<(String, String)>,
}

#[derive(Clone, Debug)]
pub struct PolyRealiserOutput {
    pub report: PolyRealiserReport,
    pub poset: Poset,
    pub realiser: Realiser,
}

/// A realiser of `P(F_q)_{[d0−δ, d0]}` from one shared family over the
/// degree weights, certified with `is_realiser`.
pub fn build_poly_realiser(
    field: &FieldSpec,
    d0: usize,
    delta: usize,
    seed: u64,
    caps: &Caps,
) -> Result<PolyRealiserOutput> {
    let decomp = decompose_poly_poset(field, d0, delta, caps)?;
    let w = if decomp.small.total == 0 {
        WeightVector::ones(0)
    } else {
        decomp.weights()?
    };
    let k = w.scalar(BigRational::zero());
    let l = w.scalar(BigRational::from_integer((delta as i64).into()));
    let cf = component_family(&w, &k, &l, seed, caps)?;
    let comps: Vec<ComponentElements<'_>> = decomp
        .components
        .iter()
        .map(|c| ComponentElements {
            indices: &c.members,
            images: &c.images,
        })
        .collect();
    let total = decomp.poset.polys.len();
    let extensions = component_realiser(total, &cf.family, &comps);
    let poset = decomp.poset.poset.clone();
    let (certified, witness) = match is_realiser(&poset, &extensions)? {
        RealiserVerdict::Realiser => (true, None),
        RealiserVerdict::Unreversed { x, y } => (false, Some((x.to_string(), y.to_string()))),
    };
    let bound = (delta >= 1).then(|| dimension_bound_poly(field.q, delta)).transpose()?;
    let allowed = bound.as_ref().map(|b| {
        let ceiling = cf.family_report.as_ref().map_or(0, |r| r.allowed);
        ((b.min - 1e-9).ceil() as u64).max(ceiling).max(w.len() as u64).max(2)
    });
    let size = extensions.len();
    let report = PolyRealiserReport {
        field: field.summary(),
        d0,
        delta,
        elements: total,
        components: decomp.components.len(),
        small_irreducibles: decomp.small.total,
        route: cf.route,
        per_component: cf.family.len(),
        size,
        within_bound: allowed.map(|a| size as u64 <= a),
        allowed,
        bound,
        family: cf.family_report,
        certified,
        witness,
    };
    Ok(PolyRealiserOutput {
        report,
        poset,
        realiser: Realiser { extensions },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Irreducible iff no monic polynomial of lower positive degree
    /// divides it; independent of the enumerated lists.
    fn brute_count(field: &FieldSpec, d: usize) -> usize {
        MonicPoly::all_of_degree(field, d)
            .filter(|m| is_irreducible_brute(field, m))
            .count()
    }

    #[test]
    fn field_axioms_small() {
        for q in [2, 3, 4, 5, 8, 9] {
            let f = FieldSpec::new(q).unwrap();
            for a in 0..q {
                assert_eq!(f.add(a, f.neg(a)), 0);
                assert_eq!(f.mul(a, 1), a);
                if a != 0 {
                    assert!((1..q).any(|b| f.mul(a, b) == 1), "q={q} a={a} has no inverse");
                }
                for b in 0..q {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..q {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
        assert_eq!(FieldSpec::new(4).unwrap().modulus, Some(vec![1, 1, 1]));
        assert!(FieldSpec::new(6).is_err());
        assert!(FieldSpec::new(1).is_err());
    }

    #[test]
    fn irreducible_counts() {
        let f2 = FieldSpec::new(2).unwrap();
        let irr = irreducibles_up_to_degree(&f2, 3, &Caps::default()).unwrap();
        assert_eq!(irr.counts, vec![2, 1, 2]);
        assert!(irr.oracle_agrees);
        let f3 = FieldSpec::new(3).unwrap();
        assert_eq!(irreducibles_up_to_degree(&f3, 2, &Caps::default()).unwrap().counts, vec![3, 3]);
        let f4 = FieldSpec::new(4).unwrap();
        let irr4 = irreducibles_up_to_degree(&f4, 3, &Caps::default()).unwrap();
        for d in 1..=3 {
            assert_eq!(irr4.counts[d - 1], brute_count(&f4, d));
        }
        assert_eq!(necklace_count(2, 6), 9);
        assert_eq!(necklace_count(5, 4), 150);
    }

    #[test]
    fn factorisation_round_trips() {
        let f = FieldSpec::new(3).unwrap();
        let irr = irreducibles_up_to_degree(&f, 2, &Caps::default()).unwrap();
        for d in 0..=4 {
            for m in MonicPoly::all_of_degree(&f, d) {
                let mut prod = MonicPoly::one();
                for (g, e) in factor(&f, &m, &irr) {
                    for _ in 0..e {
                        prod = prod.mul(&g, &f);
                    }
                }
                assert_eq!(prod, m);
            }
        }
    }

    #[test]
    fn poset_examples() {
        let f2 = FieldSpec::new(2).unwrap();
        let pp = build_poly_poset(&f2, 2, 2, &Caps::default()).unwrap();
        assert_eq!(pp.polys.len(), 7);
        assert!((1..7).all(|b| pp.poset.less(0, b)));
        let anti = build_poly_poset(&f2, 3, 0, &Caps::default()).unwrap();
        assert_eq!(anti.poset.relation_count(), 0);
        assert_eq!(anti.polys.len(), 8);
        assert!(build_poly_poset(&f2, 1, 2, &Caps::default()).is_err());
    }

    #[test]
    fn decomposition_checks() {
        for (q, d0, delta) in [(2, 3, 3), (2, 4, 2), (3, 2, 2), (4, 2, 1)] {
            let f = FieldSpec::new(q).unwrap();
            let d = decompose_poly_poset(&f, d0, delta, &Caps::default()).unwrap();
            assert!(d.check_partition().holds());
            assert!(d.check_cross_components().holds());
            for c in &d.components {
                assert!(d.component_iso_check(c).holds(), "q={q} key={}", c.key);
            }
            let unit = d.components.iter().find(|c| c.key == MonicPoly::one());
            if let Some(c) = unit {
                // δ-smooth polynomials
                let irr = irreducibles_up_to_degree(&f, d0, &Caps::default()).unwrap();
                for &i in &c.members {
                    let fs = factor(&f, &d.poset.polys[i], &irr);
                    assert!(fs.iter().all(|(g, _)| g.degree() <= delta));
                }
            }
        }
    }

    #[test]
    fn corrupted_poly_iso_is_caught() {
        let f = FieldSpec::new(2).unwrap();
        let d = decompose_poly_poset(&f, 3, 3, &Caps::default()).unwrap();
        let mut c = d.components[0].clone();
        c.images.swap(0, 1);
        assert!(!d.component_iso_check(&c).holds());
    }

    #[test]
    fn bounds_and_appendix() {
        let b = dimension_bound_poly(2, 4).unwrap();
        let l2 = 2f64.ln();
        assert!((b.branch_910.unwrap() - 910.0 * (4.0 * l2).powi(3) / 4f64.ln().powi(2)).abs() < 1e-6);
        assert!((b.branch_172 - 172.0 * 64.0 * l2).abs() < 1e-9);
        let b1 = dimension_bound_poly(3, 1).unwrap();
        assert_eq!(b1.branch_910, None);
        assert!((b1.min - 172.0 * 3f64.ln()).abs() < 1e-9);

        let f2 = FieldSpec::new(2).unwrap();
        let a = verify_appendix_b(&f2, 4, &Caps::default()).unwrap();
        assert_eq!(a.degree_vector, vec![1, 1, 2, 3, 3, 4, 4, 4]);
        assert_eq!(a.n, 8);
        assert_eq!(a.m_at_r, Some(22));
        assert!(a.holds);
        let f3 = FieldSpec::new(3).unwrap();
        assert!(verify_appendix_b(&f3, 2, &Caps::default()).unwrap().holds);
    }

    #[test]
    fn realisers() {
        for (q, d0, delta) in [(2, 3, 3), (3, 2, 2)] {
            let f = FieldSpec::new(q).unwrap();
            let out = build_poly_realiser(&f, d0, delta, 0, &Caps::default()).unwrap();
            assert!(out.report.certified, "q={q}");
            assert_eq!(out.report.within_bound, Some(true));
        }
        let f = FieldSpec::new(2).unwrap();
        let out = build_poly_realiser(&f, 3, 0, 0, &Caps::default()).unwrap();
        assert!(out.report.certified);
        assert_eq!(out.report.size, 2);
    }
}
