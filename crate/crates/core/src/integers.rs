//! Divisibility posets on integer intervals `[N/κ, N]`.
//!
//! Primes `p <= κ` are small. Every integer in the interval factors as
//! `M·q` with `q` built from small primes and `M` free of them; integers
//! sharing `M` form a component isomorphic to a log-prime weighted
//! multiset poset, and distinct components are mutually incomparable.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::components::{component_family, component_realiser, merged_size, ComponentElements, ComponentRoute};
use crate::hp::{self, Hp};
use crate::multiset::{FamilyReport, Multiset, WeightVector};
use crate::poset::{is_realiser, ElementId, Poset, Realiser, RealiserVerdict};
use crate::rational::{ceil_u64, floor_u64, format_rational, from_u64};
use crate::{Caps, Error, Result};

/// Primes `<= x` by the sieve of Eratosthenes.
pub fn primes_up_to(x: u64) -> Vec<u64> {
    if x < 2 {
        return Vec::new();
    }
    let n = x as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// [`primes_up_to`] with the sieve cap enforced.
pub fn primes_up_to_checked(x: u64, caps: &Caps) -> Result<Vec<u64>> {
    Error::check_cap("sieve limit", x as u128, caps.sieve_limit as u128)?;
    Ok(primes_up_to(x))
}

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<u64> {
    let mut limit = 16u64;
    loop {
        let ps = primes_up_to(limit);
        if ps.len() >= count {
            return ps[..count].to_vec();
        }
        limit *= 2;
    }
}

/// `π(x)` for a rational `x`.
pub fn prime_count(x: &BigRational, caps: &Caps) -> Result<usize> {
    let floor = floor_u64(x).unwrap_or(0);
    Ok(primes_up_to_checked(floor, caps)?.len())
}

/// `e^{θ(x)}`: the product of the primes `<= x`.
pub fn primorial(x: u64) -> BigUint {
    primes_up_to(x).into_iter().map(BigUint::from).product()
}

/// `θ(x) = Σ_{p <= x} log p`, evaluated as the logarithm of the exact
/// primorial.
pub fn theta(x: u64) -> f64 {
    let mut hp = Hp::new();
    let prod = primorial(x);
    let big = hp.big(&prod);
    hp::to_f64(&hp.ln(&big))
}

/// An integer interval `[N/κ, N]` with exact rational `κ > 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntervalSpec {
    pub n: u64,
    #[serde(with = "crate::rational::serde_rational")]
    pub kappa: BigRational,
}

impl IntervalSpec {
    pub fn new(n: u64, kappa: BigRational) -> Result<Self> {
        if n == 0 {
            return Err(Error::precondition("N must be positive"));
        }
        if kappa <= BigRational::one() {
            return Err(Error::precondition(format!(
                "kappa must exceed 1, got {}",
                format_rational(&kappa)
            )));
        }
        Ok(IntervalSpec { n, kappa })
    }

    /// Least integer `m` with `m·κ >= N`.
    pub fn lower(&self) -> u64 {
        let q = from_u64(self.n) / &self.kappa;
        ceil_u64(&q).unwrap_or(0).max(1)
    }

    pub fn contains(&self, m: u64) -> bool {
        m >= self.lower() && m <= self.n
    }

    pub fn len(&self) -> u64 {
        self.n + 1 - self.lower()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn integers(&self, caps: &Caps) -> Result<Vec<u64>> {
        Error::check_cap("interval integers", self.len() as u128, caps.interval_integers as u128)?;
        Ok((self.lower()..=self.n).collect())
    }

    pub fn small_primes(&self, caps: &Caps) -> Result<Vec<u64>> {
        primes_up_to_checked(floor_u64(&self.kappa).unwrap_or(0), caps)
    }
}

/// `D_R`: the integers of `r` ordered by divisibility.
pub fn build_divisibility_poset(r: &[u64], caps: &Caps) -> Result<Poset> {
    if r.contains(&0) {
        return Err(Error::precondition("divisibility posets need positive integers"));
    }
    let ids: Vec<ElementId> = r.iter().map(|&m| ElementId::Int(m as i64)).collect();
    Poset::from_strict_order(ids, caps, |a, b| a != b && r[b] % r[a] == 0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Component {
    /// The part free of small primes.
    pub m: u64,
    /// Ascending.
    pub members: Vec<u64>,
    /// Small-prime exponent vectors, index for index with `members`.
    pub images: Vec<Multiset>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub spec: IntervalSpec,
    pub small_primes: Vec<u64>,
    /// Ascending in `M`.
    pub components: Vec<Component>,
    /// Small-prime-smooth numbers `<= N`, ascending.
    smooth: Vec<u64>,
}

fn split_small(mut m: u64, primes: &[u64]) -> (u64, Vec<u32>) {
    let mut exps = vec![0u32; primes.len()];
    for (e, &p) in exps.iter_mut().zip(primes) {
        while m % p == 0 {
            m /= p;
            *e += 1;
        }
    }
    (m, exps)
}

fn smooth_up_to(limit: u64, primes: &[u64]) -> Vec<u64> {
    let mut out = vec![1u64];
    for &p in primes {
        let mut next = Vec::new();
        for &x in &out {
            let mut y = x;
            while y <= limit {
                next.push(y);
                match y.checked_mul(p) {
                    Some(z) => y = z,
                    None => break,
                }
            }
        }
        out = next;
    }
    out.retain(|&x| x <= limit);
    out.sort_unstable();
    out
}

fn evaluate(image: &Multiset, primes: &[u64]) -> Option<u64> {
    let mut acc = 1u64;
    for (&e, &p) in image.exponents().iter().zip(primes) {
        acc = acc.checked_mul(p.checked_pow(e)?)?;
    }
    Some(acc)
}

/// Splits `[N/κ, N]` into components `g(M) ∩ [N/κ, N]`.
pub fn decompose_interval(spec: &IntervalSpec, caps: &Caps) -> Result<Decomposition> {
    let ints = spec.integers(caps)?;
    let small_primes = spec.small_primes(caps)?;
    let mut groups: BTreeMap<u64, Component> = BTreeMap::new();
    for m in ints {
        let (big, exps) = split_small(m, &small_primes);
        let c = groups.entry(big).or_insert_with(|| Component {
            m: big,
            members: Vec::new(),
            images: Vec::new(),
        });
        c.members.push(m);
        c.images.push(Multiset::new(exps));
    }
    Ok(Decomposition {
        spec: spec.clone(),
        smooth: smooth_up_to(spec.n, &small_primes),
        small_primes,
        components: groups.into_values().collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Check {
    Holds,
    Fails { witness: String },
}

impl Check {
    pub fn holds(&self) -> bool {
        matches!(self, Check::Holds)
    }

    fn fail(witness: String) -> Self {
        Check::Fails { witness }
    }
}

impl Decomposition {
    pub fn weights(&self) -> WeightVector {
        WeightVector::log_primes(self.small_primes.len())
    }

    /// Components are disjoint and cover the interval exactly.
    pub fn check_partition(&self) -> Check {
        let lo = self.spec.lower();
        let mut seen = vec![false; self.spec.len() as usize];
        for c in &self.components {
            for &m in &c.members {
                if !self.spec.contains(m) {
                    return Check::fail(format!("{m} lies outside the interval"));
                }
                let slot = &mut seen[(m - lo) as usize];
                if *slot {
                    return Check::fail(format!("{m} appears twice"));
                }
                *slot = true;
            }
        }
        match seen.iter().position(|&s| !s) {
            Some(i) => Check::fail(format!("{} is missing", lo + i as u64)),
            None => Check::Holds,
        }
    }

    /// Every dividing pair of the interval lies inside one component.
    pub fn check_cross_components(&self) -> Check {
        let lo = self.spec.lower();
        let mut owner = vec![usize::MAX; self.spec.len() as usize];
        for (ci, c) in self.components.iter().enumerate() {
            for &m in &c.members {
                owner[(m - lo) as usize] = ci;
            }
        }
        for a in lo..=self.spec.n {
            let mut b = 2 * a;
            while b <= self.spec.n {
                let (ca, cb) = (owner[(a - lo) as usize], owner[(b - lo) as usize]);
                if ca != cb {
                    return Check::fail(format!(
                        "{a} divides {b} across components M={} and M={}",
                        self.components[ca].m, self.components[cb].m
                    ));
                }
                b += a;
            }
        }
        Check::Holds
    }

    /// `M^{n,v}_{[k_M, ℓ_M]} ≅ D_{g(M) ∩ [N/κ, N]}` via the image map.
    ///
    /// Checks that images are distinct, evaluate back to the members, are
    /// exactly the smooth `q` with `N/(κM) <= q <= N/M`, and that
    /// divisibility matches inclusion in both directions.
    pub fn component_iso_check(&self, c: &Component) -> Check {
        let primes = &self.small_primes;
        let n = c.members.len();
        if c.images.len() != n {
            return Check::fail("image count differs from member count".into());
        }
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let divides = c.members[j] % c.members[i] == 0;
                let included = c.images[i].is_subset(&c.images[j]);
                if divides != included {
                    return Check::fail(format!(
                        "{} | {} is {divides} but {} ⊆ {} is {included}",
                        c.members[i], c.members[j], c.images[i], c.images[j]
                    ));
                }
            }
        }
        let mut values = Vec::with_capacity(n);
        for (m, img) in c.members.iter().zip(&c.images) {
            if img.len() != primes.len() {
                return Check::fail(format!("image of {m} has the wrong length"));
            }
            match evaluate(img, primes) {
                Some(q) if q.checked_mul(c.m) == Some(*m) => values.push(q),
                _ => return Check::fail(format!("image {img} of {m} does not evaluate to it")),
            }
        }
        let mut sorted = values.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != n {
            return Check::fail("two members share an image".into());
        }
        // smooth q with q·M·κ >= N and q·M <= N
        let hi = self.spec.n / c.m;
        let lo = self.lower_quotient(c.m);
        let from = self.smooth.partition_point(|&q| q < lo);
        let to = self.smooth.partition_point(|&q| q <= hi);
        let expected = &self.smooth[from..to.max(from)];
        if expected != sorted.as_slice() {
            return Check::fail(format!(
                "component M={} has {} members, the multiset poset has {}",
                c.m,
                n,
                expected.len()
            ));
        }
        Check::Holds
    }

    /// `⌈N / (κM)⌉`, falling back to rationals when `u128` overflows.
    fn lower_quotient(&self, m: u64) -> u64 {
        let kappa = &self.spec.kappa;
        let parts = (u128::try_from(kappa.numer()), u128::try_from(kappa.denom()));
        if let (Ok(a), Ok(b)) = parts {
            if let Some(den) = a.checked_mul(m as u128) {
                if let Some(num) = (self.spec.n as u128).checked_mul(b) {
                    return num.div_ceil(den) as u64;
                }
            }
        }
        ceil_u64(&(from_u64(self.spec.n) / (kappa * from_u64(m)))).unwrap_or(0)
    }

    /// All integers of the interval, ascending; poset indices follow this order.
    pub fn integers(&self) -> Vec<u64> {
        (self.spec.lower()..=self.spec.n).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntervalBound {
    #[serde(with = "crate::rational::serde_rational")]
    pub kappa: BigRational,
    pub pi_kappa: usize,
    /// `max(π(κ), 2)`.
    pub prime_count_bound: usize,
    /// `688 (log κ)³ / (log log κ)²`, for `κ >= 3` only.
    pub log_formula: Option<f64>,
    /// The log formula with its `max(·, 2)` clause, or 2 below `κ = 3`.
    pub log_bound: f64,
    pub min: f64,
}

/// Both upper bounds on `dim D_{[N/κ, N]}`.
pub fn dimension_bound_interval(kappa: &BigRational, caps: &Caps) -> Result<IntervalBound> {
    if kappa <= &BigRational::one() {
        return Err(Error::precondition("kappa must exceed 1"));
    }
    let pi_kappa = prime_count(kappa, caps)?;
    let prime_count_bound = pi_kappa.max(2);
    let log_formula = if kappa >= &from_u64(3) {
        let mut hp = Hp::new();
        let lk = hp.ln_rational(kappa);
        let llk = hp.ln(&lk);
        let num = hp::mul(&hp.int(688), &hp::mul(&lk, &hp::mul(&lk, &lk)));
        Some(hp::to_f64(&hp::div(&num, &hp::mul(&llk, &llk))))
    } else {
        None
    };
    let log_bound = log_formula.map_or(2.0, |v| v.max(2.0));
    Ok(IntervalBound {
        kappa: kappa.clone(),
        pi_kappa,
        prime_count_bound,
        log_formula,
        log_bound,
        min: log_bound.min(prime_count_bound as f64),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RobinCheck {
    pub m: u64,
    pub theta: f64,
    /// `m (log m + log log m − 1.076869)`.
    pub lower_bound: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TruncatedCheck {
    /// `π(κ)`, the number of small primes.
    pub n: usize,
    /// `⌊r⌋ > n`, so `m(v, r)` is the full sum `θ(κ)`.
    pub cap_fired: bool,
    pub m_value: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AppendixA {
    #[serde(with = "crate::rational::serde_rational")]
    pub kappa: BigRational,
    pub r: f64,
    pub r_floor: u64,
    pub largest_prime: u64,
    /// `θ(p_⌊r⌋) = m(v, r)`.
    pub theta: f64,
    pub two_log_kappa: f64,
    /// `θ(p_⌊r⌋) >= 2 log κ`, decided exactly as `Π p >= κ²`.
    pub holds: bool,
    pub robin: RobinCheck,
    pub truncated: TruncatedCheck,
}

fn product_at_least_square(prod: &BigUint, kappa: &BigRational) -> bool {
    let lhs = BigInt::from(prod.clone()) * kappa.denom() * kappa.denom();
    lhs >= kappa.numer() * kappa.numer()
}

/// `m(v, r) >= 2 log κ` for `v = (log 2, log 3, ...)` and
/// `r = 4 log κ / log log κ`, with a Robin-type lower bound for `θ(p_⌊r⌋)`.
pub fn verify_appendix_a(kappa: &BigRational, caps: &Caps) -> Result<AppendixA> {
    if kappa < &from_u64(3) {
        return Err(Error::precondition(format!(
            "appendix inequality needs kappa >= 3, got {}",
            format_rational(kappa)
        )));
    }
    let mut hp = Hp::new();
    let lk = hp.ln_rational(kappa);
    let llk = hp.ln(&lk);
    let r = hp::div(&hp::mul(&hp.int(4), &lk), &llk);
    let r_floor = hp::floor_u64(&r).ok_or_else(|| Error::precondition("r out of range"))?;
    // p_m < m (log m + log log m) for m >= 6
    let m = r_floor.max(6) as f64;
    let estimate = (m * (m.ln() + m.ln().ln())).ceil() as u64 + 16;
    Error::check_cap("sieve limit", estimate as u128, caps.sieve_limit as u128)?;
    let primes = first_primes(r_floor as usize);
    let prod: BigUint = primes.iter().copied().map(BigUint::from).product();
    let prod_hp = hp.big(&prod);
    let theta_hp = hp.ln(&prod_hp);
    let two_log_kappa = hp::mul(&hp.int(2), &lk);
    let holds = product_at_least_square(&prod, kappa);

    let mf = hp.int(r_floor);
    let lm = hp.ln(&mf);
    let llm = hp.ln(&lm);
    let eta = hp.decimal("1.076869");
    let robin_lower = hp::mul(&mf, &hp::sub(&hp::add(&lm, &llm), &eta));
    let robin = RobinCheck {
        m: r_floor,
        theta: hp::to_f64(&theta_hp),
        lower_bound: hp::to_f64(&robin_lower),
        holds: hp::cmp(&theta_hp, &robin_lower) != std::cmp::Ordering::Less,
    };

    let n = prime_count(kappa, caps)?;
    let used = (r_floor as usize).min(n);
    let truncated_prod: BigUint = primes[..used.min(primes.len())]
        .iter()
        .copied()
        .map(BigUint::from)
        .product();
    let truncated_hp = hp.big(&truncated_prod);
    let truncated = TruncatedCheck {
        n,
        cap_fired: r_floor as usize > n,
        m_value: hp::to_f64(&hp.ln(&truncated_hp)),
        holds: product_at_least_square(&truncated_prod, kappa),
    };
    Ok(AppendixA {
        kappa: kappa.clone(),
        r: hp::to_f64(&r),
        r_floor,
        largest_prime: primes.last().copied().unwrap_or(1),
        theta: hp::to_f64(&theta_hp),
        two_log_kappa: hp::to_f64(&two_log_kappa),
        holds,
        robin,
        truncated,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntervalRealiserReport {
    pub n: u64,
    #[serde(with = "crate::rational::serde_rational")]
    pub kappa: BigRational,
    pub lower: u64,
    pub elements: usize,
    pub components: usize,
    pub largest_component: usize,
    pub small_primes: Vec<u64>,
    pub route: ComponentRoute,
    pub per_component: usize,
    pub size: usize,
    /// `max(π(κ), 2)` coordinate orders after merging (1 for a single
    /// chain component).
    pub coordinate_route_size: usize,
    /// Family size after merging, when `π(κ) >= 1`.
    pub family_route_size: Option<usize>,
    /// `max(⌈43 r² log π(κ)⌉, ceiling bound, 2)` with the effective `r`.
    pub family_route_bound: Option<f64>,
    pub family: Option<FamilyReport>,
    pub certified: bool,
    pub witness: Option<(String, String)>,
}

#[derive(Clone, Debug)]
pub struct IntervalRealiserOutput {
    pub report: IntervalRealiserReport,
    pub poset: Poset,
    pub realiser: Realiser,
}

/// A realiser of `D_{[N/κ, N]}` from one shared family applied to every
/// component, certified with `is_realiser`.
pub fn build_interval_realiser(spec: &IntervalSpec, seed: u64, caps: &Caps) -> Result<IntervalRealiserOutput> {
    let decomp = decompose_interval(spec, caps)?;
    let ints = decomp.integers();
    let poset = build_divisibility_poset(&ints, caps)?;
    let w = decomp.weights();
    let k = w.scalar(BigRational::one());
    let l = w.scalar(spec.kappa.clone());
    let cf = component_family(&w, &k, &l, seed, caps)?;
    let lo = spec.lower();
    let indices: Vec<Vec<usize>> = decomp
        .components
        .iter()
        .map(|c| c.members.iter().map(|&m| (m - lo) as usize).collect())
        .collect();
    let comps: Vec<ComponentElements<'_>> = decomp
        .components
        .iter()
        .zip(&indices)
        .map(|(c, idx)| ComponentElements {
            indices: idx,
            images: &c.images,
        })
        .collect();
    let extensions = component_realiser(ints.len(), &cf.family, &comps);
    let (certified, witness) = match is_realiser(&poset, &extensions)? {
        RealiserVerdict::Realiser => (true, None),
        RealiserVerdict::Unreversed { x, y } => (false, Some((x.to_string(), y.to_string()))),
    };
    let parts = decomp.components.len();
    let n = w.len();
    let report = IntervalRealiserReport {
        n: spec.n,
        kappa: spec.kappa.clone(),
        lower: lo,
        elements: ints.len(),
        components: decomp.components.len(),
        largest_component: decomp.components.iter().map(|c| c.members.len()).max().unwrap_or(0),
        small_primes: decomp.small_primes.clone(),
        route: cf.route,
        per_component: cf.family.len(),
        size: extensions.len(),
        coordinate_route_size: merged_size(parts, n.max(1)),
        family_route_size: cf.family_report.as_ref().map(|r| merged_size(parts, r.total)),
        family_route_bound: cf
            .family_report
            .as_ref()
            .map(|r| (r.theorem_bound - 1e-9).ceil().max(r.allowed as f64).max(2.0)),
        family: cf.family_report,
        certified,
        witness,
    };
    Ok(IntervalRealiserOutput {
        report,
        poset,
        realiser: Realiser { extensions },
    })
}
