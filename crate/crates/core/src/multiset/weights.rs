use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::cmp::Ordering;
use std::fmt;

use super::Multiset;
use crate::hp::{self, Hp};
use crate::rational::{format_rational, parse_rational, to_f64};
use crate::{Error, Result};

/// An exact v-size.
///
/// `Linear(q)` is the real number `q`. `Log(q)` is `log q` for a positive
/// rational `q`; sums become products, so log-prime sizes compare exactly
/// as integer (or rational) products.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Size {
    Linear(BigRational),
    Log(BigRational),
}

impl Size {
    pub fn add(&self, other: &Size) -> Size {
        match (self, other) {
            (Size::Linear(a), Size::Linear(b)) => Size::Linear(a + b),
            (Size::Log(a), Size::Log(b)) => Size::Log(a * b),
            _ => panic!("sizes from different weight domains"),
        }
    }

    pub fn approx(&self) -> f64 {
        match self {
            Size::Linear(q) => to_f64(q),
            Size::Log(q) => {
                let mut hp = Hp::new();
                hp::to_f64(&hp.ln_rational(q))
            }
        }
    }

    pub fn report(&self) -> SizeReport {
        SizeReport {
            exact: self.to_string(),
            approx: self.approx(),
        }
    }
}

impl fmt::Display for Size {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Size::Linear(q) => f.write_str(&format_rational(q)),
            Size::Log(q) => write!(f, "log({})", format_rational(q)),
        }
    }
}

impl PartialOrd for Size {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Size {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Size::Linear(a), Size::Linear(b)) | (Size::Log(a), Size::Log(b)) => a.cmp(b),
            _ => panic!("sizes from different weight domains"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SizeReport {
    pub exact: String,
    pub approx: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightKind {
    Ones,
    Rationals,
    Degrees,
    LogPrimes,
}

/// Positive weights `v ∈ R^n_{>0}` with exact comparisons.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector {
    kind: WeightKind,
    entries: Vec<Size>,
}

/// Largest integer `m` with `base^m <= arg`, for `base > 1`, `arg > 0`.
fn floor_log(base: &BigRational, arg: &BigRational) -> BigInt {
    debug_assert!(base > &BigRational::one() && arg.is_positive());
    let mut m = 0i64;
    let mut power = BigRational::one();
    if arg >= &power {
        loop {
            let next = &power * base;
            if &next > arg {
                break;
            }
            power = next;
            m += 1;
        }
    } else {
        while &power > arg {
            power /= base;
            m -= 1;
        }
    }
    BigInt::from(m)
}

impl WeightVector {
    pub fn ones(n: usize) -> Self {
        WeightVector {
            kind: WeightKind::Ones,
            entries: vec![Size::Linear(BigRational::one()); n],
        }
    }

    pub fn rationals(values: Vec<BigRational>) -> Result<Self> {
        if let Some(bad) = values.iter().find(|q| !q.is_positive()) {
            return Err(Error::precondition(format!(
                "weight {} is not positive",
                format_rational(bad)
            )));
        }
        let kind = if values.iter().all(|q| q.is_one()) {
            WeightKind::Ones
        } else {
            WeightKind::Rationals
        };
        Ok(WeightVector {
            kind,
            entries: values.into_iter().map(Size::Linear).collect(),
        })
    }

    pub fn degrees(values: Vec<u64>) -> Result<Self> {
        if values.contains(&0) {
            return Err(Error::precondition("degree weights must be positive"));
        }
        Ok(WeightVector {
            kind: WeightKind::Degrees,
            entries: values
                .into_iter()
                .map(|d| Size::Linear(BigRational::from_integer(d.into())))
                .collect(),
        })
    }

    /// `(log 2, log 3, ..., log p_n)`.
    pub fn log_primes(n: usize) -> Self {
        WeightVector {
            kind: WeightKind::LogPrimes,
            entries: crate::integers::first_primes(n)
                .into_iter()
                .map(|p| Size::Log(BigRational::from_integer(p.into())))
                .collect(),
        }
    }

    /// Parses `ones`, `log-primes`, `degrees:1,1,2,3` or `rationals:3/2,1,...`.
    pub fn parse(spec: &str, n: usize) -> Result<Self> {
        let (head, tail) = spec.split_once(':').unwrap_or((spec, ""));
        let w = match head.trim() {
            "ones" => Self::ones(n),
            "log-primes" => Self::log_primes(n),
            "degrees" => Self::degrees(
                tail.split(',')
                    .map(|s| {
                        s.trim()
                            .parse::<u64>()
                            .map_err(|_| Error::Parse(format!("bad degree {s:?}")))
                    })
                    .collect::<Result<_>>()?,
            )?,
            "rationals" => Self::rationals(
                tail.split(',')
                    .map(parse_rational)
                    .collect::<Result<_>>()?,
            )?,
            other => return Err(Error::Parse(format!("unknown weight spec {other:?}"))),
        };
        if w.len() != n {
            return Err(Error::precondition(format!(
                "weight spec has {} entries, n = {n}",
                w.len()
            )));
        }
        Ok(w)
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, i: usize) -> &Size {
        &self.entries[i]
    }

    pub fn entries(&self) -> &[Size] {
        &self.entries
    }

    pub fn is_log_domain(&self) -> bool {
        self.kind == WeightKind::LogPrimes
    }

    pub fn label(&self) -> String {
        match self.kind {
            WeightKind::Ones => "ones".into(),
            WeightKind::LogPrimes => "log-primes".into(),
            WeightKind::Degrees | WeightKind::Rationals => {
                let prefix = if self.kind == WeightKind::Degrees {
                    "degrees"
                } else {
                    "rationals"
                };
                let items: Vec<String> = self
                    .entries
                    .iter()
                    .map(|s| match s {
                        Size::Linear(q) | Size::Log(q) => format_rational(q),
                    })
                    .collect();
                format!("{prefix}:{}", items.join(","))
            }
        }
    }

    pub fn zero(&self) -> Size {
        if self.is_log_domain() {
            Size::Log(BigRational::one())
        } else {
            Size::Linear(BigRational::zero())
        }
    }

    /// A bound given as a rational, read in this vector's domain: `q`
    /// itself, or `log q` for log-prime weights.
    pub fn scalar(&self, q: BigRational) -> Size {
        if self.is_log_domain() {
            Size::Log(q)
        } else {
            Size::Linear(q)
        }
    }

    /// `|S|_v = x(S) · v`.
    pub fn size(&self, s: &Multiset) -> Size {
        self.size_on(s, None)
    }

    /// v-size of `S` restricted to `part` (all of `[n]` when `None`).
    pub fn size_on(&self, s: &Multiset, part: Option<&[bool]>) -> Size {
        assert_eq!(s.len(), self.len(), "dimension mismatch");
        let keep = |i: usize| part.is_none_or(|p| p[i]);
        match self.is_log_domain() {
            false => {
                let mut acc = BigRational::zero();
                for (i, &x) in s.exponents().iter().enumerate() {
                    if x > 0 && keep(i) {
                        if let Size::Linear(w) = &self.entries[i] {
                            acc += w * BigRational::from_integer(x.into());
                        }
                    }
                }
                Size::Linear(acc)
            }
            true => {
                let mut acc = BigRational::one();
                for (i, &x) in s.exponents().iter().enumerate() {
                    if x > 0 && keep(i) {
                        if let Size::Log(p) = &self.entries[i] {
                            acc *= num_traits::pow(p.clone(), x as usize);
                        }
                    }
                }
                Size::Log(acc)
            }
        }
    }

    /// `m(v, c)`: sum of the `c` smallest entries, or of all entries when
    /// `c >= n`.
    pub fn m_of_count(&self, c: usize) -> Size {
        let mut sorted: Vec<&Size> = self.entries.iter().collect();
        sorted.sort();
        sorted
            .into_iter()
            .take(c)
            .fold(self.zero(), |acc, s| acc.add(s))
    }

    /// `m(v, s)` for a nonnegative real `s`.
    pub fn m_of(&self, s: f64) -> Size {
        let c = if s.is_finite() && s > 0.0 {
            s.floor() as usize
        } else {
            0
        };
        self.m_of_count(c)
    }

    /// `2(ℓ − k)` in this domain.
    pub fn width_target(&self, k: &Size, l: &Size) -> Size {
        match (k, l) {
            (Size::Linear(k), Size::Linear(l)) => {
                Size::Linear((l - k) * BigRational::from_integer(2.into()))
            }
            (Size::Log(k), Size::Log(l)) => {
                let ratio = l / k;
                Size::Log(&ratio * &ratio)
            }
            _ => panic!("sizes from different weight domains"),
        }
    }

    /// Least integer `r >= 1` with `m(v, r) >= 2(ℓ − k)`, capped at `n`.
    /// Returns `(r, capped)`; `capped` is set when no `r <= n` qualifies.
    pub fn effective_r(&self, k: &Size, l: &Size) -> (usize, bool) {
        let target = self.width_target(k, l);
        let n = self.len().max(1);
        for r in 1..=n {
            if self.m_of_count(r) >= target {
                return (r, false);
            }
        }
        (n, true)
    }

    /// Index of the half-open interval of length `ε = v_eps` containing `x`:
    /// `⌊x/ε⌋`, or `⌊x/ε − 1/2⌋` when `shifted`.
    pub fn interval_index(&self, x: &Size, eps_index: usize, shifted: bool) -> BigInt {
        match (x, &self.entries[eps_index]) {
            (Size::Linear(x), Size::Linear(e)) => {
                let mut q = x / e;
                if shifted {
                    q -= BigRational::new(1.into(), 2.into());
                }
                q.floor().to_integer()
            }
            // ⌊log A / log p⌋ and ⌊log A / log p − 1/2⌋ = ⌊log(A²/p) / log(p²)⌋
            (Size::Log(a), Size::Log(p)) => {
                if shifted {
                    floor_log(&(p * p), &(a * a / p))
                } else {
                    floor_log(p, a)
                }
            }
            _ => panic!("sizes from different weight domains"),
        }
    }

    pub fn approx_entries(&self) -> Vec<f64> {
        self.entries.iter().map(Size::approx).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn vsize_examples() {
        let ones = WeightVector::ones(3);
        let s = Multiset::new(vec![2, 0, 1]);
        assert_eq!(ones.size(&s), Size::Linear(q(3, 1)));
        assert_eq!(ones.size(&Multiset::zeros(3)), Size::Linear(q(0, 1)));
        let lp = WeightVector::log_primes(2);
        assert_eq!(lp.size(&Multiset::new(vec![2, 1])), Size::Log(q(12, 1)));
        assert_eq!(lp.size(&Multiset::zeros(2)), lp.zero());
    }

    #[test]
    fn m_of_examples() {
        let v = WeightVector::rationals(vec![q(3, 1), q(1, 1), q(2, 1)]).unwrap();
        assert_eq!(v.m_of(2.0), Size::Linear(q(3, 1)));
        assert_eq!(v.m_of(1.0), Size::Linear(q(1, 1)));
        assert_eq!(v.m_of(1.99), Size::Linear(q(1, 1)));
        assert_eq!(v.m_of(0.5), Size::Linear(q(0, 1)));
        assert_eq!(v.m_of(7.0), Size::Linear(q(6, 1)));
        let lp = WeightVector::log_primes(25);
        assert_eq!(lp.m_of(4.0), Size::Log(q(210, 1)));
    }

    #[test]
    fn effective_r_and_cap() {
        let v = WeightVector::degrees(vec![1, 1, 2, 3]).unwrap();
        let (k, l) = (v.scalar(q(2, 1)), v.scalar(q(4, 1)));
        assert_eq!(v.effective_r(&k, &l), (3, false));
        let lp = WeightVector::log_primes(3);
        // 2 log 6 = log 36 > log 30 = m(v, 3)
        assert_eq!(lp.effective_r(&lp.scalar(q(1, 1)), &lp.scalar(q(6, 1))), (3, true));
        // 2 log 5 = log 25 <= log 30
        assert_eq!(lp.effective_r(&lp.scalar(q(1, 1)), &lp.scalar(q(5, 1))), (3, false));
    }

    #[test]
    fn interval_index_floors() {
        let v = WeightVector::rationals(vec![q(1, 1)]).unwrap();
        let idx = |x: BigRational, shifted| v.interval_index(&Size::Linear(x), 0, shifted);
        assert_eq!(idx(q(9, 10), false), 0.into());
        assert_eq!(idx(q(12, 10), false), 1.into());
        assert_eq!(idx(q(18, 10), false), 1.into());
        assert_eq!(idx(q(12, 10), true), 0.into());
        assert_eq!(idx(q(18, 10), true), 1.into());
        assert_eq!(idx(q(0, 1), true), (-1).into());
    }

    #[test]
    fn log_interval_index_matches_float_floor() {
        let lp = WeightVector::log_primes(4);
        for a in 1u64..400 {
            for (i, p) in [2f64, 3.0, 5.0, 7.0].iter().enumerate() {
                let x = (a as f64).ln() / p.ln();
                for shifted in [false, true] {
                    let want = if shifted { x - 0.5 } else { x };
                    // skip values within float noise of an integer
                    if (want - want.round()).abs() < 1e-9 {
                        continue;
                    }
                    let got = lp.interval_index(&Size::Log(q(a as i64, 1)), i, shifted);
                    assert_eq!(got, BigInt::from(want.floor() as i64), "a={a} p={p} {shifted}");
                }
            }
        }
        // exact boundary: log 8 / log 2 = 3
        assert_eq!(lp.interval_index(&Size::Log(q(8, 1)), 0, false), 3.into());
        // log 8 / log 2 - 1/2 = 2.5 -> 2; log 2^(5/2)... A^2 = p^5 boundary: A = 4·sqrt2 not rational
        assert_eq!(lp.interval_index(&Size::Log(q(8, 1)), 0, true), 2.into());
    }

    #[test]
    fn parse_specs() {
        assert_eq!(WeightVector::parse("ones", 3).unwrap().kind(), WeightKind::Ones);
        let d = WeightVector::parse("degrees:1,1,2,3", 4).unwrap();
        assert_eq!(d.label(), "degrees:1,1,2,3");
        let r = WeightVector::parse("rationals:3/2,1", 2).unwrap();
        assert_eq!(r.label(), "rationals:3/2,1");
        assert!(WeightVector::parse("rationals:0,1", 2).is_err());
        assert!(WeightVector::parse("degrees:1,2", 3).is_err());
        assert!(WeightVector::parse("bogus", 1).is_err());
        assert_eq!(WeightVector::parse("log-primes", 3).unwrap().label(), "log-primes");
    }
}
