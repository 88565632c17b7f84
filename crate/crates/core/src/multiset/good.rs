//! Good functions: `f: [n]×[t] → [a]` such that every `b`-subset of `[n]`
//! meets more than `r` parts of some partition `τ`.

use itertools::Itertools;
use num_bigint::BigUint;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::l1::Verification;
use crate::hp::{self, Hp};
use crate::poset::binomial;
use crate::{Caps, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GoodParams {
    pub a: usize,
    pub b: usize,
    pub r: usize,
    pub t: usize,
    pub n: usize,
}

impl GoodParams {
    fn validate(&self) -> Result<()> {
        let GoodParams { a, b, r, t, n } = *self;
        if !(r < b && b <= n && r < a && t >= 1) {
            return Err(Error::precondition(format!(
                "good function needs r < b <= n, r < a, t >= 1 (a={a}, b={b}, r={r}, t={t}, n={n})"
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionValue {
    /// `log10` of `C(n,b) e^{rt} (r/a)^{(b-r)t}`.
    pub log10_value: f64,
    pub holds: bool,
}

/// Evaluates `C(n,b)·e^{rt}·(r/a)^{(b−r)t}` at high precision; the
/// condition holds when the value is below 1.
pub fn good_function_condition(p: GoodParams) -> Result<ConditionValue> {
    p.validate()?;
    let mut hp = Hp::new();
    let e = (p.b - p.r) * p.t;
    let ratio = BigRational::new(
        num_traits::pow(num_bigint::BigInt::from(p.r), e),
        num_traits::pow(num_bigint::BigInt::from(p.a), e),
    );
    let binom = BigUint::from(binomial(p.n as u64, p.b as u64));
    let exp_rt = hp.exp(&hp.int((p.r * p.t) as u64));
    let value = hp::mul(&hp::mul(&hp.big(&binom), &exp_rt), &hp.rational(&ratio));
    let one = hp.int(1);
    let holds = hp::cmp(&value, &one) == std::cmp::Ordering::Less;
    let ln10 = hp.ln_u64(10);
    let log10 = hp::div(&hp.ln(&value), &ln10);
    Ok(ConditionValue {
        log10_value: hp::to_f64(&log10),
        holds,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GoodFunction {
    pub params: GoodParams,
    /// `table[τ][i] = f(i, τ)`.
    pub table: Vec<Vec<usize>>,
    pub rounds: u32,
    pub verification: Verification,
}

impl GoodFunction {
    pub fn from_table(params: GoodParams, table: Vec<Vec<usize>>) -> Result<Self> {
        params.validate()?;
        if table.len() != params.t
            || table
                .iter()
                .any(|row| row.len() != params.n || row.iter().any(|&v| v >= params.a))
        {
            return Err(Error::precondition("table shape does not match parameters"));
        }
        let mut f = GoodFunction {
            params,
            table,
            rounds: 0,
            verification: Verification::Unverified { failure_bound: 1.0 },
        };
        if f.find_bad_subset().is_none() {
            f.verification = Verification::Verified;
        }
        Ok(f)
    }

    pub fn value(&self, i: usize, tau: usize) -> usize {
        self.table[tau][i]
    }

    /// Membership mask of `R_{α,τ} = {i : f(i,τ) = α}`.
    pub fn part(&self, alpha: usize, tau: usize) -> Vec<bool> {
        self.table[tau].iter().map(|&v| v == alpha).collect()
    }

    /// `|f(X, τ)|`.
    pub fn image_size(&self, x: &[usize], tau: usize) -> usize {
        let mut seen = vec![false; self.params.a];
        let mut count = 0;
        for &i in x {
            let v = self.table[tau][i];
            if !seen[v] {
                seen[v] = true;
                count += 1;
            }
        }
        count
    }

    /// A `b`-subset meeting at most `r` parts in every partition.
    pub fn find_bad_subset(&self) -> Option<Vec<usize>> {
        let p = self.params;
        (0..p.n)
            .combinations(p.b)
            .find(|x| (0..p.t).all(|tau| self.image_size(x, tau) <= p.r))
    }

    pub fn is_good(&self) -> bool {
        self.find_bad_subset().is_none()
    }
}

/// Samples uniform tables until one is verified good. When `C(n,b)·t`
/// exceeds the verification cap the first sample is returned unverified.
pub fn sample_good_function(p: GoodParams, seed: u64, caps: &Caps) -> Result<GoodFunction> {
    p.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sample = |rng: &mut ChaCha8Rng| -> Vec<Vec<usize>> {
        (0..p.t)
            .map(|_| (0..p.n).map(|_| rng.gen_range(0..p.a)).collect())
            .collect()
    };
    let cases = binomial(p.n as u64, p.b as u64).saturating_mul(p.t as u128);
    if cases > caps.verification_cases as u128 {
        let cond = good_function_condition(p)?;
        return Ok(GoodFunction {
            params: p,
            table: sample(&mut rng),
            rounds: 1,
            verification: Verification::Unverified {
                failure_bound: 10f64.powf(cond.log10_value).min(1.0),
            },
        });
    }
    for round in 1..=caps.retry_limit {
        let f = GoodFunction {
            params: p,
            table: sample(&mut rng),
            rounds: round,
            verification: Verification::Verified,
        };
        if f.is_good() {
            return Ok(f);
        }
    }
    Err(Error::RetryExhausted {
        what: "good function sampling",
        limit: caps.retry_limit,
    })
}
