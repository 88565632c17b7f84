//! High-precision real arithmetic for the analytic quantities (logarithms,
//! exponentials) that cannot be compared exactly with integers.

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigUint;
use num_rational::BigRational;
use std::cmp::Ordering;

/// Working precision in bits; comfortably above the 80 bits the bound checks need.
pub const PRECISION: usize = 192;

const RM: RoundingMode = RoundingMode::ToEven;

pub struct Hp {
    cc: Consts,
}

impl Default for Hp {
    fn default() -> Self {
        Self::new()
    }
}

impl Hp {
    pub fn new() -> Self {
        Hp {
            cc: Consts::new().expect("astro-float constant cache"),
        }
    }

    pub fn int(&self, x: u64) -> BigFloat {
        BigFloat::from_u64(x, PRECISION)
    }

    pub fn big(&mut self, x: &BigUint) -> BigFloat {
        BigFloat::parse(&x.to_string(), Radix::Dec, PRECISION, RM, &mut self.cc)
    }

    pub fn decimal(&mut self, s: &str) -> BigFloat {
        BigFloat::parse(s, Radix::Dec, PRECISION, RM, &mut self.cc)
    }

    pub fn rational(&mut self, q: &BigRational) -> BigFloat {
        let num = self.decimal(&q.numer().to_string());
        let den = self.decimal(&q.denom().to_string());
        num.div(&den, PRECISION, RM)
    }

    pub fn ln(&mut self, x: &BigFloat) -> BigFloat {
        x.ln(PRECISION, RM, &mut self.cc)
    }

    pub fn ln_u64(&mut self, x: u64) -> BigFloat {
        let x = self.int(x);
        self.ln(&x)
    }

    pub fn ln_rational(&mut self, q: &BigRational) -> BigFloat {
        let x = self.rational(q);
        self.ln(&x)
    }

    pub fn exp(&mut self, x: &BigFloat) -> BigFloat {
        x.exp(PRECISION, RM, &mut self.cc)
    }

    pub fn pow(&mut self, base: &BigFloat, exponent: &BigFloat) -> BigFloat {
        base.pow(exponent, PRECISION, RM, &mut self.cc)
    }
}

pub fn add(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.add(b, PRECISION, RM)
}

pub fn sub(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.sub(b, PRECISION, RM)
}

pub fn mul(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.mul(b, PRECISION, RM)
}

pub fn div(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.div(b, PRECISION, RM)
}

pub fn cmp(a: &BigFloat, b: &BigFloat) -> Ordering {
    a.partial_cmp(b).expect("comparison of finite values")
}

pub fn to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    format!("{x}").parse().unwrap_or(f64::NAN)
}

/// `⌊x⌋` for a nonnegative value below 2^53.
pub fn floor_u64(x: &BigFloat) -> Option<u64> {
    if x.is_negative() {
        return None;
    }
    let f = to_f64(&x.floor());
    (f.is_finite() && f < 9.0e15).then_some(f as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_and_floor() {
        let mut hp = Hp::new();
        let l = hp.ln_u64(100);
        assert!((to_f64(&l) - 100f64.ln()).abs() < 1e-14);
        let r = div(&mul(&hp.int(4), &l), &hp.ln(&l));
        assert_eq!(floor_u64(&r), Some(12));
        assert_eq!(floor_u64(&hp.int(7)), Some(7));
    }

    #[test]
    fn rational_and_big_inputs() {
        let mut hp = Hp::new();
        let q = BigRational::new(3.into(), 2.into());
        assert!((to_f64(&hp.rational(&q)) - 1.5).abs() < 1e-15);
        let b = BigUint::from(7_420_738_134_810u64);
        assert!((to_f64(&hp.big(&b)) - 7_420_738_134_810.0).abs() < 1e-3);
        assert_eq!(cmp(&hp.int(3), &hp.decimal("2.999")), Ordering::Greater);
    }
}
