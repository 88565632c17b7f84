//! Lexicographic families: for every `x` and every `Y` of size `⌈3r⌉` with
//! `x ∉ Y`, some order puts `x` above all of `Y`.

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::order::{Comparator, ExtensionFamily, Provenance};
use super::WeightVector;
use crate::poset::binomial;
use crate::{Caps, Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Verification {
    Verified,
    /// Too many cases to check; `failure_bound` is the union bound on the
    /// probability that the family misses some case.
    Unverified { failure_bound: f64 },
}

impl Verification {
    pub fn is_verified(&self) -> bool {
        matches!(self, Verification::Verified)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct L1Family {
    pub n: usize,
    pub r: f64,
    pub y_size: usize,
    /// Each order lists `[n]` from least to greatest.
    pub sigmas: Vec<Vec<usize>>,
    pub rotations: bool,
    pub rounds: u32,
    pub size_bound: u64,
    pub verification: Verification,
}

/// `⌈3r⌉`.
pub fn y_size(r: f64) -> usize {
    (3.0 * r - 1e-9).ceil().max(0.0) as usize
}

/// `⌈(3r+1)² log n⌉`.
pub fn l1_size_bound(n: usize, r: f64) -> u64 {
    let v = (3.0 * r + 1.0).powi(2) * (n as f64).ln();
    (v - 1e-9).ceil().max(0.0) as u64
}

/// A pair `(x, Y)` that no order in `sigmas` covers, if any.
pub fn coverage_witness(
    n: usize,
    y_size: usize,
    sigmas: &[Vec<usize>],
) -> Option<(usize, Vec<usize>)> {
    let z = (y_size + 1).min(n);
    let positions: Vec<Vec<usize>> = sigmas
        .iter()
        .map(|s| {
            let mut pos = vec![0; n];
            for (p, &i) in s.iter().enumerate() {
                pos[i] = p;
            }
            pos
        })
        .collect();
    // A set Z of size |Y|+1 is fine when each of its members tops Z somewhere.
    for set in (0..n).combinations(z) {
        let mut topped = vec![false; z];
        for pos in &positions {
            let top = (0..z).max_by_key(|&j| pos[set[j]]).unwrap();
            topped[top] = true;
        }
        if let Some(j) = topped.iter().position(|&t| !t) {
            let y: Vec<usize> = set.iter().copied().filter(|&e| e != set[j]).collect();
            return Some((set[j], y));
        }
    }
    None
}

fn failure_bound(n: usize, y: usize, d: usize) -> f64 {
    let z = (y + 1).min(n);
    let cases = binomial(n as u64, z as u64) as f64 * z as f64;
    let miss = 1.0 - 1.0 / z as f64;
    (cases * miss.powi(d as i32)).min(1.0)
}

/// Samples `⌈(3r+1)² log n⌉` uniform orders and re-samples until coverage
/// is verified; for `n <= ⌈3r⌉ + 1` the `n` rotations are used instead.
pub fn build_l1(n: usize, r: f64, seed: u64, caps: &Caps) -> Result<L1Family> {
    if n == 0 {
        return Err(Error::precondition("L1 needs n >= 1"));
    }
    if !(r >= 1.0) {
        return Err(Error::precondition("L1 needs r >= 1"));
    }
    let y = y_size(r);
    let size_bound = l1_size_bound(n, r);
    if n <= y + 1 {
        let sigmas = (0..n)
            .map(|top| (top + 1..n).chain(0..=top).collect())
            .collect();
        return Ok(L1Family {
            n,
            r,
            y_size: y,
            sigmas,
            rotations: true,
            rounds: 0,
            size_bound,
            verification: Verification::Verified,
        });
    }
    let d = size_bound as usize;
    let z = y + 1;
    let cases = binomial(n as u64, z as u64).saturating_mul(z as u128);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sample = |rng: &mut ChaCha8Rng| -> Vec<Vec<usize>> {
        (0..d)
            .map(|_| {
                let mut s: Vec<usize> = (0..n).collect();
                s.shuffle(rng);
                s
            })
            .collect()
    };
    if cases > caps.verification_cases as u128 {
        return Ok(L1Family {
            n,
            r,
            y_size: y,
            sigmas: sample(&mut rng),
            rotations: false,
            rounds: 1,
            size_bound,
            verification: Verification::Unverified {
                failure_bound: failure_bound(n, y, d),
            },
        });
    }
    for round in 1..=caps.retry_limit {
        let sigmas = sample(&mut rng);
        if coverage_witness(n, y, &sigmas).is_none() {
            return Ok(L1Family {
                n,
                r,
                y_size: y,
                sigmas,
                rotations: false,
                rounds: round,
                size_bound,
                verification: Verification::Verified,
            });
        }
    }
    Err(Error::RetryExhausted {
        what: "lexicographic family coverage",
        limit: caps.retry_limit,
    })
}

impl L1Family {
    pub fn len(&self) -> usize {
        self.sigmas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigmas.is_empty()
    }

    pub fn family(&self, weights: &WeightVector) -> ExtensionFamily {
        assert_eq!(weights.len(), self.n);
        let mut fam = ExtensionFamily::new(weights.clone());
        for (index, sigma) in self.sigmas.iter().enumerate() {
            fam.push(
                Provenance::L1 { index },
                Comparator::Lex {
                    sigma: sigma.clone(),
                },
            );
        }
        fam
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n6_r1_verified() {
        let f = build_l1(6, 1.0, 42, &Caps::default()).unwrap();
        assert_eq!(f.size_bound, 29);
        assert!(f.len() <= 29);
        assert!(f.verification.is_verified());
        assert!(coverage_witness(6, 3, &f.sigmas).is_none());
    }

    #[test]
    fn small_n_rotations() {
        let f = build_l1(2, 1.0, 0, &Caps::default()).unwrap();
        assert!(f.rotations);
        assert_eq!(f.sigmas, vec![vec![1, 0], vec![0, 1]]);
        assert!(coverage_witness(2, 3, &f.sigmas).is_none());
    }

    #[test]
    fn single_order_fails_at_its_minimum() {
        let sigma = vec![vec![2, 0, 1]];
        let (x, y) = coverage_witness(3, 2, &sigma).unwrap();
        assert_ne!(x, 1);
        assert_eq!(y.len(), 2);
        // the σ-minimum is never on top of the other two
        assert!(coverage_witness(3, 2, &[vec![0, 2, 1], vec![0, 1, 2]]).is_some());
        assert!(coverage_witness(3, 2, &[vec![0, 2, 1], vec![0, 1, 2], vec![1, 2, 0]]).is_none());
    }

    #[test]
    fn unverified_when_over_cap() {
        let caps = Caps {
            verification_cases: 10,
            ..Caps::default()
        };
        let f = build_l1(12, 1.0, 1, &caps).unwrap();
        match f.verification {
            Verification::Unverified { failure_bound } => assert!(failure_bound < 1.0),
            _ => panic!("expected unverified"),
        }
    }

    #[test]
    fn bad_inputs() {
        assert!(build_l1(0, 1.0, 0, &Caps::default()).is_err());
        assert!(build_l1(5, 0.5, 0, &Caps::default()).is_err());
    }
}
