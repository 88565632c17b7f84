//! Total orders on multisets used as linear extensions.

use std::cmp::Ordering;

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Multiset, Size, WeightVector};
use crate::poset::LinearExtension;

/// `M_0`: by cardinality, then by exponent vector.
pub fn graded_lex(a: &Multiset, b: &Multiset) -> Ordering {
    a.cardinality()
        .cmp(&b.cardinality())
        .then_with(|| a.exponents().cmp(b.exponents()))
}

/// `L_σ`, with `sigma` listing `[n]` from σ-least to σ-greatest: the
/// σ-greatest coordinate where `s` and `t` differ decides.
pub fn lex_compare(sigma: &[usize], s: &Multiset, t: &Multiset) -> Ordering {
    for &i in sigma.iter().rev() {
        match s.exponents()[i].cmp(&t.exponents()[i]) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    L1 { index: usize },
    L2 { alpha: usize, tau: usize, j: u8 },
    Coordinate { index: usize },
    GradedLex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Comparator {
    Lex {
        sigma: Vec<usize>,
    },
    /// By the multiplicity of one coordinate.
    Coordinate {
        index: usize,
    },
    GradedLex,
    /// By `|S_part|_v`.
    PartSize {
        part: Vec<bool>,
    },
    /// By `|S_part|_v`; equal sizes by `S_part` lexicographically,
    /// ascending or descending.
    PartOrdered {
        part: Vec<bool>,
        descending: bool,
    },
    /// By `|S_part|_v` under the interval order `K`: interval index
    /// ascending, decreasing within an interval of length `v[eps_index]`;
    /// then as `PartOrdered`.
    PartInterval {
        part: Vec<bool>,
        eps_index: usize,
        shifted: bool,
        descending: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum KeyPart {
    Int(BigInt),
    Size(Size),
    RevSize(Size),
    Vector(Vec<u32>),
    RevVector(Vec<u32>),
}

impl PartialOrd for KeyPart {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for KeyPart {
    fn cmp(&self, other: &Self) -> Ordering {
        use KeyPart::*;
        match (self, other) {
            (Int(a), Int(b)) => a.cmp(b),
            (Size(a), Size(b)) => a.cmp(b),
            (RevSize(a), RevSize(b)) => b.cmp(a),
            (Vector(a), Vector(b)) => a.cmp(b),
            (RevVector(a), RevVector(b)) => b.cmp(a),
            _ => panic!("mismatched comparator keys"),
        }
    }
}

impl Comparator {
    fn key(&self, w: &WeightVector, s: &Multiset) -> Vec<KeyPart> {
        let tie = |restricted: Multiset, descending: bool| {
            let v = restricted.exponents().to_vec();
            if descending {
                KeyPart::RevVector(v)
            } else {
                KeyPart::Vector(v)
            }
        };
        match self {
            Comparator::Lex { sigma } => vec![KeyPart::Vector(
                sigma.iter().rev().map(|&i| s.exponents()[i]).collect(),
            )],
            Comparator::Coordinate { index } => {
                vec![KeyPart::Int(s.exponents()[*index].into())]
            }
            Comparator::GradedLex => Vec::new(),
            Comparator::PartSize { part } => vec![KeyPart::Size(w.size_on(s, Some(part)))],
            Comparator::PartOrdered { part, descending } => vec![
                KeyPart::Size(w.size_on(s, Some(part))),
                tie(s.restrict(part), *descending),
            ],
            Comparator::PartInterval {
                part,
                eps_index,
                shifted,
                descending,
            } => {
                let size = w.size_on(s, Some(part));
                vec![
                    KeyPart::Int(w.interval_index(&size, *eps_index, *shifted)),
                    KeyPart::RevSize(size),
                    tie(s.restrict(part), *descending),
                ]
            }
        }
    }

    /// Total order on multisets; ties after the comparator's own key fall
    /// back to `M_0`.
    pub fn compare(&self, w: &WeightVector, s: &Multiset, t: &Multiset) -> Ordering {
        self.key(w, s)
            .cmp(&self.key(w, t))
            .then_with(|| graded_lex(s, t))
    }

    /// Indices of `elements` from least to greatest.
    pub fn sort(&self, w: &WeightVector, elements: &[Multiset]) -> Vec<usize> {
        let keys: Vec<Vec<KeyPart>> = elements.iter().map(|s| self.key(w, s)).collect();
        let mut order: Vec<usize> = (0..elements.len()).collect();
        order.sort_by(|&a, &b| {
            keys[a]
                .cmp(&keys[b])
                .then_with(|| graded_lex(&elements[a], &elements[b]))
        });
        order
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Member {
    pub provenance: Provenance,
    pub comparator: Comparator,
}

/// Comparators over a common weight vector, each a linear extension of `M^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionFamily {
    pub weights: WeightVector,
    pub members: Vec<Member>,
}

impl ExtensionFamily {
    pub fn new(weights: WeightVector) -> Self {
        ExtensionFamily {
            weights,
            members: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn push(&mut self, provenance: Provenance, comparator: Comparator) {
        self.members.push(Member {
            provenance,
            comparator,
        });
    }

    pub fn extend(&mut self, other: ExtensionFamily) {
        assert_eq!(self.weights, other.weights, "families over different weights");
        self.members.extend(other.members);
    }

    /// One linear extension per member, restricted to `elements` (indexed
    /// as in the ambient poset).
    pub fn linear_extensions(&self, elements: &[Multiset]) -> Vec<LinearExtension> {
        self.members
            .iter()
            .map(|m| {
                LinearExtension::from_order(m.comparator.sort(&self.weights, elements))
                    .expect("sort yields a permutation")
            })
            .collect()
    }

    /// Checks `S < T` in every member on random strict inclusions `S ⊂ T`.
    /// Returns the first violating member index with its pair.
    pub fn spot_check(
        &self,
        samples: usize,
        max_exponent: u32,
        seed: u64,
    ) -> Option<(usize, Multiset, Multiset)> {
        let n = self.weights.len();
        if n == 0 {
            return None;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let s: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=max_exponent)).collect();
            let mut t = s.clone();
            let bumps = rng.gen_range(1..=n);
            for _ in 0..bumps {
                t[rng.gen_range(0..n)] += 1;
            }
            let (s, t) = (Multiset::new(s), Multiset::new(t));
            for (i, m) in self.members.iter().enumerate() {
                if m.comparator.compare(&self.weights, &s, &t) != Ordering::Less {
                    return Some((i, s, t));
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn ms(v: &[u32]) -> Multiset {
        Multiset::new(v.to_vec())
    }

    #[test]
    fn lex_examples() {
        let natural = [0, 1, 2];
        assert_eq!(
            lex_compare(&natural, &ms(&[0, 0, 1]), &ms(&[1, 1, 0])),
            Ordering::Greater
        );
        assert_eq!(
            lex_compare(&natural, &ms(&[1, 0, 1]), &ms(&[1, 1, 1])),
            Ordering::Less
        );
        assert_eq!(
            lex_compare(&natural, &ms(&[2, 0, 1]), &ms(&[2, 0, 1])),
            Ordering::Equal
        );
    }

    #[test]
    fn interval_order_example() {
        // eps = 1: 0.9 and 1.2 sit in different intervals, 1.2 and 1.8 share one
        let w = WeightVector::rationals(vec![
            BigRational::new(1.into(), 1.into()),
            BigRational::new(1.into(), 10.into()),
        ])
        .unwrap();
        let c = Comparator::PartInterval {
            part: vec![false, true],
            eps_index: 0,
            shifted: false,
            descending: false,
        };
        let (a, b, d) = (ms(&[0, 9]), ms(&[0, 12]), ms(&[0, 18]));
        assert_eq!(c.compare(&w, &a, &b), Ordering::Less);
        assert_eq!(c.compare(&w, &d, &b), Ordering::Less);
        let shifted = Comparator::PartInterval {
            part: vec![false, true],
            eps_index: 0,
            shifted: true,
            descending: false,
        };
        // shifted intervals [1/2, 3/2) and [3/2, 5/2)
        assert_eq!(shifted.compare(&w, &b, &d), Ordering::Less);
    }

    #[test]
    fn part_ordered_ties_run_opposite() {
        let w = WeightVector::ones(3);
        let part = vec![true, true, false];
        let up = Comparator::PartOrdered {
            part: part.clone(),
            descending: false,
        };
        let down = Comparator::PartOrdered {
            part,
            descending: true,
        };
        let (s, t) = (ms(&[1, 0, 0]), ms(&[0, 1, 0]));
        assert_eq!(up.compare(&w, &s, &t), down.compare(&w, &t, &s));
        // equal restrictions fall through to M_0
        let (s, t) = (ms(&[1, 0, 0]), ms(&[1, 0, 2]));
        assert_eq!(up.compare(&w, &s, &t), Ordering::Less);
        assert_eq!(down.compare(&w, &s, &t), Ordering::Less);
    }

    #[test]
    fn sort_agrees_with_compare() {
        let w = WeightVector::degrees(vec![1, 2, 3]).unwrap();
        let elements: Vec<Multiset> = (0..27u32)
            .map(|c| ms(&[c % 3, c / 3 % 3, c / 9]))
            .collect();
        let comparators = [
            Comparator::Lex {
                sigma: vec![2, 0, 1],
            },
            Comparator::Coordinate { index: 1 },
            Comparator::GradedLex,
            Comparator::PartSize {
                part: vec![true, false, true],
            },
            Comparator::PartInterval {
                part: vec![false, true, true],
                eps_index: 1,
                shifted: true,
                descending: true,
            },
        ];
        for c in &comparators {
            let order = c.sort(&w, &elements);
            for pair in order.windows(2) {
                assert_eq!(
                    c.compare(&w, &elements[pair[0]], &elements[pair[1]]),
                    Ordering::Less
                );
            }
        }
    }
}
