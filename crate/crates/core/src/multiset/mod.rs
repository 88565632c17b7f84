//! Weighted multiset posets `M^{n,v}_{[k,ℓ]}` and their realisers.
//!
//! A realiser is assembled from two families of comparators: lexicographic
//! orders ([`l1`]) reverse pairs whose difference has small support, and
//! part-wise size orders driven by a good function ([`l2`]) reverse the rest.

pub mod good;
pub mod l1;
pub mod l2;
pub mod order;
pub mod realiser;
pub mod weights;

use std::fmt;

use serde::Serialize;

use crate::poset::{ElementId, Poset};
use crate::{Caps, Error, Result};

pub use good::{good_function_condition, sample_good_function, GoodFunction, GoodParams};
pub use l1::{build_l1, L1Family};
pub use l2::{build_l2_unweighted, build_l2_weighted};
pub use order::{graded_lex, lex_compare, Comparator, ExtensionFamily, Member, Provenance};
pub use realiser::{build_family, build_realiser_multiset, FamilyBuild, FamilyReport};
pub use weights::{Size, SizeReport, WeightKind, WeightVector};

/// A multiset over `[n]`, stored as its multiplicity vector `x(S)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Multiset(Vec<u32>);

impl Multiset {
    pub fn new(exponents: Vec<u32>) -> Self {
        Multiset(exponents)
    }

    pub fn zeros(n: usize) -> Self {
        Multiset(vec![0; n])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|S|`, counted with multiplicity.
    pub fn cardinality(&self) -> u64 {
        self.0.iter().map(|&x| x as u64).sum()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] > 0).collect()
    }

    /// `S ⊆ T` coordinatewise.
    pub fn is_subset(&self, other: &Multiset) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `supp(S \ T)`.
    pub fn difference_support(&self, other: &Multiset) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] > other.0[i]).collect()
    }

    /// Multiplicities outside `part` set to zero.
    pub fn restrict(&self, part: &[bool]) -> Multiset {
        Multiset(
            self.0
                .iter()
                .zip(part)
                .map(|(&x, &keep)| if keep { x } else { 0 })
                .collect(),
        )
    }

    pub fn label(&self) -> String {
        let items: Vec<String> = self.0.iter().map(u32::to_string).collect();
        format!("({})", items.join(","))
    }
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// SplitMix64 step, used to derive independent per-item seeds.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    let mut z = master
        .wrapping_add(stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// An enumerated `M^{n,v}_{[k,ℓ]}` together with its elements, index for index.
#[derive(Clone, Debug)]
pub struct MultisetPoset {
    pub poset: Poset,
    pub elements: Vec<Multiset>,
}

/// All multisets over `[n]` with v-size in `[k, ℓ]`, ordered by inclusion.
/// Elements come out sorted by graded-lex order.
pub fn enumerate_multisets(
    w: &WeightVector,
    k: &Size,
    l: &Size,
    cap: usize,
) -> Result<Vec<Multiset>> {
    let n = w.len();
    let mut out = Vec::new();
    let mut current = vec![0u32; n];
    fn rec(
        w: &WeightVector,
        i: usize,
        acc: Size,
        current: &mut Vec<u32>,
        k: &Size,
        l: &Size,
        cap: usize,
        out: &mut Vec<Multiset>,
    ) -> Result<()> {
        if i == current.len() {
            if &acc >= k {
                if out.len() >= cap {
                    return Err(Error::CapExceeded {
                        what: "multiset poset elements",
                        size: out.len() as u128 + 1,
                        cap: cap as u128,
                    });
                }
                out.push(Multiset(current.clone()));
            }
            return Ok(());
        }
        let mut acc = acc;
        loop {
            rec(w, i + 1, acc.clone(), current, k, l, cap, out)?;
            let next = acc.add(w.entry(i));
            if &next > l {
                break;
            }
            acc = next;
            current[i] += 1;
        }
        current[i] = 0;
        Ok(())
    }
    if l < k {
        return Ok(out);
    }
    if n > 0 {
        rec(w, 0, w.zero(), &mut current, k, l, cap, &mut out)?;
    } else if &w.zero() >= k && &w.zero() <= l {
        out.push(Multiset(Vec::new()));
    }
    out.sort_by(graded_lex);
    Ok(out)
}

/// `M^{n,v}_{[k,ℓ]}` as a poset; element identifiers are exponent labels.
pub fn enumerate_poset(w: &WeightVector, k: &Size, l: &Size, caps: &Caps) -> Result<MultisetPoset> {
    let elements = enumerate_multisets(w, k, l, caps.multiset_elements)?;
    let ids: Vec<ElementId> = elements.iter().map(|m| ElementId::Str(m.label())).collect();
    let poset = Poset::from_strict_order(ids, caps, |a, b| {
        a != b && elements[a].is_subset(&elements[b])
    })?;
    Ok(MultisetPoset { poset, elements })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::from_u64;

    fn ones_poset(n: usize, k: u64, l: u64) -> MultisetPoset {
        let w = WeightVector::ones(n);
        enumerate_poset(
            &w,
            &w.scalar(from_u64(k)),
            &w.scalar(from_u64(l)),
            &Caps::default(),
        )
        .unwrap()
    }

    #[test]
    fn enumeration_examples() {
        let p = ones_poset(2, 1, 2);
        let labels: Vec<String> = p.elements.iter().map(Multiset::label).collect();
        assert_eq!(labels, ["(0,1)", "(1,0)", "(0,2)", "(1,1)", "(2,0)"]);
        assert_eq!(p.poset.len(), 5);
        let a = ones_poset(4, 1, 1);
        assert!(a.poset.incomparable_pairs().len() == 12);
        assert_eq!(ones_poset(3, 1, 3).elements.len(), 19);
    }

    #[test]
    fn log_prime_enumeration_matches_integers() {
        // v-size in [log 1, log 30] over primes 2,3,5: the 5-smooth numbers <= 30
        let w = WeightVector::log_primes(3);
        let ms = enumerate_multisets(&w, &w.scalar(from_u64(1)), &w.scalar(from_u64(30)), 1000)
            .unwrap();
        let mut values: Vec<u64> = ms
            .iter()
            .map(|m| {
                let e = m.exponents();
                2u64.pow(e[0]) * 3u64.pow(e[1]) * 5u64.pow(e[2])
            })
            .collect();
        values.sort();
        let smooth: Vec<u64> = (1..=30u64)
            .filter(|&x| {
                let mut y = x;
                for p in [2, 3, 5] {
                    while y % p == 0 {
                        y /= p;
                    }
                }
                y == 1
            })
            .collect();
        assert_eq!(values, smooth);
    }

    #[test]
    fn multiset_basics() {
        let s = Multiset::new(vec![2, 0, 1]);
        let t = Multiset::new(vec![2, 1, 1]);
        assert!(s.is_subset(&t) && !t.is_subset(&s));
        assert_eq!(t.difference_support(&s), vec![1]);
        assert_eq!(s.support(), vec![0, 2]);
        assert_eq!(s.cardinality(), 3);
        assert_eq!(t.restrict(&[true, false, true]), s);
    }

    #[test]
    fn enumeration_cap() {
        let w = WeightVector::ones(4);
        let r = enumerate_multisets(&w, &w.scalar(from_u64(0)), &w.scalar(from_u64(4)), 10);
        assert!(matches!(r, Err(Error::CapExceeded { .. })));
    }
}
