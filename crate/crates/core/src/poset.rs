//! Finite posets, linear extensions and realisers.
//!
//! A [`Poset`] stores its strict order as two transitively closed bit
//! matrices (`up[a]` = elements strictly above `a`, `down[a]` = strictly
//! below). Element identifiers are opaque and mapped to dense indices at
//! construction; every query works on indices.

use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;

use crate::{Caps, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementId {
    Int(i64),
    Str(String),
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementId::Int(i) => write!(f, "{i}"),
            ElementId::Str(s) => f.write_str(s),
        }
    }
}

impl From<i64> for ElementId {
    fn from(i: i64) -> Self {
        ElementId::Int(i)
    }
}

impl From<u64> for ElementId {
    fn from(i: u64) -> Self {
        ElementId::Int(i as i64)
    }
}

impl From<&str> for ElementId {
    fn from(s: &str) -> Self {
        ElementId::Str(s.to_owned())
    }
}

impl From<String> for ElementId {
    fn from(s: String) -> Self {
        ElementId::Str(s)
    }
}

/// Square bit matrix, one row of `u64` words per element.
#[derive(Clone, PartialEq, Eq)]
pub(crate) struct BitMatrix {
    n: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub(crate) fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitMatrix {
            n,
            words,
            data: vec![0; n * words],
        }
    }

    #[inline]
    pub(crate) fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize) {
        self.data[i * self.words + j / 64] |= 1 << (j % 64);
    }

    #[inline]
    pub(crate) fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    fn or_row(&mut self, dst: usize, src: &[u64]) {
        let w = self.words;
        for (d, s) in self.data[dst * w..(dst + 1) * w].iter_mut().zip(src) {
            *d |= s;
        }
    }

    fn row_ones(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(i).iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + b)
            })
        })
    }

    fn count_row(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Warshall pass: afterwards the relation is transitively closed.
    fn close(&mut self) {
        let mut pivot = vec![0u64; self.words];
        for k in 0..self.n {
            pivot.copy_from_slice(self.row(k));
            for i in 0..self.n {
                if self.get(i, k) {
                    self.or_row(i, &pivot);
                }
            }
        }
    }

    fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::new(self.n);
        for i in 0..self.n {
            for j in self.row_ones(i) {
                t.set(j, i);
            }
        }
        t
    }
}

fn is_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// A finite poset with opaque element identifiers.
#[derive(Clone)]
pub struct Poset {
    ids: Vec<ElementId>,
    index: HashMap<ElementId, usize>,
    up: BitMatrix,
    down: BitMatrix,
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.ids == other.ids && self.up == other.up
    }
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Poset")
            .field("elements", &self.ids.len())
            .field("relations", &self.relation_count())
            .finish()
    }
}

/// JSON exchange shape: identifiers plus cover pairs `[lower, upper]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PosetJson {
    pub elements: Vec<ElementId>,
    pub covers: Vec<(ElementId, ElementId)>,
}

fn index_ids(ids: &[ElementId]) -> Result<HashMap<ElementId, usize>> {
    let mut index = HashMap::with_capacity(ids.len());
    for (i, id) in ids.iter().enumerate() {
        if index.insert(id.clone(), i).is_some() {
            return Err(Error::DuplicateElement(id.to_string()));
        }
    }
    Ok(index)
}

fn check_size(n: usize, caps: &Caps) -> Result<()> {
    Error::check_cap(
        "poset relation cells",
        (n as u128) * (n as u128),
        caps.relation_cells as u128,
    )
}

impl Poset {
    /// Transitive closure of the given cover (or any acyclic) arcs.
    pub fn from_cover_relations(
        ids: Vec<ElementId>,
        covers: &[(ElementId, ElementId)],
        caps: &Caps,
    ) -> Result<Poset> {
        check_size(ids.len(), caps)?;
        let index = index_ids(&ids)?;
        let lookup = |id: &ElementId| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| Error::UnknownElement(id.to_string()))
        };
        let arcs = covers
            .iter()
            .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_arcs_indexed(ids, index, arcs)
    }

    /// Transitive closure of arcs given by dense index.
    pub fn from_arcs(
        ids: Vec<ElementId>,
        arcs: impl IntoIterator<Item = (usize, usize)>,
        caps: &Caps,
    ) -> Result<Poset> {
        check_size(ids.len(), caps)?;
        let index = index_ids(&ids)?;
        Self::from_arcs_indexed(ids, index, arcs)
    }

    fn from_arcs_indexed(
        ids: Vec<ElementId>,
        index: HashMap<ElementId, usize>,
        arcs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Poset> {
        let n = ids.len();
        let mut up = BitMatrix::new(n);
        for (a, b) in arcs {
            if a >= n || b >= n {
                return Err(Error::UnknownElement(format!("index {}", a.max(b))));
            }
            up.set(a, b);
        }
        up.close();
        if let Some(i) = (0..n).find(|&i| up.get(i, i)) {
            return Err(Error::Cycle(ids[i].to_string()));
        }
        let down = up.transpose();
        Ok(Poset {
            ids,
            index,
            up,
            down,
        })
    }

    /// Builds a poset from a predicate that is already a strict partial
    /// order (transitive). Irreflexivity and antisymmetry are checked.
    pub fn from_strict_order(
        ids: Vec<ElementId>,
        caps: &Caps,
        less: impl Fn(usize, usize) -> bool,
    ) -> Result<Poset> {
        check_size(ids.len(), caps)?;
        let index = index_ids(&ids)?;
        let n = ids.len();
        let mut up = BitMatrix::new(n);
        for a in 0..n {
            for b in 0..n {
                if less(a, b) {
                    if a == b || less(b, a) {
                        return Err(Error::Cycle(ids[a].to_string()));
                    }
                    up.set(a, b);
                }
            }
        }
        let down = up.transpose();
        Ok(Poset {
            ids,
            index,
            up,
            down,
        })
    }

    pub fn chain(k: usize) -> Poset {
        let ids = (0..k as i64).map(ElementId::Int).collect();
        Self::from_strict_order(ids, &Caps::default(), |a, b| a < b).expect("chain")
    }

    pub fn antichain(k: usize) -> Poset {
        let ids = (0..k as i64).map(ElementId::Int).collect();
        Self::from_strict_order(ids, &Caps::default(), |_, _| false).expect("antichain")
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[ElementId] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> &ElementId {
        &self.ids[i]
    }

    pub fn index_of(&self, id: &ElementId) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// `a < b` in the poset.
    #[inline]
    pub fn less(&self, a: usize, b: usize) -> bool {
        self.up.get(a, b)
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        a == b || self.up.get(a, b)
    }

    #[inline]
    pub fn comparable(&self, a: usize, b: usize) -> bool {
        a == b || self.up.get(a, b) || self.up.get(b, a)
    }

    #[inline]
    pub fn incomparable(&self, a: usize, b: usize) -> bool {
        !self.comparable(a, b)
    }

    pub fn above(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        self.up.row_ones(a)
    }

    pub fn below(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        self.down.row_ones(a)
    }

    pub fn down_count(&self, a: usize) -> usize {
        self.down.count_row(a)
    }

    pub(crate) fn up_row(&self, a: usize) -> &[u64] {
        self.up.row(a)
    }

    pub fn relation_count(&self) -> usize {
        (0..self.len()).map(|i| self.up.count_row(i)).sum()
    }

    pub fn is_chain(&self) -> bool {
        2 * self.relation_count() == self.len() * self.len().saturating_sub(1)
    }

    /// All ordered incomparable pairs, lexicographic by index.
    pub fn incomparable_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .filter(|&(x, y)| self.incomparable(x, y))
            .collect()
    }

    /// Critical pairs `(x, y)`: incomparable, everything below `x` is below
    /// `y`, and everything above `y` is above `x`. Lexicographic by index.
    pub fn critical_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if self.incomparable(x, y)
                    && is_subset(self.down.row(x), self.down.row(y))
                    && is_subset(self.up.row(y), self.up.row(x))
                {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Cover pairs (transitive reduction), lexicographic by index.
    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.len() {
            for b in self.up.row_ones(a) {
                let between = self
                    .up
                    .row(a)
                    .iter()
                    .zip(self.down.row(b))
                    .any(|(x, y)| x & y != 0);
                if !between {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Brute-force check of irreflexivity, antisymmetry and transitivity.
    pub fn check_order_axioms(&self) -> bool {
        let n = self.len();
        for a in 0..n {
            if self.less(a, a) {
                return false;
            }
            for b in 0..n {
                if self.less(a, b) && self.less(b, a) {
                    return false;
                }
                if self.less(a, b) && !(0..n).all(|c| !self.less(b, c) || self.less(a, c)) {
                    return false;
                }
            }
        }
        true
    }

    /// The induced suborder on `keep` (in the given order).
    pub fn suborder(&self, keep: &[usize]) -> Result<Poset> {
        let ids = keep.iter().map(|&i| self.ids[i].clone()).collect();
        Self::from_strict_order(ids, &Caps::default(), |a, b| self.less(keep[a], keep[b]))
    }

    pub fn product(&self, other: &Poset, caps: &Caps) -> Result<Poset> {
        let (n, m) = (self.len(), other.len());
        check_size(n.saturating_mul(m), caps)?;
        let ids = (0..n)
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .map(|(i, j)| ElementId::Str(format!("({},{})", self.ids[i], other.ids[j])))
            .collect();
        Self::from_strict_order(ids, caps, |a, b| {
            let (a1, a2) = (a / m, a % m);
            let (b1, b2) = (b / m, b % m);
            a != b && self.leq(a1, b1) && other.leq(a2, b2)
        })
    }

    /// Disjoint union; identifiers are relabelled `0:x` and `1:y`.
    pub fn disjoint_union(&self, other: &Poset, caps: &Caps) -> Result<Poset> {
        let n = self.len();
        check_size(n + other.len(), caps)?;
        let ids = self
            .ids
            .iter()
            .map(|id| ElementId::Str(format!("0:{id}")))
            .chain(other.ids.iter().map(|id| ElementId::Str(format!("1:{id}"))))
            .collect();
        Self::from_strict_order(ids, caps, |a, b| match (a < n, b < n) {
            (true, true) => self.less(a, b),
            (false, false) => other.less(a - n, b - n),
            _ => false,
        })
    }

    /// `Q^n_I`: subsets of `[n]` whose size lies in `layers`, by inclusion.
    /// Elements are ordered by (size, bitmask) and labelled by
    /// [`subset_label`].
    pub fn hypercube_layers(n: usize, layers: &[usize], caps: &Caps) -> Result<Poset> {
        if n >= 32 {
            return Err(Error::precondition("hypercube dimension must be below 32"));
        }
        if let Some(&bad) = layers.iter().find(|&&k| k > n) {
            return Err(Error::precondition(format!("layer {bad} outside [0, {n}]")));
        }
        let mut wanted: Vec<usize> = layers.to_vec();
        wanted.sort_unstable();
        wanted.dedup();
        let total: u128 = wanted.iter().map(|&k| binomial(n as u64, k as u64)).sum();
        check_size(usize::try_from(total).unwrap_or(usize::MAX), caps)?;
        let mut masks: Vec<u32> = (0..1u32 << n)
            .filter(|m| wanted.contains(&(m.count_ones() as usize)))
            .collect();
        masks.sort_by_key(|&m| (m.count_ones(), m));
        let ids = masks.iter().map(|&m| subset_label(m)).collect();
        Self::from_strict_order(ids, caps, |a, b| {
            let (x, y) = (masks[a], masks[b]);
            x != y && x & y == x
        })
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            elements: self.ids.clone(),
            covers: self
                .cover_pairs()
                .into_iter()
                .map(|(a, b)| (self.ids[a].clone(), self.ids[b].clone()))
                .collect(),
        }
    }

    pub fn from_json(json: &PosetJson, caps: &Caps) -> Result<Poset> {
        Self::from_cover_relations(json.elements.clone(), &json.covers, caps)
    }
}

/// Label of a subset of `[n]` given as a bitmask: `{1,3}` (1-based).
pub fn subset_label(mask: u32) -> ElementId {
    let items: Vec<String> = (0..32)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| (i + 1).to_string())
        .collect();
    ElementId::Str(format!("{{{}}}", items.join(",")))
}

pub(crate) fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// A total order on a poset's elements, bottom to top.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearExtension {
    order: Vec<usize>,
    rank: Vec<usize>,
}

impl LinearExtension {
    /// Validates that `order` is a permutation consistent with `p`.
    pub fn new(p: &Poset, order: Vec<usize>) -> Result<Self> {
        let ext = Self::from_order(order)?;
        ext.validate(p)?;
        Ok(ext)
    }

    /// Permutation check only; the caller validates against a poset.
    pub fn from_order(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut rank = vec![usize::MAX; n];
        for (pos, &e) in order.iter().enumerate() {
            if e >= n || rank[e] != usize::MAX {
                return Err(Error::NotAnExtension(format!(
                    "order is not a permutation of 0..{n}"
                )));
            }
            rank[e] = pos;
        }
        Ok(LinearExtension { order, rank })
    }

    pub fn from_ranked_ids(p: &Poset, ids: &[ElementId]) -> Result<Self> {
        let order = ids
            .iter()
            .map(|id| {
                p.index_of(id)
                    .ok_or_else(|| Error::UnknownElement(id.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(p, order)
    }

    /// Elements sorted by (number of elements below, index): always valid.
    pub fn natural(p: &Poset) -> Self {
        let mut order: Vec<usize> = (0..p.len()).collect();
        order.sort_by_key(|&i| (p.down_count(i), i));
        Self::from_order(order).expect("permutation")
    }

    pub fn validate(&self, p: &Poset) -> Result<()> {
        if self.order.len() != p.len() {
            return Err(Error::NotAnExtension(format!(
                "extension has {} elements, poset has {}",
                self.order.len(),
                p.len()
            )));
        }
        for a in 0..p.len() {
            if let Some(b) = p.above(a).find(|&b| self.rank[b] < self.rank[a]) {
                return Err(Error::NotAnExtension(format!(
                    "{} < {} in the poset but ranked backwards",
                    p.id(a),
                    p.id(b)
                )));
            }
        }
        Ok(())
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    #[inline]
    pub fn rank(&self, e: usize) -> usize {
        self.rank[e]
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn ranked_ids(&self, p: &Poset) -> Vec<ElementId> {
        self.order.iter().map(|&i| p.id(i).clone()).collect()
    }

    pub fn reversed_order(&self) -> Vec<usize> {
        self.order.iter().rev().copied().collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Realiser {
    pub extensions: Vec<LinearExtension>,
}

impl Realiser {
    pub fn len(&self) -> usize {
        self.extensions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.extensions.is_empty()
    }

    pub fn to_ids(&self, p: &Poset) -> Vec<Vec<ElementId>> {
        self.extensions.iter().map(|l| l.ranked_ids(p)).collect()
    }

    pub fn from_ids(p: &Poset, lists: &[Vec<ElementId>]) -> Result<Self> {
        let extensions = lists
            .iter()
            .map(|ids| LinearExtension::from_ranked_ids(p, ids))
            .collect::<Result<Vec<_>>>()?;
        Ok(Realiser { extensions })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RealiserVerdict {
    Realiser,
    /// `(x, y)` incomparable, yet `x` is below `y` in every extension.
    Unreversed { x: usize, y: usize },
}

impl RealiserVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, RealiserVerdict::Realiser)
    }
}

fn validate_all(p: &Poset, ls: &[LinearExtension]) -> Result<()> {
    ls.iter().try_for_each(|l| l.validate(p))
}

fn first_unreversed(
    ls: &[LinearExtension],
    pairs: impl Iterator<Item = (usize, usize)>,
) -> RealiserVerdict {
    for (x, y) in pairs {
        if !ls.iter().any(|l| l.rank(x) > l.rank(y)) {
            return RealiserVerdict::Unreversed { x, y };
        }
    }
    RealiserVerdict::Realiser
}

/// Every incomparable pair `(x, y)` has an extension with `x` above `y`.
pub fn is_realiser(p: &Poset, ls: &[LinearExtension]) -> Result<RealiserVerdict> {
    validate_all(p, ls)?;
    let n = p.len();
    let pairs = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .filter(|&(x, y)| p.incomparable(x, y));
    Ok(first_unreversed(ls, pairs))
}

/// Every critical pair is reversed by some extension.
pub fn reverses_all_critical_pairs(p: &Poset, ls: &[LinearExtension]) -> Result<RealiserVerdict> {
    validate_all(p, ls)?;
    Ok(first_unreversed(ls, p.critical_pairs().into_iter()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(xs: &[i64]) -> Vec<ElementId> {
        xs.iter().map(|&x| ElementId::Int(x)).collect()
    }

    fn d6() -> Poset {
        let covers: Vec<(ElementId, ElementId)> = [(1, 2), (1, 3), (1, 5), (2, 4), (2, 6), (3, 6)]
            .iter()
            .map(|&(a, b)| (ElementId::Int(a), ElementId::Int(b)))
            .collect();
        Poset::from_cover_relations(ints(&[1, 2, 3, 4, 5, 6]), &covers, &Caps::default()).unwrap()
    }

    fn ix(p: &Poset, x: i64) -> usize {
        p.index_of(&ElementId::Int(x)).unwrap()
    }

    #[test]
    fn d6_from_covers() {
        let p = d6();
        assert!(p.less(ix(&p, 1), ix(&p, 6)));
        assert!(p.less(ix(&p, 2), ix(&p, 4)));
        assert!(p.incomparable(ix(&p, 5), ix(&p, 6)));
        assert!(p.incomparable(ix(&p, 3), ix(&p, 4)));
        assert!(p.check_order_axioms());
        assert_eq!(p.relation_count(), 8);
    }

    #[test]
    fn singleton_is_chain() {
        let p = Poset::from_cover_relations(ints(&[7]), &[], &Caps::default()).unwrap();
        assert_eq!(p.len(), 1);
        assert!(p.is_chain());
        assert!(p.critical_pairs().is_empty());
    }

    #[test]
    fn cycle_and_unknown_errors() {
        let ids = vec![ElementId::from("a"), ElementId::from("b")];
        let covers = vec![("a".into(), "b".into()), ("b".into(), "a".into())];
        assert!(matches!(
            Poset::from_cover_relations(ids.clone(), &covers, &Caps::default()),
            Err(Error::Cycle(_))
        ));
        let covers = vec![("a".into(), "z".into())];
        assert!(matches!(
            Poset::from_cover_relations(ids, &covers, &Caps::default()),
            Err(Error::UnknownElement(_))
        ));
        let dup = vec![ElementId::from("a"), ElementId::from("a")];
        assert!(matches!(
            Poset::from_cover_relations(dup, &[], &Caps::default()),
            Err(Error::DuplicateElement(_))
        ));
    }

    #[test]
    fn closing_twice_changes_nothing() {
        let p = d6();
        let mut again = p.up.clone();
        again.close();
        assert!(again == p.up);
    }

    #[test]
    fn hypercube_critical_pairs() {
        let q3 = Poset::hypercube_layers(3, &[0, 1, 2, 3], &Caps::default()).unwrap();
        assert_eq!(q3.len(), 8);
        let expected: Vec<(ElementId, ElementId)> = (0..3)
            .map(|x| (subset_label(1 << x), subset_label(0b111 & !(1 << x))))
            .collect();
        let mut got: Vec<(ElementId, ElementId)> = q3
            .critical_pairs()
            .into_iter()
            .map(|(a, b)| (q3.id(a).clone(), q3.id(b).clone()))
            .collect();
        got.sort();
        let mut expected = expected;
        expected.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn middle_layers_critical_pairs_are_incomparable_k_l_pairs() {
        let p = Poset::hypercube_layers(3, &[1, 2], &Caps::default()).unwrap();
        let crit = p.critical_pairs();
        let inc: Vec<_> = p
            .incomparable_pairs()
            .into_iter()
            .filter(|&(x, y)| p.down_count(x) == 0 && p.above(y).next().is_none())
            .filter(|&(x, y)| {
                let lx = p.id(x).to_string().matches(',').count();
                let ly = p.id(y).to_string().matches(',').count();
                lx == 0 && ly == 1
            })
            .collect();
        assert_eq!(crit, inc);
        assert_eq!(crit.len(), 3);
    }

    #[test]
    fn chain_and_antichain_critical_pairs() {
        assert!(Poset::chain(5).critical_pairs().is_empty());
        assert_eq!(Poset::antichain(2).critical_pairs(), vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn realiser_checks_on_d6() {
        let p = d6();
        // Coordinate orders of the 4 x 3 grid embedding in `d6_embeds_into_grid`.
        let first: Vec<i64> = vec![1, 5, 3, 2, 6, 4];
        let second: Vec<i64> = vec![1, 2, 4, 3, 6, 5];
        let ls = vec![
            LinearExtension::from_ranked_ids(&p, &ints(&first)).unwrap(),
            LinearExtension::from_ranked_ids(&p, &ints(&second)).unwrap(),
        ];
        assert_eq!(is_realiser(&p, &ls).unwrap(), RealiserVerdict::Realiser);
        assert_eq!(
            reverses_all_critical_pairs(&p, &ls).unwrap(),
            RealiserVerdict::Realiser
        );
        assert!(!is_realiser(&p, &ls[..1]).unwrap().holds());
    }

    #[test]
    fn backwards_extension_is_an_error() {
        let p = d6();
        let bad = LinearExtension::from_ranked_ids(&p, &ints(&[2, 1, 3, 4, 5, 6]));
        assert!(matches!(bad, Err(Error::NotAnExtension(_))));
        let l = LinearExtension::from_order((0..6).rev().collect()).unwrap();
        assert!(is_realiser(&p, &[l]).is_err());
    }

    #[test]
    fn antichain_single_extension_witness() {
        let p = Poset::antichain(2);
        let l = LinearExtension::new(&p, vec![0, 1]).unwrap();
        assert_eq!(
            is_realiser(&p, &[l]).unwrap(),
            RealiserVerdict::Unreversed { x: 0, y: 1 }
        );
        let c = Poset::chain(4);
        let l = LinearExtension::natural(&c);
        assert!(is_realiser(&c, &[l.clone()]).unwrap().holds());
        assert!(reverses_all_critical_pairs(&c, &[l]).unwrap().holds());
    }

    #[test]
    fn q3_single_extension_reverses_at_most_one_critical_pair() {
        let q3 = Poset::hypercube_layers(3, &[0, 1, 2, 3], &Caps::default()).unwrap();
        let l = LinearExtension::natural(&q3);
        let reversed = q3
            .critical_pairs()
            .iter()
            .filter(|&&(x, y)| l.rank(x) > l.rank(y))
            .count();
        assert!(reversed <= 1);
        assert!(!reverses_all_critical_pairs(&q3, &[l]).unwrap().holds());
    }

    #[test]
    fn product_and_union_sizes() {
        let grid = Poset::chain(4).product(&Poset::chain(3), &Caps::default()).unwrap();
        assert_eq!(grid.len(), 12);
        assert!(grid.check_order_axioms());
        let p = d6();
        let same = p.product(&Poset::chain(1), &Caps::default()).unwrap();
        assert_eq!(same.len(), 6);
        assert_eq!(same.relation_count(), p.relation_count());
        let u = Poset::chain(2).disjoint_union(&Poset::chain(3), &Caps::default()).unwrap();
        assert_eq!(u.len(), 5);
        assert_eq!(u.relation_count(), 1 + 3);
        let tiny = Caps {
            relation_cells: 100,
            ..Caps::default()
        };
        assert!(matches!(
            Poset::chain(4).product(&Poset::chain(3), &tiny),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn d6_embeds_into_grid() {
        let grid = Poset::chain(4).product(&Poset::chain(3), &Caps::default()).unwrap();
        // 1..=6 -> (first chain, second chain)
        let coords: [(usize, usize); 6] = [(0, 0), (2, 0), (1, 1), (3, 0), (0, 2), (2, 1)];
        let p = d6();
        for a in 0..6 {
            for b in 0..6 {
                let ga = coords[a].0 * 3 + coords[a].1;
                let gb = coords[b].0 * 3 + coords[b].1;
                assert_eq!(p.less(a, b), grid.less(ga, gb), "{a} {b}");
            }
        }
    }

    #[test]
    fn json_round_trip_uses_covers() {
        let p = d6();
        let json = p.to_json();
        assert_eq!(json.covers.len(), 6);
        let text = serde_json::to_string(&json).unwrap();
        let back: PosetJson = serde_json::from_str(&text).unwrap();
        assert_eq!(Poset::from_json(&back, &Caps::default()).unwrap(), p);
        let mixed: PosetJson =
            serde_json::from_str(r#"{"elements":["a",2],"covers":[["a",2]]}"#).unwrap();
        let q = Poset::from_json(&mixed, &Caps::default()).unwrap();
        assert!(q.less(0, 1));
    }
}
