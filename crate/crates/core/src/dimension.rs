//! Exact Dushnik–Miller dimension of small posets.
//!
//! The dimension is the least number of reversible sets that together
//! cover all critical pairs. A set of incomparable pairs is reversible when
//! the poset plus the reversed arcs `y < x` stays acyclic; any topological
//! order of that digraph is then one linear extension reversing them all.
//!
//! The search assigns critical pairs to at most `d` reversible classes,
//! each class carried as an incrementally closed relation on `u64` rows, so
//! the hard limit is 64 elements.
//!
//! Convention: the empty poset and the one-element poset have dimension 1.

use std::collections::VecDeque;

use crate::poset::{LinearExtension, Poset, Realiser};
use crate::{Caps, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DimensionOutcome {
    Exact { dimension: usize, realiser: Realiser },
    /// No realiser of size `<= max_d` exists.
    ExceedsMax { max_d: usize, lower_bound: usize },
}

impl DimensionOutcome {
    pub fn dimension(&self) -> Option<usize> {
        match self {
            DimensionOutcome::Exact { dimension, .. } => Some(*dimension),
            DimensionOutcome::ExceedsMax { .. } => None,
        }
    }
}

/// Whether all pairs in `s` can be reversed by a single linear extension.
pub fn is_reversible(p: &Poset, s: &[(usize, usize)]) -> Result<bool> {
    let n = p.len();
    for &(x, y) in s {
        if x >= n || y >= n || !p.incomparable(x, y) {
            let name = |i: usize| {
                if i < n {
                    p.id(i).to_string()
                } else {
                    format!("#{i}")
                }
            };
            return Err(Error::NotIncomparable(name(x), name(y)));
        }
    }
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (a, b) in p.cover_pairs() {
        succ[a].push(b);
    }
    for &(x, y) in s {
        succ[y].push(x);
    }
    let mut indeg = vec![0usize; n];
    for targets in &succ {
        for &b in targets {
            indeg[b] += 1;
        }
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    let mut seen = 0;
    while let Some(a) = queue.pop_front() {
        seen += 1;
        for &b in &succ[a] {
            indeg[b] -= 1;
            if indeg[b] == 0 {
                queue.push_back(b);
            }
        }
    }
    Ok(seen == n)
}

type Closure = Vec<u64>;

#[inline]
fn forces(cls: &[u64], (x, y): (usize, usize)) -> bool {
    cls[y] >> x & 1 == 1
}

#[inline]
fn accepts(cls: &[u64], (x, y): (usize, usize)) -> bool {
    cls[x] >> y & 1 == 0
}

/// Adds the arc `y < x` and re-closes.
fn add_reversal(cls: &mut [u64], (x, y): (usize, usize)) {
    let gain = cls[x] | 1 << x;
    for a in 0..cls.len() {
        if a == y || cls[a] >> y & 1 == 1 {
            cls[a] |= gain;
        }
    }
}

fn closure_extension(cls: &[u64]) -> LinearExtension {
    let n = cls.len();
    let mut below = vec![0u32; n];
    for row in cls {
        let mut bits = *row;
        while bits != 0 {
            below[bits.trailing_zeros() as usize] += 1;
            bits &= bits - 1;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (below[i], i));
    LinearExtension::from_order(order).expect("permutation")
}

struct Search {
    base: Closure,
    pairs: Vec<(usize, usize)>,
    classes: Vec<Closure>,
    nodes: u64,
}

impl Search {
    fn new(p: &Poset, pairs: Vec<(usize, usize)>) -> Self {
        let base = (0..p.len()).map(|a| p.up_row(a)[0]).collect();
        Search {
            base,
            pairs,
            classes: Vec::new(),
            nodes: 0,
        }
    }

    fn covered(&self, pair: (usize, usize)) -> bool {
        self.classes.iter().any(|c| forces(c, pair))
    }

    /// First-fit assignment in index order.
    fn greedy(&mut self) -> usize {
        self.classes.clear();
        for i in 0..self.pairs.len() {
            let pair = self.pairs[i];
            if self.covered(pair) {
                continue;
            }
            match self.classes.iter().position(|c| accepts(c, pair)) {
                Some(c) => add_reversal(&mut self.classes[c], pair),
                None => {
                    let mut cls = self.base.clone();
                    add_reversal(&mut cls, pair);
                    self.classes.push(cls);
                }
            }
        }
        self.classes.len()
    }

    /// Pairwise-incompatible critical pairs found greedily; any realiser
    /// needs a distinct extension for each of them.
    fn clique_bound(&self) -> usize {
        let m = self.pairs.len();
        let mut incompatible = vec![vec![false; m]; m];
        for i in 0..m {
            let mut cls = self.base.clone();
            add_reversal(&mut cls, self.pairs[i]);
            for j in 0..m {
                if i != j && !accepts(&cls, self.pairs[j]) {
                    incompatible[i][j] = true;
                }
            }
        }
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by_key(|&i| (std::cmp::Reverse(incompatible[i].iter().filter(|&&b| b).count()), i));
        let mut clique: Vec<usize> = Vec::new();
        for i in order {
            if clique.iter().all(|&j| incompatible[i][j]) {
                clique.push(i);
            }
        }
        clique.len()
    }

    fn decide(&mut self, d: usize) -> bool {
        self.classes.clear();
        self.dfs(d)
    }

    fn dfs(&mut self, d: usize) -> bool {
        self.nodes += 1;
        // Most constrained uncovered pair; ties by index.
        let mut choice: Option<(usize, usize)> = None;
        for (i, &pair) in self.pairs.iter().enumerate() {
            if self.covered(pair) {
                continue;
            }
            let mut options = self
                .classes
                .iter()
                .filter(|c| accepts(c, pair))
                .count();
            if self.classes.len() < d {
                options += 1;
            }
            if options == 0 {
                return false;
            }
            if choice.is_none_or(|(_, best)| options < best) {
                choice = Some((i, options));
            }
        }
        let Some((i, _)) = choice else {
            return true;
        };
        let pair = self.pairs[i];
        for c in 0..self.classes.len() {
            if !accepts(&self.classes[c], pair) {
                continue;
            }
            let saved = self.classes[c].clone();
            add_reversal(&mut self.classes[c], pair);
            if self.dfs(d) {
                return true;
            }
            self.classes[c] = saved;
        }
        if self.classes.len() < d {
            let mut cls = self.base.clone();
            add_reversal(&mut cls, pair);
            self.classes.push(cls);
            if self.dfs(d) {
                return true;
            }
            self.classes.pop();
        }
        false
    }

    fn realiser(&self) -> Realiser {
        Realiser {
            extensions: self.classes.iter().map(|c| closure_extension(c)).collect(),
        }
    }
}

/// Exact dimension with a certifying realiser, or `ExceedsMax` when no
/// realiser of size `max_d` exists.
pub fn exact_dimension(p: &Poset, max_d: usize, caps: &Caps) -> Result<DimensionOutcome> {
    if max_d == 0 {
        return Err(Error::precondition("max_d must be positive"));
    }
    let limit = caps.exact_elements.min(64);
    Error::check_cap("exact search elements", p.len() as u128, limit as u128)?;
    let pairs = p.critical_pairs();
    Error::check_cap(
        "exact search critical pairs",
        pairs.len() as u128,
        caps.exact_critical_pairs as u128,
    )?;
    if pairs.is_empty() {
        return Ok(DimensionOutcome::Exact {
            dimension: 1,
            realiser: Realiser {
                extensions: vec![LinearExtension::natural(p)],
            },
        });
    }
    let mut search = Search::new(p, pairs);
    let lower = search.clique_bound().max(2);
    if lower > max_d {
        return Ok(DimensionOutcome::ExceedsMax {
            max_d,
            lower_bound: lower,
        });
    }
    let upper = search.greedy();
    let greedy_realiser = search.realiser();
    for d in lower..upper {
        if d > max_d {
            return Ok(DimensionOutcome::ExceedsMax {
                max_d,
                lower_bound: d,
            });
        }
        if search.decide(d) {
            return Ok(DimensionOutcome::Exact {
                dimension: d,
                realiser: search.realiser(),
            });
        }
    }
    if upper > max_d {
        return Ok(DimensionOutcome::ExceedsMax {
            max_d,
            lower_bound: upper,
        });
    }
    Ok(DimensionOutcome::Exact {
        dimension: upper,
        realiser: greedy_realiser,
    })
}
