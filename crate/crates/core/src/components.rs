//! Realisers of disjoint unions of weighted multiset posets.
//!
//! Both divisibility orders split into mutually incomparable components,
//! each isomorphic to some `M^{n,v}_{[k_M, ℓ_M]}` with a common width. One
//! comparator family serves every component since comparators only read
//! exponent vectors.

use serde::Serialize;

use crate::multiset::{
    build_family, Comparator, ExtensionFamily, FamilyReport, Multiset, Provenance, Size,
    WeightVector,
};
use crate::poset::LinearExtension;
use crate::{Caps, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComponentRoute {
    /// One order per coordinate, keyed by that multiplicity.
    Coordinate,
    /// The lexicographic and part-wise family.
    Family,
}

#[derive(Clone, Debug)]
pub struct ComponentFamily {
    pub route: ComponentRoute,
    pub family: ExtensionFamily,
    /// Present when `n >= 1`, whichever route was chosen.
    pub family_report: Option<FamilyReport>,
}

/// `n` coordinate orders; a realiser of any suborder of `M^n` for `n >= 2`.
pub fn coordinate_family(w: &WeightVector) -> ExtensionFamily {
    let mut fam = ExtensionFamily::new(w.clone());
    if w.is_empty() {
        fam.push(Provenance::GradedLex, Comparator::GradedLex);
    }
    for index in 0..w.len() {
        fam.push(Provenance::Coordinate { index }, Comparator::Coordinate { index });
    }
    fam
}

/// Builds the family for width `ℓ − k` and falls back to coordinate orders
/// when those are fewer.
pub fn component_family(
    w: &WeightVector,
    k: &Size,
    l: &Size,
    seed: u64,
    caps: &Caps,
) -> Result<ComponentFamily> {
    if w.is_empty() {
        return Ok(ComponentFamily {
            route: ComponentRoute::Coordinate,
            family: coordinate_family(w),
            family_report: None,
        });
    }
    let build = build_family(w, k, l, seed, caps)?;
    let (route, family) = if build.family.len() > w.len() {
        (ComponentRoute::Coordinate, coordinate_family(w))
    } else {
        (ComponentRoute::Family, build.family)
    };
    Ok(ComponentFamily {
        route,
        family,
        family_report: Some(build.report),
    })
}

/// A component given by the ambient indices of its members and their
/// exponent vectors.
#[derive(Clone, Debug)]
pub struct ComponentElements<'a> {
    pub indices: &'a [usize],
    pub images: &'a [Multiset],
}

/// Merges per-component orders into a realiser of the union.
///
/// With several components there are `max(d, 2)` extensions: extension `i`
/// concatenates every component's extension `i` (its last one when it has
/// fewer), in reverse component order for `i = 1` and in the given order
/// otherwise. Pairs from different components are reversed by extensions 0
/// and 1.
pub fn merge_component_orders(total: usize, orders: &[Vec<Vec<usize>>]) -> Vec<LinearExtension> {
    let finish = |order: Vec<usize>| {
        debug_assert_eq!(order.len(), total);
        LinearExtension::from_order(order).expect("components partition the ground set")
    };
    match orders.len() {
        0 => vec![finish(Vec::new())],
        1 => orders[0].iter().cloned().map(finish).collect(),
        _ => {
            let d = orders.iter().map(Vec::len).max().unwrap_or(1).max(2);
            let pick = |exts: &Vec<Vec<usize>>, i: usize| -> Vec<usize> {
                exts.get(i.min(exts.len().saturating_sub(1)))
                    .cloned()
                    .unwrap_or_default()
            };
            (0..d)
                .map(|i| {
                    let order = if i == 1 {
                        orders.iter().rev().flat_map(|exts| pick(exts, i)).collect()
                    } else {
                        orders.iter().flat_map(|exts| pick(exts, i)).collect()
                    };
                    finish(order)
                })
                .collect()
        }
    }
}

/// Applies `family` to each component and merges the results.
pub fn component_realiser(
    total: usize,
    family: &ExtensionFamily,
    components: &[ComponentElements<'_>],
) -> Vec<LinearExtension> {
    let orders: Vec<Vec<Vec<usize>>> = components
        .iter()
        .map(|c| {
            family
                .members
                .iter()
                .map(|m| {
                    m.comparator
                        .sort(&family.weights, c.images)
                        .into_iter()
                        .map(|local| c.indices[local])
                        .collect()
                })
                .collect()
        })
        .collect();
    merge_component_orders(total, &orders)
}

/// Size of the merged realiser for `components` blocks of `per_component`
/// extensions each.
pub fn merged_size(components: usize, per_component: usize) -> usize {
    match components {
        0 => 1,
        1 => per_component,
        _ => per_component.max(2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{is_realiser, ElementId, Poset};

    #[test]
    fn merging_two_chains() {
        let p = Poset::chain(2)
            .disjoint_union(&Poset::chain(2), &Caps::default())
            .unwrap();
        let a: Vec<usize> = (0..2).map(|i| p.index_of(&ElementId::Str(format!("0:{i}"))).unwrap()).collect();
        let b: Vec<usize> = (0..2).map(|i| p.index_of(&ElementId::Str(format!("1:{i}"))).unwrap()).collect();
        let exts = merge_component_orders(4, &[vec![a], vec![b]]);
        assert_eq!(exts.len(), 2);
        assert!(is_realiser(&p, &exts).unwrap().holds());
    }

    #[test]
    fn single_component_passes_through() {
        let exts = merge_component_orders(2, &[vec![vec![0, 1], vec![1, 0]]]);
        assert_eq!(exts.len(), 2);
        assert_eq!(merged_size(1, 2), 2);
        assert_eq!(merged_size(3, 2), 2);
        assert_eq!(merged_size(3, 1), 2);
        assert_eq!(merged_size(3, 5), 5);
        assert_eq!(merged_size(0, 5), 1);
    }

    #[test]
    fn coordinate_family_realises_grid() {
        let w = WeightVector::ones(2);
        let images: Vec<Multiset> = (0..9u32).map(|c| Multiset::new(vec![c % 3, c / 3])).collect();
        let p = Poset::from_strict_order(
            (0..9).map(ElementId::Int).collect(),
            &Caps::default(),
            |a, b| a != b && images[a].is_subset(&images[b]),
        )
        .unwrap();
        let fam = coordinate_family(&w);
        let indices: Vec<usize> = (0..9).collect();
        let exts = component_realiser(
            9,
            &fam,
            &[ComponentElements {
                indices: &indices,
                images: &images,
            }],
        );
        assert_eq!(exts.len(), 2);
        assert!(is_realiser(&p, &exts).unwrap().holds());
    }
}
