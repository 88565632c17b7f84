use serde::{Deserialize, Serialize};

/// Size limits for every enumeration and verification loop.
///
/// Exceeding a cap is always an explicit error or an "unverified" flag,
/// never silent truncation. Loaded from JSON by the CLI (`--caps`); missing
/// fields take the defaults below.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Caps {
    /// Maximum `|P|²` for any poset relation matrix.
    pub relation_cells: u64,
    /// Element limit for the exact dimension search (hard limit 64).
    pub exact_elements: usize,
    /// Critical-pair limit for the exact dimension search.
    pub exact_critical_pairs: usize,
    /// Case limit for exhaustive L1-coverage and good-function checks.
    pub verification_cases: u64,
    /// Element limit when enumerating a weighted multiset poset.
    pub multiset_elements: usize,
    /// Integer limit for interval enumeration.
    pub interval_integers: u64,
    /// Upper limit for the prime sieve.
    pub sieve_limit: u64,
    /// Polynomial limit for irreducible enumeration and poly posets.
    pub poly_enumeration: u64,
    /// Resampling limit for randomized constructions.
    pub retry_limit: u32,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            relation_cells: 25_000_000,
            exact_elements: 64,
            exact_critical_pairs: 400,
            verification_cases: 10_000_000,
            multiset_elements: 50_000,
            interval_integers: 100_000,
            sieve_limit: 100_000_000,
            poly_enumeration: 1_000_000,
            retry_limit: 64,
        }
    }
}
