//! Dushnik–Miller dimension of weighted multiset posets and divisibility orders.
//!
//! The crate is organised bottom-up:
//!
//! - [`poset`]: finite posets stored as transitively closed bit matrices,
//!   critical pairs, linear extensions and realiser checks, products,
//!   disjoint unions and hypercube layers.
//! - [`dimension`]: exact dimension by branch and bound over critical pairs.
//! - [`multiset`]: weighted multiset posets and the lexicographic /
//!   part-size extension families that realise them.
//! - [`integers`]: divisibility on integer intervals `[N/κ, N]`, its
//!   decomposition into multiset components and the prime-sum checks.
//! - [`poly`]: divisibility on monic polynomials over a finite field.
//! - [`report`] and [`acceptance`]: JSON reports and the acceptance suite
//!   driven by the command-line front end.

pub mod acceptance;
pub mod caps;
pub mod components;
pub mod dimension;
pub mod error;
pub mod hp;
pub mod integers;
pub mod multiset;
pub mod poly;
pub mod poset;
pub mod rational;
pub mod report;

pub use caps::Caps;
pub use error::{Error, Result};
pub use poset::{ElementId, LinearExtension, Poset, Realiser, RealiserVerdict};
