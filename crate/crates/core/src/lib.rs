//! Exhaustive verification toolkit for sufficientarian social welfare
//! orderings on finite domains.
//!
//! The library ranks allocations in `A^N` (each of `n` agents receives one
//! element of a finite ground set `A`), materializes a catalog of ranking
//! rules into extensional comparison tables, checks every axiom of the
//! sufficientarian framework against those tables with witness extraction,
//! and recovers representations (sufficient sets, thresholds, endogenous
//! leximin orders) by exhaustive search.
//!
//! Everything is exact: orders are finite relations, numeric data are
//! rationals, and every claim is either checked over its whole quantifier
//! domain or reported with a concrete counterexample.

pub mod alloc;
pub mod axioms;
pub mod characterize;
pub mod enumerate;
pub mod rational;
pub mod relations;
pub mod reproduce;
pub mod space;

pub use rational::Rat;
pub use space::{ElementSet, SpaceSpec, ValidatedSpace};
