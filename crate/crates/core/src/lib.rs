//! Universally fair allocation of indivisible goods under additive
//! valuations, with an exact verification layer.
//!
//! The allocators ([`allocators`]) combine round-robin drafting with
//! envy-cycle elimination to produce allocations that are simultaneously
//! approximately EFX, EF1, GMMS and PMMS; for instances with at most two more
//! goods than agents they produce exact GMMS allocations. The checkers
//! ([`criteria`]) compute, for any complete allocation, the exact largest
//! factor for which each fairness notion holds, backed by a brute-force
//! maximin-share oracle ([`shares`]).
//!
//! All thresholds are exact elements of Q(sqrt 5) ([`arith`]); nothing is ever
//! decided in floating point.

pub mod allocators;
pub mod arith;
pub mod criteria;
pub mod error;
pub mod generators;
pub mod model;
pub mod reproduce;
pub mod shares;
pub mod stress;

pub use arith::{golden_constants, value_cmp, GoldenConstants, Sqrt5};
pub use error::{Error, Result};
pub use model::{FairnessReport, Instance, Ordering, PartialAllocation};

/// Arbitrary-precision rational; the domain of every valuation entry.
pub type Rational = num_rational::BigRational;

/// Exact element of Q(sqrt 5) over [`Rational`].
pub type Value = arith::Value;

/// A set of good indices.
pub type GoodSet = std::collections::BTreeSet<usize>;
