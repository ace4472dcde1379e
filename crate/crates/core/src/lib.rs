//! Exact operator-valued free probability over the diagonal algebras `B = ℂ^d`.
//!
//! The crate is `no_std` (it needs `alloc`) and carries no IO. It provides
//!
//! * exact scalars: big rationals and rational functions in a fixed parameter set
//!   ([`algebra`]),
//! * noncrossing partitions and the maximal alternating interval partition
//!   ([`partitions`]),
//! * the `B`-valued moment–cumulant formula in both directions, together with the
//!   Haar / balanced / R-diagonal / traciality / automorphism checks ([`cumulants`]),
//! * the `g₁/g₂`, `G/G′/H/H′`, `N₁/N₂` and `M₀` recursions for `ℂ²`-valued circular
//!   elements ([`recursions`]),
//! * the parameter case analysis built on top of them ([`case_analysis`]),
//! * exact 2×2 group-algebra models of Haar unitaries ([`group_model`]).
//!
//! Everything is exact: there is no floating point anywhere in this crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod case_analysis;
pub mod cumulants;
pub mod error;
pub mod group_model;
pub mod partitions;
pub mod recursions;

pub use algebra::{
    DiagElement, LinearMapD, Monomial, MultilinearMapD, Poly, RatFun, Rational, Scalar,
    TraceWeights, Var,
};
pub use error::{Error, Result};
