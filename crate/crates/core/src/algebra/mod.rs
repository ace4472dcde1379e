//! Exact coefficients and the diagonal base algebra.

mod diag;
mod poly;
mod ratfun;
mod scalar;

pub use diag::{DiagElement, LinearMapD, MultilinearMapD, TraceWeights};
pub use poly::{Monomial, Poly, Var, NVARS};
pub use ratfun::RatFun;
pub use scalar::{int, rat, Rational, Scalar};
