//! Reciprocals of binary power series.
//!
//! For `f` in F2[x] with `f(0) = 1`, the reciprocal `1/f` is periodic with
//! period `ord(f)`, and one period is the cofactor `f* = (1 + x^D) / f`.
//! This crate computes orders, cofactors and their odd/even statistics,
//! builds the four families of robust polynomials with their closed-form
//! cofactors, counts generalized binary representations, and runs the
//! exhaustive scans behind the published tables.
//!
//! - [`gf2poly`]: bit-packed F2[x] arithmetic
//! - [`order_beta`]: order, cofactor, `beta` / `gamma`, robustness
//! - [`families`]: the quadrinomial families `f_{r,1}`, `f_{r,2}` and reciprocals
//! - [`representations`]: digit-set representation counts, parity, Stern sequence
//! - [`search`]: exhaustive scans, census data, figure data
//! - [`cli`]: the `f2rep` command line

pub mod cli;
pub mod error;
pub mod families;
pub mod gf2poly;
pub mod limits;
pub mod order_beta;
pub mod representations;
pub mod search;

pub use error::{Error, Result};
pub use gf2poly::{F2Poly, PolyIndex};
pub use order_beta::{BetaReport, GapCheck, OrderCheck};
