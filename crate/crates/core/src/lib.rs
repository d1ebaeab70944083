//! Exact classification of finite subgroups of elliptic-curve
//! automorphism groups, realizability of Galois groups at outer Galois
//! points of genus-one curves, and symbolic verification of defining
//! equations as Galois covers.
//!
//! All arithmetic is exact: arbitrary-precision rationals, the quadratic
//! cyclotomic fields Q(e3) and Q(e4), and rational function fields of
//! Weierstrass curves. No floating point touches any mathematical path.

pub mod autgroup;
pub mod catalog;
pub mod census;
pub mod error;
pub mod exact;
pub mod expr;
pub mod function_field;
pub mod group;
pub mod label;
pub mod poly;
pub mod realize;
pub mod rng;
pub mod torsion;

pub use error::{Error, Result};
