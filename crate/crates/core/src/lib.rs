//! Exact computations for invariant Hilbert schemes and moduli of
//! multiplicity-free affine G-varieties: weight-lattice combinatorics,
//! representation calculators, explicit `sl_n`-modules, weight and root
//! monoids, multiplication laws, and tangent-space dimensions.

pub mod binary;
pub mod cli;
pub mod error;
pub mod liealg;
pub mod linalg;
pub mod monoids;
pub mod mulaw;
pub mod poly;
pub mod rational;
pub mod repcalc;
pub mod rootdata;
pub mod tangent;

pub use error::{Error, Result};
pub use rational::Q;
pub use rootdata::{RootDatum, RootVector, Weight};
