//! Exact Hankel determinants of admissible-matrix columns, closed-form
//! predictors for them, and a verifier that compares the two.

pub mod admissible;
pub mod arith;
pub mod cli;
pub mod error;
pub mod fib_lucas;
pub mod hankel;
pub mod matrix;
pub mod predictors;
pub mod verifier;

pub use admissible::{build_table, AdmissibleTable, TypeSpec};
pub use arith::{Int, Poly, Series, Universe, Var};
pub use error::{Error, Result};
pub use hankel::{det_seq, DetSeq, HankelQuery};
pub use matrix::Matrix;
