//! Exact scalars: big integers, multivariate polynomials, truncated series.

mod poly;
mod series;

pub use poly::{Int, Monomial, Poly, Universe, Var};
pub use series::Series;
