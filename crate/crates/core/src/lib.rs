//! Exact computations with Artinian Gorenstein algebras given by Macaulay
//! dual generators.

pub mod apolar;
pub mod binomial;
pub mod error;
pub mod groebner;
pub mod hilbert;
pub mod lefschetz;
pub mod linalg;
pub mod order;
pub mod parse;
pub mod pfaffian;
pub mod poly;
pub mod report;
pub mod span;
pub mod structure;

pub use apolar::ApolarAlgebra;
pub use error::{Error, Result};
pub use groebner::GradedIdeal;
pub use hilbert::HilbertSeries;
pub use order::{MonomialOrder, OrderKind};
pub use parse::{parse_poly, VarNames};
pub use poly::{contract, LinearForm, Monomial, Poly, Rational};
