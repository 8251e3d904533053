//! Euler sums: high-precision evaluation, exact symbolic reduction and
//! numerical verification of linear and quadratic sums.

pub mod asymptotic;
pub mod error;
pub mod exact;
pub mod harness;
pub mod identities;
pub mod numerics;
pub mod parse;
pub mod quadrature;
pub mod real;
pub mod solver;
pub mod sums;
pub mod symbolic;
pub mod table;

pub use error::{Error, Result};
pub use exact::{bernoulli, zeta_even_closed, Rational};
pub use numerics::{NumericalResult, PrecisionContext};
pub use real::Real;
pub use sums::{euler_sum_value, SumSignature};
pub use symbolic::{Atom, Expression, Monomial};
