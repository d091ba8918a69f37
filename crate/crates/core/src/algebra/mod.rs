//! Exact arithmetic kernel.
//!
//! Everything here works over `Q` with arbitrary precision; nothing rounds.
//! Polynomials are dense (coefficient `i` multiplies `x^i`) and rational
//! functions are kept in canonical form: coprime numerator and denominator,
//! monic denominator.

mod factor;
mod linsolve;
mod poles;
mod poly;
mod ratfunc;
mod rational;
mod surd;

pub use factor::{rational_roots, squarefree_factorize, RootData};
pub use linsolve::{linsolve, LinSolution};
pub use poles::{
    laurent_at, laurent_at_infinity, order_at_infinity, pole_data, valuation_at, Laurent, PoleData,
};
pub use poly::Poly;
pub use ratfunc::{normalize, RatFunc};
pub use rational::{
    format_q, parse_q, q, qi, rational_root, rational_sqrt, squarefree_decompose, to_f64, Q,
};
pub use surd::Surd;
pub(crate) use surd::basis_product;

/// Serializers rendering rationals as `"p/q"` strings.
pub mod serde_q {
    use super::{format_q, Q};
    use serde::Serializer;

    pub fn one<S: Serializer>(v: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_q(v))
    }

    pub fn vec<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_q))
    }
}

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("the zero function has no order at infinity")]
    ZeroFunction,
    #[error("denominator factor {factor} has no rational root")]
    IrrationalPole { factor: String },
    #[error("integer {0} is too large to factor by trial division")]
    TooLarge(String),
    #[error("invalid rational literal {0:?}")]
    BadRational(String),
}
