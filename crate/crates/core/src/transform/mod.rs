//! Order-two reductions and algebrization: elimination of a 2x2 linear
//! system to one scalar equation, removal of the first-derivative term,
//! Hamiltonian changes of the independent variable, and classification of
//! singular points (Fuchs criterion, including infinity).

mod changes;
mod classify;
mod oracles;
mod system;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, RatFunc};
use crate::symexpr::SymError;

pub use changes::{algebrize, check_hamiltonian_change, ChangeOfVariables};
pub use classify::{classify_point, singularity_table, Point, PointClass, SingularPoint};
pub use oracles::{algebrization_residual, substitution_residual};
pub use system::{system_to_scalar, ScalarSecondOrder};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransformError {
    #[error("b is identically zero; the system cannot be eliminated to one equation")]
    ZeroB,
    #[error("not algebrizable: {0}")]
    NotAlgebrizable(SymError),
    #[error("unknown change of variables {0:?}")]
    UnknownChange(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error("numerical oracle failed: {0}")]
    Numeric(String),
}

/// `xi'' + P xi' + Q xi = 0` in the variable `tau`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgSolde {
    pub p: RatFunc,
    pub q: RatFunc,
}

/// `zeta'' = r zeta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedOde {
    pub r: RatFunc,
}

/// The substitution `xi = exp(-1/2 * integral P) * zeta` that removes the
/// first-derivative term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multiplier {
    pub p: RatFunc,
}

impl fmt::Display for AlgSolde {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "xi'' + ({}) xi' + ({}) xi = 0",
            self.p.display_in("tau"),
            self.q.display_in("tau")
        )
    }
}

impl fmt::Display for ReducedOde {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "zeta'' = ({}) zeta", self.r.display_in("tau"))
    }
}

impl fmt::Display for Multiplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "xi = exp(-1/2 * integral({})) * zeta", self.p.display_in("tau"))
    }
}

impl Serialize for AlgSolde {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("AlgSolde", 3)?;
        st.serialize_field("P", &self.p.display_in("tau"))?;
        st.serialize_field("Q", &self.q.display_in("tau"))?;
        st.serialize_field("text", &self.to_string())?;
        st.end()
    }
}

/// `r = P^2/4 + P'/2 - Q`.
pub fn remove_first_derivative(s: &AlgSolde) -> (ReducedOde, Multiplier) {
    let quarter = crate::algebra::q(1, 4);
    let half = crate::algebra::q(1, 2);
    let r = &(&(&s.p * &s.p).scale(&quarter) + &s.p.derivative().scale(&half)) - &s.q;
    (ReducedOde { r }, Multiplier { p: s.p.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{qi, Poly};

    fn rf(num: &[i64], den: &[i64]) -> RatFunc {
        RatFunc::new(Poly::from_ints(num), Poly::from_ints(den)).unwrap()
    }

    #[test]
    fn already_reduced() {
        let k = rf(&[0, 3], &[1]);
        let (red, _) = remove_first_derivative(&AlgSolde { p: RatFunc::zero(), q: -&k });
        assert_eq!(red.r, k);
    }

    #[test]
    fn square_root_example() {
        // P = -1/tau, Q = -(8 tau^3 + 3)/tau^2
        let s = AlgSolde {
            p: rf(&[-1], &[0, 1]),
            q: rf(&[-3, 0, 0, -8], &[0, 0, 1]),
        };
        let (red, _) = remove_first_derivative(&s);
        assert_eq!(red.r, rf(&[15, 0, 0, 32], &[0, 0, 4]));
        assert_eq!(red.r.eval(&qi(1)), Some(crate::algebra::q(47, 4)));
    }
}
