//! Non-integrability analysis for non-autonomous Hamiltonian systems of the
//! form `x'' = f(x, t)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`algebra`]: exact rationals, dense polynomials, rational functions,
//!   root finding, Laurent expansions and exact linear solves.
//! * [`symexpr`]: a small expression language with parsing, differentiation,
//!   substitution, numeric evaluation and lowering to rational functions.
//! * [`variational`]: Hamiltonian framings of `x'' = f(x, t)`, integral
//!   curves and the normal variational equation along them.
//! * [`transform`]: order-two reductions, algebrization by a Hamiltonian
//!   change of variables, and singular point classification.
//! * [`kovacic`]: Kovacic's algorithm and the Galois verdict layer.
//! * [`sitnikov`]: Kepler solver, Sitnikov models, adaptive integration and
//!   Poincaré sections.

pub mod algebra;
pub mod kovacic;
pub mod ode;
pub mod sitnikov;
pub mod symexpr;
pub mod transform;
pub mod variational;
