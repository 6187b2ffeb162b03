//! Multiprecision evaluation of the Riemann zeta function and its first two
//! derivatives, the functional-equation factor and its logarithmic
//! derivatives, an argument-principle census of the non-real zeros of ζ'',
//! and numerical verification of the associated counting and distribution
//! formulas at desk scale.
//!
//! Modules:
//! * [`precision`] / [`complex`] — working-precision policy and validated
//!   complex values;
//! * [`special`] — complex gamma, digamma, trigamma, principal log;
//! * [`zeta`] — ζ, ζ', ζ'' by Euler–Maclaurin, Dirichlet series, von
//!   Mangoldt, logarithmic-derivative ratios;
//! * [`funceq`] — the factor F(s) = 2^s π^(s−1) sin(πs/2) Γ(1−s) with
//!   F'/F, F''/F, F''/F', the normalized second derivative G2, and the
//!   functional-equation remainder term;
//! * [`census`] — winding counts on rectangles, zero localization,
//!   N(T)/N2(T) counting, the displacement sum S2(T), and continuous
//!   argument tracking;
//! * [`asymptotics`] — Li, main terms, distribution right-hand sides,
//!   census row assembly;
//! * [`audit`] — grid audits of the working inequalities and measured
//!   argument/growth profiles.

// Domain checks use `!(x > y)` deliberately: the negation rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod audit;
pub mod bernoulli;
pub mod census;
pub mod complex;
pub mod error;
pub mod funceq;
pub mod precision;
pub mod special;
pub mod zeta;

mod util;

pub use complex::ComplexValue;
pub use error::{EvalError, Result};
pub use precision::PrecisionContext;
