//! Computational kernel for calculus over a non-Archimedean ring of
//! generalized numbers: truncated asymptotic expansions in a scale
//! parameter `eps` with exact rational exponents, the sharp ultrametric
//! derived from the valuation, difference-quotient differentiation,
//! Riemann integration with generalized endpoints, ultrametric power
//! series, and pointvalue evaluation of generalized functions on open
//! domains.
//!
//! The crate is organized by backend:
//!
//! * [`gennum`] — exact expansion arithmetic (the symbolic backend),
//! * [`net`] — sampled representatives on geometric grids (the numeric
//!   oracle that cross-validates the symbolic backend),
//! * [`expr`] / [`calculus`] — expression trees, evaluation, sharp
//!   derivatives and integrals,
//! * [`series`] — power series in the sharp topology,
//! * [`points`] — compactly supported generalized points and the
//!   embedding of smooth functions,
//! * [`parse`] / [`json`] — the textual literal grammar and JSON forms,
//! * [`verify`] — named, seeded verification suites used by the CLI and
//!   the acceptance tests.

pub mod calculus;
pub mod corpus;
pub mod error;
pub mod exp;
pub mod expr;
pub mod gennum;
pub mod json;
pub mod net;
pub mod parse;
pub mod points;
pub mod series;
pub mod verify;

pub use calculus::{DerivOptions, DerivativeResult, JacobianMatrix};
pub use error::{Error, Result};
pub use exp::{Exp, Trunc};
pub use expr::{Builtin, Expr, GenFunc};
pub use gennum::{Coef, GenNum, SharpValue, Valuation, DEFAULT_TRUNC, P_MAX};
pub use net::{Grid, Net, NetClass};
pub use points::{Domain, GenFuncOnDomain, GenPoint, GeometryReport, ZeroReport};
pub use series::{Certificate, CoeffRule, ObstructionQuery, PowerSeries, SublinearityWitness};
pub use verify::SuiteOutcome;
