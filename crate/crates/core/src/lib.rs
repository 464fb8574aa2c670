//! Exact positivity certificates for the constant polynomial on `[-1, 1]`,
//! `[0, 1]` and the canonical simplex.
//!
//! The crate is organised in layers:
//!
//! - [`polycore`]: big-rational scalars, dense univariate and sparse
//!   multivariate polynomials, and the Chebyshev / Bernstein / simplex
//!   generator families.
//! - [`measures`]: exact moment functionals (arcsine, its `1 - x^2`
//!   localisation, Lebesgue on `[0, 1]`, uniform and equilibrium measures on
//!   the simplex) plus floating-point quadrature oracles.
//! - [`momatrix`]: moment and localizing matrices, exact fraction-free
//!   inversion, and reciprocal Christoffel functions as explicit polynomials.
//! - [`identities`]: exact symbolic verifiers for the Pell, Chebyshev,
//!   Bernstein and simplex partitions of unity.
//! - [`maxent`]: dual Newton solvers for the max-entropy Handelman and
//!   Putinar certificate programs.
//!
//! ```
//! use equicert::identities::verify_pell;
//!
//! let report = verify_pell(5);
//! assert!(report.holds);
//! assert_eq!(report.constant.unwrap(), equicert::Rational::from_integer(1.into()));
//! ```

#![forbid(unsafe_code)]

pub mod error;
pub mod identities;
pub mod maxent;
pub mod measures;
pub mod momatrix;
pub mod polycore;

pub use error::{Error, Result};
pub use identities::IdentityReport;
pub use measures::{MeasureId, MomentFunctional, Normalization};
pub use momatrix::{ChristoffelForm, MomentMatrix, RationalMatrix};
pub use polycore::{ChebKind, MPoly, Polynomial, Rational, UPoly};
