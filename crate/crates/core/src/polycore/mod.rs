//! Exact scalars, polynomial algebra and the polynomial families built on it.

mod families;
mod mpoly;
mod rational;
mod upoly;

pub use families::{
    bernstein, cheb, cheb_orthonormal_square, simplex_generator, simplex_generator_power, ChebKind,
};
pub use mpoly::{graded_lex_basis, graded_lex_cmp, MPoly};
pub use rational::{
    binomial, factorial, multinomial, parse_rational, rat, rationalize, serde_rational,
    to_f64, Rational,
};
pub use upoly::UPoly;

use crate::Result;

/// Common read-only surface of [`UPoly`] and [`MPoly`].
pub trait Polynomial {
    /// Number of variables.
    fn dimension(&self) -> usize;

    /// Exact evaluation at `point`; the point length must match [`Polynomial::dimension`].
    fn eval(&self, point: &[Rational]) -> Result<Rational>;

    /// Sparse multivariate view of the polynomial.
    fn to_mpoly(&self) -> MPoly;

    /// Number of nonzero coefficients attached to nonconstant monomials.
    fn nonconstant_terms(&self) -> usize;

    /// Coefficient of the constant monomial.
    fn constant_term(&self) -> Rational;

    /// The constant the polynomial reduces to, if it has no nonconstant terms.
    fn constant_value(&self) -> Option<Rational> {
        (self.nonconstant_terms() == 0).then(|| self.constant_term())
    }
}

/// Exact evaluation of a univariate or multivariate polynomial.
pub fn poly_eval<P: Polynomial + ?Sized>(p: &P, point: &[Rational]) -> Result<Rational> {
    p.eval(point)
}
