//! Exact symbolic verification of the Chebyshev, Bernstein and simplex
//! partitions of unity.
//!
//! Every verifier expands its left-hand side as an exact polynomial and
//! reports whether it collapses to a constant.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::argument;
use crate::measures::{beta_integral, MeasureId, MomentFunctional, Normalization};
use crate::momatrix::christoffel_form;
use crate::polycore::{
    binomial, cheb, cheb_orthonormal_square, graded_lex_basis, serde_rational,
    simplex_generator_power, ChebKind, MPoly, Polynomial, Rational, UPoly,
};
use crate::Result;

/// Which form of the interval partition to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnityVariant {
    /// `Σ T_j²/(n+1) + (1 - x²) Σ U_i²/(n+1) = 1`.
    Unity1,
    /// Orthonormal squares: `Σ T̂_j² + (1 - x²) Σ Û_i² = 2n + 1`.
    Unity2,
    /// Same identity built from exact inverses of the Hankel moment matrices.
    Cheby2,
}

impl UnityVariant {
    pub fn name(self) -> &'static str {
        match self {
            UnityVariant::Unity1 => "unity1",
            UnityVariant::Unity2 => "unity2",
            UnityVariant::Cheby2 => "cheby2",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityParams {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<UnityVariant>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalization: Option<Normalization>,
}

/// Outcome of an exact identity check.
///
/// `holds` means the left-hand side has no nonconstant terms. Whether the
/// constant is the expected one is a separate question, see
/// [`IdentityReport::matches_expected`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: String,
    pub params: IdentityParams,
    pub holds: bool,
    #[serde(with = "serde_rational::option")]
    pub constant: Option<Rational>,
    #[serde(with = "serde_rational::option")]
    pub expected_constant: Option<Rational>,
    pub residual_terms: usize,
}

impl IdentityReport {
    fn from_poly<P: Polynomial>(
        identity: &str,
        params: IdentityParams,
        lhs: &P,
        expected_constant: Option<Rational>,
    ) -> Self {
        let residual_terms = lhs.nonconstant_terms();
        let holds = residual_terms == 0;
        Self {
            identity: identity.to_string(),
            params,
            holds,
            constant: holds.then(|| lhs.constant_term()),
            expected_constant,
            residual_terms,
        }
    }

    /// `Some(true)` when the identity holds with the expected constant,
    /// `None` when no constant is expected.
    pub fn matches_expected(&self) -> Option<bool> {
        let expected = self.expected_constant.as_ref()?;
        Some(self.holds && self.constant.as_ref() == Some(expected))
    }

    /// Human-readable note when the form is constant but not the expected constant.
    pub fn warning(&self) -> Option<String> {
        match (&self.constant, &self.expected_constant) {
            (Some(c), Some(e)) if c != e => Some(format!(
                "{}: computed constant {c} differs from expected {e}",
                self.identity
            )),
            _ => None,
        }
    }
}

/// Constant value of `p` if it has no nonconstant terms.
pub fn constant_reduce<P: Polynomial + ?Sized>(p: &P) -> Option<Rational> {
    p.constant_value()
}

fn int(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn interval_g() -> UPoly {
    UPoly::from_integers(&[1, 0, -1])
}

/// `(n + 1)(n + 2) / 2`.
pub fn s(n: usize) -> Rational {
    int((n + 1) * (n + 2) / 2)
}

/// `C(d + 1 + n, n)`, the number of monomials of degree at most `n` in `d + 1` variables.
pub fn s_hat(d: usize, n: usize) -> Rational {
    Rational::from_integer(binomial((d + 1 + n) as u64, n as u64))
}

/// `T_n² + (1 - x²) U_{n-1}²`.
pub fn verify_pell(n: usize) -> IdentityReport {
    let mut lhs = cheb(ChebKind::First, n).square();
    if n >= 1 {
        lhs = &lhs + &(&interval_g() * &cheb(ChebKind::Second, n - 1).square());
    }
    let params = IdentityParams { n, ..Default::default() };
    IdentityReport::from_poly("pell", params, &lhs, Some(int(1)))
}

/// Checks one of the three Chebyshev partitions of unity on `[-1, 1]`.
pub fn verify_unity_interval(n: usize, variant: UnityVariant) -> IdentityReport {
    let g = interval_g();
    let sum = |kind, upto: usize| {
        (0..upto).fold(UPoly::zero(), |acc, j| &acc + &cheb(kind, j).square())
    };
    let (lhs, expected) = match variant {
        UnityVariant::Unity1 => {
            let w = Rational::new(1.into(), BigInt::from(n + 1));
            let lhs = &sum(ChebKind::First, n + 1) + &(&g * &sum(ChebKind::Second, n));
            (lhs.scale(&w), int(1))
        }
        UnityVariant::Unity2 => {
            let t = (0..=n).fold(UPoly::zero(), |acc, j| {
                &acc + &cheb_orthonormal_square(ChebKind::First, j)
            });
            let u = (0..n).fold(UPoly::zero(), |acc, j| {
                &acc + &cheb_orthonormal_square(ChebKind::Second, j)
            });
            (&t + &(&g * &u), int(2 * n + 1))
        }
        UnityVariant::Cheby2 => (cheby2_form(n), int(2 * n + 1)),
    };
    let params = IdentityParams {
        n,
        variant: Some(variant),
        ..Default::default()
    };
    IdentityReport::from_poly(variant.name(), params, &lhs, Some(expected))
}

fn cheby2_form(n: usize) -> UPoly {
    // Arcsine moment matrices are positive definite at every order.
    let arcsine = MomentFunctional::new(MeasureId::Arcsine).expect("arcsine is valid");
    let g = MPoly::from(interval_g());
    let main = christoffel_form(&arcsine, n as u32, None)
        .expect("arcsine moment matrix is positive definite")
        .quadratic_form_poly;
    let mut lhs = main;
    if n >= 1 {
        let loc = christoffel_form(&arcsine, n as u32 - 1, Some(&g))
            .expect("localized arcsine moment matrix is positive definite")
            .quadratic_form_poly;
        lhs = &lhs + &(&g * &loc);
    }
    lhs.to_upoly().expect("univariate")
}

/// `Σ_{i+j≤n} x^i (1-x)^j / ∫₀¹ x^i (1-x)^j dx = (n+1)(n+2)/2`.
pub fn verify_unity_01(n: usize) -> IdentityReport {
    let x = UPoly::x();
    let one_minus_x = UPoly::from_integers(&[1, -1]);
    let mut lhs = UPoly::zero();
    for i in 0..=n {
        for j in 0..=n - i {
            let term = &x.pow(i as u32) * &one_minus_x.pow(j as u32);
            let w = beta_integral(i as u32, j as u32);
            lhs = &lhs + &term.scale(&(Rational::from_integer(1.into()) / w));
        }
    }
    let params = IdentityParams { n, ..Default::default() };
    IdentityReport::from_poly("unity01", params, &lhs, Some(s(n)))
}

/// `Σ_{|α|≤n} g^α / φ*(g^α)` for the uniform measure on the `d`-simplex.
///
/// For `n ≤ 2` (and for `d = 1`) the sum is known to equal `ŝ(n)`; beyond
/// that the report carries no expected constant.
pub fn verify_simplex_unity(d: usize, n: usize) -> Result<IdentityReport> {
    if d == 0 {
        return Err(argument("simplex dimension must be at least 1"));
    }
    let uniform = MomentFunctional::new(MeasureId::SimplexUniform(d))?;
    let mut lhs = MPoly::zero(d);
    for alpha in graded_lex_basis(d + 1, n as u32) {
        let g = simplex_generator_power(d, &alpha)?;
        let mass = uniform.poly_moment(&g)?;
        if mass.is_zero() {
            return Err(crate::Error::Numeric(format!("zero moment for {alpha:?}")));
        }
        lhs = &lhs + &g.scale(&(Rational::from_integer(1.into()) / mass));
    }
    let expected = (n <= 2 || d == 1).then(|| s_hat(d, n));
    let params = IdentityParams {
        n,
        d: Some(d),
        ..Default::default()
    };
    Ok(IdentityReport::from_poly("simplex-unity", params, &lhs, expected))
}

/// The three quadratic multipliers of the triangle: `xy`, `x(1-x-y)`, `y(1-x-y)`.
pub fn triangle_multipliers() -> [MPoly; 3] {
    let x = MPoly::var(2, 0);
    let y = MPoly::var(2, 1);
    let z = &(&MPoly::one(2) - &x) - &y;
    [&x * &y, &x * &z, &y * &z]
}

/// `Λ_n⁻¹ + Σ_i g_i Λ_{n-1}^{g_i}⁻¹` for the equilibrium measure of the triangle.
///
/// The expected constant is `s(n) + s(n-1)`; under the default mass-2
/// normalization the computed constant differs, see [`IdentityReport::warning`].
pub fn verify_simplex_equilibrium(n: usize, normalization: Normalization) -> Result<IdentityReport> {
    if n == 0 {
        return Err(argument("degree must be at least 1"));
    }
    let phi = MomentFunctional::new(MeasureId::SimplexEquilibrium(normalization))?;
    let mut lhs = christoffel_form(&phi, n as u32, None)?.quadratic_form_poly;
    for g in triangle_multipliers() {
        let loc = christoffel_form(&phi, n as u32 - 1, Some(&g))?.quadratic_form_poly;
        lhs = &lhs + &(&g * &loc);
    }
    let params = IdentityParams {
        n,
        d: Some(2),
        normalization: Some(normalization),
        ..Default::default()
    };
    Ok(IdentityReport::from_poly(
        "simplex-equilibrium",
        params,
        &lhs,
        Some(&s(n) + &s(n - 1)),
    ))
}
