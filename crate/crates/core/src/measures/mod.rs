//! Exact moment functionals and floating-point quadrature oracles.

mod quadrature;

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::argument;
use crate::polycore::{binomial, factorial, Polynomial, Rational};
use crate::Result;

pub use quadrature::{gauss_chebyshev, gauss_legendre_01, quadrature_oracle};

/// Total-mass convention for the simplex equilibrium measure.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// Density `1 / (π √(x y (1 - x - y)))`, total mass 2.
    #[default]
    PaperPi,
    /// Rescaled to a probability measure.
    Probability,
}

/// The measures the crate knows closed-form moments for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasureId {
    /// Arcsine (equilibrium) measure `dx / (π √(1 - x²))` on `[-1, 1]`.
    Arcsine,
    /// `(1 - x²)` times the arcsine measure.
    ArcsineG,
    /// Lebesgue measure on `[0, 1]`.
    Lebesgue01,
    /// Uniform probability measure on the canonical simplex of `R^d`.
    SimplexUniform(usize),
    /// Equilibrium measure of the triangle `{x, y ≥ 0, x + y ≤ 1}`.
    SimplexEquilibrium(Normalization),
}

impl MeasureId {
    /// Number of variables of the underlying space.
    pub fn dimension(&self) -> usize {
        match self {
            MeasureId::Arcsine | MeasureId::ArcsineG | MeasureId::Lebesgue01 => 1,
            MeasureId::SimplexUniform(d) => *d,
            MeasureId::SimplexEquilibrium(_) => 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            MeasureId::SimplexUniform(0) => Err(argument("simplex dimension must be at least 1")),
            _ => Ok(()),
        }
    }

    /// Exact total mass.
    pub fn total_mass(&self) -> Rational {
        match self {
            MeasureId::ArcsineG => Rational::new(1.into(), 2.into()),
            MeasureId::SimplexEquilibrium(Normalization::PaperPi) => Rational::from_integer(2.into()),
            _ => Rational::one(),
        }
    }

    /// Closed-form moment of `x^alpha`; `alpha.len()` is assumed to match.
    fn closed_form(&self, alpha: &[u32]) -> Rational {
        match self {
            MeasureId::Arcsine => arcsine_moment(alpha[0]),
            MeasureId::ArcsineG => arcsine_moment(alpha[0]) - arcsine_moment(alpha[0] + 2),
            MeasureId::Lebesgue01 => Rational::new(BigInt::one(), BigInt::from(alpha[0] + 1)),
            MeasureId::SimplexUniform(d) => simplex_uniform_moment(*d, alpha),
            MeasureId::SimplexEquilibrium(norm) => {
                let m = simplex_equilibrium_moment(alpha[0], alpha[1]);
                match norm {
                    Normalization::PaperPi => m,
                    Normalization::Probability => m / Rational::from_integer(2.into()),
                }
            }
        }
    }
}

/// `C(k, k/2) / 2^k` for even `k`, zero for odd `k`.
fn arcsine_moment(k: u32) -> Rational {
    if k % 2 == 1 {
        return Rational::zero();
    }
    Rational::new(binomial(u64::from(k), u64::from(k / 2)), BigInt::one() << k)
}

/// `d! α_1! ··· α_d! / (d + |α|)!`.
fn simplex_uniform_moment(d: usize, alpha: &[u32]) -> Rational {
    let total: u64 = alpha.iter().map(|&a| u64::from(a)).sum();
    let num = alpha
        .iter()
        .fold(factorial(d as u64), |acc, &a| acc * factorial(u64::from(a)));
    Rational::new(num, factorial(d as u64 + total))
}

/// `c_a = Γ(a + ½) / √π = (2a)! / (4^a a!)`.
fn half_gamma_ratio(a: u32) -> Rational {
    let a = u64::from(a);
    Rational::new(factorial(2 * a), (BigInt::one() << (2 * a)) * factorial(a))
}

/// Moment of `x^a y^b` under `dx dy / (π √(x y (1 - x - y)))`:
/// `c_a c_b 4^{m+1} (m+1)! / (2m+2)!` with `m = a + b`.
fn simplex_equilibrium_moment(a: u32, b: u32) -> Rational {
    let m = u64::from(a + b);
    let tail = Rational::new(
        (BigInt::one() << (2 * (m + 1))) * factorial(m + 1),
        factorial(2 * m + 2),
    );
    half_gamma_ratio(a) * half_gamma_ratio(b) * tail
}

/// `∫₀¹ x^i (1-x)^j dx = i! j! / (i + j + 1)!`.
pub fn beta_integral(i: u32, j: u32) -> Rational {
    let (i, j) = (u64::from(i), u64::from(j));
    Rational::new(factorial(i) * factorial(j), factorial(i + j + 1))
}

/// `1 / (n √(2π x (1 - x)))`, the envelope of the degree-`n` Bernstein polynomials.
pub fn bernstein_envelope(n: usize, x: f64) -> Result<f64> {
    if n == 0 {
        return Err(argument("envelope degree must be positive"));
    }
    if !(x > 0.0 && x < 1.0) {
        return Err(crate::Error::Domain(format!(
            "envelope is defined on the open interval (0, 1), got {x}"
        )));
    }
    Ok(1.0 / (n as f64 * (2.0 * std::f64::consts::PI * x * (1.0 - x)).sqrt()))
}

/// A measure together with a write-once cache of its exact moments.
///
/// Concurrent callers may both compute a missing moment; they always store
/// and observe the same value.
#[derive(Debug)]
pub struct MomentFunctional {
    measure: MeasureId,
    memo: RwLock<HashMap<Vec<u32>, Rational>>,
}

impl Clone for MomentFunctional {
    fn clone(&self) -> Self {
        Self {
            measure: self.measure,
            memo: RwLock::new(self.memo.read().expect("memo poisoned").clone()),
        }
    }
}

impl MomentFunctional {
    pub fn new(measure: MeasureId) -> Result<Self> {
        measure.validate()?;
        Ok(Self {
            measure,
            memo: RwLock::new(HashMap::new()),
        })
    }

    pub fn measure(&self) -> MeasureId {
        self.measure
    }

    pub fn dimension(&self) -> usize {
        self.measure.dimension()
    }

    /// Exact moment of the monomial `x^alpha`.
    pub fn moment(&self, alpha: &[u32]) -> Result<Rational> {
        if alpha.len() != self.dimension() {
            return Err(argument(format!(
                "exponent {alpha:?} has length {}, measure {:?} has dimension {}",
                alpha.len(),
                self.measure,
                self.dimension()
            )));
        }
        if let Some(v) = self.memo.read().expect("memo poisoned").get(alpha) {
            return Ok(v.clone());
        }
        let v = self.measure.closed_form(alpha);
        self.memo
            .write()
            .expect("memo poisoned")
            .entry(alpha.to_vec())
            .or_insert_with(|| v.clone());
        Ok(v)
    }

    /// Linear extension of [`MomentFunctional::moment`] to polynomials.
    pub fn poly_moment<P: Polynomial + ?Sized>(&self, p: &P) -> Result<Rational> {
        if p.dimension() != self.dimension() {
            return Err(argument(format!(
                "polynomial dimension {} does not match measure dimension {}",
                p.dimension(),
                self.dimension()
            )));
        }
        let mut acc = Rational::zero();
        for (e, c) in p.to_mpoly().terms() {
            acc += c * self.moment(e)?;
        }
        Ok(acc)
    }

    /// Number of cached moments.
    pub fn cached(&self) -> usize {
        self.memo.read().expect("memo poisoned").len()
    }
}
