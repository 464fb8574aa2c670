//! Dual Newton solvers for the max-entropy Handelman and Putinar certificate
//! programs, certificate extraction and verification.
//!
//! Each program maximises `Σ log c_α` (Handelman) or `log det A + log det B`
//! (Putinar) subject to the certificate reconstructing a target polynomial.
//! The solvers minimise the smooth convex dual over moment-like vectors and
//! read the certificate off the KKT conditions.

mod handelman;
mod newton;
mod putinar;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::argument;
use crate::polycore::{serde_rational, simplex_generator_power, to_f64, MPoly, Polynomial, Rational};
use crate::Result;

pub use handelman::{
    rationalize_handelman, solve_handelman, solve_simplex, uniform_candidate, uniform_candidate_deviation,
};
pub use putinar::{rationalize_putinar, solve_putinar};

/// Solver configuration shared by all three programs.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverOptions {
    /// Bound on the sup norm of the reconstruction residual.
    pub tol: f64,
    pub max_iter: usize,
    /// Strictly feasible starting point given as monomial moments
    /// (graded-lex up to degree `n` for Handelman, `y_0..y_2n` for Putinar).
    pub init: Option<Vec<f64>>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 200,
            init: None,
        }
    }
}

impl SolverOptions {
    pub fn new(tol: f64, max_iter: usize) -> Self {
        Self { tol, max_iter, init: None }
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(argument(format!("tolerance must be positive, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(argument("max_iter must be positive"));
        }
        Ok(())
    }
}

/// Convergence summary of a dual Newton run.
///
/// `residual` is the sup norm of the reconstruction residual in the solver's
/// working basis (Bernstein for Handelman, Chebyshev for Putinar); `objective`
/// is the primal max-entropy value of the extracted certificate.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverReport {
    pub iterations: usize,
    pub residual: f64,
    pub objective: f64,
    pub converged: bool,
    /// Dual objective at every iterate.
    #[serde(skip)]
    pub history: Vec<f64>,
}

impl std::fmt::Debug for SolverReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SolverReport")
            .field("iterations", &self.iterations)
            .field("residual", &self.residual)
            .field("objective", &self.objective)
            .field("converged", &self.converged)
            .field("history_len", &self.history.len())
            .finish()
    }
}

/// A certificate entry: floating point from the solver, or exact after rationalization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CertValue {
    Exact(#[serde(with = "serde_rational")] Rational),
    Float(f64),
}

impl CertValue {
    /// Exact value; floats convert without rounding.
    pub fn to_rational(&self) -> Result<Rational> {
        match self {
            CertValue::Exact(r) => Ok(r.clone()),
            CertValue::Float(x) => Rational::from_float(*x)
                .ok_or_else(|| crate::Error::Numeric(format!("non-finite certificate entry {x}"))),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            CertValue::Exact(r) => to_f64(r),
            CertValue::Float(x) => *x,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, CertValue::Exact(_))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Weight {
    pub alpha: Vec<u32>,
    pub value: CertValue,
}

/// `target = Σ_{|α| ≤ n} c_α g^α` over the generators of the `d`-simplex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HandelmanCertificate {
    pub d: usize,
    pub n: usize,
    pub weights: Vec<Weight>,
    pub target: MPoly,
}

impl HandelmanCertificate {
    pub fn weight(&self, alpha: &[u32]) -> Option<&CertValue> {
        self.weights.iter().find(|w| w.alpha == alpha).map(|w| &w.value)
    }

    pub fn reconstruct(&self) -> Result<MPoly> {
        let mut acc = MPoly::zero(self.d);
        for w in &self.weights {
            if w.alpha.len() != self.d + 1 {
                return Err(argument(format!("weight index {:?} has wrong length", w.alpha)));
            }
            let g = simplex_generator_power(self.d, &w.alpha)?;
            acc = &acc + &g.scale(&w.value.to_rational()?);
        }
        Ok(acc)
    }
}

/// `target = v_nᵀ A v_n + (1 - x²) v_{n-1}ᵀ B v_{n-1}` in the monomial basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PutinarCertificate {
    pub n: usize,
    #[serde(rename = "gramA")]
    pub gram_a: Vec<Vec<CertValue>>,
    #[serde(rename = "gramB")]
    pub gram_b: Vec<Vec<CertValue>>,
    pub target: MPoly,
}

impl PutinarCertificate {
    pub fn reconstruct(&self) -> Result<MPoly> {
        let n = self.n;
        if self.gram_a.len() != n + 1
            || self.gram_b.len() != n
            || self.gram_a.iter().any(|r| r.len() != n + 1)
            || self.gram_b.iter().any(|r| r.len() != n)
        {
            return Err(argument(format!("Gram matrices do not have sizes {} and {n}", n + 1)));
        }
        let quad = |g: &[Vec<CertValue>]| -> Result<MPoly> {
            let mut terms = Vec::new();
            for (i, row) in g.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    terms.push((vec![(i + j) as u32], v.to_rational()?));
                }
            }
            MPoly::from_terms(1, terms)
        };
        let g = MPoly::from_terms(
            1,
            [(vec![0], Rational::from_integer(1.into())), (vec![2], Rational::from_integer((-1).into()))],
        )?;
        Ok(&quad(&self.gram_a)? + &(&g * &quad(&self.gram_b)?))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Certificate {
    Handelman(HandelmanCertificate),
    Putinar(PutinarCertificate),
}

impl Certificate {
    pub fn dimension(&self) -> usize {
        match self {
            Certificate::Handelman(c) => c.d,
            Certificate::Putinar(_) => 1,
        }
    }

    pub fn reconstruct(&self) -> Result<MPoly> {
        match self {
            Certificate::Handelman(c) => c.reconstruct(),
            Certificate::Putinar(c) => c.reconstruct(),
        }
    }

    pub fn is_exact(&self) -> bool {
        match self {
            Certificate::Handelman(c) => c.weights.iter().all(|w| w.value.is_exact()),
            Certificate::Putinar(c) => c
                .gram_a
                .iter()
                .chain(&c.gram_b)
                .all(|r| r.iter().all(CertValue::is_exact)),
        }
    }
}

/// Dual vector as values on monomials up to the working degree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualFunctional {
    pub basis: Vec<Vec<u32>>,
    pub values: Vec<f64>,
}

impl DualFunctional {
    pub fn value(&self, exponent: &[u32]) -> Option<f64> {
        self.basis.iter().position(|b| b == exponent).map(|i| self.values[i])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HandelmanSolution {
    pub certificate: HandelmanCertificate,
    pub dual: DualFunctional,
    pub report: SolverReport,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PutinarSolution {
    pub certificate: PutinarCertificate,
    pub dual: DualFunctional,
    pub report: SolverReport,
}

fn residual_poly<P: Polynomial + ?Sized>(cert: &Certificate, target: &P) -> Result<MPoly> {
    if target.dimension() != cert.dimension() {
        return Err(argument(format!(
            "certificate has dimension {}, target has dimension {}",
            cert.dimension(),
            target.dimension()
        )));
    }
    Ok(&cert.reconstruct()? - &target.to_mpoly())
}

/// Sup norm of the monomial-coefficient residual between the certificate's
/// reconstruction and `target`, computed exactly and rounded once.
pub fn verify_certificate<P: Polynomial + ?Sized>(cert: &Certificate, target: &P) -> Result<f64> {
    let r = residual_poly(cert, target)?;
    let sup = r
        .terms()
        .map(|(_, c)| c.abs())
        .fold(Rational::zero(), |a, b| if b > a { b } else { a });
    Ok(to_f64(&sup))
}

/// `Some(residual ≡ 0)` for fully rational certificates, `None` if any entry is a float.
pub fn verify_certificate_exact<P: Polynomial + ?Sized>(
    cert: &Certificate,
    target: &P,
) -> Result<Option<bool>> {
    if !cert.is_exact() {
        return Ok(None);
    }
    Ok(Some(residual_poly(cert, target)?.is_zero()))
}

#[cfg(test)]
mod tests;
