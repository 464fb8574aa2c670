//! Moment and localizing matrices over graded monomial bases, exact
//! inversion, and reciprocal Christoffel functions as explicit polynomials.

mod matrix;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::argument;
use crate::measures::{MeasureId, MomentFunctional};
use crate::polycore::{graded_lex_basis, MPoly, Polynomial, Rational};
use crate::Result;

pub use matrix::RationalMatrix;

/// Symmetric matrix `φ(g · x^{α+β})` indexed by a graded-lex monomial basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentMatrix {
    /// `None` when built from an ad-hoc moment sequence.
    pub measure: Option<MeasureId>,
    pub degree: u32,
    pub basis: Vec<Vec<u32>>,
    pub entries: RationalMatrix,
    #[serde(skip)]
    pub shift: Option<MPoly>,
}

impl MomentMatrix {
    /// Builds the (localizing, if `shift` is given) moment matrix of degree
    /// `n` in `dim` variables from an arbitrary moment sequence.
    pub fn from_moments<F>(dim: usize, n: u32, shift: Option<&MPoly>, mut moment: F) -> Result<Self>
    where
        F: FnMut(&[u32]) -> Result<Rational>,
    {
        if let Some(g) = shift {
            if g.dimension() != dim {
                return Err(argument(format!(
                    "shift polynomial has dimension {}, expected {dim}",
                    g.dimension()
                )));
            }
        }
        let basis = graded_lex_basis(dim, n);
        let size = basis.len();
        let mut cache = std::collections::HashMap::<Vec<u32>, Rational>::new();
        let mut entry = |e: Vec<u32>| -> Result<Rational> {
            if let Some(v) = cache.get(&e) {
                return Ok(v.clone());
            }
            let v = match shift {
                None => moment(&e)?,
                Some(g) => {
                    let mut acc = Rational::zero();
                    for (ge, gc) in g.terms() {
                        let sum: Vec<u32> = e.iter().zip(ge).map(|(a, b)| a + b).collect();
                        acc += gc * moment(&sum)?;
                    }
                    acc
                }
            };
            cache.insert(e, v.clone());
            Ok(v)
        };
        let mut entries = RationalMatrix::zeros(size, size);
        for i in 0..size {
            for j in i..size {
                let e = basis[i].iter().zip(&basis[j]).map(|(a, b)| a + b).collect();
                let v = entry(e)?;
                entries[(j, i)] = v.clone();
                entries[(i, j)] = v;
            }
        }
        Ok(Self {
            measure: None,
            degree: n,
            basis,
            entries,
            shift: shift.cloned(),
        })
    }

    pub fn size(&self) -> usize {
        self.basis.len()
    }

    pub fn dimension(&self) -> usize {
        self.basis.first().map_or(0, Vec::len)
    }

    /// True when entry `(i, j)` depends only on `i + j` (univariate, unshifted or not).
    pub fn is_hankel(&self) -> bool {
        let n = self.size();
        self.dimension() == 1
            && (0..n).all(|i| {
                (0..n).all(|j| {
                    let (a, b) = if i + j < n { (0, i + j) } else { (i + j - (n - 1), n - 1) };
                    self.entries[(i, j)] == self.entries[(a, b)]
                })
            })
    }
}

/// Moment matrix `M_n(φ)` (or localizing matrix `M_n(g·φ)`) of a named measure.
pub fn moment_matrix(f: &MomentFunctional, n: u32, shift: Option<&MPoly>) -> Result<MomentMatrix> {
    let mut m = MomentMatrix::from_moments(f.dimension(), n, shift, |e| f.moment(e))?;
    m.measure = Some(f.measure());
    Ok(m)
}

/// Exact inverse of a positive definite moment matrix.
pub fn invert_exact(m: &MomentMatrix) -> Result<RationalMatrix> {
    m.entries.inverse_pd()
}

/// Reciprocal Christoffel function `v_n(x)ᵀ M⁻¹ v_n(x)` as an exact polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct ChristoffelForm {
    pub measure: Option<MeasureId>,
    pub degree: u32,
    pub basis: Vec<Vec<u32>>,
    pub inverse: RationalMatrix,
    pub quadratic_form_poly: MPoly,
}

impl ChristoffelForm {
    pub fn from_matrix(m: &MomentMatrix) -> Result<Self> {
        let inverse = invert_exact(m)?;
        let dim = m.dimension();
        let mut terms = Vec::with_capacity(m.size() * m.size());
        for (i, a) in m.basis.iter().enumerate() {
            for (j, b) in m.basis.iter().enumerate() {
                let e = a.iter().zip(b).map(|(x, y)| x + y).collect();
                terms.push((e, inverse[(i, j)].clone()));
            }
        }
        Ok(Self {
            measure: m.measure,
            degree: m.degree,
            basis: m.basis.clone(),
            inverse,
            quadratic_form_poly: MPoly::from_terms(dim, terms)?,
        })
    }

    /// Exact value of `Λ_n⁻¹` at `point`.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        self.quadratic_form_poly.eval(point)
    }
}

/// Christoffel form of a named measure, optionally localized by `shift`.
pub fn christoffel_form(
    f: &MomentFunctional,
    n: u32,
    shift: Option<&MPoly>,
) -> Result<ChristoffelForm> {
    ChristoffelForm::from_matrix(&moment_matrix(f, n, shift)?)
}

pub fn christoffel_eval(form: &ChristoffelForm, point: &[Rational]) -> Result<Rational> {
    form.eval(point)
}
