//! Damped Newton minimisation of `⟨t, z⟩ - Σ_b log det S_b(z)` where each
//! `S_b(z) = Σ_k z_k E_bk` is a symmetric pencil (1×1 pencils are linear forms).

use nalgebra::{DMatrix, DVector};

use super::SolverReport;
use crate::{Error, Result};

const ARMIJO: f64 = 1e-4;
/// Below this Newton decrement a full step of a self-concordant barrier stays
/// in the domain and decreases the objective.
const FULL_STEP_DECREMENT: f64 = 0.25;
/// Relative slack when comparing objective values that agree to rounding.
const ROUNDING_SLACK: f64 = 1e-12;
const MIN_STEP: f64 = 1e-20;
const DECREMENT_TOL: f64 = 1e-14;
const DIVERGENCE: f64 = 1e12;

pub(crate) enum Barrier {
    /// `-Σ_a log⟨rows[a], z⟩`.
    Linear(Vec<DVector<f64>>),
    /// `-Σ_b log det(Σ_k z_k E_bk)`, storing the nonzero `(k, E_bk)` per block.
    Pencils(Vec<Vec<(usize, DMatrix<f64>)>>),
}

pub(crate) struct DualProblem {
    pub target: DVector<f64>,
    pub barrier: Barrier,
}

pub(crate) struct Derivs {
    pub value: f64,
    pub grad: DVector<f64>,
    pub hess: DMatrix<f64>,
}

fn pencil(terms: &[(usize, DMatrix<f64>)], z: &DVector<f64>) -> DMatrix<f64> {
    let size = terms[0].1.nrows();
    terms
        .iter()
        .fold(DMatrix::zeros(size, size), |acc, (k, e)| acc + e * z[*k])
}

impl DualProblem {
    pub fn dim(&self) -> usize {
        self.target.len()
    }

    /// Barrier term `-Σ log(...)`, or `None` outside the open domain.
    pub fn barrier_value(&self, z: &DVector<f64>) -> Option<f64> {
        let mut acc = 0.0;
        match &self.barrier {
            Barrier::Linear(rows) => {
                for r in rows {
                    let v = r.dot(z);
                    if v.is_nan() || v <= 0.0 {
                        return None;
                    }
                    acc -= v.ln();
                }
            }
            Barrier::Pencils(blocks) => {
                for b in blocks {
                    let chol = pencil(b, z).cholesky()?;
                    acc -= 2.0 * chol.l().diagonal().iter().map(|d| d.ln()).sum::<f64>();
                }
            }
        }
        acc.is_finite().then_some(acc)
    }

    pub fn value(&self, z: &DVector<f64>) -> Option<f64> {
        Some(self.target.dot(z) + self.barrier_value(z)?)
    }

    pub fn derivs(&self, z: &DVector<f64>) -> Option<Derivs> {
        let m = self.dim();
        let mut grad = self.target.clone();
        let mut hess = DMatrix::zeros(m, m);
        match &self.barrier {
            Barrier::Linear(rows) => {
                for r in rows {
                    let v = r.dot(z);
                    if v.is_nan() || v <= 0.0 {
                        return None;
                    }
                    grad.axpy(-1.0 / v, r, 1.0);
                    hess.ger(1.0 / (v * v), r, r, 1.0);
                }
            }
            Barrier::Pencils(blocks) => {
                for b in blocks {
                    let inv = pencil(b, z).cholesky()?.inverse();
                    let w: Vec<(usize, DMatrix<f64>)> =
                        b.iter().map(|(k, e)| (*k, &inv * e)).collect();
                    for (k, wk) in &w {
                        grad[*k] -= wk.trace();
                    }
                    for (k, wk) in &w {
                        for (l, wl) in &w {
                            hess[(*k, *l)] += wk.component_mul(&wl.transpose()).sum();
                        }
                    }
                }
            }
        }
        let value = self.value(z)?;
        Some(Derivs { value, grad, hess })
    }

    /// Multipliers `1/⟨row, z⟩` of a linear barrier, or the pencil inverses.
    pub fn pencil_inverses(&self, z: &DVector<f64>) -> Option<Vec<DMatrix<f64>>> {
        match &self.barrier {
            Barrier::Linear(rows) => rows
                .iter()
                .map(|r| {
                    let v = r.dot(z);
                    (v > 0.0).then(|| DMatrix::from_element(1, 1, 1.0 / v))
                })
                .collect(),
            Barrier::Pencils(blocks) => blocks
                .iter()
                .map(|b| Some(pencil(b, z).cholesky()?.inverse()))
                .collect(),
        }
    }
}

/// Solves `H Δ = -g` after symmetric diagonal scaling of `H`.
fn newton_step(d: &Derivs) -> Option<DVector<f64>> {
    let scale = d.hess.diagonal().map(|h| if h > 0.0 { 1.0 / h.sqrt() } else { 1.0 });
    let scaled = DMatrix::from_fn(d.hess.nrows(), d.hess.ncols(), |i, j| {
        d.hess[(i, j)] * scale[i] * scale[j]
    });
    let rhs = d.grad.component_mul(&scale);
    let y = scaled.cholesky()?.solve(&rhs);
    Some(-y.component_mul(&scale))
}

pub(crate) struct Outcome {
    pub z: DVector<f64>,
    pub iterations: usize,
    pub residual: f64,
    pub history: Vec<f64>,
}

/// Runs Newton from the strictly feasible `z0`.
///
/// Converges once the gradient (the primal reconstruction residual in the
/// problem's own coordinates) is at most `tol` and the Newton decrement has
/// collapsed; a dual iterate escaping to infinity is reported as
/// [`Error::NoInteriorCertificate`].
pub(crate) fn minimize(
    problem: &DualProblem,
    z0: DVector<f64>,
    tol: f64,
    max_iter: usize,
    degree: usize,
) -> Result<Outcome> {
    let mut z = z0;
    let mut history = Vec::new();
    let fail = |reason: String, iterations: usize, residual: f64, history: &[f64]| {
        Error::NoInteriorCertificate {
            degree,
            reason,
            report: SolverReport {
                iterations,
                residual,
                objective: history.last().copied().unwrap_or(f64::NAN),
                converged: false,
                history: history.to_vec(),
            },
        }
    };
    for iter in 0..=max_iter {
        let d = problem
            .derivs(&z)
            .ok_or_else(|| Error::Numeric("initial point is not strictly feasible".into()))?;
        history.push(d.value);
        let residual = d.grad.amax();
        let Some(step) = newton_step(&d) else {
            return Err(fail("singular Newton system".into(), iter, residual, &history));
        };
        let decrement = -d.grad.dot(&step);
        if residual <= tol && decrement <= DECREMENT_TOL {
            return Ok(Outcome { z, iterations: iter, residual, history });
        }
        if iter == max_iter {
            return Err(fail(
                format!("no convergence within {max_iter} iterations (residual {residual:.3e})"),
                iter,
                residual,
                &history,
            ));
        }
        let slope = d.grad.dot(&step);
        if decrement.sqrt() < FULL_STEP_DECREMENT {
            let trial = &z + &step;
            let slack = ROUNDING_SLACK * d.value.abs().max(1.0);
            if problem.value(&trial).is_some_and(|v| v <= d.value + slack) {
                z = trial;
                continue;
            }
        }
        let mut t = 1.0;
        loop {
            let trial = &z + &step * t;
            if let Some(v) = problem.value(&trial) {
                if v <= d.value + ARMIJO * t * slope {
                    z = trial;
                    break;
                }
            }
            t *= 0.5;
            if t < MIN_STEP {
                return Err(fail("line search stalled".into(), iter, residual, &history));
            }
        }
        let size = z.amax();
        if size > DIVERGENCE {
            return Err(fail(
                format!("dual iterates diverge (|z| = {size:.3e}); target is not in the interior of the cone"),
                iter + 1,
                residual,
                &history,
            ));
        }
    }
    unreachable!("loop returns on its last iteration")
}
