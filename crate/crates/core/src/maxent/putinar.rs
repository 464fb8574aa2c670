//! Putinar max-entropy program on `[-1, 1]` with multiplier `1 - x²`, solved
//! in Chebyshev moment coordinates `τ_k = L(T_k)`, `k ≤ 2n`.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_traits::Zero;

use super::newton::{minimize, Barrier, DualProblem};
use super::{
    CertValue, Certificate, DualFunctional, PutinarCertificate, PutinarSolution, SolverOptions,
    SolverReport,
};
use crate::error::argument;
use crate::momatrix::MomentMatrix;
use crate::polycore::{binomial, cheb, rationalize, to_f64, ChebKind, MPoly, Rational, UPoly};
use crate::Result;

const RATIONALIZE_DEN: u64 = 1_000_000;

/// Exact Chebyshev coefficients of `p`: `x^k = 2^{-k} Σ_i C(k, i) T_{|k-2i|}`.
fn chebyshev_coeffs(p: &UPoly, len: usize) -> Vec<Rational> {
    let mut t = vec![Rational::zero(); len];
    for (k, c) in p.coeffs().iter().enumerate() {
        let scale = c / Rational::from_integer(BigInt::from(1) << k);
        for i in 0..=k {
            let j = k.abs_diff(2 * i);
            t[j] += &scale * Rational::from_integer(binomial(k as u64, i as u64));
        }
    }
    t
}

/// `y_k = L(x^k)` from Chebyshev moments.
fn monomial_moments(tau: &DVector<f64>) -> Vec<f64> {
    (0..tau.len())
        .map(|k| {
            (0..=k)
                .map(|i| to_f64(&Rational::from_integer(binomial(k as u64, i as u64))) * tau[k.abs_diff(2 * i)])
                .sum::<f64>()
                / 2f64.powi(k as i32)
        })
        .collect()
}

/// Row `i` holds the monomial coefficients of `P_i` (Chebyshev polynomials of the given kind).
fn change_of_basis(kind: ChebKind, size: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(size, size);
    for i in 0..size {
        for (k, c) in cheb(kind, i).coeffs().iter().enumerate() {
            m[(i, k)] = to_f64(c);
        }
    }
    m
}

/// `L(T_i T_j) = (τ_{i+j} + τ_{|i-j|}) / 2` and
/// `L((1-x²) U_i U_j) = Σ_{m ≤ min(i,j)} (τ_{i+j-2m} - τ_{i+j-2m+2}) / 2`.
fn pencils(n: usize) -> Vec<Vec<(usize, DMatrix<f64>)>> {
    let m = 2 * n + 1;
    let mut t_block: Vec<DMatrix<f64>> = vec![DMatrix::zeros(n + 1, n + 1); m];
    for i in 0..=n {
        for j in 0..=n {
            t_block[i + j][(i, j)] += 0.5;
            t_block[i.abs_diff(j)][(i, j)] += 0.5;
        }
    }
    let mut u_block: Vec<DMatrix<f64>> = vec![DMatrix::zeros(n, n); m];
    for i in 0..n {
        for j in 0..n {
            for s in 0..=i.min(j) {
                let k = i + j - 2 * s;
                u_block[k][(i, j)] += 0.5;
                u_block[k + 2][(i, j)] -= 0.5;
            }
        }
    }
    let keep = |v: Vec<DMatrix<f64>>| {
        v.into_iter()
            .enumerate()
            .filter(|(_, e)| e.iter().any(|x| *x != 0.0))
            .collect::<Vec<_>>()
    };
    vec![keep(t_block), keep(u_block)]
}

/// `log |det P|` for the triangular change of basis: the sum of log leading coefficients.
fn log_det_basis(p: &DMatrix<f64>) -> f64 {
    p.diagonal().iter().map(|d| d.abs().ln()).sum()
}

fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<CertValue>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| CertValue::Float(m[(i, j)])).collect())
        .collect()
}

/// Max-entropy Putinar certificate of `target` (default `2n + 1`) on `[-1, 1]`.
pub fn solve_putinar(n: usize, target: Option<&UPoly>, opts: &SolverOptions) -> Result<PutinarSolution> {
    opts.validate()?;
    if n == 0 {
        return Err(argument("degree must be at least 1"));
    }
    let default_target = UPoly::constant(Rational::from_integer(BigInt::from(2 * n + 1)));
    let target = target.unwrap_or(&default_target);
    if target.degree().unwrap_or(0) > 2 * n {
        return Err(argument(format!(
            "target degree {} exceeds 2n = {}",
            target.degree().unwrap_or(0),
            2 * n
        )));
    }
    let m = 2 * n + 1;
    let t = chebyshev_coeffs(target, m);
    let problem = DualProblem {
        target: DVector::from_iterator(m, t.iter().map(to_f64)),
        barrier: Barrier::Pencils(pencils(n)),
    };
    let y0: Vec<f64> = match &opts.init {
        Some(y) if y.len() != m => {
            return Err(argument(format!("initial moment vector has length {}, expected {m}", y.len())))
        }
        Some(y) => y.clone(),
        None => (0..m)
            .map(|k| if k % 2 == 0 { 1.0 / (k + 1) as f64 } else { 0.0 })
            .collect(),
    };
    let p_all = change_of_basis(ChebKind::First, m);
    let tau0 = DVector::from_iterator(m, (0..m).map(|k| p_all.row(k).iter().zip(&y0).map(|(a, b)| a * b).sum()));
    if problem.barrier_value(&tau0).is_none() {
        return Err(argument("initial point is not strictly feasible"));
    }
    let out = minimize(&problem, tau0, opts.tol, opts.max_iter, n)?;
    let inv = problem.pencil_inverses(&out.z).expect("converged point is feasible");
    let p = change_of_basis(ChebKind::First, n + 1);
    let q = change_of_basis(ChebKind::Second, n);
    let gram_a = p.transpose() * &inv[0] * &p;
    let gram_b = q.transpose() * &inv[1] * &q;
    let objective = problem.barrier_value(&out.z).expect("feasible") + 2.0 * log_det_basis(&p) + 2.0 * log_det_basis(&q);
    Ok(PutinarSolution {
        certificate: PutinarCertificate {
            n,
            gram_a: matrix_rows(&gram_a),
            gram_b: matrix_rows(&gram_b),
            target: MPoly::from(target),
        },
        dual: DualFunctional {
            basis: (0..m as u32).map(|k| vec![k]).collect(),
            values: monomial_moments(&out.z),
        },
        report: SolverReport {
            iterations: out.iterations,
            residual: out.residual,
            objective,
            converged: true,
            history: out.history,
        },
    })
}

/// Rounds the dual moments to rationals (denominators ≤ 10^6), inverts the
/// moment and localizing matrices exactly and returns the certificate if it
/// reconstructs the target exactly.
pub fn rationalize_putinar(sol: &PutinarSolution) -> Result<Option<PutinarCertificate>> {
    let n = sol.certificate.n;
    let mut y = Vec::with_capacity(sol.dual.values.len());
    for v in &sol.dual.values {
        match rationalize(*v, RATIONALIZE_DEN) {
            Some(r) => y.push(r),
            None => return Ok(None),
        }
    }
    let g = MPoly::from(UPoly::from_integers(&[1, 0, -1]));
    let lookup = |e: &[u32]| {
        y.get(e[0] as usize)
            .cloned()
            .ok_or_else(|| argument("moment index out of range"))
    };
    let a = MomentMatrix::from_moments(1, n as u32, None, lookup)?;
    let b = MomentMatrix::from_moments(1, n as u32 - 1, Some(&g), lookup)?;
    let (Ok(a_inv), Ok(b_inv)) = (a.entries.inverse_pd(), b.entries.inverse_pd()) else {
        return Ok(None);
    };
    let rows = |m: &crate::momatrix::RationalMatrix| {
        m.to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(CertValue::Exact).collect())
            .collect()
    };
    let exact = Certificate::Putinar(PutinarCertificate {
        n,
        gram_a: rows(&a_inv),
        gram_b: rows(&b_inv),
        target: sol.certificate.target.clone(),
    });
    let ok = super::verify_certificate_exact(&exact, &sol.certificate.target)? == Some(true);
    let Certificate::Putinar(exact) = exact else { unreachable!() };
    Ok(ok.then_some(exact))
}
