//! Handelman max-entropy program on the canonical simplex, solved in the
//! degree-`n` Bernstein coordinates `ν_γ = L(B_γ)`, `B_γ = (n; γ) g^γ`, `|γ| = n`.

use nalgebra::DVector;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::newton::{minimize, Barrier, DualProblem};
use super::{
    CertValue, Certificate, DualFunctional, HandelmanCertificate, HandelmanSolution,
    SolverOptions, SolverReport, Weight,
};
use crate::error::argument;
use crate::measures::{MeasureId, MomentFunctional};
use crate::polycore::{
    binomial, graded_lex_basis, multinomial, rationalize, simplex_generator_power, to_f64, MPoly,
    Rational, UPoly,
};
use crate::Result;

const RATIONALIZE_DEN: u64 = 1_000_000;

struct Setup {
    d: usize,
    n: usize,
    /// Generator exponents `α ∈ N^{d+1}`, `|α| ≤ n`, graded-lex.
    gens: Vec<Vec<u32>>,
    /// Exact monomial expansion of each `g^α`.
    expansions: Vec<MPoly>,
    /// Bernstein indices `|γ| = n`.
    bern: Vec<Vec<u32>>,
    /// Monomials `x^β`, `|β| ≤ n`, graded-lex.
    monomials: Vec<Vec<u32>>,
}

impl Setup {
    fn new(d: usize, n: usize) -> Result<Self> {
        if d == 0 || n == 0 {
            return Err(argument("dimension and degree must be at least 1"));
        }
        let gens = graded_lex_basis(d + 1, n as u32);
        let expansions = gens
            .iter()
            .map(|a| simplex_generator_power(d, a))
            .collect::<Result<Vec<_>>>()?;
        let bern = gens.iter().filter(|a| a.iter().sum::<u32>() == n as u32).cloned().collect();
        Ok(Self {
            d,
            n,
            gens,
            expansions,
            bern,
            monomials: graded_lex_basis(d, n as u32),
        })
    }

    /// Coordinates of `g^α` in the Bernstein basis: `g^α (Σ g_i)^{n-|α|} = Σ_γ e_γ B_γ`.
    fn elevate(&self, alpha: &[u32]) -> Vec<Rational> {
        self.bern
            .iter()
            .map(|g| {
                if g.iter().zip(alpha).all(|(a, b)| a >= b) {
                    let diff: Vec<u32> = g.iter().zip(alpha).map(|(a, b)| a - b).collect();
                    Rational::new(multinomial(&diff), multinomial(g))
                } else {
                    Rational::zero()
                }
            })
            .collect()
    }

    fn monomial_elevation(&self, beta: &[u32]) -> Vec<Rational> {
        let mut alpha = beta.to_vec();
        alpha.push(0);
        self.elevate(&alpha)
    }

    /// Exact Bernstein coordinates of `p`.
    fn bernstein_coords(&self, p: &MPoly) -> Vec<Rational> {
        let mut b = vec![Rational::zero(); self.bern.len()];
        for (beta, c) in p.terms() {
            for (bi, e) in b.iter_mut().zip(self.monomial_elevation(beta)) {
                *bi += c * e;
            }
        }
        b
    }

    fn problem(&self, target: &MPoly) -> DualProblem {
        let rows = self
            .gens
            .iter()
            .map(|a| DVector::from_iterator(self.bern.len(), self.elevate(a).iter().map(to_f64)))
            .collect();
        let t = self.bernstein_coords(target);
        DualProblem {
            target: DVector::from_iterator(t.len(), t.iter().map(to_f64)),
            barrier: Barrier::Linear(rows),
        }
    }

    /// `ν_γ = (n; γ) ⟨λ, coefficients of g^γ⟩`.
    fn coords_from_moments(&self, lambda: &[f64]) -> Result<DVector<f64>> {
        if lambda.len() != self.monomials.len() {
            return Err(argument(format!(
                "initial moment vector has length {}, expected {}",
                lambda.len(),
                self.monomials.len()
            )));
        }
        let mu = self.bern.iter().map(|g| {
            let idx = self.gens.iter().position(|a| a == g).expect("Bernstein index is a generator");
            self.expansions[idx]
                .terms()
                .map(|(e, c)| {
                    let k = self.monomials.iter().position(|m| m == e).expect("monomial in basis");
                    to_f64(c) * lambda[k]
                })
                .sum::<f64>()
                * big_f64(&multinomial(g))
        });
        Ok(DVector::from_iterator(self.bern.len(), mu))
    }

    fn to_moments(&self, mu: &DVector<f64>) -> Vec<f64> {
        self.monomials
            .iter()
            .map(|b| {
                self.monomial_elevation(b)
                    .iter()
                    .zip(mu.iter())
                    .map(|(e, m)| to_f64(e) * m)
                    .sum()
            })
            .collect()
    }
}

fn big_f64(b: &BigInt) -> f64 {
    to_f64(&Rational::from_integer(b.clone()))
}

fn solve(setup: &Setup, target: &MPoly, opts: &SolverOptions) -> Result<HandelmanSolution> {
    opts.validate()?;
    if target.total_degree().unwrap_or(0) > setup.n as u32 {
        return Err(argument(format!(
            "target degree {} exceeds certificate degree {}",
            target.total_degree().unwrap_or(0),
            setup.n
        )));
    }
    let problem = setup.problem(target);
    let z0 = match &opts.init {
        Some(lambda) => setup.coords_from_moments(lambda)?,
        None => {
            // Dirac measure at the barycenter.
            let v = (1.0 / (setup.d + 1) as f64).powi(setup.n as i32);
            DVector::from_iterator(setup.bern.len(), setup.bern.iter().map(|g| v * big_f64(&multinomial(g))))
        }
    };
    if problem.barrier_value(&z0).is_none() {
        return Err(argument("initial point is not strictly feasible"));
    }
    let out = minimize(&problem, z0, opts.tol, opts.max_iter, setup.n)?;
    let multipliers = problem.pencil_inverses(&out.z).expect("converged point is feasible");
    let weights = setup
        .gens
        .iter()
        .zip(&multipliers)
        .map(|(a, c)| Weight {
            alpha: a.clone(),
            value: CertValue::Float(c[(0, 0)]),
        })
        .collect();
    let objective = problem.barrier_value(&out.z).expect("feasible");
    Ok(HandelmanSolution {
        certificate: HandelmanCertificate {
            d: setup.d,
            n: setup.n,
            weights,
            target: target.clone(),
        },
        dual: DualFunctional {
            basis: setup.monomials.clone(),
            values: setup.to_moments(&out.z),
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

/// Max-entropy Handelman certificate of `p` on `[0, 1]` over `x^i (1-x)^j`, `i + j ≤ n`.
pub fn solve_handelman(p: &UPoly, n: usize, opts: &SolverOptions) -> Result<HandelmanSolution> {
    if p.degree().unwrap_or(0) > n {
        return Err(argument(format!(
            "target degree {} exceeds certificate degree {n}",
            p.degree().unwrap_or(0)
        )));
    }
    solve(&Setup::new(1, n)?, &MPoly::from(p), opts)
}

/// Max-entropy certificate of the constant `C(d+1+n, n)` over the products of
/// simplex generators of degree at most `n`.
pub fn solve_simplex(d: usize, n: usize, opts: &SolverOptions) -> Result<HandelmanSolution> {
    let setup = Setup::new(d, n)?;
    let target = MPoly::constant(d, Rational::from_integer(binomial((d + 1 + n) as u64, n as u64)));
    solve(&setup, &target, opts)
}

/// Weights `1 / φ*(g^α)` for the uniform probability measure on the `d`-simplex.
pub fn uniform_candidate(d: usize, n: usize) -> Result<Vec<(Vec<u32>, Rational)>> {
    let setup = Setup::new(d, n)?;
    let uniform = MomentFunctional::new(MeasureId::SimplexUniform(d))?;
    setup
        .gens
        .iter()
        .zip(&setup.expansions)
        .map(|(a, g)| Ok((a.clone(), Rational::from_integer(1.into()) / uniform.poly_moment(g)?)))
        .collect()
}

/// Largest relative deviation between solver weights and [`uniform_candidate`].
pub fn uniform_candidate_deviation(sol: &HandelmanSolution) -> Result<f64> {
    let cert = &sol.certificate;
    let candidate = uniform_candidate(cert.d, cert.n)?;
    let mut worst: f64 = 0.0;
    for (alpha, c) in candidate {
        let w = cert
            .weight(&alpha)
            .ok_or_else(|| argument(format!("certificate lacks weight {alpha:?}")))?;
        let c = to_f64(&c);
        worst = worst.max((w.to_f64() - c).abs() / c.abs());
    }
    Ok(worst)
}

/// Rounds the dual moments to rationals (denominators ≤ 10^6), rebuilds the
/// weights `1 / ⟨λ, g^α⟩` exactly and returns the certificate if it
/// reconstructs the target exactly.
pub fn rationalize_handelman(sol: &HandelmanSolution) -> Result<Option<HandelmanCertificate>> {
    let cert = &sol.certificate;
    let setup = Setup::new(cert.d, cert.n)?;
    let mut lambda = Vec::with_capacity(sol.dual.values.len());
    for v in &sol.dual.values {
        match rationalize(*v, RATIONALIZE_DEN) {
            Some(r) => lambda.push(r),
            None => return Ok(None),
        }
    }
    let mut weights = Vec::with_capacity(setup.gens.len());
    for (alpha, g) in setup.gens.iter().zip(&setup.expansions) {
        let mut pairing = Rational::zero();
        for (e, c) in g.terms() {
            let k = setup.monomials.iter().position(|m| m == e).expect("monomial in basis");
            pairing += c * &lambda[k];
        }
        if !pairing.is_positive() {
            return Ok(None);
        }
        weights.push(Weight {
            alpha: alpha.clone(),
            value: CertValue::Exact(Rational::from_integer(1.into()) / pairing),
        });
    }
    let exact = HandelmanCertificate {
        d: cert.d,
        n: cert.n,
        weights,
        target: cert.target.clone(),
    };
    let wrapped = Certificate::Handelman(exact);
    let ok = super::verify_certificate_exact(&wrapped, &cert.target)? == Some(true);
    let Certificate::Handelman(exact) = wrapped else { unreachable!() };
    Ok(ok.then_some(exact))
}

#[cfg(test)]
pub(super) fn bernstein_coords_for_test(d: usize, n: usize, p: &MPoly) -> Vec<Rational> {
    Setup::new(d, n).unwrap().bernstein_coords(p)
}

