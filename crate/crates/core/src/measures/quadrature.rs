//! Floating-point quadrature oracles, independent of the closed-form moments.

use std::f64::consts::PI;

use super::{MeasureId, Normalization};
use crate::error::argument;
use crate::polycore::{MPoly, Polynomial};
use crate::Result;

/// Gauss–Chebyshev nodes `cos((2k-1)π / 2N)`, each with weight `1/N` for the
/// arcsine probability measure.
pub fn gauss_chebyshev(nodes: usize) -> Vec<f64> {
    (1..=nodes)
        .map(|k| ((2 * k - 1) as f64 * PI / (2 * nodes) as f64).cos())
        .collect()
}

/// Gauss–Legendre rule on `[0, 1]`, computed by Newton iteration on `P_N`.
pub fn gauss_legendre_01(nodes: usize) -> (Vec<f64>, Vec<f64>) {
    let n = nodes;
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for P_n(z) and its derivative.
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = 0.5 * (1.0 - z);
        w[i] = 1.0 / ((1.0 - z * z) * dp * dp);
    }
    (x, w)
}

/// Floating-point estimate of `∫ p dμ`.
///
/// Interval measures use Gauss–Chebyshev (arcsine) or Gauss–Legendre
/// (Lebesgue) rules with `nodes` points, exact to rounding when
/// `2·nodes > deg p` (plus 2 for the `1 - x²` weight). Simplex measures use a
/// collapsed tensor-product rule with `nodes` points per axis: Duffy
/// coordinates for the uniform measure; for the equilibrium measure,
/// `x = s²`, `y = (1 - s²)(1 + t)/2`, which turns the singular density into
/// a Legendre rule in `s` times a Chebyshev rule in `t`.
pub fn quadrature_oracle<P: Polynomial + ?Sized>(
    measure: MeasureId,
    p: &P,
    nodes: usize,
) -> Result<f64> {
    if nodes == 0 {
        return Err(argument("quadrature needs at least one node"));
    }
    measure.validate()?;
    if p.dimension() != measure.dimension() {
        return Err(argument(format!(
            "polynomial dimension {} does not match measure dimension {}",
            p.dimension(),
            measure.dimension()
        )));
    }
    let p = p.to_mpoly();
    let value = match measure {
        MeasureId::Arcsine => {
            gauss_chebyshev(nodes).iter().map(|&x| p.eval_f64(&[x])).sum::<f64>() / nodes as f64
        }
        MeasureId::ArcsineG => {
            gauss_chebyshev(nodes)
                .iter()
                .map(|&x| (1.0 - x * x) * p.eval_f64(&[x]))
                .sum::<f64>()
                / nodes as f64
        }
        MeasureId::Lebesgue01 => {
            let (x, w) = gauss_legendre_01(nodes);
            x.iter().zip(&w).map(|(&x, &w)| w * p.eval_f64(&[x])).sum()
        }
        MeasureId::SimplexUniform(d) => simplex_uniform(&p, d, nodes),
        MeasureId::SimplexEquilibrium(norm) => {
            let mass2 = simplex_equilibrium(&p, nodes);
            match norm {
                Normalization::PaperPi => mass2,
                Normalization::Probability => mass2 / 2.0,
            }
        }
    };
    Ok(value)
}

/// `d! ∫_{[0,1]^d} p(x(u)) Π (1 - u_i)^{d-1-i} du` with
/// `x_k = u_k Π_{i<k} (1 - u_i)`.
fn simplex_uniform(p: &MPoly, d: usize, nodes: usize) -> f64 {
    let (u, w) = gauss_legendre_01(nodes);
    let mut idx = vec![0usize; d];
    let mut point = vec![0.0; d];
    let mut total = 0.0;
    loop {
        let mut scale = 1.0;
        let mut weight = 1.0;
        for (k, &i) in idx.iter().enumerate() {
            point[k] = scale * u[i];
            weight *= w[i] * (1.0 - u[i]).powi((d - 1 - k) as i32);
            scale *= 1.0 - u[i];
        }
        total += weight * p.eval_f64(&point);
        // Odometer increment over the tensor grid.
        let mut k = 0;
        loop {
            if k == d {
                let fact: f64 = (1..=d).map(|i| i as f64).product();
                return total * fact;
            }
            idx[k] += 1;
            if idx[k] < nodes {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// `∫ p dx dy / (π √(x y (1 - x - y)))`, total mass 2.
fn simplex_equilibrium(p: &MPoly, nodes: usize) -> f64 {
    let (s, ws) = gauss_legendre_01(nodes);
    let t = gauss_chebyshev(nodes);
    let mut total = 0.0;
    for (&s, &ws) in s.iter().zip(&ws) {
        let x = s * s;
        let inner: f64 = t
            .iter()
            .map(|&t| p.eval_f64(&[x, (1.0 - x) * 0.5 * (1.0 + t)]))
            .sum::<f64>()
            / nodes as f64;
        total += ws * inner;
    }
    2.0 * total
}
