use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{binomial, MPoly, Rational, UPoly};
use crate::{error::argument, Result};

/// Chebyshev polynomial family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChebKind {
    /// `T_n`, orthogonal for the arcsine measure.
    First,
    /// `U_n`, orthogonal for `(1 - x^2)` times the arcsine measure.
    Second,
}

/// `T_n` or `U_n` from the three-term recurrence `P_{k+1} = 2x P_k - P_{k-1}`.
pub fn cheb(kind: ChebKind, n: usize) -> UPoly {
    let two_x = UPoly::from_integers(&[0, 2]);
    let mut prev = UPoly::one();
    let mut cur = match kind {
        ChebKind::First => UPoly::x(),
        ChebKind::Second => two_x.clone(),
    };
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = &(&two_x * &cur) - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// Square of the orthonormalised Chebyshev polynomial.
///
/// `T̂_0² = 1`, `T̂_j² = 2 T_j²` for `j ≥ 1`, and `Û_j² = 2 U_j²`; the `√2`
/// never appears because only squares are exposed.
pub fn cheb_orthonormal_square(kind: ChebKind, j: usize) -> UPoly {
    let sq = cheb(kind, j).square();
    match (kind, j) {
        (ChebKind::First, 0) => sq,
        _ => sq.scale(&Rational::from_integer(2.into())),
    }
}

/// Bernstein polynomial `C(n, j) x^j (1 - x)^{n-j}` in the monomial basis.
pub fn bernstein(n: usize, j: usize) -> Result<UPoly> {
    if j > n {
        return Err(argument(format!("bernstein index {j} exceeds degree {n}")));
    }
    let c = Rational::from_integer(binomial(n as u64, j as u64));
    let one_minus_x = UPoly::from_integers(&[1, -1]);
    Ok(&UPoly::monomial(c, j) * &one_minus_x.pow((n - j) as u32))
}

/// The `j`-th defining affine form of the canonical simplex in `R^d`
/// (zero-based): `x_j` for `j < d`, and `1 - Σ x_i` for `j = d`.
pub fn simplex_generator(d: usize, j: usize) -> Result<MPoly> {
    if d == 0 || j > d {
        return Err(argument(format!("simplex generator {j} undefined for d = {d}")));
    }
    if j < d {
        return Ok(MPoly::var(d, j));
    }
    Ok((0..d).fold(MPoly::one(d), |acc, i| &acc - &MPoly::var(d, i)))
}

/// `g_1^{α_1} ··· g_{d+1}^{α_{d+1}}` expanded in the monomial basis of `R[x_1..x_d]`.
pub fn simplex_generator_power(d: usize, alpha: &[u32]) -> Result<MPoly> {
    if d == 0 {
        return Err(argument("simplex dimension must be positive"));
    }
    if alpha.len() != d + 1 {
        return Err(argument(format!(
            "exponent vector has length {}, expected d + 1 = {}",
            alpha.len(),
            d + 1
        )));
    }
    // x^α' for the coordinate part is a single monomial; only the last factor expands.
    let head = MPoly::monomial(d, alpha[..d].to_vec(), Rational::one());
    let tail = simplex_generator(d, d)?.pow(alpha[d]);
    Ok(&head * &tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{rat, Polynomial};

    #[test]
    fn chebyshev_examples() {
        assert_eq!(cheb(ChebKind::First, 0), UPoly::one());
        assert_eq!(cheb(ChebKind::First, 2), UPoly::from_integers(&[-1, 0, 2]));
        assert_eq!(cheb(ChebKind::Second, 1), UPoly::from_integers(&[0, 2]));
        assert_eq!(cheb(ChebKind::Second, 0), UPoly::one());
        assert_eq!(cheb(ChebKind::First, 3), UPoly::from_integers(&[0, -3, 0, 4]));
        assert_eq!(cheb(ChebKind::Second, 3), UPoly::from_integers(&[0, -4, 0, 8]));
    }

    #[test]
    fn chebyshev_matches_cosine_definition() {
        // T_n(cos θ) = cos nθ, U_n(cos θ) sin θ = sin (n+1)θ.
        for n in 0..20 {
            for &theta in &[0.3_f64, 1.1, 2.5] {
                let t = cheb(ChebKind::First, n).eval_f64(theta.cos());
                let u = cheb(ChebKind::Second, n).eval_f64(theta.cos());
                assert!((t - (n as f64 * theta).cos()).abs() < 1e-9);
                assert!((u * theta.sin() - ((n + 1) as f64 * theta).sin()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn orthonormal_square_examples() {
        assert_eq!(cheb_orthonormal_square(ChebKind::First, 0), UPoly::one());
        assert_eq!(
            cheb_orthonormal_square(ChebKind::First, 1),
            UPoly::from_integers(&[0, 0, 2])
        );
        assert_eq!(
            cheb_orthonormal_square(ChebKind::Second, 0),
            UPoly::from_integers(&[2])
        );
    }

    #[test]
    fn bernstein_examples() {
        assert_eq!(bernstein(2, 1).unwrap(), UPoly::from_integers(&[0, 2, -2]));
        assert_eq!(bernstein(1, 0).unwrap(), UPoly::from_integers(&[1, -1]));
        let total = (0..=3).fold(UPoly::zero(), |acc, j| &acc + &bernstein(3, j).unwrap());
        assert_eq!(total, UPoly::one());
        assert!(bernstein(2, 3).is_err());
    }

    #[test]
    fn simplex_generator_examples() {
        assert_eq!(simplex_generator_power(2, &[0, 0, 0]).unwrap(), MPoly::one(2));
        let p = simplex_generator_power(2, &[1, 0, 1]).unwrap();
        assert_eq!(p.to_string(), "x - x^2 - x*y");
        let q = simplex_generator_power(1, &[1, 1]).unwrap();
        assert_eq!(q.to_upoly().unwrap(), UPoly::from_integers(&[0, 1, -1]));
        assert!(simplex_generator_power(2, &[1, 1]).is_err());
        assert!(simplex_generator_power(0, &[1]).is_err());
        // The generators sum to one.
        let sum = (0..=3).fold(MPoly::zero(3), |acc, j| &acc + &simplex_generator(3, j).unwrap());
        assert_eq!(sum.constant_value(), Some(rat(1, 1)));
    }
}
