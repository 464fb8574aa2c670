use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::polycore::Rational;
use crate::{Error, Result};

/// Dense row-major matrix of rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Builds a matrix from equal-length rows; panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |i, j| {
            crate::polycore::to_f64(&self[(i, j)])
        })
    }

    /// Exact determinant by fraction-free elimination (with row pivoting).
    pub fn determinant(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Rational::one();
        }
        let (mut a, scale) = self.clear_denominators();
        let mut prev = BigInt::one();
        let mut sign = 1;
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return Rational::zero();
            };
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[k][k] * &a[i][j] - &a[i][k] * &a[k][j]) / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        let det = Rational::from_integer(prev * sign);
        // det(L·M) = L^n det(M)
        det / num_traits::pow(scale, n)
    }

    /// Exact inverse of a symmetric positive definite matrix.
    ///
    /// The matrix is scaled to integers and reduced by fraction-free
    /// Gauss–Jordan elimination (Bareiss) on `[A | I]`, without pivoting: the
    /// `k`-th pivot is the `k`-th leading principal minor, so a non-positive
    /// pivot certifies that the matrix is not positive definite (Sylvester).
    /// Every division is checked for exactness.
    pub fn inverse_pd(&self) -> Result<RationalMatrix> {
        if self.rows != self.cols {
            return Err(crate::error::argument("inverse of a non-square matrix"));
        }
        let n = self.rows;
        let (a, scale) = self.clear_denominators();
        let width = 2 * n;
        let mut aug: Vec<Vec<BigInt>> = a
            .into_iter()
            .enumerate()
            .map(|(i, mut row)| {
                row.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
                row
            })
            .collect();
        let mut prev = BigInt::one();
        for k in 0..n {
            let pivot = aug[k][k].clone();
            if !pivot.is_positive() {
                return Err(Error::NotPositiveDefinite {
                    order: k + 1,
                    sign: if pivot.is_zero() { "zero" } else { "negative" },
                });
            }
            let pivot_row = aug[k].clone();
            for (i, row) in aug.iter_mut().enumerate() {
                if i == k {
                    continue;
                }
                let factor = row[k].clone();
                for j in 0..width {
                    if j == k {
                        continue;
                    }
                    let num = &pivot * &row[j] - &factor * &pivot_row[j];
                    let (q, r) = num.div_rem(&prev);
                    if !r.is_zero() {
                        return Err(Error::Numeric(format!(
                            "inexact division in fraction-free elimination at step {k}"
                        )));
                    }
                    row[j] = q;
                }
                row[k] = BigInt::zero();
            }
            prev = pivot;
        }
        // Left block is det·I, right block is adj(A) = det·A⁻¹; M⁻¹ = L·A⁻¹.
        let det = prev;
        let mut inv = RationalMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = Rational::new(&aug[i][n + j] * &scale, det.clone());
            }
        }
        Ok(inv)
    }

    /// Integer matrix `L·M` with `L` the lcm of all denominators.
    fn clear_denominators(&self) -> (Vec<Vec<BigInt>>, BigInt) {
        let scale = self
            .data
            .iter()
            .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let a = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|r| r.numer() * (&scale / r.denom()))
                    .collect()
            })
            .collect();
        (a, scale)
    }
}

impl Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &RationalMatrix {
    type Output = RationalMatrix;
    fn mul(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        RationalMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(Rational::zero(), |acc, k| acc + &self[(i, k)] * &rhs[(k, j)])
        })
    }
}

/// JSON form: array of rows of `"p/q"` strings.
impl Serialize for RationalMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(ToString::to_string).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        let width = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != width) {
            return Err(D::Error::custom("ragged matrix rows"));
        }
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| crate::polycore::parse_rational(s).map_err(D::Error::custom))
                    .collect::<std::result::Result<Vec<_>, _>>()
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(RationalMatrix::from_rows(rows))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::rat;
    use proptest::prelude::*;

    fn m(rows: &[&[(i64, i64)]]) -> RationalMatrix {
        RationalMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&(p, q)| rat(p, q)).collect())
                .collect(),
        )
    }

    #[test]
    fn diagonal_inverses() {
        let a = m(&[&[(1, 1), (0, 1)], &[(0, 1), (1, 2)]]);
        assert_eq!(a.inverse_pd().unwrap(), m(&[&[(1, 1), (0, 1)], &[(0, 1), (2, 1)]]));
        assert_eq!(m(&[&[(1, 2)]]).inverse_pd().unwrap(), m(&[&[(2, 1)]]));
        assert_eq!(RationalMatrix::zeros(0, 0).inverse_pd().unwrap().rows(), 0);
    }

    #[test]
    fn simplex_equilibrium_first_moment_matrix() {
        // (2/15)·[[15,5,5],[5,3,1],[5,1,3]]
        let core = m(&[
            &[(15, 1), (5, 1), (5, 1)],
            &[(5, 1), (3, 1), (1, 1)],
            &[(5, 1), (1, 1), (3, 1)],
        ]);
        assert_eq!(core.determinant(), rat(20, 1));
        let inv = core.scale(&rat(2, 15)).inverse_pd().unwrap();
        let expect = m(&[
            &[(8, 1), (-10, 1), (-10, 1)],
            &[(-10, 1), (20, 1), (10, 1)],
            &[(-10, 1), (10, 1), (20, 1)],
        ])
        .scale(&rat(3, 8));
        assert_eq!(inv, expect);
    }

    #[test]
    fn indefinite_and_singular_are_rejected() {
        let singular = m(&[&[(1, 1), (1, 1)], &[(1, 1), (1, 1)]]);
        match singular.inverse_pd() {
            Err(Error::NotPositiveDefinite { order: 2, sign: "zero" }) => {}
            other => panic!("unexpected {other:?}"),
        }
        let neg = m(&[&[(-1, 1)]]);
        assert!(matches!(
            neg.inverse_pd(),
            Err(Error::NotPositiveDefinite { order: 1, sign: "negative" })
        ));
        assert_eq!(singular.determinant(), rat(0, 1));
    }

    #[test]
    fn hilbert_inverse_is_exact() {
        for n in 1..=10 {
            let h = RationalMatrix::from_fn(n, n, |i, j| rat(1, (i + j + 1) as i64));
            let inv = h.inverse_pd().unwrap();
            assert_eq!(&h * &inv, RationalMatrix::identity(n));
            assert!(inv.is_symmetric());
        }
    }

    #[test]
    fn serde_round_trip() {
        let a = m(&[&[(1, 3), (-2, 1)], &[(-2, 1), (5, 7)]]);
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"[["1/3","-2"],["-2","5/7"]]"#);
        let back: RationalMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
    }

    proptest! {
        // Gram matrices B·Bᵀ + I are positive definite.
        #[test]
        fn gram_inverse_is_exact(entries in proptest::collection::vec((-9i64..=9, 1i64..=5), 16)) {
            let b = RationalMatrix::from_fn(4, 4, |i, j| {
                let (p, q) = entries[4 * i + j];
                rat(p, q)
            });
            let bt = RationalMatrix::from_fn(4, 4, |i, j| b[(j, i)].clone());
            let mut g = &b * &bt;
            for i in 0..4 {
                g[(i, i)] += Rational::one();
            }
            let inv = g.inverse_pd().unwrap();
            prop_assert_eq!(&g * &inv, RationalMatrix::identity(4));
            prop_assert_eq!(g.determinant() * inv.determinant(), Rational::one());
        }
    }
}
