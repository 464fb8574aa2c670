use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Polynomial, Rational, UPoly};
use crate::{error::argument, Result};

/// Sparse multivariate polynomial over the rationals in a fixed number of variables.
///
/// No zero coefficient is ever stored, and every exponent vector has length
/// [`MPoly::dimension`]. Binary operators panic on mismatched dimensions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MPoly {
    dim: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

/// Graded lexicographic order: total degree first, then the larger power of
/// the earlier variable first (`1, x, y, x^2, xy, y^2, ...`).
pub fn graded_lex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| b.cmp(a))
}

/// All exponent vectors of length `dim` and total degree at most `degree`, in graded lex order.
pub fn graded_lex_basis(dim: usize, degree: u32) -> Vec<Vec<u32>> {
    fn fill(dim: usize, remaining: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == dim {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=remaining).rev() {
            prefix.push(e);
            fill(dim, remaining - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if dim == 0 {
        out.push(Vec::new());
        return out;
    }
    for total in 0..=degree {
        fill(dim, total, &mut Vec::with_capacity(dim), &mut out);
    }
    out
}

impl MPoly {
    /// The zero polynomial in `dim` variables.
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        Self::monomial(dim, vec![0; dim], c)
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Rational::one())
    }

    /// The coordinate `x_i` (zero-based).
    pub fn var(dim: usize, i: usize) -> Self {
        assert!(i < dim, "variable index {i} out of range for dimension {dim}");
        let mut e = vec![0; dim];
        e[i] = 1;
        Self::monomial(dim, e, Rational::one())
    }

    /// `c · x^exponent`; panics if the exponent length differs from `dim`.
    pub fn monomial(dim: usize, exponent: Vec<u32>, c: Rational) -> Self {
        assert_eq!(exponent.len(), dim, "exponent length must equal dimension");
        let mut p = Self::zero(dim);
        p.add_term(exponent, c);
        p
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Self::zero(dim);
        for (e, c) in terms {
            if e.len() != dim {
                return Err(argument(format!(
                    "exponent {e:?} has length {}, expected {dim}",
                    e.len()
                )));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, exponent: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exponent) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in storage (plain lexicographic) order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    /// Terms sorted in graded lex order.
    pub fn terms_graded(&self) -> Vec<(&[u32], &Rational)> {
        let mut v: Vec<_> = self.terms().collect();
        v.sort_by(|a, b| graded_lex_cmp(a.0, b.0));
        v
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exponent: &[u32]) -> Rational {
        self.terms
            .get(exponent)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        Self {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.dim), |acc, _| &acc * self)
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        debug_assert_eq!(point.len(), self.dim);
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(point)
                    .fold(super::to_f64(c), |acc, (&k, &x)| acc * x.powi(k as i32))
            })
            .sum()
    }

    /// Univariate view, available when `dimension() == 1`.
    pub fn to_upoly(&self) -> Option<UPoly> {
        if self.dim != 1 {
            return None;
        }
        let deg = self.total_degree().unwrap_or(0) as usize;
        let mut coeffs = vec![Rational::zero(); deg + 1];
        for (e, c) in &self.terms {
            coeffs[e[0] as usize] = c.clone();
        }
        Some(UPoly::new(coeffs))
    }

    fn check_dim(&self, other: &Self) {
        assert_eq!(
            self.dim, other.dim,
            "polynomial dimensions differ ({} vs {})",
            self.dim, other.dim
        );
    }
}

impl Polynomial for MPoly {
    fn dimension(&self) -> usize {
        self.dim
    }

    fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.dim {
            return Err(argument(format!(
                "polynomial in {} variables evaluated at a point of dimension {}",
                self.dim,
                point.len()
            )));
        }
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (&k, x) in e.iter().zip(point) {
                if k > 0 {
                    term *= num_traits::pow(x.clone(), k as usize);
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    fn to_mpoly(&self) -> MPoly {
        self.clone()
    }

    fn nonconstant_terms(&self) -> usize {
        self.terms
            .keys()
            .filter(|e| e.iter().any(|&k| k > 0))
            .count()
    }

    fn constant_term(&self) -> Rational {
        self.coeff(&vec![0; self.dim])
    }
}

impl From<&UPoly> for MPoly {
    fn from(p: &UPoly) -> Self {
        let mut out = MPoly::zero(1);
        for (k, c) in p.coeffs().iter().enumerate() {
            out.add_term(vec![k as u32], c.clone());
        }
        out
    }
}

impl From<UPoly> for MPoly {
    fn from(p: UPoly) -> Self {
        MPoly::from(&p)
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        self.check_dim(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self.check_dim(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &MPoly) -> MPoly {
        self.check_dim(rhs);
        let mut out = MPoly::zero(self.dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.scale(&-Rational::one())
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $f:ident),*) => {$(
        impl $tr for MPoly {
            type Output = MPoly;
            fn $f(self, rhs: MPoly) -> MPoly { (&self).$f(&rhs) }
        }
        impl $tr<&MPoly> for MPoly {
            type Output = MPoly;
            fn $f(self, rhs: &MPoly) -> MPoly { (&self).$f(rhs) }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exponent: Vec<u32>,
    #[serde(with = "super::serde_rational")]
    coeff: Rational,
}

#[derive(Serialize, Deserialize)]
struct MPolyRepr {
    dim: usize,
    terms: Vec<TermRepr>,
}

/// Serialized as `{"dim": d, "terms": [{"exponent": [..], "coeff": "p/q"}]}` in graded-lex order.
impl Serialize for MPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MPolyRepr {
            dim: self.dim,
            terms: self
                .terms_graded()
                .into_iter()
                .map(|(e, c)| TermRepr { exponent: e.to_vec(), coeff: c.clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = MPolyRepr::deserialize(d)?;
        MPoly::from_terms(repr.dim, repr.terms.into_iter().map(|t| (t.exponent, t.coeff)))
            .map_err(serde::de::Error::custom)
    }
}

fn var_name(dim: usize, i: usize) -> String {
    match (dim, i) {
        (1..=3, _) => ["x", "y", "z"][i].to_string(),
        _ => format!("x{}", i + 1),
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms_graded().into_iter().enumerate() {
            match (idx, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            let factors: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| match k {
                    1 => var_name(self.dim, i),
                    _ => format!("{}^{k}", var_name(self.dim, i)),
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{a}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}
