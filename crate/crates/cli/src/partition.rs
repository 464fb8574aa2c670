//! Partitions of unity on `[0, 1]`, `[-1, 1]` and the simplex, with
//! optional point evaluations.

use equicert::identities::{s, s_hat};
use equicert::measures::{beta_integral, MeasureId, MomentFunctional};
use equicert::polycore::{
    cheb_orthonormal_square, graded_lex_basis, serde_rational, simplex_generator_power, to_f64,
    ChebKind,
};
use equicert::{MPoly, Polynomial, Rational, UPoly};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Interval01,
    Interval11,
    Simplex,
}

/// One member `weight · generator` of the partition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Member {
    pub label: String,
    #[serde(with = "serde_rational")]
    pub weight: Rational,
    pub polynomial: MPoly,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub point: Vec<f64>,
    pub values: Vec<f64>,
    pub sum: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub domain: Domain,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    pub members: Vec<Member>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub evaluations: Vec<Evaluation>,
}

fn one_over(r: &Rational) -> Rational {
    Rational::from_integer(1.into()) / r
}

fn member(label: String, weight: Rational, generator: &MPoly) -> Member {
    Member {
        label,
        polynomial: generator.scale(&weight),
        weight,
    }
}

fn interval01(n: usize) -> Vec<Member> {
    let total = s(n);
    let x = UPoly::x();
    let one_minus_x = UPoly::from_integers(&[1, -1]);
    let mut out = Vec::new();
    for k in 0..=n {
        for i in (0..=k).rev() {
            let j = k - i;
            let g = MPoly::from(&x.pow(i as u32) * &one_minus_x.pow(j as u32));
            let w = one_over(&(beta_integral(i as u32, j as u32) * &total));
            out.push(member(format!("x^{i}(1-x)^{j}"), w, &g));
        }
    }
    out
}

fn interval11(n: usize) -> Vec<Member> {
    let w = one_over(&Rational::from_integer((2 * n + 1).into()));
    let g = UPoly::from_integers(&[1, 0, -1]);
    let mut out: Vec<Member> = (0..=n)
        .map(|j| {
            let t = MPoly::from(cheb_orthonormal_square(ChebKind::First, j));
            member(format!("T{j}^2"), w.clone(), &t)
        })
        .collect();
    out.extend((0..n).map(|j| {
        let u = MPoly::from(&g * &cheb_orthonormal_square(ChebKind::Second, j));
        member(format!("(1-x^2)U{j}^2"), w.clone(), &u)
    }));
    out
}

/// Members `g^α / (ŝ(n) φ*(g^α))`; their exact sum is checked to be 1 since
/// the closed-form weights are only proven for `n ≤ 2`.
fn simplex(d: usize, n: usize) -> Result<Vec<Member>, String> {
    let uniform = MomentFunctional::new(MeasureId::SimplexUniform(d)).map_err(|e| e.to_string())?;
    let total = s_hat(d, n);
    let members = graded_lex_basis(d + 1, n as u32)
        .into_iter()
        .map(|alpha| {
            let g = simplex_generator_power(d, &alpha).map_err(|e| e.to_string())?;
            let mass = uniform.poly_moment(&g).map_err(|e| e.to_string())?;
            Ok(member(format!("g^{alpha:?}"), one_over(&(mass * &total)), &g))
        })
        .collect::<Result<Vec<_>, String>>()?;
    let sum = members.iter().fold(MPoly::zero(d), |acc, m| &acc + &m.polynomial);
    if sum != MPoly::one(d) {
        return Err(format!("closed-form weights do not sum to 1 at d = {d}, n = {n}"));
    }
    Ok(members)
}

fn inside(domain: Domain, point: &[f64]) -> bool {
    let ok = |v: f64| v.is_finite();
    match domain {
        Domain::Interval01 => point.iter().all(|&v| ok(v) && (0.0..=1.0).contains(&v)),
        Domain::Interval11 => point.iter().all(|&v| ok(v) && (-1.0..=1.0).contains(&v)),
        Domain::Simplex => {
            point.iter().all(|&v| ok(v) && v >= 0.0) && point.iter().sum::<f64>() <= 1.0 + 1e-12
        }
    }
}

/// Builds the partition members and evaluates them at `points`.
///
/// Values are computed exactly at the (binary) point coordinates and rounded once.
///
pub fn emit_partition(
    domain: Domain,
    n: usize,
    d: Option<usize>,
    points: &[Vec<f64>],
) -> Result<PartitionReport, String> {
    if n == 0 {
        return Err("degree must be at least 1".into());
    }
    let dim = match domain {
        Domain::Simplex => d.ok_or("--d is required for the simplex domain")?,
        _ if d.is_some() => return Err("--d only applies to the simplex domain".into()),
        _ => 1,
    };
    if dim == 0 {
        return Err("simplex dimension must be at least 1".into());
    }
    let members = match domain {
        Domain::Interval01 => interval01(n),
        Domain::Interval11 => interval11(n),
        Domain::Simplex => simplex(dim, n)?,
    };
    let mut evaluations = Vec::with_capacity(points.len());
    for p in points {
        if p.len() != dim {
            return Err(format!("point {p:?} has {} coordinates, expected {dim}", p.len()));
        }
        if !inside(domain, p) {
            return Err(format!("point {p:?} lies outside the domain"));
        }
        let exact: Vec<Rational> = p
            .iter()
            .map(|&v| Rational::from_float(v).expect("finite coordinates"))
            .collect();
        let values = members
            .iter()
            .map(|m| m.polynomial.eval(&exact).map(|v| to_f64(&v)))
            .collect::<Result<Vec<f64>, _>>()
            .map_err(|e| e.to_string())?;
        let sum = values.iter().sum();
        evaluations.push(Evaluation {
            point: p.clone(),
            values,
            sum,
        });
    }
    Ok(PartitionReport {
        domain,
        n,
        d: (domain == Domain::Simplex).then_some(dim),
        members,
        evaluations,
    })
}

/// Parses `"0.25;0.5"` (interval) or `"0.2,0.3;0.1,0.1"` (simplex).
pub fn parse_points(src: &str) -> Result<Vec<Vec<f64>>, String> {
    src.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.split(',')
                .map(|c| c.trim().parse::<f64>().map_err(|e| format!("bad coordinate `{c}`: {e}")))
                .collect()
        })
        .collect()
}
