use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{error::argument, Result};

/// Arbitrary-precision rational, always stored reduced with a positive denominator.
pub type Rational = BigRational;

/// Shorthand for the rational `num / den`.
///
/// Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Multinomial coefficient `(Σ parts)! / Π parts!`.
pub fn multinomial(parts: &[u32]) -> BigInt {
    let mut total = 0u64;
    let mut acc = BigInt::one();
    for &p in parts {
        total += u64::from(p);
        acc *= binomial(total, u64::from(p));
    }
    acc
}

/// Nearest `f64`; saturates to `±inf` for values outside the `f64` range.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Parses `"p/q"`, `"p"` or a plain decimal such as `"-0.25"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || argument(format!("not a rational number: {s:?}"));
    if let Some((int, frac)) = s.split_once('.') {
        let digits = frac.len() as u32;
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let whole = format!("{int}{frac}");
        let num: BigInt = match whole.as_str() {
            "" | "-" | "+" => return Err(bad()),
            w => w.parse().map_err(|_| bad())?,
        };
        return Ok(Rational::new(num, BigInt::from(10u32).pow(digits)));
    }
    s.parse().map_err(|_| bad())
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// obtained from the continued-fraction convergents and semiconvergents.
///
/// Returns `None` for non-finite input or `max_den == 0`.
pub fn rationalize(x: f64, max_den: u64) -> Option<Rational> {
    if !x.is_finite() || max_den == 0 {
        return None;
    }
    let exact = Rational::from_float(x)?;
    if exact.denom() <= &BigInt::from(max_den) {
        return Some(exact);
    }
    let bound = BigInt::from(max_den);
    // Convergents h/k of the continued fraction of the exact binary value.
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut rest = exact.clone();
    loop {
        let a = rest.floor().to_integer();
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        if k2 > bound {
            // Largest admissible semiconvergent, compared against the last convergent.
            let t = (&bound - &k0).div_floor(&k1);
            let semi = Rational::new(&t * &h1 + &h0, &t * &k1 + &k0);
            let conv = Rational::new(h1.clone(), k1.clone());
            let err = |r: &Rational| (r - &exact).abs();
            return Some(if err(&semi) < err(&conv) { semi } else { conv });
        }
        let frac = &rest - Rational::from_integer(a);
        (h0, h1) = (h1, h2);
        (k0, k1) = (k1, k2);
        if frac.is_zero() {
            return Some(Rational::new(h1, k1));
        }
        rest = frac.recip();
    }
}

/// Serde adapter writing rationals as `"p/q"` strings (`"p"` for integers).
pub mod serde_rational {
    use super::Rational;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(r)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_rational(&s).map_err(D::Error::custom)
    }

    pub mod option {
        use super::Rational;
        use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match r {
                Some(r) => s.collect_str(r),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|s| super::super::parse_rational(&s).map_err(D::Error::custom))
                .transpose()
        }
    }

    pub mod vec {
        use super::Rational;
        use serde::{de::Error as _, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&r.to_string())?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|s| super::super::parse_rational(s).map_err(D::Error::custom))
                .collect()
        }
    }
}
