//! Parser for polynomial literals such as `1 - x^2`, `3/2*x*y` or `(x + y)^2`.
//!
//! Variables are `x`, `y`, `z` (up to three variables) or `x1`, `x2`, ...
//! Numbers are integers, decimals or `p/q`; all values are kept exact.

use equicert::polycore::parse_rational;
use equicert::{MPoly, Polynomial, Rational};

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(Rational),
    Var(usize),
    Op(char),
}

fn var_index(name: &str, dim: usize) -> Result<usize, String> {
    let idx = match name {
        "x" if dim <= 3 => 0,
        "y" if dim <= 3 => 1,
        "z" if dim <= 3 => 2,
        _ => match name.strip_prefix('x').and_then(|s| s.parse::<usize>().ok()) {
            Some(i) if i >= 1 => i - 1,
            _ => return Err(format!("unknown variable `{name}`")),
        },
    };
    if idx >= dim {
        return Err(format!("variable `{name}` exceeds dimension {dim}"));
    }
    Ok(idx)
}

fn tokenize(src: &str, dim: usize) -> Result<Vec<Token>, String> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let value = parse_rational(&text).map_err(|e| e.to_string())?;
            out.push(Token::Num(value));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            let name: String = chars[start..i].iter().collect();
            out.push(Token::Var(var_index(&name, dim)?));
        } else if "+-*/^()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(format!("unexpected character `{c}`"));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    dim: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<MPoly, String> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MPoly, String> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let divisor = self.unary()?;
                match divisor.constant_value() {
                    Some(c) if c != Rational::from_integer(0.into()) => {
                        acc = acc.scale(&(Rational::from_integer(1.into()) / c));
                    }
                    _ => return Err("division is only allowed by nonzero constants".into()),
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<MPoly, String> {
        if self.eat('-') {
            return Ok(-&self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<MPoly, String> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        match self.tokens.get(self.pos).cloned() {
            Some(Token::Num(k)) if k.is_integer() => {
                self.pos += 1;
                let k: u32 = k
                    .to_integer()
                    .try_into()
                    .map_err(|_| "exponent out of range".to_string())?;
                Ok(base.pow(k))
            }
            _ => Err("exponent must be a nonnegative integer".into()),
        }
    }

    fn atom(&mut self) -> Result<MPoly, String> {
        match self.tokens.get(self.pos).cloned() {
            Some(Token::Num(c)) => {
                self.pos += 1;
                Ok(MPoly::constant(self.dim, c))
            }
            Some(Token::Var(i)) => {
                self.pos += 1;
                Ok(MPoly::var(self.dim, i))
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err("missing `)`".into());
                }
                Ok(inner)
            }
            Some(t) => Err(format!("unexpected token {t:?}")),
            None => Err("unexpected end of input".into()),
        }
    }
}

/// Parses `src` as a polynomial in `dim` variables.
pub fn parse_poly(src: &str, dim: usize) -> Result<MPoly, String> {
    let tokens = tokenize(src, dim)?;
    let mut p = Parser { tokens, pos: 0, dim };
    let out = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(format!("trailing input after position {}", p.pos));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use equicert::polycore::rat;
    use equicert::UPoly;

    #[test]
    fn parses_univariate() {
        let p = parse_poly("1 - x^2", 1).unwrap();
        assert_eq!(p.to_upoly().unwrap(), UPoly::from_integers(&[1, 0, -1]));
        let p = parse_poly("(2*x - 1)^2 + 0.5", 1).unwrap();
        assert_eq!(p.to_upoly().unwrap(), UPoly::new(vec![rat(3, 2), rat(-4, 1), rat(4, 1)]));
        assert_eq!(parse_poly("-3", 1).unwrap().constant_value(), Some(rat(-3, 1)));
    }

    #[test]
    fn parses_multivariate() {
        let p = parse_poly("3/2*x*y - z", 3).unwrap();
        assert_eq!(p.coeff(&[1, 1, 0]), rat(3, 2));
        assert_eq!(p.coeff(&[0, 0, 1]), rat(-1, 1));
        let q = parse_poly("x1 + x4", 4).unwrap();
        assert_eq!(q.num_terms(), 2);
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in ["x +", "x^y", "y", "1/x", "(x", "x $ 2", "x^-1"] {
            assert!(parse_poly(bad, 1).is_err(), "{bad}");
        }
        assert!(parse_poly("x5", 4).is_err());
    }
}
