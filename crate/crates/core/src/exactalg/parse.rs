//! Reads polynomials such as `"z*y - x^2 + 3/2*y^2"` with rational
//! coefficients. Variables are `x`, `y`, `z` (or a caller-supplied list).

use super::{parse_rational, AlgebraError, Poly, Rational};

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    names: &'a [&'a str],
    nvars: usize,
}

type R = Result<Poly<Rational>, AlgebraError>;

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> AlgebraError {
        AlgebraError::Parse(format!("{msg} at offset {} in {:?}", self.pos, String::from_utf8_lossy(self.s)))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> R {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -&self.term()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> R {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some(c) if c == b'(' || c.is_ascii_alphabetic() => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> R {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let e: u32 = std::str::from_utf8(&self.s[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| self.err("bad exponent"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> R {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.s.len() && (self.s[self.pos].is_ascii_digit() || self.s[self.pos] == b'/') {
                    self.pos += 1;
                }
                let q = parse_rational(std::str::from_utf8(&self.s[start..self.pos]).unwrap())?;
                Ok(Poly::constant(self.nvars, q))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                match self.names.iter().position(|n| *n == name) {
                    Some(i) => Ok(Poly::var(self.nvars, i)),
                    None => Err(self.err(&format!("unknown variable {name:?}"))),
                }
            }
            _ => Err(self.err("unexpected character")),
        }
    }
}

/// Parses a polynomial in the given variables.
pub fn parse_poly_in(s: &str, names: &[&str]) -> Result<Poly<Rational>, AlgebraError> {
    let mut p = Parser { s: s.as_bytes(), pos: 0, names, nvars: names.len() };
    let out = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

/// Parses a polynomial in `x, y, z`.
pub fn parse_poly(s: &str) -> Result<Poly<Rational>, AlgebraError> {
    parse_poly_in(s, &["x", "y", "z"])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, ratio};

    #[test]
    fn reads_forms() {
        let f = parse_poly("z*y - x^2 + 3/2*y^2").unwrap();
        assert_eq!(f.coeff(&[0, 1, 1]), rat(1));
        assert_eq!(f.coeff(&[2, 0, 0]), rat(-1));
        assert_eq!(f.coeff(&[0, 2, 0]), ratio(3, 2));
        let g = parse_poly("(y - x^2)^3 + y^7").unwrap();
        assert_eq!(g.degree(), Some(7));
        assert!(parse_poly("x + w").is_err());
        assert!(parse_poly("x +").is_err());
    }
}
