//! Text form of exact polynomials.
//!
//! Grammar (whitespace ignored, juxtaposition multiplies):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/')? unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' digits)?
//! atom   := number | 'z' | 'i' | '(' expr ')'
//! number := digits ('.' digits)? (('e' | 'E') ('+' | '-')? digits)?
//! ```
//!
//! Decimals are read as the exact rationals they denote; division is only
//! allowed by nonzero constants.

use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{Coeff, Exact};

const MAX_EXPONENT: u32 = 4096;

pub fn parse_poly(text: &str) -> Result<Poly<Exact>> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    p.skip_ws();
    if p.at_end() {
        return Err(p.err("empty input"));
    }
    let out = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.err("unexpected character"));
    }
    Ok(out)
}

/// A single constant such as `3/2`, `-i` or `1+i`.
pub fn parse_scalar(text: &str) -> Result<Exact> {
    let p = parse_poly(text)?;
    match p.degree().finite() {
        None => Ok(Exact::zero(())),
        Some(0) => Ok(p.coeffs()[0].clone()),
        Some(_) => Err(Error::Parse {
            pos: 0,
            msg: "expected a constant, found a polynomial in z".into(),
        }),
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn expr(&mut self) -> Result<Poly<Exact>> {
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
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

    fn term(&mut self) -> Result<Poly<Exact>> {
        let mut acc = self.unary()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let rhs = self.unary()?;
                    let c = match rhs.degree().finite() {
                        Some(0) => rhs.coeffs()[0].clone(),
                        None => return Err(Error::Parse { pos: at, msg: "division by zero".into() }),
                        Some(_) => {
                            return Err(Error::Parse {
                                pos: at,
                                msg: "division by a non-constant".into(),
                            })
                        }
                    };
                    acc = acc.scale(&c.recip().expect("nonzero"));
                }
                Some(c) if c.is_ascii_digit() || c == b'.' || c == b'z' || c == b'i' || c == b'(' => {
                    acc = acc.mul(&self.unary()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Poly<Exact>> {
        self.skip_ws();
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly<Exact>> {
        let base = self.atom()?;
        self.skip_ws();
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        let digits = self.digits();
        if digits.is_empty() {
            return Err(self.err("expected exponent"));
        }
        let e: u32 = digits
            .parse()
            .ok()
            .filter(|&e| e <= MAX_EXPONENT)
            .ok_or(Error::Parse {
                pos: start,
                msg: format!("exponent must be at most {MAX_EXPONENT}"),
            })?;
        let mut acc = Poly::constant(Exact::real(1));
        for _ in 0..e {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Poly<Exact>> {
        self.skip_ws();
        match self.peek() {
            Some(b'z') => {
                self.pos += 1;
                Ok(Poly::monomial(Exact::real(1), 1))
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(Poly::constant(Exact::i()))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.skip_ws();
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => Ok(Poly::constant(Exact::real(self.number()?))),
            None => Err(self.err("unexpected end of input")),
            _ => Err(self.err("unexpected character")),
        }
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii")
    }

    fn number(&mut self) -> Result<Rational> {
        let start = self.pos;
        let int_part = self.digits().to_owned();
        let mut frac = String::new();
        if self.peek() == Some(b'.') {
            self.pos += 1;
            frac = self.digits().to_owned();
        }
        if int_part.is_empty() && frac.is_empty() {
            return Err(Error::Parse { pos: start, msg: "malformed number".into() });
        }
        let mut exp: i64 = 0;
        if matches!(self.peek(), Some(b'e' | b'E')) {
            self.pos += 1;
            let neg = match self.peek() {
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                Some(b'+') => {
                    self.pos += 1;
                    false
                }
                _ => false,
            };
            let d = self.digits();
            let v: i64 = d
                .parse()
                .ok()
                .filter(|&v| v <= MAX_EXPONENT as i64)
                .ok_or(Error::Parse { pos: start, msg: "malformed exponent".into() })?;
            exp = if neg { -v } else { v };
        }
        let mantissa: Integer = format!("{int_part}{frac}").parse().expect("digits only");
        let scale = exp - frac.len() as i64;
        let ten = Integer::from(10);
        use rug::ops::Pow;
        let pow: Integer = ten.pow(scale.unsigned_abs() as u32);
        Ok(if scale >= 0 {
            Rational::from(mantissa * pow)
        } else {
            Rational::from((mantissa, pow))
        })
    }
}

fn render_coeff(c: &Exact) -> String {
    let zero = |q: &Rational| *q.numer() == 0;
    match (zero(c.re()), zero(c.im())) {
        (_, true) => c.re().to_string(),
        (true, false) => format!("{}*i", c.im()),
        (false, false) => {
            let im = c.im();
            if *im.numer() < 0 {
                format!("({}-{}*i)", c.re(), Rational::from(-im))
            } else {
                format!("({}+{}*i)", c.re(), im)
            }
        }
    }
}

/// Text accepted by [`parse_poly`], ascending degree: `1/2 - 3*z + (1+2*i)*z^2`.
pub fn render(p: &Poly<Exact>) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let one = Exact::real(1);
    let minus_one = Exact::real(-1);
    let mut parts: Vec<String> = Vec::new();
    for (k, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mono = match k {
            0 => String::new(),
            1 => "z".to_owned(),
            _ => format!("z^{k}"),
        };
        let s = if k == 0 {
            render_coeff(c)
        } else if *c == one {
            mono
        } else if *c == minus_one {
            format!("-{mono}")
        } else {
            format!("{}*{mono}", render_coeff(c))
        };
        parts.push(s);
    }
    let mut out = parts[0].clone();
    for s in &parts[1..] {
        match s.strip_prefix('-') {
            Some(rest) => {
                out.push_str(" - ");
                out.push_str(rest);
            }
            None => {
                out.push_str(" + ");
                out.push_str(s);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::int_poly;

    #[test]
    fn parse_examples() {
        assert_eq!(parse_poly("z^2").unwrap(), int_poly(&[0, 0, 1], ()));
        let want = Poly::new(vec![Exact::real(0), Exact::ratio(-1, 2), Exact::ratio(1, 4)]);
        assert_eq!(parse_poly("1/4*z^2-1/2*z").unwrap(), want);
        assert!(matches!(parse_poly(""), Err(Error::Parse { pos: 0, .. })));
        assert!(parse_poly("   ").is_err());
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_poly("(z+1)^2").unwrap(), int_poly(&[1, 2, 1], ()));
        assert_eq!(parse_poly("2z").unwrap(), int_poly(&[0, 2], ()));
        assert_eq!(parse_poly("0.25").unwrap(), Poly::constant(Exact::ratio(1, 4)));
        assert_eq!(parse_poly("1.5e2").unwrap(), Poly::constant(Exact::real(150)));
        assert_eq!(parse_poly("i*i").unwrap(), Poly::constant(Exact::real(-1)));
        assert_eq!(parse_scalar("1+i").unwrap(), Exact::new(1, 1));
        assert_eq!(parse_scalar("-3/2").unwrap(), Exact::ratio(-3, 2));
        assert!(parse_scalar("z").is_err());
    }

    #[test]
    fn parse_errors_carry_position() {
        assert!(matches!(parse_poly("z + $"), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(parse_poly("1/(z-z)"), Err(Error::Parse { pos: 2, .. })));
        assert!(parse_poly("z/z").is_err());
        assert!(parse_poly("(z").is_err());
        assert!(parse_poly("z^").is_err());
        assert!(parse_poly("z^99999").is_err());
    }

    #[test]
    fn render_round_trip() {
        let p = Poly::new(vec![
            Exact::ratio(1, 2),
            Exact::real(-3),
            Exact::new(1, 2),
            Exact::new(Rational::from((-1, 3)), Rational::from((-5, 7))),
            Exact::new(0, -1),
            Exact::real(-1),
            Exact::real(1),
        ]);
        let s = render(&p);
        assert_eq!(s, "1/2 - 3*z + (1+2*i)*z^2 + (-1/3-5/7*i)*z^3 - 1*i*z^4 - z^5 + z^6");
        assert_eq!(parse_poly(&s).unwrap(), p);
        assert_eq!(render(&Poly::zero()), "0");
        assert!(parse_poly("0").unwrap().is_zero());
    }
}
