//! Polynomial input syntax: `+ - * / ^`, parentheses, rational literals and
//! variables `x1..xn` (also `xi1..xin`; `x` and `xi` when n = 1).

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::rational::Q;

pub fn parse_polynomial(src: &str, n: usize) -> Result<Polynomial> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, n };
    let f = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("unexpected input"));
    }
    Ok(f)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    n: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Syntax {
            offset: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.unary()?;
                    let c = match d.terms().get(&vec![0; self.n]) {
                        Some(c) if d.is_constant() => c.clone(),
                        _ => {
                            return Err(Error::Syntax {
                                offset: at,
                                msg: "divisor must be a nonzero constant".into(),
                            })
                        }
                    };
                    acc = acc.mul(&Polynomial::constant(self.n, Q::one() / c));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
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
        let k: u32 = digits.parse().map_err(|_| Error::Syntax {
            offset: start,
            msg: "exponent too large".into(),
        })?;
        Ok(base.pow(k))
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<Polynomial> {
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
                let d = self.digits();
                let v: BigInt = d.parse().expect("digits");
                Ok(Polynomial::constant(self.n, Q::from_integer(v)))
            }
            Some(c) if c.is_ascii_alphabetic() => self.variable(),
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn variable(&mut self) -> Result<Polynomial> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        let unknown = || Error::Syntax {
            offset: start,
            msg: format!("unknown identifier '{name}'"),
        };
        let stem = name.trim_end_matches(|c: char| c.is_ascii_digit());
        if stem != "x" && stem != "xi" {
            return Err(unknown());
        }
        let index = &name[stem.len()..];
        let i = if index.is_empty() {
            if self.n != 1 {
                return Err(unknown());
            }
            1
        } else {
            index.parse::<usize>().map_err(|_| unknown())?
        };
        if i == 0 {
            return Err(unknown());
        }
        if i > self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: i,
            });
        }
        Ok(Polynomial::var(self.n, i - 1))
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let f = parse_polynomial("x1^2+x2^2", 2).unwrap();
        assert_eq!(f, Polynomial::from_terms(2, [(vec![2, 0], q(1)), (vec![0, 2], q(1))]));
        let f = parse_polynomial("3/5*x1^2*x2 - x3 + 7", 3).unwrap();
        assert_eq!(
            f,
            Polynomial::from_terms(
                3,
                [(vec![2, 1, 0], qf(3, 5)), (vec![0, 0, 1], q(-1)), (vec![0, 0, 0], q(7))]
            )
        );
        assert_eq!(parse_polynomial("xi^2+1", 1).unwrap(), parse_polynomial("x1*x1 + 1", 1).unwrap());
        assert_eq!(parse_polynomial("(x+1)^2", 1).unwrap(), parse_polynomial("x^2+2*x1+1", 1).unwrap());
    }

    #[test]
    fn errors() {
        match parse_polynomial("x1^^2", 1) {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 3),
            r => panic!("{r:?}"),
        }
        assert!(matches!(parse_polynomial("y+1", 1), Err(Error::Syntax { offset: 0, .. })));
        assert!(matches!(parse_polynomial("x1+x3", 2), Err(Error::Dimension { expected: 2, got: 3 })));
        assert!(matches!(parse_polynomial("x+1", 2), Err(Error::Syntax { .. })));
        assert!(matches!(parse_polynomial("(x1", 1), Err(Error::Syntax { offset: 3, .. })));
        assert!(matches!(parse_polynomial("x1/x1", 1), Err(Error::Syntax { offset: 3, .. })));
        assert!(parse_polynomial("", 1).is_err());
    }

    fn poly_strategy() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec(((0u32..4, 0u32..4, 0u32..3), -20i64..20, 1i64..7), 0..6).prop_map(|ts| {
            Polynomial::from_terms(3, ts.into_iter().map(|((a, b, c), n, d)| (vec![a, b, c], qf(n, d))))
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(f in poly_strategy()) {
            let s = f.to_string();
            prop_assert_eq!(parse_polynomial(&s, 3).unwrap(), f);
        }
    }
}
