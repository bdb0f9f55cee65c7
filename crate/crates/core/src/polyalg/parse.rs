//! Recursive-descent parser for polynomial expressions in two named variables.
//!
//! expr   := term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := ('-' factor) | base ('^' uint)?
//! base   := rational | var | '(' expr ')'

use num_bigint::BigInt;
use num_traits::Zero;

use super::MultiPoly;
use crate::error::{Error, Result};
use crate::exactnum::Rational;

const MAX_EXPONENT: u32 = 4096;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let (pos, c) = chars[k];
        if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].1.is_ascii_digit() {
                k += 1;
            }
            if k < chars.len() && (chars[k].1 == '.' || chars[k].1 == 'e' || chars[k].1 == 'E') {
                return Err(Error::Syntax { pos: chars[k].0, msg: "only integer and fraction literals are allowed".into() });
            }
            let text: String = chars[start..k].iter().map(|x| x.1).collect();
            out.push((Tok::Num(text.parse().unwrap()), pos));
        } else if c.is_alphabetic() || c == '_' {
            let start = k;
            while k < chars.len() && (chars[k].1.is_alphanumeric() || chars[k].1 == '_') {
                k += 1;
            }
            out.push((Tok::Ident(chars[start..k].iter().map(|x| x.1).collect()), pos));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), pos));
            k += 1;
        } else if c == '.' {
            return Err(Error::Syntax { pos, msg: "only integer and fraction literals are allowed".into() });
        } else {
            return Err(Error::Syntax { pos, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    k: usize,
    end: usize,
    vars: (&'a str, &'a str),
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.k).map(|t| &t.0)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.k).map(|t| t.1).unwrap_or(self.end)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.k += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<MultiPoly> {
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

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly> {
        if self.eat('-') {
            return Ok(-&self.factor()?);
        }
        let b = self.base()?;
        if self.eat('^') {
            let pos = self.pos();
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.k += 1;
                    let e: u32 = u32::try_from(&n)
                        .ok()
                        .filter(|&e| e <= MAX_EXPONENT)
                        .ok_or_else(|| Error::Syntax { pos, msg: "exponent too large".into() })?;
                    Ok(b.pow(e))
                }
                _ => Err(Error::Syntax { pos, msg: "expected a nonnegative integer exponent".into() }),
            }
        } else {
            Ok(b)
        }
    }

    fn base(&mut self) -> Result<MultiPoly> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.k += 1;
                if self.peek() == Some(&Tok::Op('/')) {
                    if let Some((Tok::Num(d), dpos)) = self.toks.get(self.k + 1).cloned() {
                        if d.is_zero() {
                            return Err(Error::Syntax { pos: dpos, msg: "zero denominator".into() });
                        }
                        self.k += 2;
                        return Ok(MultiPoly::constant(Rational::new(n, d)));
                    }
                    return Err(Error::Syntax { pos: self.pos() + 1, msg: "expected an integer denominator".into() });
                }
                Ok(MultiPoly::constant(Rational::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                self.k += 1;
                if name == self.vars.0 {
                    Ok(MultiPoly::z())
                } else if name == self.vars.1 {
                    Ok(MultiPoly::w())
                } else {
                    Err(Error::UnknownVariable { name, pos })
                }
            }
            Some(Tok::Op('(')) => {
                self.k += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Syntax { pos: self.pos(), msg: "expected `)`".into() });
                }
                Ok(e)
            }
            Some(Tok::Op(c)) => Err(Error::Syntax { pos, msg: format!("unexpected `{c}`") }),
            None => Err(Error::Syntax { pos, msg: "unexpected end of input".into() }),
        }
    }
}

/// Parses `text` as a polynomial in the variables `vars` (first, second).
pub fn parse_poly(text: &str, vars: (&str, &str)) -> Result<MultiPoly> {
    let toks = lex(text)?;
    let mut p = Parser { toks, k: 0, end: text.len(), vars };
    let e = p.expr()?;
    if p.k != p.toks.len() {
        return Err(Error::Syntax { pos: p.pos(), msg: "trailing input".into() });
    }
    Ok(e)
}

/// Parses "P, Q" into two polynomials in z, w. Positions refer to the whole text.
pub fn parse_map_text(text: &str) -> Result<(MultiPoly, MultiPoly)> {
    parse_pair(text, ("z", "w"))
}

/// Parses "P, Q" in the given variables.
pub fn parse_pair(text: &str, vars: (&str, &str)) -> Result<(MultiPoly, MultiPoly)> {
    let mut depth = 0i32;
    let mut split = None;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                if split.is_some() {
                    return Err(Error::Syntax { pos: i, msg: "expected exactly two components".into() });
                }
                split = Some(i);
            }
            _ => {}
        }
    }
    let i = split.ok_or(Error::Syntax { pos: text.len(), msg: "expected `P, Q`".into() })?;
    let shift = |e: Error, off: usize| match e {
        Error::Syntax { pos, msg } => Error::Syntax { pos: pos + off, msg },
        Error::UnknownVariable { name, pos } => Error::UnknownVariable { name, pos: pos + off },
        other => other,
    };
    let p = parse_poly(&text[..i], vars).map_err(|e| shift(e, 0))?;
    let q = parse_poly(&text[i + 1..], vars).map_err(|e| shift(e, i + 1))?;
    Ok((p, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};
    use proptest::prelude::*;

    const ZW: (&str, &str) = ("z", "w");

    #[test]
    fn examples() {
        assert_eq!(parse_poly("z^2 + 3*w", ZW).unwrap(), MultiPoly::from_terms([((2, 0), int(1)), ((0, 1), int(3))]));
        assert_eq!(parse_poly("-1/2*z*w + 1", ZW).unwrap(), MultiPoly::from_terms([((1, 1), rat(-1, 2)), ((0, 0), int(1))]));
        assert_eq!(
            parse_poly("(z+w)^2", ZW).unwrap(),
            MultiPoly::from_terms([((2, 0), int(1)), ((1, 1), int(2)), ((0, 2), int(1))])
        );
        assert_eq!(parse_poly("x*y - y^2", ("x", "y")).unwrap().to_string_vars(("x", "y")), "x*y - y^2");
    }

    #[test]
    fn errors() {
        assert_eq!(parse_poly("z + q", ZW), Err(Error::UnknownVariable { name: "q".into(), pos: 4 }));
        assert!(matches!(parse_poly("z + 1.5", ZW), Err(Error::Syntax { pos: 5, .. })));
        assert!(matches!(parse_poly("z +", ZW), Err(Error::Syntax { pos: 3, .. })));
        assert!(matches!(parse_poly("(z", ZW), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("z^w", ZW), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_poly("1/0", ZW), Err(Error::Syntax { .. })));
        assert!(matches!(parse_map_text("z^2, w + v"), Err(Error::UnknownVariable { pos: 9, .. })));
    }

    #[test]
    fn map_text() {
        let (p, q) = parse_map_text("z^2 + w, (w + z)^2").unwrap();
        assert_eq!(p.to_string(), "z^2 + w");
        assert_eq!(q.degree(), 2);
    }

    proptest! {
        #[test]
        fn print_parse_roundtrip(v in proptest::collection::vec((0u32..5, 0u32..5, -20i64..20, 1i64..9), 0..8)) {
            let p = MultiPoly::from_terms(v.into_iter().map(|(i, j, n, d)| ((i, j), rat(n, d))));
            let text = p.to_string();
            prop_assert_eq!(parse_poly(&text, ZW).unwrap(), p);
        }
    }
}
