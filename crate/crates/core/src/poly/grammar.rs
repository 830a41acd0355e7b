//! Text form of polynomials.
//!
//! ```text
//! expression := term (('+' | '-') term)*
//! term       := coeff ('*' factor)* | factor ('*' factor)*
//! factor     := var ('^' posint)?
//! var        := 'x[' i ',' j ']'
//! ```
//!
//! Indices are 1-based (`i` is the row inside block `j`). Coefficients are
//! decimal and reduced mod p. `a - b` means `a + (p-1)*b`. Whitespace between
//! tokens is ignored.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::field::PrimeP;
use super::mono::Mono;
use super::polynomial::Poly;
use crate::error::{Error, Result};

/// Names of the variables: flat index ↔ `x[i,j]` label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarLayout {
    labels: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
}

impl VarLayout {
    pub fn new(labels: Vec<(usize, usize)>) -> Self {
        let index = labels.iter().enumerate().map(|(k, &l)| (l, k)).collect();
        VarLayout { labels, index }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, idx: usize) -> (usize, usize) {
        self.labels[idx]
    }

    pub fn index(&self, i: usize, j: usize) -> Option<usize> {
        self.index.get(&(i, j)).copied()
    }

    pub fn name(&self, idx: usize) -> String {
        let (i, j) = self.labels[idx];
        format!("x[{i},{j}]")
    }
}

pub fn parse(text: &str, layout: &VarLayout, field: PrimeP) -> Result<Poly> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        layout,
        field,
    };
    let poly = parser.expression()?;
    parser.skip_ws();
    if parser.pos < parser.src.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(poly)
}

/// Canonical text: terms in descending monomial order, unit coefficients
/// omitted, `0` for the zero polynomial.
pub fn render(f: &Poly, layout: &VarLayout) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (m, c)) in f.terms().rev().enumerate() {
        if k > 0 {
            out.push_str(" + ");
        }
        let mut first = true;
        if c != 1 || m.is_one() {
            write!(out, "{c}").unwrap();
            first = false;
        }
        for (v, &e) in m.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                out.push('*');
            }
            first = false;
            out.push_str(&layout.name(v));
            if e > 1 {
                write!(out, "^{e}").unwrap();
            }
        }
    }
    out
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    layout: &'a VarLayout,
    field: PrimeP,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
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

    fn expect(&mut self, ch: u8) -> Result<()> {
        if self.peek() == Some(ch) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", ch as char)))
        }
    }

    fn nvars(&self) -> usize {
        self.layout.len()
    }

    fn expression(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let (coeff, mut mono) = match self.peek() {
            Some(c) if c.is_ascii_digit() => (self.coefficient()?, Mono::one(self.nvars())),
            Some(b'x') => (1, self.factor()?),
            Some(_) => return Err(self.error("expected coefficient or variable")),
            None => return Err(self.error("unexpected end of input")),
        };
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            mono = mono.mul(&f);
        }
        Ok(Poly::monomial(self.field, mono, coeff))
    }

    fn coefficient(&mut self) -> Result<u32> {
        let start = self.pos;
        let mut acc = 0u64;
        while let Some(&c) = self.src.get(self.pos) {
            if !c.is_ascii_digit() {
                break;
            }
            acc = (acc * 10 + (c - b'0') as u64) % self.field.get() as u64;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected integer"));
        }
        Ok(acc as u32)
    }

    fn integer(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        let mut acc: usize = 0;
        while let Some(&c) = self.src.get(self.pos) {
            if !c.is_ascii_digit() {
                break;
            }
            acc = acc
                .checked_mul(10)
                .and_then(|a| a.checked_add((c - b'0') as usize))
                .ok_or_else(|| self.error("integer overflow"))?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected integer"));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Mono> {
        let start = {
            self.skip_ws();
            self.pos
        };
        if self.peek() != Some(b'x') {
            return Err(self.error("expected variable"));
        }
        self.pos += 1;
        self.expect(b'[')?;
        let i = self.integer()?;
        self.expect(b',')?;
        let j = self.integer()?;
        self.expect(b']')?;
        let idx = self.layout.index(i, j).ok_or(Error::UnknownVariable {
            name: format!("x[{i},{j}]"),
            pos: start,
        })?;
        let mut e = 1u32;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let k = self.integer()?;
            if k == 0 {
                return Err(self.error("exponent must be positive"));
            }
            e = u32::try_from(k).map_err(|_| self.error("exponent too large"))?;
        }
        Ok(Mono::var(self.nvars(), idx).pow(e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn layout() -> VarLayout {
        VarLayout::new(vec![(1, 1), (2, 1), (1, 2), (2, 2)])
    }

    #[test]
    fn norm_of_top_variable_p2() {
        let k = PrimeP::new(2).unwrap();
        let f = parse("x[2,1]^2 + x[1,1]*x[2,1]", &layout(), k).unwrap();
        assert_eq!(f.num_terms(), 2);
        assert_eq!(f.coeff(&Mono::new(vec![0, 2, 0, 0])), 1);
        assert_eq!(f.coeff(&Mono::new(vec![1, 1, 0, 0])), 1);
    }

    #[test]
    fn zero_and_constants() {
        let k = PrimeP::new(3).unwrap();
        assert!(parse("0", &layout(), k).unwrap().is_zero());
        assert!(parse("3", &layout(), k).unwrap().is_zero());
        assert_eq!(render(&parse("4", &layout(), k).unwrap(), &layout()), "1");
    }

    #[test]
    fn minus_is_p_minus_one_times() {
        let k = PrimeP::new(3).unwrap();
        let a = parse("x[1,1] - x[2,1]", &layout(), k).unwrap();
        let b = parse("x[1,1] + 2*x[2,1]", &layout(), k).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn whitespace_is_ignored() {
        let k = PrimeP::new(5).unwrap();
        let a = parse(" 2 * x [ 1 , 2 ] ^ 3+x[2,2]", &layout(), k).unwrap();
        let b = parse("2*x[1,2]^3+x[2,2]", &layout(), k).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn errors_carry_positions() {
        let k = PrimeP::new(2).unwrap();
        match parse("x[1,1] + ", &layout(), k) {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 9),
            other => panic!("{other:?}"),
        }
        match parse("x[1,1] * x[3,1]", &layout(), k) {
            Err(Error::UnknownVariable { name, pos }) => {
                assert_eq!(name, "x[3,1]");
                assert_eq!(pos, 9);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("x[1,1]^0", &layout(), k), Err(Error::Syntax { .. })));
        assert!(matches!(parse("x[1,1]x[2,1]", &layout(), k), Err(Error::Syntax { .. })));
        assert!(matches!(parse("", &layout(), k), Err(Error::Syntax { .. })));
    }

    #[test]
    fn render_is_canonical() {
        let k = PrimeP::new(3).unwrap();
        let f = parse("x[1,1]*x[2,1] + 2*x[2,1]^2 + 1 + x[1,1]*x[2,1]", &layout(), k).unwrap();
        assert_eq!(render(&f, &layout()), "2*x[2,1]^2 + 2*x[1,1]*x[2,1] + 1");
    }
}
