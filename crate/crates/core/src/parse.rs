//! Text grammar for ring specs and element literals.
//!
//! ```text
//! ring   := "Z/" NAT | "Q(" ring "," coeffs ")" | "P(" ring ("," ring)* ")" | "S(" ring "," NAT ")"
//! coeffs := "[" elem ("," elem)* "]"
//! elem   := NAT | coeffs | "(" elem ("," elem)* ")" | LETTER
//! ```
//!
//! Whitespace is insignificant. In element literals a natural number denotes its
//! image under `Z -> R`, a coefficient list may be shorter or longer than the
//! degree (it is reduced by the modulus), and a single lowercase letter stands for
//! the adjoined variable of the quotient ring at that position.

use crate::budget::SearchBudget;
use crate::descriptor::RingDescriptor;
use crate::error::{Error, Result};
use crate::ring::{Element, Ring};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Literal {
    Nat { value: u64, pos: usize },
    Var { pos: usize },
    List { items: Vec<Literal>, pos: usize },
    Tuple { items: Vec<Literal>, pos: usize },
}

impl Literal {
    pub(crate) fn pos(&self) -> usize {
        match self {
            Literal::Nat { pos, .. }
            | Literal::Var { pos }
            | Literal::List { pos, .. }
            | Literal::Tuple { pos, .. } => *pos,
        }
    }
}

pub(crate) fn syntax(pos: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        position: pos,
        message: message.into(),
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            src: text.as_bytes(),
            pos: 0,
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

    fn expect(&mut self, c: u8) -> Result<()> {
        match self.peek() {
            Some(found) if found == c => {
                self.pos += 1;
                Ok(())
            }
            Some(found) => Err(syntax(
                self.pos,
                format!("expected '{}', found '{}'", c as char, found as char),
            )),
            None => Err(syntax(self.pos, format!("expected '{}', found end of input", c as char))),
        }
    }

    fn finish(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(syntax(self.pos, format!("unexpected trailing '{}'", c as char))),
        }
    }

    fn nat(&mut self) -> Result<(u64, usize)> {
        self.skip_ws();
        let start = self.pos;
        let mut value: u64 = 0;
        while let Some(&c) = self.src.get(self.pos) {
            if !c.is_ascii_digit() {
                break;
            }
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(u64::from(c - b'0')))
                .ok_or_else(|| syntax(start, "number too large"))?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(syntax(start, "expected a natural number"));
        }
        Ok((value, start))
    }

    fn ring(&mut self) -> Result<RingDescriptor> {
        let start = match self.peek() {
            Some(_) => self.pos,
            None => return Err(syntax(self.pos, "expected a ring, found end of input")),
        };
        match self.src[start] {
            b'Z' => {
                self.pos += 1;
                self.expect(b'/')?;
                let (n, at) = self.nat()?;
                if n < 2 {
                    return Err(syntax(at, format!("Z/{n}: modulus must be at least 2")));
                }
                Ok(RingDescriptor::Zmod(n))
            }
            b'Q' => {
                self.pos += 1;
                self.expect(b'(')?;
                let base = self.ring()?;
                self.expect(b',')?;
                let at = self.peek().map(|_| self.pos).unwrap_or(self.pos);
                let lit = self.literal()?;
                let Literal::List { items, .. } = lit else {
                    return Err(syntax(at, "expected a coefficient list for the modulus"));
                };
                if items.len() < 2 {
                    return Err(syntax(at, "modulus must have degree at least 1"));
                }
                let base_ring = Ring::new(base.clone())?;
                let modulus = items
                    .iter()
                    .map(|item| base_ring.element_from_literal(item).map(|e| e.value()))
                    .collect::<Result<Vec<_>>>()?;
                self.expect(b')')?;
                if modulus.last() != Some(&base.one_value()) {
                    return Err(Error::NonMonic);
                }
                Ok(RingDescriptor::quot(base, modulus))
            }
            b'P' => {
                self.pos += 1;
                self.expect(b'(')?;
                let mut factors = vec![self.ring()?];
                while self.peek() == Some(b',') {
                    self.pos += 1;
                    factors.push(self.ring()?);
                }
                self.expect(b')')?;
                Ok(RingDescriptor::Prod(factors))
            }
            b'S' => {
                self.pos += 1;
                self.expect(b'(')?;
                let base = self.ring()?;
                self.expect(b',')?;
                let (n, at) = self.nat()?;
                if n < 1 {
                    return Err(syntax(at, "truncation order must be at least 1"));
                }
                self.expect(b')')?;
                Ok(RingDescriptor::truncated(base, n as usize))
            }
            c => Err(syntax(
                start,
                format!("expected one of Z/, Q(, P(, S(, found '{}'", c as char),
            )),
        }
    }

    fn literal(&mut self) -> Result<Literal> {
        let Some(c) = self.peek() else {
            return Err(syntax(self.pos, "expected an element, found end of input"));
        };
        let pos = self.pos;
        match c {
            b'0'..=b'9' => {
                let (value, pos) = self.nat()?;
                Ok(Literal::Nat { value, pos })
            }
            b'[' | b'(' => {
                let close = if c == b'[' { b']' } else { b')' };
                self.pos += 1;
                let mut items = vec![self.literal()?];
                while self.peek() == Some(b',') {
                    self.pos += 1;
                    items.push(self.literal()?);
                }
                self.expect(close)?;
                Ok(if c == b'[' {
                    Literal::List { items, pos }
                } else {
                    Literal::Tuple { items, pos }
                })
            }
            b'a'..=b'z' => {
                self.pos += 1;
                if matches!(self.src.get(self.pos), Some(c) if c.is_ascii_alphanumeric()) {
                    return Err(syntax(pos, "variables are single lowercase letters"));
                }
                Ok(Literal::Var { pos })
            }
            other => Err(syntax(pos, format!("unexpected '{}' in element", other as char))),
        }
    }
}

/// Parses a ring spec and checks its order against the budget.
pub fn parse_ring_spec(text: &str, budget: &SearchBudget) -> Result<RingDescriptor> {
    let mut parser = Parser::new(text);
    let desc = parser.ring()?;
    parser.finish()?;
    let ring = Ring::new(desc)?;
    budget.check_order("ring order", ring.order())?;
    Ok(ring.descriptor().clone())
}

pub(crate) fn parse_literal(text: &str) -> Result<Literal> {
    let mut parser = Parser::new(text);
    let lit = parser.literal()?;
    parser.finish()?;
    Ok(lit)
}

/// Parses a list of `(f, r)` pairs, e.g. `[(1,1),(z,0)]`.
pub fn parse_pairs(ring: &Ring, text: &str) -> Result<Vec<(Element, Element)>> {
    let lit = parse_literal(text)?;
    let Literal::List { items, .. } = lit else {
        return Err(syntax(lit.pos(), "expected a list of pairs"));
    };
    items
        .iter()
        .map(|item| match item {
            Literal::Tuple { items, .. } if items.len() == 2 => Ok((
                ring.element_from_literal(&items[0])?,
                ring.element_from_literal(&items[1])?,
            )),
            other => Err(syntax(other.pos(), "expected a pair (f, r)")),
        })
        .collect()
}

/// Parses a list of elements, e.g. `[2, x, [1,1]]`.
pub fn parse_element_list(ring: &Ring, text: &str) -> Result<Vec<Element>> {
    let lit = parse_literal(text)?;
    match lit {
        Literal::List { items, .. } => items.iter().map(|i| ring.element_from_literal(i)).collect(),
        other => Err(syntax(other.pos(), "expected a list of elements")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptor::Value;

    fn parse(text: &str) -> Result<RingDescriptor> {
        parse_ring_spec(text, &SearchBudget::default())
    }

    #[test]
    fn zmod_literal() {
        assert_eq!(parse("Z/6").unwrap(), RingDescriptor::Zmod(6));
        assert_eq!(parse("  Z / 6 ").unwrap(), RingDescriptor::Zmod(6));
    }

    #[test]
    fn dual_numbers_over_f2() {
        let r = parse("Q(Z/2,[0,0,1])").unwrap();
        assert_eq!(
            r,
            RingDescriptor::quot(
                RingDescriptor::Zmod(2),
                vec![Value::Residue(0), Value::Residue(0), Value::Residue(1)]
            )
        );
    }

    #[test]
    fn product_with_gf9() {
        let r = parse("P(Z/4,Q(Z/3,[1,0,1]))").unwrap();
        assert_eq!(
            r,
            RingDescriptor::Prod(vec![
                RingDescriptor::Zmod(4),
                RingDescriptor::quot(
                    RingDescriptor::Zmod(3),
                    vec![Value::Residue(1), Value::Residue(0), Value::Residue(1)]
                ),
            ])
        );
    }

    #[test]
    fn truncated_sugar() {
        assert_eq!(
            parse("S(Z/2,3)").unwrap(),
            RingDescriptor::truncated(RingDescriptor::Zmod(2), 3)
        );
        let nested = parse("S(Q(Z/2,[0,0,1]),4)").unwrap();
        assert_eq!(nested.order().unwrap(), 256);
        assert_eq!(nested.to_string(), "Q(Q(Z/2,[0,0,1]),[[0,0],[0,0],[0,0],[0,0],[1,0]])");
    }

    #[test]
    fn errors_carry_positions() {
        match parse("Q(Z/2,[0,0,1)") {
            Err(Error::Syntax { position, .. }) => assert_eq!(position, 12),
            other => panic!("unexpected {other:?}"),
        }
        match parse("Z/1") {
            Err(Error::Syntax { position, .. }) => assert_eq!(position, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("Z/6 x"), Err(Error::Syntax { position: 4, .. })));
        assert!(matches!(parse(""), Err(Error::Syntax { .. })));
        assert!(matches!(parse("Q(Z/3,[1])"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn non_monic_rejected() {
        assert_eq!(parse("Q(Z/3,[1,0,2])"), Err(Error::NonMonic));
        assert_eq!(parse("Q(Z/3,[1,0,0])"), Err(Error::NonMonic));
    }

    #[test]
    fn budget_is_enforced() {
        let small = SearchBudget::new(100, 100);
        assert!(matches!(
            parse_ring_spec("P(Z/11,Z/11)", &small),
            Err(Error::BudgetExceeded { required: 121, limit: 100, .. })
        ));
        assert!(parse_ring_spec("P(Z/10,Z/10)", &small).is_ok());
    }

    #[test]
    fn canonical_printer_round_trips() {
        for text in [
            "Z/6",
            "Q(Z/2,[0,0,1])",
            "P(Z/4,Q(Z/3,[1,0,1]))",
            "Q(P(Z/2,Z/3),[(1,2),(0,0),(1,1)])",
            "P(Z/2,P(Z/3,Z/5),Z/7)",
        ] {
            let r = parse(text).unwrap();
            assert_eq!(r.to_string(), text);
            assert_eq!(parse(&r.to_string()).unwrap(), r);
        }
    }

    #[test]
    fn pair_lists() {
        let ring = Ring::parse("S(Z/2,4)", &SearchBudget::default()).unwrap();
        let pairs = parse_pairs(&ring, "[(z,0),(1,[1,1])]").unwrap();
        assert_eq!(pairs.len(), 2);
        assert_eq!(pairs[0].0.to_string(), "[0,1,0,0]");
        assert!(pairs[0].1.is_zero());
        assert_eq!(pairs[1].1.to_string(), "[1,1,0,0]");
        assert!(parse_pairs(&ring, "[(1,1,1)]").is_err());
    }
}
