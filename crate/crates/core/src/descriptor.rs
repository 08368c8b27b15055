//! Algebraic descriptions of finite commutative rings and their element values.

use std::fmt;

use crate::error::{Error, Result};

/// A finite commutative ring with unity, described structurally.
///
/// `Quot` stores the full monic modulus `g_0, ..., g_d` (little-endian, `g_d` the
/// base one), representing `base[x]/(g)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingDescriptor {
    Zmod(u64),
    Quot {
        base: Box<RingDescriptor>,
        modulus: Vec<Value>,
    },
    Prod(Vec<RingDescriptor>),
}

/// Normal form of an element, shaped like its ring descriptor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Residue(u64),
    Coeffs(Vec<Value>),
    Tuple(Vec<Value>),
}

impl RingDescriptor {
    pub fn zmod(n: u64) -> Self {
        RingDescriptor::Zmod(n)
    }

    pub fn quot(base: RingDescriptor, modulus: Vec<Value>) -> Self {
        RingDescriptor::Quot {
            base: Box::new(base),
            modulus,
        }
    }

    pub fn prod(factors: Vec<RingDescriptor>) -> Self {
        RingDescriptor::Prod(factors)
    }

    /// `base[z]/(z^n)`, written `S(base,n)` in ring specs.
    pub fn truncated(base: RingDescriptor, n: usize) -> Self {
        let zero = base.zero_value();
        let one = base.one_value();
        let mut modulus = vec![zero; n];
        modulus.push(one);
        Self::quot(base, modulus)
    }

    /// Degree of the modulus for `Quot`, `None` otherwise.
    pub fn degree(&self) -> Option<usize> {
        match self {
            RingDescriptor::Quot { modulus, .. } => Some(modulus.len().saturating_sub(1)),
            _ => None,
        }
    }

    pub fn order(&self) -> Result<u64> {
        match self {
            RingDescriptor::Zmod(n) => Ok(*n),
            RingDescriptor::Quot { base, modulus } => {
                let b = base.order()?;
                let d = modulus.len().saturating_sub(1) as u32;
                b.checked_pow(d).ok_or(Error::OrderOverflow)
            }
            RingDescriptor::Prod(factors) => factors.iter().try_fold(1u64, |acc, f| {
                acc.checked_mul(f.order()?).ok_or(Error::OrderOverflow)
            }),
        }
    }

    pub fn zero_value(&self) -> Value {
        match self {
            RingDescriptor::Zmod(_) => Value::Residue(0),
            RingDescriptor::Quot { base, modulus } => {
                Value::Coeffs(vec![base.zero_value(); modulus.len().saturating_sub(1)])
            }
            RingDescriptor::Prod(factors) => {
                Value::Tuple(factors.iter().map(|f| f.zero_value()).collect())
            }
        }
    }

    pub fn one_value(&self) -> Value {
        match self {
            RingDescriptor::Zmod(_) => Value::Residue(1),
            RingDescriptor::Quot { base, modulus } => {
                let d = modulus.len().saturating_sub(1);
                let mut coeffs = vec![base.zero_value(); d];
                if let Some(c) = coeffs.first_mut() {
                    *c = base.one_value();
                }
                Value::Coeffs(coeffs)
            }
            RingDescriptor::Prod(factors) => {
                Value::Tuple(factors.iter().map(|f| f.one_value()).collect())
            }
        }
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingDescriptor::Zmod(n) => write!(f, "Z/{n}"),
            RingDescriptor::Quot { base, modulus } => {
                write!(f, "Q({base},")?;
                write_list(f, modulus, '[', ']')?;
                write!(f, ")")
            }
            RingDescriptor::Prod(factors) => {
                write!(f, "P(")?;
                for (i, factor) in factors.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{factor}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Residue(k) => write!(f, "{k}"),
            Value::Coeffs(c) => write_list(f, c, '[', ']'),
            Value::Tuple(t) => write_list(f, t, '(', ')'),
        }
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, items: &[Value], open: char, close: char) -> fmt::Result {
    write!(f, "{open}")?;
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{item}")?;
    }
    write!(f, "{close}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncated_sugar_matches_explicit_quotient() {
        let s = RingDescriptor::truncated(RingDescriptor::zmod(2), 3);
        assert_eq!(s.to_string(), "Q(Z/2,[0,0,0,1])");
        assert_eq!(s.order().unwrap(), 8);
        assert_eq!(s.degree(), Some(3));
    }

    #[test]
    fn order_overflow_is_reported() {
        let big = RingDescriptor::truncated(RingDescriptor::zmod(1 << 20), 4);
        assert_eq!(big.order(), Err(Error::OrderOverflow));
    }

    #[test]
    fn nested_display() {
        let r = RingDescriptor::prod(vec![
            RingDescriptor::zmod(4),
            RingDescriptor::quot(
                RingDescriptor::zmod(3),
                vec![Value::Residue(1), Value::Residue(0), Value::Residue(1)],
            ),
        ]);
        assert_eq!(r.to_string(), "P(Z/4,Q(Z/3,[1,0,1]))");
        assert_eq!(r.order().unwrap(), 36);
        assert_eq!(
            r.one_value().to_string(),
            "(1,[1,0])"
        );
    }
}
