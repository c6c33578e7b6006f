//! Exact ordinal arithmetic in Cantor normal form.
//!
//! An [`Ordinal`] is a finite sum `w^e1*c1 + ... + w^ek*ck` with strictly
//! decreasing exponents (themselves ordinals) and positive integer
//! coefficients. The empty sum is 0. Canonical form is enforced at
//! construction, so equality is structural and the derived lexicographic
//! order on term lists coincides with the ordinal order.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Term {
    exponent: Ordinal,
    coefficient: BigUint,
}

/// An ordinal below epsilon-zero in Cantor normal form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Ordinal {
    terms: Vec<Term>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Ordinal::from_nat(1u32)
    }

    pub fn omega() -> Self {
        Ordinal::omega_pow(&Ordinal::one())
    }

    pub fn from_nat<N: Into<BigUint>>(n: N) -> Self {
        let n = n.into();
        if n.is_zero() {
            Ordinal::zero()
        } else {
            Ordinal {
                terms: vec![Term {
                    exponent: Ordinal::zero(),
                    coefficient: n,
                }],
            }
        }
    }

    /// `w^a` as a single-term normal form.
    pub fn omega_pow(a: &Ordinal) -> Self {
        Ordinal {
            terms: vec![Term {
                exponent: a.clone(),
                coefficient: BigUint::one(),
            }],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The first normal-form term `(exponent, coefficient)`; `None` for 0.
    pub fn leading(&self) -> Option<(&Ordinal, &BigUint)> {
        self.terms.first().map(|t| (&t.exponent, &t.coefficient))
    }

    /// The normal-form terms in order of decreasing exponent.
    pub fn terms(&self) -> impl Iterator<Item = (&Ordinal, &BigUint)> {
        self.terms.iter().map(|t| (&t.exponent, &t.coefficient))
    }

    /// Rebuilds an ordinal from decreasing terms; used to peel terms off.
    pub fn from_terms<'a>(terms: impl IntoIterator<Item = (&'a Ordinal, &'a BigUint)>) -> Ordinal {
        let mut acc = Ordinal::zero();
        for (e, c) in terms {
            let t = Ordinal {
                terms: vec![Term {
                    exponent: e.clone(),
                    coefficient: c.clone(),
                }],
            };
            acc = acc.add(&t);
        }
        acc
    }

    /// Returns the natural-number value when every term has exponent 0.
    pub fn as_nat(&self) -> Option<BigUint> {
        match self.terms.len() {
            0 => Some(BigUint::zero()),
            1 if self.terms[0].exponent.is_zero() => Some(self.terms[0].coefficient.clone()),
            _ => None,
        }
    }

    /// True when every exponent in the term list is a natural number,
    /// i.e. the ordinal is below `w^w`.
    pub fn below_omega_pow_omega(&self) -> bool {
        self.terms.iter().all(|t| t.exponent.as_nat().is_some())
    }

    /// True for 0 and for ordinals whose last term has exponent 0.
    pub fn is_successor(&self) -> bool {
        self.terms
            .last()
            .map(|t| t.exponent.is_zero())
            .unwrap_or(false)
    }

    /// Ordinal addition. Terms on the left with exponent below the leading
    /// exponent of the right operand are absorbed.
    pub fn add(&self, rhs: &Ordinal) -> Ordinal {
        let Some((e, c)) = rhs.leading() else {
            return self.clone();
        };
        let keep = self.terms.iter().take_while(|t| t.exponent > *e).count();
        let mut terms: Vec<Term> = self.terms[..keep].to_vec();
        let mut first = Term {
            exponent: e.clone(),
            coefficient: c.clone(),
        };
        if keep < self.terms.len() && self.terms[keep].exponent == *e {
            first.coefficient += &self.terms[keep].coefficient;
        }
        terms.push(first);
        terms.extend(rhs.terms[1..].iter().cloned());
        Ordinal { terms }
    }

    pub fn succ(&self) -> Ordinal {
        self.add(&Ordinal::one())
    }

    /// `self * k` for a natural number `k` (repeated ordinal addition).
    pub fn times_nat(&self, k: usize) -> Ordinal {
        if k == 0 || self.is_zero() {
            return Ordinal::zero();
        }
        let mut terms = self.terms.clone();
        terms[0].coefficient = &terms[0].coefficient * BigUint::from(k);
        Ordinal { terms }
    }

    /// `self * w`, the supremum of `self * n` over all naturals. Equals
    /// `w^(e+1)` where `e` is the leading exponent.
    ///
    /// Panics when `self` is 0.
    pub fn omega_step(&self) -> Ordinal {
        let (e, _) = self
            .leading()
            .expect("omega_step requires a positive ordinal");
        Ordinal::omega_pow(&e.succ())
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            if t.exponent.is_zero() {
                write!(f, "{}", t.coefficient)?;
                continue;
            }
            if t.exponent == Ordinal::one() {
                write!(f, "w")?;
            } else {
                write!(f, "w^({})", t.exponent)?;
            }
            if !t.coefficient.is_one() {
                write!(f, "*{}", t.coefficient)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Ordinal text parse failure, with the byte offset of the offending input.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("ordinal parse error at byte {pos}: {message}")]
pub struct ParseOrdinalError {
    pub pos: usize,
    pub message: String,
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseOrdinalError> {
        Err(ParseOrdinalError {
            pos: self.pos,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn parse_nat(&mut self) -> Result<BigUint, ParseOrdinalError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        Ok(text.parse().unwrap())
    }

    // term := 'w' ['^' '(' ordinal ')'] ['*' nat] | nat
    fn parse_term(&mut self) -> Result<Ordinal, ParseOrdinalError> {
        if self.eat(b'w') {
            let exponent = if self.eat(b'^') {
                if !self.eat(b'(') {
                    return self.err("expected `(` after `^`");
                }
                let inner = self.parse_ordinal()?;
                if !self.eat(b')') {
                    return self.err("expected `)`");
                }
                inner
            } else {
                Ordinal::one()
            };
            let coefficient = if self.eat(b'*') {
                let c = self.parse_nat()?;
                if c.is_zero() {
                    return self.err("coefficient must be positive");
                }
                c
            } else {
                BigUint::one()
            };
            Ok(Ordinal {
                terms: vec![Term {
                    exponent,
                    coefficient,
                }],
            })
        } else {
            Ok(Ordinal::from_nat(self.parse_nat()?))
        }
    }

    fn parse_ordinal(&mut self) -> Result<Ordinal, ParseOrdinalError> {
        let mut acc = self.parse_term()?;
        while self.eat(b'+') {
            let t = self.parse_term()?;
            acc = acc.add(&t);
        }
        Ok(acc)
    }
}

impl FromStr for Ordinal {
    type Err = ParseOrdinalError;

    /// Parses the grammar `ordinal := term ('+' term)*` with
    /// `term := 'w' ['^' '(' ordinal ')'] ['*' nat] | nat`. Terms are combined
    /// by ordinal addition, so any well-formed text denotes an ordinal and
    /// `parse(format(a)) == a`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser {
            bytes: s.as_bytes(),
            pos: 0,
        };
        let o = p.parse_ordinal()?;
        if p.pos != p.bytes.len() {
            return p.err("trailing input");
        }
        Ok(o)
    }
}
