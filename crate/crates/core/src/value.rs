//! The composed value group of an iterated series tower.
//!
//! A stage-`k` element takes values in `Q^k` with an added `∞` for zero.
//! Comparison is reverse-lexicographic: the *last* coordinate (the outermost
//! series variable) is the most significant. Extending the tower appends a
//! new last coordinate, and old values embed with `0` there, so every element
//! with a strictly positive new coordinate exceeds the whole old group.

use std::cmp::Ordering;
use std::fmt;

use crate::rational::{format_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValueVec {
    /// Valuation of zero; strictly greater than every finite value.
    Infinity,
    Finite(Vec<Rational>),
}

/// Reverse-lexicographic comparison of two coordinate slices of equal length.
pub fn rev_lex_cmp(a: &[Rational], b: &[Rational]) -> Ordering {
    assert_eq!(a.len(), b.len(), "comparing values of different stages");
    for (x, y) in a.iter().rev().zip(b.iter().rev()) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            ord => return ord,
        }
    }
    Ordering::Equal
}

impl ValueVec {
    pub fn zero(len: usize) -> Self {
        ValueVec::Finite(vec![Rational::from_integer(0.into()); len])
    }

    pub fn finite(coords: Vec<Rational>) -> Self {
        ValueVec::Finite(coords)
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, ValueVec::Infinity)
    }

    pub fn coords(&self) -> Option<&[Rational]> {
        match self {
            ValueVec::Infinity => None,
            ValueVec::Finite(c) => Some(c),
        }
    }

    /// Compares two values of the same stage. Panics on stage mismatch.
    pub fn cmp_value(&self, other: &ValueVec) -> Ordering {
        match (self, other) {
            (ValueVec::Infinity, ValueVec::Infinity) => Ordering::Equal,
            (ValueVec::Infinity, _) => Ordering::Greater,
            (_, ValueVec::Infinity) => Ordering::Less,
            (ValueVec::Finite(a), ValueVec::Finite(b)) => rev_lex_cmp(a, b),
        }
    }

    pub fn gt(&self, other: &ValueVec) -> bool {
        self.cmp_value(other) == Ordering::Greater
    }

    pub fn ge(&self, other: &ValueVec) -> bool {
        self.cmp_value(other) != Ordering::Less
    }

    /// Coordinatewise sum; `∞` absorbs.
    pub fn add(&self, other: &ValueVec) -> ValueVec {
        match (self, other) {
            (ValueVec::Finite(a), ValueVec::Finite(b)) => {
                assert_eq!(a.len(), b.len(), "adding values of different stages");
                ValueVec::Finite(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            _ => ValueVec::Infinity,
        }
    }

    /// Coordinatewise difference of finite values; `∞ - γ = ∞`.
    /// Panics when subtracting from `∞` on the right.
    pub fn sub(&self, other: &ValueVec) -> ValueVec {
        match (self, other) {
            (ValueVec::Infinity, ValueVec::Finite(_)) => ValueVec::Infinity,
            (ValueVec::Finite(a), ValueVec::Finite(b)) => {
                assert_eq!(a.len(), b.len(), "subtracting values of different stages");
                ValueVec::Finite(a.iter().zip(b).map(|(x, y)| x - y).collect())
            }
            _ => panic!("cannot subtract infinity"),
        }
    }

    pub fn double(&self) -> ValueVec {
        self.add(self)
    }

    /// Embeds into a taller stage by appending zero coordinates at the end.
    pub fn extend_to(&self, len: usize) -> ValueVec {
        match self {
            ValueVec::Infinity => ValueVec::Infinity,
            ValueVec::Finite(c) => {
                assert!(c.len() <= len, "cannot shrink a value vector");
                let mut c = c.clone();
                c.resize(len, Rational::from_integer(0.into()));
                ValueVec::Finite(c)
            }
        }
    }
}

impl PartialOrd for ValueVec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (ValueVec::Finite(a), ValueVec::Finite(b)) if a.len() != b.len() => None,
            _ => Some(self.cmp_value(other)),
        }
    }
}

impl fmt::Display for ValueVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueVec::Infinity => write!(f, "inf"),
            ValueVec::Finite(c) => {
                write!(f, "(")?;
                for (i, q) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{}", format_rational(q))?;
                }
                write!(f, ")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn v(coords: &[i64]) -> ValueVec {
        ValueVec::finite(coords.iter().map(|&n| rat_int(n)).collect())
    }

    #[test]
    fn last_coordinate_dominates() {
        // v(t1) = (0,1) > v(t0^n) = (n,0) for all n.
        for n in [1, 5, 1000] {
            assert!(v(&[0, 1]).gt(&v(&[n, 0])));
        }
        // t0 * t1^-1 has value (1,-1) < (0,0).
        assert!(v(&[0, 0]).gt(&v(&[1, -1])));
    }

    #[test]
    fn infinity_is_top() {
        assert!(ValueVec::Infinity.gt(&v(&[100, 100])));
        assert!(!v(&[1, 1]).gt(&ValueVec::Infinity));
        assert_eq!(
            ValueVec::Infinity.cmp_value(&ValueVec::Infinity),
            Ordering::Equal
        );
    }

    #[test]
    fn order_compatible_with_addition() {
        let a = v(&[3, 1]);
        let b = v(&[0, 2]);
        let c = ValueVec::finite(vec![rat(1, 2), rat(-5, 3)]);
        assert!(b.gt(&a));
        assert!(b.add(&c).gt(&a.add(&c)));
    }

    #[test]
    fn extension_embeds_below_new_coordinate() {
        let old = v(&[7]);
        assert_eq!(old.extend_to(2), v(&[7, 0]));
        // anything with positive last coordinate exceeds every extended old value
        assert!(v(&[-100, 1]).gt(&old.extend_to(2)));
    }
}
