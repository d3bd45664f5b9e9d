//! Truncated generalized Laurent series and their exact arithmetic.
//!
//! A level-0 element is an exact rational. A level-`k` element (`k ≥ 1`) is
//! a finite sum `Σ c_e · t^e` of nonzero level-`(k-1)` coefficients at
//! rational exponents, together with a precision bound: coefficients at
//! exponents `≥ prec` are unknown, coefficients at exponents `< prec` that
//! are not stored are exactly zero. `prec = ∞` marks an exact element.
//!
//! Binary operations propagate the tightest provable precision:
//! `min(p_a, p_b)` for sums, `min(v(a)+p_b, v(b)+p_a, p_a+p_b)` for
//! products, and the geometric-series rule for quotients. Stored
//! coefficients may themselves be partially known; only coefficients that
//! are exactly zero are dropped from the map.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{format_rational, rat_int, Rational};
use num_traits::Zero;

use super::Tower;

/// Precision bound: exponents `≥` the bound carry unknown coefficients.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Prec {
    Finite(Rational),
    Infinite,
}

impl Prec {
    pub fn is_finite(&self) -> bool {
        matches!(self, Prec::Finite(_))
    }

    pub fn min(self, other: Prec) -> Prec {
        if self <= other {
            self
        } else {
            other
        }
    }

    /// Shifts a finite bound by an exponent; `∞` absorbs.
    pub fn shift(&self, e: &Rational) -> Prec {
        match self {
            Prec::Finite(p) => Prec::Finite(p + e),
            Prec::Infinite => Prec::Infinite,
        }
    }

    /// Sum of two bounds; `∞` absorbs.
    pub fn plus(&self, other: &Prec) -> Prec {
        match (self, other) {
            (Prec::Finite(a), Prec::Finite(b)) => Prec::Finite(a + b),
            _ => Prec::Infinite,
        }
    }

    /// Whether a stored exponent is below the bound.
    pub fn admits(&self, e: &Rational) -> bool {
        match self {
            Prec::Finite(p) => e < p,
            Prec::Infinite => true,
        }
    }
}

impl fmt::Display for Prec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prec::Finite(p) => write!(f, "{}", format_rational(p)),
            Prec::Infinite => write!(f, "inf"),
        }
    }
}

/// Sparse series data of a level-`k ≥ 1` element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesRep {
    pub(crate) level: usize,
    pub(crate) terms: BTreeMap<Rational, TowerElement>,
    pub(crate) prec: Prec,
}

/// An element of a tower stage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TowerElement {
    /// Level 0: an exact rational.
    Scalar(Rational),
    /// Level ≥ 1: a truncated series over the level below.
    Series(SeriesRep),
}

/// Result of looking up the coefficient at one exact exponent.
pub enum CoeffAt<'a> {
    Stored(&'a TowerElement),
    /// Absent and below the precision bound: exactly zero.
    Zero,
    /// At or above the precision bound.
    Unknown,
}

impl TowerElement {
    pub fn zero(level: usize) -> Self {
        if level == 0 {
            TowerElement::Scalar(Rational::zero())
        } else {
            TowerElement::Series(SeriesRep {
                level,
                terms: BTreeMap::new(),
                prec: Prec::Infinite,
            })
        }
    }

    pub fn one(level: usize) -> Self {
        Self::from_rational(level, rat_int(1))
    }

    pub fn from_rational(level: usize, q: Rational) -> Self {
        if level == 0 {
            TowerElement::Scalar(q)
        } else if q.is_zero() {
            Self::zero(level)
        } else {
            Self::monomial(level, rat_int(0), Self::from_rational(level - 1, q))
        }
    }

    /// `coeff · t^e` exactly, with `coeff` one level below.
    pub fn monomial(level: usize, e: Rational, coeff: TowerElement) -> Self {
        assert!(level >= 1, "monomials live at level >= 1");
        assert_eq!(coeff.level(), level - 1, "coefficient level mismatch");
        let mut terms = BTreeMap::new();
        if !coeff.is_exact_zero() {
            terms.insert(e, coeff);
        }
        TowerElement::Series(SeriesRep {
            level,
            terms,
            prec: Prec::Infinite,
        })
    }

    /// The pure placeholder `O(t^p)`: nothing known below `p`, everything
    /// below `p` exactly zero.
    pub fn big_o(level: usize, p: Rational) -> Self {
        assert!(level >= 1, "O-terms live at level >= 1");
        TowerElement::Series(SeriesRep {
            level,
            terms: BTreeMap::new(),
            prec: Prec::Finite(p),
        })
    }

    /// Normalizing constructor: drops exactly-zero coefficients and terms at
    /// or beyond the precision bound.
    pub fn series(level: usize, terms: BTreeMap<Rational, TowerElement>, prec: Prec) -> Self {
        assert!(level >= 1);
        let terms: BTreeMap<Rational, TowerElement> = terms
            .into_iter()
            .filter(|(e, c)| {
                debug_assert_eq!(c.level(), level - 1);
                prec.admits(e) && !c.is_exact_zero()
            })
            .collect();
        TowerElement::Series(SeriesRep { level, terms, prec })
    }

    pub fn level(&self) -> usize {
        match self {
            TowerElement::Scalar(_) => 0,
            TowerElement::Series(s) => s.level,
        }
    }

    pub fn prec(&self) -> Prec {
        match self {
            TowerElement::Scalar(_) => Prec::Infinite,
            TowerElement::Series(s) => s.prec.clone(),
        }
    }

    pub fn terms(&self) -> Option<&BTreeMap<Rational, TowerElement>> {
        match self {
            TowerElement::Scalar(_) => None,
            TowerElement::Series(s) => Some(&s.terms),
        }
    }

    /// Exactly the zero element (not merely zero to available precision).
    pub fn is_exact_zero(&self) -> bool {
        match self {
            TowerElement::Scalar(q) => q.is_zero(),
            TowerElement::Series(s) => s.terms.is_empty() && s.prec == Prec::Infinite,
        }
    }

    /// Certified nonzero: some known coefficient is recursively nonzero.
    pub fn is_known_nonzero(&self) -> bool {
        match self {
            TowerElement::Scalar(q) => !q.is_zero(),
            TowerElement::Series(s) => s.terms.values().any(|c| c.is_known_nonzero()),
        }
    }

    /// Whether every coefficient is exactly known (infinite precision at all
    /// levels).
    pub fn is_exact(&self) -> bool {
        match self {
            TowerElement::Scalar(_) => true,
            TowerElement::Series(s) => {
                s.prec == Prec::Infinite && s.terms.values().all(|c| c.is_exact())
            }
        }
    }

    /// Smallest stored exponent, if any.
    pub fn min_stored_exponent(&self) -> Option<&Rational> {
        match self {
            TowerElement::Scalar(_) => None,
            TowerElement::Series(s) => s.terms.keys().next(),
        }
    }

    pub fn leading(&self) -> Option<(&Rational, &TowerElement)> {
        match self {
            TowerElement::Scalar(_) => None,
            TowerElement::Series(s) => s.terms.iter().next(),
        }
    }

    /// Coefficient at the exact exponent `e`.
    pub fn coeff_at(&self, e: &Rational) -> CoeffAt<'_> {
        match self {
            TowerElement::Scalar(_) => panic!("coeff_at on a level-0 element"),
            TowerElement::Series(s) => match s.terms.get(e) {
                Some(c) => CoeffAt::Stored(c),
                None if s.prec.admits(e) => CoeffAt::Zero,
                None => CoeffAt::Unknown,
            },
        }
    }

    /// Coefficient at `e` as an owned element; unknown positions are
    /// reported as an error.
    pub fn known_coeff(&self, e: &Rational) -> Result<TowerElement> {
        match self.coeff_at(e) {
            CoeffAt::Stored(c) => Ok(c.clone()),
            CoeffAt::Zero => Ok(TowerElement::zero(self.level() - 1)),
            CoeffAt::Unknown => Err(Error::IndistinguishableFromZero(format!(
                "coefficient at exponent {} is beyond the precision bound",
                format_rational(e)
            ))),
        }
    }

    fn assert_same_level(&self, other: &TowerElement) {
        assert_eq!(
            self.level(),
            other.level(),
            "tower elements from different stages"
        );
    }

    pub fn add(&self, rhs: &TowerElement) -> TowerElement {
        self.assert_same_level(rhs);
        match (self, rhs) {
            (TowerElement::Scalar(a), TowerElement::Scalar(b)) => TowerElement::Scalar(a + b),
            (TowerElement::Series(a), TowerElement::Series(b)) => {
                let prec = a.prec.clone().min(b.prec.clone());
                let mut terms = a.terms.clone();
                for (e, c) in &b.terms {
                    match terms.remove(e) {
                        Some(existing) => {
                            let sum = existing.add(c);
                            terms.insert(e.clone(), sum);
                        }
                        None => {
                            terms.insert(e.clone(), c.clone());
                        }
                    }
                }
                TowerElement::series(a.level, terms, prec)
            }
            _ => unreachable!(),
        }
    }

    pub fn neg(&self) -> TowerElement {
        match self {
            TowerElement::Scalar(q) => TowerElement::Scalar(-q),
            TowerElement::Series(s) => TowerElement::Series(SeriesRep {
                level: s.level,
                terms: s.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
                prec: s.prec.clone(),
            }),
        }
    }

    pub fn sub(&self, rhs: &TowerElement) -> TowerElement {
        self.add(&rhs.neg())
    }

    /// Scalar multiple `q · a`, exact.
    pub fn scale(&self, q: &Rational) -> TowerElement {
        if q.is_zero() {
            return TowerElement::zero(self.level());
        }
        match self {
            TowerElement::Scalar(a) => TowerElement::Scalar(a * q),
            TowerElement::Series(s) => TowerElement::Series(SeriesRep {
                level: s.level,
                terms: s
                    .terms
                    .iter()
                    .map(|(e, c)| (e.clone(), c.scale(q)))
                    .collect(),
                prec: s.prec.clone(),
            }),
        }
    }

    /// Precision of a product: unknown tails enter scaled by the other
    /// factor's least possible exponent.
    fn mul_prec(a: &SeriesRep, b: &SeriesRep) -> Prec {
        let mut out = a.prec.plus(&b.prec);
        if let (Some(e), Prec::Finite(_)) = (a.terms.keys().next(), &b.prec) {
            out = out.min(b.prec.shift(e));
        }
        if let (Some(e), Prec::Finite(_)) = (b.terms.keys().next(), &a.prec) {
            out = out.min(a.prec.shift(e));
        }
        out
    }

    pub fn mul(&self, rhs: &TowerElement) -> TowerElement {
        self.assert_same_level(rhs);
        match (self, rhs) {
            (TowerElement::Scalar(a), TowerElement::Scalar(b)) => TowerElement::Scalar(a * b),
            (TowerElement::Series(a), TowerElement::Series(b)) => {
                let prec = Self::mul_prec(a, b);
                let mut terms: BTreeMap<Rational, TowerElement> = BTreeMap::new();
                for (ea, ca) in &a.terms {
                    for (eb, cb) in &b.terms {
                        let e = ea + eb;
                        if !prec.admits(&e) {
                            continue;
                        }
                        let prod = ca.mul(cb);
                        match terms.remove(&e) {
                            Some(existing) => {
                                terms.insert(e, existing.add(&prod));
                            }
                            None => {
                                terms.insert(e, prod);
                            }
                        }
                    }
                }
                TowerElement::series(a.level, terms, prec)
            }
            _ => unreachable!(),
        }
    }

    /// Integer power by repeated squaring; negative exponents invert first.
    pub fn pow(&self, n: i64, tower: &Tower) -> Result<TowerElement> {
        if n < 0 {
            return self.inv(tower)?.pow(-n, tower);
        }
        let mut result = TowerElement::one(self.level());
        let mut base = self.clone();
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(result)
    }

    pub fn inv(&self, tower: &Tower) -> Result<TowerElement> {
        TowerElement::one(self.level()).div(self, tower)
    }

    /// Exact quotient `a / b`, truncated to the provable precision
    /// `min(p_a - v(b), v(a) + p_b - 2·v(b))`; when that bound is infinite
    /// but the expansion does not terminate, capped at the tower window.
    ///
    /// The divisor must have a known nonzero leading coefficient that is
    /// recursively invertible, so its valuation is exactly determined.
    pub fn div(&self, rhs: &TowerElement, tower: &Tower) -> Result<TowerElement> {
        self.assert_same_level(rhs);
        match (self, rhs) {
            (TowerElement::Scalar(a), TowerElement::Scalar(b)) => {
                if b.is_zero() {
                    Err(Error::DivisionByIndistinguishableZero(
                        "rational divisor is zero".into(),
                    ))
                } else {
                    Ok(TowerElement::Scalar(a / b))
                }
            }
            (TowerElement::Series(a), TowerElement::Series(b)) => {
                let level = a.level;
                let (nb, cb) = match rhs.leading() {
                    Some((e, c)) if c.is_known_nonzero() => (e.clone(), c.clone()),
                    _ => {
                        return Err(Error::DivisionByIndistinguishableZero(format!(
                            "divisor at stage {level} has no known nonzero leading coefficient"
                        )))
                    }
                };

                // quotient precision from the truncation of both inputs
                let mut pr = a.prec.shift(&-nb.clone());
                if let Some(va) = self.min_stored_exponent() {
                    let shift = va - &nb - &nb;
                    pr = pr.min(b.prec.shift(&shift));
                }

                let va = match self.min_stored_exponent() {
                    Some(e) => e.clone(),
                    None => {
                        // no known terms: either exactly zero or a pure O-tail
                        return Ok(match &a.prec {
                            Prec::Infinite => TowerElement::zero(level),
                            Prec::Finite(p) => TowerElement::big_o(level, p - &nb),
                        });
                    }
                };

                let e0 = &va - &nb;
                let bound = match &pr {
                    Prec::Finite(p) => p.clone(),
                    Prec::Infinite => &e0 + tower.window(level),
                };
                // quotient exponents live in the lattice generated by the
                // operands' exponents, which may be finer than the tower's
                // configured one (basis elements of ramified extensions)
                let step = {
                    let mut denom = tower.lattice_step(level).denom().clone();
                    for e in a.terms.keys().chain(b.terms.keys()) {
                        denom = crate::rational::lcm(&denom, e.denom());
                    }
                    Rational::new(1.into(), denom)
                };

                let mut q_terms: BTreeMap<Rational, TowerElement> = BTreeMap::new();
                let mut r = self.clone();
                let mut e = e0;
                let final_prec = loop {
                    if r.is_exact_zero() {
                        // expansion terminated: the quotient is exact up to pr
                        break pr;
                    }
                    if e >= bound {
                        break Prec::Finite(bound);
                    }
                    let target = &e + &nb;
                    let ce = match r.coeff_at(&target) {
                        CoeffAt::Stored(c) => c.clone(),
                        CoeffAt::Zero => {
                            e += &step;
                            continue;
                        }
                        CoeffAt::Unknown => break Prec::Finite(e),
                    };
                    let qc = ce.div(&cb, tower)?;
                    if !qc.is_exact_zero() {
                        let piece = TowerElement::monomial(level, e.clone(), qc.clone());
                        r = r.sub(&piece.mul(rhs));
                        q_terms.insert(e.clone(), qc);
                    }
                    e += &step;
                };
                Ok(TowerElement::series(level, q_terms, final_prec))
            }
            _ => unreachable!(),
        }
    }

    /// The stage derivation: the level-below derivation applied
    /// coefficientwise plus the formal `d/dt` with `(d/dt) t^q = q·t^(q-1)`.
    /// The precision bound drops by 1 in the top exponent; level 0 has the
    /// zero derivation.
    pub fn derive(&self) -> TowerElement {
        match self {
            TowerElement::Scalar(_) => TowerElement::Scalar(Rational::zero()),
            TowerElement::Series(s) => {
                let mut terms: BTreeMap<Rational, TowerElement> = BTreeMap::new();
                let mut put = |e: Rational, c: TowerElement| {
                    if c.is_exact_zero() {
                        return;
                    }
                    match terms.remove(&e) {
                        Some(existing) => {
                            terms.insert(e, existing.add(&c));
                        }
                        None => {
                            terms.insert(e, c);
                        }
                    }
                };
                for (e, c) in &s.terms {
                    put(e.clone(), c.derive());
                    if !e.is_zero() {
                        put(e - rat_int(1), c.scale(e));
                    }
                }
                let prec = s.prec.shift(&rat_int(-1));
                TowerElement::series(s.level, terms, prec)
            }
        }
    }

    /// `n`-fold derivative.
    pub fn derive_n(&self, n: u32) -> TowerElement {
        let mut out = self.clone();
        for _ in 0..n {
            out = out.derive();
        }
        out
    }

    /// Truncates to the coarser of the current and given bound.
    pub fn truncate(&self, p: &Prec) -> TowerElement {
        match self {
            TowerElement::Scalar(_) => self.clone(),
            TowerElement::Series(s) => {
                let prec = s.prec.clone().min(p.clone());
                TowerElement::series(s.level, s.terms.clone(), prec)
            }
        }
    }

    /// Embeds into a higher stage as a constant in the new variables.
    pub fn lift_to(&self, level: usize) -> TowerElement {
        assert!(level >= self.level(), "cannot lower a tower element");
        let mut out = self.clone();
        while out.level() < level {
            let next = out.level() + 1;
            out = TowerElement::monomial(next, rat_int(0), out);
        }
        out
    }

    /// Agreement of the known parts below the shared precision bound.
    pub fn eq_to_shared_prec(&self, other: &TowerElement) -> bool {
        if self.level() != other.level() {
            return false;
        }
        match (self, other) {
            (TowerElement::Scalar(a), TowerElement::Scalar(b)) => a == b,
            (TowerElement::Series(a), TowerElement::Series(b)) => {
                let prec = a.prec.clone().min(b.prec.clone());
                let zero = TowerElement::zero(a.level - 1);
                let mut exps: Vec<&Rational> = a.terms.keys().chain(b.terms.keys()).collect();
                exps.sort();
                exps.dedup();
                for e in exps {
                    if !prec.admits(e) {
                        continue;
                    }
                    let ca = a.terms.get(e).unwrap_or(&zero);
                    let cb = b.terms.get(e).unwrap_or(&zero);
                    if !ca.eq_to_shared_prec(cb) {
                        return false;
                    }
                }
                true
            }
            _ => unreachable!(),
        }
    }
}

/// Field operation kinds for the checked entry point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithKind {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked arithmetic: reports stage mismatches as errors instead of
/// panicking; division errors propagate.
pub fn arith(
    a: &TowerElement,
    b: &TowerElement,
    kind: ArithKind,
    tower: &Tower,
) -> Result<TowerElement> {
    if a.level() != b.level() {
        return Err(Error::LevelMismatch {
            expected: a.level(),
            found: b.level(),
        });
    }
    match kind {
        ArithKind::Add => Ok(a.add(b)),
        ArithKind::Sub => Ok(a.sub(b)),
        ArithKind::Mul => Ok(a.mul(b)),
        ArithKind::Div => a.div(b, tower),
    }
}

impl fmt::Display for TowerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::text::format_series(self))
    }
}
