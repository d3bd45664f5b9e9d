//! Sparse differential polynomials over a tower stage.
//!
//! `K{x1,…,xm}` is the polynomial ring in the formal variables `x_i^(j)`
//! equipped with the derivation sending `x_i^(j)` to `x_i^(j+1)` and acting
//! on coefficients through the stage derivation. Monomials map a
//! `(variable, derivative order)` pair to its exponent; terms are kept in
//! degree-lexicographic normal form with no exactly-zero coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::rat_int;
use crate::tower::Prec;
use crate::tower::TowerElement;

/// A power product of formal variables `x_var^(order)`, exponents ≥ 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    powers: BTreeMap<(usize, u32), u32>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial {
            powers: BTreeMap::new(),
        }
    }

    pub fn var(var: usize, order: u32) -> Self {
        let mut powers = BTreeMap::new();
        powers.insert((var, order), 1);
        Monomial { powers }
    }

    pub fn is_empty(&self) -> bool {
        self.powers.is_empty()
    }

    pub fn powers(&self) -> &BTreeMap<(usize, u32), u32> {
        &self.powers
    }

    pub fn degree(&self) -> u32 {
        self.powers.values().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut powers = self.powers.clone();
        for (&k, &e) in &other.powers {
            *powers.entry(k).or_insert(0) += e;
        }
        Monomial { powers }
    }

    /// Divides out one occurrence of `x_var^(order)`; `None` if absent.
    pub fn without_one(&self, var: usize, order: u32) -> Option<Monomial> {
        let mut powers = self.powers.clone();
        match powers.get_mut(&(var, order)) {
            Some(e) if *e > 1 => {
                *e -= 1;
            }
            Some(_) => {
                powers.remove(&(var, order));
            }
            None => return None,
        }
        Some(Monomial { powers })
    }

    pub fn exponent_of(&self, var: usize, order: u32) -> u32 {
        self.powers.get(&(var, order)).copied().unwrap_or(0)
    }

    pub fn involves(&self, var: usize) -> bool {
        self.powers.keys().any(|&(v, _)| v == var)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        // degree-lexicographic on (var, order) pairs
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.powers.cmp(&other.powers))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A jet: values for the formal variables, `vars[i][j]` standing for
/// `x_i^(j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Jet {
    vars: Vec<Vec<TowerElement>>,
}

impl Jet {
    pub fn new(vars: Vec<Vec<TowerElement>>) -> Self {
        Jet { vars }
    }

    /// Jet of a single variable.
    pub fn single(values: Vec<TowerElement>) -> Self {
        Jet { vars: vec![values] }
    }

    pub fn get(&self, var: usize, order: u32) -> Option<&TowerElement> {
        self.vars.get(var)?.get(order as usize)
    }

    pub fn var_len(&self, var: usize) -> usize {
        self.vars.get(var).map_or(0, |v| v.len())
    }

    pub fn vars(&self) -> &[Vec<TowerElement>] {
        &self.vars
    }
}

/// Sparse differential polynomial with coefficients at a fixed tower stage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffPoly {
    num_vars: usize,
    level: usize,
    terms: BTreeMap<Monomial, TowerElement>,
}

impl DiffPoly {
    pub fn zero(num_vars: usize, level: usize) -> Self {
        DiffPoly {
            num_vars,
            level,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, c: TowerElement) -> Self {
        let level = c.level();
        let mut terms = BTreeMap::new();
        if !c.is_exact_zero() {
            terms.insert(Monomial::one(), c);
        }
        DiffPoly {
            num_vars,
            level,
            terms,
        }
    }

    pub fn constant_one(num_vars: usize, level: usize) -> Self {
        Self::constant(num_vars, TowerElement::one(level))
    }

    /// The formal variable `x_var^(order)`.
    pub fn variable(num_vars: usize, level: usize, var: usize, order: u32) -> Self {
        assert!(var < num_vars, "variable index out of range");
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(var, order), TowerElement::one(level));
        DiffPoly {
            num_vars,
            level,
            terms,
        }
    }

    pub fn from_terms(
        num_vars: usize,
        level: usize,
        terms: impl IntoIterator<Item = (Monomial, TowerElement)>,
    ) -> Self {
        let mut out = DiffPoly::zero(num_vars, level);
        for (m, c) in terms {
            out.accumulate(m, c);
        }
        out
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter_terms(&self) -> impl Iterator<Item = (&Monomial, &TowerElement)> {
        self.terms.iter()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_empty())
    }

    /// The coefficient of the empty monomial, provided no variable occurs.
    pub fn constant_coefficient(&self) -> Option<TowerElement> {
        if !self.is_constant() {
            return None;
        }
        Some(
            self.terms
                .get(&Monomial::one())
                .cloned()
                .unwrap_or_else(|| TowerElement::zero(self.level)),
        )
    }

    fn accumulate(&mut self, m: Monomial, c: TowerElement) {
        if c.is_exact_zero() {
            return;
        }
        match self.terms.remove(&m) {
            Some(existing) => {
                let sum = existing.add(&c);
                if !sum.is_exact_zero() {
                    self.terms.insert(m, sum);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn assert_compatible(&self, other: &DiffPoly) {
        assert_eq!(self.num_vars, other.num_vars, "variable count mismatch");
        assert_eq!(self.level, other.level, "coefficient stage mismatch");
    }

    pub fn add(&self, other: &DiffPoly) -> DiffPoly {
        self.assert_compatible(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.accumulate(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> DiffPoly {
        DiffPoly {
            num_vars: self.num_vars,
            level: self.level,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &DiffPoly) -> DiffPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &DiffPoly) -> DiffPoly {
        self.assert_compatible(other);
        let mut out = DiffPoly::zero(self.num_vars, self.level);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.accumulate(ma.mul(mb), ca.mul(cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &TowerElement) -> DiffPoly {
        let mut out = DiffPoly::zero(self.num_vars, self.level);
        for (m, coeff) in &self.terms {
            out.accumulate(m.clone(), coeff.mul(c));
        }
        out
    }

    /// Embeds the coefficients into a higher tower stage.
    pub fn lift_to(&self, level: usize) -> DiffPoly {
        DiffPoly {
            num_vars: self.num_vars,
            level,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.lift_to(level)))
                .collect(),
        }
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.involves(var))
    }

    /// The largest `n` such that `x_var^(n)` occurs.
    pub fn order(&self, var: usize) -> Result<u32> {
        self.terms
            .keys()
            .flat_map(|m| m.powers().keys())
            .filter(|&&(v, _)| v == var)
            .map(|&(_, j)| j)
            .max()
            .ok_or(Error::VariableAbsent(var))
    }

    /// Largest derivative order of `var`, 0 when absent.
    pub fn order_or_zero(&self, var: usize) -> u32 {
        self.order(var).unwrap_or(0)
    }

    /// The polynomial with every monomial involving `x_var^(order)`
    /// removed. For a polynomial linear in that variable this is the exact
    /// complement of `partial(var, order) · x_var^(order)`, structurally —
    /// subtraction would leave placeholder ghosts when coefficients are
    /// truncated.
    pub fn without_variable(&self, var: usize, order: u32) -> DiffPoly {
        DiffPoly {
            num_vars: self.num_vars,
            level: self.level,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exponent_of(var, order) == 0)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Formal partial derivative with respect to `x_var^(order)`.
    pub fn partial(&self, var: usize, order: u32) -> DiffPoly {
        let mut out = DiffPoly::zero(self.num_vars, self.level);
        for (m, c) in &self.terms {
            let e = m.exponent_of(var, order);
            if e == 0 {
                continue;
            }
            let m2 = m.without_one(var, order).expect("exponent checked");
            out.accumulate(m2, c.scale(&rat_int(i64::from(e))));
        }
        out
    }

    /// Separant: the partial derivative with respect to the highest-order
    /// occurrence of `var`.
    pub fn separant(&self, var: usize) -> Result<DiffPoly> {
        let n = self.order(var)?;
        Ok(self.partial(var, n))
    }

    /// The ring derivation: coefficients move by the stage derivation,
    /// each `x^(j)` occurrence shifts to `x^(j+1)` by the product rule.
    pub fn ring_derive(&self) -> DiffPoly {
        let mut out = DiffPoly::zero(self.num_vars, self.level);
        for (m, c) in &self.terms {
            out.accumulate(m.clone(), c.derive());
            for (&(var, order), &e) in m.powers() {
                let lowered = m.without_one(var, order).expect("present");
                let shifted = lowered.mul(&Monomial::var(var, order + 1));
                out.accumulate(shifted, c.scale(&rat_int(i64::from(e))));
            }
        }
        out
    }

    /// Plain polynomial evaluation of `f_alg`: substitutes jet entries for
    /// the formal variables, forgetting the derivation.
    pub fn alg_eval(&self, jet: &Jet) -> Result<TowerElement> {
        let mut sum = TowerElement::zero(self.level);
        for (m, c) in &self.terms {
            let mut prod = c.clone();
            for (&(var, order), &e) in m.powers() {
                let entry = jet.get(var, order).ok_or(Error::JetTooShort {
                    var,
                    order,
                    have: jet.var_len(var),
                })?;
                assert_eq!(entry.level(), self.level, "jet entry stage mismatch");
                for _ in 0..e {
                    prod = prod.mul(entry);
                }
            }
            sum = sum.add(&prod);
        }
        Ok(sum)
    }

    /// Differential evaluation `f(a1,…,am)`: builds each variable's jet
    /// with the stage derivation, then evaluates algebraically.
    pub fn diff_eval(&self, args: &[TowerElement]) -> Result<TowerElement> {
        assert_eq!(args.len(), self.num_vars, "argument count mismatch");
        let mut vars = Vec::with_capacity(args.len());
        for (v, a) in args.iter().enumerate() {
            let n = self.order_or_zero(v);
            let mut jets = Vec::with_capacity(n as usize + 1);
            let mut cur = a.clone();
            for k in 0..=n {
                if k > 0 {
                    cur = cur.derive();
                }
                // a derivative that knows nothing at or below order zero
                // cannot even rule out poles
                let exhausted = cur.terms().is_some_and(|t| t.is_empty())
                    && matches!(cur.prec(), Prec::Finite(p) if p <= rat_int(0));
                if self.involves(v) && k > 0 && exhausted && a.is_known_nonzero() {
                    return Err(Error::InsufficientPrecision(format!(
                        "derivative {k} of argument {} has no known coefficients",
                        v + 1
                    )));
                }
                jets.push(cur.clone());
            }
            vars.push(jets);
        }
        self.alg_eval(&Jet::new(vars))
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::text::format_diff_poly(self))
    }
}

/// Picks the unique factor vanishing algebraically at the jet.
///
/// When the product of the factors vanishes at a point where its separant
/// does not, exactly one factor vanishes there; it has the full order and a
/// nonvanishing separant. Anything else means the inputs were not a genuine
/// factorisation at a non-degenerate point.
pub fn select_vanishing_factor(factors: &[DiffPoly], jet: &Jet) -> Result<usize> {
    let mut vanishing = Vec::new();
    for (i, g) in factors.iter().enumerate() {
        let value = g.alg_eval(jet)?;
        if value.is_exact_zero() {
            vanishing.push(i);
        } else if !value.is_known_nonzero() {
            return Err(Error::IndistinguishableFromZero(format!(
                "factor {i} evaluates to an element indistinguishable from zero"
            )));
        }
    }
    match vanishing.as_slice() {
        [] => Err(Error::NoVanishingFactor),
        [i] => {
            let g = &factors[*i];
            let full_order = factors
                .iter()
                .filter_map(|f| f.order(0).ok())
                .max()
                .ok_or(Error::VariableAbsent(0))?;
            let g_order = g.order(0).map_err(|_| {
                Error::DegeneratePoint("vanishing factor does not involve the variable".into())
            })?;
            if g_order != full_order {
                return Err(Error::DegeneratePoint(format!(
                    "vanishing factor has order {g_order}, product has order {full_order}"
                )));
            }
            let sep = g.separant(0)?.alg_eval(jet)?;
            if !sep.is_known_nonzero() {
                return Err(Error::DegeneratePoint(
                    "separant of the vanishing factor vanishes at the point".into(),
                ));
            }
            Ok(*i)
        }
        many => Err(Error::MultipleVanishingFactors(many.to_vec())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};
    use crate::text::parse_diff_poly;
    use crate::tower::Tower;

    fn p(src: &str) -> DiffPoly {
        parse_diff_poly(src, &Tower::base(), None).unwrap()
    }

    fn scalar(n: i64) -> TowerElement {
        TowerElement::Scalar(rat_int(n))
    }

    #[test]
    fn order_reads_the_top_derivative() {
        assert_eq!(p("x1'' + x1*x1'").order(0).unwrap(), 2);
        assert_eq!(p("x1").order(0).unwrap(), 0);
        assert_eq!(p("x1'^3 - x1").order(0).unwrap(), 1);
        assert_eq!(p("3").order(0).unwrap_err().name(), "VariableAbsent");
    }

    fn p1(src: &str) -> DiffPoly {
        parse_diff_poly(src, &Tower::base(), Some(1)).unwrap()
    }

    #[test]
    fn separant_examples() {
        assert_eq!(p("x1'' + x1*x1'").separant(0).unwrap(), p1("1"));
        assert_eq!(p("x1'^2 - x1").separant(0).unwrap(), p1("2*x1'"));
        assert_eq!(p("x1' - x1").separant(0).unwrap(), p1("1"));
    }

    #[test]
    fn ring_derivation_examples() {
        assert_eq!(p("x1' - x1").ring_derive(), p("x1'' - x1'"));
        assert_eq!(p("x1'^2 - x1").ring_derive(), p("2*x1'*x1'' - x1'"));
        assert!(p("5").ring_derive().is_zero());
    }

    #[test]
    fn ring_derivation_moves_series_coefficients() {
        let t = Tower::laurent(1);
        let f = parse_diff_poly("t0*x1", &t, None).unwrap();
        let expected = parse_diff_poly("x1 + t0*x1'", &t, None).unwrap();
        assert_eq!(f.ring_derive(), expected);
    }

    #[test]
    fn algebraic_evaluation() {
        let jet = Jet::single(vec![scalar(1), scalar(1)]);
        assert!(p("x1' - x1").alg_eval(&jet).unwrap().is_exact_zero());
        assert!(p("x1'^2 - x1").alg_eval(&jet).unwrap().is_exact_zero());
        assert_eq!(
            p("x1'^2 - x1")
                .separant(0)
                .unwrap()
                .alg_eval(&jet)
                .unwrap(),
            scalar(2)
        );
        let jet3 = Jet::single(vec![scalar(0), scalar(5), scalar(0)]);
        assert!(p("x1'' + x1").alg_eval(&jet3).unwrap().is_exact_zero());
        // missing entries are reported
        assert_eq!(
            p("x1''").alg_eval(&jet).unwrap_err().name(),
            "JetTooShort"
        );
    }

    #[test]
    fn differential_evaluation() {
        let t = Tower::laurent(1);
        let tvar = t.var(0).unwrap();
        let f = parse_diff_poly("x1'", &t, None).unwrap();
        assert_eq!(f.diff_eval(std::slice::from_ref(&tvar)).unwrap(), t.one());
        let g = parse_diff_poly("x1*x1'", &t, None).unwrap();
        assert_eq!(g.diff_eval(std::slice::from_ref(&tvar)).unwrap(), tvar);
    }

    #[test]
    fn differential_evaluation_of_the_exponential_jet() {
        // sum of t^i/i! for i < 8 kills x' - x up to O(t^7)
        let t = Tower::laurent(1);
        let mut exp = TowerElement::zero(1);
        let mut fact = rat_int(1);
        for i in 0..8i64 {
            if i > 0 {
                fact *= rat_int(i);
            }
            let term = TowerElement::monomial(1, rat_int(i), TowerElement::Scalar(rat(1, 1) / fact.clone()));
            exp = exp.add(&term);
        }
        let exp = exp.truncate(&crate::tower::Prec::Finite(rat_int(8)));
        let f = parse_diff_poly("x1' - x1", &t, None).unwrap();
        let r = f.diff_eval(&[exp]).unwrap();
        assert!(r.is_big_o_of(&rat_int(7)));
        assert!(!r.is_known_nonzero());
    }

    #[test]
    fn insufficient_precision_is_detected() {
        let t = Tower::laurent(1);
        // a = 1 + O(t): the first derivative knows nothing
        let a = t.one().truncate(&crate::tower::Prec::Finite(rat_int(1)));
        let f = parse_diff_poly("x1' - x1", &t, None).unwrap();
        assert_eq!(
            f.diff_eval(&[a]).unwrap_err().name(),
            "InsufficientPrecision"
        );
    }

    #[test]
    fn factor_selection_examples() {
        let jet = Jet::single(vec![scalar(1), scalar(1)]);
        let factors = vec![p("x1' - x1"), p("x1' + x1")];
        assert_eq!(select_vanishing_factor(&factors, &jet).unwrap(), 0);

        let degenerate = Jet::single(vec![scalar(0), scalar(0)]);
        assert_eq!(
            select_vanishing_factor(&factors, &degenerate)
                .unwrap_err()
                .name(),
            "MultipleVanishingFactors"
        );

        let nowhere = Jet::single(vec![scalar(2), scalar(1)]);
        assert_eq!(
            select_vanishing_factor(&factors, &nowhere)
                .unwrap_err()
                .name(),
            "NoVanishingFactor"
        );

        // over Q((t)): factors (x - t, x + t) at the point t
        let tw = Tower::laurent(1);
        let f1 = parse_diff_poly("x1 - t0", &tw, None).unwrap();
        let f2 = parse_diff_poly("x1 + t0", &tw, None).unwrap();
        let point = Jet::single(vec![tw.var(0).unwrap()]);
        assert_eq!(
            select_vanishing_factor(&[f1, f2], &point).unwrap(),
            0
        );
    }

    #[test]
    fn derivative_alias_parses_to_the_same_normal_form() {
        assert_eq!(p("x1''"), p("x1^(2)"));
        assert_eq!(p("x1^(3)*x2 + (1/2)*x1"), p("x1'''*x2 + 1/2*x1"));
    }
}
