//! Composed valuation, residue, angular component and ball membership.
//!
//! For a level-`(n+1)` element `a` with least-exponent term `c·t^N`, the
//! valuation is `(v(c), N)`: the top exponent goes in the *last* coordinate,
//! so reverse-lexicographic comparison reads the outermost variable first.
//!
//! Truncation makes zero-recognition partial: an element whose known
//! coefficients all vanish is *indistinguishable from zero*. Valuation then
//! only has a lower bound, and any comparison that depends on coefficients
//! beyond a precision bound is reported as undecided rather than guessed.

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};
use crate::value::ValueVec;

use super::element::{Prec, TowerElement};

/// What is known about the valuation of an element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValStatus {
    /// Exactly the zero element: `v = ∞`.
    ExactlyZero,
    /// Valuation exactly determined; coordinates innermost-first, top
    /// exponent last.
    Known(Vec<Rational>),
    /// Only bounded below: the top-level exponent is at least `floor`, but
    /// the first not-known-zero position has an undetermined coefficient.
    Undetermined { floor: Rational },
}

/// Three-valued verdict of a comparison under truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

impl TowerElement {
    pub fn valuation_status(&self) -> ValStatus {
        match self {
            TowerElement::Scalar(q) => {
                if q == &Rational::from_integer(0.into()) {
                    ValStatus::ExactlyZero
                } else {
                    ValStatus::Known(Vec::new())
                }
            }
            TowerElement::Series(s) => {
                for (e, c) in &s.terms {
                    match c.valuation_status() {
                        ValStatus::ExactlyZero => continue,
                        ValStatus::Known(mut v) => {
                            v.push(e.clone());
                            return ValStatus::Known(v);
                        }
                        ValStatus::Undetermined { .. } => {
                            return ValStatus::Undetermined { floor: e.clone() }
                        }
                    }
                }
                match &s.prec {
                    Prec::Infinite => ValStatus::ExactlyZero,
                    Prec::Finite(p) => ValStatus::Undetermined { floor: p.clone() },
                }
            }
        }
    }

    /// The composed valuation. Exact zero maps to `∞`; an element that is
    /// merely indistinguishable from zero reports its lower bound as an
    /// error.
    pub fn valuation(&self) -> Result<ValueVec> {
        match self.valuation_status() {
            ValStatus::ExactlyZero => Ok(ValueVec::Infinity),
            ValStatus::Known(coords) => Ok(ValueVec::Finite(coords)),
            ValStatus::Undetermined { floor } => Err(Error::IndistinguishableFromZero(format!(
                "valuation only bounded below: top-level exponent >= {}",
                format_rational(&floor)
            ))),
        }
    }

    /// Decides `v(a) > γ` (strict) or `v(a) ≥ γ` from the known
    /// coefficients alone. `γ` has one coordinate per level, top exponent
    /// last.
    pub fn val_cmp(&self, gamma: &[Rational], strict: bool) -> Tri {
        match self {
            TowerElement::Scalar(q) => {
                assert!(gamma.is_empty(), "value vector longer than the stage");
                if q == &Rational::from_integer(0.into()) {
                    Tri::Yes
                } else if strict {
                    // v(q) = () is never strictly above ()
                    Tri::No
                } else {
                    Tri::Yes
                }
            }
            TowerElement::Series(s) => {
                assert_eq!(gamma.len(), s.level, "value vector has the wrong stage");
                let (inner, top) = gamma.split_at(s.level - 1);
                let top = &top[0];
                // a skipped placeholder below the bound would force No if
                // its coefficient turned out nonzero
                let mut pending = false;
                for (e, c) in &s.terms {
                    if e < top {
                        if c.is_known_nonzero() {
                            // No whether or not earlier placeholders vanish
                            return Tri::No;
                        }
                        pending = true;
                        continue;
                    }
                    if e == top {
                        return match (c.val_cmp(inner, strict), c.is_known_nonzero()) {
                            // if c vanishes the value moves past the bound,
                            // which is fine either way
                            (Tri::Yes, _) if !pending => Tri::Yes,
                            (Tri::No, true) => Tri::No,
                            _ => Tri::Unknown,
                        };
                    }
                    // e > top: everything below was zero or a placeholder
                    return if pending { Tri::Unknown } else { Tri::Yes };
                }
                let tail_clears = match &s.prec {
                    Prec::Infinite => true,
                    Prec::Finite(p) => p > top || (!strict && p == top),
                };
                if tail_clears && !pending {
                    Tri::Yes
                } else {
                    Tri::Unknown
                }
            }
        }
    }

    /// Decides whether the top-level exponent of the valuation is `> bound`
    /// (or `≥` when `strict` is false), looking only at the outermost level.
    pub fn top_val_cmp(&self, bound: &Rational, strict: bool) -> Tri {
        match self {
            TowerElement::Scalar(_) => panic!("top_val_cmp on a level-0 element"),
            TowerElement::Series(s) => {
                let mut pending = false;
                for (e, c) in &s.terms {
                    if e > bound || (!strict && e == bound) {
                        return if pending { Tri::Unknown } else { Tri::Yes };
                    }
                    // e below the bound (or at it, strictly)
                    if c.is_known_nonzero() {
                        return Tri::No;
                    }
                    pending = true;
                }
                let tail_clears = match &s.prec {
                    Prec::Infinite => true,
                    Prec::Finite(p) => p > bound || (!strict && p == bound),
                };
                if tail_clears && !pending {
                    Tri::Yes
                } else {
                    Tri::Unknown
                }
            }
        }
    }

    /// Certifies `a = O(t^q)` at the top level: no known nonzero coefficient
    /// below `q` and enough precision to rule the rest out.
    pub fn is_big_o_of(&self, q: &Rational) -> bool {
        self.top_val_cmp(q, false) == Tri::Yes
    }

    /// Coefficient of `t^0`, for elements of nonnegative top-level
    /// valuation.
    pub fn residue(&self) -> Result<TowerElement> {
        match self {
            TowerElement::Scalar(_) => panic!("residue on a level-0 element"),
            TowerElement::Series(s) => {
                let zero = Rational::from_integer(0.into());
                if let Some((e, c)) = s.terms.iter().next() {
                    if *e < zero {
                        if c.is_known_nonzero() {
                            return Err(Error::NegativeValuation(format!(
                                "nonzero coefficient at exponent {}",
                                format_rational(e)
                            )));
                        }
                        return Err(Error::IndistinguishableFromZero(format!(
                            "possible nonzero coefficient at exponent {}",
                            format_rational(e)
                        )));
                    }
                }
                if let Prec::Finite(p) = &s.prec {
                    if *p <= zero {
                        return Err(Error::IndistinguishableFromZero(
                            "constant coefficient is beyond the precision bound".into(),
                        ));
                    }
                }
                Ok(s.terms
                    .get(&zero)
                    .cloned()
                    .unwrap_or_else(|| TowerElement::zero(s.level - 1)))
            }
        }
    }

    /// The first nonzero coefficient; `ac(0) = 0`. Multiplicative on
    /// nonzero elements and equal to the residue at top-level valuation 0.
    pub fn angular_component(&self) -> Result<TowerElement> {
        match self {
            TowerElement::Scalar(_) => panic!("angular_component on a level-0 element"),
            TowerElement::Series(s) => match s.terms.iter().next() {
                Some((e, c)) => {
                    if c.is_known_nonzero() {
                        Ok(c.clone())
                    } else {
                        Err(Error::IndistinguishableFromZero(format!(
                            "leading coefficient at exponent {} is not known nonzero",
                            format_rational(e)
                        )))
                    }
                }
                None => match &s.prec {
                    Prec::Infinite => Ok(TowerElement::zero(s.level - 1)),
                    Prec::Finite(_) => Err(Error::IndistinguishableFromZero(
                        "no known nonzero coefficient".into(),
                    )),
                },
            },
        }
    }

    /// Constant-coefficient section of the residue map: `c ↦ c·t^0`,
    /// exactly. A ring homomorphism with `residue ∘ section = id`.
    pub fn residue_section(&self) -> TowerElement {
        TowerElement::monomial(
            self.level() + 1,
            Rational::from_integer(0.into()),
            self.clone(),
        )
    }
}

/// Strict open-ball membership: `v(x_i - c_i) > γ` for every entry.
/// Comparisons that depend on unknown coefficients are errors, not guesses.
pub fn in_open_ball(
    xs: &[TowerElement],
    cs: &[TowerElement],
    gamma: &ValueVec,
) -> Result<bool> {
    assert_eq!(xs.len(), cs.len(), "tuples of different lengths");
    let coords = gamma
        .coords()
        .ok_or_else(|| Error::UsageError("ball radius must be a finite value".into()))?;
    for (x, c) in xs.iter().zip(cs) {
        if x.level() != c.level() {
            return Err(Error::LevelMismatch {
                expected: x.level(),
                found: c.level(),
            });
        }
        let d = x.sub(c);
        match d.val_cmp(coords, true) {
            Tri::Yes => continue,
            Tri::No => return Ok(false),
            Tri::Unknown => {
                return Err(Error::IndistinguishableFromZero(
                    "ball membership depends on coefficients beyond the precision bound".into(),
                ))
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::super::Tower;
    use super::*;
    use crate::tower::TowerElement;
    use crate::rational::{rat, rat_int};

    fn vv(coords: &[i64]) -> ValueVec {
        ValueVec::finite(coords.iter().map(|&n| rat_int(n)).collect())
    }

    #[test]
    fn composed_valuation_reads_outermost_first() {
        let t = Tower::laurent(2);
        let t0 = t.var(0).unwrap();
        let t1 = t.var(1).unwrap();
        // t0 * t1^-1 has valuation (1, -1), below (0, 0)
        let elem = t0.div(&t1, &t).unwrap();
        let v = elem.valuation().unwrap();
        assert_eq!(v, vv(&[1, -1]));
        assert!(vv(&[0, 0]).gt(&v));
        // v(t1) = (0, 1) exceeds v(t0^n) = (n, 0) for every n
        let v_t1 = t1.valuation().unwrap();
        for n in [1i64, 2, 7, 40] {
            let v_t0n = t0.pow(n, &t).unwrap().valuation().unwrap();
            assert_eq!(v_t0n, vv(&[n, 0]));
            assert!(v_t1.gt(&v_t0n));
        }
    }

    #[test]
    fn valuation_of_zero_is_infinity() {
        assert_eq!(
            TowerElement::zero(2).valuation().unwrap(),
            ValueVec::Infinity
        );
        assert_eq!(
            TowerElement::Scalar(rat_int(0)).valuation().unwrap(),
            ValueVec::Infinity
        );
    }

    #[test]
    fn indistinguishable_from_zero_reports_lower_bound() {
        let ghost = TowerElement::big_o(1, rat_int(4));
        let err = ghost.valuation().unwrap_err();
        assert_eq!(err.name(), "IndistinguishableFromZero");
        assert_eq!(
            ghost.valuation_status(),
            ValStatus::Undetermined { floor: rat_int(4) }
        );
    }

    #[test]
    fn angular_component_examples() {
        let t = Tower::laurent(1);
        // ac(3t^2 + 5t^3) = 3
        let a = t
            .var(0)
            .unwrap()
            .pow(2, &t)
            .unwrap()
            .scale(&rat_int(3))
            .add(&t.var(0).unwrap().pow(3, &t).unwrap().scale(&rat_int(5)));
        assert_eq!(
            a.angular_component().unwrap(),
            TowerElement::Scalar(rat_int(3))
        );
        // ac(t + t^3) = ac(t) = 1
        let b = t.var(0).unwrap().add(&t.var(0).unwrap().pow(3, &t).unwrap());
        assert_eq!(
            b.angular_component().unwrap(),
            TowerElement::Scalar(rat_int(1))
        );
        // ac(0) = 0
        assert!(TowerElement::zero(1)
            .angular_component()
            .unwrap()
            .is_exact_zero());
    }

    #[test]
    fn residue_examples() {
        let t = Tower::laurent(1);
        // residue(2 + 7t) = 2
        let a = t.scalar(rat_int(2)).add(&t.var(0).unwrap().scale(&rat_int(7)));
        assert_eq!(a.residue().unwrap(), TowerElement::Scalar(rat_int(2)));
        // missing constant term gives 0
        assert!(t.var(0).unwrap().residue().unwrap().is_exact_zero());
        // negative valuation is rejected
        let bad = t.var(0).unwrap().pow(-1, &t).unwrap();
        assert_eq!(bad.residue().unwrap_err().name(), "NegativeValuation");
        // unknown constant coefficient is undecidable
        let ghost = TowerElement::big_o(1, rat_int(0));
        assert_eq!(
            ghost.residue().unwrap_err().name(),
            "IndistinguishableFromZero"
        );
    }

    #[test]
    fn residue_section_is_a_section() {
        let t = Tower::laurent(1);
        let c = t.scalar(rat(5, 3));
        let lifted = c.residue_section();
        assert_eq!(lifted.level(), 2);
        assert_eq!(lifted.residue().unwrap(), c);
    }

    #[test]
    fn open_ball_membership_is_strict() {
        let t = Tower::laurent(1);
        let gamma2 = ValueVec::finite(vec![rat_int(2)]);
        let gamma1 = ValueVec::finite(vec![rat_int(1)]);
        let one = t.one();
        let x = one.add(&t.var(0).unwrap().pow(3, &t).unwrap());
        // v(t^3) = 3 > 2
        assert!(in_open_ball(std::slice::from_ref(&x), std::slice::from_ref(&one), &gamma2).unwrap());
        // boundary case is excluded: v(t) = 1 is not > 1
        let y = one.add(&t.var(0).unwrap());
        assert!(!in_open_ball(std::slice::from_ref(&y), std::slice::from_ref(&one), &gamma1).unwrap());
        // center itself is always inside (v(0) = infinity)
        assert!(in_open_ball(std::slice::from_ref(&one), std::slice::from_ref(&one), &gamma2).unwrap());
        // undecidable membership is an error, not a guess
        let fuzzy = one.add(&TowerElement::big_o(1, rat_int(2)));
        assert_eq!(
            in_open_ball(&[fuzzy], &[one], &gamma2).unwrap_err().name(),
            "IndistinguishableFromZero"
        );
    }

    #[test]
    fn top_val_certificates() {
        let t = Tower::laurent(1);
        let a = t.var(0).unwrap().pow(3, &t).unwrap();
        assert!(a.is_big_o_of(&rat_int(3)));
        assert!(a.is_big_o_of(&rat_int(2)));
        assert!(!a.is_big_o_of(&rat_int(4)));
        let ghost = TowerElement::big_o(1, rat_int(5));
        assert!(ghost.is_big_o_of(&rat_int(5)));
        assert_eq!(ghost.top_val_cmp(&rat_int(6), false), Tri::Unknown);
    }
}
