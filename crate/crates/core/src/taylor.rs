//! Jet prolongation and the twisted Taylor expansion.
//!
//! Starting from a non-degenerate algebraic jet of a single-variable
//! differential polynomial (a root of `f_alg` where the separant does not
//! vanish), the higher values `φ(x^(k))` are produced by deriving the
//! relation `f(x) = 0` and solving: the `k`-th derivative of `f` is linear
//! in `x^(n+k)` with the separant as its coefficient.
//!
//! The value sequence then maps to the next tower stage through the
//! coefficient formula
//!
//! ```text
//! α_i = (1/i!) Σ_{j≤i} (-1)^(i-j) C(i,j) ∂^(i-j)(values[j])
//! ```
//!
//! where `∂` is the stage derivation on the coefficients. The map extends a
//! point of the presented algebra to a differential point one stage up, it
//! commutes with the derivations, and it moves each value by strictly less
//! than the whole old value group (the difference starts at `t^1`).

use crate::diffpoly::{DiffPoly, Jet};
use crate::error::{Error, Result};
use crate::rational::{binomial, factorial, rat_int, Rational};
use crate::tower::{Prec, Tower, TowerElement, Tri};
use num_bigint::BigInt;
use num_traits::One;
use std::collections::BTreeMap;

/// A non-degenerate algebraic point of `K{x}/(f)` with its prolonged value
/// sequence `φ(x^(0)), …, φ(x^(M))`.
#[derive(Clone, Debug)]
pub struct ProlongedPoint {
    pub poly: DiffPoly,
    pub values: Vec<TowerElement>,
}

impl ProlongedPoint {
    pub fn level(&self) -> usize {
        self.poly.level()
    }

    /// Series with the first `n_terms` Taylor coefficients of the point,
    /// living one stage up.
    pub fn taylor(&self, n_terms: usize) -> Result<TowerElement> {
        twisted_taylor_values(&self.values, n_terms)
    }
}

/// Prolongs a jet `ā` with `f_alg(ā) = 0`, `s(f)_alg(ā) ≠ 0` to values of
/// `x^(0)..x^(m)`: each step derives the defining relation once more and
/// solves the linear equation for the new top variable.
pub fn prolong(
    f: &DiffPoly,
    jet: &[TowerElement],
    m: usize,
    tower: &Tower,
) -> Result<ProlongedPoint> {
    assert_eq!(f.num_vars(), 1, "prolongation is single-variable");
    let n = f.order(0)? as usize;
    if jet.len() != n + 1 {
        return Err(Error::JetTooShort {
            var: 0,
            order: n as u32,
            have: jet.len(),
        });
    }
    if m < n {
        return Err(Error::UsageError(format!(
            "prolongation length {m} below the order {n}"
        )));
    }
    for v in jet {
        if v.level() != f.level() {
            return Err(Error::LevelMismatch {
                expected: f.level(),
                found: v.level(),
            });
        }
    }

    let root_value = f.alg_eval(&Jet::single(jet.to_vec()))?;
    if !root_value.is_exact_zero() {
        return Err(Error::NotARoot(if root_value.is_known_nonzero() {
            format!("f_alg at the jet is {root_value}")
        } else {
            "f_alg at the jet is not certifiably zero".to_string()
        }));
    }
    let sep_value = f.separant(0)?.alg_eval(&Jet::single(jet.to_vec()))?;
    if !sep_value.is_known_nonzero() {
        return Err(Error::DegeneratePoint(
            "separant vanishes (or is indistinguishable from zero) at the jet".into(),
        ));
    }

    let mut values = jet.to_vec();
    let mut g = f.clone();
    for k in 1..=(m - n) {
        g = g.ring_derive();
        let top = (n + k) as u32;
        // g = A·x^(top) + B with A the separant of f; B is g with the top
        // variable's monomials dropped (g is linear in it)
        let a = g.partial(0, top);
        let b = g.without_variable(0, top);
        let jet_known = Jet::single(values.clone());
        let a_val = a.alg_eval(&jet_known)?;
        let b_val = b.alg_eval(&jet_known)?;
        let next = b_val
            .neg()
            .div(&a_val, tower)
            .map_err(|e| match e {
                Error::DivisionByIndistinguishableZero(msg) => Error::DegeneratePoint(format!(
                    "separant not invertible at the jet: {msg}"
                )),
                other => other,
            })?;
        values.push(next);
    }
    Ok(ProlongedPoint {
        poly: f.clone(),
        values,
    })
}

/// The twisted Taylor coefficients of a value sequence, as a series in the
/// next stage's variable, known up to `O(t^n_terms)`.
pub fn twisted_taylor_values(values: &[TowerElement], n_terms: usize) -> Result<TowerElement> {
    if n_terms == 0 {
        return Err(Error::UsageError("need at least one coefficient".into()));
    }
    if values.len() < n_terms {
        return Err(Error::InsufficientJet {
            needed: n_terms,
            have: values.len(),
        });
    }
    let level = values[0].level();
    for v in values {
        assert_eq!(v.level(), level, "prolonged values at mixed stages");
    }

    // derivs[j][r] = ∂^r(values[j]) for r ≤ n_terms-1-j
    let mut derivs: Vec<Vec<TowerElement>> = Vec::with_capacity(n_terms);
    for (j, v) in values.iter().enumerate().take(n_terms) {
        let mut row = vec![v.clone()];
        for _ in 0..(n_terms - 1 - j) {
            row.push(row.last().unwrap().derive());
        }
        derivs.push(row);
    }

    let mut terms = BTreeMap::new();
    for i in 0..n_terms {
        let mut sum = TowerElement::zero(level);
        for j in 0..=i {
            let mut c: BigInt = binomial(i as u32, j as u32);
            if (i - j) % 2 == 1 {
                c = -c;
            }
            let contrib = derivs[j][i - j].scale(&Rational::from_integer(c));
            sum = sum.add(&contrib);
        }
        let alpha = sum.scale(&Rational::new(BigInt::one(), factorial(i as u32)));
        if !alpha.is_exact_zero() {
            terms.insert(rat_int(i as i64), alpha);
        }
    }
    Ok(TowerElement::series(
        level + 1,
        terms,
        Prec::Finite(rat_int(n_terms as i64)),
    ))
}

/// The same expansion applied to an arbitrary differential polynomial `p`
/// through the point: the value sequence of `p` is `φ(δ^j p)`, evaluated
/// algebraically at the prolonged values.
pub fn taylor_of_poly(
    point: &ProlongedPoint,
    p: &DiffPoly,
    n_terms: usize,
) -> Result<TowerElement> {
    let jet = Jet::single(point.values.clone());
    let mut seq = Vec::with_capacity(n_terms);
    let mut g = p.clone();
    for j in 0..n_terms {
        if j > 0 {
            g = g.ring_derive();
        }
        seq.push(g.alg_eval(&jet)?);
    }
    twisted_taylor_values(&seq, n_terms)
}

/// Whether the expansion moved the point by strictly less than the whole
/// old value group: `α - φ(x)` must have strictly positive top-level
/// valuation.
pub fn check_valued_taylor(point: &ProlongedPoint, alpha: &TowerElement) -> bool {
    if alpha.level() != point.level() + 1 {
        return false;
    }
    let constant = point.values[0].lift_to(alpha.level());
    let diff = alpha.sub(&constant);
    diff.top_val_cmp(&rat_int(0), true) == Tri::Yes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::text::parse_diff_poly;
    use crate::tower::Tower;

    fn p(src: &str) -> DiffPoly {
        parse_diff_poly(src, &Tower::base(), Some(1)).unwrap()
    }

    fn q(n: i64, d: i64) -> TowerElement {
        TowerElement::Scalar(rat(n, d))
    }

    #[test]
    fn prolongation_of_the_exponential_relation() {
        let t = Tower::base();
        let point = prolong(&p("x1' - x1"), &[q(1, 1), q(1, 1)], 5, &t).unwrap();
        assert_eq!(point.values, vec![q(1, 1); 6]);
    }

    #[test]
    fn prolongation_with_nonlinear_separant() {
        // (x')^2 = x with jet (1, 1): 2x'x'' - x' = 0 gives 1/2, then zeros
        let t = Tower::base();
        let point = prolong(&p("x1'^2 - x1"), &[q(1, 1), q(1, 1)], 4, &t).unwrap();
        assert_eq!(
            point.values,
            vec![q(1, 1), q(1, 1), q(1, 2), q(0, 1), q(0, 1)]
        );
    }

    #[test]
    fn prolongation_rejects_non_roots_and_degenerate_points() {
        let t = Tower::base();
        assert_eq!(
            prolong(&p("x1' - x1"), &[q(1, 1), q(2, 1)], 3, &t)
                .unwrap_err()
                .name(),
            "NotARoot"
        );
        // (x')^2 - x at (0, 0): separant 2x' vanishes
        assert_eq!(
            prolong(&p("x1'^2 - x1"), &[q(0, 1), q(0, 1)], 3, &t)
                .unwrap_err()
                .name(),
            "DegeneratePoint"
        );
    }

    #[test]
    fn taylor_expansion_of_the_exponential() {
        let t = Tower::base();
        let point = prolong(&p("x1' - x1"), &[q(1, 1), q(1, 1)], 5, &t).unwrap();
        let alpha = point.taylor(6).unwrap();
        assert_eq!(alpha.level(), 1);
        let mut fact = 1i64;
        for i in 0..6i64 {
            if i > 0 {
                fact *= i;
            }
            assert_eq!(
                alpha.known_coeff(&crate::rational::rat_int(i)).unwrap(),
                TowerElement::Scalar(rat(1, fact))
            );
        }
    }

    #[test]
    fn taylor_expansion_of_the_square_root_curve() {
        // (1 + t/2)^2 solves (x')^2 = x with jet (1, 1)
        let t = Tower::base();
        let point = prolong(&p("x1'^2 - x1"), &[q(1, 1), q(1, 1)], 3, &t).unwrap();
        let alpha = point.taylor(4).unwrap();
        let up = Tower::laurent(1);
        let expected = up
            .one()
            .add(&up.var(0).unwrap())
            .add(&up.var(0).unwrap().pow(2, &up).unwrap().scale(&rat(1, 4)));
        assert!(alpha.eq_to_shared_prec(&expected));
        // and it does solve the equation to the available order
        let f = p("x1'^2 - x1").lift_to(1);
        let r = f.diff_eval(std::slice::from_ref(&alpha)).unwrap();
        assert!(!r.is_known_nonzero());
    }

    #[test]
    fn constant_input_gives_the_constant_series() {
        let t = Tower::base();
        let point = prolong(&p("x1'"), &[q(7, 2), q(0, 1)], 4, &t).unwrap();
        let alpha = point.taylor(5).unwrap();
        assert_eq!(
            alpha.known_coeff(&crate::rational::rat_int(0)).unwrap(),
            q(7, 2)
        );
        for i in 1..5i64 {
            assert!(alpha
                .known_coeff(&crate::rational::rat_int(i))
                .unwrap()
                .is_exact_zero());
        }
    }

    #[test]
    fn constant_term_identity_through_derivatives() {
        // constant term of the n-th derivative of the expansion recovers
        // the n-th prolonged value
        let t = Tower::base();
        let f = p("x1'' - x1*x1' - x1");
        let point = prolong(&f, &[q(1, 1), q(1, 2), q(3, 2)], 8, &t).unwrap();
        let alpha = point.taylor(9).unwrap();
        for n in 0..=2u32 {
            let c0 = alpha
                .derive_n(n)
                .known_coeff(&crate::rational::rat_int(0))
                .unwrap();
            assert_eq!(c0, point.values[n as usize]);
        }
    }

    #[test]
    fn valued_taylor_property() {
        let t = Tower::base();
        let point = prolong(&p("x1' - x1"), &[q(1, 1), q(1, 1)], 6, &t).unwrap();
        let alpha = point.taylor(6).unwrap();
        assert!(check_valued_taylor(&point, &alpha));
        // shifting by 1 breaks it: the difference has valuation 0
        let shifted = alpha.add(&TowerElement::one(1));
        assert!(!check_valued_taylor(&point, &shifted));
        // with a single coefficient the property is vacuous
        let tiny = point.taylor(1).unwrap();
        assert!(check_valued_taylor(&point, &tiny));
    }

    #[test]
    fn expansion_over_a_series_stage_uses_the_coefficient_derivation() {
        // x' = x over Q((t0)) with jet (1 + t0, 1 + t0): coefficients feel
        // d/dt0 through the twisting
        let tower = Tower::laurent(1);
        let f = parse_diff_poly("x1' - x1", &tower, Some(1)).unwrap();
        let c = tower.one().add(&tower.var(0).unwrap());
        let point = prolong(&f, &[c.clone(), c.clone()], 5, &tower).unwrap();
        let alpha = point.taylor(6).unwrap();
        assert_eq!(alpha.level(), 2);
        // differential solution to available precision
        let r = f.lift_to(2).diff_eval(std::slice::from_ref(&alpha)).unwrap();
        assert!(!r.is_known_nonzero());
        assert!(r.is_big_o_of(&crate::rational::rat_int(5)));
        assert!(check_valued_taylor(&point, &alpha));
    }
}
