//! Property tests for differential polynomials: the ring derivation, its
//! compatibility with evaluation, and the separant against a symbolic
//! perturbation oracle.

use proptest::prelude::*;

use dhensel_core::diffpoly::{DiffPoly, Jet, Monomial};
use dhensel_core::rational::{rat, rat_int, Rational};
use dhensel_core::text::{format_diff_poly, parse_diff_poly};
use dhensel_core::tower::{Tower, TowerElement};

fn rational_strategy() -> impl Strategy<Value = Rational> {
    (-5i64..=5, 1i64..=5).prop_map(|(n, d)| rat(n, d))
}

fn monomial_strategy(num_vars: usize) -> impl Strategy<Value = Monomial> {
    proptest::collection::vec((0..num_vars, 0u32..=2), 1..=3).prop_map(|factors| {
        let mut m = Monomial::one();
        for (v, o) in factors {
            m = m.mul(&Monomial::var(v, o));
        }
        m
    })
}

fn poly_strategy(num_vars: usize) -> impl Strategy<Value = DiffPoly> {
    proptest::collection::vec(
        (monomial_strategy(num_vars), rational_strategy()),
        1..=4,
    )
    .prop_map(move |terms| {
        DiffPoly::from_terms(
            num_vars,
            0,
            terms
                .into_iter()
                .map(|(m, q)| (m, TowerElement::Scalar(q))),
        )
    })
}

fn jet_strategy(len: usize) -> impl Strategy<Value = Vec<TowerElement>> {
    proptest::collection::vec(rational_strategy().prop_map(TowerElement::Scalar), len)
}

proptest! {
    #[test]
    fn ring_derivation_is_a_derivation(f in poly_strategy(2), g in poly_strategy(2)) {
        let lhs = f.mul(&g).ring_derive();
        let rhs = f.ring_derive().mul(&g).add(&f.mul(&g.ring_derive()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_commutes_with_derivation(f in poly_strategy(1)) {
        // diffEval(ringDerive(f), a) = derive(diffEval(f, a)) to precision
        let tower = Tower::laurent(1);
        let a = tower.one().add(&tower.var(0).unwrap());
        let f = f.lift_to(1);
        let lhs = f.ring_derive().diff_eval(std::slice::from_ref(&a)).unwrap();
        let rhs = f.diff_eval(std::slice::from_ref(&a)).unwrap().derive();
        prop_assert!(lhs.eq_to_shared_prec(&rhs));
    }

    #[test]
    fn separant_matches_the_symbolic_perturbation(f in poly_strategy(1), jet in jet_strategy(3)) {
        // substitute a_n + t for x^(n); the t-linear coefficient of the
        // algebraic value is exactly the separant's value (an exact
        // rational identity, no tolerance)
        let n = match f.order(0) {
            Ok(n) => n,
            Err(_) => return Ok(()),
        };
        let jet = &jet[..=n as usize];
        let up = Tower::laurent(1);
        let mut perturbed: Vec<TowerElement> = jet.iter().map(|c| c.lift_to(1)).collect();
        let idx = n as usize;
        perturbed[idx] = perturbed[idx].add(&up.var(0).unwrap());
        let value = f.lift_to(1).alg_eval(&Jet::single(perturbed)).unwrap();
        let oracle = value.known_coeff(&rat_int(1)).unwrap();
        let sep = f
            .separant(0)
            .unwrap()
            .alg_eval(&Jet::single(jet.to_vec()))
            .unwrap();
        prop_assert_eq!(oracle, sep);
    }

    #[test]
    fn print_parse_round_trip(f in poly_strategy(2)) {
        let text = format_diff_poly(&f);
        let parsed = parse_diff_poly(&text, &Tower::base(), Some(2)).unwrap();
        prop_assert_eq!(parsed, f);
    }
}
