//! Full pipeline over a ramified stage: Puiseux coefficients flow through
//! prolongation, the twisted expansion, the certificates, and the residue
//! and angular-component maps.

use dhensel_core::rational::{rat, rat_int};
use dhensel_core::solver::{check_dl, solve_dh, DHProblem};
use dhensel_core::text::parse_diff_poly;
use dhensel_core::tower::{LevelConfig, Tower, TowerElement};
use dhensel_core::value::ValueVec;

fn ram2() -> Tower {
    Tower::with_levels(vec![LevelConfig::new(2, 16)])
}

#[test]
fn solving_over_a_ramified_stage() {
    // x' = s·x over Q((t0^(1/2))) with s = t0^(1/2): the witness exponents
    // of the inner variable stay in the half-integer lattice
    let tower = ram2();
    let s = TowerElement::monomial(1, rat(1, 2), TowerElement::one(0));
    let f = parse_diff_poly("x1' - t0^(1/2)*x1", &tower, Some(1)).unwrap();
    let jet = vec![tower.one(), s.clone()];
    let problem = DHProblem::new(f.clone(), jet, ValueVec::finite(vec![rat(7, 2)])).unwrap();
    let cert = solve_dh(&problem, 6, &tower).unwrap();
    assert!(cert.residual_ok && cert.ball_ok && cert.valued_taylor_ok);
    assert!(cert.constant_terms_ok);
    assert!(check_dl(&problem, &cert.solution).unwrap());

    // second coefficient: the twisting subtracts the coefficient
    // derivation, alpha_2 = (phi(x'') - 2 d(phi(x')) + d^2(phi(x)))/2
    // = (s^2 - d/dt0 s)/2, not the naive phi(x'')/2
    let expected = s.mul(&s).sub(&s.derive()).scale(&rat(1, 2));
    assert_eq!(cert.solution.known_coeff(&rat_int(2)).unwrap(), expected);
}

#[test]
fn residue_and_angular_component_through_the_witness() {
    let tower = ram2();
    let f = parse_diff_poly("x1' - x1", &tower, Some(1)).unwrap();
    let c = tower.one().add(&TowerElement::monomial(
        1,
        rat(1, 2),
        TowerElement::one(0),
    ));
    let problem = DHProblem::new(
        f,
        vec![c.clone(), c.clone()],
        ValueVec::finite(vec![rat_int(2)]),
    )
    .unwrap();
    let cert = solve_dh(&problem, 5, &tower).unwrap();
    // the witness has top-level valuation 0: residue and angular component
    // agree and recover the base value
    let res = cert.solution.residue().unwrap();
    let ac = cert.solution.angular_component().unwrap();
    assert_eq!(res, ac);
    assert_eq!(res, c);
    // the constant-coefficient section puts it back one stage up
    assert_eq!(res.residue_section().residue().unwrap(), c);
}

#[test]
fn fractional_gamma_ball_checks() {
    // radius in the fine lattice: v(x - c) > 3/2 is decidable and strict
    let tower = ram2();
    let c = tower.one();
    let x = tower.one().add(&TowerElement::monomial(
        1,
        rat(3, 2),
        TowerElement::one(0),
    ));
    let gamma = ValueVec::finite(vec![rat(3, 2)]);
    assert!(!dhensel_core::in_open_ball(
        std::slice::from_ref(&x),
        std::slice::from_ref(&c),
        &gamma
    )
    .unwrap());
    let gamma_below = ValueVec::finite(vec![rat(1, 1)]);
    assert!(dhensel_core::in_open_ball(
        std::slice::from_ref(&x),
        std::slice::from_ref(&c),
        &gamma_below
    )
    .unwrap());
}
