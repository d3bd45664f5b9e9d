//! Acceptance suite: one test per criterion, each printing a pass line.
//!
//! Every tolerance here is exact rational equality or an exact order
//! certificate; the randomized criteria run on pinned seeds.

use std::time::Instant;

use dhensel_core::diffpoly::{DiffPoly, Jet};
use dhensel_core::rational::{rat, rat_int, Rational};
use dhensel_core::sampling::random_dh_problem;
use dhensel_core::solver::{check_dl, solve_dh, DHProblem};
use dhensel_core::suites::run_suite;
use dhensel_core::text::parse_diff_poly;
use dhensel_core::tower::{LevelConfig, Tower, TowerElement, Tri};
use dhensel_core::value::ValueVec;
use dhensel_core::weil::{descend, eval_lpoly, tau, tau_inverse, FiniteFreeAlgebra, LPoly, LPresentation};

use rand::rngs::StdRng;
use rand::SeedableRng;

const SEED: u64 = 42;

fn pass(n: u32, what: &str) {
    println!("acceptance criterion {n:02}: PASS - {what}");
}

/// The 50-problem battery shared by criteria 2-4.
fn fifty_problems() -> Vec<(DHProblem, dhensel_core::solver::SolveCertificate)> {
    let mut rng = StdRng::seed_from_u64(SEED);
    let tower = Tower::base();
    (0..50)
        .map(|_| {
            let p = random_dh_problem(&mut rng, 3);
            let cert = solve_dh(&p, 10, &tower).expect("solvable by construction");
            (p, cert)
        })
        .collect()
}

#[test]
fn criterion_01_exponential_law() {
    let start = Instant::now();
    // the problem lives over Q((t0)) (gamma has one coordinate), the
    // witness in Q((t0))((t1))
    let tower = Tower::laurent(1);
    let f = parse_diff_poly("x1' - x1", &tower, Some(1)).unwrap();
    let jet = vec![tower.one(), tower.one()];
    let problem = DHProblem::new(f, jet, ValueVec::finite(vec![rat_int(5)])).unwrap();
    let cert = solve_dh(&problem, 12, &tower).unwrap();
    let mut factorial = rat_int(1);
    for i in 0..12i64 {
        if i > 0 {
            factorial *= rat_int(i);
        }
        let coeff = cert.solution.known_coeff(&rat_int(i)).unwrap();
        let expected = TowerElement::from_rational(1, rat_int(1) / factorial.clone());
        assert_eq!(coeff, expected, "coefficient of t1^{i} is not 1/{i}!");
    }
    assert!(check_dl(&problem, &cert.solution).unwrap(), "checkDL fails");
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 1.0,
        "took {elapsed:?}, budget is 1 s"
    );
    pass(1, "solve-dh on (x1'-x1, (1,1), gamma=(5)) gives 1/i! exactly, checkDL true");
}

#[test]
fn criterion_02_constant_term_identity() {
    let start = Instant::now();
    for (problem, cert) in fifty_problems() {
        let n = problem.order();
        for i in 0..=n {
            let c0 = cert
                .solution
                .derive_n(i as u32)
                .known_coeff(&rat_int(0))
                .unwrap();
            assert_eq!(
                c0,
                cert.point.values[i],
                "constant term of derivative {i} of the witness for {} is not c_{i}",
                problem.poly
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 30.0,
        "took {elapsed:?}, budget is 30 s"
    );
    pass(2, "t^0 coefficient of each derivative equals the jet entry on 50 seeded problems");
}

#[test]
fn criterion_03_valued_taylor_property() {
    for (problem, cert) in fifty_problems() {
        let constant = cert.point.values[0].lift_to(1);
        let diff = cert.solution.sub(&constant);
        assert_eq!(
            diff.top_val_cmp(&rat_int(0), true),
            Tri::Yes,
            "witness for {} does not move infinitesimally",
            problem.poly
        );
    }
    pass(3, "alpha - c0 has strictly positive top-level valuation on 50 seeded problems");
}

#[test]
fn criterion_04_solution_residual() {
    for (problem, cert) in fifty_problems() {
        let n = problem.order();
        let bound = rat_int(10 - n as i64);
        let lifted = problem.poly.lift_to(1);
        let residual = lifted
            .diff_eval(std::slice::from_ref(&cert.solution))
            .unwrap();
        assert!(
            residual.is_exact_zero() || residual.is_big_o_of(&bound),
            "residual of {} is not O(t^{})",
            problem.poly,
            10 - n
        );
    }
    pass(4, "diffEval(f, alpha) = O(t^(10-n)) on 50 seeded problems");
}

#[test]
fn criterion_05_hensel_lifting() {
    // the binomial series for (1+t)^(1/2), computed independently
    let binomial_sqrt = |k: u32| -> Rational {
        let mut acc = rat_int(1);
        for j in 0..k {
            let factor = (rat(1, 2) - rat_int(j as i64)) / rat_int(j as i64 + 1);
            acc *= factor;
        }
        acc
    };
    let tower = Tower::laurent(1);
    let f = parse_diff_poly("x1^2 - 1 - t0", &tower, Some(1)).unwrap();
    let outcome = dhensel_core::hensel::hensel_lift_system(
        &[f],
        &[],
        &[tower.one()],
        &rat_int(8),
        &tower,
    )
    .unwrap();
    let sol = &outcome.solution[0];
    for k in 0..8u32 {
        let coeff = sol.known_coeff(&rat_int(k as i64)).unwrap();
        assert_eq!(
            coeff,
            TowerElement::Scalar(binomial_sqrt(k)),
            "coefficient of t^{k} differs from the binomial series"
        );
    }
    assert!(
        outcome.iterations <= 5,
        "{} iterations, quadratic convergence allows 5",
        outcome.iterations
    );
    pass(5, "sqrt(1+t) matches the binomial oracle to 8 terms in <= 5 iterations");
}

#[test]
fn criterion_06_weil_descent_hand_case() {
    let alg = FiniteFreeAlgebra::gaussian_rationals();
    let base = Tower::base();
    let x2p1 = parse_diff_poly("x1^2 + 1", &base, Some(1)).unwrap();
    let pres = LPresentation {
        generators: vec!["x".into()],
        relations: vec![LPoly {
            coords: vec![x2p1, DiffPoly::zero(1, 0)],
        }],
    };
    let desc = descend(&pres, &alg);
    let r1 = parse_diff_poly("x1^2 - x2^2 + 1", &base, Some(2)).unwrap();
    let r2 = parse_diff_poly("2*x1*x2", &base, Some(2)).unwrap();
    assert_eq!(desc.relations, vec![r1, r2], "descended relations differ");

    // tau maps (x(1), x(2)) = (0, 1) to the root i = (0, 1) in coordinates
    let q = |n: i64| TowerElement::Scalar(rat_int(n));
    let wroot: Vec<Vec<TowerElement>> = vec![vec![q(0)], vec![q(1)]];
    let lroot = tau(&wroot, &desc, &pres, &alg).unwrap();
    assert_eq!(lroot, vec![vec![q(0), q(1)]]);

    // brute-force point grids on {-2..2}^2 correspond bijectively
    let mut wpoints = Vec::new();
    let mut lpoints = Vec::new();
    for a in -2..=2i64 {
        for b in -2..=2i64 {
            let w: Vec<Vec<TowerElement>> = vec![vec![q(a)], vec![q(b)]];
            if desc.relations.iter().all(|r| {
                r.alg_eval(&Jet::new(w.clone())).unwrap().is_exact_zero()
            }) {
                wpoints.push(w);
            }
            let l = vec![vec![q(a), q(b)]];
            if pres.relations.iter().all(|r| {
                eval_lpoly(r, &l, &alg)
                    .unwrap()
                    .iter()
                    .all(TowerElement::is_exact_zero)
            }) {
                lpoints.push(l);
            }
        }
    }
    assert_eq!(wpoints.len(), 2, "grid must contain exactly the two roots");
    assert_eq!(lpoints.len(), 2);
    for w in &wpoints {
        let l = tau(w, &desc, &pres, &alg).unwrap();
        assert!(lpoints.contains(&l));
        assert_eq!(&tau_inverse(&l, &pres, &alg).unwrap(), w, "round trip broken");
    }
    for l in &lpoints {
        let w = tau_inverse(l, &pres, &alg).unwrap();
        assert!(wpoints.contains(&w));
        assert_eq!(&tau(&w, &desc, &pres, &alg).unwrap(), l, "round trip broken");
    }
    pass(6, "descent of x^2+1 over Q(i) and the tau bijection on the point grid");
}

#[test]
fn criterion_07_continuity_theorem() {
    let report = run_suite("weil-continuity", SEED, 100).unwrap();
    assert_eq!(
        report.failures, 0,
        "continuity failed {} of {} trials: {}",
        report.failures, report.trials, report.detail
    );
    pass(7, "hypothesis-satisfying pairs satisfy the conclusion on 100 seeded trials");
}

#[test]
fn criterion_08_separated_converse() {
    let report = run_suite("weil-separated", SEED, 100).unwrap();
    assert_eq!(
        report.failures, 0,
        "separated bound failed {} of {} trials: {}",
        report.failures, report.trials, report.detail
    );
    pass(8, "per-coordinate lower bound on 100 seeded trials; (1, 1+t) rejected");
}

#[test]
fn criterion_09_derivation_identities() {
    for name in ["series-leibniz", "diffpoly-leibniz", "descent-derivation"] {
        let report = run_suite(name, SEED, 100).unwrap();
        assert_eq!(
            report.failures, 0,
            "{name} failed {} of {} trials: {}",
            report.failures, report.trials, report.detail
        );
    }
    pass(9, "series Leibniz, ring derivation, descent-derivation verification x100 each");
}

#[test]
fn criterion_10_parser_round_trip() {
    let report = run_suite("parser-roundtrip", SEED, 100).unwrap();
    assert_eq!(
        report.failures, 0,
        "round trip failed {} of {} trials: {}",
        report.failures, report.trials, report.detail
    );
    pass(10, "print-then-parse is the identity on 100 seeded random polynomials");
}

#[test]
fn criterion_11_iterated_tower() {
    // stage 1: a problem over Q((t0)) solved in Q((t0))((t1))
    let t1 = Tower::laurent(1);
    let f = parse_diff_poly("x1' - x1", &t1, Some(1)).unwrap();
    let c = t1.one().add(&t1.var(0).unwrap());
    let p1 = DHProblem::new(
        f.clone(),
        vec![c.clone(), c.clone()],
        ValueVec::finite(vec![rat_int(4)]),
    )
    .unwrap();
    let cert1 = solve_dh(&p1, 8, &t1).unwrap();
    assert!(cert1.residual_ok && cert1.ball_ok && cert1.valued_taylor_ok);
    assert!(check_dl(&p1, &cert1.solution).unwrap());

    // stage 2: the problem re-posed over Q((t0))((t1)), solved one higher
    let t2 = t1.extend(LevelConfig::laurent());
    let c2 = t2.one().add(&t2.var(0).unwrap()).add(&t2.var(1).unwrap());
    let p2 = DHProblem::new(
        f.lift_to(2),
        vec![c2.clone(), c2.clone()],
        ValueVec::finite(vec![rat_int(4), rat_int(9)]),
    )
    .unwrap();
    let cert2 = solve_dh(&p2, 8, &t2).unwrap();
    assert!(cert2.residual_ok && cert2.ball_ok && cert2.valued_taylor_ok);
    assert!(check_dl(&p2, &cert2.solution).unwrap());
    assert_eq!(cert2.solution.level(), 3);

    // the stage-2 closeness has a strictly positive new coordinate, which
    // exceeds every stage-1 value under reverse-lexicographic comparison
    for i in 0..=1u32 {
        let diff = cert2.solution.derive_n(i).sub(&c2.lift_to(3));
        let v = diff.valuation().unwrap();
        let coords = v.coords().expect("finite closeness").to_vec();
        assert!(
            coords.last().unwrap() > &rat_int(0),
            "new coordinate not strictly positive"
        );
        for extreme in [-1_000_000i64, -7, 0, 13, 1_000_000] {
            for extreme2 in [-1_000_000i64, 0, 1_000_000] {
                let old = ValueVec::finite(vec![rat_int(extreme), rat_int(extreme2)]);
                assert!(
                    v.gt(&old.extend_to(3)),
                    "closeness {v} does not dominate the old value {old}"
                );
            }
        }
    }
    pass(11, "certificates at both stages; stage-2 closeness dominates every stage-1 value");
}
