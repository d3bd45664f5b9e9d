//! Solving differentially henselian problems.
//!
//! A problem is a triple `(f, c̄, γ)`: a single-variable differential
//! polynomial of order `n` over a tower stage, a candidate jet killing
//! `f_alg` with nonvanishing separant, and a closeness target in the stage's
//! value group. The solver prolongs the jet, expands it through the twisted
//! Taylor coefficients, and returns a witness in the *next* tower stage:
//! the residual is `O(t^(N-n))` and every jet entry of the witness lands
//! strictly inside the `γ`-ball around the candidate, automatically, because
//! the difference carries a strictly positive new coordinate — which exceeds
//! every value of the old group under reverse-lexicographic comparison.

use std::collections::BTreeMap;

use crate::diffpoly::{DiffPoly, Jet};
use crate::error::{Error, Result};
use crate::rational::{rat_int, Rational};
use crate::taylor::{check_valued_taylor, prolong, twisted_taylor_values, ProlongedPoint};
use crate::tower::{in_open_ball, Tower, TowerElement};
use crate::value::ValueVec;

/// A differentially henselian problem `(f, c̄, γ)`.
#[derive(Clone, Debug)]
pub struct DHProblem {
    pub poly: DiffPoly,
    pub jet: Vec<TowerElement>,
    pub gamma: ValueVec,
}

impl DHProblem {
    /// Shape checks only; the root and separant conditions are verified when
    /// solving.
    pub fn new(poly: DiffPoly, jet: Vec<TowerElement>, gamma: ValueVec) -> Result<Self> {
        if poly.num_vars() != 1 {
            return Err(Error::UsageError(
                "a differentially henselian problem is single-variable".into(),
            ));
        }
        let n = poly.order(0)? as usize;
        if jet.len() != n + 1 {
            return Err(Error::JetTooShort {
                var: 0,
                order: n as u32,
                have: jet.len(),
            });
        }
        match &gamma {
            ValueVec::Infinity => {
                return Err(Error::UsageError(
                    "the closeness target must be a finite value".into(),
                ))
            }
            ValueVec::Finite(c) => {
                if c.len() != poly.level() {
                    return Err(Error::UsageError(format!(
                        "closeness target has {} coordinates, stage is {}",
                        c.len(),
                        poly.level()
                    )));
                }
            }
        }
        Ok(DHProblem { poly, jet, gamma })
    }

    pub fn order(&self) -> usize {
        self.jet.len() - 1
    }

    pub fn level(&self) -> usize {
        self.poly.level()
    }
}

/// A solved problem: the witness plus every check replayed.
#[derive(Clone, Debug)]
pub struct SolveCertificate {
    /// Witness in the next tower stage, known to `O(t^N)`.
    pub solution: TowerElement,
    /// Prolonged value sequence the expansion was built from.
    pub point: ProlongedPoint,
    /// `f` evaluated differentially at the witness.
    pub residual: TowerElement,
    /// The residual is certified `O(t^(N-n))` at the top level.
    pub residual_ok: bool,
    /// Exponent bound `N - n` of the residual certificate.
    pub residual_bound: Rational,
    /// Every jet entry of the witness lies strictly inside the `γ`-ball.
    pub ball_ok: bool,
    /// The witness moved by strictly less than the old value group.
    pub valued_taylor_ok: bool,
    /// Constant term of the `i`-th derivative of the witness equals the
    /// `i`-th prolonged value, for `i ≤ n`.
    pub constant_terms_ok: bool,
}

/// Exact equality where both sides are exact, agreement of known parts
/// otherwise.
fn coeff_eq(a: &TowerElement, b: &TowerElement) -> bool {
    if a.is_exact() && b.is_exact() {
        a == b
    } else {
        a.eq_to_shared_prec(b)
    }
}

/// Solves `(f, c̄, γ)` with `n_terms` coefficients, producing the witness in
/// the next tower stage.
pub fn solve_dh(problem: &DHProblem, n_terms: usize, tower: &Tower) -> Result<SolveCertificate> {
    if n_terms == 0 {
        return Err(Error::UsageError("need at least one series term".into()));
    }
    let n = problem.order();
    let depth = (n_terms.saturating_sub(1)).max(n);
    let point = prolong(&problem.poly, &problem.jet, depth, tower)?;
    let solution = twisted_taylor_values(&point.values, n_terms)?;

    let up = solution.level();
    let lifted = problem.poly.lift_to(up);
    let residual = lifted.diff_eval(std::slice::from_ref(&solution))?;
    let residual_bound = rat_int(n_terms as i64) - rat_int(n as i64);
    let residual_ok = residual.is_exact_zero() || residual.is_big_o_of(&residual_bound);

    let jets: Vec<TowerElement> = (0..=n as u32).map(|i| solution.derive_n(i)).collect();
    let centers: Vec<TowerElement> = problem.jet.iter().map(|c| c.lift_to(up)).collect();
    let gamma_up = problem.gamma.extend_to(up);
    let ball_ok = in_open_ball(&jets, &centers, &gamma_up)?;

    let valued_taylor_ok = check_valued_taylor(&point, &solution);

    let mut constant_terms_ok = true;
    for (i, jet_i) in jets.iter().enumerate() {
        let c0 = jet_i.known_coeff(&rat_int(0))?;
        if !coeff_eq(&c0, &point.values[i]) {
            constant_terms_ok = false;
        }
    }

    Ok(SolveCertificate {
        solution,
        point,
        residual,
        residual_ok,
        residual_bound,
        ball_ok,
        valued_taylor_ok,
        constant_terms_ok,
    })
}

/// Independent replay of the solution notion: `f(b)` vanishes to available
/// precision and the jet of `b` lies strictly inside the `γ`-ball. Accepts
/// witnesses at the problem's own stage or one above; undecidable
/// comparisons escalate instead of guessing.
pub fn check_dl(problem: &DHProblem, witness: &TowerElement) -> Result<bool> {
    let stage = problem.level();
    let up = witness.level();
    if up != stage && up != stage + 1 {
        return Err(Error::LevelMismatch {
            expected: stage,
            found: up,
        });
    }
    let f = problem.poly.lift_to(up);
    let residual = f.diff_eval(std::slice::from_ref(witness))?;
    if residual.is_known_nonzero() {
        return Ok(false);
    }
    let n = problem.order();
    let jets: Vec<TowerElement> = (0..=n as u32).map(|i| witness.derive_n(i)).collect();
    let centers: Vec<TowerElement> = problem.jet.iter().map(|c| c.lift_to(up)).collect();
    let gamma = problem.gamma.extend_to(up);
    match in_open_ball(&jets, &centers, &gamma) {
        Ok(ok) => Ok(ok),
        Err(Error::IndistinguishableFromZero(msg)) => Err(Error::UndecidedAtPrecision(msg)),
        Err(e) => Err(e),
    }
}

/// A finitely presented differential algebra with an algebraic base point.
///
/// `relations` are differential polynomials in the generators; the base
/// point supplies one jet per generator (for a generator led by a relation
/// of order `n`, the jet has `n + 1` entries).
#[derive(Clone, Debug)]
pub struct AlgebraPresentation {
    pub generators: Vec<String>,
    pub relations: Vec<DiffPoly>,
    pub base_point: Option<Vec<Vec<TowerElement>>>,
}

/// A differential point of the presented algebra in the next tower stage.
#[derive(Clone, Debug)]
pub struct AlgebraPoint {
    pub images: BTreeMap<String, TowerElement>,
    /// Each generator's image lies strictly inside the `γ`-ball around its
    /// base value.
    pub ball_ok: bool,
    /// Every relation vanishes to the available precision at the images.
    pub relations_ok: bool,
}

/// Demand-driven prolongation of a triangular presentation: each relation
/// is led by its highest generator, earlier generators' higher derivatives
/// are produced recursively, free generators extend by zero (after one unit
/// step, so a free image moves visibly into the new stage).
struct Prolongation<'a> {
    pres: &'a AlgebraPresentation,
    tower: &'a Tower,
    /// relation index leading each generator, if any
    led_by: Vec<Option<usize>>,
    /// order of the leading relation in its generator
    lead_order: Vec<usize>,
    /// successive ring derivatives of each relation, grown on demand
    derived: Vec<Vec<DiffPoly>>,
    values: Vec<Vec<TowerElement>>,
}

impl<'a> Prolongation<'a> {
    fn new(pres: &'a AlgebraPresentation, tower: &'a Tower) -> Result<Self> {
        let m = pres.generators.len();
        let base = pres
            .base_point
            .as_ref()
            .ok_or_else(|| Error::UsageError("presentation carries no base point".into()))?;
        if base.len() != m {
            return Err(Error::UsageError(format!(
                "base point has {} jets for {} generators",
                base.len(),
                m
            )));
        }
        let mut led_by: Vec<Option<usize>> = vec![None; m];
        let mut lead_order = vec![0usize; m];
        for (ri, rel) in pres.relations.iter().enumerate() {
            if rel.num_vars() != m {
                return Err(Error::UsageError(
                    "relation variable count does not match the generators".into(),
                ));
            }
            let lead = (0..m)
                .rev()
                .find(|&v| rel.involves(v))
                .ok_or_else(|| {
                    Error::NonTriangularPresentation(format!(
                        "relation {ri} involves no generator"
                    ))
                })?;
            if led_by[lead].is_some() {
                return Err(Error::NonTriangularPresentation(format!(
                    "generator {} led by two relations",
                    pres.generators[lead]
                )));
            }
            led_by[lead] = Some(ri);
            lead_order[lead] = rel.order(lead)? as usize;
        }
        let mut values = Vec::with_capacity(m);
        for (v, jet) in base.iter().enumerate() {
            match led_by[v] {
                Some(_) => {
                    if jet.len() != lead_order[v] + 1 {
                        return Err(Error::JetTooShort {
                            var: v,
                            order: lead_order[v] as u32,
                            have: jet.len(),
                        });
                    }
                }
                None => {
                    if jet.is_empty() {
                        return Err(Error::JetTooShort {
                            var: v,
                            order: 0,
                            have: 0,
                        });
                    }
                }
            }
            values.push(jet.clone());
        }
        // a bare value for a free generator perturbs by the new uniformizer
        for v in 0..m {
            if led_by[v].is_none() && values[v].len() == 1 {
                values[v].push(TowerElement::one(tower.height()));
            }
        }
        Ok(Prolongation {
            pres,
            tower,
            led_by,
            lead_order,
            derived: pres.relations.iter().map(|r| vec![r.clone()]).collect(),
            values,
        })
    }

    fn derived_relation(&mut self, ri: usize, times: usize) -> DiffPoly {
        while self.derived[ri].len() <= times {
            let next = self.derived[ri].last().unwrap().ring_derive();
            self.derived[ri].push(next);
        }
        self.derived[ri][times].clone()
    }

    /// Ensures `values[v]` covers orders `0..=upto`.
    fn ensure(&mut self, v: usize, upto: usize) -> Result<()> {
        while self.values[v].len() <= upto {
            let k = self.values[v].len();
            match self.led_by[v] {
                None => {
                    let level = self.tower.height();
                    self.values[v].push(TowerElement::zero(level));
                }
                Some(ri) => {
                    let n = self.lead_order[v];
                    debug_assert!(k > n);
                    let g = self.derived_relation(ri, k - n);
                    // cover every variable g mentions
                    let m = self.pres.generators.len();
                    for w in 0..m {
                        if w == v {
                            continue;
                        }
                        if g.involves(w) {
                            let need = g.order(w)? as usize;
                            self.ensure(w, need)?;
                        }
                    }
                    let a = g.partial(v, k as u32);
                    let b = g.without_variable(v, k as u32);
                    let jet = self.jet_view();
                    let a_val = a.alg_eval(&jet)?;
                    let b_val = b.alg_eval(&jet)?;
                    let next =
                        b_val
                            .neg()
                            .div(&a_val, self.tower)
                            .map_err(|e| match e {
                                Error::DivisionByIndistinguishableZero(msg) => {
                                    Error::DegeneratePoint(format!(
                                        "separant of relation {ri} not invertible: {msg}"
                                    ))
                                }
                                other => other,
                            })?;
                    self.values[v].push(next);
                }
            }
        }
        Ok(())
    }

    fn jet_view(&self) -> Jet {
        Jet::new(self.values.clone())
    }
}

/// Produces a differential point of the presented algebra valued in the
/// next tower stage, each generator's image strictly inside the `γ`-ball
/// around its base value.
pub fn solve_algebra_point(
    pres: &AlgebraPresentation,
    gamma: &ValueVec,
    n_terms: usize,
    tower: &Tower,
) -> Result<AlgebraPoint> {
    if n_terms == 0 {
        return Err(Error::UsageError("need at least one series term".into()));
    }
    let m = pres.generators.len();
    let mut prolongation = Prolongation::new(pres, tower)?;

    // base point must kill every relation, with invertible separants
    for (ri, rel) in pres.relations.iter().enumerate() {
        for v in 0..m {
            if rel.involves(v) {
                let need = rel.order(v)? as usize;
                prolongation.ensure(v, need)?;
            }
        }
        let jet = prolongation.jet_view();
        let value = rel.alg_eval(&jet)?;
        if !value.is_exact_zero() {
            return Err(Error::NotARoot(format!(
                "relation {ri} does not vanish at the base point"
            )));
        }
        let lead = (0..m).rev().find(|&v| rel.involves(v)).unwrap();
        let sep = rel.separant(lead)?.alg_eval(&jet)?;
        if !sep.is_known_nonzero() {
            return Err(Error::DegeneratePoint(format!(
                "separant of relation {ri} vanishes at the base point"
            )));
        }
    }

    for v in 0..m {
        prolongation.ensure(v, n_terms - 1)?;
    }

    let up = tower.height() + 1;
    let mut images = BTreeMap::new();
    let mut image_list = Vec::with_capacity(m);
    for v in 0..m {
        let image = twisted_taylor_values(&prolongation.values[v][..n_terms], n_terms)?;
        image_list.push(image.clone());
        images.insert(pres.generators[v].clone(), image);
    }

    let base = pres.base_point.as_ref().unwrap();
    let centers: Vec<TowerElement> = base.iter().map(|jet| jet[0].lift_to(up)).collect();
    let gamma_up = gamma.extend_to(up);
    let ball_ok = in_open_ball(&image_list, &centers, &gamma_up)?;

    let mut relations_ok = true;
    for rel in &pres.relations {
        let lifted = rel.lift_to(up);
        let value = lifted.diff_eval(&image_list)?;
        if value.is_known_nonzero() {
            relations_ok = false;
        }
    }

    Ok(AlgebraPoint {
        images,
        ball_ok,
        relations_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};
    use crate::text::parse_diff_poly;
    use crate::tower::LevelConfig;

    fn q(n: i64, d: i64) -> TowerElement {
        TowerElement::Scalar(rat(n, d))
    }

    fn exp_problem() -> DHProblem {
        let f = parse_diff_poly("x1' - x1", &Tower::base(), Some(1)).unwrap();
        DHProblem::new(f, vec![q(1, 1), q(1, 1)], ValueVec::finite(Vec::new())).unwrap()
    }

    #[test]
    fn exponential_law() {
        let cert = solve_dh(&exp_problem(), 8, &Tower::base()).unwrap();
        let mut fact = 1i64;
        for i in 0..8i64 {
            if i > 0 {
                fact *= i;
            }
            assert_eq!(
                cert.solution.known_coeff(&rat_int(i)).unwrap(),
                q(1, fact)
            );
        }
        assert!(cert.residual_ok && cert.ball_ok && cert.valued_taylor_ok);
        assert!(cert.constant_terms_ok);
        assert!(check_dl(&exp_problem(), &cert.solution).unwrap());
    }

    #[test]
    fn ball_dominance_over_the_old_group() {
        // any old-group radius is dominated by the new coordinate
        let tower = Tower::laurent(1);
        let f = parse_diff_poly("x1'^2 - x1", &tower, Some(1)).unwrap();
        let jet = vec![tower.one(), tower.one()];
        for radius in [rat_int(-50), rat_int(0), rat_int(100)] {
            let problem =
                DHProblem::new(f.clone(), jet.clone(), ValueVec::finite(vec![radius])).unwrap();
            let cert = solve_dh(&problem, 4, &tower).unwrap();
            assert!(cert.ball_ok);
        }
    }

    #[test]
    fn order_zero_problems_are_algebraic_roots() {
        // f = x - t0 over Q((t0)): the expansion is forced to stay at t0
        let tower = Tower::laurent(1);
        let f = parse_diff_poly("x1 - t0", &tower, Some(1)).unwrap();
        let problem = DHProblem::new(
            f,
            vec![tower.var(0).unwrap()],
            ValueVec::finite(vec![rat_int(6)]),
        )
        .unwrap();
        let cert = solve_dh(&problem, 5, &tower).unwrap();
        assert!(cert.residual_ok && cert.ball_ok && cert.valued_taylor_ok);
        assert_eq!(
            cert.solution.known_coeff(&rat_int(0)).unwrap(),
            tower.var(0).unwrap()
        );
        for i in 1..5i64 {
            assert!(cert
                .solution
                .known_coeff(&rat_int(i))
                .unwrap()
                .is_exact_zero());
        }
        // a double root has a vanishing separant
        let g = parse_diff_poly("x1^2 - 2*x1 + 1", &tower, Some(1)).unwrap();
        let bad = DHProblem::new(g, vec![tower.one()], ValueVec::finite(vec![rat_int(1)]))
            .unwrap();
        assert_eq!(
            solve_dh(&bad, 5, &tower).unwrap_err().name(),
            "DegeneratePoint"
        );
    }

    #[test]
    fn non_roots_are_rejected() {
        let f = parse_diff_poly("x1' - x1", &Tower::base(), Some(1)).unwrap();
        let problem =
            DHProblem::new(f, vec![q(1, 1), q(2, 1)], ValueVec::finite(Vec::new())).unwrap();
        assert_eq!(
            solve_dh(&problem, 6, &Tower::base()).unwrap_err().name(),
            "NotARoot"
        );
    }

    #[test]
    fn check_dl_distinguishes_real_witnesses() {
        let problem = exp_problem();
        // the unprolonged constant is not a differential root: f(1) = -1
        let constant = TowerElement::one(0).lift_to(1);
        assert!(!check_dl(&problem, &constant).unwrap());
    }

    #[test]
    fn check_dl_enforces_strict_closeness_within_the_same_stage() {
        // a correct root whose witnessed closeness is exceeded by gamma
        let tower = Tower::laurent(1);
        let f = parse_diff_poly("x1' - x1", &tower, Some(1)).unwrap();
        let jet = vec![tower.one(), tower.one()];
        let solved = {
            let p0 = DHProblem::new(f.clone(), jet.clone(), ValueVec::zero(1)).unwrap();
            solve_dh(&p0, 8, &tower).unwrap().solution
        };
        // same witness, same stage: closeness is v(exp(t1) - 1) = (0, 1)
        // raising gamma's new coordinate above it must fail
        let tower2 = tower.extend(LevelConfig::laurent());
        let lifted_jet: Vec<TowerElement> = jet.iter().map(|c| c.lift_to(2)).collect();
        let tight = DHProblem::new(
            f.lift_to(2),
            lifted_jet.clone(),
            ValueVec::finite(vec![rat_int(0), rat_int(2)]),
        )
        .unwrap();
        assert!(!check_dl(&tight, &solved).unwrap());
        let _ = tower2;
    }

    #[test]
    fn free_generators_move_by_the_uniformizer() {
        let tower = Tower::base();
        let pres = AlgebraPresentation {
            generators: vec!["a".into()],
            relations: vec![],
            base_point: Some(vec![vec![q(5, 1)]]),
        };
        let point = solve_algebra_point(&pres, &ValueVec::finite(Vec::new()), 6, &tower).unwrap();
        let image = &point.images["a"];
        // c + t
        assert_eq!(image.known_coeff(&rat_int(0)).unwrap(), q(5, 1));
        assert_eq!(image.known_coeff(&rat_int(1)).unwrap(), q(1, 1));
        assert!(point.ball_ok && point.relations_ok);
    }

    #[test]
    fn algebra_point_reduces_to_the_exponential() {
        let tower = Tower::base();
        let f = parse_diff_poly("x1' - x1", &tower, Some(1)).unwrap();
        let pres = AlgebraPresentation {
            generators: vec!["x".into()],
            relations: vec![f],
            base_point: Some(vec![vec![q(1, 1), q(1, 1)]]),
        };
        let point = solve_algebra_point(&pres, &ValueVec::finite(Vec::new()), 8, &tower).unwrap();
        let image = &point.images["x"];
        assert_eq!(image.known_coeff(&rat_int(3)).unwrap(), q(1, 6));
        assert!(point.ball_ok && point.relations_ok);
    }

    #[test]
    fn algebra_point_with_nonlinear_separant() {
        let tower = Tower::base();
        let f = parse_diff_poly("x1'^2 - x1", &tower, Some(1)).unwrap();
        let pres = AlgebraPresentation {
            generators: vec!["x".into()],
            relations: vec![f],
            base_point: Some(vec![vec![q(1, 1), q(1, 1)]]),
        };
        let point = solve_algebra_point(&pres, &ValueVec::finite(Vec::new()), 4, &tower).unwrap();
        // (1 + t/2)^2 = 1 + t + t^2/4
        let image = &point.images["x"];
        assert_eq!(image.known_coeff(&rat_int(1)).unwrap(), q(1, 1));
        assert_eq!(image.known_coeff(&rat_int(2)).unwrap(), q(1, 4));
        assert!(point.ball_ok && point.relations_ok);
    }

    #[test]
    fn triangular_chain_is_solved_jointly() {
        // x1' = x1 (exp), x2' = x1 (its integral, from base jets)
        let tower = Tower::base();
        let r1 = parse_diff_poly("x1' - x1", &tower, Some(2)).unwrap();
        let r2 = parse_diff_poly("x2' - x1", &tower, Some(2)).unwrap();
        let pres = AlgebraPresentation {
            generators: vec!["x".into(), "y".into()],
            relations: vec![r1.clone(), r2.clone()],
            base_point: Some(vec![vec![q(1, 1), q(1, 1)], vec![q(0, 1), q(1, 1)]]),
        };
        let point = solve_algebra_point(&pres, &ValueVec::finite(Vec::new()), 7, &tower).unwrap();
        assert!(point.ball_ok && point.relations_ok);
        // y' = x = exp(t), so y = exp(t) - 1
        let y = &point.images["y"];
        assert!(y.known_coeff(&rat_int(0)).unwrap().is_exact_zero());
        assert_eq!(y.known_coeff(&rat_int(2)).unwrap(), q(1, 2));
        let r = r2
            .lift_to(1)
            .diff_eval(&[point.images["x"].clone(), y.clone()])
            .unwrap();
        assert!(!r.is_known_nonzero());
    }

    #[test]
    fn non_triangular_presentations_are_rejected() {
        let tower = Tower::base();
        let r1 = parse_diff_poly("x2' - x1", &tower, Some(2)).unwrap();
        let r2 = parse_diff_poly("x2 - x1'", &tower, Some(2)).unwrap();
        let pres = AlgebraPresentation {
            generators: vec!["x".into(), "y".into()],
            relations: vec![r1, r2],
            base_point: Some(vec![vec![q(0, 1), q(0, 1)], vec![q(0, 1), q(0, 1)]]),
        };
        assert_eq!(
            solve_algebra_point(&pres, &ValueVec::finite(Vec::new()), 4, &tower)
                .unwrap_err()
                .name(),
            "NonTriangularPresentation"
        );
    }

    #[test]
    fn iterated_tower_solving() {
        // solve over Q((t0)), then re-pose over Q((t0))((t1)) and solve again
        let t1 = Tower::laurent(1);
        let f1 = parse_diff_poly("x1' - x1", &t1, Some(1)).unwrap();
        let c = t1.one().add(&t1.var(0).unwrap());
        let p1 = DHProblem::new(
            f1.clone(),
            vec![c.clone(), c.clone()],
            ValueVec::finite(vec![rat_int(3)]),
        )
        .unwrap();
        let cert1 = solve_dh(&p1, 6, &t1).unwrap();
        assert!(cert1.residual_ok && cert1.ball_ok);

        let t2 = t1.extend(LevelConfig::laurent());
        let p2 = DHProblem::new(
            f1.lift_to(2),
            vec![cert1.solution.clone(), cert1.solution.derive()],
            ValueVec::finite(vec![rat_int(3), rat_int(5)]),
        );
        // the solution of stage 1 is an approximate root only (finite
        // precision), so re-posing uses a fresh exact jet instead
        assert!(p2.is_ok());
        let c2 = t2.one().add(&t2.var(1).unwrap());
        let p2 = DHProblem::new(
            f1.lift_to(2),
            vec![c2.clone(), c2.clone()],
            ValueVec::finite(vec![rat_int(3), rat_int(5)]),
        )
        .unwrap();
        let cert2 = solve_dh(&p2, 6, &t2).unwrap();
        assert!(cert2.residual_ok && cert2.ball_ok && cert2.valued_taylor_ok);
        assert_eq!(cert2.solution.level(), 3);
    }
}
