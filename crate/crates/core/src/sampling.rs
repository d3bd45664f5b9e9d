//! Seeded random generation for the property suites and tests.
//!
//! Everything here is deterministic given the RNG state; suites take an
//! explicit seed so runs are reproducible byte for byte.

use rand::rngs::StdRng;
use rand::Rng;

use crate::diffpoly::{DiffPoly, Jet, Monomial};
use crate::rational::{rat, rat_int, Rational};
use crate::solver::DHProblem;
use crate::tower::{Prec, Tower, TowerElement};
use crate::value::ValueVec;
use crate::weil::{ExtensionModel, FiniteFreeAlgebra};

/// Rational with numerator and denominator bounded by `height`.
pub fn random_rational(rng: &mut StdRng, height: i64) -> Rational {
    let num = rng.gen_range(-height..=height);
    let den = rng.gen_range(1..=height);
    rat(num, den)
}

pub fn random_nonzero_rational(rng: &mut StdRng, height: i64) -> Rational {
    loop {
        let q = random_rational(rng, height);
        if !num_traits::Zero::is_zero(&q) {
            return q;
        }
    }
}

/// Random element at the tower's top stage. `allow_truncation` admits a
/// finite precision bound (and hence possibly placeholder coefficients).
pub fn random_element(rng: &mut StdRng, tower: &Tower, allow_truncation: bool) -> TowerElement {
    random_element_at(rng, tower, tower.height(), allow_truncation)
}

fn random_element_at(
    rng: &mut StdRng,
    tower: &Tower,
    level: usize,
    allow_truncation: bool,
) -> TowerElement {
    if level == 0 {
        return TowerElement::Scalar(random_rational(rng, 6));
    }
    let step = tower.lattice_step(level);
    let n_terms = rng.gen_range(0..=3);
    let mut terms = std::collections::BTreeMap::new();
    for _ in 0..n_terms {
        let k: i64 = rng.gen_range(-2..=5);
        let e = step.clone() * rat_int(k);
        let c = random_element_at(rng, tower, level - 1, allow_truncation);
        terms.insert(e, c);
    }
    let prec = if allow_truncation && rng.gen_bool(0.4) {
        Prec::Finite(step * rat_int(rng.gen_range(2..=8)))
    } else {
        Prec::Infinite
    };
    TowerElement::series(level, terms, prec)
}

/// Random exact element, retried until certified nonzero.
pub fn random_nonzero_element(rng: &mut StdRng, tower: &Tower) -> TowerElement {
    loop {
        let e = random_element(rng, tower, false);
        if e.is_known_nonzero() {
            return e;
        }
    }
}

/// Random finite value vector for the tower's stage.
pub fn random_value_vec(rng: &mut StdRng, len: usize) -> ValueVec {
    ValueVec::finite((0..len).map(|_| random_rational(rng, 8)).collect())
}

/// Random monomial in variables `x_0..x_{num_vars-1}` with derivative
/// orders `≤ max_order` and total degree `1..=max_degree`.
fn random_monomial(
    rng: &mut StdRng,
    num_vars: usize,
    max_order: u32,
    max_degree: u32,
) -> Monomial {
    let degree = rng.gen_range(1..=max_degree);
    let mut m = Monomial::one();
    for _ in 0..degree {
        let var = rng.gen_range(0..num_vars);
        let order = rng.gen_range(0..=max_order);
        m = m.mul(&Monomial::var(var, order));
    }
    m
}

/// Random differential polynomial with rational coefficients of bounded
/// height; may not involve every variable.
pub fn random_diff_poly(
    rng: &mut StdRng,
    tower: &Tower,
    num_vars: usize,
    max_order: u32,
    max_degree: u32,
    height: i64,
) -> DiffPoly {
    let level = tower.height();
    let n_terms = rng.gen_range(1..=4);
    let mut terms = Vec::new();
    for _ in 0..n_terms {
        let m = random_monomial(rng, num_vars, max_order, max_degree);
        let c = TowerElement::from_rational(level, random_rational(rng, height));
        terms.push((m, c));
    }
    DiffPoly::from_terms(num_vars, level, terms)
}

/// Random differential polynomial with (possibly truncated) series
/// coefficients, for printer round-trips and identity tests.
pub fn random_series_poly(
    rng: &mut StdRng,
    tower: &Tower,
    num_vars: usize,
    allow_truncation: bool,
) -> DiffPoly {
    let level = tower.height();
    let n_terms = rng.gen_range(1..=4);
    let mut terms = Vec::new();
    for _ in 0..n_terms {
        let m = random_monomial(rng, num_vars, 3, 3);
        let c = random_element(rng, tower, allow_truncation);
        terms.push((m, c));
    }
    DiffPoly::from_terms(num_vars, level, terms)
}

/// Random non-degenerate differentially henselian problem over `Q`:
/// order ≤ 3, degree ≤ 3, coefficient height ≤ 10. The candidate jet is
/// made a root by adjusting the constant term; degenerate draws (separant
/// vanishing at the jet) are retried.
pub fn random_dh_problem(rng: &mut StdRng, max_order: u32) -> DHProblem {
    let tower = Tower::base();
    loop {
        let order = rng.gen_range(1..=max_order);
        let mut f = random_diff_poly(rng, &tower, 1, order, 3, 10);
        // force the top derivative to occur
        if f.order(0).map(|n| n < order).unwrap_or(true) {
            let coeff = TowerElement::Scalar(random_nonzero_rational(rng, 10));
            f = f.add(&DiffPoly::from_terms(
                1,
                0,
                [(Monomial::var(0, order), coeff)],
            ));
        }
        let jet: Vec<TowerElement> = (0..=order)
            .map(|_| TowerElement::Scalar(random_rational(rng, 5)))
            .collect();
        let value = f
            .alg_eval(&Jet::single(jet.clone()))
            .expect("jet covers the polynomial");
        let f = f.sub(&DiffPoly::constant(1, value));
        let sep = f
            .separant(0)
            .expect("top derivative present")
            .alg_eval(&Jet::single(jet.clone()))
            .expect("jet covers the separant");
        if !sep.is_known_nonzero() {
            continue;
        }
        return DHProblem::new(f, jet, ValueVec::finite(Vec::new()))
            .expect("shape is valid by construction");
    }
}

/// Conjugates an extension by a random unimodular change of basis built
/// from elementary row operations, so all tables stay exact and the
/// axioms keep holding. Separatedness is not preserved and is dropped.
pub fn random_basis_change(
    rng: &mut StdRng,
    alg: &FiniteFreeAlgebra,
    steps: usize,
) -> FiniteFreeAlgebra {
    let l = alg.dim;
    let level = alg.level();
    let one = TowerElement::one(level);
    let zero = TowerElement::zero(level);

    // p expresses the new basis over the old, q is its inverse
    let mut p: Vec<Vec<TowerElement>> = (0..l)
        .map(|i| {
            (0..l)
                .map(|j| if i == j { one.clone() } else { zero.clone() })
                .collect()
        })
        .collect();
    let mut q = p.clone();
    for _ in 0..steps {
        let i = rng.gen_range(0..l);
        let mut j = rng.gen_range(0..l);
        while j == i {
            j = rng.gen_range(0..l);
        }
        let lambda = TowerElement::from_rational(level, random_rational(rng, 3));
        if lambda.is_exact_zero() {
            continue;
        }
        // p := (I + λ e_ij) p ; q := q (I - λ e_ij)
        let row_j = p[j].clone();
        for (cell, pj) in p[i].iter_mut().zip(&row_j) {
            *cell = cell.add(&pj.mul(&lambda));
        }
        for row in q.iter_mut() {
            let sub = row[i].mul(&lambda);
            row[j] = row[j].sub(&sub);
        }
    }

    let to_new = |coords: &[TowerElement]| -> Vec<TowerElement> {
        (0..l)
            .map(|jcol| {
                let mut acc = TowerElement::zero(level);
                for (i, c) in coords.iter().enumerate() {
                    acc = acc.add(&c.mul(&q[i][jcol]));
                }
                acc
            })
            .collect()
    };

    let basis_new_in_old: Vec<Vec<TowerElement>> = (0..l).map(|i| p[i].clone()).collect();

    let mut structure = Vec::with_capacity(l);
    for i in 0..l {
        let mut row = Vec::with_capacity(l);
        for j in 0..l {
            let prod = alg.mul_elements(&basis_new_in_old[i], &basis_new_in_old[j]);
            row.push(to_new(&prod));
        }
        structure.push(row);
    }
    let derivation: Vec<Vec<TowerElement>> = (0..l)
        .map(|i| to_new(&alg.derive_element(&basis_new_in_old[i])))
        .collect();
    let unit = to_new(&alg.unit);

    let (model, basis_valuations) = match &alg.model {
        ExtensionModel::Embedded { .. } => {
            let basis: Vec<TowerElement> = (0..l)
                .map(|i| alg.combine(&basis_new_in_old[i]).expect("embedded"))
                .collect();
            let vals = basis
                .iter()
                .map(|b| b.valuation().expect("unimodular image of a basis"))
                .collect();
            (ExtensionModel::Embedded { basis }, vals)
        }
        ExtensionModel::TrivialValued => (
            ExtensionModel::TrivialValued,
            vec![ValueVec::finite(Vec::new()); l],
        ),
    };

    FiniteFreeAlgebra {
        dim: l,
        basis_labels: (1..=l).map(|i| format!("c{i}")).collect(),
        structure,
        derivation,
        unit,
        basis_valuations,
        separated: false,
        model,
    }
}
