//! Classical and differential Weil descent along a finite free valued
//! extension `L/K`, with the valuation bounds relating points upstairs and
//! downstairs.
//!
//! The extension is presented by a basis `b_1..b_l` with structure constants
//! `b_i·b_j = Σ_m c[i][j][m]·b_m`, a derivation matrix `∂b_i = Σ_m
//! d[i][m]·b_m`, the coordinates of `1`, and the basis valuations `w(b_i)`.
//! Descending a presented `L`-algebra splits each generator `t` into `l`
//! coordinate generators `t(1)..t(l)`; every relation descends to its `l`
//! basis coordinates. `K`-points of the descent correspond bijectively to
//! `L`-points of the original presentation: `τ(φ̃)(t) = Σ_i φ̃(t(i))·b_i`
//! and back by coordinate projection.
//!
//! For differential presentations the descent derivation is pinned by
//! requiring the unit `t ↦ Σ_i t(i)⊗b_i` to be a differential homomorphism:
//! `δ_W(t_j(i)) = t_{j+1}(i) - Σ_m d[m][i]·t_j(m)`, verified here by
//! expanding both sides over the basis.

use crate::diffpoly::{DiffPoly, Jet};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::tower::{Prec, Tower, TowerElement, Tri};
use crate::value::ValueVec;

/// How the extension's valuation is evaluated on concrete combinations.
#[derive(Clone, Debug)]
pub enum ExtensionModel {
    /// Basis elements realized inside a (possibly finer-lattice) tower
    /// stage at the same level; `w` is the stage valuation of the
    /// combination.
    Embedded { basis: Vec<TowerElement> },
    /// Trivial valuation on `K` and `L`: `w(x) = ()` for nonzero `x`.
    TrivialValued,
}

/// A finite free valued (differential) extension `L/K` in coordinates.
#[derive(Clone, Debug)]
pub struct FiniteFreeAlgebra {
    pub dim: usize,
    pub basis_labels: Vec<String>,
    /// `structure[i][j][m]`: coefficient of `b_m` in `b_i · b_j`.
    pub structure: Vec<Vec<Vec<TowerElement>>>,
    /// `derivation[i][m]`: coefficient of `b_m` in `∂b_i`.
    pub derivation: Vec<Vec<TowerElement>>,
    /// Coordinates of `1 ∈ L`.
    pub unit: Vec<TowerElement>,
    /// `w(b_i)` in the extension's value group.
    pub basis_valuations: Vec<ValueVec>,
    /// Declared separated (power bases of totally ramified series
    /// extensions, or certified by sampling).
    pub separated: bool,
    pub model: ExtensionModel,
}

/// An element of `L` as coordinates over the basis.
pub type LElement = Vec<TowerElement>;

impl FiniteFreeAlgebra {
    /// Stage of the ground field `K` the coordinates live at.
    pub fn level(&self) -> usize {
        self.unit[0].level()
    }

    pub fn zero_element(&self) -> LElement {
        vec![TowerElement::zero(self.level()); self.dim]
    }

    /// `q ∈ K` embedded as `q·1`.
    pub fn scalar_element(&self, q: &TowerElement) -> LElement {
        self.unit.iter().map(|u| u.mul(q)).collect()
    }

    pub fn basis_element(&self, i: usize) -> LElement {
        let mut out = self.zero_element();
        out[i] = TowerElement::one(self.level());
        out
    }

    pub fn add_elements(&self, a: &LElement, b: &LElement) -> LElement {
        a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
    }

    pub fn sub_elements(&self, a: &LElement, b: &LElement) -> LElement {
        a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
    }

    /// Product through the structure constants.
    pub fn mul_elements(&self, a: &LElement, b: &LElement) -> LElement {
        let mut out = self.zero_element();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_exact_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_exact_zero() {
                    continue;
                }
                let prod = ai.mul(bj);
                for (m, c) in self.structure[i][j].iter().enumerate() {
                    if !c.is_exact_zero() {
                        out[m] = out[m].add(&prod.mul(c));
                    }
                }
            }
        }
        out
    }

    /// The extension derivation in coordinates:
    /// `∂(Σ a_i b_i) = Σ_m (δ(a_m) + Σ_i a_i·d[i][m])·b_m`.
    pub fn derive_element(&self, a: &LElement) -> LElement {
        let mut out: LElement = a.iter().map(|x| x.derive()).collect();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_exact_zero() {
                continue;
            }
            for (m, d) in self.derivation[i].iter().enumerate() {
                if !d.is_exact_zero() {
                    out[m] = out[m].add(&ai.mul(d));
                }
            }
        }
        out
    }

    /// Coordinate projections `λ_i`: the identity on coordinate vectors.
    pub fn coordinates(&self, xi: &LElement) -> LElement {
        assert_eq!(xi.len(), self.dim, "element has the wrong dimension");
        xi.clone()
    }

    /// The combination `Σ a_i b_i` in the concrete model, when one exists.
    pub fn combine(&self, a: &LElement) -> Option<TowerElement> {
        match &self.model {
            ExtensionModel::Embedded { basis } => {
                let mut acc = TowerElement::zero(self.level());
                for (ai, bi) in a.iter().zip(basis) {
                    acc = acc.add(&ai.mul(bi));
                }
                Some(acc)
            }
            ExtensionModel::TrivialValued => None,
        }
    }

    /// `w(Σ a_i b_i)` in the extension's value group.
    pub fn valuation_of(&self, a: &LElement) -> Result<ValueVec> {
        match &self.model {
            ExtensionModel::Embedded { .. } => self
                .combine(a)
                .expect("embedded model")
                .valuation(),
            ExtensionModel::TrivialValued => {
                if a.iter().all(|x| x.is_exact_zero()) {
                    Ok(ValueVec::Infinity)
                } else if a.iter().any(|x| x.is_known_nonzero()) {
                    Ok(ValueVec::finite(Vec::new()))
                } else {
                    Err(Error::IndistinguishableFromZero(
                        "coordinates not certifiably zero or nonzero".into(),
                    ))
                }
            }
        }
    }

    /// Structure-constant axioms: commutativity, associativity, unit, and
    /// the Leibniz compatibility of the derivation matrix.
    pub fn validate(&self) -> Result<()> {
        let l = self.dim;
        let lvl = self.level();
        let shape_ok = self.structure.len() == l
            && self.structure.iter().all(|r| {
                r.len() == l && r.iter().all(|c| c.len() == l)
            })
            && self.derivation.len() == l
            && self.derivation.iter().all(|r| r.len() == l)
            && self.unit.len() == l
            && self.basis_valuations.len() == l;
        if !shape_ok {
            return Err(Error::UsageError(
                "extension tables do not match the declared dimension".into(),
            ));
        }
        for i in 0..l {
            for j in 0..l {
                for m in 0..l {
                    if self.structure[i][j][m] != self.structure[j][i][m] {
                        return Err(Error::UsageError(format!(
                            "structure constants not commutative at ({i},{j},{m})"
                        )));
                    }
                }
            }
        }
        // unit: 1 · b_j = b_j
        for j in 0..l {
            let prod = self.mul_elements(&self.unit, &self.basis_element(j));
            if prod != self.basis_element(j) {
                return Err(Error::UsageError(format!(
                    "unit coordinates fail at basis element {j}"
                )));
            }
        }
        // associativity on basis triples
        for i in 0..l {
            for j in 0..l {
                for k in 0..l {
                    let left = self.mul_elements(
                        &self.mul_elements(&self.basis_element(i), &self.basis_element(j)),
                        &self.basis_element(k),
                    );
                    let right = self.mul_elements(
                        &self.basis_element(i),
                        &self.mul_elements(&self.basis_element(j), &self.basis_element(k)),
                    );
                    if left != right {
                        return Err(Error::UsageError(format!(
                            "associativity fails on basis triple ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        // Leibniz: ∂(b_i b_j) = ∂b_i·b_j + b_i·∂b_j in coordinates
        for i in 0..l {
            for j in 0..l {
                let prod: LElement = (0..l)
                    .map(|m| self.structure[i][j][m].clone())
                    .collect();
                let left = self.derive_element(&prod);
                let right = self.add_elements(
                    &self.mul_elements(&self.derivation[i].clone(), &self.basis_element(j)),
                    &self.mul_elements(&self.basis_element(i), &self.derivation[j].clone()),
                );
                if left != right {
                    return Err(Error::UsageError(format!(
                        "derivation matrix fails Leibniz on basis pair ({i},{j})"
                    )));
                }
            }
        }
        // embedded model consistency
        if let ExtensionModel::Embedded { basis } = &self.model {
            if basis.len() != l {
                return Err(Error::UsageError("model basis has the wrong length".into()));
            }
            for (i, bi) in basis.iter().enumerate() {
                if bi.level() != lvl {
                    return Err(Error::LevelMismatch {
                        expected: lvl,
                        found: bi.level(),
                    });
                }
                let w = bi.valuation()?;
                if w != self.basis_valuations[i] {
                    return Err(Error::UsageError(format!(
                        "declared valuation of basis element {i} is {}, model gives {w}",
                        self.basis_valuations[i]
                    )));
                }
            }
            for i in 0..l {
                for j in 0..l {
                    let concrete = basis[i].mul(&basis[j]);
                    let table: LElement =
                        (0..l).map(|m| self.structure[i][j][m].clone()).collect();
                    let combined = self.combine(&table).expect("embedded model");
                    if concrete != combined {
                        return Err(Error::UsageError(format!(
                            "structure constants disagree with the model at ({i},{j})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `ε = min_i w(b_i)`.
    pub fn epsilon(&self) -> ValueVec {
        let mut min = self.basis_valuations[0].clone();
        for w in &self.basis_valuations[1..] {
            if min.gt(w) {
                min = w.clone();
            }
        }
        min
    }

    // -- shipped example extensions --------------------------------------

    /// `Q(i)/Q`: trivial valuation, zero derivation, basis `(1, i)`.
    pub fn gaussian_rationals() -> FiniteFreeAlgebra {
        let z = || TowerElement::zero(0);
        let o = || TowerElement::one(0);
        let neg_o = || TowerElement::one(0).neg();
        FiniteFreeAlgebra {
            dim: 2,
            basis_labels: vec!["1".into(), "i".into()],
            structure: vec![
                vec![vec![o(), z()], vec![z(), o()]],
                vec![vec![z(), o()], vec![neg_o(), z()]],
            ],
            derivation: vec![vec![z(), z()], vec![z(), z()]],
            unit: vec![o(), z()],
            basis_valuations: vec![
                ValueVec::finite(Vec::new()),
                ValueVec::finite(Vec::new()),
            ],
            separated: true,
            model: ExtensionModel::TrivialValued,
        }
    }

    /// `Q(r)/Q` with `r^3 = 2`: a cubic radical extension with trivial
    /// valuation, zero derivation, power basis `(1, r, r^2)`.
    pub fn cubic_root_of_two() -> FiniteFreeAlgebra {
        let z = || TowerElement::zero(0);
        let o = || TowerElement::one(0);
        let two = || TowerElement::from_rational(0, crate::rational::rat_int(2));
        // r^i · r^j = r^(i+j) with r^3 = 2
        let mut structure = vec![vec![vec![z(); 3]; 3]; 3];
        for (i, row) in structure.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let s = i + j;
                if s < 3 {
                    cell[s] = o();
                } else {
                    cell[s - 3] = two();
                }
            }
        }
        FiniteFreeAlgebra {
            dim: 3,
            basis_labels: vec!["1".into(), "r".into(), "r2".into()],
            structure,
            derivation: vec![vec![z(), z(), z()]; 3],
            unit: vec![o(), z(), z()],
            basis_valuations: vec![ValueVec::finite(Vec::new()); 3],
            separated: true,
            model: ExtensionModel::TrivialValued,
        }
    }

    /// The ramified quadratic `Q((t^(1/2)))/Q((t))` with power basis
    /// `(1, s)`, `s^2 = t`, `∂s = s/(2t)`. Separated; `ε = 0`.
    pub fn ramified_quadratic(tower: &Tower) -> Result<FiniteFreeAlgebra> {
        assert_eq!(tower.height(), 1, "ground field is the first series stage");
        let z = || TowerElement::zero(1);
        let o = || TowerElement::one(1);
        let t = tower.var(0)?;
        let s = TowerElement::monomial(1, Rational::new(1.into(), 2.into()), TowerElement::one(0));
        // ∂s = (1/(2t))·s
        let half_inv_t = TowerElement::one(1)
            .div(&t.scale(&crate::rational::rat_int(2)), tower)?;
        Ok(FiniteFreeAlgebra {
            dim: 2,
            basis_labels: vec!["1".into(), "s".into()],
            structure: vec![
                vec![vec![o(), z()], vec![z(), o()]],
                vec![vec![z(), o()], vec![t.clone(), z()]],
            ],
            derivation: vec![vec![z(), z()], vec![z(), half_inv_t]],
            unit: vec![o(), z()],
            basis_valuations: vec![
                ValueVec::finite(vec![crate::rational::rat_int(0)]),
                ValueVec::finite(vec![Rational::new(1.into(), 2.into())]),
            ],
            separated: true,
            model: ExtensionModel::Embedded { basis: vec![o(), s] },
        })
    }
}

// ---------------------------------------------------------------------------
// Presentations and descent
// ---------------------------------------------------------------------------

/// A polynomial over `L` in the original generators, stored as basis
/// coordinates: `Σ_m coords[m]·b_m` with each coordinate a polynomial
/// over `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LPoly {
    pub coords: Vec<DiffPoly>,
}

/// A finitely presented (differential) `L`-algebra.
#[derive(Clone, Debug)]
pub struct LPresentation {
    pub generators: Vec<String>,
    pub relations: Vec<LPoly>,
}

/// The descended `K`-presentation in the doubled generators `t(i)`.
#[derive(Clone, Debug)]
pub struct DescendedPresentation {
    /// `generators[v*l + (i-1)]` is the descended name `t_v(i)`.
    pub generators: Vec<String>,
    pub relations: Vec<DiffPoly>,
    /// `(original relation index, basis coordinate)` of each kept relation.
    pub origin: Vec<(usize, usize)>,
    pub dim: usize,
    pub num_original: usize,
}

/// Polynomial-with-`L`-coefficients arithmetic over the doubled variable
/// set, in coordinates.
struct LPolyOps<'a> {
    alg: &'a FiniteFreeAlgebra,
    num_vars: usize,
}

impl<'a> LPolyOps<'a> {
    fn zero(&self) -> Vec<DiffPoly> {
        vec![DiffPoly::zero(self.num_vars, self.alg.level()); self.alg.dim]
    }

    fn add(&self, a: &[DiffPoly], b: &[DiffPoly]) -> Vec<DiffPoly> {
        a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
    }

    /// Product through the structure constants.
    fn mul(&self, a: &[DiffPoly], b: &[DiffPoly]) -> Vec<DiffPoly> {
        let mut out = self.zero();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let prod = ai.mul(bj);
                for (m, c) in self.alg.structure[i][j].iter().enumerate() {
                    if !c.is_exact_zero() {
                        out[m] = out[m].add(&prod.scale(c));
                    }
                }
            }
        }
        out
    }

    /// `K`-constant embedded through the unit coordinates.
    fn scalar(&self, q: &TowerElement) -> Vec<DiffPoly> {
        self.alg
            .unit
            .iter()
            .map(|u| DiffPoly::constant(self.num_vars, u.mul(q)))
            .collect()
    }

    /// The descended image of `x_v^(j)`: coordinates are the doubled
    /// variables `x_{v,i}^(j)`.
    fn generator_image(&self, v: usize, order: u32) -> Vec<DiffPoly> {
        (0..self.alg.dim)
            .map(|i| {
                DiffPoly::variable(
                    self.num_vars,
                    self.alg.level(),
                    v * self.alg.dim + i,
                    order,
                )
            })
            .collect()
    }

    /// Substitutes doubled variables into a `K`-coefficient polynomial.
    fn descend_k_poly(&self, p: &DiffPoly) -> Vec<DiffPoly> {
        let mut out = self.zero();
        for (mono, coeff) in p.iter_terms() {
            let mut term = self.scalar(coeff);
            for (&(var, order), &exp) in mono.powers() {
                let image = self.generator_image(var, order);
                for _ in 0..exp {
                    term = self.mul(&term, &image);
                }
            }
            out = self.add(&out, &term);
        }
        out
    }
}

/// Index of the descended variable `t_v(i)` (with `i` zero-based here).
pub fn descended_var(v: usize, i: usize, dim: usize) -> usize {
    v * dim + i
}

/// Descends a presented `L`-algebra: substitutes `t ↦ Σ_i t(i)·b_i`,
/// expands through the structure constants, and keeps each nonzero basis
/// coordinate of each relation.
pub fn descend(pres: &LPresentation, alg: &FiniteFreeAlgebra) -> DescendedPresentation {
    let l = alg.dim;
    let m = pres.generators.len();
    let num_vars = m * l;
    let ops = LPolyOps { alg, num_vars };

    let mut generators = Vec::with_capacity(num_vars);
    for g in &pres.generators {
        for i in 1..=l {
            generators.push(format!("{g}({i})"));
        }
    }

    let mut relations = Vec::new();
    let mut origin = Vec::new();
    for (ri, rel) in pres.relations.iter().enumerate() {
        assert_eq!(rel.coords.len(), l, "relation has the wrong dimension");
        let mut total = ops.zero();
        for (mcoord, p) in rel.coords.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let descended = ops.descend_k_poly(p);
            // multiply by the basis element b_m
            let mut basis_coords = vec![DiffPoly::zero(num_vars, alg.level()); l];
            basis_coords[mcoord] =
                DiffPoly::constant(num_vars, TowerElement::one(alg.level()));
            let contrib = ops.mul(&descended, &basis_coords);
            total = ops.add(&total, &contrib);
        }
        for (i, coord) in total.into_iter().enumerate() {
            if !coord.is_zero() {
                relations.push(coord);
                origin.push((ri, i + 1));
            }
        }
    }

    DescendedPresentation {
        generators,
        relations,
        origin,
        dim: l,
        num_original: m,
    }
}

/// A `K`-point of the descended presentation: one jet per descended
/// generator, flat-indexed like the descended variables.
pub type WPoint = Vec<Vec<TowerElement>>;

fn eval_descended(rel: &DiffPoly, point: &WPoint) -> Result<TowerElement> {
    rel.alg_eval(&Jet::new(point.clone()))
}

/// `τ`: turns a `K`-point of the descent into an `L`-point of the original
/// presentation, `τ(φ̃)(t) = Σ_i φ̃(t(i))·b_i` — in coordinates, a reshape.
/// Verifies that the input kills every descended relation.
pub fn tau(
    point: &WPoint,
    desc: &DescendedPresentation,
    pres: &LPresentation,
    alg: &FiniteFreeAlgebra,
) -> Result<Vec<LElement>> {
    if point.len() != desc.generators.len() {
        return Err(Error::UsageError(format!(
            "point assigns {} generators, descent has {}",
            point.len(),
            desc.generators.len()
        )));
    }
    for (k, rel) in desc.relations.iter().enumerate() {
        let value = eval_descended(rel, point)?;
        if value.is_known_nonzero() {
            return Err(Error::RelationViolated(format!(
                "descended relation {k} (origin {:?}) does not vanish",
                desc.origin[k]
            )));
        }
    }
    let l = alg.dim;
    let mut out = Vec::with_capacity(pres.generators.len());
    for v in 0..pres.generators.len() {
        let coords: LElement = (0..l).map(|i| point[v * l + i][0].clone()).collect();
        out.push(coords);
    }
    Ok(out)
}

/// Evaluates an `L`-polynomial at `L`-element arguments (order-0 generators).
pub fn eval_lpoly(
    rel: &LPoly,
    args: &[LElement],
    alg: &FiniteFreeAlgebra,
) -> Result<LElement> {
    let mut total = alg.zero_element();
    for (mcoord, p) in rel.coords.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let mut coord_val = alg.zero_element();
        for (mono, coeff) in p.iter_terms() {
            let mut term = alg.scalar_element(coeff);
            for (&(var, order), &exp) in mono.powers() {
                if order != 0 {
                    return Err(Error::UsageError(
                        "point evaluation takes order-0 presentations".into(),
                    ));
                }
                for _ in 0..exp {
                    term = alg.mul_elements(&term, &args[var]);
                }
            }
            coord_val = alg.add_elements(&coord_val, &term);
        }
        let contrib = alg.mul_elements(&coord_val, &alg.basis_element(mcoord));
        total = alg.add_elements(&total, &contrib);
    }
    Ok(total)
}

/// `τ⁻¹`: coordinates of an `L`-point become a `K`-point of the descent.
/// Verifies that the input kills every original relation.
pub fn tau_inverse(
    point: &[LElement],
    pres: &LPresentation,
    alg: &FiniteFreeAlgebra,
) -> Result<WPoint> {
    if point.len() != pres.generators.len() {
        return Err(Error::UsageError(format!(
            "point assigns {} generators, presentation has {}",
            point.len(),
            pres.generators.len()
        )));
    }
    for (k, rel) in pres.relations.iter().enumerate() {
        let value = eval_lpoly(rel, point, alg)?;
        if value.iter().any(|c| c.is_known_nonzero()) {
            return Err(Error::RelationViolated(format!(
                "relation {k} does not vanish at the point"
            )));
        }
    }
    let mut out = Vec::new();
    for coords in point {
        for c in coords {
            out.push(vec![c.clone()]);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Descent derivation
// ---------------------------------------------------------------------------

/// `δ_W(t_v(i)^(j)) = t_v(i)^(j+1) - Σ_m d[m][i]·t_v(m)^(j)` as a
/// polynomial over `K` in the descended variables.
pub fn descent_derivation_entry(
    alg: &FiniteFreeAlgebra,
    num_original: usize,
    v: usize,
    i: usize,
    order: u32,
) -> DiffPoly {
    let l = alg.dim;
    let num_vars = num_original * l;
    let lvl = alg.level();
    let mut out = DiffPoly::variable(num_vars, lvl, descended_var(v, i, l), order + 1);
    for m in 0..l {
        let d = &alg.derivation[m][i];
        if d.is_exact_zero() {
            continue;
        }
        let term =
            DiffPoly::variable(num_vars, lvl, descended_var(v, m, l), order).scale(d);
        out = out.sub(&term);
    }
    out
}

/// The derivation applied to a whole descended polynomial, by the product
/// rule through the per-variable images above (coefficients move by the
/// stage derivation).
pub fn descended_ring_derive(
    f: &DiffPoly,
    alg: &FiniteFreeAlgebra,
    num_original: usize,
) -> DiffPoly {
    let mut out = DiffPoly::zero(f.num_vars(), f.level());
    for (mono, coeff) in f.iter_terms() {
        out = out.add(&DiffPoly::from_terms(
            f.num_vars(),
            f.level(),
            [(mono.clone(), coeff.derive())],
        ));
        for (&(var, order), &exp) in mono.powers() {
            let v = var / alg.dim;
            let i = var % alg.dim;
            let lowered = mono.without_one(var, order).expect("present");
            let image = descent_derivation_entry(alg, num_original, v, i, order);
            let factor = DiffPoly::from_terms(
                f.num_vars(),
                f.level(),
                [(lowered, coeff.scale(&crate::rational::rat_int(i64::from(exp))))],
            );
            out = out.add(&factor.mul(&image));
        }
    }
    out
}

/// Internal check that the descent derivation makes the descent unit a
/// differential homomorphism: applying `δ_W ⊗ id + id ⊗ ∂` to
/// `Σ_i t_v(i)^(j) ⊗ b_i` must reproduce `Σ_i t_v(i)^(j+1) ⊗ b_i`.
pub fn verify_descent_derivation(
    alg: &FiniteFreeAlgebra,
    num_original: usize,
    max_order: u32,
) -> bool {
    let l = alg.dim;
    let num_vars = num_original * l;
    let lvl = alg.level();
    for v in 0..num_original {
        for j in 0..=max_order {
            for m in 0..l {
                // coordinate m of the left side:
                //   δ_W(t_v(m)^(j)) + Σ_i d[i][m]·t_v(i)^(j)
                let mut lhs = descent_derivation_entry(alg, num_original, v, m, j);
                for i in 0..l {
                    let d = &alg.derivation[i][m];
                    if d.is_exact_zero() {
                        continue;
                    }
                    let term = DiffPoly::variable(num_vars, lvl, descended_var(v, i, l), j)
                        .scale(d);
                    lhs = lhs.add(&term);
                }
                let rhs = DiffPoly::variable(num_vars, lvl, descended_var(v, m, l), j + 1);
                if lhs != rhs {
                    return false;
                }
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Valuation bounds
// ---------------------------------------------------------------------------

/// Witness record of the continuity bound for one algebra element.
#[derive(Clone, Debug)]
pub struct ContinuityReport {
    pub epsilon: ValueVec,
    /// `v(φ̃(a(i)) - ψ̃(a(i))) > γ - ε` for each coordinate.
    pub hypothesis_ok: bool,
    /// `w(φ(a) - ψ(a)) > γ`.
    pub conclusion_ok: bool,
    /// Valuations of the coordinate differences (None when exactly equal).
    pub coordinate_valuations: Vec<ValueVec>,
    pub combined_valuation: ValueVec,
}

/// Checks the continuity of the descent correspondence: coordinates within
/// `γ - ε` force the combined points within `γ`, where `ε = min_i w(b_i)`.
pub fn continuity_bound(
    alg: &FiniteFreeAlgebra,
    phi_coords: &LElement,
    psi_coords: &LElement,
    gamma: &ValueVec,
) -> Result<ContinuityReport> {
    let epsilon = alg.epsilon();
    let threshold = gamma.sub(&epsilon);
    let threshold_coords = threshold
        .coords()
        .ok_or_else(|| Error::UsageError("γ - ε must be finite".into()))?;

    let mut hypothesis_ok = true;
    let mut coordinate_valuations = Vec::with_capacity(alg.dim);
    for (p, q) in phi_coords.iter().zip(psi_coords) {
        let d = p.sub(q);
        coordinate_valuations.push(match d.valuation() {
            Ok(v) => v,
            Err(Error::IndistinguishableFromZero(msg)) => {
                return Err(Error::IndistinguishableFromZero(msg))
            }
            Err(e) => return Err(e),
        });
        match d.val_cmp(threshold_coords, true) {
            Tri::Yes => {}
            Tri::No => hypothesis_ok = false,
            Tri::Unknown => {
                return Err(Error::IndistinguishableFromZero(
                    "hypothesis comparison depends on unknown coefficients".into(),
                ))
            }
        }
    }

    let diff = alg.sub_elements(phi_coords, psi_coords);
    let combined_valuation = alg.valuation_of(&diff)?;
    let conclusion_ok = match &combined_valuation {
        ValueVec::Infinity => true,
        w => w.gt(gamma),
    };

    Ok(ContinuityReport {
        epsilon,
        hypothesis_ok,
        conclusion_ok,
        coordinate_valuations,
        combined_valuation,
    })
}

/// One coordinate of the separated-basis converse bound.
#[derive(Clone, Debug)]
pub struct CoordinateBound {
    pub coordinate_valuation: ValueVec,
    pub required: ValueVec,
    pub holds: bool,
}

/// For a separated basis, each coordinate difference obeys
/// `w(φ̃(a(j)) - ψ̃(a(j))) ≥ w(φ(a) - ψ(a)) - w(b_j)`.
pub fn separated_lower_bound(
    alg: &FiniteFreeAlgebra,
    phi_coords: &LElement,
    psi_coords: &LElement,
) -> Result<Vec<CoordinateBound>> {
    if !alg.separated {
        return Err(Error::BasisNotDeclaredSeparated);
    }
    let diff = alg.sub_elements(phi_coords, psi_coords);
    let combined = alg.valuation_of(&diff)?;
    let mut out = Vec::with_capacity(alg.dim);
    for (j, d) in diff.iter().enumerate() {
        let vj = d.valuation()?;
        let (required, holds) = match &combined {
            ValueVec::Infinity => (ValueVec::Infinity, true),
            w => {
                let required = w.sub(&alg.basis_valuations[j]);
                (required.clone(), vj.ge(&required))
            }
        };
        out.push(CoordinateBound {
            coordinate_valuation: vj,
            required,
            holds,
        });
    }
    Ok(out)
}

/// Sampled necessary check of separatedness for a raw basis:
/// `w(Σ a_i b_i) = min_i w(a_i b_i)` on every sample tuple.
pub fn is_separated_sample_basis(
    basis: &[TowerElement],
    basis_valuations: &[ValueVec],
    samples: &[Vec<TowerElement>],
) -> Result<bool> {
    for tuple in samples {
        assert_eq!(tuple.len(), basis.len(), "sample tuple length mismatch");
        let mut combo = TowerElement::zero(basis[0].level());
        let mut min_term: Option<ValueVec> = None;
        for ((a, b), w) in tuple.iter().zip(basis).zip(basis_valuations) {
            combo = combo.add(&a.mul(b));
            let va = a.valuation()?;
            let term = va.add(w);
            min_term = Some(match min_term {
                None => term,
                Some(cur) => {
                    if cur.gt(&term) {
                        term
                    } else {
                        cur
                    }
                }
            });
        }
        let lhs = combo.valuation()?;
        if lhs != min_term.expect("nonempty basis") {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sampled necessary check of separatedness for an extension with a
/// concrete model.
pub fn is_separated_sample(
    alg: &FiniteFreeAlgebra,
    samples: &[Vec<TowerElement>],
) -> Result<bool> {
    match &alg.model {
        ExtensionModel::Embedded { basis } => {
            is_separated_sample_basis(basis, &alg.basis_valuations, samples)
        }
        ExtensionModel::TrivialValued => {
            // trivially valued: w(Σ a_i b_i) = () unless all coordinates
            // vanish, which matches min_i w(a_i b_i) by independence
            for tuple in samples {
                let all_zero = tuple.iter().all(|a| a.is_exact_zero());
                let any_unknown = tuple
                    .iter()
                    .any(|a| !a.is_exact_zero() && !a.is_known_nonzero());
                if any_unknown {
                    return Err(Error::IndistinguishableFromZero(
                        "sample coordinate not certifiably zero or nonzero".into(),
                    ));
                }
                let _ = all_zero;
            }
            Ok(true)
        }
    }
}

/// Splits a concrete element of a ramified power-basis model into basis
/// coordinates by exponent classes modulo the coarse lattice (the
/// `coordinates` operation for embedded extensions).
pub fn decompose_embedded(
    alg: &FiniteFreeAlgebra,
    elem: &TowerElement,
    tower: &Tower,
) -> Result<LElement> {
    let basis = match &alg.model {
        ExtensionModel::Embedded { basis } => basis,
        ExtensionModel::TrivialValued => {
            return Err(Error::UsageError(
                "decomposition needs an embedded model".into(),
            ))
        }
    };
    let level = alg.level();
    assert_eq!(elem.level(), level);
    let mut coords = alg.zero_element();
    let terms = match elem.terms() {
        Some(t) => t.clone(),
        None => return Ok(coords),
    };
    'term: for (e, c) in terms {
        for (i, b) in basis.iter().enumerate() {
            let (be, bc) = match b.leading() {
                Some((be, bc)) if b.terms().is_some_and(|t| t.len() == 1) => (be, bc),
                _ => continue,
            };
            let shifted = &e - be;
            if tower.in_lattice(level, &shifted) {
                let piece = TowerElement::monomial(level, shifted, c.clone())
                    .div(&TowerElement::monomial(level, Rational::from_integer(0.into()), bc.clone()), tower)?;
                coords[i] = coords[i].add(&piece);
                continue 'term;
            }
        }
        return Err(Error::UsageError(format!(
            "exponent {} matches no basis coset",
            crate::rational::format_rational(&e)
        )));
    }
    // the precision marker belongs to every coordinate
    if let Prec::Finite(p) = elem.prec() {
        for (i, b) in basis.iter().enumerate() {
            if let Some((be, _)) = b.leading() {
                let tail = TowerElement::big_o(level, &p - be);
                coords[i] = coords[i].add(&tail);
            }
        }
    }
    Ok(coords)
}
