//! Hensel lifting of square polynomial systems by Newton iteration.
//!
//! Given plain polynomials `F_1..F_n` in fixed variables `x_1..x_m` and
//! lifted variables `y_1..y_n`, an approximate zero of the `y` block is
//! refined until every residual is `O(t^targetPrec)` at the top level.
//! The sufficient condition checked up front is the classical Newton
//! dominance `v(F(point)) > 2·v(det J(point))`; each successful step at
//! least doubles the residual valuation margin, so the iteration count is
//! logarithmic in the target.

use crate::diffpoly::{DiffPoly, Jet};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::tower::{Tower, TowerElement, Tri};
use crate::value::ValueVec;
use num_traits::{Signed, Zero};

/// A lifted solution together with the iteration count that produced it.
#[derive(Clone, Debug)]
pub struct HenselOutcome {
    pub solution: Vec<TowerElement>,
    pub iterations: u32,
    /// Exact top-level residual valuations before each Newton step (the
    /// worst entry of the system), ending with the state that met the
    /// target; `None` marks an exactly-zero residual.
    pub residual_floors: Vec<Option<Rational>>,
}

fn eval_point(f: &DiffPoly, point: &[TowerElement]) -> Result<TowerElement> {
    let jet = Jet::new(point.iter().map(|v| vec![v.clone()]).collect());
    f.alg_eval(&jet)
}

/// Determinant by Laplace expansion along the first row; exact, no
/// divisions. Fine at desk scale (small square systems).
fn determinant(mat: &[Vec<TowerElement>], level: usize) -> TowerElement {
    let n = mat.len();
    if n == 0 {
        return TowerElement::one(level);
    }
    if n == 1 {
        return mat[0][0].clone();
    }
    let mut acc = TowerElement::zero(level);
    for (j, pivot) in mat[0].iter().enumerate() {
        if pivot.is_exact_zero() {
            continue;
        }
        let minor: Vec<Vec<TowerElement>> = mat[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let cofactor = pivot.mul(&determinant(&minor, level));
        acc = if j % 2 == 0 {
            acc.add(&cofactor)
        } else {
            acc.sub(&cofactor)
        };
    }
    acc
}

fn log2_ceil(n: u64) -> u32 {
    let mut bits = 0;
    while (1u64 << bits) < n {
        bits += 1;
    }
    bits
}

/// Lifts `approx` to a zero of the system modulo `t^target_prec`.
///
/// `system[i]` is a plain polynomial (all derivative orders 0) in
/// `fixed.len() + approx.len()` variables; the fixed block comes first.
pub fn hensel_lift_system(
    system: &[DiffPoly],
    fixed: &[TowerElement],
    approx: &[TowerElement],
    target_prec: &Rational,
    tower: &Tower,
) -> Result<HenselOutcome> {
    let n = system.len();
    let m = fixed.len();
    if n == 0 || approx.len() != n {
        return Err(Error::UsageError(
            "system must be square in the lifted variables".into(),
        ));
    }
    let level = tower.height();
    for f in system {
        if f.num_vars() != m + n {
            return Err(Error::UsageError(format!(
                "system polynomial has {} variables, expected {}",
                f.num_vars(),
                m + n
            )));
        }
        for v in 0..(m + n) {
            if f.order_or_zero(v) != 0 {
                return Err(Error::UsageError(
                    "Hensel lifting takes plain polynomials, not differential ones".into(),
                ));
            }
        }
        if f.level() != level {
            return Err(Error::LevelMismatch {
                expected: level,
                found: f.level(),
            });
        }
    }

    // keep enough working precision for divisions to reach the target
    let slack = target_prec + Rational::from_integer(4.into());
    let work = tower.with_min_window(&slack);

    // Jacobian in the lifted block
    let jac: Vec<Vec<DiffPoly>> = system
        .iter()
        .map(|f| (0..n).map(|j| f.partial(m + j, 0)).collect())
        .collect();

    let mut point: Vec<TowerElement> = fixed.to_vec();
    point.extend(approx.iter().cloned());

    let eval_jacobian = |point: &[TowerElement]| -> Result<Vec<Vec<TowerElement>>> {
        jac.iter()
            .map(|row| row.iter().map(|f| eval_point(f, point)).collect())
            .collect()
    };

    // dominance at the initial point
    let j0 = eval_jacobian(&point)?;
    let det0 = determinant(&j0, level);
    let det_val = match det0.valuation() {
        Ok(ValueVec::Finite(v)) => v,
        Ok(ValueVec::Infinity) => return Err(Error::SingularJacobian),
        Err(_) => return Err(Error::SingularJacobian),
    };
    let twice: Vec<Rational> = det_val.iter().map(|q| q + q).collect();
    for f in system {
        let r = eval_point(f, &point)?;
        match r.val_cmp(&twice, true) {
            Tri::Yes => {}
            Tri::No => {
                return Err(Error::DominanceFailure(format!(
                    "residual valuation of {f} does not exceed twice the Jacobian valuation"
                )))
            }
            Tri::Unknown => {
                return Err(Error::DominanceFailure(
                    "residual valuation undecidable at the working precision".into(),
                ))
            }
        }
    }

    let target_int: u64 = {
        let c = target_prec.ceil();
        if c.is_negative() || c.is_zero() {
            1
        } else {
            c.to_integer().try_into().unwrap_or(u64::MAX)
        }
    };
    let max_iters = log2_ceil(target_int) + 2;

    let done = |point: &[TowerElement]| -> Result<bool> {
        for f in system {
            let r = eval_point(f, point)?;
            if !r.is_exact_zero() && !r.is_big_o_of(target_prec) {
                return Ok(false);
            }
        }
        Ok(true)
    };

    // worst (smallest) top-level residual valuation across the system
    let residual_floor = |point: &[TowerElement]| -> Result<Option<Rational>> {
        let mut floor: Option<Rational> = None;
        for f in system {
            let r = eval_point(f, point)?;
            let v = match r.valuation() {
                Ok(ValueVec::Infinity) => continue,
                Ok(ValueVec::Finite(v)) => v.last().cloned().unwrap_or_default(),
                Err(_) => {
                    // all known coefficients vanished; the bound is the
                    // precision order, which is at least the target here
                    continue;
                }
            };
            floor = Some(match floor {
                None => v,
                Some(cur) => cur.min(v),
            });
        }
        Ok(floor)
    };

    let mut residual_floors = vec![residual_floor(&point)?];
    let mut iterations = 0u32;
    while !done(&point)? {
        if iterations >= max_iters {
            return Err(Error::PrecisionExhausted(format!(
                "residuals not below t^{} after {iterations} Newton steps",
                crate::rational::format_rational(target_prec)
            )));
        }
        let jmat = eval_jacobian(&point)?;
        let det = determinant(&jmat, level);
        if !det.is_known_nonzero() {
            return Err(Error::SingularJacobian);
        }
        let residuals: Vec<TowerElement> = system
            .iter()
            .map(|f| eval_point(f, &point))
            .collect::<Result<_>>()?;
        // Cramer: delta_j = det(J with column j replaced by -F) / det(J)
        for j in 0..n {
            let mut replaced = jmat.clone();
            for (row, r) in replaced.iter_mut().zip(&residuals) {
                row[j] = r.neg();
            }
            let delta = determinant(&replaced, level)
                .div(&det, &work)
                .map_err(|_| Error::SingularJacobian)?;
            point[m + j] = point[m + j].add(&delta);
        }
        iterations += 1;
        residual_floors.push(residual_floor(&point)?);
    }

    // An exactly-zero residual certifies the point itself; otherwise only
    // the coefficients below target - v_top(det J) are those of the root,
    // so the claimed precision is truncated accordingly.
    let exact = system
        .iter()
        .map(|f| eval_point(f, &point))
        .collect::<Result<Vec<_>>>()?
        .iter()
        .all(TowerElement::is_exact_zero);
    let mut solution = point[m..].to_vec();
    if !exact {
        let jfinal = eval_jacobian(&point)?;
        let det_top = match determinant(&jfinal, level).valuation() {
            Ok(ValueVec::Finite(v)) => v.last().cloned().unwrap_or_else(|| {
                Rational::from_integer(0.into())
            }),
            _ => Rational::from_integer(0.into()),
        };
        let certified = crate::tower::Prec::Finite(target_prec - &det_top);
        solution = solution.iter().map(|s| s.truncate(&certified)).collect();
    }

    Ok(HenselOutcome {
        solution,
        iterations,
        residual_floors,
    })
}
