//! Iterated truncated Laurent/Puiseux series: the tower
//! `Q ⊂ Q((t0)) ⊂ Q((t0))((t1)) ⊂ …`.
//!
//! A [`Tower`] records, per series level, the exponent lattice `(1/d)·Z`
//! (ramification `d`) and the default number of lattice steps kept by
//! operations whose exact result would have infinite support (division).
//! Elements themselves are [`TowerElement`] values; they carry their own
//! precision bound and do not reference the descriptor.
//!
//! Level 0 is exactly `Q` with the trivial valuation and zero derivation.
//! The variable of level `k+1` is written `t_k`.

mod element;
mod valuation;

pub use element::{arith, ArithKind, CoeffAt, Prec, SeriesRep, TowerElement};
pub use valuation::{in_open_ball, Tri, ValStatus};

use crate::error::{Error, Result};
use crate::rational::{rat_int, Rational};
use num_bigint::BigInt;
use num_traits::One;

/// Default number of lattice steps kept per level.
pub const DEFAULT_TERMS: u32 = 16;

/// Exponent lattice and truncation window of one series level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelConfig {
    /// Exponents at this level live in `(1/ramification)·Z`.
    pub ramification: u32,
    /// Lattice steps kept when an exact result would have infinite support.
    pub terms: u32,
}

impl LevelConfig {
    pub fn new(ramification: u32, terms: u32) -> Self {
        assert!(ramification > 0, "ramification must be positive");
        assert!(terms > 0, "terms must be positive");
        LevelConfig {
            ramification,
            terms,
        }
    }

    pub fn laurent() -> Self {
        LevelConfig::new(1, DEFAULT_TERMS)
    }
}

/// Descriptor of a tower stage `K_k = Q((t0))…((t_{k-1}))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tower {
    levels: Vec<LevelConfig>,
}

impl Tower {
    /// The base stage `Q`.
    pub fn base() -> Self {
        Tower { levels: Vec::new() }
    }

    /// `n` unramified Laurent levels with default precision.
    pub fn laurent(n: usize) -> Self {
        Tower {
            levels: vec![LevelConfig::laurent(); n],
        }
    }

    pub fn with_levels(levels: Vec<LevelConfig>) -> Self {
        Tower { levels }
    }

    pub fn height(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[LevelConfig] {
        &self.levels
    }

    /// Configuration of series level `k` (1-based: the level of elements
    /// having `t_{k-1}` as outermost variable).
    pub fn config(&self, level: usize) -> &LevelConfig {
        assert!(level >= 1 && level <= self.height(), "level out of range");
        &self.levels[level - 1]
    }

    /// Appends one level; existing elements embed unchanged as constants in
    /// the new variable.
    pub fn extend(&self, cfg: LevelConfig) -> Tower {
        let mut levels = self.levels.clone();
        levels.push(cfg);
        Tower { levels }
    }

    /// Lattice step `1/d` of the given level.
    pub fn lattice_step(&self, level: usize) -> Rational {
        Rational::new(BigInt::one(), BigInt::from(self.config(level).ramification))
    }

    /// Truncation window of the given level, in exponent units.
    pub fn window(&self, level: usize) -> Rational {
        let cfg = self.config(level);
        Rational::new(BigInt::from(cfg.terms), BigInt::from(cfg.ramification))
    }

    /// Whether `e` lies in the exponent lattice of `level`.
    pub fn in_lattice(&self, level: usize, e: &Rational) -> bool {
        let scaled = e * rat_int(i64::from(self.config(level).ramification));
        scaled.denom().is_one()
    }

    /// Returns a tower whose windows are at least `w` exponent units wide.
    pub fn with_min_window(&self, w: &Rational) -> Tower {
        let levels = self
            .levels
            .iter()
            .map(|cfg| {
                let need = (w * rat_int(i64::from(cfg.ramification))).ceil();
                let need: u32 = need
                    .to_integer()
                    .try_into()
                    .ok()
                    .filter(|n: &i64| *n >= 0)
                    .map(|n| n as u32)
                    .unwrap_or(0);
                LevelConfig::new(cfg.ramification, cfg.terms.max(need))
            })
            .collect();
        Tower { levels }
    }

    /// The constant `q` at the top stage.
    pub fn scalar(&self, q: Rational) -> TowerElement {
        TowerElement::from_rational(self.height(), q)
    }

    pub fn zero(&self) -> TowerElement {
        TowerElement::zero(self.height())
    }

    pub fn one(&self) -> TowerElement {
        TowerElement::one(self.height())
    }

    /// The variable `t_i` as an element of the top stage.
    pub fn var(&self, i: usize) -> Result<TowerElement> {
        if i >= self.height() {
            return Err(Error::UnknownVariable(format!("t{i}")));
        }
        let native = TowerElement::monomial(i + 1, rat_int(1), TowerElement::one(i));
        Ok(native.lift_to(self.height()))
    }

    /// `t_i^e` at the top stage; validates `e` against the lattice.
    pub fn var_pow(&self, i: usize, e: &Rational) -> Result<TowerElement> {
        if i >= self.height() {
            return Err(Error::UnknownVariable(format!("t{i}")));
        }
        if !self.in_lattice(i + 1, e) {
            return Err(Error::UsageError(format!(
                "exponent {} not in the lattice (1/{})Z of t{}",
                crate::rational::format_rational(e),
                self.config(i + 1).ramification,
                i
            )));
        }
        let native = TowerElement::monomial(i + 1, e.clone(), TowerElement::one(i));
        Ok(native.lift_to(self.height()))
    }

    /// Quotient `a / b`; capped at this tower's window when the exact
    /// expansion would be infinite.
    pub fn div(&self, a: &TowerElement, b: &TowerElement) -> Result<TowerElement> {
        a.div(b, self)
    }
}

impl Default for Tower {
    fn default() -> Self {
        Tower::laurent(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_are_sendable_and_shareable() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<TowerElement>();
        assert_send_sync::<Tower>();
        assert_send_sync::<crate::diffpoly::DiffPoly>();
        assert_send_sync::<crate::value::ValueVec>();
    }

    #[test]
    fn extension_appends_a_level() {
        let t = Tower::base();
        assert_eq!(t.height(), 0);
        let t1 = t.extend(LevelConfig::laurent());
        assert_eq!(t1.height(), 1);
        let t2 = t1.extend(LevelConfig::new(2, 8));
        assert_eq!(t2.height(), 2);
        assert_eq!(t2.config(2).ramification, 2);
        // elements embed unchanged as constants in the new variable
        let a = t1.var(0).unwrap();
        let lifted = a.lift_to(2);
        assert_eq!(
            lifted.valuation().unwrap(),
            crate::value::ValueVec::finite(vec![
                crate::rational::rat_int(1),
                crate::rational::rat_int(0)
            ])
        );
        assert_eq!(lifted.residue().unwrap(), a);
    }

    #[test]
    fn lattice_membership() {
        let t = Tower::with_levels(vec![LevelConfig::new(2, 8)]);
        assert!(t.in_lattice(1, &crate::rational::rat(1, 2)));
        assert!(t.in_lattice(1, &crate::rational::rat_int(-3)));
        assert!(!t.in_lattice(1, &crate::rational::rat(1, 3)));
        assert!(t.var_pow(0, &crate::rational::rat(1, 3)).is_err());
    }
}
