//! Exact computer algebra for valued differential fields at desk scale:
//! truncated Laurent/Puiseux series towers with composed reverse-lexicographic
//! valuations, sparse differential polynomials, jet prolongation and the
//! twisted Taylor expansion, Hensel/Newton lifting, a solver producing
//! certified approximate differential roots in the next tower stage, and
//! classical/differential Weil descent along finite free valued extensions.
//!
//! All coefficient arithmetic is exact rational; truncation is tracked per
//! element and every operation propagates the tightest provable precision.
//! Values are immutable and operations are pure.

pub mod diffpoly;
pub mod error;
pub mod hensel;
pub mod json;
pub mod rational;
pub mod sampling;
pub mod solver;
pub mod suites;
pub mod taylor;
pub mod text;
pub mod tower;
pub mod value;
pub mod weil;

pub use diffpoly::{select_vanishing_factor, DiffPoly, Jet, Monomial};
pub use error::{Error, Result};
pub use rational::Rational;
pub use tower::{
    arith, in_open_ball, ArithKind, LevelConfig, Prec, Tower, TowerElement, Tri, ValStatus,
};
pub use value::ValueVec;
