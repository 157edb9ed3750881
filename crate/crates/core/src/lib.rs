//! Exact computation with inductive valuations on `Q[x]` for the p-adic
//! valuation, and OM factorization of monic integral polynomials over `Q_p`.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`] – rationals with p-adic valuation, residue field towers and
//!   factorization over them.
//! * [`poly`] – dense polynomials over `Q` and their textual grammar.
//! * [`valuation`] – optimal MacLane chains, evaluation, augmentation.
//! * [`newton`] – Newton polygons attached to a key polynomial.
//! * [`residual`] – residual polynomial operator and residual coefficients.
//! * [`keypoly`] – key polynomial tests and lifting of residual irreducibles.
//! * [`engine`] – the factorization driver, `v_F` evaluation and Okutsu data.
//!
//! All arithmetic is exact; there is no floating point anywhere.

pub mod arith;
pub mod engine;
pub mod error;
pub mod keypoly;
pub mod newton;
pub mod poly;
pub mod residual;
pub mod valuation;

pub use arith::{
    ff_factor, ff_factor_seeded, is_irreducible, rational_from_str, val_p, ExtRational, Prime, ResidueTower, TowerElement, TowerField, TowerPoly,
};
pub use engine::{
    factor_step, improve_approx, invariants_and_frame, okutsu_equiv, okutsu_report, om_factor, om_factor_with,
    prime_leaf, refine, value_of, Branch, EquivReport, FactorOptions, Invariants, LeafJson, OMLeaf, StepResult, LEAF_SCHEMA,
};
pub use error::{Error, Result};
pub use keypoly::{construct_with_residue, is_key, lift, KeyCase, KeyReport};
pub use newton::{lambda_component, newton_polygon, polygon_sum, principal_part, Component, NewtonPolygon, Side};
pub use poly::RatPoly;
pub use residual::{grading_order, make_epsilon, residual_ideal_order, residual_poly, EpsilonDatum, ResidualResult};
pub use valuation::{equal_valuations, phi_expansion, ChainFile, ChainLevel, InductiveValuation, Indices, Level};

/// Arbitrary precision rational used throughout.
pub type Rational = num_rational::BigRational;
