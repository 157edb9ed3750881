//! Base arithmetic: exact rationals with p-adic valuation, residue field
//! towers `F_p = k_0 ⊂ k_1 ⊂ … ⊂ k_r`, and polynomial factorization over them.

mod factor;
mod rational;
mod tower;
mod tpoly;

pub use factor::{ff_factor, ff_factor_seeded, is_irreducible};
pub use rational::{ceil_div, rational_from_str, val_p, ExtRational, Prime};
pub use tower::{ResidueTower, TowerElement, TowerField};
pub use tpoly::TowerPoly;
