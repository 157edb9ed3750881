//! Residual polynomials `R(f) ∈ k_r[y]` and the residues they are built from.
//!
//! A polynomial `a` with `deg a < deg φ_i` is a unit in the graded algebra of
//! `μ_i`. Its class is recorded as a [`HomUnit`]: a coefficient in `k_i`
//! times the monomial `p^t φ_0^{t_0} ⋯ φ_{i-1}^{t_{i-1}}`. Dividing two units
//! of equal value gives a value-zero unit, which is read back in `k_i` by
//! peeling off `ξ_{i-1} = φ_{i-1}^{e_{i-1}} ε_{i-1}`, whose residue is the
//! tower generator `z_{i-1}`.

use num_bigint::BigInt;
use crate::arith::{TowerElement, TowerField, TowerPoly};
use crate::error::{Error, Result};
use crate::newton::{lambda_component, newton_polygon};
use crate::poly::RatPoly;
use crate::valuation::InductiveValuation;
use crate::Rational;

/// The monomial `ε = p^t ∏ φ_j^{t_j}` of value `-e_i γ_i` chosen at level `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EpsilonDatum {
    pub t: i64,
    /// `t_0, …, t_{i-1}`, with `0 ≤ t_j < e_j`.
    pub exponents: Vec<i64>,
}

impl EpsilonDatum {
    /// `[t, t_0, …, t_{i-1}]`.
    pub fn as_exps(&self) -> Vec<i64> {
        let mut v = Vec::with_capacity(self.exponents.len() + 1);
        v.push(self.t);
        v.extend_from_slice(&self.exponents);
        v
    }

    /// The monomial as a polynomial (with a rational constant factor `p^t`).
    pub fn to_poly(&self, mu: &InductiveValuation) -> RatPoly {
        let p = mu.prime().to_bigint();
        let c = if self.t >= 0 {
            Rational::from_integer(p.pow(self.t as u32))
        } else {
            Rational::new(BigInt::from(1), p.pow((-self.t) as u32))
        };
        let mut acc = RatPoly::constant(c);
        for (j, &t) in self.exponents.iter().enumerate() {
            acc = &acc * &mu.level(j).phi().pow(t as usize);
        }
        acc
    }
}

/// Residual data of a nonzero polynomial at the top level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualResult {
    /// Monic residual polynomial over the top residue field.
    pub r: TowerPoly,
    /// `s(f)`: first abscissa of the `γ`-component.
    pub s: usize,
    /// `s'(f)`: last abscissa of the `γ`-component.
    pub s_end: usize,
    /// `μ(f)`.
    pub value: Rational,
    /// Grading degree `μ(a_{s'}) + d e γ` of the leading residual coefficient.
    pub degree_of_rc_d: Rational,
}

/// A homogeneous unit at level `i`: `coeff · p^{exps[0]} φ_0^{exps[1]} ⋯ φ_{i-1}^{exps[i]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct HomUnit {
    pub coeff: TowerElement,
    pub exps: Vec<i64>,
}

impl HomUnit {
    pub fn monomial(k: &TowerField<'_>, exps: Vec<i64>) -> HomUnit {
        HomUnit { coeff: k.one(), exps }
    }

    pub fn mul(&self, k: &TowerField<'_>, other: &HomUnit) -> HomUnit {
        HomUnit {
            coeff: k.mul(&self.coeff, &other.coeff),
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn div(&self, k: &TowerField<'_>, other: &HomUnit) -> HomUnit {
        HomUnit {
            coeff: k.div(&self.coeff, &other.coeff).expect("units are invertible"),
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn pow(&self, k: &TowerField<'_>, n: i64) -> HomUnit {
        HomUnit {
            coeff: k.pow_i64(&self.coeff, n).expect("units are invertible"),
            exps: self.exps.iter().map(|a| a * n).collect(),
        }
    }
}

/// Residual data of `f` at level `i`.
pub(crate) struct LevelResidual {
    pub r: TowerPoly,
    pub s: usize,
    pub s_end: usize,
    pub value: Rational,
    pub rc_d: HomUnit,
}

impl InductiveValuation {
    fn epsilon_unit(&self, i: usize) -> HomUnit {
        HomUnit::monomial(&self.tower().field(i), self.level(i).epsilon().as_exps())
    }

    /// Class of a nonzero `a` with `deg a < deg φ_i` as a unit at level `i`.
    pub(crate) fn unit_of(&self, i: usize, a: &RatPoly) -> HomUnit {
        debug_assert!(!a.is_zero() && (i == 0 || a.deg() < self.level(i).degree()));
        let k = self.tower().field(i);
        if i == 0 {
            let c = a.coeff(0);
            let v = self.prime().valuation(&c).expect("nonzero constant");
            return HomUnit { coeff: k.from_u64(self.prime().unit_residue(&c)), exps: vec![v] };
        }
        let below = self.residual_at(i - 1, a);
        let r_at_z = k.poly_eval(&k.poly_embed(&below.r), &k.generator());
        let mut exps = below.rc_d.exps;
        exps.push(below.s as i64);
        HomUnit { coeff: k.mul(&k.embed(&below.rc_d.coeff), &r_at_z), exps }
    }

    /// Reads a unit of value zero at level `i` as an element of `k_i`.
    pub(crate) fn zero_value_residue(&self, i: usize, u: &HomUnit) -> TowerElement {
        if i == 0 {
            debug_assert_eq!(u.exps, vec![0], "residue of a unit of nonzero value");
            return u.coeff.clone();
        }
        let k = self.tower().field(i);
        let e = self.level(i - 1).e_rel();
        let top = u.exps[i];
        debug_assert_eq!(top % e, 0, "unit of nonzero value");
        let n = top / e;
        let eps = self.level(i - 1).epsilon().as_exps();
        let rest: Vec<i64> = u.exps[..i].iter().zip(&eps).map(|(a, b)| a - n * b).collect();
        let inner = self.zero_value_residue(i - 1, &HomUnit::monomial(&self.tower().field(i - 1), rest));
        let z_n = k.pow_i64(&k.generator(), n).expect("generator is nonzero");
        k.mul(&k.mul(&u.coeff, &z_n), &k.embed(&inner))
    }

    /// Residual polynomial of a nonzero `f` for the truncation `μ_i` and `φ_i`.
    pub(crate) fn residual_at(&self, i: usize, f: &RatPoly) -> LevelResidual {
        let lvl = self.level(i);
        let k = self.tower().field(i);
        let parts = f.expand(lvl.phi());
        let mut points: Vec<(usize, Rational)> = Vec::new();
        for (s, a) in parts.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let u = if i == 0 {
                Rational::from_integer(BigInt::from(self.prime().valuation(&a.coeff(0)).unwrap()))
            } else {
                self.value_at(i - 1, a).unwrap()
            };
            points.push((s, u + lvl.gamma() * Rational::from_integer(BigInt::from(s))));
        }
        let value = points.iter().map(|(_, v)| v).min().expect("nonzero polynomial").clone();
        let on_line: Vec<usize> = points.iter().filter(|(_, v)| *v == value).map(|(s, _)| *s).collect();
        let s0 = on_line[0];
        let s1 = *on_line.last().unwrap();
        let e = lvl.e_rel() as usize;
        debug_assert_eq!((s1 - s0) % e, 0);
        let d = (s1 - s0) / e;
        let eps = self.epsilon_unit(i);
        let unit = |j: usize| self.unit_of(i, &parts[s0 + j * e]).mul(&k, &eps.pow(&k, -(j as i64)));
        let rc_d = unit(d);
        let mut coeffs = vec![k.zero(); d + 1];
        for (j, slot) in coeffs.iter_mut().enumerate() {
            if on_line.binary_search(&(s0 + j * e)).is_ok() {
                *slot = self.zero_value_residue(i, &unit(j).div(&k, &rc_d));
            }
        }
        LevelResidual { r: k.poly(coeffs), s: s0, s_end: s1, value, rc_d }
    }
}

/// The canonical normalizing monomial `ε` of the top level.
pub fn make_epsilon(mu: &InductiveValuation) -> EpsilonDatum {
    mu.top().epsilon().clone()
}

/// `R(f)` together with `s(f)`, `s'(f)` and `μ(f)` at the top level.
pub fn residual_poly(mu: &InductiveValuation, f: &RatPoly) -> Result<ResidualResult> {
    if f.is_zero() {
        return Err(Error::invalid("the zero polynomial has no residual polynomial"));
    }
    let r = mu.depth();
    let lr = mu.residual_at(r, f);
    let degree_of_rc_d = mu.monomial_value(&lr.rc_d.exps);
    Ok(ResidualResult { r: lr.r, s: lr.s, s_end: lr.s_end, value: lr.value, degree_of_rc_d })
}

/// Whether `φ` (monic, of the minimal degree) is `μ`-equivalent to `φ_r`.
pub(crate) fn equivalent_to_min(mu: &InductiveValuation, phi: &RatPoly) -> bool {
    if phi.deg() != mu.min_degree() {
        return false;
    }
    let diff = phi - mu.top().phi();
    match mu.value(&diff).finite() {
        None => true,
        Some(v) => v > mu.top().gamma(),
    }
}

/// `s_{μ,φ}(f)`: the largest `n` with `φ^n` dividing `f` in the graded
/// algebra, for a key polynomial `φ`.
pub fn grading_order(mu: &InductiveValuation, phi: &RatPoly, f: &RatPoly) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::invalid("grading order of the zero polynomial"));
    }
    if equivalent_to_min(mu, phi) {
        let n = newton_polygon(mu, phi, f)?;
        return Ok(lambda_component(&n, mu.top().gamma())?.s_start);
    }
    let k = mu.tower().field(mu.depth());
    let psi = residual_poly(mu, phi)?.r;
    if psi.degree().unwrap_or(0) == 0 {
        return Err(Error::invalid(format!("{phi} is not a key polynomial for the valuation")));
    }
    let rf = residual_poly(mu, f)?.r;
    Ok(k.poly_multiplicity(&rf, &psi))
}

/// Order of the residual ideal of `φ` in the residual ideal of `f`: equal to
/// `s_{μ,φ}(f)` for proper `φ`, and `⌈s(f)/e⌉` for the improper class
/// `[φ_r]` when `e > 1`. Computed from `(s(f), R(f))` alone.
pub fn residual_ideal_order(mu: &InductiveValuation, phi: &RatPoly, f: &RatPoly) -> Result<usize> {
    let rf = residual_poly(mu, f)?;
    if equivalent_to_min(mu, phi) {
        let e = mu.e_rel() as usize;
        return Ok(rf.s.div_ceil(e));
    }
    let k = mu.tower().field(mu.depth());
    let psi = residual_poly(mu, phi)?.r;
    Ok(k.poly_multiplicity(&rf.r, &psi))
}

/// Residue in `k_r` of `a` (`deg a < deg φ_r`) relative to the canonical
/// monomial of value `μ(a)`.
#[cfg(test)]
pub(crate) fn residue(mu: &InductiveValuation, a: &RatPoly) -> Result<TowerElement> {
    if a.is_zero() || a.deg() >= mu.min_degree().max(1) {
        return Err(Error::invalid("residues are defined for nonzero polynomials below the minimal key degree"));
    }
    let r = mu.depth();
    let k = mu.tower().field(r);
    let u = mu.unit_of(r, a);
    let exps = mu
        .canonical_exps(r, &mu.monomial_value(&u.exps))
        .ok_or_else(|| Error::internal("value outside the value group"))?;
    Ok(mu.zero_value_residue(r, &u.div(&k, &HomUnit::monomial(&k, exps))))
}
