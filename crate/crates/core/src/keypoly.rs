//! Key polynomials: recognition, and lifting of residual irreducibles
//! `ψ ∈ k_r[y]` back to key polynomials in `Q[x]`.

use num_bigint::BigInt;
use crate::arith::{is_irreducible, TowerElement, TowerPoly};
use crate::error::{Error, Result};
use crate::poly::RatPoly;
use crate::residual::{equivalent_to_min, residual_poly, HomUnit};
use crate::valuation::InductiveValuation;
use crate::Rational;

/// Which characterization made a polynomial a key polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KeyCase {
    /// `deg f = m` and `f ~_μ φ_r`.
    MinimalDegree,
    /// `deg f = m e deg R(f)` with `R(f)` irreducible.
    ResidualIrreducible,
    NotKey,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyReport {
    pub is_key: bool,
    pub case: KeyCase,
    /// `e m | deg f`.
    pub proper: bool,
    /// `deg f > m`.
    pub strong: bool,
}

/// Decides whether the monic polynomial `f` is a key polynomial for `μ`.
pub fn is_key(mu: &InductiveValuation, f: &RatPoly) -> Result<KeyReport> {
    if !f.is_monic() || f.deg() == 0 {
        return Err(Error::invalid(format!("{f} must be monic of positive degree")));
    }
    let m = mu.min_degree();
    let e = mu.e_rel() as usize;
    let n = f.deg();
    let case = if n < m {
        KeyCase::NotKey
    } else if n == m && equivalent_to_min(mu, f) {
        KeyCase::MinimalDegree
    } else {
        let r = residual_poly(mu, f)?.r;
        let d = r.degree().unwrap_or(0);
        if d > 0 && n == m * e * d && is_irreducible(mu.tower(), &r) {
            KeyCase::ResidualIrreducible
        } else {
            KeyCase::NotKey
        }
    };
    let is_key = case != KeyCase::NotKey;
    Ok(KeyReport { is_key, case, proper: is_key && n.is_multiple_of(e * m), strong: is_key && n > m })
}

/// A polynomial `a` with `deg a < deg φ_r`, `μ(a) = alpha`, and residue `c`
/// relative to the canonical monomial of value `alpha`.
pub fn construct_with_residue(mu: &InductiveValuation, alpha: &Rational, c: &TowerElement) -> Result<RatPoly> {
    let r = mu.depth();
    if c.level() != r {
        return Err(Error::invalid(format!("residue lives in k_{}, expected k_{r}", c.level())));
    }
    if c.is_zero() {
        return Err(Error::invalid("prescribed residue must be nonzero"));
    }
    if mu.canonical_exps(r, alpha).is_none() {
        return Err(Error::invalid(format!(
            "value {alpha} is not in the value group (1/{})Z of polynomials of degree below {}",
            mu.group_denominator_below(r),
            mu.min_degree()
        )));
    }
    Ok(construct(mu, r, alpha, c))
}

fn construct(mu: &InductiveValuation, i: usize, alpha: &Rational, c: &TowerElement) -> RatPoly {
    let exps = mu.canonical_exps(i, alpha).expect("value checked by caller");
    if i == 0 {
        let p = mu.prime().to_bigint();
        let t = exps[0];
        let scale = if t >= 0 {
            Rational::from_integer(p.pow(t as u32))
        } else {
            Rational::new(BigInt::from(1), p.pow((-t) as u32))
        };
        return RatPoly::constant(Rational::from_integer(BigInt::from(c.coords()[0])) * scale);
    }
    let k = mu.tower().field(i);
    let below = mu.tower().field(i - 1);
    let lvl = mu.level(i - 1);
    let e = lvl.e_rel();
    let t = exps[i];
    let rest = alpha - lvl.gamma() * Rational::from_integer(BigInt::from(t));
    let pi_rest = HomUnit::monomial(&below, exps[..i].to_vec());
    let eps = HomUnit::monomial(&below, lvl.epsilon().as_exps());
    let mut acc = RatPoly::zero();
    for (j, cj) in k.chunks(c).iter().enumerate() {
        if cj.is_zero() {
            continue;
        }
        let j = j as i64;
        let beta = &rest - lvl.gamma() * Rational::from_integer(BigInt::from(j * e));
        let pi_beta = HomUnit::monomial(&below, mu.canonical_exps(i - 1, &beta).expect("value in group"));
        let w = mu.zero_value_residue(i - 1, &pi_rest.mul(&below, &eps.pow(&below, j)).div(&below, &pi_beta));
        let b = construct(mu, i - 1, &beta, &below.mul(cj, &w));
        acc = &acc + &(&b * &lvl.phi().pow((t + j * e) as usize));
    }
    acc
}

/// A key polynomial `φ'` for `μ` with `R(φ') = ψ`, of degree `m e deg ψ`.
///
/// `φ' = φ_r^{ed} + Σ_{j<d} a_j φ_r^{ej}` where each `a_j` realizes the value
/// `(d-j) e γ_r` with the residue that makes the `j`-th residual coefficient
/// equal to `ψ_j`.
pub fn lift(mu: &InductiveValuation, psi: &TowerPoly) -> Result<RatPoly> {
    let r = mu.depth();
    let k = mu.tower().field(r);
    if psi.level() != r {
        return Err(Error::invalid(format!("residual polynomial lives over k_{}, expected k_{r}", psi.level())));
    }
    let d = psi.degree().unwrap_or(0);
    if d == 0 || !k.is_one(psi.leading().unwrap()) {
        return Err(Error::invalid("residual polynomial must be monic of positive degree"));
    }
    if psi.coeffs()[0].is_zero() {
        return Err(Error::invalid("the residual polynomial y cannot be lifted"));
    }
    if !is_irreducible(mu.tower(), psi) {
        return Err(Error::invalid(format!("residual polynomial {} is reducible", k.format_poly(psi))));
    }
    let top = mu.top();
    let e = top.e_rel() as usize;
    let phi = top.phi();
    let eps = HomUnit::monomial(&k, top.epsilon().as_exps());
    let mut out = phi.pow(e * d);
    for (j, c) in psi.coeffs()[..d].iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let alpha = top.gamma() * Rational::from_integer(BigInt::from(((d - j) * e) as i64));
        let pi = HomUnit::monomial(&k, mu.canonical_exps(r, &alpha).expect("value in group"));
        let w = mu.zero_value_residue(r, &eps.pow(&k, -((d - j) as i64)).div(&k, &pi));
        let a = construct(mu, r, &alpha, &k.mul(c, &w));
        out = &out + &(&a * &phi.pow(e * j));
    }
    Ok(out)
}
