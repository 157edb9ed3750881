//! Inductive valuations on `Q[x]` extending `v_p`, stored as optimal
//! MacLane chains `μ_0 → μ_1 → … → μ_r` with `μ_i = [μ_{i-1}; φ_i, γ_i]`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{rational_from_str, ExtRational, Prime, ResidueTower, TowerPoly};
use crate::error::{Error, Result};
use crate::keypoly::is_key;
use crate::poly::RatPoly;
use crate::residual::EpsilonDatum;
use crate::Rational;

/// One level `(φ_i, γ_i)` of a chain together with its cached data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    phi: RatPoly,
    gamma: Rational,
    e_rel: i64,
    epsilon: EpsilonDatum,
}

impl Level {
    pub fn phi(&self) -> &RatPoly {
        &self.phi
    }

    pub fn gamma(&self) -> &Rational {
        &self.gamma
    }

    /// Relative ramification index `e_i`.
    pub fn e_rel(&self) -> i64 {
        self.e_rel
    }

    /// The monomial of value `-e_i γ_i` used to normalize residues.
    pub fn epsilon(&self) -> &EpsilonDatum {
        &self.epsilon
    }

    pub fn degree(&self) -> usize {
        self.phi.deg()
    }
}

/// Invariants of an inductive valuation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Indices {
    /// `w(μ) = γ_r / deg φ_r`.
    pub weight: Rational,
    /// `e(μ) = e_0 ⋯ e_r`.
    pub e: u64,
    /// `f_0 ⋯ f_{r-1}`, the degree of the top residue field over `F_p`.
    pub f: u64,
    pub depth: usize,
    /// The value group is `(1/group_denominator) Z`.
    pub group_denominator: u64,
}

/// An inductive valuation given by an optimal MacLane chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InductiveValuation {
    p: Prime,
    levels: Vec<Level>,
    tower: ResidueTower,
}

impl InductiveValuation {
    /// The depth-zero valuation `μ_0(x+a, γ)`: `Σ a_s (x+a)^s ↦ min v_p(a_s) + sγ`.
    pub fn depth_zero(p: Prime, a: Rational, gamma: Rational) -> Self {
        let phi = RatPoly::new(vec![a, Rational::one()]);
        let e_rel = gamma.denom().to_i64().expect("value denominator fits in i64");
        let epsilon = canonical_monomial(&[], 0, &(-Rational::from_integer(BigInt::from(e_rel)) * &gamma))
            .expect("integer target is always representable");
        InductiveValuation {
            p,
            levels: vec![Level { phi, gamma, e_rel, epsilon }],
            tower: ResidueTower::new(p),
        }
    }

    /// The Gauss valuation `Σ a_s x^s ↦ min v_p(a_s)`.
    pub fn gauss(p: Prime) -> Self {
        InductiveValuation::depth_zero(p, Rational::zero(), Rational::zero())
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    /// MacLane depth `r` (number of levels minus one).
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn level(&self, i: usize) -> &Level {
        &self.levels[i]
    }

    pub fn top(&self) -> &Level {
        self.levels.last().expect("chains are nonempty")
    }

    /// The residue tower `k_0 ⊂ … ⊂ k_r`.
    pub fn tower(&self) -> &ResidueTower {
        &self.tower
    }

    /// `ψ_i`, the residual polynomial of `φ_{i+1}` defining `k_{i+1}`; absent at the top.
    pub fn psi(&self, i: usize) -> Option<&TowerPoly> {
        (i < self.depth()).then(|| self.tower.modulus(i))
    }

    /// Degree `m` of the key polynomials of minimal degree, `deg φ_r`.
    pub fn min_degree(&self) -> usize {
        self.top().degree()
    }

    /// Relative ramification index `e_r` of the top level.
    pub fn e_rel(&self) -> i64 {
        self.top().e_rel
    }

    pub fn weight(&self) -> Rational {
        self.top().gamma.clone() / Rational::from_integer(BigInt::from(self.min_degree()))
    }

    pub fn indices(&self) -> Indices {
        let e = self.levels.iter().map(|l| l.e_rel as u64).product();
        Indices {
            weight: self.weight(),
            e,
            f: self.tower.dim(self.depth()) as u64,
            depth: self.depth(),
            group_denominator: e,
        }
    }

    /// `e_0 ⋯ e_{i-1}`: values of polynomials of degree below `deg φ_i`
    /// lie in `(1/E) Z` for this `E`.
    pub(crate) fn group_denominator_below(&self, i: usize) -> i64 {
        self.levels[..i].iter().map(|l| l.e_rel).product()
    }

    /// The chain truncated to levels `0..=i`.
    pub fn truncated(&self, i: usize) -> InductiveValuation {
        InductiveValuation {
            p: self.p,
            levels: self.levels[..=i].to_vec(),
            tower: self.tower.truncated(i),
        }
    }

    /// `μ(f)`, with `μ(0) = ∞`.
    pub fn value(&self, f: &RatPoly) -> ExtRational {
        match self.value_at(self.depth(), f) {
            Some(v) => ExtRational::Finite(v),
            None => ExtRational::Infinity,
        }
    }

    /// `μ_i(f)` for the truncation at level `i`; `None` for `f = 0`.
    pub(crate) fn value_at(&self, i: usize, f: &RatPoly) -> Option<Rational> {
        if f.is_zero() {
            return None;
        }
        let mut i = i;
        // a polynomial of degree below deg φ_i has the same value at all
        // levels from i-1 upwards
        while i > 0 && f.deg() < self.levels[i].degree() {
            i -= 1;
        }
        let lvl = &self.levels[i];
        let mut best: Option<Rational> = None;
        for (s, a) in f.expand(&lvl.phi).iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let base = if i == 0 {
                Rational::from_integer(BigInt::from(self.p.valuation(&a.coeff(0)).expect("nonzero")))
            } else {
                self.value_at(i - 1, a).expect("nonzero")
            };
            let v = base + &lvl.gamma * Rational::from_integer(BigInt::from(s));
            if best.as_ref().is_none_or(|b| v < *b) {
                best = Some(v);
            }
        }
        best
    }

    /// The canonical monomial `p^t ∏_{j<i} φ_j^{t_j}` (`0 ≤ t_j < e_j`) of value
    /// `alpha`, as the exponent vector `[t, t_0, …, t_{i-1}]`.
    pub(crate) fn canonical_exps(&self, i: usize, alpha: &Rational) -> Option<Vec<i64>> {
        canonical_monomial(&self.levels[..i], i, alpha).map(|d| d.as_exps())
    }

    /// Value of the monomial with exponent vector `[t, t_0, …]`.
    pub(crate) fn monomial_value(&self, exps: &[i64]) -> Rational {
        let mut v = Rational::from_integer(BigInt::from(exps[0]));
        for (j, &t) in exps[1..].iter().enumerate() {
            v += &self.levels[j].gamma * Rational::from_integer(BigInt::from(t));
        }
        v
    }

    /// `[μ; φ, γ]`, after checking that `φ` is a key polynomial for `μ` and
    /// `γ > μ(φ)`.
    ///
    /// When `deg φ` equals the top degree the top level is replaced, which
    /// keeps the chain optimal.
    pub fn augment(&self, phi: &RatPoly, gamma: Rational) -> Result<InductiveValuation> {
        if !phi.is_monic() || phi.deg() == 0 {
            return Err(Error::invalid(format!("augmentation polynomial {phi} must be monic of positive degree")));
        }
        let report = is_key(self, phi)?;
        if !report.is_key {
            return Err(Error::invalid(format!("{phi} is not a key polynomial for the valuation")));
        }
        let current = self.value(phi);
        if ExtRational::Finite(gamma.clone()) <= current {
            return Err(Error::invalid(format!(
                "augmentation value {gamma} must exceed the current value {current} of {phi}"
            )));
        }
        self.augment_unchecked(phi, gamma)
    }

    /// [`InductiveValuation::augment`] without the key-polynomial and value
    /// checks, for callers that already know both hold.
    pub(crate) fn augment_unchecked(&self, phi: &RatPoly, gamma: Rational) -> Result<InductiveValuation> {
        let m = self.min_degree();
        let d = phi.deg();
        if d < m {
            return Err(Error::invalid(format!(
                "{phi} has degree {d}, below the minimal key degree {m}"
            )));
        }
        if d == m {
            if self.depth() == 0 {
                return Ok(InductiveValuation::depth_zero(self.p, phi.coeff(0), gamma));
            }
            let mut levels = self.levels[..self.depth()].to_vec();
            let level = make_level(&levels, phi.clone(), gamma)?;
            levels.push(level);
            return Ok(InductiveValuation { p: self.p, levels, tower: self.tower.clone() });
        }
        let psi = crate::residual::residual_poly(self, phi)?.r;
        let mut tower = self.tower.clone();
        tower.extend(psi)?;
        let mut levels = self.levels.clone();
        let level = make_level(&levels, phi.clone(), gamma)?;
        levels.push(level);
        Ok(InductiveValuation { p: self.p, levels, tower })
    }

    /// Builds a valuation from a chain file, checking every augmentation.
    pub fn from_chain(chain: &ChainFile) -> Result<InductiveValuation> {
        let p = Prime::new(chain.prime)?;
        let mut levels = chain.levels.iter();
        let first = levels.next().ok_or_else(|| Error::invalid("chain has no levels"))?;
        let phi0 = RatPoly::parse(&first.phi)?;
        if phi0.degree() != Some(1) || !phi0.is_monic() {
            return Err(Error::invalid(format!("first key polynomial {phi0} must be monic of degree 1")));
        }
        let mut mu = InductiveValuation::depth_zero(p, phi0.coeff(0), rational_from_str(&first.gamma)?);
        for (i, lvl) in levels.enumerate() {
            let phi = RatPoly::parse(&lvl.phi)?;
            if phi.deg() <= mu.min_degree() {
                return Err(Error::invalid(format!(
                    "level {}: key degrees must strictly increase along a chain",
                    i + 1
                )));
            }
            mu = mu
                .augment(&phi, rational_from_str(&lvl.gamma)?)
                .map_err(|e| Error::invalid(format!("level {}: {e}", i + 1)))?;
        }
        Ok(mu)
    }

    pub fn to_chain(&self) -> ChainFile {
        ChainFile {
            prime: self.p.get(),
            levels: self
                .levels
                .iter()
                .map(|l| ChainLevel { phi: l.phi.to_string(), gamma: l.gamma.to_string() })
                .collect(),
        }
    }
}

fn make_level(below: &[Level], phi: RatPoly, gamma: Rational) -> Result<Level> {
    let big_e: i64 = below.iter().map(|l| l.e_rel).product();
    let b = gamma.denom().to_i64().ok_or_else(|| Error::invalid("value denominator too large"))?;
    let e_rel = b / b.gcd(&big_e);
    let target = -Rational::from_integer(BigInt::from(e_rel)) * &gamma;
    let epsilon = canonical_monomial(below, below.len(), &target)
        .ok_or_else(|| Error::internal("normalizing monomial does not exist"))?;
    Ok(Level { phi, gamma, e_rel, epsilon })
}

/// Finds `t, t_0, …, t_{i-1}` with `t + Σ t_j γ_j = alpha` and `0 ≤ t_j < e_j`,
/// choosing the exponents from the top level down.
fn canonical_monomial(levels: &[Level], i: usize, alpha: &Rational) -> Option<EpsilonDatum> {
    let mut exps = vec![0i64; i];
    let mut rest = alpha.clone();
    for j in (0..i).rev() {
        let den: i64 = levels[..j].iter().map(|l| l.e_rel).product();
        let den = Rational::from_integer(BigInt::from(den));
        let gamma = &levels[j].gamma;
        let t = (0..levels[j].e_rel).find(|&t| {
            let r = &rest - gamma * Rational::from_integer(BigInt::from(t));
            (r * &den).is_integer()
        })?;
        exps[j] = t;
        rest -= gamma * Rational::from_integer(BigInt::from(t));
    }
    if !rest.is_integer() {
        return None;
    }
    Some(EpsilonDatum { t: rest.to_integer().to_i64()?, exponents: exps })
}

/// `φ`-adic expansion `f = Σ a_s φ^s` with `deg a_s < deg φ`.
pub fn phi_expansion(f: &RatPoly, phi: &RatPoly) -> Result<Vec<RatPoly>> {
    if phi.deg() == 0 {
        return Err(Error::invalid("cannot expand in a constant polynomial"));
    }
    if !phi.is_monic() {
        return Err(Error::invalid(format!("{phi} is not monic")));
    }
    Ok(f.expand(phi))
}

/// Decides `μ = μ*` by comparing optimal chains level by level.
pub fn equal_valuations(mu: &InductiveValuation, other: &InductiveValuation) -> bool {
    if mu.p != other.p || mu.depth() != other.depth() {
        return false;
    }
    for (i, (a, b)) in mu.levels.iter().zip(&other.levels).enumerate() {
        if a.degree() != b.degree() || a.gamma != b.gamma {
            return false;
        }
        let diff = &a.phi - &b.phi;
        let close = if i == 0 {
            // μ_{-∞} reads only the constant term
            match mu.p.valuation(&diff.coeff(0)) {
                None => true,
                Some(v) => Rational::from_integer(BigInt::from(v)) >= a.gamma,
            }
        } else {
            mu.value_at(i - 1, &diff).is_none_or(|v| v >= a.gamma)
        };
        if !close {
            return false;
        }
    }
    true
}

/// JSON description of a chain: `{"prime": 2, "levels": [{"phi": "x", "gamma": "1/2"}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainFile {
    pub prime: u64,
    pub levels: Vec<ChainLevel>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainLevel {
    pub phi: String,
    pub gamma: String,
}

impl ChainFile {
    pub fn from_json(text: &str) -> Result<ChainFile> {
        serde_json::from_str(text).map_err(|e| {
            // serde appends its own " at line L column C"
            let full = e.to_string();
            let message = full.rsplit_once(" at line ").map_or(full.as_str(), |(m, _)| m).to_string();
            Error::Parse { line: e.line(), column: e.column(), message: format!("chain file: {message}") }
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("chain files serialize")
    }
}
