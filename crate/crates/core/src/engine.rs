//! The OM factorization driver and the data it certifies for each prime
//! factor `F` of `f` over `Q_p`: the canonical valuation `μ_F`, an Okutsu
//! approximation, `e(F)`, `f(F)`, the Okutsu frame, `w(F)` and `δ_0(F)`.
//! Also evaluation of `v_F` and the Okutsu equivalence test.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::{ff_factor_seeded, ExtRational, Prime, ResidueTower, TowerPoly};
use crate::error::{Error, Result};
use crate::keypoly::{is_key, lift};
use crate::newton::{newton_polygon, principal_part, NewtonPolygon};
use crate::poly::RatPoly;
use crate::residual::{grading_order, residual_poly};
use crate::valuation::InductiveValuation;
use crate::Rational;

/// JSON Schema of [`LeafJson`].
pub const LEAF_SCHEMA: &str = include_str!("../schema/leaf.schema.json");

/// Branch data `(γ, ψ, a)`: `R_{μ_γ}(f)` has the irreducible factor `ψ`
/// with multiplicity `a`, where `μ_γ = [μ; φ, γ]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pub gamma: Rational,
    pub psi: TowerPoly,
    pub multiplicity: usize,
    /// The augmented valuation `μ_γ` over whose top residue field `ψ` lives.
    pub valuation: InductiveValuation,
}

/// Result of one branching step at a pair `(μ, φ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepResult {
    /// Exact power of `φ` dividing `f`.
    pub ord_phi: usize,
    /// Degree of the part of `f` outside the class of `φ`.
    pub deg_f0: usize,
    /// One entry per side of the principal polygon and residual factor,
    /// slopes by decreasing `γ`.
    pub branches: Vec<Branch>,
    pub principal: NewtonPolygon,
}

#[derive(Clone, Debug, Default)]
pub struct FactorOptions {
    /// Salt for the generator used when splitting residual polynomials.
    /// Output does not depend on it.
    pub seed: u64,
    /// Overrides the default step budget `10 deg(f) (bits + p)`.
    pub max_iterations: Option<usize>,
}

/// Certified record of one prime factor `F` of `f` over `Q_p`.
#[derive(Clone, Debug)]
pub struct OMLeaf {
    source: RatPoly,
    degree: usize,
    exact: bool,
    phi: RatPoly,
    /// `(μ, φ)` with `φ ∈ KP(μ)`, `μ < v_F` and `φ |_μ F`.
    work_mu: InductiveValuation,
    work_phi: RatPoly,
    mu_f: Option<InductiveValuation>,
    psi_top: Option<TowerPoly>,
    certified_value: ExtRational,
    invariants: Invariants,
}

/// Okutsu invariants of a prime polynomial.
///
/// Linear factors have no Okutsu frame: their frame and slopes are empty,
/// and weight and bound are undefined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariants {
    pub e: u64,
    pub f: u64,
    pub depth: usize,
    pub frame: Vec<RatPoly>,
    pub slopes: Vec<Rational>,
    pub okutsu_bound: Option<Rational>,
    pub weight: Option<Rational>,
}

/// JSON form of a leaf.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeafJson {
    pub degree: usize,
    pub e: u64,
    pub f: u64,
    pub depth: usize,
    pub exact: bool,
    pub phi: String,
    pub frame: Vec<String>,
    pub slopes: Vec<String>,
    pub okutsu_bound: Option<String>,
    pub weight: Option<String>,
    /// `v_F(phi)`, `"inf"` for exact leaves.
    pub certified_value: String,
}

impl OMLeaf {
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Whether [`OMLeaf::phi`] is the prime factor itself.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// The factor `F` when exact, otherwise an Okutsu approximation of it.
    pub fn phi(&self) -> &RatPoly {
        &self.phi
    }

    /// The polynomial this leaf is a factor of.
    pub fn source(&self) -> &RatPoly {
        &self.source
    }

    /// `μ_F`; `None` for linear factors.
    pub fn valuation(&self) -> Option<&InductiveValuation> {
        self.mu_f.as_ref()
    }

    /// `R_{μ_F}(F)`; `None` for linear factors.
    pub fn psi_top(&self) -> Option<&TowerPoly> {
        self.psi_top.as_ref()
    }

    /// `v_F(φ)` for the stored approximation.
    pub fn certified_value(&self) -> &ExtRational {
        &self.certified_value
    }

    pub fn invariants(&self) -> &Invariants {
        &self.invariants
    }

    pub fn e(&self) -> u64 {
        self.invariants.e
    }

    pub fn f(&self) -> u64 {
        self.invariants.f
    }

    pub fn depth(&self) -> usize {
        self.invariants.depth
    }

    pub fn to_json(&self) -> LeafJson {
        let inv = &self.invariants;
        LeafJson {
            degree: self.degree,
            e: inv.e,
            f: inv.f,
            depth: inv.depth,
            exact: self.exact,
            phi: self.phi.to_string(),
            frame: inv.frame.iter().map(|p| p.to_string()).collect(),
            slopes: inv.slopes.iter().map(|s| s.to_string()).collect(),
            okutsu_bound: inv.okutsu_bound.as_ref().map(|q| q.to_string()),
            weight: inv.weight.as_ref().map(|q| q.to_string()),
            certified_value: self.certified_value.to_string(),
        }
    }

    /// Replaces the approximation by one with `v_F(φ) > nu`; returns the new
    /// certified value.
    pub fn improve(&mut self, nu: &Rational) -> Result<ExtRational> {
        if self.exact {
            return Ok(ExtRational::Infinity);
        }
        let budget = value_budget(&self.source, nu);
        let mut steps = 0;
        loop {
            let (gamma, _) = certify(&self.work_mu, &self.work_phi, &self.source)?;
            let Some(gamma) = gamma else {
                self.exact = true;
                self.phi = self.work_phi.clone();
                self.certified_value = ExtRational::Infinity;
                return Ok(ExtRational::Infinity);
            };
            if gamma > *nu {
                self.phi = self.work_phi.clone();
                self.certified_value = ExtRational::Finite(gamma.clone());
                return Ok(ExtRational::Finite(gamma));
            }
            steps += 1;
            if steps > budget {
                return Err(Error::internal("approximation did not improve within the step budget"));
            }
            (self.work_mu, self.work_phi) = advance(&self.work_mu, &self.work_phi, gamma, &self.source)?;
        }
    }
}

/// `v_F(φ)` read off the principal polygon of the source at `(μ, φ)`, or
/// `None` when `φ` divides the source. Also returns the polygon.
fn certify(mu: &InductiveValuation, phi: &RatPoly, source: &RatPoly) -> Result<(Option<Rational>, NewtonPolygon)> {
    let cutoff = mu.value(phi).expect_finite("value of a key polynomial")?;
    let pp = principal_part(&newton_polygon(mu, phi, source)?, &cutoff);
    if pp.ord() != Some(0) {
        return Ok((None, pp));
    }
    let sides = pp.sides();
    if sides.len() != 1 || sides[0].width != 1 {
        return Err(Error::internal(format!(
            "approximation {phi} does not single out one prime factor (principal polygon {:?})",
            pp.vertices()
        )));
    }
    Ok((Some(-sides[0].slope.clone()), pp))
}

/// One step of approximation: `μ' = [μ; φ, v_F(φ)]` and the lift of the
/// (linear) residual polynomial of the source.
fn advance(
    mu: &InductiveValuation,
    phi: &RatPoly,
    gamma: Rational,
    source: &RatPoly,
) -> Result<(InductiveValuation, RatPoly)> {
    let next = mu.augment_unchecked(phi, gamma)?;
    let r = residual_poly(&next, source)?.r;
    if r.degree() != Some(1) {
        return Err(Error::internal("residual polynomial of a single factor class is not linear"));
    }
    let phi_next = lift(&next, &r)?;
    Ok((next, phi_next))
}

fn value_budget(f: &RatPoly, nu: &Rational) -> usize {
    let nu_bits = nu.numer().bits() as usize + 1;
    10 * f.deg().max(1) * (f.height_bits() as usize + nu_bits + 8) + 100
}

/// Branching step of the factorization at `(μ, φ)` for a key polynomial `φ`.
pub fn factor_step(mu: &InductiveValuation, phi: &RatPoly, f: &RatPoly) -> Result<StepResult> {
    if f.is_zero() {
        return Err(Error::invalid("cannot branch on the zero polynomial"));
    }
    if !is_key(mu, phi)?.is_key {
        return Err(Error::invalid(format!("{phi} is not a key polynomial for the valuation")));
    }
    step(mu, phi, f, 0)
}

fn step(mu: &InductiveValuation, phi: &RatPoly, f: &RatPoly, seed: u64) -> Result<StepResult> {
    let cutoff = mu.value(phi).expect_finite("value of a key polynomial")?;
    let pp = principal_part(&newton_polygon(mu, phi, f)?, &cutoff);
    let ord_phi = pp.ord().unwrap_or(0);
    let deg_f0 = f.deg() - pp.length() * phi.deg();
    let mut branches = Vec::new();
    for side in pp.sides() {
        let gamma = -side.slope;
        let valuation = mu.augment_unchecked(phi, gamma.clone())?;
        let r = residual_poly(&valuation, f)?.r;
        for (psi, multiplicity) in ff_factor_seeded(valuation.tower(), &r, seed)? {
            branches.push(Branch { gamma: gamma.clone(), psi, multiplicity, valuation: valuation.clone() });
        }
    }
    Ok(StepResult { ord_phi, deg_f0, branches, principal: pp })
}

/// Moves along a branch: `μ_γ` and a key polynomial lifting `ψ`.
pub fn refine(branch: &Branch) -> Result<(InductiveValuation, RatPoly)> {
    let phi = lift(&branch.valuation, &branch.psi)?;
    Ok((branch.valuation.clone(), phi))
}

/// Checks the input contract of [`om_factor`].
fn validate(f: &RatPoly) -> Result<()> {
    if f.deg() == 0 {
        return Err(Error::invalid("input must have positive degree"));
    }
    if !f.is_monic() {
        return Err(Error::invalid("input is not monic"));
    }
    if !f.is_integral() {
        return Err(Error::invalid("input has non-integer coefficients"));
    }
    if !f.is_squarefree() {
        return Err(Error::invalid("input is not squarefree"));
    }
    Ok(())
}

struct Task {
    mu: InductiveValuation,
    phi: RatPoly,
    multiplicity: usize,
}

enum RawLeaf {
    /// `φ` divides `f`.
    Exact(InductiveValuation, RatPoly),
    /// Multiplicity one: `φ` is an Okutsu approximation of a single factor.
    Approx(InductiveValuation, RatPoly),
}

/// One leaf per prime factor of the monic, integral, squarefree `f` over `Q_p`.
pub fn om_factor(f: &RatPoly, p: u64) -> Result<Vec<OMLeaf>> {
    om_factor_with(f, p, &FactorOptions::default())
}

pub fn om_factor_with(f: &RatPoly, p: u64, options: &FactorOptions) -> Result<Vec<OMLeaf>> {
    let prime = Prime::new(p)?;
    validate(f)?;
    let budget = options
        .max_iterations
        .unwrap_or_else(|| 10 * f.deg() * (f.height_bits() as usize + p.min(1 << 20) as usize));
    let gauss = InductiveValuation::gauss(prime);
    let tower = ResidueTower::new(prime);
    let reduced = f.reduce_mod(prime, &tower).expect("integral input");
    let k = tower.field(0);
    let mut stack: Vec<Task> = Vec::new();
    for (psi, a) in ff_factor_seeded(&tower, &reduced, options.seed)?.into_iter().rev() {
        let phi = if psi == k.poly_y() { RatPoly::x() } else { lift(&gauss, &psi)? };
        stack.push(Task { mu: gauss.clone(), phi, multiplicity: a });
    }
    let mut raw = Vec::new();
    let mut steps = 0usize;
    while let Some(task) = stack.pop() {
        steps += 1;
        if steps > budget {
            return Err(Error::internal(format!("factorization exceeded its budget of {budget} steps")));
        }
        if task.multiplicity == 1 {
            raw.push(RawLeaf::Approx(task.mu, task.phi));
            continue;
        }
        let st = step(&task.mu, &task.phi, f, options.seed)?;
        if st.ord_phi > 0 {
            raw.push(RawLeaf::Exact(task.mu.clone(), task.phi.clone()));
        }
        for b in st.branches.iter().rev() {
            let (mu, phi) = refine(b)?;
            stack.push(Task { mu, phi, multiplicity: b.multiplicity });
        }
    }
    finish(f, raw)
}

fn finish(f: &RatPoly, raw: Vec<RawLeaf>) -> Result<Vec<OMLeaf>> {
    let mut pending: Vec<(InductiveValuation, RatPoly, bool)> = raw
        .into_iter()
        .map(|r| match r {
            RawLeaf::Exact(mu, phi) => (mu, phi, true),
            RawLeaf::Approx(mu, phi) => {
                if phi.deg() == f.deg() {
                    (mu, f.clone(), true)
                } else {
                    let exact = f.rem(&phi).is_zero();
                    (mu, phi, exact)
                }
            }
        })
        .collect();
    let total: usize = pending.iter().map(|(_, phi, _)| phi.deg()).sum();
    if total != f.deg() {
        return Err(Error::internal(format!("leaf degrees sum to {total}, expected {}", f.deg())));
    }
    let inexact: Vec<usize> = (0..pending.len()).filter(|&i| !pending[i].2).collect();
    if inexact.len() == 1 {
        // the last factor is the cofactor of all the exact ones
        let mut rest = f.clone();
        for (_, phi, exact) in &pending {
            if *exact {
                rest = rest.div_exact(phi)?;
            }
        }
        let slot = &mut pending[inexact[0]];
        slot.1 = rest;
        slot.2 = true;
    }
    pending.into_iter().map(|(mu, phi, exact)| build_leaf(f, mu, phi, exact)).collect()
}

fn build_leaf(source: &RatPoly, work_mu: InductiveValuation, phi: RatPoly, exact: bool) -> Result<OMLeaf> {
    let degree = phi.deg();
    let (mu_f, psi_top) = if degree == 1 {
        (None, None)
    } else {
        let mu_f = if work_mu.min_degree() == degree {
            work_mu.truncated(work_mu.depth() - 1)
        } else {
            work_mu.clone()
        };
        let psi = residual_poly(&mu_f, &phi)?.r;
        (Some(mu_f), Some(psi))
    };
    let invariants = derive_invariants(degree, mu_f.as_ref(), psi_top.as_ref())?;
    let certified_value = if exact {
        ExtRational::Infinity
    } else {
        match certify(&work_mu, &phi, source)?.0 {
            Some(v) => ExtRational::Finite(v),
            None => return Err(Error::internal("approximation unexpectedly divides the source")),
        }
    };
    Ok(OMLeaf {
        source: source.clone(),
        degree,
        exact,
        work_phi: phi.clone(),
        phi,
        work_mu,
        mu_f,
        psi_top,
        certified_value,
        invariants,
    })
}

fn derive_invariants(degree: usize, mu_f: Option<&InductiveValuation>, psi: Option<&TowerPoly>) -> Result<Invariants> {
    let (Some(mu), Some(psi)) = (mu_f, psi) else {
        return Ok(Invariants {
            e: 1,
            f: 1,
            depth: 0,
            frame: Vec::new(),
            slopes: Vec::new(),
            okutsu_bound: None,
            weight: None,
        });
    };
    let idx = mu.indices();
    let e = idx.e;
    let f = idx.f * psi.degree().unwrap_or(0) as u64;
    if e * f != degree as u64 {
        return Err(Error::internal(format!("e·f = {e}·{f} differs from the degree {degree}")));
    }
    let weight = idx.weight;
    Ok(Invariants {
        e,
        f,
        depth: idx.depth,
        frame: mu.levels().iter().map(|l| l.phi().clone()).collect(),
        slopes: mu.levels().iter().map(|l| l.gamma().clone()).collect(),
        okutsu_bound: Some(&weight * Rational::from_integer(BigInt::from(degree))),
        weight: Some(weight),
    })
}

/// Recomputes a leaf's invariants from `μ_F` and `R_{μ_F}(F)` and checks them
/// against the stored ones.
pub fn invariants_and_frame(leaf: &OMLeaf) -> Result<Invariants> {
    let fresh = derive_invariants(leaf.degree, leaf.mu_f.as_ref(), leaf.psi_top.as_ref())?;
    if fresh != leaf.invariants {
        return Err(Error::internal("stored leaf invariants are inconsistent"));
    }
    Ok(fresh)
}

/// `v_F(g)` for the prime factor `F` described by the leaf.
pub fn value_of(leaf: &OMLeaf, g: &RatPoly) -> Result<ExtRational> {
    let p = leaf.work_mu.prime();
    if g.is_zero() {
        return Ok(ExtRational::Infinity);
    }
    if g.deg() == 0 {
        return Ok(ExtRational::from(p.valuation(&g.coeff(0)).expect("nonzero")));
    }
    if leaf.exact {
        let r = g.rem(&leaf.phi);
        if r.is_zero() {
            return Ok(ExtRational::Infinity);
        }
        return Ok(leaf.work_mu.value(&r));
    }
    let (mut mu, mut phi) = (leaf.work_mu.clone(), leaf.work_phi.clone());
    let h = g.gcd(&leaf.source);
    if h.deg() > 0 && grading_order(&mu, &phi, &h)? > 0 {
        return Ok(ExtRational::Infinity);
    }
    let budget = value_budget(&leaf.source, &Rational::from_integer(BigInt::from(g.height_bits() + g.deg() as u64)));
    for _ in 0..budget {
        if grading_order(&mu, &phi, g)? == 0 {
            return Ok(mu.value(g));
        }
        match certify(&mu, &phi, &leaf.source)?.0 {
            Some(gamma) => (mu, phi) = advance(&mu, &phi, gamma, &leaf.source)?,
            None => {
                // φ turned out to be the factor itself
                let r = g.rem(&phi);
                return Ok(if r.is_zero() { ExtRational::Infinity } else { mu.value(&r) });
            }
        }
    }
    Err(Error::internal("evaluation did not settle within the step budget"))
}

/// An approximation `φ ≈ F` with `v_F(φ) > nu`, and that value.
pub fn improve_approx(leaf: &OMLeaf, nu: &Rational) -> Result<(RatPoly, ExtRational)> {
    let mut copy = leaf.clone();
    let v = copy.improve(nu)?;
    Ok((copy.phi, v))
}

/// Outcome of an Okutsu equivalence test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivReport {
    pub equivalent: bool,
    /// `v_F(G)`, absent when the degrees differ.
    pub value: Option<ExtRational>,
    /// `δ_0(F)`, absent for linear or mismatched inputs.
    pub bound: Option<Rational>,
}

/// The single leaf of a polynomial that is irreducible over `Q_p`.
pub fn prime_leaf(f: &RatPoly, p: u64) -> Result<OMLeaf> {
    named_prime_leaf(f, p, "input")
}

fn named_prime_leaf(f: &RatPoly, p: u64, name: &str) -> Result<OMLeaf> {
    let mut leaves = om_factor(f, p).map_err(|e| match e {
        Error::InvalidArgument(msg) => Error::InvalidArgument(format!("{name} polynomial: {msg}")),
        other => other,
    })?;
    if leaves.len() != 1 {
        return Err(Error::invalid(format!("{name} polynomial {f} is reducible over Q_{p}")));
    }
    Ok(leaves.pop().unwrap())
}

/// Decides `F ≈ G`, i.e. `deg F = deg G` and `v_F(G) > δ_0(F)`, with the
/// quantities compared.
pub fn okutsu_report(f: &RatPoly, g: &RatPoly, p: u64) -> Result<EquivReport> {
    let lf = named_prime_leaf(f, p, "first")?;
    named_prime_leaf(g, p, "second")?;
    if f.deg() != g.deg() {
        return Ok(EquivReport { equivalent: false, value: None, bound: None });
    }
    let value = value_of(&lf, g)?;
    let Some(bound) = lf.invariants.okutsu_bound.clone() else {
        return Ok(EquivReport { equivalent: true, value: Some(value), bound: None });
    };
    let equivalent = value > ExtRational::Finite(bound.clone());
    Ok(EquivReport { equivalent, value: Some(value), bound: Some(bound) })
}

/// Okutsu equivalence of two prime polynomials over `Q_p`.
pub fn okutsu_equiv(f: &RatPoly, g: &RatPoly, p: u64) -> Result<bool> {
    Ok(okutsu_report(f, g, p)?.equivalent)
}
