use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;

use super::rational::{mul_mod, pow_mod, Prime};
use super::tpoly::TowerPoly;
use crate::error::{Error, Result};

/// A tower of finite fields `k_0 = F_p ⊂ k_1 ⊂ … ⊂ k_r` with
/// `k_{i+1} = k_i[y]/(ψ_i)`.
///
/// Elements of `k_i` are stored as flat `F_p` coordinate vectors in the
/// tower basis `z_0^{a_0} ⋯ z_{i-1}^{a_{i-1}}`, where `z_j` is the class of
/// `y` in `k_{j+1}`. Coordinates of lower levels come first, so embedding
/// `k_i ⊂ k_j` is zero padding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueTower {
    p: Prime,
    moduli: Vec<TowerPoly>,
    dims: Vec<usize>,
}

impl ResidueTower {
    pub fn new(p: Prime) -> Self {
        ResidueTower { p, moduli: Vec::new(), dims: vec![1] }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    /// Index of the top field.
    pub fn top(&self) -> usize {
        self.moduli.len()
    }

    /// The defining polynomial `ψ_i` of `k_{i+1}` over `k_i`.
    pub fn modulus(&self, i: usize) -> &TowerPoly {
        &self.moduli[i]
    }

    /// `[k_i : F_p]`.
    pub fn dim(&self, i: usize) -> usize {
        self.dims[i]
    }

    pub fn field(&self, level: usize) -> TowerField<'_> {
        assert!(level <= self.top(), "level {level} above tower top {}", self.top());
        TowerField { tower: self, level }
    }

    /// Adjoins a root of the monic irreducible `psi` over the top field.
    pub fn extend(&mut self, psi: TowerPoly) -> Result<()> {
        let top = self.top();
        if psi.level() != top {
            return Err(Error::invalid(format!(
                "extension polynomial lives over k_{}, expected k_{top}",
                psi.level()
            )));
        }
        let d = psi.degree().ok_or_else(|| Error::invalid("zero extension polynomial"))?;
        if d == 0 || !self.field(top).is_one(psi.leading().unwrap()) {
            return Err(Error::invalid("extension polynomial must be monic of positive degree"));
        }
        if !super::factor::is_irreducible(self, &psi) {
            return Err(Error::invalid(format!("extension polynomial {psi:?} is reducible")));
        }
        self.dims.push(self.dims[top] * d);
        self.moduli.push(psi);
        Ok(())
    }

    /// The tower truncated to `k_0 ⊂ … ⊂ k_level`.
    pub fn truncated(&self, level: usize) -> ResidueTower {
        ResidueTower {
            p: self.p,
            moduli: self.moduli[..level].to_vec(),
            dims: self.dims[..=level].to_vec(),
        }
    }
}

/// An element of one field of a [`ResidueTower`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TowerElement {
    level: usize,
    coeffs: Vec<u64>,
}

impl TowerElement {
    pub fn level(&self) -> usize {
        self.level
    }

    /// Flat `F_p` coordinates in the tower basis.
    pub fn coords(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// The element read at a lower level, if it lies in that subfield.
    pub fn restrict(&self, tower: &ResidueTower, level: usize) -> Option<TowerElement> {
        let n = tower.dim(level);
        if self.coeffs[n..].iter().any(|&c| c != 0) {
            return None;
        }
        Some(TowerElement { level, coeffs: self.coeffs[..n].to_vec() })
    }
}

/// Arithmetic context for the field `k_level` of a tower.
#[derive(Clone, Copy, Debug)]
pub struct TowerField<'a> {
    tower: &'a ResidueTower,
    level: usize,
}

impl<'a> TowerField<'a> {
    pub fn tower(&self) -> &'a ResidueTower {
        self.tower
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn p(&self) -> u64 {
        self.tower.p.get()
    }

    pub fn dim(&self) -> usize {
        self.tower.dims[self.level]
    }

    /// Number of elements `p^dim`.
    pub fn order(&self) -> BigUint {
        BigUint::from(self.p()).pow(self.dim() as u32)
    }

    pub fn zero(&self) -> TowerElement {
        TowerElement { level: self.level, coeffs: vec![0; self.dim()] }
    }

    pub fn one(&self) -> TowerElement {
        self.from_u64(1)
    }

    pub fn from_u64(&self, c: u64) -> TowerElement {
        let mut e = self.zero();
        e.coeffs[0] = c % self.p();
        e
    }

    pub fn from_i64(&self, c: i64) -> TowerElement {
        self.from_u64(c.rem_euclid(self.p() as i64) as u64)
    }

    pub fn from_coords(&self, coords: &[u64]) -> Result<TowerElement> {
        if coords.len() > self.dim() {
            return Err(Error::invalid(format!(
                "{} coordinates given for a field of dimension {}",
                coords.len(),
                self.dim()
            )));
        }
        let mut e = self.zero();
        for (slot, &c) in e.coeffs.iter_mut().zip(coords) {
            *slot = c % self.p();
        }
        Ok(e)
    }

    /// The class `z_{level-1}` of `y` generating `k_level` over `k_{level-1}`.
    pub fn generator(&self) -> TowerElement {
        assert!(self.level > 0, "F_p has no tower generator");
        if self.tower.moduli[self.level - 1].degree() == Some(1) {
            // k_level = k_{level-1}; z is the root of the linear modulus
            let psi = &self.tower.moduli[self.level - 1];
            let below = self.tower.field(self.level - 1);
            return self.embed(&below.neg(&psi.coeffs()[0]));
        }
        let mut e = self.zero();
        e.coeffs[self.tower.dims[self.level - 1]] = 1;
        e
    }

    /// Embeds an element of a lower field.
    pub fn embed(&self, x: &TowerElement) -> TowerElement {
        assert!(x.level <= self.level, "cannot embed k_{} into k_{}", x.level, self.level);
        let mut e = self.zero();
        e.coeffs[..x.coeffs.len()].copy_from_slice(&x.coeffs);
        e
    }

    fn check(&self, x: &TowerElement) {
        debug_assert_eq!(x.level, self.level, "element from k_{} used in k_{}", x.level, self.level);
    }

    pub fn is_zero(&self, x: &TowerElement) -> bool {
        self.check(x);
        x.is_zero()
    }

    pub fn is_one(&self, x: &TowerElement) -> bool {
        self.check(x);
        x.coeffs[0] == 1 && x.coeffs[1..].iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &TowerElement, b: &TowerElement) -> TowerElement {
        self.check(a);
        self.check(b);
        let p = self.p();
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| (x + y) % p).collect();
        TowerElement { level: self.level, coeffs }
    }

    pub fn sub(&self, a: &TowerElement, b: &TowerElement) -> TowerElement {
        self.check(a);
        self.check(b);
        let p = self.p();
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| (x + p - y) % p).collect();
        TowerElement { level: self.level, coeffs }
    }

    pub fn neg(&self, a: &TowerElement) -> TowerElement {
        self.check(a);
        let p = self.p();
        let coeffs = a.coeffs.iter().map(|&x| (p - x) % p).collect();
        TowerElement { level: self.level, coeffs }
    }

    pub fn scale(&self, c: u64, a: &TowerElement) -> TowerElement {
        let p = self.p();
        let coeffs = a.coeffs.iter().map(|&x| mul_mod(x, c % p, p)).collect();
        TowerElement { level: self.level, coeffs }
    }

    /// Splits an element of `k_level` into its coordinates over `k_{level-1}`.
    pub(crate) fn chunks(&self, a: &TowerElement) -> Vec<TowerElement> {
        let inner = self.tower.dims[self.level - 1];
        a.coeffs
            .chunks(inner)
            .map(|c| TowerElement { level: self.level - 1, coeffs: c.to_vec() })
            .collect()
    }

    pub(crate) fn assemble(&self, chunks: &[TowerElement]) -> TowerElement {
        let mut e = self.zero();
        let inner = self.tower.dims[self.level - 1];
        for (k, c) in chunks.iter().enumerate() {
            e.coeffs[k * inner..(k + 1) * inner].copy_from_slice(&c.coeffs);
        }
        e
    }

    /// Coordinates of `a` over `k_{level-1}` as a polynomial in `z_{level-1}`.
    pub fn as_poly_below(&self, a: &TowerElement) -> TowerPoly {
        TowerPoly::new(self.level - 1, self.chunks(a))
    }

    pub fn mul(&self, a: &TowerElement, b: &TowerElement) -> TowerElement {
        self.check(a);
        self.check(b);
        if self.level == 0 {
            return TowerElement { level: 0, coeffs: vec![mul_mod(a.coeffs[0], b.coeffs[0], self.p())] };
        }
        let below = self.tower.field(self.level - 1);
        let psi = &self.tower.moduli[self.level - 1];
        let f = psi.degree().unwrap();
        let ac = self.chunks(a);
        let bc = self.chunks(b);
        let mut prod = vec![below.zero(); 2 * f - 1];
        for (i, x) in ac.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in bc.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                prod[i + j] = below.add(&prod[i + j], &below.mul(x, y));
            }
        }
        for k in (f..2 * f - 1).rev() {
            let t = std::mem::replace(&mut prod[k], below.zero());
            if t.is_zero() {
                continue;
            }
            for (i, c) in psi.coeffs()[..f].iter().enumerate() {
                if !c.is_zero() {
                    prod[k - f + i] = below.sub(&prod[k - f + i], &below.mul(&t, c));
                }
            }
        }
        self.assemble(&prod[..f])
    }

    pub fn square(&self, a: &TowerElement) -> TowerElement {
        self.mul(a, a)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: &TowerElement) -> Option<TowerElement> {
        self.check(a);
        if a.is_zero() {
            return None;
        }
        if self.level == 0 {
            let p = self.p();
            return Some(TowerElement { level: 0, coeffs: vec![pow_mod(a.coeffs[0], p - 2, p)] });
        }
        let below = self.tower.field(self.level - 1);
        let psi = &self.tower.moduli[self.level - 1];
        let (g, s, _) = below.poly_xgcd(&self.as_poly_below(a), psi);
        // g is a nonzero constant since psi is irreducible
        let g0 = below.inv(&g.coeffs()[0])?;
        let s = below.poly_scale(&g0, &s);
        let mut chunks = s.coeffs().to_vec();
        chunks.resize(psi.degree().unwrap(), below.zero());
        Some(self.assemble(&chunks))
    }

    pub fn div(&self, a: &TowerElement, b: &TowerElement) -> Option<TowerElement> {
        Some(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &TowerElement, e: &BigUint) -> TowerElement {
        let mut result = self.one();
        for i in (0..e.bits()).rev() {
            result = self.square(&result);
            if e.bit(i) {
                result = self.mul(&result, a);
            }
        }
        result
    }

    /// `a^e` for a signed exponent; `None` when `a = 0` and `e < 0`.
    pub fn pow_i64(&self, a: &TowerElement, e: i64) -> Option<TowerElement> {
        let base = if e < 0 { self.inv(a)? } else { a.clone() };
        Some(self.pow(&base, &BigUint::from(e.unsigned_abs())))
    }

    pub fn frobenius(&self, a: &TowerElement) -> TowerElement {
        self.pow(a, &BigUint::from(self.p()))
    }

    pub fn random<R: Rng>(&self, rng: &mut R) -> TowerElement {
        let p = self.p();
        TowerElement { level: self.level, coeffs: (0..self.dim()).map(|_| rng.gen_range(0..p)).collect() }
    }

    /// All elements, in coordinate order. Intended for small fields.
    pub fn elements(&self) -> impl Iterator<Item = TowerElement> + '_ {
        let p = self.p();
        let n = self.dim();
        let total = BigUint::from(p).pow(n as u32);
        let mut idx = BigUint::zero();
        std::iter::from_fn(move || {
            if idx >= total {
                return None;
            }
            let mut rest = idx.clone();
            let mut coeffs = Vec::with_capacity(n);
            for _ in 0..n {
                let digit = &rest % p;
                coeffs.push(digit.to_u64_digits().first().copied().unwrap_or(0));
                rest /= p;
            }
            idx += BigUint::one();
            Some(TowerElement { level: self.level, coeffs })
        })
    }

    /// Human-readable form, e.g. `2*z0*z1+1`.
    pub fn format(&self, a: &TowerElement) -> String {
        let degs: Vec<usize> = (0..self.level).map(|i| self.tower.moduli[i].degree().unwrap()).collect();
        let mut terms = Vec::new();
        for (idx, &c) in a.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mut rest = idx;
            let mut mono = Vec::new();
            for (j, &d) in degs.iter().enumerate() {
                let ex = rest % d;
                rest /= d;
                match ex {
                    0 => {}
                    1 => mono.push(format!("z{j}")),
                    _ => mono.push(format!("z{j}^{ex}")),
                }
            }
            let term = match (c, mono.is_empty()) {
                (_, true) => c.to_string(),
                (1, false) => mono.join("*"),
                _ => format!("{c}*{}", mono.join("*")),
            };
            terms.push(term);
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }
}

impl fmt::Display for TowerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.len() == 1 {
            write!(f, "{}", self.coeffs[0])
        } else {
            write!(f, "{:?}", self.coeffs)
        }
    }
}
