//! Factorization over the fields of a residue tower: square-free
//! decomposition, distinct-degree splitting, then randomized equal-degree
//! splitting with a generator seeded from the input.

use num_bigint::BigUint;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::tower::{ResidueTower, TowerField};
use super::tpoly::TowerPoly;
use crate::error::{Error, Result};

/// Factors `g` into monic irreducibles with multiplicities.
///
/// The leading coefficient is dropped. Factors come sorted by degree, then by
/// their coefficient vectors read from the constant term upwards, so the
/// output does not depend on the random choices made while splitting.
pub fn ff_factor(tower: &ResidueTower, g: &TowerPoly) -> Result<Vec<(TowerPoly, usize)>> {
    ff_factor_seeded(tower, g, 0)
}

/// [`ff_factor`] with an extra salt mixed into the generator seed.
pub fn ff_factor_seeded(tower: &ResidueTower, g: &TowerPoly, salt: u64) -> Result<Vec<(TowerPoly, usize)>> {
    if g.is_zero() {
        return Err(Error::invalid("cannot factor the zero polynomial"));
    }
    if g.level() > tower.top() {
        return Err(Error::internal("polynomial lives above the tower top"));
    }
    let k = tower.field(g.level());
    let mut rng = ChaCha8Rng::seed_from_u64(seed_for(g, salt));
    let mut out = Vec::new();
    for (sf, mult) in squarefree_decomposition(&k, &k.poly_monic(g)) {
        for (part, d) in distinct_degree(&k, &sf) {
            for fac in equal_degree(&k, &part, d, &mut rng) {
                out.push((fac, mult));
            }
        }
    }
    out.sort_by(|(a, _), (b, _)| a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// Whether a polynomial over the top field of `tower` is irreducible.
pub fn is_irreducible(tower: &ResidueTower, f: &TowerPoly) -> bool {
    let k = tower.field(f.level());
    let Some(d) = f.degree() else { return false };
    if d == 0 {
        return false;
    }
    let f = k.poly_monic(f);
    let g = k.poly_gcd(&f, &k.poly_derivative(&f));
    if g.degree() != Some(0) {
        return false;
    }
    let parts = distinct_degree(&k, &f);
    parts.len() == 1 && parts[0].1 == d
}

fn seed_for(g: &TowerPoly, salt: u64) -> u64 {
    const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = FNV_OFFSET;
    let mut feed = |x: u64| {
        for b in x.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(FNV_PRIME);
        }
    };
    feed(salt);
    feed(g.level() as u64);
    for c in g.coeffs() {
        for &x in c.coords() {
            feed(x);
        }
    }
    h
}

fn is_one_poly(f: &TowerPoly) -> bool {
    f.degree() == Some(0)
}

/// Square-free decomposition of a monic polynomial: pairs `(g_i, i)` with
/// `f = ∏ g_i^i` and every `g_i` square-free.
fn squarefree_decomposition(k: &TowerField<'_>, f: &TowerPoly) -> Vec<(TowerPoly, usize)> {
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let p = k.p() as usize;
    let c0 = k.poly_gcd(f, &k.poly_derivative(f));
    let mut w = k.poly_divrem(f, &c0).0;
    let mut c = c0;
    let mut i = 1;
    while !is_one_poly(&w) {
        let y = k.poly_gcd(&w, &c);
        let fac = k.poly_divrem(&w, &y).0;
        if !is_one_poly(&fac) {
            out.push((k.poly_monic(&fac), i));
        }
        c = k.poly_divrem(&c, &y).0;
        w = y;
        i += 1;
    }
    if !is_one_poly(&c) {
        let root = pth_root(k, &c);
        for (g, m) in squarefree_decomposition(k, &root) {
            out.push((g, m * p));
        }
    }
    out
}

/// `g` with `g^p = f`, for `f` whose exponents are all multiples of `p`.
fn pth_root(k: &TowerField<'_>, f: &TowerPoly) -> TowerPoly {
    let p = k.p() as usize;
    // a^{1/p} = a^{p^{n-1}} in a field with p^n elements
    let e = BigUint::from(k.p()).pow(k.dim() as u32 - 1);
    let coeffs = f.coeffs().iter().step_by(p).map(|a| k.pow(a, &e)).collect();
    k.poly(coeffs)
}

/// Splits a square-free monic polynomial into products of irreducibles of
/// equal degree, returned as `(product, degree)`.
fn distinct_degree(k: &TowerField<'_>, f: &TowerPoly) -> Vec<(TowerPoly, usize)> {
    let q = k.order();
    let mut out = Vec::new();
    let mut rest = f.clone();
    let y = k.poly_y();
    let mut h = k.poly_rem(&y, &rest);
    let mut d = 0;
    while rest.degree().unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = k.poly_powmod(&h, &q, &rest);
        let g = k.poly_gcd(&rest, &k.poly_sub(&h, &y));
        if !is_one_poly(&g) {
            rest = k.poly_divrem(&rest, &g).0;
            h = k.poly_rem(&h, &rest);
            out.push((g, d));
        }
    }
    if let Some(n) = rest.degree() {
        if n > 0 {
            out.push((rest, n));
        }
    }
    out
}

fn random_poly(k: &TowerField<'_>, below: usize, rng: &mut ChaCha8Rng) -> TowerPoly {
    k.poly((0..below).map(|_| k.random(rng)).collect())
}

/// Splits a product of distinct irreducibles of degree `d`.
fn equal_degree(k: &TowerField<'_>, f: &TowerPoly, d: usize, rng: &mut ChaCha8Rng) -> Vec<TowerPoly> {
    let n = f.degree().unwrap();
    if n == d {
        return vec![k.poly_monic(f)];
    }
    let q = k.order();
    let odd = k.p() != 2;
    loop {
        let a = random_poly(k, n, rng);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if odd {
            let e = (q.pow(d as u32) - BigUint::one()) / 2u32;
            k.poly_sub(&k.poly_powmod(&a, &e, f), &k.poly_const(k.one()))
        } else {
            // absolute trace to F_2: sum of a^{2^i}, i < [k:F_2]·d
            let bits = k.dim() * d;
            let mut acc = k.poly_rem(&a, f);
            let mut t = acc.clone();
            for _ in 1..bits {
                t = k.poly_rem(&k.poly_mul(&t, &t), f);
                acc = k.poly_add(&acc, &t);
            }
            acc
        };
        let g = k.poly_gcd(f, &b);
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let h = k.poly_divrem(f, &g).0;
            let mut out = equal_degree(k, &g, d, rng);
            out.extend(equal_degree(k, &h, d, rng));
            return out;
        }
    }
}
