//! Shared generators, independent oracles and criterion checks for the
//! integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use omval_core::{
    equal_valuations, grading_order, invariants_and_frame, is_irreducible, is_key, lambda_component, lift,
    newton_polygon, okutsu_equiv, om_factor, om_factor_with, phi_expansion, polygon_sum, principal_part,
    rational_from_str, residual_poly, value_of, ExtRational, FactorOptions, InductiveValuation, KeyCase, Prime,
    RatPoly, Rational, ResidueTower, TowerPoly,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Check = Result<(), String>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(s: &str) -> Rational {
    rational_from_str(s).unwrap()
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn poly(s: &str) -> RatPoly {
    RatPoly::parse(s).unwrap()
}

pub fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

/// `v_p` computed by repeated division, independent of the library.
pub fn vp(p: u64, x: &Rational) -> ExtRational {
    if x.is_zero() {
        return ExtRational::Infinity;
    }
    let pb = BigInt::from(p);
    let count = |mut n: BigInt| {
        let mut k = 0i64;
        while (&n % &pb).is_zero() {
            n /= &pb;
            k += 1;
        }
        k
    };
    ExtRational::Finite(int(count(x.numer().abs()) - count(x.denom().clone())))
}

pub fn finite(v: ExtRational) -> Rational {
    v.finite().cloned().expect("finite value")
}

/// Random integer in `[-bound, bound]`.
pub fn small(rng: &mut ChaCha8Rng, bound: i64) -> i64 {
    rng.gen_range(-bound..=bound)
}

pub fn random_int_poly(rng: &mut ChaCha8Rng, degs: RangeInclusive<usize>, bound: i64) -> RatPoly {
    let deg = rng.gen_range(degs);
    let mut c: Vec<Rational> = (0..=deg).map(|_| int(small(rng, bound))).collect();
    if c[deg].is_zero() {
        c[deg] = int(1);
    }
    RatPoly::new(c)
}

pub fn random_monic(rng: &mut ChaCha8Rng, degs: RangeInclusive<usize>, bound: i64) -> RatPoly {
    let deg = rng.gen_range(degs);
    let mut c: Vec<Rational> = (0..deg).map(|_| int(small(rng, bound))).collect();
    c.push(int(1));
    RatPoly::new(c)
}

/// A coefficient `p^k u` with a small unit `u` and `k` in `lo..=hi`.
fn scaled(rng: &mut ChaCha8Rng, p: u64, lo: i32, hi: i32) -> Rational {
    let k = rng.gen_range(lo..=hi);
    let mut u = rng.gen_range(1..=(3 * p as i64));
    while u % p as i64 == 0 {
        u += 1;
    }
    if rng.gen_bool(0.5) {
        u = -u;
    }
    let pk = Rational::from_integer(BigInt::from(p)).pow(k);
    int(u) * pk
}

/// Monic irreducible `ψ ≠ y` of degree `deg` over the top field of `tower`.
pub fn random_irreducible(rng: &mut ChaCha8Rng, tower: &ResidueTower, deg: usize) -> TowerPoly {
    let k = tower.field(tower.top());
    loop {
        let mut c: Vec<_> = (0..deg).map(|_| k.random(rng)).collect();
        c.push(k.one());
        let psi = k.poly(c);
        if psi != k.poly_y() && is_irreducible(tower, &psi) {
            return psi;
        }
    }
}

const SLOPES: [&str; 8] = ["0", "1/2", "1/3", "2/3", "1", "3/2", "2", "1/4"];

/// Random valuation of depth at most `max_depth` whose key polynomials have
/// degree at most `max_deg`.
pub fn random_chain(rng: &mut ChaCha8Rng, p: u64, max_depth: usize, max_deg: usize) -> InductiveValuation {
    let a = int(rng.gen_range(0..p as i64));
    let g0 = q(SLOPES[rng.gen_range(0..SLOPES.len())]);
    let mut mu = InductiveValuation::depth_zero(prime(p), a, g0);
    for _ in 0..max_depth {
        let m = mu.min_degree();
        let e = mu.e_rel() as usize;
        let max_psi = max_deg / (m * e);
        if max_psi == 0 || rng.gen_bool(0.25) {
            break;
        }
        let d = rng.gen_range(1..=max_psi.min(2));
        let psi = random_irreducible(rng, mu.tower(), d);
        let phi = lift(&mu, &psi).unwrap();
        let base = finite(mu.value(&phi));
        let step = Rational::new(BigInt::from(rng.gen_range(1..=3)), BigInt::from(rng.gen_range(1..=3)));
        mu = mu.augment(&phi, base + step).unwrap();
    }
    mu
}

/// Nonzero test polynomial: either plain with `p`-power coefficients, or a
/// short expansion in the top key polynomial of `mu`.
pub fn random_test_poly(rng: &mut ChaCha8Rng, mu: &InductiveValuation, max_deg: usize) -> RatPoly {
    let p = mu.prime().get();
    loop {
        let f = if rng.gen_bool(0.4) {
            let deg = rng.gen_range(0..=max_deg);
            RatPoly::new((0..=deg).map(|_| if rng.gen_bool(0.2) { int(0) } else { scaled(rng, p, -1, 4) }).collect())
        } else {
            let phi = mu.top().phi().clone();
            let m = phi.deg();
            let top = (max_deg / m).max(1);
            let len = rng.gen_range(1..=top.min(4));
            let parts: Vec<RatPoly> = (0..=len)
                .map(|_| {
                    if rng.gen_bool(0.3) {
                        return RatPoly::zero();
                    }
                    let d = rng.gen_range(0..m);
                    RatPoly::new((0..=d).map(|_| scaled(rng, p, 0, 4)).collect())
                })
                .collect();
            RatPoly::from_expansion(&parts, &phi)
        };
        if !f.is_zero() && f.deg() <= max_deg {
            return f;
        }
    }
}

/// Determinant by exact Gaussian elimination over `Q`.
pub fn determinant(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let pv = m[col][col].clone();
        det *= &pv;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &pv;
            let pivot_row = m[col].clone();
            for (x, y) in m[r].iter_mut().zip(&pivot_row).skip(col) {
                *x -= &factor * y;
            }
        }
    }
    det
}

/// Resultant via the Sylvester matrix.
pub fn resultant(f: &RatPoly, g: &RatPoly) -> Rational {
    let (m, n) = (f.deg(), g.deg());
    let size = m + n;
    if size == 0 {
        return Rational::one();
    }
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![Rational::zero(); size];
        for (j, c) in f.coeffs().iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![Rational::zero(); size];
        for (j, c) in g.coeffs().iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    determinant(rows)
}

/// Lower convex hull vertices by testing every point against every pair.
pub fn lower_hull_brute(points: &[(usize, Rational)]) -> Vec<(usize, Rational)> {
    let mut best: BTreeMap<usize, Rational> = BTreeMap::new();
    for (s, u) in points {
        best.entry(*s).and_modify(|v| if u < v { *v = u.clone() }).or_insert_with(|| u.clone());
    }
    let pts: Vec<(usize, Rational)> = best.into_iter().collect();
    let mut out = Vec::new();
    for (i, (s, u)) in pts.iter().enumerate() {
        let mut extreme = true;
        for (a, (sa, ua)) in pts.iter().enumerate() {
            for (b, (sb, ub)) in pts.iter().enumerate() {
                if a == i || b == i || sa >= s || sb <= s {
                    continue;
                }
                // height of segment ab over s
                let t = Rational::new(BigInt::from(s - sa), BigInt::from(sb - sa));
                let line = ua + (ub - ua) * t;
                if *u >= line {
                    extreme = false;
                }
            }
        }
        if extreme {
            out.push((*s, u.clone()));
        }
    }
    out
}

/// Cloud `(s, μ(a_s))` from the library's expansion and values.
pub fn cloud(mu: &InductiveValuation, phi: &RatPoly, f: &RatPoly) -> Vec<(usize, Rational)> {
    phi_expansion(f, phi)
        .unwrap()
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.is_zero())
        .map(|(s, a)| (s, finite(mu.value(a))))
        .collect()
}

/// A key polynomial for `mu`: the top one or a fresh lift.
pub fn random_key(rng: &mut ChaCha8Rng, mu: &InductiveValuation, max_deg: usize) -> RatPoly {
    let top = mu.top().phi().clone();
    let unit = mu.min_degree() * mu.e_rel() as usize;
    if rng.gen_bool(0.4) || unit > max_deg {
        return top;
    }
    let d = rng.gen_range(1..=(max_deg / unit).min(2));
    lift(mu, &random_irreducible(rng, mu.tower(), d)).unwrap()
}

pub const PRIMES: [u64; 3] = [2, 3, 5];

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Multiplicativity, ultrametric inequality and weight bound on a random
/// chain of depth at most 2.
pub fn check_valuation_axioms(seed: u64) -> Check {
    let mut r = rng(seed);
    let p = PRIMES[r.gen_range(0..3)];
    let mu = random_chain(&mut r, p, 2, 8);
    let f = random_test_poly(&mut r, &mu, 12);
    let g = random_test_poly(&mut r, &mu, 12);
    let (vf, vg) = (mu.value(&f), mu.value(&g));
    ensure(mu.value(&(&f * &g)) == vf.clone() + vg.clone(), || format!("μ(fg) ≠ μ(f)+μ(g) for f={f}, g={g}"))?;
    let sum = &f + &g;
    if !sum.is_zero() {
        let vs = mu.value(&sum);
        let lo = vf.clone().min(vg.clone());
        ensure(vs >= lo, || format!("ultrametric inequality fails for f={f}, g={g}"))?;
        if vf != vg {
            ensure(vs == lo, || format!("strict ultrametric equality fails for f={f}, g={g}"))?;
        }
    }
    let w = mu.weight();
    let m = random_monic(&mut r, 1..=12, 3 * p as i64);
    let vm = finite(mu.value(&m));
    ensure(vm / int(m.deg() as i64) <= w, || format!("weight bound fails for {m}"))
}

/// Augmenting leaves μ(f) unchanged exactly when the φ-component starts at 0.
pub fn check_monotone_augmentation(seed: u64) -> Check {
    let mut r = rng(seed);
    let p = PRIMES[r.gen_range(0..3)];
    let mu = random_chain(&mut r, p, 1, 6);
    let phi = random_key(&mut r, &mu, 8);
    let gamma = finite(mu.value(&phi)) + Rational::new(BigInt::from(r.gen_range(1..=4)), BigInt::from(r.gen_range(1..=3)));
    let next = mu.augment(&phi, gamma).map_err(|e| e.to_string())?;
    let f = random_test_poly(&mut r, &mu, 12);
    let f = if r.gen_bool(0.4) { &f * &phi } else { f };
    let (before, after) = (mu.value(&f), next.value(&f));
    ensure(after >= before, || format!("augmentation lowered μ({f})"))?;
    let n = newton_polygon(&mu, &phi, &f).unwrap();
    let comp = lambda_component(&n, &finite(mu.value(&phi))).unwrap();
    ensure((after == before) == (comp.s_start == 0), || format!("equality criterion fails for {f} at {phi}"))
}

/// Truncating below a level whose key polynomial does not divide `f` keeps μ(f).
pub fn check_stability(seed: u64) -> Check {
    let mut r = rng(seed);
    let p = PRIMES[r.gen_range(0..3)];
    let mu = random_chain(&mut r, p, 2, 8);
    let f = random_test_poly(&mut r, &mu, 12);
    for i in 1..=mu.depth() {
        let below = mu.truncated(i - 1);
        if grading_order(&below, mu.level(i).phi(), &f).unwrap() == 0 {
            let v = below.value(&f);
            for k in i..=mu.depth() {
                ensure(mu.truncated(k).value(&f) == v, || format!("value of {f} changes above level {i}"))?;
            }
            break;
        }
    }
    Ok(())
}

/// Principal parts add under multiplication; hull agrees with brute force.
pub fn check_newton(seed: u64) -> Check {
    let mut r = rng(seed);
    let p = PRIMES[r.gen_range(0..3)];
    let mu = random_chain(&mut r, p, 2, 8);
    let phi = random_key(&mut r, &mu, 8);
    let g = random_test_poly(&mut r, &mu, 12);
    let h = random_test_poly(&mut r, &mu, 12);
    let cutoff = finite(mu.value(&phi));
    let pp = |f: &RatPoly| principal_part(&newton_polygon(&mu, &phi, f).unwrap(), &cutoff);
    let gh = &g * &h;
    ensure(pp(&gh) == polygon_sum(&pp(&g), &pp(&h)), || format!("N^pp not additive for g={g}, h={h}, φ={phi}"))?;
    for f in [&g, &h, &gh] {
        let n = newton_polygon(&mu, &phi, f).unwrap();
        let pts = cloud(&mu, &phi, f);
        ensure(n.vertices() == lower_hull_brute(&pts).as_slice(), || format!("hull mismatch for {f}"))?;
        let slopes = n.slopes();
        ensure(slopes.windows(2).all(|w| w[0] < w[1]), || format!("slopes not increasing for {f}"))?;
        for (s, u) in &pts {
            let y = n.ordinate_at(*s).unwrap();
            ensure(*u >= y, || format!("cloud point below the polygon for {f}"))?;
        }
        let read = pts.iter().map(|(s, u)| u + &cutoff * int(*s as i64)).min().unwrap();
        ensure(ExtRational::Finite(read) == mu.value(f), || format!("μ({f}) differs from the polygon read-off"))?;
    }
    Ok(())
}

/// `R(gh) = R(g)R(h)`, `s(gh) = s(g)+s(h)`, `y ∤ R`.
pub fn check_residual_multiplicativity(seed: u64) -> Check {
    let mut r = rng(seed);
    let p = PRIMES[r.gen_range(0..3)];
    let mu = random_chain(&mut r, p, 2, 8);
    let g = random_test_poly(&mut r, &mu, 12);
    let h = random_test_poly(&mut r, &mu, 12);
    let k = mu.tower().field(mu.depth());
    let (rg, rh) = (residual_poly(&mu, &g).unwrap(), residual_poly(&mu, &h).unwrap());
    let rgh = residual_poly(&mu, &(&g * &h)).unwrap();
    ensure(rgh.r == k.poly_mul(&rg.r, &rh.r), || format!("R not multiplicative for g={g}, h={h}"))?;
    ensure(rgh.s == rg.s + rh.s, || format!("s not additive for g={g}, h={h}"))?;
    for res in [&rg, &rh, &rgh] {
        ensure(k.poly_ord_y(&res.r) == 0, || "y divides a residual polynomial".to_string())?;
    }
    Ok(())
}

/// `R(lift(ψ)) = ψ` with `s = 0`, and the lift is a key polynomial.
pub fn check_lift_roundtrip(seed: u64) -> Check {
    let mut r = rng(seed);
    let p = PRIMES[r.gen_range(0..3)];
    let mu = random_chain(&mut r, p, 2, 6);
    let unit = mu.min_degree() * mu.e_rel() as usize;
    let max_psi = if unit <= 4 { 4 } else { 2 };
    let d = r.gen_range(1..=max_psi);
    let psi = random_irreducible(&mut r, mu.tower(), d);
    let phi = lift(&mu, &psi).unwrap();
    let res = residual_poly(&mu, &phi).unwrap();
    ensure(res.r == psi && res.s == 0, || format!("round trip fails for {phi}"))?;
    ensure(phi.deg() == unit * d, || format!("lift {phi} has the wrong degree"))?;
    ensure(is_key(&mu, &phi).unwrap().is_key, || format!("lift {phi} is not key"))
}

/// Key-degree identity, fibre coherence and the mid=sim closure on
/// perturbations of a lift.
pub fn check_key_classes(seed: u64) -> Check {
    let mut r = rng(seed);
    let p = PRIMES[r.gen_range(0..3)];
    let mu = random_chain(&mut r, p, 2, 6);
    let d = r.gen_range(1..=2);
    let phi = lift(&mu, &random_irreducible(&mut r, mu.tower(), d)).unwrap();
    let vphi = finite(mu.value(&phi));
    // perturb by something of value at least μ(φ)
    let noise_deg = r.gen_range(0..phi.deg());
    let mut noise = RatPoly::new((0..=noise_deg).map(|_| scaled(&mut r, p, 0, 6)).collect());
    while mu.value(&noise) < ExtRational::Finite(vphi.clone()) {
        noise = noise.scale(&int(p as i64));
    }
    let other = &phi + &noise;
    let rep = is_key(&mu, &other).unwrap();
    if grading_order(&mu, &phi, &other).unwrap() >= 1 {
        ensure(rep.is_key, || format!("{other} is μ-divisible by the key {phi} but not key"))?;
    }
    if rep.is_key {
        if rep.case == KeyCase::ResidualIrreducible {
            let deg_r = residual_poly(&mu, &other).unwrap().r.degree().unwrap();
            ensure(other.deg() == mu.min_degree() * mu.e_rel() as usize * deg_r, || format!("degree identity fails for {other}"))?;
        }
        let same_r = residual_poly(&mu, &other).unwrap().r == residual_poly(&mu, &phi).unwrap().r;
        if same_r {
            ensure(mu.value(&(&other - &phi)) > mu.value(&phi), || format!("{other} and {phi} share R but are not μ-equivalent"))?;
        }
    }
    Ok(())
}

/// A prime polynomial of degree at most `max_deg` together with its single
/// leaf: a lift over a random chain, or a random monic that factors trivially.
pub fn random_prime_poly(rng: &mut ChaCha8Rng, p: u64, max_deg: usize) -> RatPoly {
    loop {
        let f = if rng.gen_bool(0.6) {
            let mu = random_chain(rng, p, 2, max_deg);
            let unit = mu.min_degree() * mu.e_rel() as usize;
            if unit > max_deg {
                continue;
            }
            let d = rng.gen_range(1..=(max_deg / unit).min(3));
            lift(&mu, &random_irreducible(rng, mu.tower(), d)).unwrap()
        } else {
            random_monic(rng, 2..=max_deg, 2 * p as i64)
        };
        if f.deg() < 2 || f.deg() > max_deg || !f.is_integral() || !f.is_squarefree() {
            continue;
        }
        if om_factor(&f, p).map(|l| l.len() == 1).unwrap_or(false) {
            return f;
        }
    }
}

/// `deg F · v_F(g) = v_p(Res(F, g))` for a prime `F` of degree at most 8.
pub fn check_resultant_oracle(seed: u64) -> Check {
    let mut r = rng(seed);
    let p = PRIMES[r.gen_range(0..3)];
    let f = random_prime_poly(&mut r, p, 8);
    let leaf = om_factor(&f, p).unwrap().remove(0);
    ensure(leaf.is_exact() && leaf.degree() == f.deg(), || format!("{f} did not give one exact leaf"))?;
    let g = loop {
        let g = if r.gen_bool(0.5) {
            random_int_poly(&mut r, 1..=6, 20)
        } else {
            // close to F so the value is large
            let k = r.gen_range(1..=8u32);
            let noise = random_int_poly(&mut r, 0..=f.deg() - 1, 5).scale(&int(p.pow(k) as i64));
            &f + &noise
        };
        if !g.is_zero() && !resultant(&f, &g).is_zero() {
            break g;
        }
    };
    let res = vp(p, &resultant(&f, &g));
    let v = value_of(&leaf, &g).unwrap();
    let scaled_v = finite(v) * int(f.deg() as i64);
    ensure(ExtRational::Finite(scaled_v.clone()) == res, || format!("deg·v_F(g) = {scaled_v} but v(Res) = {res} for F={f}, g={g}, p={p}"))
}

pub const FACTOR_PRIMES: [u64; 4] = [2, 3, 5, 7];

/// Degree conservation, `e·f = deg`, exact leaves divide `f`, and the summed
/// resultant identity `Σ deg F · v_F(g) = v_p(Res(f, g))`.
pub fn check_factorization(seed: u64) -> Check {
    let mut r = rng(seed);
    let p = FACTOR_PRIMES[r.gen_range(0..4)];
    let f = loop {
        let f = match r.gen_range(0..3) {
            0 => random_monic(&mut r, 1..=12, 30),
            1 => {
                let a = random_prime_poly(&mut r, p, 6);
                let k = r.gen_range(1..=6);
                let noise = random_int_poly(&mut r, 0..=a.deg() - 1, 3).scale(&int(p.pow(k) as i64));
                &a * &(&a + &noise)
            }
            _ => {
                let a = random_monic(&mut r, 1..=4, 4);
                let b = random_int_poly(&mut r, 0..=2 * a.deg() - 1, 4);
                &a.pow(2) + &b.scale(&int(p as i64 * small(&mut r, 3).max(1)))
            }
        };
        if f.deg() >= 1 && f.deg() <= 12 && f.is_squarefree() {
            break f;
        }
    };
    let leaves = om_factor(&f, p).map_err(|e| format!("{f} at p={p}: {e}"))?;
    let total: usize = leaves.iter().map(|l| l.degree()).sum();
    ensure(total == f.deg(), || format!("degrees sum to {total} for {f}"))?;
    for leaf in &leaves {
        ensure(leaf.e() * leaf.f() == leaf.degree() as u64, || format!("e·f ≠ deg for a leaf of {f}"))?;
        if leaf.is_exact() {
            ensure(f.rem(leaf.phi()).is_zero(), || format!("exact leaf {} does not divide {f}", leaf.phi()))?;
        }
        invariants_and_frame(leaf).map_err(|e| e.to_string())?;
    }
    let g = random_int_poly(&mut r, 1..=4, 10);
    let res = resultant(&f, &g);
    if !res.is_zero() {
        let mut sum = Rational::zero();
        for leaf in &leaves {
            sum += finite(value_of(leaf, &g).unwrap()) * int(leaf.degree() as i64);
        }
        ensure(ExtRational::Finite(sum.clone()) == vp(p, &res), || format!("Σ deg·v_F(g) = {sum} ≠ v(Res) for f={f}, g={g}, p={p}"))?;
    }
    let other = om_factor_with(&f, p, &FactorOptions { seed: seed ^ 0x5eed, ..Default::default() }).unwrap();
    let json = |ls: &[omval_core::OMLeaf]| ls.iter().map(|l| l.to_json()).collect::<Vec<_>>();
    ensure(json(&leaves) == json(&other), || format!("output depends on the seed for {f}"))
}

/// Eisenstein quadratics and cubics at `p`.
pub fn eisenstein_family(p: u64) -> Vec<RatPoly> {
    let pi = p as i64;
    let mut out = Vec::new();
    for a0 in [1, 2, 1 + pi, 2 + 3 * pi, -1, -1 + 2 * pi] {
        if a0 % pi == 0 {
            continue;
        }
        for a1 in [0, 1, 2, pi] {
            out.push(RatPoly::from_ints(&[pi * a0, pi * a1, 1]));
            out.push(RatPoly::from_ints(&[pi * a0, 0, pi * a1, 1]));
        }
    }
    out.sort_by_key(|a| a.to_string());
    out.dedup();
    out
}

/// Reflexivity, symmetry, invariant agreement and the resultant form
/// `v(Res(F, G)) > deg(F)^2 w(F)` on the Eisenstein family.
pub fn check_okutsu_family(p: u64) -> Result<usize, String> {
    let fam = eisenstein_family(p);
    let mut pairs = 0;
    for f in &fam {
        ensure(okutsu_equiv(f, f, p).unwrap(), || format!("{f} is not equivalent to itself"))?;
    }
    for (i, f) in fam.iter().enumerate() {
        for g in &fam[i + 1..] {
            let fg = okutsu_equiv(f, g, p).unwrap();
            ensure(fg == okutsu_equiv(g, f, p).unwrap(), || format!("asymmetric on {f}, {g}"))?;
            if f.deg() == g.deg() {
                let lf = om_factor(f, p).unwrap().remove(0);
                let bound = lf.invariants().weight.clone().unwrap() * int((f.deg() * f.deg()) as i64);
                let via_res = vp(p, &resultant(f, g)) > ExtRational::Finite(bound);
                ensure(fg == via_res, || format!("resultant form disagrees on {f}, {g}"))?;
                if fg {
                    let lg = om_factor(g, p).unwrap().remove(0);
                    let (a, b) = (lf.invariants(), lg.invariants());
                    ensure(
                        (a.e, a.f, a.depth, &a.slopes, &a.okutsu_bound, &a.weight)
                            == (b.e, b.f, b.depth, &b.slopes, &b.okutsu_bound, &b.weight),
                        || format!("equivalent {f}, {g} have different invariants"),
                    )?;
                    ensure(
                        equal_valuations(lf.valuation().unwrap(), lg.valuation().unwrap()),
                        || format!("equivalent {f}, {g} have different μ_F"),
                    )?;
                }
            } else {
                ensure(!fg, || format!("{f}, {g} of different degrees reported equivalent"))?;
            }
            pairs += 1;
        }
    }
    Ok(pairs)
}
