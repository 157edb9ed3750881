use std::fmt;

use num_bigint::BigUint;

use super::tower::{TowerElement, TowerField};

/// A univariate polynomial over one field of a residue tower, stored
/// low-degree first with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TowerPoly {
    level: usize,
    coeffs: Vec<TowerElement>,
}

impl TowerPoly {
    pub fn new(level: usize, mut coeffs: Vec<TowerElement>) -> Self {
        debug_assert!(coeffs.iter().all(|c| c.level() == level));
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        TowerPoly { level, coeffs }
    }

    pub fn zero(level: usize) -> Self {
        TowerPoly { level, coeffs: Vec::new() }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn coeffs(&self) -> &[TowerElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&TowerElement> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> Option<&TowerElement> {
        self.coeffs.get(i)
    }

    /// Largest `k` with `y^k` dividing the polynomial.
    pub fn lowest_nonzero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }
}

impl fmt::Display for TowerPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*y")?,
                _ => write!(f, "{c}*y^{i}")?,
            }
        }
        Ok(())
    }
}

impl<'a> TowerField<'a> {
    pub fn poly(&self, coeffs: Vec<TowerElement>) -> TowerPoly {
        TowerPoly::new(self.level(), coeffs)
    }

    /// The polynomial `y`.
    pub fn poly_y(&self) -> TowerPoly {
        self.poly(vec![self.zero(), self.one()])
    }

    pub fn poly_const(&self, c: TowerElement) -> TowerPoly {
        self.poly(vec![c])
    }

    /// Reads a polynomial with coefficients in a subfield as one over this field.
    pub fn poly_embed(&self, f: &TowerPoly) -> TowerPoly {
        self.poly(f.coeffs().iter().map(|c| self.embed(c)).collect())
    }

    pub fn poly_add(&self, f: &TowerPoly, g: &TowerPoly) -> TowerPoly {
        let n = f.coeffs.len().max(g.coeffs.len());
        let zero = self.zero();
        let coeffs = (0..n)
            .map(|i| self.add(f.coeffs.get(i).unwrap_or(&zero), g.coeffs.get(i).unwrap_or(&zero)))
            .collect();
        self.poly(coeffs)
    }

    pub fn poly_sub(&self, f: &TowerPoly, g: &TowerPoly) -> TowerPoly {
        let n = f.coeffs.len().max(g.coeffs.len());
        let zero = self.zero();
        let coeffs = (0..n)
            .map(|i| self.sub(f.coeffs.get(i).unwrap_or(&zero), g.coeffs.get(i).unwrap_or(&zero)))
            .collect();
        self.poly(coeffs)
    }

    pub fn poly_scale(&self, c: &TowerElement, f: &TowerPoly) -> TowerPoly {
        self.poly(f.coeffs.iter().map(|a| self.mul(c, a)).collect())
    }

    pub fn poly_mul(&self, f: &TowerPoly, g: &TowerPoly) -> TowerPoly {
        if f.is_zero() || g.is_zero() {
            return TowerPoly::zero(self.level());
        }
        let mut out = vec![self.zero(); f.coeffs.len() + g.coeffs.len() - 1];
        for (i, a) in f.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in g.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = self.add(&out[i + j], &self.mul(a, b));
                }
            }
        }
        self.poly(out)
    }

    /// Division with remainder; panics if `g` is zero.
    pub fn poly_divrem(&self, f: &TowerPoly, g: &TowerPoly) -> (TowerPoly, TowerPoly) {
        let dg = g.degree().expect("division by the zero polynomial");
        let lc_inv = self.inv(g.leading().unwrap()).unwrap();
        let mut rem = f.coeffs.clone();
        if rem.len() <= dg {
            return (TowerPoly::zero(self.level()), f.clone());
        }
        let mut quot = vec![self.zero(); rem.len() - dg];
        for k in (0..quot.len()).rev() {
            let t = self.mul(&rem[k + dg], &lc_inv);
            if t.is_zero() {
                continue;
            }
            for (i, c) in g.coeffs.iter().enumerate() {
                rem[k + i] = self.sub(&rem[k + i], &self.mul(&t, c));
            }
            quot[k] = t;
        }
        rem.truncate(dg);
        (self.poly(quot), self.poly(rem))
    }

    pub fn poly_rem(&self, f: &TowerPoly, g: &TowerPoly) -> TowerPoly {
        self.poly_divrem(f, g).1
    }

    pub fn poly_monic(&self, f: &TowerPoly) -> TowerPoly {
        match f.leading() {
            None => f.clone(),
            Some(lc) => self.poly_scale(&self.inv(lc).unwrap(), f),
        }
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn poly_gcd(&self, f: &TowerPoly, g: &TowerPoly) -> TowerPoly {
        let (mut a, mut b) = (f.clone(), g.clone());
        while !b.is_zero() {
            let r = self.poly_rem(&a, &b);
            a = b;
            b = r;
        }
        self.poly_monic(&a)
    }

    /// Returns `(g, s, t)` with `s f + t h = g`, `g` not normalized.
    pub fn poly_xgcd(&self, f: &TowerPoly, h: &TowerPoly) -> (TowerPoly, TowerPoly, TowerPoly) {
        let lvl = self.level();
        let (mut r0, mut r1) = (f.clone(), h.clone());
        let (mut s0, mut s1) = (self.poly_const(self.one()), TowerPoly::zero(lvl));
        let (mut t0, mut t1) = (TowerPoly::zero(lvl), self.poly_const(self.one()));
        while !r1.is_zero() {
            let (q, r) = self.poly_divrem(&r0, &r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = self.poly_sub(&s0, &self.poly_mul(&q, &s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = self.poly_sub(&t0, &self.poly_mul(&q, &t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        (r0, s0, t0)
    }

    pub fn poly_derivative(&self, f: &TowerPoly) -> TowerPoly {
        let coeffs = f.coeffs.iter().enumerate().skip(1).map(|(i, c)| self.scale(i as u64, c)).collect();
        self.poly(coeffs)
    }

    pub fn poly_eval(&self, f: &TowerPoly, x: &TowerElement) -> TowerElement {
        let mut acc = self.zero();
        for c in f.coeffs.iter().rev() {
            acc = self.add(&self.mul(&acc, x), c);
        }
        acc
    }

    /// `f^e mod m`.
    pub fn poly_powmod(&self, f: &TowerPoly, e: &BigUint, m: &TowerPoly) -> TowerPoly {
        let base = self.poly_rem(f, m);
        let mut result = self.poly_rem(&self.poly_const(self.one()), m);
        for i in (0..e.bits()).rev() {
            result = self.poly_rem(&self.poly_mul(&result, &result), m);
            if e.bit(i) {
                result = self.poly_rem(&self.poly_mul(&result, &base), m);
            }
        }
        result
    }

    pub fn poly_pow(&self, f: &TowerPoly, e: usize) -> TowerPoly {
        let mut result = self.poly_const(self.one());
        for _ in 0..e {
            result = self.poly_mul(&result, f);
        }
        result
    }

    /// Multiplicity of the root `0`, i.e. the `y`-adic order.
    pub fn poly_ord_y(&self, f: &TowerPoly) -> usize {
        f.lowest_nonzero().unwrap_or(usize::MAX)
    }

    /// Largest `k` with `g^k | f`, for nonconstant `g` and nonzero `f`.
    pub fn poly_multiplicity(&self, f: &TowerPoly, g: &TowerPoly) -> usize {
        let mut k = 0;
        let mut cur = f.clone();
        loop {
            let (q, r) = self.poly_divrem(&cur, g);
            if !r.is_zero() || cur.is_zero() {
                return k;
            }
            cur = q;
            k += 1;
        }
    }

    pub fn format_poly(&self, f: &TowerPoly) -> String {
        if f.is_zero() {
            return "0".to_string();
        }
        let mut terms = Vec::new();
        for (i, c) in f.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = self.format(c);
            let simple = !cs.contains('+');
            let coeff = if simple { cs } else { format!("({cs})") };
            terms.push(match (i, coeff.as_str()) {
                (0, _) => coeff,
                (1, "1") => "y".to_string(),
                (1, _) => format!("{coeff}*y"),
                (_, "1") => format!("y^{i}"),
                _ => format!("{coeff}*y^{i}"),
            });
        }
        terms.join("+")
    }
}
