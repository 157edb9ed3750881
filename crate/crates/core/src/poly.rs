//! Dense univariate polynomials over `Q` and their text format.
//!
//! Grammar: integers and fractions `a/b`, the variable `x`, `+ - * ^`, and
//! parentheses. Multiplication is always explicit (`2*x`, not `2x`).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{Prime, ResidueTower, TowerPoly};
use crate::error::{Error, Result};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

impl RatPoly {
    /// Builds a polynomial from coefficients, constant term first.
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        RatPoly::new(coeffs.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect())
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        RatPoly::constant(Rational::one())
    }

    pub fn x() -> Self {
        RatPoly::from_ints(&[0, 1])
    }

    pub fn constant(c: Rational) -> Self {
        RatPoly::new(vec![c])
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = Rational::one();
        RatPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with `deg 0 = 0`; convenient where zero is handled separately.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn scale(&self, c: &Rational) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> RatPoly {
        match self.leading() {
            None => self.clone(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: usize) -> RatPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        RatPoly { coeffs }
    }

    pub fn pow(&self, e: usize) -> RatPoly {
        let mut result = RatPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Euclidean division; panics if `g` is zero.
    pub fn divrem(&self, g: &RatPoly) -> (RatPoly, RatPoly) {
        let dg = g.degree().expect("division by the zero polynomial");
        if self.coeffs.len() <= dg {
            return (RatPoly::zero(), self.clone());
        }
        let lc = g.leading().unwrap();
        let monic = lc.is_one();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); rem.len() - dg];
        for k in (0..quot.len()).rev() {
            let top = &rem[k + dg];
            if top.is_zero() {
                continue;
            }
            let t = if monic { top.clone() } else { top / lc };
            for (i, c) in g.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    rem[k + i] -= &t * c;
                }
            }
            quot[k] = t;
        }
        rem.truncate(dg);
        (RatPoly::new(quot), RatPoly::new(rem))
    }

    pub fn rem(&self, g: &RatPoly) -> RatPoly {
        self.divrem(g).1
    }

    /// Quotient when `g` is known to divide `self`.
    pub fn div_exact(&self, g: &RatPoly) -> Result<RatPoly> {
        let (q, r) = self.divrem(g);
        if !r.is_zero() {
            return Err(Error::internal("inexact polynomial division"));
        }
        Ok(q)
    }

    /// Monic gcd over `Q`.
    pub fn gcd(&self, g: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (self.clone(), g.clone());
        while !b.is_zero() {
            // keep the remainder sequence monic to slow coefficient growth
            let r = a.rem(&b).monic();
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Whether the polynomial has no repeated factor over `Q`.
    ///
    /// A coprime reduction of `f` and `f'` modulo one large prime settles the
    /// common case; otherwise the exact gcd decides.
    pub fn is_squarefree(&self) -> bool {
        let Some(n) = self.degree() else { return false };
        if n == 0 {
            return true;
        }
        let df = self.derivative();
        for p in [2_147_483_647u64, 2_147_483_629, 2_147_483_587] {
            let prime = Prime::new(p).expect("hardcoded prime");
            let tower = ResidueTower::new(prime);
            if let (Some(a), Some(b)) = (self.reduce_mod(prime, &tower), df.reduce_mod(prime, &tower)) {
                if a.degree() == Some(n) && b.degree() == Some(n - 1) {
                    let k = tower.field(0);
                    if k.poly_gcd(&a, &b).degree() == Some(0) {
                        return true;
                    }
                }
            }
        }
        self.gcd(&df).degree() == Some(0)
    }

    /// Coefficientwise reduction into `F_p[y]`; `None` if some coefficient is
    /// not p-integral.
    pub fn reduce_mod(&self, p: Prime, tower: &ResidueTower) -> Option<TowerPoly> {
        let k = tower.field(0);
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| p.reduce(c).map(|r| k.from_u64(r)))
            .collect::<Option<Vec<_>>>()?;
        Some(k.poly(coeffs))
    }

    /// Expansion `f = Σ a_s φ^s` with `deg a_s < deg φ`, for monic `φ` of
    /// positive degree.
    pub fn expand(&self, phi: &RatPoly) -> Vec<RatPoly> {
        debug_assert!(phi.deg() > 0 && phi.is_monic());
        if phi.degree() == Some(1) && phi.coeffs[0].is_zero() {
            return self.coeffs.iter().map(|c| RatPoly::constant(c.clone())).collect();
        }
        let mut out = Vec::new();
        let mut cur = self.clone();
        while !cur.is_zero() {
            let (q, r) = cur.divrem(phi);
            out.push(r);
            cur = q;
        }
        out
    }

    /// Inverse of [`RatPoly::expand`].
    pub fn from_expansion(parts: &[RatPoly], phi: &RatPoly) -> RatPoly {
        let mut acc = RatPoly::zero();
        for a in parts.iter().rev() {
            acc = &(&acc * phi) + a;
        }
        acc
    }

    /// Maximum bit length over numerators and denominators.
    pub fn height_bits(&self) -> u64 {
        self.coeffs
            .iter()
            .map(|c| c.numer().abs().bits().max(c.denom().bits()))
            .max()
            .unwrap_or(0)
    }

    /// Parses the textual grammar described in the module docs.
    pub fn parse(s: &str) -> Result<RatPoly> {
        let mut p = Parser { src: s.as_bytes(), pos: 0, text: s };
        p.skip_ws();
        if p.peek().is_none() {
            return Err(p.error("empty polynomial"));
        }
        let e = p.expr()?;
        p.skip_ws();
        if let Some(c) = p.peek() {
            return Err(p.error(&format!("unexpected character {:?}", c as char)));
        }
        Ok(e)
    }
}

impl std::str::FromStr for RatPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<RatPoly> {
        RatPoly::parse(s)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    text: &'a str,
}

const MAX_EXPONENT: u64 = 100_000;

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        let before = &self.text[..self.pos.min(self.text.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.len() - before.rfind('\n').map(|i| i + 1).unwrap_or(0) + 1;
        Error::Parse { line, column, message: message.to_string() }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn expr(&mut self) -> Result<RatPoly> {
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatPoly> {
        let mut acc = self.unary()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(c) if c == b'x' || c == b'(' || c.is_ascii_digit() => {
                    return Err(self.error("missing '*' (multiplication must be explicit)"));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RatPoly> {
        self.skip_ws();
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatPoly> {
        let base = self.atom()?;
        self.skip_ws();
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        let digits = self.digits();
        if digits.is_empty() {
            return Err(self.error("expected a non-negative integer exponent"));
        }
        let e: u64 = digits.parse().unwrap_or(u64::MAX);
        if e > MAX_EXPONENT {
            self.pos = start;
            return Err(self.error("exponent too large"));
        }
        Ok(base.pow(e as usize))
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        &self.text[start..self.pos]
    }

    fn atom(&mut self) -> Result<RatPoly> {
        self.skip_ws();
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok(RatPoly::x())
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.skip_ws();
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num: BigInt = self.digits().parse().expect("digits");
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let at = self.pos;
                    let den = self.digits();
                    if den.is_empty() {
                        return Err(self.error("expected a denominator after '/'"));
                    }
                    let den: BigInt = den.parse().expect("digits");
                    if den.is_zero() {
                        self.pos = at;
                        return Err(self.error("zero denominator"));
                    }
                    return Ok(RatPoly::constant(Rational::new(num, den)));
                }
                Ok(RatPoly::constant(Rational::from_integer(num)))
            }
            Some(c) => Err(self.error(&format!("unexpected character {:?}", c as char))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if neg {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            let a = c.abs();
            let var = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            if i == 0 {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{a}*{var}")?;
            }
        }
        Ok(())
    }
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        RatPoly::new(out)
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for RatPoly {
            type Output = RatPoly;
            fn $m(self, rhs: RatPoly) -> RatPoly {
                (&self).$m(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);
