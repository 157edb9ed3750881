use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::Rational;

/// A prime number small enough for residue arithmetic in `u64`.
///
/// Residue fields are represented with `u64` digits, so products of two
/// digits must fit; this caps the prime below `2^32`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Prime> {
        if p >= 1 << 32 {
            return Err(Error::invalid(format!("prime {p} is too large (must be < 2^32)")));
        }
        if !is_prime_u64(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.0)
    }

    /// p-adic valuation of a nonzero integer.
    pub fn int_valuation(self, n: &BigInt) -> Option<i64> {
        if n.is_zero() {
            return None;
        }
        let p = self.to_bigint();
        let mut v = 0i64;
        let mut m = n.clone();
        loop {
            let (q, r) = m.div_rem(&p);
            if !r.is_zero() {
                return Some(v);
            }
            m = q;
            v += 1;
        }
    }

    /// p-adic valuation of a rational; `None` stands for the value of zero.
    pub fn valuation(self, x: &Rational) -> Option<i64> {
        if x.is_zero() {
            return None;
        }
        Some(self.int_valuation(x.numer())? - self.int_valuation(x.denom())?)
    }

    /// Residue of `x / p^{v(x)}` in `F_p`. Panics on zero.
    pub fn unit_residue(self, x: &Rational) -> u64 {
        let p = self.to_bigint();
        let strip = |n: &BigInt| {
            let mut m = n.clone();
            loop {
                let (q, r) = m.div_rem(&p);
                if !r.is_zero() {
                    return m;
                }
                m = q;
            }
        };
        let num = strip(x.numer()).mod_floor(&p).to_u64().expect("residue fits");
        let den = strip(x.denom()).mod_floor(&p).to_u64().expect("residue fits");
        mul_mod(num, pow_mod(den, self.0 - 2, self.0), self.0)
    }

    /// Reduction of a p-integral rational modulo `p`.
    pub fn reduce(self, x: &Rational) -> Option<u64> {
        let p = self.to_bigint();
        if x.denom().mod_floor(&p).is_zero() {
            return None;
        }
        let num = x.numer().mod_floor(&p).to_u64().expect("residue fits");
        let den = x.denom().mod_floor(&p).to_u64().expect("residue fits");
        Some(mul_mod(num, pow_mod(den, self.0 - 2, self.0), self.0))
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// p-adic valuation of a rational number; `val_p(0) = ∞`.
pub fn val_p(x: &Rational, p: u64) -> Result<ExtRational> {
    let p = Prime::new(p)?;
    Ok(match p.valuation(x) {
        None => ExtRational::Infinity,
        Some(v) => ExtRational::from(v),
    })
}

/// `⌈a / b⌉` for `b > 0`.
pub fn ceil_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    -(-a).div_euclid(b)
}

/// Parses `"3"`, `"-7/2"` and the like into a reduced rational.
pub fn rational_from_str(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::invalid(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        None => Ok(Rational::from_integer(s.parse::<BigInt>().map_err(|_| bad())?)),
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::invalid("zero denominator"));
            }
            Ok(Rational::new(n, d))
        }
    }
}

/// Element of `Q ∪ {∞}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtRational {
    Finite(Rational),
    Infinity,
}

impl ExtRational {
    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtRational::Infinity)
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtRational::Finite(q) => Some(q),
            ExtRational::Infinity => None,
        }
    }

    /// Unwraps a finite value, reporting an internal error for `∞`.
    pub fn expect_finite(self, what: &str) -> Result<Rational> {
        match self {
            ExtRational::Finite(q) => Ok(q),
            ExtRational::Infinity => Err(Error::internal(format!("{what}: unexpected infinite value"))),
        }
    }
}

impl From<Rational> for ExtRational {
    fn from(q: Rational) -> Self {
        ExtRational::Finite(q)
    }
}

impl From<i64> for ExtRational {
    fn from(v: i64) -> Self {
        ExtRational::Finite(Rational::from_integer(BigInt::from(v)))
    }
}

impl PartialOrd for ExtRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRational::Infinity, ExtRational::Infinity) => Ordering::Equal,
            (ExtRational::Infinity, _) => Ordering::Greater,
            (_, ExtRational::Infinity) => Ordering::Less,
            (ExtRational::Finite(a), ExtRational::Finite(b)) => a.cmp(b),
        }
    }
}

impl Add for ExtRational {
    type Output = ExtRational;
    fn add(self, rhs: ExtRational) -> ExtRational {
        match (self, rhs) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => ExtRational::Finite(a + b),
            _ => ExtRational::Infinity,
        }
    }
}

impl<'a> Add<&'a Rational> for ExtRational {
    type Output = ExtRational;
    fn add(self, rhs: &'a Rational) -> ExtRational {
        match self {
            ExtRational::Finite(a) => ExtRational::Finite(a + rhs),
            ExtRational::Infinity => ExtRational::Infinity,
        }
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::Finite(q) => write!(f, "{q}"),
            ExtRational::Infinity => write!(f, "inf"),
        }
    }
}
