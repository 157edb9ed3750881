//! Deterministic inputs for the factorization benchmarks.

use omval_core::{RatPoly, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Monic polynomial of degree `deg` with uniformly random 64-bit coefficients.
pub fn random_dense(deg: usize, seed: u64) -> RatPoly {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c: Vec<Rational> = (0..deg).map(|_| Rational::from_integer(rng.gen::<i64>().into())).collect();
    c.push(Rational::from_integer(1.into()));
    RatPoly::new(c)
}

/// Named inputs with deep residual structure at `p = 2`.
pub fn structured() -> Vec<(&'static str, RatPoly)> {
    [
        ("eisenstein_50", "x^50+2"),
        ("unramified_power_50", "(x^2+x+1)^25+2^40*(x^3+x+1)+2"),
        ("close_pair_48", "((x^2+2)*(x^2+2+2^30))^12+2^63*x+2^62"),
        ("depth_one_quartic", "x^4+2*x^3+3*x^2+2*x-1"),
    ]
    .into_iter()
    .map(|(name, s)| (name, RatPoly::parse(s).expect("benchmark inputs parse")))
    .collect()
}
