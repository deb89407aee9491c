//! Seeded instance generation.
//!
//! Every generator is ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded through
//! `SeedableRng::seed_from_u64`, whose output stream is fixed across
//! platforms, so a seed always reproduces the same instance.

use num_traits::{One, Signed, ToPrimitive};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::symmetrization::WordSpec;
use crate::weyl::{Monomial, MultiIndex, Polynomial, WeylElement};

pub type InstanceRng = ChaCha8Rng;

pub fn rng(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Nonzero rational with numerator in `[-9, 9]` and denominator in `{1, 2, 3, 4}`.
pub fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    let mut num = rng.gen_range(-9..=9i64);
    while num == 0 {
        num = rng.gen_range(-9..=9i64);
    }
    rational::frac(num, rng.gen_range(1..=4i64))
}

/// Validated inclusion probability in `[0, 1]`, sampled exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Density {
    num: u64,
    den: u64,
}

impl Density {
    pub fn new(p: &Rational) -> Result<Self> {
        if p.is_negative() || p > &Rational::one() {
            return Err(Error::BadDensity(rational::to_string(p)));
        }
        let num = p.numer().to_u64();
        let den = p.denom().to_u64();
        match (num, den) {
            (Some(num), Some(den)) => Ok(Density { num, den }),
            _ => Err(Error::BadDensity(rational::to_string(p))),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> bool {
        if self.num == 0 {
            return false;
        }
        if self.num == self.den {
            return true;
        }
        rng.gen_range(0..self.den) < self.num
    }
}

impl Default for Density {
    fn default() -> Self {
        Density { num: 1, den: 2 }
    }
}

pub fn random_word<R: Rng>(rng: &mut R, n: usize, k: usize) -> Result<WordSpec> {
    let letters = (0..k).map(|_| rng.gen_range(0..n)).collect();
    WordSpec::new(n, letters)
}

fn random_multi_index<R: Rng>(rng: &mut R, n: usize, max_degree: u32) -> MultiIndex {
    let degree = rng.gen_range(0..=max_degree);
    let mut v = vec![0u32; n];
    for _ in 0..degree {
        v[rng.gen_range(0..n)] += 1;
    }
    MultiIndex::from_vec(v)
}

/// Sparse element with at most `terms` terms, x- and ∂-degree bounded.
pub fn random_element<R: Rng>(
    rng: &mut R,
    n: usize,
    max_x: u32,
    max_d: u32,
    terms: usize,
) -> WeylElement {
    let count = rng.gen_range(1..=terms.max(1));
    let pairs: Vec<(Monomial, Rational)> = (0..count)
        .map(|_| {
            let m = Monomial::new(random_multi_index(rng, n, max_x), random_multi_index(rng, n, max_d));
            (m, small_rational(rng))
        })
        .collect();
    WeylElement::from_terms(n, pairs).expect("dimensions agree")
}

/// Polynomial with at most `terms` terms of degree `≤ max_degree`.
pub fn random_polynomial<R: Rng>(rng: &mut R, n: usize, max_degree: u32, terms: usize) -> Polynomial {
    let count = rng.gen_range(1..=terms.max(1));
    let pairs: Vec<(MultiIndex, Rational)> = (0..count)
        .map(|_| (random_multi_index(rng, n, max_degree), small_rational(rng)))
        .collect();
    let p = Polynomial::from_terms(n, pairs).expect("dimensions agree");
    if p.is_zero() {
        Polynomial::one(n)
    } else {
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use num_traits::Zero;

    #[test]
    fn density_bounds() {
        assert!(Density::new(&frac(3, 2)).is_err());
        assert!(Density::new(&frac(-1, 2)).is_err());
        let zero = Density::new(&Rational::zero()).unwrap();
        let one = Density::new(&Rational::one()).unwrap();
        let mut r = rng(1);
        assert!((0..50).all(|_| !zero.sample(&mut r)));
        assert!((0..50).all(|_| one.sample(&mut r)));
    }

    #[test]
    fn small_rationals_in_range() {
        let mut r = rng(3);
        for _ in 0..200 {
            let q = small_rational(&mut r);
            assert!(!q.is_zero());
            assert!(q.numer().abs() <= 9.into());
            assert!(q.denom() <= &4.into());
        }
    }

    #[test]
    fn seeded_streams_repeat() {
        let a = random_element(&mut rng(9), 3, 3, 3, 6);
        let b = random_element(&mut rng(9), 3, 3, 3, 6);
        assert_eq!(a, b);
    }
}
