//! Exact coefficient fields for the whole toolkit.
//!
//! Every cohomology number in this crate is the rank of a matrix over one of
//! two fields: a prime field `F_p` (fast, the default) or the rationals
//! (slow, authoritative). The field is chosen once per session and threaded
//! through everything; elements never mix fields.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand_core::RngCore;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} out of range (need 2 < p < 2^31)")]
    ModulusRange(u64),
    #[error("cannot parse {0:?} as a field element")]
    Parse(String),
}

/// An exact field with the handful of operations the linear algebra needs.
///
/// Implementations carry their own context (the modulus for `PrimeField`),
/// so all methods take `&self`. `Elem` is required to be `Ord + Hash` so
/// that projective keys can be grouped and sorted deterministically.
pub trait Field: Clone + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Hash + Ord + Send + Sync + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` exactly for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, n: i64) -> Self::Elem;
    /// Uniform random element (for rationals: a uniform small integer).
    fn random(&self, rng: &mut dyn RngCore) -> Self::Elem;
    fn elem_to_string(&self, a: &Self::Elem) -> String;
    fn elem_from_str(&self, s: &str) -> Result<Self::Elem, FieldError>;
    /// `"65537"` or `"rational"`, recorded in every report.
    fn describe(&self) -> String;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// Invert many elements with a single field inversion (Montgomery's
    /// trick). Zero entries come back as `None`.
    fn batch_inv(&self, xs: &[Self::Elem]) -> Vec<Option<Self::Elem>> {
        let n = xs.len();
        let mut out: Vec<Option<Self::Elem>> = vec![None; n];
        // prefix[k] = product of the first k nonzero entries
        let mut prefix = Vec::with_capacity(n + 1);
        prefix.push(self.one());
        for x in xs {
            let last = prefix.last().unwrap().clone();
            if self.is_zero(x) {
                prefix.push(last);
            } else {
                prefix.push(self.mul(&last, x));
            }
        }
        let mut acc = match self.inv(prefix.last().unwrap()) {
            Some(v) => v,
            None => return out, // all inputs zero
        };
        for k in (0..n).rev() {
            if !self.is_zero(&xs[k]) {
                out[k] = Some(self.mul(&acc, &prefix[k]));
                acc = self.mul(&acc, &xs[k]);
            }
        }
        out
    }
}

/// `F_p` for an odd prime `p < 2^31`. Elements are canonical `u64`
/// representatives in `[0, p)`; products fit in `u64` and are reduced with a
/// precomputed Barrett constant.
#[derive(Clone, Copy, Debug)]
pub struct PrimeField {
    p: u64,
    barrett: u64, // floor(2^64 / p)
}

pub const DEFAULT_PRIME: u64 = 65537;

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = 37u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p <= 2 || p >= (1 << 31) {
            return Err(FieldError::ModulusRange(p));
        }
        if !is_prime_u64(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField {
            p,
            barrett: (u128::MAX / p as u128) as u64, // == floor(2^64/p): p is odd, never a power of 2
        })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline(always)]
    fn reduce_product(&self, x: u64) -> u64 {
        // x < 2^62; q <= floor(x/p), off by at most a few units.
        let q = ((x as u128 * self.barrett as u128) >> 64) as u64;
        let mut r = x - q * self.p;
        while r >= self.p {
            r -= self.p;
        }
        r
    }
}

impl Field for PrimeField {
    type Elem = u64;

    #[inline(always)]
    fn zero(&self) -> u64 {
        0
    }
    #[inline(always)]
    fn one(&self) -> u64 {
        1
    }
    #[inline(always)]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    #[inline(always)]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline(always)]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline(always)]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.reduce_product(a * b)
    }
    #[inline(always)]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // extended Euclid on (a, p)
        let (mut r0, mut r1) = (*a as i128, self.p as i128);
        let (mut s0, mut s1) = (1i128, 0i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        let p = self.p as i128;
        Some((((s0 % p) + p) % p) as u64)
    }

    fn from_i64(&self, n: i64) -> u64 {
        let p = self.p as i64;
        (((n % p) + p) % p) as u64
    }

    fn random(&self, rng: &mut dyn RngCore) -> u64 {
        // rejection sampling for exact uniformity
        let bound = u64::MAX - u64::MAX % self.p;
        loop {
            let x = rng.next_u64();
            if x < bound {
                return x % self.p;
            }
        }
    }

    fn elem_to_string(&self, a: &u64) -> String {
        a.to_string()
    }

    fn elem_from_str(&self, s: &str) -> Result<u64, FieldError> {
        let v: i64 = s.parse().map_err(|_| FieldError::Parse(s.to_string()))?;
        Ok(self.from_i64(v))
    }

    fn describe(&self) -> String {
        self.p.to_string()
    }
}

/// Exact rational arithmetic. Much slower than `F_p`, but characteristic
/// zero on the nose; used as the authoritative fallback.
#[derive(Clone, Copy, Debug, Default)]
pub struct RationalField;

/// Numerator range for `RationalField::random`. Random "rational" points are
/// drawn as uniform integers in `[0, 2^20)`; any finite pool realizes generic
/// position for the finitely many closed conditions in play.
const RATIONAL_RANDOM_BOUND: u64 = 1 << 20;

impl Field for RationalField {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn random(&self, rng: &mut dyn RngCore) -> BigRational {
        let x = rng.next_u64() % RATIONAL_RANDOM_BOUND;
        BigRational::from_integer(BigInt::from(x))
    }
    fn elem_to_string(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn elem_from_str(&self, s: &str) -> Result<BigRational, FieldError> {
        let parse_int =
            |t: &str| t.parse::<BigInt>().map_err(|_| FieldError::Parse(s.to_string()));
        match s.split_once('/') {
            Some((n, d)) => {
                let d = parse_int(d)?;
                if d.is_zero() {
                    return Err(FieldError::Parse(s.to_string()));
                }
                Ok(BigRational::new(parse_int(n)?, d))
            }
            None => Ok(BigRational::from_integer(parse_int(s)?)),
        }
    }
    fn describe(&self) -> String {
        "rational".to_string()
    }
}
