//! The scalar ring ℤ[1/n] and exact rational helpers.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{usage, Error, Result};

/// Distinct prime factors of `n`, ascending. Trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && prime_factors(n) == [n]
}

/// ℤ[1/n] described by the primes of rad(n).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Localization {
    n: i64,
    primes: Vec<u64>,
}

impl Localization {
    pub fn new(n: i64) -> Result<Self> {
        if n == 0 {
            return usage("n must be nonzero");
        }
        Ok(Localization {
            n,
            primes: prime_factors(n.unsigned_abs()),
        })
    }

    /// The integers, ℤ[1/1].
    pub fn integers() -> Self {
        Localization {
            n: 1,
            primes: Vec::new(),
        }
    }

    /// The value of n as supplied.
    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn radical(&self) -> u64 {
        self.primes.iter().product()
    }

    pub fn inverts(&self, q: u64) -> bool {
        self.primes.contains(&q)
    }

    /// Splits |x| (x ≠ 0) into its n-smooth and n-free parts.
    pub fn split(&self, x: &BigInt) -> (BigInt, BigInt) {
        let mut free = x.abs();
        let mut smooth = BigInt::one();
        for &q in &self.primes {
            let q = BigInt::from(q);
            while !free.is_zero() && (&free % &q).is_zero() {
                free /= &q;
                smooth *= &q;
            }
        }
        (smooth, free)
    }

    pub fn free_part(&self, x: &BigInt) -> BigInt {
        self.split(x).1
    }

    /// Nonzero and built only from primes dividing n.
    pub fn is_smooth(&self, x: &BigInt) -> bool {
        !x.is_zero() && self.free_part(x).is_one()
    }

    pub fn contains(&self, r: &BigRational) -> bool {
        self.is_smooth(r.denom())
    }

    pub fn is_unit(&self, r: &BigRational) -> bool {
        self.is_smooth(r.numer()) && self.is_smooth(r.denom())
    }

    /// Euclidean size on ℤ[1/n]: the n-free part of the numerator (0 for 0).
    pub fn height(&self, r: &BigRational) -> BigInt {
        if r.is_zero() {
            BigInt::zero()
        } else {
            self.free_part(r.numer())
        }
    }

    /// The unit s with s·r equal to the n-free part of r's numerator.
    pub fn normalizing_unit(&self, r: &BigRational) -> BigRational {
        let (smooth, _) = self.split(r.numer());
        let mut s = BigRational::new(r.denom().clone(), smooth);
        if r.is_negative() {
            s = -s;
        }
        s
    }

    /// Representative of r modulo d in [0, d), d a positive n-free integer.
    pub fn residue(&self, r: &BigRational, d: &BigInt) -> BigInt {
        if d.is_one() {
            return BigInt::zero();
        }
        let den = r.denom().mod_floor(d);
        let inv = mod_inverse(&den, d).expect("denominator coprime to an n-free modulus");
        (r.numer() * inv).mod_floor(d)
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rint(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Always written as `num/den`.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `a`, `a/b` and surrounding whitespace.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Usage(format!("malformed rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// An exact rational known to lie in ℤ[1/n].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NRational(BigRational);

impl NRational {
    pub fn new(value: BigRational, loc: &Localization) -> Result<Self> {
        if !loc.contains(&value) {
            return Err(Error::Domain(format!(
                "{} does not lie in Z[1/{}]",
                format_rational(&value),
                loc.n()
            )));
        }
        Ok(NRational(value))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn into_inner(self) -> BigRational {
        self.0
    }
}

impl fmt::Display for NRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}
