//! Exact arithmetic in ℚ(ξ_p) on the power basis {1, ξ, …, ξ^(p−2)}.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, usage, Result};
use crate::localization::{format_rational, is_prime, parse_rational, Localization};

pub fn check_odd_prime(p: usize) -> Result<()> {
    if p < 3 || !is_prime(p as u64) {
        return usage(format!("p = {p} is not an odd prime"));
    }
    Ok(())
}

/// An element of ℚ(ξ_p): integer numerators over one positive common denominator.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CycElt {
    p: usize,
    num: Vec<BigInt>,
    den: BigInt,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
}

/// Checked ring operation; mismatched fields are a usage error.
pub fn arithmetic(x: &CycElt, y: &CycElt, op: Op) -> Result<CycElt> {
    if x.p != y.p {
        return usage(format!("elements of Q(xi_{}) and Q(xi_{}) mixed", x.p, y.p));
    }
    Ok(match op {
        Op::Add => x + y,
        Op::Sub => x - y,
        Op::Mul => x * y,
    })
}

/// Result of [`CycElt::invert_in`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inverse {
    pub value: CycElt,
    /// The inverse has n-smooth denominators.
    pub in_ring: bool,
}

impl CycElt {
    fn build(p: usize, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        debug_assert_eq!(num.len(), p - 1);
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -&*c;
            }
        }
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if num.iter().all(Zero::is_zero) {
            den = BigInt::one();
        } else if !g.is_one() {
            den /= &g;
            for c in num.iter_mut() {
                *c /= &g;
            }
        }
        CycElt { p, num, den }
    }

    /// Reduces a length-p vector on {1, …, ξ^(p−1)} using ξ^(p−1) = −(1 + … + ξ^(p−2)).
    fn from_cyclic(p: usize, mut acc: Vec<BigInt>, den: BigInt) -> Self {
        let top = acc.pop().expect("length p");
        if !top.is_zero() {
            for c in acc.iter_mut() {
                *c -= &top;
            }
        }
        Self::build(p, acc, den)
    }

    pub fn zero(p: usize) -> Self {
        CycElt {
            p,
            num: vec![BigInt::zero(); p - 1],
            den: BigInt::one(),
        }
    }

    pub fn one(p: usize) -> Self {
        Self::from_int(p, 1)
    }

    pub fn from_int(p: usize, v: i64) -> Self {
        Self::from_bigint(p, BigInt::from(v))
    }

    pub fn from_bigint(p: usize, v: BigInt) -> Self {
        let mut num = vec![BigInt::zero(); p - 1];
        num[0] = v;
        CycElt {
            p,
            num,
            den: BigInt::one(),
        }
    }

    pub fn from_rational(p: usize, r: &BigRational) -> Self {
        let mut num = vec![BigInt::zero(); p - 1];
        num[0] = r.numer().clone();
        Self::build(p, num, r.denom().clone())
    }

    /// ξ^k for any integer k.
    pub fn xi_pow(p: usize, k: i64) -> Self {
        let e = k.rem_euclid(p as i64) as usize;
        let mut acc = vec![BigInt::zero(); p];
        acc[e] = BigInt::one();
        Self::from_cyclic(p, acc, BigInt::one())
    }

    pub fn xi(p: usize) -> Self {
        Self::xi_pow(p, 1)
    }

    pub fn from_int_coords(p: usize, coords: &[i64]) -> Result<Self> {
        if coords.len() != p - 1 {
            return usage(format!("expected {} coordinates, got {}", p - 1, coords.len()));
        }
        Ok(Self::build(
            p,
            coords.iter().map(|&c| BigInt::from(c)).collect(),
            BigInt::one(),
        ))
    }

    pub fn from_bigint_coords(p: usize, coords: Vec<BigInt>) -> Result<Self> {
        if coords.len() != p - 1 {
            return usage(format!("expected {} coordinates, got {}", p - 1, coords.len()));
        }
        Ok(Self::build(p, coords, BigInt::one()))
    }

    pub fn from_coords(p: usize, coords: &[BigRational]) -> Result<Self> {
        if coords.len() != p - 1 {
            return usage(format!("expected {} coordinates, got {}", p - 1, coords.len()));
        }
        let mut den = BigInt::one();
        for c in coords {
            den = den.lcm(c.denom());
        }
        let num = coords
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Ok(Self::build(p, num, den))
    }

    /// Any length ≥ 1 vector on {1, ξ, ξ², …}; exponents are taken mod p.
    pub fn from_poly(p: usize, coeffs: &[BigRational]) -> Self {
        let mut den = BigInt::one();
        for c in coeffs {
            den = den.lcm(c.denom());
        }
        let mut acc = vec![BigInt::zero(); p];
        for (i, c) in coeffs.iter().enumerate() {
            acc[i % p] += c.numer() * (&den / c.denom());
        }
        Self::from_cyclic(p, acc, den)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn coords(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn coord(&self, i: usize) -> BigRational {
        BigRational::new(self.num[i].clone(), self.den.clone())
    }

    /// Integer numerators relative to [`CycElt::denominator`].
    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// The rational value if the element lies in ℚ.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    /// Max of the absolute numerators and the common denominator.
    pub fn height(&self) -> BigInt {
        let m = self.num.iter().map(|c| c.abs()).max().unwrap_or_default();
        m.max(self.den.clone())
    }

    pub fn in_ring(&self, loc: &Localization) -> bool {
        loc.is_smooth(&self.den)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self::build(
            self.p,
            self.num.iter().map(|c| c * r.numer()).collect(),
            &self.den * r.denom(),
        )
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        Self::build(self.p, self.num.iter().map(|c| c * k).collect(), self.den.clone())
    }

    /// γ_k: ξ ↦ ξ^k. Any k prime to p is accepted.
    pub fn galois(&self, k: i64) -> Self {
        let p = self.p;
        let k = k.rem_euclid(p as i64) as usize;
        assert!(k != 0, "Galois index must be prime to p");
        let mut acc = vec![BigInt::zero(); p];
        for (i, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                acc[(i * k) % p] += c;
            }
        }
        Self::from_cyclic(p, acc, self.den.clone())
    }

    pub fn conj(&self) -> Self {
        self.galois(self.p as i64 - 1)
    }

    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// Σ over all embeddings.
    pub fn trace(&self) -> BigRational {
        let p = BigInt::from(self.p);
        let s: BigInt = self.num.iter().sum();
        BigRational::new(&p * &self.num[0] - s, self.den.clone())
    }

    /// x · conj(x).
    pub fn norm_real(&self) -> Self {
        self * &self.conj()
    }

    /// Product of all conjugates.
    pub fn norm_abs(&self) -> BigRational {
        let r = self.norm_real();
        let m = (self.p - 1) / 2;
        let mut acc = r.clone();
        for k in 2..=m {
            acc = &acc * &r.galois(k as i64);
        }
        acc.as_rational().expect("norm lies in Q")
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.p);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Inverse by the extended Euclidean algorithm against Φ_p.
    pub fn invert(&self) -> Result<Self> {
        if self.is_zero() {
            return domain("zero has no inverse");
        }
        let p = self.p;
        let a: Vec<BigRational> = self.coords();
        let phi: Vec<BigRational> = vec![BigRational::one(); p];
        let s = poly_inverse_mod(&a, &phi);
        Ok(Self::from_poly(p, &s))
    }

    pub fn invert_in(&self, loc: &Localization) -> Result<Inverse> {
        let value = self.invert()?;
        let in_ring = value.in_ring(loc) && self.in_ring(loc);
        Ok(Inverse { value, in_ring })
    }

    pub fn div(&self, other: &CycElt) -> Result<Self> {
        Ok(self * &other.invert()?)
    }

    /// Invertible in ℤ[1/n][ξ]. False when denominators are not n-smooth.
    pub fn is_unit(&self, loc: &Localization) -> bool {
        if self.is_zero() || !self.in_ring(loc) {
            return false;
        }
        loc.is_unit(&self.norm_abs())
    }

    /// Matrix of multiplication by self; row r holds the coordinates of self·ξ^r.
    pub fn mult_rows(&self) -> Vec<Vec<BigRational>> {
        let p = self.p;
        (0..p - 1)
            .map(|r| (self * &CycElt::xi_pow(p, r as i64)).coords())
            .collect()
    }

    /// Complex embeddings σ_k(x) for k = 1, …, (p−1)/2 in double precision.
    pub fn embeddings_f64(&self) -> Vec<Complex64> {
        let p = self.p;
        let d = self.den.to_f64().unwrap_or(f64::INFINITY);
        let coeffs: Vec<f64> = self
            .num
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN) / d)
            .collect();
        (1..=(p - 1) / 2)
            .map(|k| {
                let mut z = Complex64::new(0.0, 0.0);
                for (i, c) in coeffs.iter().enumerate() {
                    let t = 2.0 * std::f64::consts::PI * ((i * k) % p) as f64 / p as f64;
                    z += Complex64::from_polar(*c, t);
                }
                z
            })
            .collect()
    }

    /// Parses the comma-separated text form.
    pub fn parse(p: usize, s: &str) -> Result<Self> {
        let coords: Vec<BigRational> = s
            .split(',')
            .map(parse_rational)
            .collect::<Result<_>>()?;
        Self::from_coords(p, &coords)
    }
}

/// The different generator D = p·ξ^((p+1)/2)/(ξ−1).
pub fn different_generator(p: usize) -> CycElt {
    let xm1 = &CycElt::xi(p) - &CycElt::one(p);
    let inv = xm1.invert().expect("xi - 1 is nonzero");
    (&CycElt::xi_pow(p, p.div_ceil(2) as i64) * &inv).scale_int(&BigInt::from(p))
}

impl fmt::Display for CycElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords().iter().map(format_rational).collect();
        f.write_str(&parts.join(", "))
    }
}

impl<'a> Add<&'a CycElt> for &'a CycElt {
    type Output = CycElt;
    fn add(self, o: &CycElt) -> CycElt {
        assert_eq!(self.p, o.p, "mixed cyclotomic fields");
        if self.den == o.den {
            let num = self.num.iter().zip(&o.num).map(|(a, b)| a + b).collect();
            return CycElt::build(self.p, num, self.den.clone());
        }
        let num = self
            .num
            .iter()
            .zip(&o.num)
            .map(|(a, b)| a * &o.den + b * &self.den)
            .collect();
        CycElt::build(self.p, num, &self.den * &o.den)
    }
}

impl<'a> Sub<&'a CycElt> for &'a CycElt {
    type Output = CycElt;
    fn sub(self, o: &CycElt) -> CycElt {
        self + &(-o)
    }
}

impl Neg for &CycElt {
    type Output = CycElt;
    fn neg(self) -> CycElt {
        CycElt {
            p: self.p,
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl<'a> Mul<&'a CycElt> for &'a CycElt {
    type Output = CycElt;
    fn mul(self, o: &CycElt) -> CycElt {
        assert_eq!(self.p, o.p, "mixed cyclotomic fields");
        let p = self.p;
        let mut acc = vec![BigInt::zero(); p];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.num.iter().enumerate() {
                if !b.is_zero() {
                    acc[(i + j) % p] += a * b;
                }
            }
        }
        CycElt::from_cyclic(p, acc, &self.den * &o.den)
    }
}

// Dense polynomials over ℚ, lowest degree first, no trailing zeros.

fn trim(a: &mut Vec<BigRational>) {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = r.last().unwrap() / &lead;
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] -= &c * bc;
        }
        q[shift] = c;
        r.pop();
        trim(&mut r);
    }
    (q, r)
}

fn poly_sub_mul(a: &[BigRational], q: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(q.len() + b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, x) in q.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] -= x * y;
        }
    }
    trim(&mut out);
    out
}

/// s with s·a ≡ 1 mod m; a must be prime to m.
fn poly_inverse_mod(a: &[BigRational], m: &[BigRational]) -> Vec<BigRational> {
    let (_, mut r1) = poly_divrem(a, m);
    let mut r0 = m.to_vec();
    let mut s0: Vec<BigRational> = Vec::new();
    let mut s1 = vec![BigRational::one()];
    while r1.len() > 1 {
        let (q, r) = poly_divrem(&r0, &r1);
        let s = poly_sub_mul(&s0, &q, &s1);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    let c = r1[0].clone();
    s1.iter().map(|x| x / &c).collect()
}

/// Exact quotient test: does `b` divide `a` in ℤ[ξ]? Returns the quotient when it does.
pub fn divides_integrally(a: &CycElt, b: &CycElt) -> Option<CycElt> {
    let q = a.div(b).ok()?;
    if q.is_integral() {
        Some(q)
    } else {
        None
    }
}
