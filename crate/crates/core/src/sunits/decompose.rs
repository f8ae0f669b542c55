//! Unit decomposition: exact valuations for the prime part, a high-precision
//! log-embedding solve for the unit part, exact verification of the result.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Decomposition, SUnitBasis};
use crate::cyclo::CycElt;
use crate::error::{domain, Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;

/// Starting precision in bits; `SPTORSION_PRECISION_BITS` overrides.
pub fn start_precision() -> usize {
    std::env::var("SPTORSION_PRECISION_BITS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .map(|b| b.clamp(64, 1 << 16))
        .unwrap_or(128)
}

struct LogTable {
    /// cos and sin of 2πt/p for t = 0..p.
    cos: Vec<BigFloat>,
    sin: Vec<BigFloat>,
}

fn consts() -> Consts {
    Consts::new().expect("astro-float constants")
}

fn table(p: usize, bits: usize) -> Arc<LogTable> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<LogTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().unwrap().get(&(p, bits)) {
        return t.clone();
    }
    let mut cc = consts();
    let two_pi = cc.pi(bits, RM).mul(&BigFloat::from_u64(2, bits), bits, RM);
    let step = two_pi.div(&BigFloat::from_u64(p as u64, bits), bits, RM);
    let mut cos = Vec::with_capacity(p);
    let mut sin = Vec::with_capacity(p);
    for t in 0..p {
        let a = step.mul(&BigFloat::from_u64(t as u64, bits), bits, RM);
        cos.push(a.cos(bits, RM, &mut cc));
        sin.push(a.sin(bits, RM, &mut cc));
    }
    let t = Arc::new(LogTable { cos, sin });
    cache.lock().unwrap().insert((p, bits), t.clone());
    t
}

fn to_bf(x: &BigInt, bits: usize, cc: &mut Consts) -> BigFloat {
    BigFloat::parse(&x.to_string(), Radix::Dec, bits, RM, cc)
}

/// ln|σ_k(x)|² for k = 1..=count, x integral and nonzero.
fn log_embeddings(x: &CycElt, count: usize, bits: usize, cc: &mut Consts) -> Vec<BigFloat> {
    let p = x.p();
    let t = table(p, bits);
    let coeffs: Vec<BigFloat> = x.numerators().iter().map(|c| to_bf(c, bits, cc)).collect();
    (1..=count)
        .map(|k| {
            let mut re = BigFloat::from_u64(0, bits);
            let mut im = BigFloat::from_u64(0, bits);
            for (i, c) in coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let idx = (i * k) % p;
                re = re.add(&c.mul(&t.cos[idx], bits, RM), bits, RM);
                im = im.add(&c.mul(&t.sin[idx], bits, RM), bits, RM);
            }
            let r2 = re
                .mul(&re, bits, RM)
                .add(&im.mul(&im, bits, RM), bits, RM);
            r2.ln(bits, RM, cc)
        })
        .collect()
}

/// Solves A e = b by Gaussian elimination with partial pivoting.
fn solve(mut a: Vec<Vec<BigFloat>>, mut b: Vec<BigFloat>, bits: usize) -> Option<Vec<BigFloat>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| {
            a[i][col]
                .abs()
                .partial_cmp(&a[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[piv][col].is_zero() {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col].div(&a[col][col], bits, RM);
            for c in col..n {
                let v = a[r][c].sub(&f.mul(&a[col][c], bits, RM), bits, RM);
                a[r][c] = v;
            }
            b[r] = b[r].sub(&f.mul(&b[col], bits, RM), bits, RM);
        }
    }
    let mut x = vec![BigFloat::from_u64(0, bits); n];
    for r in (0..n).rev() {
        let mut s = b[r].clone();
        for c in r + 1..n {
            s = s.sub(&a[r][c].mul(&x[c], bits, RM), bits, RM);
        }
        x[r] = s.div(&a[r][r], bits, RM);
    }
    Some(x)
}

/// Nearest integer, or `None` when the value is not within 1/4 of one.
fn near_integer(x: &BigFloat, cc: &mut Consts) -> Option<i64> {
    let s = x.format(Radix::Dec, RM, cc).ok()?;
    let v: f64 = s.replace(".e", ".0e").parse().ok()?;
    if !v.is_finite() || v.abs() > 1e15 {
        return None;
    }
    let r = v.round();
    ((v - r).abs() < 0.25).then_some(r as i64)
}

pub(crate) type LogMatrix = Arc<Vec<Vec<BigFloat>>>;

impl SUnitBasis {
    /// Writes a unit as torsion^e₀ · Π gᵢ^eᵢ, verified exactly.
    pub fn decompose(&self, u: &CycElt) -> Result<Decomposition> {
        if u.p() != self.p {
            return Err(Error::Usage("element from a different field".into()));
        }
        if !u.is_unit(&self.loc) {
            return domain(format!("{u} is not a unit of the ring"));
        }
        if self.field == super::Field::Real && !u.is_real() {
            return domain(format!("{u} is not real"));
        }
        let mut exponents = vec![0i64; self.gens.len()];
        let x = u.scale_int(u.denominator());
        let d = u.denominator().clone();
        let mut w = u.clone();
        for (i, pd) in self.prime_data.iter().enumerate() {
            let Some(pd) = pd else { continue };
            let mut v = 0i64;
            let mut y = x.clone();
            loop {
                let z = &y * &pd.inverse;
                if !z.is_integral() {
                    break;
                }
                y = z;
                v += 1;
            }
            let mut dd = d.clone();
            let q = BigInt::from(pd.q);
            let mut vd = 0i64;
            while (&dd % &q).is_zero() {
                dd /= &q;
                vd += 1;
            }
            let e = v - pd.ramification * vd;
            exponents[i] = e;
            if e != 0 {
                w = &w * &self.power(i, -e);
            }
        }
        if !w.is_integral() || !w.norm_abs().abs().is_one() {
            return Err(Error::Internal(format!(
                "prime part of {u} not captured by the basis; remainder {w}"
            )));
        }
        let units: Vec<usize> = (0..self.gens.len())
            .filter(|&i| self.prime_data[i].is_none())
            .collect();
        let start = start_precision();
        for bits in [start, 2 * start, 4 * start] {
            if let Some((torsion, exps)) = self.solve_unit_part(&w, &units, bits) {
                for (i, e) in units.iter().zip(exps) {
                    exponents[*i] = e;
                }
                return Ok(Decomposition { torsion, exponents });
            }
        }
        Err(Error::Internal(format!(
            "unit part of {u} could not be expressed in the basis up to {} bits",
            4 * start
        )))
    }

    fn solve_unit_part(&self, w: &CycElt, units: &[usize], bits: usize) -> Option<(u64, Vec<i64>)> {
        let r = units.len();
        let exps = if r == 0 {
            Vec::new()
        } else {
            let mut cc = consts();
            let a = self.unit_logs(units, bits, &mut cc);
            let a = a.as_ref().clone();
            let b = log_embeddings(w, r, bits, &mut cc);
            let sol = solve(a, b, bits)?;
            sol.iter()
                .map(|x| near_integer(x, &mut cc))
                .collect::<Option<Vec<i64>>>()?
        };
        let mut t = w.clone();
        for (&i, &e) in units.iter().zip(&exps) {
            if e != 0 {
                t = &t * &self.power(i, -e);
            }
        }
        let s = self.torsion_index(&t)?;
        Some((s, exps))
    }

    fn unit_logs(&self, units: &[usize], bits: usize, cc: &mut Consts) -> LogMatrix {
        if let Some(m) = self.log_cache.lock().unwrap().get(&bits) {
            return m.clone();
        }
        let r = units.len();
        let cols: Vec<Vec<BigFloat>> = units
            .iter()
            .map(|&i| log_embeddings(&self.gens[i].value, r, bits, cc))
            .collect();
        let a: LogMatrix = Arc::new((0..r).map(|k| (0..r).map(|j| cols[j][k].clone()).collect()).collect());
        self.log_cache.lock().unwrap().insert(bits, a.clone());
        a
    }

    /// gᵢ^e for any integer e.
    pub(crate) fn power(&self, i: usize, e: i64) -> CycElt {
        if e >= 0 {
            self.gens[i].value.pow(e as u64)
        } else {
            self.inverses[i].pow(e.unsigned_abs())
        }
    }

    /// s with torsion^s = t, if t is torsion.
    fn torsion_index(&self, t: &CycElt) -> Option<u64> {
        self.torsion_powers.iter().position(|x| x == t).map(|s| s as u64)
    }

    /// Rebuilds the unit from a decomposition.
    pub fn compose(&self, d: &Decomposition) -> CycElt {
        let mut x = self.torsion.pow(d.torsion.mod_floor(&self.torsion_order));
        for (i, &e) in d.exponents.iter().enumerate() {
            if e != 0 {
                x = &x * &self.power(i, e);
            }
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_detection() {
        let mut cc = consts();
        let x = BigFloat::from_i64(-7, 128).add(
            &BigFloat::from_i64(1, 128).div(&BigFloat::from_i64(1000, 128), 128, RM),
            128,
            RM,
        );
        assert_eq!(near_integer(&x, &mut cc), Some(-7));
        let y = BigFloat::from_i64(1, 128).div(&BigFloat::from_i64(2, 128), 128, RM);
        assert_eq!(near_integer(&y, &mut cc), None);
        assert_eq!(near_integer(&BigFloat::from_i64(-1, 128), &mut cc), Some(-1));
    }

    #[test]
    fn log_of_one_is_zero() {
        let mut cc = consts();
        let l = log_embeddings(&CycElt::one(7), 3, 128, &mut cc);
        for v in l {
            assert!(v.abs().cmp(&BigFloat::from_f64(1e-30, 128)).unwrap_or(0) < 0);
        }
    }
}
