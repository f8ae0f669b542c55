//! Bounded searches for lattice elements of prescribed absolute norm.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive};

use crate::cyclo::CycElt;
use crate::error::{Error, Result};

/// Leaves visited before a search gives up.
pub const DEFAULT_BUDGET: u64 = 40_000_000;
pub const MAX_HEIGHT: i64 = 8;

/// Finds the first x = Σ cᵢ·basisᵢ with |norm_abs(x)| = target, ordered by
/// max |cᵢ| and then lexicographically from −h to h.
pub fn find_by_norm(basis: &[CycElt], target: &BigInt, budget: u64) -> Result<Option<CycElt>> {
    let t = target.abs().to_f64().unwrap_or(f64::INFINITY);
    let emb: Vec<Vec<Complex64>> = basis.iter().map(CycElt::embeddings_f64).collect();
    let mut s = Search {
        basis,
        emb,
        target: target.abs(),
        t,
        leaves: 0,
        budget,
        coeffs: vec![0; basis.len()],
    };
    for h in 1..=MAX_HEIGHT {
        let m = s.emb.first().map_or(0, Vec::len);
        let start = vec![Complex64::new(0.0, 0.0); m];
        if let Some(x) = s.dfs(0, h, false, &start)? {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

struct Search<'a> {
    basis: &'a [CycElt],
    emb: Vec<Vec<Complex64>>,
    target: BigInt,
    t: f64,
    leaves: u64,
    budget: u64,
    coeffs: Vec<i64>,
}

impl Search<'_> {
    fn dfs(&mut self, depth: usize, h: i64, hit: bool, sums: &[Complex64]) -> Result<Option<CycElt>> {
        if depth == self.basis.len() {
            if !hit {
                return Ok(None);
            }
            self.leaves += 1;
            if self.leaves > self.budget {
                return Err(Error::Resource(format!(
                    "norm search exhausted {} candidates at coordinate height {h}",
                    self.budget
                )));
            }
            let approx: f64 = sums.iter().map(|z| z.norm_sqr()).product();
            if (approx - self.t).abs() > 1e-6 * self.t.max(1.0) {
                return Ok(None);
            }
            return Ok(self.check_exact());
        }
        let remaining = self.basis.len() - depth - 1;
        for c in -h..=h {
            let hit2 = hit || c.abs() == h;
            if !hit2 && remaining == 0 {
                continue;
            }
            self.coeffs[depth] = c;
            let next: Vec<Complex64> = sums
                .iter()
                .zip(&self.emb[depth])
                .map(|(s, e)| s + e * c as f64)
                .collect();
            if let Some(x) = self.dfs(depth + 1, h, hit2, &next)? {
                return Ok(Some(x));
            }
        }
        Ok(None)
    }

    fn check_exact(&self) -> Option<CycElt> {
        let p = self.basis[0].p();
        let mut x = CycElt::zero(p);
        for (c, b) in self.coeffs.iter().zip(self.basis) {
            if *c != 0 {
                x = &x + &b.scale_int(&BigInt::from(*c));
            }
        }
        if x.is_zero() {
            return None;
        }
        let n = x.norm_abs();
        (n.is_integer() && n.numer().abs() == self.target).then_some(x)
    }
}

/// {1, θ₁, …, θ_(m−1)} with θᵢ = ξ^i + ξ^(−i): a ℤ-basis of the real subring.
pub fn real_integral_basis(p: usize) -> Vec<CycElt> {
    let m = (p - 1) / 2;
    let mut out = vec![CycElt::one(p)];
    for i in 1..m {
        out.push(&CycElt::xi_pow(p, i as i64) + &CycElt::xi_pow(p, -(i as i64)));
    }
    out
}

pub fn power_basis(p: usize) -> Vec<CycElt> {
    (0..p - 1).map(|i| CycElt::xi_pow(p, i as i64)).collect()
}
