//! Decomposition of the primes dividing n in ℤ[ξ] and ℤ[ξ + ξ⁻¹].

use serde::{Deserialize, Serialize};

use crate::cyclo::check_odd_prime;
use crate::error::{usage, Result};
use crate::localization::{is_prime, Localization};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitKind {
    Inert,
    Split,
    Ramified,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitRecord {
    pub q: u64,
    /// Residue degree in ℚ(ξ); 1 for the ramified prime.
    pub f: u64,
    pub kind: SplitKind,
    /// Primes of the real subring over q.
    pub count: u64,
}

impl SplitRecord {
    /// Residue degree of each real prime over q.
    pub fn effective_degree(&self) -> u64 {
        match self.kind {
            SplitKind::Inert => self.f / 2,
            SplitKind::Split | SplitKind::Ramified => self.f,
        }
    }

    /// Primes of ℤ[ξ] over q.
    pub fn full_count(&self) -> u64 {
        match self.kind {
            SplitKind::Split => 2 * self.count,
            _ => self.count,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSummary {
    pub p: u64,
    pub n: i64,
    pub tau: u64,
    pub sigma: u64,
    pub p_divides_n: bool,
    pub records: Vec<SplitRecord>,
}

/// Multiplicative order of q modulo p.
pub fn residue_degree(q: u64, p: u64) -> Result<u64> {
    check_odd_prime(p as usize)?;
    if !is_prime(q) {
        return usage(format!("{q} is not prime"));
    }
    if q == p {
        return usage(format!("{q} is the ramified prime; use classify_prime"));
    }
    let mut x = q % p;
    let mut f = 1;
    while x != 1 {
        x = x * (q % p) % p;
        f += 1;
    }
    Ok(f)
}

pub fn classify_prime(q: u64, p: u64) -> Result<SplitRecord> {
    check_odd_prime(p as usize)?;
    if !is_prime(q) {
        return usage(format!("{q} is not prime"));
    }
    if q == p {
        return Ok(SplitRecord {
            q,
            f: 1,
            kind: SplitKind::Ramified,
            count: 1,
        });
    }
    let f = residue_degree(q, p)?;
    Ok(if f % 2 == 0 {
        SplitRecord {
            q,
            f,
            kind: SplitKind::Inert,
            count: (p - 1) / f,
        }
    } else {
        SplitRecord {
            q,
            f,
            kind: SplitKind::Split,
            count: (p - 1) / (2 * f),
        }
    })
}

pub fn split_summary(p: u64, n: i64) -> Result<SplitSummary> {
    check_odd_prime(p as usize)?;
    let loc = Localization::new(n)?;
    let records = loc
        .primes()
        .iter()
        .map(|&q| classify_prime(q, p))
        .collect::<Result<Vec<_>>>()?;
    let sum = |k: SplitKind| records.iter().filter(|r| r.kind == k).map(|r| r.count).sum();
    Ok(SplitSummary {
        p,
        n,
        tau: sum(SplitKind::Inert),
        sigma: sum(SplitKind::Split),
        p_divides_n: loc.inverts(p),
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees() {
        assert_eq!(residue_degree(2, 3).unwrap(), 2);
        assert_eq!(residue_degree(2, 7).unwrap(), 3);
        assert_eq!(residue_degree(3, 7).unwrap(), 6);
        assert!(residue_degree(7, 7).is_err());
        assert!(residue_degree(4, 7).is_err());
    }

    #[test]
    fn records() {
        let r = classify_prime(2, 3).unwrap();
        assert_eq!((r.f, r.kind, r.count), (2, SplitKind::Inert, 1));
        let r = classify_prime(2, 7).unwrap();
        assert_eq!((r.f, r.kind, r.count), (3, SplitKind::Split, 1));
        let r = classify_prime(7, 7).unwrap();
        assert_eq!((r.kind, r.count), (SplitKind::Ramified, 1));
    }

    #[test]
    fn summaries() {
        let s = split_summary(3, 1).unwrap();
        assert_eq!((s.tau, s.sigma, s.records.len()), (0, 0, 0));
        let s = split_summary(7, 6).unwrap();
        assert_eq!((s.tau, s.sigma), (1, 1));
        let s = split_summary(5, 2).unwrap();
        assert_eq!((s.tau, s.sigma), (1, 0));
        assert!(split_summary(5, 0).is_err());
        assert!(split_summary(3, 3).unwrap().p_divides_n);
    }
}
