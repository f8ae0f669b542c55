//! Brute-force ground truth for p = 3, where Sp(2) = SL(2).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{usage, Result};
use crate::linalg::QMatrix;
use crate::localization::{format_rational, Localization};
use crate::pairs::{class_from_vector, count_classes};
use crate::sunits::UnitGroups;
use crate::symplectic::{invariant_of_matrix, matrix_from_pair, SympMatrix};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBound {
    height: u64,
}

impl SearchBound {
    pub fn new(height: u64) -> Result<Self> {
        if height == 0 {
            return usage("search height must be at least 1");
        }
        Ok(SearchBound { height })
    }

    pub fn height(&self) -> u64 {
        self.height
    }
}

/// a/b with b | n³, b ≤ h, |a| ≤ h, in lowest terms, ascending.
pub fn bounded_values(n: i64, bound: SearchBound) -> Result<Vec<BigRational>> {
    let loc = Localization::new(n)?;
    let h = bound.height as i64;
    let n3 = BigInt::from(loc.n().unsigned_abs()).pow(3);
    let dens: Vec<i64> = (1..=h).filter(|b| (&n3 % b).is_zero()).collect();
    let mut out = Vec::new();
    for &b in &dens {
        for a in -h..=h {
            if a.gcd(&b) == 1 || (a == 0 && b == 1) {
                out.push(BigRational::new(a.into(), b.into()));
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn check_p3(ms: &[&SympMatrix]) -> Result<()> {
    if ms.iter().any(|m| m.p() != 3) {
        return usage("the oracle only handles p = 3");
    }
    Ok(())
}

/// Every M in SL(2, ℤ[1/n]) of order 3 with entries in the bounded value set, lexicographic.
pub fn enumerate_order_p_sl2(n: i64, bound: SearchBound) -> Result<Vec<SympMatrix>> {
    let loc = Localization::new(n)?;
    let vals = bounded_values(n, bound)?;
    let allowed: std::collections::BTreeSet<&BigRational> = vals.iter().collect();
    let minus_one = -BigRational::one();
    let mut out = Vec::new();
    for m11 in &vals {
        let m22 = &minus_one - m11;
        if !allowed.contains(&m22) {
            continue;
        }
        for m12 in &vals {
            // m12 = 0 would force m11 to be a root of x² + x + 1
            if m12.is_zero() {
                continue;
            }
            let m21 = (m11 * &m22 - BigRational::one()) / m12;
            if !allowed.contains(&m21) {
                continue;
            }
            let q = QMatrix::from_rows(vec![vec![m11.clone(), m12.clone()], vec![m21, m22.clone()]]);
            out.push(SympMatrix::new(3, &loc, q)?);
        }
    }
    Ok(out)
}

/// Q with det Q = 1 and Q·M1 = M2·Q, entries in the bounded value set.
///
/// The solutions of Q·M1 = M2·Q form a plane; two coordinates that project
/// onto it isomorphically are enumerated and the other two solved for.
pub fn conjugator_search(m1: &SympMatrix, m2: &SympMatrix, bound: SearchBound) -> Result<Option<SympMatrix>> {
    check_p3(&[m1, m2])?;
    if m1 == m2 {
        return Ok(Some(SympMatrix::new(3, m1.localization(), QMatrix::identity(2))?));
    }
    let vals = bounded_values(m1.n(), bound)?;
    let basis = commutant_basis(m1.entries(), m2.entries());
    if basis.len() != 2 {
        return Ok(None);
    }
    let det2 = |i: usize, j: usize| &basis[0][i] * &basis[1][j] - &basis[0][j] * &basis[1][i];
    let (ci, cj) = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
        .into_iter()
        .find(|&(i, j)| !det2(i, j).is_zero())
        .expect("a rank-2 plane has an invertible 2x2 minor");
    let d = det2(ci, cj);
    let allowed: std::collections::BTreeSet<&BigRational> = vals.iter().collect();
    for x in &vals {
        for y in &vals {
            // s·b0 + t·b1 has coordinates (x, y) at (ci, cj)
            let s = (x * &basis[1][cj] - y * &basis[1][ci]) / &d;
            let t = (y * &basis[0][ci] - x * &basis[0][cj]) / &d;
            let q: Vec<BigRational> = (0..4).map(|k| &s * &basis[0][k] + &t * &basis[1][k]).collect();
            if !q.iter().all(|e| allowed.contains(e)) {
                continue;
            }
            if &q[0] * &q[3] - &q[1] * &q[2] != BigRational::one() {
                continue;
            }
            let qm = QMatrix::from_rows(vec![vec![q[0].clone(), q[1].clone()], vec![q[2].clone(), q[3].clone()]]);
            return Ok(Some(SympMatrix::new(3, m1.localization(), qm)?));
        }
    }
    Ok(None)
}

/// Basis of {Q : Q·A = B·Q} as flattened row-major 2×2 matrices.
fn commutant_basis(a: &QMatrix, b: &QMatrix) -> Vec<Vec<BigRational>> {
    // (Q·A − B·Q)_{rc} is linear in q = (q00, q01, q10, q11)
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for r in 0..2 {
        for c in 0..2 {
            let mut row = vec![BigRational::zero(); 4];
            for k in 0..2 {
                row[2 * r + k] += a.get(k, c);
                row[2 * k + c] -= b.get(r, k);
            }
            rows.push(row);
        }
    }
    rational_kernel(rows, 4)
}

fn rational_kernel(mut rows: Vec<Vec<BigRational>>, width: usize) -> Vec<Vec<BigRational>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, pr);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for k in 0..width {
                    let v = &f * &rows[r][k];
                    rows[i][k] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..width)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![BigRational::zero(); width];
            v[free] = BigRational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[i][free].clone();
            }
            v
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub class: String,
    pub representative: Vec<Vec<String>>,
    pub members: usize,
    /// Blocks left by the greedy conjugator search inside this invariant class.
    pub conjugacy_blocks: usize,
    /// The constructed matrix for this class has the same invariant.
    pub constructed_matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub n: i64,
    pub bound: u64,
    pub matrices_found: usize,
    pub invariant_classes_observed: usize,
    pub predicted_count: u128,
    /// No conjugator was found between matrices with different invariants.
    pub sound: bool,
    pub witnesses: Vec<Witness>,
}

fn matrix_strings(m: &SympMatrix) -> Vec<Vec<String>> {
    m.entries()
        .to_rows()
        .iter()
        .map(|r| r.iter().map(format_rational).collect())
        .collect()
}

/// Groups the matrices by invariant, then greedily by found conjugators.
pub fn partition_by_conjugacy(ug: &UnitGroups, matrices: &[SympMatrix], bound: SearchBound) -> Result<OracleReport> {
    if ug.p != 3 {
        return usage("the oracle only handles p = 3");
    }
    let mut groups: BTreeMap<String, Vec<&SympMatrix>> = BTreeMap::new();
    for m in matrices {
        let c = invariant_of_matrix(ug, m)?;
        groups.entry(c.normalized.to_string()).or_default().push(m);
    }
    let mut witnesses = Vec::new();
    for (class, members) in &groups {
        let mut blocks: Vec<&SympMatrix> = Vec::new();
        for &m in members {
            let mut placed = false;
            for &b in &blocks {
                if conjugator_search(b, m, bound)?.is_some() {
                    placed = true;
                    break;
                }
            }
            if !placed {
                blocks.push(m);
            }
        }
        let v = crate::sunits::F2Vector::parse(class)?;
        let constructed = matrix_from_pair(ug, &class_from_vector(ug, &v)?)?;
        let constructed_matches = invariant_of_matrix(ug, &constructed)?.normalized == v;
        witnesses.push(Witness {
            class: class.clone(),
            representative: matrix_strings(members[0]),
            members: members.len(),
            conjugacy_blocks: blocks.len(),
            constructed_matches,
        });
    }
    let reps: Vec<&SympMatrix> = groups.values().map(|g| g[0]).collect();
    let mut sound = true;
    for (i, a) in reps.iter().enumerate() {
        for b in &reps[i + 1..] {
            if conjugator_search(a, b, bound)?.is_some() {
                sound = false;
            }
        }
    }
    Ok(OracleReport {
        n: ug.n(),
        bound: bound.height,
        matrices_found: matrices.len(),
        invariant_classes_observed: groups.len(),
        predicted_count: count_classes(3, ug.n(), None)?,
        sound,
        witnesses,
    })
}

/// Enumeration and partition in one go.
pub fn oracle_report(n: i64, bound: SearchBound) -> Result<OracleReport> {
    let ug = UnitGroups::new(3, n)?;
    let ms = enumerate_order_p_sl2(n, bound)?;
    partition_by_conjugacy(&ug, &ms, bound)
}

/// max(|numerator|, denominator) over the entries.
pub fn entry_height(m: &SympMatrix) -> BigInt {
    m.entries()
        .entries()
        .map(|x| x.numer().abs().max(x.denom().clone()))
        .max()
        .unwrap_or_default()
}
