//! Order-p symplectic matrices: construction from pair classes and the way back.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cyclo::CycElt;
use crate::error::{domain, usage, Error, Result};
use crate::linalg::{rational_content, QMatrix};
use crate::localization::{format_rational, parse_rational, Localization};
use crate::pairs::{class_eq, make_pair, IdealBasis, PairClass};
use crate::sunits::UnitGroups;

/// A (p−1)×(p−1) matrix over ℤ[1/n].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SympMatrix {
    p: usize,
    loc: Localization,
    entries: QMatrix,
}

#[derive(Serialize, Deserialize)]
struct MatrixFile {
    p: usize,
    n: i64,
    entries: Vec<Vec<String>>,
}

impl SympMatrix {
    pub fn new(p: usize, loc: &Localization, entries: QMatrix) -> Result<Self> {
        crate::cyclo::check_odd_prime(p)?;
        if entries.rows() != p - 1 || entries.cols() != p - 1 {
            return usage(format!(
                "expected a {0}x{0} matrix for p = {p}, got {1}x{2}",
                p - 1,
                entries.rows(),
                entries.cols()
            ));
        }
        if !entries.entries_in(loc) {
            return domain(format!("matrix entries must lie in Z[1/{}]", loc.n()));
        }
        Ok(SympMatrix {
            p,
            loc: loc.clone(),
            entries,
        })
    }

    pub fn from_i64(p: usize, n: i64, rows: &[&[i64]]) -> Result<Self> {
        Self::new(p, &Localization::new(n)?, QMatrix::from_i64(rows))
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n(&self) -> i64 {
        self.loc.n()
    }

    pub fn localization(&self) -> &Localization {
        &self.loc
    }

    pub fn entries(&self) -> &QMatrix {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.rows()
    }

    pub fn mul(&self, o: &SympMatrix) -> SympMatrix {
        SympMatrix {
            p: self.p,
            loc: self.loc.clone(),
            entries: self.entries.mul(&o.entries),
        }
    }

    pub fn pow(&self, e: u64) -> SympMatrix {
        SympMatrix {
            p: self.p,
            loc: self.loc.clone(),
            entries: self.entries.pow(e),
        }
    }

    /// Inverse over ℤ[1/n], if it exists.
    pub fn inverse(&self) -> Option<SympMatrix> {
        let inv = self.entries.inverse()?;
        inv.entries_in(&self.loc).then(|| SympMatrix {
            p: self.p,
            loc: self.loc.clone(),
            entries: inv,
        })
    }

    pub fn to_json(&self) -> String {
        let file = MatrixFile {
            p: self.p,
            n: self.loc.n(),
            entries: self
                .entries
                .to_rows()
                .iter()
                .map(|r| r.iter().map(format_rational).collect())
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("matrix serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: MatrixFile =
            serde_json::from_str(s).map_err(|e| Error::Usage(format!("malformed matrix file: {e}")))?;
        let rows = file
            .entries
            .iter()
            .map(|r| r.iter().map(|x| parse_rational(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        if rows.iter().any(|r| r.len() != rows.len()) {
            return usage("matrix file entries must form a square matrix");
        }
        Self::new(file.p, &Localization::new(file.n)?, QMatrix::from_rows(rows))
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub symplectic: bool,
    pub order_p: bool,
    pub char_poly_is_cyclotomic: bool,
}

impl VerifyReport {
    pub fn all(&self) -> bool {
        self.symplectic && self.order_p && self.char_poly_is_cyclotomic
    }
}

pub fn is_symplectic(m: &QMatrix) -> bool {
    if !m.is_square() || m.rows() % 2 == 1 {
        return false;
    }
    let j = QMatrix::standard_j(m.rows());
    m.transpose().mul(&j).mul(m) == j
}

pub fn verify(m: &SympMatrix) -> VerifyReport {
    let e = &m.entries;
    let cp = e.char_poly();
    VerifyReport {
        symplectic: is_symplectic(e),
        order_p: !e.is_identity() && e.pow(m.p as u64).is_identity(),
        char_poly_is_cyclotomic: cp.len() == m.p && cp.iter().all(One::is_one),
    }
}

/// gram[r][s] = tr(α_r·ᾱ_s/(a·D)) on the ideal basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramForm {
    pub p: usize,
    pub basis: Vec<CycElt>,
    pub gram: QMatrix,
}

pub fn gram_form(ug: &UnitGroups, c: &PairClass) -> Result<GramForm> {
    let basis = c.ideal.elements();
    let y = (&c.a * ug.different()).invert()?;
    let conj: Vec<CycElt> = basis.iter().map(CycElt::conj).collect();
    let d = basis.len();
    let mut gram = QMatrix::zero(d, d);
    for r in 0..d {
        let ar = &basis[r] * &y;
        for s in 0..d {
            gram.set(r, s, (&ar * &conj[s]).trace());
        }
    }
    check_unimodular_alternating(&gram, &ug.loc).map_err(|e| match e {
        Error::Domain(m) => Error::Domain(format!("pair invalid: {m}")),
        e => e,
    })?;
    Ok(GramForm {
        p: ug.p,
        basis,
        gram,
    })
}

fn check_unimodular_alternating(g: &QMatrix, loc: &Localization) -> Result<()> {
    if !g.is_square() {
        return domain("Gram matrix is not square");
    }
    if g.transpose() != g.neg() {
        return domain("form is not alternating");
    }
    if !g.entries_in(loc) {
        return domain(format!("form has values outside Z[1/{}]", loc.n()));
    }
    if !loc.is_unit(&g.det()) {
        return domain("form is not unimodular");
    }
    Ok(())
}

/// S with Sᵀ G S = J, invertible over ℤ[1/n].
pub fn symplectic_reduce(g: &QMatrix, loc: &Localization) -> Result<QMatrix> {
    check_unimodular_alternating(g, loc)?;
    let n = g.rows();
    let form = |x: &[BigRational], y: &[BigRational]| -> BigRational {
        let mut acc = BigRational::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if !yj.is_zero() {
                    acc += xi * g.get(i, j) * yj;
                }
            }
        }
        acc
    };
    let mut v: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    while !remaining.is_empty() {
        let mut best: Option<(BigInt, usize, usize, BigRational)> = None;
        for (a, &i) in remaining.iter().enumerate() {
            for &j in &remaining[a + 1..] {
                let val = form(&v[i], &v[j]);
                if val.is_zero() {
                    continue;
                }
                let h = loc.height(&val);
                if best.as_ref().is_none_or(|b| h < b.0) {
                    best = Some((h, i, j, val));
                }
            }
        }
        let Some((h, i, j, val)) = best else {
            return Err(Error::Internal("degenerate form during reduction".into()));
        };
        let (e, f, val) = if val.is_negative() { (j, i, -val) } else { (i, j, val) };
        // make ⟨e, f⟩ the positive n-free integer d
        let s = loc.normalizing_unit(&val);
        for x in v[f].iter_mut() {
            *x *= &s;
        }
        if !h.is_one() {
            let d = BigRational::from_integer(h.clone());
            let mut progressed = false;
            for &k in &remaining {
                if k == e || k == f {
                    continue;
                }
                let gk = form(&v[e], &v[k]);
                let res = loc.residue(&gk, &h);
                if res.is_zero() {
                    continue;
                }
                let res = if &res * 2 > h { res - &h } else { res };
                let q = (&gk - BigRational::from_integer(res)) / &d;
                let vf = v[f].clone();
                for (x, y) in v[k].iter_mut().zip(&vf) {
                    *x -= &q * y;
                }
                progressed = true;
            }
            if !progressed {
                return Err(Error::Internal("form is not unimodular on the remaining block".into()));
            }
            continue;
        }
        let (ve, vf) = (v[e].clone(), v[f].clone());
        for &k in &remaining {
            if k == e || k == f {
                continue;
            }
            let ke = form(&v[k], &ve);
            let kf = form(&v[k], &vf);
            for ((x, a), b) in v[k].iter_mut().zip(&ve).zip(&vf) {
                *x += -(&kf * a) + &ke * b;
            }
        }
        pairs.push((e, f));
        remaining.retain(|&k| k != e && k != f);
    }
    let order: Vec<usize> = pairs.iter().map(|p| p.0).chain(pairs.iter().map(|p| p.1)).collect();
    let cols: Vec<Vec<BigRational>> = order.iter().map(|&k| v[k].clone()).collect();
    let s = QMatrix::from_rows(cols).transpose();
    if s.transpose().mul(g).mul(&s) != QMatrix::standard_j(n) || !s.entries_in(loc) || !loc.is_unit(&s.det()) {
        return Err(Error::Internal("symplectic reduction failed its exact check".into()));
    }
    Ok(s)
}

/// Everything produced on the way from a class to its matrix.
#[derive(Clone, Debug)]
pub struct Construction {
    pub gram: GramForm,
    pub s: QMatrix,
    /// Row i holds the coordinates of βᵢ.
    pub beta: QMatrix,
    pub matrix: SympMatrix,
}

pub fn construct(ug: &UnitGroups, c: &PairClass) -> Result<Construction> {
    let gram = gram_form(ug, c)?;
    let s = symplectic_reduce(&gram.gram, &ug.loc)?;
    let a = QMatrix::from_rows(c.ideal.rows().to_vec());
    let beta = s.transpose().mul(&a);
    let xi = QMatrix::from_rows(CycElt::xi(ug.p).mult_rows());
    let inv = beta.inverse().ok_or_else(|| Error::Internal("reduced basis is singular".into()))?;
    let m = beta.mul(&xi).mul(&inv);
    let matrix = SympMatrix::new(ug.p, &ug.loc, m)
        .map_err(|e| Error::Internal(format!("constructed matrix left the ring: {e}")))?;
    let report = verify(&matrix);
    if !report.all() {
        return Err(Error::Internal(format!(
            "constructed matrix failed verification {report:?}:\n{:?}",
            matrix.entries
        )));
    }
    Ok(Construction {
        gram,
        s,
        beta,
        matrix,
    })
}

pub fn matrix_from_pair(ug: &UnitGroups, c: &PairClass) -> Result<SympMatrix> {
    Ok(construct(ug, c)?.matrix)
}

fn check_setting(ug: &UnitGroups, m: &SympMatrix) -> Result<()> {
    if m.p != ug.p || m.loc.primes() != ug.loc.primes() {
        return usage(format!(
            "matrix for (p, n) = ({}, {}) used with ({}, {})",
            m.p,
            m.loc.n(),
            ug.p,
            ug.n()
        ));
    }
    Ok(())
}

/// Integral primitive α with Mα = ξα.
pub fn eigenvector(m: &SympMatrix) -> Result<Vec<CycElt>> {
    let p = m.p;
    let n = m.dim();
    let xi = CycElt::xi(p);
    let mut a: Vec<Vec<CycElt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let x = CycElt::from_rational(p, m.entries.get(i, j));
                    if i == j {
                        &x - &xi
                    } else {
                        x
                    }
                })
                .collect()
        })
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let best = (r..n)
            .filter(|&i| !a[i][col].is_zero())
            .min_by_key(|&i| a[i][col].height());
        let Some(best) = best else { continue };
        a.swap(r, best);
        let piv = a[r][col].clone();
        for t in r + 1..n {
            if a[t][col].is_zero() {
                continue;
            }
            let f = a[t][col].clone();
            let row: Vec<CycElt> = (0..n).map(|j| &(&piv * &a[t][j]) - &(&f * &a[r][j])).collect();
            a[t] = strip_content(row);
        }
        pivots.push(col);
        r += 1;
    }
    if pivots.len() != n - 1 {
        return domain(format!("xi-eigenspace has dimension {}", n - pivots.len()));
    }
    let free = (0..n).find(|c| !pivots.contains(c)).expect("one free column");
    let mut x: Vec<CycElt> = vec![CycElt::zero(p); n];
    x[free] = CycElt::one(p);
    for (row, &pc) in pivots.iter().enumerate().rev() {
        let mut s = CycElt::zero(p);
        for j in pc + 1..n {
            if !x[j].is_zero() && !a[row][j].is_zero() {
                s = &s + &(&a[row][j] * &x[j]);
            }
        }
        x[pc] = (-&s).div(&a[row][pc])?;
    }
    let coords: Vec<BigRational> = x.iter().flat_map(CycElt::coords).collect();
    let g = rational_content(&coords);
    Ok(x.iter().map(|e| e.scale(&g.recip())).collect())
}

fn strip_content(row: Vec<CycElt>) -> Vec<CycElt> {
    let coords: Vec<BigRational> = row.iter().flat_map(CycElt::coords).collect();
    let g = rational_content(&coords);
    if g.is_one() {
        return row;
    }
    row.iter().map(|e| e.scale(&g.recip())).collect()
}

/// αᵀ J ᾱ.
pub fn hermitian_j(alpha: &[CycElt]) -> CycElt {
    let p = alpha[0].p();
    let m = alpha.len() / 2;
    let mut acc = CycElt::zero(p);
    for i in 0..m {
        acc = &acc + &(&alpha[i] * &alpha[m + i].conj());
        acc = &acc - &(&alpha[m + i] * &alpha[i].conj());
    }
    acc
}

/// The class [span(α), D⁻¹αᵀJᾱ] of an order-p symplectic matrix.
pub fn invariant_of_matrix(ug: &UnitGroups, m: &SympMatrix) -> Result<PairClass> {
    check_setting(ug, m)?;
    let report = verify(m);
    if !report.all() {
        return domain(format!("matrix is not a symplectic element of order p: {report:?}"));
    }
    let alpha = eigenvector(m)?;
    let a = ug.different_inv() * &hermitian_j(&alpha);
    let ideal = IdealBasis::new(ug.p, &ug.loc, alpha.iter().map(CycElt::coords).collect())?;
    make_pair(ug, ideal, a)
}

pub fn conjugacy_test(ug: &UnitGroups, m1: &SympMatrix, m2: &SympMatrix) -> Result<bool> {
    let c1 = invariant_of_matrix(ug, m1)?;
    let c2 = invariant_of_matrix(ug, m2)?;
    class_eq(&c1, &c2)
}

/// Multiplication by w (w·w̄ = 1) in the basis used for c's matrix.
pub fn centralizer_matrix(ug: &UnitGroups, c: &PairClass, w: &CycElt) -> Result<SympMatrix> {
    if w.p() != ug.p || !w.in_ring(&ug.loc) || !w.norm_real().is_one() {
        return domain(format!("{w} is not in the kernel of the norm"));
    }
    let con = construct(ug, c)?;
    let wm = QMatrix::from_rows(w.mult_rows());
    let inv = con.beta.inverse().expect("checked during construction");
    let z = con.beta.mul(&wm).mul(&inv);
    let z = SympMatrix::new(ug.p, &ug.loc, z)
        .map_err(|e| Error::Internal(format!("centralizer matrix left the ring: {e}")))?;
    let m = &con.matrix;
    if !is_symplectic(&z.entries) || z.mul(m) != m.mul(&z) {
        return Err(Error::Internal(format!("centralizer matrix failed its checks:\n{:?}", z.entries)));
    }
    Ok(z)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralizerStructure {
    pub torsion: u64,
    pub rank_first_principles: usize,
    pub rank_closed_form: usize,
    pub agree: bool,
}

/// The rank of the norm kernel next to the closed form σ (+1 when p | n).
pub fn centralizer_structure(ug: &UnitGroups) -> Result<CentralizerStructure> {
    let k = ug.norm_kernel()?;
    let rank_closed_form = ug.split.sigma as usize + usize::from(ug.split.p_divides_n);
    Ok(CentralizerStructure {
        torsion: k.torsion_order,
        rank_first_principles: k.rank,
        rank_closed_form,
        agree: k.rank == rank_closed_form,
    })
}

/// A product of `steps` random elementary symplectic matrices with entries in [−h, h].
pub fn random_symplectic<R: Rng>(size: usize, steps: usize, h: i64, rng: &mut R) -> QMatrix {
    let m = size / 2;
    let mut q = QMatrix::identity(size);
    for _ in 0..steps {
        let mut e = QMatrix::identity(size);
        match rng.gen_range(0..3) {
            0 | 1 => {
                // [[I, S], [0, I]] or its transpose with S symmetric
                let upper = rng.gen_bool(0.5);
                for i in 0..m {
                    for j in i..m {
                        let v = BigRational::from_integer(rng.gen_range(-h..=h).into());
                        let (r, c) = if upper { (i, m + j) } else { (m + i, j) };
                        let (r2, c2) = if upper { (j, m + i) } else { (m + j, i) };
                        e.set(r, c, v.clone());
                        e.set(r2, c2, v);
                    }
                }
            }
            _ => {
                // [[A, 0], [0, A^(−T)]] with A = I + t·E_ij
                if m >= 2 {
                    let i = rng.gen_range(0..m);
                    let mut j = rng.gen_range(0..m);
                    if j == i {
                        j = (j + 1) % m;
                    }
                    let t = BigRational::from_integer(rng.gen_range(-h..=h).into());
                    e.set(i, j, t.clone());
                    e.set(m + j, m + i, -t);
                } else {
                    e = QMatrix::standard_j(size);
                }
            }
        }
        q = q.mul(&e);
    }
    q
}
