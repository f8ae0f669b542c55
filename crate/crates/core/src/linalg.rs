//! Exact linear algebra: rational matrices, Hermite forms over ℤ[1/n], LLL and GF(2) elimination.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::localization::{format_rational, Localization};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(format_rational).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl QMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    /// The standard alternating form [[0, I], [−I, 0]] of size 2m.
    pub fn standard_j(size: usize) -> Self {
        assert!(size.is_multiple_of(2));
        let m = size / 2;
        let mut j = Self::zero(size, size);
        for i in 0..m {
            j.set(i, m + i, BigRational::one());
            j.set(m + i, i, -BigRational::one());
        }
        j
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        QMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigRational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigRational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &BigRational> {
        self.data.iter()
    }

    pub fn mul(&self, o: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut out = QMatrix::zero(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.data[i * o.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> QMatrix {
        let mut out = QMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn neg(&self) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    pub fn sub(&self, o: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == QMatrix::identity(self.rows)
    }

    pub fn pow(&self, mut e: u64) -> QMatrix {
        assert!(self.is_square());
        let mut acc = QMatrix::identity(self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn trace(&self) -> BigRational {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).sum()
    }

    /// Gauss–Jordan; `None` when singular.
    pub fn inverse(&self) -> Option<QMatrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = QMatrix::identity(n);
        for col in 0..n {
            let piv = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            a.swap_rows(col, piv);
            inv.swap_rows(col, piv);
            let c = a.get(col, col).clone();
            a.scale_row(col, &c.recip());
            inv.scale_row(col, &c.recip());
            for r in 0..n {
                if r != col && !a.get(r, col).is_zero() {
                    let f = a.get(r, col).clone();
                    a.add_row_multiple(r, col, &-f.clone());
                    inv.add_row_multiple(r, col, &-f);
                }
            }
        }
        Some(inv)
    }

    pub fn det(&self) -> BigRational {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut det = BigRational::one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
                return BigRational::zero();
            };
            if piv != col {
                a.swap_rows(col, piv);
                det = -det;
            }
            let c = a.get(col, col).clone();
            det *= &c;
            for r in col + 1..n {
                if !a.get(r, col).is_zero() {
                    let f = a.get(r, col) / &c;
                    a.add_row_multiple(r, col, &-f);
                }
            }
        }
        det
    }

    /// Monic characteristic polynomial, lowest degree first (Faddeev–LeVerrier).
    pub fn char_poly(&self) -> Vec<BigRational> {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![BigRational::zero(); n + 1];
        coeffs[n] = BigRational::one();
        let mut mk = QMatrix::zero(n, n);
        for k in 1..=n {
            let mut next = self.mul(&mk);
            for i in 0..n {
                let v = next.get(i, i) + &coeffs[n - k + 1];
                next.set(i, i, v);
            }
            mk = next;
            let t = self.mul(&mk).trace();
            coeffs[n - k] = -t / BigRational::from_integer(BigInt::from(k));
        }
        coeffs
    }

    pub fn entries_in(&self, loc: &Localization) -> bool {
        self.data.iter().all(|x| loc.contains(x))
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn scale_row(&mut self, r: usize, f: &BigRational) {
        for c in 0..self.cols {
            self.data[r * self.cols + c] *= f;
        }
    }

    /// row[dst] += f · row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, f: &BigRational) {
        for c in 0..self.cols {
            let v = self.get(src, c) * f;
            self.data[dst * self.cols + c] += v;
        }
    }
}

/// Canonical row Hermite form of the ℤ[1/n]-span of `rows`.
///
/// Pivots are positive n-free integers; entries above a pivot lie in [0, pivot).
/// Zero rows are dropped. Entries must already lie in ℤ[1/n].
pub fn hnf_localized(rows: &[Vec<BigRational>], loc: &Localization) -> Vec<Vec<BigRational>> {
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut top = 0;
    for col in 0..ncols {
        if top == a.len() {
            break;
        }
        loop {
            let best = (top..a.len())
                .filter(|&r| !a[r][col].is_zero())
                .min_by_key(|&r| loc.height(&a[r][col]));
            let Some(best) = best else { break };
            a.swap(top, best);
            let u = loc.normalizing_unit(&a[top][col]);
            for x in a[top].iter_mut() {
                *x *= &u;
            }
            let d = a[top][col].numer().clone();
            let mut done = true;
            for r in top + 1..a.len() {
                if a[r][col].is_zero() {
                    continue;
                }
                let rem = centered(loc.residue(&a[r][col], &d), &d);
                let q = (&a[r][col] - BigRational::from_integer(rem.clone()))
                    / BigRational::from_integer(d.clone());
                sub_multiple(&mut a, r, top, &q);
                if !rem.is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if (top..a.len()).all(|r| a[r][col].is_zero()) {
            continue;
        }
        let d = a[top][col].numer().clone();
        for r in 0..top {
            let rem = loc.residue(&a[r][col], &d);
            let q = (&a[r][col] - BigRational::from_integer(rem)) / BigRational::from_integer(d.clone());
            if !q.is_zero() {
                sub_multiple(&mut a, r, top, &q);
            }
        }
        a.retain(|r| r.iter().any(|x| !x.is_zero()));
        top += 1;
    }
    a.truncate(top);
    a
}

fn centered(r: BigInt, d: &BigInt) -> BigInt {
    if &r * 2 > *d {
        r - d
    } else {
        r
    }
}

fn sub_multiple(a: &mut [Vec<BigRational>], dst: usize, src: usize, q: &BigRational) {
    let (s, d) = if dst < src {
        let (lo, hi) = a.split_at_mut(src);
        (&hi[0], &mut lo[dst])
    } else {
        let (lo, hi) = a.split_at_mut(dst);
        (&lo[src], &mut hi[0])
    };
    for (x, y) in d.iter_mut().zip(s.iter()) {
        *x -= q * y;
    }
}

/// ℤ-basis (in Hermite form) of {e ∈ ℤ^r : Σ e_i rows_i = 0}. Columns listed in `mod2`
/// only need to vanish modulo 2.
pub fn integer_left_kernel(rows: &[Vec<BigInt>], mod2: &[usize]) -> Vec<Vec<BigInt>> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    let extra = mod2.len();
    let width = c + r + extra;
    let mut aug: Vec<Vec<BigRational>> = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let mut v = vec![BigRational::zero(); width];
        for (j, x) in row.iter().enumerate() {
            v[j] = BigRational::from_integer(x.clone());
        }
        v[c + i] = BigRational::one();
        aug.push(v);
    }
    for (t, &col) in mod2.iter().enumerate() {
        let mut v = vec![BigRational::zero(); width];
        v[col] = BigRational::from_integer(BigInt::from(2));
        v[c + r + t] = BigRational::one();
        aug.push(v);
    }
    let h = hnf_localized(&aug, &Localization::integers());
    let kernel: Vec<Vec<BigRational>> = h
        .into_iter()
        .filter(|v| v[..c].iter().all(Zero::is_zero))
        .map(|v| v[c..c + r].to_vec())
        .collect();
    hnf_localized(&kernel, &Localization::integers())
        .into_iter()
        .map(|v| v.into_iter().map(|x| x.to_integer()).collect())
        .collect()
}

/// LLL (δ = 3/4) for integer vectors under the Gram form ⟨x, y⟩ = xᵀ Q y.
pub fn lll(mut basis: Vec<Vec<BigInt>>, q: &dyn Fn(&[BigInt], &[BigInt]) -> BigInt) -> Vec<Vec<BigInt>> {
    let n = basis.len();
    if n < 2 {
        return basis;
    }
    let ip = |a: &[BigInt], b: &[BigInt]| BigRational::from_integer(q(a, b));
    let delta = BigRational::new(3.into(), 4.into());
    let gso = |basis: &[Vec<BigInt>]| {
        let n = basis.len();
        let mut mu = vec![vec![BigRational::zero(); n]; n];
        let mut bstar = vec![BigRational::zero(); n];
        for i in 0..n {
            let mut b = ip(&basis[i], &basis[i]);
            for j in 0..i {
                let mut m = ip(&basis[i], &basis[j]);
                for k in 0..j {
                    m -= &mu[j][k] * &mu[i][k] * &bstar[k];
                }
                m /= &bstar[j];
                b -= &m * &m * &bstar[j];
                mu[i][j] = m;
            }
            bstar[i] = b;
        }
        (mu, bstar)
    };
    let (mut mu, mut bstar) = gso(&basis);
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let r = mu[k][j].round().to_integer();
            if !r.is_zero() {
                let bj = basis[j].clone();
                for (x, y) in basis[k].iter_mut().zip(&bj) {
                    *x -= &r * y;
                }
                let rq = BigRational::from_integer(r);
                for l in 0..j {
                    let t = &rq * &mu[j][l];
                    mu[k][l] -= t;
                }
                mu[k][j] -= &rq;
            }
        }
        let lhs = &bstar[k];
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &bstar[k - 1];
        if *lhs >= rhs {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            let recomputed = gso(&basis);
            mu = recomputed.0;
            bstar = recomputed.1;
            k = k.saturating_sub(1).max(1);
        }
    }
    basis
}

/// Reduced row echelon form over GF(2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F2Echelon {
    width: usize,
    /// (pivot column, row) pairs, each row zero at every other pivot column.
    rows: Vec<(usize, Vec<bool>)>,
}

impl F2Echelon {
    /// Pivots are chosen from the highest column index downwards.
    pub fn from_rows_right_pivots(width: usize, rows: &[Vec<bool>]) -> Self {
        let mut ech = F2Echelon {
            width,
            rows: Vec::new(),
        };
        for r in rows {
            ech.insert(r.clone());
        }
        ech
    }

    fn insert(&mut self, v: Vec<bool>) {
        let v = self.reduce(&v);
        let Some(piv) = (0..self.width).rev().find(|&c| v[c]) else {
            return;
        };
        for (_, row) in self.rows.iter_mut() {
            if row[piv] {
                for (x, y) in row.iter_mut().zip(&v) {
                    *x ^= *y;
                }
            }
        }
        self.rows.push((piv, v));
        self.rows.sort_by_key(|(c, _)| *c);
    }

    pub fn reduce(&self, v: &[bool]) -> Vec<bool> {
        let mut v = v.to_vec();
        for (c, row) in &self.rows {
            if v[*c] {
                for (x, y) in v.iter_mut().zip(row) {
                    *x ^= *y;
                }
            }
        }
        v
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(c, _)| *c).collect()
    }

    pub fn free_columns(&self) -> Vec<usize> {
        let piv = self.pivots();
        (0..self.width).filter(|c| !piv.contains(c)).collect()
    }
}

/// Integer content of a rational vector: the positive rational g with v/g primitive integral.
pub fn rational_content(v: &[BigRational]) -> BigRational {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for x in v {
        num = num.gcd(x.numer());
        den = den.lcm(x.denom());
    }
    if num.is_zero() {
        return BigRational::one();
    }
    BigRational::new(num.abs(), den)
}
