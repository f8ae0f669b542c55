//! Pair classes [𝔞, a] with 𝔞·𝔞̄ = (a): group law, enumeration, Galois twists, orbits.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclo::CycElt;
use crate::error::{domain, usage, Error, Result};
use crate::linalg::{hnf_localized, lll};
use crate::localization::Localization;
use crate::sunits::search::{find_by_norm, DEFAULT_BUDGET};
use crate::sunits::{check_supported, F2Vector, UnitGroups};

/// A full-rank ℤ[1/n][ξ]-ideal, stored as its canonical Hermite basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IdealBasis {
    p: usize,
    loc: Localization,
    rows: Vec<Vec<BigRational>>,
}

impl IdealBasis {
    /// Validates that the rows span a full-rank, ξ-stable module.
    pub fn new(p: usize, loc: &Localization, rows: Vec<Vec<BigRational>>) -> Result<Self> {
        if rows.len() != p - 1 || rows.iter().any(|r| r.len() != p - 1) {
            return usage(format!("an ideal basis for p = {p} is a {0}x{0} matrix", p - 1));
        }
        if rows.iter().flatten().any(|x| !loc.contains(x)) {
            return domain(format!("ideal basis entries must lie in Z[1/{}]", loc.n()));
        }
        let canon = hnf_localized(&rows, loc);
        if canon.len() != p - 1 {
            return domain("ideal basis rows are linearly dependent");
        }
        let ideal = IdealBasis {
            p,
            loc: loc.clone(),
            rows: canon,
        };
        let xi = CycElt::xi(p);
        let mut both = ideal.rows.clone();
        for e in ideal.elements() {
            both.push((&e * &xi).coords());
        }
        if hnf_localized(&both, loc) != ideal.rows {
            return domain("row span is not stable under multiplication by xi");
        }
        Ok(ideal)
    }

    /// The ideal generated by `gens`.
    pub fn from_generators(p: usize, loc: &Localization, gens: &[CycElt]) -> Result<Self> {
        let mut rows = Vec::new();
        for g in gens {
            if !g.in_ring(loc) {
                return domain(format!("{g} does not lie in Z[1/{}][xi]", loc.n()));
            }
            for j in 0..p - 1 {
                rows.push((g * &CycElt::xi_pow(p, j as i64)).coords());
            }
        }
        let canon = hnf_localized(&rows, loc);
        if canon.len() != p - 1 {
            return domain("zero ideal");
        }
        Ok(IdealBasis {
            p,
            loc: loc.clone(),
            rows: canon,
        })
    }

    pub fn unit(p: usize, loc: &Localization) -> Self {
        Self::from_generators(p, loc, &[CycElt::one(p)]).expect("unit ideal")
    }

    pub fn principal(x: &CycElt, loc: &Localization) -> Result<Self> {
        Self::from_generators(x.p(), loc, std::slice::from_ref(x))
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn rows(&self) -> &[Vec<BigRational>] {
        &self.rows
    }

    pub fn elements(&self) -> Vec<CycElt> {
        self.rows
            .iter()
            .map(|r| CycElt::from_coords(self.p, r).expect("row length"))
            .collect()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(i, r)| r.iter().enumerate().all(|(j, x)| *x == if i == j { BigRational::one() } else { BigRational::zero() }))
    }

    pub fn mul(&self, o: &IdealBasis) -> IdealBasis {
        if self.is_unit_ideal() {
            return o.clone();
        }
        if o.is_unit_ideal() {
            return self.clone();
        }
        let a = self.elements();
        let b = o.elements();
        let prods: Vec<CycElt> = a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect();
        let rows: Vec<Vec<BigRational>> = prods.iter().map(CycElt::coords).collect();
        IdealBasis {
            p: self.p,
            loc: self.loc.clone(),
            rows: hnf_localized(&rows, &self.loc),
        }
    }

    pub fn galois(&self, k: i64) -> IdealBasis {
        let gens: Vec<CycElt> = self.elements().iter().map(|x| x.galois(k)).collect();
        IdealBasis {
            p: self.p,
            loc: self.loc.clone(),
            rows: hnf_localized(&gens.iter().map(CycElt::coords).collect::<Vec<_>>(), &self.loc),
        }
    }

    pub fn conj(&self) -> IdealBasis {
        self.galois(self.p as i64 - 1)
    }

    /// Index of 𝔞 ∩ ℤ[ξ] in ℤ[ξ]: the product of the pivots.
    pub fn norm(&self) -> BigInt {
        (0..self.p - 1).map(|i| self.rows[i][i].numer().clone()).product()
    }

    /// Some x with 𝔞 = (x): LLL in the trace form, then a norm search.
    pub fn generator(&self) -> Result<CycElt> {
        if self.is_unit_ideal() {
            return Ok(CycElt::one(self.p));
        }
        let p = self.p as i64;
        let t2 = move |x: &[BigInt], y: &[BigInt]| -> BigInt {
            let dot: BigInt = x.iter().zip(y).map(|(a, b)| a * b).sum();
            let sx: BigInt = x.iter().sum();
            let sy: BigInt = y.iter().sum();
            dot * p - sx * sy
        };
        let int_rows: Vec<Vec<BigInt>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_integer()).collect())
            .collect();
        let reduced = lll(int_rows, &t2);
        let basis: Vec<CycElt> = reduced
            .into_iter()
            .map(|r| CycElt::from_bigint_coords(self.p, r).expect("row length"))
            .collect();
        find_by_norm(&basis, &self.norm(), DEFAULT_BUDGET)?.ok_or_else(|| {
            Error::Resource(format!("no generator found for the ideal of norm {}", self.norm()))
        })
    }
}

/// A class [𝔞, a] together with its normal form [R, u].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairClass {
    pub p: usize,
    pub n: i64,
    pub ideal: IdealBasis,
    pub a: CycElt,
    pub normalized: F2Vector,
    /// The real unit u of the normal form, built from the quotient generators.
    pub representative: CycElt,
}

/// Validates (𝔞, a) and computes its normal form.
pub fn make_pair(ug: &UnitGroups, ideal: IdealBasis, a: CycElt) -> Result<PairClass> {
    if ideal.p != ug.p || a.p() != ug.p {
        return usage("pair and unit data belong to different p");
    }
    if a.is_zero() || !a.in_ring(&ug.loc) {
        return domain(format!("{a} is not a nonzero element of Z[1/{}][xi]", ug.n()));
    }
    if !a.is_real() {
        return domain(format!("{a} is not real"));
    }
    let x = if ideal.is_unit_ideal() {
        if !a.is_unit(&ug.loc) {
            return domain(format!("not a valid pair: {a} is not a unit"));
        }
        CycElt::one(ug.p)
    } else {
        let prod = ideal.mul(&ideal.conj());
        if prod != IdealBasis::principal(&a, &ug.loc)? {
            return domain("not a valid pair: the ideal times its conjugate is not (a)");
        }
        ideal.generator()?
    };
    let u = a.div(&x.norm_real())?;
    if !u.is_real() || !u.is_unit(&ug.loc) {
        return Err(Error::Internal(format!("a/(x conj x) = {u} is not a real unit")));
    }
    let normalized = ug.quotient_vector(&u)?;
    let representative = ug.representative(&normalized)?;
    Ok(PairClass {
        p: ug.p,
        n: ug.n(),
        ideal,
        a,
        normalized,
        representative,
    })
}

/// The class [R, u] for a quotient vector.
pub fn class_from_vector(ug: &UnitGroups, v: &F2Vector) -> Result<PairClass> {
    let u = ug.representative(v)?;
    Ok(PairClass {
        p: ug.p,
        n: ug.n(),
        ideal: IdealBasis::unit(ug.p, &ug.loc),
        a: u.clone(),
        normalized: v.clone(),
        representative: u,
    })
}

fn same_setting(x: &PairClass, y: &PairClass) -> Result<()> {
    if x.p != y.p || x.n != y.n {
        return usage(format!(
            "classes for (p, n) = ({}, {}) and ({}, {}) mixed",
            x.p, x.n, y.p, y.n
        ));
    }
    Ok(())
}

/// [𝔞, a]·[𝔟, b] = [𝔞𝔟, ab].
pub fn class_mul(ug: &UnitGroups, x: &PairClass, y: &PairClass) -> Result<PairClass> {
    same_setting(x, y)?;
    let normalized = x.normalized.xor(&y.normalized);
    Ok(PairClass {
        p: x.p,
        n: x.n,
        ideal: x.ideal.mul(&y.ideal),
        a: &x.a * &y.a,
        representative: ug.representative(&normalized)?,
        normalized,
    })
}

/// Like [`class_mul`] but also renormalizes the ideal-level product and compares.
pub fn class_mul_checked(ug: &UnitGroups, x: &PairClass, y: &PairClass) -> Result<PairClass> {
    let c = class_mul(ug, x, y)?;
    let direct = make_pair(ug, c.ideal.clone(), c.a.clone())?;
    if direct.normalized != c.normalized {
        return Err(Error::Internal(format!(
            "product normal form {} disagrees with {}",
            direct.normalized, c.normalized
        )));
    }
    Ok(c)
}

/// [𝔞, a]⁻¹ = [𝔞̄, a].
pub fn class_inv(x: &PairClass) -> PairClass {
    PairClass {
        ideal: x.ideal.conj(),
        ..x.clone()
    }
}

pub fn class_eq(x: &PairClass, y: &PairClass) -> Result<bool> {
    same_setting(x, y)?;
    Ok(x.normalized == y.normalized)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassSet {
    pub p: usize,
    pub n: i64,
    pub classes: Vec<F2Vector>,
    pub representatives: Vec<CycElt>,
    pub class_number: u64,
}

/// Largest quotient dimension that will be enumerated.
pub const MAX_ENUMERATION_DIM: usize = 24;

pub fn enumerate_classes(ug: &UnitGroups) -> Result<ClassSet> {
    let d = ug.quotient_dim();
    if d > MAX_ENUMERATION_DIM {
        return usage(format!("2^{d} classes is too many to enumerate"));
    }
    let classes: Vec<F2Vector> = (0..1u64 << d).map(|i| F2Vector::from_index(d, i)).collect();
    let representatives = classes
        .iter()
        .map(|v| ug.representative(v))
        .collect::<Result<Vec<_>>>()?;
    Ok(ClassSet {
        p: ug.p,
        n: ug.n(),
        classes,
        representatives,
        class_number: 1,
    })
}

/// |C₀|·2^((p−1)/2+τ). The class number is built in for supported p and required otherwise.
pub fn count_classes(p: usize, n: i64, class_number: Option<u64>) -> Result<u128> {
    crate::cyclo::check_odd_prime(p)?;
    let h = match (check_supported(p), class_number) {
        (Ok(()), None) | (Ok(()), Some(1)) => 1,
        (Ok(()), Some(h)) => {
            return usage(format!("class number {h} contradicts the built-in value 1 for p = {p}"))
        }
        (Err(_), Some(0)) => return usage("class number must be positive"),
        (Err(_), Some(h)) => h,
        (Err(_), None) => {
            return usage(format!(
                "p = {p} needs --class-number: the class group of Q(xi_{p}) is not built in"
            ))
        }
    };
    let s = crate::splitting::split_summary(p as u64, n)?;
    let e = (p as u64 - 1) / 2 + s.tau;
    if e >= 120 {
        return usage(format!("2^{e} classes does not fit the counter"));
    }
    (h as u128)
        .checked_mul(1u128 << e)
        .ok_or_else(|| Error::Usage("class count overflows".into()))
}

fn check_galois_index(p: usize, k: u64) -> Result<()> {
    if k == 0 || k as usize >= p {
        return usage(format!("Galois index {k} outside 1..={}", p - 1));
    }
    Ok(())
}

/// The twisted class [γ_k(𝔞), D⁻¹γ_k(D)γ_k(a)].
pub fn galois_twist(ug: &UnitGroups, c: &PairClass, k: u64) -> Result<PairClass> {
    check_galois_index(ug.p, k)?;
    let d = ug.different();
    let b = ug.different_inv() * &(d * &c.a).galois(k as i64);
    if c.ideal.is_unit_ideal() {
        let normalized = ug.quotient_vector(&b)?;
        return Ok(PairClass {
            p: ug.p,
            n: ug.n(),
            ideal: c.ideal.clone(),
            a: b,
            representative: ug.representative(&normalized)?,
            normalized,
        });
    }
    make_pair(ug, c.ideal.galois(k as i64), b)
}

/// The twist action as affine maps v ↦ A_k v + b_k on quotient vectors.
#[derive(Clone, Debug)]
pub struct TwistTable {
    p: usize,
    /// Indexed by k; entry 0 unused.
    maps: Vec<(Vec<F2Vector>, F2Vector)>,
}

impl TwistTable {
    pub fn new(ug: &UnitGroups) -> Result<Self> {
        let p = ug.p;
        let d = ug.different();
        let gens = ug.quotient_generators();
        let mut maps = vec![(Vec::new(), F2Vector::zero(ug.quotient_dim()))];
        for k in 1..p as i64 {
            let offset = ug.quotient_vector(&(ug.different_inv() * &d.galois(k)))?;
            let cols = gens
                .iter()
                .map(|g| ug.quotient_vector(&g.galois(k)))
                .collect::<Result<Vec<_>>>()?;
            maps.push((cols, offset));
        }
        Ok(TwistTable { p, maps })
    }

    pub fn apply(&self, v: &F2Vector, k: u64) -> F2Vector {
        let (cols, offset) = &self.maps[k as usize];
        let mut out = offset.clone();
        for (c, b) in cols.iter().zip(v.bits()) {
            if *b {
                out = out.xor(c);
            }
        }
        out
    }

    pub fn stabilizer(&self, v: &F2Vector) -> Vec<u64> {
        (1..self.p as u64).filter(|&k| self.apply(v, k) == *v).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NcQuotient {
    pub j: u64,
    pub stabilizer: Vec<u64>,
}

fn check_nc(ug: &UnitGroups, stabilizer: &[u64]) -> Result<NcQuotient> {
    let j = stabilizer.len() as u64;
    let p = ug.p as u64;
    if !(p - 1).is_multiple_of(j) {
        return Err(Error::Internal(format!("stabilizer of order {j} in a group of order {}", p - 1)));
    }
    if ug.split.p_divides_n && j.is_multiple_of(2) {
        return Err(Error::Internal(format!("even stabilizer order {j} although p divides n")));
    }
    Ok(NcQuotient {
        j,
        stabilizer: stabilizer.to_vec(),
    })
}

/// Stabilizer of c under the twist action and its order j.
pub fn nc_quotient(ug: &UnitGroups, c: &PairClass) -> Result<NcQuotient> {
    let mut stab = Vec::new();
    for k in 1..ug.p as u64 {
        if galois_twist(ug, c, k)?.normalized == c.normalized {
            stab.push(k);
        }
    }
    check_nc(ug, &stab)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitEntry {
    pub vector: String,
    pub representative_u: String,
    pub j: u64,
    pub stabilizer: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub p: usize,
    pub n: i64,
    pub classes: Vec<OrbitEntry>,
    /// Distinct odd j that occur, ascending.
    pub odd_divisors_covered: Vec<u64>,
}

pub fn orbit_report(ug: &UnitGroups) -> Result<OrbitReport> {
    let set = enumerate_classes(ug)?;
    let table = TwistTable::new(ug)?;
    let mut classes = Vec::new();
    let mut covered = Vec::new();
    for (v, u) in set.classes.iter().zip(&set.representatives) {
        let nc = check_nc(ug, &table.stabilizer(v))?;
        if nc.j % 2 == 1 && !covered.contains(&nc.j) {
            covered.push(nc.j);
        }
        classes.push(OrbitEntry {
            vector: v.to_string(),
            representative_u: u.to_string(),
            j: nc.j,
            stabilizer: nc.stabilizer,
        });
    }
    covered.sort_unstable();
    Ok(OrbitReport {
        p: ug.p,
        n: ug.n(),
        classes,
        odd_divisors_covered: covered,
    })
}

/// Odd divisors of p − 1.
pub fn odd_divisors(p: u64) -> Vec<u64> {
    (1..p).filter(|j| j % 2 == 1 && (p - 1).is_multiple_of(*j)).collect()
}

/// γ_k applied to an element of the norm kernel.
pub fn action_on_centralizer(p: usize, k: u64, w: &CycElt) -> Result<CycElt> {
    check_galois_index(p, k)?;
    if w.p() != p {
        return usage("element from a different field");
    }
    if !w.norm_real().is_one() {
        return domain(format!("{w} does not satisfy w conj(w) = 1"));
    }
    Ok(w.galois(k as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localization::rint;

    #[test]
    fn pairs_p3() {
        let ug = UnitGroups::new(3, 1).unwrap();
        let r = IdealBasis::unit(3, &ug.loc);
        let id = make_pair(&ug, r.clone(), CycElt::one(3)).unwrap();
        assert!(id.normalized.is_zero());
        let neg = make_pair(&ug, r.clone(), CycElt::from_int(3, -1)).unwrap();
        assert!(!neg.normalized.is_zero());
        assert!(!class_eq(&id, &neg).unwrap());
        assert!(matches!(make_pair(&ug, r, CycElt::from_int(3, 2)), Err(Error::Domain(_))));
    }

    #[test]
    fn principal_pair() {
        // ((1 − ξ), 3) for n = 1: a non-unit ideal
        let ug = UnitGroups::new(3, 1).unwrap();
        let g = &CycElt::one(3) - &CycElt::xi(3);
        let i = IdealBasis::principal(&g, &ug.loc).unwrap();
        assert_eq!(i.norm(), BigInt::from(3));
        let c = make_pair(&ug, i, CycElt::from_int(3, 3)).unwrap();
        // 3 = (1−ξ)(1−ξ̄) is a norm
        assert!(c.normalized.is_zero());
    }

    #[test]
    fn ideal_validation() {
        let l = Localization::integers();
        let rows = vec![vec![rint(2), rint(0)], vec![rint(0), rint(1)]];
        assert!(IdealBasis::new(3, &l, rows).is_err());
        let rows = vec![vec![rint(2), rint(0)], vec![rint(0), rint(2)]];
        assert!(IdealBasis::new(3, &l, rows).is_ok());
    }

    #[test]
    fn counts() {
        assert_eq!(count_classes(3, 1, None).unwrap(), 2);
        assert_eq!(count_classes(5, 1, None).unwrap(), 4);
        assert_eq!(count_classes(7, 6, None).unwrap(), 16);
        assert!(count_classes(23, 1, None).is_err());
        assert_eq!(count_classes(23, 1, Some(3)).unwrap(), 3 * 2048);
        assert!(count_classes(5, 1, Some(2)).is_err());
    }

    #[test]
    fn twists_p3() {
        let ug = UnitGroups::new(3, 1).unwrap();
        let set = enumerate_classes(&ug).unwrap();
        assert_eq!(set.classes.len(), 2);
        let id = class_from_vector(&ug, &set.classes[0]).unwrap();
        assert_eq!(galois_twist(&ug, &id, 1).unwrap().normalized, id.normalized);
        let t = galois_twist(&ug, &id, 2).unwrap();
        assert_eq!(t.representative, CycElt::from_int(3, -1));
        let nc = nc_quotient(&ug, &id).unwrap();
        assert_eq!(nc.stabilizer, vec![1]);
    }

    #[test]
    fn centralizer_action() {
        let w = -&CycElt::xi(3);
        assert_eq!(action_on_centralizer(3, 2, &w).unwrap(), -&CycElt::xi_pow(3, 2));
        assert!(action_on_centralizer(3, 2, &CycElt::from_int(3, 2)).is_err());
    }
}
