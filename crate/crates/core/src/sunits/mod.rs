//! S-unit groups of ℤ[1/n][ξ] and ℤ[1/n][ξ + ξ⁻¹], the norm map between them,
//! its cokernel mod squares and its kernel.

pub mod decompose;
pub mod search;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

pub use decompose::start_precision;

use crate::cyclo::{check_odd_prime, different_generator, divides_integrally, CycElt};
use crate::error::{domain, usage, Error, Result};
use crate::linalg::{integer_left_kernel, F2Echelon};
use crate::localization::Localization;
use crate::splitting::{classify_prime, split_summary, SplitKind, SplitRecord, SplitSummary};

/// Primes for which both cyclotomic rings are principal.
pub const SUPPORTED_PRIMES: [usize; 7] = [3, 5, 7, 11, 13, 17, 19];

pub fn check_supported(p: usize) -> Result<()> {
    check_odd_prime(p)?;
    if !SUPPORTED_PRIMES.contains(&p) {
        return usage(format!(
            "p = {p} is outside the built-in principal range {SUPPORTED_PRIMES:?}; \
             unit and class group data must be supplied externally"
        ));
    }
    Ok(())
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GenTag {
    MinusOne,
    RootOfUnity,
    CycUnit { a: usize },
    PrimeGen { q: u64, index: usize, field: Field },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitGen {
    pub tag: GenTag,
    pub value: CycElt,
}

/// ε_a = ξ^((1−a)(p+1)/2)·(1−ξ^a)/(1−ξ), a real unit of ℤ[ξ].
pub fn cyclotomic_unit(p: usize, a: usize) -> Result<CycElt> {
    check_odd_prime(p)?;
    if a < 2 || a > (p - 1) / 2 {
        return usage(format!("cyclotomic unit index {a} outside 2..={}", (p - 1) / 2));
    }
    // (1−ξ^a)/(1−ξ) = 1 + ξ + … + ξ^(a−1)
    let mut s = CycElt::zero(p);
    for i in 0..a {
        s = &s + &CycElt::xi_pow(p, i as i64);
    }
    let shift = (1 - a as i64) * ((p as i64 + 1) / 2);
    Ok(&CycElt::xi_pow(p, shift) * &s)
}

/// Generators of the primes above q, full ring and real subring.
#[derive(Clone, Debug)]
pub struct PrimeGens {
    pub record: SplitRecord,
    /// Split primes come in conjugate pairs g, ḡ.
    pub full: Vec<CycElt>,
    pub real: Vec<CycElt>,
}

fn associated(a: &CycElt, b: &CycElt) -> bool {
    divides_integrally(a, b).is_some()
}

/// Generators for all primes over q, cached per (p, q).
pub fn prime_generators(p: usize, q: u64) -> Result<Arc<PrimeGens>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, u64), Arc<PrimeGens>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(g) = cache.lock().unwrap().get(&(p, q)) {
        return Ok(g.clone());
    }
    let g = Arc::new(compute_prime_generators(p, q)?);
    cache.lock().unwrap().insert((p, q), g.clone());
    Ok(g)
}

fn compute_prime_generators(p: usize, q: u64) -> Result<PrimeGens> {
    check_supported(p)?;
    let record = classify_prime(q, p as u64)?;
    let m = (p - 1) / 2;
    let target = BigInt::from(q).pow(record.f as u32);
    let not_found = || {
        Error::Resource(format!(
            "no element of norm {q}^{} within coordinate height {}",
            record.f,
            search::MAX_HEIGHT
        ))
    };
    match record.kind {
        SplitKind::Ramified => {
            let g = &CycElt::one(p) - &CycElt::xi(p);
            let real = g.norm_real();
            Ok(PrimeGens {
                record,
                full: vec![g],
                real: vec![real],
            })
        }
        SplitKind::Inert => {
            let real = if record.count == 1 {
                vec![CycElt::from_int(p, q as i64)]
            } else {
                let basis = search::real_integral_basis(p);
                let g = search::find_by_norm(&basis, &target, search::DEFAULT_BUDGET)?
                    .ok_or_else(not_found)?;
                let mut found: Vec<CycElt> = vec![g.clone()];
                for k in 2..=m {
                    let h = g.galois(k as i64);
                    if !found.iter().any(|x| associated(&h, x)) {
                        found.push(h);
                    }
                }
                found
            };
            if real.len() as u64 != record.count {
                return Err(Error::Internal(format!(
                    "found {} real primes over {q}, expected {}",
                    real.len(),
                    record.count
                )));
            }
            Ok(PrimeGens {
                record,
                full: real.clone(),
                real,
            })
        }
        SplitKind::Split => {
            let basis = search::power_basis(p);
            let g = search::find_by_norm(&basis, &target, search::DEFAULT_BUDGET)?
                .ok_or_else(not_found)?;
            let mut full: Vec<CycElt> = Vec::new();
            for k in 1..p {
                let h = g.galois(k as i64);
                if !full.iter().any(|x| associated(&h, x)) {
                    let hb = h.conj();
                    full.push(h);
                    full.push(hb);
                }
            }
            if full.len() as u64 != 2 * record.count {
                return Err(Error::Internal(format!(
                    "found {} primes over {q}, expected {}",
                    full.len(),
                    2 * record.count
                )));
            }
            let real = full.chunks(2).map(|c| &c[0] * &c[1]).collect();
            Ok(PrimeGens { record, full, real })
        }
    }
}

/// The `which`-th generator over q in the requested ring.
pub fn prime_generator(p: usize, loc: &Localization, q: u64, which: usize, field: Field) -> Result<CycElt> {
    if !loc.inverts(q) {
        return usage(format!("{q} does not divide n = {}", loc.n()));
    }
    let g = prime_generators(p, q)?;
    let list = match field {
        Field::Real => &g.real,
        Field::Full => &g.full,
    };
    list.get(which)
        .cloned()
        .ok_or_else(|| Error::Usage(format!("only {} primes over {q}", list.len())))
}

pub(crate) struct PrimeData {
    q: u64,
    /// Exponent of the prime in q.
    ramification: i64,
    inverse: CycElt,
}

/// Torsion generator plus free generators of an S-unit group.
pub struct SUnitBasis {
    pub p: usize,
    pub loc: Localization,
    pub field: Field,
    pub torsion: CycElt,
    pub torsion_order: u64,
    pub gens: Vec<UnitGen>,
    inverses: Vec<CycElt>,
    prime_data: Vec<Option<PrimeData>>,
    torsion_powers: Vec<CycElt>,
    /// Log embeddings of the non-prime generators, keyed by precision.
    log_cache: Mutex<HashMap<usize, decompose::LogMatrix>>,
}

impl fmt::Debug for SUnitBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SUnitBasis")
            .field("p", &self.p)
            .field("n", &self.loc.n())
            .field("field", &self.field)
            .field("gens", &self.gens)
            .finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    /// Exponent of the torsion generator, in [0, order).
    pub torsion: u64,
    pub exponents: Vec<i64>,
}

impl SUnitBasis {
    pub fn new(p: usize, loc: &Localization, field: Field) -> Result<Self> {
        check_supported(p)?;
        let (torsion, torsion_order) = match field {
            Field::Full => (-&CycElt::xi(p), 2 * p as u64),
            Field::Real => (CycElt::from_int(p, -1), 2),
        };
        let mut gens = Vec::new();
        let mut prime_data = Vec::new();
        for a in 2..=(p - 1) / 2 {
            gens.push(UnitGen {
                tag: GenTag::CycUnit { a },
                value: cyclotomic_unit(p, a)?,
            });
            prime_data.push(None);
        }
        for &q in loc.primes() {
            let pg = prime_generators(p, q)?;
            let list = match field {
                Field::Real => &pg.real,
                Field::Full => &pg.full,
            };
            let ramification = match (pg.record.kind, field) {
                (SplitKind::Ramified, Field::Full) => p as i64 - 1,
                (SplitKind::Ramified, Field::Real) => (p as i64 - 1) / 2,
                _ => 1,
            };
            for (index, g) in list.iter().enumerate() {
                gens.push(UnitGen {
                    tag: GenTag::PrimeGen { q, index, field },
                    value: g.clone(),
                });
                prime_data.push(Some(PrimeData {
                    q,
                    ramification,
                    inverse: g.invert()?,
                }));
            }
        }
        let inverses = gens
            .iter()
            .map(|g| g.value.invert())
            .collect::<Result<Vec<_>>>()?;
        let mut torsion_powers = vec![CycElt::one(p)];
        for _ in 1..torsion_order {
            let next = torsion_powers.last().unwrap() * &torsion;
            torsion_powers.push(next);
        }
        Ok(SUnitBasis {
            p,
            loc: loc.clone(),
            field,
            torsion,
            torsion_order,
            gens,
            inverses,
            prime_data,
            torsion_powers,
            log_cache: Mutex::default(),
        })
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    /// The elements of the torsion subgroup, torsion^0 first.
    pub fn torsion_elements(&self) -> &[CycElt] {
        &self.torsion_powers
    }
}

pub fn decompose_unit(u: &CycElt, basis: &SUnitBasis) -> Result<Decomposition> {
    basis.decompose(u)
}

pub fn s_unit_basis(p: usize, n: i64, field: Field) -> Result<SUnitBasis> {
    SUnitBasis::new(p, &Localization::new(n)?, field)
}

/// A vector over GF(2), written as a string of 0s and 1s.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct F2Vector {
    bits: Vec<bool>,
}

impl F2Vector {
    pub fn zero(len: usize) -> Self {
        F2Vector {
            bits: vec![false; len],
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        F2Vector { bits }
    }

    /// Bit i of `index` becomes coordinate i.
    pub fn from_index(len: usize, index: u64) -> Self {
        F2Vector {
            bits: (0..len).map(|i| i < 64 && (index >> i) & 1 == 1).collect(),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => usage(format!("class selector {s:?} must consist of 0 and 1")),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(F2Vector { bits })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|b| !b)
    }

    pub fn xor(&self, o: &F2Vector) -> F2Vector {
        assert_eq!(self.len(), o.len());
        F2Vector {
            bits: self.bits.iter().zip(&o.bits).map(|(a, b)| a ^ b).collect(),
        }
    }
}

impl fmt::Display for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            f.write_str(if *b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormIndex {
    pub formula_value: u128,
    pub constructive_value: u128,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormKernel {
    pub torsion_order: u64,
    pub rank: usize,
    pub generators: Vec<CycElt>,
    /// Exponents over the full basis, one row per generator.
    pub exponents: Vec<Vec<i64>>,
}

/// Both S-unit groups for a fixed (p, n) together with the norm map data.
pub struct UnitGroups {
    pub p: usize,
    pub loc: Localization,
    pub split: SplitSummary,
    pub real: SUnitBasis,
    pub full: SUnitBasis,
    /// Real-basis coordinates (torsion first) of g·ḡ for every full free generator.
    norm_rows: Vec<Vec<i64>>,
    image: F2Echelon,
    quotient_columns: Vec<usize>,
    different: CycElt,
    different_inv: CycElt,
}

impl fmt::Debug for UnitGroups {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UnitGroups")
            .field("p", &self.p)
            .field("n", &self.loc.n())
            .finish()
    }
}

impl UnitGroups {
    pub fn new(p: usize, n: i64) -> Result<Self> {
        check_supported(p)?;
        let loc = Localization::new(n)?;
        let split = split_summary(p as u64, n)?;
        let real = SUnitBasis::new(p, &loc, Field::Real)?;
        let full = SUnitBasis::new(p, &loc, Field::Full)?;
        let mut norm_rows = Vec::new();
        for g in &full.gens {
            let d = real.decompose(&g.value.norm_real())?;
            let mut row = vec![d.torsion as i64];
            row.extend(d.exponents);
            norm_rows.push(row);
        }
        let width = 1 + real.rank();
        let mod2: Vec<Vec<bool>> = norm_rows
            .iter()
            .map(|r| r.iter().map(|e| e.rem_euclid(2) == 1).collect())
            .collect();
        let image = F2Echelon::from_rows_right_pivots(width, &mod2);
        let quotient_columns = image.free_columns();
        let different = different_generator(p);
        let different_inv = different.invert()?;
        let ug = UnitGroups {
            p,
            loc,
            split,
            real,
            full,
            norm_rows,
            image,
            quotient_columns,
            different,
            different_inv,
        };
        if ug.quotient_columns != ug.expected_quotient_columns() {
            return Err(Error::Internal(format!(
                "cokernel of the norm map sits on columns {:?}",
                ug.quotient_columns
            )));
        }
        Ok(ug)
    }

    /// −1, the cyclotomic units and the inert prime generators.
    fn expected_quotient_columns(&self) -> Vec<usize> {
        let mut cols = vec![0];
        for (i, g) in self.real.gens.iter().enumerate() {
            let keep = match g.tag {
                GenTag::CycUnit { .. } => true,
                GenTag::PrimeGen { q, .. } => {
                    classify_prime(q, self.p as u64).map(|r| r.kind) == Ok(SplitKind::Inert)
                }
                _ => false,
            };
            if keep {
                cols.push(i + 1);
            }
        }
        cols
    }

    pub fn n(&self) -> i64 {
        self.loc.n()
    }

    pub fn different(&self) -> &CycElt {
        &self.different
    }

    pub fn different_inv(&self) -> &CycElt {
        &self.different_inv
    }

    pub fn quotient_dim(&self) -> usize {
        self.quotient_columns.len()
    }

    /// Real generators addressed by the quotient coordinates, −1 first.
    pub fn quotient_generators(&self) -> Vec<CycElt> {
        self.quotient_columns
            .iter()
            .map(|&c| {
                if c == 0 {
                    self.real.torsion.clone()
                } else {
                    self.real.gens[c - 1].value.clone()
                }
            })
            .collect()
    }

    pub fn quotient_labels(&self) -> Vec<String> {
        self.quotient_columns
            .iter()
            .map(|&c| {
                if c == 0 {
                    "-1".to_string()
                } else {
                    match &self.real.gens[c - 1].tag {
                        GenTag::CycUnit { a } => format!("eps_{a}"),
                        GenTag::PrimeGen { q, index, .. } => format!("g_{q}_{index}"),
                        t => format!("{t:?}"),
                    }
                }
            })
            .collect()
    }

    /// Image of a real unit in real units / norms.
    pub fn quotient_vector(&self, u: &CycElt) -> Result<F2Vector> {
        if !u.is_real() {
            return domain(format!("{u} is not real"));
        }
        let d = self.real.decompose(u)?;
        let mut v = vec![d.torsion % 2 == 1];
        v.extend(d.exponents.iter().map(|e| e.rem_euclid(2) == 1));
        let v = self.image.reduce(&v);
        Ok(F2Vector::from_bits(
            self.quotient_columns.iter().map(|&c| v[c]).collect(),
        ))
    }

    /// The real unit Π genᵢ^vᵢ representing a quotient vector.
    pub fn representative(&self, v: &F2Vector) -> Result<CycElt> {
        if v.len() != self.quotient_dim() {
            return usage(format!(
                "class vector has length {}, expected {}",
                v.len(),
                self.quotient_dim()
            ));
        }
        let mut u = CycElt::one(self.p);
        for (g, b) in self.quotient_generators().iter().zip(v.bits()) {
            if *b {
                u = &u * g;
            }
        }
        Ok(u)
    }

    pub fn norm_index(&self) -> NormIndex {
        let exp = (self.p as u32 - 1) / 2 + self.split.tau as u32;
        let width = 1 + self.real.rank();
        NormIndex {
            formula_value: 1u128 << exp,
            constructive_value: 1u128 << (width - self.image.rank()),
        }
    }

    /// Units w of the full ring with w·w̄ = 1.
    pub fn norm_kernel(&self) -> Result<NormKernel> {
        let rows: Vec<Vec<BigInt>> = self
            .norm_rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let kernel = integer_left_kernel(&rows, &[0]);
        let mut generators = Vec::new();
        let mut exponents = Vec::new();
        for k in kernel {
            let e: Vec<i64> = k
                .iter()
                .map(|x| i64::try_from(x).map_err(|_| Error::Internal("kernel exponent overflow".into())))
                .collect::<Result<_>>()?;
            let w = self.full.compose(&Decomposition {
                torsion: 0,
                exponents: e.clone(),
            });
            if !w.norm_real().is_one() {
                return Err(Error::Internal(format!("kernel element {w} has norm different from 1")));
            }
            generators.push(w);
            exponents.push(e);
        }
        let torsion = self
            .full
            .torsion_elements()
            .iter()
            .filter(|t| t.norm_real().is_one())
            .count();
        Ok(NormKernel {
            torsion_order: torsion as u64,
            rank: generators.len(),
            generators,
            exponents,
        })
    }

    pub fn formula_count(&self) -> u128 {
        self.norm_index().formula_value
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localization::rint;
    use num_traits::Signed;

    #[test]
    fn cyclotomic_units() {
        let e = cyclotomic_unit(5, 2).unwrap();
        assert_eq!(e, CycElt::from_int_coords(5, &[0, 0, 1, 1]).unwrap());
        assert!(e.is_real());
        assert_eq!(e.norm_abs().abs(), rint(1));
        let e7 = cyclotomic_unit(7, 2).unwrap();
        assert!(e7.is_real() && e7.norm_abs().abs() == rint(1));
        assert!(cyclotomic_unit(3, 2).is_err());
        assert!(cyclotomic_unit(7, 4).is_err());
    }

    #[test]
    fn prime_gens_small() {
        let l7 = Localization::new(7).unwrap();
        let g = prime_generator(3, &l7, 7, 0, Field::Full).unwrap();
        let a = CycElt::from_int_coords(3, &[3, 1]).unwrap();
        assert!(associated(&g, &a) || associated(&g, &a.conj()));
        let l2 = Localization::new(2).unwrap();
        assert_eq!(prime_generator(3, &l2, 2, 0, Field::Real).unwrap(), CycElt::from_int(3, 2));
        let l3 = Localization::new(3).unwrap();
        assert_eq!(
            prime_generator(3, &l3, 3, 0, Field::Full).unwrap(),
            &CycElt::one(3) - &CycElt::xi(3)
        );
        assert!(prime_generator(3, &l3, 2, 0, Field::Full).is_err());
    }

    #[test]
    fn ranks() {
        let b = s_unit_basis(3, 1, Field::Full).unwrap();
        assert_eq!((b.rank(), b.torsion_order), (0, 6));
        let b = s_unit_basis(3, 6, Field::Full).unwrap();
        assert_eq!(b.rank(), 2);
        let b = s_unit_basis(5, 1, Field::Real).unwrap();
        assert_eq!((b.rank(), b.torsion_order), (1, 2));
        assert!(s_unit_basis(23, 1, Field::Real).is_err());
    }

    #[test]
    fn decompositions() {
        let b = s_unit_basis(3, 3, Field::Full).unwrap();
        let one_minus = &CycElt::one(3) - &CycElt::xi(3);
        let x = &(-&CycElt::xi_pow(3, 2)) * &one_minus.pow(2);
        assert_eq!(x, CycElt::from_int(3, 3));
        let d = b.decompose(&x).unwrap();
        assert_eq!(d.exponents, vec![2]);
        assert_eq!(b.torsion.pow(d.torsion), -&CycElt::xi_pow(3, 2));
        assert_eq!(b.compose(&d), x);
        let r = s_unit_basis(5, 1, Field::Real).unwrap();
        let e = cyclotomic_unit(5, 2).unwrap();
        let d = r.decompose(&e.pow(2)).unwrap();
        assert_eq!((d.torsion, d.exponents), (0, vec![2]));
        assert_eq!(r.decompose(&CycElt::one(5)).unwrap().exponents, vec![0]);
        assert!(matches!(r.decompose(&CycElt::from_int(5, 2)), Err(Error::Domain(_))));
    }

    #[test]
    fn index_and_kernel() {
        for (p, n, idx) in [(3, 1, 2), (5, 1, 4), (3, 2, 4), (3, 3, 2)] {
            let ug = UnitGroups::new(p, n).unwrap();
            let ni = ug.norm_index();
            assert_eq!((ni.formula_value, ni.constructive_value), (idx, idx));
        }
        let ug = UnitGroups::new(3, 7).unwrap();
        let k = ug.norm_kernel().unwrap();
        assert_eq!((k.torsion_order, k.rank), (6, 1));
        let ug = UnitGroups::new(3, 3).unwrap();
        assert_eq!(ug.norm_kernel().unwrap().rank, 0);
    }

    #[test]
    fn quotient_vectors() {
        let ug = UnitGroups::new(3, 2).unwrap();
        let a = ug.quotient_vector(&CycElt::from_int(3, -1)).unwrap();
        let b = ug.quotient_vector(&CycElt::from_int(3, 2)).unwrap();
        assert!(!a.is_zero() && !b.is_zero() && a != b);
        assert!(ug.quotient_vector(&CycElt::one(3)).unwrap().is_zero());
        assert!(ug.quotient_vector(&CycElt::xi(3)).is_err());
    }
}
