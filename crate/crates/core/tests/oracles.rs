//! Worked examples checked against independent test-side computations: schoolbook
//! polynomial arithmetic mod Φ_p, floating-point embeddings, modular powers and
//! small rational matrices.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

use sptorsion::cyclo::{different_generator, CycElt};
use sptorsion::linalg::QMatrix;
use sptorsion::localization::Localization;
use sptorsion::oracle::{enumerate_order_p_sl2, oracle_report, SearchBound};
use sptorsion::pairs::{
    action_on_centralizer, class_eq, class_from_vector, count_classes, enumerate_classes, galois_twist, make_pair,
    orbit_report, IdealBasis,
};
use sptorsion::splitting::{classify_prime, residue_degree, split_summary, SplitKind};
use sptorsion::sunits::{cyclotomic_unit, decompose_unit, prime_generator, s_unit_basis, Field, GenTag, UnitGroups};
use sptorsion::symplectic::{
    centralizer_matrix, centralizer_structure, conjugacy_test, gram_form, invariant_of_matrix, matrix_from_pair,
    symplectic_reduce, verify, SympMatrix,
};

type Q = Ratio<i128>;

// ---- polynomial oracle: ℚ[x]/(Φ_p) by long division ----

fn q(n: i128, d: i128) -> Q {
    Q::new(n, d)
}

fn reduce(p: usize, mut a: Vec<Q>) -> Vec<Q> {
    // subtract multiples of Φ_p = 1 + x + … + x^(p−1) from the top down
    while a.len() > p - 1 {
        let top = a.pop().unwrap();
        let shift = a.len() - (p - 1);
        for i in 0..p - 1 {
            a[shift + i] -= top;
        }
    }
    a.resize(p - 1, Q::zero());
    a
}

fn pmul(p: usize, a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); a.len() + b.len()];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    reduce(p, out)
}

fn substitute(p: usize, a: &[Q], k: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); p];
    for (i, c) in a.iter().enumerate() {
        out[(i * k) % p] += c;
    }
    reduce(p, out)
}

fn poly(p: usize, c: &[i128]) -> Vec<Q> {
    reduce(p, c.iter().map(|&x| Q::from_integer(x)).collect())
}

fn to_lib(p: usize, a: &[Q]) -> CycElt {
    let coords: Vec<BigRational> = a
        .iter()
        .map(|x| BigRational::new(BigInt::from(*x.numer()), BigInt::from(*x.denom())))
        .collect();
    CycElt::from_coords(p, &coords).unwrap()
}

fn from_lib(x: &CycElt) -> Vec<Q> {
    x.coords()
        .iter()
        .map(|c| q(c.numer().to_i128().unwrap(), c.denom().to_i128().unwrap()))
        .collect()
}

// ---- embedding oracle ----

fn embed(a: &[Q], p: usize, k: usize) -> Complex64 {
    a.iter()
        .enumerate()
        .map(|(i, c)| {
            let t = 2.0 * std::f64::consts::PI * ((i * k) % p) as f64 / p as f64;
            Complex64::from_polar(c.to_f64().unwrap(), t)
        })
        .sum()
}

fn norm_f64(a: &[Q], p: usize) -> f64 {
    (1..p).map(|k| embed(a, p, k)).product::<Complex64>().re
}

fn trace_f64(a: &[Q], p: usize) -> f64 {
    (1..p).map(|k| embed(a, p, k).re).sum()
}

// ---- small matrix oracle ----

fn small(m: &QMatrix) -> Vec<Vec<Q>> {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(|c| q(c.numer().to_i128().unwrap(), c.denom().to_i128().unwrap())).collect())
        .collect()
}

fn mmul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

fn is_id(a: &[Vec<Q>]) -> bool {
    a.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, x)| *x == if i == j { Q::one() } else { Q::zero() }))
}

fn det(mut a: Vec<Vec<Q>>) -> Q {
    let n = a.len();
    let mut d = Q::one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| !a[r][c].is_zero()) else { return Q::zero() };
        if piv != c {
            a.swap(piv, c);
            d = -d;
        }
        d *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                let v = f * a[c][k];
                a[r][k] -= v;
            }
        }
    }
    d
}

fn ord(q: u64, p: u64) -> u64 {
    let mut x = q % p;
    let mut k = 1;
    while x != 1 {
        x = x * q % p;
        k += 1;
    }
    k
}

fn loc(n: i64) -> Localization {
    Localization::new(n).unwrap()
}

fn m3(rows: &[&[i64]], n: i64) -> SympMatrix {
    SympMatrix::from_i64(3, n, rows).unwrap()
}

// ---- cyclotomic arithmetic ----

#[test]
fn inverse_of_one_minus_xi() {
    let x = CycElt::parse(3, "1, -1").unwrap();
    let inv = x.invert().unwrap();
    assert_eq!(pmul(3, &from_lib(&inv), &poly(3, &[1, -1])), poly(3, &[1]));
    // (1 − ξ²)/3 reduces to (2 + ξ)/3
    assert_eq!(from_lib(&inv), reduce(3, vec![q(1, 3), Q::zero(), q(-1, 3)]));
}

#[test]
fn galois_substitution() {
    let x = to_lib(3, &poly(3, &[1, 2]));
    assert_eq!(from_lib(&x.galois(2)), substitute(3, &poly(3, &[1, 2]), 2));
    assert_eq!(from_lib(&x.galois(2)), poly(3, &[-1, -2]));
    for p in [5usize, 7, 11] {
        let a = poly(p, &[3, -1, 4, 1, -5][..p.min(5)]);
        for k in 1..p {
            assert_eq!(from_lib(&to_lib(p, &a).galois(k as i64)), substitute(p, &a, k));
        }
    }
}

#[test]
fn products_match_schoolbook() {
    for p in [3usize, 5, 7, 13] {
        let a = poly(p, &[2, -1, 0, 3]);
        let b = poly(p, &[-1, 1, 1]);
        assert_eq!(from_lib(&(&to_lib(p, &a) * &to_lib(p, &b))), pmul(p, &a, &b));
    }
}

#[test]
fn norms_against_embeddings() {
    // Φ₅(−1) = 1
    assert_eq!((0..5).map(|i| (-1i64).pow(i)).sum::<i64>(), 1);
    let x = to_lib(5, &poly(5, &[1, 1]));
    assert_eq!(x.norm_abs(), BigRational::one());
    assert!((norm_f64(&poly(5, &[1, 1]), 5) - 1.0).abs() < 1e-9);
    for (p, c) in [(7usize, vec![3, 1, -2]), (11, vec![1, 0, 2, 1]), (3, vec![3, 1])] {
        let a = poly(p, &c);
        let exact = to_lib(p, &a).norm_abs().to_f64().unwrap();
        assert!((exact - norm_f64(&a, p)).abs() < 1e-6 * exact.abs().max(1.0));
        let tr = to_lib(p, &a).trace().to_f64().unwrap();
        assert!((tr - trace_f64(&a, p)).abs() < 1e-9);
    }
}

#[test]
fn different_generator_values() {
    // 3ξ²·(ξ − 1)⁻¹ with (ξ − 1)⁻¹ = (ξ² − 1)/3
    let d = pmul(3, &poly(3, &[0, 0, 3]), &reduce(3, vec![q(-1, 3), Q::zero(), q(1, 3)]));
    assert_eq!(d, poly(3, &[1, 2]));
    let lib = different_generator(3);
    assert_eq!(from_lib(&lib), d);
    assert_eq!(from_lib(&lib.conj()), poly(3, &[-1, -2]));
    // D·D̄ = p²/(2 − ξ − ξ̄): real and totally positive, rational only for p = 3
    for p in [3usize, 5, 7, 11, 13] {
        let dd = different_generator(p).norm_real();
        assert!(dd.is_real());
        let a = from_lib(&dd);
        for k in 1..p {
            let z = embed(&a, p, k);
            assert!(z.im.abs() < 1e-9 && z.re > 0.0);
        }
        assert_eq!(dd.as_rational().is_some(), p == 3);
    }
    assert_eq!(different_generator(3).norm_real().as_rational(), Some(BigRational::from_integer(3.into())));
}

#[test]
fn units_by_norm() {
    let x = CycElt::parse(3, "1, -1").unwrap();
    assert!((norm_f64(&from_lib(&x), 3) - 3.0).abs() < 1e-9);
    assert!(!x.is_unit(&loc(1)));
    assert!(x.is_unit(&loc(3)));
    let y = to_lib(5, &poly(5, &[0, 0, 1, 1]));
    assert!((norm_f64(&from_lib(&y), 5).abs() - 1.0).abs() < 1e-9);
    assert!(y.is_unit(&loc(1)));
}

// ---- splitting ----

#[test]
fn residue_degrees_against_modpow() {
    assert_eq!(residue_degree(3, 7).unwrap(), 6);
    for p in [3u64, 5, 7, 11, 13, 17, 19] {
        for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
            if q != p {
                assert_eq!(residue_degree(q, p).unwrap(), ord(q, p), "q={q} p={p}");
            }
        }
    }
}

#[test]
fn prime_classification() {
    let r = classify_prime(2, 3).unwrap();
    assert_eq!((r.f, r.kind, r.count), (2, SplitKind::Inert, 1));
    let r = classify_prime(2, 7).unwrap();
    assert_eq!((r.f, r.kind, r.count), (3, SplitKind::Split, 1));
    let r = classify_prime(7, 7).unwrap();
    assert_eq!((r.kind, r.count), (SplitKind::Ramified, 1));

    let s = split_summary(7, 6).unwrap();
    assert_eq!((s.tau, s.sigma), (1, 1));
    let s = split_summary(5, 2).unwrap();
    assert_eq!((s.tau, s.sigma), (1, 0));

    // τ and σ from the order of q alone
    for p in [3u64, 5, 7, 11, 13] {
        for n in [1i64, 2, 3, 5, 6, 7, 10, 14, 15, 21, 35] {
            let (mut tau, mut sigma) = (0, 0);
            for q in [2u64, 3, 5, 7].into_iter().filter(|q| n % *q as i64 == 0 && *q != p) {
                let f = ord(q, p);
                if f.is_multiple_of(2) {
                    tau += (p - 1) / f;
                } else {
                    sigma += (p - 1) / (2 * f);
                }
            }
            let s = split_summary(p, n).unwrap();
            assert_eq!((s.tau, s.sigma), (tau, sigma), "p={p} n={n}");
        }
    }
}

// ---- S-units ----

#[test]
fn cyclotomic_units() {
    let e = cyclotomic_unit(5, 2).unwrap();
    assert_eq!(from_lib(&e), poly(5, &[0, 0, 1, 1]));
    let e7 = cyclotomic_unit(7, 2).unwrap();
    assert!(e7.is_real());
    assert!((norm_f64(&from_lib(&e7), 7).abs() - 1.0).abs() < 1e-9);
}

#[test]
fn prime_generators_by_norm() {
    let g = prime_generator(3, &loc(7), 7, 0, Field::Full).unwrap();
    assert!((norm_f64(&from_lib(&g), 3) - 7.0).abs() < 1e-9);
    // an associate of 3 + ξ or of its conjugate 3 + ξ²
    let t = CycElt::parse(3, "3, 1").unwrap();
    let assoc = |x: &CycElt| g.div(x).unwrap().is_unit(&loc(1));
    assert!(assoc(&t) || assoc(&t.conj()));
    assert_eq!(t.norm_abs(), BigRational::from_integer(7.into()));

    let g3 = prime_generator(3, &loc(3), 3, 0, Field::Full).unwrap();
    assert!(g3.div(&CycElt::parse(3, "1, -1").unwrap()).unwrap().is_unit(&loc(1)));
}

#[test]
fn basis_shapes() {
    let b = s_unit_basis(3, 1, Field::Full).unwrap();
    assert_eq!(from_lib(&b.torsion), poly(3, &[0, -1]));
    assert_eq!(b.rank(), 0);
    let b = s_unit_basis(3, 6, Field::Full).unwrap();
    assert_eq!(b.rank(), 2);
    let qs: Vec<u64> = b
        .gens
        .iter()
        .filter_map(|g| match g.tag {
            GenTag::PrimeGen { q, .. } => Some(q),
            _ => None,
        })
        .collect();
    assert_eq!(qs, vec![2, 3]);
    let b = s_unit_basis(5, 1, Field::Real).unwrap();
    assert_eq!((b.torsion_order, b.rank()), (2, 1));
}

#[test]
fn decomposition_of_three() {
    // 3 = −ξ²·(1 − ξ)²
    let one_minus = poly(3, &[1, -1]);
    let prod = pmul(3, &poly(3, &[0, 0, -1]), &pmul(3, &one_minus, &one_minus));
    assert_eq!(prod, poly(3, &[3]));

    let b = s_unit_basis(3, 3, Field::Full).unwrap();
    let d = decompose_unit(&CycElt::from_int(3, 3), &b).unwrap();
    assert_eq!(d.exponents.len(), 1);
    let g = &b.gens[0].value;
    let rest = CycElt::from_int(3, 3).div(&g.pow(d.exponents[0].unsigned_abs())).unwrap();
    assert_eq!(b.torsion.pow(d.torsion), rest);
    assert_eq!(b.compose(&d), CycElt::from_int(3, 3));
    if from_lib(g) == one_minus {
        assert_eq!(d.exponents, vec![2]);
        assert_eq!(from_lib(&b.torsion.pow(d.torsion)), poly(3, &[0, 0, -1]));
    }
    assert_eq!(decompose_unit(&CycElt::one(3), &b).unwrap().exponents, vec![0]);
    let r = s_unit_basis(5, 1, Field::Real).unwrap();
    let e = cyclotomic_unit(5, 2).unwrap();
    assert_eq!(decompose_unit(&e.pow(2), &r).unwrap().exponents, vec![2]);
}

#[test]
fn norm_indices() {
    for (p, n, v) in [(3usize, 1i64, 2u128), (5, 1, 4), (3, 2, 4)] {
        let idx = UnitGroups::new(p, n).unwrap().norm_index();
        assert_eq!((idx.formula_value, idx.constructive_value), (v, v));
    }
}

#[test]
fn norm_kernels() {
    let k = UnitGroups::new(3, 1).unwrap().norm_kernel().unwrap();
    assert_eq!((k.torsion_order, k.rank), (6, 0));

    let ug = UnitGroups::new(3, 7).unwrap();
    let k = ug.norm_kernel().unwrap();
    assert_eq!((k.torsion_order, k.rank), (6, 1));
    let w = CycElt::parse(3, "3, 1").unwrap().div(&CycElt::parse(3, "2, -1").unwrap()).unwrap();
    assert!((norm_f64(&from_lib(&w), 3) - 1.0).abs() < 1e-9);
    assert!(w.norm_real().is_one());
    // the computed generator is ±ξ^a·w^(±1)
    let g = &k.generators[0];
    let roots = ug.full.torsion_elements();
    assert!(roots.contains(&g.div(&w).unwrap()) || roots.contains(&(g * &w)));

    let k = UnitGroups::new(3, 3).unwrap().norm_kernel().unwrap();
    assert_eq!((k.torsion_order, k.rank), (6, 0));
}

// ---- pairs ----

#[test]
fn class_counts() {
    for (p, n) in [(3usize, 1i64), (5, 1), (7, 6), (3, 2), (13, 35)] {
        let s = split_summary(p as u64, n).unwrap();
        let expected = 1u128 << ((p as u64 - 1) / 2 + s.tau);
        assert_eq!(count_classes(p, n, None).unwrap(), expected);
    }
    assert_eq!(count_classes(7, 6, None).unwrap(), 16);
    assert_eq!(enumerate_classes(&UnitGroups::new(3, 1).unwrap()).unwrap().classes.len(), 2);
    assert_eq!(enumerate_classes(&UnitGroups::new(3, 2).unwrap()).unwrap().classes.len(), 4);
    assert_eq!(enumerate_classes(&UnitGroups::new(5, 1).unwrap()).unwrap().classes.len(), 4);
}

#[test]
fn minus_one_is_not_a_norm() {
    let ug = UnitGroups::new(3, 1).unwrap();
    let r = IdealBasis::unit(3, &ug.loc);
    let minus = make_pair(&ug, r.clone(), CycElt::from_int(3, -1)).unwrap();
    let one = make_pair(&ug, r, CycElt::one(3)).unwrap();
    assert!(!minus.normalized.is_zero());
    assert!(!class_eq(&minus, &one).unwrap());
    // x·x̄ is totally positive
    for c in [[1i128, 2], [3, -1], [0, 5]] {
        let a = poly(3, &c);
        let nn = pmul(3, &a, &substitute(3, &a, 2));
        for k in 1..3 {
            assert!(embed(&nn, 3, k).re > 0.0);
        }
    }
}

#[test]
fn conjugation_twist_negates() {
    for (p, n) in [(3usize, 1i64), (5, 2), (7, 7)] {
        let ug = UnitGroups::new(p, n).unwrap();
        for v in enumerate_classes(&ug).unwrap().classes {
            let c = class_from_vector(&ug, &v).unwrap();
            let t = galois_twist(&ug, &c, p as u64 - 1).unwrap();
            assert_eq!(t.normalized, ug.quotient_vector(&-&c.representative).unwrap());
        }
    }
}

#[test]
fn orbit_orders() {
    let r = orbit_report(&UnitGroups::new(5, 5).unwrap()).unwrap();
    assert!(r.classes.iter().all(|e| e.j == 1));
    let r = orbit_report(&UnitGroups::new(7, 7).unwrap()).unwrap();
    assert!(r.classes.iter().all(|e| e.j == 1 || e.j == 3));
    assert!(r.classes.iter().any(|e| e.j == 3));
    assert!(r.classes.iter().all(|e| !e.stabilizer.contains(&6)));
}

#[test]
fn action_on_roots() {
    let w = action_on_centralizer(3, 2, &-&CycElt::xi(3)).unwrap();
    assert_eq!(from_lib(&w), poly(3, &[0, 0, -1]));
    assert_ne!(w, -&CycElt::xi(3));
    let ug = UnitGroups::new(3, 7).unwrap();
    let g = &ug.norm_kernel().unwrap().generators[0];
    let img = action_on_centralizer(3, 2, g).unwrap();
    assert!(img.norm_real().is_one() && img.in_ring(&ug.loc));
}

// ---- symplectic ----

#[test]
fn gram_of_identity_class() {
    let ug = UnitGroups::new(3, 1).unwrap();
    let c = class_from_vector(&ug, &enumerate_classes(&ug).unwrap().classes[0]).unwrap();
    let g = gram_form(&ug, &c).unwrap();
    // tr(ξ̄/D) by embeddings
    let xi_bar_over_d = pmul(3, &poly(3, &[0, 0, 1]), &from_lib(&different_generator(3).invert().unwrap()));
    assert!((trace_f64(&xi_bar_over_d, 3) + 1.0).abs() < 1e-9);
    assert_eq!(small(&g.gram), vec![vec![q(0, 1), q(-1, 1)], vec![q(1, 1), q(0, 1)]]);

    let ug5 = UnitGroups::new(5, 1).unwrap();
    let c5 = class_from_vector(&ug5, &enumerate_classes(&ug5).unwrap().classes[0]).unwrap();
    let g5 = small(&gram_form(&ug5, &c5).unwrap().gram);
    for i in 0..4 {
        for j in 0..4 {
            assert_eq!(g5[i][j], -g5[j][i]);
        }
    }
    assert_eq!(det(g5).abs(), Q::one());
}

#[test]
fn reduction_of_minus_j() {
    let g = QMatrix::from_i64(&[&[0, -1], &[1, 0]]);
    let s = symplectic_reduce(&g, &loc(1)).unwrap();
    let ss = small(&s);
    let st: Vec<Vec<Q>> = (0..2).map(|i| (0..2).map(|j| ss[j][i]).collect()).collect();
    let j = mmul(&mmul(&st, &small(&g)), &ss);
    assert_eq!(j, vec![vec![q(0, 1), q(1, 1)], vec![q(-1, 1), q(0, 1)]]);
    assert_eq!(ss, vec![vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(0, 1)]]);
}

#[test]
fn constructed_matrices() {
    let ug = UnitGroups::new(3, 1).unwrap();
    let c = class_from_vector(&ug, &enumerate_classes(&ug).unwrap().classes[0]).unwrap();
    let m = matrix_from_pair(&ug, &c).unwrap();
    let sm = small(m.entries());
    assert_eq!(sm[0][0] + sm[1][1], q(-1, 1));
    assert_eq!(det(sm.clone()), Q::one());
    assert!(is_id(&mmul(&mmul(&sm, &sm), &sm)));
    assert!(conjugacy_test(&ug, &m, &m3(&[&[0, -1], &[1, -1]], 1)).unwrap());

    let ug5 = UnitGroups::new(5, 1).unwrap();
    let c5 = class_from_vector(&ug5, &enumerate_classes(&ug5).unwrap().classes[0]).unwrap();
    let m5 = small(matrix_from_pair(&ug5, &c5).unwrap().entries());
    let mut pw = m5.clone();
    for _ in 0..4 {
        pw = mmul(&pw, &m5);
    }
    assert!(is_id(&pw));

    let ug2 = UnitGroups::new(3, 2).unwrap();
    let ms: Vec<SympMatrix> = enumerate_classes(&ug2)
        .unwrap()
        .classes
        .iter()
        .map(|v| matrix_from_pair(&ug2, &class_from_vector(&ug2, v).unwrap()).unwrap())
        .collect();
    assert_eq!(ms.len(), 4);
    for i in 0..4 {
        for j in 0..4 {
            assert_eq!(conjugacy_test(&ug2, &ms[i], &ms[j]).unwrap(), i == j);
        }
    }
}

#[test]
fn standard_order_three_matrix() {
    let m = m3(&[&[0, -1], &[1, -1]], 1);
    let sm = small(m.entries());
    assert!(is_id(&mmul(&mmul(&sm, &sm), &sm)));
    assert!(verify(&m).all());
    let ug = UnitGroups::new(3, 1).unwrap();
    let c = invariant_of_matrix(&ug, &m).unwrap();
    assert!(c.normalized.is_zero());
    let c2 = invariant_of_matrix(&ug, &m.pow(2)).unwrap();
    assert_eq!(c2.normalized, galois_twist(&ug, &c, 2).unwrap().normalized);
    assert!(!conjugacy_test(&ug, &m, &m.pow(2)).unwrap());

    // n = 7: the matrix answer agrees with the class computation
    let ug7 = UnitGroups::new(3, 7).unwrap();
    let m7 = m3(&[&[0, -1], &[1, -1]], 7);
    let a = invariant_of_matrix(&ug7, &m7).unwrap();
    let by_pairs = class_eq(&a, &galois_twist(&ug7, &a, 2).unwrap()).unwrap();
    assert_eq!(conjugacy_test(&ug7, &m7, &m7.pow(2)).unwrap(), by_pairs);
}

#[test]
fn centralizers() {
    let ug = UnitGroups::new(3, 7).unwrap();
    let c = class_from_vector(&ug, &enumerate_classes(&ug).unwrap().classes[0]).unwrap();
    let m = matrix_from_pair(&ug, &c).unwrap();
    let w = CycElt::parse(3, "3, 1").unwrap().div(&CycElt::parse(3, "2, -1").unwrap()).unwrap();
    let z = centralizer_matrix(&ug, &c, &w).unwrap();
    assert_eq!(z.mul(&m), m.mul(&z));
    let sz = small(z.entries());
    let mut pw = sz.clone();
    for _ in 1..=24 {
        assert!(!is_id(&pw));
        pw = mmul(&pw, &sz);
    }

    for (p, n, t, r1, r2, agree) in [(3usize, 1i64, 6u64, 0usize, 0usize, true), (3, 7, 6, 1, 1, true), (3, 3, 6, 0, 1, false)] {
        let s = centralizer_structure(&UnitGroups::new(p, n).unwrap()).unwrap();
        assert_eq!((s.torsion, s.rank_first_principles, s.rank_closed_form, s.agree), (t, r1, r2, agree));
    }
}

// ---- brute force ----

#[test]
fn sl2_enumeration() {
    let list = enumerate_order_p_sl2(1, SearchBound::new(2).unwrap()).unwrap();
    assert!(list.contains(&m3(&[&[0, -1], &[1, -1]], 1)));
    assert!(list.contains(&m3(&[&[-1, 1], &[-1, 0]], 1)));
    for m in &list {
        let sm = small(m.entries());
        assert_eq!(sm[0][0] + sm[1][1], q(-1, 1));
        assert!(is_id(&mmul(&mmul(&sm, &sm), &sm)));
    }
}

#[test]
fn oracle_partitions() {
    let b = SearchBound::new(6).unwrap();
    let r = oracle_report(1, b).unwrap();
    assert_eq!((r.invariant_classes_observed, r.predicted_count), (2, 2));
    let r = oracle_report(2, b).unwrap();
    assert_eq!((r.invariant_classes_observed, r.predicted_count), (4, 4));
    let r = oracle_report(3, b).unwrap();
    assert!(r.invariant_classes_observed as u128 <= r.predicted_count);
    assert!(r.sound && r.witnesses.iter().all(|w| w.constructed_matches));
}
