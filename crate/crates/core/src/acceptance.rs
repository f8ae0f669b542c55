//! The acceptance battery, shared by the `selftest` command and the test suite.

use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cyclo::CycElt;
use crate::error::Result;
use crate::oracle::{oracle_report, SearchBound};
use crate::pairs::{class_eq, class_from_vector, count_classes, enumerate_classes, galois_twist, orbit_report};
use crate::sunits::{decompose_unit, Decomposition, SUnitBasis, UnitGroups};
use crate::symplectic::{centralizer_structure, invariant_of_matrix, matrix_from_pair, verify};

pub const GRID_P: [usize; 5] = [3, 5, 7, 11, 13];
pub const GRID_N: [i64; 11] = [1, 2, 3, 5, 6, 7, 10, 14, 15, 21, 35];
/// Class counts for p = 3 and n = 1, 2, 3, 6 as stated in criterion 2.
pub const STATED_P3_COUNTS: [(i64, u128); 4] = [(1, 2), (2, 4), (3, 4), (6, 8)];

#[derive(Clone, Debug)]
pub struct AcceptanceConfig {
    pub max_p: usize,
    pub oracle_height: u64,
    pub seed: u64,
}

impl Default for AcceptanceConfig {
    fn default() -> Self {
        AcceptanceConfig {
            max_p: 13,
            oracle_height: 6,
            seed: 0x5eed,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {} {}: {}: {} ({:.2} s)",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

/// Runs a check, folding errors into a failure and the time limit into the verdict.
fn timed(id: u8, name: &'static str, limit: Duration, f: impl FnOnce() -> Result<(bool, String)>) -> CriterionResult {
    let start = Instant::now();
    let (mut passed, mut detail) = match f() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    let elapsed = start.elapsed();
    if elapsed > limit {
        passed = false;
        detail.push_str(&format!("; over the {} s limit", limit.as_secs()));
    }
    CriterionResult {
        id,
        name,
        passed,
        detail,
        elapsed,
    }
}

fn grid(cfg: &AcceptanceConfig) -> impl Iterator<Item = (usize, i64)> + '_ {
    GRID_P
        .into_iter()
        .filter(move |&p| p <= cfg.max_p)
        .flat_map(|p| GRID_N.into_iter().map(move |n| (p, n)))
}

fn construction_grid(cfg: &AcceptanceConfig) -> Vec<(usize, i64)> {
    let mut out = Vec::new();
    for p in [3usize, 5, 7].into_iter().filter(|&p| p <= cfg.max_p) {
        for n in [1, 2, 7, p as i64, 2 * p as i64] {
            if !out.contains(&(p, n)) {
                out.push((p, n));
            }
        }
    }
    out
}

fn failures_summary(bad: &[String], ok_msg: String) -> (bool, String) {
    if bad.is_empty() {
        (true, ok_msg)
    } else {
        let shown: Vec<&str> = bad.iter().take(6).map(String::as_str).collect();
        (false, format!("{} failure(s): {}", bad.len(), shown.join("; ")))
    }
}

pub fn criterion_1(cfg: &AcceptanceConfig) -> CriterionResult {
    timed(1, "count formula two-path agreement", Duration::from_secs(120), || {
        let mut bad = Vec::new();
        let mut settings = 0;
        for (p, n) in grid(cfg) {
            settings += 1;
            let ug = UnitGroups::new(p, n)?;
            let idx = ug.norm_index();
            let count = count_classes(p, n, None)?;
            let classes = enumerate_classes(&ug)?.classes.len() as u128;
            if idx.formula_value != idx.constructive_value || classes != count {
                bad.push(format!(
                    "({p},{n}): formula {} constructive {} enumerated {classes} counted {count}",
                    idx.formula_value, idx.constructive_value
                ));
            }
        }
        Ok(failures_summary(&bad, format!("{settings} settings agree")))
    })
}

pub fn criterion_2(cfg: &AcceptanceConfig) -> CriterionResult {
    timed(2, "oracle validation at p = 3", Duration::from_secs(60), || {
        let bound = SearchBound::new(cfg.oracle_height)?;
        let mut bad = Vec::new();
        let mut seen = Vec::new();
        for (n, stated) in STATED_P3_COUNTS {
            let r = oracle_report(n, bound)?;
            let observed = r.invariant_classes_observed as u128;
            seen.push(format!("n={n}: {observed}"));
            if observed != r.predicted_count || r.predicted_count != stated {
                bad.push(format!(
                    "n={n}: observed {observed}, count_classes {}, stated {stated}",
                    r.predicted_count
                ));
            }
            if !r.sound || !r.witnesses.iter().all(|w| w.constructed_matches) {
                bad.push(format!("n={n}: oracle partition inconsistent with invariants"));
            }
        }
        Ok(failures_summary(&bad, format!("observed {}", seen.join(", "))))
    })
}

pub fn criterion_3(cfg: &AcceptanceConfig) -> CriterionResult {
    timed(3, "construction soundness", Duration::from_secs(120), || {
        let mut bad = Vec::new();
        let mut total = 0;
        for (p, n) in construction_grid(cfg) {
            let ug = UnitGroups::new(p, n)?;
            for v in enumerate_classes(&ug)?.classes {
                total += 1;
                let m = matrix_from_pair(&ug, &class_from_vector(&ug, &v)?)?;
                let r = verify(&m);
                if !r.all() {
                    bad.push(format!("({p},{n}) class {v}: {r:?}"));
                }
            }
        }
        Ok(failures_summary(&bad, format!("{total} matrices verified")))
    })
}

pub fn criterion_4(cfg: &AcceptanceConfig) -> CriterionResult {
    timed(4, "bijection round trip", Duration::from_secs(120), || {
        let mut bad = Vec::new();
        let mut total = 0;
        for (p, n) in construction_grid(cfg) {
            let ug = UnitGroups::new(p, n)?;
            for v in enumerate_classes(&ug)?.classes {
                let c = class_from_vector(&ug, &v)?;
                let m = matrix_from_pair(&ug, &c)?;
                if !class_eq(&invariant_of_matrix(&ug, &m)?, &c)? {
                    bad.push(format!("({p},{n}) class {v} does not come back"));
                }
                for l in 1..p as u64 {
                    let k = (1..p as u64).find(|k| (k * l) % p as u64 == 1).expect("p is prime");
                    total += 1;
                    let lhs = invariant_of_matrix(&ug, &m.pow(l))?;
                    if !class_eq(&lhs, &galois_twist(&ug, &c, k)?)? {
                        bad.push(format!("({p},{n}) class {v}: power {l} is not the twist by {k}"));
                    }
                }
            }
        }
        Ok(failures_summary(&bad, format!("{total} powers match their twists")))
    })
}

pub fn criterion_5(cfg: &AcceptanceConfig) -> CriterionResult {
    timed(5, "normalizer over centralizer", Duration::from_secs(60), || {
        let mut bad = Vec::new();
        let mut seen = Vec::new();
        for p in [5usize, 7, 13].into_iter().filter(|&p| p <= cfg.max_p) {
            let ug = UnitGroups::new(p, p as i64)?;
            let r = orbit_report(&ug)?;
            let js: Vec<u64> = r.classes.iter().map(|e| e.j).collect();
            if js.iter().any(|j| j % 2 == 0 || !(p as u64 - 1).is_multiple_of(*j)) {
                bad.push(format!("p={p}: j values {js:?}"));
            }
            let has = |j: u64| js.contains(&j);
            let ok = match p {
                5 => js.iter().all(|&j| j == 1),
                _ => has(1) && has(3),
            };
            if !ok {
                bad.push(format!("p={p}: j values {js:?}"));
            }
            seen.push(format!("p={p}: j in {:?}", r.odd_divisors_covered));
        }
        Ok(failures_summary(&bad, seen.join(", ")))
    })
}

pub fn criterion_6(cfg: &AcceptanceConfig) -> CriterionResult {
    timed(6, "complex conjugation twist moves every class", Duration::from_secs(120), || {
        let mut bad = Vec::new();
        let mut total = 0;
        for (p, n) in grid(cfg) {
            let ug = UnitGroups::new(p, n)?;
            for v in enumerate_classes(&ug)?.classes {
                total += 1;
                let c = class_from_vector(&ug, &v)?;
                if class_eq(&galois_twist(&ug, &c, p as u64 - 1)?, &c)? {
                    bad.push(format!("({p},{n}) class {v} is fixed"));
                }
            }
        }
        Ok(failures_summary(&bad, format!("{total} classes moved")))
    })
}

pub fn criterion_7(cfg: &AcceptanceConfig) -> CriterionResult {
    timed(7, "centralizer structure", Duration::from_secs(30), || {
        let mut bad = Vec::new();
        let mut flagged = Vec::new();
        for (p, n) in grid(cfg) {
            let ug = UnitGroups::new(p, n)?;
            let k = ug.norm_kernel()?;
            let s = centralizer_structure(&ug)?;
            if s.torsion != 2 * p as u64 || k.torsion_order != 2 * p as u64 {
                bad.push(format!("({p},{n}): torsion {}", s.torsion));
            }
            if n == 1 {
                let roots: Vec<&CycElt> = ug.full.torsion_elements().iter().collect();
                let in_kernel = roots.iter().filter(|w| w.norm_real().is_one()).count();
                if in_kernel != 2 * p {
                    bad.push(format!("({p},1): {in_kernel} roots of unity in the kernel"));
                }
            }
            if k.generators.iter().any(|g| !g.norm_real().is_one()) {
                bad.push(format!("({p},{n}): a kernel generator has g conj(g) != 1"));
            }
            if s.agree != (s.rank_first_principles == s.rank_closed_form) {
                bad.push(format!("({p},{n}): agreement flag miscomputed"));
            }
            if ug.split.p_divides_n {
                if !s.agree {
                    flagged.push(format!("({p},{n})"));
                }
            } else if s.rank_first_principles != ug.split.sigma as usize {
                bad.push(format!("({p},{n}): rank {} but sigma {}", s.rank_first_principles, ug.split.sigma));
            }
        }
        Ok(failures_summary(
            &bad,
            format!("ranks match sigma when p does not divide n; sigma+1 flagged as disagreeing at {}", flagged.join(" ")),
        ))
    })
}

fn random_decomposition(basis: &SUnitBasis, rng: &mut ChaCha8Rng) -> Decomposition {
    Decomposition {
        torsion: rng.gen_range(0..basis.torsion_order),
        exponents: (0..basis.rank()).map(|_| rng.gen_range(-2..=2)).collect(),
    }
}

pub fn criterion_8(cfg: &AcceptanceConfig) -> CriterionResult {
    timed(8, "unit machinery", Duration::from_secs(60), || {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut bad = Vec::new();
        let mut total = 0;
        for (p, n) in grid(cfg) {
            let ug = UnitGroups::new(p, n)?;
            for basis in [&ug.full, &ug.real] {
                for _ in 0..100 {
                    total += 1;
                    let d = random_decomposition(basis, &mut rng);
                    let u = basis.compose(&d);
                    let back = decompose_unit(&u, basis)?;
                    if back != d || basis.compose(&back) != u {
                        bad.push(format!("({p},{n}) {:?}: {d:?} came back as {back:?}", basis.field));
                    }
                }
            }
            for _ in 0..100 {
                let u1 = ug.real.compose(&random_decomposition(&ug.real, &mut rng));
                let u2 = ug.real.compose(&random_decomposition(&ug.real, &mut rng));
                let lhs = ug.quotient_vector(&(&u1 * &u2))?;
                let rhs = ug.quotient_vector(&u1)?.xor(&ug.quotient_vector(&u2)?);
                if lhs != rhs {
                    bad.push(format!("({p},{n}): quotient_vector not multiplicative"));
                }
            }
        }
        Ok(failures_summary(&bad, format!("{total} decompositions and 100 product pairs per setting")))
    })
}

pub fn run_all(cfg: &AcceptanceConfig) -> Vec<CriterionResult> {
    vec![
        criterion_1(cfg),
        criterion_2(cfg),
        criterion_3(cfg),
        criterion_4(cfg),
        criterion_5(cfg),
        criterion_6(cfg),
        criterion_7(cfg),
        criterion_8(cfg),
    ]
}
