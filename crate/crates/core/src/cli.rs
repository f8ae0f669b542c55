//! The `sptorsion` command line.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::acceptance::{run_all, AcceptanceConfig};
use crate::error::{usage, Error, Result};
use crate::pairs::{class_from_vector, count_classes, orbit_report, OrbitEntry};
use crate::splitting::{split_summary, SplitKind, SplitSummary};
use crate::sunits::{check_supported, decompose::start_precision, F2Vector, UnitGroups};
use crate::symplectic::{centralizer_structure, invariant_of_matrix, matrix_from_pair, verify, CentralizerStructure, SympMatrix};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "sptorsion", version, about = "Order-p torsion in Sp(p-1, Z[1/n])")]
struct Cli {
    /// Add wall-clock timings to reports (makes output nondeterministic).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count and list the conjugacy classes of elements of order p.
    Classify {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        n: i64,
        /// Class number of Q(xi_p); required when p is not built in.
        #[arg(long)]
        class_number: Option<u64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Build the symplectic matrix of a class.
    Construct {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        n: i64,
        /// Class as a bit string over the quotient generators.
        #[arg(long = "class")]
        bits: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Twist orbits and stabilizer orders j.
    Orbits {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        n: i64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Check a matrix file and report its class.
    Verify {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        n: i64,
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Run the acceptance battery.
    Selftest {
        #[arg(long, default_value_t = 7)]
        max_p: usize,
        #[arg(long, default_value_t = 6)]
        oracle_height: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRow {
    pub vector: String,
    pub representative: String,
    pub j: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub formula: u128,
    /// 2^(quotient dimension) from the unit computation; absent when p is not built in.
    pub constructive: Option<u128>,
    pub class_number: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub schema_version: u32,
    pub command: String,
    pub p: usize,
    pub n: i64,
    pub tau: u64,
    pub sigma: u64,
    pub sigma_plus: u64,
    pub count: u128,
    pub split: SplitSummary,
    pub counts: Counts,
    pub generators: Option<Vec<String>>,
    pub classes: Option<Vec<ClassRow>>,
    pub centralizer: Option<CentralizerStructure>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timing_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitsReport {
    pub schema_version: u32,
    pub command: String,
    pub p: usize,
    pub n: i64,
    pub classes: Vec<OrbitEntry>,
    pub odd_divisors_covered: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timing_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyOutput {
    pub schema_version: u32,
    pub command: String,
    pub p: usize,
    pub n: i64,
    pub symplectic: bool,
    pub order_p: bool,
    pub char_poly_is_cyclotomic: bool,
    /// Class of the matrix when all checks pass and p is built in.
    pub class: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructOutput {
    pub schema_version: u32,
    pub command: String,
    pub p: usize,
    pub n: i64,
    pub class: String,
    pub out: String,
    pub verified: bool,
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    2
                }
            };
            return code;
        }
    };
    let echo = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join(" ");
    match execute(&cli, &echo, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if matches!(e, Error::Internal(_) | Error::Resource(_)) {
                let _ = writeln!(
                    err,
                    "diagnostic: command=\"{echo}\" version={} precision_bits={}",
                    env!("CARGO_PKG_VERSION"),
                    start_precision()
                );
            }
            e.exit_code()
        }
    }
}

fn emit(out: &mut dyn Write, s: &str) -> Result<()> {
    out.write_all(s.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Error::Usage(format!("cannot write output: {e}")))
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn execute(cli: &Cli, echo: &str, out: &mut dyn Write) -> Result<i32> {
    let start = Instant::now();
    let elapsed = || cli.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
    match &cli.command {
        Command::Classify {
            p,
            n,
            class_number,
            format,
        } => {
            let mut report = classify(*p, *n, *class_number, echo)?;
            report.timing_ms = elapsed();
            let s = match format {
                Format::Json => to_json(&report),
                Format::Text => classify_text(&report),
            };
            emit(out, &s)?;
            Ok(0)
        }
        Command::Construct { p, n, bits, out: file } => {
            let ug = UnitGroups::new(*p, *n)?;
            let v = F2Vector::parse(bits)?;
            if v.len() != ug.quotient_dim() {
                return usage(format!(
                    "class selector needs {} bits over ({}), got {}",
                    ug.quotient_dim(),
                    ug.quotient_labels().join(", "),
                    v.len()
                ));
            }
            let m = matrix_from_pair(&ug, &class_from_vector(&ug, &v)?)?;
            let mut json = m.to_json();
            json.push('\n');
            match file {
                None => emit(out, &json)?,
                Some(path) => {
                    std::fs::write(path, &json)
                        .map_err(|e| Error::Usage(format!("cannot write {}: {e}", path.display())))?;
                    emit(
                        out,
                        &to_json(&ConstructOutput {
                            schema_version: SCHEMA_VERSION,
                            command: echo.to_string(),
                            p: *p,
                            n: *n,
                            class: v.to_string(),
                            out: path.display().to_string(),
                            verified: verify(&m).all(),
                        }),
                    )?;
                }
            }
            Ok(0)
        }
        Command::Orbits { p, n, format } => {
            let ug = UnitGroups::new(*p, *n)?;
            let r = orbit_report(&ug)?;
            let report = OrbitsReport {
                schema_version: SCHEMA_VERSION,
                command: echo.to_string(),
                p: *p,
                n: *n,
                classes: r.classes,
                odd_divisors_covered: r.odd_divisors_covered,
                timing_ms: elapsed(),
            };
            let s = match format {
                Format::Json => to_json(&report),
                Format::Text => orbits_text(&report),
            };
            emit(out, &s)?;
            Ok(0)
        }
        Command::Verify { p, n, matrix } => {
            let text = std::fs::read_to_string(matrix)
                .map_err(|e| Error::Usage(format!("cannot read {}: {e}", matrix.display())))?;
            let m = SympMatrix::from_json(&text)?;
            if m.p() != *p || m.n() != *n {
                return usage(format!(
                    "matrix file is for (p, n) = ({}, {}), not ({p}, {n})",
                    m.p(),
                    m.n()
                ));
            }
            let r = verify(&m);
            let class = if r.all() && check_supported(*p).is_ok() {
                let ug = UnitGroups::new(*p, *n)?;
                Some(invariant_of_matrix(&ug, &m)?.normalized.to_string())
            } else {
                None
            };
            emit(
                out,
                &to_json(&VerifyOutput {
                    schema_version: SCHEMA_VERSION,
                    command: echo.to_string(),
                    p: *p,
                    n: *n,
                    symplectic: r.symplectic,
                    order_p: r.order_p,
                    char_poly_is_cyclotomic: r.char_poly_is_cyclotomic,
                    class,
                }),
            )?;
            Ok(if r.all() { 0 } else { 3 })
        }
        Command::Selftest { max_p, oracle_height } => {
            let cfg = AcceptanceConfig {
                max_p: *max_p,
                oracle_height: *oracle_height,
                ..AcceptanceConfig::default()
            };
            let results = run_all(&cfg);
            let mut s = String::new();
            for r in &results {
                let _ = writeln!(s, "{r}");
            }
            let passed = results.iter().filter(|r| r.passed).count();
            let _ = writeln!(s, "selftest: {passed}/{} criteria passed", results.len());
            emit(out, &s)?;
            Ok(if passed == results.len() { 0 } else { 4 })
        }
    }
}

/// The classify report without timing.
pub fn classify(p: usize, n: i64, class_number: Option<u64>, echo: &str) -> Result<ClassifyReport> {
    let count = count_classes(p, n, class_number)?;
    let split = split_summary(p as u64, n)?;
    let sigma_plus = split.sigma + u64::from(split.p_divides_n);
    let mut report = ClassifyReport {
        schema_version: SCHEMA_VERSION,
        command: echo.to_string(),
        p,
        n,
        tau: split.tau,
        sigma: split.sigma,
        sigma_plus,
        count,
        split: split.clone(),
        counts: Counts {
            formula: count,
            constructive: None,
            class_number: class_number.unwrap_or(1),
        },
        generators: None,
        classes: None,
        centralizer: None,
        timing_ms: None,
    };
    if check_supported(p).is_err() {
        return Ok(report);
    }
    let ug = UnitGroups::new(p, n)?;
    report.counts.constructive = Some(ug.norm_index().constructive_value);
    report.generators = Some(ug.quotient_labels());
    report.centralizer = Some(centralizer_structure(&ug)?);
    if ug.quotient_dim() <= crate::pairs::MAX_ENUMERATION_DIM {
        let orbits = orbit_report(&ug)?;
        report.classes = Some(
            orbits
                .classes
                .into_iter()
                .map(|e| ClassRow {
                    vector: e.vector,
                    representative: e.representative_u,
                    j: e.j,
                })
                .collect(),
        );
    }
    Ok(report)
}

fn kind_name(k: SplitKind) -> &'static str {
    match k {
        SplitKind::Inert => "inert",
        SplitKind::Split => "split",
        SplitKind::Ramified => "ramified",
    }
}

fn classify_text(r: &ClassifyReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "p = {}, n = {}", r.p, r.n);
    for rec in &r.split.records {
        let _ = writeln!(
            s,
            "  q = {}: {}, f = {}, {} real prime(s)",
            rec.q,
            kind_name(rec.kind),
            rec.f,
            rec.count
        );
    }
    let _ = writeln!(s, "τ = {}, σ = {}, σ⁺ = {}", r.tau, r.sigma, r.sigma_plus);
    match r.counts.constructive {
        Some(c) => {
            let _ = writeln!(s, "classes: {} (formula {}, constructive {c})", r.count, r.counts.formula);
        }
        None => {
            let _ = writeln!(s, "classes: {} (formula, h = {})", r.count, r.counts.class_number);
        }
    }
    if let Some(g) = &r.generators {
        let _ = writeln!(s, "generators: {}", g.join(", "));
    }
    if let Some(rows) = &r.classes {
        for row in rows {
            let u: Vec<&str> = row
                .representative
                .split(", ")
                .map(|c| c.strip_suffix("/1").unwrap_or(c))
                .collect();
            let _ = writeln!(s, "  [{}]  j = {}  u = {}", row.vector, row.j, u.join(", "));
        }
    }
    if let Some(c) = &r.centralizer {
        let _ = writeln!(
            s,
            "centralizer: Z/{} x Z^{}; closed form σ⁺ = {}: {}",
            c.torsion,
            c.rank_first_principles,
            c.rank_closed_form,
            if c.agree { "agrees" } else { "disagrees" }
        );
    }
    if let Some(t) = r.timing_ms {
        let _ = writeln!(s, "time: {t:.1} ms");
    }
    s
}

fn orbits_text(r: &OrbitsReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "p = {}, n = {}", r.p, r.n);
    for e in &r.classes {
        let _ = writeln!(s, "  [{}]  j = {}  stabilizer {:?}", e.vector, e.j, e.stabilizer);
    }
    let _ = writeln!(s, "odd j attained: {:?}", r.odd_divisors_covered);
    if let Some(t) = r.timing_ms {
        let _ = writeln!(s, "time: {t:.1} ms");
    }
    s
}
