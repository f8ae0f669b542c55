//! One line per acceptance criterion; exits nonzero if any criterion fails.

use sptorsion::acceptance::{run_all, AcceptanceConfig};

fn main() {
    let results = run_all(&AcceptanceConfig::default());
    for r in &results {
        println!("{r}");
    }
    let failed: Vec<u8> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    println!("acceptance: {}/{} criteria passed", results.len() - failed.len(), results.len());
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
