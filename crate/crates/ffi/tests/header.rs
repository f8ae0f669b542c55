use std::path::{Path, PathBuf};
use std::process::Command;

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include").join("sptorsion.h")
}

const EXPORTS: [&str; 17] = [
    "spt_last_error",
    "spt_version",
    "spt_string_free",
    "spt_count_classes",
    "spt_unit_groups_new",
    "spt_unit_groups_free",
    "spt_quotient_dim",
    "spt_norm_index",
    "spt_construct",
    "spt_matrix_from_json",
    "spt_matrix_to_json",
    "spt_matrix_entry",
    "spt_matrix_dim",
    "spt_matrix_free",
    "spt_verify",
    "spt_invariant",
    "spt_conjugate",
];

#[test]
fn header_declares_every_export() {
    let text = std::fs::read_to_string(header()).unwrap();
    for f in EXPORTS {
        assert!(text.contains(&format!("{f}(")), "{f} missing from header");
    }
    assert!(text.contains("typedef struct SptUnitGroups SptUnitGroups;"));
    assert!(text.contains("SPT_STATUS_DOMAIN = 3"));
}

const SMOKE: &str = r#"
#include <stdio.h>
#include <string.h>
#include "sptorsion.h"

int main(void) {
    uint64_t count = 0;
    if (spt_count_classes(3, 6, 0, &count) != SPT_STATUS_OK || count != 4) return 1;
    SptUnitGroups *ug = NULL;
    if (spt_unit_groups_new(7, 1, &ug) != SPT_STATUS_OK) return 2;
    SptMatrix *m = NULL;
    if (spt_construct(ug, "101", &m) != SPT_STATUS_OK) return 3;
    SptVerifyReport r;
    if (spt_verify(m, &r) != SPT_STATUS_OK || !r.symplectic || !r.order_p || !r.char_poly_is_cyclotomic) return 4;
    char *bits = NULL;
    if (spt_invariant(ug, m, &bits) != SPT_STATUS_OK || strcmp(bits, "101") != 0) return 5;
    spt_string_free(bits);
    if (spt_construct(ug, "1", &m) != SPT_STATUS_USAGE || spt_last_error() == NULL) return 6;
    spt_matrix_free(m);
    spt_unit_groups_free(ug);
    printf("ok\n");
    return 0;
}
"#;

fn cc() -> Option<&'static str> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok_and(|o| o.status.success()))
}

#[test]
fn c_program_compiles_and_runs() {
    let Some(cc) = cc() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("ffi-smoke");
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("smoke.c");
    std::fs::write(&src, SMOKE).unwrap();
    let include = header().parent().unwrap().to_path_buf();

    let syntax = Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(&include)
        .arg(&src)
        .output()
        .unwrap();
    assert!(syntax.status.success(), "{}", String::from_utf8_lossy(&syntax.stderr));

    // the test binary lives in target/<profile>/deps
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libsptorsion_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipping the link step", lib.display());
        return;
    }
    let exe = dir.join("smoke");
    let link = Command::new(cc)
        .args(["-std=c99", "-I"])
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .unwrap();
    assert!(link.status.success(), "{}", String::from_utf8_lossy(&link.stderr));
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "smoke program exited with {:?}", run.status.code());
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}
