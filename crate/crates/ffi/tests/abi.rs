use std::ffi::{CStr, CString};
use std::ptr;

use sptorsion_ffi::*;

fn last_error() -> String {
    let p = spt_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

unsafe fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = CStr::from_ptr(p).to_string_lossy().into_owned();
    spt_string_free(p);
    s
}

#[test]
fn counts() {
    let mut c = 0u64;
    unsafe {
        assert_eq!(spt_count_classes(3, 2, 0, &mut c), SptStatus::Ok);
        assert_eq!(c, 4);
        assert_eq!(spt_count_classes(23, 1, 3, &mut c), SptStatus::Ok);
        assert_eq!(c, 3 << 11);
        assert_eq!(spt_count_classes(23, 1, 0, &mut c), SptStatus::Usage);
        assert!(last_error().contains("class-number"));
        assert_eq!(spt_count_classes(3, 1, 0, ptr::null_mut()), SptStatus::NullPointer);
    }
}

#[test]
fn construct_verify_invariant() {
    unsafe {
        let mut ug = ptr::null_mut();
        assert_eq!(spt_unit_groups_new(5, 2, &mut ug), SptStatus::Ok);
        let mut dim = 0usize;
        assert_eq!(spt_quotient_dim(ug, &mut dim), SptStatus::Ok);
        let (mut f, mut k) = (0u64, 0u64);
        assert_eq!(spt_norm_index(ug, &mut f, &mut k), SptStatus::Ok);
        assert_eq!((f, k), (1 << dim, 1 << dim));

        let bits = CString::new("1".repeat(dim)).unwrap();
        let mut m = ptr::null_mut();
        assert_eq!(spt_construct(ug, bits.as_ptr(), &mut m), SptStatus::Ok);
        assert_eq!(spt_matrix_dim(m), 4);
        let mut r = SptVerifyReport::default();
        assert_eq!(spt_verify(m, &mut r), SptStatus::Ok);
        assert!(r.symplectic && r.order_p && r.char_poly_is_cyclotomic);

        let mut s = ptr::null_mut();
        assert_eq!(spt_invariant(ug, m, &mut s), SptStatus::Ok);
        assert_eq!(take_string(s), "1".repeat(dim));

        let mut js = ptr::null_mut();
        assert_eq!(spt_matrix_to_json(m, &mut js), SptStatus::Ok);
        let json = CString::new(take_string(js)).unwrap();
        let mut m2 = ptr::null_mut();
        assert_eq!(spt_matrix_from_json(json.as_ptr(), &mut m2), SptStatus::Ok);
        let mut same = false;
        assert_eq!(spt_conjugate(ug, m, m2, &mut same), SptStatus::Ok);
        assert!(same);

        let mut e = ptr::null_mut();
        assert_eq!(spt_matrix_entry(m, 9, 0, &mut e), SptStatus::Usage);
        assert_eq!(spt_matrix_entry(m, 0, 0, &mut e), SptStatus::Ok);
        assert!(take_string(e).contains('/'));

        spt_matrix_free(m2);
        spt_matrix_free(m);
        spt_unit_groups_free(ug);
    }
}

#[test]
fn errors_map_to_status() {
    unsafe {
        let mut ug = ptr::null_mut();
        assert_eq!(spt_unit_groups_new(4, 1, &mut ug), SptStatus::Usage);
        assert!(ug.is_null());
        assert_eq!(spt_unit_groups_new(3, 1, &mut ug), SptStatus::Ok);

        let id = CString::new(r#"{"p":3,"n":1,"entries":[["1","0"],["0","1"]]}"#).unwrap();
        let mut m = ptr::null_mut();
        assert_eq!(spt_matrix_from_json(id.as_ptr(), &mut m), SptStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(spt_invariant(ug, m, &mut s), SptStatus::Domain);
        assert!(!last_error().is_empty());

        let bad = CString::new("{").unwrap();
        let mut m2 = ptr::null_mut();
        assert_eq!(spt_matrix_from_json(bad.as_ptr(), &mut m2), SptStatus::Usage);
        let bits = CString::new("01").unwrap();
        assert_eq!(spt_construct(ug, bits.as_ptr(), &mut m2), SptStatus::Usage);
        assert_eq!(spt_verify(ptr::null(), &mut SptVerifyReport::default()), SptStatus::NullPointer);

        spt_matrix_free(m);
        spt_unit_groups_free(ug);
        spt_matrix_free(ptr::null_mut());
        spt_string_free(ptr::null_mut());
    }
    // a successful call clears the message
    let mut c = 0;
    assert_eq!(unsafe { spt_count_classes(3, 1, 0, &mut c) }, SptStatus::Ok);
    assert!(spt_last_error().is_null());
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(spt_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
