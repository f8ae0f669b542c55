//! C interface to `sptorsion`.
//!
//! Objects cross the boundary as opaque handles owned by the caller and released
//! with the matching `*_free`. Every fallible call returns an [`SptStatus`]; the
//! message of the last failure on the calling thread is available from
//! [`spt_last_error`]. Strings handed out are released with [`spt_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sptorsion::pairs::{class_from_vector, count_classes};
use sptorsion::sunits::{F2Vector, UnitGroups};
use sptorsion::symplectic::{conjugacy_test, invariant_of_matrix, matrix_from_pair, verify, SympMatrix};
use sptorsion::Error;

#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum SptStatus {
    Ok = 0,
    /// Bad arguments or unsupported parameters.
    Usage = 2,
    /// Mathematically invalid input.
    Domain = 3,
    /// An exact post-check failed.
    Internal = 4,
    /// A bounded search ran out of budget.
    Resource = 5,
    NullPointer = 6,
    Panic = 7,
}

/// Unit groups and class data for one (p, n).
pub struct SptUnitGroups {
    inner: UnitGroups,
}

/// A (p−1)×(p−1) matrix over ℤ[1/n].
pub struct SptMatrix {
    inner: SympMatrix,
}

#[repr(C)]
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct SptVerifyReport {
    pub symplectic: bool,
    pub order_p: bool,
    pub char_poly_is_cyclotomic: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(e: Error) -> SptStatus {
    let status = match e {
        Error::Usage(_) => SptStatus::Usage,
        Error::Domain(_) => SptStatus::Domain,
        Error::Internal(_) => SptStatus::Internal,
        Error::Resource(_) => SptStatus::Resource,
    };
    set_error(e.to_string());
    status
}

fn null(what: &str) -> SptStatus {
    set_error(format!("null pointer passed as {what}"));
    SptStatus::NullPointer
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), SptStatus>) -> SptStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SptStatus::Ok,
        Ok(Err(s)) => s,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            SptStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(s: *const c_char, what: &str) -> Result<&'a str, SptStatus> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error(format!("{what} is not valid UTF-8"));
        SptStatus::Usage
    })
}

fn give_string(s: String, out: *mut *mut c_char) {
    let c = CString::new(s).expect("no interior nul");
    unsafe { *out = c.into_raw() };
}

/// Message of the last failure on this thread, or NULL. Valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn spt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn spt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn spt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Number of conjugacy classes of order-p elements. `class_number` 0 means built in.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spt_count_classes(p: u32, n: i64, class_number: u64, out: *mut u64) -> SptStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let h = (class_number != 0).then_some(class_number);
        let c = count_classes(p as usize, n, h).map_err(fail)?;
        *out = u64::try_from(c).map_err(|_| fail(Error::Usage(format!("{c} does not fit in 64 bits"))))?;
        Ok(())
    })
}

/// # Safety
/// `out` must be a valid pointer; the handle written there is freed with [`spt_unit_groups_free`].
#[no_mangle]
pub unsafe extern "C" fn spt_unit_groups_new(p: u32, n: i64, out: *mut *mut SptUnitGroups) -> SptStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = UnitGroups::new(p as usize, n).map_err(fail)?;
        *out = Box::into_raw(Box::new(SptUnitGroups { inner }));
        Ok(())
    })
}

/// # Safety
/// `ug` must be NULL or a handle from [`spt_unit_groups_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn spt_unit_groups_free(ug: *mut SptUnitGroups) {
    if !ug.is_null() {
        drop(Box::from_raw(ug));
    }
}

/// Dimension of the GF(2) quotient that labels the classes.
///
/// # Safety
/// `ug` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spt_quotient_dim(ug: *const SptUnitGroups, out: *mut usize) -> SptStatus {
    guard(|| {
        let ug = ug.as_ref().ok_or_else(|| null("ug"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ug.inner.quotient_dim();
        Ok(())
    })
}

/// Both values of the norm index; they always agree for a correct computation.
///
/// # Safety
/// `ug` must be a live handle and the outputs valid pointers.
#[no_mangle]
pub unsafe extern "C" fn spt_norm_index(
    ug: *const SptUnitGroups,
    formula: *mut u64,
    constructive: *mut u64,
) -> SptStatus {
    guard(|| {
        let ug = ug.as_ref().ok_or_else(|| null("ug"))?;
        if formula.is_null() || constructive.is_null() {
            return Err(null("output"));
        }
        let idx = ug.inner.norm_index();
        let conv = |v: u128| u64::try_from(v).map_err(|_| fail(Error::Usage(format!("{v} does not fit in 64 bits"))));
        *formula = conv(idx.formula_value)?;
        *constructive = conv(idx.constructive_value)?;
        Ok(())
    })
}

/// Matrix of the class with bit string `bits`.
///
/// # Safety
/// `ug` must be a live handle, `bits` a nul-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spt_construct(
    ug: *const SptUnitGroups,
    bits: *const c_char,
    out: *mut *mut SptMatrix,
) -> SptStatus {
    guard(|| {
        let ug = &ug.as_ref().ok_or_else(|| null("ug"))?.inner;
        let bits = str_arg(bits, "bits")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let v = F2Vector::parse(bits).map_err(fail)?;
        if v.len() != ug.quotient_dim() {
            return Err(fail(Error::Usage(format!(
                "class selector needs {} bits, got {}",
                ug.quotient_dim(),
                v.len()
            ))));
        }
        let c = class_from_vector(ug, &v).map_err(fail)?;
        let inner = matrix_from_pair(ug, &c).map_err(fail)?;
        *out = Box::into_raw(Box::new(SptMatrix { inner }));
        Ok(())
    })
}

/// Reads a matrix from its JSON file format.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spt_matrix_from_json(json: *const c_char, out: *mut *mut SptMatrix) -> SptStatus {
    guard(|| {
        let json = str_arg(json, "json")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = SympMatrix::from_json(json).map_err(fail)?;
        *out = Box::into_raw(Box::new(SptMatrix { inner }));
        Ok(())
    })
}

/// # Safety
/// `m` must be a live handle and `out` a valid pointer; free the string with [`spt_string_free`].
#[no_mangle]
pub unsafe extern "C" fn spt_matrix_to_json(m: *const SptMatrix, out: *mut *mut c_char) -> SptStatus {
    guard(|| {
        let m = m.as_ref().ok_or_else(|| null("m"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        give_string(m.inner.to_json(), out);
        Ok(())
    })
}

/// Entry (row, col) as "num/den".
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer; free the string with [`spt_string_free`].
#[no_mangle]
pub unsafe extern "C" fn spt_matrix_entry(
    m: *const SptMatrix,
    row: usize,
    col: usize,
    out: *mut *mut c_char,
) -> SptStatus {
    guard(|| {
        let m = &m.as_ref().ok_or_else(|| null("m"))?.inner;
        if out.is_null() {
            return Err(null("out"));
        }
        if row >= m.dim() || col >= m.dim() {
            return Err(fail(Error::Usage(format!("index ({row}, {col}) outside a {0}x{0} matrix", m.dim()))));
        }
        give_string(sptorsion::localization::format_rational(m.entries().get(row, col)), out);
        Ok(())
    })
}

/// Side length of the matrix, or 0 for NULL.
///
/// # Safety
/// `m` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn spt_matrix_dim(m: *const SptMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.inner.dim())
}

/// # Safety
/// `m` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn spt_matrix_free(m: *mut SptMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spt_verify(m: *const SptMatrix, out: *mut SptVerifyReport) -> SptStatus {
    guard(|| {
        let m = m.as_ref().ok_or_else(|| null("m"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let r = verify(&m.inner);
        *out = SptVerifyReport {
            symplectic: r.symplectic,
            order_p: r.order_p,
            char_poly_is_cyclotomic: r.char_poly_is_cyclotomic,
        };
        Ok(())
    })
}

/// Class bit string of an order-p symplectic matrix.
///
/// # Safety
/// Handles must be live and `out` a valid pointer; free the string with [`spt_string_free`].
#[no_mangle]
pub unsafe extern "C" fn spt_invariant(
    ug: *const SptUnitGroups,
    m: *const SptMatrix,
    out: *mut *mut c_char,
) -> SptStatus {
    guard(|| {
        let ug = &ug.as_ref().ok_or_else(|| null("ug"))?.inner;
        let m = &m.as_ref().ok_or_else(|| null("m"))?.inner;
        if out.is_null() {
            return Err(null("out"));
        }
        let c = invariant_of_matrix(ug, m).map_err(fail)?;
        give_string(c.normalized.to_string(), out);
        Ok(())
    })
}

/// Whether two order-p matrices are conjugate in Sp(p−1, ℤ[1/n]).
///
/// # Safety
/// Handles must be live and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spt_conjugate(
    ug: *const SptUnitGroups,
    a: *const SptMatrix,
    b: *const SptMatrix,
    out: *mut bool,
) -> SptStatus {
    guard(|| {
        let ug = &ug.as_ref().ok_or_else(|| null("ug"))?.inner;
        let a = &a.as_ref().ok_or_else(|| null("a"))?.inner;
        let b = &b.as_ref().ok_or_else(|| null("b"))?.inner;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = conjugacy_test(ug, a, b).map_err(fail)?;
        Ok(())
    })
}
