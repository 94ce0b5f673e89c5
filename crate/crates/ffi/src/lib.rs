//! C ABI over `trr_core`.
//!
//! Every fallible call returns a [`TrrStatus`]; on failure the message is
//! available from [`trr_last_error`] on the same thread. Strings returned
//! through out-parameters are owned by the caller and released with
//! [`trr_string_free`]. Handles are released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use trr_core::trr::{self as core_trr, TrrError};

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// The D coefficient vanishes for the requested target.
    ZeroD = 3,
    /// A brute-force computation exceeded the genus limit.
    Guard = 4,
    /// An internal consistency check failed.
    Mismatch = 5,
    /// A panic was caught at the boundary.
    Internal = 6,
}

/// Result of a D-coefficient scan.
pub struct TrrScan(core_trr::ScanReport);

/// A topological recursion relation.
pub struct TrrRecord(core_trr::TrrRecord);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &TrrError) -> TrrStatus {
    match e {
        TrrError::ZeroD { .. } => TrrStatus::ZeroD,
        TrrError::ScaleGuard { .. } => TrrStatus::Guard,
        TrrError::Mismatch(_) | TrrError::KappaGenerated => TrrStatus::Mismatch,
        _ => TrrStatus::InvalidArgument,
    }
}

/// Runs `f`, recording errors and catching panics.
fn guarded(f: impl FnOnce() -> Result<(), (TrrStatus, String)>) -> TrrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            TrrStatus::Ok
        }
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("panic inside trr");
            TrrStatus::Internal
        }
    }
}

fn trr_err(e: TrrError) -> (TrrStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (TrrStatus, String) {
    (TrrStatus::NullPointer, format!("{what} is null"))
}

unsafe fn exponents<'a>(l: *const u32, len: usize) -> Result<&'a [u32], (TrrStatus, String)> {
    if len == 0 {
        Ok(&[])
    } else if l.is_null() {
        Err(null("l"))
    } else {
        Ok(std::slice::from_raw_parts(l, len))
    }
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("JSON has no nul bytes").into_raw()
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn trr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn trr_version() -> *const c_char {
    static V: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version"),
    };
    V.as_ptr()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn trr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// D coefficient for `(g, k, l)` as a reduced fraction string `"p/q"` or `"p"`.
///
/// # Safety
/// `l` must point to `l_len` values (or may be null when `l_len == 0`);
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn trr_d_value(g: u32, k: u32, l: *const u32, l_len: usize, out: *mut *mut c_char) -> TrrStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let l = exponents(l, l_len)?;
        let d = core_trr::d_value(g, k, l).map_err(trr_err)?;
        *out = into_c_string(d.to_string());
        Ok(())
    })
}

/// Scans genera `g_min..=g_max` for vanishing D coefficients.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn trr_scan_run(g_min: u32, g_max: u32, out: *mut *mut TrrScan) -> TrrStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if g_min == 0 || g_max < g_min {
            return Err((TrrStatus::InvalidArgument, "need 1 <= g_min <= g_max".into()));
        }
        *out = Box::into_raw(Box::new(TrrScan(core_trr::scan_zeros(g_min, g_max))));
        Ok(())
    })
}

/// Number of vanishing cells found; 0 for null.
///
/// # Safety
/// `scan` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn trr_scan_zero_count(scan: *const TrrScan) -> usize {
    scan.as_ref().map_or(0, |s| s.0.zeros.len())
}

/// JSON rendering of a scan.
///
/// # Safety
/// `scan` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn trr_scan_to_json(scan: *const TrrScan, out: *mut *mut c_char) -> TrrStatus {
    guarded(|| {
        let s = scan.as_ref().ok_or_else(|| null("scan"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = into_c_string(s.0.to_json_value().to_string());
        Ok(())
    })
}

/// # Safety
/// `scan` must be null or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn trr_scan_free(scan: *mut TrrScan) {
    if !scan.is_null() {
        drop(Box::from_raw(scan));
    }
}

/// Principal part of the TRR for `psi_1^k prod psi_j^{l_j}`. `l` is sorted
/// ascending internally.
///
/// # Safety
/// `l` must point to `l_len` values (or may be null when `l_len == 0`);
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn trr_principal_part(
    g: u32,
    k: u32,
    l: *const u32,
    l_len: usize,
    out: *mut *mut TrrRecord,
) -> TrrStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let mut l = exponents(l, l_len)?.to_vec();
        l.sort_unstable();
        let r = core_trr::principal_part(g, k, &l).map_err(trr_err)?;
        *out = Box::into_raw(Box::new(TrrRecord(r)));
        Ok(())
    })
}

/// TRR for `psi_1^g` on one point.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn trr_n1(g: u32, out: *mut *mut TrrRecord) -> TrrStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let r = core_trr::n1_trr(g, None).map_err(trr_err)?;
        *out = Box::into_raw(Box::new(TrrRecord(r)));
        Ok(())
    })
}

/// JSON rendering of a record.
///
/// # Safety
/// `record` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn trr_record_to_json(record: *const TrrRecord, out: *mut *mut c_char) -> TrrStatus {
    guarded(|| {
        let r = record.as_ref().ok_or_else(|| null("record"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = into_c_string(r.0.to_json_value().to_string());
        Ok(())
    })
}

/// # Safety
/// `record` must be null or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn trr_record_free(record: *mut TrrRecord) {
    if !record.is_null() {
        drop(Box::from_raw(record));
    }
}
