//! C interface to the self-similar group toolkit.
//!
//! Instances are opaque handles. Every call returns an [`SsStatus`]; results
//! come back through out-parameters as NUL-terminated UTF-8 strings owned by
//! the library and released with [`ss_string_free`]. After a failure,
//! [`ss_last_error`] describes it.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use selfsim::engine::ExportFormat;
use selfsim::instances::{AnyInstance, InstanceConfig};
use selfsim::session::{self, AutomatonOutput};
use selfsim::verify::{Suite, VerifyOptions};
use selfsim::Error;

/// Status codes returned by every function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SsStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Config, element expression or option failed to parse.
    Parse = 3,
    /// The config violates the family's hypotheses.
    InvalidConfig = 4,
    /// The operation does not apply to this family.
    Unsupported = 5,
    /// A verification suite reported failures; the report is still returned.
    VerificationFailed = 6,
    /// Automaton extraction hit the state cap; the cap report is returned.
    CapExceeded = 7,
    /// Any other library error.
    Internal = 8,
    /// A Rust panic was caught at the boundary.
    Panic = 9,
}

/// Opaque instance handle.
pub struct SsInstance {
    inner: AnyInstance,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("NUL bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SsStatus {
    match e {
        Error::Parse(_) | Error::Json(_) => SsStatus::Parse,
        Error::InvalidConfig(_) | Error::NotPrime(_) => SsStatus::InvalidConfig,
        Error::Unsupported(_) => SsStatus::Unsupported,
        _ => SsStatus::Internal,
    }
}

fn fail(status: SsStatus, msg: &str) -> SsStatus {
    set_last_error(msg);
    status
}

/// Runs `f`, recording errors and converting panics into [`SsStatus::Panic`].
fn guard(f: impl FnOnce() -> Result<SsStatus, (SsStatus, String)>) -> SsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => {
            if status == SsStatus::Ok {
                set_last_error("");
            }
            status
        }
        Ok(Err((status, msg))) => fail(status, &msg),
        Err(_) => fail(SsStatus::Panic, "panic inside the library"),
    }
}

fn lib_err(e: Error) -> (SsStatus, String) {
    (status_of(&e), e.to_string())
}

/// # Safety
/// `s` is NULL or a valid NUL-terminated string.
unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, (SsStatus, String)> {
    if s.is_null() {
        return Err((SsStatus::NullArgument, format!("{what} is NULL")));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (SsStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

/// # Safety
/// `inst` is NULL or a live handle from [`ss_instance_from_json`].
unsafe fn read_instance<'a>(inst: *const SsInstance) -> Result<&'a AnyInstance, (SsStatus, String)> {
    inst.as_ref()
        .map(|i| &i.inner)
        .ok_or((SsStatus::NullArgument, "instance is NULL".into()))
}

/// # Safety
/// `out` is NULL or writable.
unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), (SsStatus, String)> {
    if out.is_null() {
        return Err((SsStatus::NullArgument, "output pointer is NULL".into()));
    }
    let c = CString::new(s).map_err(|_| (SsStatus::Internal, "output contains NUL".to_string()))?;
    *out = c.into_raw();
    Ok(())
}

fn to_json(v: &impl serde::Serialize) -> Result<String, (SsStatus, String)> {
    serde_json::to_string_pretty(v).map_err(|e| (SsStatus::Internal, e.to_string()))
}

/// Builds an instance from a JSON config and stores the handle in `*out`.
///
/// # Safety
/// `json` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ss_instance_from_json(json: *const c_char, out: *mut *mut SsInstance) -> SsStatus {
    guard(|| {
        if out.is_null() {
            return Err((SsStatus::NullArgument, "output pointer is NULL".into()));
        }
        let text = read_str(json, "config")?;
        let config = InstanceConfig::from_json(text).map_err(lib_err)?;
        let inner = session::build_instance(&config).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(SsInstance { inner }));
        Ok(SsStatus::Ok)
    })
}

/// Releases a handle. NULL is ignored.
///
/// # Safety
/// `inst` is NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ss_instance_free(inst: *mut SsInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Tree degree m = [G : H].
///
/// # Safety
/// `inst` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ss_instance_degree(inst: *const SsInstance, out: *mut usize) -> SsStatus {
    guard(|| {
        let inst = read_instance(inst)?;
        if out.is_null() {
            return Err((SsStatus::NullArgument, "output pointer is NULL".into()));
        }
        *out = inst.degree();
        Ok(SsStatus::Ok)
    })
}

/// Decomposition JSON of `expr`; a nonnegative `depth` returns the portrait.
///
/// # Safety
/// `inst` is a live handle; `expr` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ss_decompose(
    inst: *const SsInstance,
    expr: *const c_char,
    depth: i32,
    out: *mut *mut c_char,
) -> SsStatus {
    guard(|| {
        let inst = read_instance(inst)?;
        let expr = read_str(expr, "expression")?;
        let depth = usize::try_from(depth).ok();
        let v = session::decompose_expr(inst, expr, depth).map_err(lib_err)?;
        write_string(out, to_json(&v)?)?;
        Ok(SsStatus::Ok)
    })
}

/// State automaton of `expr` as "json" or "dot" text. On
/// [`SsStatus::CapExceeded`], `*out` holds the cap report instead.
///
/// # Safety
/// `inst` is a live handle; `expr` and `format` are NUL-terminated strings;
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ss_automaton(
    inst: *const SsInstance,
    expr: *const c_char,
    cap: usize,
    format: *const c_char,
    out: *mut *mut c_char,
) -> SsStatus {
    guard(|| {
        let inst = read_instance(inst)?;
        let expr = read_str(expr, "expression")?;
        let format: ExportFormat = read_str(format, "format")?.parse().map_err(lib_err)?;
        match session::automaton_expr(inst, expr, cap, format, false).map_err(lib_err)? {
            AutomatonOutput::Finite { text, .. } => {
                write_string(out, text)?;
                Ok(SsStatus::Ok)
            }
            report => {
                write_string(out, to_json(&report)?)?;
                set_last_error("state cap exceeded");
                Ok(SsStatus::CapExceeded)
            }
        }
    })
}

/// Tameness and finiteness-type report (lamplighter family only).
///
/// # Safety
/// `inst` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ss_tame_report(inst: *const SsInstance, out: *mut *mut c_char) -> SsStatus {
    guard(|| {
        let inst = read_instance(inst)?;
        let report = session::tame(inst).map_err(lib_err)?;
        write_string(out, to_json(&report)?)?;
        Ok(SsStatus::Ok)
    })
}

/// Runs the comma-separated `suites` (NULL or "" for the defaults) with the
/// given seed. The JSON report is returned even when checks fail.
///
/// # Safety
/// `inst` is a live handle; `suites` is NULL or a NUL-terminated string;
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ss_verify(
    inst: *const SsInstance,
    suites: *const c_char,
    seed: u64,
    out: *mut *mut c_char,
) -> SsStatus {
    guard(|| {
        let inst = read_instance(inst)?;
        let names = if suites.is_null() {
            ""
        } else {
            read_str(suites, "suites")?
        };
        let suites: Vec<Suite> = if names.trim().is_empty() {
            session::default_suites(inst)
        } else {
            names
                .split(',')
                .map(|s| s.trim().parse())
                .collect::<Result<_, _>>()
                .map_err(lib_err)?
        };
        let opts = VerifyOptions {
            seed,
            ..VerifyOptions::default()
        };
        let reports = session::verify(inst, &suites, &opts).map_err(lib_err)?;
        write_string(out, to_json(&reports)?)?;
        if reports.iter().all(|r| r.passed) {
            Ok(SsStatus::Ok)
        } else {
            set_last_error("verification failed");
            Ok(SsStatus::VerificationFailed)
        }
    })
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` is NULL or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ss_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failure on this thread; empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ss_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
