//! C ABI over `inertia-forms`.
//!
//! Scenarios are opaque handles. Every entry point returns an
//! [`InertiaFormsStatus`]; on failure a message is available from
//! [`inertia_forms_last_error`] on the same thread. Strings returned through
//! out-parameters are owned by the caller and must be released with
//! [`inertia_forms_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use inertia_forms::cli::{self, Command, RunOptions, Scenario};
use inertia_forms::graded::Slot;
use inertia_forms::Error;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InertiaFormsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Config = 3,
    Structural = 4,
    /// The run completed but at least one assertion failed.
    TheoremViolation = 5,
    Internal = 6,
    Panic = 7,
}

/// Per-run overrides. Negative fields keep the scenario's value.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct InertiaFormsRunOptions {
    pub cutoff: i64,
    pub seed: i64,
    pub samples: i64,
    pub fault: bool,
}

/// Opaque scenario handle.
pub struct InertiaFormsScenario {
    inner: Scenario,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &Error) -> InertiaFormsStatus {
    match err {
        Error::Config(_) => InertiaFormsStatus::Config,
        Error::ComplexNotClosed { .. } | Error::InternalConsistency { .. } => InertiaFormsStatus::Internal,
        _ => InertiaFormsStatus::Structural,
    }
}

fn fail(err: &Error) -> InertiaFormsStatus {
    set_error(err.to_string());
    status_of(err)
}

fn guarded(f: impl FnOnce() -> InertiaFormsStatus) -> InertiaFormsStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            InertiaFormsStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, InertiaFormsStatus> {
    if p.is_null() {
        set_error("null string argument");
        return Err(InertiaFormsStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        InertiaFormsStatus::InvalidUtf8
    })
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

fn non_negative(v: i64) -> Option<u64> {
    u64::try_from(v).ok()
}

/// Parses a scenario from JSON text.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn inertia_forms_scenario_from_json(
    json: *const c_char,
    out: *mut *mut InertiaFormsScenario,
) -> InertiaFormsStatus {
    guarded(|| {
        if out.is_null() {
            set_error("null output pointer");
            return InertiaFormsStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match Scenario::from_json(text) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(InertiaFormsScenario { inner }));
                InertiaFormsStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Releases a scenario. Null is ignored.
///
/// # Safety
/// `handle` must come from [`inertia_forms_scenario_from_json`] and not be
/// used afterwards.
#[no_mangle]
pub unsafe extern "C" fn inertia_forms_scenario_free(handle: *mut InertiaFormsScenario) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Runs a CLI command (`verify`, `dims`, `cohomology`, ...) and writes the
/// JSON report to `out_json`. `options` may be null.
///
/// A report is written for both `Ok` and `TheoremViolation`.
///
/// # Safety
/// `handle` must be live, `command` a valid NUL-terminated string and
/// `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn inertia_forms_run(
    handle: *const InertiaFormsScenario,
    command: *const c_char,
    options: *const InertiaFormsRunOptions,
    out_json: *mut *mut c_char,
) -> InertiaFormsStatus {
    guarded(|| {
        if handle.is_null() || out_json.is_null() {
            set_error("null handle or output pointer");
            return InertiaFormsStatus::NullPointer;
        }
        *out_json = ptr::null_mut();
        let name = match read_str(command) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let command: Command = match name.parse() {
            Ok(c) => c,
            Err(e) => return fail(&e),
        };
        let mut opts = RunOptions::default();
        if let Some(o) = options.as_ref() {
            opts.cutoff = non_negative(o.cutoff).map(|v| v as usize);
            opts.seed = non_negative(o.seed);
            opts.samples = non_negative(o.samples).map(|v| v as usize);
            opts.fault = o.fault;
        }
        match cli::run(&(*handle).inner, command, &opts) {
            Ok(report) => {
                *out_json = to_c_string(report.to_json());
                if report.passed() {
                    InertiaFormsStatus::Ok
                } else {
                    set_error(format!("{} assertion(s) failed", report.failures().count()));
                    InertiaFormsStatus::TheoremViolation
                }
            }
            Err(e) => fail(&e),
        }
    })
}

/// Dimension of the basic forms of weight `weight` and degree `degree`.
///
/// # Safety
/// `handle` must be live and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn inertia_forms_basic_dim(
    handle: *const InertiaFormsScenario,
    weight: u32,
    degree: u32,
    out: *mut usize,
) -> InertiaFormsStatus {
    guarded(|| {
        if handle.is_null() || out.is_null() {
            set_error("null handle or output pointer");
            return InertiaFormsStatus::NullPointer;
        }
        let cutoff = (weight as usize).max(1);
        match cli::basic_dims(&(*handle).inner, cutoff) {
            Ok(t) => {
                *out = t.get(Slot::new(weight as usize, degree as usize));
                InertiaFormsStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn inertia_forms_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failure on this thread, or null. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn inertia_forms_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn inertia_forms_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
