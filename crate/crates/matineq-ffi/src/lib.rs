//! C ABI over the matineq checkers.
//!
//! Conventions (mirrored in `include/matineq.h`):
//! - Handles (`MatineqMatrix`, `MatineqResult`) are opaque; free them with the
//!   matching `*_free` function exactly once.
//! - Every fallible function returns a status code; `0` is success. On any
//!   nonzero status, `matineq_last_error` returns a message valid on the
//!   calling thread until the next failing call.
//! - Strings returned as `char*` (not `const char*`) are owned by the caller
//!   and must be released with `matineq_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use matineq::checks::{self, CheckContext, CheckResult, SynchronyMode, Verdict};
use matineq::error::Error;
use matineq::funcspace::{lookup_function, lookup_weight};
use matineq::generators::{run_spec, InstanceSpec};
use matineq::linalg::{HermitianMatrix, Interval, MatrixJson};

pub const MATINEQ_OK: i32 = 0;
pub const MATINEQ_ERR_NULL_ARGUMENT: i32 = 1;
pub const MATINEQ_ERR_INVALID_UTF8: i32 = 2;
pub const MATINEQ_ERR_CHECK: i32 = 3;
pub const MATINEQ_ERR_NO_VALUE: i32 = 4;
pub const MATINEQ_ERR_PANIC: i32 = 5;

pub const MATINEQ_MODE_SYNCHRONOUS: i32 = 0;
pub const MATINEQ_MODE_ASYNCHRONOUS: i32 = 1;
pub const MATINEQ_MODE_UNSET: i32 = -1;

/// Opaque Hermitian matrix handle.
pub struct MatineqMatrix(HermitianMatrix);

/// Opaque check-result handle.
pub struct MatineqResult(CheckResult);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', "?")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(code: i32, msg: &str) -> i32 {
    set_error(msg);
    code
}

/// Runs `body` with panics converted to `MATINEQ_ERR_PANIC` so unwinding
/// never crosses the ABI boundary.
fn guarded<F: FnOnce() -> i32>(body: F) -> i32 {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(code) => code,
        Err(_) => fail(MATINEQ_ERR_PANIC, "internal panic"),
    }
}

/// # Safety
/// `s` must be null or a valid NUL-terminated string.
unsafe fn required_str<'a>(s: *const c_char, name: &str) -> Result<&'a str, i32> {
    if s.is_null() {
        return Err(fail(
            MATINEQ_ERR_NULL_ARGUMENT,
            &format!("{name} must not be null"),
        ));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(MATINEQ_ERR_INVALID_UTF8, &format!("{name} is not UTF-8")))
}

unsafe fn optional_str<'a>(s: *const c_char, name: &str) -> Result<Option<&'a str>, i32> {
    if s.is_null() {
        Ok(None)
    } else {
        required_str(s, name).map(Some)
    }
}

fn check_err(e: &Error) -> i32 {
    fail(MATINEQ_ERR_CHECK, &e.to_string())
}

/// Library version as a static string; never freed by the caller.
#[no_mangle]
pub extern "C" fn matineq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message for the most recent failure on this thread; valid until the next
/// failing call on the same thread. Never freed by the caller.
#[no_mangle]
pub extern "C" fn matineq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a matrix from JSON `{"n": 2, "re": [...], "im": [...]}` (row-major,
/// `im` optional). On success `*out` owns the new handle.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn matineq_matrix_from_json(
    json: *const c_char,
    out: *mut *mut MatineqMatrix,
) -> i32 {
    guarded(|| {
        if out.is_null() {
            return fail(MATINEQ_ERR_NULL_ARGUMENT, "out must not be null");
        }
        let text = match required_str(json, "json") {
            Ok(t) => t,
            Err(c) => return c,
        };
        let parsed: MatrixJson = match serde_json::from_str(text) {
            Ok(p) => p,
            Err(e) => return fail(MATINEQ_ERR_CHECK, &format!("json: {e}")),
        };
        match HermitianMatrix::from_json(&parsed) {
            Ok(m) => {
                *out = Box::into_raw(Box::new(MatineqMatrix(m)));
                MATINEQ_OK
            }
            Err(e) => check_err(&e),
        }
    })
}

/// Dimension of a matrix handle.
///
/// # Safety
/// `m` must be a live handle from this library; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn matineq_matrix_dim(m: *const MatineqMatrix, out: *mut usize) -> i32 {
    guarded(|| {
        if m.is_null() || out.is_null() {
            return fail(MATINEQ_ERR_NULL_ARGUMENT, "null matrix or out pointer");
        }
        *out = (*m).0.dim();
        MATINEQ_OK
    })
}

/// # Safety
/// `m` must be null or a handle not yet freed; double frees are undefined.
#[no_mangle]
pub unsafe extern "C" fn matineq_matrix_free(m: *mut MatineqMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

fn finish_result(out: *mut *mut MatineqResult, result: CheckResult) -> i32 {
    if let Some(msg) = &result.error {
        set_error(msg);
    }
    unsafe { *out = Box::into_raw(Box::new(MatineqResult(result))) };
    MATINEQ_OK
}

/// Runs one matrix-order check. `theorem_id` must be one of
/// matrix-fejer-lower, matrix-fejer-upper, log-fejer, eig-product-fejer,
/// operator-levin-steckin, mond-pecaric-reverse. `alpha` is only read by
/// mond-pecaric-reverse. `force != 0` evaluates even when a hypothesis flag
/// is unmet. A violated or errored check still returns `MATINEQ_OK` with a
/// result handle; inspect the verdict.
///
/// # Safety
/// String arguments must be valid NUL-terminated strings, matrix arguments
/// live handles, and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn matineq_check_matrix(
    theorem_id: *const c_char,
    function_id: *const c_char,
    weight_id: *const c_char,
    a: *const MatineqMatrix,
    b: *const MatineqMatrix,
    alpha: f64,
    force: i32,
    out: *mut *mut MatineqResult,
) -> i32 {
    guarded(|| {
        if out.is_null() || a.is_null() || b.is_null() {
            return fail(MATINEQ_ERR_NULL_ARGUMENT, "null matrix or out pointer");
        }
        let theorem = match required_str(theorem_id, "theorem_id") {
            Ok(t) => t,
            Err(c) => return c,
        };
        let f_id = match required_str(function_id, "function_id") {
            Ok(t) => t,
            Err(c) => return c,
        };
        let p_id = match required_str(weight_id, "weight_id") {
            Ok(t) => t,
            Err(c) => return c,
        };
        let f = match lookup_function(f_id) {
            Ok(f) => f,
            Err(e) => return check_err(&e),
        };
        let p = match lookup_weight(p_id) {
            Ok(p) => p,
            Err(e) => return check_err(&e),
        };
        let ctx = CheckContext {
            force: force != 0,
            ..CheckContext::default()
        };
        let (ma, mb) = (&(*a).0, &(*b).0);
        let result = match theorem {
            "matrix-fejer-lower" => checks::check_matrix_fejer_lower(&f, &p, ma, mb, &ctx),
            "matrix-fejer-upper" => checks::check_matrix_fejer_upper(&f, &p, ma, mb, &ctx),
            "log-fejer" => checks::check_log_fejer(&f, &p, ma, mb, &ctx),
            "eig-product-fejer" => checks::check_eig_product_fejer(&f, &p, ma, mb, &ctx),
            "operator-levin-steckin" => checks::check_operator_levin_steckin(&f, &p, ma, mb, &ctx),
            "mond-pecaric-reverse" => {
                checks::check_mond_pecaric_reverse(&f, &p, ma, mb, alpha, None, None, &ctx)
            }
            other => {
                return fail(
                    MATINEQ_ERR_CHECK,
                    &format!("unknown matrix theorem id: {other}"),
                )
            }
        };
        finish_result(out, result)
    })
}

/// Runs one scalar check on `[lo, hi]` (most scalar theorems fix `[0, 1]`
/// and ignore the endpoints). `second_function_id` and `weight_id` may be
/// null when the theorem does not use them. `mode` selects the expected
/// synchrony for chebyshev-variance: 0 synchronous, 1 asynchronous, any
/// negative value unset.
///
/// # Safety
/// Same contract as `matineq_check_matrix`.
#[no_mangle]
pub unsafe extern "C" fn matineq_check_scalar(
    theorem_id: *const c_char,
    function_id: *const c_char,
    second_function_id: *const c_char,
    weight_id: *const c_char,
    lo: f64,
    hi: f64,
    alpha: f64,
    mode: i32,
    force: i32,
    out: *mut *mut MatineqResult,
) -> i32 {
    guarded(|| {
        if out.is_null() {
            return fail(MATINEQ_ERR_NULL_ARGUMENT, "out must not be null");
        }
        let theorem = match required_str(theorem_id, "theorem_id") {
            Ok(t) => t,
            Err(c) => return c,
        };
        if checks::is_matrix_theorem(theorem) {
            return fail(
                MATINEQ_ERR_CHECK,
                "matrix theorem id passed to matineq_check_scalar",
            );
        }
        if !checks::THEOREM_IDS.contains(&theorem) {
            return fail(
                MATINEQ_ERR_CHECK,
                &format!("unknown theorem id: {theorem}"),
            );
        }
        let function_id = match required_str(function_id, "function_id") {
            Ok(t) => t.to_string(),
            Err(c) => return c,
        };
        let second = match optional_str(second_function_id, "second_function_id") {
            Ok(s) => s.map(str::to_string),
            Err(c) => return c,
        };
        let weight = match optional_str(weight_id, "weight_id") {
            Ok(s) => s.map(str::to_string),
            Err(c) => return c,
        };
        let interval = match Interval::new(lo.min(hi), lo.max(hi)) {
            Ok(i) => i,
            Err(e) => return check_err(&e),
        };
        let spec = InstanceSpec {
            theorem_id: theorem.to_string(),
            seed: 0,
            n: 1,
            interval,
            function_id,
            second_function_id: second,
            weight_id: weight,
            weight_recipe: None,
            alpha: (alpha.is_finite()).then_some(alpha),
            mode: match mode {
                0 => Some(SynchronyMode::Synchronous),
                1 => Some(SynchronyMode::Asynchronous),
                _ => None,
            },
        };
        let ctx = CheckContext {
            force: force != 0,
            ..CheckContext::default()
        };
        match run_spec(&spec, &ctx) {
            Ok(result) => finish_result(out, result),
            Err(e) => check_err(&e),
        }
    })
}

/// Verdict of a result: 0 pass, 1 violated, 2 hypothesis-unmet, 3 error,
/// -1 for a null handle.
///
/// # Safety
/// `r` must be null or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn matineq_result_verdict(r: *const MatineqResult) -> i32 {
    if r.is_null() {
        return -1;
    }
    match (*r).0.verdict {
        Verdict::Pass => 0,
        Verdict::Violated => 1,
        Verdict::HypothesisUnmet => 2,
        Verdict::Error => 3,
    }
}

/// Worst slack of a result (negative when violated). Fails with
/// `MATINEQ_ERR_NO_VALUE` when the check never evaluated (gated or errored).
///
/// # Safety
/// `r` must be a live result handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn matineq_result_margin(r: *const MatineqResult, out: *mut f64) -> i32 {
    guarded(|| {
        if r.is_null() || out.is_null() {
            return fail(MATINEQ_ERR_NULL_ARGUMENT, "null result or out pointer");
        }
        match (*r).0.margin {
            Some(m) => {
                *out = m;
                MATINEQ_OK
            }
            None => fail(MATINEQ_ERR_NO_VALUE, "result has no margin"),
        }
    })
}

/// Full result serialized as pretty JSON; release with `matineq_string_free`.
///
/// # Safety
/// `r` must be a live result handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn matineq_result_to_json(
    r: *const MatineqResult,
    out: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        if r.is_null() || out.is_null() {
            return fail(MATINEQ_ERR_NULL_ARGUMENT, "null result or out pointer");
        }
        match serde_json::to_string_pretty(&(*r).0) {
            Ok(json) => match CString::new(json) {
                Ok(c) => {
                    *out = c.into_raw();
                    MATINEQ_OK
                }
                Err(_) => fail(MATINEQ_ERR_CHECK, "result JSON contains NUL"),
            },
            Err(e) => fail(MATINEQ_ERR_CHECK, &e.to_string()),
        }
    })
}

/// # Safety
/// `r` must be null or a handle not yet freed; double frees are undefined.
#[no_mangle]
pub unsafe extern "C" fn matineq_result_free(r: *mut MatineqResult) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn matineq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
