//! C ABI over `jordan-schemes`.
//!
//! Objects are opaque handles created by `js_*_parse` / `js_*_build` style
//! functions and released with the matching `js_*_free`. Every fallible call
//! returns a [`JsStatus`]; on failure a message is available from
//! [`js_last_error`] on the same thread. Strings handed out by the library
//! must be released with [`js_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use jordan_schemes::analysis::decompose;
use jordan_schemes::iso::{are_isomorphic, canonical_certificate};
use jordan_schemes::scheme::{read_scheme_json, write_scheme_json};
use jordan_schemes::{admissible, build_scheme, classify_scheme, verify_jordan_scheme, JordanScheme, SchemeError, SignMatrix, Verdict};

/// Result codes shared by every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    NotAdmissible = 4,
    AxiomViolation = 5,
    InvalidScheme = 6,
    AnalysisFailed = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JsVerdict {
    AssociationScheme = 0,
    ImproperJordan = 1,
    ProperJordan = 2,
}

/// Opaque sign matrix.
pub struct JsSignMatrix(SignMatrix);

/// Opaque verified or unverified Jordan scheme.
pub struct JsScheme(JordanScheme);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn fail(status: JsStatus, message: impl Into<String>) -> JsStatus {
    set_error(message);
    status
}

fn scheme_status(e: &SchemeError) -> JsStatus {
    match e {
        SchemeError::NotAdmissible { .. } => JsStatus::NotAdmissible,
        SchemeError::Axiom(_) => JsStatus::AxiomViolation,
        SchemeError::Invalid(_) => JsStatus::InvalidScheme,
        SchemeError::Json { .. } => JsStatus::ParseError,
    }
}

/// Runs `f`, converting panics into [`JsStatus::Panic`].
fn guard(f: impl FnOnce() -> JsStatus) -> JsStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(JsStatus::Panic, "internal panic"),
    }
}

unsafe fn read_str<'a>(text: *const c_char) -> Result<&'a str, JsStatus> {
    if text.is_null() {
        return Err(fail(JsStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(text)
        .to_str()
        .map_err(|e| fail(JsStatus::InvalidUtf8, e.to_string()))
}

unsafe fn put_string(out: *mut *mut c_char, text: String) -> JsStatus {
    match CString::new(text) {
        Ok(s) => {
            *out = s.into_raw();
            JsStatus::Ok
        }
        Err(_) => fail(JsStatus::Panic, "output contains a NUL byte"),
    }
}

macro_rules! non_null {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            return fail(JsStatus::NullPointer, concat!("null argument: ", stringify!($p)));
        })+
    };
}

/// Message describing the most recent failure on this thread, or null.
/// The pointer stays valid until the next call into the library.
#[no_mangle]
pub extern "C" fn js_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn js_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `+`/`-` rows into a sign matrix.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn js_sign_matrix_parse(text: *const c_char, out: *mut *mut JsSignMatrix) -> JsStatus {
    guard(|| {
        non_null!(out);
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match SignMatrix::parse(text) {
            Ok(m) => {
                *out = Box::into_raw(Box::new(JsSignMatrix(m)));
                JsStatus::Ok
            }
            Err(e) => fail(JsStatus::ParseError, e.to_string()),
        }
    })
}

/// # Safety
/// `m` must be null or a live handle from [`js_sign_matrix_parse`].
#[no_mangle]
pub unsafe extern "C" fn js_sign_matrix_free(m: *mut JsSignMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn js_sign_matrix_order(m: *const JsSignMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.order())
}

/// Writes whether the admissibility condition holds.
///
/// # Safety
/// `m` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn js_sign_matrix_is_admissible(m: *const JsSignMatrix, out: *mut bool) -> JsStatus {
    guard(|| {
        non_null!(m, out);
        *out = admissible(&(*m).0);
        JsStatus::Ok
    })
}

/// Builds the Jordan scheme on `4 * order` points.
///
/// # Safety
/// `m` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn js_scheme_build(m: *const JsSignMatrix, out: *mut *mut JsScheme) -> JsStatus {
    guard(|| {
        non_null!(m, out);
        match build_scheme(&(*m).0) {
            Ok(s) => {
                *out = Box::into_raw(Box::new(JsScheme(s)));
                JsStatus::Ok
            }
            Err(e) => fail(scheme_status(&e), e.to_string()),
        }
    })
}

/// Reads a scheme from its JSON form.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn js_scheme_from_json(text: *const c_char, out: *mut *mut JsScheme) -> JsStatus {
    guard(|| {
        non_null!(out);
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match read_scheme_json(text) {
            Ok(s) => {
                *out = Box::into_raw(Box::new(JsScheme(s)));
                JsStatus::Ok
            }
            Err(e) => fail(scheme_status(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn js_scheme_to_json(s: *const JsScheme, out: *mut *mut c_char) -> JsStatus {
    guard(|| {
        non_null!(s, out);
        put_string(out, write_scheme_json(&(*s).0))
    })
}

/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn js_scheme_free(s: *mut JsScheme) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Number of points, or 0 for null.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn js_scheme_order(s: *const JsScheme) -> usize {
    s.as_ref().map_or(0, |s| s.0.order())
}

/// Number of classes including the diagonal, or 0 for null.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn js_scheme_class_count(s: *const JsScheme) -> usize {
    s.as_ref().map_or(0, |s| s.0.class_count())
}

/// Checks the Jordan scheme axioms; the violation is left in the error slot.
///
/// # Safety
/// `s` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn js_scheme_verify(s: *const JsScheme) -> JsStatus {
    guard(|| {
        non_null!(s);
        match verify_jordan_scheme(&(*s).0) {
            Ok(_) => JsStatus::Ok,
            Err(e) => fail(scheme_status(&e), e.to_string()),
        }
    })
}

/// Classifies a verified scheme. `evidence_json` may be null; otherwise it
/// receives the closure dimensions as JSON.
///
/// # Safety
/// `s` must be a live handle, `verdict` writable, `evidence_json` null or writable.
#[no_mangle]
pub unsafe extern "C" fn js_scheme_classify(
    s: *const JsScheme,
    verdict: *mut JsVerdict,
    evidence_json: *mut *mut c_char,
) -> JsStatus {
    guard(|| {
        non_null!(s, verdict);
        if let Err(e) = verify_jordan_scheme(&(*s).0) {
            return fail(scheme_status(&e), e.to_string());
        }
        let c = classify_scheme(&(*s).0);
        *verdict = match c.verdict {
            Verdict::AssociationScheme => JsVerdict::AssociationScheme,
            Verdict::ImproperJordan => JsVerdict::ImproperJordan,
            Verdict::ProperJordan => JsVerdict::ProperJordan,
        };
        if evidence_json.is_null() {
            return JsStatus::Ok;
        }
        put_string(evidence_json, serde_json::to_string(&c).expect("classification serializes"))
    })
}

/// Hex encoding of the canonical isomorphism certificate.
///
/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn js_scheme_certificate(s: *const JsScheme, out: *mut *mut c_char) -> JsStatus {
    guard(|| {
        non_null!(s, out);
        put_string(out, canonical_certificate(&(*s).0).to_hex())
    })
}

/// # Safety
/// `a`, `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn js_scheme_isomorphic(a: *const JsScheme, b: *const JsScheme, out: *mut bool) -> JsStatus {
    guard(|| {
        non_null!(a, b, out);
        *out = are_isomorphic(&(*a).0, &(*b).0);
        JsStatus::Ok
    })
}

/// Decomposes the adjacency algebra and writes the report as JSON.
///
/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn js_scheme_analyze(s: *const JsScheme, seed: u64, out: *mut *mut c_char) -> JsStatus {
    guard(|| {
        non_null!(s, out);
        match decompose(&(*s).0, seed) {
            Ok(d) => put_string(out, serde_json::to_string(&d.report()).expect("report serializes")),
            Err(e) => fail(JsStatus::AnalysisFailed, e.to_string()),
        }
    })
}
