//! C interface. Objects are opaque handles created and freed through this
//! API; big integers cross the boundary as decimal strings owned by the
//! caller and released with `arclab_string_free`. Every fallible call
//! returns an `ArclabStatus`, and the message of the last failure on the
//! calling thread is available from `arclab_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use arclab::closedform::{self, Label};
use arclab::engine;
use arclab::incidence::{enumerate_classes, ClassFilter};
use arclab::plane::{parse_plane, FiniteField, ProjectivePlane};
use arclab::symbolic::CountExpression;
use arclab::{oracle, Error};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArclabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Axiom = 4,
    Field = 5,
    OutOfRange = 6,
    InvalidArgument = 7,
    Internal = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArclabFilter {
    All = 0,
    Superfigurations = 1,
    Configurations = 2,
}

/// A validated projective plane.
pub struct ArclabPlane(ProjectivePlane);

/// An arc-counting formula `C_n`.
pub struct ArclabFormula(CountExpression);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("interior nul bytes were replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> ArclabStatus {
    match e {
        Error::Parse { .. } | Error::Json(_) => ArclabStatus::Parse,
        Error::Axiom(_) => ArclabStatus::Axiom,
        Error::Field(_) => ArclabStatus::Field,
        Error::OutOfRange(_) => ArclabStatus::OutOfRange,
        Error::Internal(_) | Error::Io(_) | Error::Checkpoint(_) => ArclabStatus::Internal,
        _ => ArclabStatus::InvalidArgument,
    }
}

/// Run `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (ArclabStatus, String)>) -> ArclabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ArclabStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside arclab".into());
            ArclabStatus::Panic
        }
    }
}

fn lib<T>(r: arclab::Result<T>) -> Result<T, (ArclabStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (ArclabStatus, String) {
    (ArclabStatus::NullPointer, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, (ArclabStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (ArclabStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), (ArclabStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn arclab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |m| m.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn arclab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn arclab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The Desarguesian plane PG(2, q).
///
/// # Safety
/// `out` must be a valid pointer to write the handle to.
#[no_mangle]
pub unsafe extern "C" fn arclab_plane_pg2(q: u64, out: *mut *mut ArclabPlane) -> ArclabStatus {
    guard(|| {
        let field = lib(FiniteField::of_order(q))?;
        let plane = Box::into_raw(Box::new(ArclabPlane(ProjectivePlane::pg2(&field))));
        put(out, plane, "out")
    })
}

/// Parse and validate a plane in the plane file format.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn arclab_plane_parse(text: *const c_char, out: *mut *mut ArclabPlane) -> ArclabStatus {
    guard(|| {
        let text = str_arg(text, "text")?;
        let plane = lib(parse_plane(text, "ffi"))?;
        put(out, Box::into_raw(Box::new(ArclabPlane(plane))), "out")
    })
}

/// # Safety
/// `plane` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn arclab_plane_free(plane: *mut ArclabPlane) {
    if !plane.is_null() {
        drop(Box::from_raw(plane));
    }
}

/// # Safety
/// `plane` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn arclab_plane_order(plane: *const ArclabPlane) -> u32 {
    plane.as_ref().map_or(0, |p| p.0.order())
}

/// # Safety
/// `plane` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn arclab_plane_num_points(plane: *const ArclabPlane) -> usize {
    plane.as_ref().map_or(0, |p| p.0.num_points())
}

/// Ordered `n`-arcs of the plane, as a decimal string.
///
/// # Safety
/// `plane` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn arclab_count_arcs(plane: *const ArclabPlane, n: usize, out: *mut *mut c_char) -> ArclabStatus {
    guard(|| {
        let plane = plane.as_ref().ok_or_else(|| null("plane"))?;
        put(out, c_string(oracle::count_arcs(&plane.0, n).to_string()), "out")
    })
}

/// Number of classes of linear spaces on `n` points passing `filter`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn arclab_enumerate_count(n: usize, filter: ArclabFilter, out: *mut usize) -> ArclabStatus {
    guard(|| {
        let filter = match filter {
            ArclabFilter::All => ClassFilter::All,
            ArclabFilter::Superfigurations => ClassFilter::Superfigurations,
            ArclabFilter::Configurations => ClassFilter::Configurations,
        };
        put(out, lib(enumerate_classes(n, filter))?.len(), "out")
    })
}

/// Derive `C_n`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn arclab_formula(n: usize, out: *mut *mut ArclabFormula) -> ArclabStatus {
    guard(|| {
        let formula = lib(engine::arc_formula(n))?;
        put(out, Box::into_raw(Box::new(ArclabFormula(formula))), "out")
    })
}

/// # Safety
/// `formula` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn arclab_formula_free(formula: *mut ArclabFormula) {
    if !formula.is_null() {
        drop(Box::from_raw(formula));
    }
}

/// The formula as JSON (base polynomial and per-class coefficients).
///
/// # Safety
/// `formula` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn arclab_formula_json(formula: *const ArclabFormula, out: *mut *mut c_char) -> ArclabStatus {
    guard(|| {
        let formula = formula.as_ref().ok_or_else(|| null("formula"))?;
        put(out, c_string(formula.0.to_json()), "out")
    })
}

/// The formula as plain text with class ids as symbol names.
///
/// # Safety
/// `formula` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn arclab_formula_text(formula: *const ArclabFormula, out: *mut *mut c_char) -> ArclabStatus {
    guard(|| {
        let formula = formula.as_ref().ok_or_else(|| null("formula"))?;
        put(out, c_string(formula.0.to_string()), "out")
    })
}

/// Number of superfiguration symbols in the formula.
///
/// # Safety
/// `formula` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn arclab_formula_num_terms(formula: *const ArclabFormula) -> usize {
    formula.as_ref().map_or(0, |f| f.0.terms().len())
}

/// Closed-form class count of a labeled superfiguration (`"7"`, `"8"`,
/// `"9_3"` .. `"9_12"`) on PG(2, q), as a decimal string.
///
/// # Safety
/// `label` must be a nul-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn arclab_closed_form(label: *const c_char, q: u64, out: *mut *mut c_char) -> ArclabStatus {
    guard(|| {
        let label: Label = lib(str_arg(label, "label")?.parse())?;
        put(out, c_string(lib(closedform::as_closed(label, q))?.to_string()), "out")
    })
}

/// Ordered 9-arcs of PG(2, q) as a decimal string.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn arclab_nine_arcs(q: u64, out: *mut *mut c_char) -> ArclabStatus {
    guard(|| put(out, c_string(lib(closedform::c9_iss(q))?.to_string()), "out"))
}
