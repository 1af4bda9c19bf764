//! C interface to `permdiff`.
//!
//! Polynomials cross the boundary as opaque `PermdiffPoly` handles; reports
//! come back as JSON strings owned by the library. Every function returns a
//! [`PermdiffStatus`]; on failure [`permdiff_last_error_message`] describes
//! the error for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::str::FromStr;

use permdiff::cli::parse_expr;
use permdiff::identity::{eval, generator_substitution, run_all, run_suite, EvalContext, SuiteId};
use permdiff::reduction::reduce;
use permdiff::span::{verify_dimension, Variant};
use permdiff::witt::{structure_table, verify_tables, Kind};
use permdiff::{DiffPermPoly, Error, ProductTag};

#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PermdiffStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Syntax = 3,
    Algebra = 4,
    Unsupported = 5,
    Panic = 6,
}

/// Opaque polynomial over the rationals with one derivation.
pub struct PermdiffPoly {
    inner: DiffPermPoly,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(PermdiffStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Syntax { .. } | Error::UnknownOperation { .. } => PermdiffStatus::Syntax,
            Error::Unsupported(_) | Error::UnknownSuite(_) | Error::UnknownProduct(_) => {
                PermdiffStatus::Unsupported
            }
            _ => PermdiffStatus::Algebra,
        };
        Fail(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> PermdiffStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PermdiffStatus::Ok,
        Ok(Err(Fail(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            PermdiffStatus::Panic
        }
    }
}

fn null() -> Fail {
    Fail(PermdiffStatus::NullPointer, "null pointer argument".into())
}

/// # Safety
/// `s` is null or a valid nul-terminated string.
unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Fail(PermdiffStatus::InvalidUtf8, "argument is not UTF-8".into()))
}

/// # Safety
/// `p` is null or a live handle.
unsafe fn poly<'a>(p: *const PermdiffPoly) -> Result<&'a DiffPermPoly, Fail> {
    p.as_ref().map(|h| &h.inner).ok_or_else(null)
}

/// # Safety
/// `out` is null or writable.
unsafe fn put_poly(out: *mut *mut PermdiffPoly, inner: DiffPermPoly) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null());
    }
    *out = Box::into_raw(Box::new(PermdiffPoly { inner }));
    Ok(())
}

/// # Safety
/// `out` is null or writable.
unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null());
    }
    *out = CString::new(s).expect("no interior nul").into_raw();
    Ok(())
}

/// # Safety
/// `out` is null or writable.
unsafe fn put_bool(out: *mut bool, v: bool) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null());
    }
    *out = v;
    Ok(())
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable report")
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn permdiff_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` is null or came from this library and was not freed before.
#[no_mangle]
pub unsafe extern "C" fn permdiff_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Evaluates an expression in `x1, x2, ...` to a polynomial.
///
/// # Safety
/// `text` is a nul-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn permdiff_poly_parse(
    text: *const c_char,
    out: *mut *mut PermdiffPoly,
) -> PermdiffStatus {
    guard(|| {
        let e = parse_expr(read_str(text)?)?;
        let k = e.variables().last().copied().unwrap_or(0);
        let p = eval(&e, &generator_substitution(k, 1), &EvalContext::single())?;
        put_poly(out, p)
    })
}

/// The generator `x_var`.
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn permdiff_poly_generator(
    var: u32,
    out: *mut *mut PermdiffPoly,
) -> PermdiffStatus {
    guard(|| {
        if var == 0 {
            return Err(Error::ZeroVariable(0).into());
        }
        put_poly(out, DiffPermPoly::generator(var, 1))
    })
}

/// # Safety
/// `p` is null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn permdiff_poly_free(p: *mut PermdiffPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `a`, `b` are live handles; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn permdiff_poly_add(
    a: *const PermdiffPoly,
    b: *const PermdiffPoly,
    out: *mut *mut PermdiffPoly,
) -> PermdiffStatus {
    guard(|| put_poly(out, poly(a)?.try_add(poly(b)?)?))
}

/// # Safety
/// `a`, `b` are live handles; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn permdiff_poly_sub(
    a: *const PermdiffPoly,
    b: *const PermdiffPoly,
    out: *mut *mut PermdiffPoly,
) -> PermdiffStatus {
    guard(|| put_poly(out, poly(a)?.try_sub(poly(b)?)?))
}

/// # Safety
/// `a`, `b` are live handles; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn permdiff_poly_mul(
    a: *const PermdiffPoly,
    b: *const PermdiffPoly,
    out: *mut *mut PermdiffPoly,
) -> PermdiffStatus {
    guard(|| put_poly(out, poly(a)?.mul(poly(b)?)?))
}

/// One of `prec`, `succ`, `loz`, `bullet`, `diamond`, `circ`.
///
/// # Safety
/// `tag` is a nul-terminated string; `a`, `b` are live handles; `out` is
/// writable.
#[no_mangle]
pub unsafe extern "C" fn permdiff_poly_derived_product(
    tag: *const c_char,
    a: *const PermdiffPoly,
    b: *const PermdiffPoly,
    out: *mut *mut PermdiffPoly,
) -> PermdiffStatus {
    guard(|| {
        let tag = ProductTag::from_str(read_str(tag)?)?;
        put_poly(out, DiffPermPoly::derived_product(tag, poly(a)?, poly(b)?)?)
    })
}

/// # Safety
/// `p` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn permdiff_poly_derive(
    p: *const PermdiffPoly,
    out: *mut *mut PermdiffPoly,
) -> PermdiffStatus {
    guard(|| put_poly(out, poly(p)?.derive(1)?))
}

/// # Safety
/// `p` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn permdiff_poly_star(
    p: *const PermdiffPoly,
    out: *mut *mut PermdiffPoly,
) -> PermdiffStatus {
    guard(|| put_poly(out, poly(p)?.star()?))
}

/// # Safety
/// `p` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn permdiff_poly_is_zero(
    p: *const PermdiffPoly,
    out: *mut bool,
) -> PermdiffStatus {
    guard(|| put_bool(out, poly(p)?.is_zero()))
}

/// # Safety
/// `a`, `b` are live handles; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn permdiff_poly_equal(
    a: *const PermdiffPoly,
    b: *const PermdiffPoly,
    out: *mut bool,
) -> PermdiffStatus {
    guard(|| put_bool(out, poly(a)? == poly(b)?))
}

/// Number of monomials with nonzero coefficient.
///
/// # Safety
/// `p` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn permdiff_poly_term_count(
    p: *const PermdiffPoly,
    out: *mut usize,
) -> PermdiffStatus {
    guard(|| {
        let n = poly(p)?.len();
        out.as_mut().map(|o| *o = n).ok_or_else(null)
    })
}

/// Normal form as text; free with [`permdiff_string_free`].
///
/// # Safety
/// `p` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn permdiff_poly_to_string(
    p: *const PermdiffPoly,
    out: *mut *mut c_char,
) -> PermdiffStatus {
    guard(|| put_string(out, poly(p)?.to_string()))
}

/// Runs a suite (letter, name or `all`); `json` receives the report and
/// `all_expected` whether every verdict matched.
///
/// # Safety
/// `suite` is a nul-terminated string; `json` and `all_expected` are
/// writable.
#[no_mangle]
pub unsafe extern "C" fn permdiff_check_suite(
    suite: *const c_char,
    json: *mut *mut c_char,
    all_expected: *mut bool,
) -> PermdiffStatus {
    guard(|| {
        let id = read_str(suite)?;
        let reports = if id == "all" {
            run_all()?
        } else {
            vec![run_suite(SuiteId::from_str(id)?)?]
        };
        put_bool(all_expected, reports.iter().all(|r| r.passed()))?;
        put_string(json, to_json(&reports))
    })
}

/// Dimension check for `variant` (`star` or `prime`) at degree `n`.
///
/// # Safety
/// `variant` is a nul-terminated string; `json` and `ok` are writable.
#[no_mangle]
pub unsafe extern "C" fn permdiff_verify_dimension(
    n: usize,
    variant: *const c_char,
    json: *mut *mut c_char,
    ok: *mut bool,
) -> PermdiffStatus {
    guard(|| {
        let report = verify_dimension(n, Variant::from_str(read_str(variant)?)?)?;
        put_bool(ok, report.ok)?;
        put_string(json, to_json(&report))
    })
}

/// Reduction trace and certificate for `p`, as JSON.
///
/// # Safety
/// `p` is a live handle; `json` is writable.
#[no_mangle]
pub unsafe extern "C" fn permdiff_reduce(
    p: *const PermdiffPoly,
    json: *mut *mut c_char,
) -> PermdiffStatus {
    guard(|| put_string(json, to_json(&reduce(poly(p)?)?)))
}

/// Brackets of basis pairs with exponents up to `bound`; `kind` is `lie`
/// or `leibniz`, `n` is 1 or 2.
///
/// # Safety
/// `kind` is a nul-terminated string; `json` is writable.
#[no_mangle]
pub unsafe extern "C" fn permdiff_structure_table(
    n: usize,
    kind: *const c_char,
    bound: u32,
    json: *mut *mut c_char,
) -> PermdiffStatus {
    guard(|| {
        let table = structure_table(n, Kind::from_str(read_str(kind)?)?, bound)?;
        put_string(json, to_json(&table))
    })
}

/// Compares the reference rules with computed brackets.
///
/// # Safety
/// `json` and `all_ok` are writable.
#[no_mangle]
pub unsafe extern "C" fn permdiff_verify_tables(
    json: *mut *mut c_char,
    all_ok: *mut bool,
) -> PermdiffStatus {
    guard(|| {
        let v = verify_tables()?;
        put_bool(all_ok, v.all_ok)?;
        put_string(json, to_json(&v))
    })
}
