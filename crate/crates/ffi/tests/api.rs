use std::ffi::{c_char, CStr, CString};
use std::ptr;

use permdiff_ffi::*;

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { permdiff_string_free(s) };
    out
}

fn parse(text: &str) -> *mut PermdiffPoly {
    let c = CString::new(text).unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(
        unsafe { permdiff_poly_parse(c.as_ptr(), &mut p) },
        PermdiffStatus::Ok
    );
    p
}

fn render(p: *const PermdiffPoly) -> String {
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { permdiff_poly_to_string(p, &mut s) },
        PermdiffStatus::Ok
    );
    take(s)
}

#[test]
fn arithmetic_through_handles() {
    let a = parse("x1");
    let b = parse("x2");
    let mut ab = ptr::null_mut();
    let mut loz = ptr::null_mut();
    let tag = CString::new("loz").unwrap();
    unsafe {
        assert_eq!(permdiff_poly_mul(a, b, &mut ab), PermdiffStatus::Ok);
        assert_eq!(
            permdiff_poly_derived_product(tag.as_ptr(), a, b, &mut loz),
            PermdiffStatus::Ok
        );
    }
    assert_eq!(render(ab), "x1 x2");
    assert_eq!(render(loz), "x1 x2' + x2 x1'");
    let mut d = ptr::null_mut();
    let mut n = 0usize;
    unsafe {
        assert_eq!(permdiff_poly_derive(ab, &mut d), PermdiffStatus::Ok);
        assert_eq!(permdiff_poly_term_count(d, &mut n), PermdiffStatus::Ok);
    }
    assert_eq!(n, 2);
    let mut diff = ptr::null_mut();
    let mut zero = false;
    let comm = parse("x1 * x2 * x3 - x2 * x1 * x3");
    unsafe {
        assert_eq!(permdiff_poly_sub(ab, ab, &mut diff), PermdiffStatus::Ok);
        assert_eq!(permdiff_poly_is_zero(diff, &mut zero), PermdiffStatus::Ok);
        assert!(zero);
        assert_eq!(permdiff_poly_is_zero(comm, &mut zero), PermdiffStatus::Ok);
        assert!(zero);
        for p in [a, b, ab, loz, d, diff, comm] {
            permdiff_poly_free(p);
        }
    }
}

#[test]
fn errors_set_message() {
    let bad = CString::new("x1 *").unwrap();
    let mut p = ptr::null_mut();
    let status = unsafe { permdiff_poly_parse(bad.as_ptr(), &mut p) };
    assert_eq!(status, PermdiffStatus::Syntax);
    assert!(p.is_null());
    let msg = unsafe { CStr::from_ptr(permdiff_last_error_message()) }
        .to_str()
        .unwrap();
    assert!(msg.contains("column 5"), "{msg}");

    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { permdiff_poly_derive(ptr::null(), &mut out) },
        PermdiffStatus::NullPointer
    );

    let tag = CString::new("nope").unwrap();
    let x = parse("x1");
    let status = unsafe { permdiff_poly_derived_product(tag.as_ptr(), x, x, &mut out) };
    assert_eq!(status, PermdiffStatus::Unsupported);
    unsafe { permdiff_poly_free(x) };
}

#[test]
fn reports_as_json() {
    let mut json = ptr::null_mut();
    let mut ok = false;
    let suite = CString::new("diamond").unwrap();
    assert_eq!(
        unsafe { permdiff_check_suite(suite.as_ptr(), &mut json, &mut ok) },
        PermdiffStatus::Ok
    );
    assert!(ok);
    let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
    assert_eq!(v[0]["suite"], "c");

    let variant = CString::new("star").unwrap();
    assert_eq!(
        unsafe { permdiff_verify_dimension(4, variant.as_ptr(), &mut json, &mut ok) },
        PermdiffStatus::Ok
    );
    assert!(ok);
    let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
    assert_eq!(v["rank_closure"], 10);

    let p = parse("x1 * d(x2)");
    assert_eq!(unsafe { permdiff_reduce(p, &mut json) }, PermdiffStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
    assert_eq!(v["outcome"], "derivative_only");
    unsafe { permdiff_poly_free(p) };

    let kind = CString::new("lie").unwrap();
    assert_eq!(
        unsafe { permdiff_structure_table(1, kind.as_ptr(), 3, &mut json) },
        PermdiffStatus::Ok
    );
    let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
    assert_eq!(v["entries"].as_array().unwrap().len(), 16);
}
