use std::ffi::{c_char, CStr, CString};
use std::ptr;

use jordan_schemes_ffi::*;

const J16_ROWS: &str = "++++\n+--+\n++--\n+-+-\n";

fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { js_string_free(p) };
    s
}

fn last_error() -> String {
    let p = js_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

fn build(rows: &str) -> *mut JsScheme {
    let text = CString::new(rows).unwrap();
    let mut m = ptr::null_mut();
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(js_sign_matrix_parse(text.as_ptr(), &mut m), JsStatus::Ok);
        assert_eq!(js_scheme_build(m, &mut s), JsStatus::Ok);
        js_sign_matrix_free(m);
    }
    s
}

#[test]
fn j16_round_trip() {
    let s = build(J16_ROWS);
    unsafe {
        assert_eq!(js_scheme_order(s), 16);
        assert_eq!(js_scheme_class_count(s), 13);
        assert_eq!(js_scheme_verify(s), JsStatus::Ok);
        assert!(js_last_error().is_null());

        let mut json = ptr::null_mut();
        assert_eq!(js_scheme_to_json(s, &mut json), JsStatus::Ok);
        let json = CString::new(take_string(json)).unwrap();
        let mut back = ptr::null_mut();
        assert_eq!(js_scheme_from_json(json.as_ptr(), &mut back), JsStatus::Ok);

        let mut iso = false;
        assert_eq!(js_scheme_isomorphic(s, back, &mut iso), JsStatus::Ok);
        assert!(iso);
        let (mut ca, mut cb) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(js_scheme_certificate(s, &mut ca), JsStatus::Ok);
        assert_eq!(js_scheme_certificate(back, &mut cb), JsStatus::Ok);
        assert_eq!(take_string(ca), take_string(cb));
        js_scheme_free(back);
        js_scheme_free(s);
    }
}

#[test]
fn j16_classify_and_analyze() {
    let s = build(J16_ROWS);
    unsafe {
        let mut verdict = JsVerdict::AssociationScheme;
        let mut evidence = ptr::null_mut();
        assert_eq!(js_scheme_classify(s, &mut verdict, &mut evidence), JsStatus::Ok);
        assert_eq!(verdict, JsVerdict::ProperJordan);
        let evidence: serde_json::Value = serde_json::from_str(&take_string(evidence)).unwrap();
        assert_eq!(evidence["evidence"]["dimAlg"], 24);

        assert_eq!(js_scheme_classify(s, &mut verdict, ptr::null_mut()), JsStatus::Ok);

        let mut report = ptr::null_mut();
        assert_eq!(js_scheme_analyze(s, 0, &mut report), JsStatus::Ok);
        let report: serde_json::Value = serde_json::from_str(&take_string(report)).unwrap();
        assert_eq!(report["summary"], "8×Real + Spin(4)");
        js_scheme_free(s);
    }
}

#[test]
fn verdicts_by_rank() {
    let cases = [
        ("++\n+-\n", 8, JsVerdict::ImproperJordan),
        ("++++++++\n+-+-+--+\n+--+++--\n++--+-+-\n+----+++\n++-+---+\n+++--+--\n+-++--+-\n", 32, JsVerdict::ProperJordan),
    ];
    for (rows, points, expected) in cases {
        let s = build(rows);
        let mut verdict = JsVerdict::AssociationScheme;
        unsafe {
            assert_eq!(js_scheme_order(s), points);
            assert_eq!(js_scheme_classify(s, &mut verdict, ptr::null_mut()), JsStatus::Ok);
            js_scheme_free(s);
        }
        assert_eq!(verdict, expected);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut m = ptr::null_mut();
        let bad = CString::new("++\n+x\n").unwrap();
        assert_eq!(js_sign_matrix_parse(bad.as_ptr(), &mut m), JsStatus::ParseError);
        assert!(m.is_null());
        assert!(last_error().contains("line 2, column 2"));

        assert_eq!(js_sign_matrix_parse(ptr::null(), &mut m), JsStatus::NullPointer);

        let flipped = CString::new("++++\n+-+-\n++--\n+--+\n").unwrap();
        assert_eq!(js_sign_matrix_parse(flipped.as_ptr(), &mut m), JsStatus::Ok);
        let mut ok = true;
        assert_eq!(js_sign_matrix_is_admissible(m, &mut ok), JsStatus::Ok);
        assert!(!ok);
        let mut s = ptr::null_mut();
        assert_eq!(js_scheme_build(m, &mut s), JsStatus::NotAdmissible);
        assert!(s.is_null());
        js_sign_matrix_free(m);

        let json = CString::new("{\"order\": 2, \"classCount\": 2,").unwrap();
        assert_eq!(js_scheme_from_json(json.as_ptr(), &mut s), JsStatus::ParseError);
        assert!(last_error().contains("line"));

        // a symmetric partition failing the product axiom: path on 3 points
        let path = CString::new(
            "{\"order\":3,\"classCount\":3,\"relationMatrix\":[[0,1,2],[1,0,1],[2,1,0]]}",
        )
        .unwrap();
        let status = js_scheme_from_json(path.as_ptr(), &mut s);
        if status == JsStatus::Ok {
            assert_eq!(js_scheme_verify(s), JsStatus::AxiomViolation);
            assert!(!last_error().is_empty());
            js_scheme_free(s);
        } else {
            assert_eq!(status, JsStatus::AxiomViolation);
        }

        js_scheme_free(ptr::null_mut());
        js_sign_matrix_free(ptr::null_mut());
        js_string_free(ptr::null_mut());
    }
}
