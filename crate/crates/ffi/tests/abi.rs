use std::ffi::{CStr, CString};
use std::ptr;

use ballean_ffi::*;

fn last_error() -> String {
    let p = ballean_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn parse(text: &str) -> Result<*mut BalleanDocument, (BalleanStatus, String)> {
    let text = CString::new(text).unwrap();
    let mut doc = ptr::null_mut();
    match unsafe { ballean_document_parse(text.as_ptr(), &mut doc) } {
        BalleanStatus::Ok => Ok(doc),
        s => {
            assert!(doc.is_null());
            Err((s, last_error()))
        }
    }
}

fn records(report: *const BalleanReport) -> Vec<(String, String, BalleanVerdict)> {
    let n = unsafe { ballean_report_record_count(report) };
    (0..n)
        .map(|i| {
            let mut r = BalleanRecord {
                name: ptr::null(),
                property: ptr::null(),
                text: ptr::null(),
                verdict: BalleanVerdict::Error,
            };
            assert_eq!(unsafe { ballean_report_record(report, i, &mut r) }, BalleanStatus::Ok);
            let s = |p| unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
            (s(r.name), s(r.property), r.verdict)
        })
        .collect()
}

#[test]
fn run_a_document_and_read_its_records() {
    let doc = parse("(def Y (gen pow4))\n(def Z (gen two-pow4))\n(check asymptotically-disjoint Y Z)\n(check asymptotically-disjoint (ap period 2 residue 0) (ap period 2 residue 1))").unwrap();
    assert_eq!(unsafe { ballean_document_directive_count(doc) }, 2);

    let mut report = ptr::null_mut();
    assert_eq!(unsafe { ballean_document_run(doc, ptr::null(), &mut report) }, BalleanStatus::Ok);
    let recs = records(report);
    assert_eq!(recs.len(), 2);
    assert_eq!(recs[0].2, BalleanVerdict::True);
    assert_eq!(recs[1].2, BalleanVerdict::False);
    assert_eq!(unsafe { ballean_report_exit_code(report) }, 1);
    let text = unsafe { CStr::from_ptr(ballean_report_text(report)) }.to_str().unwrap();
    assert!(text.contains("asymptotically-disjoint Y Z: TRUE"), "{text}");

    let mut out = BalleanRecord { name: ptr::null(), property: ptr::null(), text: ptr::null(), verdict: BalleanVerdict::Info };
    assert_eq!(unsafe { ballean_report_record(report, 2, &mut out) }, BalleanStatus::OutOfRange);

    unsafe {
        ballean_report_free(report);
        ballean_document_free(doc);
    }
}

#[test]
fn render_round_trips() {
    let doc = parse("(def B   (finite-subsets))  ; comment\n(invariants B)").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ballean_document_render(doc, &mut s) }, BalleanStatus::Ok);
    let once = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe {
        ballean_string_free(s);
        ballean_document_free(doc);
    }
    let again = parse(&once).unwrap();
    let mut t = ptr::null_mut();
    unsafe { ballean_document_render(again, &mut t) };
    assert_eq!(unsafe { CStr::from_ptr(t) }.to_str().unwrap(), once);
    unsafe {
        ballean_string_free(t);
        ballean_document_free(again);
    }
}

#[test]
fn infer_with_lines_format() {
    let expr = CString::new("(b-product (finite-subsets omega) (rays))").unwrap();
    let opts = BalleanOptions { format: BalleanFormat::Lines, ..ballean_options_default() };
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { ballean_infer(expr.as_ptr(), &opts, &mut report) }, BalleanStatus::Ok);
    let recs = records(report);
    assert!(recs.iter().any(|(_, p, v)| p == "metrizable" && *v == BalleanVerdict::True));
    let text = unsafe { CStr::from_ptr(ballean_report_text(report)) }.to_str().unwrap();
    assert!(text.lines().all(|l| l.split('\t').count() == 3), "{text}");
    unsafe { ballean_report_free(report) };
}

#[test]
fn errors_map_to_status_codes() {
    let (s, msg) = parse("(def X (down B))").unwrap_err();
    assert_eq!(s, BalleanStatus::Parse);
    assert!(msg.contains("1:14") && msg.contains("unresolved name B"), "{msg}");

    let (s, _) = parse("(def X (metric-nat)").unwrap_err();
    assert_eq!(s, BalleanStatus::Parse);

    let mut doc = ptr::null_mut();
    assert_eq!(unsafe { ballean_document_parse(ptr::null(), &mut doc) }, BalleanStatus::NullPointer);
    let bad = [0xffu8, 0xfe, 0];
    assert_eq!(
        unsafe { ballean_document_parse(bad.as_ptr().cast(), &mut doc) },
        BalleanStatus::InvalidUtf8
    );

    let ok = parse("(infer (metric-nat))").unwrap();
    let opts = BalleanOptions { eps_num: 3, eps_den: 2, ..ballean_options_default() };
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { ballean_document_run(ok, &opts, &mut report) }, BalleanStatus::Domain);
    assert!(report.is_null());
    assert!(last_error().contains("(0, 1]"));
    unsafe { ballean_document_free(ok) };
}

#[test]
fn null_handles_are_tolerated() {
    unsafe {
        ballean_document_free(ptr::null_mut());
        ballean_report_free(ptr::null_mut());
        ballean_string_free(ptr::null_mut());
        assert_eq!(ballean_document_directive_count(ptr::null()), 0);
        assert_eq!(ballean_report_record_count(ptr::null()), 0);
        assert_eq!(ballean_report_exit_code(ptr::null()), 3);
        assert!(ballean_report_text(ptr::null()).is_null());
        let mut r = ptr::null_mut();
        assert_eq!(ballean_document_run(ptr::null(), ptr::null(), &mut r), BalleanStatus::NullPointer);
    }
    let v = unsafe { CStr::from_ptr(ballean_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
