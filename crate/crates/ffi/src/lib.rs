//! C ABI over the ballean instance format.
//!
//! Documents and reports are opaque handles owned by the caller and released
//! with their `_free` function. Every fallible call returns a
//! [`BalleanStatus`]; on failure the message is available from
//! [`ballean_last_error`] on the same thread until the next failing call.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ballean::analysis::Value;
use ballean::cli::{parse, run, Format, InstanceDocument, Options, Outcome, Report};
use ballean::{Error, DEFAULT_HORIZON};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BalleanStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Encoding = 4,
    GroundMismatch = 5,
    Unsupported = 6,
    Domain = 7,
    Precondition = 8,
    Inconsistency = 9,
    OutOfRange = 10,
    Panic = 11,
}

impl From<&Error> for BalleanStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Encoding(_) => BalleanStatus::Encoding,
            Error::GroundMismatch { .. } => BalleanStatus::GroundMismatch,
            Error::Unsupported(_) => BalleanStatus::Unsupported,
            Error::Domain(_) => BalleanStatus::Domain,
            Error::Precondition(_) => BalleanStatus::Precondition,
            Error::Parse { .. } => BalleanStatus::Parse,
            Error::Inconsistency(_) => BalleanStatus::Inconsistency,
        }
    }
}

/// The verdict carried by one report record.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BalleanVerdict {
    True = 0,
    False = 1,
    Unknown = 2,
    Error = 3,
    /// Counts, cardinals and other informational lines.
    Info = 4,
}

impl From<Outcome> for BalleanVerdict {
    fn from(o: Outcome) -> Self {
        match o {
            Outcome::True => BalleanVerdict::True,
            Outcome::False => BalleanVerdict::False,
            Outcome::Unknown => BalleanVerdict::Unknown,
            Outcome::Error => BalleanVerdict::Error,
            Outcome::Info => BalleanVerdict::Info,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BalleanFormat {
    Plain = 0,
    /// `name<TAB>property<TAB>verdict` per record.
    Lines = 1,
}

/// Run options. `eps_den == 0` selects the default grid 1/2, 1/4, 1/8.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct BalleanOptions {
    pub horizon: u64,
    pub eps_num: u64,
    pub eps_den: u64,
    pub format: BalleanFormat,
}

/// A record view. The strings are borrowed from the report and live as long
/// as it does.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct BalleanRecord {
    pub name: *const c_char,
    pub property: *const c_char,
    pub text: *const c_char,
    pub verdict: BalleanVerdict,
}

/// A parsed, type-checked instance document.
pub struct BalleanDocument {
    doc: InstanceDocument,
}

struct OwnedRecord {
    name: CString,
    property: CString,
    text: CString,
    verdict: BalleanVerdict,
}

/// The rendered output of a run together with its records.
pub struct BalleanReport {
    rendered: CString,
    records: Vec<OwnedRecord>,
    exit_code: i32,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn c_string(s: &str) -> CString {
    CString::new(s.replace('\0', "\u{fffd}")).expect("interior NULs replaced")
}

fn fail(status: BalleanStatus, message: &str) -> BalleanStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c_string(message)));
    status
}

fn fail_with(e: &Error) -> BalleanStatus {
    fail(e.into(), &e.to_string())
}

/// Runs `f`, turning a panic into [`BalleanStatus::Panic`].
fn guard(f: impl FnOnce() -> BalleanStatus) -> BalleanStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(BalleanStatus::Panic, &format!("internal panic: {msg}"))
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, BalleanStatus> {
    if p.is_null() {
        return Err(fail(BalleanStatus::NullPointer, &format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(BalleanStatus::InvalidUtf8, &format!("{what} is not valid UTF-8")))
}

impl BalleanReport {
    fn new(report: &Report, format: Format) -> Self {
        BalleanReport {
            rendered: c_string(&report.render(format)),
            records: report
                .records()
                .map(|r| OwnedRecord {
                    name: c_string(&r.name),
                    property: c_string(&r.property),
                    text: c_string(&r.text),
                    verdict: r.outcome.into(),
                })
                .collect(),
            exit_code: report.exit_code(),
        }
    }
}

fn options(o: Option<&BalleanOptions>) -> Result<Options, BalleanStatus> {
    let Some(o) = o else {
        return Ok(Options::default());
    };
    let eps = match (o.eps_num, o.eps_den) {
        (_, 0) => None,
        (n, d) if n == 0 || n > d => {
            return Err(fail(BalleanStatus::Domain, &format!("eps must lie in (0, 1], got {n}/{d}")));
        }
        (n, d) => Some(Value::new(n, d)),
    };
    Ok(Options {
        horizon: o.horizon,
        eps,
        witnesses: Vec::new(),
        format: match o.format {
            BalleanFormat::Plain => Format::Plain,
            BalleanFormat::Lines => Format::Lines,
        },
    })
}

/// Default options: horizon 4096, the default eps grid, plain output.
#[no_mangle]
pub extern "C" fn ballean_options_default() -> BalleanOptions {
    BalleanOptions {
        horizon: DEFAULT_HORIZON,
        eps_num: 0,
        eps_den: 0,
        format: BalleanFormat::Plain,
    }
}

/// The message of the last failing call on this thread, or null. Valid until
/// the next failing call on this thread.
#[no_mangle]
pub extern "C" fn ballean_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// The library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ballean_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses and type-checks an instance document.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ballean_document_parse(text: *const c_char, out: *mut *mut BalleanDocument) -> BalleanStatus {
    guard(|| {
        if out.is_null() {
            return fail(BalleanStatus::NullPointer, "out is null");
        }
        *out = ptr::null_mut();
        let text = match str_arg(text, "text") {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse(text) {
            Ok(doc) => {
                *out = Box::into_raw(Box::new(BalleanDocument { doc }));
                BalleanStatus::Ok
            }
            Err(e) => fail_with(&e),
        }
    })
}

/// Releases a document. Null is ignored.
///
/// # Safety
/// `doc` must come from [`ballean_document_parse`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ballean_document_free(doc: *mut BalleanDocument) {
    if !doc.is_null() {
        drop(Box::from_raw(doc));
    }
}

/// Number of directives in a document, 0 for null.
///
/// # Safety
/// `doc` must be null or a live document.
#[no_mangle]
pub unsafe extern "C" fn ballean_document_directive_count(doc: *const BalleanDocument) -> usize {
    doc.as_ref().map_or(0, |d| d.doc.directives().count())
}

/// The canonical rendering of a document, to be released with
/// [`ballean_string_free`].
///
/// # Safety
/// `doc` must be a live document and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ballean_document_render(doc: *const BalleanDocument, out: *mut *mut c_char) -> BalleanStatus {
    guard(|| {
        if out.is_null() {
            return fail(BalleanStatus::NullPointer, "out is null");
        }
        *out = ptr::null_mut();
        let Some(doc) = doc.as_ref() else {
            return fail(BalleanStatus::NullPointer, "doc is null");
        };
        *out = c_string(&doc.doc.render()).into_raw();
        BalleanStatus::Ok
    })
}

/// Runs every directive of a document. `opts` may be null for defaults.
///
/// # Safety
/// `doc` must be a live document, `opts` null or valid, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ballean_document_run(
    doc: *const BalleanDocument,
    opts: *const BalleanOptions,
    out: *mut *mut BalleanReport,
) -> BalleanStatus {
    guard(|| {
        if out.is_null() {
            return fail(BalleanStatus::NullPointer, "out is null");
        }
        *out = ptr::null_mut();
        let Some(doc) = doc.as_ref() else {
            return fail(BalleanStatus::NullPointer, "doc is null");
        };
        let opts = match options(opts.as_ref()) {
            Ok(o) => o,
            Err(s) => return s,
        };
        let report = run(&doc.doc, &opts);
        *out = Box::into_raw(Box::new(BalleanReport::new(&report, opts.format)));
        BalleanStatus::Ok
    })
}

/// Property report for one ballean expression, e.g. `(metric-nat)`.
///
/// # Safety
/// `expr` must be a NUL-terminated string, `opts` null or valid, `out` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ballean_infer(
    expr: *const c_char,
    opts: *const BalleanOptions,
    out: *mut *mut BalleanReport,
) -> BalleanStatus {
    guard(|| {
        if out.is_null() {
            return fail(BalleanStatus::NullPointer, "out is null");
        }
        *out = ptr::null_mut();
        let expr = match str_arg(expr, "expr") {
            Ok(t) => t,
            Err(s) => return s,
        };
        let doc = match parse(&format!("(infer {expr})")) {
            Ok(d) => d,
            Err(e) => return fail_with(&e),
        };
        let mut handle = ptr::null_mut();
        let s = ballean_document_run(&BalleanDocument { doc }, opts, &mut handle);
        *out = handle;
        s
    })
}

/// Releases a report. Null is ignored.
///
/// # Safety
/// `report` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ballean_report_free(report: *mut BalleanReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// The rendered report, borrowed from the handle.
///
/// # Safety
/// `report` must be null or a live report.
#[no_mangle]
pub unsafe extern "C" fn ballean_report_text(report: *const BalleanReport) -> *const c_char {
    report.as_ref().map_or(ptr::null(), |r| r.rendered.as_ptr())
}

/// 0 when every verdict is TRUE, 1 on a FALSE, 2 on an UNKNOWN, 3 on an
/// error; 3 for null.
///
/// # Safety
/// `report` must be null or a live report.
#[no_mangle]
pub unsafe extern "C" fn ballean_report_exit_code(report: *const BalleanReport) -> i32 {
    report.as_ref().map_or(3, |r| r.exit_code)
}

/// # Safety
/// `report` must be null or a live report.
#[no_mangle]
pub unsafe extern "C" fn ballean_report_record_count(report: *const BalleanReport) -> usize {
    report.as_ref().map_or(0, |r| r.records.len())
}

/// Fills `out` with a view of record `index`.
///
/// # Safety
/// `report` must be a live report and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ballean_report_record(
    report: *const BalleanReport,
    index: usize,
    out: *mut BalleanRecord,
) -> BalleanStatus {
    guard(|| {
        let (Some(r), false) = (report.as_ref(), out.is_null()) else {
            return fail(BalleanStatus::NullPointer, "report or out is null");
        };
        let Some(rec) = r.records.get(index) else {
            return fail(
                BalleanStatus::OutOfRange,
                &format!("record {index} of {}", r.records.len()),
            );
        };
        *out = BalleanRecord {
            name: rec.name.as_ptr(),
            property: rec.property.as_ptr(),
            text: rec.text.as_ptr(),
            verdict: rec.verdict,
        };
        BalleanStatus::Ok
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ballean_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
