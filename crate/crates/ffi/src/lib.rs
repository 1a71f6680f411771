//! C ABI over the script runner.
//!
//! Scripts and reports cross the boundary as opaque handles. Every fallible
//! call returns an [`NgtStatus`]; on failure the message is available from
//! [`ngt_last_error`] on the same thread until the next failing call.
//! Strings returned through `char **` are owned by the caller and released
//! with [`ngt_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nagata_core::dsl::report::Verdict;
use nagata_core::dsl::{parse, run, Report, RunOptions, Script};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NgtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    RuntimeError = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NgtVerdict {
    Pass = 0,
    Fail = 1,
    Indeterminate = 2,
    Error = 3,
}

impl From<Verdict> for NgtVerdict {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Pass => NgtVerdict::Pass,
            Verdict::Fail => NgtVerdict::Fail,
            Verdict::Indeterminate => NgtVerdict::Indeterminate,
            Verdict::Error => NgtVerdict::Error,
        }
    }
}

/// Zero in `precision`, `max_exponent` or `y_degree` keeps the script's
/// or the library's default.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct NgtRunOptions {
    pub seed: u64,
    pub precision: u64,
    pub max_exponent: u32,
    pub y_degree: u32,
    pub timing: bool,
}

/// A parsed script.
pub struct NgtScript(Script);

/// The outcome of running a script.
pub struct NgtReport(Report);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

struct Failure(NgtStatus, String);

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> NgtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NgtStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            NgtStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(NgtStatus::NullPointer, format!("{what} is null"))
}

unsafe fn text_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(NgtStatus::InvalidUtf8, format!("{what} is not UTF-8: {e}")))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    let c = CString::new(s).map_err(|_| Failure(NgtStatus::RuntimeError, "string contains a NUL byte".into()))?;
    *out = c.into_raw();
    Ok(())
}

/// Message of the last failing call on this thread, or null. Valid until
/// the next failing call.
#[no_mangle]
pub extern "C" fn ngt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ngt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[no_mangle]
pub extern "C" fn ngt_run_options_default() -> NgtRunOptions {
    NgtRunOptions {
        seed: 0,
        precision: 0,
        max_exponent: 0,
        y_degree: 0,
        timing: true,
    }
}

/// Parses `text`; on `NGT_STATUS_PARSE_ERROR` the message carries the line
/// and column.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ngt_script_parse(text: *const c_char, out: *mut *mut NgtScript) -> NgtStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let text = text_arg(text, "script text")?;
        let script = parse(text).map_err(|d| Failure(NgtStatus::ParseError, d.to_string()))?;
        *out = Box::into_raw(Box::new(NgtScript(script)));
        Ok(())
    })
}

/// # Safety
/// `script` must come from [`ngt_script_parse`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ngt_script_free(script: *mut NgtScript) {
    if !script.is_null() {
        drop(Box::from_raw(script));
    }
}

/// Canonical text of the script.
///
/// # Safety
/// `script` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ngt_script_print(script: *const NgtScript, out: *mut *mut c_char) -> NgtStatus {
    guard(|| {
        let script = script.as_ref().ok_or_else(|| null("script"))?;
        write_string(out, script.0.to_string())
    })
}

/// Runs every check. Check failures are recorded in the report, not
/// returned as a status. A null `options` uses the defaults.
///
/// # Safety
/// `script` must be a live handle, `options` null or valid, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ngt_run(
    script: *const NgtScript,
    options: *const NgtRunOptions,
    out: *mut *mut NgtReport,
) -> NgtStatus {
    guard(|| {
        let script = script.as_ref().ok_or_else(|| null("script"))?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let o = options.as_ref().copied().unwrap_or_else(|| ngt_run_options_default());
        let opts = RunOptions {
            seed: o.seed,
            precision: (o.precision > 0).then_some(o.precision as usize),
            max_exponent: (o.max_exponent > 0).then_some(o.max_exponent),
            y_degree: (o.y_degree > 0).then_some(o.y_degree),
            timing: o.timing,
        };
        *out = Box::into_raw(Box::new(NgtReport(run(&script.0, &opts))));
        Ok(())
    })
}

/// # Safety
/// `report` must come from [`ngt_run`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ngt_report_free(report: *mut NgtReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `report` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ngt_report_json(report: *const NgtReport, out: *mut *mut c_char) -> NgtStatus {
    guard(|| {
        let report = report.as_ref().ok_or_else(|| null("report"))?;
        write_string(out, report.0.to_json())
    })
}

/// # Safety
/// `report` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ngt_report_text(report: *const NgtReport, out: *mut *mut c_char) -> NgtStatus {
    guard(|| {
        let report = report.as_ref().ok_or_else(|| null("report"))?;
        write_string(out, report.0.to_text())
    })
}

/// Number of checks in the report; 0 for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ngt_report_len(report: *const NgtReport) -> usize {
    report.as_ref().map_or(0, |r| r.0.commands.len())
}

/// Verdict of the check at `index`.
///
/// # Safety
/// `report` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ngt_report_verdict(report: *const NgtReport, index: usize, out: *mut NgtVerdict) -> NgtStatus {
    guard(|| {
        let report = report.as_ref().ok_or_else(|| null("report"))?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let c = report.0.commands.get(index).ok_or_else(|| {
            Failure(
                NgtStatus::RuntimeError,
                format!("index {index} out of range for {} checks", report.0.commands.len()),
            )
        })?;
        *out = c.verdict.into();
        Ok(())
    })
}

/// Process exit code the command-line runner would use: 0, 1 on a fail or
/// error verdict, 2 on an indeterminate verdict under `strict`. -1 for a
/// null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ngt_report_exit_code(report: *const NgtReport, strict: bool) -> i32 {
    report.as_ref().map_or(-1, |r| r.0.exit_code(strict))
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn ngt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn last_error() -> String {
        unsafe { CStr::from_ptr(ngt_last_error()).to_string_lossy().into_owned() }
    }

    fn take(s: *mut c_char) -> String {
        let out = unsafe { CStr::from_ptr(s).to_string_lossy().into_owned() };
        unsafe { ngt_string_free(s) };
        out
    }

    #[test]
    fn parse_errors_report_location() {
        let mut script = ptr::null_mut();
        let status = unsafe { ngt_script_parse(c"precision 4\ncheck bogus G : x\n".as_ptr(), &mut script) };
        assert_eq!(status, NgtStatus::ParseError);
        assert!(script.is_null());
        assert_eq!(last_error(), "unknown check kind 'bogus' at line 2, column 7");
    }

    #[test]
    fn null_and_bad_utf8_are_rejected() {
        let mut script = ptr::null_mut();
        assert_eq!(unsafe { ngt_script_parse(ptr::null(), &mut script) }, NgtStatus::NullPointer);
        let bad = [0xffu8, 0];
        assert_eq!(unsafe { ngt_script_parse(bad.as_ptr().cast(), &mut script) }, NgtStatus::InvalidUtf8);
        assert_eq!(unsafe { ngt_report_len(ptr::null()) }, 0);
        assert_eq!(unsafe { ngt_report_exit_code(ptr::null(), false) }, -1);
        let mut s = ptr::null_mut();
        assert_eq!(unsafe { ngt_report_json(ptr::null(), &mut s) }, NgtStatus::NullPointer);
    }

    #[test]
    fn run_round_trip() {
        let text = c"field F5\nprecision 8\nring T = poly(t)\nring L = local(T, order=4)\ncheck emb-dim L : expected=1\ncheck emb-dim L : expected=2\n";
        let mut script = ptr::null_mut();
        assert_eq!(unsafe { ngt_script_parse(text.as_ptr(), &mut script) }, NgtStatus::Ok);
        let mut printed = ptr::null_mut();
        assert_eq!(unsafe { ngt_script_print(script, &mut printed) }, NgtStatus::Ok);
        assert!(take(printed).starts_with("field F5\nprecision 8\n"));
        let mut opts = ngt_run_options_default();
        opts.timing = false;
        let mut report = ptr::null_mut();
        assert_eq!(unsafe { ngt_run(script, &opts, &mut report) }, NgtStatus::Ok);
        assert_eq!(unsafe { ngt_report_len(report) }, 2);
        let mut v = NgtVerdict::Error;
        assert_eq!(unsafe { ngt_report_verdict(report, 0, &mut v) }, NgtStatus::Ok);
        assert_eq!(v, NgtVerdict::Pass);
        assert_eq!(unsafe { ngt_report_verdict(report, 1, &mut v) }, NgtStatus::Ok);
        assert_eq!(v, NgtVerdict::Fail);
        assert_eq!(unsafe { ngt_report_verdict(report, 2, &mut v) }, NgtStatus::RuntimeError);
        assert_eq!(unsafe { ngt_report_exit_code(report, false) }, 1);
        let mut json = ptr::null_mut();
        assert_eq!(unsafe { ngt_report_json(report, &mut json) }, NgtStatus::Ok);
        assert!(take(json).contains("\"schema\": \"nagata-report/1\""));
        unsafe {
            ngt_report_free(report);
            ngt_script_free(script);
        }
    }
}
