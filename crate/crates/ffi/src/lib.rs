//! C ABI over `nodal-core`.
//!
//! A [`NodalSession`] is an opaque handle holding one hypersurface, its
//! declared nodes and a field configuration. Every function returns a
//! [`NodalStatus`]; on a negative status the message is available from
//! [`nodal_last_error`] on the same thread. Strings returned through out
//! parameters are owned by the caller and released with
//! [`nodal_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::OnceLock;

use nodal_core::error::Error;
use nodal_core::field::{FieldConfig, PrimeField, Rationals};
use nodal_core::fixture::{self, Fixture};
use nodal_core::milnor::JacobianContext;
use nodal_core::report::Status;
use nodal_core::session::{self, Command, Options};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodalStatus {
    /// Success; every checked claim held.
    Ok = 0,
    /// The computation ran and a claim failed.
    ClaimFailed = 1,
    /// The input does not satisfy the hypothesis of the claim.
    HypothesisNotMet = 2,
    NullPointer = -1,
    Utf8 = -2,
    /// Polynomial or point text did not parse.
    Parse = -3,
    /// Bad prime, or the configured primes disagree.
    Field = -4,
    /// Arguments outside the supported range.
    Invalid = -5,
    /// A scan did not stabilize or another computation error.
    Computation = -6,
    Panic = -7,
}

impl NodalStatus {
    /// Status for an error kind as recorded in reports.
    fn of_kind(kind: &str) -> Self {
        match kind {
            "parse" | "mixed_degree" | "unknown_variable" | "too_many_variables" | "degree_overflow" => {
                NodalStatus::Parse
            }
            "not_prime" | "prime_too_small" | "bad_prime" | "field_disagreement" => NodalStatus::Field,
            "no_stabilization" | "scan_exhausted" | "fixture_generation" | "io" => NodalStatus::Computation,
            _ => NodalStatus::Invalid,
        }
    }
}

enum Contexts {
    Exact(Box<JacobianContext<Rationals>>),
    Primes(Vec<JacobianContext<PrimeField>>),
}

/// Opaque session handle.
pub struct NodalSession {
    fixture: Fixture,
    options: Options,
    contexts: OnceLock<Result<Contexts, Error>>,
}

impl NodalSession {
    fn contexts(&self) -> Result<&Contexts, Error> {
        self.contexts
            .get_or_init(|| {
                let f = &self.fixture.f;
                match &self.options.field {
                    FieldConfig::Exact => {
                        let ctx = JacobianContext::new(f.clone())?;
                        ctx.register_singular_points(&self.fixture.points);
                        Ok(Contexts::Exact(Box::new(ctx)))
                    }
                    FieldConfig::Primes(ps) => ps
                        .iter()
                        .map(|&p| JacobianContext::new(f.reduce_into(&PrimeField::new(p)?)?))
                        .collect::<Result<_, _>>()
                        .map(Contexts::Primes),
                }
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    fn milnor_dim(&self, k: u32) -> Result<usize, Error> {
        match self.contexts()? {
            Contexts::Exact(ctx) => Ok(ctx.milnor_dim(k)),
            Contexts::Primes(ctxs) => {
                let values: Vec<usize> = ctxs.iter().map(|c| c.milnor_dim(k)).collect();
                if values.windows(2).all(|w| w[0] == w[1]) {
                    Ok(values[0])
                } else {
                    Err(Error::FieldDisagreement {
                        what: format!("milnor_dim({k})"),
                        values: format!("{values:?}"),
                    })
                }
            }
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(status: NodalStatus, message: impl Into<String>) -> NodalStatus {
    set_last_error(message);
    status
}

fn fail_with(e: &Error) -> NodalStatus {
    fail(NodalStatus::of_kind(e.kind()), e.to_string())
}

/// Runs `body`, turning panics into [`NodalStatus::Panic`].
fn guard(body: impl FnOnce() -> NodalStatus) -> NodalStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(NodalStatus::Panic, message)
        }
    }
}

/// Borrows a C string; `Ok(None)` for a null pointer.
unsafe fn optional_str<'a>(s: *const c_char) -> Result<Option<&'a str>, NodalStatus> {
    if s.is_null() {
        return Ok(None);
    }
    CStr::from_ptr(s)
        .to_str()
        .map(Some)
        .map_err(|_| fail(NodalStatus::Utf8, "argument is not valid UTF-8"))
}

unsafe fn required_str<'a>(s: *const c_char, name: &str) -> Result<&'a str, NodalStatus> {
    optional_str(s)?.ok_or_else(|| fail(NodalStatus::NullPointer, format!("{name} is null")))
}

fn into_c_string(text: String) -> *mut c_char {
    CString::new(text.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn nodal_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn nodal_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Creates a session from polynomial text in `x0..xn`.
///
/// `points` (nullable) lists one projective point per line. `field`
/// (nullable) is `exact` or a comma list `fp:<p>,...`; null selects the
/// two default primes. On success `*out` receives a handle to release
/// with [`nodal_session_free`].
///
/// # Safety
/// String arguments must be null or NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nodal_session_new(
    polynomial: *const c_char,
    n: usize,
    points: *const c_char,
    field: *const c_char,
    out: *mut *mut NodalSession,
) -> NodalStatus {
    guard(|| {
        if out.is_null() {
            return fail(NodalStatus::NullPointer, "out is null");
        }
        *out = ptr::null_mut();
        let (polynomial, points, field) = match (
            required_str(polynomial, "polynomial"),
            optional_str(points),
            optional_str(field),
        ) {
            (Ok(a), Ok(b), Ok(c)) => (a, b, c),
            (Err(s), _, _) | (_, Err(s), _) | (_, _, Err(s)) => return s,
        };
        let field = match field.map(str::parse::<FieldConfig>).transpose() {
            Ok(f) => f.unwrap_or_default(),
            Err(e) => return fail_with(&e),
        };
        let fixture = match fixture::from_text(polynomial, points, n) {
            Ok(f) => f,
            Err(e) => return fail_with(&e),
        };
        if let Err(e) = field.validate(fixture.n(), fixture.d()) {
            return fail_with(&e);
        }
        let session = NodalSession {
            fixture,
            options: Options {
                field,
                ..Options::default()
            },
            contexts: OnceLock::new(),
        };
        *out = Box::into_raw(Box::new(session));
        NodalStatus::Ok
    })
}

/// Releases a session; null is ignored.
///
/// # Safety
/// `session` must come from [`nodal_session_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn nodal_session_free(session: *mut NodalSession) {
    if !session.is_null() {
        drop(Box::from_raw(session));
    }
}

/// Lets claim-checking commands run on smooth input.
///
/// # Safety
/// `session` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn nodal_session_set_allow_smooth(session: *mut NodalSession, allow: bool) -> NodalStatus {
    guard(|| match session.as_mut() {
        Some(s) => {
            s.options.allow_smooth = allow;
            NodalStatus::Ok
        }
        None => fail(NodalStatus::NullPointer, "session is null"),
    })
}

/// Ambient dimension `n` and degree `d` of the session's hypersurface.
///
/// # Safety
/// `session` must be a live handle; `n` and `d` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nodal_session_shape(session: *const NodalSession, n: *mut usize, d: *mut u32) -> NodalStatus {
    guard(|| match (session.as_ref(), n.is_null() || d.is_null()) {
        (Some(s), false) => {
            *n = s.fixture.n();
            *d = s.fixture.d();
            NodalStatus::Ok
        }
        _ => fail(NodalStatus::NullPointer, "null argument"),
    })
}

/// `dim (S/J(f))_k`, agreed on by every configured field.
///
/// # Safety
/// `session` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nodal_milnor_dim(session: *const NodalSession, k: u32, out: *mut usize) -> NodalStatus {
    guard(|| {
        let Some(s) = session.as_ref() else {
            return fail(NodalStatus::NullPointer, "session is null");
        };
        if out.is_null() {
            return fail(NodalStatus::NullPointer, "out is null");
        }
        match s.milnor_dim(k) {
            Ok(v) => {
                *out = v;
                NodalStatus::Ok
            }
            Err(e) => fail_with(&e),
        }
    })
}

fn parse_command(name: &str) -> Option<Command> {
    Some(match name {
        "hilbert" => Command::Hilbert,
        "phi-check" => Command::PhiCheck,
        "koszul" => Command::Koszul { m_range: None },
        "lemma23" => Command::Lemma23,
        "hodge" => Command::Hodge,
        "period-diff" => Command::PeriodDiff { subspace: None },
        "certify" => Command::Certify,
        _ => return None,
    })
}

/// Runs a command (`hilbert`, `phi-check`, `koszul`, `lemma23`, `hodge`,
/// `period-diff` or `certify`) and stores its JSON report, without
/// timings, in `*out_json`.
///
/// Returns the report status: [`NodalStatus::Ok`],
/// [`NodalStatus::ClaimFailed`], [`NodalStatus::HypothesisNotMet`], or the
/// error class when the report records an error. The report is written in
/// every case except argument errors.
///
/// # Safety
/// `session` must be a live handle, `command` NUL-terminated and
/// `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn nodal_run(
    session: *const NodalSession,
    command: *const c_char,
    out_json: *mut *mut c_char,
) -> NodalStatus {
    guard(|| {
        if out_json.is_null() {
            return fail(NodalStatus::NullPointer, "out_json is null");
        }
        *out_json = ptr::null_mut();
        let Some(s) = session.as_ref() else {
            return fail(NodalStatus::NullPointer, "session is null");
        };
        let name = match required_str(command, "command") {
            Ok(c) => c,
            Err(status) => return status,
        };
        let Some(command) = parse_command(name) else {
            return fail(NodalStatus::Invalid, format!("unknown command `{name}`"));
        };
        let report = session::run(&command, &s.fixture, &s.options).without_timings();
        *out_json = into_c_string(report.to_json());
        match report.status {
            Status::Pass => NodalStatus::Ok,
            Status::ClaimFailed => NodalStatus::ClaimFailed,
            Status::HypothesisNotMet => {
                set_last_error(report.notes.join("; "));
                NodalStatus::HypothesisNotMet
            }
            Status::Error => {
                let message = report.error.as_ref().map_or_else(String::new, |e| e.message.clone());
                let kind = report.error.as_ref().map_or("", |e| e.kind.as_str());
                fail(NodalStatus::of_kind(kind), message)
            }
        }
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn nodal_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
