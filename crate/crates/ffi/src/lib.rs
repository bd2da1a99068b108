//! C interface to the wigstab engines.
//!
//! Every fallible call returns a [`WsStatus`]; on failure a message is
//! available from [`ws_last_error`] on the same thread. Handles are
//! opaque and owned by the caller until passed to the matching `_free`.
//! Strings returned through `char **` must be released with
//! [`ws_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use wigstab::circuit::parse;
use wigstab::frame::StabilizerFrame;
use wigstab::rng::{MeasurementRng, Randomness};
use wigstab::run::{execute, EngineKind, RunOptions};
use wigstab::tableau::QubitTableau;
use wigstab::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Index out of range, control equal to target, bad outcome value.
    InvalidArgument = 3,
    Parse = 4,
    /// Dimension unsupported by the engine.
    Dimension = 5,
    TooLarge = 6,
    /// A forced outcome contradicts a deterministic measurement.
    ImpossibleOutcome = 7,
    OracleMismatch = 8,
    BufferTooSmall = 9,
    Internal = 10,
    Panic = 11,
}

/// A Wigner frame for odd prime `d`.
pub struct WsFrame(StabilizerFrame);

/// A qubit tableau.
pub struct WsTableau(QubitTableau);

/// A measurement random stream.
pub struct WsRng(MeasurementRng);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> WsStatus {
    match e {
        Error::Parse(_) => WsStatus::Parse,
        Error::IndexOutOfRange { .. }
        | Error::ControlEqualsTarget(_)
        | Error::DimensionMismatch { .. }
        | Error::OutcomeOutOfRange { .. }
        | Error::BadPivot { .. } => WsStatus::InvalidArgument,
        Error::BadDimension(_)
        | Error::EvenDimension(_)
        | Error::NoQudits
        | Error::ModulusMismatch { .. }
        | Error::EngineDimensionMismatch { .. } => WsStatus::Dimension,
        Error::TooLarge { .. } | Error::TooLargeForOracle { .. } => WsStatus::TooLarge,
        Error::ImpossibleOutcome { .. } => WsStatus::ImpossibleOutcome,
        Error::OracleMismatch(_) => WsStatus::OracleMismatch,
        _ => WsStatus::Internal,
    }
}

struct Fail(WsStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

/// Runs `body`, converting errors and panics into a status.
fn guard(body: impl FnOnce() -> Result<(), Fail>) -> WsStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            WsStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("panic inside wigstab");
            WsStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(WsStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    // SAFETY: caller guarantees `p` is null or valid for reads
    unsafe { p.as_ref() }.ok_or_else(|| null(what))
}

unsafe fn deref_mut<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    // SAFETY: caller guarantees `p` is null or valid and unaliased
    unsafe { p.as_mut() }.ok_or_else(|| null(what))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    // SAFETY: caller guarantees a NUL-terminated string
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| Fail(WsStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    // SAFETY: checked for null; caller guarantees it is writable
    let slot = unsafe { out.as_mut() }.ok_or_else(|| null("out"))?;
    let c = CString::new(s).map_err(|_| Fail(WsStatus::Internal, "string has NUL".into()))?;
    *slot = c.into_raw();
    Ok(())
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    // SAFETY: non-null and writable per the caller's contract
    unsafe { out.write(value) };
    Ok(())
}

/// Message of the last failed call on this thread, or an empty string.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn ws_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn ws_status_str(status: WsStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        WsStatus::Ok => b"ok\0",
        WsStatus::NullPointer => b"null pointer\0",
        WsStatus::InvalidUtf8 => b"invalid UTF-8\0",
        WsStatus::InvalidArgument => b"invalid argument\0",
        WsStatus::Parse => b"parse error\0",
        WsStatus::Dimension => b"unsupported dimension\0",
        WsStatus::TooLarge => b"too large\0",
        WsStatus::ImpossibleOutcome => b"impossible outcome\0",
        WsStatus::OracleMismatch => b"engine and oracle disagree\0",
        WsStatus::BufferTooSmall => b"buffer too small\0",
        WsStatus::Internal => b"internal error\0",
        WsStatus::Panic => b"panic\0",
    };
    s.as_ptr().cast()
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ws_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: produced by CString::into_raw in write_string
        drop(unsafe { CString::from_raw(s) });
    }
}

// ---- random streams ----

/// Stream for shot `shot` under `seed`; the CLI uses the same derivation.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ws_rng_new(seed: u64, shot: u64, out: *mut *mut WsRng) -> WsStatus {
    guard(|| unsafe {
        write(
            out,
            Box::into_raw(Box::new(WsRng(MeasurementRng::for_shot(seed, shot)))),
            "out",
        )
    })
}

/// # Safety
/// `rng` must be null or a live handle from [`ws_rng_new`].
#[no_mangle]
pub unsafe extern "C" fn ws_rng_free(rng: *mut WsRng) {
    if !rng.is_null() {
        // SAFETY: allocated by ws_rng_new
        drop(unsafe { Box::from_raw(rng) });
    }
}

// ---- frames ----

/// Fresh frame `Φ = I`, `r = 0` on `n` qudits of odd prime dimension `d`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ws_frame_new(n: usize, d: u32, out: *mut *mut WsFrame) -> WsStatus {
    guard(|| {
        let f = StabilizerFrame::new(n, d)?;
        unsafe { write(out, Box::into_raw(Box::new(WsFrame(f))), "out") }
    })
}

/// # Safety
/// `frame` must be null or a live handle from [`ws_frame_new`].
#[no_mangle]
pub unsafe extern "C" fn ws_frame_free(frame: *mut WsFrame) {
    if !frame.is_null() {
        // SAFETY: allocated by ws_frame_new
        drop(unsafe { Box::from_raw(frame) });
    }
}

/// # Safety
/// `frame` must be a live handle; `n` and `d` writable.
#[no_mangle]
pub unsafe extern "C" fn ws_frame_shape(frame: *const WsFrame, n: *mut usize, d: *mut u32) -> WsStatus {
    guard(|| unsafe {
        let f = deref(frame, "frame")?;
        write(n, f.0.n(), "n")?;
        write(d, f.0.d(), "d")
    })
}

/// Fourier gate on qudit `i` (0-based).
///
/// # Safety
/// `frame` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ws_frame_hadamard(frame: *mut WsFrame, i: usize) -> WsStatus {
    guard(|| Ok(unsafe { deref_mut(frame, "frame") }?.0.apply_hadamard(i)?))
}

/// # Safety
/// `frame` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ws_frame_phase(frame: *mut WsFrame, i: usize) -> WsStatus {
    guard(|| Ok(unsafe { deref_mut(frame, "frame") }?.0.apply_phase(i)?))
}

/// # Safety
/// `frame` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ws_frame_cnot(frame: *mut WsFrame, control: usize, target: usize) -> WsStatus {
    guard(|| Ok(unsafe { deref_mut(frame, "frame") }?.0.apply_cnot(control, target)?))
}

/// Weyl translation `X^xpow Z^zpow`; both arrays hold `n` powers.
///
/// # Safety
/// `frame` must be a live handle; `xpow` and `zpow` readable for `n` values.
#[no_mangle]
pub unsafe extern "C" fn ws_frame_translate(
    frame: *mut WsFrame,
    xpow: *const u32,
    zpow: *const u32,
    n: usize,
) -> WsStatus {
    guard(|| {
        let f = unsafe { deref_mut(frame, "frame") }?;
        if xpow.is_null() || zpow.is_null() {
            return Err(null("powers"));
        }
        // SAFETY: non-null and readable for n values per the contract
        let (x, z) = unsafe { (std::slice::from_raw_parts(xpow, n), std::slice::from_raw_parts(zpow, n)) };
        Ok(f.0.apply_weyl_translation(x, z)?)
    })
}

/// Z measurement of qudit `i`, sampling from `rng` when random.
///
/// # Safety
/// Handles must be live; `outcome` and `deterministic` writable.
#[no_mangle]
pub unsafe extern "C" fn ws_frame_measure(
    frame: *mut WsFrame,
    i: usize,
    rng: *mut WsRng,
    outcome: *mut u32,
    deterministic: *mut bool,
) -> WsStatus {
    guard(|| unsafe {
        let f = deref_mut(frame, "frame")?;
        let r = deref_mut(rng, "rng")?;
        let rec = f.0.measure_z(i, Randomness::Seeded(&mut r.0))?;
        write(outcome, rec.outcome(), "outcome")?;
        write(deterministic, rec.is_deterministic(), "deterministic")
    })
}

/// Z measurement of qudit `i` with a prescribed outcome.
///
/// # Safety
/// `frame` must be live; `deterministic` writable.
#[no_mangle]
pub unsafe extern "C" fn ws_frame_force(
    frame: *mut WsFrame,
    i: usize,
    outcome: u32,
    deterministic: *mut bool,
) -> WsStatus {
    guard(|| unsafe {
        let f = deref_mut(frame, "frame")?;
        let rec = f.0.measure_z(i, Randomness::Forced(outcome))?;
        write(deterministic, rec.is_deterministic(), "deterministic")
    })
}

/// Copies Φ row-major into `buf`, which must hold `4n²` values.
///
/// # Safety
/// `frame` must be live; `buf` writable for `len` values.
#[no_mangle]
pub unsafe extern "C" fn ws_frame_phi(frame: *const WsFrame, buf: *mut u32, len: usize) -> WsStatus {
    guard(|| {
        let f = unsafe { deref(frame, "frame") }?;
        let rows = f.0.phi().to_rows();
        let need = rows.len() * rows.len();
        copy_out(rows.into_iter().flatten(), need, buf, len)
    })
}

/// Copies `r` into `buf`, which must hold `2n` values.
///
/// # Safety
/// `frame` must be live; `buf` writable for `len` values.
#[no_mangle]
pub unsafe extern "C" fn ws_frame_r(frame: *const WsFrame, buf: *mut u32, len: usize) -> WsStatus {
    guard(|| {
        let f = unsafe { deref(frame, "frame") }?;
        let r = f.0.r().as_slice();
        copy_out(r.iter().copied(), r.len(), buf, len)
    })
}

fn copy_out(values: impl Iterator<Item = u32>, need: usize, buf: *mut u32, len: usize) -> Result<(), Fail> {
    if buf.is_null() {
        return Err(null("buf"));
    }
    if len < need {
        return Err(Fail(
            WsStatus::BufferTooSmall,
            format!("need {need} values, got {len}"),
        ));
    }
    for (k, v) in values.enumerate() {
        // SAFETY: k < need <= len and buf is writable for len values
        unsafe { buf.add(k).write(v) };
    }
    Ok(())
}

/// Canonical text dump: Φ rows, then `r:`.
///
/// # Safety
/// `frame` must be live; `out` writable. Free the result with [`ws_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ws_frame_dump(frame: *const WsFrame, out: *mut *mut c_char) -> WsStatus {
    guard(|| unsafe {
        let f = deref(frame, "frame")?;
        write_string(out, f.0.to_string())
    })
}

// ---- tableaux ----

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ws_tableau_new(n: usize, out: *mut *mut WsTableau) -> WsStatus {
    guard(|| {
        let t = QubitTableau::new(n)?;
        unsafe { write(out, Box::into_raw(Box::new(WsTableau(t))), "out") }
    })
}

/// # Safety
/// `tableau` must be null or a live handle from [`ws_tableau_new`].
#[no_mangle]
pub unsafe extern "C" fn ws_tableau_free(tableau: *mut WsTableau) {
    if !tableau.is_null() {
        // SAFETY: allocated by ws_tableau_new
        drop(unsafe { Box::from_raw(tableau) });
    }
}

/// # Safety
/// `tableau` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ws_tableau_h(tableau: *mut WsTableau, i: usize) -> WsStatus {
    guard(|| Ok(unsafe { deref_mut(tableau, "tableau") }?.0.apply_h(i)?))
}

/// # Safety
/// `tableau` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ws_tableau_s(tableau: *mut WsTableau, i: usize) -> WsStatus {
    guard(|| Ok(unsafe { deref_mut(tableau, "tableau") }?.0.apply_s(i)?))
}

/// # Safety
/// `tableau` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ws_tableau_cnot(tableau: *mut WsTableau, control: usize, target: usize) -> WsStatus {
    guard(|| Ok(unsafe { deref_mut(tableau, "tableau") }?.0.apply_cnot(control, target)?))
}

/// # Safety
/// `tableau` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ws_tableau_x(tableau: *mut WsTableau, i: usize) -> WsStatus {
    guard(|| Ok(unsafe { deref_mut(tableau, "tableau") }?.0.apply_x(i)?))
}

/// # Safety
/// `tableau` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ws_tableau_z(tableau: *mut WsTableau, i: usize) -> WsStatus {
    guard(|| Ok(unsafe { deref_mut(tableau, "tableau") }?.0.apply_z(i)?))
}

/// # Safety
/// Handles must be live; `outcome` and `deterministic` writable.
#[no_mangle]
pub unsafe extern "C" fn ws_tableau_measure(
    tableau: *mut WsTableau,
    i: usize,
    rng: *mut WsRng,
    outcome: *mut u32,
    deterministic: *mut bool,
) -> WsStatus {
    guard(|| unsafe {
        let t = deref_mut(tableau, "tableau")?;
        let r = deref_mut(rng, "rng")?;
        let rec = t.0.measure(i, Randomness::Seeded(&mut r.0))?;
        write(outcome, rec.outcome(), "outcome")?;
        write(deterministic, rec.is_deterministic(), "deterministic")
    })
}

/// # Safety
/// `tableau` must be live; `deterministic` writable.
#[no_mangle]
pub unsafe extern "C" fn ws_tableau_force(
    tableau: *mut WsTableau,
    i: usize,
    outcome: u32,
    deterministic: *mut bool,
) -> WsStatus {
    guard(|| unsafe {
        let t = deref_mut(tableau, "tableau")?;
        let rec = t.0.measure(i, Randomness::Forced(outcome))?;
        write(deterministic, rec.is_deterministic(), "deterministic")
    })
}

/// One line per row: x bits, z bits, `|`, sign bit.
///
/// # Safety
/// `tableau` must be live; `out` writable. Free the result with [`ws_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ws_tableau_dump(tableau: *const WsTableau, out: *mut *mut c_char) -> WsStatus {
    guard(|| unsafe {
        let t = deref(tableau, "tableau")?;
        write_string(out, t.0.to_string())
    })
}

// ---- whole circuits ----

/// Runs circuit text and returns the transcript as the CLI prints it.
///
/// `engine` is `auto`, `wigner`, `tableau` or `oracle`; null means `auto`.
///
/// # Safety
/// `circuit` (and `engine` if non-null) must be NUL-terminated; `out`
/// writable. Free the result with [`ws_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ws_run_circuit(
    circuit: *const c_char,
    engine: *const c_char,
    seed: u64,
    shots: u64,
    dump: bool,
    oracle_check: bool,
    out: *mut *mut c_char,
) -> WsStatus {
    guard(|| {
        let text = unsafe { read_str(circuit, "circuit") }?;
        let engine = if engine.is_null() {
            EngineKind::Auto
        } else {
            unsafe { read_str(engine, "engine") }?
                .parse()
                .map_err(|e: String| Fail(WsStatus::InvalidArgument, e))?
        };
        let c = parse(text)?;
        let opts = RunOptions {
            engine,
            seed,
            shots,
            dump,
            oracle_check,
        };
        let transcripts = execute(&c, &opts)?;
        let multi = transcripts.len() > 1;
        let mut s = String::new();
        for t in &transcripts {
            if multi {
                s.push_str(&format!("# shot {}\n", t.shot));
            }
            s.push_str(&t.lines());
            if let Some(d) = &t.dump {
                s.push_str(d);
            }
        }
        unsafe { write_string(out, s) }
    })
}

/// Crate version, static.
#[no_mangle]
pub extern "C" fn ws_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
