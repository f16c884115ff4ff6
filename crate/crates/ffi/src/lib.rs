//! C ABI over `grover-qss`.
//!
//! States cross the boundary as opaque [`QssState`] handles; reports cross
//! as NUL-terminated JSON strings. Every fallible call returns a
//! [`QssStatus`]; on failure [`qss_last_error_message`] describes the cause.
//! Handles must be released with [`qss_state_free`] and strings with
//! [`qss_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use grover_qss::catalog::{self, CatalogIndex, TieOverrides};
use grover_qss::protocol::{self, SessionConfig, Verdict};
use grover_qss::report::{self, OutputFormat, TableHeader};
use grover_qss::{attacks, grover, BasisLabel, QssError, StateVector, C64};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QssStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    NotNormalized = 4,
    BufferTooSmall = 5,
    InvalidUtf8 = 6,
    Parse = 7,
    Panic = 8,
    Internal = 9,
}

/// Opaque state-vector handle.
pub struct QssState(StateVector);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &QssError) -> QssStatus {
    use QssError::*;
    match e {
        DimensionMismatch { .. }
        | BadLength(_)
        | TableLength { .. }
        | IncompleteBasis { .. }
        | EmptyBasis => QssStatus::DimensionMismatch,
        NotNormalized(_) | NonFinite | NonOrthonormal(_) => QssStatus::NotNormalized,
        Parse { .. } | Json(_) => QssStatus::Parse,
        Io(_) => QssStatus::Internal,
        _ => QssStatus::InvalidArgument,
    }
}

struct Fail(QssStatus, String);

impl From<QssError> for Fail {
    fn from(e: QssError) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn fail<T>(status: QssStatus, msg: &str) -> Result<T, Fail> {
    Err(Fail(status, msg.to_string()))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> QssStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            QssStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("panic inside grover-qss".to_string());
            QssStatus::Panic
        }
    }
}

unsafe fn state_ref<'a>(s: *const QssState) -> Result<&'a StateVector, Fail> {
    // SAFETY: caller passes a live handle from this library or null.
    unsafe { s.as_ref() }
        .map(|h| &h.0)
        .ok_or_else(|| Fail(QssStatus::NullPointer, "null state handle".into()))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return fail(QssStatus::NullPointer, "null output pointer");
    }
    // SAFETY: non-null and, by contract, valid for writes.
    unsafe { out.write(value) };
    Ok(())
}

unsafe fn write_state(out: *mut *mut QssState, s: StateVector) -> Result<(), Fail> {
    if out.is_null() {
        return fail(QssStatus::NullPointer, "null output pointer");
    }
    // SAFETY: checked non-null above.
    unsafe { out.write(Box::into_raw(Box::new(QssState(s)))) };
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return fail(QssStatus::NullPointer, "null output pointer");
    }
    let c =
        CString::new(s).map_err(|_| Fail(QssStatus::Internal, "interior NUL in output".into()))?;
    // SAFETY: checked non-null above.
    unsafe { out.write(c.into_raw()) };
    Ok(())
}

unsafe fn out_slice<'a, T>(ptr: *mut T, len: usize, needed: usize) -> Result<&'a mut [T], Fail> {
    if ptr.is_null() {
        return fail(QssStatus::NullPointer, "null buffer");
    }
    if len < needed {
        return Err(Fail(
            QssStatus::BufferTooSmall,
            format!("buffer holds {len}, need {needed}"),
        ));
    }
    // SAFETY: caller guarantees `len` writable elements at `ptr`.
    Ok(unsafe { std::slice::from_raw_parts_mut(ptr, needed) })
}

fn index(k: u32) -> Result<CatalogIndex, Fail> {
    Ok(CatalogIndex::new(k as usize)?)
}

fn label3(index: u32) -> Result<BasisLabel, Fail> {
    Ok(BasisLabel::new(index as usize, 3)?)
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn qss_status_message(status: QssStatus) -> *const c_char {
    let s: &'static CStr = match status {
        QssStatus::Ok => c"ok",
        QssStatus::NullPointer => c"null pointer",
        QssStatus::InvalidArgument => c"invalid argument",
        QssStatus::DimensionMismatch => c"dimension mismatch",
        QssStatus::NotNormalized => c"state not normalized",
        QssStatus::BufferTooSmall => c"buffer too small",
        QssStatus::InvalidUtf8 => c"invalid UTF-8",
        QssStatus::Parse => c"parse error",
        QssStatus::Panic => c"internal panic",
        QssStatus::Internal => c"internal error",
    };
    s.as_ptr()
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn qss_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Catalog state `|S_k>` for `k` in 1..=64.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qss_catalog_state(k: u32, out: *mut *mut QssState) -> QssStatus {
    guard(|| unsafe { write_state(out, catalog::initial_state(index(k)?)) })
}

/// State from `len` amplitudes (`len` a power of two, at most 16); must be
/// normalized to within 1e-12.
///
/// # Safety
/// `re` and `im` must each point to `len` readable doubles; `out` must be
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qss_state_from_amplitudes(
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut QssState,
) -> QssStatus {
    guard(|| {
        if re.is_null() || im.is_null() {
            return fail(QssStatus::NullPointer, "null amplitude buffer");
        }
        // SAFETY: caller guarantees `len` readable elements in each buffer.
        let (re, im) = unsafe {
            (
                std::slice::from_raw_parts(re, len),
                std::slice::from_raw_parts(im, len),
            )
        };
        let amps = re.iter().zip(im).map(|(&a, &b)| C64::new(a, b)).collect();
        unsafe { write_state(out, StateVector::from_amplitudes(amps)?) }
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `s` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qss_state_free(s: *mut QssState) {
    if !s.is_null() {
        // SAFETY: handle came from Box::into_raw in this library.
        drop(unsafe { Box::from_raw(s) });
    }
}

/// Number of qubits, or 0 for a null handle.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qss_state_num_qubits(s: *const QssState) -> u32 {
    unsafe { state_ref(s) }.map_or(0, |s| s.num_qubits() as u32)
}

/// Copies the amplitudes into `re` / `im`, each holding at least `len`
/// doubles and `len >= 2^n`.
///
/// # Safety
/// `s` must be a live handle; `re` and `im` must be writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn qss_state_amplitudes(
    s: *const QssState,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> QssStatus {
    guard(|| {
        let s = unsafe { state_ref(s) }?;
        let re = unsafe { out_slice(re, len, s.dim()) }?;
        let im = unsafe { out_slice(im, len, s.dim()) }?;
        for ((r, i), a) in re.iter_mut().zip(im.iter_mut()).zip(s.amplitudes()) {
            *r = a.re;
            *i = a.im;
        }
        Ok(())
    })
}

/// Outcome probabilities in basis-index order.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn qss_state_probabilities(
    s: *const QssState,
    out: *mut f64,
    len: usize,
) -> QssStatus {
    guard(|| {
        let s = unsafe { state_ref(s) }?;
        let buf = unsafe { out_slice(out, len, s.dim()) }?;
        buf.copy_from_slice(&grover_qss::statevec::distribution(s));
        Ok(())
    })
}

/// `U_m |initial>` with `marked` a basis index of the same width.
///
/// # Safety
/// `initial` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qss_encode(
    initial: *const QssState,
    marked: u32,
    out: *mut *mut QssState,
) -> QssStatus {
    guard(|| {
        let s = unsafe { state_ref(initial) }?;
        let m = BasisLabel::new(marked as usize, s.num_qubits())?;
        unsafe { write_state(out, grover::encode(s, m)?) }
    })
}

/// Two-phase decode of `encoded` with `initial` as the diffusion axis.
/// Writes the final state and the chosen intermediate mark `M`.
///
/// # Safety
/// Both handles must be live; `out_final` and `out_m` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qss_collective_decode(
    encoded: *const QssState,
    initial: *const QssState,
    out_final: *mut *mut QssState,
    out_m: *mut u32,
) -> QssStatus {
    guard(|| {
        let (e, s) = unsafe { (state_ref(encoded)?, state_ref(initial)?) };
        if out_m.is_null() {
            return fail(QssStatus::NullPointer, "null output pointer");
        }
        let out = grover::collective_op(e, s)?;
        unsafe {
            write_out(out_m, out.phase1.chosen_m.index() as u32)?;
            write_state(out_final, out.final_state)
        }
    })
}

/// Seeded computational-basis shots; `counts[i]` receives the count of
/// basis index `i`.
///
/// # Safety
/// `s` must be a live handle; `counts` must be writable for `len` values.
#[no_mangle]
pub unsafe extern "C" fn qss_sample(
    s: *const QssState,
    shots: u64,
    seed: u64,
    counts: *mut u64,
    len: usize,
) -> QssStatus {
    guard(|| {
        let s = unsafe { state_ref(s) }?;
        let buf = unsafe { out_slice(counts, len, s.dim()) }?;
        let result = grover::sample(s, shots, seed)?;
        for (slot, c) in buf.iter_mut().zip(result.counts.values()) {
            *slot = *c;
        }
        Ok(())
    })
}

/// Decode table `which` (1 or 2) for `|S_1>` marked with 110, as JSON.
///
/// # Safety
/// `out` must be valid for writes; free the result with `qss_string_free`.
#[no_mangle]
pub unsafe extern "C" fn qss_table_json(which: u32, out: *mut *mut c_char) -> QssStatus {
    guard(|| {
        let enc_k = index(1)?;
        let m = label3(6)?;
        let rows = match which {
            1 => catalog::generate_table1(enc_k, m, &TieOverrides::reference())?,
            2 => catalog::generate_table2(enc_k, m, m)?,
            _ => return fail(QssStatus::InvalidArgument, "table must be 1 or 2"),
        };
        let header = TableHeader {
            which: which as u8,
            enc_k,
            m,
        };
        unsafe {
            write_string(
                out,
                report::render_table(header, &rows, OutputFormat::Json)?,
            )
        }
    })
}

/// Runs a session from a JSON config. Writes the transcript JSON and
/// whether the dealer accepted.
///
/// # Safety
/// `config_json` must be a NUL-terminated string; the outputs must be valid
/// for writes. Free the string with `qss_string_free`.
#[no_mangle]
pub unsafe extern "C" fn qss_protocol_json(
    config_json: *const c_char,
    out_json: *mut *mut c_char,
    out_accepted: *mut bool,
) -> QssStatus {
    guard(|| {
        if config_json.is_null() {
            return fail(QssStatus::NullPointer, "null config");
        }
        // SAFETY: caller guarantees a NUL-terminated string.
        let text = unsafe { CStr::from_ptr(config_json) }
            .to_str()
            .map_err(|_| Fail(QssStatus::InvalidUtf8, "config is not UTF-8".into()))?;
        let result = protocol::run_session(&SessionConfig::from_json(text)?)?;
        unsafe {
            write_out(out_accepted, result.verdict == Verdict::Accept)?;
            write_string(out_json, result.render(OutputFormat::Json)?)
        }
    })
}

/// Lie attack on mark `marked`; bit 2 of `flips` is participant 1.
///
/// # Safety
/// `out` must be valid for writes; free the result with `qss_string_free`.
#[no_mangle]
pub unsafe extern "C" fn qss_attack_lie_json(
    marked: u32,
    flips: u32,
    out: *mut *mut c_char,
) -> QssStatus {
    guard(|| {
        if flips > 7 {
            return fail(QssStatus::InvalidArgument, "flips is a 3-bit mask");
        }
        let r = attacks::lie_attack(
            label3(marked)?,
            [flips & 4 != 0, flips & 2 != 0, flips & 1 != 0],
        )?;
        unsafe { write_string(out, r.render(OutputFormat::Json)?) }
    })
}

/// Intercept attack; `k_guess == 0` runs the 64-guess enumeration.
///
/// # Safety
/// `out` must be valid for writes; free the result with `qss_string_free`.
#[no_mangle]
pub unsafe extern "C" fn qss_attack_intercept_json(
    k_true: u32,
    marked: u32,
    k_guess: u32,
    out: *mut *mut c_char,
) -> QssStatus {
    guard(|| {
        let (k, m) = (index(k_true)?, label3(marked)?);
        let r = match k_guess {
            0 => attacks::intercept_enumeration(Some(k), &[m])?,
            g => attacks::intercept_wrong_op(k, m, index(g)?, None)?,
        };
        unsafe { write_string(out, r.render(OutputFormat::Json)?) }
    })
}

/// Intercept-resend detection analysis.
///
/// # Safety
/// `out` must be valid for writes; free the result with `qss_string_free`.
#[no_mangle]
pub unsafe extern "C" fn qss_attack_resend_json(out: *mut *mut c_char) -> QssStatus {
    guard(|| unsafe {
        write_string(
            out,
            attacks::intercept_resend_analysis()?.render(OutputFormat::Json)?,
        )
    })
}

/// Ancilla entanglement attack with the attacker on qubit `control` (1-3).
///
/// # Safety
/// `out` must be valid for writes; free the result with `qss_string_free`.
#[no_mangle]
pub unsafe extern "C" fn qss_attack_entangle_json(
    k: u32,
    marked: u32,
    control: u32,
    out: *mut *mut c_char,
) -> QssStatus {
    guard(|| {
        let r = attacks::entangle_measure(index(k)?, label3(marked)?, control as usize, None)?;
        unsafe { write_string(out, r.render(OutputFormat::Json)?) }
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qss_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: string came from CString::into_raw in this library.
        drop(unsafe { CString::from_raw(s) });
    }
}
