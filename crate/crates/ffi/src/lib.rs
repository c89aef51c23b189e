//! C ABI over the `bbsym` engine.
//!
//! Handles are opaque and owned by the caller until passed to the matching
//! `_free`. Every fallible call returns a [`BbStatus`]; on failure the
//! message is available from [`bb_last_error_message`] on the same thread.
//! Strings returned as `char *` must be released with [`bb_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bbsym::bath::build_named;
use bbsym::io::{hamiltonian_from_json, hamiltonian_to_json, sequence_from_json, sequence_to_json};
use bbsym::numeric::{self, BathModel, SlopeFit, DEFAULT_CAP};
use bbsym::{BuiltinSequence, Error, ErrorGroup, SBHamiltonian, Sequence};

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum BbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Parse = 4,
    DimensionMismatch = 5,
    CycleNotClosed = 6,
    DimensionCap = 7,
    NonAbelian = 8,
    Numeric = 9,
    Panic = 10,
}

impl From<&Error> for BbStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::DimensionMismatch { .. } => BbStatus::DimensionMismatch,
            Error::PauliParse { .. } | Error::RationalParse(_) | Error::Format(_) | Error::InvalidTableau(_) => {
                BbStatus::Parse
            }
            Error::CycleNotClosed { .. } => BbStatus::CycleNotClosed,
            Error::DimensionCap { .. } => BbStatus::DimensionCap,
            Error::NonAbelian => BbStatus::NonAbelian,
            Error::NotHermitian(_) | Error::AllAtFloor | Error::MissingBathLabel(_) => BbStatus::Numeric,
            _ => BbStatus::InvalidArgument,
        }
    }
}

/// Opaque system-bath Hamiltonian.
pub struct BbHamiltonian(SBHamiltonian);

/// Opaque pulse sequence.
pub struct BbSequence(Sequence);

/// Error-group summary. Log2 fields are -1 when the group is not Abelian.
#[repr(C)]
#[derive(Copy, Clone, Debug, Default)]
pub struct BbGroupInfo {
    pub abelian: bool,
    pub rank: usize,
    pub order_log2: i64,
    pub dfs_dim_log2: i64,
}

/// Log-log fit of the effective-Hamiltonian error against tau.
#[repr(C)]
#[derive(Copy, Clone, Debug, Default)]
pub struct BbSlope {
    /// True when every point sat at the numerical floor; `slope` is then NaN.
    pub exact: bool,
    pub slope: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

type FfiResult<T> = Result<T, (BbStatus, String)>;

fn engine<T>(r: bbsym::Result<T>) -> FfiResult<T> {
    r.map_err(|e| (BbStatus::from(&e), e.to_string()))
}

fn guard(f: impl FnOnce() -> FfiResult<()>) -> BbStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BbStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            BbStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err((BbStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (BbStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> FfiResult<&'a T> {
    p.as_ref().ok_or_else(|| (BbStatus::NullPointer, format!("{what} is null")))
}

unsafe fn write_out<T>(out: *mut *mut T, value: T) -> FfiResult<()> {
    if out.is_null() {
        return Err((BbStatus::NullPointer, "output pointer is null".into()));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next `bb_` call on the same thread.
#[no_mangle]
pub extern "C" fn bb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must come from a `bb_` function returning `char *` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn bb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a named Hamiltonian: `linear`, `bilinear`, `hnn`, `zz_chain` or
/// `pairwise_isotropic`.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bb_hamiltonian_build(name: *const c_char, n: usize, out: *mut *mut BbHamiltonian) -> BbStatus {
    guard(|| {
        let name = str_arg(name, "name")?;
        let h = build_named(name, n)
            .ok_or_else(|| (BbStatus::InvalidArgument, format!("unknown Hamiltonian builder {name:?}")))?;
        write_out(out, BbHamiltonian(engine(h)?))
    })
}

/// Parses a Hamiltonian document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bb_hamiltonian_from_json(json: *const c_char, out: *mut *mut BbHamiltonian) -> BbStatus {
    guard(|| {
        let h = engine(hamiltonian_from_json(str_arg(json, "json")?))?;
        write_out(out, BbHamiltonian(h))
    })
}

/// Serializes a Hamiltonian; NULL if `h` is NULL.
///
/// # Safety
/// `h` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn bb_hamiltonian_to_json(h: *const BbHamiltonian) -> *mut c_char {
    h.as_ref().map_or(ptr::null_mut(), |h| to_c_string(hamiltonian_to_json(&h.0)))
}

/// Number of canonical terms; 0 for NULL.
///
/// # Safety
/// `h` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn bb_hamiltonian_num_terms(h: *const BbHamiltonian) -> usize {
    h.as_ref().map_or(0, |h| h.0.len())
}

/// # Safety
/// `h` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn bb_hamiltonian_num_qubits(h: *const BbHamiltonian) -> usize {
    h.as_ref().map_or(0, |h| h.0.n_qubits())
}

/// # Safety
/// `h` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn bb_hamiltonian_free(h: *mut BbHamiltonian) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Builds a built-in sequence by key (`mqe8`, `collective6`, ...) on `n`
/// qubits. `collective14` requires `n == 3`.
///
/// # Safety
/// `key` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bb_sequence_builtin(key: *const c_char, n: usize, out: *mut *mut BbSequence) -> BbStatus {
    guard(|| {
        let key = str_arg(key, "key")?;
        let b = BuiltinSequence::from_key(key)
            .ok_or_else(|| (BbStatus::InvalidArgument, format!("unknown sequence {key:?}")))?;
        write_out(out, BbSequence(engine(b.build(n))?))
    })
}

/// Parses a sequence document. `n == 0` takes the width from the document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bb_sequence_from_json(json: *const c_char, n: usize, out: *mut *mut BbSequence) -> BbStatus {
    guard(|| {
        let seq = engine(sequence_from_json(str_arg(json, "json")?, (n > 0).then_some(n)))?;
        write_out(out, BbSequence(seq))
    })
}

/// # Safety
/// `s` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn bb_sequence_to_json(s: *const BbSequence) -> *mut c_char {
    s.as_ref().map_or(ptr::null_mut(), |s| to_c_string(sequence_to_json(&s.0)))
}

/// Bracket notation, e.g. `[τ, X, τ, X]`.
///
/// # Safety
/// `s` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn bb_sequence_notation(s: *const BbSequence) -> *mut c_char {
    s.as_ref().map_or(ptr::null_mut(), |s| to_c_string(s.0.notation()))
}

/// # Safety
/// `s` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn bb_sequence_pulse_count(s: *const BbSequence) -> usize {
    s.as_ref().map_or(0, |s| s.0.pulse_count())
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn bb_sequence_free(s: *mut BbSequence) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Average Hamiltonian of `h` under one cycle of `seq`, normalized by the
/// total free-evolution weight.
///
/// # Safety
/// `seq` and `h` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bb_average_hamiltonian(
    seq: *const BbSequence,
    h: *const BbHamiltonian,
    out: *mut *mut BbHamiltonian,
) -> BbStatus {
    guard(|| {
        let (seq, h) = (ref_arg(seq, "sequence")?, ref_arg(h, "hamiltonian")?);
        let avg = engine(seq.0.average_hamiltonian(&h.0))?;
        write_out(out, BbHamiltonian(avg))
    })
}

/// Error group spanned by the system operators of `h`.
///
/// # Safety
/// `h` must be a live handle; `info` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bb_group_analyze(h: *const BbHamiltonian, info: *mut BbGroupInfo) -> BbStatus {
    guard(|| {
        let h = ref_arg(h, "hamiltonian")?;
        if info.is_null() {
            return Err((BbStatus::NullPointer, "info is null".into()));
        }
        let g = ErrorGroup::from_hamiltonian(&h.0);
        let log2 = |r: bbsym::Result<usize>| r.map_or(-1, |k| k as i64);
        *info = BbGroupInfo {
            abelian: g.is_abelian(),
            rank: g.rank(),
            order_log2: log2(g.order_log2()),
            dfs_dim_log2: log2(g.dfs_dimension_log2()),
        };
        Ok(())
    })
}

/// Dense check: fits the effective-Hamiltonian error over the default tau
/// grid with a random bath of dimension `bath_dim`.
///
/// # Safety
/// `seq` and `h` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bb_effective_error_slope(
    seq: *const BbSequence,
    h: *const BbHamiltonian,
    bath_dim: usize,
    seed: u64,
    out: *mut BbSlope,
) -> BbStatus {
    guard(|| {
        let (seq, h) = (ref_arg(seq, "sequence")?, ref_arg(h, "hamiltonian")?);
        if out.is_null() {
            return Err((BbStatus::NullPointer, "out is null".into()));
        }
        if bath_dim == 0 {
            return Err((BbStatus::InvalidArgument, "bath_dim must be positive".into()));
        }
        let bm = BathModel::random_for(&h.0, bath_dim, seed);
        let e = engine(numeric::effective_error(&seq.0, &h.0, &bm, &numeric::default_taus(), DEFAULT_CAP))?;
        *out = match e.fit {
            SlopeFit::Exact => BbSlope { exact: true, slope: f64::NAN },
            SlopeFit::Slope { slope } => BbSlope { exact: false, slope },
        };
        Ok(())
    })
}
