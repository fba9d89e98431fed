//! C ABI over the `summa` library.
//!
//! Every fallible call returns a [`SummaStatus`] and writes its result
//! through an out-pointer. On failure, `summa_last_error()` returns a
//! message for the calling thread. Handles are opaque and must be released
//! with their matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use summa::arith::{liouville_of, mobius_of, sieve_block, Kind, SignSequence, DEFAULT_BLOCK_LEN};
use summa::exec::Engine;
use summa::summatory::{accumulate, Walk, WalkSeries};
use summa::zeta::{self, PerronJob, Target, ZetaParams};
use summa::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SummaStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Accuracy = 3,
    Singularity = 4,
    Io = 5,
    Parse = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SummaKind {
    Mobius = 0,
    Liouville = 1,
}

impl From<SummaKind> for Kind {
    fn from(k: SummaKind) -> Self {
        match k {
            SummaKind::Mobius => Kind::Mobius,
            SummaKind::Liouville => Kind::Liouville,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SummaTarget {
    Mertens = 0,
    Liouville = 1,
}

impl From<SummaTarget> for Target {
    fn from(t: SummaTarget) -> Self {
        match t {
            SummaTarget::Mertens => Target::Mertens,
            SummaTarget::Liouville => Target::Liouville,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SummaComplex {
    pub re: f64,
    pub im: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SummaCheckpoint {
    pub x: u64,
    pub m: i64,
    pub l: i64,
}

/// Walk statistics. `first_pos_l` and `first_nonneg_l` are 0 when the
/// event did not occur.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SummaWalkSummary {
    pub n_max: u64,
    pub first_pos_l: u64,
    pub first_nonneg_l: u64,
    pub min_m: i64,
    pub argmin_m: u64,
    pub max_m: i64,
    pub argmax_m: u64,
    pub min_l: i64,
    pub argmin_l: u64,
    pub max_l: i64,
    pub argmax_l: u64,
    pub sign_changes_m: u64,
    pub sign_changes_l: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SummaQuadrature {
    pub approx: f64,
    pub exact: i64,
    pub abs_error: f64,
    pub evaluations: u64,
}

/// Values of μ or λ over a half-open range.
pub struct SummaSignBlock {
    seq: SignSequence,
}

/// A checkpointed walk of `M(x)` and `L(x)`.
pub struct SummaWalk {
    series: WalkSeries,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SummaStatus {
    match e {
        Error::Domain(_) => SummaStatus::Domain,
        Error::Accuracy(_) => SummaStatus::Accuracy,
        Error::Singularity(_) => SummaStatus::Singularity,
        Error::Parse { .. } => SummaStatus::Parse,
        Error::Io { .. } => SummaStatus::Io,
    }
}

/// Runs `f`, records any error or panic, and writes the value to `out`.
fn guarded<T>(out: *mut T, f: impl FnOnce() -> summa::Result<T>) -> SummaStatus {
    if out.is_null() {
        set_last_error("output pointer is null");
        return SummaStatus::NullPointer;
    }
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(v)) => {
            // SAFETY: `out` is non-null and the caller promises it is valid
            // for writes of `T`.
            unsafe { out.write(v) };
            SummaStatus::Ok
        }
        Ok(Err(e)) => {
            set_last_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_last_error("internal panic");
            SummaStatus::Panic
        }
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn summa_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or an empty string.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn summa_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// `μ(n)` for `1 <= n <= 10^12`.
#[no_mangle]
pub extern "C" fn summa_mobius(n: u64, out: *mut i8) -> SummaStatus {
    guarded(out, || mobius_of(n))
}

/// `λ(n)` for `1 <= n <= 10^12`.
#[no_mangle]
pub extern "C" fn summa_liouville(n: u64, out: *mut i8) -> SummaStatus {
    guarded(out, || liouville_of(n))
}

/// Sieves `kind` over `[lo, hi)` into a new handle.
#[no_mangle]
pub extern "C" fn summa_sign_block_new(
    lo: u64,
    hi: u64,
    kind: SummaKind,
    out: *mut *mut SummaSignBlock,
) -> SummaStatus {
    guarded(out, || {
        let seq = sieve_block(lo, hi, kind.into())?;
        Ok(Box::into_raw(Box::new(SummaSignBlock { seq })))
    })
}

/// Number of values in the block; 0 for a null handle.
///
/// # Safety
/// `block` is null or a live handle from `summa_sign_block_new`.
#[no_mangle]
pub unsafe extern "C" fn summa_sign_block_len(block: *const SummaSignBlock) -> usize {
    block.as_ref().map_or(0, |b| b.seq.len())
}

/// First value of the block (for `n = lo`); null for a null handle. Valid
/// until the handle is freed.
///
/// # Safety
/// `block` is null or a live handle from `summa_sign_block_new`.
#[no_mangle]
pub unsafe extern "C" fn summa_sign_block_values(block: *const SummaSignBlock) -> *const i8 {
    block.as_ref().map_or(ptr::null(), |b| b.seq.values().as_ptr())
}

/// # Safety
/// `block` is null or a handle from `summa_sign_block_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn summa_sign_block_free(block: *mut SummaSignBlock) {
    if !block.is_null() {
        drop(Box::from_raw(block));
    }
}

/// Walks `x = 1..=n_max`, keeping a checkpoint at every multiple of
/// `stride` and at each sign change or new extreme. `workers = 0` uses
/// every available core.
#[no_mangle]
pub extern "C" fn summa_walk_new(n_max: u64, stride: u64, workers: u32, out: *mut *mut SummaWalk) -> SummaStatus {
    guarded(out, || {
        let workers = match workers {
            0 => std::thread::available_parallelism().map_or(1, |n| n.get()),
            w => w as usize,
        };
        let engine = Engine::new(workers, DEFAULT_BLOCK_LEN as u64)?;
        let series = accumulate(&Walk::new(&engine), n_max, stride)?;
        Ok(Box::into_raw(Box::new(SummaWalk { series })))
    })
}

/// # Safety
/// `walk` is null or a live handle from `summa_walk_new`.
#[no_mangle]
pub unsafe extern "C" fn summa_walk_checkpoint_count(walk: *const SummaWalk) -> usize {
    walk.as_ref().map_or(0, |w| w.series.checkpoints().len())
}

/// # Safety
/// `walk` is null or a live handle; `out` is null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn summa_walk_checkpoint(
    walk: *const SummaWalk,
    index: usize,
    out: *mut SummaCheckpoint,
) -> SummaStatus {
    let Some(w) = walk.as_ref() else {
        set_last_error("walk handle is null");
        return SummaStatus::NullPointer;
    };
    guarded(out, || {
        let c = w.series.checkpoints().get(index).ok_or_else(|| {
            Error::Domain(format!(
                "checkpoint {index} out of range ({} recorded)",
                w.series.checkpoints().len()
            ))
        })?;
        Ok(SummaCheckpoint { x: c.x, m: c.m, l: c.l })
    })
}

/// # Safety
/// `walk` is null or a live handle; `out` is null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn summa_walk_summary(walk: *const SummaWalk, out: *mut SummaWalkSummary) -> SummaStatus {
    let Some(w) = walk.as_ref() else {
        set_last_error("walk handle is null");
        return SummaStatus::NullPointer;
    };
    guarded(out, || {
        let s = w.series.summary().ok_or_else(|| Error::Domain("empty walk".into()))?;
        Ok(SummaWalkSummary {
            n_max: s.n_max,
            first_pos_l: s.first_pos_l.unwrap_or(0),
            first_nonneg_l: s.first_nonneg_l.unwrap_or(0),
            min_m: s.min_m,
            argmin_m: s.argmin_m,
            max_m: s.max_m,
            argmax_m: s.argmax_m,
            min_l: s.min_l,
            argmin_l: s.argmin_l,
            max_l: s.max_l,
            argmax_l: s.argmax_l,
            sign_changes_m: s.sign_changes_m,
            sign_changes_l: s.sign_changes_l,
        })
    })
}

/// # Safety
/// `walk` is null or a handle from `summa_walk_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn summa_walk_free(walk: *mut SummaWalk) {
    if !walk.is_null() {
        drop(Box::from_raw(walk));
    }
}

/// `ζ(re + i·im)` with the default Euler–Maclaurin parameters.
#[no_mangle]
pub extern "C" fn summa_zeta(re: f64, im: f64, out: *mut SummaComplex) -> SummaStatus {
    guarded(out, || {
        let z = zeta::zeta(Complex64::new(re, im), &ZetaParams::default())?;
        Ok(SummaComplex { re: z.re, im: z.im })
    })
}

/// Truncated Perron integral at height `t_max` with the default step.
#[no_mangle]
pub extern "C" fn summa_perron(target: SummaTarget, x: f64, t_max: f64, out: *mut SummaQuadrature) -> SummaStatus {
    guarded(out, || {
        let r = zeta::perron_truncated(&PerronJob::new(target.into(), x, t_max)?)?;
        Ok(SummaQuadrature {
            approx: r.approx,
            exact: r.exact,
            abs_error: r.abs_error,
            evaluations: r.evaluations,
        })
    })
}

/// `−1/ζ(1/2)`.
#[no_mangle]
pub extern "C" fn summa_leading_constant(out: *mut f64) -> SummaStatus {
    guarded(out, zeta::leading_constant)
}
