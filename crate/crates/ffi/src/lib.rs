//! C interface to `entropy-lab`.
//!
//! Data sets live behind an opaque [`ElDataset`] handle. Every fallible call
//! returns an [`ElStatus`]; on failure the message is kept per thread and can
//! be copied out with [`el_last_error_message`].

use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use entropy_lab::estimators::{estimate, EstimatorKind};
use entropy_lab::intervals::{aci, bootstrap_pair, gci_umvue, hpd_mcmc, BootConfig, McmcConfig};
use entropy_lab::model::{boeing, entropy_from_log_sigma, suff_stats};
use entropy_lab::{Error, Loss, SuffStats, TwoSampleData};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    DataError = 3,
    NumericError = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElLossKind {
    Squared = 0,
    Linex = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElLoss {
    pub kind: ElLossKind,
    /// Linex shape; ignored for squared error.
    pub a1: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElEstimator {
    Baee = 0,
    Umvue = 1,
    Mle = 2,
    Rmle = 3,
    Stein = 4,
    ImprovedMle = 5,
    ImprovedRmle = 6,
    BrewsterZidek = 7,
    PitmanClipped = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElIntervalMethod {
    Aci = 0,
    BootP = 1,
    BootT = 2,
    Gci = 3,
    Hpd = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ElInterval {
    pub lower: f64,
    pub upper: f64,
    pub length: f64,
}

/// Opaque two-sample data set.
pub struct ElDataset {
    data: TwoSampleData,
    stats: SuffStats,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> ElStatus {
    match e.exit_code() {
        2 => ElStatus::InvalidInput,
        3 => ElStatus::DataError,
        _ => ElStatus::NumericError,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (ElStatus, String)>) -> ElStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ElStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("panic inside entropy-lab".into());
            ElStatus::Panic
        }
    }
}

fn lift(e: Error) -> (ElStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (ElStatus, String) {
    (ElStatus::NullPointer, format!("{what} is null"))
}

fn to_loss(l: ElLoss) -> Result<Loss, (ElStatus, String)> {
    match l.kind {
        ElLossKind::Squared => Ok(Loss::SquaredError),
        ElLossKind::Linex => Loss::linex(l.a1).map_err(lift),
    }
}

fn to_kind(e: ElEstimator) -> EstimatorKind {
    match e {
        ElEstimator::Baee => EstimatorKind::Baee,
        ElEstimator::Umvue => EstimatorKind::Umvue,
        ElEstimator::Mle => EstimatorKind::Mle,
        ElEstimator::Rmle => EstimatorKind::Rmle,
        ElEstimator::Stein => EstimatorKind::Stein,
        ElEstimator::ImprovedMle => EstimatorKind::ImprovedMle,
        ElEstimator::ImprovedRmle => EstimatorKind::ImprovedRmle,
        ElEstimator::BrewsterZidek => EstimatorKind::BrewsterZidek,
        ElEstimator::PitmanClipped => EstimatorKind::PitmanClipped,
    }
}

fn boxed(data: TwoSampleData, out: *mut *mut ElDataset) -> Result<(), (ElStatus, String)> {
    let stats = suff_stats(&data).map_err(lift)?;
    let h = Box::into_raw(Box::new(ElDataset { data, stats }));
    // SAFETY: caller checked `out` is non-null.
    unsafe { *out = h };
    Ok(())
}

/// Copy two samples of length `n` into a new data set.
///
/// # Safety
/// `x1` and `x2` must point to `n` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn el_dataset_new(
    x1: *const f64,
    x2: *const f64,
    n: usize,
    out: *mut *mut ElDataset,
) -> ElStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if x1.is_null() || x2.is_null() {
            return Err(null("sample pointer"));
        }
        // SAFETY: the caller guarantees `n` readable elements.
        let (a, b) = unsafe {
            (
                std::slice::from_raw_parts(x1, n).to_vec(),
                std::slice::from_raw_parts(x2, n).to_vec(),
            )
        };
        boxed(TwoSampleData::new(a, b).map_err(lift)?, out)
    })
}

/// The built-in air-conditioning failure-time data (n = 6).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn el_dataset_boeing(out: *mut *mut ElDataset) -> ElStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        boxed(boeing(), out)
    })
}

/// Release a data set. Null is ignored.
///
/// # Safety
/// `ds` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn el_dataset_free(ds: *mut ElDataset) {
    if !ds.is_null() {
        // SAFETY: produced by Box::into_raw in `boxed`.
        drop(unsafe { Box::from_raw(ds) });
    }
}

/// Per-sample size, or 0 for a null handle.
///
/// # Safety
/// `ds` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn el_dataset_n(ds: *const ElDataset) -> usize {
    // SAFETY: null or live per contract.
    unsafe { ds.as_ref() }.map_or(0, |d| d.data.n())
}

/// Point estimate of `ln σ`.
///
/// # Safety
/// `ds` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn el_estimate(
    ds: *const ElDataset,
    estimator: ElEstimator,
    loss: ElLoss,
    out: *mut f64,
) -> ElStatus {
    guard(|| {
        // SAFETY: null or live per contract.
        let d = unsafe { ds.as_ref() }.ok_or_else(|| null("dataset"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let v = estimate(&to_kind(estimator), &d.stats, to_loss(loss)?).map_err(lift)?;
        // SAFETY: checked non-null.
        unsafe { *out = v };
        Ok(())
    })
}

/// `1 + ln 2π + 2τ`.
#[no_mangle]
pub extern "C" fn el_entropy_from_log_sigma(tau: f64) -> f64 {
    entropy_from_log_sigma(tau)
}

/// Interval for `ln σ` at `level` with default inner sizes: 10,000 pivot
/// draws, 3,000 bootstrap resamples, 12,000 chain iterations with 2,000
/// burn-in.
///
/// # Safety
/// `ds` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn el_interval(
    ds: *const ElDataset,
    method: ElIntervalMethod,
    level: f64,
    seed: u64,
    out: *mut ElInterval,
) -> ElStatus {
    guard(|| {
        // SAFETY: null or live per contract.
        let d = unsafe { ds.as_ref() }.ok_or_else(|| null("dataset"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let boot = BootConfig { k: 3_000, seed };
        let r = match method {
            ElIntervalMethod::Aci => aci(&d.data, level),
            ElIntervalMethod::Gci => gci_umvue(&d.stats, level, 10_000, seed),
            ElIntervalMethod::BootP => bootstrap_pair(&d.data, level, &boot).map(|p| p.0),
            ElIntervalMethod::BootT => bootstrap_pair(&d.data, level, &boot).map(|p| p.1),
            ElIntervalMethod::Hpd => hpd_mcmc(
                &d.data,
                level,
                &McmcConfig {
                    seed,
                    ..Default::default()
                },
            ),
        }
        .map_err(lift)?;
        // SAFETY: checked non-null.
        unsafe {
            *out = ElInterval {
                lower: r.lower,
                upper: r.upper,
                length: r.length,
            }
        };
        Ok(())
    })
}

/// Copy the calling thread's last error message into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length in bytes.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn el_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let k = msg.len().min(len - 1);
            // SAFETY: `buf` holds `len` bytes and `k < len`.
            unsafe {
                ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast::<u8>(), k);
                *buf.add(k) = 0;
            }
        }
        msg.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn el_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
