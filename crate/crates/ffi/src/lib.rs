//! C ABI for the trihelix library.
//!
//! Tensors and panels are opaque handles created and released through this
//! interface. Every fallible function returns a [`TrihelixStatus`]; on
//! failure [`trihelix_last_error`] gives a message for the calling thread.
//! Buffer-filling functions take a capacity and always report the required
//! length, returning `TRIHELIX_STATUS_BUFFER_TOO_SMALL` when it exceeds the capacity.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use trihelix::decomposition::PowerBranch;
use trihelix::hurst::Persistence;
use trihelix::report::{build_report, to_canonical_json, ReportOptions};
use trihelix::{
    decompose, dft, hurst_exponent_with, polyfit, read_panel, synergy_3d, transmission_power, Axis, ColumnMapping,
    ContingencyTensor, Error, MeanMode, PanelSeries, TimeSeries,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrihelixStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidArgument = 2,
    DataError = 3,
    NumericDegeneracy = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

pub const TRIHELIX_AXIS_GEO: u32 = 0;
pub const TRIHELIX_AXIS_ORG: u32 = 1;
pub const TRIHELIX_AXIS_TECH: u32 = 2;

/// Count tensor over (geo, org, tech).
pub struct TrihelixTensor(ContingencyTensor);

/// Yearly sequence of tensors sharing category labels.
pub struct TrihelixPanel(PanelSeries);

/// Shannon entropies in bits.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TrihelixEntropies {
    pub h1: f64,
    pub h2: f64,
    pub h3: f64,
    pub h12: f64,
    pub h13: f64,
    pub h23: f64,
    pub h123: f64,
    pub synergy: f64,
}

/// Branch: -1 negative T, 0 zero T, 1 positive T.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TrihelixPower {
    pub tau: f64,
    pub branch: i32,
}

/// Classification: -1 anti-persistent, 0 random, 1 persistent.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TrihelixHurst {
    pub h: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub classification: i32,
    pub points: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Fail(TrihelixStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = if e.exit_code() == 3 {
            TrihelixStatus::NumericDegeneracy
        } else {
            TrihelixStatus::DataError
        };
        Fail(status, e.to_string())
    }
}

fn null() -> Fail {
    Fail(TrihelixStatus::NullArgument, "null pointer argument".into())
}

fn invalid(msg: impl Into<String>) -> Fail {
    Fail(TrihelixStatus::InvalidArgument, msg.into())
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> TrihelixStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            TrihelixStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            TrihelixStatus::Panic
        }
    }
}

unsafe fn input<'a, T>(p: *const T, len: usize) -> Result<&'a [T], Fail> {
    if len == 0 {
        Ok(&[])
    } else if p.is_null() {
        Err(null())
    } else {
        Ok(slice::from_raw_parts(p, len))
    }
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(null)
}

unsafe fn fill(values: &[f64], buf: *mut f64, capacity: usize, len: *mut usize) -> Result<(), Fail> {
    *out(len)? = values.len();
    if values.len() > capacity {
        return Err(Fail(
            TrihelixStatus::BufferTooSmall,
            format!("need {} values, capacity {capacity}", values.len()),
        ));
    }
    if !values.is_empty() {
        if buf.is_null() {
            return Err(null());
        }
        ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
    }
    Ok(())
}

fn axis(a: u32) -> Result<Axis, Fail> {
    Axis::from_index(a as usize).ok_or_else(|| invalid(format!("unknown axis {a}")))
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn trihelix_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Builds a tensor from row-major counts of the given shape.
///
/// # Safety
/// `shape` must point to 3 values, `counts` to `len` values, `out_tensor` to
/// writable storage.
#[no_mangle]
pub unsafe extern "C" fn trihelix_tensor_new(
    shape: *const usize,
    counts: *const u64,
    len: usize,
    out_tensor: *mut *mut TrihelixTensor,
) -> TrihelixStatus {
    guard(|| {
        let shape = input(shape, 3)?;
        let counts = input(counts, len)?.to_vec();
        let t = ContingencyTensor::from_counts([shape[0], shape[1], shape[2]], counts)?;
        *out(out_tensor)? = Box::into_raw(Box::new(TrihelixTensor(t)));
        Ok(())
    })
}

/// # Safety
/// `tensor` must come from `trihelix_tensor_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn trihelix_tensor_free(tensor: *mut TrihelixTensor) {
    if !tensor.is_null() {
        drop(Box::from_raw(tensor));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn trihelix_tensor_entropies(
    tensor: *const TrihelixTensor,
    out_entropies: *mut TrihelixEntropies,
) -> TrihelixStatus {
    guard(|| {
        let t = &tensor.as_ref().ok_or_else(null)?.0;
        let h = t.probabilities()?.entropy_set();
        *out(out_entropies)? = TrihelixEntropies {
            h1: h.h1,
            h2: h.h2,
            h3: h.h3,
            h12: h.h12,
            h13: h.h13,
            h23: h.h23,
            h123: h.h123,
            synergy: h.synergy(),
        };
        Ok(())
    })
}

/// Synergy T in bits.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn trihelix_tensor_synergy(tensor: *const TrihelixTensor, out_bits: *mut f64) -> TrihelixStatus {
    guard(|| {
        let t = &tensor.as_ref().ok_or_else(null)?.0;
        *out(out_bits)? = synergy_3d(&t.probabilities()?);
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn trihelix_tensor_transmission_power(
    tensor: *const TrihelixTensor,
    out_power: *mut TrihelixPower,
) -> TrihelixStatus {
    guard(|| {
        let t = &tensor.as_ref().ok_or_else(null)?.0;
        let p = transmission_power(&t.probabilities()?.entropy_set())?;
        *out(out_power)? = TrihelixPower {
            tau: p.tau,
            branch: match p.branch {
                PowerBranch::NegativeT => -1,
                PowerBranch::ZeroT => 0,
                PowerBranch::PositiveT => 1,
            },
        };
        Ok(())
    })
}

/// Per-group synergy contributions (bits) along `axis`.
///
/// # Safety
/// `out_values` must hold `capacity` values; other pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn trihelix_tensor_decompose(
    tensor: *const TrihelixTensor,
    axis_index: u32,
    out_values: *mut f64,
    capacity: usize,
    out_len: *mut usize,
) -> TrihelixStatus {
    guard(|| {
        let t = &tensor.as_ref().ok_or_else(null)?.0;
        let d = decompose(t, axis(axis_index)?)?;
        fill(&d.contributions, out_values, capacity, out_len)
    })
}

/// Reads a long-format CSV (year,geo,org,tech,count).
///
/// # Safety
/// `path` must be a NUL-terminated string; `out_panel` must be writable.
#[no_mangle]
pub unsafe extern "C" fn trihelix_panel_read(path: *const c_char, out_panel: *mut *mut TrihelixPanel) -> TrihelixStatus {
    guard(|| {
        if path.is_null() {
            return Err(null());
        }
        let path = CStr::from_ptr(path).to_str().map_err(|_| invalid("path is not UTF-8"))?;
        let p = read_panel(path, &ColumnMapping::default())?;
        *out(out_panel)? = Box::into_raw(Box::new(TrihelixPanel(p)));
        Ok(())
    })
}

/// # Safety
/// `panel` must come from `trihelix_panel_read` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn trihelix_panel_free(panel: *mut TrihelixPanel) {
    if !panel.is_null() {
        drop(Box::from_raw(panel));
    }
}

/// Number of years, 0 for null.
///
/// # Safety
/// `panel` must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn trihelix_panel_len(panel: *const TrihelixPanel) -> usize {
    panel.as_ref().map_or(0, |p| p.0.len())
}

/// National synergy per year, bits.
///
/// # Safety
/// `out_values` must hold `capacity` values; other pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn trihelix_panel_synergy_series(
    panel: *const TrihelixPanel,
    out_values: *mut f64,
    capacity: usize,
    out_len: *mut usize,
) -> TrihelixStatus {
    guard(|| {
        let p = &panel.as_ref().ok_or_else(null)?.0;
        fill(&p.synergy_series()?, out_values, capacity, out_len)
    })
}

/// Full report as canonical JSON. Release with `trihelix_string_free`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn trihelix_panel_report_json(
    panel: *const TrihelixPanel,
    axis_index: u32,
    fit_degree: usize,
    out_json: *mut *mut c_char,
) -> TrihelixStatus {
    guard(|| {
        let p = &panel.as_ref().ok_or_else(null)?.0;
        let options = ReportOptions {
            axis: axis(axis_index)?,
            fit_degree,
            ..ReportOptions::default()
        };
        let json = to_canonical_json(&build_report(p, options)?)?;
        let s = CString::new(json).map_err(|_| invalid("report contains NUL"))?;
        *out(out_json)? = s.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn trihelix_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Fourier coefficients of `values`: the constant term and B_l, D_l for
/// l = 1 ..= len/2.
///
/// # Safety
/// `values` must hold `len` values, `out_b` and `out_d` `capacity` values.
#[no_mangle]
pub unsafe extern "C" fn trihelix_dft(
    values: *const f64,
    len: usize,
    out_constant: *mut f64,
    out_b: *mut f64,
    out_d: *mut f64,
    capacity: usize,
    out_count: *mut usize,
) -> TrihelixStatus {
    guard(|| {
        let s = dft(&TimeSeries::new(0, input(values, len)?.to_vec())?);
        let b: Vec<f64> = s.harmonics.iter().map(|h| h.b).collect();
        let d: Vec<f64> = s.harmonics.iter().map(|h| h.d).collect();
        fill(&b, out_b, capacity, out_count)?;
        fill(&d, out_d, capacity, out_count)?;
        *out(out_constant)? = s.constant;
        Ok(())
    })
}

/// Rescaled-range Hurst exponent. `full_series_mean` selects the whole-series
/// mean for the cumulative deviate instead of the prefix mean.
///
/// # Safety
/// `values` must hold `len` values; `out_hurst` must be writable.
#[no_mangle]
pub unsafe extern "C" fn trihelix_hurst(
    values: *const f64,
    len: usize,
    full_series_mean: bool,
    out_hurst: *mut TrihelixHurst,
) -> TrihelixStatus {
    guard(|| {
        let mode = if full_series_mean { MeanMode::FullSeries } else { MeanMode::Prefix };
        let r = hurst_exponent_with(&TimeSeries::new(0, input(values, len)?.to_vec())?, mode)?;
        *out(out_hurst)? = TrihelixHurst {
            h: r.h,
            intercept: r.intercept,
            r_squared: r.r_squared,
            classification: match r.classification {
                Persistence::AntiPersistent => -1,
                Persistence::Random => 0,
                Persistence::Persistent => 1,
            },
            points: r.points.len(),
        };
        Ok(())
    })
}

/// Least-squares polynomial, coefficients in ascending powers.
///
/// # Safety
/// `x`, `y` must hold `n` values, `out_coefficients` `capacity` values.
#[no_mangle]
pub unsafe extern "C" fn trihelix_polyfit(
    x: *const f64,
    y: *const f64,
    n: usize,
    degree: usize,
    out_coefficients: *mut f64,
    capacity: usize,
    out_len: *mut usize,
    out_r_squared: *mut f64,
) -> TrihelixStatus {
    guard(|| {
        let f = polyfit(input(x, n)?, input(y, n)?, degree)?;
        fill(&f.coefficients, out_coefficients, capacity, out_len)?;
        *out(out_r_squared)? = f.r_squared;
        Ok(())
    })
}
