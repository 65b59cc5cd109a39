//! C ABI over spreadlab.
//!
//! Models and graph families cross the boundary as opaque handles created by
//! `sl_*_new`/`sl_*_from_*` and released by the matching `*_free`. Every call
//! returns an `SlStatus`; on failure `sl_last_error` holds a message for the
//! calling thread. Strings handed out by the library must be released with
//! `sl_string_free`. Panics never unwind into C.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::atomic::{AtomicU64, Ordering};

use spreadlab::arrays::{ArrayModel, ModelSpec, Subset};
use spreadlab::constructions;
use spreadlab::defects::{box_independence_defect, spreadability_defect, BoxMode};
use spreadlab::prob::Prob;
use spreadlab::propagation::gamma_table;
use spreadlab::quasirandom::{family_gamma, GraphFamily, MonteCarlo, BITSET_CAP_N};
use spreadlab::{Error, Limits};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Capacity = 4,
    Domain = 5,
    Index = 6,
    Shape = 7,
    Io = 8,
    /// Output buffer too small; the required length is reported.
    BufferTooSmall = 9,
    Panic = 10,
}

/// An array model.
pub struct SlModel(ArrayModel);

/// A family of graphs on `[n]`.
pub struct SlFamily(GraphFamily);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

static CAP: AtomicU64 = AtomicU64::new(1 << 26);

fn limits() -> Limits {
    Limits::new(CAP.load(Ordering::Relaxed))
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SlStatus {
    match e {
        Error::Capacity { .. } => SlStatus::Capacity,
        Error::Index(_) => SlStatus::Index,
        Error::Symbol { .. } | Error::Domain(_) | Error::NonBoolean(_) => SlStatus::Domain,
        Error::Shape(_) => SlStatus::Shape,
        Error::Parse(_) | Error::Json(_) => SlStatus::Parse,
        Error::Io(_) => SlStatus::Io,
    }
}

struct Fail(SlStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SlStatus::Ok,
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            SlStatus::Panic
        }
    }
}

fn null() -> Fail {
    Fail(SlStatus::NullPointer, "null pointer argument".into())
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(SlStatus::InvalidUtf8, "string is not UTF-8".into()))
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(null)
}

unsafe fn model<'a>(p: *const SlModel) -> Result<&'a ArrayModel, Fail> {
    p.as_ref().map(|m| &m.0).ok_or_else(null)
}

unsafe fn write_string(s: String, dst: *mut *mut c_char) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|_| Fail(SlStatus::Parse, "output contains NUL".into()))?;
    *out(dst)? = c.into_raw();
    Ok(())
}

/// Message of the last failed call on this thread, or null. Owned by the
/// library; valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Report schema version, a static string.
#[no_mangle]
pub extern "C" fn sl_schema_version() -> *const c_char {
    c"1.0.0".as_ptr()
}

/// Sets the enumeration cap used by every later call.
#[no_mangle]
pub extern "C" fn sl_set_cap(cap: u64) {
    CAP.store(cap, Ordering::Relaxed);
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a model from its JSON description; `n == 0` takes the ground set
/// from the JSON.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out_model` writable.
#[no_mangle]
pub unsafe extern "C" fn sl_model_from_json(
    json: *const c_char,
    n: usize,
    out_model: *mut *mut SlModel,
) -> SlStatus {
    guard(|| {
        let spec = ModelSpec::from_json(text(json)?)?;
        let m = spec.build((n > 0).then_some(n), &limits())?;
        *out(out_model)? = Box::into_raw(Box::new(SlModel(m)));
        Ok(())
    })
}

/// The closed-form two-dimensional counterexample on `[n]`.
///
/// # Safety
/// `out_model` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_model_appendix_a_2d(
    n: usize,
    out_model: *mut *mut SlModel,
) -> SlStatus {
    guard(|| {
        let m = constructions::appendix_a_2d(n)?;
        *out(out_model)? = Box::into_raw(Box::new(SlModel(m)));
        Ok(())
    })
}

/// Product array `X_s = ∏_{i∈s} ξ_i` with every `P(ξ_i = 1) = num/den`.
///
/// # Safety
/// `out_model` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_model_product(
    n: usize,
    d: usize,
    num: i64,
    den: i64,
    out_model: *mut *mut SlModel,
) -> SlStatus {
    guard(|| {
        if den == 0 {
            return Err(Fail(SlStatus::Domain, "zero denominator".into()));
        }
        let m = constructions::product_array(vec![Prob::ratio(num, den); n], d)?;
        *out(out_model)? = Box::into_raw(Box::new(SlModel(m)));
        Ok(())
    })
}

/// # Safety
/// `m` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sl_model_free(m: *mut SlModel) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a live handle; outputs writable.
#[no_mangle]
pub unsafe extern "C" fn sl_model_shape(
    m: *const SlModel,
    n: *mut usize,
    d: *mut usize,
    alphabet: *mut usize,
) -> SlStatus {
    guard(|| {
        let m = model(m)?;
        *out(n)? = m.n();
        *out(d)? = m.d();
        *out(alphabet)? = m.alphabet();
        Ok(())
    })
}

/// The model as a JSON spec string (free with `sl_string_free`).
///
/// # Safety
/// `m` must be a live handle; `json` writable.
#[no_mangle]
pub unsafe extern "C" fn sl_model_to_json(m: *const SlModel, json: *mut *mut c_char) -> SlStatus {
    guard(|| {
        let spec = ModelSpec::of_model(model(m)?);
        let s = serde_json::to_string(&spec).map_err(Error::from)?;
        write_string(s, json)
    })
}

/// `E ∏_{s∈ℱ} 1[X_s = 1]` for `count` index sets of size `d`, given as
/// `count·d` 1-based elements. The exact value, when there is one, is
/// written as `"p/q"` to `exact` if it is non-null.
///
/// # Safety
/// `elems` must hold `count·d` values; `value` writable; `exact` null or writable.
#[no_mangle]
pub unsafe extern "C" fn sl_model_moment(
    m: *const SlModel,
    elems: *const u32,
    count: usize,
    value: *mut f64,
    exact: *mut *mut c_char,
) -> SlStatus {
    guard(|| {
        let m = model(m)?;
        let d = m.d();
        if elems.is_null() && count > 0 {
            return Err(null());
        }
        let flat: &[u32] = if count == 0 {
            &[]
        } else {
            std::slice::from_raw_parts(elems, count * d)
        };
        let fam = flat
            .chunks(d)
            .map(|c| Subset::try_of(&c.iter().map(|&x| x as usize).collect::<Vec<_>>()))
            .collect::<Result<Vec<_>, _>>()?;
        let p = m.moment_with(&fam, &limits())?;
        *out(value)? = p.to_f64();
        if !exact.is_null() {
            let s = if p.is_exact() {
                p.display_exact()
            } else {
                String::new()
            };
            write_string(s, exact)?;
        }
        Ok(())
    })
}

/// Spreadability defect over subarray sizes up to `size_cap`.
///
/// # Safety
/// `m` must be a live handle; `value` writable.
#[no_mangle]
pub unsafe extern "C" fn sl_spreadability_defect(
    m: *const SlModel,
    size_cap: usize,
    value: *mut f64,
) -> SlStatus {
    guard(|| {
        let rep = spreadability_defect(model(m)?, size_cap, &limits())?;
        *out(value)? = rep.value.to_f64();
        Ok(())
    })
}

/// Box-independence defect for one symbol; `absolute != 0` takes `|·|`.
///
/// # Safety
/// `m` must be a live handle; `value` writable.
#[no_mangle]
pub unsafe extern "C" fn sl_box_defect(
    m: *const SlModel,
    symbol: u32,
    absolute: c_int,
    value: *mut f64,
) -> SlStatus {
    guard(|| {
        let mode = if absolute != 0 {
            BoxMode::Absolute
        } else {
            BoxMode::OneSided
        };
        let rep = box_independence_defect(model(m)?, &[symbol], mode, &limits())?;
        *out(value)? = rep.value.to_f64();
        Ok(())
    })
}

/// Writes `γ_1 … γ_kmax` into `buf`, which must hold `kmax` values.
///
/// # Safety
/// `buf` must be writable for `buf_len` values.
#[no_mangle]
pub unsafe extern "C" fn sl_gamma_table(
    eta: f64,
    theta: f64,
    d: usize,
    n: usize,
    kmax: usize,
    buf: *mut f64,
    buf_len: usize,
) -> SlStatus {
    guard(|| {
        if buf.is_null() {
            return Err(null());
        }
        if buf_len < kmax {
            return Err(Fail(
                SlStatus::BufferTooSmall,
                format!("need {kmax} slots, got {buf_len}"),
            ));
        }
        let t = gamma_table(eta, theta, d, n, kmax)?;
        std::slice::from_raw_parts_mut(buf, kmax).copy_from_slice(&t.gamma);
        Ok(())
    })
}

/// A named graph property on `[n]`, tabulated when `n` is small enough.
///
/// # Safety
/// `name` must be NUL-terminated; `out_family` writable.
#[no_mangle]
pub unsafe extern "C" fn sl_family_builtin(
    name: *const c_char,
    n: usize,
    out_family: *mut *mut SlFamily,
) -> SlStatus {
    guard(|| {
        let mut f = GraphFamily::builtin(text(name)?, n)?;
        if n <= BITSET_CAP_N {
            f = f.materialize(&limits())?;
        }
        *out(out_family)? = Box::into_raw(Box::new(SlFamily(f)));
        Ok(())
    })
}

/// # Safety
/// `f` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sl_family_free(f: *mut SlFamily) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// `γ` of the family at the 4-set `u` (1-based). Sampled families use
/// `samples` draws from `seed`; `std_error` receives 0 for exact values.
///
/// # Safety
/// `f` must be a live handle; `u` must hold 4 values; outputs writable.
#[no_mangle]
pub unsafe extern "C" fn sl_family_gamma(
    f: *const SlFamily,
    u: *const u32,
    samples: u64,
    seed: u64,
    value: *mut f64,
    std_error: *mut f64,
) -> SlStatus {
    guard(|| {
        let f = &f.as_ref().ok_or_else(null)?.0;
        if u.is_null() {
            return Err(null());
        }
        let u: Vec<usize> = std::slice::from_raw_parts(u, 4)
            .iter()
            .map(|&x| x as usize)
            .collect();
        let est = family_gamma(f, &u, &MonteCarlo { samples, seed }, &limits())?;
        *out(value)? = est.value.to_f64();
        *out(std_error)? = est.standard_error.unwrap_or(0.0);
        Ok(())
    })
}

/// Runs a command line (`argv[0]` is the program name) and returns its
/// report and exit code (0 ok, 1 usage or capacity, 2 failed inequality).
/// The report is written even on failure; errors go to `sl_last_error`.
///
/// # Safety
/// `argv` must hold `argc` NUL-terminated strings; outputs writable.
#[no_mangle]
pub unsafe extern "C" fn sl_run(
    argc: c_int,
    argv: *const *const c_char,
    report: *mut *mut c_char,
    exit_code: *mut c_int,
) -> SlStatus {
    guard(|| {
        if argv.is_null() || argc < 1 {
            return Err(null());
        }
        let args = (0..argc as usize)
            .map(|i| text(*argv.add(i)).map(str::to_owned))
            .collect::<Result<Vec<_>, _>>()?;
        let (code, stdout, stderr) = spreadlab::cli::run_args(args);
        if !stderr.is_empty() {
            set_error(stderr.trim_end().to_owned());
        }
        *out(exit_code)? = code;
        write_string(stdout, report)
    })
}
