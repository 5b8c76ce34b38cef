//! C interface to varkit.
//!
//! Objects cross the boundary as opaque handles created by `varkit_*_new`
//! style constructors and released with the matching `varkit_*_free`.
//! Fallible calls return a `VarkitStatus`; on failure the message is kept
//! per thread and read with `varkit_last_error`. Results are written through
//! out-pointers only on success. No call unwinds into the caller.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use rug::Complex;
use varkit::divdiff::{self, DividedDifferenceTable, ValueSequence};
use varkit::generate::{self, MultRule};
use varkit::growth::{self, GrowthFit, Octaves, Verdict};
use varkit::smoothing::{self, GridSpec};
use varkit::{mp, Error, MultiplicityVariety, Truncation, Weight};

/// Outcome of a fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarkitStatus {
    Ok = 0,
    InvalidArgument = 1,
    NullPointer = 2,
    /// A query left the disc on which a truncated variety is complete.
    Truncation = 3,
    DuplicateNode = 4,
    /// A derivative beyond what the function supports was needed.
    Order = 5,
    IllConditioned = 6,
    SingularQuadrature = 7,
    NoAlphaFound = 8,
    NoSamples = 9,
    Parse = 10,
    Io = 11,
    /// An internal error was caught at the boundary.
    Panic = 12,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarkitVerdict {
    Bounded = 0,
    Divergent = 1,
    Inconclusive = 2,
}

/// How divided-difference tables are computed from values.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarkitMethod {
    /// Newton recursion on the values.
    Recursion = 0,
    /// Confluent divided-difference tableau; more stable under cancellation.
    Tableau = 1,
}

/// Radial weight `p`.
pub struct VarkitWeight(Weight);

/// Points with multiplicities, sorted by modulus then argument.
pub struct VarkitVariety(MultiplicityVariety);

/// Values `w_{j,l}` aligned with a variety.
pub struct VarkitValues(ValueSequence);

/// Newton coefficients `phi_{j,l}`.
pub struct VarkitTable(DividedDifferenceTable);

/// Growth fit and verdict for one condition.
pub struct VarkitFit(GrowthFit);

enum Failure {
    Core(Error),
    Null(&'static str),
    Invalid(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn status(&self) -> VarkitStatus {
        match self {
            Failure::Null(_) => VarkitStatus::NullPointer,
            Failure::Invalid(_) => VarkitStatus::InvalidArgument,
            Failure::Core(e) => match e {
                Error::Truncation { .. } => VarkitStatus::Truncation,
                Error::DuplicateNode { .. } => VarkitStatus::DuplicateNode,
                Error::Order { .. } => VarkitStatus::Order,
                Error::IllConditioned { .. } => VarkitStatus::IllConditioned,
                Error::SingularQuadrature { .. } => VarkitStatus::SingularQuadrature,
                Error::NoAlphaFound { .. } => VarkitStatus::NoAlphaFound,
                Error::NoSamples(_) => VarkitStatus::NoSamples,
                Error::Invalid(_) => VarkitStatus::InvalidArgument,
                Error::Parse { .. } => VarkitStatus::Parse,
                Error::Io(_) => VarkitStatus::Io,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Null(what) => format!("{what} is null"),
            Failure::Invalid(msg) => msg.clone(),
        }
    }
}

type Outcome = Result<(), Failure>;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

/// Runs `f`, converting failures and panics into a status.
fn guard(f: impl FnOnce() -> Outcome) -> VarkitStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => VarkitStatus::Ok,
        Ok(Err(fail)) => {
            set_last_error(fail.message());
            fail.status()
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            set_last_error(format!("internal error: {msg}"));
            VarkitStatus::Panic
        }
    }
}

unsafe fn get<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &'static str) -> Outcome {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &'static str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

/// Hands a new handle to the caller; nothing is allocated when `out` is null.
unsafe fn put_handle<T>(out: *mut *mut T, value: T) -> Outcome {
    if out.is_null() {
        return Err(Failure::Null("out"));
    }
    out.write(Box::into_raw(Box::new(value)));
    Ok(())
}

unsafe fn release<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

fn verdict(v: Verdict) -> VarkitVerdict {
    match v {
        Verdict::Bounded => VarkitVerdict::Bounded,
        Verdict::Divergent => VarkitVerdict::Divergent,
        Verdict::Inconclusive => VarkitVerdict::Inconclusive,
    }
}

fn check_bits(bits: u32) -> Outcome {
    mp::check_bits(bits).map_err(Failure::from)
}

/// Message of the last failed call on this thread, or an empty string. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn varkit_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn varkit_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn varkit_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `p(r) = r^alpha`, `alpha > 0`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn varkit_weight_power(
    alpha: f64,
    out: *mut *mut VarkitWeight,
) -> VarkitStatus {
    guard(|| {
        let w = Weight::power(alpha)?;
        put_handle(out, VarkitWeight(w))
    })
}

/// `p(r) = ln(1 + r^2)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn varkit_weight_log_poly(out: *mut *mut VarkitWeight) -> VarkitStatus {
    guard(|| put_handle(out, VarkitWeight(Weight::log_poly())))
}

/// `p(r) = r`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn varkit_weight_exp_type(out: *mut *mut VarkitWeight) -> VarkitStatus {
    guard(|| put_handle(out, VarkitWeight(Weight::exp_type())))
}

/// `p(r)`.
///
/// # Safety
/// `w` must be a live weight and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn varkit_weight_eval(
    w: *const VarkitWeight,
    r: f64,
    out: *mut f64,
) -> VarkitStatus {
    guard(|| {
        let w = get(w, "weight")?;
        if !(r >= 0.0) {
            return Err(Failure::Invalid(format!(
                "radius {r} is not a non-negative number"
            )));
        }
        put(out, w.0.eval_radius(r), "out")
    })
}

/// # Safety
/// `w` must be null or a live weight; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn varkit_weight_free(w: *mut VarkitWeight) {
    release(w)
}

/// Builds a variety from `len` points `re[j] + i im[j]` with multiplicities
/// `mult[j]`. A negative `n_max` declares the variety finite; otherwise it is
/// complete inside `D(0, 2^n_max)`. Points are re-sorted by modulus and
/// argument when needed, which is reported through `resorted` if non-null.
///
/// # Safety
/// The arrays must hold `len` elements; `out` must be valid for writes and
/// `resorted` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn varkit_variety_new(
    re: *const f64,
    im: *const f64,
    mult: *const u32,
    len: usize,
    n_max: i32,
    bits: u32,
    out: *mut *mut VarkitVariety,
    resorted: *mut bool,
) -> VarkitStatus {
    guard(|| {
        check_bits(bits)?;
        let (re, im, mult) = (
            slice(re, len, "re")?,
            slice(im, len, "im")?,
            slice(mult, len, "mult")?,
        );
        if let Some(j) = (0..len).find(|&j| !(re[j].is_finite() && im[j].is_finite())) {
            return Err(Failure::Invalid(format!("point {} is not finite", j + 1)));
        }
        let points = (0..len)
            .map(|j| (mp::from_f64(re[j], im[j], bits), mult[j]))
            .collect();
        let truncation = match u32::try_from(n_max) {
            Ok(n) => Truncation::Octave(n),
            Err(_) => Truncation::Complete,
        };
        let (v, sorted) = MultiplicityVariety::new(points, truncation)?;
        if !resorted.is_null() {
            resorted.write(sorted);
        }
        put_handle(out, VarkitVariety(v))
    })
}

/// Parses the text variety format (`re im mult` per line, `#` headers).
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn varkit_variety_parse(
    text: *const c_char,
    bits: u32,
    out: *mut *mut VarkitVariety,
) -> VarkitStatus {
    guard(|| {
        if text.is_null() {
            return Err(Failure::Null("text"));
        }
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| Failure::Invalid(format!("text is not UTF-8: {e}")))?;
        let file = varkit::io::parse_variety(text, bits)?;
        put_handle(out, VarkitVariety(file.variety))
    })
}

/// `{pi k : |pi k| <= 2^n_max}` with every multiplicity `mult`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn varkit_variety_pi_lattice(
    n_max: u32,
    mult: u32,
    bits: u32,
    out: *mut *mut VarkitVariety,
) -> VarkitStatus {
    guard(|| {
        let v = generate::pi_lattice(n_max, MultRule::Const(mult), bits)?;
        put_handle(out, VarkitVariety(v))
    })
}

/// `{1, ..., 2^n_max}`, with the origin first when `include_origin`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn varkit_variety_integers(
    n_max: u32,
    mult: u32,
    include_origin: bool,
    bits: u32,
    out: *mut *mut VarkitVariety,
) -> VarkitStatus {
    guard(|| {
        let v = generate::integers(n_max, MultRule::Const(mult), include_origin, bits)?;
        put_handle(out, VarkitVariety(v))
    })
}

/// Number of distinct points; 0 for a null handle.
///
/// # Safety
/// `v` must be null or a live variety.
#[no_mangle]
pub unsafe extern "C" fn varkit_variety_len(v: *const VarkitVariety) -> usize {
    v.as_ref().map_or(0, |v| v.0.len())
}

/// Sum of all multiplicities, which is the length of a value array; 0 for a
/// null handle.
///
/// # Safety
/// `v` must be null or a live variety.
#[no_mangle]
pub unsafe extern "C" fn varkit_variety_total_multiplicity(v: *const VarkitVariety) -> u64 {
    v.as_ref().map_or(0, |v| v.0.total_multiplicity())
}

/// Point `j` (0-based) in sorted order.
///
/// # Safety
/// `v` must be a live variety and the out-pointers valid for writes.
#[no_mangle]
pub unsafe extern "C" fn varkit_variety_point(
    v: *const VarkitVariety,
    j: usize,
    re: *mut f64,
    im: *mut f64,
    mult: *mut u32,
) -> VarkitStatus {
    guard(|| {
        let v = get(v, "variety")?;
        let p =
            v.0.points().get(j).ok_or_else(|| {
                Failure::Invalid(format!("point {j} out of range 0..{}", v.0.len()))
            })?;
        put(re, p.re(), "re")?;
        put(im, p.im(), "im")?;
        put(mult, p.mult, "mult")
    })
}

/// `n(z, r)`: total multiplicity in the closed disc `D(z, r)`.
///
/// # Safety
/// `v` must be a live variety and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn varkit_variety_counting_n(
    v: *const VarkitVariety,
    re: f64,
    im: f64,
    r: f64,
    out: *mut u64,
) -> VarkitStatus {
    guard(|| {
        let v = get(v, "variety")?;
        let z = mp::from_f64(re, im, v.0.precision());
        put(out, v.0.counting_n(&z, r)?, "out")
    })
}

/// `N(z, r)`: the integrated counting function.
///
/// # Safety
/// `v` must be a live variety and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn varkit_variety_counting_big_n(
    v: *const VarkitVariety,
    re: f64,
    im: f64,
    r: f64,
    out: *mut f64,
) -> VarkitStatus {
    guard(|| {
        let v = get(v, "variety")?;
        let z = mp::from_f64(re, im, v.0.precision());
        put(out, v.0.counting_big_n(&z, r)?, "out")
    })
}

/// # Safety
/// `v` must be null or a live variety; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn varkit_variety_free(v: *mut VarkitVariety) {
    release(v)
}

/// Values in table order: `w_{1,0}, ..., w_{1,m_1-1}, w_{2,0}, ...`, so `len`
/// must equal the total multiplicity.
///
/// # Safety
/// `v` must be a live variety, the arrays must hold `len` elements and `out`
/// must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn varkit_values_new(
    v: *const VarkitVariety,
    re: *const f64,
    im: *const f64,
    len: usize,
    bits: u32,
    out: *mut *mut VarkitValues,
) -> VarkitStatus {
    guard(|| {
        check_bits(bits)?;
        let v = get(v, "variety")?;
        let (re, im) = (slice(re, len, "re")?, slice(im, len, "im")?);
        let total = v.0.total_multiplicity();
        if len as u64 != total {
            return Err(Failure::Invalid(format!(
                "{len} values for a total multiplicity of {total}"
            )));
        }
        let w = ValueSequence::from_fn(&v.0, |j, l| {
            let k = v.0.cumulative_index(j, l) as usize;
            mp::from_f64(re[k], im[k], bits)
        })?;
        put_handle(out, VarkitValues(w))
    })
}

/// `W_0`: 1 in the highest derivative slot of the first point, 0 elsewhere.
///
/// # Safety
/// `v` must be a live variety and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn varkit_values_w0(
    v: *const VarkitVariety,
    bits: u32,
    out: *mut *mut VarkitValues,
) -> VarkitStatus {
    guard(|| {
        check_bits(bits)?;
        let v = get(v, "variety")?;
        put_handle(out, VarkitValues(ValueSequence::w0(&v.0, bits)))
    })
}

/// # Safety
/// `w` must be null or a live value sequence; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn varkit_values_free(w: *mut VarkitValues) {
    release(w)
}

/// Newton coefficients of the interpolant of `w` on the first `q` points.
///
/// # Safety
/// `v` and `w` must be live handles and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn varkit_table_compute(
    v: *const VarkitVariety,
    w: *const VarkitValues,
    q: usize,
    bits: u32,
    method: VarkitMethod,
    out: *mut *mut VarkitTable,
) -> VarkitStatus {
    guard(|| {
        let (v, w) = (get(v, "variety")?, get(w, "values")?);
        let t = match method {
            VarkitMethod::Recursion => divdiff::phi_table(&v.0, &w.0, q, bits)?,
            VarkitMethod::Tableau => divdiff::phi_table_tableau(&v.0, &w.0, q, bits)?,
        };
        put_handle(out, VarkitTable(t))
    })
}

/// Number of point rows in the table; 0 for a null handle.
///
/// # Safety
/// `t` must be null or a live table.
#[no_mangle]
pub unsafe extern "C" fn varkit_table_len(t: *const VarkitTable) -> usize {
    t.as_ref().map_or(0, |t| t.0.len())
}

/// `phi_{j,l}` (0-based `j`) rounded to double.
///
/// # Safety
/// `t` must be a live table and the out-pointers valid for writes.
#[no_mangle]
pub unsafe extern "C" fn varkit_table_get(
    t: *const VarkitTable,
    j: usize,
    l: u32,
    re: *mut f64,
    im: *mut f64,
) -> VarkitStatus {
    guard(|| {
        let t = get(t, "table")?;
        let entry =
            t.0.rows()
                .get(j)
                .and_then(|row| row.get(l as usize))
                .ok_or_else(|| Failure::Invalid(format!("entry ({j}, {l}) out of range")))?;
        let (a, b) = mp::to_f64_pair(entry);
        put(re, a, "re")?;
        put(im, b, "im")
    })
}

/// Estimated number of bits lost to cancellation in the worst entry.
///
/// # Safety
/// `t` must be a live table and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn varkit_table_lost_bits(
    t: *const VarkitTable,
    out: *mut f64,
) -> VarkitStatus {
    guard(|| {
        let t = get(t, "table")?;
        put(out, t.0.lost_bits(), "out")
    })
}

/// `P_q^{(l)}(z)/l!` for the Newton interpolant on the first `q` points.
///
/// # Safety
/// `v` and `t` must be live handles and the out-pointers valid for writes.
#[no_mangle]
pub unsafe extern "C" fn varkit_newton_eval(
    v: *const VarkitVariety,
    t: *const VarkitTable,
    q: usize,
    re: f64,
    im: f64,
    l: u32,
    out_re: *mut f64,
    out_im: *mut f64,
) -> VarkitStatus {
    guard(|| {
        let (v, t) = (get(v, "variety")?, get(t, "table")?);
        let z = Complex::with_val(t.0.precision_bits(), (re, im));
        let (a, b) = mp::to_f64_pair(&divdiff::newton_eval(&v.0, &t.0, q, &z, l)?);
        put(out_re, a, "out_re")?;
        put(out_im, b, "out_im")
    })
}

/// # Safety
/// `t` must be null or a live table; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn varkit_table_free(t: *mut VarkitTable) {
    release(t)
}

fn octaves(start: u32, end: u32) -> Result<Octaves, Failure> {
    Ok(Octaves::new(start, end)?)
}

/// `N(0, 2^n) <= A p(2^n) + B` over octaves `start..=end`.
///
/// # Safety
/// `v` and `w` must be live handles and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn varkit_check_condition_1(
    v: *const VarkitVariety,
    w: *const VarkitWeight,
    start: u32,
    end: u32,
    out: *mut *mut VarkitFit,
) -> VarkitStatus {
    guard(|| {
        let (v, w) = (get(v, "variety")?, get(w, "weight")?);
        let fit = growth::check_condition_1(&v.0, &w.0, &octaves(start, end)?)?;
        put_handle(out, VarkitFit(fit))
    })
}

/// `N(z_j, |z_j|) <= A p(z_j) + B` over the usable points.
///
/// # Safety
/// `v` and `w` must be live handles and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn varkit_check_condition_2(
    v: *const VarkitVariety,
    w: *const VarkitWeight,
    out: *mut *mut VarkitFit,
) -> VarkitStatus {
    guard(|| {
        let (v, w) = (get(v, "variety")?, get(w, "weight")?);
        let fit = growth::check_condition_2(&v.0, &w.0)?;
        put_handle(out, VarkitFit(fit))
    })
}

/// Growth of `ln sum_l |w_{j,l}|` against `p(z_j)`.
///
/// # Safety
/// All handles must be live and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn varkit_membership_values(
    v: *const VarkitVariety,
    values: *const VarkitValues,
    w: *const VarkitWeight,
    out: *mut *mut VarkitFit,
) -> VarkitStatus {
    guard(|| {
        let (v, values, w) = (
            get(v, "variety")?,
            get(values, "values")?,
            get(w, "weight")?,
        );
        let fit = growth::membership_apv(&v.0, &values.0, &w.0)?;
        put_handle(out, VarkitFit(fit))
    })
}

/// Growth of the octave norms of a divided-difference table against
/// `p(2^n)` over octaves `start..=end`.
///
/// # Safety
/// All handles must be live and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn varkit_membership_table(
    t: *const VarkitTable,
    v: *const VarkitVariety,
    w: *const VarkitWeight,
    start: u32,
    end: u32,
    out: *mut *mut VarkitFit,
) -> VarkitStatus {
    guard(|| {
        let (t, v, w) = (get(t, "table")?, get(v, "variety")?, get(w, "weight")?);
        let fit = growth::membership_tilde(&t.0, &v.0, &w.0, &octaves(start, end)?)?;
        put_handle(out, VarkitFit(fit))
    })
}

/// # Safety
/// `f` must be a live fit and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn varkit_fit_verdict(
    f: *const VarkitFit,
    out: *mut VarkitVerdict,
) -> VarkitStatus {
    guard(|| put(out, verdict(get(f, "fit")?.0.verdict), "out"))
}

/// Fitted slope `B` and `ln A` of `y <= B x + ln A`.
///
/// # Safety
/// `f` must be a live fit and the out-pointers valid for writes.
#[no_mangle]
pub unsafe extern "C" fn varkit_fit_line(
    f: *const VarkitFit,
    slope: *mut f64,
    ln_intercept: *mut f64,
) -> VarkitStatus {
    guard(|| {
        let f = get(f, "fit")?;
        put(slope, f.0.b_hat, "slope")?;
        put(ln_intercept, f.0.ln_a_hat, "ln_intercept")
    })
}

/// `y/x` at the last octave, or NaN when the series is empty.
///
/// # Safety
/// `f` must be a live fit and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn varkit_fit_final_ratio(
    f: *const VarkitFit,
    out: *mut f64,
) -> VarkitStatus {
    guard(|| put(out, get(f, "fit")?.0.final_ratio.unwrap_or(f64::NAN), "out"))
}

/// Length of the `(octave, x, y)` series behind the verdict; 0 for a null
/// handle.
///
/// # Safety
/// `f` must be null or a live fit.
#[no_mangle]
pub unsafe extern "C" fn varkit_fit_series_len(f: *const VarkitFit) -> usize {
    f.as_ref().map_or(0, |f| f.0.octave_series.len())
}

/// # Safety
/// `f` must be a live fit and the out-pointers valid for writes.
#[no_mangle]
pub unsafe extern "C" fn varkit_fit_series_get(
    f: *const VarkitFit,
    i: usize,
    octave: *mut u32,
    x: *mut f64,
    y: *mut f64,
) -> VarkitStatus {
    guard(|| {
        let f = get(f, "fit")?;
        let &(n, a, b) =
            f.0.octave_series
                .get(i)
                .ok_or_else(|| Failure::Invalid(format!("series index {i} out of range")))?;
        put(octave, n, "octave")?;
        put(x, a, "x")?;
        put(y, b, "y")
    })
}

/// The full fit as JSON, in the same shape as the command-line reports.
/// Release the string with `varkit_string_free`.
///
/// # Safety
/// `f` must be a live fit and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn varkit_fit_json(
    f: *const VarkitFit,
    out: *mut *mut c_char,
) -> VarkitStatus {
    guard(|| {
        let f = get(f, "fit")?;
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let text = serde_json::to_string(&f.0).map_err(|e| Failure::Invalid(e.to_string()))?;
        let text = CString::new(text).map_err(|e| Failure::Invalid(e.to_string()))?;
        put(out, text.into_raw(), "out")
    })
}

/// # Safety
/// `f` must be null or a live fit; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn varkit_fit_free(f: *mut VarkitFit) {
    release(f)
}

/// Radial correction of the subharmonic potential at `re + i im`.
///
/// # Safety
/// `v` must be a live variety and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn varkit_eval_correction(
    v: *const VarkitVariety,
    re: f64,
    im: f64,
    out: *mut f64,
) -> VarkitStatus {
    guard(|| {
        let v = get(v, "variety")?;
        put(out, smoothing::eval_correction(&v.0, re, im)?, "out")
    })
}

/// Smallest power-of-two `alpha` making `V + alpha W` discretely
/// subharmonic on an `nx` by `ny` grid over the evaluation disc.
///
/// # Safety
/// `v` must be a live variety and `alpha` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn varkit_fit_alpha(
    v: *const VarkitVariety,
    nx: usize,
    ny: usize,
    alpha: *mut f64,
) -> VarkitStatus {
    guard(|| {
        let v = get(v, "variety")?;
        if nx < 3 || ny < 3 {
            return Err(Failure::Invalid(format!(
                "grid {nx}x{ny} is too small for a stencil"
            )));
        }
        let grid = GridSpec::Cartesian {
            nx,
            ny,
            extent: None,
        };
        put(alpha, smoothing::fit_alpha(&v.0, &grid)?.alpha, "alpha")
    })
}
