//! C ABI over the qmix toolkit.
//!
//! Models and matrices are opaque handles owned by the caller and released
//! with their `_free` function. Every fallible call returns a `QmixStatus`;
//! on failure `qmix_last_error` holds a message for the calling thread.
//! Outputs are written only on success.

use qmix::correlations::mutual_information;
use qmix::fermion::{fermion_gap, fermion_mutual_information, gaussian_min_eigenvalue, stationary_covariance};
use qmix::lattice::Region;
use qmix::mixing::{gap_report, inverse_norm};
use qmix::model::{load_model, parse_model, Model, ModelFile, ModelKind};
use qmix::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QmixStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Validation = 4,
    Io = 5,
    /// the operation does not apply to this kind of model
    Unsupported = 6,
    /// the stationary state is not unique or not full rank
    NotPrimitive = 7,
    /// the fermionic drift has an eigenvalue with nonnegative real part
    NotStable = 8,
    /// invalid regions or sites
    Region = 9,
    Numerical = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QmixModelKind {
    Spin = 0,
    Davies = 1,
    Fermion = 2,
}

/// A parsed, validated and built model.
pub struct QmixModel {
    file: ModelFile,
    model: Model,
}

/// A dense matrix in row-major order; the imaginary part is zero for real
/// results.
pub struct QmixMatrix {
    rows: usize,
    cols: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

enum Failure {
    Core(Error),
    Null(&'static str),
    Argument(String),
    Unsupported(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn status(&self) -> QmixStatus {
        match self {
            Failure::Null(_) => QmixStatus::NullPointer,
            Failure::Argument(_) => QmixStatus::InvalidArgument,
            Failure::Unsupported(_) => QmixStatus::Unsupported,
            Failure::Core(e) => match e {
                Error::Parse { .. } | Error::Json(_) => QmixStatus::Parse,
                Error::Validation(_) => QmixStatus::Validation,
                Error::Io(_) | Error::Csv(_) => QmixStatus::Io,
                Error::NotPrimitive { .. } | Error::SingularSigma { .. } => QmixStatus::NotPrimitive,
                Error::NotStable { .. } => QmixStatus::NotStable,
                e if e.is_model_error() => QmixStatus::Region,
                _ => QmixStatus::Numerical,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Null(name) => format!("{name} is null"),
            Failure::Argument(m) | Failure::Unsupported(m) => m.clone(),
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Runs `f`, records any failure or panic and converts it to a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> QmixStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            QmixStatus::Ok
        }
        Ok(Err(fail)) => {
            set_error(fail.message());
            fail.status()
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {msg}"));
            QmixStatus::Panic
        }
    }
}

unsafe fn reference<'a, T>(p: *const T, name: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(name))
}

unsafe fn write<T>(out: *mut T, value: T, name: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(name));
    }
    out.write(value);
    Ok(())
}

unsafe fn text<'a>(p: *const c_char, name: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Argument(format!("{name} is not valid UTF-8")))
}

unsafe fn sites<'a>(p: *const usize, len: usize, name: &'static str) -> Result<&'a [usize], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::Null(name));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn boxed(file: ModelFile) -> Result<*mut QmixModel, Failure> {
    let model = file.build()?;
    Ok(Box::into_raw(Box::new(QmixModel { file, model })))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qmix_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL after a
/// successful call. Valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn qmix_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Reads and builds a model from a JSON file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qmix_model_load(path: *const c_char, out: *mut *mut QmixModel) -> QmixStatus {
    guard(|| {
        let path = text(path, "path")?;
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let m = boxed(load_model(Path::new(path))?)?;
        write(out, m, "out")
    })
}

/// Builds a model from JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qmix_model_parse(json: *const c_char, out: *mut *mut QmixModel) -> QmixStatus {
    guard(|| {
        let json = text(json, "json")?;
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let m = boxed(parse_model(json)?)?;
        write(out, m, "out")
    })
}

/// Releases a model; NULL is ignored.
///
/// # Safety
/// `model` must come from `qmix_model_load` or `qmix_model_parse` and not
/// have been freed.
#[no_mangle]
pub unsafe extern "C" fn qmix_model_free(model: *mut QmixModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// # Safety
/// `model` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qmix_model_kind(model: *const QmixModel, out: *mut QmixModelKind) -> QmixStatus {
    guard(|| {
        let m = reference(model, "model")?;
        let kind = match m.file.kind {
            ModelKind::Spin => QmixModelKind::Spin,
            ModelKind::Davies => QmixModelKind::Davies,
            ModelKind::Fermion => QmixModelKind::Fermion,
        };
        write(out, kind, "out")
    })
}

/// Number of lattice sites (fermionic modes for fermion models).
///
/// # Safety
/// `model` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qmix_model_sites(model: *const QmixModel, out: *mut usize) -> QmixStatus {
    guard(|| {
        let m = reference(model, "model")?;
        write(out, m.file.sites(), "out")
    })
}

/// Spectral gap of the generator.
///
/// # Safety
/// `model` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qmix_spectral_gap(model: *const QmixModel, out: *mut f64) -> QmixStatus {
    guard(|| {
        let m = reference(model, "model")?;
        let gap = match &m.model {
            Model::Spin(l) => gap_report(l, &[])?.gap,
            Model::Fermion(q) => fermion_gap(q)?,
        };
        write(out, gap, "out")
    })
}

/// χ² mixing constant λ_s; `Unsupported` when the generator is not
/// s-reversible or the model is fermionic.
///
/// # Safety
/// `model` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qmix_chi2_constant(model: *const QmixModel, s: f64, out: *mut f64) -> QmixStatus {
    guard(|| {
        let m = reference(model, "model")?;
        let Model::Spin(l) = &m.model else {
            return Err(Failure::Unsupported("chi2 constant needs a spin model".into()));
        };
        if !(0.0..=1.0).contains(&s) {
            return Err(Failure::Argument(format!("s = {s} must lie in [0, 1]")));
        }
        let report = gap_report(l, &[s])?;
        let (_, value) = report
            .chi2
            .first()
            .copied()
            .ok_or_else(|| Failure::Unsupported(format!("generator is not {s}-reversible")))?;
        write(out, value, "out")
    })
}

/// Stationary state: the density matrix of a spin model or the Majorana
/// covariance matrix of a fermion model.
///
/// # Safety
/// `model` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qmix_stationary_state(model: *const QmixModel, out: *mut *mut QmixMatrix) -> QmixStatus {
    guard(|| {
        let m = reference(model, "model")?;
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let mat = match &m.model {
            Model::Spin(l) => {
                let sigma = l.stationary_state()?;
                let a = sigma.mat();
                let (rows, cols) = (a.nrows(), a.ncols());
                let mut re = Vec::with_capacity(rows * cols);
                let mut im = Vec::with_capacity(rows * cols);
                for i in 0..rows {
                    for j in 0..cols {
                        re.push(a[(i, j)].re);
                        im.push(a[(i, j)].im);
                    }
                }
                QmixMatrix { rows, cols, re, im }
            }
            Model::Fermion(q) => {
                let gamma = stationary_covariance(q)?;
                let g = gamma.gamma();
                let (rows, cols) = (g.nrows(), g.ncols());
                let re = (0..rows).flat_map(|i| (0..cols).map(move |j| g[(i, j)])).collect();
                QmixMatrix {
                    rows,
                    cols,
                    re,
                    im: vec![0.0; rows * cols],
                }
            }
        };
        write(out, Box::into_raw(Box::new(mat)), "out")
    })
}

/// ‖σ⁻¹‖, the inverse of the smallest eigenvalue of the stationary state.
///
/// # Safety
/// `model` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qmix_inverse_norm(model: *const QmixModel, out: *mut f64) -> QmixStatus {
    guard(|| {
        let m = reference(model, "model")?;
        let value = match &m.model {
            Model::Spin(l) => inverse_norm(&l.stationary_state()?)?,
            Model::Fermion(q) => {
                let min = gaussian_min_eigenvalue(&stationary_covariance(q)?);
                if min.value <= 0.0 {
                    return Err(Error::SingularSigma { min_eig: min.value }.into());
                }
                1.0 / min.value
            }
        };
        write(out, value, "out")
    })
}

/// Mutual information I(A:B) of the stationary state in nats.
///
/// # Safety
/// `model` must be a live handle, `a` and `b` must point to `a_len` and
/// `b_len` site indices, and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qmix_mutual_information(
    model: *const QmixModel,
    a: *const usize,
    a_len: usize,
    b: *const usize,
    b_len: usize,
    out: *mut f64,
) -> QmixStatus {
    guard(|| {
        let m = reference(model, "model")?;
        let ra: Region = m.file.region(sites(a, a_len, "a")?)?;
        let rb: Region = m.file.region(sites(b, b_len, "b")?)?;
        let value = match &m.model {
            Model::Spin(l) => mutual_information(&l.stationary_state()?, &ra, &rb)?,
            Model::Fermion(q) => fermion_mutual_information(&stationary_covariance(q)?, &ra, &rb)?.nats,
        };
        write(out, value, "out")
    })
}

/// # Safety
/// `matrix` must be a live handle; `rows` and `cols` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn qmix_matrix_shape(matrix: *const QmixMatrix, rows: *mut usize, cols: *mut usize) -> QmixStatus {
    guard(|| {
        let m = reference(matrix, "matrix")?;
        if rows.is_null() || cols.is_null() {
            return Err(Failure::Null("rows/cols"));
        }
        write(rows, m.rows, "rows")?;
        write(cols, m.cols, "cols")
    })
}

/// Copies the entries in row-major order into buffers of `len` ≥ rows·cols
/// doubles. `im` may be NULL to skip the imaginary part.
///
/// # Safety
/// `matrix` must be a live handle, `re` must hold `len` doubles and `im`
/// must be NULL or hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn qmix_matrix_copy(matrix: *const QmixMatrix, re: *mut f64, im: *mut f64, len: usize) -> QmixStatus {
    guard(|| {
        let m = reference(matrix, "matrix")?;
        let n = m.rows * m.cols;
        if len < n {
            return Err(Failure::Argument(format!("buffer holds {len} entries, {n} required")));
        }
        if re.is_null() {
            return Err(Failure::Null("re"));
        }
        ptr::copy_nonoverlapping(m.re.as_ptr(), re, n);
        if !im.is_null() {
            ptr::copy_nonoverlapping(m.im.as_ptr(), im, n);
        }
        Ok(())
    })
}

/// Releases a matrix; NULL is ignored.
///
/// # Safety
/// `matrix` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn qmix_matrix_free(matrix: *mut QmixMatrix) {
    if !matrix.is_null() {
        drop(Box::from_raw(matrix));
    }
}
