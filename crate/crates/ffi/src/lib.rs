//! C ABI over the `selforg` toolkit.
//!
//! Handles are opaque pointers created by `*_new`/`*_from_*`/`selforg_train`
//! and released with the matching `*_free`. Every fallible call returns a
//! [`SelforgStatus`]; on failure [`selforg_last_error`] describes the problem
//! for the calling thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use selforg::cli::io::write_all;
use selforg::cli::run::{export, render_artifacts, train, ExportedModel, TrainedModel};
use selforg::cli::{ModelKind, RunConfig};
use selforg::metrics::component_count;
use selforg::synth::{generate, SynthKind, SynthSpec};
use selforg::{Dataset, Error, Vector};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelforgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    Parse = 4,
    Io = 5,
    BufferTooSmall = 6,
    Failed = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelforgModelKind {
    Som = 0,
    Gcs = 1,
    Gng = 2,
    Sota = 3,
}

impl From<SelforgModelKind> for ModelKind {
    fn from(k: SelforgModelKind) -> Self {
        match k {
            SelforgModelKind::Som => ModelKind::Som,
            SelforgModelKind::Gcs => ModelKind::Gcs,
            SelforgModelKind::Gng => ModelKind::Gng,
            SelforgModelKind::Sota => ModelKind::Sota,
        }
    }
}

/// An immutable dataset.
pub struct SelforgDataset(Dataset);

/// Training configuration: model kind plus `key = value` parameters.
pub struct SelforgConfig(RunConfig);

/// A trained model in its exported form.
pub struct SelforgModel {
    config: RunConfig,
    trained: TrainedModel,
    exported: ExportedModel,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("NULs were replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SelforgStatus {
    match e {
        Error::DimensionMismatch { .. } | Error::ProfileShape { .. } => SelforgStatus::DimensionMismatch,
        Error::Parse { .. } => SelforgStatus::Parse,
        Error::Io { .. } => SelforgStatus::Io,
        Error::InvalidParameter { .. }
        | Error::Config(_)
        | Error::EmptyVector
        | Error::NonFinite { .. }
        | Error::EmptyDataset
        | Error::LabelCount { .. }
        | Error::InvalidProfile(_) => SelforgStatus::InvalidArgument,
        _ => SelforgStatus::Failed,
    }
}

struct Fail(SelforgStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(SelforgStatus::NullPointer, format!("`{what}` is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SelforgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            SelforgStatus::Ok
        }
        Ok(Err(Fail(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            SelforgStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn slice_mut<'a, T>(p: *mut T, len: usize, needed: usize, what: &str) -> Result<&'a mut [T], Fail> {
    if len < needed {
        return Err(Fail(
            SelforgStatus::BufferTooSmall,
            format!("`{what}` holds {len} values, {needed} needed"),
        ));
    }
    if needed == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts_mut(p, needed))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(SelforgStatus::InvalidArgument, format!("`{what}` is not UTF-8")))
}

fn emit<T>(out: &mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

/// Message for the last failed call on this thread, or null after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn selforg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

// Datasets

/// Copies `rows * dim` row-major values into a new dataset.
///
/// # Safety
/// `values` must point to `rows * dim` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn selforg_dataset_from_buffer(
    values: *const f64,
    rows: usize,
    dim: usize,
    out: *mut *mut SelforgDataset,
) -> SelforgStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        if rows == 0 || dim == 0 {
            return Err(Fail(SelforgStatus::InvalidArgument, "rows and dim must be >= 1".into()));
        }
        let total = rows
            .checked_mul(dim)
            .ok_or_else(|| Fail(SelforgStatus::InvalidArgument, "rows * dim overflows".into()))?;
        let values = slice(values, total, "values")?;
        let data = Dataset::new(
            values
                .chunks_exact(dim)
                .map(|r| Vector::new(r.to_vec()))
                .collect::<selforg::Result<Vec<_>>>()?,
        )?;
        emit(out, SelforgDataset(data));
        Ok(())
    })
}

/// Reads a dataset CSV file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn selforg_dataset_from_csv(
    path: *const c_char,
    has_header: bool,
    out: *mut *mut SelforgDataset,
) -> SelforgStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let path = text(path, "path")?;
        let data = selforg::cli::io::ingest_csv(path.as_ref(), has_header)?;
        emit(out, SelforgDataset(data));
        Ok(())
    })
}

fn synth(kind: SynthKind, n: usize, seed: u64, out: &mut *mut SelforgDataset) -> Result<(), Fail> {
    let data = generate(&SynthSpec::new(kind, n, seed))?;
    emit(out, SelforgDataset(data));
    Ok(())
}

/// `n` points uniform in the box `[low, high]` of dimension `dim`.
///
/// # Safety
/// `low` and `high` must point to `dim` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn selforg_synth_uniform(
    low: *const f64,
    high: *const f64,
    dim: usize,
    n: usize,
    seed: u64,
    out: *mut *mut SelforgDataset,
) -> SelforgStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let low = slice(low, dim, "low")?.to_vec();
        let high = slice(high, dim, "high")?.to_vec();
        synth(SynthKind::UniformRect { low, high }, n, seed, out)
    })
}

/// `n` points from `k` isotropic Gaussians; `centers` is `k * dim` row-major.
/// Labels are the component indices.
///
/// # Safety
/// `centers` must point to `k * dim` doubles, `sigmas` and `weights` to `k`.
#[no_mangle]
pub unsafe extern "C" fn selforg_synth_mixture(
    centers: *const f64,
    sigmas: *const f64,
    weights: *const f64,
    k: usize,
    dim: usize,
    n: usize,
    seed: u64,
    out: *mut *mut SelforgDataset,
) -> SelforgStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        if dim == 0 {
            return Err(Fail(SelforgStatus::InvalidArgument, "dim must be >= 1".into()));
        }
        let total = k
            .checked_mul(dim)
            .ok_or_else(|| Fail(SelforgStatus::InvalidArgument, "k * dim overflows".into()))?;
        let centers = slice(centers, total, "centers")?.chunks_exact(dim).map(<[f64]>::to_vec).collect();
        let sigmas = slice(sigmas, k, "sigmas")?.to_vec();
        let weights = slice(weights, k, "weights")?.to_vec();
        synth(SynthKind::GaussianMixture { centers, sigmas, weights }, n, seed, out)
    })
}

/// `n` points in two `side x side` squares separated horizontally by `gap`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn selforg_synth_two_squares(
    side: f64,
    gap: f64,
    n: usize,
    seed: u64,
    out: *mut *mut SelforgDataset,
) -> SelforgStatus {
    guard(|| synth(SynthKind::TwoSquares { side, gap }, n, seed, out_ptr(out, "out")?))
}

/// # Safety
/// `data` must be null or a handle from this library, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn selforg_dataset_free(data: *mut SelforgDataset) {
    if !data.is_null() {
        drop(Box::from_raw(data));
    }
}

/// Row count, or 0 for a null handle.
///
/// # Safety
/// `data` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn selforg_dataset_rows(data: *const SelforgDataset) -> usize {
    data.as_ref().map_or(0, |d| d.0.len())
}

/// Dimension, or 0 for a null handle.
///
/// # Safety
/// `data` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn selforg_dataset_dim(data: *const SelforgDataset) -> usize {
    data.as_ref().map_or(0, |d| d.0.dim())
}

/// Copies the labels into `out`. Fails with `InvalidArgument` when the dataset has none.
///
/// # Safety
/// `data` must be a live handle; `out` must hold `len` integers.
#[no_mangle]
pub unsafe extern "C" fn selforg_dataset_labels(data: *const SelforgDataset, out: *mut i64, len: usize) -> SelforgStatus {
    guard(|| {
        let data = &borrow(data, "data")?.0;
        let labels = data
            .labels()
            .ok_or_else(|| Fail(SelforgStatus::InvalidArgument, "dataset has no labels".into()))?;
        slice_mut(out, len, labels.len(), "out")?.copy_from_slice(labels);
        Ok(())
    })
}

// Configuration

/// Defaults for `kind`. Never null.
#[no_mangle]
pub extern "C" fn selforg_config_new(kind: SelforgModelKind) -> *mut SelforgConfig {
    Box::into_raw(Box::new(SelforgConfig(RunConfig::new(kind.into()))))
}

/// Sets one parameter using the config-file key names, e.g. `gng.max_age`.
///
/// # Safety
/// `config` must be a live handle; `key` and `value` NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn selforg_config_set(
    config: *mut SelforgConfig,
    key: *const c_char,
    value: *const c_char,
) -> SelforgStatus {
    guard(|| {
        let config = out_ptr(config, "config")?;
        let key = text(key, "key")?;
        let value = text(value, "value")?;
        if key == "model" {
            return Err(Fail(SelforgStatus::InvalidArgument, "the model is fixed at creation".into()));
        }
        config.0.set(key, value)?;
        Ok(())
    })
}

/// # Safety
/// `config` must be null or a handle from this library, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn selforg_config_free(config: *mut SelforgConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

// Models

/// Trains on `data` with `config`.
///
/// # Safety
/// `config` and `data` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn selforg_train(
    config: *const SelforgConfig,
    data: *const SelforgDataset,
    out: *mut *mut SelforgModel,
) -> SelforgStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let config = borrow(config, "config")?.0.clone();
        let data = &borrow(data, "data")?.0;
        let trained = train(&config, data)?;
        let exported = export(&trained, data)?;
        emit(
            out,
            SelforgModel {
                config,
                trained,
                exported,
            },
        );
        Ok(())
    })
}

/// # Safety
/// `model` must be null or a handle from this library, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn selforg_model_free(model: *mut SelforgModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Stored units (every tree node for SOTA), or 0 for a null handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn selforg_model_n_units(model: *const SelforgModel) -> usize {
    model.as_ref().map_or(0, |m| m.exported.codebook.units.len())
}

/// Units that compete for inputs (the leaves for SOTA), or 0 for a null handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn selforg_model_n_competing(model: *const SelforgModel) -> usize {
    model.as_ref().map_or(0, |m| m.exported.competing_units().len())
}

/// Input dimension, or 0 for a null handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn selforg_model_dim(model: *const SelforgModel) -> usize {
    model.as_ref().map_or(0, |m| m.exported.codebook.dim())
}

/// Edge count of the exported graph or tree, or 0 for a null handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn selforg_model_n_edges(model: *const SelforgModel) -> usize {
    model.as_ref().map_or(0, |m| m.exported.edges.len())
}

/// Copies unit ids into `ids` and row-major reference vectors into `vectors`,
/// in id order. Sizes: `n_units` and `n_units * dim`.
///
/// # Safety
/// `model` must be a live handle; `ids` and `vectors` must hold `ids_len` and
/// `vectors_len` elements.
#[no_mangle]
pub unsafe extern "C" fn selforg_model_codebook(
    model: *const SelforgModel,
    ids: *mut usize,
    ids_len: usize,
    vectors: *mut f64,
    vectors_len: usize,
) -> SelforgStatus {
    guard(|| {
        let units = &borrow(model, "model")?.exported.codebook.units;
        let dim = units.first().map_or(0, |u| u.w.dim());
        let ids = slice_mut(ids, ids_len, units.len(), "ids")?;
        let vectors = slice_mut(vectors, vectors_len, units.len() * dim, "vectors")?;
        for (i, u) in units.iter().enumerate() {
            ids[i] = u.id;
            vectors[i * dim..(i + 1) * dim].copy_from_slice(&u.w);
        }
        Ok(())
    })
}

/// Writes the winning unit id of every row of `data` into `out`.
///
/// # Safety
/// `model` and `data` must be live handles; `out` must hold `len` elements.
#[no_mangle]
pub unsafe extern "C" fn selforg_model_assign(
    model: *const SelforgModel,
    data: *const SelforgDataset,
    out: *mut usize,
    len: usize,
) -> SelforgStatus {
    guard(|| {
        let model = borrow(model, "model")?;
        let data = &borrow(data, "data")?.0;
        let out = slice_mut(out, len, data.len(), "out")?;
        out.copy_from_slice(&model.exported.assign(data)?);
        Ok(())
    })
}

/// Mean distance from each row of `data` to its winning unit.
///
/// # Safety
/// `model` and `data` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn selforg_model_quantization_error(
    model: *const SelforgModel,
    data: *const SelforgDataset,
    out: *mut f64,
) -> SelforgStatus {
    guard(|| {
        let model = borrow(model, "model")?;
        let data = &borrow(data, "data")?.0;
        let out = out_ptr(out, "out")?;
        let metrics = model.exported.metrics(data)?;
        let qe = metrics
            .iter()
            .find(|(k, _)| k == "quantization_error")
            .and_then(|(_, v)| v.parse().ok())
            .ok_or_else(|| Fail(SelforgStatus::Failed, "quantization error missing".into()))?;
        *out = qe;
        Ok(())
    })
}

/// Connected components of the exported graph (1 for a grid or a tree).
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn selforg_model_components(model: *const SelforgModel, out: *mut usize) -> SelforgStatus {
    guard(|| {
        let e = &borrow(model, "model")?.exported;
        let out = out_ptr(out, "out")?;
        *out = component_count(e.codebook.units.iter().map(|u| u.id), e.edges.iter().map(|r| (r.a, r.b)));
        Ok(())
    })
}

/// Writes the command line tool's artifact set into `dir`. Assignments,
/// metrics and SOM hit counts are computed on `data`.
///
/// # Safety
/// `model` and `data` must be live handles; `dir` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn selforg_model_write(
    model: *const SelforgModel,
    data: *const SelforgDataset,
    dir: *const c_char,
) -> SelforgStatus {
    guard(|| {
        let model = borrow(model, "model")?;
        let data = &borrow(data, "data")?.0;
        let dir = PathBuf::from(text(dir, "dir")?);
        let mut config = model.config.clone();
        config.out = Some(dir.clone());
        let files = render_artifacts(&config, data, &model.trained)?;
        std::fs::create_dir_all(&dir)
            .map_err(|e| Fail(SelforgStatus::Io, format!("{}: {e}", dir.display())))?;
        let files: Vec<(PathBuf, String)> = files.into_iter().map(|(n, t)| (dir.join(n), t)).collect();
        write_all(&files)?;
        Ok(())
    })
}
