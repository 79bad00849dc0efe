//! C ABI over the `pairsim` library.
//!
//! Every entry point returns a [`PsStatus`]; results go through out-pointers.
//! On failure a description of the last error on the calling thread is
//! available from [`ps_last_error`]. Matrices and experiment reports are
//! opaque handles that must be released with their `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

use pairsim::io::ResultsTable;
use pairsim::{
    DatasetSource, Error, ExperimentConfig, ExperimentReport, Judgment, Pcm, SamplerKind,
    ScoringBackend,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    IllPosed = 3,
    NonConvergence = 4,
    UndefinedValue = 5,
    Io = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsScoring {
    Bt = 0,
    Hodgerank = 1,
}

/// Comparison matrix handle.
pub struct PsPcm(Pcm);

/// Experiment results handle.
pub struct PsReport(ExperimentReport);

/// Settings for [`ps_experiment_run`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PsExperimentConfig {
    /// Stimuli per synthetic reference; ignored when a dataset path is given.
    pub n: usize,
    /// Synthetic references; ignored when a dataset path is given.
    pub references: usize,
    pub repetitions: usize,
    pub subjects: usize,
    pub seed: u64,
    pub scoring: PsScoring,
    pub init_value: f64,
    /// Worker threads, 0 for the global pool.
    pub threads: usize,
}

/// One aggregate row. Undefined statistics are NaN.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PsRow {
    /// Index into the sampler list accepted by [`ps_sampler_name`].
    pub sampler: u32,
    pub fraction: f64,
    pub plcc_mean: f64,
    pub plcc_std: f64,
    pub srocc_mean: f64,
    pub srocc_std: f64,
    pub repetitions: usize,
    pub references: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &Error) -> PsStatus {
    match err {
        Error::IllPosed(_) => PsStatus::IllPosed,
        Error::NonConvergence { .. } => PsStatus::NonConvergence,
        Error::UndefinedPreference { .. } | Error::UndefinedCorrelation(_) => {
            PsStatus::UndefinedValue
        }
        Error::Io { .. } | Error::Parse { .. } => PsStatus::Io,
        Error::Trial { source, .. } => status_of(source),
        _ => PsStatus::InvalidArgument,
    }
}

struct Failure(PsStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let mut message = e.to_string();
        let mut source = std::error::Error::source(&e);
        while let Some(s) = source {
            message.push_str(&format!(": {s}"));
            source = s.source();
        }
        Failure(status_of(&e), message)
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure(PsStatus::InvalidArgument, message.into())
}

fn null(what: &str) -> Failure {
    Failure(PsStatus::NullPointer, format!("`{what}` is null"))
}

/// Runs `body`, recording the error message and mapping panics to a status.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> PsStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            clear_last_error();
            PsStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(panic) => {
            let message = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(format!("internal panic: {message}"));
            PsStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, Failure> {
    ptr.as_ref().ok_or_else(|| null(what))
}

unsafe fn borrow_mut<'a, T>(ptr: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    ptr.as_mut().ok_or_else(|| null(what))
}

unsafe fn slice<'a>(ptr: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

unsafe fn write_scores(values: &[f64], out: *mut f64, len: usize) -> Result<(), Failure> {
    if len < values.len() {
        return Err(Failure(
            PsStatus::BufferTooSmall,
            format!("need {} scores, buffer holds {len}", values.len()),
        ));
    }
    if out.is_null() {
        return Err(null("out_scores"));
    }
    std::ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
    Ok(())
}

/// Message of the last failed call on this thread, or NULL after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ps_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Creates an `n × n` matrix with every off-diagonal cell set to `init_value`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn ps_pcm_new(n: usize, init_value: f64, out: *mut *mut PsPcm) -> PsStatus {
    guard(|| {
        let out = borrow_mut(out, "out")?;
        let pcm = Pcm::new(n, init_value)?;
        *out = Box::into_raw(Box::new(PsPcm(pcm)));
        Ok(())
    })
}

/// Creates a matrix from `n * n` row-major counts.
///
/// # Safety
/// `counts` must point to `n * n` readable doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ps_pcm_from_counts(
    n: usize,
    counts: *const f64,
    out: *mut *mut PsPcm,
) -> PsStatus {
    guard(|| {
        let out = borrow_mut(out, "out")?;
        let len = n.checked_mul(n).ok_or_else(|| invalid("dimension overflows"))?;
        let flat = slice(counts, len, "counts")?;
        let rows: Vec<Vec<f64>> = flat.chunks(n.max(1)).map(<[f64]>::to_vec).collect();
        let pcm = Pcm::from_rows(&rows)?;
        *out = Box::into_raw(Box::new(PsPcm(pcm)));
        Ok(())
    })
}

/// Releases a matrix. NULL is ignored.
///
/// # Safety
/// `pcm` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn ps_pcm_free(pcm: *mut PsPcm) {
    if !pcm.is_null() {
        drop(Box::from_raw(pcm));
    }
}

/// # Safety
/// `pcm` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ps_pcm_dimension(pcm: *const PsPcm, out: *mut usize) -> PsStatus {
    guard(|| {
        *borrow_mut(out, "out")? = borrow(pcm, "pcm")?.0.n();
        Ok(())
    })
}

/// Records that `winner` was preferred over `loser`.
///
/// # Safety
/// `pcm` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ps_pcm_record(pcm: *mut PsPcm, winner: usize, loser: usize) -> PsStatus {
    guard(|| {
        let pcm = borrow_mut(pcm, "pcm")?;
        pcm.0.record(Judgment::new(winner, loser)?)?;
        Ok(())
    })
}

/// # Safety
/// `pcm` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ps_pcm_count(
    pcm: *const PsPcm,
    i: usize,
    j: usize,
    out: *mut f64,
) -> PsStatus {
    guard(|| {
        let pcm = &borrow(pcm, "pcm")?.0;
        if i >= pcm.n() || j >= pcm.n() {
            return Err(Error::IndexOutOfRange { index: i.max(j), n: pcm.n() }.into());
        }
        *borrow_mut(out, "out")? = pcm.count(i, j);
        Ok(())
    })
}

/// # Safety
/// `pcm` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ps_pcm_total_comparisons(pcm: *const PsPcm, out: *mut f64) -> PsStatus {
    guard(|| {
        *borrow_mut(out, "out")? = borrow(pcm, "pcm")?.0.total_comparisons();
        Ok(())
    })
}

/// Empirical probability that `i` is preferred over `j`.
///
/// # Safety
/// `pcm` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ps_pcm_preference(
    pcm: *const PsPcm,
    i: usize,
    j: usize,
    out: *mut f64,
) -> PsStatus {
    guard(|| {
        let p = borrow(pcm, "pcm")?.0.preference_probability(i, j)?;
        *borrow_mut(out, "out")? = p;
        Ok(())
    })
}

/// Fits zero-mean quality scores into `out_scores`, which must hold `len >= n`.
///
/// # Safety
/// `pcm` must be a live handle and `out_scores` must hold `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn ps_fit_scores(
    pcm: *const PsPcm,
    scoring: PsScoring,
    out_scores: *mut f64,
    len: usize,
) -> PsStatus {
    guard(|| {
        let pcm = &borrow(pcm, "pcm")?.0;
        let scores = backend(scoring).score(pcm)?;
        write_scores(&scores.values, out_scores, len)
    })
}

fn backend(scoring: PsScoring) -> ScoringBackend {
    match scoring {
        PsScoring::Bt => ScoringBackend::Bt,
        PsScoring::Hodgerank => ScoringBackend::Hodgerank,
    }
}

/// # Safety
/// `x` and `y` must each hold `len` readable doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ps_plcc(x: *const f64, y: *const f64, len: usize, out: *mut f64) -> PsStatus {
    guard(|| {
        *borrow_mut(out, "out")? = pairsim::plcc(slice(x, len, "x")?, slice(y, len, "y")?)?;
        Ok(())
    })
}

/// # Safety
/// `x` and `y` must each hold `len` readable doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ps_srocc(x: *const f64, y: *const f64, len: usize, out: *mut f64) -> PsStatus {
    guard(|| {
        *borrow_mut(out, "out")? = pairsim::srocc(slice(x, len, "x")?, slice(y, len, "y")?)?;
        Ok(())
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ps_fisher_z(r: f64, out: *mut f64) -> PsStatus {
    guard(|| {
        *borrow_mut(out, "out")? = pairsim::fisher_z(r)?;
        Ok(())
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ps_budget_from_fraction(
    fraction: f64,
    n: usize,
    subjects: usize,
    out: *mut usize,
) -> PsStatus {
    guard(|| {
        *borrow_mut(out, "out")? = pairsim::budget_from_fraction(fraction, n, subjects)?;
        Ok(())
    })
}

/// Number of known samplers.
#[no_mangle]
pub extern "C" fn ps_sampler_count() -> u32 {
    SamplerKind::ALL.len() as u32
}

/// Static NUL-terminated name of sampler `index`, or NULL when out of range.
#[no_mangle]
pub extern "C" fn ps_sampler_name(index: u32) -> *const c_char {
    const NAMES: [&CStr; 6] = [
        c"hr-random",
        c"swiss",
        c"crowd-bt",
        c"hr-active",
        c"hybrid-mst",
        c"asap",
    ];
    NAMES
        .get(index as usize)
        .map_or(std::ptr::null(), |s| s.as_ptr())
}

unsafe fn utf8<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if ptr.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| invalid(format!("`{what}` is not valid UTF-8")))
}

/// Runs a budget sweep.
///
/// `samplers` is a comma-separated list of sampler names. `dataset_path` may
/// be NULL, in which case `config.references` synthetic references of
/// `config.n` stimuli are generated from `config.seed`.
///
/// # Safety
/// `config` and `out` must be valid, `samplers` and (when non-NULL)
/// `dataset_path` NUL-terminated, and `fractions` must hold `fraction_count`
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn ps_experiment_run(
    config: *const PsExperimentConfig,
    dataset_path: *const c_char,
    samplers: *const c_char,
    fractions: *const f64,
    fraction_count: usize,
    out: *mut *mut PsReport,
) -> PsStatus {
    guard(|| {
        let c = borrow(config, "config")?;
        let out = borrow_mut(out, "out")?;
        let kinds = utf8(samplers, "samplers")?
            .split(',')
            .map(|s| s.trim().parse::<SamplerKind>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(invalid)?;
        let source = if dataset_path.is_null() {
            DatasetSource::Synthetic { n: c.n, refs: c.references }
        } else {
            DatasetSource::File(PathBuf::from(utf8(dataset_path, "dataset_path")?))
        };
        let cfg = ExperimentConfig {
            source,
            samplers: kinds,
            fractions: slice(fractions, fraction_count, "fractions")?.to_vec(),
            subjects: c.subjects,
            repetitions: c.repetitions,
            seed: c.seed,
            scoring: backend(c.scoring),
            init_value: c.init_value,
            threads: (c.threads > 0).then_some(c.threads),
            ..ExperimentConfig::default()
        };
        let report = pairsim::run_experiment(&cfg)?;
        *out = Box::into_raw(Box::new(PsReport(report)));
        Ok(())
    })
}

/// Releases a report. NULL is ignored.
///
/// # Safety
/// `report` must come from [`ps_experiment_run`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ps_report_free(report: *mut PsReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `report` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ps_report_row_count(report: *const PsReport, out: *mut usize) -> PsStatus {
    guard(|| {
        *borrow_mut(out, "out")? = borrow(report, "report")?.0.rows.len();
        Ok(())
    })
}

/// # Safety
/// `report` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ps_report_row(
    report: *const PsReport,
    index: usize,
    out: *mut PsRow,
) -> PsStatus {
    guard(|| {
        let rows = &borrow(report, "report")?.0.rows;
        let row = rows
            .get(index)
            .ok_or_else(|| invalid(format!("row {index} out of range (rows: {})", rows.len())))?;
        let sampler = SamplerKind::ALL
            .iter()
            .position(|k| *k == row.sampler)
            .unwrap_or_default() as u32;
        *borrow_mut(out, "out")? = PsRow {
            sampler,
            fraction: row.fraction,
            plcc_mean: row.plcc_mean.unwrap_or(f64::NAN),
            plcc_std: row.plcc_std.unwrap_or(f64::NAN),
            srocc_mean: row.srocc_mean.unwrap_or(f64::NAN),
            srocc_std: row.srocc_std.unwrap_or(f64::NAN),
            repetitions: row.repetitions,
            references: row.references,
        };
        Ok(())
    })
}

/// Writes the results CSV, NUL-terminated, into `buf`.
///
/// `out_len` receives the CSV length without the terminator. When `buf` is
/// NULL or too small nothing is copied and `PS_STATUS_BUFFER_TOO_SMALL` is
/// returned, so callers can size the buffer with a first call.
///
/// # Safety
/// `report` must be a live handle, `out_len` writable, and `buf` (when
/// non-NULL) must hold `buf_len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn ps_report_csv(
    report: *const PsReport,
    buf: *mut c_char,
    buf_len: usize,
    out_len: *mut usize,
) -> PsStatus {
    guard(|| {
        let report = &borrow(report, "report")?.0;
        let out_len = borrow_mut(out_len, "out_len")?;
        let csv = ResultsTable::from(report).to_csv()?;
        *out_len = csv.len();
        if buf.is_null() || buf_len <= csv.len() {
            return Err(Failure(
                PsStatus::BufferTooSmall,
                format!("csv needs {} bytes, buffer holds {buf_len}", csv.len() + 1),
            ));
        }
        std::ptr::copy_nonoverlapping(csv.as_ptr(), buf.cast::<u8>(), csv.len());
        *buf.add(csv.len()) = 0;
        Ok(())
    })
}
