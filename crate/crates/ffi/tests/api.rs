use std::ffi::{c_char, CStr};
use std::ptr;

use pairsim_ffi::*;

fn last_error() -> String {
    let p = ps_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn new_pcm(n: usize, init: f64) -> *mut PsPcm {
    let mut pcm = ptr::null_mut();
    assert_eq!(unsafe { ps_pcm_new(n, init, &mut pcm) }, PsStatus::Ok);
    pcm
}

#[test]
fn matrix_accounting() {
    unsafe {
        let pcm = new_pcm(3, 1.0);
        let mut total = 0.0;
        assert_eq!(ps_pcm_total_comparisons(pcm, &mut total), PsStatus::Ok);
        assert_eq!(total, 3.0);
        assert_eq!(ps_pcm_record(pcm, 0, 2), PsStatus::Ok);
        assert_eq!(ps_pcm_record(pcm, 0, 2), PsStatus::Ok);
        let (mut c, mut p) = (0.0, 0.0);
        assert_eq!(ps_pcm_count(pcm, 0, 2, &mut c), PsStatus::Ok);
        assert_eq!(c, 3.0);
        assert_eq!(ps_pcm_preference(pcm, 0, 2, &mut p), PsStatus::Ok);
        assert_eq!(p, 0.75);
        ps_pcm_total_comparisons(pcm, &mut total);
        assert_eq!(total, 5.0);
        let mut n = 0;
        assert_eq!(ps_pcm_dimension(pcm, &mut n), PsStatus::Ok);
        assert_eq!(n, 3);
        ps_pcm_free(pcm);
    }
}

#[test]
fn errors_set_status_and_message() {
    unsafe {
        let mut pcm = ptr::null_mut();
        assert_eq!(ps_pcm_new(1, 1.0, &mut pcm), PsStatus::InvalidArgument);
        assert!(pcm.is_null());
        assert!(!last_error().is_empty());

        let pcm = new_pcm(2, 1.0);
        assert!(ps_last_error().is_null());
        assert_eq!(ps_pcm_record(pcm, 1, 1), PsStatus::InvalidArgument);
        let mut c = 0.0;
        assert_eq!(ps_pcm_count(pcm, 0, 5, &mut c), PsStatus::InvalidArgument);
        assert!(last_error().contains('5'));
        assert_eq!(ps_pcm_count(pcm, 0, 1, ptr::null_mut()), PsStatus::NullPointer);
        assert_eq!(ps_pcm_record(ptr::null_mut(), 0, 1), PsStatus::NullPointer);
        ps_pcm_free(pcm);

        let zero = new_pcm(3, 0.0);
        let mut p = 0.0;
        assert_eq!(ps_pcm_preference(zero, 0, 1, &mut p), PsStatus::UndefinedValue);
        let mut scores = [0.0; 3];
        assert_eq!(ps_fit_scores(zero, PsScoring::Bt, scores.as_mut_ptr(), 3), PsStatus::IllPosed);
        ps_pcm_free(zero);
        ps_pcm_free(ptr::null_mut());
    }
}

#[test]
fn fitting_into_caller_buffers() {
    let counts = [0.0, 3.0, 1.0, 0.0];
    unsafe {
        let mut pcm = ptr::null_mut();
        assert_eq!(ps_pcm_from_counts(2, counts.as_ptr(), &mut pcm), PsStatus::Ok);
        let mut s = [0.0; 2];
        assert_eq!(ps_fit_scores(pcm, PsScoring::Bt, s.as_mut_ptr(), 2), PsStatus::Ok);
        assert!((s[0] - s[1] - 3f64.ln()).abs() < 1e-6);
        assert_eq!(ps_fit_scores(pcm, PsScoring::Hodgerank, s.as_mut_ptr(), 2), PsStatus::Ok);
        assert!((s[0] - s[1] - 0.5).abs() < 1e-9);
        assert_eq!(
            ps_fit_scores(pcm, PsScoring::Bt, s.as_mut_ptr(), 1),
            PsStatus::BufferTooSmall
        );
        ps_pcm_free(pcm);

        let bad = [0.0, -1.0, 1.0, 0.0];
        let mut out = ptr::null_mut();
        assert_eq!(ps_pcm_from_counts(2, bad.as_ptr(), &mut out), PsStatus::InvalidArgument);
        assert!(out.is_null());
    }
}

#[test]
fn metrics() {
    let x = [1.0, 2.0, 3.0];
    let y = [1.0, 2.0, 4.0];
    let (mut r, mut s, mut z) = (0.0, 0.0, 0.0);
    unsafe {
        assert_eq!(ps_plcc(x.as_ptr(), y.as_ptr(), 3, &mut r), PsStatus::Ok);
        assert!((r - 0.98198).abs() < 1e-5);
        assert_eq!(ps_srocc(x.as_ptr(), y.as_ptr(), 3, &mut s), PsStatus::Ok);
        assert_eq!(s, 1.0);
        assert_eq!(ps_fisher_z(0.5, &mut z), PsStatus::Ok);
        assert!((z - 0.549306).abs() < 1e-6);
        assert_eq!(ps_fisher_z(1.5, &mut z), PsStatus::InvalidArgument);
        let flat = [2.0, 2.0, 2.0];
        assert_eq!(ps_plcc(flat.as_ptr(), y.as_ptr(), 3, &mut r), PsStatus::UndefinedValue);
        let mut b = 0;
        assert_eq!(ps_budget_from_fraction(0.1, 10, 15, &mut b), PsStatus::Ok);
        assert_eq!(b, 68);
    }
}

#[test]
fn sampler_names() {
    assert_eq!(ps_sampler_count(), 6);
    let names: Vec<String> = (0..ps_sampler_count())
        .map(|i| unsafe { CStr::from_ptr(ps_sampler_name(i)) }.to_string_lossy().into_owned())
        .collect();
    assert_eq!(names, ["hr-random", "swiss", "crowd-bt", "hr-active", "hybrid-mst", "asap"]);
    assert!(ps_sampler_name(6).is_null());
}

fn config(threads: usize) -> PsExperimentConfig {
    PsExperimentConfig {
        n: 8,
        references: 1,
        repetitions: 5,
        subjects: 15,
        seed: 3,
        scoring: PsScoring::Bt,
        init_value: 1.0,
        threads,
    }
}

unsafe fn run(cfg: &PsExperimentConfig, samplers: &CStr, fractions: &[f64]) -> *mut PsReport {
    let mut report = ptr::null_mut();
    let status = ps_experiment_run(
        cfg,
        ptr::null(),
        samplers.as_ptr(),
        fractions.as_ptr(),
        fractions.len(),
        &mut report,
    );
    assert_eq!(status, PsStatus::Ok, "{}", last_error());
    report
}

unsafe fn csv(report: *const PsReport) -> String {
    let mut len = 0;
    assert_eq!(ps_report_csv(report, ptr::null_mut(), 0, &mut len), PsStatus::BufferTooSmall);
    let mut buf = vec![0 as c_char; len + 1];
    assert_eq!(ps_report_csv(report, buf.as_mut_ptr(), buf.len(), &mut len), PsStatus::Ok);
    CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
}

#[test]
fn experiment_rows_and_csv() {
    unsafe {
        let report = run(&config(0), c"hr-random, asap", &[0.2, 1.0]);
        let mut rows = 0;
        assert_eq!(ps_report_row_count(report, &mut rows), PsStatus::Ok);
        assert_eq!(rows, 4);
        let mut row = std::mem::zeroed::<PsRow>();
        assert_eq!(ps_report_row(report, 3, &mut row), PsStatus::Ok);
        assert_eq!(row.sampler, 5);
        assert_eq!(row.fraction, 1.0);
        assert_eq!(row.repetitions, 5);
        assert!(row.plcc_mean > 0.5 && row.plcc_mean <= 1.0);
        assert_eq!(ps_report_row(report, 4, &mut row), PsStatus::InvalidArgument);

        let text = csv(report);
        assert!(text.starts_with("dataset,sampler,budget_fraction,"));
        assert_eq!(text.lines().count(), 5);

        let again = run(&config(2), c"hr-random,asap", &[0.2, 1.0]);
        assert_eq!(csv(again), text);
        ps_report_free(report);
        ps_report_free(again);
    }
}

#[test]
fn experiment_argument_errors() {
    unsafe {
        let mut report = ptr::null_mut();
        let fractions = [0.5];
        let status = ps_experiment_run(
            &config(0),
            ptr::null(),
            c"quicksort".as_ptr(),
            fractions.as_ptr(),
            1,
            &mut report,
        );
        assert_eq!(status, PsStatus::InvalidArgument);
        assert!(last_error().contains("quicksort"));

        let status = ps_experiment_run(
            &config(0),
            c"/nonexistent/data.json".as_ptr(),
            c"swiss".as_ptr(),
            fractions.as_ptr(),
            1,
            &mut report,
        );
        assert_eq!(status, PsStatus::Io);
        assert!(report.is_null());
    }
}
