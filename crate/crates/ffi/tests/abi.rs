use qmix_ffi::*;
use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

fn model_path(name: &str) -> CString {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models").join(name);
    CString::new(p.to_str().unwrap()).unwrap()
}

fn load(name: &str) -> *mut QmixModel {
    let mut m = ptr::null_mut();
    let status = unsafe { qmix_model_load(model_path(name).as_ptr(), &mut m) };
    assert_eq!(status, QmixStatus::Ok, "{}", last_error());
    assert!(!m.is_null());
    m
}

fn last_error() -> String {
    let p = qmix_last_error();
    if p.is_null() {
        String::new()
    } else {
        unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
    }
}

#[test]
fn depolarizing_qubit_through_the_abi() {
    let m = load("depolarizing_qubit.json");
    unsafe {
        let mut kind = QmixModelKind::Fermion;
        assert_eq!(qmix_model_kind(m, &mut kind), QmixStatus::Ok);
        assert_eq!(kind, QmixModelKind::Spin);
        let mut gap = 0.0;
        assert_eq!(qmix_spectral_gap(m, &mut gap), QmixStatus::Ok);
        assert!((gap - 1.0).abs() < 1e-12);
        assert!(qmix_last_error().is_null());

        let mut sigma = ptr::null_mut();
        assert_eq!(qmix_stationary_state(m, &mut sigma), QmixStatus::Ok);
        let (mut r, mut c) = (0, 0);
        assert_eq!(qmix_matrix_shape(sigma, &mut r, &mut c), QmixStatus::Ok);
        assert_eq!((r, c), (2, 2));
        let mut re = [0.0; 4];
        let mut im = [0.0; 4];
        assert_eq!(qmix_matrix_copy(sigma, re.as_mut_ptr(), im.as_mut_ptr(), 4), QmixStatus::Ok);
        for (x, want) in re.iter().zip([0.5, 0.0, 0.0, 0.5]) {
            assert!((x - want).abs() < 1e-12);
        }
        assert!(im.iter().all(|v| v.abs() < 1e-12));
        assert_eq!(qmix_matrix_copy(sigma, re.as_mut_ptr(), ptr::null_mut(), 3), QmixStatus::InvalidArgument);
        qmix_matrix_free(sigma);

        let mut norm = 0.0;
        assert_eq!(qmix_inverse_norm(m, &mut norm), QmixStatus::Ok);
        assert!((norm - 2.0).abs() < 1e-10);
        qmix_model_free(m);
    }
}

#[test]
fn chi2_constant_on_davies_qubit() {
    let m = load("davies_qubit.json");
    unsafe {
        let mut gap = 0.0;
        assert_eq!(qmix_spectral_gap(m, &mut gap), QmixStatus::Ok);
        for s in [0.0, 0.5, 1.0] {
            let mut lambda = 0.0;
            assert_eq!(qmix_chi2_constant(m, s, &mut lambda), QmixStatus::Ok, "{}", last_error());
            assert!((lambda - gap).abs() < 1e-8 * gap);
        }
        let mut x = 0.0;
        assert_eq!(qmix_chi2_constant(m, 2.0, &mut x), QmixStatus::InvalidArgument);
        qmix_model_free(m);
    }
}

#[test]
fn fermion_models() {
    let m = load("fermion_pair.json");
    unsafe {
        let mut n = 0;
        assert_eq!(qmix_model_sites(m, &mut n), QmixStatus::Ok);
        assert_eq!(n, 2);
        let mut gamma = ptr::null_mut();
        assert_eq!(qmix_stationary_state(m, &mut gamma), QmixStatus::Ok);
        let (mut r, mut c) = (0, 0);
        qmix_matrix_shape(gamma, &mut r, &mut c);
        assert_eq!((r, c), (4, 4));
        let mut re = [0.0; 16];
        assert_eq!(qmix_matrix_copy(gamma, re.as_mut_ptr(), ptr::null_mut(), 16), QmixStatus::Ok);
        for i in 0..4 {
            for j in 0..4 {
                assert!((re[4 * i + j] + re[4 * j + i]).abs() < 1e-12);
            }
        }
        qmix_matrix_free(gamma);

        let (a, b) = ([0usize], [1usize]);
        let mut mi = -1.0;
        assert_eq!(qmix_mutual_information(m, a.as_ptr(), 1, b.as_ptr(), 1, &mut mi), QmixStatus::Ok);
        assert!(mi >= 0.0);
        let mut x = 0.0;
        assert_eq!(qmix_chi2_constant(m, 0.0, &mut x), QmixStatus::Unsupported);
        let far = [7usize];
        assert_eq!(qmix_mutual_information(m, a.as_ptr(), 1, far.as_ptr(), 1, &mut x), QmixStatus::Region);
        qmix_model_free(m);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut m = ptr::null_mut();
        let bad = CString::new("{\"id\": \"x\",\n \"kind\": }").unwrap();
        assert_eq!(qmix_model_parse(bad.as_ptr(), &mut m), QmixStatus::Parse);
        assert!(m.is_null());
        assert!(last_error().contains("line 2"));

        let invalid = CString::new(r#"{"id": "x", "kind": "spin", "lattice": {"extents": [0]}}"#).unwrap();
        assert_eq!(qmix_model_parse(invalid.as_ptr(), &mut m), QmixStatus::Validation);
        assert!(last_error().contains("lattice.extents"));

        assert_eq!(qmix_model_load(model_path("missing.json").as_ptr(), &mut m), QmixStatus::Io);
        assert_eq!(qmix_model_load(ptr::null(), &mut m), QmixStatus::NullPointer);
        let mut gap = 0.0;
        assert_eq!(qmix_spectral_gap(ptr::null(), &mut gap), QmixStatus::NullPointer);

        let d = load("dephasing_qubit.json");
        assert_eq!(qmix_spectral_gap(d, &mut gap), QmixStatus::NotPrimitive);
        assert!(last_error().contains("NotPrimitive"));
        assert_eq!(qmix_spectral_gap(d, ptr::null_mut()), QmixStatus::NotPrimitive);
        qmix_model_free(d);
        qmix_model_free(ptr::null_mut());
        qmix_matrix_free(ptr::null_mut());
    }
    let v = unsafe { CStr::from_ptr(qmix_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <stdlib.h>
#include "qmix.h"

int main(int argc, char **argv) {
    QmixModel *m = NULL;
    if (qmix_model_load(argv[1], &m) != QMIX_STATUS_OK) {
        fprintf(stderr, "%s\n", qmix_last_error());
        return 1;
    }
    double gap = 0.0;
    QmixStatus s = qmix_spectral_gap(m, &gap);
    QmixMatrix *sigma = NULL;
    size_t rows = 0, cols = 0;
    if (s == QMIX_STATUS_OK) s = qmix_stationary_state(m, &sigma);
    if (s == QMIX_STATUS_OK) s = qmix_matrix_shape(sigma, &rows, &cols);
    double *re = (double *)malloc(rows * cols * sizeof(double));
    if (s == QMIX_STATUS_OK) s = qmix_matrix_copy(sigma, re, NULL, rows * cols);
    printf("%d %.12f %zu %.6f\n", (int)s, gap, rows, re[0]);
    free(re);
    qmix_matrix_free(sigma);
    qmix_model_free(m);
    return s == QMIX_STATUS_OK ? 0 : 2;
}
"#;

fn header_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include")
}

#[test]
fn header_compiles_as_c_and_cpp() {
    let dir = std::env::temp_dir().join(format!("qmix-ffi-header-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("main.c");
    std::fs::write(&src, C_PROGRAM).unwrap();
    for (compiler, extra) in [("cc", vec!["-std=c99"]), ("c++", vec!["-x", "c++", "-std=c++17"])] {
        let out = Command::new(compiler)
            .args(&extra)
            .args(["-Wall", "-Werror", "-fsyntax-only", "-I"])
            .arg(header_dir())
            .arg(&src)
            .output()
            .unwrap();
        assert!(out.status.success(), "{compiler}: {}", String::from_utf8_lossy(&out.stderr));
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn c_program_links_against_the_shared_library() {
    // target/<profile>/deps/abi-<hash> sits next to libqmix_ffi.so
    let exe = std::env::current_exe().unwrap();
    let lib_dir = exe.parent().unwrap().parent().unwrap().to_path_buf();
    assert!(lib_dir.join("libqmix_ffi.so").exists(), "missing {}", lib_dir.display());
    let dir = std::env::temp_dir().join(format!("qmix-ffi-link-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("main.c");
    let bin = dir.join("main");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let out = Command::new("cc")
        .args(["-std=c99", "-I"])
        .arg(header_dir())
        .arg(&src)
        .arg("-o")
        .arg(&bin)
        .arg("-L")
        .arg(&lib_dir)
        .args(["-lqmix_ffi", "-Wl,-rpath"])
        .arg(&lib_dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let model = model_path("davies_qubit.json");
    let run = Command::new(&bin).arg(model.to_str().unwrap()).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let fields: Vec<String> = String::from_utf8_lossy(&run.stdout).split_whitespace().map(String::from).collect();
    assert_eq!(fields[0], "0");
    assert!((fields[1].parse::<f64>().unwrap() - 1.127625965).abs() < 1e-8);
    assert_eq!(fields[2], "2");

    let run = Command::new(&bin).arg(model_path("dephasing_qubit.json").to_str().unwrap()).output().unwrap();
    assert_eq!(run.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}
