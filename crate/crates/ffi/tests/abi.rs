use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use symsep_ffi::*;

fn last_error() -> String {
    let p = symsep_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

unsafe fn pure(dims: &[usize], re: &[f64], im: &[f64]) -> *mut SymsepState {
    let mut s = ptr::null_mut();
    let st = symsep_state_pure(dims.as_ptr(), dims.len(), re.as_ptr(), im.as_ptr(), re.len(), &mut s);
    assert_eq!(st, SymsepStatus::Ok);
    s
}

fn werner(p: f64) -> (Vec<f64>, Vec<f64>) {
    // p |Ψ⁻⟩⟨Ψ⁻| + (1 - p) I/4
    let q = (1.0 - p) / 4.0;
    let mut re = vec![0.0; 16];
    for i in 0..4 {
        re[i * 4 + i] = q;
    }
    re[5] += p / 2.0;
    re[10] += p / 2.0;
    re[6] -= p / 2.0;
    re[9] -= p / 2.0;
    (re, vec![0.0; 16])
}

#[test]
fn ghz_concurrence_and_detection() {
    unsafe {
        let mut re = vec![0.0; 8];
        re[0] = 1.0;
        re[7] = 1.0;
        let s = pure(&[2, 2, 2], &re, &[0.0; 8]);
        assert_eq!(symsep_state_dimension(s), 8);
        assert_eq!(symsep_state_is_pure(s), 1);
        let mut c = 0.0;
        assert_eq!(symsep_concurrence(s, &mut c), SymsepStatus::Ok);
        assert!((c - 1.5f64.sqrt()).abs() < 1e-12);
        let mut d = SymsepDetection::default();
        assert_eq!(symsep_detect(s, 100, 3, 0, &mut d), SymsepStatus::Ok);
        assert_eq!(d.entangled, 1);
        assert_eq!(d.first_violation_trial, 1);
        symsep_state_free(s);
    }
}

#[test]
fn werner_oracles() {
    unsafe {
        let (re, im) = werner(0.5);
        let dims = [2usize, 2];
        let mut s = ptr::null_mut();
        assert_eq!(
            symsep_state_mixed(dims.as_ptr(), 2, re.as_ptr(), im.as_ptr(), 4, &mut s),
            SymsepStatus::Ok
        );
        assert_eq!(symsep_state_is_pure(s), 0);
        let mut ppt = SymsepPpt::default();
        assert_eq!(symsep_ppt(s, 2, &mut ppt), SymsepStatus::Ok);
        assert_eq!(ppt.npt, 1);
        assert!((ppt.min_eigenvalue + 0.125).abs() < 1e-12);
        let mut c = 0.0;
        assert_eq!(symsep_wootters(s, &mut c), SymsepStatus::Ok);
        assert!((c - 0.25).abs() < 1e-9);
        let mut d = SymsepDetection::default();
        assert_eq!(symsep_detect(s, 10, 1, 1, &mut d), SymsepStatus::Ok);
        assert_eq!((d.entangled, d.trials_run, d.violations), (1, 10, 10));

        assert_eq!(symsep_concurrence(s, &mut c), SymsepStatus::InvalidArgument);
        assert!(last_error().contains("convex roof"));
        symsep_state_free(s);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let dims = [2usize, 2];
        let mut s = ptr::null_mut();
        let re = [1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, -1.0];
        let st = symsep_state_mixed(dims.as_ptr(), 2, re.as_ptr(), [0.0; 16].as_ptr(), 4, &mut s);
        assert_eq!(st, SymsepStatus::NotDensityMatrix);
        assert!(s.is_null());
        assert!(!last_error().is_empty());

        let st = symsep_state_pure(dims.as_ptr(), 2, [1.0; 3].as_ptr(), [0.0; 3].as_ptr(), 3, &mut s);
        assert_eq!(st, SymsepStatus::InvalidArgument);

        assert_eq!(symsep_concurrence(ptr::null(), &mut 0.0), SymsepStatus::NullPointer);
        let path = CString::new("/nonexistent/state.json").unwrap();
        assert_eq!(symsep_state_load(path.as_ptr(), &mut s), SymsepStatus::Io);
        symsep_state_free(ptr::null_mut());
        assert_eq!(symsep_state_dimension(ptr::null()), 0);

        let ok = pure(&dims, &[1.0, 0.0, 0.0, 0.0], &[0.0; 4]);
        assert_eq!(symsep_ppt(ok, 0, &mut SymsepPpt::default()), SymsepStatus::InvalidArgument);
        symsep_state_free(ok);
        assert!(symsep_last_error().is_null() || !last_error().is_empty());
    }
}

#[test]
fn load_state_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bell.json");
    std::fs::write(
        &path,
        r#"{"format_version":1,"dims":[2,2],"kind":"pure","re":[0.7071067811865476,0,0,0.7071067811865476],"im":[0,0,0,0]}"#,
    )
    .unwrap();
    let c_path = CString::new(path.to_str().unwrap()).unwrap();
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(symsep_state_load(c_path.as_ptr(), &mut s), SymsepStatus::Ok);
        let mut c = 0.0;
        assert_eq!(symsep_concurrence(s, &mut c), SymsepStatus::Ok);
        assert!((c - 1.0).abs() < 1e-12);
        symsep_state_free(s);
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(symsep_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/symsep.h");
    let Ok(out) = Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", header])
        .output()
    else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
