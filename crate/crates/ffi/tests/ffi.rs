use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use coarse_geom_ffi::*;

fn rat(num: i64, den: i64) -> CgRational {
    CgRational { num, den }
}

fn last_error() -> String {
    let p = cg_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn take_string(p: *mut std::ffi::c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned();
    unsafe { cg_string_free(p) };
    s
}

struct Space(*mut CgSpace);

impl Drop for Space {
    fn drop(&mut self) {
        unsafe { cg_space_free(self.0) };
    }
}

fn circle(r: i64, n: usize) -> Space {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { cg_space_circle(rat(r, 1), n, &mut s) }, CgStatus::Ok);
    Space(s)
}

#[test]
fn circle_distances_and_rips_counts() {
    let c = circle(9, 9);
    assert_eq!(unsafe { cg_space_len(c.0) }, 9);
    let mut d = rat(0, 1);
    assert_eq!(unsafe { cg_space_distance(c.0, 0, 4, &mut d) }, CgStatus::Ok);
    assert_eq!(d, rat(4, 1));
    let (mut e, mut t) = (0, 0);
    assert_eq!(unsafe { cg_rips_counts(c.0, rat(1, 1), &mut e, &mut t) }, CgStatus::Ok);
    assert_eq!((e, t), (9, 0));
    assert_eq!(unsafe { cg_space_distance(c.0, 0, 40, &mut d) }, CgStatus::InvalidInput);
    assert!(last_error().contains("out of range"));
}

#[test]
fn contraction_and_winding() {
    let c = circle(10, 10);
    let lp: Vec<usize> = (0..10).chain([0]).collect();
    let mut outcome = CgContraction::Inconclusive;
    let mut json = ptr::null_mut();
    let st = unsafe { cg_contract_loop(c.0, lp.as_ptr(), lp.len(), rat(3, 1), 0, &mut outcome, &mut json) };
    assert_eq!(st, CgStatus::Ok);
    assert_eq!(outcome, CgContraction::Impossible);
    assert!(take_string(json).contains("winding"));
    let mut w = 0;
    assert_eq!(unsafe { cg_winding(c.0, lp.as_ptr(), lp.len(), rat(3, 1), &mut w) }, CgStatus::Ok);
    assert_eq!(w.abs(), 1);
    assert_eq!(
        unsafe { cg_winding(c.0, lp.as_ptr(), lp.len(), rat(4, 1), &mut w) },
        CgStatus::CertificateUnavailable
    );

    let c9 = circle(9, 9);
    let lp: Vec<usize> = (0..9).chain([0]).collect();
    let st = unsafe { cg_contract_loop(c9.0, lp.as_ptr(), lp.len(), rat(3, 1), 0, &mut outcome, ptr::null_mut()) };
    assert_eq!(st, CgStatus::Ok);
    assert_eq!(outcome, CgContraction::Contracted);
}

#[test]
fn windows_and_json() {
    let fam = CString::new("free-abelian:2").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { cg_space_window(fam.as_ptr(), ptr::null(), 3, &mut s) }, CgStatus::Ok);
    let w = Space(s);
    assert_eq!(unsafe { cg_space_len(w.0) }, 25);
    let label = CString::new("(1,-2)").unwrap();
    let mut i = 0;
    assert_eq!(unsafe { cg_space_index_of(w.0, label.as_ptr(), &mut i) }, CgStatus::Ok);
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { cg_space_to_json(w.0, &mut json) }, CgStatus::Ok);
    let text = CString::new(take_string(json)).unwrap();
    let mut back = ptr::null_mut();
    assert_eq!(unsafe { cg_space_from_json(text.as_ptr(), &mut back) }, CgStatus::Ok);
    let back = Space(back);
    let (mut a, mut b) = (rat(0, 1), rat(0, 1));
    unsafe {
        cg_space_distance(w.0, 0, i, &mut a);
        cg_space_distance(back.0, 0, i, &mut b);
    }
    assert_eq!(a, b);

    let bad = CString::new("no-such-group").unwrap();
    assert_eq!(unsafe { cg_space_window(bad.as_ptr(), ptr::null(), 3, &mut s) }, CgStatus::InvalidInput);
    let huge = CString::new("free:3").unwrap();
    assert_eq!(unsafe { cg_space_window(huge.as_ptr(), ptr::null(), 40, &mut s) }, CgStatus::ResourceCap);
}

#[test]
fn transfer_and_factorial() {
    let k = CgQiConstants { a: rat(2, 1), b: rat(1, 1), alpha: rat(2, 1), beta: rat(1, 1), c: rat(3, 1), gamma: rat(0, 1) };
    let mut t = CgTransfer { r_prime: rat(0, 1), rho_prime: rat(0, 1), pushed_scale: rat(0, 1) };
    assert_eq!(unsafe { cg_qi_transfer(&k, rat(4, 1), rat(9, 1), rat(4, 1), &mut t) }, CgStatus::Ok);
    assert_eq!(t.r_prime, rat(9, 1));
    assert_eq!(t.rho_prime, rat(22, 1));
    assert_eq!(t.pushed_scale, rat(9, 1));
    assert_eq!(unsafe { cg_qi_transfer(&k, rat(1, 0), rat(9, 1), rat(4, 1), &mut t) }, CgStatus::InvalidInput);

    let mut has = false;
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { cg_factorial_certificate(3, 4, &mut has, &mut json) }, CgStatus::Ok);
    assert!(!has);
    assert!(take_string(json).contains("relation_basis"));
    assert_eq!(unsafe { cg_factorial_certificate(5, 3, &mut has, ptr::null_mut()) }, CgStatus::Ok);
}

#[test]
fn null_pointers_are_reported() {
    let mut d = rat(0, 1);
    assert_eq!(unsafe { cg_space_distance(ptr::null(), 0, 0, &mut d) }, CgStatus::NullPointer);
    assert_eq!(unsafe { cg_space_len(ptr::null()) }, 0);
    let c = circle(6, 6);
    assert_eq!(unsafe { cg_space_distance(c.0, 0, 1, ptr::null_mut()) }, CgStatus::NullPointer);
    unsafe {
        cg_space_free(ptr::null_mut());
        cg_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/coarse_geom.h")).unwrap();
    for name in ["cg_space_circle", "cg_contract_loop", "cg_qi_transfer", "cg_last_error", "CG_STATUS_RESOURCE_CAP"] {
        assert!(header.contains(name), "{name}");
    }
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include "coarse_geom.h"

int main(void) {
    CgSpace *c = NULL;
    CgRational r = {10, 1};
    if (cg_space_circle(r, 10, &c) != CG_STATUS_OK) return 1;
    size_t loop[11] = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 0};
    CgRational scale = {3, 1};
    CgContraction outcome;
    if (cg_contract_loop(c, loop, 11, scale, 0, &outcome, NULL) != CG_STATUS_OK) return 2;
    int64_t w = 0;
    if (cg_winding(c, loop, 11, scale, &w) != CG_STATUS_OK) return 3;
    CgRational d;
    CgStatus bad = cg_space_distance(c, 0, 99, &d);
    printf("%d %lld %d %s\n", (int)outcome, (long long)w, (int)bad, cg_last_error() ? "msg" : "none");
    cg_space_free(c);
    return 0;
}
"#;

/// Compiles a C program against the header and the static library.
#[test]
fn c_program_links_against_the_static_library() {
    let Some(cc) = ["cc", "gcc", "clang"].into_iter().find(|c| Command::new(c).arg("--version").output().is_ok()) else {
        eprintln!("no C compiler; skipping");
        return;
    };
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|p| p.parent()).unwrap();
    let lib = profile_dir.join("libcoarse_geom_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipping", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let bin = dir.path().join("smoke");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new(cc)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let fields: Vec<&str> = text.split_whitespace().collect();
    assert_eq!(fields[0], "1");
    assert_eq!(fields[1].trim_start_matches('-'), "1");
    assert_eq!(fields[2], "1");
    assert_eq!(fields[3], "msg");
}
