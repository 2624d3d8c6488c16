use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use moufkit_ffi::*;

fn fixture_handle(name: &str) -> *mut MkLoop {
    let name = CString::new(name).unwrap();
    let mut q = ptr::null_mut();
    let s = unsafe { mk_loop_fixture(name.as_ptr(), &mut q) };
    assert_eq!(s, MkStatus::Ok);
    q
}

fn last_error() -> String {
    let p = mk_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn table_round_trip() {
    let table: Vec<usize> = (0..3).flat_map(|a| (0..3).map(move |b| (a + b) % 3)).collect();
    let mut q = ptr::null_mut();
    unsafe {
        assert_eq!(mk_loop_from_table(table.as_ptr(), 3, &mut q), MkStatus::Ok);
        assert_eq!(mk_loop_order(q), 3);
        let mut p = 0;
        assert_eq!(mk_loop_mul(q, 2, 2, &mut p), MkStatus::Ok);
        assert_eq!(p, 1);

        let mut text = ptr::null_mut();
        assert_eq!(mk_loop_serialize(q, &mut text), MkStatus::Ok);
        assert_eq!(CStr::from_ptr(text).to_str().unwrap(), "3\n0 1 2\n1 2 0\n2 0 1\n");

        let mut q2 = ptr::null_mut();
        assert_eq!(mk_loop_parse(text, &mut q2), MkStatus::Ok);
        assert_eq!(mk_loop_order(q2), 3);
        mk_string_free(text);
        mk_loop_free(q2);
        mk_loop_free(q);
    }
}

#[test]
fn error_codes() {
    let bad = [0usize, 1, 1, 1];
    let mut q = ptr::null_mut();
    unsafe {
        assert_eq!(mk_loop_from_table(bad.as_ptr(), 2, &mut q), MkStatus::InvalidLoop);
        assert!(last_error().contains("latin"));
        assert!(q.is_null());

        let text = CString::new("2\n0 1\n1 0").unwrap();
        assert_eq!(mk_loop_parse(text.as_ptr(), &mut q), MkStatus::Parse);

        let name = CString::new("no-such-loop").unwrap();
        assert_eq!(mk_loop_fixture(name.as_ptr(), &mut q), MkStatus::Domain);

        assert_eq!(mk_loop_parse(ptr::null(), &mut q), MkStatus::NullArgument);
        let mut out = 0;
        assert_eq!(mk_loop_mul(ptr::null(), 0, 0, &mut out), MkStatus::NullArgument);
        assert_eq!(mk_loop_order(ptr::null()), 0);

        let c3 = fixture_handle("cyclic:3");
        assert_eq!(mk_loop_mul(c3, 0, 3, &mut out), MkStatus::Domain);
        mk_loop_free(c3);
    }
}

#[test]
fn identity_check_with_witness() {
    let s3 = fixture_handle("symmetric:3");
    let scheme = CString::new("commutative").unwrap();
    let mut holds = true;
    let mut w = [usize::MAX; 4];
    let mut wlen = 0;
    unsafe {
        let s = mk_loop_satisfies_identity(s3, scheme.as_ptr(), &mut holds, w.as_mut_ptr(), 4, &mut wlen);
        assert_eq!(s, MkStatus::Ok);
        assert!(!holds);
        assert_eq!(wlen, 2);
        assert_ne!(mk_loop_mul_checked(s3, w[0], w[1]), mk_loop_mul_checked(s3, w[1], w[0]));

        let unknown = CString::new("nonsense").unwrap();
        let s = mk_loop_satisfies_identity(s3, unknown.as_ptr(), &mut holds, ptr::null_mut(), 0, ptr::null_mut());
        assert_eq!(s, MkStatus::Domain);
        mk_loop_free(s3);
    }
}

unsafe fn mk_loop_mul_checked(q: *const MkLoop, a: usize, b: usize) -> usize {
    let mut out = 0;
    assert_eq!(mk_loop_mul(q, a, b, &mut out), MkStatus::Ok);
    out
}

#[test]
fn commutator_buffer_protocol() {
    let s3 = fixture_handle("symmetric:3");
    let all: Vec<usize> = (0..6).collect();
    let mut len = 0;
    let mut buf = [0usize; 3];
    unsafe {
        let s = mk_commutator(s3, all.as_ptr(), 6, all.as_ptr(), 6, buf.as_mut_ptr(), 1, &mut len);
        assert_eq!(s, MkStatus::BufferTooSmall);
        assert_eq!(len, 3);
        let s = mk_commutator(s3, all.as_ptr(), 6, all.as_ptr(), 6, buf.as_mut_ptr(), 3, &mut len);
        assert_eq!(s, MkStatus::Ok);
        assert_eq!(buf[0], 0);

        let mut solvable = false;
        assert_eq!(mk_congruence_solvable(s3, 0, &mut solvable), MkStatus::Ok);
        assert!(solvable);
        assert_eq!(mk_congruence_solvable(s3, 4, &mut solvable), MkStatus::CapExceeded);
        mk_loop_free(s3);
    }
}

#[test]
fn analyze_matches_library() {
    let q = fixture_handle("quaternion8");
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(mk_loop_analyze_json(q, ptr::null(), 0, 0, 0, &mut out), MkStatus::Ok);
        let json = CStr::from_ptr(out).to_str().unwrap().to_string();
        mk_string_free(out);
        mk_loop_free(q);
        let lib = moufkit::report::to_json(&moufkit::report::analyze(
            &moufkit::fixtures::fixture("quaternion8").unwrap(),
            "",
            &Default::default(),
        ));
        assert_eq!(json, lib);
    }
}

#[test]
fn header_declares_every_export() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/moufkit.h")).unwrap();
    let src = std::fs::read_to_string(dir.join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert_eq!(exports.len(), 13);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
}

#[test]
fn header_compiles_as_c() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let Ok(status) = Command::new("cc")
        .args(["-fsyntax-only", "-std=c99", "-Wall", "-Werror", "-x", "c"])
        .arg(dir.join("include/moufkit.h"))
        .status()
    else {
        eprintln!("cc not available; skipping");
        return;
    };
    assert!(status.success());
}
