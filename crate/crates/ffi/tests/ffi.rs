use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use regcount_ffi::*;

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    rc_string_free(s);
    out
}

fn last_error() -> Option<String> {
    let p = rc_last_error_message();
    (!p.is_null()).then(|| unsafe { take(p) })
}

#[test]
fn polynomial_of_a_cycle() {
    unsafe {
        let edges = [0usize, 1, 1, 2, 2, 3, 3, 0];
        let mut g = ptr::null_mut();
        assert_eq!(rc_graph_new(4, edges.as_ptr(), 4, &mut g), RcStatus::Ok);
        assert_eq!(rc_graph_vertex_count(g), 4);
        assert_eq!(rc_graph_edge_count(g), 4);
        let mut p = ptr::null_mut();
        assert_eq!(rc_count_polynomial(g, RcKind::IndependentSet, &mut p), RcStatus::Ok);
        assert_eq!(rc_poly_len(p), 3);
        let mut c = 0u64;
        assert_eq!(rc_poly_coefficient_u64(p, 1, &mut c), RcStatus::Ok);
        assert_eq!(c, 4);
        assert_eq!(rc_poly_coefficient_u64(p, 9, &mut c), RcStatus::Ok);
        assert_eq!(c, 0);
        let mut s = ptr::null_mut();
        assert_eq!(rc_poly_to_json(p, &mut s), RcStatus::Ok);
        assert_eq!(take(s), r#"["1","4","2"]"#);
        rc_poly_free(p);
        rc_graph_free(g);
    }
}

#[test]
fn text_round_trip_and_label() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(rc_graph_kdd(3, &mut g), RcStatus::Ok);
        let mut text = ptr::null_mut();
        assert_eq!(rc_graph_to_text(g, &mut text), RcStatus::Ok);
        let text = CString::new(take(text)).unwrap();
        let mut h = ptr::null_mut();
        assert_eq!(rc_graph_parse(text.as_ptr(), &mut h), RcStatus::Ok);
        let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(rc_graph_canonical_label(g, &mut a), RcStatus::Ok);
        assert_eq!(rc_graph_canonical_label(h, &mut b), RcStatus::Ok);
        assert_eq!(take(a), take(b));
        rc_graph_free(g);
        rc_graph_free(h);
    }
}

/// Six disjoint copies of K10; coefficient 22 exceeds 64 bits.
#[test]
fn large_coefficients_as_strings() {
    let mut edges = Vec::new();
    for copy in 0..6 {
        for u in 0..10 {
            for v in u + 1..10 {
                edges.extend([10 * copy + u, 10 * copy + v]);
            }
        }
    }
    // m_k(K10) = C(10, 2k)·(2k − 1)!!, raised to the sixth power by convolution
    let k10: [u128; 6] = [1, 45, 630, 3150, 4725, 945];
    let mut want = vec![1u128];
    for _ in 0..6 {
        let mut next = vec![0u128; want.len() + k10.len() - 1];
        for (i, a) in want.iter().enumerate() {
            for (j, b) in k10.iter().enumerate() {
                next[i + j] += a * b;
            }
        }
        want = next;
    }
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(rc_graph_new(60, edges.as_ptr(), edges.len() / 2, &mut g), RcStatus::Ok);
        let mut p = ptr::null_mut();
        assert_eq!(rc_count_polynomial(g, RcKind::Matching, &mut p), RcStatus::Ok);
        assert_eq!(rc_poly_len(p), 31);
        let mut c = 0u64;
        assert_eq!(rc_poly_coefficient_u64(p, 22, &mut c), RcStatus::TooLarge);
        for (k, w) in want.iter().enumerate() {
            let mut s = ptr::null_mut();
            assert_eq!(rc_poly_coefficient(p, k, &mut s), RcStatus::Ok);
            assert_eq!(take(s), w.to_string(), "k = {k}");
        }
        rc_poly_free(p);
        rc_graph_free(g);
    }
}

#[test]
fn generation_and_lists() {
    unsafe {
        let mut list = ptr::null_mut();
        assert_eq!(rc_generate(10, 3, false, &mut list), RcStatus::Ok);
        assert_eq!(rc_graph_list_len(list), 21);
        let mut g = ptr::null_mut();
        assert_eq!(rc_graph_list_get(list, 20, &mut g), RcStatus::Ok);
        assert_eq!(rc_graph_edge_count(g), 15);
        rc_graph_free(g);
        assert_eq!(rc_graph_list_get(list, 21, &mut g), RcStatus::OutOfRange);
        rc_graph_list_free(list);

        let text = CString::new("2 1 0\n0 1\n---\n3 0 0\n").unwrap();
        assert_eq!(rc_graph_list_parse(text.as_ptr(), &mut list), RcStatus::Ok);
        assert_eq!(rc_graph_list_len(list), 2);
        rc_graph_list_free(list);
    }
}

#[test]
fn verification_summaries() {
    unsafe {
        let mut summary = RcSummary::default();
        assert_eq!(rc_verify(RcCheck::Umc, 8, 2, RcFormat::Json, ptr::null_mut(), &mut summary), RcStatus::Ok);
        assert_eq!(summary, RcSummary { records: 15, failed: 0 });
        let mut report = ptr::null_mut();
        assert_eq!(rc_verify(RcCheck::Roots, 6, 3, RcFormat::Csv, &mut report, &mut summary), RcStatus::Ok);
        assert_eq!(summary, RcSummary { records: 2, failed: 0 });
        assert!(take(report).contains("real-rooted"));
        assert_eq!(rc_bounds_report(8, 2, 2, RcFormat::Json, &mut report), RcStatus::Ok);
        assert!(take(report).contains("m(DK)=20"));
    }
}

#[test]
fn error_codes_and_messages() {
    unsafe {
        let mut g = ptr::null_mut();
        let loops = [0usize, 0];
        assert_eq!(rc_graph_new(2, loops.as_ptr(), 1, &mut g), RcStatus::InvalidGraph);
        assert!(last_error().unwrap().contains("loop"));
        assert_eq!(rc_graph_new(2, ptr::null(), 1, &mut g), RcStatus::NullPointer);
        assert_eq!(rc_graph_new(2, ptr::null(), 0, ptr::null_mut()), RcStatus::NullPointer);
        assert_eq!(rc_graph_new(2, ptr::null(), 0, &mut g), RcStatus::Ok);
        assert!(last_error().is_none());
        rc_graph_free(g);

        let bad = CString::new("3 1 0\n0 7\n").unwrap();
        assert_eq!(rc_graph_parse(bad.as_ptr(), &mut g), RcStatus::InvalidGraph);
        let bad = CString::new("three").unwrap();
        assert_eq!(rc_graph_parse(bad.as_ptr(), &mut g), RcStatus::Parse);

        let mut list = ptr::null_mut();
        assert_eq!(rc_generate(7, 3, false, &mut list), RcStatus::Parity);
        assert_eq!(rc_generate(30, 3, false, &mut list), RcStatus::Scale);
        assert!(last_error().unwrap().contains("scale"));
        assert_eq!(rc_graph_dk(6, 2, &mut g), RcStatus::Divisibility);
        let mut summary = RcSummary::default();
        assert_eq!(rc_verify(RcCheck::Kahn, 6, 2, RcFormat::Json, ptr::null_mut(), &mut summary), RcStatus::Divisibility);

        rc_graph_free(ptr::null_mut());
        rc_poly_free(ptr::null_mut());
        rc_graph_list_free(ptr::null_mut());
        rc_string_free(ptr::null_mut());
        assert_eq!(rc_graph_vertex_count(ptr::null()), 0);
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(rc_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/regcount.h")
}

#[test]
fn header_declares_the_api() {
    let text = std::fs::read_to_string(header()).unwrap();
    for name in [
        "rc_graph_new",
        "rc_count_polynomial",
        "rc_generate",
        "rc_verify",
        "rc_bounds_report",
        "rc_last_error_message",
        "typedef struct RcGraph RcGraph",
        "RC_STATUS_DIVISIBILITY = 5",
    ] {
        assert!(text.contains(name), "{name}");
    }
}

/// Compiles a C program against the header and the static library.
#[test]
fn c_program_links_and_runs() {
    let deps = std::env::current_exe().unwrap().parent().unwrap().to_path_buf();
    let lib = deps.parent().unwrap().join("libregcount_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(cc)
        .arg(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/smoke.c"))
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), format!("ok {}", env!("CARGO_PKG_VERSION")));
}
