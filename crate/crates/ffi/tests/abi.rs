use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use ordsum_ffi::*;

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    ordsum_string_free(s);
    out
}

unsafe fn last_error() -> String {
    CStr::from_ptr(ordsum_last_error()).to_str().unwrap().to_string()
}

#[test]
fn g_and_decomposition() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(ordsum_g_direct(2, 3, &mut s), OrdsumStatus::Ok);
        assert_eq!(take(s), "2");
        assert!(ordsum_last_error().is_null());

        let alpha = CString::new("2").unwrap();
        assert_eq!(
            ordsum_decompose_json(2, 100, alpha.as_ptr(), ptr::null(), &mut s),
            OrdsumStatus::Ok
        );
        let r: ordsum::gsum::DecompositionReport = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(r.g_exact.0, ordsum::gsum::g_direct(2, 100).unwrap());
        r.check_invariants().unwrap();
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(ordsum_g_direct(1, 10, &mut s), OrdsumStatus::Domain);
        assert!(s.is_null());
        assert!(last_error().contains("base"));
        assert_eq!(ordsum_g_direct(2, 10, ptr::null_mut()), OrdsumStatus::NullPointer);

        let bad = CString::new("3").unwrap();
        assert_eq!(
            ordsum_decompose_json(2, 100, bad.as_ptr(), ptr::null(), &mut s),
            OrdsumStatus::Domain
        );
        let junk = CString::new("x/y").unwrap();
        assert_eq!(
            ordsum_decompose_json(2, 100, junk.as_ptr(), ptr::null(), &mut s),
            OrdsumStatus::Domain
        );

        let mut k = ptr::null_mut();
        assert_eq!(ordsum_field_new(12, &mut k), OrdsumStatus::Domain);
        assert!(k.is_null());
        let mut v = 0;
        assert_eq!(ordsum_field_disc(ptr::null(), &mut v), OrdsumStatus::NullPointer);
        ordsum_field_free(ptr::null_mut());
        ordsum_string_free(ptr::null_mut());
    }
}

#[test]
fn field_handle() {
    unsafe {
        let mut k = ptr::null_mut();
        assert_eq!(ordsum_field_new(5, &mut k), OrdsumStatus::Ok);
        let mut disc = 0;
        assert_eq!(ordsum_field_disc(k, &mut disc), OrdsumStatus::Ok);
        assert_eq!(disc, 5);
        let (mut u, mut v, mut n) = (ptr::null_mut(), ptr::null_mut(), 0i8);
        assert_eq!(ordsum_field_unit(k, &mut u, &mut v, &mut n), OrdsumStatus::Ok);
        assert_eq!((take(u), take(v), n), ("0".to_string(), "1".to_string(), -1));

        let mut s = ptr::null_mut();
        assert_eq!(ordsum_pk_direct(k, 100, &mut s), OrdsumStatus::Ok);
        assert_eq!(
            take(s),
            ordsum::exact::format_rational(&ordsum::oracle::pk_oracle(5, 100).unwrap())
        );
        let alpha = CString::new("5/2").unwrap();
        let beta = CString::new("1/3").unwrap();
        assert_eq!(
            ordsum_pk_decompose_json(k, 500, alpha.as_ptr(), beta.as_ptr(), &mut s),
            OrdsumStatus::Ok
        );
        let r: ordsum::classcount::PkReport = serde_json::from_str(&take(s)).unwrap();
        r.check_invariants().unwrap();

        let (mut total, mut delta, mut jk) = (0, 0, 0);
        assert_eq!(ordsum_hnar_sum(k, 100, 0, &mut total), OrdsumStatus::Ok);
        assert_eq!(ordsum_delta_quadratic(k, 100, 1, &mut delta), OrdsumStatus::Ok);
        assert!(delta <= total);
        assert_eq!(ordsum_jk_sum(k, 1, &mut jk), OrdsumStatus::Ok);
        assert_eq!(jk, 0);
        ordsum_field_free(k);

        let mut d = 0;
        assert_eq!(ordsum_delta_rationals(10, &mut d), OrdsumStatus::Ok);
        assert_eq!(d, 17);
    }
}

#[test]
fn lemma_verdict() {
    unsafe {
        let (x, y) = (CString::new("21/2").unwrap(), CString::new("5/2").unwrap());
        let mut v = OrdsumVerdict::Undecided;
        assert_eq!(
            ordsum_check_lemma1(x.as_ptr(), y.as_ptr(), 128, &mut v),
            OrdsumStatus::Ok
        );
        assert_eq!(v, OrdsumVerdict::Holds);
        let version = CStr::from_ptr(ordsum_version()).to_str().unwrap();
        assert_eq!(version, env!("CARGO_PKG_VERSION"));
    }
}

#[test]
fn c_program_links_against_header() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    // target/<profile>/deps/<test> -> target/<profile>
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libordsum_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() || !lib.exists() {
        eprintln!("skipping: no C compiler or static library");
        return;
    }
    let out = std::env::temp_dir().join(format!("ordsum-smoke-{}", std::process::id()));
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success(), "C smoke program failed to build");
    let run = Command::new(&out).output().unwrap();
    let _ = std::fs::remove_file(&out);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(run.stdout, b"ok\n");
}
