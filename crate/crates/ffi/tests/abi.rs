use std::ffi::{CStr, CString};
use std::ptr;

use clforms_ffi::*;

fn owned(s: *mut std::ffi::c_char) -> String {
    let v = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { clf_string_free(s) };
    v
}

fn last_error() -> String {
    let p = clf_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

#[test]
fn pencil_round_trip() {
    unsafe {
        let mut sp = ptr::null_mut();
        assert_eq!(clf_space_new(2, 2, 2, &mut sp), ClfStatus::Ok);
        let mut nv = 0;
        assert_eq!(clf_space_num_vertices(sp, &mut nv), ClfStatus::Ok);
        assert_eq!(nv, 16);

        let mut set = ptr::null_mut();
        assert_eq!(clf_construct(sp, ClfKind::Pencil, 0, &mut set), ClfStatus::Ok);
        let mut ctx = ptr::null_mut();
        assert_eq!(clf_context_new(sp, ClfLevel::Full, 0, &mut ctx), ClfStatus::Ok);
        let (mut is_cl, mut x) = (false, ptr::null_mut());
        assert_eq!(clf_verdict(ctx, set, &mut is_cl, &mut x), ClfStatus::Ok);
        assert!(is_cl);
        assert_eq!(owned(x), "1");

        let mut text = ptr::null_mut();
        assert_eq!(clf_set_to_text(set, &mut text), ClfStatus::Ok);
        let text = CString::new(owned(text)).unwrap();
        let mut back = ptr::null_mut();
        assert_eq!(clf_set_parse(text.as_ptr(), &mut back), ClfStatus::Ok);
        let (mut a, mut b) = ([0usize; 8], [0usize; 8]);
        let (mut la, mut lb) = (0, 0);
        assert_eq!(clf_set_members(set, a.as_mut_ptr(), a.len(), &mut la), ClfStatus::Ok);
        assert_eq!(clf_set_members(back, b.as_mut_ptr(), b.len(), &mut lb), ClfStatus::Ok);
        assert_eq!((la, &a[..la]), (lb, &b[..lb]));
        assert_eq!(la, 4);

        let mut json = ptr::null_mut();
        assert_eq!(clf_verdict_json(ctx, back, &mut json), ClfStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&owned(json)).unwrap();
        assert_eq!(v["is_cl"], true);

        clf_set_free(back);
        clf_set_free(set);
        clf_context_free(ctx);
        clf_space_free(sp);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut sp = ptr::null_mut();
        assert_eq!(clf_space_new(6, 2, 2, &mut sp), ClfStatus::InvalidArgument);
        assert!(last_error().contains("prime power"));
        assert!(sp.is_null());

        assert_eq!(clf_space_new(2, 2, 2, ptr::null_mut()), ClfStatus::NullPointer);
        assert_eq!(clf_space_new(2, 2, 2, &mut sp), ClfStatus::Ok);
        assert!(clf_last_error().is_null());

        let mut set = ptr::null_mut();
        assert_eq!(clf_set_new_empty(sp, &mut set), ClfStatus::Ok);
        assert_eq!(clf_set_insert(set, 16), ClfStatus::InvalidArgument);
        assert_eq!(clf_set_insert(set, 3), ClfStatus::Ok);
        let mut has = false;
        assert_eq!(clf_set_contains(set, 3, &mut has), ClfStatus::Ok);
        assert!(has);

        let bad = CString::new("clforms-vertexset v1 q=2 n=2 l=2\n0 0 9 0\n").unwrap();
        let mut parsed = ptr::null_mut();
        assert_eq!(clf_set_parse(bad.as_ptr(), &mut parsed), ClfStatus::Parse);
        assert!(last_error().contains("line 2"));

        let mut other = ptr::null_mut();
        assert_eq!(clf_space_new(3, 2, 2, &mut other), ClfStatus::Ok);
        let mut ctx = ptr::null_mut();
        assert_eq!(clf_context_new(other, ClfLevel::Fast, 0, &mut ctx), ClfStatus::Ok);
        let mut is_cl = false;
        assert_eq!(clf_verdict(ctx, set, &mut is_cl, ptr::null_mut()), ClfStatus::InvalidArgument);

        assert_eq!(clf_construct(other, ClfKind::NontrivialFamily, 1, &mut parsed), ClfStatus::InvalidArgument);

        clf_context_free(ctx);
        clf_set_free(set);
        clf_space_free(other);
        clf_space_free(sp);
        clf_string_free(ptr::null_mut());
    }
}

#[test]
fn cli_in_process() {
    let args: Vec<CString> = ["count", "--q", "2", "--n", "2", "--l", "2", "--formula", "delta", "--oracle"]
        .iter()
        .map(|s| CString::new(*s).unwrap())
        .collect();
    let ptrs: Vec<*const std::ffi::c_char> = args.iter().map(|a| a.as_ptr()).collect();
    let (mut out, mut err, mut code) = (ptr::null_mut(), ptr::null_mut(), -1);
    unsafe {
        assert_eq!(clf_cli_run(ptrs.as_ptr(), ptrs.len(), &mut out, &mut err, &mut code), ClfStatus::Ok);
    }
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&owned(out)).unwrap();
    assert_eq!(v["match"], true);
    assert_eq!(owned(err), "");
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/clforms.h")).unwrap();
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 15);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
}

/// Compiles and runs a C program against the header and the static library.
#[test]
fn c_program_links_and_runs() {
    use std::process::Command;
    let manifest = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let lib_dir = exe.parent().unwrap().parent().unwrap();
    let lib = lib_dir.join("libclforms_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() || !lib.exists() {
        eprintln!("skipping: no C compiler or static library at {}", lib.display());
        return;
    }
    let out = tempfile::tempdir().unwrap();
    let bin = out.path().join("smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "{:?}", run);
    assert_eq!(String::from_utf8_lossy(&run.stdout), "is_cl=1 x=2\n");
}
