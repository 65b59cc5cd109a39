use std::ffi::{c_char, c_int, CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use spreadlab_ffi::*;

fn last_error() -> String {
    let p = sl_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn closed_form_moments_cross_the_boundary() {
    unsafe {
        let mut m: *mut SlModel = ptr::null_mut();
        assert_eq!(sl_model_appendix_a_2d(8, &mut m), SlStatus::Ok);
        let (mut n, mut d, mut a) = (0, 0, 0);
        assert_eq!(sl_model_shape(m, &mut n, &mut d, &mut a), SlStatus::Ok);
        assert_eq!((n, d, a), (8, 2, 2));

        let boxed: [u32; 8] = [1, 3, 1, 4, 2, 3, 2, 4];
        let mut v = 0.0;
        let mut exact: *mut c_char = ptr::null_mut();
        assert_eq!(
            sl_model_moment(m, boxed.as_ptr(), 4, &mut v, &mut exact),
            SlStatus::Ok
        );
        assert_eq!(CStr::from_ptr(exact).to_str().unwrap(), "3/32");
        assert!((v - 3.0 / 32.0).abs() < 1e-15);
        sl_string_free(exact);

        let mut b = 0.0;
        assert_eq!(sl_box_defect(m, 1, 1, &mut b), SlStatus::Ok);
        assert_eq!(b, 1.0 / 32.0);

        let mut json: *mut c_char = ptr::null_mut();
        assert_eq!(sl_model_to_json(m, &mut json), SlStatus::Ok);
        let text = CStr::from_ptr(json).to_owned();
        sl_string_free(json);
        sl_model_free(m);

        let mut again: *mut SlModel = ptr::null_mut();
        assert_eq!(
            sl_model_from_json(text.as_ptr(), 0, &mut again),
            SlStatus::Ok
        );
        let mut v2 = 0.0;
        assert_eq!(
            sl_model_moment(again, boxed.as_ptr(), 4, &mut v2, ptr::null_mut()),
            SlStatus::Ok
        );
        assert_eq!(v, v2);
        sl_model_free(again);
    }
}

#[test]
fn errors_map_to_codes() {
    unsafe {
        let mut m: *mut SlModel = ptr::null_mut();
        assert_eq!(
            sl_model_appendix_a_2d(8, ptr::null_mut()),
            SlStatus::NullPointer
        );
        let bad = CString::new("{\"kind\": \"nope\"}").unwrap();
        assert_eq!(sl_model_from_json(bad.as_ptr(), 0, &mut m), SlStatus::Parse);
        assert!(m.is_null());
        assert!(!last_error().is_empty());

        assert_eq!(sl_model_product(6, 2, 1, 2, &mut m), SlStatus::Ok);
        let out_of_range: [u32; 2] = [1, 9];
        let mut v = 0.0;
        assert_ne!(
            sl_model_moment(m, out_of_range.as_ptr(), 1, &mut v, ptr::null_mut()),
            SlStatus::Ok
        );
        sl_model_free(m);

        let mut buf = [0.0; 2];
        assert_eq!(
            sl_gamma_table(0.01, 0.04, 1, 10, 3, buf.as_mut_ptr(), 2),
            SlStatus::BufferTooSmall
        );
        sl_model_free(ptr::null_mut());
        sl_string_free(ptr::null_mut());
    }
}

#[test]
fn gamma_and_families() {
    unsafe {
        let mut buf = [0.0; 3];
        assert_eq!(
            sl_gamma_table(0.01, 0.04, 1, 10, 3, buf.as_mut_ptr(), 3),
            SlStatus::Ok
        );
        assert!((buf[2] - (0.08 + 2.0 * 0.24f64.sqrt())).abs() < 1e-12);

        let name = CString::new("everything").unwrap();
        let mut f: *mut SlFamily = ptr::null_mut();
        assert_eq!(sl_family_builtin(name.as_ptr(), 6, &mut f), SlStatus::Ok);
        let u = [1u32, 2, 3, 4];
        let (mut g, mut se) = (0.0, 1.0);
        assert_eq!(
            sl_family_gamma(f, u.as_ptr(), 0, 0, &mut g, &mut se),
            SlStatus::Ok
        );
        assert_eq!((g, se), (1.0, 0.0));
        sl_family_free(f);

        let unknown = CString::new("pentagon").unwrap();
        assert_eq!(
            sl_family_builtin(unknown.as_ptr(), 6, &mut f),
            SlStatus::Parse
        );
    }
}

#[test]
fn command_lines_run_through_the_abi() {
    let args: Vec<CString> = [
        "spreadlab",
        "gamma-table",
        "--d",
        "1",
        "--n",
        "10",
        "--eta",
        "0.01",
        "--theta",
        "0.04",
        "--kmax",
        "3",
    ]
    .iter()
    .map(|s| CString::new(*s).unwrap())
    .collect();
    let ptrs: Vec<*const c_char> = args.iter().map(|a| a.as_ptr()).collect();
    let mut report: *mut c_char = ptr::null_mut();
    let mut code: c_int = -1;
    unsafe {
        assert_eq!(
            sl_run(ptrs.len() as c_int, ptrs.as_ptr(), &mut report, &mut code),
            SlStatus::Ok
        );
        let text = CStr::from_ptr(report).to_str().unwrap().to_owned();
        sl_string_free(report);
        assert_eq!(code, 0);
        assert!(text.contains("\"schema\": \"1.0.0\""));
        assert_eq!(
            CStr::from_ptr(sl_schema_version()).to_str().unwrap(),
            "1.0.0"
        );
    }
}

#[test]
fn header_declares_the_abi_and_compiles() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/spreadlab.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for sym in [
        "sl_model_from_json",
        "sl_model_free",
        "sl_run",
        "sl_last_error",
        "typedef struct SlModel SlModel",
        "SL_STATUS_CAPACITY",
    ] {
        assert!(text.contains(sym), "header lacks {sym}");
    }
    // syntax check only where a C compiler is present
    if let Ok(out) = Command::new("cc")
        .args(["-fsyntax-only", "-x", "c"])
        .arg(&header)
        .output()
    {
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}
