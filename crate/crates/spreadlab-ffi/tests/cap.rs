// The cap is process-wide, so this runs in its own test binary.
use std::ffi::CStr;
use std::ptr;

use spreadlab_ffi::*;

#[test]
fn cap_is_enforced_and_named() {
    unsafe {
        let mut m: *mut SlModel = ptr::null_mut();
        assert_eq!(sl_model_product(6, 2, 1, 2, &mut m), SlStatus::Ok);
        let mut v = -1.0;
        sl_set_cap(10);
        assert_eq!(sl_spreadability_defect(m, 6, &mut v), SlStatus::Capacity);
        let msg = CStr::from_ptr(sl_last_error())
            .to_string_lossy()
            .into_owned();
        assert!(msg.contains("cap is 10"), "{msg}");
        sl_set_cap(1 << 26);
        assert_eq!(sl_spreadability_defect(m, 4, &mut v), SlStatus::Ok);
        assert_eq!(v, 0.0);
        sl_model_free(m);
    }
}
