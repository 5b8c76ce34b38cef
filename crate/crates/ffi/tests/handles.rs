//! The C entry points called from Rust: status codes, out-pointers, error
//! messages and agreement with the library they wrap.

use std::ffi::{CStr, CString};
use std::ptr;

use varkit_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(varkit_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn ok(status: VarkitStatus) {
    assert_eq!(status, VarkitStatus::Ok, "{}", last_error());
}

fn variety(re: &[f64], im: &[f64], mult: &[u32], n_max: i32) -> *mut VarkitVariety {
    let mut v = ptr::null_mut();
    let mut resorted = false;
    ok(unsafe {
        varkit_variety_new(
            re.as_ptr(),
            im.as_ptr(),
            mult.as_ptr(),
            re.len(),
            n_max,
            256,
            &mut v,
            &mut resorted,
        )
    });
    v
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(varkit_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn null_arguments_are_reported_not_dereferenced() {
    let mut out = 0.0;
    let status = unsafe { varkit_weight_eval(ptr::null(), 1.0, &mut out) };
    assert_eq!(status, VarkitStatus::NullPointer);
    assert_eq!(last_error(), "weight is null");

    let mut w = ptr::null_mut();
    ok(unsafe { varkit_weight_exp_type(&mut w) });
    assert_eq!(
        unsafe { varkit_weight_eval(w, 2.0, ptr::null_mut()) },
        VarkitStatus::NullPointer
    );
    assert_eq!(unsafe { varkit_variety_len(ptr::null()) }, 0);
    unsafe {
        varkit_weight_free(w);
        varkit_weight_free(ptr::null_mut());
        varkit_variety_free(ptr::null_mut());
        varkit_string_free(ptr::null_mut());
    }
}

#[test]
fn core_errors_map_to_status_codes() {
    let mut w = ptr::null_mut();
    assert_eq!(
        unsafe { varkit_weight_power(-1.0, &mut w) },
        VarkitStatus::InvalidArgument
    );
    assert!(w.is_null(), "nothing is written on failure");

    let dup = [1.0, 1.0];
    let mut v = ptr::null_mut();
    let status = unsafe {
        varkit_variety_new(
            dup.as_ptr(),
            [0.0, 0.0].as_ptr(),
            [1, 1].as_ptr(),
            2,
            -1,
            128,
            &mut v,
            ptr::null_mut(),
        )
    };
    assert_eq!(status, VarkitStatus::InvalidArgument);
    assert!(last_error().contains("coincide"), "{}", last_error());

    let v = variety(&[1.0, 2.0], &[0.0, 0.0], &[1, 1], 2);
    let mut n = 0u64;
    let status = unsafe { varkit_variety_counting_n(v, 0.0, 0.0, 100.0, &mut n) };
    assert_eq!(status, VarkitStatus::Truncation);
    assert!(last_error().contains("trusted radius"), "{}", last_error());

    let text = CString::new("1 0 1\n2 x 1\n").unwrap();
    let mut parsed = ptr::null_mut();
    let status = unsafe { varkit_variety_parse(text.as_ptr(), 128, &mut parsed) };
    assert_eq!(status, VarkitStatus::Parse);
    assert!(last_error().contains("line 2"), "{}", last_error());
    unsafe { varkit_variety_free(v) };
}

#[test]
fn variety_accessors_follow_sorted_order() {
    let mut resorted = false;
    let mut v = ptr::null_mut();
    ok(unsafe {
        varkit_variety_new(
            [4.0, 1.0].as_ptr(),
            [0.0, 0.0].as_ptr(),
            [1, 3].as_ptr(),
            2,
            3,
            128,
            &mut v,
            &mut resorted,
        )
    });
    assert!(resorted);
    assert_eq!(unsafe { varkit_variety_len(v) }, 2);
    assert_eq!(unsafe { varkit_variety_total_multiplicity(v) }, 4);
    let (mut re, mut im, mut m) = (0.0, 0.0, 0u32);
    ok(unsafe { varkit_variety_point(v, 0, &mut re, &mut im, &mut m) });
    assert_eq!((re, im, m), (1.0, 0.0, 3));
    assert_eq!(
        unsafe { varkit_variety_point(v, 2, &mut re, &mut im, &mut m) },
        VarkitStatus::InvalidArgument
    );
    let mut n = 0u64;
    ok(unsafe { varkit_variety_counting_n(v, 0.0, 0.0, 4.0, &mut n) });
    assert_eq!(n, 4);
    let mut big = 0.0;
    ok(unsafe { varkit_variety_counting_big_n(v, 0.0, 0.0, 8.0, &mut big) });
    let expected = 3.0 * 8f64.ln() + 2f64.ln();
    assert!((big - expected).abs() < 1e-12, "{big} vs {expected}");
    unsafe { varkit_variety_free(v) };
}

#[test]
fn tables_interpolate_their_values() {
    // Two double points and a simple one; values in table order.
    let v = variety(&[1.0, 0.0, 3.0], &[0.0, 2.0, 0.0], &[2, 2, 1], -1);
    let re = [1.0, -0.5, 2.0, 0.25, -3.0];
    let im = [0.0, 1.5, -1.0, 0.0, 0.5];
    let mut w = ptr::null_mut();
    ok(unsafe { varkit_values_new(v, re.as_ptr(), im.as_ptr(), 5, 256, &mut w) });
    for method in [VarkitMethod::Recursion, VarkitMethod::Tableau] {
        let mut t = ptr::null_mut();
        ok(unsafe { varkit_table_compute(v, w, 3, 256, method, &mut t) });
        assert_eq!(unsafe { varkit_table_len(t) }, 3);
        let mut k = 0;
        for j in 0..3 {
            let (mut zr, mut zi, mut m) = (0.0, 0.0, 0u32);
            ok(unsafe { varkit_variety_point(v, j, &mut zr, &mut zi, &mut m) });
            for l in 0..m {
                let (mut a, mut b) = (0.0, 0.0);
                ok(unsafe { varkit_newton_eval(v, t, 3, zr, zi, l, &mut a, &mut b) });
                assert!(
                    (a - re[k]).abs() < 1e-12 && (b - im[k]).abs() < 1e-12,
                    "{method:?} ({j},{l})"
                );
                k += 1;
            }
        }
        let mut lost = f64::NAN;
        ok(unsafe { varkit_table_lost_bits(t, &mut lost) });
        assert!(lost.is_finite() && lost >= 0.0);
        let (mut a, mut b) = (0.0, 0.0);
        assert_eq!(
            unsafe { varkit_table_get(t, 1, 2, &mut a, &mut b) },
            VarkitStatus::InvalidArgument
        );
        unsafe { varkit_table_free(t) };
    }
    let mut short = ptr::null_mut();
    assert_eq!(
        unsafe { varkit_values_new(v, re.as_ptr(), im.as_ptr(), 4, 256, &mut short) },
        VarkitStatus::InvalidArgument
    );
    unsafe {
        varkit_values_free(w);
        varkit_variety_free(v);
    }
}

fn fit_verdict(f: *const VarkitFit) -> VarkitVerdict {
    let mut verdict = VarkitVerdict::Inconclusive;
    ok(unsafe { varkit_fit_verdict(f, &mut verdict) });
    verdict
}

#[test]
fn canonical_verdicts_through_the_interface() {
    let mut exp_type = ptr::null_mut();
    let mut log_poly = ptr::null_mut();
    ok(unsafe { varkit_weight_exp_type(&mut exp_type) });
    ok(unsafe { varkit_weight_log_poly(&mut log_poly) });

    let mut pi = ptr::null_mut();
    ok(unsafe { varkit_variety_pi_lattice(12, 1, 128, &mut pi) });
    let mut fit = ptr::null_mut();
    ok(unsafe { varkit_check_condition_1(pi, exp_type, 4, 12, &mut fit) });
    assert_eq!(fit_verdict(fit), VarkitVerdict::Bounded);
    assert_eq!(unsafe { varkit_fit_series_len(fit) }, 9);
    let (mut n, mut x, mut y) = (0u32, 0.0, 0.0);
    ok(unsafe { varkit_fit_series_get(fit, 8, &mut n, &mut x, &mut y) });
    assert_eq!((n, x), (12, 4096.0));
    unsafe { varkit_fit_free(fit) };

    let mut ints = ptr::null_mut();
    ok(unsafe { varkit_variety_integers(12, 1, false, 128, &mut ints) });
    let mut fit = ptr::null_mut();
    ok(unsafe { varkit_check_condition_1(ints, log_poly, 4, 12, &mut fit) });
    assert_eq!(fit_verdict(fit), VarkitVerdict::Divergent);
    let mut ratio = 0.0;
    ok(unsafe { varkit_fit_final_ratio(fit, &mut ratio) });
    assert!(ratio > 100.0, "{ratio}");

    let mut json = ptr::null_mut();
    ok(unsafe { varkit_fit_json(fit, &mut json) });
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    unsafe { varkit_string_free(json) };
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed["condition"], "condition_1");
    assert_eq!(parsed["verdict"], "DIVERGENT");

    let (mut slope, mut ln_a) = (0.0, 0.0);
    ok(unsafe { varkit_fit_line(fit, &mut slope, &mut ln_a) });
    assert_eq!(slope, parsed["B_hat"].as_f64().unwrap());
    unsafe {
        varkit_fit_free(fit);
        varkit_variety_free(ints);
        varkit_variety_free(pi);
        varkit_weight_free(exp_type);
        varkit_weight_free(log_poly);
    }
}

#[test]
fn table_membership_matches_the_library() {
    let mut w = ptr::null_mut();
    ok(unsafe { varkit_weight_exp_type(&mut w) });
    let mut v = ptr::null_mut();
    ok(unsafe { varkit_variety_pi_lattice(10, 1, 256, &mut v) });
    let mut w0 = ptr::null_mut();
    ok(unsafe { varkit_values_w0(v, 256, &mut w0) });
    let mut t = ptr::null_mut();
    let q = unsafe { varkit_variety_len(v) };
    ok(unsafe { varkit_table_compute(v, w0, q, 256, VarkitMethod::Tableau, &mut t) });
    let mut fit = ptr::null_mut();
    ok(unsafe { varkit_membership_table(t, v, w, 4, 10, &mut fit) });
    assert_eq!(fit_verdict(fit), VarkitVerdict::Bounded);

    let direct = {
        let v =
            varkit::generate::pi_lattice(10, varkit::generate::MultRule::Const(1), 256).unwrap();
        let values = varkit::divdiff::ValueSequence::w0(&v, 256);
        let t = varkit::divdiff::phi_table_tableau(&v, &values, v.len(), 256).unwrap();
        let oct = varkit::growth::Octaves::new(4, 10).unwrap();
        varkit::growth::membership_tilde(&t, &v, &varkit::Weight::exp_type(), &oct).unwrap()
    };
    for (i, &(n, x, y)) in direct.octave_series.iter().enumerate() {
        let (mut n2, mut x2, mut y2) = (0u32, 0.0, 0.0);
        ok(unsafe { varkit_fit_series_get(fit, i, &mut n2, &mut x2, &mut y2) });
        assert_eq!((n, x, y), (n2, x2, y2));
    }

    let mut values_fit = ptr::null_mut();
    ok(unsafe { varkit_membership_values(v, w0, w, &mut values_fit) });
    let mut cond2 = ptr::null_mut();
    ok(unsafe { varkit_check_condition_2(v, w, &mut cond2) });
    assert_eq!(fit_verdict(cond2), VarkitVerdict::Bounded);
    unsafe {
        varkit_fit_free(values_fit);
        varkit_fit_free(cond2);
        varkit_fit_free(fit);
        varkit_table_free(t);
        varkit_values_free(w0);
        varkit_variety_free(v);
        varkit_weight_free(w);
    }
}

#[test]
fn potential_entry_points() {
    let mut v = ptr::null_mut();
    ok(unsafe { varkit_variety_pi_lattice(6, 1, 128, &mut v) });
    let mut g = f64::NAN;
    ok(unsafe { varkit_eval_correction(v, 0.5, 0.25, &mut g) });
    let direct = varkit::smoothing::eval_correction(
        &varkit::generate::pi_lattice(6, varkit::generate::MultRule::Const(1), 128).unwrap(),
        0.5,
        0.25,
    )
    .unwrap();
    assert_eq!(g, direct);
    let mut alpha = 0.0;
    ok(unsafe { varkit_fit_alpha(v, 32, 32, &mut alpha) });
    assert!(alpha >= 1.0 && alpha.log2().fract() == 0.0, "{alpha}");
    assert_eq!(
        unsafe { varkit_fit_alpha(v, 2, 32, &mut alpha) },
        VarkitStatus::InvalidArgument
    );
    unsafe { varkit_variety_free(v) };
}

#[test]
fn errors_are_kept_per_thread() {
    let mut w = ptr::null_mut();
    assert_eq!(
        unsafe { varkit_weight_power(f64::NAN, &mut w) },
        VarkitStatus::InvalidArgument
    );
    let here = last_error();
    assert!(!here.is_empty());
    let other = std::thread::spawn(last_error).join().unwrap();
    assert!(other.is_empty(), "{other}");
}

#[test]
fn null_out_pointers_allocate_nothing() {
    assert_eq!(
        unsafe { varkit_variety_pi_lattice(4, 1, 64, ptr::null_mut()) },
        VarkitStatus::NullPointer
    );
    assert_eq!(last_error(), "out is null");
    let mut v = ptr::null_mut();
    ok(unsafe { varkit_variety_pi_lattice(4, 1, 64, &mut v) });
    let mut w = ptr::null_mut();
    ok(unsafe { varkit_weight_exp_type(&mut w) });
    let mut fit = ptr::null_mut();
    ok(unsafe { varkit_check_condition_2(v, w, &mut fit) });
    assert_eq!(
        unsafe { varkit_fit_json(fit, ptr::null_mut()) },
        VarkitStatus::NullPointer
    );
    unsafe {
        varkit_fit_free(fit);
        varkit_weight_free(w);
        varkit_variety_free(v);
    }
}
