use std::ffi::{c_char, CStr, CString};
use std::ptr;

use chiralfocus_ffi::*;

fn vacuum() -> CfLayer {
    CfLayer {
        eps_r: CfComplex { re: 1.0, im: 0.0 },
        mu_r: CfComplex { re: 1.0, im: 0.0 },
        kappa: 0.0,
    }
}

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    let n = unsafe { cf_last_error_message(buf.as_mut_ptr(), buf.len()) };
    let s = unsafe { CStr::from_ptr(buf.as_ptr()) }
        .to_str()
        .unwrap()
        .to_owned();
    assert_eq!(n, s.len());
    s
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(cf_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn host_equal_stack_is_transparent() {
    let mut stack = ptr::null_mut();
    let l = vacuum();
    assert_eq!(
        unsafe { cf_stack_new(&l, 0.7, &l, 1.3, 1.0, &mut stack) },
        CfStatus::Ok
    );
    let mut m = CfScattering::default();
    assert_eq!(unsafe { cf_scattering(stack, 0.4, &mut m) }, CfStatus::Ok);
    for z in m.r {
        assert!(z.re.abs() < 1e-12 && z.im.abs() < 1e-12);
    }
    assert!(((m.t[0].re.powi(2) + m.t[0].im.powi(2)) - 1.0).abs() < 1e-12);
    assert!((m.t[1].re.abs() + m.t[1].im.abs()) < 1e-12);
    unsafe { cf_stack_free(stack) };
}

#[test]
fn preset_powers_match_core_library() {
    let name = CString::new("fig2.4:cn-c").unwrap();
    let mut stack = ptr::null_mut();
    assert_eq!(
        unsafe { cf_stack_from_preset(name.as_ptr(), &mut stack) },
        CfStatus::Ok
    );
    let theta = 0.5;
    let mut p = CfPowers::default();
    let one = CfComplex { re: 1.0, im: 0.0 };
    let zero = CfComplex::default();
    assert_eq!(
        unsafe { cf_powers(stack, theta, one, zero, &mut p) },
        CfStatus::Ok
    );

    let preset = chiralfocus::presets::planar_preset("fig2.4:cn-c").unwrap();
    let m = chiralfocus::planar::scattering(&preset.stack, theta).unwrap();
    let want = chiralfocus::planar::powers(&m, &chiralfocus::planar::Excitation::parallel(theta));
    assert_eq!(
        (p.p_r_par, p.p_r_perp, p.p_t_par, p.p_t_perp),
        (want.p_r_par, want.p_r_perp, want.p_t_par, want.p_t_perp)
    );
    assert!((p.p_r_par + p.p_r_perp + p.p_t_par + p.p_t_perp - 1.0).abs() < 1e-9);

    let (mut l1, mut l2, mut d1, mut d2) = (vacuum(), vacuum(), 0.0, 0.0);
    assert_eq!(
        unsafe { cf_stack_describe(stack, &mut l1, &mut d1, &mut l2, &mut d2) },
        CfStatus::Ok
    );
    assert_eq!((d1, d2), (preset.stack.d1, preset.stack.d2));
    assert_eq!(l2.kappa, preset.stack.layer2.kappa);
    unsafe { cf_stack_free(stack) };
}

#[test]
fn errors_carry_codes_and_messages() {
    let mut stack = ptr::null_mut();
    let name = CString::new("fig9.9").unwrap();
    assert_eq!(
        unsafe { cf_stack_from_preset(name.as_ptr(), &mut stack) },
        CfStatus::UnknownPreset
    );
    assert!(last_error().contains("fig9.9"));
    assert!(stack.is_null());

    assert_eq!(
        unsafe { cf_stack_from_preset(ptr::null(), &mut stack) },
        CfStatus::NullPointer
    );
    let l = vacuum();
    assert_eq!(
        unsafe { cf_stack_new(&l, -1.0, &l, 1.0, 1.0, &mut stack) },
        CfStatus::InvalidParameter
    );

    let bad = CfLayer {
        kappa: 1.0,
        ..vacuum()
    };
    assert_eq!(
        unsafe { cf_stack_new(&bad, 1.0, &l, 1.0, 1.0, &mut stack) },
        CfStatus::Ok
    );
    let mut m = CfScattering::default();
    assert_eq!(
        unsafe { cf_scattering(stack, 0.3, &mut m) },
        CfStatus::DegenerateMedium
    );
    assert!(last_error().contains("degenerate"));
    unsafe { cf_stack_free(stack) };

    let mut ok = ptr::null_mut();
    assert_eq!(
        unsafe { cf_stack_new(&l, 1.0, &l, 1.0, 1.0, &mut ok) },
        CfStatus::Ok
    );
    assert_eq!(unsafe { cf_last_error_message(ptr::null_mut(), 0) }, 0);
    unsafe { cf_stack_free(ok) };
    unsafe { cf_stack_free(ptr::null_mut()) };
}

#[test]
fn truncated_error_message_is_terminated() {
    let name = CString::new("no-such-preset").unwrap();
    let mut stack = ptr::null_mut();
    unsafe { cf_stack_from_preset(name.as_ptr(), &mut stack) };
    let mut buf = [1 as c_char; 8];
    let n = unsafe { cf_last_error_message(buf.as_mut_ptr(), buf.len()) };
    assert!(n > 7);
    assert_eq!(buf[7], 0);
}

#[test]
fn ideal_mirror_scan_peaks_at_focus() {
    let name = CString::new("ideal-mirror").unwrap();
    let mut scan = ptr::null_mut();
    let st = unsafe {
        cf_focal_scan_preset(
            name.as_ptr(),
            0.0,
            0.0,
            0.0,
            0,
            0,
            CfGoMode::PaperFaithful,
            &mut scan,
        )
    };
    assert_eq!(st, CfStatus::Ok);
    let n = unsafe { cf_focal_scan_len(scan) };
    assert_eq!(n, 161);
    let mut best = (0.0, f64::NEG_INFINITY);
    for i in 0..n {
        let (mut kz, mut mag) = (0.0, 0.0);
        let mut u = [CfComplex::default(); 3];
        assert_eq!(
            unsafe { cf_focal_scan_get(scan, i, &mut kz, u.as_mut_ptr(), &mut mag) },
            CfStatus::Ok
        );
        let norm = u
            .iter()
            .map(|c| c.re * c.re + c.im * c.im)
            .sum::<f64>()
            .sqrt();
        assert!((norm - mag).abs() <= 1e-12 * mag.max(1.0));
        if mag > best.1 {
            best = (kz, mag);
        }
    }
    assert!((95.0..=105.0).contains(&best.0), "{best:?}");
    let (mut na, mut ng) = (0, 0);
    assert_eq!(
        unsafe { cf_focal_scan_orders(scan, &mut na, &mut ng) },
        CfStatus::Ok
    );
    assert_eq!((na, ng), (208, 88));
    assert_eq!(
        unsafe { cf_focal_scan_get(scan, n, ptr::null_mut(), ptr::null_mut(), ptr::null_mut()) },
        CfStatus::OutOfRange
    );
    unsafe { cf_focal_scan_free(scan) };
}

#[test]
fn stack_scan_matches_preset_scan() {
    let name = CString::new("fig3.2b").unwrap();
    let preset = chiralfocus::presets::focal_preset("fig3.2b").unwrap();
    let chiralfocus::presets::Reflector::Stack(s) = preset.reflector else {
        panic!()
    };
    let l = |m: chiralfocus::media::ChiralMedium| CfLayer {
        eps_r: CfComplex {
            re: m.eps_r.re,
            im: m.eps_r.im,
        },
        mu_r: CfComplex {
            re: m.mu_r.re,
            im: m.mu_r.im,
        },
        kappa: m.kappa,
    };
    let mut stack = ptr::null_mut();
    assert_eq!(
        unsafe { cf_stack_new(&l(s.layer1), s.d1, &l(s.layer2), s.d2, s.k0, &mut stack) },
        CfStatus::Ok
    );
    let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
    let h = preset.paraboloid.h();
    let mode = CfGoMode::FullMatrix;
    assert_eq!(
        unsafe { cf_focal_scan_preset(name.as_ptr(), 95.0, 105.0, 1.0, 0, 0, mode, &mut a) },
        CfStatus::Ok
    );
    assert_eq!(
        unsafe {
            cf_focal_scan_stack(
                stack,
                preset.paraboloid.f,
                h,
                95.0,
                105.0,
                1.0,
                0,
                0,
                mode,
                &mut b,
            )
        },
        CfStatus::Ok
    );
    assert_eq!(unsafe { cf_focal_scan_len(a) }, 11);
    for i in 0..11 {
        let (mut ma, mut mb) = (0.0, 0.0);
        unsafe {
            cf_focal_scan_get(a, i, ptr::null_mut(), ptr::null_mut(), &mut ma);
            cf_focal_scan_get(b, i, ptr::null_mut(), ptr::null_mut(), &mut mb);
        }
        assert!((ma - mb).abs() <= 1e-12 * ma, "{i}: {ma} vs {mb}");
    }
    unsafe {
        cf_focal_scan_free(a);
        cf_focal_scan_free(b);
        cf_stack_free(stack);
    }
}
