//! C ABI for `chiralfocus`.
//!
//! Every fallible function returns a [`CfStatus`]. On failure a message is
//! kept per thread and can be read with [`cf_last_error_message`]. Objects
//! are handed out as opaque pointers and released with the matching
//! `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use chiralfocus::maslov::{
    axial_scan, default_kz_grid, FocalScan, GoMode, Paraboloid, QuadratureOrders,
};
use chiralfocus::media::ChiralMedium;
use chiralfocus::num_complex::Complex64;
use chiralfocus::planar::{powers, scattering, Excitation, LayerStack};
use chiralfocus::presets::{focal_preset, planar_preset};
use chiralfocus::sweep::uniform_grid;
use chiralfocus::Error;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    DegenerateMedium = 3,
    DegenerateConfiguration = 4,
    UnknownPreset = 5,
    OutOfRange = 6,
    Panic = 7,
}

/// Co-polarized-only or full reflection matrix in the focal integral.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CfGoMode {
    PaperFaithful = 0,
    FullMatrix = 1,
}

impl From<CfGoMode> for GoMode {
    fn from(m: CfGoMode) -> Self {
        match m {
            CfGoMode::PaperFaithful => GoMode::PaperFaithful,
            CfGoMode::FullMatrix => GoMode::FullMatrix,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CfComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for CfComplex {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<CfComplex> for Complex64 {
    fn from(z: CfComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

/// One homogeneous layer: relative permittivity and permeability, chirality.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CfLayer {
    pub eps_r: CfComplex,
    pub mu_r: CfComplex,
    pub kappa: f64,
}

impl From<CfLayer> for ChiralMedium {
    fn from(l: CfLayer) -> Self {
        ChiralMedium::chiral(Complex64::from(l.eps_r), Complex64::from(l.mu_r), l.kappa)
    }
}

/// Reflection and transmission matrices, row-major in the (par, perp)
/// basis: element `[2*i + j]` is output `i` for unit input `j`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CfScattering {
    pub r: [CfComplex; 4],
    pub t: [CfComplex; 4],
}

/// Power fractions of the incident power.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CfPowers {
    pub p_r_par: f64,
    pub p_r_perp: f64,
    pub p_t_par: f64,
    pub p_t_perp: f64,
}

/// Opaque two-layer stack.
pub struct CfStack(LayerStack);

/// Opaque axial focal scan.
pub struct CfFocalScan(FocalScan);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> CfStatus {
    match e {
        Error::DegenerateMedium(_) => CfStatus::DegenerateMedium,
        Error::DegenerateConfiguration { .. } => CfStatus::DegenerateConfiguration,
        Error::InvalidParameter(_) => CfStatus::InvalidParameter,
        Error::UnknownPreset(_) => CfStatus::UnknownPreset,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (CfStatus, String)>) -> CfStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CfStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            CfStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (CfStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (CfStatus, String) {
    (CfStatus::NullPointer, format!("`{what}` is null"))
}

unsafe fn ref_or<'a, T>(p: *const T, what: &str) -> Result<&'a T, (CfStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out_or<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, (CfStatus, String)> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn str_or<'a>(p: *const c_char, what: &str) -> Result<&'a str, (CfStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        (
            CfStatus::InvalidParameter,
            format!("`{what}` is not valid UTF-8"),
        )
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length without the NUL,
/// or 0 when there is no error.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn cf_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Builds a stack from two layers and explicit thicknesses.
///
/// # Safety
/// `layer1`, `layer2` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cf_stack_new(
    layer1: *const CfLayer,
    d1: f64,
    layer2: *const CfLayer,
    d2: f64,
    k0: f64,
    out: *mut *mut CfStack,
) -> CfStatus {
    guard(|| {
        let (l1, l2) = (*ref_or(layer1, "layer1")?, *ref_or(layer2, "layer2")?);
        let out = out_or(out, "out")?;
        let stack = LayerStack::new(l1.into(), d1, l2.into(), d2, k0).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(CfStack(stack)));
        Ok(())
    })
}

/// Builds a stack with quarter-wave thicknesses.
///
/// # Safety
/// `layer1`, `layer2` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cf_stack_quarter_wave(
    layer1: *const CfLayer,
    layer2: *const CfLayer,
    k0: f64,
    out: *mut *mut CfStack,
) -> CfStatus {
    guard(|| {
        let (l1, l2) = (*ref_or(layer1, "layer1")?, *ref_or(layer2, "layer2")?);
        let out = out_or(out, "out")?;
        let stack = LayerStack::quarter_wave(l1.into(), l2.into(), k0).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(CfStack(stack)));
        Ok(())
    })
}

/// Stack of a named planar preset such as `"fig2.4:cn-c"` or `"c-PEC"`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cf_stack_from_preset(
    name: *const c_char,
    out: *mut *mut CfStack,
) -> CfStatus {
    guard(|| {
        let name = str_or(name, "name")?;
        let out = out_or(out, "out")?;
        let preset = planar_preset(name).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(CfStack(preset.stack)));
        Ok(())
    })
}

/// Layers and thicknesses of a stack.
///
/// # Safety
/// `stack` must come from a `cf_stack_*` constructor; the out pointers may be null.
#[no_mangle]
pub unsafe extern "C" fn cf_stack_describe(
    stack: *const CfStack,
    layer1: *mut CfLayer,
    d1: *mut f64,
    layer2: *mut CfLayer,
    d2: *mut f64,
) -> CfStatus {
    guard(|| {
        let s = &ref_or(stack, "stack")?.0;
        let layer = |m: &ChiralMedium| CfLayer {
            eps_r: m.eps_r.into(),
            mu_r: m.mu_r.into(),
            kappa: m.kappa,
        };
        if let Some(p) = layer1.as_mut() {
            *p = layer(&s.layer1);
        }
        if let Some(p) = layer2.as_mut() {
            *p = layer(&s.layer2);
        }
        if let Some(p) = d1.as_mut() {
            *p = s.d1;
        }
        if let Some(p) = d2.as_mut() {
            *p = s.d2;
        }
        Ok(())
    })
}

/// # Safety
/// `stack` must be null or come from a `cf_stack_*` constructor, freed once.
#[no_mangle]
pub unsafe extern "C" fn cf_stack_free(stack: *mut CfStack) {
    if !stack.is_null() {
        drop(Box::from_raw(stack));
    }
}

/// Reflection and transmission matrices at incidence angle `theta_i` (radians).
///
/// # Safety
/// `stack` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cf_scattering(
    stack: *const CfStack,
    theta_i: f64,
    out: *mut CfScattering,
) -> CfStatus {
    guard(|| {
        let s = &ref_or(stack, "stack")?.0;
        let out = out_or(out, "out")?;
        let m = scattering(s, theta_i).map_err(lib_err)?;
        let flat = |a: &chiralfocus::nalgebra::Matrix2<Complex64>| {
            [
                a[(0, 0)].into(),
                a[(0, 1)].into(),
                a[(1, 0)].into(),
                a[(1, 1)].into(),
            ]
        };
        *out = CfScattering {
            r: flat(&m.r),
            t: flat(&m.t),
        };
        Ok(())
    })
}

/// Power split for incident amplitudes `(e_par, e_perp)` at `theta_i` (radians).
///
/// # Safety
/// `stack` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cf_powers(
    stack: *const CfStack,
    theta_i: f64,
    e_par: CfComplex,
    e_perp: CfComplex,
    out: *mut CfPowers,
) -> CfStatus {
    guard(|| {
        let s = &ref_or(stack, "stack")?.0;
        let out = out_or(out, "out")?;
        let exc = Excitation::new(theta_i, e_par.into(), e_perp.into()).map_err(lib_err)?;
        let m = scattering(s, theta_i).map_err(lib_err)?;
        let p = powers(&m, &exc);
        *out = CfPowers {
            p_r_par: p.p_r_par,
            p_r_perp: p.p_r_perp,
            p_t_par: p.p_t_par,
            p_t_perp: p.p_t_perp,
        };
        Ok(())
    })
}

fn kz_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>, (CfStatus, String)> {
    if step == 0.0 {
        return Ok(default_kz_grid());
    }
    uniform_grid(start, stop, step).map_err(lib_err)
}

/// Axial focal scan for a named focal preset (`"fig3.2a"`, `"ideal-mirror"`, ...).
/// `step == 0` selects the default grid `kz = 80..120` by 0.25. Quadrature
/// orders of 0 select the sampling rule.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cf_focal_scan_preset(
    name: *const c_char,
    kz_start: f64,
    kz_stop: f64,
    kz_step: f64,
    n_alpha: usize,
    n_gamma: usize,
    mode: CfGoMode,
    out: *mut *mut CfFocalScan,
) -> CfStatus {
    guard(|| {
        let name = str_or(name, "name")?;
        let out = out_or(out, "out")?;
        let preset = focal_preset(name).map_err(lib_err)?;
        let grid = kz_grid(kz_start, kz_stop, kz_step)?;
        let rule = preset.default_orders(&grid);
        let orders = QuadratureOrders {
            n_alpha: if n_alpha == 0 { rule.n_alpha } else { n_alpha },
            n_gamma: if n_gamma == 0 { rule.n_gamma } else { n_gamma },
        };
        let scan = preset.scan(&grid, orders, mode.into()).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(CfFocalScan(scan)));
        Ok(())
    })
}

/// Axial focal scan of a paraboloid with focal length `f` and aperture
/// half-angle `h` (radians) coated with `stack`. Grid and order conventions
/// as in [`cf_focal_scan_preset`].
///
/// # Safety
/// `stack` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cf_focal_scan_stack(
    stack: *const CfStack,
    f: f64,
    h: f64,
    kz_start: f64,
    kz_stop: f64,
    kz_step: f64,
    n_alpha: usize,
    n_gamma: usize,
    mode: CfGoMode,
    out: *mut *mut CfFocalScan,
) -> CfStatus {
    guard(|| {
        let s = &ref_or(stack, "stack")?.0;
        let out = out_or(out, "out")?;
        let p = Paraboloid::from_aperture_angle(f, h).map_err(lib_err)?;
        let grid = kz_grid(kz_start, kz_stop, kz_step)?;
        let rule = QuadratureOrders::minimum(
            s.k0,
            p.f,
            p.h(),
            chiralfocus::maslov::axial_r_max(&p, s.k0, &grid),
        );
        let orders = QuadratureOrders {
            n_alpha: if n_alpha == 0 { rule.n_alpha } else { n_alpha },
            n_gamma: if n_gamma == 0 { rule.n_gamma } else { n_gamma },
        };
        let scan = axial_scan(&p, s, &grid, s.k0, orders, mode.into()).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(CfFocalScan(scan)));
        Ok(())
    })
}

/// Number of samples in a scan, 0 for null.
///
/// # Safety
/// `scan` must be null or a live scan handle.
#[no_mangle]
pub unsafe extern "C" fn cf_focal_scan_len(scan: *const CfFocalScan) -> usize {
    scan.as_ref().map_or(0, |s| s.0.kz.len())
}

/// Sample `index`: axial coordinate `kz`, field components `u[3]` and `|U|`.
///
/// # Safety
/// `scan` must be a live scan handle; `kz`, `u` (3 elements) and `mag` may be null.
#[no_mangle]
pub unsafe extern "C" fn cf_focal_scan_get(
    scan: *const CfFocalScan,
    index: usize,
    kz: *mut f64,
    u: *mut CfComplex,
    mag: *mut f64,
) -> CfStatus {
    guard(|| {
        let s = &ref_or(scan, "scan")?.0;
        if index >= s.kz.len() {
            return Err((
                CfStatus::OutOfRange,
                format!("index {index} out of range for {} samples", s.kz.len()),
            ));
        }
        if let Some(p) = kz.as_mut() {
            *p = s.kz[index];
        }
        if !u.is_null() {
            for (i, c) in s.u[index].iter().enumerate() {
                *u.add(i) = (*c).into();
            }
        }
        if let Some(p) = mag.as_mut() {
            *p = s.mag[index];
        }
        Ok(())
    })
}

/// Quadrature orders a scan was computed with.
///
/// # Safety
/// `scan` must be a live scan handle; the out pointers may be null.
#[no_mangle]
pub unsafe extern "C" fn cf_focal_scan_orders(
    scan: *const CfFocalScan,
    n_alpha: *mut usize,
    n_gamma: *mut usize,
) -> CfStatus {
    guard(|| {
        let s = &ref_or(scan, "scan")?.0;
        if let Some(p) = n_alpha.as_mut() {
            *p = s.orders.n_alpha;
        }
        if let Some(p) = n_gamma.as_mut() {
            *p = s.orders.n_gamma;
        }
        Ok(())
    })
}

/// # Safety
/// `scan` must be null or a scan handle, freed once.
#[no_mangle]
pub unsafe extern "C" fn cf_focal_scan_free(scan: *mut CfFocalScan) {
    if !scan.is_null() {
        drop(Box::from_raw(scan));
    }
}
