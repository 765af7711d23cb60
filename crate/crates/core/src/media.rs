//! Isotropic chiral media in the Pasteur form, their circularly polarized
//! eigenwaves, and phase matching of those eigenwaves to an incident wave.
//!
//! All quantities are relative to a vacuum host (`eps0 = mu0 = 1`, unit host
//! impedance). Phasors carry an implicit `exp(+i w t)`, so a wave travelling
//! toward `+z` has the spatial factor `exp(-i k z)` and a passive medium has
//! `Im(eps_r) <= 0`, `Im(mu_r) <= 0`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Limit scale used to emulate `eps, mu -> 0` without dividing by zero.
pub const DEFAULT_LIMIT_SCALE: f64 = 1e-5;

/// Relative permittivity used to emulate a perfect electric conductor.
pub const DEFAULT_PEC_PERMITTIVITY: f64 = 1e5;

/// Relative permittivity/permeability and chirality of a homogeneous layer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiralMedium {
    pub eps_r: Complex64,
    pub mu_r: Complex64,
    pub kappa: f64,
}

impl ChiralMedium {
    pub fn chiral(eps_r: impl Into<Complex64>, mu_r: impl Into<Complex64>, kappa: f64) -> Self {
        Self {
            eps_r: eps_r.into(),
            mu_r: mu_r.into(),
            kappa,
        }
    }

    /// The host medium itself.
    pub fn vacuum() -> Self {
        Self::chiral(1.0, 1.0, 0.0)
    }

    /// Non-magnetic chiral layer specified by its relative impedance:
    /// `mu_r = 1`, `eps_r = 1 / eta_r^2`.
    pub fn from_impedance(eta_r: f64, kappa: f64) -> Self {
        Self::chiral(1.0 / (eta_r * eta_r), 1.0, kappa)
    }

    /// Chiral nihility as a finite limit: `eps_r = s / eta_r`, `mu_r = s * eta_r`,
    /// so that `sqrt(mu_r / eps_r) = eta_r` while `sqrt(eps_r mu_r) = s`.
    pub fn chiral_nihility(kappa: f64, eta_r: f64, scale: f64) -> Self {
        Self::chiral(scale / eta_r, scale * eta_r, kappa)
    }

    /// Nihility: chiral nihility without chirality, matched impedance.
    pub fn nihility(scale: f64) -> Self {
        Self::chiral_nihility(0.0, 1.0, scale)
    }

    /// Achiral, non-magnetic layer with a very large permittivity.
    pub fn pec_limit(eps_big: f64) -> Self {
        Self::chiral(eps_big, 1.0, 0.0)
    }

    pub fn is_lossless(&self) -> bool {
        self.eps_r.im == 0.0 && self.mu_r.im == 0.0
    }

    /// Checks finiteness and passivity of the parameters.
    pub fn validate(&self) -> Result<()> {
        let finite = self.eps_r.re.is_finite()
            && self.eps_r.im.is_finite()
            && self.mu_r.re.is_finite()
            && self.mu_r.im.is_finite()
            && self.kappa.is_finite();
        if !finite {
            return Err(Error::InvalidParameter(format!(
                "non-finite medium parameters {self:?}"
            )));
        }
        if self.eps_r == Complex64::new(0.0, 0.0) {
            return Err(Error::DegenerateMedium(
                "eps_r = 0; use a finite limit scale".into(),
            ));
        }
        if self.mu_r == Complex64::new(0.0, 0.0) {
            return Err(Error::DegenerateMedium(
                "mu_r = 0; use a finite limit scale".into(),
            ));
        }
        if self.eps_r.im > 0.0 || self.mu_r.im > 0.0 {
            return Err(Error::InvalidParameter(format!(
                "active medium (Im eps_r = {}, Im mu_r = {}); passive media need Im <= 0",
                self.eps_r.im, self.mu_r.im
            )));
        }
        Ok(())
    }

    /// Real part of `sqrt(eps_r mu_r)`, the optical index ignoring chirality.
    pub fn mean_index(&self) -> f64 {
        (self.eps_r * self.mu_r).sqrt().re
    }
}

/// Refractive indices, wavenumbers and impedance of the two eigenwaves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenwaveParams {
    pub n_r: Complex64,
    pub n_l: Complex64,
    pub k_r: Complex64,
    pub k_l: Complex64,
    /// Intrinsic impedance relative to the host.
    pub eta: Complex64,
}

/// Principal square root with the tie-break `Im >= 0` on the imaginary axis.
pub(crate) fn principal_sqrt(z: Complex64) -> Complex64 {
    let mut s = z.sqrt();
    if s.re == 0.0 && s.im < 0.0 {
        s = -s;
    }
    s
}

pub fn eigenwave_params(medium: &ChiralMedium, k0: f64) -> Result<EigenwaveParams> {
    if !(k0 > 0.0 && k0.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "k0 must be positive, got {k0}"
        )));
    }
    if medium.eps_r == Complex64::new(0.0, 0.0) {
        return Err(Error::DegenerateMedium(
            "eps_r = 0; use a finite limit scale".into(),
        ));
    }
    let n = principal_sqrt(medium.eps_r * medium.mu_r);
    let n_r = n + medium.kappa;
    let n_l = n - medium.kappa;
    Ok(EigenwaveParams {
        n_r,
        n_l,
        k_r: n_r * k0,
        k_l: n_l * k0,
        eta: principal_sqrt(medium.mu_r / medium.eps_r),
    })
}

/// Phase-matched propagation direction of one eigenwave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefractionSolution {
    pub sin_theta: Complex64,
    pub cos_theta: Complex64,
    pub wavenumber: Complex64,
    pub is_propagating: bool,
    /// Real negative eigen-wavenumber: phase runs against the energy flow.
    pub is_backward: bool,
}

impl RefractionSolution {
    /// Normal wavenumber `k cos(theta)` of the forward-travelling wave.
    pub fn kz(&self) -> Complex64 {
        self.wavenumber * self.cos_theta
    }
}

/// Snell matching of an eigenwave of wavenumber `k_eigen` to a host wave of
/// wavenumber `k0` incident at `theta_i`.
///
/// Negative wavenumbers are kept as they are, so a backward eigenwave gets a
/// negative `sin_theta`. The cosine branch keeps `cos_theta >= 0` for
/// propagating waves and otherwise makes `exp(-i k z cos_theta)` decay.
pub fn refract(k0: f64, theta_i: f64, k_eigen: Complex64) -> Result<RefractionSolution> {
    if k_eigen.norm() == 0.0 || !k_eigen.norm().is_finite() {
        return Err(Error::DegenerateMedium(format!(
            "eigen-wavenumber must be finite and nonzero, got {k_eigen}"
        )));
    }
    let mut sin_theta = Complex64::new(k0 * theta_i.sin(), 0.0) / k_eigen;
    let mut cos_sq = Complex64::new(1.0, 0.0) - sin_theta * sin_theta;
    if cos_sq == Complex64::new(0.0, 0.0) {
        // grazing eigenwave: forward and backward waves would coincide
        sin_theta *= 1.0 - 1e-12;
        cos_sq = Complex64::new(1.0, 0.0) - sin_theta * sin_theta;
    }
    let propagating_real = k_eigen.im == 0.0 && cos_sq.im == 0.0 && cos_sq.re > 0.0;
    let cos_theta = if propagating_real {
        Complex64::new(cos_sq.re.sqrt(), 0.0)
    } else {
        let c = cos_sq.sqrt();
        let kz = k_eigen * c;
        if kz.im > 0.0 || (kz.im == 0.0 && kz.re < 0.0) {
            -c
        } else {
            c
        }
    };
    Ok(RefractionSolution {
        sin_theta,
        cos_theta,
        wavenumber: k_eigen,
        is_propagating: propagating_real,
        is_backward: k_eigen.im == 0.0 && k_eigen.re < 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_6};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn vacuum_is_identity() {
        let p = eigenwave_params(&ChiralMedium::vacuum(), 1.0).unwrap();
        assert_eq!(p.n_r, c(1.0));
        assert_eq!(p.n_l, c(1.0));
        assert_eq!(p.eta, c(1.0));
    }

    #[test]
    fn chiral_nihility_indices() {
        let m = ChiralMedium::chiral(1e-5, 1e-5, 0.25);
        let p = eigenwave_params(&m, 1.0).unwrap();
        assert_abs_diff_eq!(p.n_r.re, 0.25001, epsilon = 1e-15);
        assert_abs_diff_eq!(p.n_l.re, -0.24999, epsilon = 1e-15);
        assert_abs_diff_eq!(p.eta.re, 1.0, epsilon = 1e-15);
        assert!(p.n_l.re < 0.0);
    }

    #[test]
    fn strongly_chiral_second_layer() {
        let m = ChiralMedium::chiral(0.25, 1.0, 0.75);
        let p = eigenwave_params(&m, 1.0).unwrap();
        assert_abs_diff_eq!(p.n_r.re, 1.25, epsilon = 1e-15);
        assert_abs_diff_eq!(p.n_l.re, -0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(p.eta.re, 2.0, epsilon = 1e-15);
        assert_eq!(p.k_l, p.n_l * 1.0);
    }

    #[test]
    fn zero_permittivity_is_rejected() {
        let m = ChiralMedium::chiral(0.0, 1.0, 0.5);
        assert!(matches!(
            eigenwave_params(&m, 1.0),
            Err(Error::DegenerateMedium(_))
        ));
        assert!(m.validate().is_err());
    }

    #[test]
    fn constructors_hold_their_relations() {
        let cn = ChiralMedium::chiral_nihility(0.3, 2.0, DEFAULT_LIMIT_SCALE);
        assert_eq!(cn.eps_r, c(DEFAULT_LIMIT_SCALE / 2.0));
        assert_eq!(cn.mu_r, c(DEFAULT_LIMIT_SCALE * 2.0));
        let p = eigenwave_params(&cn, 1.0).unwrap();
        assert_abs_diff_eq!(p.eta.re, 2.0, epsilon = 1e-12);

        let n = ChiralMedium::nihility(DEFAULT_LIMIT_SCALE);
        assert_eq!(n, ChiralMedium::chiral(1e-5, 1e-5, 0.0));

        let pec = ChiralMedium::pec_limit(DEFAULT_PEC_PERMITTIVITY);
        assert_eq!(pec, ChiralMedium::chiral(1e5, 1.0, 0.0));

        let z = ChiralMedium::from_impedance(2.0, 0.25);
        assert_eq!(z.eps_r, c(0.25));
        assert_eq!(z.mu_r, c(1.0));
    }

    #[test]
    fn active_media_fail_validation() {
        let m = ChiralMedium::chiral(Complex64::new(2.0, 0.1), 1.0, 0.0);
        assert!(matches!(m.validate(), Err(Error::InvalidParameter(_))));
        let lossy = ChiralMedium::chiral(Complex64::new(2.0, -0.1), 1.0, 0.0);
        assert!(lossy.validate().is_ok());
    }

    #[test]
    fn refract_same_medium() {
        let s = refract(1.0, FRAC_PI_6, c(1.0)).unwrap();
        assert_abs_diff_eq!(s.sin_theta.re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(s.cos_theta.re, 3f64.sqrt() / 2.0, epsilon = 1e-15);
        assert_eq!(s.cos_theta.im, 0.0);
        assert!(s.is_propagating);
        assert!(!s.is_backward);
    }

    #[test]
    fn refract_denser() {
        let s = refract(1.0, FRAC_PI_6, c(2.0)).unwrap();
        assert_abs_diff_eq!(s.sin_theta.re, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(s.cos_theta.re, 0.9375f64.sqrt(), epsilon = 1e-15);
        assert!(s.is_propagating);
    }

    #[test]
    fn refract_evanescent_decays() {
        let s = refract(1.0, FRAC_PI_3, c(0.5)).unwrap();
        assert_abs_diff_eq!(s.sin_theta.re, 3f64.sqrt(), epsilon = 1e-14);
        assert!(!s.is_propagating);
        assert!(s.cos_theta.im < 0.0);
        assert!((-Complex64::i() * s.kz()).re < 0.0);
    }

    #[test]
    fn refract_backward_wave_keeps_sign() {
        let s = refract(1.0, 0.1, c(-2.0)).unwrap();
        assert!(s.is_backward);
        assert!(s.sin_theta.re < 0.0);
        assert!(s.cos_theta.re > 0.0);
        assert_eq!(s.cos_theta.im, 0.0);
    }

    #[test]
    fn refract_grazing_eigenwave_is_perturbed() {
        let s = refract(1.0, std::f64::consts::FRAC_PI_2, c(1.0)).unwrap();
        assert!(s.cos_theta.norm() > 0.0);
    }

    #[test]
    fn refract_rejects_zero_wavenumber() {
        assert!(refract(1.0, 0.2, c(0.0)).is_err());
    }

    #[test]
    fn cosine_is_continuous_across_critical_angle() {
        let k = c(0.5);
        let critical = (0.5f64).asin();
        let h = 1e-10;
        let below = refract(1.0, critical - h, k).unwrap();
        let above = refract(1.0, critical + h, k).unwrap();
        assert!(below.is_propagating);
        assert!(!above.is_propagating);
        assert!((below.cos_theta.norm() - above.cos_theta.norm()).abs() < 1e-8);
    }

    proptest::proptest! {
        #[test]
        fn index_sum_and_difference(eps in 0.01f64..20.0, mu in 0.01f64..20.0, kappa in 0.0f64..5.0) {
            let p = eigenwave_params(&ChiralMedium::chiral(eps, mu, kappa), 1.0).unwrap();
            let n = (eps * mu).sqrt();
            proptest::prop_assert!(((p.n_r + p.n_l).re - 2.0 * n).abs() < 1e-14 * (1.0 + n));
            proptest::prop_assert!(((p.n_r - p.n_l).re - 2.0 * kappa).abs() < 1e-14 * (1.0 + kappa));
        }

        #[test]
        fn pythagoras_and_branch(theta in 0.0f64..1.55, kre in -5.0f64..5.0, kim in -1.0f64..0.0) {
            proptest::prop_assume!(kre.abs() > 1e-3);
            let k = Complex64::new(kre, kim);
            let s = refract(1.0, theta, k).unwrap();
            let one = s.sin_theta * s.sin_theta + s.cos_theta * s.cos_theta;
            proptest::prop_assert!((one - 1.0).norm() < 1e-12 * (1.0 + s.sin_theta.norm_sqr()));
            if s.is_propagating {
                proptest::prop_assert!(s.cos_theta.im == 0.0 && s.cos_theta.re >= 0.0);
            } else {
                proptest::prop_assert!(s.kz().im <= 0.0);
            }
        }

        #[test]
        fn real_wavenumber_evanescent_branch(theta in 0.0f64..1.55, k in 0.05f64..1.0) {
            let s = refract(1.0, theta, c(k)).unwrap();
            let one = s.sin_theta * s.sin_theta + s.cos_theta * s.cos_theta;
            proptest::prop_assert!((one - 1.0).norm() < 1e-14 * s.sin_theta.norm_sqr().max(1.0));
            if !s.is_propagating {
                proptest::prop_assert!((-Complex64::i() * s.kz()).re < 0.0);
            }
        }
    }
}
