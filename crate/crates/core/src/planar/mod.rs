//! Plane-wave scattering by two parallel chiral layers in vacuum.
//!
//! Interfaces sit at `z = 0`, `z = d1` and `z = d1 + d2`; the incident wave
//! arrives from `z < 0` and the exit half-space is the host again. Field
//! coefficients refer to templates written in the global `z` coordinate.
//!
//! Two independent solvers are provided: [`solve_direct`] imposes tangential
//! continuity as one 12x12 linear system, [`solve_tmm`] chains 4x4 matching
//! and propagation matrices. They must agree, which is how the templates and
//! the chaining are checked against each other.

mod basis;
mod direct;
mod tmm;

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::media::ChiralMedium;

pub use direct::{assemble_direct_system, solve_direct, DirectSystem};
pub use tmm::{solve_tmm, transfer_matrices, TransferMatrices};

/// Host medium followed by two layers and the host again.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LayerStack {
    pub layer1: ChiralMedium,
    pub d1: f64,
    pub layer2: ChiralMedium,
    pub d2: f64,
    /// Host wavenumber.
    pub k0: f64,
}

impl LayerStack {
    pub fn new(
        layer1: ChiralMedium,
        d1: f64,
        layer2: ChiralMedium,
        d2: f64,
        k0: f64,
    ) -> Result<Self> {
        let stack = Self {
            layer1,
            d1,
            layer2,
            d2,
            k0,
        };
        stack.validate()?;
        Ok(stack)
    }

    /// Both layers set to their quarter-wave thickness.
    pub fn quarter_wave(layer1: ChiralMedium, layer2: ChiralMedium, k0: f64) -> Result<Self> {
        let lambda0 = 2.0 * PI / k0;
        Self::new(
            layer1,
            quarter_wave_thickness(&layer1, lambda0),
            layer2,
            quarter_wave_thickness(&layer2, lambda0),
            k0,
        )
    }

    /// A stack whose layers are indistinguishable from the host.
    pub fn host_equal(d1: f64, d2: f64, k0: f64) -> Self {
        Self {
            layer1: ChiralMedium::vacuum(),
            d1,
            layer2: ChiralMedium::vacuum(),
            d2,
            k0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k0 > 0.0 && self.k0.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "k0 must be positive, got {}",
                self.k0
            )));
        }
        for (name, d) in [("d1", self.d1), ("d2", self.d2)] {
            if !(d >= 0.0 && d.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be >= 0, got {d}"
                )));
            }
        }
        self.layer1.validate()?;
        self.layer2.validate()
    }

    pub fn wavelength(&self) -> f64 {
        2.0 * PI / self.k0
    }

    pub fn is_lossless(&self) -> bool {
        self.layer1.is_lossless() && self.layer2.is_lossless()
    }

    /// `z` of the three interfaces.
    pub fn interfaces(&self) -> [f64; 3] {
        [0.0, self.d1, self.d1 + self.d2]
    }
}

/// Optical quarter-wave thickness `lambda0 / (4 Re sqrt(eps mu))`, falling back
/// to the physical `lambda0 / 4` for nihility-like layers whose index is
/// below 0.1.
pub fn quarter_wave_thickness(medium: &ChiralMedium, lambda0: f64) -> f64 {
    let n = medium.mean_index();
    if n < 0.1 {
        lambda0 / 4.0
    } else {
        lambda0 / (4.0 * n)
    }
}

/// Incident plane wave: angle from the interface normal and the complex
/// amplitudes along the parallel and perpendicular unit vectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Excitation {
    pub theta_i: f64,
    pub e_par: Complex64,
    pub e_perp: Complex64,
}

impl Excitation {
    pub fn new(theta_i: f64, e_par: Complex64, e_perp: Complex64) -> Result<Self> {
        let ex = Self {
            theta_i,
            e_par,
            e_perp,
        };
        ex.validate()?;
        Ok(ex)
    }

    /// Unit parallel polarization, the excitation used for all figure presets.
    pub fn parallel(theta_i: f64) -> Self {
        Self {
            theta_i,
            e_par: Complex64::new(1.0, 0.0),
            e_perp: Complex64::new(0.0, 0.0),
        }
    }

    pub fn perpendicular(theta_i: f64) -> Self {
        Self {
            theta_i,
            e_par: Complex64::new(0.0, 0.0),
            e_perp: Complex64::new(1.0, 0.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        validate_angle(self.theta_i)?;
        if self.power() <= 0.0 || !self.power().is_finite() {
            return Err(Error::InvalidParameter(
                "excitation carries no power".into(),
            ));
        }
        Ok(())
    }

    pub fn power(&self) -> f64 {
        self.e_par.norm_sqr() + self.e_perp.norm_sqr()
    }
}

pub(crate) fn validate_angle(theta_i: f64) -> Result<()> {
    if !(0.0..FRAC_PI_2).contains(&theta_i) {
        return Err(Error::InvalidParameter(format!(
            "angle of incidence must lie in [0, pi/2), got {theta_i}"
        )));
    }
    Ok(())
}

/// Amplitudes of every wave in the stack.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FieldCoefficients {
    pub e_r_par: Complex64,
    pub e_r_perp: Complex64,
    pub e_fl1: Complex64,
    pub e_fr1: Complex64,
    pub e_bl1: Complex64,
    pub e_br1: Complex64,
    pub e_fl2: Complex64,
    pub e_fr2: Complex64,
    pub e_bl2: Complex64,
    pub e_br2: Complex64,
    pub e_t_par: Complex64,
    pub e_t_perp: Complex64,
}

impl FieldCoefficients {
    pub fn to_array(&self) -> [Complex64; 12] {
        [
            self.e_r_par,
            self.e_r_perp,
            self.e_fl1,
            self.e_fr1,
            self.e_bl1,
            self.e_br1,
            self.e_fl2,
            self.e_fr2,
            self.e_bl2,
            self.e_br2,
            self.e_t_par,
            self.e_t_perp,
        ]
    }

    pub fn from_array(a: [Complex64; 12]) -> Self {
        Self {
            e_r_par: a[0],
            e_r_perp: a[1],
            e_fl1: a[2],
            e_fr1: a[3],
            e_bl1: a[4],
            e_br1: a[5],
            e_fl2: a[6],
            e_fr2: a[7],
            e_bl2: a[8],
            e_br2: a[9],
            e_t_par: a[10],
            e_t_perp: a[11],
        }
    }

    /// Largest absolute difference over all twelve coefficients.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.to_array()
            .iter()
            .zip(other.to_array().iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Reflection and transmission operators in the (parallel, perpendicular)
/// basis: `r[(i, j)]` is output component `i` produced by unit input `j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringMatrices {
    pub r: Matrix2<Complex64>,
    pub t: Matrix2<Complex64>,
}

impl ScatteringMatrices {
    pub fn reflect(&self, e_par: Complex64, e_perp: Complex64) -> (Complex64, Complex64) {
        let v = self.r * nalgebra::Vector2::new(e_par, e_perp);
        (v[0], v[1])
    }

    pub fn transmit(&self, e_par: Complex64, e_perp: Complex64) -> (Complex64, Complex64) {
        let v = self.t * nalgebra::Vector2::new(e_par, e_perp);
        (v[0], v[1])
    }
}

/// Solves the stack for unit parallel and unit perpendicular excitation at
/// `theta_i` and packages the results column by column.
pub fn scattering(stack: &LayerStack, theta_i: f64) -> Result<ScatteringMatrices> {
    let par = solve_tmm(stack, &Excitation::parallel(theta_i))?;
    let perp = solve_tmm(stack, &Excitation::perpendicular(theta_i))?;
    Ok(ScatteringMatrices {
        r: Matrix2::new(par.e_r_par, perp.e_r_par, par.e_r_perp, perp.e_r_perp),
        t: Matrix2::new(par.e_t_par, perp.e_t_par, par.e_t_perp, perp.e_t_perp),
    })
}

/// Reflected and transmitted power per component, normalized to the
/// incident power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerSplit {
    pub p_r_par: f64,
    pub p_r_perp: f64,
    pub p_t_par: f64,
    pub p_t_perp: f64,
}

impl PowerSplit {
    pub fn reflected(&self) -> f64 {
        self.p_r_par + self.p_r_perp
    }

    pub fn transmitted(&self) -> f64 {
        self.p_t_par + self.p_t_perp
    }

    pub fn total(&self) -> f64 {
        self.reflected() + self.transmitted()
    }
}

/// Entry and exit media are the same host and `theta_t = theta_r = theta_i`,
/// so power ratios are plain squared-amplitude ratios.
pub fn powers(s: &ScatteringMatrices, excitation: &Excitation) -> PowerSplit {
    let p_in = excitation.power();
    let (r_par, r_perp) = s.reflect(excitation.e_par, excitation.e_perp);
    let (t_par, t_perp) = s.transmit(excitation.e_par, excitation.e_perp);
    PowerSplit {
        p_r_par: r_par.norm_sqr() / p_in,
        p_r_perp: r_perp.norm_sqr() / p_in,
        p_t_par: t_par.norm_sqr() / p_in,
        p_t_perp: t_perp.norm_sqr() / p_in,
    }
}
