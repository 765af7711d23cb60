//! Tangential field templates of the four plane waves living in one region.
//!
//! Every wave in the stack shares the transverse factor `exp(+i k0 sin(theta_i) x)`,
//! which is dropped. What remains of a wave at height `z` is its tangential
//! 4-vector `(E_x, E_y, H_x, H_y)` times `exp(-i q z)` with `q` its signed
//! normal wavenumber. Magnetic fields follow `H = (k_hat x E) / eta`, which holds
//! for the circular eigenwaves of a Pasteur medium as well as for the host.

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

use crate::error::Result;
use crate::media::{eigenwave_params, refract, ChiralMedium, RefractionSolution};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Column order: host = (incident/transmitted par, perp, reflected par, perp);
/// chiral layer = (forward L, forward R, backward L, backward R).
#[derive(Debug, Clone)]
pub(crate) struct WaveBasis {
    /// Tangential fields at `z = 0`, one column per wave.
    pub columns: Matrix4<Complex64>,
    /// Signed normal wavenumbers, `exp(-i q z)`.
    pub q: [Complex64; 4],
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct LayerModes {
    pub left: RefractionSolution,
    pub right: RefractionSolution,
    pub eta: Complex64,
}

impl LayerModes {
    pub fn new(medium: &ChiralMedium, k0: f64, theta_i: f64) -> Result<Self> {
        let params = eigenwave_params(medium, k0)?;
        Ok(Self {
            left: refract(k0, theta_i, params.k_l)?,
            right: refract(k0, theta_i, params.k_r)?,
            eta: params.eta,
        })
    }
}

impl WaveBasis {
    /// Host (vacuum) waves at incidence angle `theta_i`.
    pub fn host(k0: f64, theta_i: f64) -> Self {
        let c = Complex64::new(theta_i.cos(), 0.0);
        let zero = Complex64::new(0.0, 0.0);
        #[rustfmt::skip]
        let columns = Matrix4::new(
            c,    zero, c,    zero,
            zero, ONE,  zero, ONE,
            zero, -c,   zero, c,
            ONE,  zero, -ONE, zero,
        );
        let kz = c * k0;
        Self {
            columns,
            q: [kz, kz, -kz, -kz],
        }
    }

    /// Circularly polarized eigenwaves of a chiral layer.
    ///
    /// The L wave (wavenumber `k0 (n - kappa)`) travelling toward `+z` has
    /// polarization `(cos, -i, sin)`, the R wave `(cos, +i, sin)`; the
    /// counter-propagating pair mirrors `z`, which flips the helicity seen in
    /// the lab frame.
    pub fn chiral(modes: &LayerModes) -> Self {
        let cl = modes.left.cos_theta;
        let cr = modes.right.cos_theta;
        let y = ONE / modes.eta;
        #[rustfmt::skip]
        let columns = Matrix4::new(
            cl,          cr,           cl,          cr,
            -I,          I,            I,           -I,
            I * cl * y,  -I * cr * y,  I * cl * y,  -I * cr * y,
            y,           y,            -y,          -y,
        );
        let kl = modes.left.kz();
        let kr = modes.right.kz();
        Self {
            columns,
            q: [kl, kr, -kl, -kr],
        }
    }

    pub fn phases(&self, z: f64) -> Vector4<Complex64> {
        Vector4::from_fn(|j, _| (-I * self.q[j] * z).exp())
    }

    /// Tangential fields of each wave at height `z`.
    pub fn at(&self, z: f64) -> Matrix4<Complex64> {
        self.columns * Matrix4::from_diagonal(&self.phases(z))
    }

    /// Diagonal matrix advancing amplitudes referenced at one face of a
    /// layer of thickness `d` to the other face.
    pub fn propagation(&self, d: f64) -> Matrix4<Complex64> {
        Matrix4::from_diagonal(&self.phases(d))
    }
}
