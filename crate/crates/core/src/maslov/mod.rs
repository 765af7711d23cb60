//! Field around the focus of a paraboloidal reflector coated with a planar
//! two-layer stack: geometrical-optics reflected field on the surface fed
//! into the Maslov double integral over the ray angles `(alpha, gamma)`.
//!
//! Coordinates follow the reflector equation `sz = f - rho^2 / (4 f)`: the
//! focus sits at the origin and the vertex at `z = f`. Axial scans are
//! parameterised by `kz = k0 * z_s` with `z_s` measured from the vertex
//! towards the focus, so the geometric focus is at `kz = k0 f`.

use std::f64::consts::PI;
use std::io::Write;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use nalgebra::{Matrix2, Vector3};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::planar::{scattering, LayerStack};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Paraboloid {
    /// Focal length.
    pub f: f64,
    /// Rim height from the axis.
    pub d: f64,
}

impl Paraboloid {
    pub fn new(f: f64, d: f64) -> Result<Self> {
        if !(f > 0.0 && f.is_finite()) || !(d > 0.0 && d.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "paraboloid needs f > 0 and D > 0, got f = {f}, D = {d}"
            )));
        }
        Ok(Self { f, d })
    }

    /// Paraboloid whose rim subtends `alpha = h`.
    pub fn from_aperture_angle(f: f64, h: f64) -> Result<Self> {
        if !(h > 0.0 && h < PI / 2.0) {
            return Err(Error::InvalidParameter(format!(
                "aperture angle must be in (0, pi/2), got {h}"
            )));
        }
        Self::new(f, 2.0 * f * h.tan())
    }

    /// Upper limit of the `alpha` integral, `atan(D / 2f)`.
    pub fn h(&self) -> f64 {
        (self.d / (2.0 * self.f)).atan()
    }

    /// Surface height `sz` at radial distance `rho`.
    pub fn surface(&self, rho: f64) -> f64 {
        self.f - rho * rho / (4.0 * self.f)
    }
}

/// Ray data at a surface point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RayGeometry {
    /// Angle between the incident ray and the surface normal.
    pub alpha: f64,
    pub gamma: f64,
    pub normal: [f64; 3],
}

/// Geometry of the surface point at radius `rho` and azimuth `azimuth`.
pub fn ray_geometry(p: &Paraboloid, rho: f64, azimuth: f64) -> RayGeometry {
    let s = (rho * rho + 4.0 * p.f * p.f).sqrt();
    let (sin_a, cos_a) = (rho / s, 2.0 * p.f / s);
    let gamma = azimuth.rem_euclid(2.0 * PI);
    let (sg, cg) = gamma.sin_cos();
    RayGeometry {
        alpha: sin_a.atan2(cos_a),
        gamma,
        normal: [sin_a * cg, sin_a * sg, cos_a],
    }
}

/// How the planar reflection matrix enters the surface field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GoMode {
    /// Co-polarized coefficients only, `B_par = R_par,par`, `B_perp = R_perp,perp`.
    #[default]
    PaperFaithful,
    /// Full 2x2 reflection matrix in the local (par, perp) basis.
    FullMatrix,
}

impl std::str::FromStr for GoMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper_faithful" => Ok(GoMode::PaperFaithful),
            "full_matrix" => Ok(GoMode::FullMatrix),
            _ => Err(Error::InvalidParameter(format!(
                "unknown mode `{s}` (expected paper_faithful or full_matrix)"
            ))),
        }
    }
}

/// Cartesian components of the reflected field at the surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GoAmplitude {
    pub ex0: Complex64,
    pub ey0: Complex64,
    pub ez0: Complex64,
}

impl GoAmplitude {
    pub fn to_vector(self) -> Vector3<Complex64> {
        Vector3::new(self.ex0, self.ey0, self.ez0)
    }
}

/// Surface field for an x-polarized axial plane wave, given the planar
/// reflection matrix `r` (rows/columns ordered par, perp) at incidence `alpha`.
pub fn go_amplitude_from(
    alpha: f64,
    gamma: f64,
    r: &Matrix2<Complex64>,
    mode: GoMode,
) -> GoAmplitude {
    let (s2a, c2a) = (2.0 * alpha).sin_cos();
    let (sg, cg) = gamma.sin_cos();
    match mode {
        GoMode::PaperFaithful => {
            let (bp, bs) = (r[(0, 0)], r[(1, 1)]);
            GoAmplitude {
                ex0: bs * (sg * sg) - bp * (cg * cg * c2a),
                ey0: -(bp * c2a + bs) * (cg * sg),
                ez0: bp * (s2a * cg),
            }
        }
        GoMode::FullMatrix => {
            let (ei_par, ei_perp) = (-cg, sg);
            let r_par = r[(0, 0)] * ei_par + r[(0, 1)] * ei_perp;
            let r_perp = r[(1, 0)] * ei_par + r[(1, 1)] * ei_perp;
            GoAmplitude {
                ex0: r_par * (cg * c2a) + r_perp * sg,
                ey0: r_par * (sg * c2a) - r_perp * cg,
                ez0: -r_par * s2a,
            }
        }
    }
}

/// [`go_amplitude_from`] with the reflection matrix of `stack` at `alpha`.
pub fn go_amplitude(
    alpha: f64,
    gamma: f64,
    stack: &LayerStack,
    mode: GoMode,
) -> Result<GoAmplitude> {
    let s = scattering(stack, alpha)?;
    Ok(go_amplitude_from(alpha, gamma, &s.r, mode))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuadratureOrders {
    pub n_alpha: usize,
    pub n_gamma: usize,
}

impl QuadratureOrders {
    /// At least four nodes per oscillation of the integrand phase:
    /// `n_alpha >= 8 + 4 ceil(2 k0 f h / pi)`, `n_gamma >= 8 + 4 ceil(k0 r_max)`.
    pub fn minimum(k0: f64, f: f64, h: f64, r_max: f64) -> Self {
        Self {
            n_alpha: 8 + 4 * (k0 * 2.0 * f * h / PI).ceil() as usize,
            n_gamma: 8 + 4 * (k0 * r_max).ceil() as usize,
        }
    }

    pub fn doubled(self) -> Self {
        Self {
            n_alpha: 2 * self.n_alpha,
            n_gamma: 2 * self.n_gamma,
        }
    }
}

/// Observation point in focus-centred spherical coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Observation {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
}

impl Observation {
    /// On-axis point at distance `z_s` from the vertex.
    pub fn axial(p: &Paraboloid, z_s: f64) -> Self {
        let z = p.f - z_s;
        Self {
            r: z.abs(),
            theta: if z < 0.0 { PI } else { 0.0 },
            phi: 0.0,
        }
    }
}

/// Reflection matrices at the Gauss-Legendre `alpha` nodes on `[0, h]`.
#[derive(Debug, Clone)]
pub struct ReflectionTable {
    pub h: f64,
    pub alpha: Vec<f64>,
    pub weight: Vec<f64>,
    pub r: Vec<Matrix2<Complex64>>,
}

impl ReflectionTable {
    pub fn from_fn(
        h: f64,
        n_alpha: usize,
        mut r: impl FnMut(f64) -> Result<Matrix2<Complex64>>,
    ) -> Result<Self> {
        let n = NonZeroUsize::new(n_alpha)
            .ok_or_else(|| Error::InvalidParameter("n_alpha must be positive".into()))?;
        let rule = GaussLegendre::new(n);
        let half = 0.5 * h;
        let mut pairs: Vec<(f64, f64)> = rule
            .as_node_weight_pairs()
            .iter()
            .map(|&(x, w)| (half * (x + 1.0), half * w))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let alpha: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let weight = pairs.iter().map(|p| p.1).collect();
        let r = alpha.iter().map(|&a| r(a)).collect::<Result<_>>()?;
        Ok(Self {
            h,
            alpha,
            weight,
            r,
        })
    }

    pub fn from_stack(stack: &LayerStack, h: f64, n_alpha: usize) -> Result<Self> {
        let mut table = Self::from_fn(h, n_alpha, |_| Ok(Matrix2::zeros()))?;
        table.r = table
            .alpha
            .par_iter()
            .map(|&a| scattering(stack, a).map(|s| s.r))
            .collect::<Result<_>>()?;
        Ok(table)
    }

    /// Angle-independent reflection with the given co-polarized coefficients.
    pub fn constant(h: f64, n_alpha: usize, b_par: Complex64, b_perp: Complex64) -> Result<Self> {
        let r = Matrix2::new(
            b_par,
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            b_perp,
        );
        Self::from_fn(h, n_alpha, |_| Ok(r))
    }

    /// Perfectly conducting mirror, `B_par = B_perp = -1`.
    pub fn ideal_mirror(h: f64, n_alpha: usize) -> Result<Self> {
        Self::constant(
            h,
            n_alpha,
            Complex64::new(-1.0, 0.0),
            Complex64::new(-1.0, 0.0),
        )
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            r: self.r.iter().map(|m| m * c).collect(),
            ..self.clone()
        }
    }
}

/// Pre-tabulated integrand pieces for repeated focal-field evaluations.
#[derive(Debug, Clone)]
pub struct FocalIntegrator {
    pub paraboloid: Paraboloid,
    pub k0: f64,
    pub orders: QuadratureOrders,
    pub mode: GoMode,
    /// `E_r0 * tan(alpha) * w_alpha * w_gamma`, indexed `[i_alpha][i_gamma]`.
    amplitude: Vec<Vec<Vector3<Complex64>>>,
    sin2a: Vec<f64>,
    cos2a: Vec<f64>,
    gamma: Vec<f64>,
}

impl FocalIntegrator {
    pub fn new(
        paraboloid: Paraboloid,
        table: &ReflectionTable,
        k0: f64,
        n_gamma: usize,
        mode: GoMode,
    ) -> Result<Self> {
        if !(k0 > 0.0 && k0.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "k0 must be positive, got {k0}"
            )));
        }
        if n_gamma == 0 {
            return Err(Error::InvalidParameter("n_gamma must be positive".into()));
        }
        if (table.h - paraboloid.h()).abs() > 1e-12 {
            return Err(Error::InvalidParameter(
                "reflection table does not match the paraboloid aperture".into(),
            ));
        }
        let w_gamma = 2.0 * PI / n_gamma as f64;
        let gamma: Vec<f64> = (0..n_gamma).map(|j| j as f64 * w_gamma).collect();
        let amplitude = table
            .alpha
            .iter()
            .zip(&table.weight)
            .zip(&table.r)
            .map(|((&a, &w), r)| {
                let scale = a.tan() * w * w_gamma;
                gamma
                    .iter()
                    .map(|&g| {
                        go_amplitude_from(a, g, r, mode).to_vector() * Complex64::new(scale, 0.0)
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            paraboloid,
            k0,
            orders: QuadratureOrders {
                n_alpha: table.alpha.len(),
                n_gamma,
            },
            mode,
            amplitude,
            sin2a: table.alpha.iter().map(|a| (2.0 * a).sin()).collect(),
            cos2a: table.alpha.iter().map(|a| (2.0 * a).cos()).collect(),
            gamma,
        })
    }

    /// Complex field vector `U` at `obs`.
    pub fn field(&self, obs: &Observation) -> Vector3<Complex64> {
        let f = self.paraboloid.f;
        let (rs, rc) = (obs.r * obs.theta.sin(), obs.r * obs.theta.cos());
        let cos_pg: Vec<f64> = self.gamma.iter().map(|g| (obs.phi - g).cos()).collect();
        let mut sum = Vector3::<Complex64>::zeros();
        for (i, row) in self.amplitude.iter().enumerate() {
            let base = 2.0 * f - rc * self.cos2a[i];
            let radial = rs * self.sin2a[i];
            for (amp, cpg) in row.iter().zip(&cos_pg) {
                let phase = Complex64::from_polar(1.0, -self.k0 * (base - radial * cpg));
                sum += amp * phase;
            }
        }
        sum * Complex64::new(0.0, 2.0 * self.k0 * f / PI)
    }
}

fn check_orders(k0: f64, p: &Paraboloid, r_max: f64, orders: QuadratureOrders) {
    let min = QuadratureOrders::minimum(k0, p.f, p.h(), r_max);
    if orders.n_alpha < min.n_alpha || orders.n_gamma < min.n_gamma {
        log::warn!(
            "quadrature orders ({}, {}) below sampling rule ({}, {})",
            orders.n_alpha,
            orders.n_gamma,
            min.n_alpha,
            min.n_gamma
        );
    }
}

fn check_k0(stack: &LayerStack, k0: f64) -> Result<()> {
    if (stack.k0 - k0).abs() > 1e-12 * k0.abs() {
        return Err(Error::InvalidParameter(format!(
            "stack was built for k0 = {}, focal evaluation uses k0 = {k0}",
            stack.k0
        )));
    }
    Ok(())
}

/// Field at one observation point.
pub fn focal_field(
    paraboloid: &Paraboloid,
    stack: &LayerStack,
    obs: &Observation,
    k0: f64,
    orders: QuadratureOrders,
    mode: GoMode,
) -> Result<Vector3<Complex64>> {
    check_k0(stack, k0)?;
    check_orders(k0, paraboloid, obs.r, orders);
    let table = ReflectionTable::from_stack(stack, paraboloid.h(), orders.n_alpha)?;
    Ok(FocalIntegrator::new(*paraboloid, &table, k0, orders.n_gamma, mode)?.field(obs))
}

#[derive(Debug, Clone, Serialize)]
pub struct FocalScan {
    pub kz: Vec<f64>,
    pub u: Vec<[Complex64; 3]>,
    pub mag: Vec<f64>,
    pub orders: QuadratureOrders,
}

impl FocalScan {
    /// `(kz, |U|)` of the largest sample.
    pub fn peak(&self) -> (f64, f64) {
        self.kz
            .iter()
            .zip(&self.mag)
            .fold((f64::NAN, f64::NEG_INFINITY), |best, (&k, &m)| {
                if m > best.1 {
                    (k, m)
                } else {
                    best
                }
            })
    }
}

pub const FOCAL_CSV_HEADER: &str = "kz,re_ux,im_ux,re_uy,im_uy,re_uz,im_uz,mag";

pub fn write_focal_csv<W: Write>(mut w: W, scan: &FocalScan) -> std::io::Result<()> {
    writeln!(w, "{FOCAL_CSV_HEADER}")?;
    for ((kz, u), m) in scan.kz.iter().zip(&scan.u).zip(&scan.mag) {
        writeln!(
            w,
            "{:.12},{:.15e},{:.15e},{:.15e},{:.15e},{:.15e},{:.15e},{:.15e}",
            kz, u[0].re, u[0].im, u[1].re, u[1].im, u[2].re, u[2].im, m
        )?;
    }
    Ok(())
}

/// Largest focus distance over an axial `kz` grid.
pub fn axial_r_max(p: &Paraboloid, k0: f64, kz_grid: &[f64]) -> f64 {
    kz_grid
        .iter()
        .map(|kz| (p.f - kz / k0).abs())
        .fold(0.0, f64::max)
}

/// Scan along the axis with a pre-built reflection table.
pub fn axial_scan_with(
    paraboloid: &Paraboloid,
    table: &ReflectionTable,
    kz_grid: &[f64],
    k0: f64,
    n_gamma: usize,
    mode: GoMode,
) -> Result<FocalScan> {
    if kz_grid.windows(2).any(|w| w[1] <= w[0]) || kz_grid.iter().any(|k| !k.is_finite()) {
        return Err(Error::InvalidParameter(
            "kz grid must be finite and strictly increasing".into(),
        ));
    }
    let integrator = FocalIntegrator::new(*paraboloid, table, k0, n_gamma, mode)?;
    check_orders(
        k0,
        paraboloid,
        axial_r_max(paraboloid, k0, kz_grid),
        integrator.orders,
    );
    let fields: Vec<Vector3<Complex64>> = kz_grid
        .par_iter()
        .map(|&kz| integrator.field(&Observation::axial(paraboloid, kz / k0)))
        .collect();
    Ok(FocalScan {
        kz: kz_grid.to_vec(),
        mag: fields.iter().map(|u| u.norm()).collect(),
        u: fields.iter().map(|u| [u[0], u[1], u[2]]).collect(),
        orders: integrator.orders,
    })
}

/// `|U|` along the axis for a reflector coated with `stack`.
pub fn axial_scan(
    paraboloid: &Paraboloid,
    stack: &LayerStack,
    kz_grid: &[f64],
    k0: f64,
    orders: QuadratureOrders,
    mode: GoMode,
) -> Result<FocalScan> {
    check_k0(stack, k0)?;
    let table = ReflectionTable::from_stack(stack, paraboloid.h(), orders.n_alpha)?;
    axial_scan_with(paraboloid, &table, kz_grid, k0, orders.n_gamma, mode)
}

/// Default axial grid: `kz` from 80 to 120 in steps of 0.25.
pub fn default_kz_grid() -> Vec<f64> {
    (0..=160).map(|i| 80.0 + 0.25 * i as f64).collect()
}

#[cfg(test)]
mod tests;
