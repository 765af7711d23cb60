use nalgebra::{DMatrix, DVector, Matrix4};
use num_complex::Complex64;

use super::basis::{LayerModes, WaveBasis};
use super::{validate_angle, Excitation, FieldCoefficients, LayerStack};
use crate::error::{Error, Result};

/// Tangential continuity of `(E_x, E_y, H_x, H_y)` at the three interfaces.
///
/// Rows `4j..4j+4` belong to interface `j`; columns follow the order of
/// [`FieldCoefficients`].
#[derive(Debug, Clone)]
pub struct DirectSystem {
    pub matrix: DMatrix<Complex64>,
    pub rhs: DVector<Complex64>,
}

impl DirectSystem {
    /// `|A x - b| / (|A| |x| + |b|)` in the Frobenius/Euclidean norms.
    pub fn relative_residual(&self, coeffs: &FieldCoefficients) -> f64 {
        let x = DVector::from_column_slice(&coeffs.to_array());
        let r = &self.matrix * &x - &self.rhs;
        r.norm() / (self.matrix.norm() * x.norm() + self.rhs.norm())
    }
}

pub(crate) struct StackBases {
    pub host: WaveBasis,
    pub layer1: WaveBasis,
    pub layer2: WaveBasis,
}

impl StackBases {
    pub fn new(stack: &LayerStack, theta_i: f64) -> Result<Self> {
        stack.validate()?;
        validate_angle(theta_i)?;
        let l1 = LayerModes::new(&stack.layer1, stack.k0, theta_i)?;
        let l2 = LayerModes::new(&stack.layer2, stack.k0, theta_i)?;
        Ok(Self {
            host: WaveBasis::host(stack.k0, theta_i),
            layer1: WaveBasis::chiral(&l1),
            layer2: WaveBasis::chiral(&l2),
        })
    }
}

fn put_block(
    a: &mut DMatrix<Complex64>,
    row: usize,
    col: usize,
    cols: &[usize],
    m: &Matrix4<Complex64>,
    sign: f64,
) {
    for (k, &j) in cols.iter().enumerate() {
        for i in 0..4 {
            a[(row + i, col + k)] = m[(i, j)] * sign;
        }
    }
}

pub fn assemble_direct_system(stack: &LayerStack, excitation: &Excitation) -> Result<DirectSystem> {
    excitation.validate()?;
    let bases = StackBases::new(stack, excitation.theta_i)?;
    Ok(assemble(stack, excitation, &bases))
}

fn assemble(stack: &LayerStack, excitation: &Excitation, bases: &StackBases) -> DirectSystem {
    let [z0, z1, z2] = stack.interfaces();
    let mut a = DMatrix::zeros(12, 12);
    let mut b = DVector::zeros(12);

    // z = 0: host (incident + reflected) = layer 1
    let host0 = bases.host.at(z0);
    put_block(&mut a, 0, 0, &[2, 3], &host0, 1.0);
    put_block(&mut a, 0, 2, &[0, 1, 2, 3], &bases.layer1.at(z0), -1.0);
    for i in 0..4 {
        b[i] = -(host0[(i, 0)] * excitation.e_par + host0[(i, 1)] * excitation.e_perp);
    }

    // z = d1: layer 1 = layer 2
    put_block(&mut a, 4, 2, &[0, 1, 2, 3], &bases.layer1.at(z1), 1.0);
    put_block(&mut a, 4, 6, &[0, 1, 2, 3], &bases.layer2.at(z1), -1.0);

    // z = d1 + d2: layer 2 = transmitted
    put_block(&mut a, 8, 6, &[0, 1, 2, 3], &bases.layer2.at(z2), 1.0);
    put_block(&mut a, 8, 10, &[0, 1], &bases.host.at(z2), -1.0);

    DirectSystem { matrix: a, rhs: b }
}

/// Solves the 12x12 continuity system with column equilibration and LU.
pub fn solve_direct(stack: &LayerStack, excitation: &Excitation) -> Result<FieldCoefficients> {
    excitation.validate()?;
    let bases = StackBases::new(stack, excitation.theta_i)?;
    let sys = assemble(stack, excitation, &bases);

    let scales: Vec<f64> = (0..12)
        .map(|j| {
            let n = sys.matrix.column(j).norm();
            if n > 0.0 {
                1.0 / n
            } else {
                1.0
            }
        })
        .collect();
    let mut scaled = sys.matrix.clone();
    for (j, s) in scales.iter().enumerate() {
        for v in scaled.column_mut(j).iter_mut() {
            *v *= *s;
        }
    }
    let y = scaled
        .full_piv_lu()
        .solve(&sys.rhs)
        .ok_or_else(|| degenerate(&bases, "continuity system is singular"))?;
    let mut x = [Complex64::new(0.0, 0.0); 12];
    for j in 0..12 {
        x[j] = y[j] * scales[j];
    }
    if x.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(degenerate(&bases, "non-finite field coefficients"));
    }
    Ok(FieldCoefficients::from_array(x))
}

/// Names the first interface touching a region whose wave templates are
/// linearly dependent.
pub(crate) fn degenerate(bases: &StackBases, reason: &str) -> Error {
    let interface = if is_singular(&bases.layer1.columns) {
        "z = 0 (host | layer 1)"
    } else if is_singular(&bases.layer2.columns) {
        "z = d1 (layer 1 | layer 2)"
    } else {
        "z = d1 + d2 (layer 2 | host)"
    };
    Error::DegenerateConfiguration {
        interface: interface.into(),
        reason: reason.into(),
    }
}

fn is_singular(m: &Matrix4<Complex64>) -> bool {
    let norms: Vec<f64> = (0..4).map(|j| m.column(j).norm()).collect();
    let mut scaled = *m;
    for (j, n) in norms.iter().enumerate() {
        if *n == 0.0 {
            return true;
        }
        for v in scaled.column_mut(j).iter_mut() {
            *v /= *n;
        }
    }
    scaled.determinant().norm() < 1e-13
}
