use nalgebra::{Matrix2, Matrix4, Vector2, Vector4};
use num_complex::Complex64;

use super::direct::{degenerate, StackBases};
use super::{Excitation, FieldCoefficients, LayerStack};
use crate::error::Result;

/// Interface matching matrices and layer propagation matrices.
///
/// `m0`, `m1`, `m2` map wave amplitudes just behind an interface to the
/// amplitudes just in front of it (`z = 0`, `d1`, `d1 + d2`). `p1`, `p2` advance
/// the four eigenwave amplitudes of a layer from its front face to its back
/// face: `diag(exp(-i kzL d), exp(-i kzR d), exp(+i kzL d), exp(+i kzR d))`.
#[derive(Debug, Clone)]
pub struct TransferMatrices {
    pub m0: Matrix4<Complex64>,
    pub p1: Matrix4<Complex64>,
    pub m1: Matrix4<Complex64>,
    pub p2: Matrix4<Complex64>,
    pub m2: Matrix4<Complex64>,
}

impl TransferMatrices {
    /// Host amplitudes `(inc par, inc perp, ref par, ref perp)` in front of the
    /// stack from exit amplitudes referenced at the back face.
    pub fn chain(&self) -> Matrix4<Complex64> {
        self.m0 * inverse_diagonal(&self.p1) * self.m1 * inverse_diagonal(&self.p2) * self.m2
    }
}

fn inverse_diagonal(p: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    Matrix4::from_diagonal(&Vector4::from_fn(|i, _| {
        Complex64::new(1.0, 0.0) / p[(i, i)]
    }))
}

fn matching(
    left: &Matrix4<Complex64>,
    right: &Matrix4<Complex64>,
    bases: &StackBases,
) -> Result<Matrix4<Complex64>> {
    left.full_piv_lu()
        .solve(right)
        .ok_or_else(|| degenerate(bases, "wave templates are linearly dependent"))
}

pub fn transfer_matrices(stack: &LayerStack, theta_i: f64) -> Result<TransferMatrices> {
    let bases = StackBases::new(stack, theta_i)?;
    build(stack, &bases)
}

fn build(stack: &LayerStack, bases: &StackBases) -> Result<TransferMatrices> {
    Ok(TransferMatrices {
        m0: matching(&bases.host.columns, &bases.layer1.columns, bases)?,
        p1: bases.layer1.propagation(stack.d1),
        m1: matching(&bases.layer1.columns, &bases.layer2.columns, bases)?,
        p2: bases.layer2.propagation(stack.d2),
        m2: matching(&bases.layer2.columns, &bases.host.columns, bases)?,
    })
}

/// Solves the stack by chaining the transfer matrices.
pub fn solve_tmm(stack: &LayerStack, excitation: &Excitation) -> Result<FieldCoefficients> {
    excitation.validate()?;
    let bases = StackBases::new(stack, excitation.theta_i)?;
    let tm = build(stack, &bases)?;
    let g = tm.chain();

    let g11: Matrix2<Complex64> = g.fixed_view::<2, 2>(0, 0).into_owned();
    let g21: Matrix2<Complex64> = g.fixed_view::<2, 2>(2, 0).into_owned();
    let incident = Vector2::new(excitation.e_par, excitation.e_perp);
    let exit_matrix = g11
        .full_piv_lu()
        .try_inverse()
        .ok_or_else(|| degenerate(&bases, "transfer chain is singular"))?;
    let reflection_matrix = g21 * exit_matrix;
    let exit = exit_matrix * incident;
    let reflected = reflection_matrix * incident;

    let zero = Complex64::new(0.0, 0.0);
    let exit_amp = Vector4::new(exit[0], exit[1], zero, zero);
    let layer2_front = inverse_diagonal(&tm.p2) * tm.m2 * exit_amp;
    let layer1_front = inverse_diagonal(&tm.p1) * tm.m1 * layer2_front;

    // amplitudes referenced at a face -> coefficients of the global-z templates
    let [_, z1, z2] = stack.interfaces();
    let ph2 = bases.layer2.phases(z1);
    let layer2 = Vector4::from_fn(|i, _| layer2_front[i] / ph2[i]);
    let ph0 = bases.host.phases(z2);
    let t_par = exit[0] / ph0[0];
    let t_perp = exit[1] / ph0[1];

    Ok(FieldCoefficients {
        e_r_par: reflected[0],
        e_r_perp: reflected[1],
        e_fl1: layer1_front[0],
        e_fr1: layer1_front[1],
        e_bl1: layer1_front[2],
        e_br1: layer1_front[3],
        e_fl2: layer2[0],
        e_fr2: layer2[1],
        e_bl2: layer2[2],
        e_br2: layer2[3],
        e_t_par: t_par,
        e_t_perp: t_perp,
    })
}
