//! Mass- and energy-conserving schemes on the 10-point stencil
//! (A = -2, B = 2). The λ = 0 member is the energy-conserving AVF scheme.

use super::{Stencil, Steps};
use crate::grid::GridFunction;
use crate::scalar::Scalar;

/// `φ_{0,0} = ⅓ μ_n(u_{0,0}²) μ_n u_{0,0} + D_m² μ_n u_{-1,0} + λ D_m D_n μ_m u_{-1,0}`
fn phi<T: Scalar>(s: &Stencil<'_, T>) -> GridFunction<T> {
    let (dx, dt) = (s.dx, s.dt);
    let (u1, u0) = (s.u(-1), s.u(0));
    let cubic = (u0.square().mu_n() * u0.mu_n()).scale(1.0 / 3.0);
    let uxx = u1.mu_n().d_m(dx).d_m(dx);
    let correction = u1.mu_m().d_m(dx).d_n(dt).scale(s.lambda);
    cubic + uxx + correction
}

/// `F̃₁ = μ_m φ_{-1,0}`
pub(super) fn flux1<T: Scalar>(s: &Stencil<'_, T>) -> GridFunction<T> {
    phi(s).shift(-1).mu_m()
}

pub(super) fn characteristic3<T: Scalar>(s: &Stencil<'_, T>) -> GridFunction<T> {
    phi(s)
}

pub(super) fn flux3<T: Scalar>(s: &Stencil<'_, T>) -> GridFunction<T> {
    let (dx, dt, lambda) = (s.dx, s.dt, s.lambda);
    let (u1, u0) = (s.u(-1), s.u(0));
    let phi0 = phi(s);
    let phi_m1 = phi0.shift(-1);
    let terms = phi_m1 * phi0 + u1.mu_n().d_m(dx) * u1.mu_m().d_n(dt)
        - u1.mu_m().mu_n() * u1.d_m(dx).d_n(dt)
        + (u0.d_n(dt) * u1.d_n(dt)).scale(lambda);
    terms.scale(0.5)
}

/// `G̃₃ = u⁴/12 + ½ u D_m² u_{-1,0}`
pub(super) fn density3<T: Scalar>(u: &GridFunction<T>, steps: Steps) -> GridFunction<T> {
    let dx = steps.dx;
    u.square().square().scale(1.0 / 12.0) + (u * &u.shift(-1).d_m(dx).d_m(dx)).scale(0.5)
}
