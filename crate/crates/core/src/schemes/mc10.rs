//! Mass- and momentum-conserving schemes on the 10-point stencil. The λ = 0
//! member is the momentum-conserving AVF scheme.

use super::{Stencil, Steps};
use crate::grid::GridFunction;
use crate::scalar::Scalar;

/// `F̃₁ = ⅓(μ_m μ_n u_{-1,0}) μ_m((μ_n u_{-1,0})²) + D_m² μ_n μ_m u_{-2,0} + λ D_m D_n u_{-1,0}`
pub(super) fn flux1<T: Scalar>(s: &Stencil<'_, T>) -> GridFunction<T> {
    let (dx, dt) = (s.dx, s.dt);
    let (u2, u1) = (s.u(-2), s.u(-1));
    let avg_t1 = u1.mu_n();
    let cubic = (avg_t1.mu_m() * avg_t1.square().mu_m()).scale(1.0 / 3.0);
    let uxx = u2.mu_m().mu_n().d_m(dx).d_m(dx);
    let correction = u1.d_m(dx).d_n(dt).scale(s.lambda);
    cubic + uxx + correction
}

/// `Q̃₂ = μ_n u_{0,0}`, the discrete gradient of `½Σu²`.
pub(super) fn characteristic2<T: Scalar>(s: &Stencil<'_, T>) -> GridFunction<T> {
    s.u(0).mu_n()
}

pub(super) fn flux2<T: Scalar>(s: &Stencil<'_, T>) -> GridFunction<T> {
    let (dx, dt, lambda) = (s.dx, s.dt, s.lambda);
    let (u2, u1, u0) = (s.u(-2), s.u(-1), s.u(0));
    let (p1, p0) = (u1.mu_n(), u0.mu_n());

    let quartic = (&p1 * &p0 * (p1.square() + p0.square() + &p1 * &p0)).scale(1.0 / 12.0);
    let t2 = p1.mu_m() * u2.mu_m().mu_n().d_m(dx).d_m(dx);
    let t3 = (p1.d_m(dx) * (&u2 + &u0).mu_n().d_m(dx)).scale(0.25);
    let t4 = (p1.mu_m() * u1.d_m(dx).d_n(dt) - p1.d_m(dx) * u1.mu_m().d_n(dt)).scale(0.5 * lambda);
    quartic + t2 - t3 + t4
}

/// `G̃₂ = ½ u (u + λ D_m² u_{-1,0})`
pub(super) fn density2<T: Scalar>(u: &GridFunction<T>, steps: Steps) -> GridFunction<T> {
    let Steps { dx, lambda, .. } = steps;
    (u * &(u + &u.shift(-1).d_m(dx).d_m(dx).scale(lambda))).scale(0.5)
}
