//! Mass- and energy-conserving schemes on the 8-point stencil (A = -2, B = 1).

use super::{Stencil, Steps};
use crate::grid::GridFunction;
use crate::scalar::Scalar;

/// `F̃₁ = ⅓(μ_n μ_m² u_{-2,0}) μ_n((μ_m² u_{-2,0})²) + D_m² μ_n u_{-2,0} + λ D_n D_m μ_m u_{-2,0}`
pub(super) fn flux1<T: Scalar>(s: &Stencil<'_, T>) -> GridFunction<T> {
    let (dx, dt) = (s.dx, s.dt);
    let u2 = s.u(-2);
    let avg2 = u2.mu_m().mu_m();
    let cubic = (avg2.mu_n() * avg2.square().mu_n()).scale(1.0 / 3.0);
    let uxx = u2.mu_n().d_m(dx).d_m(dx);
    let correction = u2.mu_m().d_m(dx).d_n(dt).scale(s.lambda);
    cubic + uxx + correction
}

/// `Q̃₃ = μ_m F̃₁`
pub(super) fn characteristic3<T: Scalar>(s: &Stencil<'_, T>) -> GridFunction<T> {
    flux1(s).mu_m()
}

pub(super) fn flux3<T: Scalar>(s: &Stencil<'_, T>) -> GridFunction<T> {
    let (dx, dt, lambda) = (s.dx, s.dt, s.lambda);
    let f1 = flux1(s);
    let u2 = s.u(-2);
    let u1 = s.u(-1);

    // (D_m μ_m μ_n u_{-2,0}) D_n μ_m² u_{-2,0} − (μ_m² μ_n u_{-2,0}) D_m D_n μ_m u_{-2,0}
    let cross = u2.mu_m().mu_n().d_m(dx) * u2.mu_m().mu_m().d_n(dt)
        - u2.mu_m().mu_m().mu_n() * u2.mu_m().d_m(dx).d_n(dt);

    let lambda_term = (u2.mu_m().d_n(dt) * u1.mu_m().d_n(dt)).scale(0.5 * lambda);

    let avg2 = u2.mu_m().mu_m();
    let (a0, a1) = (avg2.level0(), avg2.level1());
    let quad = a0.square() + a1.square() + a0 * a1;
    // (D_n μ_m² u_{-2,0}) D_m μ_m μ_n u_{-2,0} − (μ_m² μ_n u_{-2,0}) D_m D_n μ_m u_{-2,0}
    let cross2 = u2.mu_m().mu_m().d_n(dt) * u2.mu_m().mu_n().d_m(dx)
        - u2.mu_m().mu_m().mu_n() * u2.mu_m().d_m(dx).d_n(dt);
    let grid_term = (quad * cross2).scale(dx * dx / 48.0);

    f1.square().scale(0.5) + cross.scale(0.5) + lambda_term + grid_term
}

pub(super) fn density3<T: Scalar>(u: &GridFunction<T>, steps: Steps) -> GridFunction<T> {
    let dx = steps.dx;
    let avg_m1 = u.shift(-1).mu_m(); // μ_m u_{-1,0}
    let avg_m2 = u.shift(-2).mu_m(); // μ_m u_{-2,0}
    let brace = avg_m2.square().mu_m().mu_m()
        + (avg_m2.d_m(dx) * avg_m1.d_m(dx)).scale(0.25 * dx * dx);
    let quartic = (&avg_m1 * &avg_m2.mu_m().mu_m() * brace).scale(1.0 / 12.0);
    quartic + (avg_m1 * avg_m2.d_m(dx).d_m(dx)).scale(0.5)
}
