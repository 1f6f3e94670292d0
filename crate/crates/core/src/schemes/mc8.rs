//! Mass- and momentum-conserving schemes on the 8-point stencil.

use super::{Stencil, Steps};
use crate::grid::GridFunction;
use crate::scalar::Scalar;

pub(super) fn flux1<T: Scalar>(s: &Stencil<'_, T>) -> GridFunction<T> {
    let (dx, dt, lambda) = (s.dx, s.dt, s.lambda);
    let (u2, u1, u0) = (s.u(-2), s.u(-1), s.u(0));
    let avg_t1 = u1.mu_n();

    let cubic = ((&u2 + &u0).mu_n() * avg_t1.square()).scale(1.0 / 6.0);
    let uxx = u2.mu_n().d_m(dx).d_m(dx);

    // 2(μ_n u_{-1,0}) μ_m((D_m μ_n u_{-2,0})²)
    let c1 = (&avg_t1 * &u2.mu_n().d_m(dx).square().mu_m()).scale(2.0);
    // 2(D_m² μ_n u_{-2,0}) μ_m²((μ_n u_{-2,0})²)
    let c2 = (u2.mu_n().d_m(dx).d_m(dx) * u2.mu_n().square().mu_m().mu_m()).scale(2.0);
    // Δx Δt (D_n D_m μ_m u_{-2,0}) μ_n((D_m μ_m u_{-2,0})²)
    let c3 = (u2.mu_m().d_m(dx).d_n(dt) * u2.mu_m().d_m(dx).square().mu_n()).scale(dx * dt);

    cubic + uxx + (c1 + c2 - c3).scale(lambda)
}

/// `Q̃₂ = μ_m μ_n u_{-1,0}`
pub(super) fn characteristic2<T: Scalar>(s: &Stencil<'_, T>) -> GridFunction<T> {
    s.u(-1).mu_m().mu_n()
}

pub(super) fn flux2<T: Scalar>(s: &Stencil<'_, T>) -> GridFunction<T> {
    let (dx, dt, lambda) = (s.dx, s.dt, s.lambda);
    let (u2, u1, u0) = (s.u(-2), s.u(-1), s.u(0));
    let (p2, p1, p0) = (u2.mu_n(), u1.mu_n(), u0.mu_n());
    let q1 = u1.mu_m().mu_n();

    let cubic = (p1.square() * ((&p2 * &q1).scale(2.0) + &p1 * &p0)).scale(1.0 / 12.0);
    let t2 = &p1 * &p2.d_m(dx).d_m(dx);
    let t3 = (p2.d_m(dx) * p1.d_m(dx)).scale(0.5);

    let brace = p2.d_m(dx) * p1.d_m(dx) + (&u2 + &u0).mu_n() * p2.d_m(dx).d_m(dx);
    let t4 = (u2.mu_m().mu_n() * &q1 * brace).scale(lambda);

    let cross = u2.mu_m().mu_n().d_m(dx) * u2.mu_m().mu_m().d_n(dt)
        - u2.mu_m().mu_m().mu_n() * u2.mu_m().d_m(dx).d_n(dt);
    let slope = u2.mu_m().d_m(dx);
    let brace2 = slope.square().mu_n().scale(2.0) - slope.level0() * slope.level1();
    let t5 = (cross * brace2).scale(0.25 * lambda * dx * dt);

    cubic + t2 - t3 + t4 + t5
}

pub(super) fn density2<T: Scalar>(u: &GridFunction<T>, steps: Steps) -> GridFunction<T> {
    let Steps { dx, dt, lambda } = steps;
    let avg_m1 = u.shift(-1).mu_m();
    let avg_m2 = u.shift(-2).mu_m();
    let brace = (avg_m1.d_m(dx) * avg_m2.d_m(dx)).scale(0.25) - avg_m2.mu_m().d_m(dx).square();
    let correction = (&avg_m1 * &avg_m2.d_m(dx).d_m(dx) * brace).scale(lambda * dt * dx);
    avg_m1.square().scale(0.5) + correction
}
