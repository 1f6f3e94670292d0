//! Mass-conserving reference schemes: the narrow box scheme and the compact
//! multisymplectic (Preissmann-type) box scheme.

use super::Stencil;
use crate::grid::GridFunction;
use crate::scalar::Scalar;

/// `⅓(μ_n u_{-1,0})³ + D_m² μ_n u_{-2,0}`
pub(super) fn narrow_box_flux1<T: Scalar>(s: &Stencil<'_, T>) -> GridFunction<T> {
    let dx = s.dx;
    s.u(-1).mu_n().cube().scale(1.0 / 3.0) + s.u(-2).mu_n().d_m(dx).d_m(dx)
}

/// `⅓ μ_m((μ_m μ_n u_{-2,0})³) + D_m² μ_n u_{-2,0}`
pub(super) fn multisymplectic_flux1<T: Scalar>(s: &Stencil<'_, T>) -> GridFunction<T> {
    let dx = s.dx;
    let u2 = s.u(-2);
    u2.mu_m().mu_n().cube().mu_m().scale(1.0 / 3.0) + u2.mu_n().d_m(dx).d_m(dx)
}
