//! Per-level global sums `Σᵢ G̃ℓ` used to measure invariant drift.
//!
//! Laws without a scheme-defined density are measured with the continuous
//! densities `½v²` and `v⁴/12 + ½ v D_m² v_{-1}`, where `v = u` on 10-point
//! stencils and `v_i = ½(u_{i-1} + u_i)` on 8-point stencils.

use super::{mass_density, ConservationLawEval, Law, SchemeSpec};
use crate::grid::{Grid, GridFunction};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InvariantSums {
    /// `Σᵢ G̃ℓ` for laws 1, 2, 3.
    pub sums: [f64; 3],
    /// Whether law ℓ was measured with the fallback density.
    pub fallback: [bool; 3],
}

impl InvariantSums {
    pub fn get(&self, law: Law) -> f64 {
        self.sums[law.index() as usize - 1]
    }
}

fn measurement_field(spec: &SchemeSpec, u: &GridFunction) -> GridFunction {
    if spec.family.is_ten_point() {
        u.clone()
    } else {
        u.shift(-1).mu_m()
    }
}

fn fallback_density(law: Law, grid: &Grid, v: &GridFunction) -> GridFunction {
    match law {
        Law::Mass => v.clone(),
        Law::Momentum => v.square().scale(0.5),
        Law::Energy => {
            let dx = grid.dx();
            v.square().square().scale(1.0 / 12.0) + (v * &v.shift(-1).d_m(dx).d_m(dx)).scale(0.5)
        }
    }
}

pub fn global_invariants(spec: &SchemeSpec, grid: &Grid, u: &GridFunction) -> InvariantSums {
    let mut sums = [0.0; 3];
    let mut fallback = [false; 3];
    let v = measurement_field(spec, u);
    for (k, law) in Law::ALL.into_iter().enumerate() {
        let density = match law {
            Law::Mass => mass_density(spec.family, u),
            _ if spec.family.preserves(law) => ConservationLawEval { scheme: *spec, law }.density(grid, u),
            _ => {
                fallback[k] = true;
                fallback_density(law, grid, &v)
            }
        };
        sums[k] = density.sum();
    }
    InvariantSums { sums, fallback }
}
