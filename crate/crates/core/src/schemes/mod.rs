//! Scheme residuals, exact Jacobians, and the discrete conservation laws each
//! scheme preserves.
//!
//! Every scheme is written in divergence form `Ã = D_m F̃₁ + D_n G̃₁`. The
//! family modules transcribe each flux, density and characteristic as a
//! composition of the grid operators, term by term, so that the discrete
//! divergence identities `Q̃ Ã = D_m F̃ + D_n G̃` hold for arbitrary data.

mod baseline;
mod ec10;
mod ec8;
mod mc10;
mod mc8;
mod measure;
mod stencil;

use std::fmt;
use std::str::FromStr;

use crate::banded::CyclicBandedMatrix;
use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction, TwoLevelField};
use crate::scalar::{Dual, Scalar};

pub use measure::{global_invariants, InvariantSums};
pub(crate) use stencil::{Stencil, Steps};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeFamily {
    EC8,
    MC8,
    EC10,
    MC10,
    NarrowBox,
    Multisymplectic,
}

impl SchemeFamily {
    pub const ALL: [SchemeFamily; 6] = [
        SchemeFamily::EC8,
        SchemeFamily::MC8,
        SchemeFamily::EC10,
        SchemeFamily::MC10,
        SchemeFamily::NarrowBox,
        SchemeFamily::Multisymplectic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeFamily::EC8 => "EC8",
            SchemeFamily::MC8 => "MC8",
            SchemeFamily::EC10 => "EC10",
            SchemeFamily::MC10 => "MC10",
            SchemeFamily::NarrowBox => "NarrowBox",
            SchemeFamily::Multisymplectic => "Multisymplectic",
        }
    }

    pub fn is_ten_point(self) -> bool {
        matches!(self, SchemeFamily::EC10 | SchemeFamily::MC10)
    }

    /// Whether the family has a free parameter λ.
    pub fn is_parametrized(self) -> bool {
        !matches!(self, SchemeFamily::NarrowBox | SchemeFamily::Multisymplectic)
    }

    /// Spatial extent of the stencil as `(A, B)`: residual row `m` reads
    /// nodes `m + A ..= m + B` on both levels.
    pub fn stencil_offsets(self) -> (isize, isize) {
        if self.is_ten_point() {
            (-2, 2)
        } else {
            (-2, 1)
        }
    }

    pub fn stencil_width(self) -> usize {
        let (lo, hi) = self.stencil_offsets();
        (hi - lo + 1) as usize
    }

    pub fn half_bandwidth(self) -> usize {
        if self.is_ten_point() {
            4
        } else {
            3
        }
    }

    /// Fewest grid nodes accepted by residual evaluation.
    pub fn min_nodes(self) -> usize {
        2 * self.stencil_width()
    }

    /// Conservation laws with a scheme-defined density, in law order.
    pub fn preserved_laws(self) -> &'static [Law] {
        match self {
            SchemeFamily::EC8 | SchemeFamily::EC10 => &[Law::Mass, Law::Energy],
            SchemeFamily::MC8 | SchemeFamily::MC10 => &[Law::Mass, Law::Momentum],
            SchemeFamily::NarrowBox | SchemeFamily::Multisymplectic => &[Law::Mass],
        }
    }

    pub fn preserves(self, law: Law) -> bool {
        self.preserved_laws().contains(&law)
    }
}

impl fmt::Display for SchemeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        match key.as_str() {
            "ec8" => Ok(SchemeFamily::EC8),
            "mc8" => Ok(SchemeFamily::MC8),
            "ec10" | "avfec" => Ok(SchemeFamily::EC10),
            "mc10" | "avfmc" => Ok(SchemeFamily::MC10),
            "narrowbox" | "nb" => Ok(SchemeFamily::NarrowBox),
            "multisymplectic" | "ms" => Ok(SchemeFamily::Multisymplectic),
            _ => Err(Error::InvalidArgument(format!("unknown scheme '{s}'"))),
        }
    }
}

/// Mass, momentum and energy conservation laws.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Law {
    Mass = 1,
    Momentum = 2,
    Energy = 3,
}

impl Law {
    pub const ALL: [Law; 3] = [Law::Mass, Law::Momentum, Law::Energy];

    pub fn index(self) -> u8 {
        self as u8
    }

    pub fn from_index(i: u8) -> Result<Self> {
        match i {
            1 => Ok(Law::Mass),
            2 => Ok(Law::Momentum),
            3 => Ok(Law::Energy),
            _ => Err(Error::InvalidArgument(format!("law index must be 1, 2 or 3, got {i}"))),
        }
    }
}

/// A member of a scheme family. `lambda_coeff` is the dimensionless
/// parameter; formulas use `λ = lambda_coeff · dx²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchemeSpec {
    pub family: SchemeFamily,
    pub lambda_coeff: f64,
}

impl SchemeSpec {
    pub fn new(family: SchemeFamily, lambda_coeff: f64) -> Result<Self> {
        if !lambda_coeff.is_finite() {
            return Err(Error::InvalidArgument(format!("lambda must be finite, got {lambda_coeff}")));
        }
        if !family.is_parametrized() && lambda_coeff != 0.0 {
            return Err(Error::InvalidArgument(format!(
                "{family} has no free parameter, lambda must be 0"
            )));
        }
        Ok(Self { family, lambda_coeff })
    }

    /// Parameter-free member (`λ = 0`).
    pub fn plain(family: SchemeFamily) -> Self {
        Self {
            family,
            lambda_coeff: 0.0,
        }
    }

    pub fn lambda(&self, grid: &Grid) -> f64 {
        self.lambda_coeff * grid.dx() * grid.dx()
    }

    pub(crate) fn steps(&self, grid: &Grid) -> Steps {
        Steps {
            dx: grid.dx(),
            dt: grid.dt(),
            lambda: self.lambda(grid),
        }
    }

    /// Display label such as `EC10(0.04)` or `NarrowBox`.
    pub fn label(&self) -> String {
        if self.family.is_parametrized() {
            format!("{}({})", self.family, self.lambda_coeff)
        } else {
            self.family.to_string()
        }
    }

    fn check_grid(&self, grid: &Grid) -> Result<()> {
        let required = self.family.min_nodes();
        if grid.m() < required {
            return Err(Error::GridTooSmall {
                scheme: self.family.name(),
                required,
                found: grid.m(),
            });
        }
        Ok(())
    }

    fn check_field<T: Scalar>(&self, grid: &Grid, field: &TwoLevelField<T>) -> Result<()> {
        self.check_grid(grid)?;
        if field.len() != grid.m() {
            return Err(Error::LengthMismatch {
                expected: grid.m(),
                found: field.len(),
            });
        }
        field.check_finite()
    }
}

pub(crate) fn mass_flux<T: Scalar>(family: SchemeFamily, s: &Stencil<'_, T>) -> GridFunction<T> {
    match family {
        SchemeFamily::EC8 => ec8::flux1(s),
        SchemeFamily::MC8 => mc8::flux1(s),
        SchemeFamily::EC10 => ec10::flux1(s),
        SchemeFamily::MC10 => mc10::flux1(s),
        SchemeFamily::NarrowBox => baseline::narrow_box_flux1(s),
        SchemeFamily::Multisymplectic => baseline::multisymplectic_flux1(s),
    }
}

pub(crate) fn mass_density<T: Scalar>(family: SchemeFamily, u: &GridFunction<T>) -> GridFunction<T> {
    match family {
        SchemeFamily::EC8 | SchemeFamily::MC8 | SchemeFamily::NarrowBox => u.shift(-1).mu_m(),
        SchemeFamily::EC10 | SchemeFamily::MC10 => u.clone(),
        SchemeFamily::Multisymplectic => u.shift(-2).mu_m().mu_m().mu_m(),
    }
}

fn residual_generic<T: Scalar>(spec: &SchemeSpec, grid: &Grid, field: &TwoLevelField<T>) -> GridFunction<T> {
    let steps = spec.steps(grid);
    let s = Stencil::new(field, steps);
    let flux = mass_flux(spec.family, &s);
    let g0 = mass_density(spec.family, field.level0());
    let g1 = mass_density(spec.family, field.level1());
    flux.d_m(steps.dx) + (g1 - g0).scale(1.0 / steps.dt)
}

/// Per-node scheme residual `Ã(uⁿ, uⁿ⁺¹) = D_m F̃₁ + D_n G̃₁`.
pub fn residual(spec: &SchemeSpec, grid: &Grid, field: &TwoLevelField) -> Result<GridFunction> {
    spec.check_field(grid, field)?;
    Ok(residual_generic(spec, grid, field))
}

/// Column colouring such that no two columns read by the same residual row
/// share a colour. Columns past the last full block get their own colours.
fn column_colours(m: usize, width: usize) -> (Vec<usize>, usize) {
    let full = m / width * width;
    let colours: Vec<usize> = (0..m)
        .map(|c| if c < full { c % width } else { width + (c - full) })
        .collect();
    let count = width + (m - full);
    (colours, count)
}

/// `∂Ã[r] / ∂uⁿ⁺¹[c]` as a cyclic banded matrix, computed exactly with dual
/// numbers (one residual sweep per column colour).
pub fn jacobian(spec: &SchemeSpec, grid: &Grid, field: &TwoLevelField) -> Result<CyclicBandedMatrix> {
    spec.check_field(grid, field)?;
    let m = grid.m();
    let (lo, hi) = spec.family.stencil_offsets();
    let width = spec.family.stencil_width();
    let (colours, count) = column_colours(m, width);

    let level0: GridFunction<Dual> = GridFunction::new(
        field.level0().iter().map(|&v| Dual::new(v, 0.0)).collect(),
    );
    let mut jac = CyclicBandedMatrix::zeros(m, spec.family.half_bandwidth());
    for colour in 0..count {
        let level1: GridFunction<Dual> = GridFunction::new(
            field
                .level1()
                .iter()
                .zip(&colours)
                .map(|(&v, &c)| Dual::new(v, if c == colour { 1.0 } else { 0.0 }))
                .collect(),
        );
        let seeded = TwoLevelField::new(level0.clone(), level1)?;
        let res = residual_generic(spec, grid, &seeded);
        for r in 0..m {
            for off in lo..=hi {
                let c = (r as isize + off).rem_euclid(m as isize) as usize;
                if colours[c] == colour {
                    jac.set(r, c, res.values()[r].eps);
                }
            }
        }
    }
    Ok(jac)
}

/// Density, flux and characteristic of one discrete conservation law of a
/// scheme.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConservationLawEval {
    pub scheme: SchemeSpec,
    pub law: Law,
}

impl ConservationLawEval {
    pub fn new(scheme: SchemeSpec, law: Law) -> Result<Self> {
        if !scheme.family.preserves(law) {
            return Err(Error::LawNotPreserved {
                scheme: scheme.family.name(),
                law: law.index(),
            });
        }
        Ok(Self { scheme, law })
    }

    /// `G̃` with its level-0 slot bound to `u`.
    pub fn density(&self, grid: &Grid, u: &GridFunction) -> GridFunction {
        let steps = self.scheme.steps(grid);
        match (self.scheme.family, self.law) {
            (family, Law::Mass) => mass_density(family, u),
            (SchemeFamily::EC8, Law::Energy) => ec8::density3(u, steps),
            (SchemeFamily::MC8, Law::Momentum) => mc8::density2(u, steps),
            (SchemeFamily::EC10, Law::Energy) => ec10::density3(u, steps),
            (SchemeFamily::MC10, Law::Momentum) => mc10::density2(u, steps),
            _ => unreachable!("law membership checked at construction"),
        }
    }

    pub fn flux(&self, grid: &Grid, field: &TwoLevelField) -> GridFunction {
        let s = Stencil::new(field, self.scheme.steps(grid));
        match (self.scheme.family, self.law) {
            (family, Law::Mass) => mass_flux(family, &s),
            (SchemeFamily::EC8, Law::Energy) => ec8::flux3(&s),
            (SchemeFamily::MC8, Law::Momentum) => mc8::flux2(&s),
            (SchemeFamily::EC10, Law::Energy) => ec10::flux3(&s),
            (SchemeFamily::MC10, Law::Momentum) => mc10::flux2(&s),
            _ => unreachable!("law membership checked at construction"),
        }
    }

    pub fn characteristic(&self, grid: &Grid, field: &TwoLevelField) -> GridFunction {
        let s = Stencil::new(field, self.scheme.steps(grid));
        match (self.scheme.family, self.law) {
            (_, Law::Mass) => GridFunction::constant(field.len(), 1.0),
            (SchemeFamily::EC8, Law::Energy) => ec8::characteristic3(&s),
            (SchemeFamily::MC8, Law::Momentum) => mc8::characteristic2(&s),
            (SchemeFamily::EC10, Law::Energy) => ec10::characteristic3(&s),
            (SchemeFamily::MC10, Law::Momentum) => mc10::characteristic2(&s),
            _ => unreachable!("law membership checked at construction"),
        }
    }

    /// `D_m F̃ + D_n G̃` with `D_n G̃ = (G̃(level1) - G̃(level0)) / dt`.
    pub fn divergence(&self, grid: &Grid, field: &TwoLevelField) -> GridFunction {
        let flux = self.flux(grid, field);
        let g0 = self.density(grid, field.level0());
        let g1 = self.density(grid, field.level1());
        flux.d_m(grid.dx()) + (g1 - g0).scale(1.0 / grid.dt())
    }
}

/// Every conservation law the scheme preserves, mass first.
pub fn conservation_laws(spec: &SchemeSpec) -> Vec<ConservationLawEval> {
    spec.family
        .preserved_laws()
        .iter()
        .map(|&law| ConservationLawEval { scheme: *spec, law })
        .collect()
}

#[cfg(test)]
mod tests;
