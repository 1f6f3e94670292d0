//! Solution-independent correctness checks: discrete divergence identities on
//! random data, exact Jacobians against finite differences, and local
//! truncation order on smooth manufactured fields.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::banded::CyclicBandedMatrix;
use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction, TwoLevelField};
use crate::schemes::{self, ConservationLawEval, Law, SchemeSpec};

/// Worst divergence-identity defect over a batch of random trials.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityReport {
    pub scheme: SchemeSpec,
    pub law: Law,
    /// `max |Q̃·Ã − D_m F̃ − D_n G̃|` over all nodes and trials.
    pub max_abs_defect: f64,
    /// `max |Q̃·Ã|` over the same sample.
    pub scale: f64,
    pub trials: usize,
}

impl IdentityReport {
    pub fn relative_defect(&self) -> f64 {
        if self.scale == 0.0 {
            self.max_abs_defect
        } else {
            self.max_abs_defect / self.scale
        }
    }

    pub fn passes(&self, rel_tol: f64) -> bool {
        self.max_abs_defect <= rel_tol * self.scale
    }
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (trial as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn random_levels(rng: &mut ChaCha8Rng, m: usize, amplitude: f64) -> TwoLevelField {
    let mut level = || GridFunction::new((0..m).map(|_| rng.random_range(-amplitude..=amplitude)).collect());
    let l0 = level();
    let l1 = level();
    TwoLevelField::new(l0, l1).expect("equal lengths")
}

/// Pointwise defect `Q̃·Ã − (D_m F̃ + D_n G̃)` and the product `Q̃·Ã`.
pub fn identity_defect(eval: &ConservationLawEval, grid: &Grid, field: &TwoLevelField) -> Result<(GridFunction, GridFunction)> {
    let res = schemes::residual(&eval.scheme, grid, field)?;
    let lhs = eval.characteristic(grid, field) * res;
    let defect = &lhs - &eval.divergence(grid, field);
    Ok((defect, lhs))
}

/// Evaluates the divergence identity of `(spec, law)` on `trials` random
/// two-level fields (entries in `[-2, 2]`, `dx ∈ [0.05, 0.5]`,
/// `dt ∈ [0.01, 0.1]`, `M ∈ [12, 64]`).
pub fn check_divergence_identity(spec: &SchemeSpec, law: Law, trials: usize, seed: u64) -> Result<IdentityReport> {
    let eval = ConservationLawEval::new(*spec, law)?;
    let results: Vec<(f64, f64)> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let m = rng.random_range(12..=64);
            let dx = rng.random_range(0.05..=0.5);
            let dt = rng.random_range(0.01..=0.1);
            let grid = Grid::new(0.0, dx * m as f64, m, dt)?;
            let field = random_levels(&mut rng, m, 2.0);
            let (defect, lhs) = identity_defect(&eval, &grid, &field)?;
            Ok((defect.max_abs(), lhs.max_abs()))
        })
        .collect::<Result<_>>()?;
    let (max_abs_defect, scale) = results
        .into_iter()
        .fold((0.0f64, 0.0f64), |(d, s), (dd, ss)| (d.max(dd), s.max(ss)));
    Ok(IdentityReport {
        scheme: *spec,
        law,
        max_abs_defect,
        scale,
        trials,
    })
}

/// Central finite-difference Jacobian of the residual with respect to the
/// new time level, compared entrywise against `jac`. Returns the largest
/// absolute deviation.
pub fn jacobian_deviation(spec: &SchemeSpec, grid: &Grid, field: &TwoLevelField, jac: &CyclicBandedMatrix) -> Result<f64> {
    let m = grid.m();
    let mut worst: f64 = 0.0;
    for c in 0..m {
        let base = field.level1().values()[c];
        let h = 1e-7 * (1.0 + base.abs());
        let perturbed = |delta: f64| -> Result<GridFunction> {
            let mut l1 = field.level1().clone();
            l1.values_mut()[c] = base + delta;
            let f = TwoLevelField::new(field.level0().clone(), l1)?;
            schemes::residual(spec, grid, &f)
        };
        let plus = perturbed(h)?;
        let minus = perturbed(-h)?;
        for r in 0..m {
            let fd = (plus.values()[r] - minus.values()[r]) / (2.0 * h);
            worst = worst.max((fd - jac.get(r, c)).abs());
        }
    }
    Ok(worst)
}

/// Worst Jacobian deviation over `trials` random fields
/// (`M ∈ [12, 32]`, `dx ∈ [0.3, 0.5]`, `dt ∈ [0.05, 0.1]`, entries in `[-2, 2]`).
pub fn check_jacobian(spec: &SchemeSpec, trials: usize, seed: u64) -> Result<f64> {
    let results: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let m = rng.random_range(12..=32);
            let dx = rng.random_range(0.3..=0.5);
            let dt = rng.random_range(0.05..=0.1);
            let grid = Grid::new(0.0, dx * m as f64, m, dt)?;
            let field = random_levels(&mut rng, m, 2.0);
            let jac = schemes::jacobian(spec, &grid, &field)?;
            jacobian_deviation(spec, &grid, &field, &jac)
        })
        .collect::<Result<_>>()?;
    Ok(results.into_iter().fold(0.0, f64::max))
}

/// A smooth periodic (or effectively periodic) field with its exact partial
/// derivatives, used as a manufactured solution.
#[derive(Clone, Copy)]
pub struct SmoothField {
    pub name: &'static str,
    pub a: f64,
    pub b: f64,
    pub u: fn(f64, f64) -> f64,
    pub u_t: fn(f64, f64) -> f64,
    pub u_x: fn(f64, f64) -> f64,
    pub u_xxx: fn(f64, f64) -> f64,
}

impl SmoothField {
    /// `sin(x - t) + ½ cos(2x + t/2)` on `[0, 2π)`.
    pub fn trigonometric() -> Self {
        Self {
            name: "trigonometric",
            a: 0.0,
            b: 2.0 * std::f64::consts::PI,
            u: |x, t| (x - t).sin() + 0.5 * (2.0 * x + 0.5 * t).cos(),
            u_t: |x, t| -(x - t).cos() - 0.25 * (2.0 * x + 0.5 * t).sin(),
            u_x: |x, t| (x - t).cos() - (2.0 * x + 0.5 * t).sin(),
            u_xxx: |x, t| -(x - t).cos() + 4.0 * (2.0 * x + 0.5 * t).sin(),
        }
    }

    /// `1.5 sech(1.2 (x - 0.8 t))` on `[-20, 20)`; the tails are below
    /// `1e-10` at the boundary.
    pub fn sech_pulse() -> Self {
        const A: f64 = 1.5;
        const K: f64 = 1.2;
        const C: f64 = 0.8;
        fn parts(x: f64, t: f64) -> (f64, f64) {
            let z = K * (x - C * t);
            (1.0 / z.cosh(), z.tanh())
        }
        Self {
            name: "sech",
            a: -20.0,
            b: 20.0,
            u: |x, t| A * parts(x, t).0,
            u_t: |x, t| {
                let (s, th) = parts(x, t);
                A * K * C * s * th
            },
            u_x: |x, t| {
                let (s, th) = parts(x, t);
                -A * K * s * th
            },
            u_xxx: |x, t| {
                let (s, th) = parts(x, t);
                A * K * K * K * s * th * (6.0 * s * s - 1.0)
            },
        }
    }

    pub fn constant() -> Self {
        Self {
            name: "constant",
            a: 0.0,
            b: 10.0,
            u: |_, _| 0.75,
            u_t: |_, _| 0.0,
            u_x: |_, _| 0.0,
            u_xxx: |_, _| 0.0,
        }
    }

    /// `u_t + u²u_x + u_xxx`.
    pub fn operator(&self, x: f64, t: f64) -> f64 {
        let u = (self.u)(x, t);
        (self.u_t)(x, t) + u * u * (self.u_x)(x, t) + (self.u_xxx)(x, t)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TruncationReport {
    /// `(dx, max |Ã − A(u)|)` per refinement level.
    pub errors: Vec<(f64, f64)>,
    /// Least-squares slope of `log err` against `log dx`; `None` when every
    /// defect is exactly zero.
    pub order: Option<f64>,
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (lx, ly) = (x.ln(), y.ln());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Local truncation error of the scheme at its stencil centre on a smooth
/// field, over the node counts `levels` with `dt = dt_ratio · dx`.
pub fn check_truncation_order(
    spec: &SchemeSpec,
    field: &SmoothField,
    levels: &[usize],
    dt_ratio: f64,
) -> Result<TruncationReport> {
    if levels.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "truncation order needs at least 3 refinement levels, got {}",
            levels.len()
        )));
    }
    let t0 = 0.3;
    let mut errors = Vec::with_capacity(levels.len());
    for &m in levels {
        let dx = (field.b - field.a) / m as f64;
        let grid = Grid::new(field.a, field.b, m, dt_ratio * dx)?;
        let dt = grid.dt();
        let l0 = grid.sample(|x| (field.u)(x, t0));
        let l1 = grid.sample(|x| (field.u)(x, t0 + dt));
        let res = schemes::residual(spec, &grid, &TwoLevelField::new(l0, l1)?)?;
        let centre_shift = if spec.family.is_ten_point() { 0.0 } else { -0.5 * dx };
        let err = grid
            .nodes()
            .zip(res.iter())
            .map(|(x, r)| (r - field.operator(x + centre_shift, t0 + 0.5 * dt)).abs())
            .fold(0.0, f64::max);
        errors.push((dx, err));
    }
    let order = if errors.iter().all(|&(_, e)| e == 0.0) {
        None
    } else {
        Some(log_log_slope(&errors))
    };
    Ok(TruncationReport { errors, order })
}

/// Default refinement used by [`check_truncation_order_default`].
pub fn default_levels(field: &SmoothField) -> Vec<usize> {
    if field.name == "sech" {
        vec![100, 200, 400, 800]
    } else {
        vec![32, 64, 128, 256]
    }
}

pub fn check_truncation_order_default(spec: &SchemeSpec, field: &SmoothField) -> Result<TruncationReport> {
    check_truncation_order(spec, field, &default_levels(field), 0.5)
}
