//! Implicit time stepping: each step solves `Ã(uⁿ, uⁿ⁺¹) = 0` for `uⁿ⁺¹`
//! with Newton's method and a cyclic banded direct solve.

use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction, TwoLevelField};
use crate::schemes::{self, global_invariants, InvariantSums, SchemeSpec};

pub use crate::banded::{solve_cyclic_banded, CyclicBandedMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Predictor {
    CopyPrevious,
    #[default]
    LinearExtrapolation,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NewtonConfig {
    /// Stop once `‖Ã‖∞` falls to this value.
    pub tol_residual: f64,
    pub max_iters: usize,
    pub predictor: Predictor,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        Self {
            tol_residual: 1e-12,
            max_iters: 50,
            predictor: Predictor::LinearExtrapolation,
        }
    }
}

impl NewtonConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol_residual > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "newton tolerance must be positive, got {}",
                self.tol_residual
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidArgument("newton max_iters must be at least 1".into()));
        }
        Ok(())
    }
}

/// Relative size of a Newton correction below which further iterations
/// cannot reduce the residual (it is at its rounding floor).
const STAGNATION: f64 = 1e-13;

#[derive(Clone, Debug, PartialEq)]
pub struct StepOutcome {
    pub state: GridFunction,
    pub iterations: usize,
    pub residual: f64,
}

/// Advances `u0` by one time step.
///
/// Converged when `‖Ã‖∞ ≤ tol_residual`, or when the Newton correction has
/// shrunk to `1e-13·max(1, ‖u‖∞)`: at that point the residual sits at its
/// floating-point floor, which for fine grids (`‖Ã‖ ~ ε‖u‖/dx³`) can exceed
/// any fixed absolute tolerance.
pub fn step(
    spec: &SchemeSpec,
    grid: &Grid,
    u_prev_prev: Option<&GridFunction>,
    u0: &GridFunction,
    cfg: &NewtonConfig,
) -> Result<StepOutcome> {
    cfg.validate()?;
    u0.check_finite()?;
    let mut u1 = match (cfg.predictor, u_prev_prev) {
        (Predictor::LinearExtrapolation, Some(prev)) => u0.scale(2.0) - prev,
        _ => u0.clone(),
    };
    let mut last_residual = f64::INFINITY;
    for iteration in 0..=cfg.max_iters {
        let field = TwoLevelField::new(u0.clone(), u1)?;
        let res = schemes::residual(spec, grid, &field)?;
        let norm = res.max_abs();
        let (_, current) = field.into_levels();
        u1 = current;
        if norm <= cfg.tol_residual {
            return Ok(StepOutcome {
                state: u1,
                iterations: iteration,
                residual: norm,
            });
        }
        last_residual = norm;
        if iteration == cfg.max_iters {
            break;
        }
        let field = TwoLevelField::new(u0.clone(), u1)?;
        let jac = schemes::jacobian(spec, grid, &field)?;
        let delta = solve_cyclic_banded(&jac, res.values())?;
        let (_, mut next) = field.into_levels();
        let mut delta_norm: f64 = 0.0;
        for (v, d) in next.values_mut().iter_mut().zip(&delta) {
            *v -= d;
            delta_norm = delta_norm.max(d.abs());
        }
        next.check_finite()?;
        u1 = next;
        if delta_norm <= STAGNATION * u1.max_abs().max(1.0) {
            let field = TwoLevelField::new(u0.clone(), u1)?;
            let res = schemes::residual(spec, grid, &field)?;
            let (_, state) = field.into_levels();
            return Ok(StepOutcome {
                state,
                iterations: iteration + 1,
                residual: res.max_abs(),
            });
        }
    }
    Err(Error::NonConvergence {
        iterations: cfg.max_iters,
        residual: last_residual,
    })
}

/// Time history of one integration.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub grid: Grid,
    pub scheme: SchemeSpec,
    /// Number of time steps taken.
    pub steps: usize,
    /// Stored states as `(level index, state)`; always includes the first
    /// and last level.
    pub states: Vec<(usize, GridFunction)>,
    /// Global density sums for every level `0..=steps`.
    pub invariants: Vec<InvariantSums>,
    /// Newton iterations per step (`steps` entries).
    pub newton_iters: Vec<usize>,
    /// Final residual norm per step.
    pub residuals: Vec<f64>,
}

impl Trajectory {
    pub fn initial(&self) -> &GridFunction {
        &self.states[0].1
    }

    pub fn final_state(&self) -> &GridFunction {
        &self.states.last().expect("trajectory has at least one state").1
    }

    pub fn final_time(&self) -> f64 {
        self.steps as f64 * self.grid.dt()
    }

    pub fn max_newton_iters(&self) -> usize {
        self.newton_iters.iter().copied().max().unwrap_or(0)
    }

    pub fn mean_newton_iters(&self) -> f64 {
        if self.newton_iters.is_empty() {
            0.0
        } else {
            self.newton_iters.iter().sum::<usize>() as f64 / self.newton_iters.len() as f64
        }
    }
}

/// Integrates `n_steps` steps from `u_init`, storing every `stride`-th level
/// (plus the last) and the invariant sums of every level.
pub fn integrate_strided(
    spec: &SchemeSpec,
    grid: &Grid,
    u_init: &GridFunction,
    n_steps: usize,
    stride: usize,
    cfg: &NewtonConfig,
) -> Result<Trajectory> {
    if stride == 0 {
        return Err(Error::InvalidArgument("snapshot stride must be at least 1".into()));
    }
    if u_init.len() != grid.m() {
        return Err(Error::LengthMismatch {
            expected: grid.m(),
            found: u_init.len(),
        });
    }
    u_init.check_finite()?;

    let mut states = vec![(0, u_init.clone())];
    let mut invariants = vec![global_invariants(spec, grid, u_init)];
    let mut newton_iters = Vec::with_capacity(n_steps);
    let mut residuals = Vec::with_capacity(n_steps);
    let mut prev: Option<GridFunction> = None;
    let mut current = u_init.clone();

    for n in 1..=n_steps {
        let out = step(spec, grid, prev.as_ref(), &current, cfg).map_err(|e| Error::StepFailed {
            step: n,
            source: Box::new(e),
        })?;
        invariants.push(global_invariants(spec, grid, &out.state));
        newton_iters.push(out.iterations);
        residuals.push(out.residual);
        if n % stride == 0 || n == n_steps {
            states.push((n, out.state.clone()));
        }
        prev = Some(std::mem::replace(&mut current, out.state));
    }

    Ok(Trajectory {
        grid: *grid,
        scheme: *spec,
        steps: n_steps,
        states,
        invariants,
        newton_iters,
        residuals,
    })
}

/// Integrates `n_steps` steps, keeping every level.
pub fn integrate(
    spec: &SchemeSpec,
    grid: &Grid,
    u_init: &GridFunction,
    n_steps: usize,
    cfg: &NewtonConfig,
) -> Result<Trajectory> {
    if n_steps == 0 {
        return Err(Error::InvalidArgument("need at least one time step".into()));
    }
    integrate_strided(spec, grid, u_init, n_steps, 1, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::SchemeFamily;

    fn grid() -> Grid {
        Grid::new(-4.0, 4.0, 40, 0.05).unwrap()
    }

    fn all_specs() -> Vec<SchemeSpec> {
        SchemeFamily::ALL
            .into_iter()
            .map(|f| {
                if f.is_parametrized() {
                    SchemeSpec::new(f, 0.3).unwrap()
                } else {
                    SchemeSpec::plain(f)
                }
            })
            .collect()
    }

    #[test]
    fn zero_is_a_fixed_point() {
        let g = grid();
        for spec in all_specs() {
            let out = step(&spec, &g, None, &GridFunction::zeros(g.m()), &NewtonConfig::default()).unwrap();
            assert!(out.iterations <= 1);
            assert_eq!(out.state.max_abs(), 0.0);
        }
    }

    #[test]
    fn constants_are_preserved() {
        let g = grid();
        for spec in all_specs() {
            let u0 = GridFunction::constant(g.m(), 0.7);
            let out = step(&spec, &g, None, &u0, &NewtonConfig::default()).unwrap();
            assert!((&out.state - &u0).max_abs() <= 1e-12, "{}", spec.label());
        }
    }

    #[test]
    fn step_is_deterministic() {
        let g = grid();
        let u0 = g.sample(|x| 1.5 / (x * 1.2).cosh());
        for spec in all_specs() {
            let cfg = NewtonConfig::default();
            let a = step(&spec, &g, None, &u0, &cfg).unwrap();
            let b = step(&spec, &g, None, &u0, &cfg).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn converged_step_meets_tolerance_or_floor() {
        let g = grid();
        let u0 = g.sample(|x| 1.5 / (x * 1.2).cosh());
        for spec in all_specs() {
            let out = step(&spec, &g, None, &u0, &NewtonConfig::default()).unwrap();
            let field = TwoLevelField::new(u0.clone(), out.state).unwrap();
            let r = schemes::residual(&spec, &g, &field).unwrap().max_abs();
            // rounding floor of the residual on this grid is ~1e-13
            assert!(r <= 1e-11, "{}: residual {r:e}", spec.label());
        }
    }

    #[test]
    fn non_convergence_is_reported() {
        let g = grid();
        let u0 = g.sample(|x| 1.5 / (x * 1.2).cosh());
        let cfg = NewtonConfig {
            tol_residual: 1e-300,
            max_iters: 1,
            predictor: Predictor::CopyPrevious,
        };
        let err = step(&SchemeSpec::plain(SchemeFamily::EC10), &g, None, &u0, &cfg).unwrap_err();
        assert!(matches!(err, Error::NonConvergence { iterations: 1, .. }));
    }

    #[test]
    fn invalid_config_rejected() {
        let cfg = NewtonConfig {
            tol_residual: 0.0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = NewtonConfig {
            max_iters: 0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn zero_trajectory() {
        let g = grid();
        let spec = SchemeSpec::plain(SchemeFamily::MC8);
        let traj = integrate(&spec, &g, &GridFunction::zeros(g.m()), 5, &NewtonConfig::default()).unwrap();
        assert_eq!(traj.states.len(), 6);
        assert!(traj.states.iter().all(|(_, s)| s.max_abs() == 0.0));
        assert!(integrate(&spec, &g, &GridFunction::zeros(g.m()), 0, &NewtonConfig::default()).is_err());
    }

    #[test]
    fn narrow_box_odd_symmetry() {
        let g = grid();
        let spec = SchemeSpec::plain(SchemeFamily::NarrowBox);
        let u0 = g.sample(|x| 1.5 / (x * 1.2).cosh() + 0.2 * x.sin());
        let cfg = NewtonConfig::default();
        let plus = integrate(&spec, &g, &u0, 10, &cfg).unwrap();
        let minus = integrate(&spec, &g, &(-u0.clone()), 10, &cfg).unwrap();
        for ((_, a), (_, b)) in plus.states.iter().zip(&minus.states) {
            assert!((a + b).max_abs() <= 1e-12 * a.max_abs().max(1.0));
        }
    }

    #[test]
    fn strided_storage_keeps_last_level() {
        let g = grid();
        let spec = SchemeSpec::plain(SchemeFamily::EC10);
        let u0 = g.sample(|x| 1.0 / x.cosh());
        let traj = integrate_strided(&spec, &g, &u0, 7, 3, &NewtonConfig::default()).unwrap();
        let levels: Vec<usize> = traj.states.iter().map(|(n, _)| *n).collect();
        assert_eq!(levels, vec![0, 3, 6, 7]);
        assert_eq!(traj.invariants.len(), 8);
        assert_eq!(traj.newton_iters.len(), 7);
    }

    #[test]
    fn step_failure_carries_index() {
        let g = grid();
        let spec = SchemeSpec::plain(SchemeFamily::EC10);
        let u0 = g.sample(|x| 1.0 / x.cosh());
        let cfg = NewtonConfig {
            tol_residual: 1e-300,
            max_iters: 1,
            predictor: Predictor::CopyPrevious,
        };
        match integrate(&spec, &g, &u0, 3, &cfg) {
            Err(Error::StepFailed { step, .. }) => assert_eq!(step, 1),
            other => panic!("unexpected {other:?}"),
        }
    }
}
