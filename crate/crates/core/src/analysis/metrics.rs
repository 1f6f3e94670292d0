use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::schemes::Law;
use crate::solver::Trajectory;

/// Relative discrete 2-norm error `‖u − u_exact‖ / ‖u_exact‖`.
pub fn solution_error(numerical: &GridFunction, exact: &GridFunction) -> Result<f64> {
    if numerical.len() != exact.len() {
        return Err(Error::LengthMismatch {
            expected: exact.len(),
            found: numerical.len(),
        });
    }
    let denom = exact.norm2();
    if denom == 0.0 {
        return Err(Error::ZeroNorm);
    }
    Ok((numerical - exact).norm2() / denom)
}

/// Drift of the three global invariants over a trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantErrors {
    /// `Errℓ` for laws 1, 2, 3.
    pub err: [f64; 3],
    pub preserved_laws: Vec<Law>,
    pub fallback_used: Vec<Law>,
}

impl InvariantErrors {
    pub fn get(&self, law: Law) -> f64 {
        self.err[law.index() as usize - 1]
    }
}

/// `Errℓ = dx · max_j |Σᵢ G̃ℓ(t_j) − Σᵢ G̃ℓ(t_0)|`.
pub fn invariant_errors(traj: &Trajectory) -> InvariantErrors {
    let mut err = [0.0; 3];
    let first = traj.invariants.first().copied();
    if let Some(first) = first {
        for sums in &traj.invariants {
            for k in 0..3 {
                err[k] = f64::max(err[k], (sums.sums[k] - first.sums[k]).abs());
            }
        }
    }
    for e in &mut err {
        *e *= traj.grid.dx();
    }
    let fallback_used = first
        .map(|f| Law::ALL.into_iter().filter(|l| f.fallback[l.index() as usize - 1]).collect())
        .unwrap_or_default();
    InvariantErrors {
        err,
        preserved_laws: traj.scheme.family.preserved_laws().to_vec(),
        fallback_used,
    }
}

/// Peak-position errors `x̃ − x` (numerical minus exact) for the fast and
/// slow soliton.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseErrors {
    pub phi1: f64,
    pub phi2: f64,
}

impl PhaseErrors {
    pub fn phi(&self) -> f64 {
        self.phi1 - self.phi2
    }
}

/// Every error metric of one benchmark run.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorReport {
    pub sol_err: f64,
    pub err1: f64,
    pub err2: f64,
    pub err3: f64,
    pub err_phi1: Option<f64>,
    pub err_phi2: Option<f64>,
    pub err_phi: Option<f64>,
    pub preserved_laws: Vec<Law>,
    pub fallback_used: Vec<Law>,
}

impl ErrorReport {
    pub fn new(sol_err: f64, inv: InvariantErrors, phase: Option<PhaseErrors>) -> Self {
        Self {
            sol_err,
            err1: inv.err[0],
            err2: inv.err[1],
            err3: inv.err[2],
            err_phi1: phase.map(|p| p.phi1),
            err_phi2: phase.map(|p| p.phi2),
            err_phi: phase.map(|p| p.phi()),
            preserved_laws: inv.preserved_laws,
            fallback_used: inv.fallback_used,
        }
    }

    pub fn err(&self, law: Law) -> f64 {
        match law {
            Law::Mass => self.err1,
            Law::Momentum => self.err2,
            Law::Energy => self.err3,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::schemes::{SchemeFamily, SchemeSpec};
    use crate::solver::{integrate, NewtonConfig};
    use proptest::prelude::*;

    #[test]
    fn identical_fields_have_zero_error() {
        let u = GridFunction::new(vec![1.0, -2.0, 0.5]);
        assert_eq!(solution_error(&u, &u).unwrap(), 0.0);
    }

    #[test]
    fn scaled_field_error_is_exact() {
        let u = GridFunction::new(vec![1.0, -2.0, 0.5, 3.0]);
        let e = solution_error(&u.scale(1.01), &u).unwrap();
        assert!((e - 0.01).abs() <= 1e-15);
    }

    #[test]
    fn zero_exact_field_rejected() {
        let z = GridFunction::zeros(4);
        assert_eq!(solution_error(&z, &z), Err(Error::ZeroNorm));
        assert!(solution_error(&GridFunction::zeros(3), &GridFunction::constant(4, 1.0)).is_err());
    }

    proptest! {
        #[test]
        fn solution_error_is_scale_invariant(
            a in prop::collection::vec(-5.0f64..5.0, 8),
            b in prop::collection::vec(-5.0f64..5.0, 8),
            s in 0.01f64..100.0,
        ) {
            let (a, b) = (GridFunction::new(a), GridFunction::new(b));
            prop_assume!(b.norm2() > 1e-3);
            let e1 = solution_error(&a, &b).unwrap();
            let e2 = solution_error(&a.scale(s), &b.scale(s)).unwrap();
            prop_assert!((e1 - e2).abs() <= 1e-12 * e1.max(1.0));
        }
    }

    #[test]
    fn constant_trajectory_has_no_drift() {
        let grid = Grid::new(0.0, 4.0, 20, 0.05).unwrap();
        for family in SchemeFamily::ALL {
            let spec = SchemeSpec::plain(family);
            let traj = integrate(&spec, &grid, &GridFunction::constant(20, 0.6), 3, &NewtonConfig::default()).unwrap();
            let inv = invariant_errors(&traj);
            assert!(inv.err.iter().all(|&e| e <= 1e-14), "{family}: {:?}", inv.err);
            assert_eq!(inv.preserved_laws, family.preserved_laws());
        }
    }

    #[test]
    fn fallback_laws_reported() {
        let grid = Grid::new(0.0, 4.0, 20, 0.05).unwrap();
        let spec = SchemeSpec::plain(SchemeFamily::MC8);
        let traj = integrate(&spec, &grid, &GridFunction::constant(20, 0.6), 1, &NewtonConfig::default()).unwrap();
        assert_eq!(invariant_errors(&traj).fallback_used, vec![Law::Energy]);
    }

    #[test]
    fn phase_difference() {
        let p = PhaseErrors { phi1: 0.1, phi2: 0.03 };
        let r = ErrorReport::new(0.2, InvariantErrors { err: [0.0; 3], preserved_laws: vec![], fallback_used: vec![] }, Some(p));
        assert_eq!(r.err_phi, Some(0.1 - 0.03));
    }
}
