//! `mkdv verify`: divergence identities, Jacobians and truncation orders.

use mkdv_core::verify::{check_divergence_identity, check_jacobian, check_truncation_order_default, SmoothField};
use mkdv_core::{SchemeFamily, SchemeSpec};

use crate::error::CliResult;

pub const IDENTITY_TOL: f64 = 1e-11;
pub const JACOBIAN_TOL: f64 = 1e-6;
pub const MIN_ORDER: f64 = 1.8;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub passed: bool,
    pub line: String,
}

fn representatives() -> Vec<SchemeSpec> {
    use SchemeFamily::*;
    [(EC8, 1.0), (MC8, -0.077), (EC10, 0.7), (MC10, 0.19), (NarrowBox, 0.0), (Multisymplectic, 0.0)]
        .into_iter()
        .map(|(f, l)| SchemeSpec::new(f, l).expect("valid representative"))
        .collect()
}

/// Runs every check. `trials` applies to the identity checks; the Jacobian
/// check uses a fifth of it (at least one).
pub fn run_checks(trials: usize, seed: u64) -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    let specs = representatives();
    for s in &specs {
        for &law in s.family.preserved_laws() {
            let rep = check_divergence_identity(s, law, trials, seed)?;
            checks.push(Check {
                passed: rep.passes(IDENTITY_TOL),
                line: format!(
                    "{} law {} identity: relative defect {:.2e} over {} trials",
                    s.label(),
                    law.index(),
                    rep.relative_defect(),
                    rep.trials
                ),
            });
        }
    }
    let jac_trials = (trials / 5).max(1);
    for s in &specs {
        let dev = check_jacobian(s, jac_trials, seed.wrapping_add(1))?;
        checks.push(Check {
            passed: dev <= JACOBIAN_TOL,
            line: format!("{} Jacobian vs finite differences: {dev:.2e}", s.label()),
        });
    }
    for s in &specs {
        for field in [SmoothField::sech_pulse(), SmoothField::trigonometric()] {
            let rep = check_truncation_order_default(s, &field)?;
            let order = rep.order.unwrap_or(f64::NAN);
            checks.push(Check {
                passed: order >= MIN_ORDER,
                line: format!("{} truncation order on {} field: {order:.3}", s.label(), field.name),
            });
        }
    }
    Ok(checks)
}
