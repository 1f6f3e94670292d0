use crate::grid::TwoLevelField;
use crate::scalar::Scalar;

/// Step sizes and the dimensional parameter `λ = λᵢ·dx²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Steps {
    pub dx: f64,
    pub dt: f64,
    pub lambda: f64,
}

/// Two-level window on which flux and characteristic formulas are evaluated.
pub(crate) struct Stencil<'a, T> {
    pub field: &'a TwoLevelField<T>,
    pub dx: f64,
    pub dt: f64,
    pub lambda: f64,
}

impl<'a, T: Scalar> Stencil<'a, T> {
    pub fn new(field: &'a TwoLevelField<T>, steps: Steps) -> Self {
        Self {
            field,
            dx: steps.dx,
            dt: steps.dt,
            lambda: steps.lambda,
        }
    }

    /// `u_{k,·}`: the window shifted by `k` nodes.
    pub fn u(&self, k: isize) -> TwoLevelField<T> {
        self.field.shift(k)
    }
}
