//! Periodic space-time grid, single- and two-level grid functions, and the
//! forward shift, difference and average operators that every scheme is
//! assembled from.
//!
//! Spatial indices are always taken modulo `M`. A formula term `u_{i,j}`
//! evaluated at row `m` reads level `j` at node `(m + i) mod M`, which is
//! exactly `shift(i)` applied to the stored field.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Smallest admissible number of nodes (widest stencil covers five nodes).
pub const MIN_NODES: usize = 8;

/// Uniform periodic grid on `[a, b)` with `m` nodes and time step `dt`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    a: f64,
    b: f64,
    m: usize,
    dx: f64,
    dt: f64,
}

impl Grid {
    pub fn new(a: f64, b: f64, m: usize, dt: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(Error::InvalidGrid(format!("need a < b, got [{a}, {b}]")));
        }
        if m < MIN_NODES {
            return Err(Error::InvalidGrid(format!(
                "need at least {MIN_NODES} nodes, got {m}"
            )));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidGrid(format!("time step must be positive, got {dt}")));
        }
        Ok(Self {
            a,
            b,
            m,
            dx: (b - a) / m as f64,
            dt,
        })
    }

    /// Builds a grid from a spatial step; `(b - a) / dx` must be an integer
    /// to within `1e-9`.
    pub fn with_spacing(a: f64, b: f64, dx: f64, dt: f64) -> Result<Self> {
        if !(dx.is_finite() && dx > 0.0) {
            return Err(Error::InvalidGrid(format!("dx must be positive, got {dx}")));
        }
        let ratio = (b - a) / dx;
        let m = ratio.round();
        if (ratio - m).abs() > 1e-9 {
            return Err(Error::InvalidGrid(format!(
                "(b - a) / dx = {ratio} is not an integer"
            )));
        }
        Self::new(a, b, m as usize, dt)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    /// Abscissa of node `i` (not reduced modulo `M`).
    pub fn x(&self, i: usize) -> f64 {
        self.a + i as f64 * self.dx
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.m).map(move |i| self.x(i))
    }

    /// Same spatial mesh with a different time step.
    pub fn with_dt(&self, dt: f64) -> Result<Self> {
        Self::new(self.a, self.b, self.m, dt)
    }

    /// Samples `f` at every node.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> GridFunction {
        GridFunction::new(self.nodes().map(f).collect())
    }
}

#[inline]
fn wrap(i: isize, m: usize) -> usize {
    i.rem_euclid(m as isize) as usize
}

/// Values on every node of one time level.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct GridFunction<T = f64> {
    values: Vec<T>,
}

impl<T: Scalar> GridFunction<T> {
    pub fn new(values: Vec<T>) -> Self {
        Self { values }
    }

    pub fn zeros(m: usize) -> Self {
        Self::constant(m, T::from_f64(0.0))
    }

    pub fn constant(m: usize, c: T) -> Self {
        Self { values: vec![c; m] }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.values.iter()
    }

    /// Reads node `i` with periodic wrap-around.
    #[inline]
    pub fn at(&self, i: isize) -> T {
        self.values[wrap(i, self.values.len())]
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self::new(self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        assert_eq!(self.len(), other.len(), "grid function length mismatch");
        Self::new(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| v.scale(c))
    }

    pub fn square(&self) -> Self {
        self.map(|v| v * v)
    }

    pub fn cube(&self) -> Self {
        self.map(|v| v * v * v)
    }

    /// `S_m^k`: result\[i\] = f\[(i + k) mod M\].
    pub fn shift(&self, k: isize) -> Self {
        let m = self.len();
        Self::new((0..m).map(|i| self.at(i as isize + k)).collect())
    }

    /// `D_m`: forward difference in space.
    pub fn d_m(&self, dx: f64) -> Self {
        let inv = 1.0 / dx;
        let m = self.len();
        Self::new(
            (0..m)
                .map(|i| (self.values[(i + 1) % m] - self.values[i]).scale(inv))
                .collect(),
        )
    }

    /// `μ_m`: forward average in space.
    pub fn mu_m(&self) -> Self {
        let m = self.len();
        Self::new(
            (0..m)
                .map(|i| (self.values[(i + 1) % m] + self.values[i]).scale(0.5))
                .collect(),
        )
    }

    pub fn sum(&self) -> T {
        let mut s = T::from_f64(0.0);
        for &v in &self.values {
            s += v;
        }
        s
    }

    pub fn max_abs(&self) -> f64 {
        self.values
            .iter()
            .fold(0.0, |acc: f64, v| acc.max(v.value().abs()))
    }

    /// First non-finite entry, if any.
    pub fn check_finite(&self) -> Result<()> {
        match self.values.iter().position(|v| !v.value().is_finite()) {
            Some(index) => Err(Error::NonFinite {
                index,
                value: self.values[index].value(),
            }),
            None => Ok(()),
        }
    }
}

impl GridFunction<f64> {
    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    /// Discrete 2-norm `sqrt(Σ v_i²)` (no `dx` weight).
    pub fn norm2(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

impl<T> From<Vec<T>> for GridFunction<T> {
    fn from(values: Vec<T>) -> Self {
        Self { values }
    }
}

macro_rules! pointwise_binop {
    ($ty:ident, $trait:ident, $method:ident, $op:tt) => {
        impl<T: Scalar> $trait<&$ty<T>> for &$ty<T> {
            type Output = $ty<T>;
            fn $method(self, rhs: &$ty<T>) -> $ty<T> {
                self.zip_with(rhs, |a, b| a $op b)
            }
        }
        impl<T: Scalar> $trait<$ty<T>> for $ty<T> {
            type Output = $ty<T>;
            fn $method(self, rhs: $ty<T>) -> $ty<T> {
                (&self).$method(&rhs)
            }
        }
        impl<T: Scalar> $trait<&$ty<T>> for $ty<T> {
            type Output = $ty<T>;
            fn $method(self, rhs: &$ty<T>) -> $ty<T> {
                (&self).$method(rhs)
            }
        }
        impl<T: Scalar> $trait<$ty<T>> for &$ty<T> {
            type Output = $ty<T>;
            fn $method(self, rhs: $ty<T>) -> $ty<T> {
                self.$method(&rhs)
            }
        }
    };
}

pointwise_binop!(GridFunction, Add, add, +);
pointwise_binop!(GridFunction, Sub, sub, -);
pointwise_binop!(GridFunction, Mul, mul, *);

impl<T: Scalar> Mul<f64> for GridFunction<T> {
    type Output = GridFunction<T>;
    fn mul(self, c: f64) -> GridFunction<T> {
        self.scale(c)
    }
}

impl<T: Scalar> Mul<f64> for &GridFunction<T> {
    type Output = GridFunction<T>;
    fn mul(self, c: f64) -> GridFunction<T> {
        self.scale(c)
    }
}

impl<T: Scalar> Neg for GridFunction<T> {
    type Output = GridFunction<T>;
    fn neg(self) -> GridFunction<T> {
        self.map(|v| -v)
    }
}

/// The pair `(u^n, u^{n+1})` coupled by a one-step scheme.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoLevelField<T = f64> {
    level0: GridFunction<T>,
    level1: GridFunction<T>,
}

impl<T: Scalar> TwoLevelField<T> {
    pub fn new(level0: GridFunction<T>, level1: GridFunction<T>) -> Result<Self> {
        if level0.len() != level1.len() {
            return Err(Error::LengthMismatch {
                expected: level0.len(),
                found: level1.len(),
            });
        }
        Ok(Self { level0, level1 })
    }

    /// Both levels equal to `u`.
    pub fn stationary(u: GridFunction<T>) -> Self {
        Self {
            level1: u.clone(),
            level0: u,
        }
    }

    pub fn len(&self) -> usize {
        self.level0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.level0.is_empty()
    }

    pub fn level0(&self) -> &GridFunction<T> {
        &self.level0
    }

    pub fn level1(&self) -> &GridFunction<T> {
        &self.level1
    }

    pub fn into_levels(self) -> (GridFunction<T>, GridFunction<T>) {
        (self.level0, self.level1)
    }

    fn both(&self, f: impl Fn(&GridFunction<T>) -> GridFunction<T>) -> Self {
        Self {
            level0: f(&self.level0),
            level1: f(&self.level1),
        }
    }

    fn zip_levels(&self, other: &Self, f: impl Fn(&GridFunction<T>, &GridFunction<T>) -> GridFunction<T>) -> Self {
        Self {
            level0: f(&self.level0, &other.level0),
            level1: f(&self.level1, &other.level1),
        }
    }

    pub fn shift(&self, k: isize) -> Self {
        self.both(|g| g.shift(k))
    }

    pub fn d_m(&self, dx: f64) -> Self {
        self.both(|g| g.d_m(dx))
    }

    pub fn mu_m(&self) -> Self {
        self.both(|g| g.mu_m())
    }

    pub fn square(&self) -> Self {
        self.both(|g| g.square())
    }

    pub fn scale(&self, c: f64) -> Self {
        self.both(|g| g.scale(c))
    }

    /// `D_n`: forward difference in time, `(level1 - level0) / dt`.
    pub fn d_n(&self, dt: f64) -> GridFunction<T> {
        (&self.level1 - &self.level0).scale(1.0 / dt)
    }

    /// `μ_n`: forward average in time.
    pub fn mu_n(&self) -> GridFunction<T> {
        (&self.level1 + &self.level0).scale(0.5)
    }

    pub fn check_finite(&self) -> Result<()> {
        self.level0.check_finite()?;
        self.level1.check_finite()
    }
}

impl<T: Scalar> Add for &TwoLevelField<T> {
    type Output = TwoLevelField<T>;
    fn add(self, rhs: &TwoLevelField<T>) -> TwoLevelField<T> {
        self.zip_levels(rhs, |a, b| a + b)
    }
}

impl<T: Scalar> Add for TwoLevelField<T> {
    type Output = TwoLevelField<T>;
    fn add(self, rhs: TwoLevelField<T>) -> TwoLevelField<T> {
        &self + &rhs
    }
}

impl<T: Scalar> Mul for &TwoLevelField<T> {
    type Output = TwoLevelField<T>;
    fn mul(self, rhs: &TwoLevelField<T>) -> TwoLevelField<T> {
        self.zip_levels(rhs, |a, b| a * b)
    }
}

impl<T: Scalar> Mul for TwoLevelField<T> {
    type Output = TwoLevelField<T>;
    fn mul(self, rhs: TwoLevelField<T>) -> TwoLevelField<T> {
        &self * &rhs
    }
}

pub fn shift_space<T: Scalar>(f: &GridFunction<T>, k: isize) -> GridFunction<T> {
    f.shift(k)
}

pub fn fwd_diff_space<T: Scalar>(f: &GridFunction<T>, dx: f64) -> GridFunction<T> {
    f.d_m(dx)
}

pub fn fwd_avg_space<T: Scalar>(f: &GridFunction<T>) -> GridFunction<T> {
    f.mu_m()
}

pub fn fwd_diff_time<T: Scalar>(f: &TwoLevelField<T>, dt: f64) -> GridFunction<T> {
    f.d_n(dt)
}

pub fn fwd_avg_time<T: Scalar>(f: &TwoLevelField<T>) -> GridFunction<T> {
    f.mu_n()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(v: &[f64]) -> GridFunction {
        GridFunction::new(v.to_vec())
    }

    #[test]
    fn grid_rejects_degenerate_input() {
        assert!(Grid::new(0.0, 1.0, 7, 0.1).is_err());
        assert!(Grid::new(1.0, 0.0, 16, 0.1).is_err());
        assert!(Grid::new(0.0, 1.0, 16, 0.0).is_err());
        assert!(Grid::with_spacing(0.0, 1.0, 0.3, 0.1).is_err());
        let g = Grid::with_spacing(-20.0, 20.0, 0.1, 0.025).unwrap();
        assert_eq!(g.m(), 400);
        assert!((g.x(1) - (-19.9)).abs() < 1e-12);
    }

    #[test]
    fn shift_examples() {
        let f = gf(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(shift_space(&f, 1), gf(&[2.0, 3.0, 4.0, 1.0]));
        assert_eq!(shift_space(&f, 0), f);
        assert_eq!(shift_space(&f, -1), gf(&[4.0, 1.0, 2.0, 3.0]));
        assert_eq!(f.shift(1).shift(-1), f);
        assert_eq!(f.shift(4), f);
    }

    #[test]
    fn forward_difference_examples() {
        assert_eq!(fwd_diff_space(&gf(&[3.0; 6]), 0.1), gf(&[0.0; 6]));
        assert_eq!(
            fwd_diff_space(&gf(&[0.0, 1.0, 0.0, -1.0]), 1.0),
            gf(&[1.0, -1.0, -1.0, 1.0])
        );

        let grid = Grid::new(0.0, 4.0, 8, 0.1).unwrap();
        let x = grid.sample(|x| x);
        let d = fwd_diff_space(&x, grid.dx());
        for i in 0..7 {
            assert!((d.values()[i] - 1.0).abs() < 1e-14);
        }
        // wrap node: (a - x_{M-1}) / dx
        let expected = (grid.a() - grid.x(7)) / grid.dx();
        assert!((d.values()[7] - expected).abs() < 1e-14);
    }

    #[test]
    fn forward_average_examples() {
        assert_eq!(fwd_avg_space(&gf(&[2.5; 5])), gf(&[2.5; 5]));
        assert_eq!(fwd_avg_space(&gf(&[0.0, 2.0, 0.0, 2.0])), gf(&[1.0; 4]));

        // μ_m² equals convolution with weights (1/4, 1/2, 1/4) at offsets (0, 1, 2)
        let f = gf(&[1.0, 0.0, 0.0, 0.0]);
        let twice = f.mu_m().mu_m();
        let m = f.len();
        let conv: Vec<f64> = (0..m)
            .map(|i| {
                0.25 * f.values()[i] + 0.5 * f.values()[(i + 1) % m] + 0.25 * f.values()[(i + 2) % m]
            })
            .collect();
        assert_eq!(twice.values(), conv.as_slice());
        assert_eq!(twice, gf(&[0.25, 0.0, 0.25, 0.5]));
    }

    #[test]
    fn time_operators() {
        let u = gf(&[1.0, -2.0, 3.0, 0.5]);
        let stat = TwoLevelField::stationary(u.clone());
        assert_eq!(fwd_diff_time(&stat, 0.1), gf(&[0.0; 4]));
        assert_eq!(fwd_avg_time(&stat), u);

        let f = TwoLevelField::new(gf(&[0.0; 3]), gf(&[2.0; 3])).unwrap();
        assert_eq!(fwd_diff_time(&f, 0.5), gf(&[4.0; 3]));
        assert_eq!(fwd_avg_time(&f), gf(&[1.0; 3]));
    }

    #[test]
    fn mismatched_levels_rejected() {
        assert!(TwoLevelField::new(gf(&[0.0; 3]), gf(&[0.0; 4])).is_err());
    }

    fn field_strategy() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (8usize..40).prop_flat_map(|m| {
            (
                prop::collection::vec(-2.0..2.0f64, m),
                prop::collection::vec(-2.0..2.0f64, m),
            )
        })
    }

    fn close(a: &GridFunction, b: &GridFunction, tol: f64) -> bool {
        let scale = a.max_abs().max(b.max_abs()).max(1.0);
        a.iter().zip(b.iter()).all(|(x, y)| (x - y).abs() <= tol * scale)
    }

    proptest! {
        #[test]
        fn operators_commute((l0, l1) in field_strategy(), dx in 0.05..0.5f64, dt in 0.01..0.1f64) {
            let f = TwoLevelField::new(gf(&l0), gf(&l1)).unwrap();
            prop_assert!(close(&f.mu_m().d_n(dt), &f.d_n(dt).mu_m(), 1e-13));
            prop_assert!(close(&f.d_m(dx).d_n(dt), &f.d_n(dt).d_m(dx), 1e-13));
            prop_assert!(close(&f.mu_m().mu_n(), &f.mu_n().mu_m(), 1e-13));
            prop_assert!(close(&f.d_m(dx).mu_n(), &f.mu_n().d_m(dx), 1e-13));
            let g = f.level0();
            prop_assert!(close(&g.d_m(dx).mu_m(), &g.mu_m().d_m(dx), 1e-13));
        }

        #[test]
        fn forward_difference_sums_to_zero(v in prop::collection::vec(-1e3..1e3f64, 8..64), dx in 0.01..1.0f64) {
            let f = gf(&v);
            let s = f.d_m(dx).sum();
            prop_assert!(s.abs() <= 1e-12 * f.max_abs().max(1.0) / dx);
        }

        #[test]
        fn full_period_shift_is_identity(v in prop::collection::vec(-5.0..5.0f64, 8..32), k in -3isize..3) {
            let f = gf(&v);
            prop_assert_eq!(f.shift(v.len() as isize), f.clone());
            prop_assert_eq!(f.shift(k).shift(-k), f);
        }
    }
}
