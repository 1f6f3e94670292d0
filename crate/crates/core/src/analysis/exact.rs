//! Closed-form mKdV solutions used as benchmarks.

use crate::error::{Error, Result};

/// Parameters of the two-soliton solution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoSolitonParams {
    pub c1: f64,
    pub c2: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Default for TwoSolitonParams {
    fn default() -> Self {
        Self {
            c1: 2.5,
            c2: 0.5,
            d1: 12.0,
            d2: 2.5,
        }
    }
}

impl TwoSolitonParams {
    pub fn new(c1: f64, c2: f64, d1: f64, d2: f64) -> Result<Self> {
        if !(c1 > c2 && c2 > 0.0) || !d1.is_finite() || !d2.is_finite() || !c1.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "two-soliton speeds need c1 > c2 > 0, got c1={c1}, c2={c2}"
            )));
        }
        Ok(Self { c1, c2, d1, d2 })
    }

    pub fn kappa(&self) -> f64 {
        let (r1, r2) = (self.c1.sqrt(), self.c2.sqrt());
        (r1 + r2) / (r1 - r2)
    }
}

pub fn exact_two_soliton(p: &TwoSolitonParams, x: f64, t: f64) -> f64 {
    let (r1, r2) = (p.c1.sqrt(), p.c2.sqrt());
    let k = p.kappa();
    let xi1 = r1 * (x - p.c1 * t + p.d1);
    let xi2 = r2 * (x - p.c2 * t + p.d2);
    let num = 2.0 * 6f64.sqrt() * k * (r1 * xi2.cosh() + r2 * xi1.cosh());
    let den = (k * k - 1.0) + k * k * (xi1 - xi2).cosh() + (xi1 + xi2).cosh();
    num / den
}

const BREATHER_BETA: f64 = 2.0 * 1.732_050_807_568_877_2;

fn breather_phase(x: f64, t: f64) -> f64 {
    2.0 * x - 64.0 * t - std::f64::consts::FRAC_PI_2
}

/// Potential whose x-derivative is the breather.
pub fn breather_potential(x: f64, t: f64) -> f64 {
    let th = breather_phase(x, t);
    -2.0 * 6f64.sqrt() * (3f64.sqrt() * th.sin() / (BREATHER_BETA * x).cosh()).atan()
}

/// Breather solution, differentiated in closed form.
pub fn exact_breather(x: f64, t: f64) -> f64 {
    let th = breather_phase(x, t);
    let (s, c) = th.sin_cos();
    let bx = BREATHER_BETA * x;
    let (ch, sh) = (bx.cosh(), bx.sinh());
    -2.0 * 18f64.sqrt() * (2.0 * c * ch - BREATHER_BETA * s * sh) / (ch * ch + 3.0 * s * s)
}
