//! Peak location by piecewise cubic (Hermite) interpolation and soliton phase
//! errors.

use super::exact::{exact_two_soliton, TwoSolitonParams};
use super::metrics::PhaseErrors;
use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction};

/// Half-width of the search window around an expected peak.
pub const PEAK_WINDOW: f64 = 2.0;

/// Fourth-order central slope at node `k` (periodic).
fn slope(f: &GridFunction, k: isize, dx: f64) -> f64 {
    (f.at(k - 2) - 8.0 * f.at(k - 1) + 8.0 * f.at(k + 1) - f.at(k + 2)) / (12.0 * dx)
}

/// Maximum of the Hermite cubic on `[x_i, x_i + h]` as `(s, value)` with
/// `s ∈ [0, 1]`.
fn hermite_max(f0: f64, f1: f64, m0: f64, m1: f64, h: f64) -> (f64, f64) {
    let eval = |s: f64| {
        let (s2, s3) = (s * s, s * s * s);
        (2.0 * s3 - 3.0 * s2 + 1.0) * f0
            + (s3 - 2.0 * s2 + s) * h * m0
            + (-2.0 * s3 + 3.0 * s2) * f1
            + (s3 - s2) * h * m1
    };
    // d/ds = a s² + b s + c
    let a = 6.0 * f0 + 3.0 * h * m0 - 6.0 * f1 + 3.0 * h * m1;
    let b = -6.0 * f0 - 4.0 * h * m0 + 6.0 * f1 - 2.0 * h * m1;
    let c = h * m0;
    let mut roots = Vec::with_capacity(2);
    if a.abs() <= 1e-14 * (b.abs() + c.abs()) {
        if b != 0.0 {
            roots.push(-c / b);
        }
    } else {
        let disc = b * b - 4.0 * a * c;
        if disc >= 0.0 {
            let q = -0.5 * (b + b.signum() * disc.sqrt());
            if q != 0.0 {
                roots.push(q / a);
                roots.push(c / q);
            } else {
                roots.push(0.0);
            }
        }
    }
    let mut best = (0.0, f0);
    if f1 > best.1 {
        best = (1.0, f1);
    }
    for s in roots.into_iter().filter(|s| (0.0..=1.0).contains(s)) {
        let v = eval(s);
        if v > best.1 {
            best = (s, v);
        }
    }
    best
}

/// Abscissa of the interpolant's maximum within `[lo, hi]`.
pub fn peak_location_in(grid: &Grid, f: &GridFunction, lo: f64, hi: f64) -> Result<f64> {
    let (dx, m) = (grid.dx(), grid.m());
    let first = ((lo - grid.a()) / dx).ceil().max(0.0) as usize;
    let last = (((hi - grid.a()) / dx).floor() as usize).min(m - 1);
    if last <= first + 1 {
        return Err(Error::NoPeak { lo, hi });
    }
    let vals = f.values();
    let k = (first..=last)
        .max_by(|&i, &j| vals[i].total_cmp(&vals[j]).then(j.cmp(&i)))
        .expect("non-empty window");
    if k == first || k == last {
        return Err(Error::NoPeak { lo, hi });
    }
    let ki = k as isize;
    let mk = slope(f, ki, dx);
    let xk = grid.x(k);
    if mk == 0.0 {
        return Ok(xk);
    }
    let (sl, vl) = hermite_max(vals[k - 1], vals[k], slope(f, ki - 1, dx), mk, dx);
    let (sr, vr) = hermite_max(vals[k], vals[k + 1], mk, slope(f, ki + 1, dx), dx);
    Ok(if vl > vr { xk - (1.0 - sl) * dx } else { xk + sr * dx })
}

/// Peak of `f`, searched within `PEAK_WINDOW` of `near` or over the whole
/// grid.
pub fn peak_location(grid: &Grid, f: &GridFunction, near: Option<f64>) -> Result<f64> {
    match near {
        Some(x) => peak_location_in(grid, f, x - PEAK_WINDOW, x + PEAK_WINDOW),
        None => peak_location_in(grid, f, grid.a(), grid.b()),
    }
}

fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}

/// Exact `(fast, slow)` peak positions at time `t` on `[a, b]`, from a dense
/// scan refined by golden-section search.
pub fn exact_peaks(p: &TwoSolitonParams, t: f64, a: f64, b: f64) -> Result<(f64, f64)> {
    let h = 1e-3;
    let n = ((b - a) / h).round() as usize;
    let u: Vec<f64> = (0..=n).map(|i| exact_two_soliton(p, a + i as f64 * h, t)).collect();
    let mut peaks: Vec<(usize, f64)> = (1..n)
        .filter(|&i| u[i] > u[i - 1] && u[i] >= u[i + 1])
        .map(|i| (i, u[i]))
        .collect();
    if peaks.len() < 2 {
        return Err(Error::NoPeak { lo: a, hi: b });
    }
    peaks.sort_by(|x, y| y.1.total_cmp(&x.1));
    let refine = |i: usize| {
        let x = a + i as f64 * h;
        golden_max(|x| exact_two_soliton(p, x, t), x - h, x + h, 1e-12)
    };
    Ok((refine(peaks[0].0), refine(peaks[1].0)))
}

/// Phase errors of a numerical two-soliton state at time `t`, as numerical
/// minus exact peak position (negative when the numerical soliton lags).
pub fn phase_errors(grid: &Grid, num_final: &GridFunction, p: &TwoSolitonParams, t: f64) -> Result<PhaseErrors> {
    let (x1, x2) = exact_peaks(p, t, grid.a(), grid.b())?;
    // Strongly dispersive schemes lag by nearly two units on coarse grids, so
    // each window reaches halfway to the other soliton.
    let w = PEAK_WINDOW.max(0.5 * (x1 - x2).abs());
    let n1 = peak_location_in(grid, num_final, x1 - w, x1 + w)?;
    let n2 = peak_location_in(grid, num_final, x2 - w, x2 + w)?;
    Ok(PhaseErrors {
        phi1: n1 - x1,
        phi2: n2 - x2,
    })
}
