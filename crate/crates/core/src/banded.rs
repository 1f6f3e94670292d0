//! Cyclic banded matrices (banded plus periodic corner blocks) and an exact
//! direct solver for them.
//!
//! The solver splits off the last `hb` rows and columns. What remains is a
//! plain banded block, factorized by banded LU with partial pivoting; the
//! corners are absorbed by a dense `hb × hb` Schur complement.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct CyclicBandedMatrix {
    m: usize,
    hb: usize,
    /// Row-major, `2hb + 1` entries per row; slot `off + hb` holds
    /// entry `(r, (r + off) mod m)`.
    data: Vec<f64>,
}

impl CyclicBandedMatrix {
    /// # Panics
    /// If `m < 2·hb + 1` (band offsets would alias).
    pub fn zeros(m: usize, hb: usize) -> Self {
        assert!(m > 2 * hb, "cyclic band of half-width {hb} needs more than {} rows", 2 * hb);
        Self {
            m,
            hb,
            data: vec![0.0; m * (2 * hb + 1)],
        }
    }

    pub fn identity(m: usize, hb: usize) -> Self {
        let mut a = Self::zeros(m, hb);
        for r in 0..m {
            a.set(r, r, 1.0);
        }
        a
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn half_bandwidth(&self) -> usize {
        self.hb
    }

    /// Signed band offset of `(r, c)`, if the entry lies inside the band.
    pub fn band_offset(&self, r: usize, c: usize) -> Option<isize> {
        let m = self.m as isize;
        let hb = self.hb as isize;
        let d = (c as isize - r as isize).rem_euclid(m);
        if d <= hb {
            Some(d)
        } else if d >= m - hb {
            Some(d - m)
        } else {
            None
        }
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        match self.band_offset(r, c) {
            Some(off) => self.data[r * (2 * self.hb + 1) + (off + self.hb as isize) as usize],
            None => 0.0,
        }
    }

    /// # Panics
    /// If `(r, c)` lies outside the band.
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        let off = self
            .band_offset(r, c)
            .unwrap_or_else(|| panic!("entry ({r}, {c}) outside cyclic band {}", self.hb));
        let w = 2 * self.hb + 1;
        self.data[r * w + (off + self.hb as isize) as usize] = v;
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: f64) {
        let cur = self.get(r, c);
        self.set(r, c, cur + v);
    }

    /// `(column, value)` pairs stored for row `r`.
    pub fn row_entries(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let m = self.m as isize;
        let hb = self.hb as isize;
        let w = 2 * self.hb + 1;
        (-hb..=hb).map(move |off| {
            let c = (r as isize + off).rem_euclid(m) as usize;
            (c, self.data[r * w + (off + hb) as usize])
        })
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.m);
        (0..self.m)
            .map(|r| self.row_entries(r).map(|(c, v)| v * x[c]).sum())
            .collect()
    }

    pub fn norm_inf(&self) -> f64 {
        (0..self.m)
            .map(|r| self.row_entries(r).map(|(_, v)| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `B[r][c] = A[r][c + s]` (indices mod M), or `None` if some nonzero
    /// entry would leave the band.
    fn shift_columns(&self, s: isize) -> Option<Self> {
        let (m, hb) = (self.m as isize, self.hb as isize);
        let mut b = Self::zeros(self.m, self.hb);
        for r in 0..m {
            for o in -hb..=hb {
                let v = self.get(r as usize, (r + o).rem_euclid(m) as usize);
                if v == 0.0 {
                    continue;
                }
                if (o - s).abs() > hb {
                    return None;
                }
                b.set(r as usize, (r + o - s).rem_euclid(m) as usize, v);
            }
        }
        Some(b)
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.m * self.m];
        for r in 0..self.m {
            for (c, v) in self.row_entries(r) {
                d[r * self.m + c] = v;
            }
        }
        d
    }
}

/// Banded LU (partial pivoting) of a non-cyclic `n × n` matrix with lower and
/// upper bandwidth `hb`. Fill from pivoting widens the upper band to `2hb`.
struct BandLu {
    n: usize,
    hb: usize,
    /// Row `r` stores columns `r - hb ..= r + 2hb`.
    u: Vec<f64>,
    l: Vec<f64>,
    perm: Vec<usize>,
}

impl BandLu {
    fn width(hb: usize) -> usize {
        3 * hb + 1
    }

    fn factor(a: &CyclicBandedMatrix, n: usize, tol: f64) -> Result<Self> {
        let hb = a.hb;
        let w = Self::width(hb);
        let mut u = vec![0.0; n * w];
        for r in 0..n {
            let c0 = r.saturating_sub(hb);
            let c1 = (r + hb).min(n - 1);
            for c in c0..=c1 {
                u[r * w + (c + hb - r)] = a.get(r, c);
            }
        }
        let idx = |r: usize, c: usize| r * w + (c + hb - r);
        let mut l = vec![0.0; n * hb];
        let mut perm = vec![0; n];

        for k in 0..n {
            let last = (k + hb).min(n - 1);
            let mut p = k;
            let mut best = u[idx(k, k)].abs();
            for r in k + 1..=last {
                let v = u[idx(r, k)].abs();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            if best <= tol {
                return Err(Error::Singular { row: k, pivot: best });
            }
            perm[k] = p;
            let col_end = (k + 2 * hb).min(n - 1);
            if p != k {
                for c in k..=col_end {
                    u.swap(idx(k, c), idx(p, c));
                }
            }
            let pivot = u[idx(k, k)];
            for r in k + 1..=last {
                let f = u[idx(r, k)] / pivot;
                l[k * hb + (r - k - 1)] = f;
                u[idx(r, k)] = 0.0;
                if f != 0.0 {
                    for c in k + 1..=col_end {
                        u[idx(r, c)] -= f * u[idx(k, c)];
                    }
                }
            }
        }
        Ok(Self { n, hb, u, l, perm })
    }

    fn solve_in_place(&self, b: &mut [f64]) {
        let (n, hb) = (self.n, self.hb);
        let w = Self::width(hb);
        for k in 0..n {
            b.swap(k, self.perm[k]);
            let bk = b[k];
            for r in k + 1..=(k + hb).min(n - 1) {
                b[r] -= self.l[k * hb + (r - k - 1)] * bk;
            }
        }
        for k in (0..n).rev() {
            let mut s = b[k];
            for c in k + 1..=(k + 2 * hb).min(n - 1) {
                s -= self.u[k * w + (c + hb - k)] * b[c];
            }
            b[k] = s / self.u[k * w + hb];
        }
    }
}

/// Dense LU with partial pivoting on a row-major `n × n` matrix; solves in
/// place. Pivots at or below `tol` are reported as singular.
pub(crate) fn dense_solve(mut a: Vec<f64>, n: usize, b: &mut [f64], tol: f64) -> Result<()> {
    for k in 0..n {
        let (p, best) = (k..n)
            .map(|r| (r, a[r * n + k].abs()))
            .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= tol {
            return Err(Error::Singular { row: k, pivot: best });
        }
        if p != k {
            for c in 0..n {
                a.swap(k * n + c, p * n + c);
            }
            b.swap(k, p);
        }
        let pivot = a[k * n + k];
        for r in k + 1..n {
            let f = a[r * n + k] / pivot;
            if f != 0.0 {
                for c in k..n {
                    a[r * n + c] -= f * a[k * n + c];
                }
                b[r] -= f * b[k];
            }
        }
    }
    for k in (0..n).rev() {
        let mut s = b[k];
        for c in k + 1..n {
            s -= a[k * n + c] * b[c];
        }
        b[k] = s / a[k * n + k];
    }
    Ok(())
}

/// Solves `A x = rhs` for a cyclic banded `A`.
///
/// Fails with [`Error::Singular`] when a pivot falls below `1e-14·‖A‖∞`.
pub fn solve_cyclic_banded(a: &CyclicBandedMatrix, rhs: &[f64]) -> Result<Vec<f64>> {
    let m = a.dim();
    if rhs.len() != m {
        return Err(Error::LengthMismatch {
            expected: m,
            found: rhs.len(),
        });
    }
    let tol = 1e-14 * a.norm_inf();
    let shift = winding_number(a);
    let shifted = if shift == 0 { None } else { a.shift_columns(shift) };
    let attempt = match shifted {
        None => bordered_solve(a, rhs, tol),
        Some(b) => bordered_solve(&b, rhs, tol).map(|y| {
            let mut x = vec![0.0; m];
            for (c, v) in y.into_iter().enumerate() {
                x[(c as isize + shift).rem_euclid(m as isize) as usize] = v;
            }
            x
        }),
    };
    match attempt {
        Ok(x) => Ok(x),
        // The banded block can be singular while the full matrix is not.
        Err(Error::Singular { .. }) => {
            let mut x = rhs.to_vec();
            dense_solve(a.to_dense(), m, &mut x, tol)?;
            Ok(x)
        }
        Err(e) => Err(e),
    }
}

/// Winding number about 0 of the row-averaged symbol `c(z) = Σₒ āₒ zᵒ` on
/// the unit circle. Truncated banded blocks of a matrix whose symbol winds
/// are close to singular; shifting columns by the winding number removes it.
fn winding_number(a: &CyclicBandedMatrix) -> isize {
    let (m, hb) = (a.dim(), a.half_bandwidth() as isize);
    let coeffs: Vec<(isize, f64)> = (-hb..=hb)
        .map(|o| {
            let sum: f64 = (0..m).map(|r| a.get(r, (r as isize + o).rem_euclid(m as isize) as usize)).sum();
            (o, sum / m as f64)
        })
        .filter(|&(_, v)| v != 0.0)
        .collect();
    const SAMPLES: usize = 256;
    let symbol = |k: usize| {
        let th = std::f64::consts::TAU * k as f64 / SAMPLES as f64;
        coeffs.iter().fold((0.0, 0.0), |(re, im), &(o, v)| {
            let (s, c) = (o as f64 * th).sin_cos();
            (re + v * c, im + v * s)
        })
    };
    let mut total = 0.0;
    let (mut pr, mut pi) = symbol(0);
    for k in 1..=SAMPLES {
        let (re, im) = symbol(k % SAMPLES);
        // angle increment between consecutive samples
        total += (pr * im - pi * re).atan2(pr * re + pi * im);
        (pr, pi) = (re, im);
    }
    let w = (total / std::f64::consts::TAU).round() as isize;
    w.clamp(-hb, hb)
}

fn bordered_solve(a: &CyclicBandedMatrix, rhs: &[f64], tol: f64) -> Result<Vec<f64>> {
    let m = a.dim();
    let k = a.half_bandwidth();
    let n1 = m - k;
    let lu = BandLu::factor(a, n1, tol)?;

    // Y = A11⁻¹ A12, one column per border column.
    let mut y = vec![vec![0.0; n1]; k];
    for (j, col) in y.iter_mut().enumerate() {
        for (r, v) in col.iter_mut().enumerate() {
            *v = a.get(r, n1 + j);
        }
        lu.solve_in_place(col);
    }
    let mut z = rhs[..n1].to_vec();
    lu.solve_in_place(&mut z);

    // Schur complement S = A22 - A21 Y and reduced right-hand side.
    let mut s = vec![0.0; k * k];
    let mut r2 = rhs[n1..].to_vec();
    for i in 0..k {
        let row = n1 + i;
        let a21: Vec<(usize, f64)> = a.row_entries(row).filter(|&(c, v)| c < n1 && v != 0.0).collect();
        for j in 0..k {
            let dot: f64 = a21.iter().map(|&(c, v)| v * y[j][c]).sum();
            s[i * k + j] = a.get(row, n1 + j) - dot;
        }
        r2[i] -= a21.iter().map(|&(c, v)| v * z[c]).sum::<f64>();
    }
    dense_solve(s, k, &mut r2, tol)?;

    let mut x = z;
    for (j, col) in y.iter().enumerate() {
        let xj = r2[j];
        for (xi, yi) in x.iter_mut().zip(col) {
            *xi -= yi * xj;
        }
    }
    x.extend_from_slice(&r2);
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(m: usize, hb: usize, rng: &mut ChaCha8Rng) -> CyclicBandedMatrix {
        let mut a = CyclicBandedMatrix::zeros(m, hb);
        for r in 0..m {
            for off in -(hb as isize)..=hb as isize {
                let c = (r as isize + off).rem_euclid(m as isize) as usize;
                a.set(r, c, rng.random_range(-1.0..1.0));
            }
            // keep it comfortably nonsingular
            a.add_to(r, r, 2.0 * hb as f64 + 1.0);
        }
        a
    }

    fn max_abs(v: &[f64]) -> f64 {
        v.iter().fold(0.0, |a, x| a.max(x.abs()))
    }

    #[test]
    fn identity_solve_returns_rhs() {
        let a = CyclicBandedMatrix::identity(12, 3);
        let r: Vec<f64> = (0..12).map(|i| i as f64 - 5.5).collect();
        assert_eq!(solve_cyclic_banded(&a, &r).unwrap(), r);
    }

    #[test]
    fn recovers_constructed_solution() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let a = random_matrix(16, 4, &mut rng);
            let x0: Vec<f64> = (0..16).map(|_| rng.random_range(-3.0..3.0)).collect();
            let rhs = a.mul_vec(&x0);
            let x = solve_cyclic_banded(&a, &rhs).unwrap();
            let err: Vec<f64> = x.iter().zip(&x0).map(|(a, b)| a - b).collect();
            assert!(max_abs(&err) <= 1e-10 * max_abs(&x0));
        }
    }

    #[test]
    fn singular_block_falls_back_to_dense() {
        // Cyclic shift permutation: the leading banded block is singular
        // but the whole matrix is a permutation.
        let m = 10;
        let mut a = CyclicBandedMatrix::zeros(m, 2);
        for r in 0..m {
            a.set(r, (r + m - 1) % m, 1.0);
        }
        let rhs: Vec<f64> = (0..m).map(|i| i as f64).collect();
        let x = solve_cyclic_banded(&a, &rhs).unwrap();
        let back = a.mul_vec(&x);
        assert!(back.iter().zip(&rhs).all(|(a, b)| (a - b).abs() < 1e-12));

        // Identity with the first and last unknown swapped: column 0 of the
        // leading block is empty and the symbol does not wind.
        let mut b = CyclicBandedMatrix::identity(m, 2);
        b.set(0, 0, 0.0);
        b.set(m - 1, m - 1, 0.0);
        b.set(0, m - 1, 1.0);
        b.set(m - 1, 0, 1.0);
        assert_eq!(winding_number(&b), 0);
        let x = solve_cyclic_banded(&b, &rhs).unwrap();
        assert_eq!(x[0], rhs[m - 1]);
        assert_eq!(x[m - 1], rhs[0]);
    }

    #[test]
    fn one_sided_stencil_is_shifted() {
        // Third difference plus a small average on offsets -2..1, the shape
        // of the 8-point Jacobians.
        let m = 400;
        let eps = 0.04;
        let mut a = CyclicBandedMatrix::zeros(m, 3);
        for r in 0..m {
            for (o, v) in [(-2isize, -1.0), (-1, 3.0 + eps), (0, -3.0 + eps), (1, 1.0)] {
                a.set(r, (r as isize + o).rem_euclid(m as isize) as usize, v);
            }
        }
        assert_eq!(winding_number(&a), -1);
        assert!(bordered_solve(&a, &vec![1.0; m], 1e-14 * a.norm_inf()).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x0: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
        let x = solve_cyclic_banded(&a, &a.mul_vec(&x0)).unwrap();
        let err: Vec<f64> = x.iter().zip(&x0).map(|(a, b)| a - b).collect();
        assert!(max_abs(&err) <= 1e-9, "{}", max_abs(&err));
    }

    #[test]
    fn singular_matrix_is_reported() {
        let a = CyclicBandedMatrix::zeros(10, 2);
        assert!(matches!(
            solve_cyclic_banded(&a, &[1.0; 10]),
            Err(Error::Singular { .. })
        ));
        // rank-deficient: every row the same constant stencil summing to zero
        let mut b = CyclicBandedMatrix::zeros(10, 1);
        for r in 0..10 {
            b.set(r, r, 1.0);
            b.set(r, (r + 1) % 10, -1.0);
        }
        assert!(matches!(
            solve_cyclic_banded(&b, &[1.0; 10]),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn band_pattern() {
        let a = CyclicBandedMatrix::zeros(12, 3);
        assert_eq!(a.band_offset(0, 11), Some(-1));
        assert_eq!(a.band_offset(11, 1), Some(2));
        assert_eq!(a.band_offset(0, 6), None);
        assert_eq!(a.get(0, 6), 0.0);
    }

    #[test]
    #[should_panic]
    fn set_outside_band_panics() {
        let mut a = CyclicBandedMatrix::zeros(12, 2);
        a.set(0, 5, 1.0);
    }
}
