//! Dense complex LU with partial pivoting for the small systems used here.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Pivots below this fraction of the largest matrix entry are treated as zero.
pub const PIVOT_TOLERANCE: f64 = 1e-14;

/// Relative residual (∞-norm) above which one refinement step is taken.
pub const REFINE_THRESHOLD: f64 = 1e-12;

/// Square row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows<const N: usize>(rows: &[[Complex64; N]; N]) -> Self {
        Self {
            n: N,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n, "dimension mismatch");
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> f64 {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

pub fn norm_inf(v: &[Complex64]) -> f64 {
    v.iter().fold(0.0, |m, z| m.max(z.norm()))
}

/// `PA = LU` with unit-diagonal `L` stored below the diagonal.
#[derive(Debug, Clone)]
pub struct LuFactors {
    lu: ComplexMatrix,
    perm: Vec<usize>,
}

impl LuFactors {
    pub fn factor(a: &ComplexMatrix) -> Result<Self> {
        if !a.is_finite() {
            return Err(Error::NonFinite);
        }
        let n = a.dim();
        let threshold = PIVOT_TOLERANCE * a.max_abs();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();

        for k in 0..n {
            let (p, pivot) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot <= threshold {
                return Err(Error::SingularSystem { pivot, threshold });
            }
            if p != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let d = lu[(k, k)];
            for i in k + 1..n {
                let l = lu[(i, k)] / d;
                lu[(i, k)] = l;
                if l == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= l * u;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.lu.dim();
        assert_eq!(b.len(), n, "dimension mismatch");
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= l * xj;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= u * xj;
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }

    /// Exact `‖A⁻¹‖₁` from `n` solves against the unit vectors.
    pub fn inverse_norm_1(&self) -> f64 {
        let n = self.lu.dim();
        (0..n)
            .map(|j| {
                let mut e = vec![Complex64::new(0.0, 0.0); n];
                e[j] = Complex64::new(1.0, 0.0);
                self.solve(&e).iter().map(|z| z.norm()).sum::<f64>()
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub x: Vec<Complex64>,
    /// `‖Ax − b‖∞ / ‖b‖∞` (or absolute when `b = 0`).
    pub relative_residual: f64,
    /// One-norm condition number `‖A‖₁ ‖A⁻¹‖₁`.
    pub condition: f64,
    pub refined: bool,
}

fn residual(a: &ComplexMatrix, x: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.mul_vec(x).iter().zip(b).map(|(ax, bi)| bi - ax).collect()
}

/// Solve `Ax = b`, taking a single refinement step if the first residual is
/// above [`REFINE_THRESHOLD`].
pub fn solve(a: &ComplexMatrix, b: &[Complex64]) -> Result<Solution> {
    if b.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::NonFinite);
    }
    let lu = LuFactors::factor(a)?;
    let scale = {
        let s = norm_inf(b);
        if s > 0.0 {
            s
        } else {
            1.0
        }
    };
    let mut x = lu.solve(b);
    let mut r = residual(a, &x, b);
    let mut relative_residual = norm_inf(&r) / scale;
    let mut refined = false;
    if relative_residual > REFINE_THRESHOLD {
        let dx = lu.solve(&r);
        let candidate: Vec<Complex64> = x.iter().zip(&dx).map(|(xi, di)| xi + di).collect();
        r = residual(a, &candidate, b);
        let candidate_residual = norm_inf(&r) / scale;
        if candidate_residual < relative_residual {
            x = candidate;
            relative_residual = candidate_residual;
        }
        refined = true;
    }
    let condition = a.norm_1() * lu.inverse_norm_1();
    Ok(Solution {
        x,
        relative_residual,
        condition,
        refined,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn solves_small_complex_system() {
        let a = ComplexMatrix::from_rows(&[
            [c(2.0, 1.0), c(1.0, 0.0), c(0.0, -1.0)],
            [c(0.0, 0.0), c(1.0, 1.0), c(3.0, 0.0)],
            [c(4.0, 0.0), c(0.0, 2.0), c(1.0, 0.0)],
        ]);
        let x_true = vec![c(1.0, -1.0), c(0.5, 2.0), c(-3.0, 0.25)];
        let b = a.mul_vec(&x_true);
        let sol = solve(&a, &b).unwrap();
        for (x, t) in sol.x.iter().zip(&x_true) {
            assert!((x - t).norm() < 1e-13);
        }
        assert!(sol.relative_residual < 1e-14);
        assert!(sol.condition >= 1.0);
    }

    #[test]
    fn pivoting_handles_zero_leading_entry() {
        let a = ComplexMatrix::from_rows(&[[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]);
        let sol = solve(&a, &[c(2.0, 0.0), c(3.0, 0.0)]).unwrap();
        assert_eq!(sol.x, vec![c(3.0, 0.0), c(2.0, 0.0)]);
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let a = ComplexMatrix::from_rows(&[[c(1.0, 1.0), c(2.0, 2.0)], [c(0.5, 0.5), c(1.0, 1.0)]]);
        assert!(matches!(
            LuFactors::factor(&a),
            Err(Error::SingularSystem { .. })
        ));
        let mut z = ComplexMatrix::identity(2);
        z[(1, 1)] = c(f64::NAN, 0.0);
        assert_eq!(LuFactors::factor(&z).unwrap_err(), Error::NonFinite);
    }

    #[test]
    fn identity_condition_is_one() {
        let sol = solve(&ComplexMatrix::identity(4), &[c(1.0, 0.0); 4]).unwrap();
        assert!((sol.condition - 1.0).abs() < 1e-15);
        assert!(!sol.refined);
    }
}
