//! Dense complex linear algebra for the fixed small sizes used by two-qubit
//! problems (2×2, 3×3, 4×4).
//!
//! Matrices are stack arrays indexed `[row][col]`. Eigenvalues of Hermitian
//! matrices come from a cyclic complex Jacobi iteration, which is backward
//! stable and accurate to a few ulps of the spectral norm at these sizes.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Absolute entrywise tolerance for accepting a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 64;

/// Square complex matrix of fixed dimension `N`, stored row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMatrix<const N: usize> {
    entries: [[Complex64; N]; N],
}

pub type Matrix2 = ComplexMatrix<2>;
pub type Matrix3 = ComplexMatrix<3>;
pub type Matrix4 = ComplexMatrix<4>;

impl<const N: usize> ComplexMatrix<N> {
    pub const DIM: usize = N;

    pub fn zeros() -> Self {
        Self {
            entries: [[Complex64::new(0.0, 0.0); N]; N],
        }
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.entries[i][i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from rows, rejecting NaN or infinite entries.
    pub fn from_rows(rows: [[Complex64; N]; N]) -> Result<Self> {
        let m = Self { entries: rows };
        if !m.is_finite() {
            return Err(Error::input("matrix has non-finite entries"));
        }
        Ok(m)
    }

    /// Builds a matrix with real entries.
    pub fn from_real(rows: [[f64; N]; N]) -> Result<Self> {
        Self::from_rows(rows.map(|r| r.map(|x| Complex64::new(x, 0.0))))
    }

    pub fn diagonal(diag: [Complex64; N]) -> Self {
        let mut m = Self::zeros();
        for (i, d) in diag.into_iter().enumerate() {
            m.entries[i][i] = d;
        }
        m
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.entries[i][j] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> &[[Complex64; N]; N] {
        &self.entries
    }

    /// Entries in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = &Complex64> {
        self.entries.iter().flatten()
    }

    pub fn is_finite(&self) -> bool {
        self.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn trace(&self) -> Complex64 {
        (0..N).map(|i| self.entries[i][i]).sum()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|i, j| self.entries[j][i].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.entries[j][i])
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::from_fn(|i, j| self.entries[i][j] * factor)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.iter()
            .zip(other.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from Hermiticity, `max |M - M†|`.
    pub fn hermiticity_error(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// Eigenvalues of a Hermitian matrix, ascending.
    pub fn hermitian_eigenvalues(&self) -> Result<[f64; N]> {
        let err = self.hermiticity_error();
        if err > HERMITIAN_TOL {
            return Err(Error::input(format!(
                "matrix is not Hermitian (max |M - M†| = {err:e})"
            )));
        }
        if !self.is_finite() {
            return Err(Error::input("matrix has non-finite entries"));
        }
        Ok(jacobi_eigenvalues(self))
    }
}

impl<const N: usize> Default for ComplexMatrix<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> Index<(usize, usize)> for ComplexMatrix<N> {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for ComplexMatrix<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i][j]
    }
}

impl<const N: usize> Add for ComplexMatrix<N> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.entries[i][j] + rhs.entries[i][j])
    }
}

impl<const N: usize> Sub for ComplexMatrix<N> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.entries[i][j] - rhs.entries[i][j])
    }
}

impl<const N: usize> Mul for ComplexMatrix<N> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| (0..N).map(|k| self.entries[i][k] * rhs.entries[k][j]).sum())
    }
}

/// Kronecker product of two 2×2 matrices; entry `(2i+k, 2j+l)` is `A[i][j]·B[k][l]`.
pub fn kron(a: &Matrix2, b: &Matrix2) -> Matrix4 {
    Matrix4::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}

/// Which tensor factor of a two-qubit operator to act on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    First,
    Second,
}

/// Partial transpose of a two-qubit operator over one tensor factor.
pub fn partial_transpose(m: &Matrix4, subsystem: Subsystem) -> Matrix4 {
    // index = 2·a + b with a the first qubit, b the second
    Matrix4::from_fn(|r, c| {
        let (ra, rb) = (r / 2, r % 2);
        let (ca, cb) = (c / 2, c % 2);
        match subsystem {
            Subsystem::First => m[(2 * ca + rb, 2 * ra + cb)],
            Subsystem::Second => m[(2 * ra + cb, 2 * ca + rb)],
        }
    })
}

/// Singular values of a real 3×3 matrix, descending.
///
/// Computed as square roots of the eigenvalues of `MᵀM`, clamped at zero.
pub fn singular_values(m: &[[f64; 3]; 3]) -> [f64; 3] {
    let gram =
        Matrix3::from_fn(|i, j| Complex64::new((0..3).map(|k| m[k][i] * m[k][j]).sum(), 0.0));
    let mut sv = jacobi_eigenvalues(&gram).map(|e| e.max(0.0).sqrt());
    sv.reverse();
    sv
}

/// Cyclic Jacobi on a Hermitian matrix. Each rotation zeroes one off-diagonal
/// pair after removing its phase, so the iteration reduces to the real case.
fn jacobi_eigenvalues<const N: usize>(m: &ComplexMatrix<N>) -> [f64; N] {
    // symmetrize so the rotations act on an exactly Hermitian matrix
    let mut a = ComplexMatrix::<N>::from_fn(|i, j| {
        if i == j {
            Complex64::new(m[(i, i)].re, 0.0)
        } else {
            (m[(i, j)] + m[(j, i)].conj()) * 0.5
        }
    });

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..N)
            .flat_map(|i| (0..N).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum();
        let diag: f64 = (0..N).map(|i| a[(i, i)].re * a[(i, i)].re).sum();
        if off <= f64::MIN_POSITIVE || off <= (f64::EPSILON * f64::EPSILON) * 1e-4 * diag {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                rotate(&mut a, p, q);
            }
        }
    }

    let mut eig = [0.0; N];
    for (i, e) in eig.iter_mut().enumerate() {
        *e = a[(i, i)].re;
    }
    eig.sort_by(|x, y| x.total_cmp(y));
    eig
}

fn rotate<const N: usize>(a: &mut ComplexMatrix<N>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase = apq / mag;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + theta.hypot(1.0))
    };
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;

    // A <- A·G with G = [[c, s], [-s·e^{-iφ}, c·e^{-iφ}]] in the (p, q) plane
    let ph_conj = phase.conj();
    for k in 0..N {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * ph_conj * s;
        a[(k, q)] = akp * s + akq * ph_conj * c;
    }
    // A <- G†·A
    for k in 0..N {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * phase * s;
        a[(q, k)] = apk * s + aqk * phase * c;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;
}
