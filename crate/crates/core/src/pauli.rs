//! Single-qubit Pauli matrices in the `{|↑⟩, |↓⟩}` basis.

use num_complex::Complex64;

use crate::linalg::Matrix2;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn x() -> Matrix2 {
    Matrix2::from_fn(|i, j| if i != j { ONE } else { ZERO })
}

pub fn y() -> Matrix2 {
    Matrix2::from_fn(|i, j| match (i, j) {
        (0, 1) => -I,
        (1, 0) => I,
        _ => ZERO,
    })
}

pub fn z() -> Matrix2 {
    Matrix2::diagonal([ONE, -ONE])
}

/// `[σx, σy, σz]`.
pub fn xyz() -> [Matrix2; 3] {
    [x(), y(), z()]
}
