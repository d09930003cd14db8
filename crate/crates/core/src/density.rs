use std::ops::Deref;

use crate::error::{Error, Result};
use crate::linalg::{partial_transpose, Matrix4, Subsystem};

/// Entrywise tolerance for Hermiticity and trace of a density matrix.
pub const STATE_TOL: f64 = 1e-12;
/// Slack allowed below zero for the smallest eigenvalue of a state.
pub const PSD_TOL: f64 = 1e-10;

/// A validated two-qubit state: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(Matrix4);

/// How far a 4×4 matrix is from being a valid state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDiagnostics {
    pub hermiticity_error: f64,
    pub trace_error: f64,
    pub min_eigenvalue: f64,
}

impl StateDiagnostics {
    pub fn of(m: &Matrix4) -> Result<Self> {
        let hermiticity_error = m.hermiticity_error();
        let trace = m.trace();
        let trace_error = (trace - 1.0).norm();
        let min_eigenvalue = if hermiticity_error <= crate::linalg::HERMITIAN_TOL {
            m.hermitian_eigenvalues()?[0]
        } else {
            f64::NAN
        };
        Ok(Self {
            hermiticity_error,
            trace_error,
            min_eigenvalue,
        })
    }

    pub fn is_valid(&self) -> bool {
        self.hermiticity_error <= STATE_TOL
            && self.trace_error <= STATE_TOL
            && self.min_eigenvalue >= -PSD_TOL
    }
}

impl DensityMatrix {
    pub fn new(m: Matrix4) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::input("density matrix has non-finite entries"));
        }
        let diag = StateDiagnostics::of(&m)?;
        if diag.hermiticity_error > STATE_TOL {
            return Err(Error::input(format!(
                "density matrix is not Hermitian (max |ρ - ρ†| = {:e})",
                diag.hermiticity_error
            )));
        }
        if diag.trace_error > STATE_TOL {
            return Err(Error::input(format!(
                "density matrix trace deviates from 1 by {:e}",
                diag.trace_error
            )));
        }
        if diag.min_eigenvalue < -PSD_TOL {
            return Err(Error::input(format!(
                "density matrix is not positive semidefinite (min eigenvalue {:e})",
                diag.min_eigenvalue
            )));
        }
        Ok(Self(m))
    }

    /// Wraps a matrix that is a state by construction.
    pub(crate) fn new_unchecked(m: Matrix4) -> Self {
        debug_assert!(m.hermiticity_error() <= STATE_TOL);
        Self(m)
    }

    /// The maximally mixed state `I/4`.
    pub fn maximally_mixed() -> Self {
        Self(Matrix4::identity().scale(0.25.into()))
    }

    pub fn matrix(&self) -> &Matrix4 {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix4 {
        self.0
    }

    pub fn partial_transpose(&self, subsystem: Subsystem) -> Matrix4 {
        partial_transpose(&self.0, subsystem)
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }
}

impl Deref for DensityMatrix {
    type Target = Matrix4;

    fn deref(&self) -> &Matrix4 {
        &self.0
    }
}
