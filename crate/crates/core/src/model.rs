//! Physical parameters of the two-particle setup and the dimensionless model
//! derived from them.
//!
//! Each particle sits in a superposition of two positions a distance `L`
//! apart, orthogonal to their minimal separation `d`. The path-dependent part
//! of the Newtonian energy gives an Ising-type Hamiltonian
//! `H = -(Δ/2) σz⊗σz`. Time is measured in units of the decoherence time `T`,
//! so the only remaining parameter is `ω = ΔT/ħ`.
//!
//! The overall sign of `H` follows the attractive potential. The minimal PT
//! eigenvalue only depends on `|sin ωt|` and cannot detect a sign flip; the
//! correlation-matrix tests in `chsh` do.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::Matrix4;

/// Newtonian constant of gravitation, CODATA 2018 (m³·kg⁻¹·s⁻²).
pub const G_CODATA_2018: f64 = 6.674_30e-11;
/// Reduced Planck constant, CODATA 2018 (J·s).
pub const HBAR_CODATA_2018: f64 = 1.054_571_817e-34;

/// SI description of an experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    /// Mass of the first particle (kg).
    pub m1: f64,
    /// Mass of the second particle (kg).
    pub m2: f64,
    /// Minimal distance between the particles (m).
    pub d: f64,
    /// Separation of the two branches of each superposition (m).
    pub l: f64,
    /// Decoherence time (s).
    pub t_decoherence: f64,
    pub g: f64,
    pub hbar: f64,
}

impl PhysicalParams {
    /// Parameters with CODATA values for `G` and `ħ`.
    pub fn new(m1: f64, m2: f64, d: f64, l: f64, t_decoherence: f64) -> Self {
        Self {
            m1,
            m2,
            d,
            l,
            t_decoherence,
            g: G_CODATA_2018,
            hbar: HBAR_CODATA_2018,
        }
    }

    pub fn with_decoherence_time(self, t_decoherence: f64) -> Self {
        Self {
            t_decoherence,
            ..self
        }
    }

    fn check_geometry(&self) -> Result<()> {
        positive("m1", self.m1)?;
        positive("m2", self.m2)?;
        positive("d", self.d)?;
        positive("G", self.g)?;
        // L = 0 is the degenerate geometry with no path-dependent energy
        if !(self.l.is_finite() && self.l >= 0.0) {
            return Err(Error::input(format!(
                "L must be finite and non-negative, got {}",
                self.l
            )));
        }
        Ok(())
    }

    /// Checks every field, including the decoherence time and `ħ`.
    pub fn validate(&self) -> Result<()> {
        self.check_geometry()?;
        positive("L", self.l)?;
        positive("T", self.t_decoherence)?;
        positive("hbar", self.hbar)
    }

    /// Energy splitting `Δ = G m1 m2 (1/d − 1/√(L² + d²))` in joules.
    pub fn coupling_delta(&self) -> Result<f64> {
        self.check_geometry()?;
        let far = self.l.hypot(self.d);
        // 1/d - 1/√(L²+d²) = (√(L²+d²) - d) / (d √(L²+d²)), and
        // √(L²+d²) - d = L² / (√(L²+d²) + d) avoids cancellation for L ≪ d
        let gap = self.l * self.l / (far + self.d);
        Ok(self.g * self.m1 * self.m2 * gap / (self.d * far))
    }

    /// Dimensionless coupling `ω = Δ T / ħ`.
    pub fn dimensionless_coupling(&self) -> Result<f64> {
        positive("T", self.t_decoherence)?;
        positive("hbar", self.hbar)?;
        Ok(self.coupling_delta()? * self.t_decoherence / self.hbar)
    }

    /// Decoherence time that yields the requested `ω` for this geometry.
    pub fn decoherence_time_for(&self, omega: f64) -> Result<f64> {
        if !(omega.is_finite() && omega >= 0.0) {
            return Err(Error::input(format!(
                "omega must be finite and non-negative, got {omega}"
            )));
        }
        positive("hbar", self.hbar)?;
        let delta = self.coupling_delta()?;
        if delta == 0.0 {
            return Err(Error::domain(
                "coupling vanishes for this geometry; no decoherence time reaches the target",
            ));
        }
        Ok(omega * self.hbar / delta)
    }
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::input(format!(
            "{name} must be finite and positive, got {x}"
        )))
    }
}

/// A point of the dimensionless model: coupling `ω` and time `t` (in units of `T`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimPoint {
    pub omega: f64,
    pub t: f64,
}

impl SimPoint {
    pub fn new(omega: f64, t: f64) -> Result<Self> {
        if !(omega.is_finite() && omega >= 0.0) {
            return Err(Error::input(format!(
                "omega must be finite and non-negative, got {omega}"
            )));
        }
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::input(format!(
                "t must be finite and non-negative, got {t}"
            )));
        }
        Ok(Self { omega, t })
    }

    /// Interaction phase `ωt`.
    pub fn phase(&self) -> f64 {
        self.omega * self.t
    }
}

/// Dimensionless Hamiltonian `-(ω/2) σz⊗σz`, in units of `ħ/T`.
pub fn hamiltonian(omega: f64) -> Matrix4 {
    let h = 0.5 * omega;
    Matrix4::diagonal([-h, h, h, -h].map(|x| Complex64::new(x, 0.0)))
}

/// `exp(-i t H)`: `diag(e^{iωt/2}, e^{-iωt/2}, e^{-iωt/2}, e^{iωt/2})`.
pub fn unitary(point: SimPoint) -> Matrix4 {
    let half = 0.5 * point.phase();
    let plus = Complex64::from_polar(1.0, half);
    let minus = plus.conj();
    Matrix4::diagonal([plus, minus, minus, plus])
}
