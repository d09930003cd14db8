//! Dephasing dynamics of the interacting pair.
//!
//! The environment couples to `σz` of each particle, so populations stay put
//! and each coherence decays by an envelope factor per qubit on which its row
//! and column indices differ. The Ising Hamiltonian is diagonal in the same
//! basis and commutes with that map, so the full evolution is the dephasing
//! map followed (or preceded) by the unitary.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{kron, Matrix2, Matrix4};
use crate::model::{unitary, SimPoint};

/// Coherence decay envelope `f(t)` with `f(0) = 1`, non-increasing, values in `[0, 1]`.
#[derive(Clone)]
pub struct DecayModel {
    name: String,
    envelope: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl DecayModel {
    /// `e^{-t}`.
    pub fn exponential() -> Self {
        Self {
            name: "exponential".into(),
            envelope: Arc::new(|t: f64| (-t).exp()),
        }
    }

    /// `e^{-t²}`.
    pub fn gaussian() -> Self {
        Self {
            name: "gaussian".into(),
            envelope: Arc::new(|t: f64| (-t * t).exp()),
        }
    }

    /// A user-supplied envelope, checked on a sample grid over `[0, 50]`.
    pub fn custom(
        name: impl Into<String>,
        envelope: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if envelope(0.0) != 1.0 {
            return Err(Error::input("decay envelope must equal 1 at t = 0"));
        }
        let mut prev = 1.0;
        for k in 1..=5000 {
            let v = envelope(k as f64 * 0.01);
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::input(format!(
                    "decay envelope leaves [0, 1] at t = {}",
                    k as f64 * 0.01
                )));
            }
            if v > prev {
                return Err(Error::input(format!(
                    "decay envelope increases at t = {}",
                    k as f64 * 0.01
                )));
            }
            prev = v;
        }
        Ok(Self {
            name: name.into(),
            envelope: Arc::new(envelope),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn envelope(&self, t: f64) -> f64 {
        (self.envelope)(t)
    }
}

impl Default for DecayModel {
    fn default() -> Self {
        Self::exponential()
    }
}

impl fmt::Debug for DecayModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DecayModel")
            .field("name", &self.name)
            .finish()
    }
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::input(format!(
            "time must be finite and non-negative, got {t}"
        )))
    }
}

/// Dephases a single-particle state: diagonal fixed, coherences times `f(t)`.
pub fn decohere_single(a: &Matrix2, t: f64, model: &DecayModel) -> Result<Matrix2> {
    check_time(t)?;
    let f = model.envelope(t);
    Ok(Matrix2::from_fn(|i, j| {
        if i == j {
            a[(i, j)]
        } else {
            a[(i, j)] * f
        }
    }))
}

/// Number of qubits on which basis indices `i` and `j` differ.
fn flips(i: usize, j: usize) -> i32 {
    (i ^ j).count_ones() as i32
}

/// Dephases a two-particle state: entry `(i, j)` is multiplied by `f(t)^h`
/// where `h` counts the qubits on which `i` and `j` differ.
pub fn decohere_pair(c: &DensityMatrix, t: f64, model: &DecayModel) -> Result<DensityMatrix> {
    check_time(t)?;
    Ok(DensityMatrix::new_unchecked(dephase(
        c.matrix(),
        model.envelope(t),
    )))
}

fn dephase(c: &Matrix4, f: f64) -> Matrix4 {
    let factors = [1.0, f, f * f];
    Matrix4::from_fn(|i, j| c[(i, j)] * factors[flips(i, j) as usize])
}

/// `|+⟩⟨+| ⊗ |+⟩⟨+|`, every entry 1/4.
pub fn initial_state() -> DensityMatrix {
    let plus = Matrix2::from_fn(|_, _| Complex64::new(0.5, 0.0));
    DensityMatrix::new_unchecked(kron(&plus, &plus))
}

/// Closed-form state at `point` for exponential dephasing from `|++⟩`.
///
/// Diagonal 1/4; single-flip coherences `e^{±iωt - t}/4`; double-flip
/// coherences `e^{-2t}/4`.
pub fn evolve_closed(point: SimPoint) -> DensityMatrix {
    let t = point.t;
    let a = Complex64::from_polar(0.25 * (-t).exp(), point.phase());
    let ac = a.conj();
    let b = Complex64::new(0.25 * (-2.0 * t).exp(), 0.0);
    let d = Complex64::new(0.25, 0.0);
    let m = Matrix4::from_rows([[d, a, a, b], [ac, d, b, ac], [ac, b, d, ac], [b, a, a, d]])
        .expect("closed-form entries are finite");
    DensityMatrix::new_unchecked(m)
}

/// Evolves `|++⟩` by dephasing in the interaction picture, then conjugating
/// with `U(t)`. Works for any decay envelope.
pub fn evolve_numeric(point: SimPoint, model: &DecayModel) -> DensityMatrix {
    let rho_i = decohere_pair(&initial_state(), point.t, model).expect("SimPoint times are valid");
    evolve_from(&rho_i, point)
}

/// `U(t) ρ U(t)†` for an arbitrary starting state.
pub fn evolve_from(rho: &DensityMatrix, point: SimPoint) -> DensityMatrix {
    let u = unitary(point);
    DensityMatrix::new_unchecked(u * *rho.matrix() * u.adjoint())
}

/// Dephasing then unitary, starting from any state.
pub fn evolve_state(rho0: &DensityMatrix, point: SimPoint, model: &DecayModel) -> DensityMatrix {
    let dephased = decohere_pair(rho0, point.t, model).expect("SimPoint times are valid");
    evolve_from(&dephased, point)
}
