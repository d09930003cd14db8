//! Partial-transpose entanglement analysis of the evolving pair.
//!
//! For the state grown from `|++⟩` the partial transpose has spectrum
//! `{(1 + b ± 2 Re a), (1 − b ± 2|Im a|)} / 4` with `a = e^{iωt−t}` and
//! `b = e^{−2t}`. Only `(1 − b − 2|Im a|)/4 = e^{−t}(sinh t − |sin ωt|)/2`
//! can become negative, so that branch decides entanglement.

use std::f64::consts::PI;

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{Matrix4, Subsystem};
use crate::model::SimPoint;
use crate::roots::{bisect_predicate, bisect_root, golden_max};

/// Tolerance on the sign of a PT eigenvalue when declaring entanglement.
pub const ENTANGLEMENT_TOL: f64 = 1e-12;

/// PPT verdict for one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementReport {
    /// Smallest eigenvalue of the partial transpose.
    pub lambda_min: f64,
    /// Sum of the moduli of the negative PT eigenvalues.
    pub negativity: f64,
    pub entangled: bool,
}

impl EntanglementReport {
    pub fn from_pt_spectrum(spectrum: &[f64; 4]) -> Self {
        let lambda_min = spectrum[0];
        let entangled = lambda_min < -ENTANGLEMENT_TOL;
        let negativity = if entangled {
            spectrum.iter().filter(|&&e| e < 0.0).map(|e| -e).sum()
        } else {
            0.0
        };
        Self {
            lambda_min,
            negativity,
            entangled,
        }
    }
}

/// The entangling PT eigenvalue `½ e^{−t}(sinh t − |sin ωt|)`.
pub fn lambda_closed(point: SimPoint) -> f64 {
    let t = point.t;
    0.5 * (-t).exp() * (t.sinh() - point.phase().sin().abs())
}

/// Full spectrum of the partial transpose (over the second particle) of any
/// Hermitian 4×4 matrix, ascending.
pub fn pt_spectrum(m: &Matrix4) -> Result<[f64; 4]> {
    crate::linalg::partial_transpose(m, Subsystem::Second).hermitian_eigenvalues()
}

/// PPT analysis of a state by direct diagonalization of its partial transpose.
pub fn lambda_numeric(rho: &DensityMatrix) -> Result<EntanglementReport> {
    Ok(EntanglementReport::from_pt_spectrum(&pt_spectrum(
        rho.matrix(),
    )?))
}

/// Derivative of `lambda_closed` in `t` on the first arch, up to the positive
/// factor `½ e^{−t}`.
fn stationarity(omega: f64, t: f64) -> f64 {
    (-t).exp() + (omega * t).sin() - omega * (omega * t).cos()
}

/// Residual tolerance for the optimal-time equation.
pub const OPTIMAL_TIME_RESIDUAL: f64 = 1e-12;

/// First time at which the entangling eigenvalue has a local minimum.
///
/// Solves `e^{−t} + sin ωt − ω cos ωt = 0` on `(0, π/(2ω)]`, where the left
/// side runs from `1 − ω < 0` to `e^{−t} + 1 > 0` and is strictly increasing
/// for `ω > 1`. The root is confirmed as a minimum against its neighbours;
/// should that fail, the first arch is minimized directly instead.
pub fn optimal_time(omega: f64) -> Result<f64> {
    if !omega.is_finite() {
        return Err(Error::input(format!("omega must be finite, got {omega}")));
    }
    if omega <= 1.0 {
        return Err(Error::domain(format!(
            "no entanglement develops for omega <= 1 (got {omega}), so there is no optimal time"
        )));
    }
    let hi = PI / (2.0 * omega);
    let root = bisect_root(0.0, hi, OPTIMAL_TIME_RESIDUAL, |t| stationarity(omega, t));
    let lambda = |t: f64| lambda_closed(SimPoint { omega, t });

    if let Some(t0) = root {
        let h = 1e-6 * hi;
        let v = lambda(t0);
        if t0 > 0.0 && v < 0.0 && v <= lambda(t0 - h) && v <= lambda((t0 + h).min(PI / omega)) {
            return Ok(t0);
        }
    }
    let (t0, _) = golden_max(0.0, PI / omega, 1e-14, |t| -lambda(t));
    Ok(t0)
}

/// Maximal intervals in `(0, t_max]` on which `lambda_closed < 0`.
///
/// Sign changes of `sinh t − |sin ωt|` are located on a uniform grid with
/// step at most `min(0.01, π/(50ω))` and refined by bisection to `1e-10`.
/// Windows narrower than the grid step can be missed.
pub fn entanglement_window(omega: f64, t_max: f64) -> Result<Vec<(f64, f64)>> {
    if !(omega.is_finite() && omega >= 0.0) {
        return Err(Error::input(format!(
            "omega must be finite and non-negative, got {omega}"
        )));
    }
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(Error::input(format!(
            "t_max must be finite and positive, got {t_max}"
        )));
    }
    let negative = |t: f64| t.sinh() < (omega * t).sin().abs();
    let step = if omega > 0.0 {
        0.01f64.min(PI / (50.0 * omega))
    } else {
        0.01
    };
    let n = (t_max / step).ceil() as usize;
    let h = t_max / n as f64;

    let mut windows = Vec::new();
    let mut open: Option<f64> = None;
    let mut prev_t = 0.0;
    let mut prev_neg = false;
    for k in 1..=n {
        let t = if k == n { t_max } else { k as f64 * h };
        let neg = negative(t);
        if neg != prev_neg {
            let (lo, hi) = bisect_predicate(prev_t, t, 1e-10, negative);
            if neg {
                open = Some(if prev_t == 0.0 { 0.0 } else { hi });
            } else if let Some(start) = open.take() {
                windows.push((start, lo));
            }
        }
        prev_t = t;
        prev_neg = neg;
    }
    if let Some(start) = open {
        windows.push((start, t_max));
    }
    Ok(windows)
}
