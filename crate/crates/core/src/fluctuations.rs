//! Run-to-run Gaussian jitter in the interaction time and the coupling.
//!
//! Each run samples `ω + ξ_ω s_ω` and `t + ξ_t s_t` with independent standard
//! normals. The analytic route expands the phase and damping factors to first
//! order in the jitter and averages; the Monte-Carlo route samples the exact
//! closed-form state. Sampling uses ChaCha8 seeded through
//! `SeedableRng::seed_from_u64`, with normals drawn by the `rand_distr`
//! ziggurat sampler, `ξ_t` before `ξ_ω` for every sample.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::density::{DensityMatrix, StateDiagnostics, PSD_TOL};
use crate::dynamics::evolve_closed;
use crate::error::{Error, Result};
use crate::linalg::Matrix4;
use crate::model::SimPoint;

/// Seed used when none is supplied on the command line.
pub const DEFAULT_SEED: u64 = 0x6772_6176_656e_7421;

/// Standard deviations of the dimensionless time and coupling jitter.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FluctuationSpec {
    pub s_t: f64,
    pub s_omega: f64,
}

impl FluctuationSpec {
    pub fn new(s_t: f64, s_omega: f64) -> Result<Self> {
        for (name, s) in [("s_t", s_t), ("s_omega", s_omega)] {
            if !(s.is_finite() && s >= 0.0) {
                return Err(Error::input(format!(
                    "{name} must be finite and non-negative, got {s}"
                )));
            }
        }
        Ok(Self { s_t, s_omega })
    }

    /// Whether the jitter is small compared with the point it perturbs.
    pub fn validity(&self, point: SimPoint) -> SmallJitter {
        SmallJitter {
            time_ok: !(self.s_t > 0.0 && self.s_t >= point.t / 3.0),
            coupling_ok: !(self.s_omega > 0.0 && self.s_omega >= point.omega / 3.0),
        }
    }

    /// Rejects points with `t <= s_t²` (when `s_t > 0`), where the expansion
    /// would run the dephasing backwards.
    fn check_point(&self, point: SimPoint) -> Result<()> {
        let shift = self.s_t * self.s_t;
        if self.s_t > 0.0 && point.t <= shift {
            return Err(Error::domain(format!(
                "first-order averaging needs t > s_t^2 (t = {}, s_t^2 = {shift})",
                point.t
            )));
        }
        Ok(())
    }
}

/// Small-fluctuation flags: `s_t < t/3` and `s_ω < ω/3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SmallJitter {
    pub time_ok: bool,
    pub coupling_ok: bool,
}

impl SmallJitter {
    pub fn all_ok(&self) -> bool {
        self.time_ok && self.coupling_ok
    }
}

/// The first-order averaged matrix together with its validity flags.
///
/// The matrix is returned as-is and `psd` records whether it is a state. Its
/// spectrum is `{(1 + b ± 2 Re a)/4, (1 − b)/4, (1 − b)/4}` and the formula
/// keeps `|a|² ≤ b ≤ 1` for `t ≥ s_t²`, so on the accepted domain the flag
/// only guards against rounding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AveragedState {
    pub matrix: Matrix4,
    pub min_eigenvalue: f64,
    pub psd: bool,
    pub small_jitter: SmallJitter,
}

impl AveragedState {
    /// Wraps a 4×4 matrix, computing its PSD flag.
    pub fn from_matrix(matrix: Matrix4, small_jitter: SmallJitter) -> Result<Self> {
        let min_eigenvalue = StateDiagnostics::of(&matrix)?.min_eigenvalue;
        Ok(Self {
            matrix,
            min_eigenvalue,
            psd: min_eigenvalue >= -PSD_TOL,
            small_jitter,
        })
    }

    /// The averaged matrix as a validated state, if it is one.
    pub fn density(&self) -> Result<DensityMatrix> {
        DensityMatrix::new(self.matrix)
    }
}

/// Single- and double-flip coherence factors `(a, b)` of the averaged state.
fn averaged_coherences(point: SimPoint, spec: FluctuationSpec) -> (Complex64, f64) {
    let SimPoint { omega, t } = point;
    let st2 = spec.s_t * spec.s_t;
    let so2 = spec.s_omega * spec.s_omega;
    // a = e^{iωt − t} · e^{−s_ω² t²/2 + s_t² (iω − 1)²/2}
    let log_a = Complex64::new(-t, omega * t)
        + Complex64::new(-0.5 * so2 * t * t, 0.0)
        + Complex64::new(-1.0, omega).powi(2) * (0.5 * st2);
    let a = log_a.exp();
    let b = (-2.0 * t + 2.0 * st2).exp();
    (a, b)
}

/// First-order jitter-averaged state.
pub fn averaged_state(point: SimPoint, spec: FluctuationSpec) -> Result<AveragedState> {
    spec.check_point(point)?;
    let (a, b) = averaged_coherences(point, spec);
    let (a, ac) = (a * 0.25, a.conj() * 0.25);
    let b = Complex64::new(0.25 * b, 0.0);
    let d = Complex64::new(0.25, 0.0);
    let matrix = Matrix4::from_rows([[d, a, a, b], [ac, d, b, ac], [ac, b, d, ac], [b, a, a, d]])?;
    AveragedState::from_matrix(matrix, spec.validity(point))
}

/// Entangling PT eigenvalue of the averaged state:
/// `½ e^{−τ}[sinh τ − e^{−s_t²(1+ω²)/2 − s_ω² t²/2} |sin ωτ|]` with `τ = t − s_t²`.
pub fn lambda_bar(point: SimPoint, spec: FluctuationSpec) -> Result<f64> {
    spec.check_point(point)?;
    let SimPoint { omega, t } = point;
    let st2 = spec.s_t * spec.s_t;
    let so2 = spec.s_omega * spec.s_omega;
    let tau = t - st2;
    let damping = (-0.5 * st2 * (1.0 + omega * omega) - 0.5 * so2 * t * t).exp();
    Ok(0.5 * (-tau).exp() * (tau.sinh() - damping * (omega * tau).sin().abs()))
}

/// Largest `s_t²` for which entanglement still develops: `2 ln ω / (1 + ω²)`.
///
/// Returns 0 at `ω = 1`; below that no entanglement develops even without jitter.
pub fn max_time_jitter(omega: f64) -> Result<f64> {
    if !omega.is_finite() {
        return Err(Error::input(format!("omega must be finite, got {omega}")));
    }
    if omega < 1.0 {
        return Err(Error::domain(format!(
            "no entanglement develops for omega < 1 (got {omega}), so no jitter is tolerable"
        )));
    }
    Ok(2.0 * omega.ln() / (1.0 + omega * omega))
}

/// Sample statistics of the jitter-averaged state.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloEstimate {
    pub mean: DensityMatrix,
    /// Standard error of the real part of each entry of `mean`.
    pub std_error_re: [[f64; 4]; 4],
    /// Standard error of the imaginary part of each entry of `mean`.
    pub std_error_im: [[f64; 4]; 4],
    pub n_samples: u64,
    /// Samples whose jittered time was negative and was clamped to zero.
    pub clamped: u64,
}

/// Averages the exact closed-form state over jittered `(ω, t)` samples.
///
/// Negative sampled times are clamped to 0 and counted. Identical
/// `(point, spec, n_samples, seed)` give bit-identical results.
pub fn monte_carlo_average(
    point: SimPoint,
    spec: FluctuationSpec,
    n_samples: u64,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    if n_samples == 0 {
        return Err(Error::input("n_samples must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Welford accumulators, per entry, for real and imaginary parts
    let mut mean = [[Complex64::new(0.0, 0.0); 4]; 4];
    let mut m2_re = [[0.0f64; 4]; 4];
    let mut m2_im = [[0.0f64; 4]; 4];
    let mut clamped = 0u64;

    for n in 1..=n_samples {
        let xi_t: f64 = StandardNormal.sample(&mut rng);
        let xi_omega: f64 = StandardNormal.sample(&mut rng);
        let mut t = point.t + xi_t * spec.s_t;
        if t < 0.0 {
            t = 0.0;
            clamped += 1;
        }
        // the sign of ω only conjugates the phase, so negative draws are kept
        let omega = point.omega + xi_omega * spec.s_omega;
        let sample = evolve_closed(SimPoint { omega, t });
        let inv_n = 1.0 / n as f64;
        for i in 0..4 {
            for j in 0..4 {
                let x = sample[(i, j)];
                let delta = x - mean[i][j];
                mean[i][j] += delta * inv_n;
                let delta2 = x - mean[i][j];
                m2_re[i][j] += delta.re * delta2.re;
                m2_im[i][j] += delta.im * delta2.im;
            }
        }
    }

    let se = |m2: f64| {
        if n_samples < 2 {
            0.0
        } else {
            (m2.max(0.0) / (n_samples - 1) as f64 / n_samples as f64).sqrt()
        }
    };
    let mean = DensityMatrix::new(Matrix4::from_rows(mean)?)?;
    Ok(MonteCarloEstimate {
        mean,
        std_error_re: m2_re.map(|row| row.map(se)),
        std_error_im: m2_im.map(|row| row.map(se)),
        n_samples,
        clamped,
    })
}
