//! CHSH violation via the Horodecki criterion.
//!
//! A two-qubit state can violate CHSH iff `M > 1`, where `M` is the sum of the
//! two largest squared singular values of its Pauli correlation matrix. The
//! best achievable CHSH value is `2√M`.
//!
//! For the dephased pair the singular values are `e^{−2t}` and a doubly
//! degenerate `e^{−t}|sin ωt|`. The coupling threshold is found by bisection
//! on `g(ω) = sup_t M(ω, t) − 1`. The supremum only scans `t ∈ (0, 3]`:
//! every singular value is bounded by `e^{−t}`, so beyond `t = 3` we have
//! `M ≤ 2e^{−6} < 0.005`.

use std::f64::consts::PI;

use crate::density::DensityMatrix;
use crate::dynamics::evolve_closed;
use crate::linalg::{kron, singular_values};
use crate::model::SimPoint;
use crate::pauli;
use crate::roots::{bisect_root, scan_max};

/// `T_ij = tr(ρ σ_i ⊗ σ_j)` for `i, j ∈ {x, y, z}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationMatrix {
    pub entries: [[f64; 3]; 3],
    /// Largest imaginary part among the nine traces.
    pub imaginary_residue: f64,
}

impl CorrelationMatrix {
    /// Descending singular values.
    pub fn singular_values(&self) -> [f64; 3] {
        singular_values(&self.entries)
    }
}

pub fn correlation_matrix(rho: &DensityMatrix) -> CorrelationMatrix {
    let paulis = pauli::xyz();
    let mut entries = [[0.0; 3]; 3];
    let mut residue: f64 = 0.0;
    for (i, si) in paulis.iter().enumerate() {
        for (j, sj) in paulis.iter().enumerate() {
            let op = kron(si, sj);
            // tr(ρ·A) = Σ_{kl} ρ_kl A_lk
            let mut tr = num_complex::Complex64::new(0.0, 0.0);
            for k in 0..4 {
                for l in 0..4 {
                    tr += rho[(k, l)] * op[(l, k)];
                }
            }
            entries[i][j] = tr.re;
            residue = residue.max(tr.im.abs());
        }
    }
    CorrelationMatrix {
        entries,
        imaginary_residue: residue,
    }
}

/// Horodecki quantities for one correlation matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HorodeckiReport {
    /// Sum of the two largest squared singular values.
    pub m: f64,
    pub violates: bool,
    /// Maximal CHSH expectation `2√M`.
    pub max_chsh: f64,
}

#[allow(non_snake_case)]
pub fn horodecki_M(tm: &CorrelationMatrix) -> HorodeckiReport {
    let [s1, s2, _] = tm.singular_values();
    let m = s1 * s1 + s2 * s2;
    HorodeckiReport {
        m,
        violates: m > 1.0,
        max_chsh: 2.0 * m.sqrt(),
    }
}

/// `M` for the closed-form state at `point`, through the full correlation
/// matrix and SVD.
pub fn horodecki_at(point: SimPoint) -> HorodeckiReport {
    horodecki_M(&correlation_matrix(&evolve_closed(point)))
}

/// Upper end of the time window searched for the CHSH supremum.
pub const CHSH_T_MAX: f64 = 3.0;

/// `sup M(ω, t) − 1` over `t ∈ (0, 3]` past the initial descent of `M`.
///
/// The product state at `t = 0` has `M = 1` exactly and `M` falls from there
/// with slope −4 for every `ω`, so the supremum over all `t > 0` would sit on
/// that boundary at exactly 1. The scan starts at the first grid point where
/// `M` turns upward again; if it never does, the margin is negative.
pub fn chsh_margin(omega: f64) -> f64 {
    let step = 0.005f64.min(PI / (100.0 * omega.max(f64::MIN_POSITIVE)));
    let n = (CHSH_T_MAX / step).ceil() as usize;
    let h = CHSH_T_MAX / n as f64;
    let m_at = |t: f64| horodecki_at(SimPoint { omega, t }).m;

    let values: Vec<f64> = (0..=n).map(|k| m_at(k as f64 * h)).collect();
    let Some(turn) = values.windows(2).position(|w| w[1] > w[0]) else {
        return values[n] - 1.0;
    };
    let start = turn as f64 * h;
    let (_, sup) = scan_max(start, CHSH_T_MAX, step, 1e-12, m_at);
    sup - 1.0
}

/// Result of the CHSH threshold search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshThreshold {
    pub omega_star: f64,
    pub margin: f64,
    pub bracket: (f64, f64),
}

/// Smallest coupling above which the dephased pair can violate CHSH.
pub fn chsh_threshold() -> ChshThreshold {
    let bracket = (4.0, 4.5);
    let omega_star = bisect_root(bracket.0, bracket.1, 1e-9, chsh_margin)
        .expect("CHSH margin changes sign between 4 and 4.5");
    ChshThreshold {
        omega_star,
        margin: chsh_margin(omega_star),
        bracket,
    }
}
