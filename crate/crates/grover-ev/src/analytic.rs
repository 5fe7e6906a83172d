//! Closed-form model of Grover dynamics: the rotation angle, the
//! (alpha, beta) coefficients after m iterates, the EV attenuation, and
//! the truncation planner that picks the minimum iteration count for a
//! given EV resolution.

use std::f64::consts::{FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Two-dimensional (alpha, beta) description of the register during
/// Grover iteration: alpha scales the marked subspace, beta the rest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationState {
    pub alpha: f64,
    pub beta: f64,
    pub theta: f64,
}

/// Rotation per iterate: theta = arccos(1 - 2M/N).
pub fn theta_of(num_marked: u64, size: u64) -> Result<f64> {
    if num_marked == 0 || num_marked >= size {
        return Err(Error::DegenerateInstance {
            marked: num_marked,
            size,
        });
    }
    let fraction = num_marked as f64 / size as f64;
    Ok((1.0 - 2.0 * fraction).acos())
}

/// alpha = sin[(2m+1) theta/2], beta = cos[(2m+1) theta/2].
pub fn amplitudes_after(m: u64, theta: f64) -> RotationState {
    let angle = (2 * m + 1) as f64 * theta / 2.0;
    RotationState {
        alpha: angle.sin(),
        beta: angle.cos(),
        theta,
    }
}

/// The textbook iteration count floor(sqrt(N/M) pi/4); can be 0
/// when more than about 62% of the database is marked.
pub fn m_standard_floor(num_marked: u64, size: u64) -> u64 {
    ((size as f64 / num_marked as f64).sqrt() * FRAC_PI_4).floor() as u64
}

/// Standard-version iteration count, clamped below at 1 so the register
/// is actually rotated; see `is_degenerate_standard` for when the clamp
/// engages.
pub fn m_standard(num_marked: u64, size: u64) -> u64 {
    m_standard_floor(num_marked, size).max(1)
}

/// True when the unclamped count is 0 (near-half-or-more marked).
pub fn is_degenerate_standard(num_marked: u64, size: u64) -> bool {
    m_standard_floor(num_marked, size) == 0
}

/// EV attenuation A = (alpha^2 N - M)/(N - M).
pub fn attenuation(alpha: f64, num_marked: u64, size: u64) -> f64 {
    let n = size as f64;
    let m = num_marked as f64;
    (alpha * alpha * n - m) / (n - m)
}

/// Attenuations smaller than this are indistinguishable from f64
/// rounding noise of the analytically-zero cases; sign decisions below
/// it carry no information.
pub const ATTENUATION_FLOOR: f64 = 1e-12;

/// Attenuation after m iterates, A_m.
pub fn attenuation_after(m: u64, num_marked: u64, size: u64) -> Result<f64> {
    if m == 0 {
        // alpha^2 = M/N at m = 0, so the numerator vanishes identically.
        return Ok(0.0);
    }
    if 2 * num_marked == size {
        // theta = pi/2: alpha^2 stays at 1/2 for every m, so A_m = 0
        // identically and no iteration count produces an EV signal.
        return Ok(0.0);
    }
    let theta = theta_of(num_marked, size)?;
    Ok(attenuation(
        amplitudes_after(m, theta).alpha,
        num_marked,
        size,
    ))
}

/// The resolution required by the standard EV version, 1/M.
pub fn epsilon_standard(num_marked: u64) -> f64 {
    1.0 / num_marked as f64
}

/// Closed-form prediction for the minimum truncated iteration count:
/// the smallest integer strictly greater than
/// (1/theta) arcsin sqrt(r + (1-r) M/N) - 1/2, clamped to [1, m_stand].
pub fn closed_form_min_iterations(epsilon: f64, num_marked: u64, size: u64) -> Result<u64> {
    let theta = theta_of(num_marked, size)?;
    let r = epsilon / epsilon_standard(num_marked);
    let fraction = num_marked as f64 / size as f64;
    let bound = (r + (1.0 - r) * fraction).sqrt().asin() / theta - 0.5;
    let m = (bound.floor() as i64 + 1).max(1) as u64;
    Ok(m.min(m_standard(num_marked, size)))
}

/// Smallest m >= 1 with A_m / M > epsilon, found by monotone scan of the
/// attenuation; falls back to m_standard if no smaller count qualifies.
///
/// epsilon must be below 1/M; exactly 1/M is accepted as the limiting
/// case and returns m_standard.
pub fn min_truncated_iterations(epsilon: f64, num_marked: u64, size: u64) -> Result<u64> {
    let eps_stand = epsilon_standard(num_marked);
    if !(0.0..=eps_stand).contains(&epsilon) {
        return Err(Error::InfeasibleResolution {
            epsilon,
            epsilon_stand: eps_stand,
        });
    }
    let m_stand = m_standard(num_marked, size);
    if epsilon == eps_stand {
        return Ok(m_stand);
    }
    let m_f64 = num_marked as f64;
    for m in 1..=m_stand {
        if attenuation_after(m, num_marked, size)? / m_f64 > epsilon {
            return Ok(m);
        }
    }
    Ok(m_stand)
}

/// Predicted m_trunc / m_stand ratio: (2/pi) arcsin sqrt(r + (1-r) M/N).
pub fn predicted_ratio(r: f64, num_marked: u64, size: u64) -> f64 {
    let fraction = num_marked as f64 / size as f64;
    2.0 / PI * (r + (1.0 - r) * fraction).sqrt().asin()
}

/// Probability that a projective measurement locates a marked item.
pub fn pm_success_probability(alpha: f64) -> f64 {
    alpha * alpha
}

/// Average query count of the classical sequential search, N/(M+1).
pub fn classical_expected_queries(num_marked: u64, size: u64) -> f64 {
    size as f64 / (num_marked as f64 + 1.0)
}

/// Early-stopping decision record for the truncated EV version.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationPlan {
    pub epsilon: f64,
    pub epsilon_stand: f64,
    pub r: f64,
    pub m_stand: u64,
    pub m_trunc: u64,
    pub predicted_ratio: f64,
}

impl TruncationPlan {
    pub fn new(epsilon: f64, num_marked: u64, size: u64) -> Result<Self> {
        let epsilon_stand = epsilon_standard(num_marked);
        let m_trunc = min_truncated_iterations(epsilon, num_marked, size)?;
        let r = epsilon / epsilon_stand;
        Ok(Self {
            epsilon,
            epsilon_stand,
            r,
            m_stand: m_standard(num_marked, size),
            m_trunc,
            predicted_ratio: predicted_ratio(r, num_marked, size),
        })
    }
}
