//! Sample quantiles, quantile densities and the empirical ratio curve.

use super::SortedSample;
use crate::distributions::normal_quantile;
use crate::error::{QriError, Result};

/// Hyndman–Fan Type 8 sample quantile (plotting position
/// `(j − 1/3) / (n + 1/3)`), clamped to `[x_1, x_n]`.
pub fn quantile_type8(s: &SortedSample, p: f64) -> f64 {
    let x = s.values();
    let n = x.len();
    let h = (n as f64 + 1.0 / 3.0) * p + 1.0 / 3.0;
    if !(h > 1.0) {
        return x[0];
    }
    if h >= n as f64 {
        return x[n - 1];
    }
    let j = h.floor() as usize; // 1-based, in [1, n-1]
    let lo = x[j - 1];
    lo + (h - j as f64) * (x[j] - lo)
}

/// Bofinger half-width `n^(-1/5) [4.5 φ(z)^4 / (2z² + 1)²]^(1/5)` with
/// `z = Φ⁻¹(p)`. It narrows in the tails, where `Q` is strongly curved.
pub fn bofinger_bandwidth(n: usize, p: f64) -> Result<f64> {
    let z = normal_quantile(p)?;
    let phi = (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let shape = 4.5 * phi.powi(4) / (2.0 * z * z + 1.0).powi(2);
    Ok((n as f64).powf(-0.2) * shape.powf(0.2))
}

/// Central-difference estimate of the quantile density `q(p) = Q'(p)`.
///
/// The window `[c − h, c + h]` must lie inside `[1/(n+1), n/(n+1)]`. When
/// `p ± h` would leave it, the half-width is first capped at half the
/// admissible range and the window is then slid inward, so near the tails
/// it becomes one-sided rather than collapsing.
pub fn quantile_density_hat(s: &SortedSample, p: f64, bandwidth: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(QriError::ProbabilityOutOfRange { p });
    }
    let n = s.len() as f64;
    let lo = 1.0 / (n + 1.0);
    let hi = n / (n + 1.0);
    let h = bandwidth.min(0.5 * (hi - lo));
    if !(h > 0.0) {
        return Err(QriError::DegenerateWindow { p });
    }
    let center = p.clamp(lo + h, hi - h);
    let diff = quantile_type8(s, center + h) - quantile_type8(s, center - h);
    Ok((diff / (2.0 * h)).max(0.0))
}

/// `R̂(p) = Q̂(p/2) / Q̂(1 − p/2)` for p in (0, 1].
pub fn r_hat(s: &SortedSample, p: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(QriError::ProbabilityOutOfRange { p });
    }
    let upper = quantile_type8(s, 1.0 - p / 2.0);
    if upper <= 0.0 {
        return Err(QriError::ZeroDenominator { p });
    }
    Ok((quantile_type8(s, p / 2.0) / upper).min(1.0))
}
