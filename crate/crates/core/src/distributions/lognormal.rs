//! Closed forms for the lognormal family, which depend on the log-scale
//! standard deviation only.

use super::special::{normal_cdf, normal_quantile};
use crate::error::{QriError, Result};
use crate::partitions::SymmetricPartition;

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(QriError::InvalidParameter {
            name: "sigma",
            value: sigma,
        })
    }
}

// 2 exp(2σ²) Φ(z - 2σ), with Φ(-∞ - 2σ) = 0.
fn scaled_cdf(sigma: f64, z: f64) -> f64 {
    if z == f64::NEG_INFINITY {
        return 0.0;
    }
    2.0 * (2.0 * sigma * sigma).exp() * normal_cdf(z - 2.0 * sigma)
}

fn z_of(p: f64) -> Result<f64> {
    if p == 0.0 {
        Ok(f64::NEG_INFINITY)
    } else if p == 0.5 {
        Ok(0.0)
    } else {
        normal_quantile(p)
    }
}

/// `∫₀ʳ R_σ(p) dp = 2 exp(2σ²) Φ(Φ⁻¹(r/2) − 2σ)` for r in (0, 1].
pub fn lognormal_partial_integral(sigma: f64, r: f64) -> Result<f64> {
    check_sigma(sigma)?;
    if !(r > 0.0 && r <= 1.0) {
        return Err(QriError::ProbabilityOutOfRange { p: r });
    }
    Ok(scaled_cdf(sigma, z_of(r / 2.0)?))
}

/// QRI of any lognormal with log-sd `sigma`.
pub fn lognormal_i(sigma: f64) -> Result<f64> {
    Ok(1.0 - lognormal_partial_integral(sigma, 1.0)?)
}

/// Conditional QRI of each partition member.
pub fn lognormal_ik(sigma: f64, partition: &SymmetricPartition) -> Result<Vec<f64>> {
    check_sigma(sigma)?;
    let mut out = Vec::with_capacity(partition.len());
    for ((lo, hi), &w) in partition.bounds().zip(partition.weights()) {
        let mass = scaled_cdf(sigma, z_of(hi)?) - scaled_cdf(sigma, z_of(lo)?);
        out.push(1.0 - mass / w);
    }
    Ok(out)
}
