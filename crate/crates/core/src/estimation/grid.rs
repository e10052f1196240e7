//! Midpoint-grid estimators and their delta-method variances.
//!
//! Sample quantiles satisfy, for u ≤ v,
//! `n Cov(Q̂(u), Q̂(v)) → u (1 − v) q(u) q(v)`. Linearizing
//! `R̂(p) = Q̂(a) / Q̂(b)` with `a = p/2`, `b = 1 − p/2` gives the
//! covariance of two ratio estimates, and the variance of a grid average is
//! the mean of all pairwise covariances.

use serde::Serialize;

use super::quantile::{bofinger_bandwidth, quantile_density_hat, quantile_type8};
use super::{check_alpha, DecompositionEstimate, Method, QriEstimate, SortedSample};
use super::{DEFAULT_ALPHA, DEFAULT_GRID};
use crate::error::{QriError, Result};
use crate::partitions::SymmetricPartition;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridConfig {
    /// Number of grid points `J` per integral.
    pub grid: usize,
    pub alpha: f64,
    /// Fixed half-width of the quantile-density difference quotient. `None`
    /// uses [`bofinger_bandwidth`] at each probability.
    pub bandwidth: Option<f64>,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            grid: DEFAULT_GRID,
            alpha: DEFAULT_ALPHA,
            bandwidth: None,
        }
    }
}

impl GridConfig {
    pub fn with_grid(grid: usize) -> Self {
        Self {
            grid,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid < 2 {
            return Err(QriError::InvalidGrid(self.grid));
        }
        check_alpha(self.alpha)
    }

    pub fn bandwidth_at(&self, n: usize, p: f64) -> Result<f64> {
        bandwidth_at(self.bandwidth, n, p)
    }
}

fn bandwidth_at(fixed: Option<f64>, n: usize, p: f64) -> Result<f64> {
    match fixed {
        Some(h) => Ok(h),
        None => bofinger_bandwidth(n, p),
    }
}

/// Ingredients of `R̂(p)` and its linearization.
#[derive(Debug, Clone, Copy)]
struct RatioPoint {
    a: f64,
    b: f64,
    qa: f64,
    qb: f64,
    da: f64,
    db: f64,
}

impl RatioPoint {
    fn new(s: &SortedSample, p: f64, bandwidth: Option<f64>) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(QriError::ProbabilityOutOfRange { p });
        }
        let a = p / 2.0;
        let b = 1.0 - p / 2.0;
        let qb = quantile_type8(s, b);
        if qb <= 0.0 {
            return Err(QriError::ZeroDenominator { p });
        }
        Ok(Self {
            a,
            b,
            qa: quantile_type8(s, a),
            qb,
            da: quantile_density_hat(s, a, bandwidth_at(bandwidth, s.len(), a)?)?,
            db: quantile_density_hat(s, b, bandwidth_at(bandwidth, s.len(), b)?)?,
        })
    }

    fn ratio(&self) -> f64 {
        (self.qa / self.qb).min(1.0)
    }

    /// Coefficients of `dQ̂(a)` and `dQ̂(b)` in the linearized ratio.
    fn gradient(&self) -> (f64, f64) {
        (1.0 / self.qb, -self.qa / (self.qb * self.qb))
    }
}

// n · Cov(Q̂(u), Q̂(v)) kernel
fn kernel(u: f64, du: f64, v: f64, dv: f64) -> f64 {
    u.min(v) * (1.0 - u.max(v)) * du * dv
}

fn pair_covariance(x: &RatioPoint, y: &RatioPoint, n: f64) -> f64 {
    let (gxa, gxb) = x.gradient();
    let (gya, gyb) = y.gradient();
    (gxa * gya * kernel(x.a, x.da, y.a, y.da)
        + gxa * gyb * kernel(x.a, x.da, y.b, y.db)
        + gxb * gya * kernel(x.b, x.db, y.a, y.da)
        + gxb * gyb * kernel(x.b, x.db, y.b, y.db))
        / n
}

/// Delta-method covariance of `R̂(p)` and `R̂(p′)`. The diagonal (p = p′) is
/// clamped at zero. `bandwidth` as in [`GridConfig::bandwidth`].
pub fn cov_r_hat(s: &SortedSample, p: f64, p_prime: f64, bandwidth: Option<f64>) -> Result<f64> {
    let x = RatioPoint::new(s, p, bandwidth)?;
    let y = RatioPoint::new(s, p_prime, bandwidth)?;
    let c = pair_covariance(&x, &y, s.len() as f64);
    Ok(if p == p_prime { c.max(0.0) } else { c })
}

/// Mean of `1 − R̂` over `points`, with the variance of that mean.
fn grid_average(s: &SortedSample, points: impl Iterator<Item = f64>, cfg: &GridConfig) -> Result<(f64, f64)> {
    let pts = points
        .map(|p| RatioPoint::new(s, p, cfg.bandwidth))
        .collect::<Result<Vec<_>>>()?;
    let j = pts.len() as f64;
    let value = pts.iter().map(|r| 1.0 - r.ratio()).sum::<f64>() / j;
    let n = s.len() as f64;
    let mut var = 0.0;
    for (i, x) in pts.iter().enumerate() {
        var += pair_covariance(x, x, n);
        for y in &pts[i + 1..] {
            var += 2.0 * pair_covariance(x, y, n);
        }
    }
    Ok((value, var / (j * j)))
}

/// `Î^(J) = (1/J) Σ_j (1 − R̂(p_j))` on `p_j = (j − 1/2)/J`.
pub fn i_hat_grid(s: &SortedSample, cfg: &GridConfig) -> Result<QriEstimate> {
    cfg.validate()?;
    let j = cfg.grid as f64;
    let (value, var) = grid_average(s, (1..=cfg.grid).map(|i| (i as f64 - 0.5) / j), cfg)?;
    QriEstimate::with_variance(value, var, Some(cfg.grid), cfg.alpha)
}

/// Per-member grid estimates `Î_k = (1/J) Σ_j (1 − R̂(p_kj))` on
/// `p_kj = 2 p_{k−1} + w_k (j − 1/2)/J`; the total is [`i_hat_grid`].
pub fn ik_hat_grid(s: &SortedSample, partition: &SymmetricPartition, cfg: &GridConfig) -> Result<DecompositionEstimate> {
    cfg.validate()?;
    let j = cfg.grid as f64;
    let components = partition
        .bounds()
        .zip(partition.weights())
        .map(|((lo, _), &w)| {
            let points = (1..=cfg.grid).map(move |i| 2.0 * lo + w * (i as f64 - 0.5) / j);
            let (value, var) = grid_average(s, points, cfg)?;
            QriEstimate::with_variance(value, var, Some(cfg.grid), cfg.alpha)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DecompositionEstimate {
        partition: partition.clone(),
        components,
        weights: partition.weights().to_vec(),
        total: i_hat_grid(s, cfg)?,
        method: Method::Grid,
    })
}
