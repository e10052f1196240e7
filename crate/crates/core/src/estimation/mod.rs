//! Sample-based QRI estimators.
//!
//! Two routes are provided. The grid estimators average `1 − R̂` over a
//! midpoint grid and carry delta-method standard errors; the exact
//! estimators are averages over order-statistic pairs `x_j / x_{n−j+1}` and
//! decompose without error when block boundaries fall on integers.

mod exact;
mod grid;
mod quantile;
mod sample;

use serde::Serialize;

use crate::distributions::normal_quantile;
use crate::error::{QriError, Result};
use crate::partitions::SymmetricPartition;

pub use exact::{exact_i, exact_ik, ExactSe};
pub use grid::{cov_r_hat, i_hat_grid, ik_hat_grid, GridConfig};
pub use quantile::{bofinger_bandwidth, quantile_density_hat, quantile_type8, r_hat};
pub use sample::SortedSample;

pub const DEFAULT_GRID: usize = 100;
pub const DEFAULT_ALPHA: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Grid,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConfidenceInterval {
    /// Bounds clipped to [0, 1] for reporting.
    pub low: f64,
    pub high: f64,
    /// `value ∓ z se` before clipping; coverage is judged on these.
    pub low_unclipped: f64,
    pub high_unclipped: f64,
}

impl ConfidenceInterval {
    fn around(value: f64, se: f64, alpha: f64) -> Result<Self> {
        let z = normal_quantile(1.0 - alpha / 2.0)?;
        let low_unclipped = value - z * se;
        let high_unclipped = value + z * se;
        Ok(Self {
            low: low_unclipped.clamp(0.0, 1.0),
            high: high_unclipped.clamp(0.0, 1.0),
            low_unclipped,
            high_unclipped,
        })
    }

    pub fn covers(&self, target: f64) -> bool {
        self.low_unclipped <= target && target <= self.high_unclipped
    }

    pub fn width(&self) -> f64 {
        self.high_unclipped - self.low_unclipped
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Diagnostics {
    /// Negative analytic variances replaced by zero.
    pub clamped_variances: u32,
}

/// A point estimate with optional standard error and interval.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QriEstimate {
    pub value: f64,
    pub se: Option<f64>,
    pub ci: Option<ConfidenceInterval>,
    /// Grid size `J`, or `None` for the exact estimator.
    pub grid: Option<usize>,
    pub alpha: f64,
    /// True when `se` was computed by the grid machinery for an exact value.
    pub se_borrowed: bool,
    pub diagnostics: Diagnostics,
}

impl QriEstimate {
    fn with_variance(value: f64, variance: f64, grid: Option<usize>, alpha: f64) -> Result<Self> {
        let mut diagnostics = Diagnostics::default();
        let variance = if variance < 0.0 {
            diagnostics.clamped_variances += 1;
            0.0
        } else {
            variance
        };
        let se = variance.sqrt();
        Ok(Self {
            value,
            se: Some(se),
            ci: Some(ConfidenceInterval::around(value, se, alpha)?),
            grid,
            alpha,
            se_borrowed: false,
            diagnostics,
        })
    }

    fn point(value: f64, alpha: f64) -> Self {
        Self {
            value,
            se: None,
            ci: None,
            grid: None,
            alpha,
            se_borrowed: false,
            diagnostics: Diagnostics::default(),
        }
    }

    /// Attaches a standard error estimated elsewhere, centring the interval
    /// on this estimate's own value.
    fn borrow_se(&mut self, donor: &QriEstimate) -> Result<()> {
        if let Some(se) = donor.se {
            self.se = Some(se);
            self.ci = Some(ConfidenceInterval::around(self.value, se, donor.alpha)?);
            self.alpha = donor.alpha;
            self.se_borrowed = true;
            self.diagnostics = donor.diagnostics;
        }
        Ok(())
    }

    /// `√n · se`, the root-n scale of asymptotic standard errors.
    pub fn root_n_se(&self, n: usize) -> Option<f64> {
        self.se.map(|se| se * (n as f64).sqrt())
    }
}

/// Per-member estimates together with the overall index.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionEstimate {
    pub partition: SymmetricPartition,
    pub components: Vec<QriEstimate>,
    /// Weights combining the components into `total`: `w_k` for the grid
    /// route, `2 m_k / n` for the exact one.
    pub weights: Vec<f64>,
    pub total: QriEstimate,
    pub method: Method,
}

impl DecompositionEstimate {
    pub fn component_values(&self) -> Vec<f64> {
        self.components.iter().map(|c| c.value).collect()
    }

    /// `Σ weight_k · component_k`.
    pub fn weighted_total(&self) -> f64 {
        self.weights
            .iter()
            .zip(&self.components)
            .map(|(w, c)| w * c.value)
            .sum()
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(QriError::InvalidAlpha(alpha))
    }
}
