//! Parametric income distributions with exact quantile functions and
//! inverse-transform samplers.

mod lognormal;
mod rng;
pub mod special;

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{QriError, Result};

pub use lognormal::{lognormal_i, lognormal_ik, lognormal_partial_integral};
pub use rng::{SeededRng, RNG_ALGORITHM};
pub use special::{normal_cdf, normal_quantile};

/// Distribution family and parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Lognormal { mu: f64, sigma: f64 },
    Beta { alpha: f64, beta: f64 },
    ChiSquare { df: f64 },
    /// Lomax: `Q(p) = scale ((1 - p)^(-1/shape) - 1)`.
    ParetoII { shape: f64, scale: f64 },
    Exponential { rate: f64 },
    /// Unit scale.
    Weibull { shape: f64 },
    /// Standard lognormal with log-sd `sigma` below the median, Fréchet
    /// quantile rescaled to meet it at the median above.
    LognormalFrechet { sigma: f64, tail_shape: f64 },
}

/// A validated distribution. Construct through the family constructors or
/// by parsing a literal such as `pareto2:4,1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionSpec {
    family: Family,
}

fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(QriError::InvalidParameter { name, value })
    }
}

impl DistributionSpec {
    pub fn lognormal(mu: f64, sigma: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(QriError::InvalidParameter { name: "mu", value: mu });
        }
        Ok(Self::from_family(Family::Lognormal {
            mu,
            sigma: positive("sigma", sigma)?,
        }))
    }

    pub fn beta(alpha: f64, beta: f64) -> Result<Self> {
        Ok(Self::from_family(Family::Beta {
            alpha: positive("alpha", alpha)?,
            beta: positive("beta", beta)?,
        }))
    }

    pub fn chi_square(df: f64) -> Result<Self> {
        Ok(Self::from_family(Family::ChiSquare {
            df: positive("df", df)?,
        }))
    }

    pub fn pareto2(shape: f64, scale: f64) -> Result<Self> {
        Ok(Self::from_family(Family::ParetoII {
            shape: positive("shape", shape)?,
            scale: positive("scale", scale)?,
        }))
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        Ok(Self::from_family(Family::Exponential {
            rate: positive("rate", rate)?,
        }))
    }

    pub fn weibull(shape: f64) -> Result<Self> {
        Ok(Self::from_family(Family::Weibull {
            shape: positive("shape", shape)?,
        }))
    }

    pub fn lognormal_frechet(sigma: f64, tail_shape: f64) -> Result<Self> {
        Ok(Self::from_family(Family::LognormalFrechet {
            sigma: positive("sigma", sigma)?,
            tail_shape: positive("tail_shape", tail_shape)?,
        }))
    }

    fn from_family(family: Family) -> Self {
        Self { family }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    fn bounded_above(&self) -> bool {
        matches!(self.family, Family::Beta { .. })
    }

    /// Quantile function Q(p) for p in [0, 1); p = 1 is accepted only for
    /// the bounded Beta family.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        let upper_ok = if self.bounded_above() { p <= 1.0 } else { p < 1.0 };
        if !(p >= 0.0 && upper_ok) {
            return Err(QriError::ProbabilityOutOfRange { p });
        }
        if p == 0.0 {
            return Ok(0.0);
        }
        Ok(match self.family {
            Family::Lognormal { mu, sigma } => (mu + sigma * normal_quantile(p)?).exp(),
            Family::ParetoII { shape, scale } => scale * ((-p).ln_1p() * (-1.0 / shape)).exp_m1(),
            Family::Exponential { rate } => -(-p).ln_1p() / rate,
            Family::Weibull { shape } => (-(-p).ln_1p()).powf(1.0 / shape),
            Family::LognormalFrechet { sigma, tail_shape } => {
                if p <= 0.5 {
                    (sigma * normal_quantile(p)?).exp()
                } else {
                    (std::f64::consts::LN_2 / -p.ln()).powf(1.0 / tail_shape)
                }
            }
            Family::Beta { .. } if p == 1.0 => 1.0,
            Family::Beta { .. } | Family::ChiSquare { .. } => self.invert_cdf(p)?,
        })
    }

    /// Cumulative distribution function.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        match self.family {
            Family::Lognormal { mu, sigma } => normal_cdf((x.ln() - mu) / sigma),
            Family::Beta { alpha, beta } => special::reg_inc_beta(alpha, beta, x),
            Family::ChiSquare { df } => special::reg_lower_gamma(0.5 * df, 0.5 * x),
            Family::ParetoII { shape, scale } => -((-shape) * (x / scale).ln_1p()).exp_m1(),
            Family::Exponential { rate } => -(-rate * x).exp_m1(),
            Family::Weibull { shape } => -(-x.powf(shape)).exp_m1(),
            Family::LognormalFrechet { sigma, tail_shape } => {
                if x <= 1.0 {
                    normal_cdf(x.ln() / sigma)
                } else {
                    (-std::f64::consts::LN_2 * x.powf(-tail_shape)).exp()
                }
            }
        }
    }

    // Density, used only to drive Newton steps in `invert_cdf`.
    fn newton_density(&self, x: f64) -> f64 {
        match self.family {
            Family::Beta { alpha, beta } => {
                if x <= 0.0 || x >= 1.0 {
                    return 0.0;
                }
                ((alpha - 1.0) * x.ln() + (beta - 1.0) * (-x).ln_1p()
                    - special::ln_beta(alpha, beta))
                .exp()
            }
            Family::ChiSquare { df } => {
                if x <= 0.0 {
                    return 0.0;
                }
                let k = 0.5 * df;
                ((k - 1.0) * x.ln() - 0.5 * x - k * std::f64::consts::LN_2 - special::ln_gamma(k))
                    .exp()
            }
            _ => 0.0,
        }
    }

    /// Safeguarded Newton iteration inside a shrinking bracket.
    fn invert_cdf(&self, p: f64) -> Result<f64> {
        let (mut lo, mut hi) = match self.family {
            Family::Beta { .. } => (0.0, 1.0),
            Family::ChiSquare { df } => {
                let mut hi = df.max(1.0);
                while self.cdf(hi) < p {
                    hi *= 2.0;
                    if hi > 1e300 {
                        return Err(QriError::InversionFailure { p });
                    }
                }
                (0.0, hi)
            }
            _ => unreachable!("closed-form family"),
        };
        let tol = 1e-15f64.max(1e-13 * p.min(1.0 - p));
        let mut x = 0.5 * (lo + hi);
        for _ in 0..500 {
            let f = self.cdf(x) - p;
            if f.abs() <= tol {
                return Ok(x);
            }
            if f < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            if hi - lo <= 4.0 * f64::EPSILON * hi {
                return Ok(x);
            }
            let d = self.newton_density(x);
            let newton = if d > 0.0 && d.is_finite() { x - f / d } else { f64::NAN };
            x = if newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
        }
        let residual = (self.cdf(x) - p).abs();
        if residual <= 1e-10 {
            Ok(x)
        } else {
            Err(QriError::InversionFailure { p })
        }
    }

    /// `n` inverse-transform draws `Q(u)` with `u` uniform on (0, 1).
    pub fn sample(&self, n: usize, rng: &mut SeededRng) -> Result<Vec<f64>> {
        (0..n).map(|_| self.quantile(rng.uniform_open())).collect()
    }
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Lognormal { mu, sigma } => write!(f, "lognormal:{mu},{sigma}"),
            Family::Beta { alpha, beta } => write!(f, "beta:{alpha},{beta}"),
            Family::ChiSquare { df } => write!(f, "chisq:{df}"),
            Family::ParetoII { shape, scale } => write!(f, "pareto2:{shape},{scale}"),
            Family::Exponential { rate } => write!(f, "exp:{rate}"),
            Family::Weibull { shape } => write!(f, "weibull:{shape}"),
            Family::LognormalFrechet { sigma, tail_shape } => {
                write!(f, "lnfrechet:{sigma},{tail_shape}")
            }
        }
    }
}

impl Serialize for DistributionSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl FromStr for DistributionSpec {
    type Err = QriError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || QriError::BadDistributionLiteral(s.to_string());
        let (name, args) = s.trim().split_once(':').ok_or_else(bad)?;
        let params = args
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        match (name.trim().to_ascii_lowercase().as_str(), params.as_slice()) {
            ("lognormal", &[mu, sigma]) => Self::lognormal(mu, sigma),
            ("beta", &[a, b]) => Self::beta(a, b),
            ("chisq", &[df]) => Self::chi_square(df),
            ("pareto2", &[a, scale]) => Self::pareto2(a, scale),
            ("pareto2", &[a]) => Self::pareto2(a, 1.0),
            ("exp", &[rate]) => Self::exponential(rate),
            ("weibull", &[shape]) => Self::weibull(shape),
            ("lnfrechet", &[sigma, tail]) => Self::lognormal_frechet(sigma, tail),
            _ => Err(bad()),
        }
    }
}
