use serde::Serialize;

use crate::error::{QriError, Result};

/// Nonnegative incomes sorted ascending, with fewer than half equal to zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SortedSample {
    values: Vec<f64>,
    zero_fraction: f64,
}

impl SortedSample {
    /// Validates and sorts raw incomes. Negative values are rejected, not
    /// clipped; callers that want clipping must do it first.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if let Some(&value) = values.iter().find(|v| !v.is_finite()) {
            return Err(QriError::NonFiniteIncome { value });
        }
        if let Some(&value) = values.iter().find(|&&v| v < 0.0) {
            return Err(QriError::NegativeIncome { value });
        }
        if values.len() < 2 {
            return Err(QriError::TooFewObservations { n: values.len() });
        }
        values.sort_unstable_by(f64::total_cmp);
        let zeros = values.iter().take_while(|&&v| v == 0.0).count();
        let zero_fraction = zeros as f64 / values.len() as f64;
        if zero_fraction >= 0.5 {
            return Err(QriError::ZeroMassTooLarge {
                fraction: zero_fraction,
            });
        }
        Ok(Self {
            values,
            zero_fraction,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn zero_fraction(&self) -> f64 {
        self.zero_fraction
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}
