//! Symmetric K-partitions of the unit interval.
//!
//! A partition is given by cuts `0 = p_0 < p_1 < ... < p_K = 1/2`. Member `k`
//! is the union `[p_{k-1}, p_k) ∪ (1 - p_k, 1 - p_{k-1}]` and carries
//! probability weight `w_k = 2 (p_k - p_{k-1})`.

use serde::Serialize;

use crate::error::{QriError, Result};

/// Upper bound on the number of members.
pub const MAX_MEMBERS: usize = 10_000;

/// Absolute tolerance used when matching cuts of two partitions.
pub const CUT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetricPartition {
    cuts: Vec<f64>,
    weights: Vec<f64>,
}

impl SymmetricPartition {
    /// Builds a partition from its interior cuts, each in the open interval
    /// `(0, 1/2)`. An empty slice gives the one-member partition.
    pub fn new(interior_cuts: &[f64]) -> Result<Self> {
        for &cut in interior_cuts {
            if !(cut > 0.0 && cut < 0.5) {
                return Err(QriError::CutOutOfRange { cut });
            }
        }
        for pair in interior_cuts.windows(2) {
            if pair[1] <= pair[0] {
                return Err(QriError::NonIncreasingCuts {
                    prev: pair[0],
                    next: pair[1],
                });
            }
        }
        let members = interior_cuts.len() + 1;
        if members > MAX_MEMBERS {
            return Err(QriError::TooManyMembers {
                members,
                cap: MAX_MEMBERS,
            });
        }
        let mut cuts = Vec::with_capacity(members + 1);
        cuts.push(0.0);
        cuts.extend_from_slice(interior_cuts);
        cuts.push(0.5);
        Ok(Self::from_cuts(cuts))
    }

    /// The equi-K-partition with cuts `k / (2K)` and equal weights `1/K`.
    pub fn equi(members: usize) -> Result<Self> {
        if members == 0 {
            return Err(QriError::ZeroK);
        }
        if members > MAX_MEMBERS {
            return Err(QriError::TooManyMembers {
                members,
                cap: MAX_MEMBERS,
            });
        }
        let denom = 2.0 * members as f64;
        let cuts = (0..=members).map(|k| k as f64 / denom).collect();
        Ok(Self::from_cuts(cuts))
    }

    /// Outer and inner quartiles.
    pub fn quartile() -> Self {
        Self::new(&[0.25]).expect("valid cuts")
    }

    /// Cuts at 0.2 and 0.4.
    pub fn quintile() -> Self {
        Self::new(&[0.2, 0.4]).expect("valid cuts")
    }

    /// Cuts at 0.1, 0.2, 0.3, 0.4.
    pub fn decile() -> Self {
        Self::equi(5).expect("valid size")
    }

    fn from_cuts(cuts: Vec<f64>) -> Self {
        let weights = cuts.windows(2).map(|c| 2.0 * (c[1] - c[0])).collect();
        Self { cuts, weights }
    }

    /// All cuts including the end points 0 and 1/2.
    pub fn cuts(&self) -> &[f64] {
        &self.cuts
    }

    pub fn interior_cuts(&self) -> &[f64] {
        &self.cuts[1..self.cuts.len() - 1]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Number of members `K`.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `(p_{k-1}, p_k)` for each member.
    pub fn bounds(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.cuts.windows(2).map(|c| (c[0], c[1]))
    }

    /// Regroups per-member values of `self` onto a coarser partition whose
    /// cuts are a subset of this one's. Each coarse value is the
    /// weight-averaged value of the fine members it contains.
    pub fn coarsen(&self, coarse: &SymmetricPartition, values: &[f64]) -> Result<Vec<f64>> {
        if values.len() != self.len() {
            return Err(QriError::LengthMismatch {
                expected: self.len(),
                got: values.len(),
            });
        }
        // index into self.cuts of every coarse cut
        let mut positions = Vec::with_capacity(coarse.cuts.len());
        for &cut in &coarse.cuts {
            let pos = self
                .cuts
                .iter()
                .position(|&c| (c - cut).abs() <= CUT_TOLERANCE)
                .ok_or(QriError::NotARefinement { cut })?;
            positions.push(pos);
        }
        Ok(positions
            .windows(2)
            .zip(&coarse.weights)
            .map(|(span, &w_coarse)| {
                (span[0]..span[1])
                    .map(|i| self.weights[i] / w_coarse * values[i])
                    .sum()
            })
            .collect())
    }

    /// Weighted total `Σ w_k v_k`.
    pub fn weighted_sum(&self, values: &[f64]) -> f64 {
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }
}

impl std::str::FromStr for SymmetricPartition {
    type Err = QriError;

    /// Parses comma-separated interior cuts, e.g. `0.2,0.4`. An empty string
    /// is the one-member partition.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Self::new(&[]);
        }
        let cuts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| QriError::CutOutOfRange { cut: f64::NAN })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(&cuts)
    }
}
