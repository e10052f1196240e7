//! Quantile ratio index (QRI) of relative inequality.
//!
//! The QRI of a nonnegative income distribution with quantile function `Q`
//! is `I = ∫₀¹ (1 − R(p)) dp` where `R(p) = Q(p/2) / Q(1 − p/2)`. Over a
//! symmetric partition of the quantile ranks it splits exactly into a
//! weighted mean of conditional indices, `I = Σ w_k I_k`.
//!
//! Modules:
//! - [`partitions`]: symmetric K-partitions and regrouping of results.
//! - [`distributions`]: parametric income models, samplers, normal kernels
//!   and lognormal closed forms.
//! - [`theory`]: distribution-level `R`, `I`, `I_k` by adaptive quadrature.
//! - [`estimation`]: sample QRI estimators, delta-method standard errors and
//!   the exact order-statistic decomposition.
//! - [`grouped`]: binned tables, population synthesis, percentiles, KDE.
//! - [`sim`]: Monte-Carlo coverage experiments.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod distributions;
pub mod error;
pub mod estimation;
pub mod fixtures;
pub mod grouped;
pub mod partitions;
pub mod quadrature;
pub mod sim;
pub mod theory;

pub use distributions::{DistributionSpec, SeededRng};
pub use error::{QriError, Result};
pub use estimation::{DecompositionEstimate, GridConfig, QriEstimate, SortedSample};
pub use partitions::SymmetricPartition;
