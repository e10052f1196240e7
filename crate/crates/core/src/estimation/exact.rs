//! Order-statistic estimators: `Î = (2/n) Σ_{j ≤ n/2} (1 − x_j / x_{n−j+1})`
//! and its block decomposition over a symmetric partition.

use super::grid::{i_hat_grid, ik_hat_grid, GridConfig};
use super::{DecompositionEstimate, Method, QriEstimate, SortedSample, DEFAULT_ALPHA};
use crate::error::{QriError, Result};
use crate::partitions::SymmetricPartition;

/// Where the exact estimators get their standard errors from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExactSe {
    /// Point estimates only.
    None,
    /// Borrow the grid estimator's standard error (flagged `se_borrowed`).
    BorrowGrid(GridConfig),
}

// 1 − x_j / x_{n−j+1} for 1-based j
fn pair_term(x: &[f64], j: usize) -> Result<f64> {
    let upper = x[x.len() - j];
    if upper <= 0.0 {
        return Err(QriError::ZeroDenominator {
            p: j as f64 / x.len() as f64,
        });
    }
    Ok(1.0 - x[j - 1] / upper)
}

fn block_sum(x: &[f64], from: usize, to: usize) -> Result<f64> {
    (from..=to).map(|j| pair_term(x, j)).sum()
}

fn exact_value(s: &SortedSample) -> Result<f64> {
    let x = s.values();
    let n = x.len();
    Ok(2.0 / n as f64 * block_sum(x, 1, n / 2)?)
}

pub fn exact_i(s: &SortedSample, se: ExactSe) -> Result<QriEstimate> {
    let mut est = QriEstimate::point(exact_value(s)?, DEFAULT_ALPHA);
    if let ExactSe::BorrowGrid(cfg) = se {
        est.borrow_se(&i_hat_grid(s, &cfg)?)?;
    }
    Ok(est)
}

/// Block boundaries `n_k = n p_k`, each of which must be an integer.
fn block_boundaries(n: usize, partition: &SymmetricPartition) -> Result<Vec<usize>> {
    let mut out = Vec::with_capacity(partition.cuts().len());
    for &cut in partition.cuts() {
        let position = n as f64 * cut;
        let rounded = position.round();
        if (position - rounded).abs() > 1e-9 * (n as f64).max(1.0) {
            return Err(QriError::NonIntegerBlockBoundary { position });
        }
        let b = rounded as usize;
        if out.last().is_some_and(|&prev| prev >= b) {
            return Err(QriError::NonIntegerBlockBoundary { position });
        }
        out.push(b);
    }
    Ok(out)
}

/// `Î_k = (1/m_k) Σ_{j ∈ B_k} (1 − x_j / x_{n−j+1})` over
/// `B_k = {n_{k−1} + 1, …, n_k}`.
pub fn exact_ik(s: &SortedSample, partition: &SymmetricPartition, se: ExactSe) -> Result<DecompositionEstimate> {
    let x = s.values();
    let n = x.len();
    let bounds = block_boundaries(n, partition)?;
    let mut components = Vec::with_capacity(partition.len());
    let mut weights = Vec::with_capacity(partition.len());
    for span in bounds.windows(2) {
        let m = span[1] - span[0];
        let value = block_sum(x, span[0] + 1, span[1])? / m as f64;
        components.push(QriEstimate::point(value, DEFAULT_ALPHA));
        weights.push(2.0 * m as f64 / n as f64);
    }
    let mut total = exact_i(s, ExactSe::None)?;
    if let ExactSe::BorrowGrid(cfg) = se {
        let grid = ik_hat_grid(s, partition, &cfg)?;
        for (c, donor) in components.iter_mut().zip(&grid.components) {
            c.borrow_se(donor)?;
        }
        total.borrow_se(&grid.total)?;
    }
    Ok(DecompositionEstimate {
        partition: partition.clone(),
        components,
        weights,
        total,
        method: Method::Exact,
    })
}
