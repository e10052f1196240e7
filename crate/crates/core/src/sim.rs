//! Monte-Carlo coverage experiments for the decomposition intervals.

use rayon::prelude::*;
use serde::Serialize;

use crate::distributions::{lognormal_ik, DistributionSpec, Family, SeededRng, RNG_ALGORITHM};
use crate::error::{QriError, Result};
use crate::estimation::{ik_hat_grid, GridConfig, SortedSample};
use crate::partitions::SymmetricPartition;
use crate::theory::{self, QuadratureConfig};

/// Smallest sample size accepted by [`coverage_experiment`].
pub const MIN_SAMPLE: usize = 20;

/// The sixteen simulation families as `(label, distribution literal)` pairs.
pub const FAMILIES: [(&str, &str); 16] = [
    ("Lognormal", "lognormal:0,1"),
    ("Beta(0.1,0.1)", "beta:0.1,0.1"),
    ("Beta(0.5,0.5)", "beta:0.5,0.5"),
    ("Beta(1,1)", "beta:1,1"),
    ("Beta(10,10)", "beta:10,10"),
    ("ChiSq(1)", "chisq:1"),
    ("ChiSq(4)", "chisq:4"),
    ("ChiSq(25)", "chisq:25"),
    ("Pareto(1)", "pareto2:1,1"),
    ("Pareto(2)", "pareto2:2,1"),
    ("Pareto(100)", "pareto2:100,1"),
    ("Exp(1)", "exp:1"),
    ("Weibull(0.5)", "weibull:0.5"),
    ("Weibull(2)", "weibull:2"),
    ("Weibull(10)", "weibull:10"),
    ("LN-Frechet", "lnfrechet:1,2"),
];

/// Indices into [`FAMILIES`] of the quick default subset.
pub const DESK_SUBSET: [usize; 6] = [0, 3, 6, 9, 11, 13];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentCoverage {
    pub true_value: f64,
    pub hits: usize,
    pub coverage: f64,
    /// Mean unclipped interval width over successful trials.
    pub mean_width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageReport {
    pub distribution: DistributionSpec,
    pub n: usize,
    pub partition: SymmetricPartition,
    pub trials: usize,
    pub grid: usize,
    pub alpha: f64,
    pub nominal: f64,
    pub per_component: Vec<ComponentCoverage>,
    /// Trials where the estimator returned an error; they count as misses.
    pub failed_trials: usize,
    pub seed: u64,
    pub rng: &'static str,
}

impl CoverageReport {
    pub fn coverages(&self) -> Vec<f64> {
        self.per_component.iter().map(|c| c.coverage).collect()
    }
}

/// Population values `I_k`, in closed form for the lognormal family.
pub fn true_components(d: &DistributionSpec, partition: &SymmetricPartition) -> Result<Vec<f64>> {
    match d.family() {
        Family::Lognormal { sigma, .. } => lognormal_ik(sigma, partition),
        _ => theory::true_ik(d, partition, &QuadratureConfig::with_tolerance(1e-10)),
    }
}

/// Runs `trials` independent samples of size `n`; trial `t` draws from
/// `SeededRng::new(seed).derive(t)`, so results do not depend on the thread
/// count.
pub fn coverage_experiment(
    d: &DistributionSpec,
    n: usize,
    partition: &SymmetricPartition,
    trials: usize,
    cfg: &GridConfig,
    seed: u64,
) -> Result<CoverageReport> {
    if n < MIN_SAMPLE {
        return Err(QriError::TooFewObservations { n });
    }
    if trials == 0 {
        return Err(QriError::InvalidParameter {
            name: "trials",
            value: 0.0,
        });
    }
    cfg.validate()?;
    let truth = true_components(d, partition)?;
    let base = SeededRng::new(seed);

    let outcomes: Vec<Option<Vec<(bool, f64)>>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = base.derive(t as u64);
            let sample = SortedSample::new(d.sample(n, &mut rng).ok()?).ok()?;
            let est = ik_hat_grid(&sample, partition, cfg).ok()?;
            est.components
                .iter()
                .zip(&truth)
                .map(|(c, &target)| c.ci.map(|ci| (ci.covers(target), ci.width())))
                .collect()
        })
        .collect();

    let failed_trials = outcomes.iter().filter(|o| o.is_none()).count();
    let ok = trials - failed_trials;
    let per_component = truth
        .iter()
        .enumerate()
        .map(|(k, &true_value)| {
            let (hits, width) = outcomes.iter().flatten().fold((0, 0.0), |(h, w), o| {
                (h + usize::from(o[k].0), w + o[k].1)
            });
            ComponentCoverage {
                true_value,
                hits,
                coverage: hits as f64 / trials as f64,
                mean_width: if ok > 0 { width / ok as f64 } else { f64::NAN },
            }
        })
        .collect();

    Ok(CoverageReport {
        distribution: *d,
        n,
        partition: partition.clone(),
        trials,
        grid: cfg.grid,
        alpha: cfg.alpha,
        nominal: 1.0 - cfg.alpha,
        per_component,
        failed_trials,
        seed,
        rng: RNG_ALGORITHM,
    })
}
