//! Grouped (binned) income tables and synthetic populations built from them.
//!
//! Closed bins are filled with uniform draws; an open-ended top bin is filled
//! with a Lomax (Pareto II) tail whose scale makes the bin's lower bound
//! `x_q` the tail's `q`-quantile, `q = 1 − open_count / total`.

use rand::seq::index;
use serde::Serialize;

use crate::distributions::SeededRng;
use crate::error::{QriError, Result};
use crate::estimation::{quantile_type8, SortedSample};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bin {
    pub lower: f64,
    /// `None` for the open-ended top class.
    pub upper: Option<f64>,
    /// Table units (e.g. thousands of persons).
    pub count: f64,
}

impl Bin {
    pub fn is_open(&self) -> bool {
        self.upper.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupedBins {
    bins: Vec<Bin>,
    total: f64,
}

fn parse_number(field: &str, row: usize, what: &str) -> Result<f64> {
    field.trim().parse::<f64>().map_err(|_| QriError::BadBinRow {
        row,
        reason: format!("{what} `{}` is not a number", field.trim()),
    })
}

impl GroupedBins {
    /// Validates bins in table order. Zero-count rows are dropped.
    pub fn new(bins: Vec<Bin>) -> Result<Self> {
        let bins: Vec<Bin> = bins.into_iter().filter(|b| b.count != 0.0).collect();
        for (row, b) in bins.iter().enumerate() {
            if !(b.count > 0.0 && b.count.is_finite()) {
                return Err(QriError::BadBinRow {
                    row,
                    reason: format!("count {} must be a nonnegative number", b.count),
                });
            }
            if !(b.lower >= 0.0 && b.lower.is_finite()) {
                return Err(QriError::BadBinRow {
                    row,
                    reason: format!("lower bound {} must be nonnegative", b.lower),
                });
            }
            if let Some(upper) = b.upper {
                if !(upper >= b.lower && upper.is_finite()) {
                    return Err(QriError::BadBinRow {
                        row,
                        reason: format!("upper bound {upper} is below lower bound {}", b.lower),
                    });
                }
            } else if row + 1 != bins.len() {
                return Err(QriError::OpenBinNotLast { row });
            }
        }
        for (i, pair) in bins.windows(2).enumerate() {
            let prev_upper = pair[0].upper.unwrap_or(f64::INFINITY);
            if pair[1].lower < prev_upper {
                return Err(QriError::OverlappingBins {
                    first: i,
                    second: i + 1,
                });
            }
        }
        let total: f64 = bins.iter().map(|b| b.count).sum();
        if bins.is_empty() || total <= 0.0 {
            return Err(QriError::EmptyTable);
        }
        if let Some(open) = bins.last().filter(|b| b.is_open()) {
            let fraction = open.count / total;
            if fraction >= 0.5 {
                return Err(QriError::OpenBinTooLarge { fraction });
            }
        }
        Ok(Self { bins, total })
    }

    /// Parses `lower,upper,count` CSV (header optional). An empty upper
    /// field marks the open top bin; negative bounds are clipped to 0.
    pub fn parse(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(text.as_bytes());
        let mut bins = Vec::new();
        for (row, record) in reader.records().enumerate() {
            let record = record.map_err(|e| QriError::BadBinRow {
                row,
                reason: e.to_string(),
            })?;
            if record.iter().all(|f| f.is_empty()) {
                continue;
            }
            if row == 0 && record.get(0).is_some_and(|f| f.parse::<f64>().is_err()) {
                continue; // header
            }
            if record.len() != 3 {
                return Err(QriError::BadBinRow {
                    row,
                    reason: format!("expected 3 fields, found {}", record.len()),
                });
            }
            let lower = parse_number(&record[0], row, "lower")?.max(0.0);
            let upper = match record[1].trim() {
                "" => None,
                s => Some(parse_number(s, row, "upper")?.max(0.0)),
            };
            let count = parse_number(&record[2], row, "count")?;
            if count < 0.0 {
                return Err(QriError::BadBinRow {
                    row,
                    reason: format!("negative count {count}"),
                });
            }
            bins.push(Bin { lower, upper, count });
        }
        Self::new(bins)
    }

    pub fn bins(&self) -> &[Bin] {
        &self.bins
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn open_bin(&self) -> Option<&Bin> {
        self.bins.last().filter(|b| b.is_open())
    }

    /// Probability level `q = 1 − open_count / total` of the open bin's
    /// lower bound.
    pub fn tail_level(&self) -> Option<f64> {
        self.open_bin().map(|b| 1.0 - b.count / self.total)
    }
}

/// Lomax scale `λ = x_q / ((1 − q)^(−1/a) − 1)` putting `x_q` at level `q`.
pub fn lomax_scale(x_q: f64, q: f64, shape: f64) -> Result<f64> {
    if !(shape > 0.0) {
        return Err(QriError::InvalidParameter {
            name: "tail_shape",
            value: shape,
        });
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(QriError::ProbabilityOutOfRange { p: q });
    }
    Ok(x_q / ((-q).ln_1p() * (-1.0 / shape)).exp_m1())
}

/// Tail scale for the table's open bin.
pub fn tail_scale(bins: &GroupedBins, shape: f64) -> Result<f64> {
    let open = bins.open_bin().ok_or(QriError::NoOpenBin)?;
    let q = bins.tail_level().ok_or(QriError::NoOpenBin)?;
    lomax_scale(open.lower, q, shape)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SynthConfig {
    /// Lomax shape `a` of the open bin.
    pub tail_shape: f64,
    /// Synthetic values generated per table unit.
    pub count_scale: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            tail_shape: 4.0,
            count_scale: 10.0,
        }
    }
}

/// Integer draw counts per bin: `count · scale` rounded half-to-even, then
/// adjusted one unit at a time on the largest bins until the grand total
/// equals `round(total · scale)`.
pub fn bin_sizes(bins: &GroupedBins, count_scale: f64) -> Vec<usize> {
    let target = (bins.total * count_scale).round_ties_even() as i64;
    let mut sizes: Vec<i64> = bins
        .bins
        .iter()
        .map(|b| (b.count * count_scale).round_ties_even() as i64)
        .collect();
    let mut order: Vec<usize> = (0..sizes.len()).collect();
    order.sort_by(|&i, &j| bins.bins[j].count.total_cmp(&bins.bins[i].count));
    let mut diff = target - sizes.iter().sum::<i64>();
    let step = diff.signum();
    let mut cursor = 0;
    while diff != 0 {
        let i = order[cursor % order.len()];
        if sizes[i] + step >= 0 {
            sizes[i] += step;
            diff -= step;
        }
        cursor += 1;
    }
    sizes.into_iter().map(|s| s as usize).collect()
}

/// Builds an explicit population from a grouped table.
pub fn synth_population(bins: &GroupedBins, cfg: &SynthConfig, rng: &mut SeededRng) -> Result<SortedSample> {
    if !(cfg.count_scale >= 1.0) {
        return Err(QriError::InvalidParameter {
            name: "count_scale",
            value: cfg.count_scale,
        });
    }
    if !(cfg.tail_shape > 0.0) {
        return Err(QriError::InvalidParameter {
            name: "tail_shape",
            value: cfg.tail_shape,
        });
    }
    let sizes = bin_sizes(bins, cfg.count_scale);
    let mut values = Vec::with_capacity(sizes.iter().sum());
    for (bin, &size) in bins.bins.iter().zip(&sizes) {
        match bin.upper {
            Some(upper) if upper == bin.lower => values.extend(std::iter::repeat_n(bin.lower, size)),
            Some(upper) => values.extend((0..size).map(|_| rng.uniform_in(bin.lower, upper))),
            None => {
                let x_q = bin.lower;
                let tail_mass = 1.0 - bins.tail_level().expect("open bin");
                let lambda = lomax_scale(x_q, 1.0 - tail_mass, cfg.tail_shape)?;
                values.extend((0..size).map(|_| {
                    // 1 − u with u uniform on [q, 1)
                    let survival = tail_mass * rng.uniform_open();
                    (lambda * (survival.ln() * (-1.0 / cfg.tail_shape)).exp_m1()).max(x_q)
                }));
            }
        }
    }
    SortedSample::new(values)
}

/// Simple random sample of `n` values without replacement.
pub fn subsample(s: &SortedSample, n: usize, rng: &mut SeededRng) -> Result<SortedSample> {
    let n = n.min(s.len());
    let picked = index::sample(rng, s.len(), n);
    SortedSample::new(picked.iter().map(|i| s.values()[i]).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PercentileTable {
    /// `(probability, Type 8 quantile)`.
    pub rows: Vec<(f64, f64)>,
    pub min: f64,
    pub max: f64,
}

/// Standard reporting probabilities (P05 … P95).
pub const STANDARD_PROBS: [f64; 9] = [0.05, 0.10, 0.20, 0.25, 0.50, 0.75, 0.80, 0.90, 0.95];

pub fn percentile_table(s: &SortedSample, probs: &[f64]) -> Result<PercentileTable> {
    let rows = probs
        .iter()
        .map(|&p| {
            if (0.0..=1.0).contains(&p) {
                Ok((p, quantile_type8(s, p)))
            } else {
                Err(QriError::ProbabilityOutOfRange { p })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PercentileTable {
        rows,
        min: s.min(),
        max: s.max(),
    })
}

/// Rule-of-thumb bandwidth `0.9 min(sd, IQR/1.34) n^(-1/5)`, falling back to
/// whichever spread is positive.
pub fn silverman_bandwidth(s: &SortedSample) -> f64 {
    let x = s.values();
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let sd = (x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let iqr = (quantile_type8(s, 0.75) - quantile_type8(s, 0.25)) / 1.34;
    let spread = match (sd > 0.0, iqr > 0.0) {
        (true, true) => sd.min(iqr),
        (true, false) => sd,
        (false, true) => iqr,
        (false, false) => 0.0,
    };
    0.9 * spread * n.powf(-0.2)
}

/// Gaussian kernel density on `grid_points` evenly spaced values of
/// `[0, truncate_at]`. Mass beyond the grid is not renormalized.
pub fn kde_export(s: &SortedSample, truncate_at: f64, grid_points: usize) -> Result<Vec<(f64, f64)>> {
    if !(truncate_at > 0.0 && truncate_at.is_finite()) {
        return Err(QriError::InvalidParameter {
            name: "truncate_at",
            value: truncate_at,
        });
    }
    if grid_points < 2 {
        return Err(QriError::InvalidParameter {
            name: "grid_points",
            value: grid_points as f64,
        });
    }
    let step = truncate_at / (grid_points - 1) as f64;
    let mut bw = silverman_bandwidth(s);
    if bw <= 0.0 {
        // constant sample: one grid step keeps a visible peak
        bw = step;
    }
    let x = s.values();
    let n = x.len() as f64;
    let norm = 1.0 / (n * bw * (2.0 * std::f64::consts::PI).sqrt());
    let reach = 8.0 * bw;
    Ok((0..grid_points)
        .map(|i| {
            let at = i as f64 * step;
            let from = x.partition_point(|&v| v < at - reach);
            let to = x.partition_point(|&v| v <= at + reach);
            let sum: f64 = x[from..to]
                .iter()
                .map(|&v| {
                    let z = (at - v) / bw;
                    (-0.5 * z * z).exp()
                })
                .sum();
            (at, sum * norm)
        })
        .collect())
}
