//! Population ("true") quantile ratio curve and QRI for any
//! [`DistributionSpec`], computed by adaptive quadrature.

use serde::Serialize;

use crate::distributions::DistributionSpec;
use crate::error::{QriError, Result};
use crate::partitions::SymmetricPartition;
use crate::quadrature::integrate;
pub use crate::quadrature::QuadratureConfig;

/// `R(p) = Q(p/2) / Q(1 − p/2)` for p in (0, 1].
pub fn true_r(d: &DistributionSpec, p: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(QriError::ProbabilityOutOfRange { p });
    }
    if p == 1.0 {
        return Ok(1.0);
    }
    let upper = d.quantile(1.0 - p / 2.0)?;
    if upper <= 0.0 {
        return Err(QriError::ZeroDenominator { p });
    }
    Ok((d.quantile(p / 2.0)? / upper).clamp(0.0, 1.0))
}

fn r_integral(d: &DistributionSpec, from: f64, to: f64, abs_tol: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let cfg = QuadratureConfig { abs_tol, ..*cfg };
    Ok(integrate(|p| true_r(d, p), from, to, &cfg)?.value)
}

/// `I = ∫₀¹ (1 − R(p)) dp`.
pub fn true_i(d: &DistributionSpec, cfg: &QuadratureConfig) -> Result<f64> {
    Ok((1.0 - r_integral(d, 0.0, 1.0, cfg.abs_tol, cfg)?).clamp(0.0, 1.0))
}

/// Conditional indices `I_k = 1 − (1/w_k) ∫_{2p_{k-1}}^{2p_k} R(u) du`.
///
/// Member `k` is integrated to tolerance `w_k · abs_tol`, so every `I_k` is
/// within `abs_tol` and the weighted total within `abs_tol` overall.
pub fn true_ik(d: &DistributionSpec, partition: &SymmetricPartition, cfg: &QuadratureConfig) -> Result<Vec<f64>> {
    partition
        .bounds()
        .zip(partition.weights())
        .map(|((lo, hi), &w)| {
            let mass = r_integral(d, 2.0 * lo, 2.0 * hi, cfg.abs_tol * w, cfg)?;
            Ok((1.0 - mass / w).clamp(0.0, 1.0))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquiLimit {
    /// 1-based member index `⌈pK⌉`.
    pub member: usize,
    /// `I_k` of that member in the equi-K-partition.
    pub conditional: f64,
    /// `1 − R(p)`.
    pub limit: f64,
}

impl EquiLimit {
    pub fn gap(&self) -> f64 {
        (self.conditional - self.limit).abs()
    }
}

/// Compares the conditional index of the equi-K member containing `p` with
/// its large-K limit `1 − R(p)`.
pub fn equi_limit_check(d: &DistributionSpec, members: usize, p: f64, cfg: &QuadratureConfig) -> Result<EquiLimit> {
    if members == 0 {
        return Err(QriError::ZeroK);
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(QriError::ProbabilityOutOfRange { p });
    }
    let k_f = members as f64;
    // tolerance keeps exact multiples of 1/K (e.g. 0.3 * 100) on the left member
    let member = ((p * k_f - 1e-9).ceil() as usize).clamp(1, members);
    let conditional = if members == 1 {
        true_i(d, cfg)?
    } else {
        let lo = (member - 1) as f64 / k_f;
        let hi = member as f64 / k_f;
        let w = 1.0 / k_f;
        1.0 - r_integral(d, lo, hi, cfg.abs_tol * w, cfg)? / w
    };
    Ok(EquiLimit {
        member,
        conditional,
        limit: 1.0 - true_r(d, p)?,
    })
}

/// `(p, R(p))` on an even grid of `points` values in (0, 1], for plotting.
pub fn r_curve(d: &DistributionSpec, points: usize) -> Result<Vec<(f64, f64)>> {
    (1..=points)
        .map(|i| {
            let p = i as f64 / points as f64;
            Ok((p, true_r(d, p)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{lognormal_i, lognormal_ik, normal_quantile};

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn lognormal(sigma: f64) -> DistributionSpec {
        DistributionSpec::lognormal(0.0, sigma).unwrap()
    }

    #[test]
    fn ratio_curve_values() {
        let ln = lognormal(1.0);
        assert_eq!(true_r(&ln, 1.0).unwrap(), 1.0);
        let expected = (2.0 * normal_quantile(0.25).unwrap()).exp();
        assert!((expected - (2.0 * -0.674_489_750_196_081_7f64).exp()).abs() < 1e-14);
        assert!((expected - 0.259_505).abs() < 1e-6);
        assert!((true_r(&ln, 0.5).unwrap() - expected).abs() < 1e-12);

        let lomax = DistributionSpec::pareto2(1.0, 1.0).unwrap();
        for &p in &[0.1, 0.5, 0.9] {
            let h: f64 = p / 2.0;
            let want = (h / (1.0 - h)).powi(2);
            assert!((true_r(&lomax, p).unwrap() - want).abs() < 1e-12);
        }
        assert!(true_r(&ln, 0.0).is_err());
    }

    #[test]
    fn population_indices() {
        assert!((true_i(&lognormal(1.0), &cfg()).unwrap() - 0.6638).abs() < 1e-4);
        let exp = DistributionSpec::exponential(1.0).unwrap();
        assert!((true_i(&exp, &cfg()).unwrap() - 0.7016).abs() < 1e-3);
        // ∫₀¹ (p/2)²/(1 − p/2)² dp = 3 − 4 ln 2
        let lomax = DistributionSpec::pareto2(1.0, 1.0).unwrap();
        let want = 4.0 * std::f64::consts::LN_2 - 2.0;
        assert!((true_i(&lomax, &cfg()).unwrap() - want).abs() < 1e-8);
    }

    #[test]
    fn quadrature_matches_lognormal_closed_form() {
        let quint = SymmetricPartition::quintile();
        for &s in &[0.25, 0.5, 1.0, 2.0] {
            let d = lognormal(s);
            assert!((true_i(&d, &cfg()).unwrap() - lognormal_i(s).unwrap()).abs() < 1e-6);
            let num = true_ik(&d, &quint, &cfg()).unwrap();
            let exact = lognormal_ik(s, &quint).unwrap();
            for (a, b) in num.iter().zip(&exact) {
                assert!((a - b).abs() < 1e-6, "sigma={s}");
            }
        }
    }

    #[test]
    fn exponential_quartile_components() {
        let exp = DistributionSpec::exponential(1.0).unwrap();
        let ik = true_ik(&exp, &SymmetricPartition::quartile(), &cfg()).unwrap();
        assert!((ik[0] - 0.9230).abs() < 2e-3 && (ik[1] - 0.4802).abs() < 2e-3, "{ik:?}");
        assert!((ik[0] / 2.0 - 0.4615).abs() < 1e-3);
        assert!((ik[1] / 2.0 - 0.2401).abs() < 1e-3);
    }

    #[test]
    fn one_member_partition_is_total() {
        let d = DistributionSpec::weibull(2.0).unwrap();
        let whole = SymmetricPartition::new(&[]).unwrap();
        let ik = true_ik(&d, &whole, &cfg()).unwrap();
        assert!((ik[0] - true_i(&d, &cfg()).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn decomposition_ordering_and_total() {
        let parts = [
            SymmetricPartition::quartile(),
            SymmetricPartition::quintile(),
            SymmetricPartition::decile(),
            SymmetricPartition::new(&[0.05, 0.33, 0.49]).unwrap(),
        ];
        for lit in ["beta:0.5,0.5", "chisq:4", "pareto2:2,1", "weibull:0.5", "lnfrechet:1,2"] {
            let d: DistributionSpec = lit.parse().unwrap();
            let total = true_i(&d, &cfg()).unwrap();
            for p in &parts {
                let ik = true_ik(&d, p, &cfg()).unwrap();
                assert!(ik.windows(2).all(|w| w[0] >= w[1] - 1e-12), "{lit}: {ik:?}");
                assert!((p.weighted_sum(&ik) - total).abs() <= 2.0 * cfg().abs_tol, "{lit}");
            }
        }
    }

    #[test]
    fn scale_invariance() {
        let a = DistributionSpec::pareto2(3.0, 1.0).unwrap();
        let b = DistributionSpec::pareto2(3.0, 100.0).unwrap();
        let ia = true_i(&a, &cfg()).unwrap();
        let ib = true_i(&b, &cfg()).unwrap();
        assert!((ia - ib).abs() < 1e-12);
    }

    #[test]
    fn refinement_consistency() {
        for lit in ["lognormal:0,1", "exp:1", "chisq:4"] {
            let d: DistributionSpec = lit.parse().unwrap();
            let fine = true_ik(&d, &SymmetricPartition::decile(), &cfg()).unwrap();
            let coarse = SymmetricPartition::decile()
                .coarsen(&SymmetricPartition::quintile(), &fine)
                .unwrap();
            let direct = true_ik(&d, &SymmetricPartition::quintile(), &cfg()).unwrap();
            for (a, b) in coarse.iter().zip(&direct) {
                assert!((a - b).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn shape_curves() {
        let mut prev = 1.0;
        let mut outer_prev = 0.5;
        for &a in &[0.5, 1.0, 2.0, 4.0, 10.0, 100.0, 1000.0] {
            let d = DistributionSpec::pareto2(a, 1.0).unwrap();
            let i = true_i(&d, &cfg()).unwrap();
            let ik = true_ik(&d, &SymmetricPartition::quartile(), &cfg()).unwrap();
            assert!(i < prev, "pareto I not decreasing at a={a}");
            assert!(ik[0] / 2.0 <= outer_prev && ik[0] / 2.0 > 0.4615 - 1e-3);
            prev = i;
            outer_prev = ik[0] / 2.0;
        }
        assert!(prev > 0.7016 - 1e-3);
        let mut prev = 0.0;
        for &s in &[0.1, 0.5, 1.0, 2.0, 3.0] {
            let i = true_i(&lognormal(s), &cfg()).unwrap();
            assert!(i > prev);
            prev = i;
        }
        // gamma family (chi-square): decreasing in the shape
        let mut prev = 1.0;
        for &df in &[0.5, 1.0, 4.0, 25.0, 100.0] {
            let i = true_i(&DistributionSpec::chi_square(df).unwrap(), &cfg()).unwrap();
            assert!(i < prev);
            prev = i;
        }
    }

    #[test]
    fn equi_limit() {
        let ln = lognormal(1.0);
        let check = equi_limit_check(&ln, 200, 0.5, &cfg()).unwrap();
        assert_eq!(check.member, 100);
        let target = 1.0 - 0.25947;
        assert!((check.conditional - target).abs() < 0.01);
        assert!((check.limit - target).abs() < 0.01);

        let degenerate = equi_limit_check(&ln, 1, 0.37, &cfg()).unwrap();
        assert!((degenerate.conditional - lognormal_i(1.0).unwrap()).abs() < 1e-8);

        let exp = DistributionSpec::exponential(1.0).unwrap();
        let coarse = equi_limit_check(&exp, 200, 0.3, &cfg()).unwrap();
        let fine = equi_limit_check(&exp, 400, 0.3, &cfg()).unwrap();
        assert!(coarse.gap() >= 1.5 * fine.gap(), "{coarse:?} {fine:?}");
    }

    #[test]
    fn curve_export() {
        let c = r_curve(&lognormal(1.0), 10).unwrap();
        assert_eq!(c.len(), 10);
        assert_eq!(c[9], (1.0, 1.0));
        assert!(c.windows(2).all(|w| w[0].1 <= w[1].1));
    }
}
