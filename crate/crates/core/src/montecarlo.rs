//! Declarative Monte Carlo experiments: ranking studies (proportion of
//! replications selecting the true tail index) and estimator studies
//! (bias/variance of Hill vs energy-score optimization), plus the CI
//! coverage check.
//!
//! Replications are independent tasks; seeds are a pure function of
//! (base_seed, n-index, replication-index), so parallelism can change
//! wall-clock time only, never any output bit. Aggregation is a
//! deterministic reduction applied in index order.

use rayon::prelude::*;
use serde::Serialize;

use crate::distributions::{
    apply_scaling, BurrLaw, ContinuousLaw, FrechetLaw, ParetoCandidate, Sample, ScalingKind,
};
use crate::error::{Error, Result};
use crate::estimators::{beta_schedule, hill, score_opt_estimate, GammaGrid};
use crate::real::Real;
use crate::scoring::{expected_logs, ScoreRule};
use crate::tailscore::{
    empirical_tail_score, score_ci, score_curve, KGrid, TailView,
};

/// Data-generating process. All three laws share the tail index γ_G; the
/// exact Pareto variant is the fixed point used by the coverage check and
/// the properness property runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Dgp<T = f64> {
    Frechet { gamma: T },
    Burr { gamma: T, t: T },
    Pareto { gamma: T },
}

impl<T: Real> Dgp<T> {
    pub fn gamma_true(&self) -> T {
        match self {
            Dgp::Frechet { gamma } | Dgp::Burr { gamma, .. } | Dgp::Pareto { gamma } => *gamma,
        }
    }

    pub fn sample(&self, n: usize, seed: u64, stream: u64) -> Result<Sample<T>> {
        match self {
            Dgp::Frechet { gamma } => {
                FrechetLaw::with_tail_index(*gamma)?.sample_with_stream(n, seed, stream)
            }
            Dgp::Burr { gamma, t } => {
                // c = 1/(γ t) keeps the Burr tail index at γ for any t; the
                // baseline study uses t = 1 so c = 1/γ.
                let c = T::one() / (*gamma * *t);
                BurrLaw::new(c, *t)?.sample_with_stream(n, seed, stream)
            }
            Dgp::Pareto { gamma } => {
                ParetoCandidate::new(*gamma)?.sample_with_stream(n, seed, stream)
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            Dgp::Frechet { gamma } => format!("frechet(gamma={gamma})"),
            Dgp::Burr { gamma, t } => format!("burr(gamma={gamma},t={t})"),
            Dgp::Pareto { gamma } => format!("pareto(gamma={gamma})"),
        }
    }
}

/// Recipe for the k-grid inside each replication.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum KPolicy {
    /// 100 evenly spaced values from 50 to ⌊n/4⌋.
    SimulationDefault,
    /// Evenly spaced with explicit knobs; `k_max = None` means ⌊n/4⌋.
    EvenSpaced {
        k_min: usize,
        k_max: Option<usize>,
        points: usize,
    },
    /// Every integer in [k_min, k_max or ⌊n/4⌋].
    AllIntegers { k_min: usize, k_max: Option<usize> },
    Explicit(Vec<usize>),
}

impl KPolicy {
    pub fn build(&self, n: usize) -> Result<KGrid> {
        match self {
            KPolicy::SimulationDefault => KGrid::simulation_default(n),
            KPolicy::EvenSpaced {
                k_min,
                k_max,
                points,
            } => KGrid::even_spaced(*k_min, k_max.unwrap_or(n / 4), *points),
            KPolicy::AllIntegers { k_min, k_max } => {
                KGrid::all_integers(*k_min, k_max.unwrap_or(n / 4))
            }
            KPolicy::Explicit(values) => KGrid::new(values.clone()),
        }
    }
}

/// Declarative Monte Carlo configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSpec<T = f64> {
    pub dgp: Dgp<T>,
    pub scaling: ScalingKind,
    pub n_values: Vec<usize>,
    pub candidates: Vec<ParetoCandidate<T>>,
    pub rule: ScoreRule<T>,
    pub k_policy: KPolicy,
    pub replications: usize,
    pub base_seed: u64,
}

impl<T: Real> ExperimentSpec<T> {
    fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::InvalidParameter {
                name: "replications",
                reason: "must be ≥ 1".into(),
            });
        }
        if self.n_values.is_empty() {
            return Err(Error::InvalidParameter {
                name: "n_values",
                reason: "must be nonempty".into(),
            });
        }
        Ok(())
    }

    /// Stream id for replication `rep` of sample-size index `n_idx`; distinct
    /// across every (n, replication) pair.
    fn stream(n_idx: usize, rep: usize) -> u64 {
        ((n_idx as u64) << 32) | rep as u64
    }
}

/// Proportion of replications selecting the true index, per k.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProportionCurve<T = f64> {
    pub n: usize,
    /// (k, k/n, proportion correct) per grid value.
    pub points: Vec<ProportionPoint<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProportionPoint<T = f64> {
    pub k: usize,
    pub k_over_n: T,
    pub proportion: T,
}

/// One bias/variance table cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BiasVarianceCell<T = f64> {
    pub method: String,
    pub beta: Option<T>,
    pub gamma_true: T,
    pub k_fraction: T,
    pub k: usize,
    pub bias: T,
    /// Sample variance with the (m−1) denominator; absent for a single
    /// replication.
    pub variance: Option<T>,
}

/// Ranking experiment: for each n and each grid k, the fraction of
/// replications in which the empirical tail score is maximized at the
/// candidate equal to γ_G.
pub fn run_ranking_experiment<T: Real>(spec: &ExperimentSpec<T>) -> Result<Vec<ProportionCurve<T>>> {
    spec.validate()?;
    if spec.candidates.is_empty() {
        return Err(Error::InvalidParameter {
            name: "candidates",
            reason: "must be nonempty".into(),
        });
    }
    let gamma_true = spec.dgp.gamma_true();
    if !spec.candidates.iter().any(|c| c.gamma() == gamma_true) {
        return Err(Error::InvalidParameter {
            name: "candidates",
            reason: format!("must include the true tail index {gamma_true}"),
        });
    }

    let mut curves = Vec::with_capacity(spec.n_values.len());
    for (n_idx, &n) in spec.n_values.iter().enumerate() {
        let grid = spec.k_policy.build(n)?;
        let hits_per_rep: Vec<Vec<bool>> = (0..spec.replications)
            .into_par_iter()
            .map(|rep| -> Result<Vec<bool>> {
                let raw = spec
                    .dgp
                    .sample(n, spec.base_seed, ExperimentSpec::<T>::stream(n_idx, rep))?;
                let sample = apply_scaling(&raw, spec.scaling)?;
                let curves =
                    score_curve(&sample, &grid, &spec.candidates, &spec.rule, false)?;
                Ok((0..grid.len())
                    .map(|ki| {
                        let mut best_gamma = spec.candidates[0].gamma();
                        let mut best = T::neg_infinity();
                        for curve in &curves {
                            let s = curve.points[ki].score;
                            let g = curve.candidate.gamma();
                            if s > best || (s == best && g < best_gamma) {
                                best = s;
                                best_gamma = g;
                            }
                        }
                        best_gamma == gamma_true
                    })
                    .collect())
            })
            .collect::<Result<_>>()?;

        let mut counts = vec![0usize; grid.len()];
        for hits in &hits_per_rep {
            for (c, &h) in counts.iter_mut().zip(hits) {
                if h {
                    *c += 1;
                }
            }
        }
        let m = T::from_count(spec.replications);
        let points = grid
            .values()
            .iter()
            .zip(&counts)
            .map(|(&k, &c)| ProportionPoint {
                k,
                k_over_n: T::from_count(k) / T::from_count(n),
                proportion: T::from_count(c) / m,
            })
            .collect();
        curves.push(ProportionCurve { n, points });
    }
    Ok(curves)
}

/// Estimator experiment: bias and variance over replications of the Hill
/// estimator and, when `use_beta_schedule` is set, the three energy-score
/// estimators of the β-schedule (otherwise the spec's own rule when it is an
/// energy score). γ̂ uses the 150-point grid on [0.8γ_G, 2γ_G].
pub fn run_estimator_experiment<T: Real>(
    spec: &ExperimentSpec<T>,
    k_fractions: &[T],
    use_beta_schedule: bool,
) -> Result<Vec<BiasVarianceCell<T>>> {
    spec.validate()?;
    let gamma_true = spec.dgp.gamma_true();
    for &f in k_fractions {
        if !(f > T::zero() && f < T::one()) {
            return Err(Error::InvalidParameter {
                name: "k_fractions",
                reason: format!("fractions must lie in (0, 1), got {f}"),
            });
        }
    }

    let mut es_betas: Vec<T> = Vec::new();
    if use_beta_schedule {
        let (b1, b2, b3) = beta_schedule(gamma_true)?;
        es_betas.extend([b1, b2, b3]);
    } else if let ScoreRule::EnergyScore { beta } = spec.rule {
        es_betas.push(beta);
    }
    let grid = GammaGrid::default_for(gamma_true)?;
    let methods = 1 + es_betas.len();

    let mut cells = Vec::new();
    for (n_idx, &n) in spec.n_values.iter().enumerate() {
        let ks: Vec<usize> = k_fractions
            .iter()
            .map(|&f| (f * T::from_count(n)).floor().to_usize().unwrap_or(0))
            .collect();
        for (&k, &f) in ks.iter().zip(k_fractions) {
            if k < 2 || k >= n {
                return Err(Error::InsufficientData { k, n });
            }
            let _ = f;
        }

        // estimates[rep][method * ks.len() + k_idx]
        let estimates: Vec<Vec<T>> = (0..spec.replications)
            .into_par_iter()
            .map(|rep| -> Result<Vec<T>> {
                let raw = spec
                    .dgp
                    .sample(n, spec.base_seed, ExperimentSpec::<T>::stream(n_idx, rep))?;
                let sample = apply_scaling(&raw, spec.scaling)?;
                let sorted = sample.sorted_descending();
                let mut row = vec![T::zero(); methods * ks.len()];
                for (k_idx, &k) in ks.iter().enumerate() {
                    let view = TailView::from_sorted_descending(&sorted, k)?;
                    row[k_idx] = hill(&view);
                    for (b_idx, &beta) in es_betas.iter().enumerate() {
                        let rule = ScoreRule::EnergyScore { beta };
                        let trace = score_opt_estimate(&view, &rule, &grid)?;
                        row[(b_idx + 1) * ks.len() + k_idx] = trace.gamma_hat;
                    }
                }
                Ok(row)
            })
            .collect::<Result<_>>()?;

        let m = spec.replications;
        for method_idx in 0..methods {
            for (k_idx, (&k, &fraction)) in ks.iter().zip(k_fractions).enumerate() {
                let col = method_idx * ks.len() + k_idx;
                let mean: T = estimates.iter().map(|row| row[col]).sum::<T>() / T::from_count(m);
                let variance = if m > 1 {
                    let ss: T = estimates
                        .iter()
                        .map(|row| {
                            let d = row[col] - mean;
                            d * d
                        })
                        .sum();
                    Some(ss / T::from_count(m - 1))
                } else {
                    None
                };
                let (method, beta) = if method_idx == 0 {
                    ("hill".to_string(), None)
                } else {
                    ("es".to_string(), Some(es_betas[method_idx - 1]))
                };
                cells.push(BiasVarianceCell {
                    method,
                    beta,
                    gamma_true,
                    k_fraction: fraction,
                    k,
                    bias: mean - gamma_true,
                    variance,
                });
            }
        }
    }
    Ok(cells)
}

/// Coverage of the pointwise 95% CI at the Pareto fixed point: the fraction
/// of replications whose interval around S_k(F_γ) covers the population
/// target E[LogS(F_γ, Y°)] = expected_logs(γ, γ).
pub fn run_coverage_check<T: Real>(
    gamma: T,
    n: usize,
    k: usize,
    replications: usize,
    base_seed: u64,
) -> Result<T> {
    if replications == 0 {
        return Err(Error::InvalidParameter {
            name: "replications",
            reason: "must be ≥ 1".into(),
        });
    }
    let candidate = ParetoCandidate::new(gamma)?;
    let target = expected_logs(gamma, gamma);
    let level = T::cst(0.95);
    let covered: Vec<bool> = (0..replications)
        .into_par_iter()
        .map(|rep| -> Result<bool> {
            let sample = Dgp::Pareto { gamma }.sample(n, base_seed, rep as u64)?;
            let sorted = sample.sorted_descending();
            let view = TailView::from_sorted_descending(&sorted, k)?;
            let s = empirical_tail_score(&view, &ScoreRule::LogS, &candidate)?;
            let (lo, hi) = score_ci(s, &candidate, k, level);
            Ok(lo <= target && target <= hi)
        })
        .collect::<Result<_>>()?;
    let hits = covered.iter().filter(|&&c| c).count();
    Ok(T::from_count(hits) / T::from_count(replications))
}

/// CSV rendering of proportion curves: `n,k,k_over_n,proportion`.
pub fn proportion_curves_to_csv<T: Real>(curves: &[ProportionCurve<T>]) -> String {
    let mut out = String::from("n,k,k_over_n,proportion\n");
    for curve in curves {
        for p in &curve.points {
            out.push_str(&format!(
                "{},{},{},{}\n",
                curve.n, p.k, p.k_over_n, p.proportion
            ));
        }
    }
    out
}

/// CSV rendering of bias/variance cells:
/// `gamma_true,method,beta,k_fraction,k,bias,variance`.
pub fn bias_variance_to_csv<T: Real>(cells: &[BiasVarianceCell<T>]) -> String {
    let mut out = String::from("gamma_true,method,beta,k_fraction,k,bias,variance\n");
    for c in cells {
        let beta = c.beta.map(|b| format!("{b}")).unwrap_or_default();
        let variance = c.variance.map(|v| format!("{v}")).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            c.gamma_true, c.method, beta, c.k_fraction, c.k, c.bias, variance
        ));
    }
    out
}
