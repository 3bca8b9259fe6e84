//! Scoring-rule evaluation of heavy-tailed models on normalized upper order
//! statistics.
//!
//! The library ranks Pareto tail candidates by proper scoring rules (LogS and
//! the energy score family, CRPS included) evaluated on the top-k order
//! statistics of a sample normalized by the (k+1)-th largest value, estimates
//! tail indices by score optimization (with Hill as the LogS special case),
//! and runs seeded Monte Carlo experiments over Fréchet/Burr/Pareto data.
//!
//! Everything numeric is generic over the scalar type via [`Real`]
//! (`f32`/`f64`); concrete `f64` is the default type parameter and the
//! aliases below pin both widths explicitly.

// Validation deliberately uses `!(x > 0)` rather than `x <= 0`: the negated
// form also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod distributions;
pub mod error;
pub mod estimators;
pub mod montecarlo;
pub mod quad;
pub mod real;
pub mod scoring;
pub mod special;
pub mod tailscore;

pub use distributions::{
    apply_scaling, pareto_cdf, replication_rng, sample_burr, sample_frechet, sample_pareto,
    tail_counterpart_cdf, BurrLaw, ContinuousLaw, FrechetLaw, ParetoCandidate, Sample,
    ScalingKind,
};
pub use error::{Error, Result};
pub use estimators::{
    beta_schedule, estimates_to_csv, hill, hill_trace, logs_objective_stationarity,
    score_opt_estimate, EstimateTrace, EstimatorMethod, GammaGrid,
};
pub use montecarlo::{
    bias_variance_to_csv, proportion_curves_to_csv, run_coverage_check, run_estimator_experiment,
    run_ranking_experiment, BiasVarianceCell, Dgp, ExperimentSpec, KPolicy, ProportionCurve,
    ProportionPoint,
};
pub use real::Real;
pub use scoring::{
    es_beta_pareto, expected_logs, logs_pareto, var_es1, var_logs, EsKernelCache, EsPareto,
    ScoreRule,
};
pub use tailscore::{
    empirical_tail_score, normalized_exceedances, rank_candidates, score_ci, score_curve,
    score_curves_to_csv, select_stability_range, CurvePoint, KGrid, RankedCandidate,
    RankingReport, ScoreCurve, StabilityPolicy, TailView,
};

// Concrete scalar aliases.
pub type ParetoCandidate32 = ParetoCandidate<f32>;
pub type ParetoCandidate64 = ParetoCandidate<f64>;
pub type FrechetLaw32 = FrechetLaw<f32>;
pub type FrechetLaw64 = FrechetLaw<f64>;
pub type BurrLaw32 = BurrLaw<f32>;
pub type BurrLaw64 = BurrLaw<f64>;
pub type Sample32 = Sample<f32>;
pub type Sample64 = Sample<f64>;
pub type TailView32 = TailView<f32>;
pub type TailView64 = TailView<f64>;
pub type ScoreRule32 = ScoreRule<f32>;
pub type ScoreRule64 = ScoreRule<f64>;
pub type ScoreCurve32 = ScoreCurve<f32>;
pub type ScoreCurve64 = ScoreCurve<f64>;
pub type RankingReport32 = RankingReport<f32>;
pub type RankingReport64 = RankingReport<f64>;
pub type GammaGrid32 = GammaGrid<f32>;
pub type GammaGrid64 = GammaGrid<f64>;
pub type EstimateTrace32 = EstimateTrace<f32>;
pub type EstimateTrace64 = EstimateTrace<f64>;
pub type ExperimentSpec32 = ExperimentSpec<f32>;
pub type ExperimentSpec64 = ExperimentSpec<f64>;
