//! Empirical tail scores on normalized upper order statistics.
//!
//! The empirical tail score of a candidate F at level k is the mean score
//! over the top-k order statistics divided by the (k+1)-th largest value:
//!
//!   S_k(F) = (1/k) Σ_{i=1}^k S(F, Y_{n,n−i+1} / Y_{n,n−k}).
//!
//! Since the ratios are scale-free, the construction depends on the sample
//! only through its tail shape; curves over a k-grid, pointwise confidence
//! intervals and a stability-range ranking are built on top.

use rayon::prelude::*;
use serde::Serialize;

use crate::distributions::{ParetoCandidate, Sample};
use crate::error::{Error, Result};
use crate::real::Real;
use crate::scoring::{var_logs, ScoreRule};
use crate::special::critical_z;

/// Top-k order statistics of a sample, normalized by the (k+1)-th largest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailView<T = f64> {
    k: usize,
    threshold: T,
    /// Ratios Y_{n,n−i+1}/Y_{n,n−k}, i = 1..k, stored nonincreasing; every
    /// ratio is ≥ 1 and ties at the threshold are retained.
    ratios: Vec<T>,
}

impl<T: Real> TailView<T> {
    /// Build from explicit parts, validating every invariant.
    pub fn new(threshold: T, ratios: Vec<T>) -> Result<Self> {
        if ratios.is_empty() {
            return Err(Error::EmptySample);
        }
        if !(threshold > T::zero()) {
            return Err(Error::InvalidThreshold);
        }
        let mut prev = T::infinity();
        for r in &ratios {
            if !(*r >= T::one()) {
                return Err(Error::OutOfSupport {
                    value: r.to_f64().unwrap_or(f64::NAN),
                });
            }
            if *r > prev {
                return Err(Error::InvalidParameter {
                    name: "ratios",
                    reason: "must be sorted nonincreasing".into(),
                });
            }
            prev = *r;
        }
        Ok(Self {
            k: ratios.len(),
            threshold,
            ratios,
        })
    }

    /// Cut the view at level k from values already sorted largest-first.
    pub fn from_sorted_descending(sorted: &[T], k: usize) -> Result<Self> {
        let n = sorted.len();
        if k == 0 || k >= n {
            return Err(Error::InsufficientData { k, n });
        }
        let threshold = sorted[k];
        if !(threshold > T::zero()) {
            return Err(Error::InvalidThreshold);
        }
        let ratios = sorted[..k].iter().map(|&v| v / threshold).collect();
        Ok(Self {
            k,
            threshold,
            ratios,
        })
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn threshold(&self) -> T {
        self.threshold
    }

    #[inline]
    pub fn ratios(&self) -> &[T] {
        &self.ratios
    }

    /// Mean log ratio; the Hill estimator reads this off directly.
    pub fn mean_log_ratio(&self) -> T {
        let sum: T = self.ratios.iter().map(|r| r.ln()).sum();
        sum / T::from_count(self.k)
    }
}

/// Normalized exceedances of the sample at level k (sorts internally; use
/// [`TailView::from_sorted_descending`] to share one sort across many k).
pub fn normalized_exceedances<T: Real>(sample: &Sample<T>, k: usize) -> Result<TailView<T>> {
    let sorted = sample.sorted_descending();
    TailView::from_sorted_descending(&sorted, k)
}

/// Strictly increasing grid of k values (min ≥ 2, deduplicated).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KGrid {
    values: Vec<usize>,
}

impl KGrid {
    pub fn new(mut values: Vec<usize>) -> Result<Self> {
        values.sort_unstable();
        values.dedup();
        if values.is_empty() {
            return Err(Error::InvalidParameter {
                name: "k_grid",
                reason: "grid is empty".into(),
            });
        }
        if values[0] < 2 {
            return Err(Error::InvalidParameter {
                name: "k_grid",
                reason: format!("minimum k must be ≥ 2, got {}", values[0]),
            });
        }
        Ok(Self { values })
    }

    /// `points` evenly spaced values from k_min to k_max, rounded to the
    /// nearest integer and deduplicated.
    pub fn even_spaced(k_min: usize, k_max: usize, points: usize) -> Result<Self> {
        if points == 0 || k_min > k_max {
            return Err(Error::InvalidParameter {
                name: "k_grid",
                reason: format!("bad recipe: k_min {k_min}, k_max {k_max}, points {points}"),
            });
        }
        if points == 1 {
            return Self::new(vec![k_min]);
        }
        let step = (k_max - k_min) as f64 / (points - 1) as f64;
        let values = (0..points)
            .map(|i| (k_min as f64 + step * i as f64).round() as usize)
            .collect();
        Self::new(values)
    }

    /// Every integer k in [k_min, k_max].
    pub fn all_integers(k_min: usize, k_max: usize) -> Result<Self> {
        if k_min > k_max {
            return Err(Error::InvalidParameter {
                name: "k_grid",
                reason: format!("k_min {k_min} > k_max {k_max}"),
            });
        }
        Self::new((k_min..=k_max).collect())
    }

    /// Simulation-study default: 100 evenly spaced values from 50 to ⌊n/4⌋.
    pub fn simulation_default(n: usize) -> Result<Self> {
        Self::even_spaced(50, n / 4, 100)
    }

    /// Real-data default: every integer k from 10 to ⌊n/4⌋.
    pub fn real_data_default(n: usize) -> Result<Self> {
        Self::all_integers(10, n / 4)
    }

    #[inline]
    pub fn values(&self) -> &[usize] {
        &self.values
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> usize {
        *self.values.last().expect("grid nonempty")
    }

    pub fn contains(&self, k: usize) -> bool {
        self.values.binary_search(&k).is_ok()
    }
}

/// One point of a score curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint<T = f64> {
    pub k: usize,
    pub score: T,
    pub ci_half_width: Option<T>,
}

/// Per-candidate mapping k ↦ empirical tail score.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreCurve<T = f64> {
    pub candidate: ParetoCandidate<T>,
    pub rule: ScoreRule<T>,
    pub points: Vec<CurvePoint<T>>,
}

impl<T: Real> ScoreCurve<T> {
    pub fn score_at(&self, k: usize) -> Option<T> {
        self.points
            .binary_search_by(|p| p.k.cmp(&k))
            .ok()
            .map(|i| self.points[i].score)
    }
}

/// Stability-range policy for the ranking step.
#[derive(Debug, Clone, PartialEq)]
pub enum StabilityPolicy {
    /// Keep the smallest ⌈f·|grid|⌉ grid values, f in (0, 1].
    LowerFraction(f64),
    /// Pass an explicit sub-grid through (must be contained in the grid).
    Explicit(Vec<usize>),
}

/// Candidate means over the stability range, sorted best first.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankingReport<T = f64> {
    pub stability_range: Vec<usize>,
    pub entries: Vec<RankedCandidate<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RankedCandidate<T = f64> {
    pub gamma: T,
    pub mean_score: T,
}

/// Mean score of the rule over the view's ratios: (1/k) Σ S(F, z_i).
pub fn empirical_tail_score<T: Real>(
    view: &TailView<T>,
    rule: &ScoreRule<T>,
    candidate: &ParetoCandidate<T>,
) -> Result<T> {
    let mut sum = T::zero();
    for &z in view.ratios() {
        sum += rule.score(candidate, z)?;
    }
    Ok(sum / T::from_count(view.k()))
}

/// Pointwise confidence interval around an empirical score.
///
/// Half-width is z_level · σ/√k with the plug-in σ = (1/γ + 1)·γ, i.e. the
/// LogS score deviation with γ_G set to the candidate's own tail index
/// (the variance plug-in used for every rule; z_0.95 = 1.96).
pub fn score_ci<T: Real>(score: T, candidate: &ParetoCandidate<T>, k: usize, level: T) -> (T, T) {
    debug_assert!(k >= 1);
    debug_assert!(level > T::zero() && level < T::one());
    let hw = score_ci_half_width(candidate, k, level);
    (score - hw, score + hw)
}

pub fn score_ci_half_width<T: Real>(candidate: &ParetoCandidate<T>, k: usize, level: T) -> T {
    let gamma = candidate.gamma();
    let sigma = var_logs(gamma, gamma).sqrt();
    critical_z(level) * sigma / T::from_count(k).sqrt()
}

/// Score curves for every candidate over the grid; one sample sort is shared
/// across all k. Curves for distinct k are evaluated in parallel; the result
/// does not depend on the worker count.
pub fn score_curve<T: Real>(
    sample: &Sample<T>,
    grid: &KGrid,
    candidates: &[ParetoCandidate<T>],
    rule: &ScoreRule<T>,
    with_ci: bool,
) -> Result<Vec<ScoreCurve<T>>> {
    if candidates.is_empty() {
        return Err(Error::InvalidParameter {
            name: "candidates",
            reason: "need at least one candidate".into(),
        });
    }
    if grid.max() >= sample.n() {
        return Err(Error::InsufficientData {
            k: grid.max(),
            n: sample.n(),
        });
    }
    let level = T::cst(0.95);
    let sorted = sample.sorted_descending();
    let per_k: Vec<Vec<T>> = grid
        .values()
        .par_iter()
        .map(|&k| -> Result<Vec<T>> {
            let view = TailView::from_sorted_descending(&sorted, k)?;
            candidates
                .iter()
                .map(|c| empirical_tail_score(&view, rule, c))
                .collect()
        })
        .collect::<Result<_>>()?;

    Ok(candidates
        .iter()
        .enumerate()
        .map(|(ci, cand)| {
            let points = grid
                .values()
                .iter()
                .zip(&per_k)
                .map(|(&k, scores)| CurvePoint {
                    k,
                    score: scores[ci],
                    ci_half_width: with_ci.then(|| score_ci_half_width(cand, k, level)),
                })
                .collect();
            ScoreCurve {
                candidate: *cand,
                rule: *rule,
                points,
            }
        })
        .collect())
}

/// Sub-grid selection for the ranking step.
pub fn select_stability_range(grid: &KGrid, policy: &StabilityPolicy) -> Result<KGrid> {
    match policy {
        StabilityPolicy::LowerFraction(f) => {
            if !(*f > 0.0 && *f <= 1.0) {
                return Err(Error::InvalidParameter {
                    name: "stability_fraction",
                    reason: format!("must be in (0, 1], got {f}"),
                });
            }
            let keep = ((f * grid.len() as f64).ceil() as usize).max(1);
            let values: Vec<usize> = grid.values().iter().take(keep).copied().collect();
            if values.is_empty() {
                return Err(Error::EmptyStabilityRange);
            }
            KGrid::new(values)
        }
        StabilityPolicy::Explicit(values) => {
            if values.is_empty() {
                return Err(Error::EmptyStabilityRange);
            }
            for &k in values {
                if !grid.contains(k) {
                    return Err(Error::MissingPoint { k });
                }
            }
            KGrid::new(values.clone())
        }
    }
}

/// Average each curve over the stability sub-grid and sort candidates by the
/// mean score, best first. Exact ties go to the smaller γ.
pub fn rank_candidates<T: Real>(
    curves: &[ScoreCurve<T>],
    stability: &KGrid,
) -> Result<RankingReport<T>> {
    if curves.is_empty() {
        return Err(Error::InvalidParameter {
            name: "curves",
            reason: "need at least one curve".into(),
        });
    }
    let mut entries = Vec::with_capacity(curves.len());
    for curve in curves {
        let mut sum = T::zero();
        for &k in stability.values() {
            match curve.score_at(k) {
                Some(s) => sum += s,
                None => return Err(Error::MissingPoint { k }),
            }
        }
        entries.push(RankedCandidate {
            gamma: curve.candidate.gamma(),
            mean_score: sum / T::from_count(stability.len()),
        });
    }
    entries.sort_by(|a, b| {
        b.mean_score
            .partial_cmp(&a.mean_score)
            .expect("finite scores")
            .then(a.gamma.partial_cmp(&b.gamma).expect("finite gammas"))
    });
    Ok(RankingReport {
        stability_range: stability.values().to_vec(),
        entries,
    })
}

/// CSV rendering of score curves: `k,candidate_gamma,score,ci_low,ci_high`.
/// Numbers use full round-trip decimal formatting; CI cells are empty when
/// no interval was requested.
pub fn score_curves_to_csv<T: Real>(curves: &[ScoreCurve<T>]) -> String {
    let mut out = String::from("k,candidate_gamma,score,ci_low,ci_high\n");
    for curve in curves {
        for p in &curve.points {
            match p.ci_half_width {
                Some(hw) => {
                    out.push_str(&format!(
                        "{},{},{},{},{}\n",
                        p.k,
                        curve.candidate.gamma(),
                        p.score,
                        p.score - hw,
                        p.score + hw
                    ));
                }
                None => {
                    out.push_str(&format!(
                        "{},{},{},,\n",
                        p.k,
                        curve.candidate.gamma(),
                        p.score
                    ));
                }
            }
        }
    }
    out
}
