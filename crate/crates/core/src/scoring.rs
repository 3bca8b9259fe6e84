//! Proper scoring rules evaluated against a Pareto tail candidate, plus the
//! analytic expected scores and asymptotic variances used for confidence
//! intervals.
//!
//! Scores are kept in "larger is better" orientation throughout; loss views
//! are produced only at reporting layers by negation.
//!
//! For a Pareto candidate with tail index γ (shape α = 1/γ) and an
//! observation z ≥ 1:
//!
//! * LogS(F_γ, z) = −ln γ − (1/γ + 1) ln z  (the log predictive density);
//! * ES_β(F_γ, z) = ½ E|X−X'|^β − E|X−z|^β with X, X' i.i.d. from F_γ,
//!   finite if and only if β < 1/γ.
//!
//! The absolute moment splits as
//!   E|X−z|^β = α B(β+1, α−β) z^{β−α} + α z^{β−α} J(z),
//!   J(z) = ∫_{1/z}^1 (1−w)^β w^{−α−1} dw,
//! where the first term is the exact Beta-function value of the unbounded
//! integral over (z, ∞). J is evaluated by two convergent series: a direct
//! incomplete-beta expansion for z ≤ 2 and, for z > 2, a geometric expansion
//! in 1/z whose z-independent constant is anchored at z = 2 (so no slowly
//! convergent sums appear). The pair-difference constant E|X−X'|^β is the
//! 1-D integral of z ↦ E|X−z|^β against the Pareto density, computed once
//! per (γ, β) by adaptive quadrature and cached.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::distributions::ParetoCandidate;
use crate::error::{Error, Result};
use crate::quad;
use crate::real::Real;
use crate::special;

/// Scoring rule selector. CRPS is `EnergyScore { beta: 1 }`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub enum ScoreRule<T = f64> {
    LogS,
    EnergyScore { beta: T },
}

impl<T: Real> ScoreRule<T> {
    /// Energy score with parameter β in (0, 2).
    pub fn energy(beta: T) -> Result<Self> {
        if !(beta > T::zero() && beta < T::cst(2.0)) || !beta.is_finite() {
            return Err(Error::InvalidBeta {
                beta: beta.to_f64().unwrap_or(f64::NAN),
                bound: 2.0,
            });
        }
        Ok(ScoreRule::EnergyScore { beta })
    }

    pub fn crps() -> Self {
        ScoreRule::EnergyScore { beta: T::one() }
    }

    /// Single-observation score against a Pareto candidate.
    pub fn score(&self, candidate: &ParetoCandidate<T>, z: T) -> Result<T> {
        match self {
            ScoreRule::LogS => logs_pareto(candidate, z),
            ScoreRule::EnergyScore { beta } => es_beta_pareto(candidate, *beta, z),
        }
    }
}

/// Logarithmic score of the Pareto candidate at z ≥ 1:
/// −ln γ − (1/γ + 1) ln z.
pub fn logs_pareto<T: Real>(candidate: &ParetoCandidate<T>, z: T) -> Result<T> {
    if z < T::one() {
        return Err(Error::OutOfSupport {
            value: z.to_f64().unwrap_or(f64::NAN),
        });
    }
    let gamma = candidate.gamma();
    Ok(-gamma.ln() - (T::one() / gamma + T::one()) * z.ln())
}

/// Energy score ES_β of the Pareto candidate at z ≥ 1. Requires β < 1/γ.
///
/// The per-(γ, β) kernel (pair-difference constant and series coefficients)
/// is built once and cached process-wide.
pub fn es_beta_pareto<T: Real>(candidate: &ParetoCandidate<T>, beta: T, z: T) -> Result<T> {
    let kernel = T::es_kernel_cache().get_or_build(candidate, beta)?;
    kernel.score(z)
}

/// Expected LogS of candidate γ when observations follow the Pareto tail law
/// with index γ_G: −ln γ − (1/γ + 1) γ_G, since E ln Y° = γ_G.
pub fn expected_logs<T: Real>(candidate_gamma: T, true_gamma: T) -> T {
    debug_assert!(candidate_gamma > T::zero() && true_gamma >= T::zero());
    -candidate_gamma.ln() - (T::one() / candidate_gamma + T::one()) * true_gamma
}

/// Var(LogS(F_γ, Y°)) = (1/γ + 1)² γ_G² under Y° ~ Pareto(γ_G).
pub fn var_logs<T: Real>(candidate_gamma: T, true_gamma: T) -> T {
    debug_assert!(candidate_gamma > T::zero() && true_gamma >= T::zero());
    let s = (T::one() / candidate_gamma + T::one()) * true_gamma;
    s * s
}

/// Var(ES₁(F_γ, Y°)) under Y° ~ Pareto(γ_G), with a = 2γ/(γ−1) and
/// p = 1 − 1/γ:
///
///   1/(1−2γ_G) − 2a/(1−(1+p)γ_G) + a²/(1−2pγ_G) − (1/(1−γ_G) − a/(1−pγ_G))²
///
/// Every displayed denominator must be positive; γ = 1 is singular.
pub fn var_es1<T: Real>(candidate_gamma: T, true_gamma: T) -> Result<T> {
    let one = T::one();
    let gamma = candidate_gamma;
    let gg = true_gamma;
    if gamma == one {
        return Err(Error::SingularParameter);
    }
    if !(gamma > T::zero()) || !(gg >= T::zero()) {
        return Err(Error::InvalidParameter {
            name: "gamma",
            reason: "tail indices must be positive".into(),
        });
    }
    let a = T::cst(2.0) * gamma / (gamma - one);
    let p = one - one / gamma;
    let two = T::cst(2.0);
    let denoms = [
        one - two * gg,
        one - (one + p) * gg,
        one - two * p * gg,
        one - gg,
        one - p * gg,
    ];
    for d in denoms {
        if !(d > T::zero()) {
            return Err(Error::MomentDivergence {
                beta: 1.0,
                bound: d.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    let cross = one / denoms[3] - a / denoms[4];
    Ok(one / denoms[0] - two * a / denoms[1] + a * a / denoms[2] - cross * cross)
}

// ---------------------------------------------------------------------------
// Energy-score kernel
// ---------------------------------------------------------------------------

/// How many series coefficients to precompute. Both series contract at
/// ratio ≤ 1/2 from the z = 2 crossover, with polynomially growing
/// coefficients of order m^α, so the budget scales with α.
fn coefficient_budget(alpha: f64) -> usize {
    96 + (8.0 * alpha).ceil() as usize
}

/// Precomputed evaluator of ES_β against one Pareto candidate.
///
/// Holds the Beta-function tail constant, the pair-difference constant
/// E|X−X'|^β, and the series coefficients for the absolute moment.
#[derive(Debug)]
pub struct EsPareto<T: Real> {
    gamma: T,
    beta: T,
    alpha: T,
    /// B(β+1, α−β).
    beta_fn: T,
    /// E|X−X'|^β.
    pair_constant: T,
    /// Direct series: coefficient of x₀^{β+1+m} is binom(α+m, m)/(β+1+m).
    direct: Vec<T>,
    /// Large-z series: a_j/(α−j) with a_j = (−1)^j binom(β, j); zeroed at j*.
    large: Vec<T>,
    /// j* = round(α): the single index where α−j may vanish, kept unsplit.
    j_star: usize,
    /// a_{j*}.
    a_star: T,
    /// z-independent constant of the large-z expansion, anchored at z = 2.
    k_star: T,
}

impl<T: Real> EsPareto<T> {
    pub fn new(candidate: &ParetoCandidate<T>, beta: T) -> Result<Self> {
        let alpha = candidate.alpha();
        if !(beta > T::zero() && beta < T::cst(2.0)) || !beta.is_finite() {
            return Err(Error::InvalidBeta {
                beta: beta.to_f64().unwrap_or(f64::NAN),
                bound: 2.0,
            });
        }
        if beta >= alpha {
            return Err(Error::MomentDivergence {
                beta: beta.to_f64().unwrap_or(f64::NAN),
                bound: alpha.to_f64().unwrap_or(f64::NAN),
            });
        }
        let one = T::one();
        let beta_fn = special::beta(beta + one, alpha - beta);

        let budget = coefficient_budget(alpha.to_f64().unwrap_or(1.0));

        // Direct series coefficients binom(α+m, m)/(β+1+m).
        let mut direct = Vec::with_capacity(budget);
        let mut c_m = one;
        for m in 0..budget {
            let m_t = T::from_count(m);
            if m > 0 {
                c_m = c_m * (alpha + m_t) / m_t;
            }
            direct.push(c_m / (beta + one + m_t));
        }

        // a_j = (−1)^j binom(β, j) via a_j = a_{j−1} (j−1−β)/j.
        let mut a = Vec::with_capacity(budget);
        let mut a_j = one;
        a.push(a_j);
        for j in 1..budget {
            let j_t = T::from_count(j);
            a_j = a_j * (j_t - one - beta) / j_t;
            a.push(a_j);
        }

        let j_star = alpha
            .round()
            .to_usize()
            .map(|j| j.min(budget - 1))
            .unwrap_or(0);
        let a_star = a[j_star];
        let mut large = Vec::with_capacity(budget);
        for (j, &aj) in a.iter().enumerate() {
            if j == j_star {
                large.push(T::zero());
            } else {
                large.push(aj / (alpha - T::from_count(j)));
            }
        }

        let mut kernel = Self {
            gamma: candidate.gamma(),
            beta,
            alpha,
            beta_fn,
            pair_constant: T::zero(),
            direct,
            large,
            j_star,
            a_star,
            k_star: T::zero(),
        };

        // Anchor the z-independent constant at z = 2, where both series
        // contract at ratio 1/2: K* = J_direct(2) − (unsplit + geometric)(2).
        let two = T::cst(2.0);
        let j_direct_2 = kernel.j_direct(T::cst(0.5));
        let ln2 = two.ln();
        let d = alpha - T::from_count(kernel.j_star);
        let unsplit_2 = if d == T::zero() {
            kernel.a_star * ln2
        } else {
            kernel.a_star * (d * ln2).exp_m1() / d
        };
        let geom_2 = (alpha * ln2).exp() * kernel.large_sum(T::cst(0.5));
        kernel.k_star = j_direct_2 - unsplit_2 - geom_2;

        kernel.pair_constant = kernel.compute_pair_constant()?;
        Ok(kernel)
    }

    #[inline]
    pub fn gamma(&self) -> T {
        self.gamma
    }

    #[inline]
    pub fn beta(&self) -> T {
        self.beta
    }

    /// E|X−X'|^β for X, X' i.i.d. from the candidate.
    #[inline]
    pub fn pair_mean_difference(&self) -> T {
        self.pair_constant
    }

    /// ES_β(F_γ, z) = ½ E|X−X'|^β − E|X−z|^β for z ≥ 1.
    pub fn score(&self, z: T) -> Result<T> {
        Ok(T::cst(0.5) * self.pair_constant - self.abs_moment(z)?)
    }

    /// E|X−z|^β for z ≥ 1.
    pub fn abs_moment(&self, z: T) -> Result<T> {
        if !(z >= T::one()) {
            return Err(Error::OutOfSupport {
                value: z.to_f64().unwrap_or(f64::NAN),
            });
        }
        let one = T::one();
        let two = T::cst(2.0);
        if z <= two {
            let x0 = one - one / z;
            let j = self.j_direct(x0);
            let ln_z = z.ln();
            Ok(self.alpha * ((self.beta - self.alpha) * ln_z).exp() * (self.beta_fn + j))
        } else {
            let ln_z = z.ln();
            // α [ z^{β−α}(B + K*) + unsplit(z) + z^β Σ_{j≠j*} lc_j z^{−j} ]
            let pow_ba = ((self.beta - self.alpha) * ln_z).exp();
            let d = self.alpha - T::from_count(self.j_star);
            let w = d * ln_z;
            let unsplit = if d == T::zero() {
                self.a_star * pow_ba * ln_z
            } else if w.abs() < one {
                self.a_star * pow_ba * w.exp_m1() / d
            } else {
                let p1 = ((self.beta - T::from_count(self.j_star)) * ln_z).exp();
                self.a_star * (p1 - pow_ba) / d
            };
            let geom = (self.beta * ln_z).exp() * self.large_sum(one / z);
            Ok(self.alpha * (pow_ba * (self.beta_fn + self.k_star) + unsplit + geom))
        }
    }

    /// Direct incomplete-beta series: J = Σ_m binom(α+m, m) x₀^{β+1+m}/(β+1+m)
    /// for x₀ = 1 − 1/z ≤ 1/2. All terms are positive.
    fn j_direct(&self, x0: T) -> T {
        if x0 == T::zero() {
            return T::zero();
        }
        let lead = x0.powf(self.beta + T::one());
        let mut acc = T::zero();
        let mut pow = T::one();
        let eps = T::epsilon() * T::cst(0.25);
        for &c in &self.direct {
            let term = c * pow;
            acc += term;
            if term < eps * acc {
                break;
            }
            pow *= x0;
        }
        lead * acc
    }

    /// Σ_{j≠j*} (a_j/(α−j)) u^j for u = 1/z ≤ 1/2 (the j* slot is zero).
    fn large_sum(&self, u: T) -> T {
        let mut acc = T::zero();
        let mut pow = T::one();
        let floor = T::epsilon() * T::cst(0.25);
        for (j, &c) in self.large.iter().enumerate() {
            acc += c * pow;
            // Coefficients decay like j^{−1−β}; once u^j alone is below the
            // relative floor the tail cannot matter.
            if j > self.j_star && pow < floor * acc.abs().max(T::one()) {
                break;
            }
            pow *= u;
        }
        acc
    }

    /// Pair constant by 1-D quadrature of z ↦ E|X−z|^β against the Pareto
    /// density. Written as the exact Beta part plus a quadrature on a
    /// substituted variable that absorbs the u^{α−β−1} endpoint singularity:
    ///
    ///   C = α²B/(2α−β) + α²/(α−β) ∫_0^1 g(v^{1/(α−β)}) dv,
    ///   g(u) = u^α J(1/u).
    fn compute_pair_constant(&self) -> Result<T> {
        let one = T::one();
        let two_alpha = T::cst(2.0) * self.alpha;
        let alpha_sq = self.alpha * self.alpha;
        let analytic = alpha_sq * self.beta_fn / (two_alpha - self.beta);
        let ab = self.alpha - self.beta;
        let exponent = one / ab;
        let factor = alpha_sq / ab;
        let target = T::cst(1e-10);
        let tol = (target / factor.max(one)).max(T::cst(1e-15));
        let integral = quad::integrate(
            |v: T| {
                if v <= T::zero() {
                    return self.g_weighted(T::zero());
                }
                self.g_weighted(v.powf(exponent))
            },
            T::zero(),
            one,
            tol,
        )?;
        Ok(analytic + factor * integral)
    }

    /// g(u) = u^α J(1/u) on [0, 1], evaluated without overflow for tiny u.
    fn g_weighted(&self, u: T) -> T {
        let one = T::one();
        if u >= one {
            return T::zero();
        }
        if u > T::cst(0.5) {
            // z = 1/u < 2: direct series territory.
            let x0 = one - u;
            return u.powf(self.alpha) * self.j_direct(x0);
        }
        if u == T::zero() {
            // Limit: the j = 0 geometric term (or the unsplit j* = 0 term).
            return if self.j_star == 0 {
                self.a_star / self.alpha
            } else {
                self.large[0]
            };
        }
        let ln_u = u.ln();
        let d = self.alpha - T::from_count(self.j_star);
        let w = d * ln_u;
        // u^α (z^{α−j*} − 1)/(α−j*) = (u^{j*} − u^α)/d in stable form.
        let unsplit = if d == T::zero() {
            -self.a_star * (T::from_count(self.j_star) * ln_u).exp() * ln_u
        } else if w.abs() < one {
            -self.a_star * (T::from_count(self.j_star) * ln_u).exp() * w.exp_m1() / d
        } else {
            let pj = (T::from_count(self.j_star) * ln_u).exp();
            let pa = (self.alpha * ln_u).exp();
            self.a_star * (pj - pa) / d
        };
        let mut geom = T::zero();
        let mut pow = T::one();
        let floor = T::epsilon() * T::cst(0.25);
        for (j, &c) in self.large.iter().enumerate() {
            geom += c * pow;
            if j > self.j_star && pow < floor * geom.abs().max(T::one()) {
                break;
            }
            pow *= u;
        }
        (self.alpha * ln_u).exp() * self.k_star + unsplit + geom
    }
}

type KernelKey = (u64, u64);

/// Concurrent cache of [`EsPareto`] kernels keyed by the (γ, β) bit patterns.
#[derive(Debug, Default)]
pub struct EsKernelCache<T: Real> {
    map: RwLock<HashMap<KernelKey, Arc<EsPareto<T>>>>,
}

impl<T: Real> EsKernelCache<T> {
    pub fn new() -> Self {
        Self {
            map: RwLock::new(HashMap::new()),
        }
    }

    pub fn get_or_build(
        &self,
        candidate: &ParetoCandidate<T>,
        beta: T,
    ) -> Result<Arc<EsPareto<T>>> {
        let key = (candidate.gamma().key_bits(), beta.key_bits());
        if let Some(k) = self.map.read().expect("cache poisoned").get(&key) {
            return Ok(Arc::clone(k));
        }
        let built = Arc::new(EsPareto::new(candidate, beta)?);
        let mut guard = self.map.write().expect("cache poisoned");
        Ok(Arc::clone(guard.entry(key).or_insert(built)))
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
