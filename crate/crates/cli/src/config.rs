//! Declarative experiment configuration (TOML, keys mirroring the Monte
//! Carlo experiment spec) and the small string parsers shared with the
//! command-line flags.

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use tailrank::{Dgp, ExperimentSpec, KPolicy, ParetoCandidate, ScalingKind, ScoreRule};

/// Parse `logs` or `es:<beta>`.
pub fn parse_rule(text: &str) -> Result<ScoreRule<f64>> {
    if text == "logs" {
        return Ok(ScoreRule::LogS);
    }
    if let Some(beta_text) = text.strip_prefix("es:") {
        let beta: f64 = beta_text
            .parse()
            .with_context(|| format!("cannot parse energy-score beta `{beta_text}`"))?;
        return Ok(ScoreRule::energy(beta)?);
    }
    bail!("unknown rule `{text}` (expected `logs` or `es:<beta>`)")
}

pub fn parse_scaling(text: &str) -> Result<ScalingKind> {
    match text {
        "none" => Ok(ScalingKind::None),
        "linear" => Ok(ScalingKind::Linear),
        "sinusoidal" => Ok(ScalingKind::Sinusoidal),
        other => bail!("unknown scaling `{other}` (none | linear | sinusoidal)"),
    }
}

/// Parse the `--dgp` syntax: `pareto:<gamma>`, `frechet:<gamma>`,
/// `burr:<gamma>:<t>`.
pub fn parse_dgp(text: &str) -> Result<Dgp<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let gamma = |s: &str| -> Result<f64> {
        s.parse()
            .with_context(|| format!("cannot parse tail index `{s}`"))
    };
    match parts.as_slice() {
        ["pareto", g] => Ok(Dgp::Pareto { gamma: gamma(g)? }),
        ["frechet", g] => Ok(Dgp::Frechet { gamma: gamma(g)? }),
        ["burr", g, t] => Ok(Dgp::Burr {
            gamma: gamma(g)?,
            t: t.parse().with_context(|| format!("cannot parse burr t `{t}`"))?,
        }),
        ["burr", g] => Ok(Dgp::Burr {
            gamma: gamma(g)?,
            t: 1.0,
        }),
        _ => bail!("unknown dgp `{text}` (pareto:<g> | frechet:<g> | burr:<g>[:<t>])"),
    }
}

pub fn parse_candidates(text: &str) -> Result<Vec<ParetoCandidate<f64>>> {
    text.split(',')
        .map(|s| {
            let gamma: f64 = s
                .trim()
                .parse()
                .with_context(|| format!("cannot parse candidate gamma `{s}`"))?;
            Ok(ParetoCandidate::new(gamma)?)
        })
        .collect()
}

/// A scalar or a list, so `gamma_true = 1.0` and `gamma_true = [0.33, 1.0]`
/// both work.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(f64),
    Many(Vec<f64>),
}

impl OneOrMany {
    fn to_vec(&self) -> Vec<f64> {
        match self {
            OneOrMany::One(v) => vec![*v],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

/// Raw TOML shape; unknown keys are rejected so typos surface by name.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: String,
    pub dgp: Option<String>,
    pub gamma_true: Option<OneOrMany>,
    pub burr_t: Option<f64>,
    pub scaling: Option<String>,
    pub n_values: Option<Vec<usize>>,
    pub candidates: Option<Vec<f64>>,
    pub rule: Option<String>,
    pub replications: Option<usize>,
    pub base_seed: Option<u64>,
    pub k_min: Option<usize>,
    pub k_max: Option<usize>,
    pub k_points: Option<usize>,
    pub k_all_integers: Option<bool>,
    pub k_fractions: Option<Vec<f64>>,
    pub use_beta_schedule: Option<bool>,
    /// Coverage kind only.
    pub n: Option<usize>,
    pub k: Option<usize>,
}

/// A validated experiment plan.
#[derive(Debug)]
pub enum ExperimentPlan {
    Ranking {
        specs: Vec<ExperimentSpec<f64>>,
    },
    Estimator {
        specs: Vec<ExperimentSpec<f64>>,
        k_fractions: Vec<f64>,
        use_beta_schedule: bool,
    },
    Coverage {
        gamma: f64,
        n: usize,
        k: usize,
        replications: usize,
        base_seed: u64,
    },
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| anyhow!("config parse error: {e}"))
    }

    fn require<T: Clone>(field: &Option<T>, key: &str, kind: &str) -> Result<T> {
        field
            .clone()
            .ok_or_else(|| anyhow!("config key `{key}` is required when kind = \"{kind}\""))
    }

    fn k_policy(&self) -> Result<KPolicy> {
        if self.k_all_integers.unwrap_or(false) {
            if self.k_points.is_some() {
                bail!("config keys `k_points` and `k_all_integers` are mutually exclusive");
            }
            return Ok(KPolicy::AllIntegers {
                k_min: self.k_min.unwrap_or(10),
                k_max: self.k_max,
            });
        }
        if let Some(points) = self.k_points {
            return Ok(KPolicy::EvenSpaced {
                k_min: self.k_min.unwrap_or(50),
                k_max: self.k_max,
                points,
            });
        }
        if self.k_min.is_some() || self.k_max.is_some() {
            bail!("config keys `k_min`/`k_max` need `k_points` or `k_all_integers = true`");
        }
        Ok(KPolicy::SimulationDefault)
    }

    fn dgp_for(&self, gamma: f64, kind: &str) -> Result<Dgp<f64>> {
        let name = Self::require(&self.dgp, "dgp", kind)?;
        match name.as_str() {
            "frechet" => Ok(Dgp::Frechet { gamma }),
            "pareto" => Ok(Dgp::Pareto { gamma }),
            "burr" => Ok(Dgp::Burr {
                gamma,
                t: self.burr_t.unwrap_or(1.0),
            }),
            other => bail!("config key `dgp` has unknown value `{other}`"),
        }
    }

    pub fn validate(&self) -> Result<ExperimentPlan> {
        let kind = self.kind.as_str();
        match kind {
            "ranking" | "estimator" => {
                let gammas = Self::require(&self.gamma_true, "gamma_true", kind)?.to_vec();
                if gammas.is_empty() {
                    bail!("config key `gamma_true` must not be empty");
                }
                let replications = Self::require(&self.replications, "replications", kind)?;
                let base_seed = self.base_seed.unwrap_or(0);
                let n_values = Self::require(&self.n_values, "n_values", kind)?;
                let scaling = parse_scaling(self.scaling.as_deref().unwrap_or("none"))
                    .context("config key `scaling`")?;
                let k_policy = self.k_policy()?;

                let mut specs = Vec::new();
                for &gamma in &gammas {
                    let candidates = match (kind, &self.candidates) {
                        ("ranking", Some(cs)) => cs
                            .iter()
                            .map(|&g| Ok(ParetoCandidate::new(g)?))
                            .collect::<Result<Vec<_>>>()?,
                        ("ranking", None) => {
                            bail!("config key `candidates` is required when kind = \"ranking\"")
                        }
                        // The estimator experiment searches its own gamma
                        // grid; candidates are not consulted.
                        _ => vec![ParetoCandidate::new(gamma)?],
                    };
                    let rule = match &self.rule {
                        Some(text) => parse_rule(text).context("config key `rule`")?,
                        None => ScoreRule::LogS,
                    };
                    specs.push(ExperimentSpec {
                        dgp: self.dgp_for(gamma, kind)?,
                        scaling,
                        n_values: n_values.clone(),
                        candidates,
                        rule,
                        k_policy: k_policy.clone(),
                        replications,
                        base_seed,
                    });
                }
                if kind == "ranking" {
                    Ok(ExperimentPlan::Ranking { specs })
                } else {
                    let k_fractions =
                        Self::require(&self.k_fractions, "k_fractions", kind)?;
                    for &f in &k_fractions {
                        if !(f > 0.0 && f < 1.0) {
                            bail!("config key `k_fractions` must lie in (0, 1), got {f}");
                        }
                    }
                    Ok(ExperimentPlan::Estimator {
                        specs,
                        k_fractions,
                        use_beta_schedule: self.use_beta_schedule.unwrap_or(true),
                    })
                }
            }
            "coverage" => {
                let gammas = Self::require(&self.gamma_true, "gamma_true", kind)?.to_vec();
                if gammas.len() != 1 {
                    bail!("config key `gamma_true` must be a single value for coverage");
                }
                Ok(ExperimentPlan::Coverage {
                    gamma: gammas[0],
                    n: Self::require(&self.n, "n", kind)?,
                    k: Self::require(&self.k, "k", kind)?,
                    replications: Self::require(&self.replications, "replications", kind)?,
                    base_seed: self.base_seed.unwrap_or(0),
                })
            }
            other => bail!("config key `kind` has unknown value `{other}` (ranking | estimator | coverage)"),
        }
    }
}
