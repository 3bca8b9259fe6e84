//! The four subcommands: score, estimate, experiment, simulate.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use tailrank::{
    apply_scaling, bias_variance_to_csv, estimates_to_csv, hill, hill_trace, rank_candidates,
    run_coverage_check, run_estimator_experiment, run_ranking_experiment, score_curve,
    score_curves_to_csv, score_opt_estimate, select_stability_range, Dgp, EstimateTrace,
    GammaGrid, KGrid, ParetoCandidate, ProportionCurve, Sample, ScalingKind, ScoreRule,
    StabilityPolicy, TailView,
};

use crate::config::{ExperimentConfig, ExperimentPlan};
use crate::ingest::{ingest, sample_to_csv, DatasetSpec};
use crate::manifest::{write_outputs, RunManifest};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum EstimateMethod {
    Hill,
    ScoreOpt,
    Both,
}

/// k-grid knobs shared by `score` and `estimate`. With no flags set the
/// real-data default applies: every integer k from 10 to n/4.
#[derive(Debug, Clone, Serialize)]
pub struct KArgs {
    pub k_min: Option<usize>,
    pub k_max: Option<usize>,
    pub k_points: Option<usize>,
    pub k_all_integers: bool,
}

impl KArgs {
    fn resolve(&self, n: usize) -> Result<KGrid> {
        if self.k_points.is_some() && self.k_all_integers {
            bail!("--k-points and --k-all-integers are mutually exclusive");
        }
        let k_max = self.k_max.unwrap_or(n / 4);
        let grid = match self.k_points {
            Some(points) => KGrid::even_spaced(self.k_min.unwrap_or(50), k_max, points)?,
            None => KGrid::all_integers(self.k_min.unwrap_or(10), k_max)?,
        };
        if grid.max() >= n {
            bail!("k grid reaches {} but the sample has only n = {n} rows", grid.max());
        }
        Ok(grid)
    }
}

// ---------------------------------------------------------------------------
// score
// ---------------------------------------------------------------------------

pub struct ScoreArgs {
    pub dataset: DatasetSpec,
    pub candidates: Vec<ParetoCandidate<f64>>,
    pub rule: ScoreRule<f64>,
    pub k: KArgs,
    pub stability_fraction: f64,
    /// Candidate whose rows carry CI columns; defaults to γ = 1 when present.
    pub ci_candidate: Option<f64>,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub format: OutputFormat,
}

#[derive(Serialize)]
struct ScoreConfigEcho {
    input: String,
    value_column: String,
    filter: Option<(String, String)>,
    drop_missing: bool,
    n: usize,
    candidates: Vec<f64>,
    rule: ScoreRule<f64>,
    k_grid: KArgs,
    k_grid_len: usize,
    k_grid_max: usize,
    stability_fraction: f64,
    ci_candidate: Option<f64>,
    format: OutputFormat,
}

pub fn cmd_score(args: &ScoreArgs) -> Result<()> {
    let sample = ingest(&args.dataset)?;
    let n = sample.n();
    let grid = args.k.resolve(n)?;

    let ci_gamma = match args.ci_candidate {
        Some(g) => {
            if !args.candidates.iter().any(|c| c.gamma() == g) {
                bail!("--ci-candidate {g} is not among the candidates");
            }
            Some(g)
        }
        None => args
            .candidates
            .iter()
            .find(|c| c.gamma() == 1.0)
            .map(|c| c.gamma()),
    };

    let mut curves = score_curve(&sample, &grid, &args.candidates, &args.rule, true)?;
    for curve in &mut curves {
        if Some(curve.candidate.gamma()) != ci_gamma {
            for p in &mut curve.points {
                p.ci_half_width = None;
            }
        }
    }
    let stability = select_stability_range(
        &grid,
        &StabilityPolicy::LowerFraction(args.stability_fraction),
    )?;
    let ranking = rank_candidates(&curves, &stability)?;

    let curves_path = match args.format {
        OutputFormat::Csv => args.out_dir.join("score_curves.csv"),
        OutputFormat::Json => args.out_dir.join("score_curves.json"),
    };
    let curves_text = match args.format {
        OutputFormat::Csv => score_curves_to_csv(&curves),
        OutputFormat::Json => serde_json::to_string_pretty(&curves)?,
    };
    let ranking_path = args.out_dir.join("ranking.json");
    let ranking_text = serde_json::to_string_pretty(&ranking)?;

    let echo = ScoreConfigEcho {
        input: args.dataset.path.display().to_string(),
        value_column: args.dataset.value_column.clone(),
        filter: args.dataset.filter.clone(),
        drop_missing: args.dataset.drop_missing,
        n,
        candidates: args.candidates.iter().map(|c| c.gamma()).collect(),
        rule: args.rule,
        k_grid: args.k.clone(),
        k_grid_len: grid.len(),
        k_grid_max: grid.max(),
        stability_fraction: args.stability_fraction,
        ci_candidate: ci_gamma,
        format: args.format,
    };
    let manifest = RunManifest::new(
        "score",
        args.seed,
        echo,
        &[&curves_path, &ranking_path],
    );
    write_outputs(
        &args.out_dir,
        &[(curves_path, curves_text), (ranking_path, ranking_text)],
        &manifest,
    )
}

// ---------------------------------------------------------------------------
// estimate
// ---------------------------------------------------------------------------

pub struct EstimateArgs {
    pub dataset: DatasetSpec,
    pub method: EstimateMethod,
    pub rule: ScoreRule<f64>,
    pub grid_lo: Option<f64>,
    pub grid_hi: Option<f64>,
    pub grid_points: usize,
    pub k: KArgs,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub format: OutputFormat,
}

#[derive(Serialize)]
struct EstimateConfigEcho {
    input: String,
    value_column: String,
    filter: Option<(String, String)>,
    drop_missing: bool,
    n: usize,
    method: EstimateMethod,
    rule: ScoreRule<f64>,
    /// Pilot Hill estimate backing the default grid (k = ⌊√n⌋), when used.
    pilot_gamma: Option<f64>,
    grid_lo: f64,
    grid_hi: f64,
    grid_points: usize,
    k_grid: KArgs,
    k_grid_len: usize,
    boundary_hits: usize,
    format: OutputFormat,
}

pub fn cmd_estimate(args: &EstimateArgs) -> Result<()> {
    let sample = ingest(&args.dataset)?;
    let n = sample.n();
    let grid = args.k.resolve(n)?;
    let sorted = sample.sorted_descending();

    let needs_score_opt = matches!(args.method, EstimateMethod::ScoreOpt | EstimateMethod::Both);
    let (gamma_grid, pilot) = if needs_score_opt {
        let (grid, pilot) = resolve_gamma_grid(args, &sorted, n)?;
        (Some(grid), pilot)
    } else {
        (None, None)
    };
    if let (Some(g), ScoreRule::EnergyScore { beta }) = (&gamma_grid, &args.rule) {
        let (_, hi) = g.bounds();
        if !(*beta < 1.0 / hi) {
            bail!(
                "--rule es:{beta} is invalid for the gamma grid: beta must be < 1/{hi} = {}",
                1.0 / hi
            );
        }
    }

    let mut traces: Vec<EstimateTrace<f64>> = Vec::new();
    for &k in grid.values() {
        let view = TailView::from_sorted_descending(&sorted, k)?;
        if matches!(args.method, EstimateMethod::Hill | EstimateMethod::Both) {
            traces.push(hill_trace(&view)?);
        }
        if let Some(g) = &gamma_grid {
            traces.push(score_opt_estimate(&view, &args.rule, g)?);
        }
    }
    let boundary_hits = traces.iter().filter(|t| t.at_boundary).count();

    let estimates_path = match args.format {
        OutputFormat::Csv => args.out_dir.join("estimates.csv"),
        OutputFormat::Json => args.out_dir.join("estimates.json"),
    };
    let estimates_text = match args.format {
        OutputFormat::Csv => estimates_to_csv(&traces),
        OutputFormat::Json => serde_json::to_string_pretty(&traces)?,
    };

    let (lo, hi) = gamma_grid
        .as_ref()
        .map(|g| g.bounds())
        .unwrap_or((f64::NAN, f64::NAN));
    let echo = EstimateConfigEcho {
        input: args.dataset.path.display().to_string(),
        value_column: args.dataset.value_column.clone(),
        filter: args.dataset.filter.clone(),
        drop_missing: args.dataset.drop_missing,
        n,
        method: args.method,
        rule: args.rule,
        pilot_gamma: pilot,
        grid_lo: lo,
        grid_hi: hi,
        grid_points: args.grid_points,
        k_grid: args.k.clone(),
        k_grid_len: grid.len(),
        boundary_hits,
        format: args.format,
    };
    let manifest = RunManifest::new("estimate", args.seed, echo, &[&estimates_path]);
    write_outputs(&args.out_dir, &[(estimates_path, estimates_text)], &manifest)
}

/// Explicit bounds when given; otherwise the pilot-Hill default
/// [0.8 γ̂, 2 γ̂] with the pilot at k = ⌊√n⌋ clamped to [10, n−1].
fn resolve_gamma_grid(
    args: &EstimateArgs,
    sorted: &[f64],
    n: usize,
) -> Result<(GammaGrid<f64>, Option<f64>)> {
    match (args.grid_lo, args.grid_hi) {
        (Some(lo), Some(hi)) => Ok((GammaGrid::equidistant(lo, hi, args.grid_points)?, None)),
        (None, None) => {
            let k_pilot = ((n as f64).sqrt() as usize).clamp(10, n - 1);
            let view = TailView::from_sorted_descending(sorted, k_pilot)?;
            let pilot = hill(&view);
            if !(pilot > 0.0) {
                bail!("pilot Hill estimate is not positive; supply --grid-lo/--grid-hi");
            }
            Ok((
                GammaGrid::equidistant(0.8 * pilot, 2.0 * pilot, args.grid_points)?,
                Some(pilot),
            ))
        }
        _ => bail!("--grid-lo and --grid-hi must be given together"),
    }
}

// ---------------------------------------------------------------------------
// experiment
// ---------------------------------------------------------------------------

pub struct ExperimentArgs {
    pub config_path: PathBuf,
    pub out_dir: PathBuf,
}

pub fn cmd_experiment(args: &ExperimentArgs) -> Result<()> {
    let text = std::fs::read_to_string(&args.config_path)
        .with_context(|| format!("cannot read {}", args.config_path.display()))?;
    let config = ExperimentConfig::from_toml(&text)?;
    let plan = config.validate()?;

    match plan {
        ExperimentPlan::Ranking { specs } => {
            let mut rows = String::from("gamma_true,n,k,k_over_n,proportion\n");
            for spec in &specs {
                let curves: Vec<ProportionCurve<f64>> = run_ranking_experiment(spec)?;
                let gamma = spec.dgp.gamma_true();
                for curve in &curves {
                    for p in &curve.points {
                        rows.push_str(&format!(
                            "{gamma},{},{},{},{}\n",
                            curve.n, p.k, p.k_over_n, p.proportion
                        ));
                    }
                }
            }
            let path = args.out_dir.join("proportions.csv");
            let seed = specs[0].base_seed;
            let manifest = RunManifest::new("experiment", seed, config, &[&path]);
            write_outputs(&args.out_dir, &[(path, rows)], &manifest)
        }
        ExperimentPlan::Estimator {
            specs,
            k_fractions,
            use_beta_schedule,
        } => {
            let mut cells = Vec::new();
            for spec in &specs {
                cells.extend(run_estimator_experiment(spec, &k_fractions, use_beta_schedule)?);
            }
            let path = args.out_dir.join("bias_variance.csv");
            let seed = specs[0].base_seed;
            let manifest = RunManifest::new("experiment", seed, config, &[&path]);
            write_outputs(&args.out_dir, &[(path, bias_variance_to_csv(&cells))], &manifest)
        }
        ExperimentPlan::Coverage {
            gamma,
            n,
            k,
            replications,
            base_seed,
        } => {
            let coverage = run_coverage_check(gamma, n, k, replications, base_seed)?;
            let rows = format!(
                "gamma,n,k,replications,coverage\n{gamma},{n},{k},{replications},{coverage}\n"
            );
            let path = args.out_dir.join("coverage.csv");
            let manifest = RunManifest::new("experiment", base_seed, config, &[&path]);
            write_outputs(&args.out_dir, &[(path, rows)], &manifest)
        }
    }
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

pub struct SimulateArgs {
    pub dgp: Dgp<f64>,
    pub n: usize,
    pub scaling: ScalingKind,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub format: OutputFormat,
}

#[derive(Serialize)]
struct SimulateConfigEcho {
    dgp: Dgp<f64>,
    n: usize,
    scaling: ScalingKind,
    format: OutputFormat,
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    let raw = args.dgp.sample(args.n, args.seed, 0)?;
    let sample: Sample<f64> = apply_scaling(&raw, args.scaling)?;

    let path = match args.format {
        OutputFormat::Csv => args.out_dir.join("sample.csv"),
        OutputFormat::Json => args.out_dir.join("sample.json"),
    };
    let text = match args.format {
        OutputFormat::Csv => sample_to_csv(&sample),
        OutputFormat::Json => serde_json::to_string_pretty(&sample)?,
    };
    let echo = SimulateConfigEcho {
        dgp: args.dgp,
        n: args.n,
        scaling: args.scaling,
        format: args.format,
    };
    let manifest = RunManifest::new("simulate", args.seed, echo, &[&path]);
    write_outputs(&args.out_dir, &[(path, text)], &manifest)
}

