//! Acceptance suite: one test per criterion, each ending in a printed
//! pass line (visible with `cargo test --test acceptance -- --nocapture`).
//!
//! Reference cells and tolerances are frozen here; the statistical bands
//! account for the Monte Carlo noise carried by 100-replication estimates on
//! both sides of the comparison.

use std::time::Instant;

use tailrank::*;

/// Base seed for every experiment in this suite.
const BASE_SEED: u64 = 20240811;

/// Reference Hill cells: (gamma_true, [(variance, bias); k/n in {.05,.15,.25}]).
const HILL_REFERENCE: [(f64, [(f64, f64); 3]); 4] = [
    (0.33, [(2.08e-4, 0.00366), (8.15e-5, 0.01279), (5.57e-5, 0.02307)]),
    (0.66, [(8.72e-4, 0.00610), (3.03e-4, 0.02672), (2.38e-4, 0.04826)]),
    (1.00, [(1.64e-3, 0.01710), (5.48e-4, 0.04377), (3.82e-4, 0.07129)]),
    (1.33, [(3.38e-3, 0.01640), (1.24e-3, 0.05424), (7.36e-4, 0.09525)]),
];

const K_FRACTIONS: [f64; 3] = [0.05, 0.15, 0.25];

/// Bias band: max(3 standard errors of a 100-replication mean, 25% of the
/// reference bias). Variance band: [0.55, 1.8]x the reference (the ~95%
/// spread of a variance ratio with 99 degrees of freedom on both sides).
fn bias_tolerance(ref_bias: f64, ref_var: f64) -> f64 {
    (3.0 * (ref_var / 100.0).sqrt()).max(0.25 * ref_bias.abs())
}
const VAR_RATIO_LO: f64 = 0.55;
const VAR_RATIO_HI: f64 = 1.8;

fn frechet_estimator_spec(gamma: f64) -> ExperimentSpec<f64> {
    ExperimentSpec {
        dgp: Dgp::Frechet { gamma },
        scaling: ScalingKind::None,
        n_values: vec![10_000],
        candidates: vec![ParetoCandidate::new(gamma).unwrap()],
        rule: ScoreRule::LogS,
        k_policy: KPolicy::SimulationDefault,
        replications: 100,
        base_seed: BASE_SEED,
    }
}

#[test]
fn criterion_01_table1_hill_cells() {
    let start = Instant::now();
    for (gamma, cells) in HILL_REFERENCE {
        let spec = frechet_estimator_spec(gamma);
        let got = run_estimator_experiment(&spec, &K_FRACTIONS, false).unwrap();
        let hill: Vec<&BiasVarianceCell<f64>> =
            got.iter().filter(|c| c.method == "hill").collect();
        assert_eq!(hill.len(), 3);
        for (cell, (ref_var, ref_bias)) in hill.iter().zip(cells) {
            let tol = bias_tolerance(ref_bias, ref_var);
            assert!(
                (cell.bias - ref_bias).abs() <= tol,
                "gamma {gamma} k/n {}: bias {} vs reference {ref_bias} (tol {tol})",
                cell.k_fraction,
                cell.bias
            );
            let var = cell.variance.unwrap();
            let ratio = var / ref_var;
            assert!(
                (VAR_RATIO_LO..=VAR_RATIO_HI).contains(&ratio),
                "gamma {gamma} k/n {}: variance {var} vs reference {ref_var} (ratio {ratio})",
                cell.k_fraction
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 120, "took {elapsed:?}, budget 2 minutes");
    println!("criterion 01 (Table 1 Hill bias/variance, 12 cells): PASS ({elapsed:?})");
}

#[test]
fn criterion_02_table1_es_qualitative() {
    let start = Instant::now();

    // Sub-claim (b) first: at gamma = 0.33 the ES and Hill biases agree
    // within a factor of 1.5.
    let spec = frechet_estimator_spec(0.33);
    let cells = run_estimator_experiment(&spec, &K_FRACTIONS, true).unwrap();
    for &f in &K_FRACTIONS {
        let hill_bias = cells
            .iter()
            .find(|c| c.method == "hill" && c.k_fraction == f)
            .unwrap()
            .bias;
        for cell in cells.iter().filter(|c| c.method == "es" && c.k_fraction == f) {
            let ratio = cell.bias / hill_bias;
            assert!(
                (1.0 / 1.5..=1.5).contains(&ratio),
                "gamma 0.33 k/n {f}: ES/Hill bias ratio {ratio} outside [0.667, 1.5]"
            );
        }
    }
    println!("criterion 02b (gamma 0.33: ES and Hill biases within factor 1.5): PASS");

    // Sub-claim (a): at gamma in {1, 1.33} every ES(beta_i) bias exceeds the
    // Hill bias at all three k fractions.
    //
    // This does not hold for an exact evaluation of the energy score. The
    // exact grid-argmax estimator is consistent (as the theory requires) and
    // its bias stays within a few percent of Hill's at every gamma, with the
    // beta_1 cells statistically tied to Hill — so strict dominance across
    // all 18 cells fails on hair-thin margins. The reference table's
    // order-of-magnitude ES degradation at larger gamma is not reproducible
    // from the stated formulas (it would contradict consistency: those cells
    // sit pinned at the search-grid boundary, and the design is nearly
    // scale-equivariant across gamma, so no correct estimator can behave
    // qualitatively differently at gamma 0.33 vs 1.33). The assertion below
    // is kept exactly as stated and is expected to fail.
    let mut violations = Vec::new();
    for gamma in [1.0, 1.33] {
        let spec = frechet_estimator_spec(gamma);
        let cells = run_estimator_experiment(&spec, &K_FRACTIONS, true).unwrap();
        for &f in &K_FRACTIONS {
            let hill_bias = cells
                .iter()
                .find(|c| c.method == "hill" && c.k_fraction == f)
                .unwrap()
                .bias;
            let es: Vec<&BiasVarianceCell<f64>> = cells
                .iter()
                .filter(|c| c.method == "es" && c.k_fraction == f)
                .collect();
            assert_eq!(es.len(), 3);
            for cell in es {
                if cell.bias <= hill_bias {
                    violations.push(format!(
                        "gamma {gamma} k/n {f} beta {:.4}: ES bias {:+.5} vs Hill {:+.5}",
                        cell.beta.unwrap(),
                        cell.bias,
                        hill_bias
                    ));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    if violations.is_empty() {
        println!("criterion 02 (Table 1 ES rows, qualitative dominance): PASS ({elapsed:?})");
    } else {
        println!(
            "criterion 02 (Table 1 ES rows, qualitative dominance): FAIL ({elapsed:?}) — \
             exact ES evaluation ties Hill instead of trailing it; cells: {violations:?}"
        );
    }
    assert!(
        violations.is_empty(),
        "ES-above-Hill dominance does not hold under exact ES evaluation: {violations:?}"
    );
}

/// Golden-section maximization of the empirical LogS objective in gamma.
fn golden_section_logs_argmax(view: &TailView<f64>, lo: f64, hi: f64) -> f64 {
    let objective = |gamma: f64| {
        let cand = ParetoCandidate::new(gamma).unwrap();
        empirical_tail_score(view, &ScoreRule::LogS, &cand).unwrap()
    };
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let mut fc = objective(c);
    let mut fd = objective(d);
    for _ in 0..200 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = objective(d);
        }
        if (b - a).abs() < 1e-12 * (a.abs() + b.abs()) {
            break;
        }
    }
    0.5 * (a + b)
}

/// Bisection on the sign of the LogS objective's gamma-derivative inside a
/// small bracket around a rough maximizer.
fn polish_by_stationarity(view: &TailView<f64>, rough: f64) -> f64 {
    let mut lo = rough * (1.0 - 1e-4);
    let mut hi = rough * (1.0 + 1e-4);
    // Widen until the derivative changes sign across the bracket.
    for _ in 0..60 {
        if logs_objective_stationarity(view, lo) > 0.0 {
            break;
        }
        lo *= 0.5;
    }
    for _ in 0..60 {
        if logs_objective_stationarity(view, hi) < 0.0 {
            break;
        }
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if logs_objective_stationarity(view, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-13 * mid {
            break;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn criterion_03_hill_equals_logs_argmax() {
    let start = Instant::now();
    for i in 0..100u64 {
        let gamma_true = 0.3 + 1.7 * (i as f64 / 99.0);
        let k = 10 + ((i as usize) * 37) % 491;
        let law = ParetoCandidate::new(gamma_true).unwrap();
        let sample = sample_pareto(&law, 1000 + k, BASE_SEED + i).unwrap();
        let view = normalized_exceedances(&sample, k).unwrap();
        let h = hill(&view);

        // Continuous maximization over a wide bracket: golden section
        // localizes the maximizer to the f64 comparison noise floor
        // (~sqrt(eps·|S|/|S''|), a few 1e-8 relative); a sign bisection of
        // the score's gamma-derivative then sharpens it well past 1e-8.
        let rough = golden_section_logs_argmax(&view, 1e-3, 1e3);
        let gs = polish_by_stationarity(&view, rough);
        assert!(
            (gs - h).abs() <= 1e-8 * h.abs(),
            "view {i}: continuous maximizer {gs} vs hill {h}"
        );

        // Grid estimator lands within one grid step of Hill.
        let grid = GammaGrid::equidistant(0.5 * h, 2.0 * h, 150).unwrap();
        let trace = score_opt_estimate(&view, &ScoreRule::LogS, &grid).unwrap();
        assert!(
            (trace.gamma_hat - h).abs() <= grid.step() + 1e-12,
            "view {i}: grid {} vs hill {h} (step {})",
            trace.gamma_hat,
            grid.step()
        );
    }
    println!(
        "criterion 03 (Hill = LogS argmax, 100 views): PASS ({:?})",
        start.elapsed()
    );
}

#[test]
fn criterion_04_properness_ranking_exact_pareto() {
    let start = Instant::now();
    let candidates: Vec<ParetoCandidate<f64>> = [0.8, 1.0, 1.2, 1.5]
        .iter()
        .map(|&g| ParetoCandidate::new(g).unwrap())
        .collect();
    let law = ParetoCandidate::new(1.0).unwrap();
    let n = 100_000;
    let grid = KGrid::simulation_default(n).unwrap();
    let stability =
        select_stability_range(&grid, &StabilityPolicy::LowerFraction(0.25)).unwrap();
    let mut top_correct = 0usize;
    for run in 0..100u64 {
        let sample = law
            .sample_with_stream(n, BASE_SEED, 1000 + run)
            .unwrap();
        let curves = score_curve(&sample, &grid, &candidates, &ScoreRule::LogS, false).unwrap();
        let report = rank_candidates(&curves, &stability).unwrap();
        if report.entries[0].gamma == 1.0 {
            top_correct += 1;
        }
    }
    assert!(
        top_correct >= 95,
        "true index ranked first in only {top_correct}/100 runs"
    );
    println!(
        "criterion 04 (ranking puts gamma=1 first in {top_correct}/100 runs): PASS ({:?})",
        start.elapsed()
    );
}

#[test]
fn criterion_05_figure2_endpoint_full_range() {
    let start = Instant::now();
    let spec = ExperimentSpec {
        dgp: Dgp::Frechet { gamma: 1.0 },
        scaling: ScalingKind::None,
        n_values: vec![100_000],
        candidates: [0.8, 1.0, 1.2, 1.5]
            .iter()
            .map(|&g| ParetoCandidate::new(g).unwrap())
            .collect(),
        rule: ScoreRule::LogS,
        k_policy: KPolicy::SimulationDefault,
        replications: 100,
        base_seed: BASE_SEED,
    };
    let curves = run_ranking_experiment(&spec).unwrap();

    // "Proportion equal to one across the entire range" holds on the k/n
    // range the reference figure displays, k/n in [0.05, 0.25] (the range
    // shared by all three sample sizes). Below it the claim is impossible
    // for any method: the correct candidate wins at k only when the mean log
    // ratio H_k falls in (0.8926, 1.0939), and H_50 ~ Gamma(50)/50 puts only
    // ~52% of replications there — pure sampling noise, independent of n.
    let worst = curves[0]
        .points
        .iter()
        .filter(|p| p.k_over_n >= 0.05)
        .map(|p| p.proportion)
        .fold(f64::INFINITY, f64::min);
    assert!(
        worst >= 0.97,
        "proportion-correct dropped to {worst} on the k/n >= 0.05 grid"
    );

    // Companion pin on the small-k statistics: at k = 50 the win probability
    // is P(Gamma(50)/50 in (0.8926, 1.0939)) ~ 0.523; with 100 replications
    // allow a 3-sigma binomial band.
    let first = &curves[0].points[0];
    assert_eq!(first.k, 50);
    assert!(
        (first.proportion - 0.523).abs() <= 0.15,
        "k=50 proportion {} far from its analytic ~0.52",
        first.proportion
    );

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 600, "took {elapsed:?}, budget 10 minutes");
    println!(
        "criterion 05 (Frechet n=1e5 proportion = 1 within 0.03 on plotted range, min {worst}; \
         k=50 proportion {} matches analytic 0.52): PASS ({elapsed:?})",
        first.proportion
    );
}

#[test]
fn criterion_06_heterogeneous_scaling_robustness() {
    let start = Instant::now();
    for scaling in [ScalingKind::Linear, ScalingKind::Sinusoidal] {
        let spec = ExperimentSpec {
            dgp: Dgp::Frechet { gamma: 1.0 },
            scaling,
            n_values: vec![100_000],
            candidates: [0.8, 1.0, 1.2, 1.5]
                .iter()
                .map(|&g| ParetoCandidate::new(g).unwrap())
                .collect(),
            rule: ScoreRule::LogS,
            k_policy: KPolicy::SimulationDefault,
            replications: 100,
            base_seed: BASE_SEED,
        };
        let curves = run_ranking_experiment(&spec).unwrap();
        let points = &curves[0].points;
        let lowest_decile = points.len().div_ceil(10);
        let mean: f64 = points[..lowest_decile]
            .iter()
            .map(|p| p.proportion)
            .sum::<f64>()
            / lowest_decile as f64;
        assert!(
            mean >= 0.9,
            "{scaling:?}: mean proportion over the smallest 10% of k is {mean}"
        );
    }
    println!(
        "criterion 06 (scaling robustness, linear & sinusoidal): PASS ({:?})",
        start.elapsed()
    );
}

#[test]
fn criterion_07_ci_coverage_at_fixed_point() {
    let start = Instant::now();
    let coverage = run_coverage_check(1.0, 10_000, 100, 2000, BASE_SEED).unwrap();
    assert!(
        (0.92..=0.98).contains(&coverage),
        "coverage {coverage} outside [0.92, 0.98]"
    );
    println!(
        "criterion 07 (95% CI coverage {coverage} in [0.92, 0.98]): PASS ({:?})",
        start.elapsed()
    );
}

#[test]
fn criterion_08_es_against_monte_carlo_oracle() {
    let start = Instant::now();
    const N: usize = 10_000_000;

    // Analytic cell first: ES_1(F_0.5, 1) = -1/3 to 1e-8.
    let c = ParetoCandidate::<f64>::new(0.5).unwrap();
    let v = es_beta_pareto(&c, 1.0, 1.0).unwrap();
    assert!(
        (v + 1.0 / 3.0).abs() <= 1e-8,
        "analytic CRPS cell: {v} vs -1/3"
    );

    for gamma in [0.5f64, 0.9] {
        let law = ParetoCandidate::new(gamma).unwrap();
        let x = sample_pareto(&law, N, BASE_SEED + 81).unwrap();
        let x_prime = law.sample_with_stream(N, BASE_SEED + 81, 1).unwrap();
        for beta in [0.3, 0.81 / gamma] {
            // Pair term from independent pairs.
            let (mut pair_sum, mut pair_sq) = (0.0f64, 0.0f64);
            for (&a, &b) in x.values().iter().zip(x_prime.values()) {
                let w = (a - b).abs().powf(beta);
                pair_sum += w;
                pair_sq += w * w;
            }
            let pair_mean = pair_sum / N as f64;
            let pair_var = (pair_sq / N as f64 - pair_mean * pair_mean).max(0.0);

            for z in [1.0f64, 2.0, 10.0] {
                let (mut obs_sum, mut obs_sq) = (0.0f64, 0.0f64);
                for &a in x.values() {
                    let w = (a - z).abs().powf(beta);
                    obs_sum += w;
                    obs_sq += w * w;
                }
                let obs_mean = obs_sum / N as f64;
                let obs_var = (obs_sq / N as f64 - obs_mean * obs_mean).max(0.0);
                let oracle = 0.5 * pair_mean - obs_mean;
                // Independent streams: variances of the two halves add. For
                // beta near the moment boundary the heavy-tailed sample SE is
                // large, which the band reflects honestly.
                let se = (0.25 * pair_var / N as f64 + obs_var / N as f64).sqrt();
                let closed = es_beta_pareto(&law, beta, z).unwrap();
                assert!(
                    (closed - oracle).abs() <= 4.0 * se,
                    "gamma {gamma} beta {beta} z {z}: closed {closed} vs MC {oracle} (se {se})"
                );
            }
        }
    }
    println!(
        "criterion 08 (ES matches 1e7-draw MC oracle on 12 cells + exact CRPS cell): PASS ({:?})",
        start.elapsed()
    );
}

#[test]
fn criterion_09_variance_formulas_against_simulation() {
    let start = Instant::now();
    const N: usize = 10_000_000;

    // Empirical variance of the per-draw scores, with the standard error of a
    // sample variance from the centered fourth moment.
    fn check(scores: &[f64], analytic: f64, label: &str) {
        let n = scores.len() as f64;
        let mean = scores.iter().sum::<f64>() / n;
        let (mut m2, mut m4) = (0.0f64, 0.0f64);
        for &s in scores {
            let d = s - mean;
            m2 += d * d;
            m4 += d * d * d * d;
        }
        let var = m2 / (n - 1.0);
        let m4 = m4 / n;
        let se = ((m4 - var * var).max(0.0) / n).sqrt();
        assert!(
            (var - analytic).abs() <= 4.0 * se,
            "{label}: empirical {var} vs analytic {analytic} (se {se})"
        );
    }

    // LogS variance cells.
    for (gamma, gamma_true) in [(1.0, 1.0), (0.5, 1.0), (1.3, 0.7)] {
        let cand = ParetoCandidate::new(gamma).unwrap();
        let obs = sample_pareto(&ParetoCandidate::new(gamma_true).unwrap(), N, BASE_SEED + 91)
            .unwrap();
        let scores: Vec<f64> = obs
            .values()
            .iter()
            .map(|&y| logs_pareto(&cand, y).unwrap())
            .collect();
        check(
            &scores,
            var_logs(gamma, gamma_true),
            &format!("var_logs({gamma},{gamma_true})"),
        );
    }

    // CRPS variance cells (gamma_true < 1/2 keeps all displayed moments
    // finite; gamma_true = 0.2 keeps the fourth moment of the score finite
    // too, so the SE itself is stable).
    for (gamma, gamma_true) in [(0.5, 0.25), (0.5, 0.2), (0.8, 0.2)] {
        let cand = ParetoCandidate::new(gamma).unwrap();
        let kernel = EsPareto::new(&cand, 1.0).unwrap();
        let obs = sample_pareto(&ParetoCandidate::new(gamma_true).unwrap(), N, BASE_SEED + 92)
            .unwrap();
        let scores: Vec<f64> = obs
            .values()
            .iter()
            .map(|&y| kernel.score(y).unwrap())
            .collect();
        check(
            &scores,
            var_es1(gamma, gamma_true).unwrap(),
            &format!("var_es1({gamma},{gamma_true})"),
        );
    }
    println!(
        "criterion 09 (variance formulas match 1e7-draw simulations): PASS ({:?})",
        start.elapsed()
    );
}

#[test]
fn criterion_10_determinism_and_scale_invariance() {
    let start = Instant::now();

    // Byte-identical outputs across reruns and worker counts.
    let spec = ExperimentSpec {
        dgp: Dgp::Pareto { gamma: 1.0 },
        scaling: ScalingKind::None,
        n_values: vec![10_000],
        candidates: [0.8, 1.0, 1.2, 1.5]
            .iter()
            .map(|&g| ParetoCandidate::new(g).unwrap())
            .collect(),
        rule: ScoreRule::LogS,
        k_policy: KPolicy::EvenSpaced {
            k_min: 50,
            k_max: None,
            points: 25,
        },
        replications: 20,
        base_seed: BASE_SEED,
    };
    let baseline_rank = proportion_curves_to_csv(&run_ranking_experiment(&spec).unwrap());
    let baseline_cells =
        bias_variance_to_csv(&run_estimator_experiment(&spec, &[0.05, 0.25], true).unwrap());
    let rerun = proportion_curves_to_csv(&run_ranking_experiment(&spec).unwrap());
    assert_eq!(baseline_rank, rerun, "rerun changed ranking output bytes");
    for threads in [1usize, 4] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        let rank = pool.install(|| proportion_curves_to_csv(&run_ranking_experiment(&spec).unwrap()));
        let cells = pool.install(|| {
            bias_variance_to_csv(&run_estimator_experiment(&spec, &[0.05, 0.25], true).unwrap())
        });
        assert_eq!(baseline_rank, rank, "{threads}-thread pool changed ranking bytes");
        assert_eq!(baseline_cells, cells, "{threads}-thread pool changed table bytes");
    }

    // Rescaling by c in {1e-3, 1e3}: ratios and scores agree to floating
    // point (the products c*y round, so "no change" means within a few ulp),
    // and every discrete output (ranking order, grid estimates) is identical.
    // Powers of two scale exactly and must be bitwise invariant.
    let law = ParetoCandidate::new(1.0).unwrap();
    let sample = sample_pareto(&law, 10_000, BASE_SEED + 5).unwrap();
    let candidates: Vec<ParetoCandidate<f64>> = [0.8, 1.0, 1.2, 1.5]
        .iter()
        .map(|&g| ParetoCandidate::new(g).unwrap())
        .collect();
    let grid = KGrid::simulation_default(sample.n()).unwrap();
    let stability =
        select_stability_range(&grid, &StabilityPolicy::LowerFraction(0.25)).unwrap();
    let gamma_grid = GammaGrid::equidistant(0.8, 2.0, 150).unwrap();

    let base_view = normalized_exceedances(&sample, 500).unwrap();
    let base_curves = score_curve(&sample, &grid, &candidates, &ScoreRule::LogS, true).unwrap();
    let base_rank = rank_candidates(&base_curves, &stability).unwrap();
    let base_hill = hill(&base_view);
    let base_opt = score_opt_estimate(&base_view, &ScoreRule::EnergyScore { beta: 0.45 }, &gamma_grid)
        .unwrap();

    for c in [1e-3f64, 1e3] {
        let scaled = sample.scaled_by(c).unwrap();
        let view = normalized_exceedances(&scaled, 500).unwrap();
        for (a, b) in base_view.ratios().iter().zip(view.ratios()) {
            assert!(
                (a - b).abs() <= 1e-13 * a.abs(),
                "ratio moved under scale {c}: {a} vs {b}"
            );
        }
        let curves = score_curve(&scaled, &grid, &candidates, &ScoreRule::LogS, true).unwrap();
        for (ca, cb) in base_curves.iter().zip(&curves) {
            for (pa, pb) in ca.points.iter().zip(&cb.points) {
                assert!(
                    (pa.score - pb.score).abs() <= 1e-13 * pa.score.abs().max(1.0),
                    "score moved under scale {c}"
                );
            }
        }
        let rank = rank_candidates(&curves, &stability).unwrap();
        let order: Vec<f64> = rank.entries.iter().map(|e| e.gamma).collect();
        let base_order: Vec<f64> = base_rank.entries.iter().map(|e| e.gamma).collect();
        assert_eq!(order, base_order, "ranking changed under scale {c}");
        let h = hill(&view);
        assert!((h - base_hill).abs() <= 1e-13 * base_hill, "hill moved under scale {c}");
        let opt = score_opt_estimate(&view, &ScoreRule::EnergyScore { beta: 0.45 }, &gamma_grid)
            .unwrap();
        assert_eq!(opt.gamma_hat, base_opt.gamma_hat, "estimate changed under scale {c}");
    }

    // Binary factors scale without rounding: bitwise equality.
    for c in [1024.0f64, 1.0 / 1024.0] {
        let scaled = sample.scaled_by(c).unwrap();
        let view = normalized_exceedances(&scaled, 500).unwrap();
        assert_eq!(base_view.ratios(), view.ratios(), "binary scale {c} not exact");
        let curves = score_curve(&scaled, &grid, &candidates, &ScoreRule::LogS, true).unwrap();
        assert_eq!(base_curves, curves);
    }

    println!(
        "criterion 10 (byte-identical reruns/worker counts; scale invariance): PASS ({:?})",
        start.elapsed()
    );
}
