//! Built-in self-checks: deterministic parameter grids and seeded random
//! networks run through the library, each compared against a closed form
//! or a structural property.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{
    cf_feasible, cf_rate, lambda_det, optimize_quantization, source_cut_bound, symmetric_grid,
    verify_single_relay_alpha, verify_two_relay_beta_invariance, CfOptions, Quantifier,
    QuantizationVector, SingleRelayParams, TwoRelayParams, RATE_TOL,
};
use crate::error::Result;
use crate::exec::{self, Settings};
use crate::topology::{NetworkSpec, NodeSpec};

/// Scale factors applied to a feasible quantization in the monotonicity check.
pub const MONOTONE_FACTORS: [f64; 3] = [1.5, 10.0, 1e3];
const MAX_REPORTED_FAILURES: usize = 10;

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyConfig {
    pub alpha_points: usize,
    pub beta_points: usize,
    pub lemma_cases: usize,
    pub random_cases: usize,
    pub seed: u64,
    /// Flips the sign of the α² term in the expected closed form, so the
    /// α suite must fail. Used to show the suite is sensitive.
    pub inject_fault: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            alpha_points: 21,
            beta_points: 21,
            lemma_cases: 500,
            random_cases: 100,
            seed: 0x5eed_2006,
            inject_fault: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
    /// Failures beyond the reported ones.
    pub suppressed: usize,
}

impl CheckOutcome {
    fn new(name: &'static str, cases: usize, mut failures: Vec<String>) -> Self {
        let suppressed = failures.len().saturating_sub(MAX_REPORTED_FAILURES);
        failures.truncate(MAX_REPORTED_FAILURES);
        Self {
            name,
            cases,
            failures,
            suppressed,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// 5 × 5 × 3 × 3 = 225 combinations of (P1, P2, N2, N3).
pub fn alpha_parameter_grid() -> Vec<SingleRelayParams> {
    let mut out = Vec::new();
    for p1 in [0.1, 0.5, 1.0, 3.0, 20.0] {
        for p2 in [0.2, 1.0, 2.5, 10.0, 100.0] {
            for n2 in [0.1, 1.0, 5.0] {
                for n3 in [0.3, 1.0, 8.0] {
                    out.push(SingleRelayParams { p1, p2, n2, n3 });
                }
            }
        }
    }
    out
}

/// 5 × 3 × 3 × 3 = 135 combinations of (P1, N2, N3, N4).
pub fn beta_parameter_grid() -> Vec<TwoRelayParams> {
    let mut out = Vec::new();
    for p1 in [0.1, 0.7, 1.0, 4.0, 50.0] {
        for n2 in [0.2, 1.0, 6.0] {
            for n3 in [0.5, 1.0, 3.0] {
                for n4 in [0.1, 1.0, 10.0] {
                    out.push(TwoRelayParams::new(p1, n2, n3, n4));
                }
            }
        }
    }
    out
}

fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

fn case_rng(seed: u64, case: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(
        seed.wrapping_mul(0x9e37_79b9_7f4a_7c15)
            .wrapping_add(case as u64),
    )
}

/// Random explicit-gain network with `num_nodes` nodes.
pub fn random_network<R: Rng>(rng: &mut R, num_nodes: usize) -> NetworkSpec {
    assert!(num_nodes >= 2);
    let mut nodes = vec![NodeSpec::source(1, log_uniform(rng, 0.1, 10.0))];
    for id in 2..num_nodes {
        nodes.push(NodeSpec::relay(
            id,
            log_uniform(rng, 1.0, 1e3),
            log_uniform(rng, 0.2, 2.0),
        ));
    }
    nodes.push(NodeSpec::destination(num_nodes, log_uniform(rng, 0.2, 2.0)));
    let gains: Vec<Vec<f64>> = (0..num_nodes)
        .map(|i| {
            (0..num_nodes)
                .map(|j| {
                    if i == j {
                        0.0
                    } else {
                        log_uniform(rng, 0.05, 2.0)
                    }
                })
                .collect()
        })
        .collect();
    NetworkSpec::from_gains(nodes, &gains).expect("square by construction")
}

/// A feasible quantization above the uniform frontier, each entry scaled
/// up by an independent factor in `[1, 10)`.
pub fn random_feasible_q<R: Rng>(
    rng: &mut R,
    net: &NetworkSpec,
    quantifier: Quantifier,
    settings: &Settings,
) -> Result<QuantizationVector> {
    let options = CfOptions {
        quantifier,
        ..CfOptions::default()
    };
    let frontier = optimize_quantization(net, &options, settings)?.uniform_level;
    Ok(QuantizationVector::from_values(
        (0..net.num_relays())
            .map(|_| frontier * log_uniform(rng, 1.0, 10.0))
            .collect(),
    ))
}

/// Covariance route vs `½ log₂[1 + (P1−α²P2)/N2 + (P1−α²P2)/N3]`, and the
/// argmax at α = 0.
pub fn alpha_suite(cfg: &VerifyConfig) -> Result<CheckOutcome> {
    let mut failures = Vec::new();
    let grid = alpha_parameter_grid();
    for params in &grid {
        let alphas = params.alpha_grid(cfg.alpha_points);
        let report = verify_single_relay_alpha(*params, &alphas)?;
        for row in &report.rows {
            let sign = if cfg.inject_fault { -1.0 } else { 1.0 };
            let fresh = (params.p1 - sign * row.alpha * row.alpha * params.p2).max(0.0);
            let expected = 0.5 * (1.0 + fresh / params.n2 + fresh / params.n3).log2();
            if (row.covariance_bits - expected).abs() > RATE_TOL {
                failures.push(format!(
                    "{params:?} alpha={}: covariance {} vs closed form {}",
                    row.alpha, row.covariance_bits, expected
                ));
            }
        }
        if report.argmax_alpha != 0.0 {
            failures.push(format!(
                "{params:?}: argmax at alpha={}",
                report.argmax_alpha
            ));
        }
    }
    Ok(CheckOutcome::new(
        "single-relay correlation (alpha)",
        grid.len(),
        failures,
    ))
}

/// Source-cut information is flat in β and equals the closed form.
pub fn beta_suite(cfg: &VerifyConfig) -> Result<CheckOutcome> {
    let mut failures = Vec::new();
    let grid = beta_parameter_grid();
    let betas = symmetric_grid(2.0, cfg.beta_points);
    for params in &grid {
        let expected =
            0.5 * (1.0 + params.p1 * (1.0 / params.n2 + 1.0 / params.n3 + 1.0 / params.n4)).log2();
        let report = verify_two_relay_beta_invariance(*params, &betas)?;
        for row in &report.rows {
            if (row.covariance_bits - expected).abs() > RATE_TOL {
                failures.push(format!(
                    "{params:?} beta={}: {} vs {}",
                    row.beta, row.covariance_bits, expected
                ));
            }
        }
        if report.spread > RATE_TOL {
            failures.push(format!("{params:?}: spread {} over beta", report.spread));
        }
    }
    Ok(CheckOutcome::new(
        "two-relay correlation (beta)",
        grid.len(),
        failures,
    ))
}

/// Λ(D) by factorization vs `Π(N+Q)·(1 + P1 Σ λ/(N+Q))`.
pub fn lambda_lemma_suite(cfg: &VerifyConfig) -> Result<CheckOutcome> {
    let cases: Vec<usize> = (0..cfg.lemma_cases).collect();
    let results = exec::try_map(
        Settings::default().exec,
        &cases,
        |&case| -> Result<Option<String>> {
            let mut rng = case_rng(cfg.seed ^ 0x1a, case);
            let d = rng.gen_range(1..=6);
            let net = random_network(&mut rng, d + 2);
            let q = QuantizationVector::from_values(
                (0..d).map(|_| log_uniform(&mut rng, 1e-3, 10.0)).collect(),
            );
            let s = net.relays();
            let p1 = net.power(1);
            let prod: f64 = s.iter().map(|&i| net.noise(i) + q.get(i)).product();
            let sum: f64 = s
                .iter()
                .map(|&i| net.gain(1, i) / (net.noise(i) + q.get(i)))
                .sum();
            let lemma = prod * (1.0 + p1 * sum);
            let det = lambda_det(&net, &s, &q)?;
            let rel = ((det - lemma) / lemma).abs();
            Ok((rel >= 1e-10)
                .then(|| format!("case {case} (D={d}): {det} vs {lemma}, rel {rel:e}")))
        },
    )?;
    Ok(CheckOutcome::new(
        "lambda determinant lemma",
        cases.len(),
        results.into_iter().flatten().collect(),
    ))
}

fn random_case(
    cfg: &VerifyConfig,
    salt: u64,
    case: usize,
    settings: &Settings,
) -> Result<(NetworkSpec, QuantizationVector)> {
    let mut rng = case_rng(cfg.seed ^ salt, case);
    let t = rng.gen_range(3..=6);
    let net = random_network(&mut rng, t);
    let q = random_feasible_q(&mut rng, &net, Quantifier::ForAll, settings)?;
    Ok((net, q))
}

/// Scaling a feasible quantization up keeps it feasible.
pub fn monotonicity_suite(cfg: &VerifyConfig, settings: &Settings) -> Result<CheckOutcome> {
    let cases: Vec<usize> = (0..cfg.random_cases).collect();
    let inner = Settings::sequential().with_override(settings.override_guard);
    let results = exec::try_map(settings.exec, &cases, |&case| -> Result<Vec<String>> {
        let (net, q) = random_case(cfg, 0x2b, case, &inner)?;
        let mut failures = Vec::new();
        for quantifier in [Quantifier::ForAll, Quantifier::Exists] {
            if !cf_feasible(&net, &q, quantifier, &inner)?.feasible {
                failures.push(format!(
                    "case {case}: base {:?} infeasible ({quantifier})",
                    q.values()
                ));
                continue;
            }
            for c in MONOTONE_FACTORS {
                if !cf_feasible(&net, &q.scaled(c), quantifier, &inner)?.feasible {
                    failures.push(format!(
                        "case {case}: {:?} x {c} infeasible ({quantifier})",
                        q.values()
                    ));
                }
            }
        }
        Ok(failures)
    })?;
    Ok(CheckOutcome::new(
        "feasibility monotone in scaling",
        cases.len(),
        results.into_iter().flatten().collect(),
    ))
}

/// Compress-forward never beats the source-cut bound.
pub fn achievability_suite(cfg: &VerifyConfig, settings: &Settings) -> Result<CheckOutcome> {
    let cases: Vec<usize> = (0..cfg.random_cases).collect();
    let inner = Settings::sequential().with_override(settings.override_guard);
    let results = exec::try_map(settings.exec, &cases, |&case| -> Result<Option<String>> {
        let (net, q) = random_case(cfg, 0x3c, case, &inner)?;
        let rate = cf_rate(&net, &q)?;
        let bound = source_cut_bound(&net)?;
        Ok((rate > bound + RATE_TOL).then(|| {
            format!(
                "case {case} (T={}): rate {rate} > bound {bound}",
                net.num_nodes()
            )
        }))
    })?;
    Ok(CheckOutcome::new(
        "achievable rate <= source-cut bound",
        cases.len(),
        results.into_iter().flatten().collect(),
    ))
}

pub fn run_all(cfg: &VerifyConfig, settings: &Settings) -> Result<Vec<CheckOutcome>> {
    Ok(vec![
        alpha_suite(cfg)?,
        beta_suite(cfg)?,
        lambda_lemma_suite(cfg)?,
        monotonicity_suite(cfg, settings)?,
        achievability_suite(cfg, settings)?,
    ])
}
