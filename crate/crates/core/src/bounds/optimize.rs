//! Quantization-noise search.
//!
//! The rate is strictly decreasing in every `Q_j` and feasibility is
//! monotone (raising any `Q_j` never breaks a constraint), so the best
//! quantization sits on the feasibility frontier and bisection finds it.

use super::cf::{cf_feasible, cf_rate, FeasibilityReport, SubsetDiagnostic};
use super::cut::{min_cut_bound, source_cut_bound, MinCutReport};
use super::{CfOptions, QuantizationVector, SearchMode, RATE_TOL};
use crate::error::{Error, Result};
use crate::exec::Settings;
use crate::topology::NetworkSpec;

const DOUBLING_LIMIT: f64 = 1e18;
const MAX_HALVINGS: usize = 2000;
const MAX_BISECTIONS: usize = 200;
const MAX_SWEEPS: usize = 100;

#[derive(Clone, Debug, PartialEq)]
pub struct Optimized {
    pub q: QuantizationVector,
    /// Smallest feasible common level found by the uniform stage.
    pub uniform_level: f64,
    pub rate_bits: f64,
    pub feasibility: FeasibilityReport,
}

struct Frontier<'a> {
    net: &'a NetworkSpec,
    options: &'a CfOptions,
    settings: &'a Settings,
}

impl Frontier<'_> {
    fn feasible(&self, q: &QuantizationVector) -> Result<bool> {
        Ok(cf_feasible(self.net, q, self.options.quantifier, self.settings)?.feasible)
    }

    /// Shrinks `hi` (feasible) towards the frontier; `eval(x)` builds the
    /// candidate for level `x`.
    fn shrink(&self, mut hi: f64, eval: impl Fn(f64) -> QuantizationVector) -> Result<f64> {
        let mut lo = hi / 2.0;
        let mut halvings = 0;
        while self.feasible(&eval(lo))? {
            hi = lo;
            lo /= 2.0;
            halvings += 1;
            if halvings >= MAX_HALVINGS || lo <= f64::MIN_POSITIVE {
                lo = 0.0;
                break;
            }
        }
        let mut steps = 0;
        while hi - lo > self.options.tol * hi && steps < MAX_BISECTIONS {
            let mid = 0.5 * (lo + hi);
            if self.feasible(&eval(mid))? {
                hi = mid;
            } else {
                lo = mid;
            }
            steps += 1;
        }
        Ok(hi)
    }
}

/// Minimizes quantization noise on the feasibility frontier and returns the
/// resulting compress-forward rate.
pub fn optimize_quantization(
    net: &NetworkSpec,
    options: &CfOptions,
    settings: &Settings,
) -> Result<Optimized> {
    net.ensure_valid()?;
    settings.check_guard(net.num_nodes())?;
    if !(options.tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {}",
            options.tol
        )));
    }
    let relays = net.relays();
    let n = relays.len();
    let frontier = Frontier {
        net,
        options,
        settings,
    };

    if n == 0 {
        let q = QuantizationVector::uniform(0, 0.0);
        return Ok(Optimized {
            rate_bits: cf_rate(net, &q)?,
            feasibility: cf_feasible(net, &q, options.quantifier, settings)?,
            uniform_level: 0.0,
            q,
        });
    }

    let max_noise = (2..=net.num_nodes())
        .map(|j| net.noise(j))
        .fold(0.0, f64::max);
    let limit = DOUBLING_LIMIT * max_noise;
    let mut hi = max_noise;
    while !frontier.feasible(&QuantizationVector::uniform(n, hi))? {
        hi *= 2.0;
        if hi > limit {
            return Err(Error::Infeasible { limit });
        }
    }
    let uniform_level = frontier.shrink(hi, |x| QuantizationVector::uniform(n, x))?;
    let mut q = QuantizationVector::uniform(n, uniform_level);
    let mut rate = cf_rate(net, &q)?;

    if options.mode == SearchMode::CoordinateDescent {
        for _ in 0..MAX_SWEEPS {
            let mut improved = false;
            for &relay in &relays {
                let level = frontier.shrink(q.get(relay), |x| {
                    let mut trial = q.clone();
                    trial.set(relay, x);
                    trial
                })?;
                q.set(relay, level);
                let next = cf_rate(net, &q)?;
                if next - rate > options.tol {
                    improved = true;
                }
                rate = next;
            }
            if !improved {
                break;
            }
        }
    }

    Ok(Optimized {
        feasibility: cf_feasible(net, &q, options.quantifier, settings)?,
        uniform_level,
        rate_bits: rate,
        q,
    })
}

/// Bound, best compress-forward rate and diagnostics for one network.
#[derive(Clone, Debug, PartialEq)]
pub struct RateReport {
    pub options: CfOptions,
    pub upper_bound_bits: f64,
    pub min_cut: MinCutReport,
    pub cf_rate_bits: f64,
    pub q_star: QuantizationVector,
    pub uniform_level: f64,
    pub gap_bits: f64,
    pub feasibility: FeasibilityReport,
}

impl RateReport {
    pub fn binding_constraints(&self, k: usize) -> Vec<&SubsetDiagnostic> {
        self.feasibility.binding(k)
    }
}

pub fn analyze(net: &NetworkSpec, options: &CfOptions, settings: &Settings) -> Result<RateReport> {
    let upper_bound_bits = source_cut_bound(net)?;
    let min_cut = min_cut_bound(net, settings)?;
    let best = optimize_quantization(net, options, settings)?;
    let gap_bits = upper_bound_bits - best.rate_bits;
    if gap_bits < -RATE_TOL {
        return Err(Error::BoundViolation {
            rate: best.rate_bits,
            bound: upper_bound_bits,
        });
    }
    Ok(RateReport {
        options: *options,
        upper_bound_bits,
        min_cut,
        cf_rate_bits: best.rate_bits,
        q_star: best.q,
        uniform_level: best.uniform_level,
        gap_bits,
        feasibility: best.feasibility,
    })
}
