use super::cut::source_cut_bound;
use super::optimize::optimize_quantization;
use super::{CfOptions, RATE_TOL};
use crate::error::{Error, Result};
use crate::exec::{self, Settings};
use crate::topology::NetworkSpec;

/// One relay-power scale. Rate fields are `None` when no feasible
/// quantization exists at that scale.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub gamma: f64,
    pub upper_bound_bits: f64,
    pub cf_rate_bits: Option<f64>,
    pub gap_bits: Option<f64>,
    pub q_uniform: Option<f64>,
}

impl SweepRow {
    pub fn feasible(&self) -> bool {
        self.cf_rate_bits.is_some()
    }
}

/// Bound and best compress-forward rate as every relay power is scaled by
/// each `gamma`. The bound does not depend on relay power; the gap should
/// shrink as the relays get louder.
pub fn convergence_sweep(
    net: &NetworkSpec,
    gammas: &[f64],
    options: &CfOptions,
    settings: &Settings,
) -> Result<Vec<SweepRow>> {
    net.ensure_valid()?;
    settings.check_guard(net.num_nodes())?;
    if gammas.is_empty() {
        return Err(Error::InvalidParameter("gamma list is empty".into()));
    }
    if let Some(&bad) = gammas.iter().find(|g| !(**g >= 1.0) || !g.is_finite()) {
        return Err(Error::InvalidScale(bad));
    }
    if gammas.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter("gammas must be ascending".into()));
    }

    exec::try_map(settings.exec, gammas, |&gamma| {
        let scaled = net.scaled(gamma)?;
        let upper_bound_bits = source_cut_bound(&scaled)?;
        match optimize_quantization(&scaled, options, settings) {
            Ok(best) => {
                let gap = upper_bound_bits - best.rate_bits;
                if gap < -RATE_TOL {
                    return Err(Error::BoundViolation {
                        rate: best.rate_bits,
                        bound: upper_bound_bits,
                    });
                }
                Ok(SweepRow {
                    gamma,
                    upper_bound_bits,
                    cf_rate_bits: Some(best.rate_bits),
                    gap_bits: Some(gap),
                    q_uniform: Some(best.uniform_level),
                })
            }
            Err(Error::Infeasible { .. }) => Ok(SweepRow {
                gamma,
                upper_bound_bits,
                cf_rate_bits: None,
                gap_bits: None,
                q_uniform: None,
            }),
            Err(e) => Err(e),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{analyze, Quantifier};
    use crate::topology::{reference_network, NodeSpec};

    #[test]
    fn unit_scale_matches_single_analysis() {
        let net = reference_network(2, 1.0, 1.0);
        let opts = CfOptions::default();
        let rows = convergence_sweep(&net, &[1.0], &opts, &Settings::default()).unwrap();
        let report = analyze(&net, &opts, &Settings::default()).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].cf_rate_bits, Some(report.cf_rate_bits));
        assert_eq!(rows[0].upper_bound_bits, report.upper_bound_bits);
    }

    #[test]
    fn gap_shrinks_with_relay_power() {
        let net = reference_network(2, 1.0, 1.0);
        let gammas: Vec<f64> = (0..7).map(|k| 10f64.powi(k)).collect();
        for quantifier in [Quantifier::ForAll, Quantifier::Exists] {
            let opts = CfOptions {
                quantifier,
                ..CfOptions::default()
            };
            let rows = convergence_sweep(&net, &gammas, &opts, &Settings::default()).unwrap();
            let gaps: Vec<f64> = rows.iter().map(|r| r.gap_bits.unwrap()).collect();
            assert!(gaps.windows(2).all(|w| w[1] <= w[0]));
            assert!(rows
                .iter()
                .all(|r| (r.upper_bound_bits - 1.0).abs() < 1e-12));
        }
    }

    #[test]
    fn infeasible_rows_do_not_abort() {
        let net = NetworkSpec::uniform(
            vec![
                NodeSpec::source(1, 1.0),
                NodeSpec::relay(2, 0.0, 1.0),
                NodeSpec::destination(3, 1.0),
            ],
            1.0,
        );
        let rows = convergence_sweep(
            &net,
            &[1.0, 10.0],
            &CfOptions::default(),
            &Settings::default(),
        )
        .unwrap();
        assert!(rows.iter().all(|r| !r.feasible()));
    }

    #[test]
    fn rejects_bad_gamma_lists() {
        let net = reference_network(1, 1.0, 1.0);
        let (o, s) = (CfOptions::default(), Settings::default());
        assert!(convergence_sweep(&net, &[], &o, &s).is_err());
        assert!(convergence_sweep(&net, &[10.0, 1.0], &o, &s).is_err());
        assert_eq!(
            convergence_sweep(&net, &[0.5], &o, &s),
            Err(Error::InvalidScale(0.5))
        );
    }
}
