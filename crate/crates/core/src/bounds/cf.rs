//! Compress-forward rate and the quantization feasibility constraints.
//!
//! For every nonempty relay subset `S` the quantized observations must be
//! describable over the relay links:
//!
//! ```text
//! ½ log₂(Λ(S) / Π_{i∈S} Q_i)  ≤  Σ_m ½ log₂(1 + Σ_{i∈B_m} λ_{i,r(m)} P_i / (λ_{1,r(m)} P_1 + N_{r(m)}))
//! ```
//!
//! The left side is the information the compressed observations carry about
//! the raw ones; each right-side term is what block `B_m` can push to its
//! receiver `r(m)` while the source signal acts as interference.

use super::{Quantifier, QuantizationVector};
use crate::enumeration::{partitions, subsets, ConstraintInstance};
use crate::error::{Error, Result};
use crate::exec::{self, Settings};
use crate::gaussian::{conditional_mi_bits, half_log2_1p, Matrix, SymMatrix, DEFAULT_PD_EPSILON};
use crate::topology::{NetworkSpec, NodeId, SOURCE};

/// The deciding constraint for one relay subset.
#[derive(Clone, Debug, PartialEq)]
pub struct SubsetDiagnostic {
    pub instance: ConstraintInstance,
    /// ½ log₂(Λ(S) / Π Q).
    pub lhs_bits: f64,
    /// Σ of link terms for the chosen partition and receivers.
    pub rhs_bits: f64,
    /// `rhs − lhs`; the subset is satisfied when this is ≥ 0.
    pub margin_bits: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FeasibilityReport {
    pub quantifier: Quantifier,
    pub feasible: bool,
    /// One entry per nonempty subset, in subset order.
    pub subsets: Vec<SubsetDiagnostic>,
}

impl FeasibilityReport {
    pub fn min_margin_bits(&self) -> f64 {
        self.subsets
            .iter()
            .map(|d| d.margin_bits)
            .fold(f64::INFINITY, f64::min)
    }

    /// The `k` subsets with the smallest margin, ties in subset order.
    pub fn binding(&self, k: usize) -> Vec<&SubsetDiagnostic> {
        let mut sorted: Vec<&SubsetDiagnostic> = self.subsets.iter().collect();
        sorted.sort_by(|a, b| a.margin_bits.total_cmp(&b.margin_bits));
        sorted.truncate(k);
        sorted
    }
}

fn link_snr(net: &NetworkSpec, block: &[NodeId], r: NodeId) -> f64 {
    let interference = net.gain(SOURCE, r) * net.power(SOURCE) + net.noise(r);
    let signal: f64 = block
        .iter()
        .filter(|&&i| i != r)
        .map(|&i| net.gain(i, r) * net.power(i))
        .sum();
    signal / interference
}

/// ½ log₂[1 + Σ_{i∈B} λ_ir P_i / (λ_1r P_1 + N_r)] in bits.
pub fn cf_rhs_term(net: &NetworkSpec, block: &[NodeId], r: NodeId) -> Result<f64> {
    net.ensure_valid()?;
    let t = net.num_nodes();
    if !(2..=t).contains(&r) || block.contains(&r) {
        return Err(Error::InvalidReceiver {
            receiver: r,
            block: block.to_vec(),
        });
    }
    if let Some(bad) = block.iter().find(|&&i| !(2..t).contains(&i)) {
        return Err(Error::InvalidParameter(format!(
            "block member {bad} is not a relay"
        )));
    }
    Ok(half_log2_1p(link_snr(net, block, r)))
}

fn lambda_matrix(net: &NetworkSpec, s: &[NodeId], q: &QuantizationVector) -> SymMatrix {
    let p1 = net.power(SOURCE);
    SymMatrix::from_fn(s.len(), |a, b| {
        let (i, k) = (s[a], s[b]);
        let common = (net.gain(SOURCE, i) * net.gain(SOURCE, k)).sqrt() * p1;
        if a == b {
            common + net.noise(i) + q.get(i)
        } else {
            common
        }
    })
}

fn check_subset(net: &NetworkSpec, s: &[NodeId]) -> Result<()> {
    if s.is_empty() {
        return Err(Error::InvalidParameter(
            "relay subset must be nonempty".into(),
        ));
    }
    if let Some(bad) = s.iter().find(|&&i| !(2..net.num_nodes()).contains(&i)) {
        return Err(Error::InvalidParameter(format!(
            "subset member {bad} is not a relay"
        )));
    }
    Ok(())
}

/// Λ(D): determinant of the covariance of the quantized observations of `s`
/// given all relay inputs.
pub fn lambda_det(net: &NetworkSpec, s: &[NodeId], q: &QuantizationVector) -> Result<f64> {
    net.ensure_valid()?;
    q.check(net)?;
    check_subset(net, s)?;
    lambda_matrix(net, s, q).det()
}

fn subset_diagnostic(
    net: &NetworkSpec,
    q: &QuantizationVector,
    s: &[NodeId],
    candidates: &[NodeId],
    quantifier: Quantifier,
) -> Result<SubsetDiagnostic> {
    // Λ / Π Q = det(I + Q^{-1/2} (Λ − diag Q) Q^{-1/2}). Built term by term
    // so the margin stays meaningful when Q dwarfs the noise.
    let p1 = net.power(SOURCE);
    let whitened = SymMatrix::from_fn(s.len(), |a, b| {
        let (i, k) = (s[a], s[b]);
        let common = (net.gain(SOURCE, i) * net.gain(SOURCE, k)).sqrt() * p1;
        let inner = if a == b {
            common + net.noise(i)
        } else {
            common
        };
        inner / (q.get(i) * q.get(k)).sqrt()
    });
    let lhs = 0.5 * whitened.log2_det_plus_identity(DEFAULT_PD_EPSILON)?;

    let prefer = |candidate: f64, incumbent: f64| match quantifier {
        Quantifier::ForAll => candidate < incumbent,
        Quantifier::Exists => candidate > incumbent,
    };

    // The per-block receiver choices are independent, so the extremal
    // assignment for a partition is the per-block extremum.
    let mut best: Option<(f64, Vec<Vec<NodeId>>, Vec<NodeId>)> = None;
    for partition in partitions(s) {
        let mut total = 0.0;
        let mut assignment = Vec::with_capacity(partition.len());
        for block in &partition {
            let mut pick: Option<(f64, NodeId)> = None;
            for &r in candidates.iter().filter(|r| !block.contains(r)) {
                let term = half_log2_1p(link_snr(net, block, r));
                if pick.is_none_or(|(v, _)| prefer(term, v)) {
                    pick = Some((term, r));
                }
            }
            let (term, r) = pick.ok_or_else(|| Error::EmptyChoice {
                block: block.clone(),
            })?;
            total += term;
            assignment.push(r);
        }
        if best.as_ref().is_none_or(|(v, _, _)| prefer(total, *v)) {
            best = Some((total, partition, assignment));
        }
    }
    let (rhs, partition, assignment) = best.expect("nonempty subset has a partition");
    Ok(SubsetDiagnostic {
        instance: ConstraintInstance {
            s: s.to_vec(),
            partition,
            assignment,
        },
        lhs_bits: lhs,
        rhs_bits: rhs,
        margin_bits: rhs - lhs,
    })
}

/// Checks every nonempty relay subset against the constraint family.
pub fn cf_feasible(
    net: &NetworkSpec,
    q: &QuantizationVector,
    quantifier: Quantifier,
    settings: &Settings,
) -> Result<FeasibilityReport> {
    net.ensure_valid()?;
    q.check(net)?;
    settings.check_guard(net.num_nodes())?;
    let candidates = net.receivers();
    let family: Vec<Vec<NodeId>> = subsets(&net.relays()).skip(1).collect();
    let diagnostics = exec::try_map(settings.exec, &family, |s| {
        subset_diagnostic(net, q, s, &candidates, quantifier)
    })?;
    Ok(FeasibilityReport {
        quantifier,
        feasible: diagnostics.iter().all(|d| d.margin_bits >= 0.0),
        subsets: diagnostics,
    })
}

/// I(X_1 ; Ỹ_R, Y_T | X_R) in bits, where relay observations carry the
/// extra quantization noise `Q_j`. Feasibility is not checked here.
pub fn cf_rate(net: &NetworkSpec, q: &QuantizationVector) -> Result<f64> {
    net.ensure_valid()?;
    q.check(net)?;
    let mut receivers = net.relays();
    receivers.push(net.destination());
    let gains = Matrix::from_fn(receivers.len(), 1, |r, _| {
        net.gain(SOURCE, receivers[r]).sqrt()
    });
    let noise: Vec<f64> = receivers
        .iter()
        .map(|&j| {
            if j == net.destination() {
                net.noise(j)
            } else {
                net.noise(j) + q.get(j)
            }
        })
        .collect();
    conditional_mi_bits(&gains, &[net.power(SOURCE)], &noise)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::constraint_family;
    use crate::topology::{reference_network, NodeSpec};

    fn single_relay(p2: f64) -> NetworkSpec {
        NetworkSpec::uniform(
            vec![
                NodeSpec::source(1, 1.0),
                NodeSpec::relay(2, p2, 1.0),
                NodeSpec::destination(3, 1.0),
            ],
            1.0,
        )
    }

    fn asymmetric() -> NetworkSpec {
        let nodes = vec![
            NodeSpec::source(1, 1.7),
            NodeSpec::relay(2, 40.0, 0.8),
            NodeSpec::relay(3, 15.0, 1.4),
            NodeSpec::relay(4, 90.0, 0.6),
            NodeSpec::destination(5, 1.1),
        ];
        let g = vec![
            vec![0.0, 0.3, 0.5, 0.2, 0.1],
            vec![0.3, 0.0, 1.2, 0.7, 0.9],
            vec![0.5, 0.4, 0.0, 1.5, 0.6],
            vec![0.2, 0.8, 1.1, 0.0, 2.0],
            vec![0.1, 0.9, 0.6, 2.0, 0.0],
        ];
        NetworkSpec::from_gains(nodes, &g).unwrap()
    }

    #[test]
    fn rhs_term_examples() {
        let net = reference_network(2, 1.0, 1.0);
        let v = cf_rhs_term(&net, &[2], 3).unwrap();
        assert!((v - 0.5 * 1.5f64.log2()).abs() < 1e-15);
        assert!(matches!(
            cf_rhs_term(&net, &[2], 2),
            Err(Error::InvalidReceiver { receiver: 2, .. })
        ));
        assert!(cf_rhs_term(&net, &[2], 1).is_err());
    }

    #[test]
    fn rhs_term_grows_with_relay_power() {
        let mut last = 0.0;
        for gamma in [1.0, 10.0, 1e3, 1e6] {
            let net = reference_network(2, 1.0, 1.0).scaled(gamma).unwrap();
            let v = cf_rhs_term(&net, &[2, 3], 4).unwrap();
            assert!(v > last);
            last = v;
        }
    }

    #[test]
    fn lambda_det_special_cases() {
        let nodes = reference_network(3, 0.0, 1.0).nodes().to_vec();
        let net = NetworkSpec::uniform(nodes, 1.0);
        let q = QuantizationVector::from_values(vec![0.5, 1.5, 2.5]);
        let d = lambda_det(&net, &[2, 3, 4], &q).unwrap();
        assert!((d - 1.5 * 2.5 * 3.5).abs() < 1e-12);

        let net = asymmetric();
        let q = QuantizationVector::from_values(vec![0.2, 0.3, 0.4]);
        let d = lambda_det(&net, &[3], &q).unwrap();
        assert!((d - (0.5 * 1.7 + 1.4 + 0.3)).abs() < 1e-14);
        assert!(lambda_det(&net, &[], &q).is_err());
        assert!(lambda_det(&net, &[5], &q).is_err());
    }

    #[test]
    fn lambda_det_matches_determinant_lemma() {
        let net = asymmetric();
        let q = QuantizationVector::from_values(vec![0.2, 0.03, 4.0]);
        let s = [2, 3, 4];
        let p1 = net.power(1);
        let prod: f64 = s.iter().map(|&i| net.noise(i) + q.get(i)).product();
        let sum: f64 = s
            .iter()
            .map(|&i| net.gain(1, i) / (net.noise(i) + q.get(i)))
            .sum();
        let lemma = prod * (1.0 + p1 * sum);
        let d = lambda_det(&net, &s, &q).unwrap();
        assert!(((d - lemma) / lemma).abs() < 1e-12);
    }

    #[test]
    fn single_relay_threshold() {
        // Q(1 + 500) >= 2 + Q  <=>  Q >= 0.004.
        let net = single_relay(1e3);
        let s = Settings::default();
        for quantifier in [Quantifier::ForAll, Quantifier::Exists] {
            let ok =
                cf_feasible(&net, &QuantizationVector::uniform(1, 0.01), quantifier, &s).unwrap();
            assert!(ok.feasible);
            let edge_hi = QuantizationVector::uniform(1, 0.004 * (1.0 + 1e-9));
            assert!(
                cf_feasible(&net, &edge_hi, quantifier, &s)
                    .unwrap()
                    .feasible
            );
            let edge_lo = QuantizationVector::uniform(1, 0.004 * (1.0 - 1e-9));
            assert!(
                !cf_feasible(&net, &edge_lo, quantifier, &s)
                    .unwrap()
                    .feasible
            );
        }
    }

    #[test]
    fn huge_quantization_is_feasible_in_both_modes() {
        let net = asymmetric();
        let q = QuantizationVector::uniform(3, 1e9);
        for quantifier in [Quantifier::ForAll, Quantifier::Exists] {
            assert!(
                cf_feasible(&net, &q, quantifier, &Settings::default())
                    .unwrap()
                    .feasible
            );
        }
    }

    #[test]
    fn silent_relays_are_never_feasible() {
        let nodes = vec![
            NodeSpec::source(1, 1.0),
            NodeSpec::relay(2, 0.0, 1.0),
            NodeSpec::relay(3, 0.0, 1.0),
            NodeSpec::destination(4, 1.0),
        ];
        let net = NetworkSpec::uniform(nodes, 1.0);
        for q in [1e-3, 1.0, 1e12] {
            let report = cf_feasible(
                &net,
                &QuantizationVector::uniform(2, q),
                Quantifier::Exists,
                &Settings::default(),
            )
            .unwrap();
            assert!(!report.feasible);
        }
    }

    #[test]
    fn rejects_non_positive_q() {
        let net = single_relay(10.0);
        let q = QuantizationVector::uniform(1, 0.0);
        assert!(matches!(
            cf_feasible(&net, &q, Quantifier::ForAll, &Settings::default()),
            Err(Error::NonPositiveQ { relay: 2, .. })
        ));
        assert!(cf_rate(&net, &q).is_err());
    }

    #[test]
    fn per_block_extremum_matches_brute_force() {
        let net = asymmetric();
        let q = QuantizationVector::from_values(vec![0.05, 0.2, 0.01]);
        let cands = net.receivers();
        for quantifier in [Quantifier::ForAll, Quantifier::Exists] {
            let report = cf_feasible(&net, &q, quantifier, &Settings::sequential()).unwrap();
            for diag in &report.subsets {
                let totals: Vec<f64> = constraint_family(&net.relays(), &cands)
                    .filter(|c| c.s == diag.instance.s)
                    .map(|c| {
                        c.partition
                            .iter()
                            .zip(&c.assignment)
                            .map(|(b, &r)| cf_rhs_term(&net, b, r).unwrap())
                            .sum()
                    })
                    .collect();
                let extreme = match quantifier {
                    Quantifier::ForAll => totals.iter().copied().fold(f64::INFINITY, f64::min),
                    Quantifier::Exists => totals.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                };
                assert!((diag.rhs_bits - extreme).abs() < 1e-12);
                let chosen: f64 = diag
                    .instance
                    .partition
                    .iter()
                    .zip(&diag.instance.assignment)
                    .map(|(b, &r)| cf_rhs_term(&net, b, r).unwrap())
                    .sum();
                assert!((chosen - diag.rhs_bits).abs() < 1e-12);
                assert!(diag.instance.is_well_formed(&cands));
            }
        }
    }

    #[test]
    fn cf_rate_closed_form_and_limits() {
        let net = asymmetric();
        let q = QuantizationVector::from_values(vec![0.3, 0.05, 2.0]);
        let p1 = net.power(1);
        let snr = net.gain(1, 5) / net.noise(5)
            + net
                .relays()
                .iter()
                .map(|&j| net.gain(1, j) / (net.noise(j) + q.get(j)))
                .sum::<f64>();
        let closed = 0.5 * (1.0 + p1 * snr).log2();
        assert!((cf_rate(&net, &q).unwrap() - closed).abs() < 1e-12);

        let erased = cf_rate(&net, &QuantizationVector::uniform(3, 1e15)).unwrap();
        let dest_only = 0.5 * (1.0 + net.gain(1, 5) * p1 / net.noise(5)).log2();
        assert!((erased - dest_only).abs() < 1e-12);

        let silent = NetworkSpec::uniform(reference_network(2, 0.0, 1.0).nodes().to_vec(), 1.0);
        assert_eq!(
            cf_rate(&silent, &QuantizationVector::uniform(2, 1.0)).unwrap(),
            0.0
        );
    }

    #[test]
    fn exec_policies_agree() {
        let net = asymmetric();
        let q = QuantizationVector::from_values(vec![0.05, 0.2, 0.01]);
        let seq = cf_feasible(&net, &q, Quantifier::ForAll, &Settings::sequential()).unwrap();
        let default = cf_feasible(&net, &q, Quantifier::ForAll, &Settings::default()).unwrap();
        assert_eq!(seq, default);
    }
}
