//! Cut-set upper bounds and compress-forward achievable rates.
//!
//! All rates are in bits per channel use and assume independent Gaussian
//! inputs. The source cut `{1}` is exact (independent Gaussian inputs
//! maximize it); other cuts are evaluated for the same input law and are
//! labeled as estimates.

mod cf;
mod correlation;
mod cut;
mod optimize;
mod sweep;

pub use cf::{cf_feasible, cf_rate, cf_rhs_term, lambda_det, FeasibilityReport, SubsetDiagnostic};
pub use correlation::{
    symmetric_grid, verify_single_relay_alpha, verify_two_relay_beta_invariance, AlphaReport,
    AlphaRow, BetaReport, BetaRow, SingleRelayParams, TwoRelayParams,
};
pub use cut::{cut_rate, min_cut_bound, source_cut_bound, CutKind, CutRow, MinCutReport};
pub use optimize::{analyze, optimize_quantization, Optimized, RateReport};
pub use sweep::{convergence_sweep, SweepRow};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::topology::{NetworkSpec, NodeId, SOURCE};

/// Tolerance for comparing rates in bits.
pub const RATE_TOL: f64 = 1e-9;
/// Relative tolerance for bisection on quantization levels.
pub const BISECTION_TOL: f64 = 1e-9;

/// Transmitter side of a cut: contains the source, excludes the destination.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CutSpec {
    tx_side: Vec<NodeId>,
}

impl CutSpec {
    pub fn new(net: &NetworkSpec, tx_side: &[NodeId]) -> Result<Self> {
        let mut ids = tx_side.to_vec();
        ids.sort_unstable();
        ids.dedup();
        let t = net.num_nodes();
        if !ids.contains(&SOURCE) {
            return Err(Error::InvalidCut(
                "transmitter side must contain the source".into(),
            ));
        }
        if ids.contains(&t) {
            return Err(Error::InvalidCut(
                "transmitter side must exclude the destination".into(),
            ));
        }
        if let Some(bad) = ids.iter().find(|&&i| i == 0 || i > t) {
            return Err(Error::InvalidCut(format!("unknown node {bad}")));
        }
        Ok(Self { tx_side: ids })
    }

    pub fn source_only() -> Self {
        Self {
            tx_side: vec![SOURCE],
        }
    }

    pub fn tx_side(&self) -> &[NodeId] {
        &self.tx_side
    }

    pub fn is_source_cut(&self) -> bool {
        self.tx_side == [SOURCE]
    }
}

impl fmt::Display for CutSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<String> = self.tx_side.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", ids.join(","))
    }
}

/// Per-relay quantization noise variances, indexed by relay id `2..T`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantizationVector {
    values: Vec<f64>,
}

impl QuantizationVector {
    pub fn uniform(num_relays: usize, q: f64) -> Self {
        Self {
            values: vec![q; num_relays],
        }
    }

    /// `values[k]` belongs to relay `k + 2`.
    pub fn from_values(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, relay: NodeId) -> f64 {
        self.values[relay - 2]
    }

    pub fn set(&mut self, relay: NodeId, q: f64) {
        self.values[relay - 2] = q;
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        self.values.iter().enumerate().map(|(k, &q)| (k + 2, q))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            values: self.values.iter().map(|q| q * factor).collect(),
        }
    }

    /// The common level when every entry is equal.
    pub fn as_uniform(&self) -> Option<f64> {
        let first = *self.values.first()?;
        self.values.iter().all(|&q| q == first).then_some(first)
    }

    pub(crate) fn check(&self, net: &NetworkSpec) -> Result<()> {
        if self.values.len() != net.num_relays() {
            return Err(Error::DimensionMismatch {
                expected: net.num_relays(),
                actual: self.values.len(),
            });
        }
        match self.iter().find(|(_, q)| !(*q > 0.0) || !q.is_finite()) {
            Some((relay, value)) => Err(Error::NonPositiveQ { relay, value }),
            None => Ok(()),
        }
    }
}

/// How the (partition, assignment) choices combine for each relay subset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Quantifier {
    /// Every partition and every receiver assignment must satisfy it.
    #[default]
    ForAll,
    /// One satisfying partition and assignment per subset suffices.
    Exists,
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantifier::ForAll => "forall",
            Quantifier::Exists => "exists",
        })
    }
}

impl FromStr for Quantifier {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "forall" => Ok(Self::ForAll),
            "exists" => Ok(Self::Exists),
            other => Err(Error::InvalidParameter(format!(
                "unknown quantifier '{other}'"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SearchMode {
    #[default]
    UniformBisection,
    CoordinateDescent,
}

impl fmt::Display for SearchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchMode::UniformBisection => "uniform",
            SearchMode::CoordinateDescent => "coordinate",
        })
    }
}

impl FromStr for SearchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Self::UniformBisection),
            "coordinate" => Ok(Self::CoordinateDescent),
            other => Err(Error::InvalidParameter(format!(
                "unknown search mode '{other}'"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CfOptions {
    pub quantifier: Quantifier,
    pub mode: SearchMode,
    pub tol: f64,
}

impl Default for CfOptions {
    fn default() -> Self {
        Self {
            quantifier: Quantifier::ForAll,
            mode: SearchMode::UniformBisection,
            tol: BISECTION_TOL,
        }
    }
}
