//! JSON run configuration.
//!
//! ```json
//! {
//!   "nodes": [
//!     {"id": 1, "role": "source", "position": [0, 0], "power": 1.0},
//!     {"id": 2, "role": "relay", "position": [5, 0], "power_db": 30, "noise": 1.0},
//!     {"id": 3, "role": "destination", "position": [10, 0], "noise_db": 0}
//!   ],
//!   "path_loss": {"kappa": 1.0, "eta": 2.0},
//!   "sweep": {"gammas": [1, 10, 100]},
//!   "cf": {"quantifier": "forall", "mode": "uniform", "tol": 1e-9, "top_k": 5},
//!   "verify": {"alpha_points": 21, "beta_points": 21, "lemma_cases": 500,
//!              "random_cases": 100, "seed": 1}
//! }
//! ```
//!
//! Either `path_loss` (with a position on every node) or a `T × T` `gains`
//! matrix indexed `[tx][rx]` must be given. Fields ending in `_db` are
//! converted with `10^(x/10)`.

use std::fs;
use std::path::Path;

use serde::Deserialize;

use relaycap_core::bounds::{CfOptions, Quantifier, SearchMode, BISECTION_TOL};
use relaycap_core::topology::{NetworkSpec, NodeSpec, PathLossParams, Role};
use relaycap_core::verify::VerifyConfig;

use crate::error::CliError;

pub const DEFAULT_TOP_K: usize = 5;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    nodes: Option<Vec<RawNode>>,
    path_loss: Option<RawPathLoss>,
    gains: Option<Vec<Vec<f64>>>,
    relay_power_scale: Option<f64>,
    sweep: Option<RawSweep>,
    #[serde(default)]
    cf: RawCf,
    #[serde(default)]
    verify: RawVerify,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNode {
    id: usize,
    role: RawRole,
    #[serde(default)]
    position: Option<[f64; 2]>,
    power: Option<f64>,
    power_db: Option<f64>,
    noise: Option<f64>,
    noise_db: Option<f64>,
}

#[derive(Debug, Deserialize, Clone, Copy)]
#[serde(rename_all = "lowercase")]
enum RawRole {
    Source,
    Relay,
    Destination,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPathLoss {
    kappa: f64,
    eta: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    gammas: Vec<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCf {
    quantifier: Option<String>,
    mode: Option<String>,
    tol: Option<f64>,
    top_k: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVerify {
    alpha_points: Option<usize>,
    beta_points: Option<usize>,
    lemma_cases: Option<usize>,
    random_cases: Option<usize>,
    seed: Option<u64>,
}

/// A parsed configuration. The network, when present, has passed
/// validation.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub network: Option<NetworkSpec>,
    pub gammas: Option<Vec<f64>>,
    pub cf: CfOptions,
    pub top_k: usize,
    pub verify: VerifyConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            network: None,
            gammas: None,
            cf: CfOptions::default(),
            top_k: DEFAULT_TOP_K,
            verify: VerifyConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let raw: RawConfig =
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        let network = raw
            .nodes
            .as_deref()
            .map(|nodes| build_network(nodes, &raw))
            .transpose()?;
        if network.is_none() && (raw.gains.is_some() || raw.path_loss.is_some()) {
            return Err(CliError::Config("gain model given without nodes".into()));
        }

        let mut cf = CfOptions::default();
        if let Some(q) = &raw.cf.quantifier {
            cf.quantifier = q.parse::<Quantifier>().map_err(config_err)?;
        }
        if let Some(m) = &raw.cf.mode {
            cf.mode = m.parse::<SearchMode>().map_err(config_err)?;
        }
        cf.tol = raw.cf.tol.unwrap_or(BISECTION_TOL);
        if !(cf.tol > 0.0 && cf.tol < 1.0) {
            return Err(CliError::Config(format!(
                "cf.tol must be in (0, 1), got {}",
                cf.tol
            )));
        }

        let defaults = VerifyConfig::default();
        let verify = VerifyConfig {
            alpha_points: raw.verify.alpha_points.unwrap_or(defaults.alpha_points),
            beta_points: raw.verify.beta_points.unwrap_or(defaults.beta_points),
            lemma_cases: raw.verify.lemma_cases.unwrap_or(defaults.lemma_cases),
            random_cases: raw.verify.random_cases.unwrap_or(defaults.random_cases),
            seed: raw.verify.seed.unwrap_or(defaults.seed),
            inject_fault: false,
        };
        if verify.alpha_points < 2 || verify.beta_points < 2 {
            return Err(CliError::Config(
                "verify grids need at least 2 points".into(),
            ));
        }

        Ok(Self {
            network,
            gammas: raw.sweep.map(|s| s.gammas),
            cf,
            top_k: raw.cf.top_k.unwrap_or(DEFAULT_TOP_K),
            verify,
        })
    }

    pub fn require_network(&self) -> Result<&NetworkSpec, CliError> {
        self.network
            .as_ref()
            .ok_or_else(|| CliError::Config("config has no nodes".into()))
    }
}

fn config_err(e: relaycap_core::Error) -> CliError {
    CliError::Config(e.to_string())
}

fn linear(
    id: usize,
    name: &str,
    lin: Option<f64>,
    db: Option<f64>,
) -> Result<Option<f64>, CliError> {
    match (lin, db) {
        (Some(_), Some(_)) => Err(CliError::Config(format!(
            "node {id}: give {name} or {name}_db, not both"
        ))),
        (Some(x), None) => Ok(Some(x)),
        (None, Some(x)) => Ok(Some(10f64.powf(x / 10.0))),
        (None, None) => Ok(None),
    }
}

fn build_network(raw_nodes: &[RawNode], raw: &RawConfig) -> Result<NetworkSpec, CliError> {
    let mut nodes = Vec::with_capacity(raw_nodes.len());
    for n in raw_nodes {
        nodes.push(NodeSpec {
            id: n.id,
            role: match n.role {
                RawRole::Source => Role::Source,
                RawRole::Relay => Role::Relay,
                RawRole::Destination => Role::Destination,
            },
            position: n.position,
            power: linear(n.id, "power", n.power, n.power_db)?,
            noise: linear(n.id, "noise", n.noise, n.noise_db)?,
        });
    }
    let net = match (&raw.path_loss, &raw.gains) {
        (Some(_), Some(_)) => {
            return Err(CliError::Config("give path_loss or gains, not both".into()))
        }
        (None, None) => return Err(CliError::Config("missing path_loss or gains".into())),
        (Some(p), None) => NetworkSpec::from_geometry(
            nodes,
            PathLossParams {
                kappa: p.kappa,
                eta: p.eta,
            },
        ),
        (None, Some(g)) => NetworkSpec::from_gains(nodes, g).map_err(config_err)?,
    };
    let net = match raw.relay_power_scale {
        Some(gamma) => net.with_relay_power_scale(gamma),
        None => net,
    };
    net.ensure_valid().map_err(config_err)?;
    Ok(net)
}

#[cfg(test)]
mod tests {
    use super::*;

    const THREE_NODE: &str = r#"{
        "nodes": [
            {"id": 1, "role": "source", "power": 1},
            {"id": 2, "role": "relay", "power": 1000, "noise": 1},
            {"id": 3, "role": "destination", "noise": 1}
        ],
        "gains": [[0, 1, 1], [1, 0, 1], [1, 1, 0]]
    }"#;

    #[test]
    fn parses_gain_form_with_defaults() {
        let cfg = RunConfig::parse(THREE_NODE).unwrap();
        let net = cfg.network.unwrap();
        assert_eq!(net.num_nodes(), 3);
        assert_eq!(net.power(2), 1000.0);
        assert_eq!(cfg.cf, CfOptions::default());
        assert_eq!(cfg.top_k, DEFAULT_TOP_K);
        assert!(cfg.gammas.is_none());
    }

    #[test]
    fn db_fields_convert_to_linear() {
        let text = THREE_NODE.replace(r#""power": 1000"#, r#""power_db": 30"#);
        let net = RunConfig::parse(&text).unwrap().network.unwrap();
        assert!((net.power(2) - 1000.0).abs() < 1e-9);
        let both = THREE_NODE.replace(r#""power": 1000"#, r#""power": 1, "power_db": 30"#);
        assert!(matches!(RunConfig::parse(&both), Err(CliError::Config(_))));
    }

    #[test]
    fn geometry_form() {
        let text = r#"{
            "nodes": [
                {"id": 1, "role": "source", "position": [0, 0], "power": 1},
                {"id": 2, "role": "relay", "position": [1, 0], "power": 10, "noise": 1},
                {"id": 3, "role": "destination", "position": [2, 0], "noise": 1}
            ],
            "path_loss": {"kappa": 1, "eta": 2}
        }"#;
        let net = RunConfig::parse(text).unwrap().network.unwrap();
        assert!((net.gain(1, 3) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn rejects_invalid_networks_with_violation_text() {
        let text = THREE_NODE.replace(r#""role": "relay""#, r#""role": "source""#);
        match RunConfig::parse(&text) {
            Err(CliError::Config(msg)) => assert!(msg.contains("multiple sources"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_fields_and_bad_options() {
        assert!(RunConfig::parse(r#"{"bogus": 1}"#).is_err());
        let bad = THREE_NODE.replacen('{', r#"{"cf": {"quantifier": "some"},"#, 1);
        assert!(RunConfig::parse(&bad).is_err());
        let bad = THREE_NODE.replacen('{', r#"{"cf": {"tol": 0},"#, 1);
        assert!(RunConfig::parse(&bad).is_err());
    }

    #[test]
    fn verify_only_config() {
        let cfg = RunConfig::parse(r#"{"verify": {"alpha_points": 5, "seed": 7}}"#).unwrap();
        assert!(cfg.network.is_none());
        assert_eq!(cfg.verify.alpha_points, 5);
        assert_eq!(cfg.verify.seed, 7);
        assert_eq!(cfg.verify.beta_points, VerifyConfig::default().beta_points);
        assert!(cfg.require_network().is_err());
    }
}
