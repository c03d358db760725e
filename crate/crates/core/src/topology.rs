//! Network description: node roles, powers, noise variances and channel gains.
//!
//! Node ids run from 1 (the source) to `T` (the destination); ids `2..T`
//! are relays. Gains are power gains `λ_ij` from transmitter `i` to receiver
//! `j`, either computed from planar positions through path loss or supplied
//! as a matrix.

use std::fmt;

use thiserror::Error;

use crate::error::{Error, Result};

pub type NodeId = usize;

pub const SOURCE: NodeId = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Source,
    Relay,
    Destination,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Source => "source",
            Role::Relay => "relay",
            Role::Destination => "destination",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NodeSpec {
    pub id: NodeId,
    pub role: Role,
    /// Planar coordinates in meters.
    pub position: Option<[f64; 2]>,
    /// Linear transmit power (source and relays).
    pub power: Option<f64>,
    /// Linear receiver noise variance (relays and destination).
    pub noise: Option<f64>,
}

impl NodeSpec {
    pub fn source(id: NodeId, power: f64) -> Self {
        Self {
            id,
            role: Role::Source,
            position: None,
            power: Some(power),
            noise: None,
        }
    }

    pub fn relay(id: NodeId, power: f64, noise: f64) -> Self {
        Self {
            id,
            role: Role::Relay,
            position: None,
            power: Some(power),
            noise: Some(noise),
        }
    }

    pub fn destination(id: NodeId, noise: f64) -> Self {
        Self {
            id,
            role: Role::Destination,
            position: None,
            power: None,
            noise: Some(noise),
        }
    }

    pub fn at(mut self, x: f64, y: f64) -> Self {
        self.position = Some([x, y]);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathLossParams {
    pub kappa: f64,
    pub eta: f64,
}

impl Default for PathLossParams {
    fn default() -> Self {
        Self {
            kappa: 1.0,
            eta: 2.0,
        }
    }
}

/// `λ = κ d^{−η}` between two planar positions.
pub fn gain_from_geometry(a: [f64; 2], b: [f64; 2], params: PathLossParams) -> Result<f64> {
    let d = (a[0] - b[0]).hypot(a[1] - b[1]);
    if d == 0.0 {
        return Err(Error::CoincidentNodes);
    }
    Ok(params.kappa * d.powf(-params.eta))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GainModel {
    Geometry(PathLossParams),
    /// Supplied directly; may be asymmetric.
    Explicit,
}

/// One broken network invariant, naming the nodes involved.
#[derive(Clone, Debug, PartialEq, Error)]
pub enum Violation {
    #[error("network needs at least 2 nodes, has {count}")]
    TooFewNodes { count: usize },
    #[error("node at position {index} has id {id}, expected {expected}")]
    IdOutOfOrder {
        index: usize,
        id: NodeId,
        expected: NodeId,
    },
    #[error("network has no source")]
    MissingSource,
    #[error("multiple sources: nodes {ids:?}")]
    MultipleSources { ids: Vec<NodeId> },
    #[error("source must be node 1, found node {id}")]
    SourceNotFirst { id: NodeId },
    #[error("network has no destination")]
    MissingDestination,
    #[error("multiple destinations: nodes {ids:?}")]
    MultipleDestinations { ids: Vec<NodeId> },
    #[error("destination must be node {expected}, found node {id}")]
    DestinationNotLast { id: NodeId, expected: NodeId },
    #[error("node {id} ({role}) has no power")]
    MissingPower { id: NodeId, role: Role },
    #[error("destination node {id} cannot have a transmit power")]
    UnexpectedPower { id: NodeId },
    #[error("node {id} has invalid power {value}")]
    InvalidPower { id: NodeId, value: f64 },
    #[error("node {id} ({role}) has no noise variance")]
    MissingNoise { id: NodeId, role: Role },
    #[error("source node {id} cannot have a receiver noise")]
    UnexpectedNoise { id: NodeId },
    #[error("node {id} has non-positive noise {value}")]
    NonPositiveNoise { id: NodeId, value: f64 },
    #[error("node {id} has no position but gains come from geometry")]
    MissingPosition { id: NodeId },
    #[error("nodes {a} and {b} are coincident")]
    CoincidentNodes { a: NodeId, b: NodeId },
    #[error("path loss needs kappa > 0 and eta >= 2, got kappa={kappa}, eta={eta}")]
    InvalidPathLoss { kappa: f64, eta: f64 },
    #[error("gain from node {tx} to node {rx} is invalid: {value}")]
    InvalidGain { tx: NodeId, rx: NodeId, value: f64 },
    #[error("node {rx} does not hear the source (gain {value})")]
    SourceUnheard { rx: NodeId, value: f64 },
    #[error("relay power scale must be >= 1, got {gamma}")]
    InvalidScale { gamma: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct NetworkSpec {
    nodes: Vec<NodeSpec>,
    /// Row-major `T × T`, `gains[(tx-1)*T + (rx-1)] = λ_tx,rx`.
    gains: Vec<f64>,
    model: GainModel,
    relay_power_scale: f64,
}

impl NetworkSpec {
    /// Gains from positions. Nodes without positions, or coincident pairs,
    /// get NaN gains and are reported by [`NetworkSpec::validate`].
    pub fn from_geometry(nodes: Vec<NodeSpec>, params: PathLossParams) -> Self {
        let t = nodes.len();
        let mut gains = vec![0.0; t * t];
        for (i, a) in nodes.iter().enumerate() {
            for (j, b) in nodes.iter().enumerate() {
                if i == j {
                    continue;
                }
                gains[i * t + j] = match (a.position, b.position) {
                    (Some(pa), Some(pb)) => gain_from_geometry(pa, pb, params).unwrap_or(f64::NAN),
                    _ => f64::NAN,
                };
            }
        }
        Self {
            nodes,
            gains,
            model: GainModel::Geometry(params),
            relay_power_scale: 1.0,
        }
    }

    /// Gains supplied as a `T × T` matrix indexed `[tx][rx]`; the diagonal
    /// is ignored.
    pub fn from_gains(nodes: Vec<NodeSpec>, gains: &[Vec<f64>]) -> Result<Self> {
        let t = nodes.len();
        if gains.len() != t {
            return Err(Error::DimensionMismatch {
                expected: t,
                actual: gains.len(),
            });
        }
        let mut flat = Vec::with_capacity(t * t);
        for (i, row) in gains.iter().enumerate() {
            if row.len() != t {
                return Err(Error::DimensionMismatch {
                    expected: t,
                    actual: row.len(),
                });
            }
            flat.extend(
                row.iter()
                    .enumerate()
                    .map(|(j, &g)| if i == j { 0.0 } else { g }),
            );
        }
        Ok(Self {
            nodes,
            gains: flat,
            model: GainModel::Explicit,
            relay_power_scale: 1.0,
        })
    }

    /// Every off-diagonal gain equal to `gain`.
    pub fn uniform(nodes: Vec<NodeSpec>, gain: f64) -> Self {
        let t = nodes.len();
        let gains: Vec<Vec<f64>> = (0..t)
            .map(|i| (0..t).map(|j| if i == j { 0.0 } else { gain }).collect())
            .collect();
        Self::from_gains(nodes, &gains).expect("square by construction")
    }

    pub fn with_relay_power_scale(mut self, gamma: f64) -> Self {
        self.relay_power_scale = gamma;
        self
    }

    pub fn nodes(&self) -> &[NodeSpec] {
        &self.nodes
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn destination(&self) -> NodeId {
        self.nodes.len()
    }

    /// Relay ids `2..T`, ascending.
    pub fn relays(&self) -> Vec<NodeId> {
        (2..self.nodes.len()).collect()
    }

    pub fn num_relays(&self) -> usize {
        self.nodes.len().saturating_sub(2)
    }

    /// Ids that may act as receivers `r(m)`: relays and the destination.
    pub fn receivers(&self) -> Vec<NodeId> {
        (2..=self.nodes.len()).collect()
    }

    pub fn node(&self, id: NodeId) -> &NodeSpec {
        &self.nodes[id - 1]
    }

    pub fn gain_model(&self) -> GainModel {
        self.model
    }

    #[inline]
    pub fn gain(&self, tx: NodeId, rx: NodeId) -> f64 {
        self.gains[(tx - 1) * self.nodes.len() + (rx - 1)]
    }

    pub fn is_symmetric(&self) -> bool {
        let t = self.nodes.len();
        (1..=t).all(|i| (i + 1..=t).all(|j| self.gain(i, j) == self.gain(j, i)))
    }

    pub fn relay_power_scale(&self) -> f64 {
        self.relay_power_scale
    }

    /// Effective transmit power; relay powers include the scale factor.
    pub fn power(&self, id: NodeId) -> f64 {
        let node = self.node(id);
        let base = node.power.unwrap_or(0.0);
        match node.role {
            Role::Relay => base * self.relay_power_scale,
            _ => base,
        }
    }

    pub fn noise(&self, id: NodeId) -> f64 {
        self.node(id).noise.unwrap_or(f64::NAN)
    }

    /// Copy with every relay power multiplied by `gamma`.
    pub fn scaled(&self, gamma: f64) -> Result<Self> {
        if !(gamma >= 1.0) || !gamma.is_finite() {
            return Err(Error::InvalidScale(gamma));
        }
        let mut out = self.clone();
        out.relay_power_scale *= gamma;
        Ok(out)
    }

    /// All invariant violations; empty when the network is usable.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let t = self.nodes.len();
        if t < 2 {
            out.push(Violation::TooFewNodes { count: t });
        }
        for (index, node) in self.nodes.iter().enumerate() {
            if node.id != index + 1 {
                out.push(Violation::IdOutOfOrder {
                    index,
                    id: node.id,
                    expected: index + 1,
                });
            }
        }

        let with_role = |role: Role| -> Vec<NodeId> {
            self.nodes
                .iter()
                .filter(|n| n.role == role)
                .map(|n| n.id)
                .collect()
        };
        match with_role(Role::Source).as_slice() {
            [] => out.push(Violation::MissingSource),
            [id] if *id != SOURCE => out.push(Violation::SourceNotFirst { id: *id }),
            [_] => {}
            ids => out.push(Violation::MultipleSources { ids: ids.to_vec() }),
        }
        match with_role(Role::Destination).as_slice() {
            [] => out.push(Violation::MissingDestination),
            [id] if *id != t => out.push(Violation::DestinationNotLast {
                id: *id,
                expected: t,
            }),
            [_] => {}
            ids => out.push(Violation::MultipleDestinations { ids: ids.to_vec() }),
        }

        for node in &self.nodes {
            let id = node.id;
            match (node.role, node.power) {
                (Role::Destination, Some(_)) => out.push(Violation::UnexpectedPower { id }),
                (Role::Destination, None) => {}
                (role, None) => out.push(Violation::MissingPower { id, role }),
                (_, Some(p)) if !(p >= 0.0) || !p.is_finite() => {
                    out.push(Violation::InvalidPower { id, value: p })
                }
                _ => {}
            }
            match (node.role, node.noise) {
                (Role::Source, Some(_)) => out.push(Violation::UnexpectedNoise { id }),
                (Role::Source, None) => {}
                (role, None) => out.push(Violation::MissingNoise { id, role }),
                (_, Some(n)) if !(n > 0.0) || !n.is_finite() => {
                    out.push(Violation::NonPositiveNoise { id, value: n })
                }
                _ => {}
            }
        }

        let mut geometry_ok = true;
        if let GainModel::Geometry(p) = self.model {
            if !(p.kappa > 0.0) || !(p.eta >= 2.0) || !p.kappa.is_finite() || !p.eta.is_finite() {
                out.push(Violation::InvalidPathLoss {
                    kappa: p.kappa,
                    eta: p.eta,
                });
            }
            for node in &self.nodes {
                if node.position.is_none() {
                    geometry_ok = false;
                    out.push(Violation::MissingPosition { id: node.id });
                }
            }
            for (i, a) in self.nodes.iter().enumerate() {
                for b in &self.nodes[i + 1..] {
                    if let (Some(pa), Some(pb)) = (a.position, b.position) {
                        if pa == pb {
                            geometry_ok = false;
                            out.push(Violation::CoincidentNodes { a: a.id, b: b.id });
                        }
                    }
                }
            }
        }

        // Per-gain checks only make sense once the geometry is sound;
        // otherwise every NaN would be reported a second time.
        if geometry_ok {
            for i in 1..=t {
                for j in 1..=t {
                    if i == j {
                        continue;
                    }
                    let g = self.gain(i, j);
                    if !(g >= 0.0) || !g.is_finite() {
                        out.push(Violation::InvalidGain {
                            tx: i,
                            rx: j,
                            value: g,
                        });
                    } else if i == SOURCE && g <= 0.0 {
                        out.push(Violation::SourceUnheard { rx: j, value: g });
                    }
                }
            }
        }

        if !(self.relay_power_scale >= 1.0) || !self.relay_power_scale.is_finite() {
            out.push(Violation::InvalidScale {
                gamma: self.relay_power_scale,
            });
        }
        out
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let violations = self.validate();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidNetwork(violations))
        }
    }
}

/// Unit-gain network with `num_relays` relays: source power `p1`, relay base
/// power `relay_power`, all noise variances one.
pub fn reference_network(num_relays: usize, p1: f64, relay_power: f64) -> NetworkSpec {
    let t = num_relays + 2;
    let mut nodes = vec![NodeSpec::source(1, p1)];
    nodes.extend((2..t).map(|id| NodeSpec::relay(id, relay_power, 1.0)));
    nodes.push(NodeSpec::destination(t, 1.0));
    NetworkSpec::uniform(nodes, 1.0)
}
