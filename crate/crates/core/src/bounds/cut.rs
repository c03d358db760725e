use std::fmt;

use super::CutSpec;
use crate::enumeration::subsets;
use crate::error::Result;
use crate::exec::{self, Settings};
use crate::gaussian::{conditional_mi_bits, Matrix};
use crate::topology::{NetworkSpec, NodeId, SOURCE};

/// Whether a cut value is the true cut rate or an independent-input estimate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutKind {
    Exact,
    Estimate,
}

impl fmt::Display for CutKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CutKind::Exact => "exact",
            CutKind::Estimate => "estimate",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CutRow {
    pub cut: CutSpec,
    pub bits: f64,
    pub kind: CutKind,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinCutReport {
    pub rows: Vec<CutRow>,
    pub min_bits: f64,
    pub argmin: CutSpec,
}

/// I(X_T ; Y_Tᶜ | X_Tᶜ) with independent Gaussian inputs and no quantization.
pub fn cut_rate(net: &NetworkSpec, cut: &CutSpec) -> Result<f64> {
    net.ensure_valid()?;
    let tx = cut.tx_side();
    let rx: Vec<NodeId> = (2..=net.num_nodes()).filter(|j| !tx.contains(j)).collect();
    cut_rate_unchecked(net, tx, &rx)
}

fn cut_rate_unchecked(net: &NetworkSpec, tx: &[NodeId], rx: &[NodeId]) -> Result<f64> {
    let gains = Matrix::from_fn(rx.len(), tx.len(), |r, c| net.gain(tx[c], rx[r]).sqrt());
    let powers: Vec<f64> = tx.iter().map(|&i| net.power(i)).collect();
    let noise: Vec<f64> = rx.iter().map(|&j| net.noise(j)).collect();
    conditional_mi_bits(&gains, &powers, &noise)
}

/// The broadcast cut around the source: the capacity upper bound.
pub fn source_cut_bound(net: &NetworkSpec) -> Result<f64> {
    cut_rate(net, &CutSpec::source_only())
}

/// Minimum over all `2^(T−2)` cuts; ties go to the earliest cut in subset
/// order, so the source cut wins a tie.
pub fn min_cut_bound(net: &NetworkSpec, settings: &Settings) -> Result<MinCutReport> {
    net.ensure_valid()?;
    settings.check_guard(net.num_nodes())?;
    let t = net.num_nodes();
    let cuts: Vec<Vec<NodeId>> = subsets(&net.relays())
        .map(|extra| {
            let mut side = vec![SOURCE];
            side.extend(extra);
            side
        })
        .collect();
    let rows = exec::try_map(settings.exec, &cuts, |tx| {
        let rx: Vec<NodeId> = (2..=t).filter(|j| !tx.contains(j)).collect();
        let bits = cut_rate_unchecked(net, tx, &rx)?;
        let cut = CutSpec::new(net, tx)?;
        let kind = if cut.is_source_cut() {
            CutKind::Exact
        } else {
            CutKind::Estimate
        };
        Ok(CutRow { cut, bits, kind })
    })?;
    let best = rows.iter().enumerate().fold(
        0,
        |best, (k, row)| if row.bits < rows[best].bits { k } else { best },
    );
    Ok(MinCutReport {
        min_bits: rows[best].bits,
        argmin: rows[best].cut.clone(),
        rows,
    })
}
