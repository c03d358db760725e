//! The four subcommands. Each returns the text to emit; the caller decides
//! where it goes.

use std::fmt::Write as _;

use relaycap_core::bounds::{
    analyze, convergence_sweep, min_cut_bound, source_cut_bound, SweepRow,
};
use relaycap_core::verify::{run_all, CheckOutcome};
use relaycap_core::Settings;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::format::{sig12, table};

pub const SWEEP_HEADER: [&str; 6] = [
    "gamma",
    "upper_bound_bits",
    "cf_rate_bits",
    "gap_bits",
    "q_uniform",
    "feasible",
];

pub fn cmd_bound(cfg: &RunConfig, settings: &Settings) -> Result<String, CliError> {
    let net = cfg.require_network()?;
    let bound = source_cut_bound(net)?;
    let report = min_cut_bound(net, settings)?;
    let mut out = String::new();
    let summary = [
        ("source-cut bound (bits)", sig12(bound)),
        ("min-cut value (bits)", sig12(report.min_bits)),
        ("argmin cut", report.argmin.to_string()),
    ];
    for (k, v) in &summary {
        writeln!(out, "{k:<24} {v}").unwrap();
    }
    out.push('\n');
    let rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| vec![r.cut.to_string(), sig12(r.bits), r.kind.to_string()])
        .collect();
    out.push_str(&table(&["cut", "bits", "kind"], &rows));
    Ok(out)
}

pub fn cmd_cfrate(cfg: &RunConfig, settings: &Settings) -> Result<String, CliError> {
    let net = cfg.require_network()?;
    let report = analyze(net, &cfg.cf, settings)?;
    let mut out = String::new();
    let summary = [
        ("quantifier", report.options.quantifier.to_string()),
        ("search mode", report.options.mode.to_string()),
        ("upper bound (bits)", sig12(report.upper_bound_bits)),
        ("min-cut value (bits)", sig12(report.min_cut.min_bits)),
        ("cf rate (bits)", sig12(report.cf_rate_bits)),
        ("gap (bits)", sig12(report.gap_bits)),
        ("uniform level", sig12(report.uniform_level)),
    ];
    for (k, v) in &summary {
        writeln!(out, "{k:<21} {v}").unwrap();
    }
    out.push_str("\nquantization noise\n");
    let q_rows: Vec<Vec<String>> = report
        .q_star
        .iter()
        .map(|(relay, q)| vec![relay.to_string(), sig12(q)])
        .collect();
    out.push_str(&table(&["relay", "q"], &q_rows));

    let binding = report.binding_constraints(cfg.top_k);
    writeln!(out, "\nbinding constraints (top {})", binding.len()).unwrap();
    let b_rows: Vec<Vec<String>> = binding
        .iter()
        .map(|d| {
            vec![
                sig12(d.margin_bits),
                sig12(d.lhs_bits),
                sig12(d.rhs_bits),
                d.instance.to_string(),
            ]
        })
        .collect();
    out.push_str(&table(
        &["margin_bits", "lhs_bits", "rhs_bits", "constraint"],
        &b_rows,
    ));
    Ok(out)
}

pub fn sweep_rows(cfg: &RunConfig, settings: &Settings) -> Result<Vec<SweepRow>, CliError> {
    let net = cfg.require_network()?;
    let gammas = cfg
        .gammas
        .as_deref()
        .ok_or_else(|| CliError::Config("sweep needs sweep.gammas".into()))?;
    if gammas.is_empty() {
        return Err(CliError::Config("sweep.gammas is empty".into()));
    }
    Ok(convergence_sweep(net, gammas, &cfg.cf, settings)?)
}

/// CSV with a header row; infeasible rows leave the rate fields empty.
pub fn sweep_csv(rows: &[SweepRow]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SWEEP_HEADER)?;
    let opt = |x: Option<f64>| x.map(sig12).unwrap_or_default();
    for row in rows {
        w.write_record([
            sig12(row.gamma),
            sig12(row.upper_bound_bits),
            opt(row.cf_rate_bits),
            opt(row.gap_bits),
            opt(row.q_uniform),
            row.feasible().to_string(),
        ])?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.into_error()))
}

pub fn cmd_sweep(cfg: &RunConfig, settings: &Settings) -> Result<Vec<u8>, CliError> {
    sweep_csv(&sweep_rows(cfg, settings)?)
}

/// The pass/fail table and whether every check passed.
pub fn cmd_verify(cfg: &RunConfig, settings: &Settings) -> Result<(String, bool), CliError> {
    let outcomes = run_all(&cfg.verify, settings)?;
    Ok((
        verify_table(&outcomes),
        outcomes.iter().all(CheckOutcome::passed),
    ))
}

fn verify_table(outcomes: &[CheckOutcome]) -> String {
    let rows: Vec<Vec<String>> = outcomes
        .iter()
        .map(|o| {
            let failed = o.failures.len() + o.suppressed;
            vec![
                o.name.to_string(),
                o.cases.to_string(),
                failed.to_string(),
                if o.passed() { "PASS" } else { "FAIL" }.to_string(),
            ]
        })
        .collect();
    let mut out = table(&["check", "cases", "failed", "status"], &rows);
    for o in outcomes.iter().filter(|o| !o.passed()) {
        writeln!(out, "\n{} failures:", o.name).unwrap();
        for f in &o.failures {
            writeln!(out, "  {f}").unwrap();
        }
        if o.suppressed > 0 {
            writeln!(out, "  ... and {} more", o.suppressed).unwrap();
        }
    }
    out
}
