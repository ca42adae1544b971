//! Experiment execution: single runs, ant-count sweeps, and seed replicates.
//!
//! Runs are independent and deterministic, so sweeps and replicate batches
//! are data-parallel. With the `parallel` feature (default) they fan out over
//! rayon; the `*_sequential` variants always run in-order on one thread and
//! produce identical results, entry for entry.

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;

use crate::aco::{run_until_convergence, AcoParams, ConvergenceReport};
use crate::error::{Error, Result};
use crate::model::{build_decision_graph, ChannelId, DecisionGraph};
use crate::scenario::Scenario;

/// Outcome of one sweep entry: either a report or the engine error it hit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepEntry {
    pub ant_count: u32,
    pub report: Option<ConvergenceReport>,
    pub error: Option<String>,
}

impl SweepEntry {
    pub fn converged(&self) -> bool {
        self.report
            .as_ref()
            .map(|r| r.winner.is_some())
            .unwrap_or(false)
    }
}

/// One summary line per sweep entry, in ant-count order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub ant_count: u32,
    pub winner: Option<ChannelId>,
    pub converged_at: Option<u32>,
    pub wall_time_ms: Option<f64>,
}

/// All runs of one ant-count sweep over a single scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub scenario_name: String,
    pub entries: Vec<SweepEntry>,
}

impl SweepReport {
    pub fn summary_rows(&self) -> Vec<SummaryRow> {
        self.entries
            .iter()
            .map(|e| SummaryRow {
                ant_count: e.ant_count,
                winner: e.report.as_ref().and_then(|r| r.winner.clone()),
                converged_at: e.report.as_ref().and_then(|r| r.converged_at),
                wall_time_ms: e
                    .report
                    .as_ref()
                    .map(|r| r.wall_time.as_secs_f64() * 1e3),
            })
            .collect()
    }

    pub fn all_converged(&self) -> bool {
        self.entries.iter().all(SweepEntry::converged)
    }
}

/// Build the scenario's decision graph.
pub fn scenario_graph(scenario: &Scenario) -> Result<DecisionGraph> {
    build_decision_graph(
        &scenario.call,
        &scenario.channels,
        &scenario.criteria.affinity,
    )
}

/// Run the scenario once with its own parameters.
pub fn run_scenario(scenario: &Scenario) -> Result<ConvergenceReport> {
    let graph = scenario_graph(scenario)?;
    run_until_convergence(&graph, &scenario.criteria, &scenario.aco)
}

fn validate_ant_counts(ant_counts: &[u32]) -> Result<()> {
    if ant_counts.is_empty() {
        return Err(Error::InvalidAntCounts {
            message: "at least one ant count is required".into(),
        });
    }
    if ant_counts.iter().any(|&c| c < 1) {
        return Err(Error::InvalidAntCounts {
            message: "every ant count must be >= 1".into(),
        });
    }
    if ant_counts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidAntCounts {
            message: "ant counts must be strictly increasing".into(),
        });
    }
    Ok(())
}

/// Parameters for sweep entry `index`: the requested ant count, and the
/// scenario's base seed offset by the entry index so entries are independent
/// yet reproducible.
fn entry_params(scenario: &Scenario, index: usize, ant_count: u32) -> AcoParams {
    AcoParams {
        ant_count,
        seed: scenario.aco.seed.wrapping_add(index as u64),
        ..scenario.aco.clone()
    }
}

fn run_entry(scenario: &Scenario, graph: &DecisionGraph, index: usize, ant_count: u32) -> SweepEntry {
    let params = entry_params(scenario, index, ant_count);
    match run_until_convergence(graph, &scenario.criteria, &params) {
        Ok(report) => SweepEntry {
            ant_count,
            report: Some(report),
            error: None,
        },
        Err(err) => SweepEntry {
            ant_count,
            report: None,
            error: Some(err.to_string()),
        },
    }
}

/// Sweep over ant counts, one run per count, always on the current thread.
pub fn run_sweep_sequential(scenario: &Scenario, ant_counts: &[u32]) -> Result<SweepReport> {
    validate_ant_counts(ant_counts)?;
    let graph = scenario_graph(scenario)?;
    let entries = ant_counts
        .iter()
        .enumerate()
        .map(|(i, &count)| run_entry(scenario, &graph, i, count))
        .collect();
    Ok(SweepReport {
        scenario_name: scenario.name.clone(),
        entries,
    })
}

/// Sweep over ant counts, one run per count, fanned out over rayon.
#[cfg(feature = "parallel")]
pub fn run_sweep(scenario: &Scenario, ant_counts: &[u32]) -> Result<SweepReport> {
    validate_ant_counts(ant_counts)?;
    let graph = scenario_graph(scenario)?;
    let entries = ant_counts
        .par_iter()
        .enumerate()
        .map(|(i, &count)| run_entry(scenario, &graph, i, count))
        .collect();
    Ok(SweepReport {
        scenario_name: scenario.name.clone(),
        entries,
    })
}

/// Sequential fallback when the `parallel` feature is disabled.
#[cfg(not(feature = "parallel"))]
pub fn run_sweep(scenario: &Scenario, ant_counts: &[u32]) -> Result<SweepReport> {
    run_sweep_sequential(scenario, ant_counts)
}

fn replicate(scenario: &Scenario, ant_count: u32, seed: u64) -> Result<ConvergenceReport> {
    let graph = scenario_graph(scenario)?;
    let params = AcoParams {
        ant_count,
        seed,
        ..scenario.aco.clone()
    };
    run_until_convergence(&graph, &scenario.criteria, &params)
}

/// Run the scenario once per seed at a fixed ant count, in seed order.
pub fn run_replicates_sequential(
    scenario: &Scenario,
    ant_count: u32,
    seeds: &[u64],
) -> Vec<Result<ConvergenceReport>> {
    seeds
        .iter()
        .map(|&seed| replicate(scenario, ant_count, seed))
        .collect()
}

/// Run the scenario once per seed at a fixed ant count, fanned out over
/// rayon; results stay in seed order.
#[cfg(feature = "parallel")]
pub fn run_replicates(
    scenario: &Scenario,
    ant_count: u32,
    seeds: &[u64],
) -> Vec<Result<ConvergenceReport>> {
    seeds
        .par_iter()
        .map(|&seed| replicate(scenario, ant_count, seed))
        .collect()
}

/// Sequential fallback when the `parallel` feature is disabled.
#[cfg(not(feature = "parallel"))]
pub fn run_replicates(
    scenario: &Scenario,
    ant_count: u32,
    seeds: &[u64],
) -> Vec<Result<ConvergenceReport>> {
    run_replicates_sequential(scenario, ant_count, seeds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::parse_scenario;

    fn two_channel_scenario() -> Scenario {
        parse_scenario(
            r#"
format_version = 1
name = "sweep-test"

[call]
traffic_type = "throughput_sensitive"
speed = 2.0
direction = 180.0
priority = 0.9
handoff_count = 1

[[channels]]
id = "strong"
class = "wimax"
time_to_drop = 60.0
packet_loss_rate = 0.005
latency = 15.0
throughput = 30.0
packet_drop_prob = 0.004
out_of_order_rate = 0.01
cost = 0.002
bandwidth = 30.0
availability = 1.0

[[channels]]
id = "weak"
class = "cdma"
time_to_drop = 20.0
packet_loss_rate = 0.05
latency = 120.0
throughput = 1.0
packet_drop_prob = 0.03
out_of_order_rate = 0.02
cost = 0.02
bandwidth = 1.0
availability = 1.0

[aco]
seed = 7
"#,
        )
        .unwrap()
    }

    #[test]
    fn sweep_produces_one_entry_per_count() {
        let s = two_channel_scenario();
        let report = run_sweep(&s, &[3, 4, 5]).unwrap();
        assert_eq!(report.entries.len(), 3);
        assert_eq!(
            report.entries.iter().map(|e| e.ant_count).collect::<Vec<_>>(),
            vec![3, 4, 5]
        );
    }

    #[test]
    fn sweep_single_count() {
        let s = two_channel_scenario();
        let report = run_sweep(&s, &[1]).unwrap();
        assert_eq!(report.entries.len(), 1);
        assert!(report.entries[0].converged());
    }

    #[test]
    fn sweep_rejects_empty_counts() {
        let s = two_channel_scenario();
        assert!(matches!(
            run_sweep(&s, &[]),
            Err(Error::InvalidAntCounts { .. })
        ));
    }

    #[test]
    fn sweep_rejects_zero_and_unordered_counts() {
        let s = two_channel_scenario();
        assert!(matches!(
            run_sweep(&s, &[0, 3]),
            Err(Error::InvalidAntCounts { .. })
        ));
        assert!(matches!(
            run_sweep(&s, &[5, 3]),
            Err(Error::InvalidAntCounts { .. })
        ));
        assert!(matches!(
            run_sweep(&s, &[3, 3]),
            Err(Error::InvalidAntCounts { .. })
        ));
    }

    #[test]
    fn parallel_and_sequential_sweeps_agree() {
        let s = two_channel_scenario();
        let counts = [3, 4, 5, 6, 7, 8];
        let par = run_sweep(&s, &counts).unwrap();
        let seq = run_sweep_sequential(&s, &counts).unwrap();
        assert_eq!(par.scenario_name, seq.scenario_name);
        for (a, b) in par.entries.iter().zip(&seq.entries) {
            assert_eq!(a.ant_count, b.ant_count);
            assert_eq!(a.error, b.error);
            let (ra, rb) = (a.report.as_ref().unwrap(), b.report.as_ref().unwrap());
            assert_eq!(ra.winner, rb.winner);
            assert_eq!(ra.converged_at, rb.converged_at);
            for (ta, tb) in ra.trace.iter().zip(&rb.trace) {
                assert_eq!(ta.tau, tb.tau);
                assert_eq!(ta.probabilities, tb.probabilities);
                assert_eq!(ta.choices, tb.choices);
            }
        }
    }

    #[test]
    fn replicates_agree_across_execution_modes() {
        let s = two_channel_scenario();
        let seeds: Vec<u64> = (0..16).collect();
        let par = run_replicates(&s, 4, &seeds);
        let seq = run_replicates_sequential(&s, 4, &seeds);
        for (a, b) in par.iter().zip(&seq) {
            let (ra, rb) = (a.as_ref().unwrap(), b.as_ref().unwrap());
            assert_eq!(ra.winner, rb.winner);
            assert_eq!(ra.converged_at, rb.converged_at);
        }
    }

    #[test]
    fn entry_seeds_offset_by_index() {
        let s = two_channel_scenario();
        let report = run_sweep(&s, &[3, 4]).unwrap();
        let seeds: Vec<u64> = report
            .entries
            .iter()
            .map(|e| e.report.as_ref().unwrap().params.seed)
            .collect();
        assert_eq!(seeds, vec![7, 8]);
    }

    #[test]
    fn engine_error_recorded_per_entry_not_propagated() {
        let mut s = two_channel_scenario();
        for ch in &mut s.channels {
            ch.availability = 0.0;
        }
        let report = run_sweep(&s, &[3, 4]).unwrap();
        assert_eq!(report.entries.len(), 2);
        for entry in &report.entries {
            assert!(entry.report.is_none());
            assert!(entry.error.as_ref().unwrap().contains("no feasible channel"));
        }
        assert!(!report.all_converged());
    }
}
