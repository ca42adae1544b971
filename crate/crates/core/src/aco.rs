//! The ant colony iteration loop over the star decision graph: transition
//! probabilities, ant sampling, pheromone deposit, per-edge decay, and
//! convergence detection.
//!
//! One run is strictly single-threaded and fully determined by the scenario,
//! the parameters, and the seed. Randomness comes from a ChaCha8 stream
//! seeded with [`AcoParams::seed`]; ants sample edges by inverse-CDF lookup
//! over the transition probabilities, one uniform draw in [0, 1) per ant.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::criteria::{
    composite_score, derive_evaporation, derive_visibility, normalize_criteria, CriteriaConfig,
    EvaporationVector, ScoreVector,
};
use crate::error::{Error, Result};
use crate::model::{ChannelId, DecisionGraph};

/// The deterministic generator driving every run.
pub type RunRng = ChaCha8Rng;

/// Tunable parameters of one optimization run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AcoParams {
    /// Pheromone importance exponent, >= 0.
    pub alpha: f64,
    /// Visibility importance exponent, >= 0.
    pub beta: f64,
    /// Deposit constant, > 0.
    pub q: f64,
    /// Initial pheromone on every edge, > 0.
    pub tau0: f64,
    /// Pheromone floor, 0 < tau_min <= tau0.
    pub tau_min: f64,
    /// Ants released per iteration, >= 1.
    pub ant_count: u32,
    /// Hard iteration cap, >= 1.
    pub max_iterations: u32,
    /// A channel wins once its probability stays at or above this for
    /// `convergence_window` consecutive iterations; in (0.5, 1].
    pub convergence_threshold: f64,
    /// Consecutive iterations required at or above the threshold, >= 1.
    pub convergence_window: u32,
    /// Seed of the run's random stream.
    pub seed: u64,
}

impl Default for AcoParams {
    fn default() -> Self {
        AcoParams {
            alpha: 1.0,
            beta: 1.0,
            q: 1.0,
            tau0: 1.0,
            tau_min: 1e-6,
            ant_count: 6,
            max_iterations: 10_000,
            convergence_threshold: 0.95,
            convergence_window: 5,
            seed: 42,
        }
    }
}

impl AcoParams {
    pub fn validate(&self) -> Result<()> {
        let fail = |message: &str| {
            Err(Error::InvalidParams {
                message: message.to_string(),
            })
        };
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return fail("alpha must be finite and >= 0");
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return fail("beta must be finite and >= 0");
        }
        if !(self.q > 0.0 && self.q.is_finite()) {
            return fail("q must be finite and > 0");
        }
        if !(self.tau0 > 0.0 && self.tau0.is_finite()) {
            return fail("tau0 must be finite and > 0");
        }
        if !(self.tau_min > 0.0 && self.tau_min <= self.tau0) {
            return fail("tau_min must satisfy 0 < tau_min <= tau0");
        }
        if self.ant_count < 1 {
            return fail("ant_count must be >= 1");
        }
        if self.max_iterations < 1 {
            return fail("max_iterations must be >= 1");
        }
        if !(self.convergence_threshold > 0.5 && self.convergence_threshold <= 1.0) {
            return fail("convergence_threshold must lie in (0.5, 1]");
        }
        if self.convergence_window < 1 {
            return fail("convergence_window must be >= 1");
        }
        Ok(())
    }
}

/// Mutable optimization state: per-edge pheromone, evaporation, visibility.
#[derive(Debug, Clone, PartialEq)]
pub struct PheromoneState {
    /// Pheromone intensity per edge, always >= tau_min.
    pub tau: Vec<f64>,
    /// Evaporation rate per edge, fixed for the run.
    pub rho: Vec<f64>,
    /// Visibility per edge (availability), fixed for the run.
    pub eta: Vec<f64>,
    /// Completed iterations.
    pub iteration: u32,
}

impl PheromoneState {
    /// Uniform-pheromone initial state.
    pub fn new(tau0: f64, rho: EvaporationVector, eta: Vec<f64>) -> Self {
        assert_eq!(rho.rho.len(), eta.len(), "rho/eta length mismatch");
        PheromoneState {
            tau: vec![tau0; eta.len()],
            rho: rho.rho,
            eta,
            iteration: 0,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.tau.len()
    }
}

/// One iteration's record: pheromone after the update, the probabilities the
/// ants sampled from, each ant's chosen edge, and elapsed time since the run
/// started.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationTrace {
    pub iteration: u32,
    pub tau: Vec<f64>,
    pub probabilities: Vec<f64>,
    pub choices: Vec<usize>,
    #[serde(rename = "elapsed_ms", serialize_with = "ser_duration_ms")]
    pub elapsed: Duration,
}

fn ser_duration_ms<S: serde::Serializer>(
    d: &Duration,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1e3)
}

/// Outcome of one full run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    /// Winning channel, or None when max_iterations ran out.
    pub winner: Option<ChannelId>,
    /// Iteration at which the winner was declared; None iff winner is None.
    pub converged_at: Option<u32>,
    #[serde(rename = "wall_time_ms", serialize_with = "ser_duration_ms")]
    pub wall_time: Duration,
    pub trace: Vec<IterationTrace>,
    pub params: AcoParams,
    /// Channel ids in edge order, echoed from the decision graph.
    pub channels: Vec<ChannelId>,
}

/// Transition probability per edge: tau^alpha * eta^beta, normalized over the
/// feasible edges (eta > 0). Infeasible edges get exactly 0.
pub fn transition_probabilities(state: &PheromoneState, params: &AcoParams) -> Result<Vec<f64>> {
    let mut weights = vec![0.0; state.edge_count()];
    let mut total = 0.0;
    let mut feasible = 0usize;
    for (i, weight) in weights.iter_mut().enumerate() {
        if state.eta[i] > 0.0 {
            feasible += 1;
            *weight = state.tau[i].powf(params.alpha) * state.eta[i].powf(params.beta);
            total += *weight;
        }
    }
    if feasible == 0 {
        return Err(Error::NoFeasibleChannel);
    }
    if total > 0.0 {
        for w in &mut weights {
            *w /= total;
        }
    } else {
        // All feasible weights underflowed; fall back to uniform over them.
        let p = 1.0 / feasible as f64;
        for (i, w) in weights.iter_mut().enumerate() {
            *w = if state.eta[i] > 0.0 { p } else { 0.0 };
        }
    }
    Ok(weights)
}

/// Draw one edge per ant by inverse-CDF over `probabilities`.
///
/// Each ant consumes exactly one uniform f64 from the stream and picks the
/// first edge whose cumulative probability strictly exceeds it, so an edge
/// with probability 0 can never be chosen.
pub fn sample_edges(probabilities: &[f64], ant_count: u32, rng: &mut RunRng) -> Vec<usize> {
    let last_feasible = probabilities
        .iter()
        .rposition(|&p| p > 0.0)
        .expect("sample_edges needs at least one positive probability");
    (0..ant_count)
        .map(|_| {
            let draw: f64 = rng.random();
            let mut cumulative = 0.0;
            for (i, &p) in probabilities.iter().enumerate() {
                cumulative += p;
                if cumulative > draw {
                    return i;
                }
            }
            // Rounding left the final cumulative sum a hair under 1.
            last_feasible
        })
        .collect()
}

/// Pheromone added per edge by this iteration's ants.
///
/// On the star graph every tour is a single edge, so the classic tour length
/// is replaced by L = 1/u with u the edge's score normalized to the best
/// score: each ant deposits q * u on its chosen edge, and better channels
/// receive proportionally more.
pub fn compute_deposit(choices: &[usize], scores: &ScoreVector, params: &AcoParams) -> Vec<f64> {
    let max = scores.max_score();
    let mut deposits = vec![0.0; scores.len()];
    for &edge in choices {
        deposits[edge] += params.q * (scores.scores[edge] / max);
    }
    deposits
}

/// Add deposits onto the pheromone vector. Leaves the iteration counter
/// untouched.
pub fn apply_deposits(state: &mut PheromoneState, deposits: &[f64]) {
    for (tau, delta) in state.tau.iter_mut().zip(deposits) {
        *tau += delta;
    }
}

/// Decay every edge by its own evaporation rate, clamped to the floor.
pub fn evaporate(state: &mut PheromoneState, params: &AcoParams) {
    for (tau, rho) in state.tau.iter_mut().zip(&state.rho) {
        *tau = ((1.0 - rho) * *tau).max(params.tau_min);
    }
}

/// Run one iteration: probabilities, sampling, deposit computation, decay,
/// then deposit application. Returns the trace row for the iteration.
pub fn step(
    state: &mut PheromoneState,
    scores: &ScoreVector,
    params: &AcoParams,
    rng: &mut RunRng,
    run_start: Instant,
) -> Result<IterationTrace> {
    let probabilities = transition_probabilities(state, params)?;
    let choices = sample_edges(&probabilities, params.ant_count, rng);
    let deposits = compute_deposit(&choices, scores, params);
    evaporate(state, params);
    apply_deposits(state, &deposits);
    state.iteration += 1;
    Ok(IterationTrace {
        iteration: state.iteration,
        tau: state.tau.clone(),
        probabilities,
        choices,
        elapsed: run_start.elapsed(),
    })
}

/// Declare a winner once one edge's probability stayed at or above the
/// threshold for the last `window` consecutive rows. Returns the edge index.
pub fn detect_convergence(trace: &[IterationTrace], threshold: f64, window: u32) -> Option<usize> {
    let window = window as usize;
    if window == 0 || trace.len() < window {
        return None;
    }
    let tail = &trace[trace.len() - window..];
    let edges = tail[0].probabilities.len();
    (0..edges).find(|&j| tail.iter().all(|row| row.probabilities[j] >= threshold))
}

/// Full optimization run: derive scores, evaporation, and visibility from the
/// graph once, then iterate until convergence or the iteration cap.
pub fn run_until_convergence(
    graph: &DecisionGraph,
    criteria: &CriteriaConfig,
    params: &AcoParams,
) -> Result<ConvergenceReport> {
    params.validate()?;
    let norm = normalize_criteria(graph.edges(), criteria)?;
    let scores = composite_score(&norm);
    let rho = derive_evaporation(&scores, criteria.rho_min, criteria.rho_max)?;
    let eta = derive_visibility(graph.edges());
    if eta.iter().all(|&e| e <= 0.0) {
        return Err(Error::NoFeasibleChannel);
    }

    let mut state = PheromoneState::new(params.tau0, rho, eta);
    let mut rng = RunRng::seed_from_u64(params.seed);
    let mut trace = Vec::new();
    let mut winner = None;
    let mut converged_at = None;
    let run_start = Instant::now();

    for _ in 0..params.max_iterations {
        let row = step(&mut state, &scores, params, &mut rng, run_start)?;
        trace.push(row);
        if let Some(edge) =
            detect_convergence(&trace, params.convergence_threshold, params.convergence_window)
        {
            winner = Some(graph.channels()[edge].clone());
            converged_at = Some(state.iteration);
            break;
        }
    }

    Ok(ConvergenceReport {
        winner,
        converged_at,
        wall_time: run_start.elapsed(),
        trace,
        params: params.clone(),
        channels: graph.channels().to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::SCALE_FLOOR;

    fn state_of(tau: Vec<f64>, eta: Vec<f64>) -> PheromoneState {
        let n = tau.len();
        PheromoneState {
            tau,
            rho: vec![0.1; n],
            eta,
            iteration: 0,
        }
    }

    fn scores_of(scores: Vec<f64>) -> ScoreVector {
        ScoreVector {
            benefit_product: scores.clone(),
            cost_product: vec![1.0; scores.len()],
            scores,
        }
    }

    fn params() -> AcoParams {
        AcoParams::default()
    }

    #[test]
    fn probabilities_uniform_under_symmetry() {
        let s = state_of(vec![1.0; 3], vec![1.0; 3]);
        let p = transition_probabilities(&s, &params()).unwrap();
        for v in &p {
            assert!((v - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn probabilities_hand_computed_ratio() {
        let s = state_of(vec![4.0, 2.0], vec![1.0, 1.0]);
        let p = transition_probabilities(&s, &params()).unwrap();
        assert!((p[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((p[1] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn probabilities_zero_visibility_excluded() {
        let s = state_of(vec![1.0; 3], vec![1.0, 0.0, 1.0]);
        let p = transition_probabilities(&s, &params()).unwrap();
        assert_eq!(p[1], 0.0);
        assert!((p[0] - 0.5).abs() < 1e-15);
        assert!((p[2] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn probabilities_error_when_nothing_visible() {
        let s = state_of(vec![1.0; 2], vec![0.0, 0.0]);
        assert!(matches!(
            transition_probabilities(&s, &params()),
            Err(Error::NoFeasibleChannel)
        ));
    }

    #[test]
    fn probabilities_sum_to_one() {
        let s = state_of(vec![0.3, 7.0, 1e-6, 2.4], vec![0.2, 1.0, 0.9, 0.0]);
        let p = transition_probabilities(&s, &params()).unwrap();
        let sum: f64 = p.iter().sum();
        assert!((sum - 1.0).abs() < 1e-9);
        assert_eq!(p[3], 0.0);
    }

    #[test]
    fn sampling_single_edge_is_forced() {
        let mut rng = RunRng::seed_from_u64(7);
        let picks = sample_edges(&[1.0], 5, &mut rng);
        assert_eq!(picks, vec![0; 5]);
    }

    #[test]
    fn sampling_never_picks_zero_mass() {
        let mut rng = RunRng::seed_from_u64(11);
        let picks = sample_edges(&[0.0, 1.0], 64, &mut rng);
        assert!(picks.iter().all(|&i| i == 1));
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let mut a = RunRng::seed_from_u64(123);
        let mut b = RunRng::seed_from_u64(123);
        let pa = sample_edges(&[0.5, 0.5], 8, &mut a);
        let pb = sample_edges(&[0.5, 0.5], 8, &mut b);
        assert_eq!(pa, pb);
    }

    #[test]
    fn sampling_golden_sequence() {
        // Frozen from the documented generator (ChaCha8, one f64 per ant,
        // inverse-CDF). Any change to the stream or the lookup breaks this.
        let mut rng = RunRng::seed_from_u64(1234);
        let picks = sample_edges(&[0.5, 0.5], 8, &mut rng);
        assert_eq!(picks, vec![0, 1, 1, 0, 0, 0, 1, 0]);
    }

    #[test]
    fn deposit_unchosen_edge_gets_zero() {
        let sv = scores_of(vec![2.0, 1.0]);
        let d = compute_deposit(&[0, 0], &sv, &params());
        assert_eq!(d[1], 0.0);
    }

    #[test]
    fn deposit_identity_case() {
        let sv = scores_of(vec![3.0]);
        let d = compute_deposit(&[0], &sv, &params());
        assert_eq!(d, vec![1.0]); // q=1, u=1
    }

    #[test]
    fn deposit_two_ants_same_edge_sum() {
        let sv = scores_of(vec![2.0, 1.0]);
        // Edge 1 has u = 0.5; two ants there deposit 2 * (1 * 0.5) = 1.0.
        let d = compute_deposit(&[1, 1], &sv, &params());
        assert_eq!(d, vec![0.0, 1.0]);
    }

    #[test]
    fn apply_deposits_is_additive() {
        let mut s = state_of(vec![1.0, 1.0], vec![1.0, 1.0]);
        apply_deposits(&mut s, &[0.0, 0.0]);
        assert_eq!(s.tau, vec![1.0, 1.0]);
        apply_deposits(&mut s, &[0.5, 0.25]);
        assert_eq!(s.tau, vec![1.5, 1.25]);
        // Halves twice equal wholes once.
        let mut twice = state_of(vec![1.0], vec![1.0]);
        apply_deposits(&mut twice, &[0.25]);
        apply_deposits(&mut twice, &[0.25]);
        let mut once = state_of(vec![1.0], vec![1.0]);
        apply_deposits(&mut once, &[0.5]);
        assert_eq!(twice.tau, once.tau);
    }

    #[test]
    fn evaporate_scales_by_edge_rate() {
        let mut s = state_of(vec![1.0, 1.0], vec![1.0, 1.0]);
        s.rho = vec![0.1, 0.0];
        evaporate(&mut s, &params());
        assert!((s.tau[0] - 0.9).abs() < 1e-15);
        assert_eq!(s.tau[1], 1.0);
    }

    #[test]
    fn evaporate_respects_floor() {
        let p = params();
        let mut s = state_of(vec![p.tau_min, p.tau_min], vec![1.0, 1.0]);
        s.rho = vec![0.5, 0.5];
        evaporate(&mut s, &p);
        assert_eq!(s.tau, vec![p.tau_min, p.tau_min]);
    }

    #[test]
    fn detect_convergence_fires_on_full_window() {
        let rows: Vec<IterationTrace> = [0.96, 0.97, 0.99]
            .iter()
            .enumerate()
            .map(|(i, &p)| IterationTrace {
                iteration: i as u32 + 1,
                tau: vec![1.0, 1.0],
                probabilities: vec![1.0 - p, p],
                choices: vec![1],
                elapsed: Duration::ZERO,
            })
            .collect();
        assert_eq!(detect_convergence(&rows, 0.95, 3), Some(1));
    }

    #[test]
    fn detect_convergence_needs_every_row_above_threshold() {
        let probs = [0.99, 0.90, 0.99];
        let rows: Vec<IterationTrace> = probs
            .iter()
            .enumerate()
            .map(|(i, &p)| IterationTrace {
                iteration: i as u32 + 1,
                tau: vec![1.0, 1.0],
                probabilities: vec![1.0 - p, p],
                choices: vec![1],
                elapsed: Duration::ZERO,
            })
            .collect();
        assert_eq!(detect_convergence(&rows, 0.95, 3), None);
    }

    #[test]
    fn detect_convergence_needs_full_window() {
        let rows = vec![IterationTrace {
            iteration: 1,
            tau: vec![1.0],
            probabilities: vec![1.0],
            choices: vec![0],
            elapsed: Duration::ZERO,
        }];
        assert_eq!(detect_convergence(&rows, 0.95, 3), None);
    }

    #[test]
    fn step_single_edge_probability_one_and_tau_grows() {
        let mut state = PheromoneState::new(
            1.0,
            EvaporationVector { rho: vec![0.02] },
            vec![1.0],
        );
        let scores = scores_of(vec![4.0]);
        let p = params();
        let mut rng = RunRng::seed_from_u64(1);
        let row = step(&mut state, &scores, &p, &mut rng, Instant::now()).unwrap();
        assert_eq!(row.probabilities, vec![1.0]);
        assert_eq!(row.iteration, 1);
        // q/L = 6 ants * 1.0 each; decay removes 0.02 of tau0.
        assert!(state.tau[0] > 1.0);
    }

    #[test]
    fn step_is_deterministic() {
        let build = || {
            PheromoneState::new(
                1.0,
                EvaporationVector {
                    rho: vec![0.02, 0.3, 0.5],
                },
                vec![1.0, 1.0, 1.0],
            )
        };
        let scores = scores_of(vec![4.0, 2.0, 1.0]);
        let p = params();
        let mut s1 = build();
        let mut s2 = build();
        let mut r1 = RunRng::seed_from_u64(99);
        let mut r2 = RunRng::seed_from_u64(99);
        for _ in 0..50 {
            let a = step(&mut s1, &scores, &p, &mut r1, Instant::now()).unwrap();
            let b = step(&mut s2, &scores, &p, &mut r2, Instant::now()).unwrap();
            assert_eq!(a.tau, b.tau);
            assert_eq!(a.probabilities, b.probabilities);
            assert_eq!(a.choices, b.choices);
        }
        assert_eq!(s1, s2);
    }

    #[test]
    fn pheromone_floor_holds_through_long_runs() {
        let mut state = PheromoneState::new(
            1.0,
            EvaporationVector {
                rho: vec![0.02, 0.5],
            },
            vec![1.0, 1.0],
        );
        // Edge 1 is hopeless: tiny score means negligible deposits.
        let scores = scores_of(vec![1.0, SCALE_FLOOR]);
        let p = params();
        let mut rng = RunRng::seed_from_u64(5);
        for _ in 0..2000 {
            step(&mut state, &scores, &p, &mut rng, Instant::now()).unwrap();
            for &t in &state.tau {
                assert!(t >= p.tau_min);
            }
        }
    }
}
