//! Criteria normalization, the multiplicative composite score, per-edge
//! evaporation-rate derivation, availability-gated visibility, and the
//! exhaustive ranking oracle used as deterministic ground truth.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AffinityTable, ChannelId, DecisionGraph, EdgeCriteria};

/// Lower clamp for normalized scale values. Keeps every product factor
/// strictly positive so the score quotient stays finite.
pub const SCALE_FLOOR: f64 = 1e-6;

/// The twelve criteria that can enter the composite product. Availability is
/// deliberately absent: it gates visibility instead of scaling the score.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    TrafficAffinity,
    Speed,
    TimeToDrop,
    HandoffCount,
    PacketLoss,
    Latency,
    Throughput,
    PacketDrop,
    OutOfOrder,
    Priority,
    Cost,
    Bandwidth,
}

pub const CRITERIA_COUNT: usize = 12;

impl Criterion {
    pub const ALL: [Criterion; CRITERIA_COUNT] = [
        Criterion::TrafficAffinity,
        Criterion::Speed,
        Criterion::TimeToDrop,
        Criterion::HandoffCount,
        Criterion::PacketLoss,
        Criterion::Latency,
        Criterion::Throughput,
        Criterion::PacketDrop,
        Criterion::OutOfOrder,
        Criterion::Priority,
        Criterion::Cost,
        Criterion::Bandwidth,
    ];

    /// Raw value of this criterion on one edge.
    pub fn raw(self, edge: &EdgeCriteria) -> f64 {
        match self {
            Criterion::TrafficAffinity => edge.traffic_affinity,
            Criterion::Speed => edge.speed,
            Criterion::TimeToDrop => edge.time_to_drop,
            Criterion::HandoffCount => edge.handoff_count,
            Criterion::PacketLoss => edge.packet_loss,
            Criterion::Latency => edge.latency,
            Criterion::Throughput => edge.throughput,
            Criterion::PacketDrop => edge.packet_drop,
            Criterion::OutOfOrder => edge.out_of_order,
            Criterion::Priority => edge.priority,
            Criterion::Cost => edge.cost,
            Criterion::Bandwidth => edge.bandwidth,
        }
    }

    /// Whether this criterion divides the score (higher raw value is worse).
    ///
    /// Time-to-drop sits on the cost side by default; `invert_td` flips it to
    /// the benefit side for scenarios that prefer the intuitive direction.
    pub fn is_cost(self, invert_td: bool) -> bool {
        match self {
            Criterion::TimeToDrop => !invert_td,
            Criterion::PacketLoss
            | Criterion::Latency
            | Criterion::PacketDrop
            | Criterion::OutOfOrder
            | Criterion::Cost => true,
            Criterion::TrafficAffinity
            | Criterion::Speed
            | Criterion::HandoffCount
            | Criterion::Throughput
            | Criterion::Priority
            | Criterion::Bandwidth => false,
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// Per-criterion exponents for the composite product. A weight of 0 removes
/// the criterion (its factor becomes 1); the default of 1 uses the plain
/// normalized scale. Out-of-order delivery defaults to 0 — opt in per
/// scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CriteriaWeights {
    pub traffic_affinity: f64,
    pub speed: f64,
    pub time_to_drop: f64,
    pub handoff_count: f64,
    pub packet_loss: f64,
    pub latency: f64,
    pub throughput: f64,
    pub packet_drop: f64,
    pub out_of_order: f64,
    pub priority: f64,
    pub cost: f64,
    pub bandwidth: f64,
}

impl CriteriaWeights {
    pub fn get(&self, criterion: Criterion) -> f64 {
        match criterion {
            Criterion::TrafficAffinity => self.traffic_affinity,
            Criterion::Speed => self.speed,
            Criterion::TimeToDrop => self.time_to_drop,
            Criterion::HandoffCount => self.handoff_count,
            Criterion::PacketLoss => self.packet_loss,
            Criterion::Latency => self.latency,
            Criterion::Throughput => self.throughput,
            Criterion::PacketDrop => self.packet_drop,
            Criterion::OutOfOrder => self.out_of_order,
            Criterion::Priority => self.priority,
            Criterion::Cost => self.cost,
            Criterion::Bandwidth => self.bandwidth,
        }
    }
}

impl Default for CriteriaWeights {
    fn default() -> Self {
        CriteriaWeights {
            traffic_affinity: 1.0,
            speed: 1.0,
            time_to_drop: 1.0,
            handoff_count: 1.0,
            packet_loss: 1.0,
            latency: 1.0,
            throughput: 1.0,
            packet_drop: 1.0,
            out_of_order: 0.0,
            priority: 1.0,
            cost: 1.0,
            bandwidth: 1.0,
        }
    }
}

/// Scenario-level criteria configuration: weights, affinity table, the
/// evaporation-rate bounds, and the time-to-drop direction flag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CriteriaConfig {
    pub weights: CriteriaWeights,
    pub affinity: AffinityTable,
    pub rho_min: f64,
    pub rho_max: f64,
    pub invert_td: bool,
}

impl Default for CriteriaConfig {
    fn default() -> Self {
        CriteriaConfig {
            weights: CriteriaWeights::default(),
            affinity: AffinityTable::default(),
            rho_min: 0.02,
            rho_max: 0.5,
            invert_td: false,
        }
    }
}

/// Per-edge normalized scale values in [SCALE_FLOOR, 1], plus the config that
/// produced them (the score step needs the weights and the td direction).
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedCriteria {
    /// `scales[edge][criterion.index()]`.
    scales: Vec<[f64; CRITERIA_COUNT]>,
    config: CriteriaConfig,
}

impl NormalizedCriteria {
    /// Assemble from raw parts; test and oracle construction hook.
    pub fn from_parts(scales: Vec<[f64; CRITERIA_COUNT]>, config: CriteriaConfig) -> Self {
        NormalizedCriteria { scales, config }
    }

    pub fn scale(&self, edge: usize, criterion: Criterion) -> f64 {
        self.scales[edge][criterion.index()]
    }

    pub fn edge_count(&self) -> usize {
        self.scales.len()
    }

    pub fn config(&self) -> &CriteriaConfig {
        &self.config
    }
}

/// One positive score per edge plus the two product halves it came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreVector {
    pub scores: Vec<f64>,
    pub benefit_product: Vec<f64>,
    pub cost_product: Vec<f64>,
}

impl ScoreVector {
    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    /// Largest score; scores are guaranteed positive and finite.
    pub fn max_score(&self) -> f64 {
        self.scores.iter().copied().fold(f64::MIN, f64::max)
    }
}

/// Per-edge pheromone evaporation rates, each within [rho_min, rho_max].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaporationVector {
    pub rho: Vec<f64>,
}

/// Scale each criterion to [SCALE_FLOOR, 1] by dividing by its per-criterion
/// maximum across edges. A criterion that is zero (or negative) everywhere
/// collapses to the floor on every edge.
///
/// Benefit and cost criteria are normalized identically; the direction is
/// realized later by numerator/denominator placement in [`composite_score`].
pub fn normalize_criteria(
    edges: &[EdgeCriteria],
    config: &CriteriaConfig,
) -> Result<NormalizedCriteria> {
    if edges.is_empty() {
        return Err(Error::EmptyEdgeSet);
    }
    let mut scales = vec![[SCALE_FLOOR; CRITERIA_COUNT]; edges.len()];
    for criterion in Criterion::ALL {
        let max = edges
            .iter()
            .map(|e| criterion.raw(e))
            .fold(f64::NEG_INFINITY, f64::max);
        if max > 0.0 {
            for (i, edge) in edges.iter().enumerate() {
                scales[i][criterion.index()] = (criterion.raw(edge) / max).max(SCALE_FLOOR);
            }
        }
    }
    Ok(NormalizedCriteria {
        scales,
        config: config.clone(),
    })
}

fn weighted_factor(scale: f64, weight: f64) -> f64 {
    // weight 1 must reproduce the scale bit-for-bit; weight 0 drops out.
    if weight == 1.0 {
        scale
    } else if weight == 0.0 {
        1.0
    } else {
        scale.powf(weight)
    }
}

/// Composite score per edge: the product of benefit factors divided by the
/// product of cost factors, every factor a weighted normalized scale.
pub fn composite_score(norm: &NormalizedCriteria) -> ScoreVector {
    let invert_td = norm.config.invert_td;
    let n = norm.edge_count();
    let mut benefit_product = Vec::with_capacity(n);
    let mut cost_product = Vec::with_capacity(n);
    let mut scores = Vec::with_capacity(n);
    for edge in 0..n {
        let mut benefit = 1.0;
        let mut cost = 1.0;
        for criterion in Criterion::ALL {
            let factor = weighted_factor(
                norm.scale(edge, criterion),
                norm.config.weights.get(criterion),
            );
            if criterion.is_cost(invert_td) {
                cost *= factor;
            } else {
                benefit *= factor;
            }
        }
        benefit_product.push(benefit);
        cost_product.push(cost);
        scores.push(benefit / cost);
    }
    ScoreVector {
        scores,
        benefit_product,
        cost_product,
    }
}

/// Map scores onto per-edge evaporation rates, antitone in score.
///
/// With u = S / max(S) in (0, 1], rho = rho_min + (rho_max - rho_min)(1 - u):
/// the best edge gets exactly rho_min, and a better score never gets a larger
/// rho. Steady-state pheromone is proportional to 1/rho, so pheromone ends up
/// increasing in score.
pub fn derive_evaporation(
    scores: &ScoreVector,
    rho_min: f64,
    rho_max: f64,
) -> Result<EvaporationVector> {
    if !(rho_min > 0.0 && rho_min < rho_max && rho_max < 1.0) {
        return Err(Error::InvalidRhoBounds {
            min: rho_min,
            max: rho_max,
        });
    }
    let max = scores.max_score();
    let rho = scores
        .scores
        .iter()
        .map(|s| rho_min + (rho_max - rho_min) * (1.0 - s / max))
        .collect();
    Ok(EvaporationVector { rho })
}

/// Visibility per edge is the channel's availability; an unavailable channel
/// (availability 0) is unselectable under the transition rule.
pub fn derive_visibility(edges: &[EdgeCriteria]) -> Vec<f64> {
    edges.iter().map(|e| e.availability).collect()
}

/// One row of the oracle ranking.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedChannel {
    pub channel: ChannelId,
    pub score: f64,
    /// False when the channel was excluded for zero availability.
    pub available: bool,
}

/// Deterministic exhaustive ranking by composite score.
///
/// Available channels (availability > 0) come first, sorted by score
/// descending; unavailable channels follow, also by score descending. Ties
/// keep input order.
pub fn oracle_rank(graph: &DecisionGraph, config: &CriteriaConfig) -> Result<Vec<RankedChannel>> {
    let norm = normalize_criteria(graph.edges(), config)?;
    let scores = composite_score(&norm);
    let mut entries: Vec<RankedChannel> = graph
        .channels()
        .iter()
        .zip(graph.edges())
        .zip(&scores.scores)
        .map(|((channel, edge), &score)| RankedChannel {
            channel: channel.clone(),
            score,
            available: edge.availability > 0.0,
        })
        .collect();
    entries.sort_by(|a, b| {
        b.available
            .cmp(&a.available)
            .then(b.score.total_cmp(&a.score))
    });
    Ok(entries)
}
