//! Domain types for the handoff decision and construction of the star-shaped
//! decision graph linking the user to each candidate channel.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// What the active call is most sensitive to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrafficType {
    ThroughputSensitive,
    DelaySensitive,
}

/// User-side properties of the active call.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CallContext {
    pub traffic_type: TrafficType,
    /// Speed of travel in meters per second, >= 0.
    pub speed: f64,
    /// Direction of travel in degrees, [0, 360). Carried for completeness;
    /// never enters the composite score (no per-edge counterpart exists).
    pub direction: f64,
    /// Priority of the transmission, (0, 1].
    pub priority: f64,
    /// Number of handoffs the call has already gone through.
    pub handoff_count: u32,
}

/// Candidate channel technology class.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ChannelClass {
    Cdma,
    Wifi,
    Wimax,
    /// Any other technology, carried by name.
    Other(String),
}

impl ChannelClass {
    /// Parse from the scenario-file spelling. Case-insensitive for the three
    /// base classes; anything else becomes `Other` verbatim.
    pub fn parse(s: &str) -> ChannelClass {
        match s.to_ascii_lowercase().as_str() {
            "cdma" => ChannelClass::Cdma,
            "wifi" => ChannelClass::Wifi,
            "wimax" => ChannelClass::Wimax,
            _ => ChannelClass::Other(s.to_string()),
        }
    }

    pub fn as_str(&self) -> &str {
        match self {
            ChannelClass::Cdma => "cdma",
            ChannelClass::Wifi => "wifi",
            ChannelClass::Wimax => "wimax",
            ChannelClass::Other(name) => name,
        }
    }
}

impl fmt::Display for ChannelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for ChannelClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for ChannelClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Ok(ChannelClass::parse(&s))
    }
}

/// Identifier of a candidate channel, unique within one scenario.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ChannelId(pub String);

impl ChannelId {
    pub fn new(id: impl Into<String>) -> Self {
        ChannelId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ChannelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ChannelId {
    fn from(s: &str) -> Self {
        ChannelId(s.to_string())
    }
}

/// Measured/offered properties of one candidate channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelProfile {
    pub id: ChannelId,
    pub class: ChannelClass,
    /// Expected time until the signal drops, seconds, > 0.
    pub time_to_drop: f64,
    /// Fraction of packets lost, [0, 1].
    pub packet_loss_rate: f64,
    /// Round-trip latency in milliseconds, > 0.
    pub latency: f64,
    /// Offered throughput in Mbit/s, > 0.
    pub throughput: f64,
    /// Probability of a packet being dropped, [0, 1].
    pub packet_drop_prob: f64,
    /// Fraction of packets delivered out of order, [0, 1].
    pub out_of_order_rate: f64,
    /// Monetary cost per megabyte, > 0.
    pub cost: f64,
    /// Channel bandwidth in Mbit/s, > 0.
    pub bandwidth: f64,
    /// Availability as a fraction, [0, 1]; 0 means unreachable.
    pub availability: f64,
}

/// Affinity of one traffic type for each channel class, each value in (0, 1].
///
/// Turns the categorical traffic type into the scalar multiplicand the
/// composite score needs. Overridable per scenario; these defaults encode the
/// usual pairing of bulk traffic with high-bandwidth classes and real-time
/// traffic with low-latency classes.
/// Overriding a traffic type's affinities in a scenario file replaces the
/// whole row: all four values must be given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassAffinity {
    pub cdma: f64,
    pub wifi: f64,
    pub wimax: f64,
    pub other: f64,
}

impl ClassAffinity {
    pub fn lookup(&self, class: &ChannelClass) -> f64 {
        match class {
            ChannelClass::Cdma => self.cdma,
            ChannelClass::Wifi => self.wifi,
            ChannelClass::Wimax => self.wimax,
            ChannelClass::Other(_) => self.other,
        }
    }
}

/// Affinity table for both traffic types.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AffinityTable {
    pub throughput_sensitive: ClassAffinity,
    pub delay_sensitive: ClassAffinity,
}

impl AffinityTable {
    pub fn lookup(&self, traffic: TrafficType, class: &ChannelClass) -> f64 {
        match traffic {
            TrafficType::ThroughputSensitive => self.throughput_sensitive.lookup(class),
            TrafficType::DelaySensitive => self.delay_sensitive.lookup(class),
        }
    }
}

impl Default for AffinityTable {
    fn default() -> Self {
        AffinityTable {
            throughput_sensitive: ClassAffinity {
                wimax: 1.0,
                wifi: 0.8,
                cdma: 0.4,
                other: 0.6,
            },
            delay_sensitive: ClassAffinity {
                cdma: 1.0,
                wifi: 0.7,
                wimax: 0.6,
                other: 0.6,
            },
        }
    }
}

/// The merged per-edge criteria vector feeding the score and the evaporation
/// derivation. One instance per (user, channel) edge.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeCriteria {
    /// Traffic/class affinity scalar, (0, 1].
    pub traffic_affinity: f64,
    pub speed: f64,
    pub time_to_drop: f64,
    /// User-level handoff count replicated onto every edge.
    pub handoff_count: f64,
    pub packet_loss: f64,
    pub latency: f64,
    pub throughput: f64,
    pub packet_drop: f64,
    pub out_of_order: f64,
    pub priority: f64,
    pub cost: f64,
    pub bandwidth: f64,
    pub availability: f64,
}

/// Star-shaped decision graph: the user node joined by one edge to each
/// candidate channel. Edge `i` corresponds to `channels[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionGraph {
    channels: Vec<ChannelId>,
    edges: Vec<EdgeCriteria>,
}

impl DecisionGraph {
    pub fn channels(&self) -> &[ChannelId] {
        &self.channels
    }

    pub fn edges(&self) -> &[EdgeCriteria] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Merge the call context with one channel profile into the edge vector.
///
/// Total over valid inputs: every field is a copy except `traffic_affinity`,
/// which is the affinity-table lookup for (traffic type, channel class).
pub fn merge_criteria(
    context: &CallContext,
    channel: &ChannelProfile,
    affinity: &AffinityTable,
) -> EdgeCriteria {
    EdgeCriteria {
        traffic_affinity: affinity.lookup(context.traffic_type, &channel.class),
        speed: context.speed,
        time_to_drop: channel.time_to_drop,
        handoff_count: f64::from(context.handoff_count),
        packet_loss: channel.packet_loss_rate,
        latency: channel.latency,
        throughput: channel.throughput,
        packet_drop: channel.packet_drop_prob,
        out_of_order: channel.out_of_order_rate,
        priority: context.priority,
        cost: channel.cost,
        bandwidth: channel.bandwidth,
        availability: channel.availability,
    }
}

/// Build the star graph: one edge per channel, input order preserved.
pub fn build_decision_graph(
    context: &CallContext,
    channels: &[ChannelProfile],
    affinity: &AffinityTable,
) -> Result<DecisionGraph> {
    if channels.is_empty() {
        return Err(Error::EmptyChannelSet);
    }
    let mut seen = HashSet::new();
    for ch in channels {
        if !seen.insert(&ch.id) {
            return Err(Error::DuplicateChannelId {
                id: ch.id.to_string(),
            });
        }
    }
    Ok(DecisionGraph {
        channels: channels.iter().map(|c| c.id.clone()).collect(),
        edges: channels
            .iter()
            .map(|c| merge_criteria(context, c, affinity))
            .collect(),
    })
}
