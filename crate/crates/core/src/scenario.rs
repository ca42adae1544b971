//! Scenario files: the TOML schema, loading with validation, and
//! serialization for round-tripping.
//!
//! A scenario is a single TOML document with a `format_version`, a `name`, a
//! `[call]` section, one or more `[[channels]]` entries, and optional
//! `[criteria]` and `[aco]` sections whose omitted fields take documented
//! defaults. Unknown keys anywhere are a load error. See
//! `scenarios/reference.toml` for a fully commented example.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::aco::AcoParams;
use crate::criteria::CriteriaConfig;
use crate::error::{Error, Result};
use crate::model::{CallContext, ChannelProfile};

/// Scenario file format version this build reads and writes.
pub const FORMAT_VERSION: u32 = 1;

/// A fully validated scenario: the call, the candidate channels, and the
/// criteria/engine configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub format_version: u32,
    pub name: String,
    pub call: CallContext,
    pub channels: Vec<ChannelProfile>,
    #[serde(default)]
    pub criteria: CriteriaConfig,
    #[serde(default)]
    pub aco: AcoParams,
}

/// Load and validate a scenario from a file path.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::File {
        path: path.to_path_buf(),
        source,
    })?;
    parse_scenario(&text)
}

/// Parse and validate a scenario from TOML text.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let scenario: Scenario = toml::from_str(text).map_err(classify_toml_error)?;
    validate(&scenario)?;
    Ok(scenario)
}

/// Serialize a scenario back to TOML. Round-trips through
/// [`parse_scenario`] to the identical value.
pub fn serialize_scenario(scenario: &Scenario) -> String {
    toml::to_string_pretty(scenario).expect("scenario serializes to TOML")
}

/// toml reports schema violations and syntax errors through one type; keep
/// unknown-key diagnostics distinguishable since the spec of the format
/// treats them as their own failure class.
fn classify_toml_error(err: toml::de::Error) -> Error {
    let message = err.to_string();
    if message.contains("unknown field") {
        Error::UnknownKey { message }
    } else {
        Error::Parse { message }
    }
}

fn validate(s: &Scenario) -> Result<()> {
    let fail = |field: &str, message: String| {
        Err(Error::Validation {
            field: field.to_string(),
            message,
        })
    };

    if s.format_version != FORMAT_VERSION {
        return fail(
            "format_version",
            format!("expected {FORMAT_VERSION}, got {}", s.format_version),
        );
    }
    if s.name.is_empty() {
        return fail("name", "must be non-empty".into());
    }

    let call = &s.call;
    if !(call.speed >= 0.0 && call.speed.is_finite()) {
        return fail("call.speed", format!("must be finite and >= 0, got {}", call.speed));
    }
    if !(call.direction >= 0.0 && call.direction < 360.0) {
        return fail(
            "call.direction",
            format!("must lie in [0, 360), got {}", call.direction),
        );
    }
    if !(call.priority > 0.0 && call.priority <= 1.0) {
        return fail(
            "call.priority",
            format!("must lie in (0, 1], got {}", call.priority),
        );
    }

    if s.channels.is_empty() {
        return Err(Error::EmptyChannelSet);
    }
    let mut seen = HashSet::new();
    for (i, ch) in s.channels.iter().enumerate() {
        let field = |name: &str| format!("channels[{i}].{name}");
        if ch.id.as_str().is_empty() {
            return fail(&field("id"), "must be non-empty".into());
        }
        if !seen.insert(ch.id.clone()) {
            return Err(Error::DuplicateChannelId {
                id: ch.id.to_string(),
            });
        }
        let positive = [
            ("time_to_drop", ch.time_to_drop),
            ("latency", ch.latency),
            ("throughput", ch.throughput),
            ("cost", ch.cost),
            ("bandwidth", ch.bandwidth),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return fail(&field(name), format!("must be finite and > 0, got {value}"));
            }
        }
        let fractions = [
            ("packet_loss_rate", ch.packet_loss_rate),
            ("packet_drop_prob", ch.packet_drop_prob),
            ("out_of_order_rate", ch.out_of_order_rate),
            ("availability", ch.availability),
        ];
        for (name, value) in fractions {
            if !(0.0..=1.0).contains(&value) {
                return fail(&field(name), format!("must lie in [0, 1], got {value}"));
            }
        }
    }

    let crit = &s.criteria;
    if !(crit.rho_min > 0.0 && crit.rho_min < crit.rho_max && crit.rho_max < 1.0) {
        return Err(Error::InvalidRhoBounds {
            min: crit.rho_min,
            max: crit.rho_max,
        });
    }
    let weights = [
        ("traffic_affinity", crit.weights.traffic_affinity),
        ("speed", crit.weights.speed),
        ("time_to_drop", crit.weights.time_to_drop),
        ("handoff_count", crit.weights.handoff_count),
        ("packet_loss", crit.weights.packet_loss),
        ("latency", crit.weights.latency),
        ("throughput", crit.weights.throughput),
        ("packet_drop", crit.weights.packet_drop),
        ("out_of_order", crit.weights.out_of_order),
        ("priority", crit.weights.priority),
        ("cost", crit.weights.cost),
        ("bandwidth", crit.weights.bandwidth),
    ];
    for (name, value) in weights {
        if !(value >= 0.0 && value.is_finite()) {
            return fail(
                &format!("criteria.weights.{name}"),
                format!("must be finite and >= 0, got {value}"),
            );
        }
    }
    let affinities = [
        ("throughput_sensitive.cdma", crit.affinity.throughput_sensitive.cdma),
        ("throughput_sensitive.wifi", crit.affinity.throughput_sensitive.wifi),
        ("throughput_sensitive.wimax", crit.affinity.throughput_sensitive.wimax),
        ("throughput_sensitive.other", crit.affinity.throughput_sensitive.other),
        ("delay_sensitive.cdma", crit.affinity.delay_sensitive.cdma),
        ("delay_sensitive.wifi", crit.affinity.delay_sensitive.wifi),
        ("delay_sensitive.wimax", crit.affinity.delay_sensitive.wimax),
        ("delay_sensitive.other", crit.affinity.delay_sensitive.other),
    ];
    for (name, value) in affinities {
        if !(value > 0.0 && value <= 1.0) {
            return fail(
                &format!("criteria.affinity.{name}"),
                format!("must lie in (0, 1], got {value}"),
            );
        }
    }

    s.aco.validate()?;
    Ok(())
}
