//! Multi-criteria ant colony channel selection for mobile vertical handoff.
//!
//! The engine picks the best candidate channel (CDMA, WiFi, WiMAX, ...) for a
//! handoff by running an ant colony over a star graph joining the user to
//! each channel. Eleven call- and signal-based criteria are max-normalized,
//! aggregated into a multiplicative composite score, and mapped onto a
//! per-edge pheromone evaporation rate, so better channels both attract
//! larger deposits and decay slower. A deterministic exhaustive ranking
//! (`criteria::oracle_rank`) serves as ground truth for the stochastic loop.
//!
//! Every run is reproducible: randomness comes from a ChaCha8 stream seeded
//! per run, and trace CSVs are byte-stable. The `parallel` feature (default)
//! fans independent runs out over rayon; sequential variants are always
//! available and produce identical results.

pub mod aco;
pub mod criteria;
pub mod error;
pub mod model;
pub mod scenario;
pub mod sweep;
pub mod trace;

pub use error::{Error, Result};
