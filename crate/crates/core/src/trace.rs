//! Trace and summary emission: CSV files underlying the pheromone-level and
//! convergence-time figures, plus the JSON mirror of the sweep report.
//!
//! Output is locale-independent and byte-stable: `.` decimal point, no
//! separators, LF line endings, and a fixed 9-significant-digit decimal
//! rendering for every floating-point cell.

use std::io::Write;

use crate::aco::ConvergenceReport;
use crate::error::Result;
use crate::sweep::SweepReport;

/// Render with 9 significant digits in plain decimal notation.
///
/// The decimal exponent comes from the standard formatter, so the digit count
/// is exact and the rendering is reproducible for any finite input.
pub fn format_decimal(value: f64) -> String {
    if value == 0.0 {
        return "0.00000000".to_string();
    }
    // "{:e}" renders like 9.5e-1; the exponent after 'e' is authoritative.
    let sci = format!("{value:e}");
    let exp: i32 = sci[sci.find('e').expect("exponent marker") + 1..]
        .parse()
        .expect("decimal exponent");
    let decimals = (8 - exp).max(0) as usize;
    format!("{value:.decimals$}")
}

/// Write `iteration,channel_id,tau,probability` rows: one per channel per
/// iteration, ordered by iteration then channel order.
pub fn emit_trace_csv<W: Write>(report: &ConvergenceReport, mut sink: W) -> std::io::Result<()> {
    writeln!(sink, "iteration,channel_id,tau,probability")?;
    for row in &report.trace {
        for (i, channel) in report.channels.iter().enumerate() {
            writeln!(
                sink,
                "{},{},{},{}",
                row.iteration,
                channel,
                format_decimal(row.tau[i]),
                format_decimal(row.probabilities[i]),
            )?;
        }
    }
    Ok(())
}

/// Write `ant_count,winner,converged_at_iteration,wall_time_ms` rows, one per
/// sweep entry. Non-converged or errored entries leave the unknown cells
/// empty.
pub fn emit_convergence_summary<W: Write>(sweep: &SweepReport, mut sink: W) -> std::io::Result<()> {
    writeln!(sink, "ant_count,winner,converged_at_iteration,wall_time_ms")?;
    for row in sweep.summary_rows() {
        writeln!(
            sink,
            "{},{},{},{}",
            row.ant_count,
            row.winner.map(|w| w.to_string()).unwrap_or_default(),
            row.converged_at.map(|c| c.to_string()).unwrap_or_default(),
            row.wall_time_ms.map(format_decimal).unwrap_or_default(),
        )?;
    }
    Ok(())
}

/// Serialize the sweep report as pretty JSON, field names matching the
/// in-memory structures.
pub fn write_sweep_json<W: Write>(sweep: &SweepReport, sink: W) -> Result<()> {
    serde_json::to_writer_pretty(sink, sweep)?;
    Ok(())
}

/// Serialize a single run report as pretty JSON.
pub fn write_report_json<W: Write>(report: &ConvergenceReport, sink: W) -> Result<()> {
    serde_json::to_writer_pretty(sink, report)?;
    Ok(())
}
