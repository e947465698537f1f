//! Step-by-step run records.
//!
//! Every transducer run produces a [`StepLog`]: one [`StepRecord`] per
//! elementary event (absorb, emit, partial emit), in order, with running
//! counters and the post-event size of the largest state entry. The log is
//! what the experiments harness aggregates and what `--log` dumps as CSV.

use std::io::Write;

use crate::error::{Result, StreamSide};
use crate::mcf::McfStep;

/// What happened at one step of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    /// A tuple was absorbed from an input stream.
    Input,
    /// A full output tuple was emitted.
    Output,
    /// A partial output (shear by a certified lower bound) was applied.
    Partial,
}

impl StepKind {
    /// Short name used in CSV output.
    pub fn as_str(self) -> &'static str {
        match self {
            StepKind::Input => "in",
            StepKind::Output => "out",
            StepKind::Partial => "partial",
        }
    }
}

/// One elementary event of a run.
#[derive(Debug, Clone)]
pub struct StepRecord {
    /// 1-based position in the run (counts every event kind).
    pub index: usize,
    /// Event kind.
    pub kind: StepKind,
    /// The tuple absorbed, emitted, or sheared.
    pub tuple: McfStep,
    /// For inputs of a bilinear run, which operand stream was read.
    pub side: Option<StreamSide>,
    /// Inputs absorbed so far (all sides), after this event.
    pub inputs_so_far: usize,
    /// Full outputs emitted so far, after this event.
    pub outputs_so_far: usize,
    /// Largest state entry, in bits, after this event.
    pub max_entry_bits: u64,
}

/// Ordered list of run events.
#[derive(Debug, Clone, Default)]
pub struct StepLog {
    records: Vec<StepRecord>,
}

impl StepLog {
    /// Empty log.
    pub fn new() -> Self {
        StepLog::default()
    }

    /// Append one event.
    pub fn push(&mut self, record: StepRecord) {
        self.records.push(record);
    }

    /// All events in order.
    pub fn records(&self) -> &[StepRecord] {
        &self.records
    }

    /// Number of events.
    pub fn len(&self) -> usize {
        self.records.len()
    }

    /// Whether the log is empty.
    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Write as CSV: `step,kind,inputs_so_far,outputs_so_far`, with a
    /// trailing `max_entry_bits` column (and `partial` rows) only when
    /// `partial_mode` is set — plain runs have no partial events and omit
    /// the size column.
    pub fn write_csv<W: Write>(&self, w: W, partial_mode: bool) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        if partial_mode {
            out.write_record([
                "step",
                "kind",
                "inputs_so_far",
                "outputs_so_far",
                "max_entry_bits",
            ])
            .map_err(csv_err)?;
        } else {
            out.write_record(["step", "kind", "inputs_so_far", "outputs_so_far"])
                .map_err(csv_err)?;
        }
        for r in &self.records {
            let step = r.index.to_string();
            let ins = r.inputs_so_far.to_string();
            let outs = r.outputs_so_far.to_string();
            if partial_mode {
                let bits = r.max_entry_bits.to_string();
                out.write_record([step.as_str(), r.kind.as_str(), &ins, &outs, &bits])
                    .map_err(csv_err)?;
            } else {
                out.write_record([step.as_str(), r.kind.as_str(), &ins, &outs])
                    .map_err(csv_err)?;
            }
        }
        out.flush()?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> crate::error::Error {
    crate::error::Error::Io(std::io::Error::other(e))
}

/// Why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// The requested number of outputs was produced.
    MaxOutputs,
    /// The step cap was reached with the output guard still failing.
    GuardHit,
    /// A finite input stream ran out before the run could finish.
    InputExhausted(StreamSide),
}

impl std::fmt::Display for StopReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StopReason::MaxOutputs => write!(f, "max-outputs"),
            StopReason::GuardHit => write!(f, "guard-hit"),
            StopReason::InputExhausted(side) => write!(f, "input-exhausted({side})"),
        }
    }
}

/// Complete result of a transducer run.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    /// Full output tuples, in order (partial-mode runs fold pending partial
    /// quotients into these).
    pub outputs: Vec<McfStep>,
    /// Why the run stopped.
    pub stop: StopReason,
    /// Tuples absorbed from the first (or only) stream.
    pub inputs_x: usize,
    /// Tuples absorbed from the second stream (0 for Möbius runs).
    pub inputs_y: usize,
    /// Number of partial-output events.
    pub partial_steps: usize,
    /// Total elementary events (inputs + outputs + partials).
    pub steps: usize,
    /// Per-event records.
    pub log: StepLog,
    /// Peak state-entry size over the run, in bits.
    pub max_entry_bits: u64,
}

impl RunOutcome {
    /// Inputs absorbed across all streams.
    pub fn inputs_total(&self) -> usize {
        self.inputs_x + self.inputs_y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(index: usize, kind: StepKind) -> StepRecord {
        StepRecord {
            index,
            kind,
            tuple: McfStep::from_i64(&[1, 0]),
            side: None,
            inputs_so_far: 1,
            outputs_so_far: 0,
            max_entry_bits: 3,
        }
    }

    #[test]
    fn csv_plain_omits_partial_column() {
        let mut log = StepLog::new();
        log.push(record(1, StepKind::Input));
        log.push(record(2, StepKind::Output));
        let mut buf = Vec::new();
        log.write_csv(&mut buf, false).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "step,kind,inputs_so_far,outputs_so_far\n1,in,1,0\n2,out,1,0\n"
        );
    }

    #[test]
    fn csv_partial_includes_bits() {
        let mut log = StepLog::new();
        log.push(record(1, StepKind::Partial));
        let mut buf = Vec::new();
        log.write_csv(&mut buf, true).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "step,kind,inputs_so_far,outputs_so_far,max_entry_bits\n1,partial,1,0,3\n"
        );
    }

    #[test]
    fn stop_reason_display() {
        assert_eq!(StopReason::MaxOutputs.to_string(), "max-outputs");
        assert_eq!(StopReason::GuardHit.to_string(), "guard-hit");
        assert_eq!(
            StopReason::InputExhausted(StreamSide::Y).to_string(),
            "input-exhausted(y)"
        );
    }
}
