use std::io::Write;

use serde::Serialize;
use serde_json::Value;

/// One adversary decision. `step` is the number of `observe` calls answered
/// before the decision was taken.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct LogEntry {
    pub step: u64,
    pub kind: &'static str,
    pub operands: Value,
}

/// Append-only record of the decisions behind a world.
#[derive(Clone, Debug, Default)]
pub struct ResolutionLog {
    entries: Vec<LogEntry>,
    enabled: bool,
}

impl ResolutionLog {
    pub fn new(enabled: bool) -> Self {
        ResolutionLog {
            entries: Vec::new(),
            enabled,
        }
    }

    pub(crate) fn push(&mut self, step: u64, kind: &'static str, operands: impl FnOnce() -> Value) {
        if self.enabled {
            self.entries.push(LogEntry {
                step,
                kind,
                operands: operands(),
            });
        }
    }

    pub fn entries(&self) -> &[LogEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn count(&self, kind: &str) -> usize {
        self.entries.iter().filter(|e| e.kind == kind).count()
    }

    /// JSON lines, one entry per line.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for e in &self.entries {
            serde_json::to_writer(&mut w, e)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }
}
