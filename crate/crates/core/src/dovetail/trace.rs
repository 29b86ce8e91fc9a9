use serde::Serialize;

use super::round::{DovetailState, RoundSize};
use super::Status;

/// One line of a dovetail trace: a sub-area as it stood at the end of a round,
/// with kill marks applied retroactively.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceRecord {
    pub round: u64,
    pub m: RoundSize,
    pub r: usize,
    pub status: Status,
    pub state: String,
    pub heads: [i64; 2],
    pub spawned: Option<[usize; 2]>,
    pub killed_by: Option<usize>,
}

pub fn trace_records(s: &DovetailState) -> impl Iterator<Item = TraceRecord> + '_ {
    s.sub_tapes().iter().flat_map(|tape| {
        tape.records.iter().map(move |rec| TraceRecord {
            round: tape.round,
            m: tape.m,
            r: rec.r,
            status: rec.status,
            state: rec.state.clone(),
            heads: [rec.heads.0, rec.heads.1],
            spawned: rec.spawned,
            killed_by: rec.killed_by,
        })
    })
}

impl TraceRecord {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("trace records always serialize")
    }

    pub fn to_text(&self) -> String {
        let mut line = format!(
            "round {} m={} r={} {} state={} heads=({},{})",
            self.round, self.m, self.r, self.status, self.state, self.heads[0], self.heads[1]
        );
        if let Some([a, b]) = self.spawned {
            line.push_str(&format!(" spawned={a},{b}"));
        }
        if let Some(k) = self.killed_by {
            line.push_str(&format!(" killed_by={k}"));
        }
        line
    }
}
