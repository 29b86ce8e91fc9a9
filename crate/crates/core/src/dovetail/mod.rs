//! Dovetailed speculation over oracle branches.
//!
//! Each round advances every sub-area by one instruction. A sub-area that
//! reaches an `oracle:` state is marked for splitting; at the start of the
//! next round it gets two children, one assuming the branch condition is true
//! and one assuming it is false. Both children run while the parent keeps
//! evaluating the oracle. When the oracle answers, the child on the wrong side
//! and everything descended from it is killed, including its records in all
//! earlier rounds. A kill mark takes precedence over a halt mark.
//!
//! Round sizes follow `m ← m + 2^m` from `m = 1`. Sub-areas numbered past
//! the last existing one are absent; they are counted, not stored.
//!
//! Nothing here runs for ω steps. [`DovetailState::run_to_limit`] stops on
//! fuel, on a halt of the confirmed branch, or when nothing can make progress,
//! and then sets an explicit limit-complete flag.

mod decide;
mod oracle;
mod paradox;
mod round;
mod trace;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::tm::{Configuration, InputError, StepOutcome};

pub use decide::{
    classify_halting_profile, u_decide, BranchSuffix, Evidence, HaltingProfile, MalformedState,
    UDecision,
};
pub use oracle::{
    branch_config, branch_taken, run_inline, run_inline_from, InlineOutcome, InlineRun, OracleEval,
    OracleImpl, OracleRegistry,
};
pub use paradox::{build_program_y, paradox_report, Observed, ParadoxReport, ParadoxRow};
pub use round::{dovetail_round, DovetailState, RoundSize};
pub use trace::{trace_records, TraceRecord};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DovetailError {
    #[error("no oracle machine named `{0}` is registered")]
    UnknownMachine(String),
    #[error(transparent)]
    Input(#[from] InputError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Active,
    /// Φ
    Killed,
    /// π
    Halted,
    /// ψ
    Absent,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Active => "active",
            Status::Killed => "killed",
            Status::Halted => "halted",
            Status::Absent => "absent",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Phase {
    Running,
    /// Reached an oracle state; children appear next round.
    SpawnPending,
    /// Children `[true, false]` are running while the oracle is evaluated.
    Evaluating {
        eval: OracleEval,
        children: [usize; 2],
    },
    Resolved {
        outcome: bool,
        children: [usize; 2],
    },
}

impl Phase {
    pub fn children(&self) -> Option<[usize; 2]> {
        match self {
            Phase::Evaluating { children, .. } | Phase::Resolved { children, .. } => {
                Some(*children)
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubArea {
    /// 1-based.
    pub index: usize,
    pub parent: Option<usize>,
    pub branch_assumption: Option<bool>,
    pub status: Status,
    pub config: Configuration,
    pub phase: Phase,
    pub halt: Option<StepOutcome>,
    pub killed_by: Option<usize>,
}

/// Snapshot of one sub-area at the end of a round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AreaRecord {
    pub r: usize,
    pub status: Status,
    pub state: String,
    pub heads: (i64, i64),
    pub spawned: Option<[usize; 2]>,
    pub killed_by: Option<usize>,
}

/// The records of one round. Sub-areas `records.len()+1 ..= m` are absent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubTape {
    pub round: u64,
    pub m: RoundSize,
    pub records: Vec<AreaRecord>,
}
