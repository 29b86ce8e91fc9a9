use serde::Serialize;
use thiserror::Error;

use crate::format::program_tape;
use crate::ordinal::OrdinalTime;
use crate::tm::{initial_config, MachineSpec, Symbol};

use super::oracle::{
    branch_config, branch_taken, run_inline_from, InlineOutcome, OracleImpl, OracleRegistry,
};
use super::round::DovetailState;
use super::{DovetailError, Phase, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum UDecision {
    One,
    Zero,
    /// Both answers contradict themselves; reported as 0.
    UndefinedAsZero,
}

impl UDecision {
    pub fn bit(self) -> u8 {
        match self {
            UDecision::One => 1,
            UDecision::Zero | UDecision::UndefinedAsZero => 0,
        }
    }
}

#[derive(Debug, Clone, Copy, Error, PartialEq, Eq)]
pub enum MalformedState {
    #[error("the dovetail state has not been marked limit-complete")]
    NotLimitComplete,
}

/// Post-limit decision. May continue an unresolved oracle evaluation for up
/// to `w` instructions, and kills the child that answer rules out.
pub fn u_decide(s: &mut DovetailState, w: u64) -> Result<UDecision, MalformedState> {
    if !s.is_limit_complete() {
        return Err(MalformedState::NotLimitComplete);
    }
    if s.t_flag() {
        return Ok(UDecision::One);
    }
    if s.q_flag() {
        return Ok(UDecision::Zero);
    }

    let alive: Vec<usize> = s
        .areas()
        .iter()
        .filter(|a| a.status != Status::Killed)
        .map(|a| a.index)
        .take(3)
        .collect();
    let &[_, second, third] = alive.as_slice() else {
        return Ok(UDecision::Zero);
    };
    let (a2, a3) = (s.area(second).unwrap(), s.area(third).unwrap());
    let Some(parent) = a2.parent.filter(|&p| a3.parent == Some(p)) else {
        return Ok(UDecision::Zero);
    };
    if a2.status != Status::Halted {
        return Ok(UDecision::Zero);
    }
    let p = s.area(parent).unwrap();
    let Phase::Evaluating { children, .. } = &p.phase else {
        return Ok(UDecision::Zero);
    };
    let children = *children;
    let o = s
        .program()
        .oracle_at(p.config.state)
        .expect("evaluating areas sit at oracle states")
        .clone();

    let self_application = matches!(s.registry().get(&o.oracle), Some(OracleImpl::Decider))
        && s.program().tokens(s.input()) == program_tape(s.program());
    if self_application {
        // u answering `a` claims the program halts iff a = 1
        let halted = |c: usize| s.status(c) == Status::Halted;
        let consistent = |a: &str| {
            let taken = branch_taken(s.program(), &o, &[a.to_string()]);
            let child = children[if taken { 0 } else { 1 }];
            ((a == "1") == halted(child), child)
        };
        return Ok(match (consistent("1"), consistent("0")) {
            ((false, _), (false, _)) => UDecision::UndefinedAsZero,
            ((true, child), (false, _)) | ((false, _), (true, child)) => {
                if halted(child) {
                    UDecision::One
                } else {
                    UDecision::Zero
                }
            }
            _ => UDecision::Zero,
        });
    }

    // give the oracle up to w more instructions
    let mut answer = None;
    if let Phase::Evaluating { eval, .. } = &mut s.areas_mut()[parent - 1].phase {
        for _ in 0..w {
            if let Some(out) = eval.advance() {
                answer = Some(out.to_vec());
                break;
            }
        }
    }
    let Some(out) = answer else {
        return Ok(UDecision::Zero);
    };
    let taken = branch_taken(s.program(), &o, &out);
    s.areas_mut()[parent - 1].phase = Phase::Resolved {
        outcome: taken,
        children,
    };
    let (keep, drop) = if taken {
        (children[0], children[1])
    } else {
        (children[1], children[0])
    };
    s.kill(drop, parent);
    let survivor = s.area(keep).unwrap();
    if survivor.status == Status::Halted {
        return Ok(UDecision::One);
    }
    if survivor.status == Status::Killed || survivor.phase != Phase::Running {
        return Ok(UDecision::Zero);
    }
    let more = run_inline_from(survivor.config.clone(), s.program(), s.registry(), w + 1)
        .expect("oracle names were checked when the state was built");
    Ok(match more.outcome {
        InlineOutcome::Halted(_) => UDecision::One,
        _ => UDecision::Zero,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchSuffix {
    pub assumption: bool,
    /// Instructions from the branch to the halt (the branch itself included), if at most `w`.
    pub halts_within_w: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Evidence {
    pub at_state: String,
    pub oracle: String,
    pub reached_at: OrdinalTime,
    pub suffixes: [BranchSuffix; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum HaltingProfile {
    /// Halts after finitely many instructions.
    Condition1 { steps: u64 },
    /// Stuck on an oracle that does not answer within the fuel, and at least
    /// one branch halts within `w` instructions after it.
    Condition2Evidence(Evidence),
    Unknown,
}

pub fn classify_halting_profile(
    p: &MachineSpec,
    input: &[Symbol],
    registry: &OracleRegistry,
    fuel: u64,
    w: u64,
) -> Result<HaltingProfile, DovetailError> {
    registry.check_program(p)?;
    let start = initial_config(p, input)?;
    let run = run_inline_from(start, p, registry, fuel)?;
    match run.outcome {
        InlineOutcome::Halted(_) => Ok(HaltingProfile::Condition1 {
            steps: run.config.steps.finite_part(),
        }),
        InlineOutcome::Exhausted => Ok(HaltingProfile::Unknown),
        InlineOutcome::Unresolved if w == 0 => Ok(HaltingProfile::Unknown),
        InlineOutcome::Unresolved => {
            let o = p
                .oracle_at(run.config.state)
                .expect("unresolved runs stop at oracle states");
            let suffix = |assumption: bool| -> Result<BranchSuffix, DovetailError> {
                let child = branch_config(&run.config, o, assumption);
                // w-1 further instructions, plus one more call to observe the halt
                let after = run_inline_from(child, p, registry, w)?;
                let halts_within_w = match after.outcome {
                    InlineOutcome::Halted(_) if after.instructions < w => Some(after.instructions + 1),
                    _ => None,
                };
                Ok(BranchSuffix {
                    assumption,
                    halts_within_w,
                })
            };
            let suffixes = [suffix(true)?, suffix(false)?];
            if suffixes.iter().all(|s| s.halts_within_w.is_none()) {
                return Ok(HaltingProfile::Unknown);
            }
            Ok(HaltingProfile::Condition2Evidence(Evidence {
                at_state: p.state_name(o.at_state).to_string(),
                oracle: o.oracle.clone(),
                reached_at: run.config.steps,
                suffixes,
            }))
        }
    }
}
