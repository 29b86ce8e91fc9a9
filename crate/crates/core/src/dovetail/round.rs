use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

use crate::tm::{halting_outcome, initial_config, step_mut, MachineSpec, StepOutcome, Symbol};

use super::oracle::{branch_config, branch_taken, OracleEval, OracleRegistry};
use super::{AreaRecord, DovetailError, Phase, Status, SubArea, SubTape};

/// The `k`-th iterate of `m ← m + 2^m` from `m_1 = 1`.
///
/// `m_5` already has over 600 decimal digits and `m_6` cannot be written out,
/// so later sizes are kept by index only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RoundSize {
    index: u64,
}

impl RoundSize {
    pub const FIRST: RoundSize = RoundSize { index: 1 };

    pub fn index(self) -> u64 {
        self.index
    }

    pub fn next(self) -> RoundSize {
        RoundSize {
            index: self.index + 1,
        }
    }

    /// Exact value for `k ≤ 5`.
    pub fn value(self) -> Option<BigUint> {
        if self.index > 5 {
            return None;
        }
        let mut m = BigUint::from(1u32);
        for _ in 1..self.index {
            let shift = usize::try_from(&m).expect("small iterates fit in usize");
            m = &m + (BigUint::from(1u32) << shift);
        }
        Some(m)
    }

    /// True if `count` sub-areas fit in a round of this size.
    pub fn admits(self, count: usize) -> bool {
        match self.value() {
            Some(v) => v >= BigUint::from(count),
            None => true,
        }
    }
}

impl fmt::Display for RoundSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            1..=4 => write!(f, "{}", self.value().expect("small iterate")),
            5 => write!(f, "2059+2^2059"),
            k => write!(f, "m_{k}"),
        }
    }
}

impl Serialize for RoundSize {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DovetailState {
    program: MachineSpec,
    input: Vec<Symbol>,
    registry: OracleRegistry,
    areas: Vec<SubArea>,
    sub_tapes: Vec<SubTape>,
    current: Vec<AreaRecord>,
    m: RoundSize,
    rounds: u64,
    t_flag: bool,
    q_flag: bool,
    instructions: u64,
    limit_complete: bool,
}

impl DovetailState {
    pub fn new(
        program: MachineSpec,
        input: Vec<Symbol>,
        registry: OracleRegistry,
    ) -> Result<Self, DovetailError> {
        registry.check_program(&program)?;
        let config = initial_config(&program, &input)?;
        Ok(DovetailState {
            areas: vec![SubArea {
                index: 1,
                parent: None,
                branch_assumption: None,
                status: Status::Active,
                config,
                phase: Phase::Running,
                halt: None,
                killed_by: None,
            }],
            program,
            input,
            registry,
            sub_tapes: Vec::new(),
            current: Vec::new(),
            m: RoundSize::FIRST,
            rounds: 0,
            t_flag: false,
            q_flag: false,
            instructions: 0,
            limit_complete: false,
        })
    }

    pub fn program(&self) -> &MachineSpec {
        &self.program
    }

    pub fn input(&self) -> &[Symbol] {
        &self.input
    }

    pub fn registry(&self) -> &OracleRegistry {
        &self.registry
    }

    pub fn areas(&self) -> &[SubArea] {
        &self.areas
    }

    pub fn area(&self, r: usize) -> Option<&SubArea> {
        r.checked_sub(1).and_then(|i| self.areas.get(i))
    }

    /// Status of sub-area `r`; numbers past the last sub-area are absent.
    pub fn status(&self, r: usize) -> Status {
        self.area(r).map_or(Status::Absent, |a| a.status)
    }

    pub fn sub_tapes(&self) -> &[SubTape] {
        &self.sub_tapes
    }

    /// Size of the next round.
    pub fn m(&self) -> RoundSize {
        self.m
    }

    pub fn rounds(&self) -> u64 {
        self.rounds
    }

    pub fn t_flag(&self) -> bool {
        self.t_flag
    }

    pub fn q_flag(&self) -> bool {
        self.q_flag
    }

    pub fn instructions(&self) -> u64 {
        self.instructions
    }

    pub fn is_limit_complete(&self) -> bool {
        self.limit_complete
    }

    /// Whether every branch choice on the way from the root to `r` has been
    /// confirmed by an oracle answer.
    pub fn is_confirmed(&self, r: usize) -> bool {
        let Some(a) = self.area(r) else { return false };
        match (a.parent, a.branch_assumption) {
            (None, _) => true,
            (Some(p), Some(assumed)) => {
                matches!(self.area(p).map(|pa| &pa.phase), Some(Phase::Resolved { outcome, .. }) if *outcome == assumed)
                    && self.is_confirmed(p)
            }
            (Some(_), None) => false,
        }
    }

    /// The deepest confirmed sub-area: where the real computation currently is.
    pub fn confirmed_leaf(&self) -> &SubArea {
        let mut a = &self.areas[0];
        while let Phase::Resolved { outcome, children } = &a.phase {
            a = &self.areas[children[if *outcome { 0 } else { 1 }] - 1];
        }
        a
    }

    fn leaf_halted(&self) -> bool {
        self.confirmed_leaf().status == Status::Halted
    }

    fn leaf_running(&self) -> bool {
        let leaf = self.confirmed_leaf();
        leaf.status == Status::Active && matches!(leaf.phase, Phase::Running | Phase::SpawnPending)
    }

    /// No sub-area can change any more.
    pub fn is_quiescent(&self) -> bool {
        self.areas.iter().all(|a| match (&a.status, &a.phase) {
            (Status::Killed | Status::Halted, _) => true,
            (_, Phase::Running | Phase::SpawnPending) => false,
            (_, Phase::Evaluating { eval, .. }) => eval.is_stalled(),
            (_, Phase::Resolved { .. }) => true,
        })
    }

    fn materialize_spawns(&mut self) {
        let pending: Vec<usize> = self
            .areas
            .iter()
            .filter(|a| a.status == Status::Active && a.phase == Phase::SpawnPending)
            .map(|a| a.index)
            .collect();
        for r in pending {
            let parent = &self.areas[r - 1];
            let o = self
                .program
                .oracle_at(parent.config.state)
                .expect("spawn is only marked at oracle states")
                .clone();
            let x = self.program.tokens(&parent.config.tape1.word_left_of_head());
            let eval = OracleEval::start(&self.registry, &o, &x)
                .expect("oracle names were checked when the state was built");
            let base = parent.config.clone();
            let first = self.areas.len() + 1;
            for (offset, taken) in [true, false].into_iter().enumerate() {
                self.areas.push(SubArea {
                    index: first + offset,
                    parent: Some(r),
                    branch_assumption: Some(taken),
                    status: Status::Active,
                    config: branch_config(&base, &o, taken),
                    phase: Phase::Running,
                    halt: None,
                    killed_by: None,
                });
            }
            self.areas[r - 1].phase = Phase::Evaluating {
                eval,
                children: [first, first + 1],
            };
        }
    }

    fn kill_subtree(&mut self, root: usize, by: usize) {
        let mut doomed = BTreeSet::from([root]);
        // children always have larger indices than their parents
        for a in &self.areas[root..] {
            if a.parent.is_some_and(|p| doomed.contains(&p)) {
                doomed.insert(a.index);
            }
        }
        for &r in &doomed {
            let a = &mut self.areas[r - 1];
            a.status = Status::Killed;
            a.killed_by = Some(by);
        }
        let retro = self
            .sub_tapes
            .iter_mut()
            .flat_map(|t| t.records.iter_mut())
            .chain(self.current.iter_mut());
        for rec in retro.filter(|rec| doomed.contains(&rec.r)) {
            rec.status = Status::Killed;
            rec.killed_by = Some(by);
        }
    }

    /// One instruction for sub-area `r`. Returns whether an instruction was spent.
    fn advance(&mut self, r: usize) -> bool {
        let program = &self.program;
        let area = &mut self.areas[r - 1];
        if matches!(area.status, Status::Killed | Status::Halted) {
            return false;
        }
        match &mut area.phase {
            Phase::Running => {
                if program.oracle_at(area.config.state).is_some() {
                    area.phase = Phase::SpawnPending;
                    return true;
                }
                let halt = match step_mut(&mut area.config, program) {
                    StepOutcome::Continued if program.oracle_at(area.config.state).is_some() => {
                        area.phase = Phase::SpawnPending;
                        None
                    }
                    StepOutcome::Continued => halting_outcome(&area.config, program),
                    halt => Some(halt),
                };
                if halt.is_some() {
                    area.status = Status::Halted;
                    area.halt = halt;
                }
                true
            }
            Phase::SpawnPending | Phase::Resolved { .. } => false,
            Phase::Evaluating { eval, children } => {
                let children = *children;
                let Some(out) = eval.advance().map(<[String]>::to_vec) else {
                    return true;
                };
                let o = program
                    .oracle_at(area.config.state)
                    .expect("evaluating areas sit at oracle states");
                let taken = branch_taken(program, o, &out);
                area.phase = Phase::Resolved {
                    outcome: taken,
                    children,
                };
                self.kill_subtree(children[if taken { 1 } else { 0 }], r);
                true
            }
        }
    }

    fn record(&self, r: usize) -> AreaRecord {
        let a = &self.areas[r - 1];
        AreaRecord {
            r,
            status: a.status,
            state: self.program.state_name(a.config.state).to_string(),
            heads: a.config.heads(),
            spawned: a.phase.children(),
            killed_by: a.killed_by,
        }
    }

    /// One pass `r = 1..=m` over the sub-areas.
    pub fn round(&mut self) {
        if self.t_flag || self.limit_complete {
            return;
        }
        self.materialize_spawns();
        debug_assert!(self.m.admits(self.areas.len()));
        self.current.clear();
        for r in 1..=self.areas.len() {
            if self.advance(r) {
                self.instructions += 1;
            }
            self.current.push(self.record(r));
            if r == 1 && self.leaf_halted() {
                self.t_flag = true;
                break;
            }
        }
        self.q_flag = self.leaf_running();
        self.rounds += 1;
        self.sub_tapes.push(SubTape {
            round: self.rounds,
            m: self.m,
            records: std::mem::take(&mut self.current),
        });
        self.m = self.m.next();
    }

    /// Rounds until the confirmed branch halts, `fuel` instructions have been
    /// spent, or nothing can change; then marks the state limit-complete.
    pub fn run_to_limit(&mut self, fuel: u64) -> &mut Self {
        while !self.t_flag && !self.limit_complete && self.instructions < fuel && !self.is_quiescent() {
            self.round();
        }
        self.mark_limit_complete();
        self
    }

    pub fn mark_limit_complete(&mut self) {
        if self.limit_complete {
            return;
        }
        self.materialize_spawns();
        self.t_flag = self.t_flag || self.leaf_halted();
        self.q_flag = !self.t_flag && self.leaf_running();
        self.limit_complete = true;
    }

    pub(super) fn areas_mut(&mut self) -> &mut Vec<SubArea> {
        &mut self.areas
    }

    pub(super) fn kill(&mut self, root: usize, by: usize) {
        self.kill_subtree(root, by);
    }
}

/// Value-style wrapper around [`DovetailState::round`].
pub fn dovetail_round(mut s: DovetailState) -> DovetailState {
    s.round();
    s
}
