//! Named oracle implementations, incremental oracle evaluation, and the
//! reference interpreter that evaluates every oracle branch inline.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::tm::{
    halting_outcome, initial_config, step_mut, Configuration, MachineSpec, OracleIf, StepOutcome,
};

use super::DovetailError;

/// What a name in an `oracle:` line refers to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleImpl {
    /// A machine run on `x`; its output is the content of its second tape when it halts.
    Machine(Arc<MachineSpec>),
    /// Answers immediately with a fixed token string.
    Stub(Vec<String>),
    /// The limit-assisted decider itself. It never answers at finite truncation.
    Decider,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OracleRegistry {
    entries: BTreeMap<String, OracleImpl>,
}

impl OracleRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register_machine(&mut self, m: MachineSpec) -> &mut Self {
        self.entries
            .insert(m.name().to_string(), OracleImpl::Machine(Arc::new(m)));
        self
    }

    pub fn register_stub<S: Into<String>>(&mut self, name: &str, output: impl IntoIterator<Item = S>) -> &mut Self {
        self.entries.insert(
            name.to_string(),
            OracleImpl::Stub(output.into_iter().map(Into::into).collect()),
        );
        self
    }

    pub fn register_decider(&mut self, name: &str) -> &mut Self {
        self.entries.insert(name.to_string(), OracleImpl::Decider);
        self
    }

    pub fn get(&self, name: &str) -> Option<&OracleImpl> {
        self.entries.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Fails on the first oracle line of `p` whose name is not registered.
    pub fn check_program(&self, p: &MachineSpec) -> Result<(), DovetailError> {
        match p.oracle_rules().iter().find(|o| !self.contains(&o.oracle)) {
            Some(o) => Err(DovetailError::UnknownMachine(o.oracle.clone())),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum EvalKind {
    Running {
        spec: Arc<MachineSpec>,
        config: Configuration,
    },
    Answer(Vec<String>),
    Never,
}

/// An oracle call in progress, advanced one instruction at a time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleEval {
    kind: EvalKind,
    done: bool,
    advances: u64,
}

impl OracleEval {
    /// `x` is the branch's tape-1 word left of the head, as token names. A word
    /// the oracle machine cannot read makes the call unresolvable.
    pub fn start(registry: &OracleRegistry, o: &OracleIf, x: &[String]) -> Result<Self, DovetailError> {
        let kind = match registry.get(&o.oracle) {
            None => return Err(DovetailError::UnknownMachine(o.oracle.clone())),
            Some(OracleImpl::Decider) => EvalKind::Never,
            Some(OracleImpl::Stub(out)) => EvalKind::Answer(out.clone()),
            Some(OracleImpl::Machine(spec)) => match spec
                .input_from_tokens(x)
                .ok()
                .and_then(|input| initial_config(spec, &input).ok())
            {
                Some(config) => EvalKind::Running {
                    spec: Arc::clone(spec),
                    config,
                },
                None => EvalKind::Never,
            },
        };
        Ok(OracleEval {
            kind,
            done: false,
            advances: 0,
        })
    }

    /// True when further advances can never produce an answer.
    pub fn is_stalled(&self) -> bool {
        matches!(self.kind, EvalKind::Never)
    }

    pub fn advances(&self) -> u64 {
        self.advances
    }

    pub fn output(&self) -> Option<&[String]> {
        match (&self.kind, self.done) {
            (EvalKind::Answer(out), true) => Some(out),
            _ => None,
        }
    }

    /// One instruction of the oracle. Returns the output once it is known.
    pub fn advance(&mut self) -> Option<&[String]> {
        if self.done {
            return self.output();
        }
        self.advances += 1;
        match &mut self.kind {
            EvalKind::Never => return None,
            EvalKind::Answer(_) => self.done = true,
            EvalKind::Running { spec, config } => {
                let finished = halting_outcome(config, spec).is_some()
                    || (step_mut(config, spec) == StepOutcome::Continued
                        && halting_outcome(config, spec).is_some());
                if finished {
                    let out = spec.tokens(&config.tape2.contents());
                    self.kind = EvalKind::Answer(out);
                    self.done = true;
                }
            }
        }
        self.output()
    }
}

/// The branch an oracle answer selects.
pub fn branch_taken(program: &MachineSpec, o: &OracleIf, output: &[String]) -> bool {
    o.relation.holds(output, &program.tokens(&o.threshold))
}

/// The configuration right after an oracle branch is taken: the branch
/// counts as one instruction.
pub fn branch_config(c: &Configuration, o: &OracleIf, taken: bool) -> Configuration {
    let mut next = c.clone();
    next.state = if taken { o.true_state } else { o.false_state };
    next.steps = next.steps.succ();
    next
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InlineOutcome {
    Halted(StepOutcome),
    Exhausted,
    /// An oracle gave no answer within the fuel.
    Unresolved,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InlineRun {
    pub outcome: InlineOutcome,
    pub config: Configuration,
    /// Program instructions executed, oracle branches included.
    pub instructions: u64,
}

/// Direct run in which every oracle call is evaluated to completion (up to
/// `fuel` oracle instructions) before the branch is taken.
pub fn run_inline_from(
    mut config: Configuration,
    p: &MachineSpec,
    registry: &OracleRegistry,
    fuel: u64,
) -> Result<InlineRun, DovetailError> {
    let mut instructions = 0;
    for _ in 0..fuel {
        if let Some(o) = p.oracle_at(config.state) {
            let x = p.tokens(&config.tape1.word_left_of_head());
            let mut eval = OracleEval::start(registry, o, &x)?;
            let mut answer = None;
            for _ in 0..fuel {
                if eval.is_stalled() {
                    break;
                }
                if let Some(out) = eval.advance() {
                    answer = Some(out.to_vec());
                    break;
                }
            }
            let Some(out) = answer else {
                return Ok(InlineRun {
                    outcome: InlineOutcome::Unresolved,
                    config,
                    instructions,
                });
            };
            config = branch_config(&config, o, branch_taken(p, o, &out));
            instructions += 1;
            continue;
        }
        match step_mut(&mut config, p) {
            StepOutcome::Continued => instructions += 1,
            halt => {
                return Ok(InlineRun {
                    outcome: InlineOutcome::Halted(halt),
                    config,
                    instructions,
                })
            }
        }
    }
    Ok(InlineRun {
        outcome: InlineOutcome::Exhausted,
        config,
        instructions,
    })
}

pub fn run_inline(
    p: &MachineSpec,
    input: &[crate::tm::Symbol],
    registry: &OracleRegistry,
    fuel: u64,
) -> Result<InlineRun, DovetailError> {
    registry.check_program(p)?;
    run_inline_from(initial_config(p, input)?, p, registry, fuel)
}
