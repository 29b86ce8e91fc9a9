//! Simulation of encoded machines, read-only right-movers as DFAs, and
//! bounded language-equivalence checks.
//!
//! Universal simulation decodes the `{0,1,#}` encoding and interprets the
//! result with the ordinary stepper. It does not build a universal transition
//! table.
//!
//! A right-mover accepts `s` iff it enters an accepting state within `|s|+1`
//! steps from cell 0: one step per input symbol, plus one step on the
//! blank that follows the input.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::format::{decode, DecodeError, EncodedMachine};
use crate::tm::{run, InputError, MachineSpec, Move, RunResult, StepOutcome, Symbol};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SimError {
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error(transparent)]
    Input(#[from] InputError),
}

/// Decode, then run the decoded machine on its own `tape1:` input (empty if absent).
pub fn simulate(e: &EncodedMachine, fuel: u64) -> Result<RunResult, SimError> {
    let program = decode(e)?;
    Ok(run(&program.machine, program.input_or_empty(), fuel)?)
}

/// Every rule writes back what it read, leaves head 2 in place and moves head 1 right.
pub fn is_right_mover(m: &MachineSpec) -> bool {
    m.rules().all(|((_, r1, r2), a)| {
        a.write == [r1, r2] && a.moves == [Move::R, Move::N]
    })
}

/// Complete DFA over named input symbols.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dfa {
    pub states: Vec<String>,
    pub alphabet: Vec<String>,
    /// `transition[state][symbol]`
    pub transition: Vec<Vec<usize>>,
    pub start: usize,
    pub accepting: Vec<bool>,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DfaError {
    #[error("machine `{0}` is not a read-only right-mover")]
    NotRightMover(String),
    #[error("malformed DFA: {0}")]
    Malformed(String),
}

impl Dfa {
    pub fn check(&self) -> Result<(), DfaError> {
        let n = self.states.len();
        let bad = |why: String| Err(DfaError::Malformed(why));
        if n == 0 {
            return bad("no states".into());
        }
        if self.start >= n {
            return bad(format!("start {} out of range", self.start));
        }
        if self.accepting.len() != n || self.transition.len() != n {
            return bad("accepting/transition tables do not match the state count".into());
        }
        for (q, row) in self.transition.iter().enumerate() {
            if row.len() != self.alphabet.len() {
                return bad(format!("state {q} has {} transitions", row.len()));
            }
            if let Some(&t) = row.iter().find(|&&t| t >= n) {
                return bad(format!("state {q} moves to unknown state {t}"));
            }
        }
        Ok(())
    }

    fn symbol_index(&self, token: &str) -> Option<usize> {
        self.alphabet.iter().position(|a| a == token)
    }

    pub fn accepts<S: AsRef<str>>(&self, word: &[S]) -> Option<bool> {
        let mut q = self.start;
        for t in word {
            q = self.transition[q][self.symbol_index(t.as_ref())?];
        }
        Some(self.accepting[q])
    }

    /// True iff no accepting state is reachable from the start.
    pub fn accepts_nothing(&self) -> bool {
        let mut seen = vec![false; self.states.len()];
        let mut queue = VecDeque::from([self.start]);
        seen[self.start] = true;
        while let Some(q) = queue.pop_front() {
            if self.accepting[q] {
                return false;
            }
            for &t in &self.transition[q] {
                if !std::mem::replace(&mut seen[t], true) {
                    queue.push_back(t);
                }
            }
        }
        true
    }
}

const ACCEPT_SINK: &str = "<accept>";
const DEAD_SINK: &str = "<dead>";

pub fn right_mover_to_dfa(m: &MachineSpec) -> Result<Dfa, DfaError> {
    if !is_right_mover(m) {
        return Err(DfaError::NotRightMover(m.name().to_string()));
    }
    let q_count = m.state_count();
    let acc = q_count;
    let dead = q_count + 1;
    let blank = m.blank();
    let sigma = m.input_alphabet();
    let into = |q: crate::tm::StateId, read: Symbol| match m.rule(q, read, blank) {
        Some(a) if m.is_accepting(a.next) => acc,
        Some(a) => a.next.index(),
        None => dead,
    };

    let mut transition = Vec::with_capacity(q_count + 2);
    let mut accepting = Vec::with_capacity(q_count + 2);
    for q in m.states() {
        if m.is_accepting(q) {
            // only reachable as the start state
            transition.push(vec![acc; sigma.len()]);
            accepting.push(true);
            continue;
        }
        transition.push(sigma.iter().map(|&a| into(q, a)).collect());
        accepting.push(into(q, blank) == acc);
    }
    transition.push(vec![acc; sigma.len()]);
    accepting.push(true);
    transition.push(vec![dead; sigma.len()]);
    accepting.push(false);

    let mut states: Vec<String> = m.state_names().to_vec();
    states.push(ACCEPT_SINK.to_string());
    states.push(DEAD_SINK.to_string());
    Ok(Dfa {
        states,
        alphabet: sigma.iter().map(|&s| m.symbol_name(s).to_string()).collect(),
        transition,
        start: m.start().index(),
        accepting,
    })
}

/// Something that accepts or rejects finite strings.
#[derive(Debug, Clone, Copy)]
pub enum Recognizer<'a> {
    /// Accepts by halting in an accepting state within the fuel; a stuck halt rejects.
    Machine(&'a MachineSpec),
    /// Accepts by reaching an accepting state within `|s|+1` steps.
    RightMover(&'a MachineSpec),
    Dfa(&'a Dfa),
}

impl Recognizer<'_> {
    fn alphabet(&self) -> Vec<String> {
        match self {
            Recognizer::Machine(m) | Recognizer::RightMover(m) => m
                .input_alphabet()
                .iter()
                .map(|&s| m.symbol_name(s).to_string())
                .collect(),
            Recognizer::Dfa(d) => d.alphabet.clone(),
        }
    }

    fn accepts(&self, word: &[String], fuel: u64) -> Result<bool, EquivError> {
        match self {
            Recognizer::Dfa(d) => Ok(d.accepts(word).expect("alphabets were checked")),
            Recognizer::Machine(m) => {
                let input = m.input_from_tokens(word).expect("alphabets were checked");
                match run(m, &input, fuel).expect("input is over the input alphabet") {
                    RunResult::Halted { outcome, .. } => Ok(outcome == StepOutcome::AcceptHalt),
                    RunResult::Exhausted { .. } => Err(EquivError::FuelTooSmall {
                        word: word.to_vec(),
                    }),
                }
            }
            Recognizer::RightMover(m) => {
                let budget = word.len() as u64 + 1;
                if fuel < budget {
                    return Err(EquivError::FuelTooSmall {
                        word: word.to_vec(),
                    });
                }
                let input = m.input_from_tokens(word).expect("alphabets were checked");
                let r = run(m, &input, budget).expect("input is over the input alphabet");
                Ok(m.is_accepting(r.config().state))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Equivalence {
    Equivalent,
    /// The shortest differing string, earliest in enumeration order among those.
    Counterexample(Vec<String>),
}

impl fmt::Display for Equivalence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Equivalence::Equivalent => write!(f, "equivalent"),
            Equivalence::Counterexample(w) if w.is_empty() => write!(f, "counterexample: (empty)"),
            Equivalence::Counterexample(w) => write!(f, "counterexample: {}", w.join(" ")),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EquivError {
    #[error("fuel ran out on input {word:?}; the verdict would be unsound")]
    FuelTooSmall { word: Vec<String> },
    #[error("input alphabets differ: {left:?} vs {right:?}")]
    AlphabetMismatch {
        left: Vec<String>,
        right: Vec<String>,
    },
}

/// All words over `alphabet` of length `0..=max_len`, shortest first, then in
/// alphabet order position by position.
pub fn words_up_to(alphabet: &[String], max_len: usize) -> impl Iterator<Item = Vec<String>> + '_ {
    (0..=max_len).flat_map(move |len| {
        let k = alphabet.len();
        let total = if len == 0 { Some(1) } else { k.checked_pow(len as u32) };
        let total = total.expect("enumeration size overflows usize");
        (0..total).map(move |mut i| {
            let mut w = vec![String::new(); len];
            for slot in w.iter_mut().rev() {
                *slot = alphabet[i % k].clone();
                i /= k;
            }
            w
        })
    })
}

pub fn language_equiv_bounded(
    a: Recognizer<'_>,
    b: Recognizer<'_>,
    max_len: usize,
    fuel: u64,
) -> Result<Equivalence, EquivError> {
    let (left, right) = (a.alphabet(), b.alphabet());
    let mut ls = left.clone();
    let mut rs = right.clone();
    ls.sort();
    rs.sort();
    if ls != rs {
        return Err(EquivError::AlphabetMismatch { left, right });
    }
    for w in words_up_to(&left, max_len) {
        if a.accepts(&w, fuel)? != b.accepts(&w, fuel)? {
            return Ok(Equivalence::Counterexample(w));
        }
    }
    Ok(Equivalence::Equivalent)
}
