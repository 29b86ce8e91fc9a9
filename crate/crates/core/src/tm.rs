//! Two-tape deterministic Turing machines: validation, single steps and fuel-bounded runs.
//!
//! A [`MachineSpec`] is the validated 7-tuple `⟨Q, Γ, b, Σ, δ, q0, F⟩`. States and
//! symbols are interned to small indices; names are kept for rendering and for
//! the textual format. `δ` is partial. When it is undefined on the current
//! `(state, read1, read2)` the machine is stuck, which is a non-accepting halt.
//!
//! Tapes are bi-infinite and sparse. Input goes on tape 1 starting at cell 0,
//! both heads start at cell 0.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::ordinal::OrdinalTime;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(u16);

impl Symbol {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(u16);

impl StateId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    L,
    N,
    R,
}

impl Move {
    pub fn offset(self) -> i64 {
        match self {
            Move::L => -1,
            Move::N => 0,
            Move::R => 1,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            Move::L => "L",
            Move::N => "N",
            Move::R => "R",
        }
    }
}

impl FromStr for Move {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "L" => Ok(Move::L),
            "N" => Ok(Move::N),
            "R" => Ok(Move::R),
            other => Err(format!("invalid move `{other}` (expected L, N or R)")),
        }
    }
}

/// Relation used by an oracle branch `if (R(f(x), k))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Eq,
    Le,
    Ge,
    Lt,
    Gt,
}

impl Relation {
    pub fn token(self) -> &'static str {
        match self {
            Relation::Eq => "==",
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Lt => "<",
            Relation::Gt => ">",
        }
    }

    /// Compares two token strings: symbol-wise for `==`, lexicographically for the order relations.
    pub fn holds<S: AsRef<str>, T: AsRef<str>>(self, lhs: &[S], rhs: &[T]) -> bool {
        let ord = lhs.iter().map(AsRef::as_ref).cmp(rhs.iter().map(AsRef::as_ref));
        match self {
            Relation::Eq => ord.is_eq(),
            Relation::Le => ord.is_le(),
            Relation::Ge => ord.is_ge(),
            Relation::Lt => ord.is_lt(),
            Relation::Gt => ord.is_gt(),
        }
    }
}

impl FromStr for Relation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "==" => Ok(Relation::Eq),
            "<=" => Ok(Relation::Le),
            ">=" => Ok(Relation::Ge),
            "<" => Ok(Relation::Lt),
            ">" => Ok(Relation::Gt),
            other => Err(format!("invalid relation `{other}` (expected ==, <=, >=, < or >)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Action {
    pub next: StateId,
    pub write: [Symbol; 2],
    pub moves: [Move; 2],
}

/// A structured branch `if (R(f(x), k)) goto true_state else goto false_state`
/// attached to a state. Plain stepping treats such a state as stuck; the
/// dovetail scheduler gives it meaning.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OracleIf {
    pub at_state: StateId,
    pub relation: Relation,
    pub oracle: String,
    pub threshold: Vec<Symbol>,
    pub true_state: StateId,
    pub false_state: StateId,
}

/// Unvalidated, name-based machine description.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RawMachine {
    pub name: String,
    pub states: Vec<String>,
    pub blank: String,
    pub alphabet: Vec<String>,
    pub input_alphabet: Vec<String>,
    pub start: String,
    pub accepting: Vec<String>,
    pub rules: Vec<RawRule>,
    pub oracles: Vec<RawOracle>,
}

/// `q r1 r2 -> q' w1 w2 M1 M2`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawRule {
    pub state: String,
    pub read: [String; 2],
    pub next: String,
    pub write: [String; 2],
    pub moves: [Move; 2],
}

impl FromStr for RawRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: Vec<&str> = s.split_whitespace().collect();
        if t.len() != 9 {
            return Err(format!(
                "rule needs 9 tokens `q r1 r2 -> q' w1 w2 M1 M2`, found {}",
                t.len()
            ));
        }
        if t[3] != "->" {
            return Err(format!("expected `->` as the 4th rule token, found `{}`", t[3]));
        }
        Ok(RawRule {
            state: t[0].to_string(),
            read: [t[1].to_string(), t[2].to_string()],
            next: t[4].to_string(),
            write: [t[5].to_string(), t[6].to_string()],
            moves: [t[7].parse()?, t[8].parse()?],
        })
    }
}

impl fmt::Display for RawRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} -> {} {} {} {} {}",
            self.state,
            self.read[0],
            self.read[1],
            self.next,
            self.write[0],
            self.write[1],
            self.moves[0].token(),
            self.moves[1].token()
        )
    }
}

/// `q if R f k... then qT else qF`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawOracle {
    pub at_state: String,
    pub relation: Relation,
    pub oracle: String,
    pub threshold: Vec<String>,
    pub true_state: String,
    pub false_state: String,
}

impl FromStr for RawOracle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: Vec<&str> = s.split_whitespace().collect();
        let n = t.len();
        if n < 7 {
            return Err(format!(
                "oracle needs `q if R f k... then qT else qF`, found {n} tokens"
            ));
        }
        if t[1] != "if" {
            return Err(format!("expected `if` as the 2nd oracle token, found `{}`", t[1]));
        }
        if t[n - 4] != "then" || t[n - 2] != "else" {
            return Err("oracle must end with `then <state> else <state>`".to_string());
        }
        Ok(RawOracle {
            at_state: t[0].to_string(),
            relation: t[2].parse()?,
            oracle: t[3].to_string(),
            threshold: t[4..n - 4].iter().map(|s| s.to_string()).collect(),
            true_state: t[n - 3].to_string(),
            false_state: t[n - 1].to_string(),
        })
    }
}

impl fmt::Display for RawOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} if {} {}", self.at_state, self.relation.token(), self.oracle)?;
        for k in &self.threshold {
            write!(f, " {k}")?;
        }
        write!(f, " then {} else {}", self.true_state, self.false_state)
    }
}

/// Where in a machine description a validation error was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Place {
    Name,
    States,
    Blank,
    Alphabet,
    Input,
    Start,
    Accept,
    Rule(usize),
    Oracle(usize),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Name => write!(f, "machine name"),
            Place::States => write!(f, "states"),
            Place::Blank => write!(f, "blank"),
            Place::Alphabet => write!(f, "alphabet"),
            Place::Input => write!(f, "input alphabet"),
            Place::Start => write!(f, "start state"),
            Place::Accept => write!(f, "accepting states"),
            Place::Rule(i) => write!(f, "rule #{}", i + 1),
            Place::Oracle(i) => write!(f, "oracle #{}", i + 1),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SpecError {
    #[error("blank symbol `{0}` may not be an input symbol")]
    BlankInInput(String),
    #[error("{place} is defined on accepting state `{state}`")]
    RuleFromAccepting { state: String, place: Place },
    #[error("unknown symbol `{symbol}` in {place}")]
    UnknownSymbol { symbol: String, place: Place },
    #[error("unknown state `{state}` in {place}")]
    UnknownState { state: String, place: Place },
    #[error("{place} duplicates the left-hand side ({state}, {read1}, {read2})")]
    DuplicateRule {
        state: String,
        read1: String,
        read2: String,
        place: Place,
    },
    #[error("`{name}` is listed twice in {place}")]
    DuplicateName { name: String, place: Place },
    #[error("invalid name `{name}` in {place}: names are non-empty printable ASCII without `#`")]
    InvalidName { name: String, place: Place },
    #[error("{place} must not be empty")]
    Empty { place: Place },
    #[error("{place}: state `{state}` already has a transition or another oracle branch")]
    OracleConflict { state: String, place: Place },
    #[error("{place} exceeds the supported size")]
    TooLarge { place: Place },
}

impl SpecError {
    pub fn place(&self) -> Place {
        match self {
            SpecError::BlankInInput(_) => Place::Input,
            SpecError::RuleFromAccepting { place, .. }
            | SpecError::UnknownSymbol { place, .. }
            | SpecError::UnknownState { place, .. }
            | SpecError::DuplicateRule { place, .. }
            | SpecError::DuplicateName { place, .. }
            | SpecError::InvalidName { place, .. }
            | SpecError::Empty { place }
            | SpecError::OracleConflict { place, .. }
            | SpecError::TooLarge { place } => *place,
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum InputError {
    #[error("input symbol `{symbol}` at position {position} is not in the input alphabet")]
    InputSymbolNotInSigma { symbol: String, position: usize },
}

pub(crate) fn is_valid_name(name: &str) -> bool {
    !name.is_empty() && name.bytes().all(|b| b.is_ascii_graphic() && b != b'#')
}

/// The validated machine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachineSpec {
    name: String,
    states: Vec<String>,
    alphabet: Vec<String>,
    blank: Symbol,
    input_alphabet: Vec<Symbol>,
    start: StateId,
    accepting: Vec<StateId>,
    accepting_mask: Vec<bool>,
    input_mask: Vec<bool>,
    // dense δ indexed by (state, read1, read2)
    table: Vec<Option<Action>>,
    oracle_rules: Vec<OracleIf>,
}

fn index_names(names: &[String], place: Place) -> Result<Vec<(String, u16)>, SpecError> {
    if names.is_empty() {
        return Err(SpecError::Empty { place });
    }
    if names.len() > u16::MAX as usize {
        return Err(SpecError::TooLarge { place });
    }
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(names.len());
    for (i, n) in names.iter().enumerate() {
        if !is_valid_name(n) {
            return Err(SpecError::InvalidName { name: n.clone(), place });
        }
        if !seen.insert(n.as_str()) {
            return Err(SpecError::DuplicateName { name: n.clone(), place });
        }
        out.push((n.clone(), i as u16));
    }
    Ok(out)
}

/// Checks every invariant of the 7-tuple and interns names.
pub fn validate_spec(raw: &RawMachine) -> Result<MachineSpec, SpecError> {
    if !is_valid_name(&raw.name) {
        return Err(SpecError::InvalidName {
            name: raw.name.clone(),
            place: Place::Name,
        });
    }
    let states: std::collections::HashMap<String, u16> =
        index_names(&raw.states, Place::States)?.into_iter().collect();
    let symbols: std::collections::HashMap<String, u16> =
        index_names(&raw.alphabet, Place::Alphabet)?.into_iter().collect();

    let state = |name: &str, place: Place| {
        states.get(name).map(|&i| StateId(i)).ok_or_else(|| SpecError::UnknownState {
            state: name.to_string(),
            place,
        })
    };
    let symbol = |name: &str, place: Place| {
        symbols.get(name).map(|&i| Symbol(i)).ok_or_else(|| SpecError::UnknownSymbol {
            symbol: name.to_string(),
            place,
        })
    };

    let blank = symbol(&raw.blank, Place::Blank)?;

    let mut input_mask = vec![false; raw.alphabet.len()];
    let mut input_alphabet = Vec::with_capacity(raw.input_alphabet.len());
    for name in &raw.input_alphabet {
        let s = symbol(name, Place::Input)?;
        if s == blank {
            return Err(SpecError::BlankInInput(name.clone()));
        }
        if input_mask[s.index()] {
            return Err(SpecError::DuplicateName {
                name: name.clone(),
                place: Place::Input,
            });
        }
        input_mask[s.index()] = true;
        input_alphabet.push(s);
    }

    let start = state(&raw.start, Place::Start)?;

    let mut accepting_mask = vec![false; raw.states.len()];
    let mut accepting = Vec::with_capacity(raw.accepting.len());
    for name in &raw.accepting {
        let q = state(name, Place::Accept)?;
        if accepting_mask[q.index()] {
            return Err(SpecError::DuplicateName {
                name: name.clone(),
                place: Place::Accept,
            });
        }
        accepting_mask[q.index()] = true;
        accepting.push(q);
    }

    let g = raw.alphabet.len();
    let mut table: Vec<Option<Action>> = vec![None; raw.states.len() * g * g];
    let mut has_rules = vec![false; raw.states.len()];
    for (i, rule) in raw.rules.iter().enumerate() {
        let place = Place::Rule(i);
        let q = state(&rule.state, place)?;
        if accepting_mask[q.index()] {
            return Err(SpecError::RuleFromAccepting {
                state: rule.state.clone(),
                place,
            });
        }
        let r1 = symbol(&rule.read[0], place)?;
        let r2 = symbol(&rule.read[1], place)?;
        let action = Action {
            next: state(&rule.next, place)?,
            write: [symbol(&rule.write[0], place)?, symbol(&rule.write[1], place)?],
            moves: rule.moves,
        };
        let slot = &mut table[(q.index() * g + r1.index()) * g + r2.index()];
        if slot.is_some() {
            return Err(SpecError::DuplicateRule {
                state: rule.state.clone(),
                read1: rule.read[0].clone(),
                read2: rule.read[1].clone(),
                place,
            });
        }
        *slot = Some(action);
        has_rules[q.index()] = true;
    }

    let mut oracle_rules = Vec::with_capacity(raw.oracles.len());
    for (i, o) in raw.oracles.iter().enumerate() {
        let place = Place::Oracle(i);
        let at_state = state(&o.at_state, place)?;
        if accepting_mask[at_state.index()] {
            return Err(SpecError::RuleFromAccepting {
                state: o.at_state.clone(),
                place,
            });
        }
        if has_rules[at_state.index()] {
            return Err(SpecError::OracleConflict {
                state: o.at_state.clone(),
                place,
            });
        }
        has_rules[at_state.index()] = true;
        if !is_valid_name(&o.oracle) {
            return Err(SpecError::InvalidName {
                name: o.oracle.clone(),
                place,
            });
        }
        let threshold = o
            .threshold
            .iter()
            .map(|k| symbol(k, place))
            .collect::<Result<Vec<_>, _>>()?;
        oracle_rules.push(OracleIf {
            at_state,
            relation: o.relation,
            oracle: o.oracle.clone(),
            threshold,
            true_state: state(&o.true_state, place)?,
            false_state: state(&o.false_state, place)?,
        });
    }

    Ok(MachineSpec {
        name: raw.name.clone(),
        states: raw.states.clone(),
        alphabet: raw.alphabet.clone(),
        blank,
        input_alphabet,
        start,
        accepting,
        accepting_mask,
        input_mask,
        table,
        oracle_rules,
    })
}

impl MachineSpec {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn symbol_names(&self) -> &[String] {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.states.len()).map(|i| StateId(i as u16))
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.alphabet.len()).map(|i| Symbol(i as u16))
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q.index()]
    }

    pub fn symbol_name(&self, s: Symbol) -> &str {
        &self.alphabet[s.index()]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name).map(|i| StateId(i as u16))
    }

    pub fn symbol(&self, name: &str) -> Option<Symbol> {
        self.alphabet.iter().position(|s| s == name).map(|i| Symbol(i as u16))
    }

    pub fn blank(&self) -> Symbol {
        self.blank
    }

    pub fn input_alphabet(&self) -> &[Symbol] {
        &self.input_alphabet
    }

    pub fn in_input_alphabet(&self, s: Symbol) -> bool {
        self.input_mask.get(s.index()).copied().unwrap_or(false)
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn accepting(&self) -> &[StateId] {
        &self.accepting
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting_mask[q.index()]
    }

    pub fn rule(&self, q: StateId, read1: Symbol, read2: Symbol) -> Option<&Action> {
        let g = self.alphabet.len();
        self.table[(q.index() * g + read1.index()) * g + read2.index()].as_ref()
    }

    /// All defined transitions as `((state, read1, read2), action)`.
    pub fn rules(&self) -> impl Iterator<Item = ((StateId, Symbol, Symbol), &Action)> + '_ {
        let g = self.alphabet.len();
        self.table.iter().enumerate().filter_map(move |(i, a)| {
            a.as_ref().map(|a| {
                let q = StateId((i / (g * g)) as u16);
                let r1 = Symbol(((i / g) % g) as u16);
                let r2 = Symbol((i % g) as u16);
                ((q, r1, r2), a)
            })
        })
    }

    pub fn rule_count(&self) -> usize {
        self.table.iter().filter(|a| a.is_some()).count()
    }

    pub fn oracle_rules(&self) -> &[OracleIf] {
        &self.oracle_rules
    }

    pub fn oracle_at(&self, q: StateId) -> Option<&OracleIf> {
        self.oracle_rules.iter().find(|o| o.at_state == q)
    }

    /// Maps tokens to input symbols.
    pub fn input_from_tokens<S: AsRef<str>>(&self, tokens: &[S]) -> Result<Vec<Symbol>, InputError> {
        tokens
            .iter()
            .enumerate()
            .map(|(position, t)| {
                self.symbol(t.as_ref())
                    .filter(|&s| self.in_input_alphabet(s))
                    .ok_or_else(|| InputError::InputSymbolNotInSigma {
                        symbol: t.as_ref().to_string(),
                        position,
                    })
            })
            .collect()
    }

    pub fn tokens(&self, symbols: &[Symbol]) -> Vec<String> {
        symbols.iter().map(|&s| self.symbol_name(s).to_string()).collect()
    }

    /// The name-based description this machine was validated from (up to rule order).
    pub fn to_raw(&self) -> RawMachine {
        let names = |v: &[Symbol]| v.iter().map(|&s| self.symbol_name(s).to_string()).collect();
        RawMachine {
            name: self.name.clone(),
            states: self.states.clone(),
            blank: self.symbol_name(self.blank).to_string(),
            alphabet: self.alphabet.clone(),
            input_alphabet: names(&self.input_alphabet),
            start: self.state_name(self.start).to_string(),
            accepting: self
                .accepting
                .iter()
                .map(|&q| self.state_name(q).to_string())
                .collect(),
            rules: self
                .rules()
                .map(|((q, r1, r2), a)| RawRule {
                    state: self.state_name(q).to_string(),
                    read: [self.symbol_name(r1).to_string(), self.symbol_name(r2).to_string()],
                    next: self.state_name(a.next).to_string(),
                    write: [
                        self.symbol_name(a.write[0]).to_string(),
                        self.symbol_name(a.write[1]).to_string(),
                    ],
                    moves: a.moves,
                })
                .collect(),
            oracles: self
                .oracle_rules
                .iter()
                .map(|o| RawOracle {
                    at_state: self.state_name(o.at_state).to_string(),
                    relation: o.relation,
                    oracle: o.oracle.clone(),
                    threshold: names(&o.threshold),
                    true_state: self.state_name(o.true_state).to_string(),
                    false_state: self.state_name(o.false_state).to_string(),
                })
                .collect(),
        }
    }
}

/// Sparse bi-infinite tape. Only non-blank cells are stored, so two tapes with
/// the same contents and head compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tape {
    cells: BTreeMap<i64, Symbol>,
    head: i64,
    blank: Symbol,
}

impl Tape {
    pub fn blank(blank: Symbol) -> Self {
        Tape {
            cells: BTreeMap::new(),
            head: 0,
            blank,
        }
    }

    pub fn with_contents(blank: Symbol, contents: &[Symbol]) -> Self {
        let mut tape = Tape::blank(blank);
        for (i, &s) in contents.iter().enumerate() {
            tape.write_at(i as i64, s);
        }
        tape
    }

    pub fn head(&self) -> i64 {
        self.head
    }

    pub fn read(&self) -> Symbol {
        self.read_at(self.head)
    }

    pub fn read_at(&self, cell: i64) -> Symbol {
        self.cells.get(&cell).copied().unwrap_or(self.blank)
    }

    pub fn write(&mut self, s: Symbol) {
        self.write_at(self.head, s);
    }

    pub fn write_at(&mut self, cell: i64, s: Symbol) {
        if s == self.blank {
            self.cells.remove(&cell);
        } else {
            self.cells.insert(cell, s);
        }
    }

    pub fn shift(&mut self, m: Move) {
        self.head += m.offset();
    }

    pub fn set_head(&mut self, cell: i64) {
        self.head = cell;
    }

    pub fn non_blank_count(&self) -> usize {
        self.cells.len()
    }

    /// Non-blank cells in index order.
    pub fn cells(&self) -> impl Iterator<Item = (i64, Symbol)> + '_ {
        self.cells.iter().map(|(&i, &s)| (i, s))
    }

    /// Everything from the leftmost to the rightmost non-blank cell, interior blanks included.
    pub fn contents(&self) -> Vec<Symbol> {
        match (self.cells.keys().next(), self.cells.keys().next_back()) {
            (Some(&lo), Some(&hi)) => (lo..=hi).map(|i| self.read_at(i)).collect(),
            _ => Vec::new(),
        }
    }

    /// The maximal run of non-blank cells ending just left of the head.
    pub fn word_left_of_head(&self) -> Vec<Symbol> {
        let mut word = Vec::new();
        let mut i = self.head - 1;
        while let Some(&s) = self.cells.get(&i) {
            word.push(s);
            i -= 1;
        }
        word.reverse();
        word
    }
}

/// Instantaneous description of a running machine.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub state: StateId,
    pub tape1: Tape,
    pub tape2: Tape,
    pub steps: OrdinalTime,
}

impl Configuration {
    /// Equal control state, tape contents and heads; elapsed time is ignored.
    pub fn same_instant(&self, other: &Configuration) -> bool {
        self.state == other.state && self.tape1 == other.tape1 && self.tape2 == other.tape2
    }

    /// Hashable key of [`Self::same_instant`].
    pub fn instant(&self) -> (StateId, Tape, Tape) {
        (self.state, self.tape1.clone(), self.tape2.clone())
    }

    pub fn heads(&self) -> (i64, i64) {
        (self.tape1.head(), self.tape2.head())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepOutcome {
    Continued,
    AcceptHalt,
    StuckHalt,
}

impl StepOutcome {
    pub fn is_halt(self) -> bool {
        self != StepOutcome::Continued
    }
}

pub fn initial_config(m: &MachineSpec, input: &[Symbol]) -> Result<Configuration, InputError> {
    if let Some((position, &s)) = input
        .iter()
        .enumerate()
        .find(|(_, &s)| !m.in_input_alphabet(s))
    {
        let symbol = m
            .symbol_names()
            .get(s.index())
            .cloned()
            .unwrap_or_else(|| format!("#{}", s.index()));
        return Err(InputError::InputSymbolNotInSigma { symbol, position });
    }
    Ok(Configuration {
        state: m.start(),
        tape1: Tape::with_contents(m.blank(), input),
        tape2: Tape::blank(m.blank()),
        steps: OrdinalTime::ZERO,
    })
}

/// The halting outcome `c` would produce if stepped, or `None` if a transition applies.
pub fn halting_outcome(c: &Configuration, m: &MachineSpec) -> Option<StepOutcome> {
    if m.is_accepting(c.state) {
        Some(StepOutcome::AcceptHalt)
    } else if m.rule(c.state, c.tape1.read(), c.tape2.read()).is_none() {
        Some(StepOutcome::StuckHalt)
    } else {
        None
    }
}

/// In-place single step. Writes on both tapes happen before either head moves.
pub fn step_mut(c: &mut Configuration, m: &MachineSpec) -> StepOutcome {
    if m.is_accepting(c.state) {
        return StepOutcome::AcceptHalt;
    }
    let Some(action) = m.rule(c.state, c.tape1.read(), c.tape2.read()) else {
        return StepOutcome::StuckHalt;
    };
    c.tape1.write(action.write[0]);
    c.tape2.write(action.write[1]);
    c.tape1.shift(action.moves[0]);
    c.tape2.shift(action.moves[1]);
    c.state = action.next;
    c.steps = c.steps.succ();
    StepOutcome::Continued
}

pub fn step(c: &Configuration, m: &MachineSpec) -> (Configuration, StepOutcome) {
    let mut next = c.clone();
    let outcome = step_mut(&mut next, m);
    (next, outcome)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunResult {
    Halted {
        outcome: StepOutcome,
        steps_used: u64,
        config: Configuration,
    },
    Exhausted {
        config: Configuration,
    },
}

impl RunResult {
    pub fn config(&self) -> &Configuration {
        match self {
            RunResult::Halted { config, .. } | RunResult::Exhausted { config } => config,
        }
    }

    pub fn into_config(self) -> Configuration {
        match self {
            RunResult::Halted { config, .. } | RunResult::Exhausted { config } => config,
        }
    }

    pub fn is_halted(&self) -> bool {
        matches!(self, RunResult::Halted { .. })
    }

    pub fn outcome(&self) -> Option<StepOutcome> {
        match self {
            RunResult::Halted { outcome, .. } => Some(*outcome),
            RunResult::Exhausted { .. } => None,
        }
    }

    pub fn steps_used(&self) -> u64 {
        match self {
            RunResult::Halted { steps_used, .. } => *steps_used,
            RunResult::Exhausted { config } => config.steps.finite_part(),
        }
    }
}

/// Calls `step` at most `fuel` times, stopping at the first halt.
pub fn run_from(mut config: Configuration, m: &MachineSpec, fuel: u64) -> RunResult {
    let mut used = 0;
    for _ in 0..fuel {
        match step_mut(&mut config, m) {
            StepOutcome::Continued => used += 1,
            outcome => {
                return RunResult::Halted {
                    outcome,
                    steps_used: used,
                    config,
                }
            }
        }
    }
    RunResult::Exhausted { config }
}

pub fn run(m: &MachineSpec, input: &[Symbol], fuel: u64) -> Result<RunResult, InputError> {
    Ok(run_from(initial_config(m, input)?, m, fuel))
}
