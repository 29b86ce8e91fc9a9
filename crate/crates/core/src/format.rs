//! The `.tm` text format and the flat `{0,1,#}` encoding used for universal simulation.
//!
//! ```text
//! machine <name>
//! states: s1 s2 ...
//! blank: _
//! alphabet: ...
//! input: ...
//! start: s
//! accept: s1 ...
//! rule: <q> <r1> <r2> -> <q'> <w1> <w2> <M1> <M2>
//! oracle: <q> if <rel> <machine-name> <k...> then <qT> else <qF>
//! tape1: <symbols>
//! end
//! ```
//!
//! `#` starts a comment and tokens are whitespace-separated. `input:`,
//! `rule:`, `oracle:` and `tape1:` are optional. The canonical serialization
//! emits sections in the order above, rules sorted by their left-hand side and
//! oracle lines by state, and omits `input:` when the input alphabet is empty.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::tm::{
    validate_spec, InputError, MachineSpec, Place, RawMachine, RawOracle, RawRule, SpecError,
    Symbol,
};

/// A machine plus the optional input given on its `tape1:` line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub machine: MachineSpec,
    pub input: Option<Vec<Symbol>>,
}

impl Program {
    pub fn input_or_empty(&self) -> &[Symbol] {
        self.input.as_deref().unwrap_or(&[])
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: SpecError },
    #[error("line {line}: {source}")]
    Input { line: usize, source: InputError },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match self {
            ParseError::Syntax { line, .. }
            | ParseError::Invalid { line, .. }
            | ParseError::Input { line, .. } => *line,
        }
    }
}

#[derive(Default)]
struct Lines {
    machine: usize,
    states: Option<usize>,
    blank: Option<usize>,
    alphabet: Option<usize>,
    input: Option<usize>,
    start: Option<usize>,
    accept: Option<usize>,
    rules: Vec<usize>,
    oracles: Vec<usize>,
}

impl Lines {
    fn of(&self, place: Place) -> usize {
        let l = match place {
            Place::Name => None,
            Place::States => self.states,
            Place::Blank => self.blank,
            Place::Alphabet => self.alphabet,
            Place::Input => self.input,
            Place::Start => self.start,
            Place::Accept => self.accept,
            Place::Rule(i) => self.rules.get(i).copied(),
            Place::Oracle(i) => self.oracles.get(i).copied(),
        };
        l.unwrap_or(self.machine)
    }
}

fn syntax(line: usize, reason: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        reason: reason.into(),
    }
}

fn set_once<T>(slot: &mut Option<T>, value: T, line: usize, key: &str) -> Result<(), ParseError> {
    if slot.is_some() {
        return Err(syntax(line, format!("duplicate `{key}` section")));
    }
    *slot = Some(value);
    Ok(())
}

fn single(tokens: &[&str], line: usize, key: &str) -> Result<String, ParseError> {
    match tokens {
        [one] => Ok(one.to_string()),
        _ => Err(syntax(
            line,
            format!("`{key}` takes exactly one token, found {}", tokens.len()),
        )),
    }
}

fn owned(tokens: &[&str]) -> Vec<String> {
    tokens.iter().map(|s| s.to_string()).collect()
}

pub fn parse(src: &str) -> Result<Program, ParseError> {
    let mut lines = Lines::default();
    let mut raw = RawMachine::default();
    let mut have_machine = false;
    let mut ended = false;
    let (mut states, mut blank, mut alphabet, mut input_alpha, mut start, mut accept) =
        (None, None, None, None, None, None);
    let mut tape1: Option<(usize, Vec<String>)> = None;
    let mut last_line = 0;

    for (idx, text) in src.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = text.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let Some((&key, rest)) = tokens.split_first() else {
            continue;
        };
        if ended {
            return Err(syntax(line, "content after `end`"));
        }
        if !have_machine {
            if key != "machine" {
                return Err(syntax(line, "document must start with `machine <name>`"));
            }
            raw.name = single(rest, line, "machine")?;
            lines.machine = line;
            have_machine = true;
            continue;
        }
        match key {
            "states:" => {
                set_once(&mut states, owned(rest), line, "states")?;
                lines.states = Some(line);
            }
            "blank:" => {
                set_once(&mut blank, single(rest, line, "blank")?, line, "blank")?;
                lines.blank = Some(line);
            }
            "alphabet:" => {
                set_once(&mut alphabet, owned(rest), line, "alphabet")?;
                lines.alphabet = Some(line);
            }
            "input:" => {
                set_once(&mut input_alpha, owned(rest), line, "input")?;
                lines.input = Some(line);
            }
            "start:" => {
                set_once(&mut start, single(rest, line, "start")?, line, "start")?;
                lines.start = Some(line);
            }
            "accept:" => {
                set_once(&mut accept, owned(rest), line, "accept")?;
                lines.accept = Some(line);
            }
            "rule:" => {
                let rule: RawRule = rest.join(" ").parse().map_err(|e| syntax(line, e))?;
                raw.rules.push(rule);
                lines.rules.push(line);
            }
            "oracle:" => {
                let oracle: RawOracle = rest.join(" ").parse().map_err(|e| syntax(line, e))?;
                raw.oracles.push(oracle);
                lines.oracles.push(line);
            }
            "tape1:" => {
                if tape1.is_some() {
                    return Err(syntax(line, "duplicate `tape1` section"));
                }
                tape1 = Some((line, owned(rest)));
            }
            "end" => {
                if !rest.is_empty() {
                    return Err(syntax(line, "`end` takes no arguments"));
                }
                ended = true;
            }
            "machine" => return Err(syntax(line, "only one machine per document")),
            other => return Err(syntax(line, format!("unknown section `{other}`"))),
        }
    }

    if !have_machine {
        return Err(syntax(last_line.max(1), "empty document"));
    }
    if !ended {
        return Err(syntax(last_line + 1, "missing `end`"));
    }
    let missing = |what: &str| syntax(lines.machine, format!("missing `{what}:` section"));
    raw.states = states.ok_or_else(|| missing("states"))?;
    raw.blank = blank.ok_or_else(|| missing("blank"))?;
    raw.alphabet = alphabet.ok_or_else(|| missing("alphabet"))?;
    raw.input_alphabet = input_alpha.unwrap_or_default();
    raw.start = start.ok_or_else(|| missing("start"))?;
    raw.accepting = accept.ok_or_else(|| missing("accept"))?;

    let machine = validate_spec(&raw).map_err(|source| ParseError::Invalid {
        line: lines.of(source.place()),
        source,
    })?;
    let input = match tape1 {
        None => None,
        Some((line, tokens)) => Some(
            machine
                .input_from_tokens(&tokens)
                .map_err(|source| ParseError::Input { line, source })?,
        ),
    };
    Ok(Program { machine, input })
}

fn section(out: &mut String, key: &str, tokens: &[String]) {
    out.push_str(key);
    out.push(':');
    for t in tokens {
        out.push(' ');
        out.push_str(t);
    }
    out.push('\n');
}

/// Canonical text for a machine and optional input.
pub fn serialize(m: &MachineSpec, input: Option<&[Symbol]>) -> String {
    let mut raw = m.to_raw();
    raw.rules.sort_by(|a, b| {
        (&a.state, &a.read[0], &a.read[1]).cmp(&(&b.state, &b.read[0], &b.read[1]))
    });
    raw.oracles.sort_by(|a, b| a.at_state.cmp(&b.at_state));

    let mut out = format!("machine {}\n", raw.name);
    section(&mut out, "states", &raw.states);
    section(&mut out, "blank", std::slice::from_ref(&raw.blank));
    section(&mut out, "alphabet", &raw.alphabet);
    if !raw.input_alphabet.is_empty() {
        section(&mut out, "input", &raw.input_alphabet);
    }
    section(&mut out, "start", std::slice::from_ref(&raw.start));
    section(&mut out, "accept", &raw.accepting);
    for r in &raw.rules {
        out.push_str(&format!("rule: {r}\n"));
    }
    for o in &raw.oracles {
        out.push_str(&format!("oracle: {o}\n"));
    }
    if let Some(input) = input {
        section(&mut out, "tape1", &m.tokens(input));
    }
    out.push_str("end\n");
    out
}

pub fn serialize_program(p: &Program) -> String {
    serialize(&p.machine, p.input.as_deref())
}

/// Symbols of the universal alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UniversalSymbol {
    Zero,
    One,
    /// Record terminator, written `#`.
    Mark,
}

impl UniversalSymbol {
    pub fn as_char(self) -> char {
        match self {
            UniversalSymbol::Zero => '0',
            UniversalSymbol::One => '1',
            UniversalSymbol::Mark => '#',
        }
    }

    /// Token used when the encoding is placed on a machine tape. `#` cannot
    /// be a `.tm` token, so the terminator becomes `|` there.
    pub fn tape_token(self) -> &'static str {
        match self {
            UniversalSymbol::Zero => "0",
            UniversalSymbol::One => "1",
            UniversalSymbol::Mark => "|",
        }
    }
}

/// Canonical text, one record per line, each character as 7 bits (most significant first).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EncodedMachine {
    pub symbols: Vec<UniversalSymbol>,
}

impl EncodedMachine {
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn tape_tokens(&self) -> Vec<&'static str> {
        self.symbols.iter().map(|s| s.tape_token()).collect()
    }

    pub fn from_tape_tokens<S: AsRef<str>>(tokens: &[S]) -> Result<Self, DecodeError> {
        tokens
            .iter()
            .map(|t| match t.as_ref() {
                "0" => Ok(UniversalSymbol::Zero),
                "1" => Ok(UniversalSymbol::One),
                "|" => Ok(UniversalSymbol::Mark),
                other => Err(DecodeError::BadSymbol(other.to_string())),
            })
            .collect::<Result<_, _>>()
            .map(|symbols| EncodedMachine { symbols })
    }
}

impl fmt::Display for EncodedMachine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.symbols {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for EncodedMachine {
    type Err = DecodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(UniversalSymbol::Zero),
                '1' => Ok(UniversalSymbol::One),
                '#' => Ok(UniversalSymbol::Mark),
                other => Err(DecodeError::BadSymbol(other.to_string())),
            })
            .collect::<Result<_, _>>()
            .map(|symbols| EncodedMachine { symbols })
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DecodeError {
    #[error("`{0}` is not a universal tape symbol")]
    BadSymbol(String),
    #[error("record {record} has {bits} bits, not a multiple of 7")]
    RaggedRecord { record: usize, bits: usize },
    #[error("encoding does not end with a record terminator")]
    Unterminated,
    #[error("decoded character {0:#04x} is not printable")]
    BadCharacter(u8),
    #[error("decoded text is not a valid machine: {0}")]
    Parse(#[from] ParseError),
}

pub fn encode_for_universal(m: &MachineSpec, input: Option<&[Symbol]>) -> EncodedMachine {
    let text = serialize(m, input);
    let mut symbols = Vec::with_capacity(text.len() * 8);
    for line in text.lines() {
        for b in line.bytes() {
            debug_assert!(b.is_ascii());
            for bit in (0..7).rev() {
                symbols.push(if (b >> bit) & 1 == 1 {
                    UniversalSymbol::One
                } else {
                    UniversalSymbol::Zero
                });
            }
        }
        symbols.push(UniversalSymbol::Mark);
    }
    EncodedMachine { symbols }
}

/// The canonical text an encoding stands for.
pub fn decode_text(e: &EncodedMachine) -> Result<String, DecodeError> {
    let mut text = String::new();
    let mut bits: Vec<u8> = Vec::new();
    let mut record = 0;
    for &s in &e.symbols {
        match s {
            UniversalSymbol::Zero => bits.push(0),
            UniversalSymbol::One => bits.push(1),
            UniversalSymbol::Mark => {
                if !bits.len().is_multiple_of(7) {
                    return Err(DecodeError::RaggedRecord {
                        record,
                        bits: bits.len(),
                    });
                }
                for chunk in bits.chunks(7) {
                    let b = chunk.iter().fold(0u8, |acc, &x| (acc << 1) | x);
                    if !(b.is_ascii_graphic() || b == b' ') {
                        return Err(DecodeError::BadCharacter(b));
                    }
                    text.push(b as char);
                }
                text.push('\n');
                bits.clear();
                record += 1;
            }
        }
    }
    if !bits.is_empty() {
        return Err(DecodeError::Unterminated);
    }
    Ok(text)
}

pub fn decode(e: &EncodedMachine) -> Result<Program, DecodeError> {
    Ok(parse(&decode_text(e)?)?)
}

/// The encoding of `m` (without input) as input tokens for another machine.
pub fn program_tape(m: &MachineSpec) -> Vec<&'static str> {
    encode_for_universal(m, None).tape_tokens()
}
