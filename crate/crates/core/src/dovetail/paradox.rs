use serde::Serialize;

use crate::format::program_tape;
use crate::tm::{validate_spec, MachineSpec, RawMachine, RawOracle, Relation};

use super::decide::{u_decide, UDecision};
use super::oracle::OracleRegistry;
use super::round::DovetailState;
use super::DovetailError;

const LOOP_SYMBOLS: [&str; 4] = ["_", "0", "1", "|"];

/// The diagonal program: answer 1 if `u` says its input does not halt on
/// itself, otherwise loop forever between two states.
pub fn build_program_y(u_name: &str, registry: &OracleRegistry) -> Result<MachineSpec, DovetailError> {
    if !registry.contains(u_name) {
        return Err(DovetailError::UnknownMachine(u_name.to_string()));
    }
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let mut rules = Vec::with_capacity(32);
    for (from, to) in [("loop0", "loop1"), ("loop1", "loop0")] {
        for a in LOOP_SYMBOLS {
            for b in LOOP_SYMBOLS {
                rules.push(
                    format!("{from} {a} {b} -> {to} {a} {b} N N")
                        .parse()
                        .expect("well-formed rule"),
                );
            }
        }
    }
    let raw = RawMachine {
        name: "y".to_string(),
        states: s(&["y0", "yes", "loop0", "loop1"]),
        blank: "_".to_string(),
        alphabet: s(&LOOP_SYMBOLS),
        input_alphabet: s(&["0", "1", "|"]),
        start: "y0".to_string(),
        accepting: s(&["yes"]),
        rules,
        oracles: vec![RawOracle {
            at_state: "y0".to_string(),
            relation: Relation::Eq,
            oracle: u_name.to_string(),
            threshold: s(&["0"]),
            true_state: "yes".to_string(),
            false_state: "loop0".to_string(),
        }],
    };
    Ok(validate_spec(&raw).expect("program y is well-formed"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Observed {
    Halted { steps: u64 },
    ExceedsFuel { fuel: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParadoxRow {
    /// The value forced on `u(y,y)`.
    pub assumption: u8,
    /// What that value asserts about `y(y)`.
    pub claim: &'static str,
    pub observed: Observed,
    pub halts_within_w: bool,
    /// What the dovetail concludes about `y(y)` under the forced answer.
    pub u_output: u8,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParadoxReport {
    pub fuel: u64,
    pub w: u64,
    pub rows: Vec<ParadoxRow>,
    /// The decider's own answer on `(y, y)` when nothing is forced.
    pub unforced: UDecision,
}

fn row(assumption: u8, fuel: u64, w: u64) -> ParadoxRow {
    let mut registry = OracleRegistry::new();
    registry.register_stub("u", [assumption.to_string()]);
    let y = build_program_y("u", &registry).expect("u is registered");
    let input = y.input_from_tokens(&program_tape(&y)).expect("encoding is over y's input alphabet");
    let mut s = DovetailState::new(y, input, registry).expect("y only consults u");
    s.run_to_limit(fuel);
    let leaf = s.confirmed_leaf();
    let observed = if s.t_flag() {
        Observed::Halted {
            steps: leaf.config.steps.finite_part(),
        }
    } else {
        Observed::ExceedsFuel { fuel }
    };
    let halted = matches!(observed, Observed::Halted { .. });
    let u_output = u_decide(&mut s, w).expect("state is limit-complete").bit();
    ParadoxRow {
        assumption,
        claim: if assumption == 1 { "y(y) halts" } else { "y(y) does not halt" },
        observed,
        halts_within_w: matches!(observed, Observed::Halted { steps } if steps <= w),
        u_output,
        consistent: (assumption == 1) == halted,
    }
}

/// Runs `y` on its own encoding with `u` forced to 0 and then to 1.
pub fn paradox_report(fuel: u64, w: u64) -> ParadoxReport {
    let mut registry = OracleRegistry::new();
    registry.register_decider("u");
    let y = build_program_y("u", &registry).expect("u is registered");
    let input = y.input_from_tokens(&program_tape(&y)).expect("encoding is over y's input alphabet");
    let mut s = DovetailState::new(y, input, registry).expect("y only consults u");
    s.run_to_limit(fuel);
    let unforced = u_decide(&mut s, w).expect("state is limit-complete");
    ParadoxReport {
        fuel,
        w,
        rows: vec![row(0, fuel, w), row(1, fuel, w)],
        unforced,
    }
}
