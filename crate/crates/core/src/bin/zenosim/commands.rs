use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde_json::json;
use zenosim::dovetail::{
    build_program_y, classify_halting_profile, paradox_report, trace_records, u_decide,
    DovetailState, OracleRegistry, TraceRecord,
};
use zenosim::format::{encode_for_universal, parse, program_tape, serialize, Program};
use zenosim::tm::{initial_config, step_mut, RunResult, StepOutcome};
use zenosim::universal::{
    is_right_mover, language_equiv_bounded, right_mover_to_dfa, Dfa, Equivalence, Recognizer,
};
use zenosim::{zeno_halt_check, HalvingCounter, ZenoOutcome, ZenoSchedule};

use crate::{Command, OracleArgs, TraceFormat};

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Precondition(String),
    Indefinite(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Indefinite(_) => 2,
            CliError::Precondition(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(m) | CliError::Precondition(m) | CliError::Indefinite(m) => {
                f.write_str(m)
            }
        }
    }
}

type Outcome = Result<u8, CliError>;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Program, CliError> {
    parse(&read(path)?).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string(v).expect("values serialize"));
}

pub fn dispatch(command: Command, fuel: u64) -> Outcome {
    match command {
        Command::Validate { file } => validate(&file),
        Command::Run { file, trace } => run(&file, fuel, trace),
        Command::Zeno {
            file,
            limit_stage,
            mu0,
        } => zeno(&file, fuel, limit_stage, mu0),
        Command::Counter { n, limit, past } => counter(n, limit, past),
        Command::Dovetail {
            file,
            oracles,
            w,
            trace,
        } => dovetail(&file, &oracles, fuel, w, trace),
        Command::Paradox { w } => {
            let report = paradox_report(fuel, w);
            print_json(&serde_json::to_value(report).expect("reports serialize"));
            Ok(0)
        }
        Command::Dfa {
            file,
            max_len,
            against,
            emit,
        } => dfa(&file, max_len, against.as_deref(), emit, fuel),
        Command::Encode { file } => {
            let p = load(&file)?;
            println!("{}", encode_for_universal(&p.machine, p.input.as_deref()));
            Ok(0)
        }
        Command::ProgramY { u } => {
            let mut registry = OracleRegistry::new();
            registry.register_decider(&u);
            let y = build_program_y(&u, &registry).map_err(|e| CliError::Invalid(e.to_string()))?;
            let input = y
                .input_from_tokens(&program_tape(&y))
                .expect("the encoding is over y's input alphabet");
            print!("{}", serialize(&y, Some(&input)));
            Ok(0)
        }
    }
}

fn validate(file: &Path) -> Outcome {
    let p = load(file)?;
    println!(
        "ok: machine {} ({} states, {} rules, {} oracle branches)",
        p.machine.name(),
        p.machine.state_count(),
        p.machine.rule_count(),
        p.machine.oracle_rules().len()
    );
    Ok(0)
}

fn run(file: &Path, fuel: u64, trace: Option<TraceFormat>) -> Outcome {
    let p = load(file)?;
    let m = &p.machine;
    let mut c = initial_config(m, p.input_or_empty()).map_err(|e| CliError::Invalid(e.to_string()))?;
    let mut out = io::stdout().lock();
    let mut result = None;
    for _ in 0..fuel {
        match step_mut(&mut c, m) {
            StepOutcome::Continued => {
                let step = c.steps.finite_part();
                let state = m.state_name(c.state);
                let (h1, h2) = c.heads();
                match trace {
                    Some(TraceFormat::Jsonl) => {
                        let line = json!({"step": step, "state": state, "head1": h1, "head2": h2});
                        writeln!(out, "{line}").ok();
                    }
                    Some(TraceFormat::Text) => {
                        writeln!(out, "step {step} state={state} heads=({h1},{h2})").ok();
                    }
                    None => {}
                }
            }
            outcome => {
                result = Some(RunResult::Halted {
                    outcome,
                    steps_used: c.steps.finite_part(),
                    config: c.clone(),
                });
                break;
            }
        }
    }
    let result = result.unwrap_or(RunResult::Exhausted { config: c });
    let config = result.config();
    let summary = json!({
        "result": if result.is_halted() { "halted" } else { "exhausted" },
        "outcome": result.outcome().map(|o| format!("{o:?}")),
        "steps": result.steps_used(),
        "state": m.state_name(config.state),
        "heads": [config.tape1.head(), config.tape2.head()],
        "tape1": m.tokens(&config.tape1.contents()).join(" "),
        "tape2": m.tokens(&config.tape2.contents()).join(" "),
    });
    if trace == Some(TraceFormat::Jsonl) {
        eprintln!("{summary}");
    } else {
        writeln!(out, "{summary}").ok();
    }
    Ok(if result.is_halted() { 0 } else { 2 })
}

fn zeno(file: &Path, fuel: u64, limit_stage: bool, mu0: zenosim::Seconds) -> Outcome {
    let p = load(file)?;
    let schedule = ZenoSchedule::new(mu0).map_err(|e| CliError::Invalid(e.to_string()))?;
    let out = zeno_halt_check(&p.machine, p.input_or_empty(), fuel, limit_stage, &schedule)
        .map_err(|e| CliError::Invalid(e.to_string()))?;
    match out {
        ZenoOutcome::Verdict(v) => {
            print_json(&v.to_json());
            Ok(0)
        }
        ZenoOutcome::Exhausted { config, counter } => {
            print_json(&json!({
                "exhausted": true,
                "steps": config.steps,
                "counter": counter,
                "wall_clock": schedule.wall_time(config.steps.finite_part()),
            }));
            Ok(2)
        }
    }
}

fn counter(n: Option<u64>, limit: bool, past: u64) -> Outcome {
    let mut c = HalvingCounter::new();
    if limit {
        c = c.take_limit().expect("fresh counters can take the limit");
        for _ in 0..past {
            c = c.halve_past_limit().expect("at the limit");
        }
    } else {
        for _ in 0..n.unwrap_or(0) {
            c = c.halve().expect("finite counters can halve");
        }
    }
    println!("{c}");
    Ok(0)
}

fn registry_from(args: &OracleArgs) -> Result<OracleRegistry, CliError> {
    let mut reg = OracleRegistry::new();
    for path in &args.with {
        reg.register_machine(load(path)?.machine);
    }
    for spec in &args.stub {
        let (name, tokens) = spec
            .split_once('=')
            .ok_or_else(|| CliError::Invalid(format!("--stub expects NAME=TOKENS, got `{spec}`")))?;
        reg.register_stub(name, tokens.split_whitespace());
    }
    for name in &args.decider {
        reg.register_decider(name);
    }
    Ok(reg)
}

fn emit_trace(records: impl Iterator<Item = TraceRecord>, format: TraceFormat) {
    let mut out = io::stdout().lock();
    for rec in records {
        let line = match format {
            TraceFormat::Jsonl => rec.to_json_line(),
            TraceFormat::Text => rec.to_text(),
        };
        writeln!(out, "{line}").ok();
    }
}

fn dovetail(file: &Path, oracles: &OracleArgs, fuel: u64, w: u64, trace: Option<TraceFormat>) -> Outcome {
    let p = load(file)?;
    let registry = registry_from(oracles)?;
    let input = p.input.clone().unwrap_or_default();
    let profile = classify_halting_profile(&p.machine, &input, &registry, fuel, w)
        .map_err(|e| CliError::Invalid(e.to_string()))?;
    let mut s = DovetailState::new(p.machine, input, registry)
        .map_err(|e| CliError::Invalid(e.to_string()))?;
    s.run_to_limit(fuel);
    if let Some(format) = trace {
        emit_trace(trace_records(&s), format);
    }
    let rounds = s.rounds();
    let instructions = s.instructions();
    let (t, q) = (s.t_flag(), s.q_flag());
    let decision = u_decide(&mut s, w).expect("state is limit-complete");
    let areas: Vec<_> = s
        .areas()
        .iter()
        .map(|a| {
            json!({
                "r": a.index,
                "parent": a.parent,
                "assumption": a.branch_assumption,
                "status": a.status,
                "state": s.program().state_name(a.config.state),
                "steps": a.config.steps,
                "killed_by": a.killed_by,
            })
        })
        .collect();
    let summary = json!({
        "rounds": rounds,
        "next_m": s.m(),
        "instructions": instructions,
        "t": t as u8,
        "q": q as u8,
        "areas": areas,
        "decision": decision,
        "bit": decision.bit(),
        "profile": profile,
    });
    let line = serde_json::to_string(&summary).expect("values serialize");
    if trace == Some(TraceFormat::Jsonl) {
        eprintln!("{line}");
    } else {
        println!("{line}");
    }
    Ok(0)
}

fn load_dfa(path: &Path) -> Result<Dfa, CliError> {
    let d: Dfa = serde_json::from_str(&read(path)?)
        .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
    d.check().map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
    Ok(d)
}

fn dfa(file: &Path, max_len: usize, against: Option<&Path>, emit: bool, fuel: u64) -> Outcome {
    let p = load(file)?;
    let m = &p.machine;
    if !is_right_mover(m) {
        return Err(CliError::Precondition(format!(
            "machine `{}` is not a read-only right-mover",
            m.name()
        )));
    }
    let d = right_mover_to_dfa(m).expect("checked above");
    if emit {
        println!("{}", serde_json::to_string_pretty(&d).expect("DFAs serialize"));
        return Ok(0);
    }
    let other_dfa;
    let other_machine;
    let other = match against {
        None => Recognizer::RightMover(m),
        Some(path) if path.extension().is_some_and(|e| e == "json") => {
            other_dfa = load_dfa(path)?;
            Recognizer::Dfa(&other_dfa)
        }
        Some(path) => {
            other_machine = load(path)?.machine;
            if is_right_mover(&other_machine) {
                Recognizer::RightMover(&other_machine)
            } else {
                Recognizer::Machine(&other_machine)
            }
        }
    };
    let verdict = language_equiv_bounded(Recognizer::Dfa(&d), other, max_len, fuel).map_err(|e| match e {
        zenosim::universal::EquivError::FuelTooSmall { .. } => CliError::Indefinite(e.to_string()),
        other => CliError::Invalid(other.to_string()),
    })?;
    match verdict {
        Equivalence::Equivalent => {
            print_json(&json!({"verdict": "equivalent", "max_len": max_len, "dfa_states": d.states.len()}));
            Ok(0)
        }
        Equivalence::Counterexample(word) => {
            print_json(&json!({"verdict": "counterexample", "word": word}));
            Ok(1)
        }
    }
}
