//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use common::{all_small_machines, rng, small_spec, small_truth, RightMover, Truth};
use zenosim::dovetail::{
    paradox_report, run_inline, DovetailState, InlineOutcome, Observed, OracleRegistry, UDecision,
};
use zenosim::ordinal::{bound_add, ord_add};
use zenosim::tm::step_mut;
use zenosim::universal::{language_equiv_bounded, right_mover_to_dfa, simulate, Equivalence, Recognizer};
use zenosim::{
    compare_counters, encode_for_universal, initial_config, parse, run, step, zeno_halt_check,
    Comparison, Digit, HalvingCounter, Mode, OrdinalBound, OrdinalTime, RunResult, Seconds,
    StepOutcome, ZenoOutcome, ZenoSchedule,
};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn pow2(n: u64) -> BigInt {
    BigInt::one() << n as usize
}

fn counter_law() -> Check {
    let start = Instant::now();
    let mut c = HalvingCounter::new();
    for n in 1..=100_000u64 {
        c = c.halve().map_err(|e| e.to_string())?;
        ensure!(
            c.current().runs() == [(Digit::Zero, n), (Digit::One, 1)],
            "after {n} halvings the digits are {:?}",
            c.current().runs()
        );
        ensure!(c.last_digit() == Digit::One, "last digit after {n} halvings");
        ensure!(
            c.value() == BigRational::new_raw(BigInt::one(), pow2(n)),
            "value after {n} halvings"
        );
        match n {
            1 => ensure!(c.current().to_string() == "01", "n=1 renders {}", c.current()),
            2 => ensure!(c.current().to_string() == "001", "n=2 renders {}", c.current()),
            _ => {}
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    Ok(format!("n <= 100000 in {elapsed:.2?}"))
}

fn limit_semantics() -> Check {
    let mut c = HalvingCounter::new();
    for n in 0..2000 {
        let next = c.clone().halve().map_err(|e| e.to_string())?;
        ensure!(compare_counters(&c, &next) == Comparison::Unequal, "counters {n} and {} compare equal", n + 1);
        c = next;
    }
    let mut tested = 0;
    for n in [0u64, 1, 2, 7, 64, 500] {
        let mut c = HalvingCounter::new();
        for _ in 0..n {
            c = c.halve().unwrap();
        }
        let at = c.clone().take_limit().map_err(|e| e.to_string())?;
        ensure!(at.current().to_string() == "0", "limit digits {}", at.current());
        ensure!(at.value().is_zero(), "limit value {}", at.value());
        ensure!(at.last_digit() == Digit::Zero, "limit last digit");
        ensure!(at.divisions() == OrdinalTime::OMEGA, "limit divisions {}", at.divisions());
        let past = at.clone().halve_past_limit().map_err(|e| e.to_string())?;
        ensure!(past.divisions() == OrdinalTime::new(1, 1), "divisions past the limit");
        ensure!(compare_counters(&at, &past) == Comparison::Equal, "w vs w+1 after {n} finite halvings");
        ensure!(at.clone().halve().is_err(), "finite halving allowed at the limit");
        ensure!(compare_counters(&c, &at) == Comparison::Unequal, "finite {n} equals the limit");
        tested += 1;
    }
    Ok(format!("n vs n+1 for n < 2000, limit reached from {tested} histories"))
}

fn zeno_clock() -> Check {
    let s = ZenoSchedule::new(Seconds::from_integer(1)).map_err(|e| e.to_string())?;
    let two = BigRational::from_integer(BigInt::from(2));
    for n in 0..=64u64 {
        // 2 - 2^(1-n) = (2^(n+1) - 2) / 2^n
        let expected = BigRational::new(pow2(n + 1) - 2, pow2(n));
        ensure!(s.wall_time(n).as_rational() == &expected, "wall_time({n}) = {}", s.wall_time(n));
    }
    ensure!(s.wall_time_limit().as_rational() == &two, "limit is {}", s.wall_time_limit());
    Ok("n <= 64, limit 2".into())
}

fn ordinals() -> Check {
    let w = OrdinalTime::OMEGA;
    for j in 0..=100 {
        for k in 0..=100 {
            let lhs = ord_add(OrdinalTime::new(1, j), OrdinalTime::new(1, k));
            ensure!(lhs == OrdinalTime::new(2, k), "(w+{j})+(w+{k}) = {lhs}");
        }
    }
    for n in 0..=100 {
        ensure!(ord_add(OrdinalTime::finite(n), w) == w, "{n}+w");
    }
    ensure!(w.succ() != w, "w+1 = w");
    let o_w = OrdinalBound::big_o(w);
    ensure!(
        bound_add(o_w, o_w) == OrdinalBound::big_o(OrdinalTime::omega_times(2)),
        "O(w)+O(w)"
    );
    Ok("j, k <= 100".into())
}

fn simulation_fidelity() -> Check {
    let start = Instant::now();
    let mut r = rng(0x5eed_0005);
    let mut halted = 0;
    let machines = 120;
    for i in 0..machines {
        let (m, input) = common::random_machine(&mut r);
        let e = encode_for_universal(&m, Some(&input));
        for fuel in [10, 100, 1000] {
            let direct = run(&m, &input, fuel).unwrap();
            let via = simulate(&e, fuel).map_err(|e| e.to_string())?;
            ensure!(
                direct.outcome() == via.outcome() && direct.steps_used() == via.steps_used(),
                "machine {i} fuel {fuel}: {:?}/{} vs {:?}/{}",
                direct.outcome(),
                direct.steps_used(),
                via.outcome(),
                via.steps_used()
            );
            ensure!(direct.config() == via.config(), "machine {i} fuel {fuel}: configurations differ");
            halted += direct.is_halted() as usize;
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    Ok(format!("{machines} machines x 3 fuels, {halted} halted runs, {elapsed:.2?}"))
}

fn zeno_agreement() -> Check {
    const FUEL: u64 = 200;
    let schedule = ZenoSchedule::default();
    let (mut halters, mut loopers, mut unknown) = (0, 0, 0);
    for t in all_small_machines() {
        let truth = small_truth(&t, FUEL);
        if truth == Truth::Unknown {
            unknown += 1;
            continue;
        }
        let m = small_spec(&t);
        let out = zeno_halt_check(&m, &[], FUEL, true, &schedule).map_err(|e| e.to_string())?;
        let ZenoOutcome::Verdict(v) = out else {
            return Err(format!("{t:?}: no verdict with the limit stage on"));
        };
        match truth {
            Truth::Halts(n) => {
                ensure!(
                    v.bit == 1 && v.mode == Mode::Concrete && v.steps_used == OrdinalTime::finite(n),
                    "{t:?} halts at {n}, verdict {v:?}"
                );
                halters += 1;
            }
            Truth::Loops => {
                ensure!(
                    v.bit == 0 && v.mode == Mode::SymbolicLimit,
                    "{t:?} loops, verdict {v:?}"
                );
                loopers += 1;
            }
            Truth::Unknown => unreachable!(),
        }
    }
    ensure!(halters > 0 && loopers > 0, "degenerate corpus");
    Ok(format!("{halters} halters, {loopers} loopers agree; {unknown} without a certificate skipped"))
}

/// Oracle `d<delay>o<len>`: after `delay` instructions writes `len` ones on its second tape.
fn delayed_oracle(delay: usize, len: usize) -> String {
    let name = format!("d{delay}o{len}");
    let mut states: Vec<String> = (0..=delay).map(|i| format!("s{i}")).collect();
    states.push("w1".into());
    let mut rules = String::new();
    for i in 0..delay {
        for r in ["_", "1"] {
            rules += &format!("rule: s{i} {r} _ -> s{} {r} _ N N\n", i + 1);
        }
    }
    // s<delay> writes the output, then accepts
    let last = format!("s{delay}");
    for r in ["_", "1"] {
        if len == 1 {
            rules += &format!("rule: {last} {r} _ -> w1 {r} 1 N N\n");
        } else {
            rules += &format!("rule: {last} {r} _ -> {last}b {r} 1 N R\n");
            rules += &format!("rule: {last}b {r} _ -> w1 {r} 1 N N\n");
        }
    }
    if len == 2 {
        states.push(format!("{last}b"));
    }
    format!(
        "machine {name}\nstates: {}\nblank: _\nalphabet: _ 1\ninput: 1\nstart: s0\naccept: w1\n{rules}end\n",
        states.join(" ")
    )
}

/// Program that writes `pre` ones, consults `first`, and on the true branch
/// optionally consults `second` before halting. Every leaf leaves a distinct mark.
fn oracle_program(pre: usize, first: (&str, &str, &str), second: Option<(&str, &str, &str)>) -> String {
    let mut states = vec!["h".to_string(), "o1".into(), "t1".into(), "f1".into()];
    let mut rules = String::new();
    let mut oracles = String::new();
    for i in 0..pre {
        states.push(format!("p{i}"));
        let next = if i + 1 == pre { "o1".to_string() } else { format!("p{}", i + 1) };
        rules += &format!("rule: p{i} _ _ -> {next} 1 _ R N\n");
    }
    let start = if pre == 0 { "o1".to_string() } else { "p0".into() };
    let (r, f, k) = first;
    oracles += &format!("oracle: o1 if {r} {f} {k} then t1 else f1\n");
    rules += "rule: f1 _ _ -> h _ 1 L N\n";
    match second {
        None => rules += "rule: t1 _ _ -> h 1 _ R N\n",
        Some((r, f, k)) => {
            states.extend(["t2".into(), "f2".into()]);
            rules += "rule: t1 _ _ -> o2 1 _ R R\n";
            states.push("o2".into());
            oracles += &format!("oracle: o2 if {r} {f} {k} then t2 else f2\n");
            rules += "rule: t2 _ _ -> h 1 1 R N\n";
            rules += "rule: f2 _ _ -> h _ 1 N L\n";
        }
    }
    format!(
        "machine prog\nstates: {}\nblank: _\nalphabet: _ 1\ninput: 1\nstart: {start}\naccept: h\n{oracles}{rules}end\n",
        states.join(" ")
    )
}

fn dovetail_soundness() -> Check {
    const FUEL: u64 = 10_000;
    let mut registry = OracleRegistry::new();
    let mut names = Vec::new();
    for delay in 1..=3 {
        for len in 1..=2 {
            let m = parse(&delayed_oracle(delay, len)).map_err(|e| e.to_string())?.machine;
            names.push(m.name().to_string());
            registry.register_machine(m);
        }
    }
    let relations = ["==", "<", "<=", ">", ">="];
    let thresholds = ["1", "1 1"];
    let mut r = rng(0x5eed_0007);
    let mut programs = 0;
    let mut true_leaves = 0;
    for i in 0..40 {
        let pick = |r: &mut rand_chacha::ChaCha8Rng| {
            (
                relations[r.gen_range(0..relations.len())],
                names[r.gen_range(0..names.len())].as_str(),
                thresholds[r.gen_range(0..thresholds.len())],
            )
        };
        let first = pick(&mut r);
        let second = if i % 2 == 1 { Some(pick(&mut r)) } else { None };
        let src = oracle_program(i % 3, first, second);
        let p = parse(&src).map_err(|e| format!("program {i}: {e}\n{src}"))?.machine;
        let inline = run_inline(&p, &[], &registry, FUEL).map_err(|e| e.to_string())?;
        ensure!(
            matches!(inline.outcome, InlineOutcome::Halted(StepOutcome::AcceptHalt)),
            "program {i}: inline run {:?}",
            inline.outcome
        );
        let mut s = DovetailState::new(p, vec![], registry.clone()).map_err(|e| e.to_string())?;
        s.run_to_limit(FUEL);
        ensure!(s.t_flag(), "program {i}: the dovetail did not confirm a halt\n{src}");
        let leaf = s.confirmed_leaf();
        ensure!(
            leaf.config == inline.config,
            "program {i}: leaf {:?} vs inline {:?}\n{src}",
            leaf.config,
            inline.config
        );
        true_leaves += (leaf.config.tape1.non_blank_count() > i % 3) as usize;
        programs += 1;
    }
    Ok(format!("{programs} programs, {true_leaves} ended on a true branch"))
}

fn paradox() -> Check {
    let report = paradox_report(10_000, 16);
    ensure!(report.rows.len() == 2, "{} rows", report.rows.len());
    for (a, row) in report.rows.iter().enumerate() {
        ensure!(row.assumption as usize == a, "row {a} has assumption {}", row.assumption);
        ensure!(!row.consistent, "row {a} is marked consistent");
        ensure!(row.u_output != row.assumption, "row {a}: u outputs {}", row.u_output);
    }
    ensure!(
        matches!(report.rows[0].observed, Observed::Halted { steps } if steps <= 2),
        "assumption 0 observed {:?}",
        report.rows[0].observed
    );
    ensure!(
        report.rows[1].observed == Observed::ExceedsFuel { fuel: 10_000 },
        "assumption 1 observed {:?}",
        report.rows[1].observed
    );
    ensure!(report.unforced == UDecision::UndefinedAsZero, "unforced {:?}", report.unforced);
    Ok("2 rows, both self-inconsistent".into())
}

fn brute_counterexample(rm: &RightMover, dfa: &zenosim::universal::Dfa, max_len: usize) -> Option<Vec<String>> {
    let alphabet = ["0".to_string(), "1".to_string()];
    let found = zenosim::universal::words_up_to(&alphabet, max_len)
        .find(|w| dfa.accepts(w).unwrap() != rm.accepts(w));
    found
}

fn dfa_equivalence() -> Check {
    let mut r = rng(0x5eed_0009);
    let mut checked = 0;
    let mut caught = 0;
    for i in 0..16 {
        let rm = RightMover::random(&mut r);
        let m = rm.spec();
        let d = right_mover_to_dfa(&m).map_err(|e| e.to_string())?;
        let v = language_equiv_bounded(Recognizer::Dfa(&d), Recognizer::RightMover(&m), 10, 100)
            .map_err(|e| e.to_string())?;
        ensure!(v == Equivalence::Equivalent, "right-mover {i}: {v}");
        ensure!(brute_counterexample(&rm, &d, 10).is_none(), "right-mover {i}: DFA disagrees with the table");
        checked += 1;

        // seeded mutation: retarget one transition or flip one accepting bit
        let mut bad = d.clone();
        let q = r.gen_range(0..bad.states.len());
        if r.gen_bool(0.5) {
            bad.accepting[q] = !bad.accepting[q];
        } else {
            let a = r.gen_range(0..bad.alphabet.len());
            bad.transition[q][a] = (bad.transition[q][a] + 1 + r.gen_range(0..bad.states.len() - 1)) % bad.states.len();
        }
        let v = language_equiv_bounded(Recognizer::Dfa(&bad), Recognizer::RightMover(&m), 10, 100)
            .map_err(|e| e.to_string())?;
        match brute_counterexample(&rm, &bad, 10) {
            Some(w) => {
                ensure!(v == Equivalence::Counterexample(w.clone()), "mutant {i}: {v}, shortest is {w:?}");
                caught += 1;
            }
            None => ensure!(v == Equivalence::Equivalent, "mutant {i}: {v} but languages agree"),
        }
    }
    ensure!(caught > 0, "no mutant changed the language");
    Ok(format!("{checked} right-movers equivalent, {caught} mutants caught with the shortest counterexample"))
}

fn unbounded_tape() -> Check {
    const N: u64 = 10_000;
    let start = Instant::now();
    let m = parse(
        "machine writer\nstates: w\nblank: _\nalphabet: _ 1\ninput: 1\nstart: w\naccept:\nrule: w _ _ -> w 1 _ R N\nend\n",
    )
    .map_err(|e| e.to_string())?
    .machine;
    let mut c = initial_config(&m, &[]).unwrap();
    let mut peak = 0;
    for _ in 0..N {
        ensure!(step_mut(&mut c, &m) == StepOutcome::Continued, "writer stopped at {}", c.steps);
        peak = peak.max(c.tape1.non_blank_count() + c.tape2.non_blank_count());
        ensure!(peak as u64 <= c.steps.finite_part(), "stored cells exceed steps at {}", c.steps);
    }
    let elapsed = start.elapsed();
    ensure!(c.tape1.head() == N as i64, "head at {}", c.tape1.head());
    ensure!(c.steps == OrdinalTime::finite(N), "steps {}", c.steps);
    ensure!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    Ok(format!("cell {N} after {N} steps, {peak} stored cells, {elapsed:.2?}"))
}

fn time_invariance() -> Check {
    let mut r = rng(0x5eed_0011);
    let mut pairs = 0;
    while pairs < 1000 {
        let (m, input) = common::random_machine(&mut r);
        let k = r.gen_range(0..30);
        let RunResult::Exhausted { config: reached, .. } = run(&m, &input, k).unwrap() else {
            continue;
        };
        // the same instant with a different past: rebuilt from scratch and
        // stamped with an unrelated, possibly transfinite, clock
        let mut rebuilt = initial_config(&m, &[]).unwrap();
        rebuilt.state = reached.state;
        rebuilt.tape1 = zenosim::Tape::blank(m.blank());
        for (cell, sym) in reached.tape1.cells() {
            rebuilt.tape1.write_at(cell, sym);
        }
        rebuilt.tape1.set_head(reached.tape1.head());
        rebuilt.tape2 = reached.tape2.clone();
        rebuilt.steps = OrdinalTime::new(r.gen_range(0..3), r.gen_range(0..1000));
        ensure!(rebuilt.same_instant(&reached), "rebuild differs");

        let (a, oa) = step(&reached, &m);
        let (b, ob) = step(&rebuilt, &m);
        ensure!(oa == ob, "pair {pairs}: outcomes {oa:?} vs {ob:?}");
        ensure!(a.same_instant(&b), "pair {pairs}: successors differ");
        if oa == StepOutcome::Continued {
            ensure!(a.steps == reached.steps.succ() && b.steps == rebuilt.steps.succ(), "clocks");
        }
        pairs += 1;
    }
    Ok(format!("{pairs} pairs"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("counter law", counter_law),
        ("limit semantics", limit_semantics),
        ("zeno clock", zeno_clock),
        ("ordinal arithmetic", ordinals),
        ("simulation fidelity", simulation_fidelity),
        ("zeno halting agreement", zeno_agreement),
        ("dovetail speculation soundness", dovetail_soundness),
        ("paradox witness", paradox),
        ("dfa equivalence", dfa_equivalence),
        ("unbounded tape", unbounded_tape),
        ("time invariance of the step function", time_invariance),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
