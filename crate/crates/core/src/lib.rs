//! Two-tape Turing machines with Zeno-time halting checks, ordinal step
//! accounting, a halving counter with an explicit limit stage, and a
//! dovetailing scheduler that speculates on oracle branches.

pub mod counter;
pub mod dovetail;
pub mod format;
pub mod ordinal;
pub mod tm;
pub mod universal;
pub mod zeno;
pub mod zeno_time;

pub use counter::{compare_counters, Comparison, Digit, DigitString, HalvingCounter};
pub use format::{decode, encode_for_universal, parse, serialize, EncodedMachine, Program};
pub use ordinal::{OrdinalBound, OrdinalTime};
pub use tm::{
    initial_config, run, run_from, step, validate_spec, Configuration, MachineSpec, RunResult,
    StepOutcome, Symbol, Tape,
};
pub use zeno::{zeno_halt_check, HaltVerdict, Mode, ZenoOutcome};
pub use zeno_time::{Seconds, ZenoSchedule};
