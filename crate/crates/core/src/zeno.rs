//! The Zeno halting check: one program step, then one halving of the counter, repeated.
//!
//! A finite run can only observe finitely many rounds. When the program is
//! still running after `fuel` rounds, the caller chooses between reporting
//! exhaustion (an ordinary machine) and applying the limit stage, which puts
//! the counter at ω and yields bit 0 at observer time `2·μ0`.
//!
//! On the round where the program halts the loop is left before halving, so a
//! program halting at step `n ≥ 1` leaves the counter after `n − 1` halvings.

use serde::Serialize;
use thiserror::Error;

use crate::counter::{Digit, HalvingCounter};
use crate::ordinal::OrdinalTime;
use crate::tm::{
    halting_outcome, initial_config, step_mut, Configuration, InputError, MachineSpec, StepOutcome,
    Symbol,
};
use crate::zeno_time::{Seconds, ZenoSchedule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mode {
    Concrete,
    SymbolicLimit,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HaltVerdict {
    pub bit: u8,
    pub mode: Mode,
    #[serde(rename = "steps")]
    pub steps_used: OrdinalTime,
    pub counter: HalvingCounter,
    pub wall_clock: Seconds,
}

impl HaltVerdict {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("verdicts always serialize")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ZenoOutcome {
    Verdict(HaltVerdict),
    Exhausted {
        config: Configuration,
        counter: HalvingCounter,
    },
}

impl ZenoOutcome {
    pub fn verdict(&self) -> Option<&HaltVerdict> {
        match self {
            ZenoOutcome::Verdict(v) => Some(v),
            ZenoOutcome::Exhausted { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ZenoError {
    #[error("fuel must be at least 1")]
    ZeroFuel,
    #[error(transparent)]
    Input(#[from] InputError),
}

pub fn zeno_halt_check(
    m: &MachineSpec,
    input: &[Symbol],
    fuel: u64,
    limit_stage: bool,
    schedule: &ZenoSchedule,
) -> Result<ZenoOutcome, ZenoError> {
    if fuel == 0 {
        return Err(ZenoError::ZeroFuel);
    }
    let mut config = initial_config(m, input)?;
    let mut counter = HalvingCounter::new();

    let concrete = |counter: HalvingCounter, n: u64| {
        ZenoOutcome::Verdict(HaltVerdict {
            bit: 1,
            mode: Mode::Concrete,
            steps_used: OrdinalTime::finite(n),
            counter,
            wall_clock: schedule.wall_time(n),
        })
    };

    for round in 1..=fuel {
        if step_mut(&mut config, m) != StepOutcome::Continued {
            // terminal before any step was taken
            return Ok(concrete(counter, round - 1));
        }
        if halting_outcome(&config, m).is_some() {
            return Ok(concrete(counter, round));
        }
        counter = counter.halve().expect("finite counters can always halve");
        debug_assert_eq!(counter.last_digit(), Digit::One);
    }

    if !limit_stage {
        return Ok(ZenoOutcome::Exhausted { config, counter });
    }
    let counter = counter.take_limit().expect("finite counters can take the limit");
    debug_assert_eq!(counter.last_digit(), Digit::Zero);
    Ok(ZenoOutcome::Verdict(HaltVerdict {
        bit: 0,
        mode: Mode::SymbolicLimit,
        steps_used: OrdinalTime::OMEGA,
        counter,
        wall_clock: schedule.wall_time_limit(),
    }))
}

/// A verdict always carries a definite bit; bit 0 only comes from the limit stage.
pub fn verdict_total(v: &HaltVerdict) -> bool {
    match v.mode {
        Mode::Concrete => v.bit == 1 && v.steps_used.is_finite() && !v.counter.at_limit(),
        Mode::SymbolicLimit => v.bit == 0 && v.counter.at_limit(),
    }
}
