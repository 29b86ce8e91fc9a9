//! Seeded machine generators and small reference interpreters shared by the
//! integration tests.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zenosim::tm::{validate_spec, Move, RawMachine, RawRule};
use zenosim::{MachineSpec, Symbol};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn s(x: &str) -> String {
    x.to_string()
}

pub const MOVES: [Move; 3] = [Move::L, Move::R, Move::N];

/// Random two-tape machine over `_ 0 1` with a random input word.
/// States `q0..`, plus an accepting `h`; about one transition in five is left undefined.
pub fn random_machine(rng: &mut ChaCha8Rng) -> (MachineSpec, Vec<Symbol>) {
    let n = rng.gen_range(2..=5);
    let states: Vec<String> = (0..n).map(|i| format!("q{i}")).chain([s("h")]).collect();
    let alphabet = [s("_"), s("0"), s("1")];
    let mut rules = Vec::new();
    for q in &states[..n] {
        for r1 in &alphabet {
            for r2 in &alphabet {
                if rng.gen_bool(0.2) {
                    continue;
                }
                let next = if rng.gen_bool(0.1) {
                    s("h")
                } else {
                    states[rng.gen_range(0..n)].clone()
                };
                rules.push(RawRule {
                    state: q.clone(),
                    read: [r1.clone(), r2.clone()],
                    next,
                    write: [
                        alphabet.choose(rng).unwrap().clone(),
                        alphabet.choose(rng).unwrap().clone(),
                    ],
                    moves: [*MOVES.choose(rng).unwrap(), *MOVES.choose(rng).unwrap()],
                });
            }
        }
    }
    let raw = RawMachine {
        name: s("random"),
        states,
        blank: s("_"),
        alphabet: alphabet.to_vec(),
        input_alphabet: vec![s("0"), s("1")],
        start: s("q0"),
        accepting: vec![s("h")],
        rules,
        oracles: vec![],
    };
    let m = validate_spec(&raw).expect("generated machines are well formed");
    let len = rng.gen_range(0..=6);
    let word: Vec<&str> = (0..len).map(|_| if rng.gen() { "0" } else { "1" }).collect();
    let input = m.input_from_tokens(&word).unwrap();
    (m, input)
}

/// Read-only right-mover over `{0,1}` kept as a plain table so that its
/// language can be computed without the library.
#[derive(Debug, Clone)]
pub struct RightMover {
    pub states: usize,
    /// `delta[q][c]` for `c` in `0, 1, blank`; `states` means the accepting state.
    pub delta: Vec<[Option<usize>; 3]>,
}

impl RightMover {
    pub fn random(rng: &mut ChaCha8Rng) -> Self {
        let states = rng.gen_range(1..=4);
        let delta = (0..states)
            .map(|_| {
                [0, 1, 2].map(|_| {
                    if rng.gen_bool(0.15) {
                        None
                    } else {
                        Some(rng.gen_range(0..=states))
                    }
                })
            })
            .collect();
        RightMover { states, delta }
    }

    pub fn spec(&self) -> MachineSpec {
        let names: Vec<String> = (0..self.states).map(|i| format!("p{i}")).chain([s("acc")]).collect();
        let syms = ["0", "1", "_"];
        let mut rules = Vec::new();
        for (q, row) in self.delta.iter().enumerate() {
            for (c, next) in row.iter().enumerate() {
                if let Some(next) = next {
                    rules.push(RawRule {
                        state: names[q].clone(),
                        read: [s(syms[c]), s("_")],
                        next: names[*next].clone(),
                        write: [s(syms[c]), s("_")],
                        moves: [Move::R, Move::N],
                    });
                }
            }
        }
        let raw = RawMachine {
            name: s("rm"),
            states: names.clone(),
            blank: s("_"),
            alphabet: vec![s("_"), s("0"), s("1")],
            input_alphabet: vec![s("0"), s("1")],
            start: names[0].clone(),
            accepting: vec![s("acc")],
            rules,
            oracles: vec![],
        };
        validate_spec(&raw).unwrap()
    }

    /// Accepts iff the accepting state is reached within `|w| + 1` moves.
    pub fn accepts(&self, w: &[String]) -> bool {
        let mut q = 0;
        for i in 0..=w.len() {
            let c = match w.get(i).map(String::as_str) {
                Some("0") => 0,
                Some("1") => 1,
                Some(other) => panic!("unexpected symbol {other}"),
                None => 2,
            };
            match self.delta[q][c] {
                None => return false,
                Some(n) if n == self.states => return true,
                Some(n) => q = n,
            }
        }
        false
    }
}

/// One-tape machine with states `A`, `B` and halting state `H`, over `{_, 1}`.
/// `table[2*q + read]` is `(write, move right?, next)` where `next == 2` is `H`.
pub type SmallTable = [Option<(u8, bool, u8)>; 4];

/// Every such machine: each of the four slots is undefined or one of 12 actions.
pub fn all_small_machines() -> impl Iterator<Item = SmallTable> {
    let actions: Vec<Option<(u8, bool, u8)>> = std::iter::once(None)
        .chain((0..2u8).flat_map(|w| {
            [false, true]
                .into_iter()
                .flat_map(move |r| (0..3u8).map(move |n| Some((w, r, n))))
        }))
        .collect();
    let k = actions.len();
    (0..k.pow(4)).map(move |mut i| {
        let mut t = [None; 4];
        for slot in &mut t {
            *slot = actions[i % k];
            i /= k;
        }
        t
    })
}

pub fn small_spec(t: &SmallTable) -> MachineSpec {
    let names = ["A", "B", "H"];
    let syms = ["_", "1"];
    let mut rules = Vec::new();
    for (i, slot) in t.iter().enumerate() {
        if let Some((w, right, next)) = slot {
            rules.push(RawRule {
                state: s(names[i / 2]),
                read: [s(syms[i % 2]), s("_")],
                next: s(names[*next as usize]),
                write: [s(syms[*w as usize]), s("_")],
                moves: [if *right { Move::R } else { Move::L }, Move::N],
            });
        }
    }
    let raw = RawMachine {
        name: s("small"),
        states: names.map(s).to_vec(),
        blank: s("_"),
        alphabet: vec![s("_"), s("1")],
        input_alphabet: vec![s("1")],
        start: s("A"),
        accepting: vec![s("H")],
        rules,
        oracles: vec![],
    };
    validate_spec(&raw).unwrap()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truth {
    /// Halts after exactly this many steps.
    Halts(u64),
    /// Provably never halts.
    Loops,
    Unknown,
}

/// Ground truth for a small machine on the blank tape: direct simulation for up
/// to `limit` steps, with a loop certificate whenever the state and the tape
/// as seen from the head recur.
pub fn small_truth(t: &SmallTable, limit: u64) -> Truth {
    use std::collections::{BTreeSet, HashSet};
    let mut ones: BTreeSet<i64> = BTreeSet::new();
    let (mut q, mut head) = (0u8, 0i64);
    let mut seen = HashSet::new();
    for n in 0..=limit {
        if q == 2 {
            return Truth::Halts(n);
        }
        let read = ones.contains(&head) as usize;
        let Some((w, right, next)) = t[2 * q as usize + read] else {
            return Truth::Halts(n);
        };
        let relative: Vec<i64> = ones.iter().map(|c| c - head).collect();
        if !seen.insert((q, relative)) {
            return Truth::Loops;
        }
        if w == 1 {
            ones.insert(head);
        } else {
            ones.remove(&head);
        }
        head += if right { 1 } else { -1 };
        q = next;
    }
    Truth::Unknown
}
