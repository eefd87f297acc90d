//! Distinguishing games.
//!
//! An adversary is a single-shot callback: the game hands it an oracle
//! interface and a private random stream, the adversary drives the queries
//! and returns its guess. Everything the game needs to enforce (budgets,
//! redundant queries, hybrid cut points, bad events) lives behind the
//! interface, so adversaries stay ordinary code.
//!
//! Quantum access to a public oracle means applying its XOR oracle to a
//! [`StateVector`] owned by the adversary. The oracle table itself is a
//! classically sampled uniform permutation or function.

pub mod adversaries;
pub mod em;
pub mod estimate;
pub mod forward;
pub mod lemmas;

use std::cell::Cell;

use rand::SeedableRng;

use crate::error::{Error, Result};
use crate::perm::Transcript;
use crate::rng::TrialRng;
use crate::statevector::StateVector;

pub use em::{run_em_game, run_expt, run_hybrid, EmGame, EmMode, World};
pub use estimate::{
    ci_halfwidth, estimate_advantage, estimate_fn, total_variation, AdvantageEstimate, TvEstimate,
};
pub use forward::{run_forward_only_game, ForwardGame, ForwardMode};

/// Query direction for permutation oracles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Oracle evaluator handed to phase-oracle predicates.
pub type OracleEval<'a> = &'a dyn Fn(Direction, u64) -> u64;

/// Predicate for [`EmOracles::quantum_phase`]: given an evaluator for the
/// current public oracle and a basis value, decide whether to flip its sign.
pub type PhasePredicate<'a> = &'a dyn Fn(OracleEval<'_>, u64) -> bool;

/// Declared query budget of an adversary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Budget {
    /// Classical queries to the keyed oracle (`q_E`).
    pub classical: usize,
    /// Quantum queries to the public oracle (`q_P` or `q_F`).
    pub quantum: usize,
    /// Quantum queries to the keyed oracle; only honoured in Q2 mode.
    pub keyed: usize,
}

impl Budget {
    pub fn new(classical: usize, quantum: usize) -> Self {
        Self {
            classical,
            quantum,
            keyed: 0,
        }
    }
}

/// Oracle interface shared by the Even-Mansour games and the attacks.
pub trait EmOracles {
    /// Block width.
    fn n(&self) -> usize;

    /// One classical query to the keyed oracle.
    fn classical(&mut self, direction: Direction, value: u64) -> Result<u64>;

    /// One quantum query to the public oracle on registers `input`/`output`
    /// of `state`, both `n` qubits wide.
    fn quantum(
        &mut self,
        state: &mut StateVector,
        direction: Direction,
        input: &str,
        output: &str,
    ) -> Result<()>;

    /// One quantum query on the basis state `|x⟩|0⟩`, which returns the
    /// public oracle's value without building a state vector.
    fn quantum_basis(&mut self, direction: Direction, x: u64) -> Result<u64>;

    /// Sign flip on `register` by a predicate that may evaluate the public
    /// oracle up to `evaluations` times per basis value. Realized as compute,
    /// phase kickback, uncompute, so it is charged `2 · evaluations` queries.
    fn quantum_phase(
        &mut self,
        state: &mut StateVector,
        register: &str,
        evaluations: usize,
        predicate: PhasePredicate<'_>,
    ) -> Result<()>;

    /// Quantum query to the keyed oracle (Q2 diagnostic mode only).
    fn keyed_quantum(
        &mut self,
        _state: &mut StateVector,
        _direction: Direction,
        _input: &str,
        _output: &str,
    ) -> Result<()> {
        Err(Error::KeyedQuantumDenied)
    }
}

/// A distinguisher against an [`EmOracles`] game.
pub trait EmAdversary: Sync {
    fn budget(&self) -> Budget;

    /// Plays one game and returns the guess.
    fn run(&self, oracles: &mut dyn EmOracles, rng: &mut TrialRng) -> Result<bool>;
}

/// Bad-event flags raised by the `Expt_j` / `Expt'_j` experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct BadFlags {
    pub bad1: bool,
    pub bad2: bool,
    pub bad3: bool,
}

impl BadFlags {
    pub fn any(&self) -> bool {
        self.bad1 || self.bad2 || self.bad3
    }
}

/// One answered classical query, always stored as `x ↦ y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ClassicalEntry {
    pub direction: Direction,
    pub x: u64,
    pub y: u64,
}

/// Everything observable about one game run.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GameTranscript {
    pub classical: Vec<ClassicalEntry>,
    /// Quantum queries to the public oracle per stage; stage `i` is the
    /// stretch after `i` classical answers.
    pub stage_quantum: Vec<usize>,
    pub total_quantum: usize,
    pub keyed_quantum: usize,
    pub guess: bool,
    pub bad: BadFlags,
}

impl GameTranscript {
    /// The classical pairs as a relaxed [`Transcript`].
    pub fn transcript(&self) -> Transcript {
        let pairs: Vec<_> = self.classical.iter().map(|e| (e.x, e.y)).collect();
        let mut t = Transcript::relaxed();
        for (x, y) in pairs {
            // a duplicate input can only follow a bad event; keep the first
            let _ = t.push(x, y);
        }
        t
    }

    /// Flat encoding of `(guess, classical transcript)` for distribution
    /// comparisons.
    pub fn outcome_key(&self) -> Vec<u64> {
        let mut key = Vec::with_capacity(1 + 3 * self.classical.len());
        key.push(self.guess as u64);
        for e in &self.classical {
            key.push(matches!(e.direction, Direction::Inverse) as u64);
            key.push(e.x);
            key.push(e.y);
        }
        key
    }
}

/// Counts queries per stage and enforces a [`Budget`].
#[derive(Debug, Clone)]
pub(crate) struct QueryLedger {
    budget: Budget,
    pub(crate) transcript: GameTranscript,
}

impl QueryLedger {
    pub(crate) fn new(budget: Budget) -> Self {
        Self {
            budget,
            transcript: GameTranscript {
                stage_quantum: vec![0],
                ..Default::default()
            },
        }
    }

    pub(crate) fn classical_count(&self) -> usize {
        self.transcript.classical.len()
    }

    /// Checks budget and redundancy before a classical query.
    pub(crate) fn admit_classical(&self, direction: Direction, value: u64) -> Result<()> {
        if self.classical_count() >= self.budget.classical {
            return Err(Error::BudgetExceeded {
                kind: "classical",
                budget: self.budget.classical,
            });
        }
        let seen = self.transcript.classical.iter().any(|e| match direction {
            Direction::Forward => e.x == value,
            Direction::Inverse => e.y == value,
        });
        if seen {
            return Err(Error::RedundantQuery(value));
        }
        Ok(())
    }

    pub(crate) fn record_classical(&mut self, direction: Direction, x: u64, y: u64) {
        self.transcript
            .classical
            .push(ClassicalEntry { direction, x, y });
        self.transcript.stage_quantum.push(0);
    }

    pub(crate) fn charge_quantum(&mut self, count: usize) -> Result<()> {
        if self.transcript.total_quantum + count > self.budget.quantum {
            return Err(Error::BudgetExceeded {
                kind: "quantum",
                budget: self.budget.quantum,
            });
        }
        self.transcript.total_quantum += count;
        *self
            .transcript
            .stage_quantum
            .last_mut()
            .expect("stage 0 exists") += count;
        Ok(())
    }

    pub(crate) fn charge_keyed(&mut self) -> Result<()> {
        if self.transcript.keyed_quantum >= self.budget.keyed {
            return Err(Error::BudgetExceeded {
                kind: "keyed quantum",
                budget: self.budget.keyed,
            });
        }
        self.transcript.keyed_quantum += 1;
        Ok(())
    }
}

/// Checks that `input` and `output` exist in `state` and are `n` qubits wide.
pub fn check_oracle_registers(
    state: &StateVector,
    n: usize,
    input: &str,
    output: &str,
) -> Result<()> {
    check_oracle_registers_mn(state, n, n, input, output)
}

pub(crate) fn check_oracle_registers_mn(
    state: &StateVector,
    m: usize,
    n: usize,
    input: &str,
    output: &str,
) -> Result<()> {
    for (name, want) in [(input, m), (output, n)] {
        let w = state.layout().register(name)?.width();
        if w != want {
            return Err(Error::WidthMismatch(w, want));
        }
    }
    Ok(())
}

/// Applies a phase oracle whose predicate evaluates the oracle given by
/// `forward` (and `inverse`, if available) at most `evaluations` times per
/// basis value. Oracle inputs are truncated to the table's width.
pub fn apply_phase_predicate(
    state: &mut StateVector,
    register: &str,
    evaluations: usize,
    forward: &[u32],
    inverse: Option<&[u32]>,
    predicate: PhasePredicate<'_>,
) -> Result<()> {
    let width = state.layout().register(register)?.width();
    let mask = forward.len() as u64 - 1;
    let mut marks = vec![false; 1usize << width];
    let used = Cell::new(0usize);
    let unavailable = Cell::new(false);
    let oracle = |d: Direction, v: u64| {
        used.set(used.get() + 1);
        let table = match d {
            Direction::Forward => forward,
            Direction::Inverse => match inverse {
                Some(t) => t,
                None => {
                    unavailable.set(true);
                    return 0;
                }
            },
        };
        table[(v & mask) as usize] as u64
    };
    for (x, mark) in marks.iter_mut().enumerate() {
        used.set(0);
        *mark = predicate(&oracle, x as u64);
        if used.get() > evaluations {
            return Err(Error::EvaluationOverrun {
                used: used.get(),
                declared: evaluations,
            });
        }
    }
    if unavailable.get() {
        return Err(Error::InverseUnavailable);
    }
    state.phase_oracle(register, |x| marks[x as usize])
}

/// Splits one trial stream into independent adversary and game streams.
pub(crate) fn split_rng(rng: &mut TrialRng) -> (TrialRng, TrialRng) {
    let adversary = TrialRng::from_rng(&mut *rng);
    let game = TrialRng::from_rng(&mut *rng);
    (adversary, game)
}
