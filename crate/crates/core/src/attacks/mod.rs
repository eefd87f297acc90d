//! Key-recovery attacks on Even-Mansour: Simon's algorithm with quantum
//! access to both oracles, a claw-finding attack with only classical access
//! to the keyed oracle, and its classical birthday counterpart.
//!
//! Every attack is written against [`EmOracles`], so the same code runs
//! standalone (through [`DirectOracles`]) and inside the distinguishing
//! games (through [`AttackDistinguisher`]).

pub mod claw;
pub mod grover;
pub mod simon;

use crate::error::{Error, Result};
use crate::games::{
    apply_phase_predicate, check_oracle_registers, Budget, Direction, EmAdversary, EmOracles,
    PhasePredicate,
};
use crate::perm::{em_forward, em_inverse, Key, Permutation};
use crate::rng::TrialRng;
use crate::statevector::StateVector;

pub use claw::{
    classical_birthday_attack, q1_claw_attack, q1_claw_exhaustive, ClawAnalysis, ClawParams,
    ClawTable,
};
pub use grover::{
    grover_fixed, grover_iterations, grover_multi_target, grover_success_probability,
};
pub use simon::{simon_q2_attack, simon_q2_on};

/// Default claw difference `δ = 0…01`.
pub const DEFAULT_DELTA: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AttackResult {
    pub recovered_key: Option<Key>,
    /// A key was found and verified against two pairs not used to derive it.
    pub success: bool,
    pub classical_queries_used: usize,
    /// Public-oracle queries plus, in Q2 mode, keyed quantum queries.
    pub quantum_queries_used: usize,
    /// Inner repetitions: Simon restarts or Grover runs.
    pub trials_inner: usize,
}

/// The keyed oracle behind [`DirectOracles`].
#[derive(Debug, Clone)]
pub enum KeyedOracle<'a> {
    Cipher(Key),
    Random(&'a Permutation),
}

/// Unrestricted access to a public permutation and a keyed oracle, with
/// quantum access to both. Counts every invocation.
#[derive(Debug, Clone)]
pub struct DirectOracles<'a> {
    p: &'a Permutation,
    keyed: KeyedOracle<'a>,
    keyed_tables: Option<(Vec<u32>, Vec<u32>)>,
    pub classical_calls: usize,
    pub quantum_calls: usize,
    pub keyed_calls: usize,
}

impl<'a> DirectOracles<'a> {
    pub fn real(p: &'a Permutation, key: Key) -> Self {
        Self::new(p, KeyedOracle::Cipher(key))
    }

    pub fn ideal(p: &'a Permutation, r: &'a Permutation) -> Self {
        Self::new(p, KeyedOracle::Random(r))
    }

    fn new(p: &'a Permutation, keyed: KeyedOracle<'a>) -> Self {
        Self {
            p,
            keyed,
            keyed_tables: None,
            classical_calls: 0,
            quantum_calls: 0,
            keyed_calls: 0,
        }
    }

    fn keyed_eval(&self, direction: Direction, v: u64) -> u64 {
        match (&self.keyed, direction) {
            (KeyedOracle::Cipher(k), Direction::Forward) => em_forward(self.p, *k, v),
            (KeyedOracle::Cipher(k), Direction::Inverse) => em_inverse(self.p, *k, v),
            (KeyedOracle::Random(r), Direction::Forward) => r.apply(v),
            (KeyedOracle::Random(r), Direction::Inverse) => r.apply_inverse(v),
        }
    }

    fn check(&self, v: u64) -> Result<()> {
        if v >> self.p.n() != 0 {
            return Err(Error::TableEntryTooWide {
                value: v,
                width: self.p.n(),
            });
        }
        Ok(())
    }
}

impl EmOracles for DirectOracles<'_> {
    fn n(&self) -> usize {
        self.p.n()
    }

    fn classical(&mut self, direction: Direction, value: u64) -> Result<u64> {
        self.check(value)?;
        self.classical_calls += 1;
        Ok(self.keyed_eval(direction, value))
    }

    fn quantum(
        &mut self,
        state: &mut StateVector,
        direction: Direction,
        input: &str,
        output: &str,
    ) -> Result<()> {
        check_oracle_registers(state, self.p.n(), input, output)?;
        self.quantum_calls += 1;
        let table = match direction {
            Direction::Forward => self.p.table(),
            Direction::Inverse => self.p.inverse_table(),
        };
        state.xor_oracle(input, output, table)
    }

    fn quantum_basis(&mut self, direction: Direction, x: u64) -> Result<u64> {
        self.check(x)?;
        self.quantum_calls += 1;
        Ok(match direction {
            Direction::Forward => self.p.apply(x),
            Direction::Inverse => self.p.apply_inverse(x),
        })
    }

    fn quantum_phase(
        &mut self,
        state: &mut StateVector,
        register: &str,
        evaluations: usize,
        predicate: PhasePredicate<'_>,
    ) -> Result<()> {
        self.quantum_calls += 2 * evaluations;
        let p = self.p;
        apply_phase_predicate(
            state,
            register,
            evaluations,
            p.table(),
            Some(p.inverse_table()),
            predicate,
        )
    }

    fn keyed_quantum(
        &mut self,
        state: &mut StateVector,
        direction: Direction,
        input: &str,
        output: &str,
    ) -> Result<()> {
        check_oracle_registers(state, self.p.n(), input, output)?;
        self.keyed_calls += 1;
        if self.keyed_tables.is_none() {
            let size = 1u64 << self.p.n();
            let fwd: Vec<u32> = (0..size)
                .map(|x| self.keyed_eval(Direction::Forward, x) as u32)
                .collect();
            let mut inv = vec![0u32; size as usize];
            for (x, &y) in fwd.iter().enumerate() {
                inv[y as usize] = x as u32;
            }
            self.keyed_tables = Some((fwd, inv));
        }
        let (fwd, inv) = self.keyed_tables.as_ref().expect("tables built");
        let table = match direction {
            Direction::Forward => fwd,
            Direction::Inverse => inv,
        };
        state.xor_oracle(input, output, table)
    }
}

/// Wraps an oracle interface and counts the calls an attack makes.
pub(crate) struct Counted<'a> {
    inner: &'a mut dyn EmOracles,
    pub(crate) classical: usize,
    pub(crate) quantum: usize,
}

impl<'a> Counted<'a> {
    pub(crate) fn new(inner: &'a mut dyn EmOracles) -> Self {
        Self {
            inner,
            classical: 0,
            quantum: 0,
        }
    }
}

impl EmOracles for Counted<'_> {
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn classical(&mut self, direction: Direction, value: u64) -> Result<u64> {
        let y = self.inner.classical(direction, value)?;
        self.classical += 1;
        Ok(y)
    }

    fn quantum(
        &mut self,
        state: &mut StateVector,
        direction: Direction,
        input: &str,
        output: &str,
    ) -> Result<()> {
        self.inner.quantum(state, direction, input, output)?;
        self.quantum += 1;
        Ok(())
    }

    fn quantum_basis(&mut self, direction: Direction, x: u64) -> Result<u64> {
        let y = self.inner.quantum_basis(direction, x)?;
        self.quantum += 1;
        Ok(y)
    }

    fn quantum_phase(
        &mut self,
        state: &mut StateVector,
        register: &str,
        evaluations: usize,
        predicate: PhasePredicate<'_>,
    ) -> Result<()> {
        self.inner
            .quantum_phase(state, register, evaluations, predicate)?;
        self.quantum += 2 * evaluations;
        Ok(())
    }

    fn keyed_quantum(
        &mut self,
        state: &mut StateVector,
        direction: Direction,
        input: &str,
        output: &str,
    ) -> Result<()> {
        self.inner.keyed_quantum(state, direction, input, output)?;
        self.quantum += 1;
        Ok(())
    }
}

/// Which attack an [`AttackDistinguisher`] runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttackSpec {
    /// Needs a game with quantum access to the keyed oracle.
    SimonQ2 {
        max_iterations: usize,
    },
    Q1Claw(ClawParams),
    Birthday {
        delta: u64,
        d_size: usize,
        t_size: usize,
    },
    /// Makes no queries.
    Null,
}

/// An attack used as a distinguisher: outputs 1 iff it finds a verified key.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AttackDistinguisher {
    pub n: usize,
    pub spec: AttackSpec,
}

pub fn attack_as_distinguisher(n: usize, spec: AttackSpec) -> AttackDistinguisher {
    AttackDistinguisher { n, spec }
}

impl AttackDistinguisher {
    /// Nominal `(q_E, q_P)` for plotting against query-complexity formulas:
    /// the declared budget.
    pub fn resources(&self) -> (usize, usize) {
        let b = self.budget();
        (b.classical, b.quantum + b.keyed)
    }
}

impl EmAdversary for AttackDistinguisher {
    fn budget(&self) -> Budget {
        match self.spec {
            AttackSpec::SimonQ2 { max_iterations } => Budget {
                classical: simon::CLASSICAL_QUERIES,
                quantum: simon::public_query_cap(max_iterations),
                keyed: max_iterations,
            },
            AttackSpec::Q1Claw(p) => Budget::new(
                claw::classical_cap(p.table_size),
                p.quantum_cap(self.n).unwrap_or(0),
            ),
            AttackSpec::Birthday { d_size, t_size, .. } => Budget::new(
                claw::classical_cap(d_size),
                claw::birthday_quantum_cap(t_size),
            ),
            AttackSpec::Null => Budget::default(),
        }
    }

    fn run(&self, o: &mut dyn EmOracles, rng: &mut TrialRng) -> Result<bool> {
        if o.n() != self.n {
            return Err(Error::WidthMismatch(o.n(), self.n));
        }
        let result = match self.spec {
            AttackSpec::SimonQ2 { max_iterations } => simon_q2_on(o, max_iterations, rng)?,
            AttackSpec::Q1Claw(p) => claw::q1_claw_on(o, p, rng)?,
            AttackSpec::Birthday {
                delta,
                d_size,
                t_size,
            } => claw::birthday_on(o, delta, d_size, t_size, rng)?,
            AttackSpec::Null => AttackResult::default(),
        };
        Ok(result.success)
    }
}
