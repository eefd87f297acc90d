//! The forward-only variant `E_k[F](x) = F(x ⊕ k)` with `F` a uniform
//! function, and its hybrids.
//!
//! Inverse queries are rejected. Transcripts may repeat outputs since `R`
//! and `F` are functions.

use super::{
    apply_phase_predicate, check_oracle_registers, split_rng, Direction, EmAdversary, EmOracles,
    GameTranscript, PhasePredicate, QueryLedger,
};
use crate::error::{Error, Result};
use crate::perm::{fwd_only_reprogram, FunctionTable, Transcript};
use crate::rng::TrialRng;
use crate::statevector::StateVector;

use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForwardMode {
    Real,
    Ideal,
    Hybrid { j: usize, primed: bool },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ForwardGame {
    pub n: usize,
    pub mode: ForwardMode,
}

impl ForwardGame {
    pub fn new(n: usize, mode: ForwardMode) -> Self {
        Self { n, mode }
    }

    pub fn run(&self, adv: &dyn EmAdversary, rng: &mut TrialRng) -> Result<GameTranscript> {
        let budget = adv.budget();
        if let ForwardMode::Hybrid { j, primed } = self.mode {
            let last = if primed {
                budget.classical.saturating_sub(1)
            } else {
                budget.classical
            };
            if j > last || (primed && budget.classical == 0) {
                return Err(Error::HybridIndex {
                    j,
                    q_e: budget.classical,
                });
            }
        }
        let (mut adv_rng, mut game_rng) = split_rng(rng);
        let n = self.n;
        let f = FunctionTable::sample(n, n, &mut game_rng)?;
        let r = match self.mode {
            ForwardMode::Real => None,
            _ => Some(FunctionTable::sample(n, n, &mut game_rng)?),
        };
        let key = game_rng.random_range(0..1u64 << n);
        let cipher = matches!(self.mode, ForwardMode::Real);
        let mut session = ForwardSession {
            game: *self,
            f,
            r,
            key,
            cipher,
            q: None,
            ledger: QueryLedger::new(budget),
        };
        let guess = adv.run(&mut session, &mut adv_rng)?;
        let mut transcript = session.ledger.transcript;
        transcript.guess = guess;
        Ok(transcript)
    }
}

pub fn run_forward_only_game(
    adv: &dyn EmAdversary,
    n: usize,
    world: super::World,
    rng: &mut TrialRng,
) -> Result<GameTranscript> {
    let mode = match world {
        super::World::Real => ForwardMode::Real,
        super::World::Ideal => ForwardMode::Ideal,
    };
    ForwardGame::new(n, mode).run(adv, rng)
}

struct ForwardSession {
    game: ForwardGame,
    f: FunctionTable,
    r: Option<FunctionTable>,
    key: u64,
    /// Whether `E_k[F]` (rather than `R`) answers classical queries.
    cipher: bool,
    q: Option<FunctionTable>,
    ledger: QueryLedger,
}

impl ForwardSession {
    fn public(&self) -> &FunctionTable {
        self.q.as_ref().unwrap_or(&self.f)
    }

    fn answer(&self, x: u64) -> u64 {
        if self.cipher {
            self.f.apply(x ^ self.key)
        } else {
            self.r.as_ref().expect("random function sampled").apply(x)
        }
    }

    fn prior(&self) -> Result<Transcript> {
        let pairs: Vec<_> = self
            .ledger
            .transcript
            .classical
            .iter()
            .map(|e| (e.x, e.y))
            .collect();
        Transcript::relaxed_from_entries(&pairs)
    }
}

impl EmOracles for ForwardSession {
    fn n(&self) -> usize {
        self.game.n
    }

    fn classical(&mut self, direction: Direction, x: u64) -> Result<u64> {
        if direction == Direction::Inverse {
            return Err(Error::InverseUnavailable);
        }
        if x >> self.game.n != 0 {
            return Err(Error::TableEntryTooWide {
                value: x,
                width: self.game.n,
            });
        }
        self.ledger.admit_classical(direction, x)?;
        let index = self.ledger.classical_count();
        let y = match self.game.mode {
            ForwardMode::Hybrid { j, primed } if index == j => {
                if primed {
                    let y = self.answer(x);
                    let mut t = self.prior()?;
                    t.push(x, y)?;
                    self.q = Some(fwd_only_reprogram(&self.f, &t, self.key)?);
                    self.cipher = true;
                    y
                } else {
                    let t = self.prior()?;
                    self.q = Some(fwd_only_reprogram(&self.f, &t, self.key)?);
                    self.cipher = true;
                    self.answer(x)
                }
            }
            _ => self.answer(x),
        };
        self.ledger.record_classical(direction, x, y);
        Ok(y)
    }

    fn quantum(
        &mut self,
        state: &mut StateVector,
        direction: Direction,
        input: &str,
        output: &str,
    ) -> Result<()> {
        if direction == Direction::Inverse {
            return Err(Error::InverseUnavailable);
        }
        check_oracle_registers(state, self.game.n, input, output)?;
        self.ledger.charge_quantum(1)?;
        state.xor_oracle(input, output, self.public().table())
    }

    fn quantum_basis(&mut self, direction: Direction, x: u64) -> Result<u64> {
        if direction == Direction::Inverse {
            return Err(Error::InverseUnavailable);
        }
        if x >> self.game.n != 0 {
            return Err(Error::TableEntryTooWide {
                value: x,
                width: self.game.n,
            });
        }
        self.ledger.charge_quantum(1)?;
        Ok(self.public().apply(x))
    }

    fn quantum_phase(
        &mut self,
        state: &mut StateVector,
        register: &str,
        evaluations: usize,
        predicate: PhasePredicate<'_>,
    ) -> Result<()> {
        self.ledger.charge_quantum(2 * evaluations)?;
        let f = self.public();
        apply_phase_predicate(state, register, evaluations, f.table(), None, predicate)
    }
}
