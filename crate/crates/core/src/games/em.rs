//! The Even-Mansour game, its hybrids `H_j` / `H'_j`, and the experiments
//! `Expt_j` / `Expt'_j` that bridge them.
//!
//! Every mode runs the same adversary against an [`EmSession`], which
//! decides per classical query which oracle answers it and swaps the quantum
//! oracle at the hybrid cut.

use rand::Rng;

use super::{
    apply_phase_predicate, check_oracle_registers, split_rng, Budget, Direction, EmAdversary,
    EmOracles, GameTranscript, PhasePredicate, QueryLedger,
};
use crate::error::{Error, Result};
use crate::perm::{
    em_forward, em_inverse, perm_reprogram, Key, KeyDistribution, Permutation, Transcript,
};
use crate::rng::TrialRng;
use crate::statevector::StateVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum World {
    /// `(E_k[P], P)`.
    Real,
    /// `(R, P)` with `R` an independent uniform permutation.
    Ideal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmMode {
    Real,
    Ideal,
    /// `H_j` (cut before the `(j+1)`st classical query) or, when primed,
    /// `H'_j` (cut after it).
    Hybrid {
        j: usize,
        primed: bool,
    },
    /// `Expt_j`, or `Expt'_j` when primed.
    Expt {
        j: usize,
        primed: bool,
    },
}

impl From<World> for EmMode {
    fn from(w: World) -> Self {
        match w {
            World::Real => Self::Real,
            World::Ideal => Self::Ideal,
        }
    }
}

/// Parameters of one Even-Mansour game.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmGame {
    pub n: usize,
    pub dist: KeyDistribution,
    pub mode: EmMode,
    /// Grants quantum access to the keyed oracle in the real and ideal
    /// worlds. Outside the query model the bounds speak about.
    pub q2: bool,
}

impl EmGame {
    pub fn new(n: usize, dist: KeyDistribution, mode: EmMode) -> Self {
        Self {
            n,
            dist,
            mode,
            q2: false,
        }
    }

    pub fn with_q2(mut self) -> Self {
        self.q2 = true;
        self
    }

    /// Runs `adv` once. The trial stream is split so the adversary's
    /// randomness is independent of the game's.
    pub fn run(&self, adv: &dyn EmAdversary, rng: &mut TrialRng) -> Result<GameTranscript> {
        let budget = adv.budget();
        match self.mode {
            EmMode::Hybrid { j, primed } | EmMode::Expt { j, primed } => {
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
            _ => {}
        }
        if self.q2 && !matches!(self.mode, EmMode::Real | EmMode::Ideal) {
            return Err(Error::InvalidParameter(
                "Q2 access is only defined for the real and ideal worlds".into(),
            ));
        }
        let (mut adv_rng, mut game_rng) = split_rng(rng);
        let mut session = EmSession::new(*self, budget, &mut game_rng)?;
        let guess = adv.run(&mut session, &mut adv_rng)?;
        let mut transcript = session.ledger.transcript;
        transcript.guess = guess;
        transcript.bad = session.bad;
        Ok(transcript)
    }
}

pub fn run_em_game(
    adv: &dyn EmAdversary,
    n: usize,
    dist: KeyDistribution,
    world: World,
    rng: &mut TrialRng,
) -> Result<GameTranscript> {
    EmGame::new(n, dist, world.into()).run(adv, rng)
}

pub fn run_hybrid(
    adv: &dyn EmAdversary,
    n: usize,
    dist: KeyDistribution,
    j: usize,
    primed: bool,
    rng: &mut TrialRng,
) -> Result<GameTranscript> {
    EmGame::new(n, dist, EmMode::Hybrid { j, primed }).run(adv, rng)
}

pub fn run_expt(
    adv: &dyn EmAdversary,
    n: usize,
    dist: KeyDistribution,
    j: usize,
    primed: bool,
    rng: &mut TrialRng,
) -> Result<GameTranscript> {
    EmGame::new(n, dist, EmMode::Expt { j, primed }).run(adv, rng)
}

/// Which function currently answers classical queries.
enum Classical {
    Random,
    Cipher(Key),
    /// After the cut in `Expt_j` / `Expt'_j`: `E_k[P_1]` with the trap point
    /// `s_1 ⊕ k_1`.
    Swapped {
        p1: Permutation,
        key: Key,
        trap: u64,
    },
}

struct EmSession<'g> {
    game: EmGame,
    rng: &'g mut TrialRng,
    p: Permutation,
    r: Option<Permutation>,
    /// Replaces `p` as the quantum oracle after a hybrid cut.
    q: Option<Permutation>,
    classical: Classical,
    ledger: QueryLedger,
    bad: super::BadFlags,
}

impl<'g> EmSession<'g> {
    fn new(game: EmGame, budget: Budget, rng: &'g mut TrialRng) -> Result<Self> {
        let p = Permutation::sample(game.n, rng)?;
        let r = match game.mode {
            EmMode::Real => None,
            _ => Some(Permutation::sample(game.n, rng)?),
        };
        let classical = match game.mode {
            EmMode::Real => Classical::Cipher(game.dist.sample(game.n, rng)),
            _ => Classical::Random,
        };
        Ok(Self {
            game,
            rng,
            p,
            r,
            q: None,
            classical,
            ledger: QueryLedger::new(budget),
            bad: Default::default(),
        })
    }

    fn public(&self) -> &Permutation {
        self.q.as_ref().unwrap_or(&self.p)
    }

    fn prior(&self) -> Result<Transcript> {
        let pairs: Vec<_> = self
            .ledger
            .transcript
            .classical
            .iter()
            .map(|e| (e.x, e.y))
            .collect();
        Transcript::from_entries(&pairs)
    }

    fn answer(&mut self, direction: Direction, v: u64) -> Result<(u64, u64)> {
        let r = self.r.as_ref();
        Ok(match &self.classical {
            Classical::Random => {
                let r = r.expect("random oracle sampled");
                match direction {
                    Direction::Forward => (v, r.apply(v)),
                    Direction::Inverse => (r.apply_inverse(v), v),
                }
            }
            Classical::Cipher(k) => match direction {
                Direction::Forward => (v, em_forward(&self.p, *k, v)),
                Direction::Inverse => (em_inverse(&self.p, *k, v), v),
            },
            Classical::Swapped { p1, key, trap } => {
                let primed = matches!(self.game.mode, EmMode::Expt { primed: true, .. });
                match direction {
                    Direction::Forward => {
                        let mut y = em_forward(p1, *key, v);
                        if v == *trap {
                            self.bad.bad3 = true;
                            if primed {
                                y = em_forward(&self.p, *key, v);
                            }
                        }
                        (v, y)
                    }
                    Direction::Inverse => {
                        let mut x = em_inverse(p1, *key, v);
                        if x == *trap {
                            self.bad.bad3 = true;
                            if primed {
                                x = em_inverse(&self.p, *key, v);
                            }
                        }
                        (x, v)
                    }
                }
            }
        })
    }

    /// `H_j`: switch to `(E_k[P], P_{T_j,k})` before answering.
    /// `H'_j`: switch to `(E_k[P], P_{T_{j+1},k})` after answering with `R`.
    fn hybrid_cut(&mut self, primed: bool, direction: Direction, v: u64) -> Result<(u64, u64)> {
        let n = self.game.n;
        if primed {
            let (x, y) = self.answer(direction, v)?;
            let mut t = self.prior()?;
            t.push(x, y)?;
            let key = self.game.dist.sample(n, self.rng);
            self.q = Some(perm_reprogram(&self.p, &t, key)?);
            self.classical = Classical::Cipher(key);
            Ok((x, y))
        } else {
            let t = self.prior()?;
            let key = self.game.dist.sample(n, self.rng);
            self.q = Some(perm_reprogram(&self.p, &t, key)?);
            self.classical = Classical::Cipher(key);
            self.answer(direction, v)
        }
    }

    /// The `(j+1)`st query in `Expt_j` / `Expt'_j`, forward or inverse.
    fn expt_cut(&mut self, primed: bool, direction: Direction, v: u64) -> Result<(u64, u64)> {
        let n = self.game.n;
        let size = 1u64 << n;
        let t_j = self.prior()?;
        let s0 = self.rng.random_range(0..size);
        let s1 = self.rng.random_range(0..size);
        let mut p1 = self.p.clone();
        p1.swap_inputs(s0, s1);
        let (key, mut x, mut y) = match direction {
            Direction::Forward => {
                let k1 = s0 ^ v;
                let k2 = self.game.dist.second_given_first(k1, n, self.rng);
                let key = Key::new(k1, k2);
                (key, v, em_forward(&p1, key, v))
            }
            Direction::Inverse => {
                let k2 = p1.apply(s0) ^ v;
                let k1 = self.game.dist.first_given_second(k2, n, self.rng);
                let key = Key::new(k1, k2);
                (key, em_inverse(&p1, key, v), v)
            }
        };
        let mut q = perm_reprogram(&p1, &t_j, key)?;
        let (bad1, bad2) = match direction {
            Direction::Forward => {
                let bad1 = t_j.contains_output(y);
                if bad1 && primed {
                    y = sample_outside(self.rng, size, |c| t_j.contains_output(c));
                }
                (bad1, t_j.contains_input(s1 ^ key.k1))
            }
            Direction::Inverse => {
                let bad1 = t_j.contains_input(x);
                if bad1 && primed {
                    x = sample_outside(self.rng, size, |c| t_j.contains_input(c));
                }
                (bad1, t_j.contains_output(self.p.apply(s0) ^ key.k2))
            }
        };
        self.bad.bad1 = bad1;
        self.bad.bad2 = bad2;
        if primed && (bad1 || bad2) {
            let mut t = t_j.clone();
            t.push(x, y)?;
            q = perm_reprogram(&self.p, &t, key)?;
        }
        self.q = Some(q);
        self.classical = Classical::Swapped {
            p1,
            key,
            trap: s1 ^ key.k1,
        };
        Ok((x, y))
    }
}

fn sample_outside(rng: &mut TrialRng, size: u64, excluded: impl Fn(u64) -> bool) -> u64 {
    loop {
        let c = rng.random_range(0..size);
        if !excluded(c) {
            return c;
        }
    }
}

impl EmOracles for EmSession<'_> {
    fn n(&self) -> usize {
        self.game.n
    }

    fn classical(&mut self, direction: Direction, value: u64) -> Result<u64> {
        if value >> self.game.n != 0 {
            return Err(Error::TableEntryTooWide {
                value,
                width: self.game.n,
            });
        }
        self.ledger.admit_classical(direction, value)?;
        let index = self.ledger.classical_count();
        let (x, y) = match self.game.mode {
            EmMode::Hybrid { j, primed } if index == j => {
                self.hybrid_cut(primed, direction, value)?
            }
            EmMode::Expt { j, primed } if index == j => self.expt_cut(primed, direction, value)?,
            _ => self.answer(direction, value)?,
        };
        self.ledger.record_classical(direction, x, y);
        Ok(match direction {
            Direction::Forward => y,
            Direction::Inverse => x,
        })
    }

    fn quantum(
        &mut self,
        state: &mut StateVector,
        direction: Direction,
        input: &str,
        output: &str,
    ) -> Result<()> {
        check_oracle_registers(state, self.game.n, input, output)?;
        self.ledger.charge_quantum(1)?;
        let p = self.public();
        let table = match direction {
            Direction::Forward => p.table(),
            Direction::Inverse => p.inverse_table(),
        };
        state.xor_oracle(input, output, table)
    }

    fn quantum_basis(&mut self, direction: Direction, x: u64) -> Result<u64> {
        if x >> self.game.n != 0 {
            return Err(Error::TableEntryTooWide {
                value: x,
                width: self.game.n,
            });
        }
        self.ledger.charge_quantum(1)?;
        let p = self.public();
        Ok(match direction {
            Direction::Forward => p.apply(x),
            Direction::Inverse => p.apply_inverse(x),
        })
    }

    fn quantum_phase(
        &mut self,
        state: &mut StateVector,
        register: &str,
        evaluations: usize,
        predicate: PhasePredicate<'_>,
    ) -> Result<()> {
        self.ledger.charge_quantum(2 * evaluations)?;
        let p = self.public();
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
        if !self.game.q2 {
            return Err(Error::KeyedQuantumDenied);
        }
        check_oracle_registers(state, self.game.n, input, output)?;
        self.ledger.charge_keyed()?;
        let size = 1u64 << self.game.n;
        let table: Vec<u32> = match (&self.classical, direction) {
            (Classical::Cipher(k), Direction::Forward) => (0..size)
                .map(|x| em_forward(&self.p, *k, x) as u32)
                .collect(),
            (Classical::Cipher(k), Direction::Inverse) => (0..size)
                .map(|y| em_inverse(&self.p, *k, y) as u32)
                .collect(),
            (Classical::Random, Direction::Forward) => self
                .r
                .as_ref()
                .expect("random oracle sampled")
                .table()
                .to_vec(),
            (Classical::Random, Direction::Inverse) => self
                .r
                .as_ref()
                .expect("random oracle sampled")
                .inverse_table()
                .to_vec(),
            (Classical::Swapped { .. }, _) => return Err(Error::KeyedQuantumDenied),
        };
        state.xor_oracle(input, output, &table)
    }
}
