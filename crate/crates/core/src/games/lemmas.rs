//! The three two-phase reprogramming games: permutation resampling, function
//! resampling, and arbitrary reprogramming of a function on a sampled set.
//!
//! Each game hands the adversary a [`PhasedOracles`] interface. Calling
//! [`PhasedOracles::reveal`] ends the first phase and returns the hidden
//! randomness; in the resampling games the oracle switches to `P_b` / `F_b`
//! at that moment, in the reprogramming game oracle access ends.

use rand::Rng;

use super::estimate::{estimate_fn, AdvantageEstimate};
use super::{check_oracle_registers_mn, split_rng, Direction};
use crate::bounds::Bound;
use crate::error::{Error, Result};
use crate::perm::{FunctionTable, Permutation, ReprogramSet};
use crate::rng::TrialRng;
use crate::statevector::StateVector;

/// Hidden randomness handed over at the phase switch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Revealed {
    /// The swapped pair of the permutation game.
    Swap { s0: u64, s1: u64 },
    /// The resampled point of the function game (the new value stays hidden).
    Point(u64),
    /// The sampler's randomness in the reprogramming game.
    Randomness(u64),
}

/// Oracle interface of the two-phase games.
pub trait PhasedOracles {
    /// Input width.
    fn m(&self) -> usize;
    /// Output width.
    fn n(&self) -> usize;

    fn quantum(
        &mut self,
        state: &mut StateVector,
        direction: Direction,
        input: &str,
        output: &str,
    ) -> Result<()>;

    /// One query on a basis state, returning the oracle value.
    fn quantum_basis(&mut self, direction: Direction, x: u64) -> Result<u64>;

    /// Ends the current phase and returns the hidden randomness.
    fn reveal(&mut self) -> Result<Revealed>;
}

/// Adversary for the two resampling games.
pub trait LemmaAdversary: Sync {
    /// Phase-1 query budget `q`.
    fn queries(&self) -> usize;

    fn run(&self, oracles: &mut dyn PhasedOracles, rng: &mut TrialRng) -> Result<bool>;
}

/// Outcome of one two-phase game.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LemmaRun {
    pub guess: bool,
    /// Queries before the reveal.
    pub phase1_queries: usize,
    /// Queries after the reveal.
    pub phase2_queries: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    First,
    Second,
    Closed,
}

fn check_input(x: u64, width: usize) -> Result<()> {
    if x >> width != 0 {
        return Err(Error::TableEntryTooWide { value: x, width });
    }
    Ok(())
}

/// Permutation-resampling game: phase 1 has `q` queries to `P, P⁻¹`; then
/// `s0, s1` are drawn uniformly and phase 2 queries `P_b` with
/// `P_1 = P ∘ swap(s0, s1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PermResamplingGame {
    pub n: usize,
    /// Phase-2 query cap; the game itself allows unbounded work.
    pub phase2_cap: usize,
}

impl PermResamplingGame {
    /// Game with the default phase-2 cap of `2^n` queries.
    pub fn new(n: usize) -> Self {
        Self {
            n,
            phase2_cap: 1 << n,
        }
    }

    pub fn run(&self, adv: &dyn LemmaAdversary, b: bool, rng: &mut TrialRng) -> Result<LemmaRun> {
        let (mut adv_rng, mut game_rng) = split_rng(rng);
        let p = Permutation::sample(self.n, &mut game_rng)?;
        let mut s = PermSession {
            game: *self,
            b,
            budget: adv.queries(),
            p,
            phase: Phase::First,
            counts: [0, 0],
            rng: game_rng,
        };
        let guess = adv.run(&mut s, &mut adv_rng)?;
        Ok(LemmaRun {
            guess,
            phase1_queries: s.counts[0],
            phase2_queries: s.counts[1],
        })
    }
}

pub fn run_perm_resampling_game(
    adv: &dyn LemmaAdversary,
    n: usize,
    b: bool,
    rng: &mut TrialRng,
) -> Result<bool> {
    Ok(PermResamplingGame::new(n).run(adv, b, rng)?.guess)
}

struct PermSession {
    game: PermResamplingGame,
    b: bool,
    budget: usize,
    p: Permutation,
    phase: Phase,
    counts: [usize; 2],
    rng: TrialRng,
}

impl PermSession {
    fn charge(&mut self) -> Result<()> {
        let (slot, cap, kind) = match self.phase {
            Phase::First => (0, self.budget, "phase-1"),
            _ => (1, self.game.phase2_cap, "phase-2"),
        };
        if self.counts[slot] >= cap {
            return Err(Error::BudgetExceeded { kind, budget: cap });
        }
        self.counts[slot] += 1;
        Ok(())
    }
}

impl PhasedOracles for PermSession {
    fn m(&self) -> usize {
        self.game.n
    }

    fn n(&self) -> usize {
        self.game.n
    }

    fn quantum(
        &mut self,
        state: &mut StateVector,
        direction: Direction,
        input: &str,
        output: &str,
    ) -> Result<()> {
        check_oracle_registers_mn(state, self.game.n, self.game.n, input, output)?;
        self.charge()?;
        let table = match direction {
            Direction::Forward => self.p.table(),
            Direction::Inverse => self.p.inverse_table(),
        };
        state.xor_oracle(input, output, table)
    }

    fn quantum_basis(&mut self, direction: Direction, x: u64) -> Result<u64> {
        check_input(x, self.game.n)?;
        self.charge()?;
        Ok(match direction {
            Direction::Forward => self.p.apply(x),
            Direction::Inverse => self.p.apply_inverse(x),
        })
    }

    fn reveal(&mut self) -> Result<Revealed> {
        if self.phase != Phase::First {
            return Err(Error::WrongPhase("already revealed"));
        }
        let size = 1u64 << self.game.n;
        let s0 = self.rng.random_range(0..size);
        let s1 = self.rng.random_range(0..size);
        if self.b {
            self.p.swap_inputs(s0, s1);
        }
        self.phase = Phase::Second;
        Ok(Revealed::Swap { s0, s1 })
    }
}

/// Function-resampling game: phase 1 has `q` queries to a uniform
/// `F: {0,1}^m → {0,1}^n`; then `s` and `y` are drawn uniformly and phase 2
/// queries `F_b` with `F_1 = F_{s↦y}`. Only `s` is revealed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FnResamplingGame {
    pub m: usize,
    pub n: usize,
    pub phase2_cap: usize,
}

impl FnResamplingGame {
    pub fn new(m: usize, n: usize) -> Self {
        Self {
            m,
            n,
            phase2_cap: 1 << m,
        }
    }

    pub fn run(&self, adv: &dyn LemmaAdversary, b: bool, rng: &mut TrialRng) -> Result<LemmaRun> {
        let (mut adv_rng, mut game_rng) = split_rng(rng);
        let f = FunctionTable::sample(self.m, self.n, &mut game_rng)?;
        let mut s = FnSession {
            m: self.m,
            n: self.n,
            caps: [adv.queries(), self.phase2_cap],
            f,
            phase: Phase::First,
            counts: [0, 0],
            on_reveal: Box::new(move |f: &mut FunctionTable, rng: &mut TrialRng| {
                let point = rng.random_range(0..1u64 << f.m());
                let y = rng.random_range(0..1u64 << f.n());
                if b {
                    *f = f.reprogram_point(point, y)?;
                }
                Ok((Revealed::Point(point), Phase::Second))
            }),
            rng: game_rng,
        };
        let guess = adv.run(&mut s, &mut adv_rng)?;
        Ok(LemmaRun {
            guess,
            phase1_queries: s.counts[0],
            phase2_queries: s.counts[1],
        })
    }
}

pub fn run_fn_resampling_game(
    adv: &dyn LemmaAdversary,
    m: usize,
    n: usize,
    b: bool,
    rng: &mut TrialRng,
) -> Result<bool> {
    Ok(FnResamplingGame::new(m, n).run(adv, b, rng)?.guess)
}

type RevealFn = Box<dyn FnMut(&mut FunctionTable, &mut TrialRng) -> Result<(Revealed, Phase)>>;

/// Function-oracle session shared by the function-resampling and the
/// reprogramming games.
struct FnSession {
    m: usize,
    n: usize,
    caps: [usize; 2],
    f: FunctionTable,
    phase: Phase,
    counts: [usize; 2],
    on_reveal: RevealFn,
    rng: TrialRng,
}

impl FnSession {
    fn charge(&mut self, direction: Direction) -> Result<()> {
        if direction == Direction::Inverse {
            return Err(Error::InverseUnavailable);
        }
        let slot = match self.phase {
            Phase::First => 0,
            Phase::Second => 1,
            Phase::Closed => return Err(Error::WrongPhase("oracle access has ended")),
        };
        if self.counts[slot] >= self.caps[slot] {
            return Err(Error::BudgetExceeded {
                kind: if slot == 0 { "phase-1" } else { "phase-2" },
                budget: self.caps[slot],
            });
        }
        self.counts[slot] += 1;
        Ok(())
    }
}

impl PhasedOracles for FnSession {
    fn m(&self) -> usize {
        self.m
    }

    fn n(&self) -> usize {
        self.n
    }

    fn quantum(
        &mut self,
        state: &mut StateVector,
        direction: Direction,
        input: &str,
        output: &str,
    ) -> Result<()> {
        check_oracle_registers_mn(state, self.m, self.n, input, output)?;
        self.charge(direction)?;
        state.xor_oracle(input, output, self.f.table())
    }

    fn quantum_basis(&mut self, direction: Direction, x: u64) -> Result<u64> {
        check_input(x, self.m)?;
        self.charge(direction)?;
        Ok(self.f.apply(x))
    }

    fn reveal(&mut self) -> Result<Revealed> {
        if self.phase != Phase::First {
            return Err(Error::WrongPhase("already revealed"));
        }
        let (revealed, next) = (self.on_reveal)(&mut self.f, &mut self.rng)?;
        self.phase = next;
        Ok(revealed)
    }
}

/// A randomized algorithm `B` that maps its randomness `r ∈ [0, space)` to a
/// reprogramming set.
pub trait ReprogramSampler: Sync {
    fn space(&self) -> u64;

    fn sample(&self, r: u64) -> Result<ReprogramSet>;

    /// Analytic bound on `max_x Pr[x ∈ B_1]`, used when the randomness
    /// space is too large to enumerate.
    fn epsilon_bound(&self) -> Option<f64> {
        None
    }
}

/// Largest randomness space [`epsilon`] enumerates.
pub const ENUMERATION_LIMIT: u64 = 1 << 12;

/// `ε = max_x Pr_r[x ∈ B_1(r)]` over an `m`-bit domain.
pub fn epsilon(sampler: &dyn ReprogramSampler, m: usize) -> Result<f64> {
    let space = sampler.space();
    if space == 0 {
        return Err(Error::InvalidParameter(
            "sampler has empty randomness space".into(),
        ));
    }
    if space > ENUMERATION_LIMIT {
        return sampler.epsilon_bound().ok_or_else(|| {
            Error::InvalidParameter(format!(
                "randomness space {space} exceeds {ENUMERATION_LIMIT} and no analytic bound given"
            ))
        });
    }
    let mut hits = vec![0u64; 1 << m];
    for r in 0..space {
        for &(x, _) in sampler.sample(r)?.pairs() {
            check_input(x, m)?;
            hits[x as usize] += 1;
        }
    }
    Ok(*hits.iter().max().unwrap_or(&0) as f64 / space as f64)
}

/// Always reprograms nothing.
#[derive(Debug, Clone, Copy, Default)]
pub struct EmptySampler;

impl ReprogramSampler for EmptySampler {
    fn space(&self) -> u64 {
        1
    }

    fn sample(&self, _r: u64) -> Result<ReprogramSet> {
        Ok(ReprogramSet::empty())
    }
}

/// Reprograms one uniform point to a uniform value; `r` packs
/// `point · 2^n + value`.
#[derive(Debug, Clone, Copy)]
pub struct UniformPointSampler {
    pub m: usize,
    pub n: usize,
}

impl UniformPointSampler {
    pub fn decode(&self, r: u64) -> (u64, u64) {
        (r >> self.n, r & ((1 << self.n) - 1))
    }
}

impl ReprogramSampler for UniformPointSampler {
    fn space(&self) -> u64 {
        1 << (self.m + self.n)
    }

    fn sample(&self, r: u64) -> Result<ReprogramSet> {
        ReprogramSet::new(vec![self.decode(r)])
    }

    fn epsilon_bound(&self) -> Option<f64> {
        Some(1.0 / (1u64 << self.m) as f64)
    }
}

/// Adversary for the arbitrary-reprogramming game. It picks `F` and `B`,
/// queries `F_b` adaptively, then learns `r` and guesses.
pub trait ReprogramAdversary: Sync {
    fn m(&self) -> usize;
    fn n(&self) -> usize;
    fn sampler(&self) -> &dyn ReprogramSampler;
    fn function(&self, rng: &mut TrialRng) -> Result<FunctionTable>;

    fn run(
        &self,
        f: &FunctionTable,
        oracles: &mut dyn PhasedOracles,
        rng: &mut TrialRng,
    ) -> Result<bool>;
}

/// Arbitrary-reprogramming game. `query_cap` guards against runaway
/// adaptive strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReprogrammingGame {
    pub query_cap: usize,
}

impl Default for ReprogrammingGame {
    fn default() -> Self {
        Self { query_cap: 1 << 16 }
    }
}

impl ReprogrammingGame {
    /// Runs the game; `phase1_queries` of the result counts the queries to
    /// `F_b`.
    pub fn run(
        &self,
        adv: &dyn ReprogramAdversary,
        b: bool,
        rng: &mut TrialRng,
    ) -> Result<LemmaRun> {
        let (mut adv_rng, mut game_rng) = split_rng(rng);
        let f = adv.function(&mut adv_rng)?;
        if f.m() != adv.m() || f.n() != adv.n() {
            return Err(Error::InvalidParameter(
                "function widths differ from the declared ones".into(),
            ));
        }
        let space = adv.sampler().space();
        if space == 0 {
            return Err(Error::InvalidParameter(
                "sampler has empty randomness space".into(),
            ));
        }
        let r = game_rng.random_range(0..space);
        let set = adv.sampler().sample(r)?;
        let oracle = if b { f.reprogram_set(&set)? } else { f.clone() };
        let mut s = FnSession {
            m: f.m(),
            n: f.n(),
            caps: [self.query_cap, 0],
            f: oracle,
            phase: Phase::First,
            counts: [0, 0],
            on_reveal: Box::new(move |_, _| Ok((Revealed::Randomness(r), Phase::Closed))),
            rng: game_rng,
        };
        let guess = adv.run(&f, &mut s, &mut adv_rng)?;
        Ok(LemmaRun {
            guess,
            phase1_queries: s.counts[0],
            phase2_queries: 0,
        })
    }
}

pub fn run_arbitrary_reprogramming_game(
    adv: &dyn ReprogramAdversary,
    b: bool,
    rng: &mut TrialRng,
) -> Result<bool> {
    Ok(ReprogrammingGame::default().run(adv, b, rng)?.guess)
}

pub fn estimate_perm_resampling(
    adv: &dyn LemmaAdversary,
    game: PermResamplingGame,
    trials: usize,
    seed: u64,
) -> Result<AdvantageEstimate> {
    let bound = Bound::PermutationResampling {
        n: game.n,
        q: adv.queries() as f64,
    };
    estimate_fn(trials, seed, "resample-perm", bound, |b, r| {
        Ok(game.run(adv, b, r)?.guess)
    })
}

pub fn estimate_fn_resampling(
    adv: &dyn LemmaAdversary,
    game: FnResamplingGame,
    trials: usize,
    seed: u64,
) -> Result<AdvantageEstimate> {
    let bound = Bound::FunctionResampling {
        m: game.m,
        q: adv.queries() as f64,
    };
    estimate_fn(trials, seed, "resample-fn", bound, |b, r| {
        Ok(game.run(adv, b, r)?.guess)
    })
}

/// Reprogramming-game estimate together with the calibrated `q` and `ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReprogramEstimate {
    pub estimate: AdvantageEstimate,
    /// Mean query count over dedicated `b = 0` calibration runs.
    pub expected_queries: f64,
    pub epsilon: f64,
}

pub fn estimate_reprogramming(
    adv: &dyn ReprogramAdversary,
    game: ReprogrammingGame,
    trials: usize,
    seed: u64,
) -> Result<ReprogramEstimate> {
    let eps = epsilon(adv.sampler(), adv.m())?;
    let expected_queries = mean_queries(adv, game, trials, seed)?;
    let bound = Bound::Reprogramming {
        q: expected_queries,
        epsilon: eps,
    };
    let estimate = estimate_fn(trials, seed, "reprogram", bound, |b, r| {
        Ok(game.run(adv, b, r)?.guess)
    })?;
    Ok(ReprogramEstimate {
        estimate,
        expected_queries,
        epsilon: eps,
    })
}

fn mean_queries(
    adv: &dyn ReprogramAdversary,
    game: ReprogrammingGame,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    use rayon::prelude::*;
    let sum = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut r = crate::rng::trial_rng(seed, "reprogram/calibrate", i);
            game.run(adv, false, &mut r).map(|run| run.phase1_queries)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(sum as f64 / trials as f64)
}
