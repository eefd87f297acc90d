//! The shipped strategy library.
//!
//! Even-Mansour distinguishers implement [`EmAdversary`]; the resampling
//! games take a [`LemmaAdversary`]; the reprogramming game takes a
//! [`ReprogramAdversary`]. The attacks module adds key-recovery wrappers.

use std::collections::{HashMap, HashSet};

use rand::seq::index::sample;
use rand::Rng;

use super::lemmas::{
    EmptySampler, LemmaAdversary, PhasedOracles, ReprogramAdversary, ReprogramSampler, Revealed,
    UniformPointSampler,
};
use super::{Budget, Direction, EmAdversary, EmOracles};
use crate::error::{Error, Result};
use crate::perm::FunctionTable;
use crate::rng::TrialRng;
use crate::statevector::{RegisterLayout, StateVector};

fn distinct_points(rng: &mut TrialRng, width: usize, count: usize) -> Result<Vec<u64>> {
    let size = 1usize << width;
    if count > size {
        return Err(Error::InvalidParameter(format!(
            "{count} distinct points requested from a domain of {size}"
        )));
    }
    Ok(sample(rng, size, count)
        .into_iter()
        .map(|v| v as u64)
        .collect())
}

/// Makes no queries and outputs a constant.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroQuery {
    pub guess: bool,
}

impl EmAdversary for ZeroQuery {
    fn budget(&self) -> Budget {
        Budget::default()
    }

    fn run(&self, _: &mut dyn EmOracles, _: &mut TrialRng) -> Result<bool> {
        Ok(self.guess)
    }
}

impl LemmaAdversary for ZeroQuery {
    fn queries(&self) -> usize {
        0
    }

    fn run(&self, oracles: &mut dyn PhasedOracles, _: &mut TrialRng) -> Result<bool> {
        oracles.reveal()?;
        Ok(self.guess)
    }
}

/// Queries `E(0)` and outputs its low bit.
#[derive(Debug, Clone, Copy, Default)]
pub struct ClassicalLowBit;

impl EmAdversary for ClassicalLowBit {
    fn budget(&self) -> Budget {
        Budget::new(1, 0)
    }

    fn run(&self, o: &mut dyn EmOracles, _: &mut TrialRng) -> Result<bool> {
        Ok(o.classical(Direction::Forward, 0)? & 1 == 1)
    }
}

/// Small fixed adversary for distribution-equality tests.
///
/// Stage `i` makes one basis query to the public oracle at a point that
/// depends on everything seen so far, then classical query `i`: forward at
/// `x = i`, or (for the last one, if `inverse_last`) inverse at the smallest
/// unused output. A final basis query follows the last classical query. The
/// guess is the low bit of the XOR of every value seen.
#[derive(Debug, Clone, Copy)]
pub struct TvProbe {
    pub classical: usize,
    pub inverse_last: bool,
}

impl TvProbe {
    pub fn new(classical: usize) -> Self {
        Self {
            classical,
            inverse_last: false,
        }
    }
}

impl EmAdversary for TvProbe {
    fn budget(&self) -> Budget {
        Budget::new(self.classical, self.classical + 1)
    }

    fn run(&self, o: &mut dyn EmOracles, _: &mut TrialRng) -> Result<bool> {
        let mask = (1u64 << o.n()) - 1;
        let mut acc = 0u64;
        let mut outputs = Vec::new();
        for i in 0..self.classical {
            acc ^= o.quantum_basis(Direction::Forward, acc & mask)?;
            if self.inverse_last && i + 1 == self.classical {
                let y = (0..=mask)
                    .find(|y| !outputs.contains(y))
                    .expect("unused output");
                acc ^= o.classical(Direction::Inverse, y)?;
            } else {
                let y = o.classical(Direction::Forward, i as u64)?;
                outputs.push(y);
                acc ^= y;
            }
        }
        acc ^= o.quantum_basis(Direction::Forward, acc & mask)?;
        Ok(acc & 1 == 1)
    }
}

/// Classical pair `(x, y)` and public probe `u` are consistent with a
/// one-key cipher when `P(u) ⊕ u = y ⊕ x`, i.e. `k = u ⊕ x`.
///
/// Makes `q_e` classical forward queries at distinct random points and
/// `q_p` basis probes of the public oracle at distinct random points, then
/// outputs 1 iff some pair and probe are consistent.
#[derive(Debug, Clone, Copy)]
pub struct SlideProbe {
    pub q_e: usize,
    pub q_p: usize,
}

impl EmAdversary for SlideProbe {
    fn budget(&self) -> Budget {
        Budget::new(self.q_e, self.q_p)
    }

    fn run(&self, o: &mut dyn EmOracles, rng: &mut TrialRng) -> Result<bool> {
        let n = o.n();
        let mut targets = HashSet::new();
        for x in distinct_points(rng, n, self.q_e)? {
            targets.insert(o.classical(Direction::Forward, x)? ^ x);
        }
        let mut hit = false;
        for u in distinct_points(rng, n, self.q_p)? {
            hit |= targets.contains(&(o.quantum_basis(Direction::Forward, u)? ^ u));
        }
        Ok(hit)
    }
}

/// Crafted adversary for adjacent hybrids: learns `y1 = E(0)`, then spends
/// its whole quantum budget after that on probes `u` and outputs 1 iff some
/// `Q(u) ⊕ u = y1`. Against a one-key cipher the probe `u = k` succeeds
/// exactly when the public oracle agrees with the classical answer.
#[derive(Debug, Clone, Copy)]
pub struct KeyGuessProbe {
    pub q_p: usize,
}

impl EmAdversary for KeyGuessProbe {
    fn budget(&self) -> Budget {
        Budget::new(1, self.q_p)
    }

    fn run(&self, o: &mut dyn EmOracles, rng: &mut TrialRng) -> Result<bool> {
        let y1 = o.classical(Direction::Forward, 0)?;
        let mut hit = false;
        for u in distinct_points(rng, o.n(), self.q_p)? {
            hit |= o.quantum_basis(Direction::Forward, u)? ^ u == y1;
        }
        Ok(hit)
    }
}

/// Grover search for a one-key `k` with `P(x_i ⊕ k) ⊕ k = y_i` for all of
/// `q_e` classical pairs, using `iterations` amplification rounds of
/// `q_e` evaluations each. Outputs 1 iff the measured candidate is
/// consistent with every pair (checked with one further basis query per
/// pair).
#[derive(Debug, Clone, Copy)]
pub struct GroverKeySearch {
    pub q_e: usize,
    pub iterations: usize,
}

impl GroverKeySearch {
    /// Total public-oracle queries: `2·q_e` per round plus `q_e` checks.
    pub fn quantum_queries(&self) -> usize {
        2 * self.q_e * self.iterations + self.q_e
    }
}

impl EmAdversary for GroverKeySearch {
    fn budget(&self) -> Budget {
        Budget::new(self.q_e, self.quantum_queries())
    }

    fn run(&self, o: &mut dyn EmOracles, rng: &mut TrialRng) -> Result<bool> {
        if self.q_e == 0 {
            return Ok(false);
        }
        let n = o.n();
        let mut pairs = Vec::with_capacity(self.q_e);
        for x in distinct_points(rng, n, self.q_e)? {
            pairs.push((x, o.classical(Direction::Forward, x)?));
        }
        let mut state = StateVector::uniform(RegisterLayout::new(&[("k", n)])?, "k")?;
        let pred = |p: &dyn Fn(Direction, u64) -> u64, k: u64| {
            pairs
                .iter()
                .all(|&(x, y)| p(Direction::Forward, x ^ k) ^ k == y)
        };
        for _ in 0..self.iterations {
            o.quantum_phase(&mut state, "k", self.q_e, &pred)?;
            state.diffusion("k")?;
        }
        let k = state.measure("k", rng)?;
        for &(x, y) in &pairs {
            if o.quantum_basis(Direction::Forward, x ^ k)? ^ k != y {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Canonical permutation-resampling attacker: probes `q` distinct random
/// points in phase 1, and after learning `(s0, s1)` re-queries whichever of
/// them it probed. Outputs 1 iff a stored value changed.
#[derive(Debug, Clone, Copy)]
pub struct CanonicalPermProber {
    pub q: usize,
}

impl LemmaAdversary for CanonicalPermProber {
    fn queries(&self) -> usize {
        self.q
    }

    fn run(&self, o: &mut dyn PhasedOracles, rng: &mut TrialRng) -> Result<bool> {
        let mut seen = HashMap::new();
        for x in distinct_points(rng, o.m(), self.q)? {
            seen.insert(x, o.quantum_basis(Direction::Forward, x)?);
        }
        let Revealed::Swap { s0, s1 } = o.reveal()? else {
            return Err(Error::WrongPhase("expected a swap reveal"));
        };
        if s0 == s1 {
            return Ok(false);
        }
        for s in [s0, s1] {
            if let Some(&v) = seen.get(&s) {
                if o.quantum_basis(Direction::Forward, s)? != v {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }
}

/// Function-resampling attacker that probes `q` points in phase 1 (the
/// fixed points `0..q` when `fixed`, else distinct random ones), and
/// re-queries the revealed `s` if it was probed.
#[derive(Debug, Clone, Copy)]
pub struct FnProber {
    pub q: usize,
    pub fixed: bool,
}

impl LemmaAdversary for FnProber {
    fn queries(&self) -> usize {
        self.q
    }

    fn run(&self, o: &mut dyn PhasedOracles, rng: &mut TrialRng) -> Result<bool> {
        let points = if self.fixed {
            (0..self.q as u64).collect()
        } else {
            distinct_points(rng, o.m(), self.q)?
        };
        let mut seen = HashMap::new();
        for x in points {
            seen.insert(x, o.quantum_basis(Direction::Forward, x)?);
        }
        let Revealed::Point(s) = o.reveal()? else {
            return Err(Error::WrongPhase("expected a point reveal"));
        };
        match seen.get(&s) {
            Some(&v) => Ok(o.quantum_basis(Direction::Forward, s)? != v),
            None => Ok(false),
        }
    }
}

/// One-query quantum attacker on the function-resampling game: computes
/// `F` into a uniform superposition, and after the reveal uncomputes with
/// `F_b`. A nonzero output register betrays a change at `s`.
#[derive(Debug, Clone, Copy, Default)]
pub struct UncomputeTester;

impl LemmaAdversary for UncomputeTester {
    fn queries(&self) -> usize {
        1
    }

    fn run(&self, o: &mut dyn PhasedOracles, rng: &mut TrialRng) -> Result<bool> {
        let layout = RegisterLayout::new(&[("x", o.m()), ("y", o.n())])?;
        let mut state = StateVector::uniform(layout, "x")?;
        o.quantum(&mut state, Direction::Forward, "x", "y")?;
        o.reveal()?;
        o.quantum(&mut state, Direction::Forward, "x", "y")?;
        Ok(state.measure("y", rng)? != 0)
    }
}

/// Reprogramming-game adversary with a uniform `F` on `m → n` bits and the
/// single-point sampler. Queries a fixed point `x*` and outputs 1 iff the
/// answer differs from `F(x*)`.
#[derive(Debug, Clone, Copy)]
pub struct FixedPointReprogrammer {
    pub sampler: UniformPointSampler,
    pub point: u64,
}

impl FixedPointReprogrammer {
    pub fn new(m: usize, n: usize) -> Self {
        Self {
            sampler: UniformPointSampler { m, n },
            point: 0,
        }
    }
}

impl ReprogramAdversary for FixedPointReprogrammer {
    fn m(&self) -> usize {
        self.sampler.m
    }

    fn n(&self) -> usize {
        self.sampler.n
    }

    fn sampler(&self) -> &dyn ReprogramSampler {
        &self.sampler
    }

    fn function(&self, rng: &mut TrialRng) -> Result<FunctionTable> {
        FunctionTable::sample(self.sampler.m, self.sampler.n, rng)
    }

    fn run(&self, f: &FunctionTable, o: &mut dyn PhasedOracles, _: &mut TrialRng) -> Result<bool> {
        let seen = o.quantum_basis(Direction::Forward, self.point)?;
        let Revealed::Randomness(r) = o.reveal()? else {
            return Err(Error::WrongPhase("expected the sampler randomness"));
        };
        let (point, _) = self.sampler.decode(r);
        Ok(point == self.point && seen != f.apply(self.point))
    }
}

/// Adaptive reprogramming-game adversary: before each query it flips a fair
/// coin and stops on tails, so it makes one query in expectation. Each
/// query goes to a fresh uniform point; outputs 1 iff some answer differs
/// from `F`.
#[derive(Debug, Clone, Copy)]
pub struct GeometricReprogrammer {
    pub sampler: UniformPointSampler,
}

impl GeometricReprogrammer {
    pub fn new(m: usize, n: usize) -> Self {
        Self {
            sampler: UniformPointSampler { m, n },
        }
    }
}

impl ReprogramAdversary for GeometricReprogrammer {
    fn m(&self) -> usize {
        self.sampler.m
    }

    fn n(&self) -> usize {
        self.sampler.n
    }

    fn sampler(&self) -> &dyn ReprogramSampler {
        &self.sampler
    }

    fn function(&self, rng: &mut TrialRng) -> Result<FunctionTable> {
        FunctionTable::sample(self.sampler.m, self.sampler.n, rng)
    }

    fn run(
        &self,
        f: &FunctionTable,
        o: &mut dyn PhasedOracles,
        rng: &mut TrialRng,
    ) -> Result<bool> {
        let size = 1u64 << self.sampler.m;
        let mut asked = HashSet::new();
        let mut changed = false;
        while asked.len() < size as usize && rng.random_bool(0.5) {
            let x = loop {
                let x = rng.random_range(0..size);
                if asked.insert(x) {
                    break x;
                }
            };
            changed |= o.quantum_basis(Direction::Forward, x)? != f.apply(x);
        }
        o.reveal()?;
        Ok(changed)
    }
}

/// Reprogramming-game adversary whose sampler never reprograms anything.
#[derive(Debug, Clone, Copy)]
pub struct EmptyReprogrammer {
    pub m: usize,
    pub n: usize,
    pub probes: usize,
}

impl ReprogramAdversary for EmptyReprogrammer {
    fn m(&self) -> usize {
        self.m
    }

    fn n(&self) -> usize {
        self.n
    }

    fn sampler(&self) -> &dyn ReprogramSampler {
        &EmptySampler
    }

    fn function(&self, rng: &mut TrialRng) -> Result<FunctionTable> {
        FunctionTable::sample(self.m, self.n, rng)
    }

    fn run(
        &self,
        f: &FunctionTable,
        o: &mut dyn PhasedOracles,
        rng: &mut TrialRng,
    ) -> Result<bool> {
        let mut changed = false;
        for x in distinct_points(rng, self.m, self.probes)? {
            changed |= o.quantum_basis(Direction::Forward, x)? != f.apply(x);
        }
        o.reveal()?;
        Ok(changed)
    }
}
