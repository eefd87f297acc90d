//! Claw finding between `E(x) ⊕ E(x ⊕ δ)` and `g(u) = P(u) ⊕ P(u ⊕ δ)`.
//!
//! For the real cipher `E(x) ⊕ E(x ⊕ δ) = g(x ⊕ k1)`, so a table of
//! classical differences turns into marked points `u = x_i ⊕ k1` for a
//! search over the public permutation. Each hit proposes `k1 = u ⊕ x_i` and
//! `k2 = E(x_i) ⊕ P(x_i ⊕ k1)`, which is then checked on two more pairs.

use std::collections::HashMap;

use rand::seq::index::sample;

use super::grover::{grover_iterations, grover_success_probability};
use super::{AttackResult, Counted, DirectOracles};
use crate::error::{Error, Result};
use crate::games::{Direction, EmOracles, OracleEval};
use crate::perm::{Key, Permutation};
use crate::rng::TrialRng;
use crate::statevector::{RegisterLayout, StateVector};

/// Largest block width the claw attacks accept.
pub const MAX_CLAW_WIDTH: usize = 24;

/// Largest width for the quantum search.
pub const MAX_Q1_WIDTH: usize = 18;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClawParams {
    pub delta: u64,
    pub table_size: usize,
    /// Grover runs before giving up.
    pub retries: usize,
    /// Grover iterations per run; `None` takes the closed form for
    /// `2 · table_size` marked points.
    pub iterations: Option<usize>,
}

impl ClawParams {
    pub fn new(table_size: usize) -> Self {
        Self {
            delta: super::DEFAULT_DELTA,
            table_size,
            retries: 4,
            iterations: None,
        }
    }

    pub fn iterations_for(&self, n: usize) -> Result<usize> {
        match self.iterations {
            Some(k) => Ok(k),
            None => grover_iterations(n, 2 * self.table_size),
        }
    }

    /// Per run: `4k` for the search, 2 to recompute `g(u)`, 3 to verify.
    pub fn quantum_cap(&self, n: usize) -> Result<usize> {
        Ok(self.retries * (4 * self.iterations_for(n)? + 5))
    }
}

/// Classical queries for a table of `size`: two per entry, plus two fresh
/// verification pairs when the table has fewer than two entries.
pub fn classical_cap(size: usize) -> usize {
    2 * size + if size < 2 { 2 } else { 0 }
}

/// Public queries of the birthday attack: two per probe, three per hit.
pub fn birthday_quantum_cap(t_size: usize) -> usize {
    5 * t_size
}

/// Exact statistics of one claw instance, from exhaustive enumeration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClawAnalysis {
    /// `|M|`: points `u` with `g(u)` in the table.
    pub marked: usize,
    /// `|C|`: marked points whose candidate key verifies.
    pub correct: usize,
    pub iterations: usize,
    /// `sin²((2k+1)θ_M) · |C| / |M|` with `sin θ_M = √(|M|/2^n)`.
    pub predicted: f64,
}

/// The classical half of the attack: `x_i` with the lowest set bit of `δ`
/// cleared, and `t_i = E(x_i) ⊕ E(x_i ⊕ δ)`.
#[derive(Debug, Clone)]
pub struct ClawTable {
    pub n: usize,
    pub delta: u64,
    pub xs: Vec<u64>,
    pub e0: Vec<u64>,
    pub e1: Vec<u64>,
    first: HashMap<u64, usize>,
    is_target: Vec<bool>,
    fresh: Vec<(u64, u64)>,
}

impl ClawTable {
    pub fn build(
        o: &mut dyn EmOracles,
        delta: u64,
        size: usize,
        rng: &mut TrialRng,
    ) -> Result<Self> {
        let n = o.n();
        if n == 0 || n > MAX_CLAW_WIDTH {
            return Err(Error::WidthOutOfRange(n));
        }
        if delta == 0 || delta >> n != 0 {
            return Err(Error::InvalidParameter(format!(
                "δ must be a nonzero {n}-bit value"
            )));
        }
        let half = 1usize << (n - 1);
        if size > half {
            return Err(Error::InvalidParameter(format!(
                "table size {size} exceeds 2^(n-1) = {half}"
            )));
        }
        let low = delta.trailing_zeros();
        let below = (1u64 << low) - 1;
        let mut t = Self {
            n,
            delta,
            xs: Vec::with_capacity(size),
            e0: Vec::with_capacity(size),
            e1: Vec::with_capacity(size),
            first: HashMap::new(),
            is_target: vec![false; 1 << n],
            fresh: Vec::new(),
        };
        for v in sample(rng, half, size) {
            let v = v as u64;
            let x = ((v & !below) << 1) | (v & below);
            let a = o.classical(Direction::Forward, x)?;
            let b = o.classical(Direction::Forward, x ^ delta)?;
            t.first.entry(a ^ b).or_insert(t.xs.len());
            t.is_target[(a ^ b) as usize] = true;
            t.xs.push(x);
            t.e0.push(a);
            t.e1.push(b);
        }
        Ok(t)
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn is_target(&self, t: u64) -> bool {
        self.is_target[t as usize]
    }

    /// First table index with `t_i = t`.
    pub fn index_of(&self, t: u64) -> Option<usize> {
        self.first.get(&t).copied()
    }

    /// `g(u)` through the public oracle: two queries.
    pub fn g(&self, o: &mut dyn EmOracles, u: u64) -> Result<u64> {
        Ok(o.quantum_basis(Direction::Forward, u)?
            ^ o.quantum_basis(Direction::Forward, u ^ self.delta)?)
    }

    fn in_table(&self, x: u64) -> bool {
        let low = self.delta.trailing_zeros();
        let base = if (x >> low) & 1 == 1 {
            x ^ self.delta
        } else {
            x
        };
        self.xs.contains(&base)
    }

    /// Two known pairs independent of entry `i`, querying fresh points if
    /// the table is too small.
    fn check_pairs(&mut self, o: &mut dyn EmOracles, i: usize) -> Result<Vec<(u64, u64)>> {
        let mut pairs: Vec<(u64, u64)> = (0..self.len())
            .filter(|&j| j != i)
            .map(|j| (self.xs[j], self.e0[j]))
            .chain(
                (0..self.len())
                    .filter(|&j| j != i)
                    .map(|j| (self.xs[j] ^ self.delta, self.e1[j])),
            )
            .take(2)
            .collect();
        let mut x = 0u64;
        while pairs.len() < 2 {
            if let Some(&pair) = self.fresh.get(pairs.len()) {
                pairs.push(pair);
                continue;
            }
            while self.in_table(x) || self.fresh.iter().any(|&(f, _)| f == x) {
                x += 1;
            }
            let y = o.classical(Direction::Forward, x)?;
            self.fresh.push((x, y));
        }
        Ok(pairs)
    }

    /// Checks the candidate `k1 = u ⊕ x_i`; up to three public queries.
    pub fn verify(&mut self, o: &mut dyn EmOracles, i: usize, k1: u64) -> Result<Option<Key>> {
        let k2 = self.e0[i] ^ o.quantum_basis(Direction::Forward, self.xs[i] ^ k1)?;
        for (x, y) in self.check_pairs(o, i)? {
            if o.quantum_basis(Direction::Forward, x ^ k1)? ^ k2 != y {
                return Ok(None);
            }
        }
        Ok(Some(Key::new(k1, k2)))
    }

    /// Handles a measured or probed `u`: computes `g(u)` and, on a table
    /// hit, verifies the candidate of the first matching entry.
    pub fn try_point(&mut self, o: &mut dyn EmOracles, u: u64) -> Result<Option<Key>> {
        let t = self.g(o, u)?;
        match self.index_of(t) {
            Some(i) => self.verify(o, i, u ^ self.xs[i]),
            None => Ok(None),
        }
    }

    /// One Grover run with `iterations` rounds, each charged four public
    /// queries, followed by [`try_point`](Self::try_point) on the outcome.
    pub fn grover_run(
        &mut self,
        o: &mut dyn EmOracles,
        iterations: usize,
        rng: &mut TrialRng,
    ) -> Result<Option<Key>> {
        let mut state = StateVector::uniform(RegisterLayout::new(&[("u", self.n)])?, "u")?;
        {
            let delta = self.delta;
            let marks = &self.is_target;
            let pred = |p: OracleEval<'_>, u: u64| {
                marks[(p(Direction::Forward, u) ^ p(Direction::Forward, u ^ delta)) as usize]
            };
            for _ in 0..iterations {
                o.quantum_phase(&mut state, "u", 2, &pred)?;
                state.diffusion("u")?;
            }
        }
        let u = state.measure("u", rng)?;
        self.try_point(o, u)
    }

    /// Walks every `u`, collecting the marked and correct sets. Returns the
    /// first verified key alongside the statistics.
    pub fn exhaustive(
        &mut self,
        o: &mut dyn EmOracles,
        iterations: usize,
    ) -> Result<(Option<Key>, ClawAnalysis)> {
        let (mut marked, mut correct, mut key) = (0, 0, None);
        for u in 0..1u64 << self.n {
            let t = self.g(o, u)?;
            if let Some(i) = self.index_of(t) {
                marked += 1;
                if let Some(k) = self.verify(o, i, u ^ self.xs[i])? {
                    correct += 1;
                    key.get_or_insert(k);
                }
            }
        }
        let predicted = if marked == 0 {
            0.0
        } else {
            grover_success_probability(self.n, marked, iterations)? * correct as f64 / marked as f64
        };
        Ok((
            key,
            ClawAnalysis {
                marked,
                correct,
                iterations,
                predicted,
            },
        ))
    }
}

fn finish(c: &Counted<'_>, key: Option<Key>, inner: usize) -> AttackResult {
    AttackResult {
        recovered_key: key,
        success: key.is_some(),
        classical_queries_used: c.classical,
        quantum_queries_used: c.quantum,
        trials_inner: inner,
    }
}

/// The Grover claw attack on arbitrary oracles.
pub fn q1_claw_on(
    o: &mut dyn EmOracles,
    params: ClawParams,
    rng: &mut TrialRng,
) -> Result<AttackResult> {
    let mut c = Counted::new(o);
    let n = c.n();
    if n > MAX_Q1_WIDTH {
        return Err(Error::WidthOutOfRange(n));
    }
    if params.table_size == 0 {
        return Err(Error::InvalidParameter(
            "table size must be at least 1".into(),
        ));
    }
    let k = params.iterations_for(n)?;
    let mut table = ClawTable::build(&mut c, params.delta, params.table_size, rng)?;
    let mut runs = 0;
    let mut key = None;
    while runs < params.retries && key.is_none() {
        runs += 1;
        key = table.grover_run(&mut c, k, rng)?;
    }
    Ok(finish(&c, key, runs))
}

/// Standalone Grover claw attack on `E_k[P]`.
pub fn q1_claw_attack(
    p: &Permutation,
    key: Key,
    params: ClawParams,
    rng: &mut TrialRng,
) -> Result<AttackResult> {
    q1_claw_on(&mut DirectOracles::real(p, key), params, rng)
}

/// Exhaustive mode: the same table, with classical enumeration in place of
/// Grover. Also reports the exact per-run success prediction for Grover.
pub fn q1_claw_exhaustive(
    p: &Permutation,
    key: Key,
    params: ClawParams,
    rng: &mut TrialRng,
) -> Result<(AttackResult, ClawAnalysis)> {
    let mut o = DirectOracles::real(p, key);
    let mut c = Counted::new(&mut o);
    let k = params.iterations_for(c.n())?;
    let mut table = ClawTable::build(&mut c, params.delta, params.table_size, rng)?;
    let (found, analysis) = table.exhaustive(&mut c, k)?;
    Ok((finish(&c, found, 1), analysis))
}

/// Classical birthday attack on arbitrary oracles: a table of `d_size`
/// differences and `t_size` distinct random probes of `g`.
pub fn birthday_on(
    o: &mut dyn EmOracles,
    delta: u64,
    d_size: usize,
    t_size: usize,
    rng: &mut TrialRng,
) -> Result<AttackResult> {
    let mut c = Counted::new(o);
    if d_size == 0 {
        return Ok(finish(&c, None, 0));
    }
    let n = c.n();
    let mut table = ClawTable::build(&mut c, delta, d_size, rng)?;
    if t_size > 1 << n {
        return Err(Error::InvalidParameter(format!(
            "{t_size} probes exceed 2^{n}"
        )));
    }
    let mut key = None;
    for u in sample(rng, 1 << n, t_size) {
        key = table.try_point(&mut c, u as u64)?;
        if key.is_some() {
            break;
        }
    }
    Ok(finish(&c, key, 1))
}

/// Standalone birthday attack on `E_k[P]`.
pub fn classical_birthday_attack(
    p: &Permutation,
    key: Key,
    delta: u64,
    d_size: usize,
    t_size: usize,
    rng: &mut TrialRng,
) -> Result<AttackResult> {
    birthday_on(&mut DirectOracles::real(p, key), delta, d_size, t_size, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::trial_rng;
    use rand::Rng;

    #[test]
    fn full_table_exhaustive_always_succeeds() {
        for t in 0..5 {
            let mut rng = trial_rng(1, "claw", t);
            let p = Permutation::sample(6, &mut rng).unwrap();
            let key = Key::new(rng.random_range(0..64), rng.random_range(0..64));
            let (r, a) = q1_claw_exhaustive(&p, key, ClawParams::new(32), &mut rng).unwrap();
            assert!(r.success);
            assert_eq!(r.recovered_key, Some(key));
            assert!(a.correct > 0 && a.marked >= a.correct);
        }
    }

    #[test]
    fn zero_delta_is_rejected() {
        let mut rng = trial_rng(2, "claw", 0);
        let p = Permutation::sample(6, &mut rng).unwrap();
        let params = ClawParams {
            delta: 0,
            ..ClawParams::new(4)
        };
        assert!(q1_claw_attack(&p, Key::new(1, 2), params, &mut rng).is_err());
    }

    #[test]
    fn empty_birthday_table_fails_without_queries() {
        let mut rng = trial_rng(3, "claw", 0);
        let p = Permutation::sample(6, &mut rng).unwrap();
        let r = classical_birthday_attack(&p, Key::new(1, 2), 1, 0, 64, &mut rng).unwrap();
        assert!(!r.success);
        assert_eq!(r.classical_queries_used + r.quantum_queries_used, 0);
    }

    #[test]
    fn tiny_table_uses_fresh_verification_pairs() {
        let mut rng = trial_rng(4, "claw", 0);
        let p = Permutation::sample(5, &mut rng).unwrap();
        let key = Key::new(7, 20);
        let r = classical_birthday_attack(&p, key, 1, 1, 32, &mut rng).unwrap();
        assert!(r.success);
        assert_eq!(r.recovered_key, Some(key));
        assert_eq!(r.classical_queries_used, classical_cap(1));
    }

    #[test]
    fn counts_respect_caps() {
        let mut rng = trial_rng(5, "claw", 0);
        let p = Permutation::sample(10, &mut rng).unwrap();
        let key = Key::new(300, 5);
        let params = ClawParams::new(8);
        let mut o = DirectOracles::real(&p, key);
        let r = q1_claw_on(&mut o, params, &mut rng).unwrap();
        assert_eq!(r.classical_queries_used, o.classical_calls);
        assert_eq!(r.quantum_queries_used, o.quantum_calls);
        assert!(r.classical_queries_used <= classical_cap(8));
        assert!(r.quantum_queries_used <= params.quantum_cap(10).unwrap());
    }
}
