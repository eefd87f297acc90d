//! Simon's algorithm on `f(x) = E(x) ⊕ P(x)`, which has period `k1`.

use std::collections::HashMap;

use super::{AttackResult, Counted, DirectOracles};
use crate::error::{Error, Result};
use crate::games::{Direction, EmOracles};
use crate::gf2::{span, GF2Matrix};
use crate::perm::{Key, Permutation};
use crate::rng::TrialRng;
use crate::statevector::{RegisterLayout, StateVector};

/// Classical keyed queries used for key derivation and verification, at
/// the points 0, 1 and 2.
pub const CLASSICAL_QUERIES: usize = 3;

/// Public-oracle queries an attack with `max_iterations` can make. The
/// total over both oracles never exceeds `2 · max_iterations`.
pub fn public_query_cap(max_iterations: usize) -> usize {
    2 * max_iterations
}

/// Public queries spent checking one candidate shift.
const VERIFY_COST: usize = 3;

/// The state `Σ_x |x⟩|f(x)⟩` after the final Hadamard, before measurement.
/// Costs one keyed and one public quantum query.
pub fn simon_state(o: &mut dyn EmOracles) -> Result<StateVector> {
    let n = o.n();
    let mut state = StateVector::uniform(RegisterLayout::new(&[("x", n), ("y", n)])?, "x")?;
    o.keyed_quantum(&mut state, Direction::Forward, "x", "y")?;
    o.quantum(&mut state, Direction::Forward, "x", "y")?;
    state.hadamard("x")?;
    Ok(state)
}

/// One Simon iteration: returns `u` with `u · k1 = 0`.
pub fn simon_sample(o: &mut dyn EmOracles, rng: &mut TrialRng) -> Result<u64> {
    simon_state(o)?.measure("x", rng)
}

struct Verifier {
    known: HashMap<u64, u64>,
}

impl Verifier {
    fn e(&mut self, o: &mut dyn EmOracles, x: u64) -> Result<u64> {
        if let Some(&y) = self.known.get(&x) {
            return Ok(y);
        }
        let y = o.classical(Direction::Forward, x)?;
        self.known.insert(x, y);
        Ok(y)
    }

    /// Derives `k2 = E(0) ⊕ P(s)` and checks it on the points 1 and 2.
    fn try_shift(&mut self, o: &mut dyn EmOracles, s: u64) -> Result<Option<Key>> {
        let k2 = self.e(o, 0)? ^ o.quantum_basis(Direction::Forward, s)?;
        for x in [1u64, 2] {
            if self.e(o, x)? != o.quantum_basis(Direction::Forward, x ^ s)? ^ k2 {
                return Ok(None);
            }
        }
        Ok(Some(Key::new(s, k2)))
    }
}

/// Runs the attack on arbitrary oracles with a total quantum budget of
/// `2 · max_iterations` queries, verification included. Samples are
/// collected until the rank reaches `n − 1`; every shift in the resulting
/// nullspace is tried (nonzero first). If all fail, collection restarts from
/// scratch while budget remains. Below rank `n − 1` only the zero shift is
/// tried.
pub fn simon_q2_on(
    o: &mut dyn EmOracles,
    max_iterations: usize,
    rng: &mut TrialRng,
) -> Result<AttackResult> {
    let mut c = Counted::new(o);
    let n = c.n();
    if n < 2 {
        return Err(Error::WidthOutOfRange(n));
    }
    let mut verifier = Verifier {
        known: HashMap::new(),
    };
    let cap = 2 * max_iterations;
    let mut rounds = 0;
    let found = loop {
        rounds += 1;
        let mut m = GF2Matrix::new(n)?;
        while m.rank() < n - 1 && c.quantum + 2 + VERIFY_COST <= cap {
            m.push(simon_sample(&mut c, rng)?)?;
        }
        let mut candidates = if m.rank() >= n - 1 {
            span(&m.nullspace())
        } else {
            vec![0]
        };
        candidates.sort_by_key(|&s| (s == 0, s));
        let mut hit = None;
        for s in candidates {
            if c.quantum + VERIFY_COST > cap {
                break;
            }
            if let Some(k) = verifier.try_shift(&mut c, s)? {
                hit = Some(k);
                break;
            }
        }
        if hit.is_some() || c.quantum + 2 + VERIFY_COST > cap {
            break hit;
        }
    };
    Ok(AttackResult {
        recovered_key: found,
        success: found.is_some(),
        classical_queries_used: c.classical,
        quantum_queries_used: c.quantum,
        trials_inner: rounds,
    })
}

/// Standalone attack on `E_k[P]` with quantum access to both oracles.
pub fn simon_q2_attack(
    p: &Permutation,
    key: Key,
    rng: &mut TrialRng,
    max_iterations: usize,
) -> Result<AttackResult> {
    if p.n() > 12 {
        return Err(Error::WidthOutOfRange(p.n()));
    }
    let mut o = DirectOracles::real(p, key);
    simon_q2_on(&mut o, max_iterations, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::trial_rng;

    #[test]
    fn samples_are_orthogonal_to_k1() {
        let mut rng = trial_rng(3, "simon", 0);
        for _ in 0..10 {
            let p = Permutation::sample(6, &mut rng).unwrap();
            let key = Key::new(rand::Rng::random_range(&mut rng, 0..64), 17);
            let mut o = DirectOracles::real(&p, key);
            for _ in 0..12 {
                let u = simon_sample(&mut o, &mut rng).unwrap();
                assert_eq!((u & key.k1).count_ones() % 2, 0);
            }
        }
    }

    #[test]
    fn zero_shift_key_is_recovered() {
        let mut rng = trial_rng(4, "simon", 0);
        let p = Permutation::sample(5, &mut rng).unwrap();
        let key = Key::new(0, 9);
        let r = simon_q2_attack(&p, key, &mut rng, 15).unwrap();
        assert!(r.quantum_queries_used <= 30);
        assert!(r.success);
        assert_eq!(r.recovered_key, Some(key));
    }

    #[test]
    fn counts_match_the_oracles() {
        let mut rng = trial_rng(5, "simon", 0);
        let p = Permutation::sample(8, &mut rng).unwrap();
        let key = Key::new(0x5a, 0xc3);
        let mut o = DirectOracles::real(&p, key);
        let r = simon_q2_on(&mut o, 24, &mut rng).unwrap();
        assert_eq!(r.classical_queries_used, o.classical_calls);
        assert_eq!(r.quantum_queries_used, o.quantum_calls + o.keyed_calls);
        assert!(r.success);
    }
}
