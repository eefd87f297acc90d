//! Multi-target amplitude amplification with a plain predicate.

use std::f64::consts::FRAC_PI_4;

use rand::Rng;

use crate::error::{Error, Result};
use crate::statevector::{RegisterLayout, StateVector};

/// Largest search width.
pub const MAX_GROVER_WIDTH: usize = 20;

fn angle(n: usize, targets: usize) -> Result<f64> {
    if targets == 0 {
        return Err(Error::NoTargets);
    }
    let size = (1u64 << n) as f64;
    Ok((targets as f64 / size).min(1.0).sqrt().asin())
}

/// `⌊π / (4θ)⌋` iterations for `t` marked values out of `2^n`, where
/// `sin θ = √(t/2^n)`.
pub fn grover_iterations(n: usize, targets: usize) -> Result<usize> {
    let theta = angle(n, targets)?;
    Ok((FRAC_PI_4 / theta).floor() as usize)
}

/// `sin²((2k + 1)θ)`: probability that `k` iterations end on a marked value.
pub fn grover_success_probability(n: usize, targets: usize, iterations: usize) -> Result<f64> {
    let theta = angle(n, targets)?;
    Ok(((2 * iterations + 1) as f64 * theta).sin().powi(2))
}

/// Runs exactly `iterations` rounds of phase oracle plus diffusion on a
/// uniform `n`-qubit register and measures it.
pub fn grover_fixed<R: Rng + ?Sized>(
    n: usize,
    predicate: impl Fn(u64) -> bool,
    iterations: usize,
    rng: &mut R,
) -> Result<u64> {
    if n == 0 || n > MAX_GROVER_WIDTH {
        return Err(Error::WidthOutOfRange(n));
    }
    let mut state = StateVector::uniform(RegisterLayout::new(&[("x", n)])?, "x")?;
    let marks: Vec<bool> = (0..1u64 << n).map(&predicate).collect();
    for _ in 0..iterations {
        state.phase_oracle("x", |x| marks[x as usize])?;
        state.diffusion("x")?;
    }
    state.measure("x", rng)
}

/// Grover search for one of `num_targets_hint` marked values with the
/// closed-form iteration count.
///
/// ```
/// use qemlab::attacks::grover::grover_multi_target;
/// use qemlab::rng::trial_rng;
///
/// let mut rng = trial_rng(1, "doc", 0);
/// let x = grover_multi_target(8, |x| x == 77, 1, &mut rng).unwrap();
/// assert_eq!(x, 77); // fails with probability below 0.01
/// ```
pub fn grover_multi_target<R: Rng + ?Sized>(
    n: usize,
    predicate: impl Fn(u64) -> bool,
    num_targets_hint: usize,
    rng: &mut R,
) -> Result<u64> {
    let k = grover_iterations(n, num_targets_hint)?;
    grover_fixed(n, predicate, k, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::trial_rng;

    #[test]
    fn iteration_counts() {
        assert_eq!(grover_iterations(3, 8).unwrap(), 0);
        assert_eq!(grover_iterations(3, 1).unwrap(), 2);
        assert_eq!(grover_iterations(10, 8).unwrap(), 8);
        assert!(matches!(grover_iterations(4, 0), Err(Error::NoTargets)));
    }

    #[test]
    fn closed_form_matches_statevector() {
        let n = 5;
        let marked = [3u64, 9, 30];
        for k in 0..6 {
            let mut state = StateVector::zero(RegisterLayout::new(&[("x", n)]).unwrap());
            state.hadamard("x").unwrap();
            for _ in 0..k {
                state.phase_oracle("x", |x| marked.contains(&x)).unwrap();
                state.diffusion("x").unwrap();
            }
            let dist = state.register_distribution("x").unwrap();
            let p: f64 = marked.iter().map(|&m| dist[m as usize]).sum();
            let want = grover_success_probability(n, 3, k).unwrap();
            assert!((p - want).abs() < 1e-12, "k={k}: {p} vs {want}");
        }
    }

    #[test]
    fn all_marked_needs_no_iterations() {
        let mut rng = trial_rng(0, "g", 0);
        for _ in 0..20 {
            let x = grover_multi_target(4, |_| true, 16, &mut rng).unwrap();
            assert!(x < 16);
        }
    }
}
