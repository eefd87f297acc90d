use num_complex::Complex64;
use proptest::prelude::*;
use qemlab::attacks::simon::simon_state;
use qemlab::attacks::DirectOracles;
use qemlab::perm::{Key, Permutation};
use qemlab::rng::trial_rng;
use qemlab::statevector::{RegisterLayout, StateVector};
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn layout(widths: &[(&str, usize)]) -> RegisterLayout {
    RegisterLayout::new(widths).unwrap()
}

fn state_from(parts: &[(f64, f64)], widths: &[(&str, usize)]) -> StateVector {
    let norm: f64 = parts.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
    let amps = parts
        .iter()
        .map(|&(a, b)| Complex64::new(a / norm, b / norm))
        .collect();
    StateVector::from_amplitudes(layout(widths), amps).unwrap()
}

fn arb_state(qubits: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << qubits).prop_filter("nonzero", |v| {
        v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3)
    })
}

fn chi_square_p(observed: &[usize], expected: &[f64]) -> f64 {
    let stat: f64 = observed
        .iter()
        .zip(expected)
        .filter(|(_, &e)| e > 0.0)
        .map(|(&o, &e)| (o as f64 - e).powi(2) / e)
        .sum();
    let dof = expected.iter().filter(|&&e| e > 0.0).count() - 1;
    1.0 - ChiSquared::new(dof as f64).unwrap().cdf(stat)
}

proptest! {
    #[test]
    fn gates_preserve_the_norm(
        parts in arb_state(5),
        table in prop::collection::vec(0u32..4, 8),
        marked in prop::collection::vec(any::<bool>(), 8),
    ) {
        let w = [("x", 3), ("y", 2)];
        let mut s = state_from(&parts, &w);
        s.hadamard("x").unwrap();
        s.xor_oracle("x", "y", &table).unwrap();
        s.phase_oracle("x", |x| marked[x as usize]).unwrap();
        s.diffusion("x").unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn oracles_are_involutions(
        parts in arb_state(6),
        table in prop::collection::vec(0u32..4, 8),
        marked in prop::collection::vec(any::<bool>(), 8),
    ) {
        let w = [("c", 1), ("x", 3), ("y", 2)];
        let original = state_from(&parts, &w);
        let mut s = original.clone();
        s.xor_oracle("x", "y", &table).unwrap();
        s.xor_oracle("x", "y", &table).unwrap();
        prop_assert!(s.max_deviation(&original) < 1e-12);
        s.controlled_xor_oracle("c", "x", "y", &table).unwrap();
        s.controlled_xor_oracle("c", "x", "y", &table).unwrap();
        prop_assert!(s.max_deviation(&original) < 1e-12);
        s.phase_oracle("x", |x| marked[x as usize]).unwrap();
        s.phase_oracle("x", |x| marked[x as usize]).unwrap();
        prop_assert!(s.max_deviation(&original) < 1e-12);
        s.hadamard("x").unwrap();
        s.hadamard("x").unwrap();
        prop_assert!(s.max_deviation(&original) < 1e-10);
    }

    #[test]
    fn controlled_oracle_acts_only_on_the_one_branch(
        parts in arb_state(5),
        table in prop::collection::vec(0u32..4, 4),
    ) {
        let w = [("c", 1), ("x", 2), ("y", 2)];
        let mut s = state_from(&parts, &w);
        let before = s.clone();
        s.controlled_xor_oracle("c", "x", "y", &table).unwrap();
        for c in 0..2u64 {
            for x in 0..4u64 {
                for y in 0..4u64 {
                    let moved = if c == 1 { y ^ table[x as usize] as u64 } else { y };
                    let a = s.amplitude(&[c, x, moved]).unwrap();
                    let b = before.amplitude(&[c, x, y]).unwrap();
                    prop_assert!((a - b).norm() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn simon_outcomes_are_orthogonal_to_the_shift() {
    // n = 2, k1 = 11: only u ∈ {00, 11} satisfy u · k1 = 0
    for t in 0..20 {
        let mut rng = trial_rng(3, "simon-n2", t);
        let p = Permutation::sample(2, &mut rng).unwrap();
        let mut o = DirectOracles::real(&p, Key::new(0b11, t % 4));
        let state = simon_state(&mut o).unwrap();
        for u in [0b01, 0b10] {
            assert!(state.probability_of("x", u).unwrap() < 1e-12);
        }
        let total =
            state.probability_of("x", 0b00).unwrap() + state.probability_of("x", 0b11).unwrap();
        assert!((total - 1.0).abs() < 1e-12);
    }
}

#[test]
fn measurement_follows_the_born_rule() {
    let weights = [0.1, 0.2, 0.3, 0.4];
    let amps = weights
        .iter()
        .map(|w: &f64| Complex64::new(w.sqrt(), 0.0))
        .collect();
    let s = StateVector::from_amplitudes(layout(&[("x", 2)]), amps).unwrap();
    let samples = 100_000;
    let mut counts = [0usize; 4];
    for t in 0..samples {
        let mut copy = s.clone();
        counts[copy.measure("x", &mut trial_rng(9, "born", t)).unwrap() as usize] += 1;
    }
    let expected: Vec<f64> = weights.iter().map(|w| w * samples as f64).collect();
    assert!(chi_square_p(&counts, &expected) > 0.001, "{counts:?}");
}

#[test]
fn measurement_collapses_the_state() {
    let mut s = StateVector::uniform(layout(&[("x", 3), ("y", 2)]), "x").unwrap();
    let v = s.measure("x", &mut trial_rng(1, "collapse", 0)).unwrap();
    assert!((s.probability_of("x", v).unwrap() - 1.0).abs() < 1e-12);
    assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
}

#[test]
fn uniform_register_probabilities() {
    let s = StateVector::uniform(layout(&[("x", 3)]), "x").unwrap();
    for v in 0..8 {
        assert!((s.probability_of("x", v).unwrap() - 0.125).abs() < 1e-12);
    }
}

#[test]
fn register_layout_is_validated() {
    assert!(RegisterLayout::new(&[("x", 2), ("x", 2)]).is_err());
    assert!(RegisterLayout::new(&[("x", 0)]).is_err());
    assert!(RegisterLayout::with_cap(&[("x", 6), ("y", 6)], 10).is_err());
    let s = StateVector::zero(layout(&[("x", 2)]));
    assert!(s.probability_of("y", 0).is_err());
    assert!(s.probability_of("x", 4).is_err());
}
