use std::collections::HashMap;

use proptest::prelude::*;
use qemlab::perm::{
    em_forward, em_forward_fn, em_inverse, fn_reprogram_set, fwd_only_reprogram, perm_reprogram,
    FunctionTable, Key, KeyDistribution, Permutation, ReprogramSet, Transcript,
};
use qemlab::rng::trial_rng;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn uniform_chi_square_p(counts: &[usize]) -> f64 {
    let total: usize = counts.iter().sum();
    let e = total as f64 / counts.len() as f64;
    let stat: f64 = counts.iter().map(|&o| (o as f64 - e).powi(2) / e).sum();
    1.0 - ChiSquared::new((counts.len() - 1) as f64)
        .unwrap()
        .cdf(stat)
}

fn perm(n: usize, seed: u64) -> Permutation {
    Permutation::sample(n, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}

fn func(m: usize, n: usize, seed: u64) -> FunctionTable {
    FunctionTable::sample(m, n, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}

/// Up to `len` pairs with distinct inputs and distinct outputs.
fn transcript(n: usize, seed: u64, len: usize) -> Transcript {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs = rand::seq::index::sample(&mut rng, 1 << n, len.min(1 << n));
    let ys = rand::seq::index::sample(&mut rng, 1 << n, len.min(1 << n));
    let pairs: Vec<_> = xs
        .iter()
        .zip(ys.iter())
        .map(|(x, y)| (x as u64, y as u64))
        .collect();
    Transcript::from_entries(&pairs).unwrap()
}

#[test]
fn all_24_permutations_are_equally_likely() {
    let draws = 100_000;
    let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut counts = vec![0usize; 24];
    for t in 0..draws {
        let p = Permutation::sample(2, &mut trial_rng(5, "perm24", t)).unwrap();
        let next = index.len();
        let i = *index.entry(p.table().to_vec()).or_insert(next);
        counts[i] += 1;
    }
    assert_eq!(index.len(), 24);
    assert!(uniform_chi_square_p(&counts) > 0.001, "{counts:?}");
}

#[test]
fn key_distributions() {
    let draws = 64_000;
    let mut one = vec![0usize; 8];
    let mut two = vec![0usize; 64];
    for t in 0..draws {
        let k = KeyDistribution::OneKey.sample(3, &mut trial_rng(5, "one-key", t));
        assert_eq!(k.k1, k.k2);
        one[k.k1 as usize] += 1;
        let k = KeyDistribution::TwoKeyUniform.sample(3, &mut trial_rng(5, "two-key", t));
        two[(k.k1 * 8 + k.k2) as usize] += 1;
    }
    assert!(uniform_chi_square_p(&one) > 0.001, "{one:?}");
    assert!(uniform_chi_square_p(&two) > 0.001, "{two:?}");
}

proptest! {
    #[test]
    fn sampled_permutations_are_bijections(n in 1usize..=10, seed in any::<u64>()) {
        let p = perm(n, seed);
        let mut seen = vec![false; 1 << n];
        for x in 0..1u64 << n {
            let y = p.apply(x);
            prop_assert!(!seen[y as usize]);
            seen[y as usize] = true;
            prop_assert_eq!(p.apply_inverse(y), x);
        }
    }

    #[test]
    fn em_inverse_undoes_forward(n in 1usize..=10, seed in any::<u64>(), k1 in any::<u64>(), k2 in any::<u64>()) {
        let p = perm(n, seed);
        let mask = (1u64 << n) - 1;
        let k = Key::new(k1 & mask, k2 & mask);
        for x in 0..1u64 << n {
            let y = em_forward(&p, k, x);
            prop_assert_eq!(y, p.apply(x ^ k.k1) ^ k.k2);
            prop_assert_eq!(em_inverse(&p, k, y), x);
        }
    }

    #[test]
    fn swaps_conjugate(n in 1usize..=8, seed in any::<u64>(), a in any::<u64>(), b in any::<u64>()) {
        let mask = (1u64 << n) - 1;
        let (a, b) = (a & mask, b & mask);
        let p = perm(n, seed);
        // swapping inputs a, b equals swapping outputs P(a), P(b)
        let mut by_input = p.clone();
        by_input.swap_inputs(a, b);
        let mut by_output = p.clone();
        by_output.swap_outputs(p.apply(a), p.apply(b));
        prop_assert_eq!(by_input.table(), by_output.table());
        let s = Permutation::swap(n, a, b).unwrap();
        let composed = Permutation::compose(&p, &s).unwrap();
        prop_assert_eq!(composed.table(), by_input.table());
    }

    #[test]
    fn perm_reprogram_matches_the_swap_chain(
        n in 1usize..=8, seed in any::<u64>(), len in 0usize..6, k1 in any::<u64>(), k2 in any::<u64>(),
    ) {
        let mask = (1u64 << n) - 1;
        let k = Key::new(k1 & mask, k2 & mask);
        let p = perm(n, seed);
        let t = transcript(n, seed ^ 1, len);
        let q = perm_reprogram(&p, &t, k).unwrap();
        for x in 0..1u64 << n {
            let mut v = p.apply(x);
            for &(tx, ty) in t.entries().iter().rev() {
                let (a, b) = (p.apply(tx ^ k.k1), ty ^ k.k2);
                v = if v == a { b } else if v == b { a } else { v };
            }
            prop_assert_eq!(q.apply(x), v);
        }
    }

    #[test]
    fn function_reprogramming_is_pointwise(
        m in 1usize..=10, n in 1usize..=8, seed in any::<u64>(), len in 0usize..6, k in any::<u64>(),
    ) {
        let f = func(m, n, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 2);
        let width = m.min(n);
        let xs = rand::seq::index::sample(&mut rng, 1 << width, len.min(1 << width));
        let pairs: Vec<(u64, u64)> = xs.iter().map(|x| (x as u64, rng.random_range(0..1u64 << n))).collect();

        let set = ReprogramSet::new(pairs.clone()).unwrap();
        let g = fn_reprogram_set(&f, &set).unwrap();
        for x in 0..1u64 << m {
            let want = pairs.iter().find(|p| p.0 == x).map_or(f.apply(x), |p| p.1);
            prop_assert_eq!(g.apply(x), want);
        }

        if m == n {
            let k = k & ((1u64 << n) - 1);
            let distinct: Vec<_> = pairs.iter().enumerate()
                .filter(|(i, p)| pairs[..*i].iter().all(|q| q.1 != p.1))
                .map(|(_, p)| *p)
                .collect();
            let t = Transcript::from_entries(&distinct).unwrap();
            let h = fwd_only_reprogram(&f, &t, k).unwrap();
            for x in 0..1u64 << n {
                let want = distinct.iter().find(|p| p.0 ^ k == x).map_or(f.apply(x), |p| p.1);
                prop_assert_eq!(h.apply(x), want);
            }
            for &(x, y) in &distinct {
                prop_assert_eq!(em_forward_fn(&h, k, x), y);
            }
        }
    }

    #[test]
    fn hex_dumps_roundtrip(n in 1usize..=8, seed in any::<u64>()) {
        let p = perm(n, seed);
        prop_assert_eq!(Permutation::from_hex(n, &p.to_hex()).unwrap(), p);
    }
}
