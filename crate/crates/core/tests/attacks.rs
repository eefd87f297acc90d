use std::collections::BTreeSet;

use proptest::prelude::*;
use qemlab::attacks::claw::q1_claw_on;
use qemlab::attacks::claw::{birthday_quantum_cap, classical_cap};
use qemlab::attacks::simon::public_query_cap;
use qemlab::attacks::{
    attack_as_distinguisher, classical_birthday_attack, grover_fixed, grover_multi_target,
    grover_success_probability, q1_claw_attack, simon_q2_attack, AttackSpec, ClawParams,
    DirectOracles,
};
use qemlab::games::estimate::{count_accepts, frequency_halfwidth, GameSpec};
use qemlab::games::estimate_advantage;
use qemlab::gf2::{span, GF2Matrix};
use qemlab::perm::{Key, KeyDistribution, Permutation};
use qemlab::rng::{trial_rng, TrialRng};
use rand::Rng;

fn instance(n: usize, domain: &str, t: u64) -> (Permutation, Key, TrialRng) {
    let mut rng = trial_rng(17, domain, t);
    let p = Permutation::sample(n, &mut rng).unwrap();
    let key = KeyDistribution::TwoKeyUniform.sample(n, &mut rng);
    (p, key, rng)
}

#[test]
fn nullspace_of_a_small_system() {
    let m = GF2Matrix::from_rows(4, &[0b1100, 0b0110, 0b0011]).unwrap();
    assert_eq!(m.rank(), 3);
    assert_eq!(m.nullspace(), [0b1111]);
    assert_eq!(m.mul_vec(0b1111), [false, false, false]);
}

proptest! {
    #[test]
    fn nullspace_matches_brute_force(n in 1usize..=8, rows in prop::collection::vec(any::<u64>(), 0..10)) {
        let rows: Vec<u64> = rows.iter().map(|r| r & ((1 << n) - 1)).collect();
        let m = GF2Matrix::from_rows(n, &rows).unwrap();
        let kernel: BTreeSet<u64> = (0..1u64 << n)
            .filter(|&v| rows.iter().all(|r| (r & v).count_ones() % 2 == 0))
            .collect();
        let basis = m.nullspace();
        prop_assert_eq!(basis.len(), n - m.rank());
        let spanned: BTreeSet<u64> = span(&basis).into_iter().collect();
        prop_assert_eq!(spanned, kernel);
    }
}

#[test]
fn grover_on_three_qubits() {
    let runs = 10_000;
    let hits = (0..runs)
        .filter(|&t| {
            grover_multi_target(3, |x| x == 5, 1, &mut trial_rng(1, "g3", t)).unwrap() == 5
        })
        .count();
    let rate = hits as f64 / runs as f64;
    assert!((rate - 0.945).abs() < 0.02, "{rate}");
}

#[test]
fn grover_with_eight_targets_out_of_1024() {
    let marked = |x: u64| x % 128 == 3;
    let runs = 1000;
    let hits = (0..runs)
        .filter(|&t| {
            marked(grover_multi_target(10, marked, 8, &mut trial_rng(1, "g10", t)).unwrap())
        })
        .count();
    assert!(hits as f64 / runs as f64 >= 0.8, "{hits}");
}

#[test]
fn grover_success_follows_the_closed_form() {
    let runs = 4000;
    for (n, targets, k) in [(4, 1, 1), (4, 1, 3), (5, 3, 2), (6, 2, 4), (6, 5, 1)] {
        let want = grover_success_probability(n, targets, k).unwrap();
        let hits = (0..runs)
            .filter(|&t| {
                let x =
                    grover_fixed(n, |x| x < targets as u64, k, &mut trial_rng(2, "g", t)).unwrap();
                x < targets as u64
            })
            .count();
        let rate = hits as f64 / runs as f64;
        let sigma = (want * (1.0 - want) / runs as f64)
            .sqrt()
            .max(1.0 / runs as f64);
        assert!(
            (rate - want).abs() <= 3.0 * sigma,
            "n={n} t={targets} k={k}: {rate} vs {want}"
        );
    }
}

#[test]
fn simon_recovers_the_key_within_budget() {
    for t in 0..20 {
        let (p, key, mut rng) = instance(8, "simon", t);
        let r = simon_q2_attack(&p, key, &mut rng, 24).unwrap();
        assert!(r.success);
        assert_eq!(r.recovered_key, Some(key));
        assert!(r.quantum_queries_used <= 48);
        assert!(r.quantum_queries_used <= public_query_cap(24) + 24);
    }
}

#[test]
fn claw_attack_with_full_resources_distinguishes() {
    let n = 12;
    let adv = attack_as_distinguisher(n, AttackSpec::Q1Claw(ClawParams::new(16)));
    let game = GameSpec::EvenMansour {
        n,
        dist: KeyDistribution::TwoKeyUniform,
        q2: false,
    };
    let e = estimate_advantage(&adv, game, 200, 4).unwrap();
    assert!(e.advantage >= 0.4, "{e:?}");
    // 32 marked points out of 4096
    let k = (std::f64::consts::FRAC_PI_4 / (32.0f64 / 4096.0).sqrt().asin()).floor() as usize;
    assert_eq!(k, 8);
    assert_eq!(adv.resources(), (32, 4 * (4 * k + 5)));
}

#[test]
fn null_attack_has_no_advantage() {
    let adv = attack_as_distinguisher(8, AttackSpec::Null);
    let game = GameSpec::EvenMansour {
        n: 8,
        dist: KeyDistribution::TwoKeyUniform,
        q2: false,
    };
    let e = estimate_advantage(&adv, game, 1000, 5).unwrap();
    assert!(e.advantage <= e.ci_halfwidth);
    assert_eq!(adv.resources(), (0, 0));
}

#[test]
fn claw_attack_rarely_accepts_a_random_permutation() {
    let n = 8;
    let trials = 4000;
    let accepts = count_accepts(trials, 6, "claw-ideal", |rng| {
        let p = Permutation::sample(n, rng)?;
        let r = Permutation::sample(n, rng)?;
        Ok(q1_claw_on(&mut DirectOracles::ideal(&p, &r), ClawParams::new(6), rng)?.success)
    })
    .unwrap();
    let rate = accepts as f64 / trials as f64;
    let cap = 2f64.powi(1 - n as i32);
    assert!(
        rate <= cap + frequency_halfwidth(accepts, trials),
        "{accepts}/{trials}"
    );
}

#[test]
fn birthday_attack_at_the_birthday_bound() {
    let n = 12;
    let runs = 500;
    let hits = (0..runs)
        .filter(|&t| {
            let (p, key, mut rng) = instance(n, "birthday", t);
            let r = classical_birthday_attack(&p, key, 1, 64, 64, &mut rng).unwrap();
            assert!(!r.success || r.recovered_key == Some(key));
            assert!(r.classical_queries_used <= classical_cap(64));
            assert!(r.quantum_queries_used <= birthday_quantum_cap(64));
            r.success
        })
        .count();
    let rate = hits as f64 / runs as f64;
    assert!((rate - 0.63).abs() <= 0.1, "{rate}");
}

#[test]
fn birthday_attack_without_a_table_fails() {
    let (p, key, mut rng) = instance(8, "birthday0", 0);
    let r = classical_birthday_attack(&p, key, 1, 0, 16, &mut rng).unwrap();
    assert!(!r.success);
    assert_eq!(r.classical_queries_used + r.quantum_queries_used, 0);
}

#[test]
fn claw_attack_stays_within_its_declared_caps() {
    let n = 10;
    let params = ClawParams::new(10);
    for t in 0..30 {
        let (p, key, mut rng) = instance(n, "claw-caps", t);
        let r = q1_claw_attack(&p, key, params, &mut rng).unwrap();
        assert!(r.classical_queries_used <= classical_cap(10));
        assert!(r.quantum_queries_used <= params.quantum_cap(n).unwrap());
        assert!(r.trials_inner <= params.retries);
        if r.success {
            assert_eq!(r.recovered_key, Some(key));
        }
    }
}

#[test]
fn claw_attack_width_is_checked() {
    let mut rng = trial_rng(0, "wide", 0);
    let p = Permutation::sample(20, &mut rng).unwrap();
    let key = Key::new(rng.random_range(0..1 << 20), 0);
    assert!(q1_claw_attack(&p, key, ClawParams::new(4), &mut rng).is_err());
}
