use qemlab::attacks::{attack_as_distinguisher, AttackSpec};
use qemlab::bounds::Bound;
use qemlab::games::adversaries::{
    ClassicalLowBit, EmptyReprogrammer, FixedPointReprogrammer, KeyGuessProbe, TvProbe, ZeroQuery,
};
use qemlab::games::estimate::{estimate_advantage_with_bound, GameSpec};
use qemlab::games::lemmas::{
    estimate_perm_resampling, estimate_reprogramming, PermResamplingGame, ReprogrammingGame,
};
use qemlab::games::{
    estimate_advantage, run_expt, Budget, Direction, EmAdversary, EmGame, EmMode, EmOracles,
    ForwardGame, ForwardMode,
};
use qemlab::perm::KeyDistribution;
use qemlab::rng::{trial_rng, TrialRng};
use qemlab::Error;
use statrs::distribution::{ChiSquared, ContinuousCDF};

const TWO_KEY: KeyDistribution = KeyDistribution::TwoKeyUniform;

/// Fixed query script with a declared budget.
struct Scripted {
    budget: Budget,
    script: fn(&mut dyn EmOracles) -> qemlab::Result<bool>,
}

impl EmAdversary for Scripted {
    fn budget(&self) -> Budget {
        self.budget
    }

    fn run(&self, o: &mut dyn EmOracles, _: &mut TrialRng) -> qemlab::Result<bool> {
        (self.script)(o)
    }
}

fn em(n: usize) -> GameSpec {
    GameSpec::EvenMansour {
        n,
        dist: TWO_KEY,
        q2: false,
    }
}

#[test]
fn zero_query_adversary_has_exactly_no_advantage() {
    for guess in [false, true] {
        let e = estimate_advantage(&ZeroQuery { guess }, em(6), 1000, 1).unwrap();
        assert_eq!(e.advantage, 0.0);
        assert_eq!(e.p_world1, if guess { 1.0 } else { 0.0 });
    }
}

#[test]
fn low_bit_of_one_answer_is_unbiased() {
    let e = estimate_advantage(&ClassicalLowBit, em(4), 100_000, 2).unwrap();
    assert!(e.advantage <= e.ci_halfwidth, "{e:?}");
    assert!((e.p_world1 - 0.5).abs() < 0.01);
}

#[test]
fn simon_distinguishes_with_keyed_quantum_access() {
    let adv = attack_as_distinguisher(6, AttackSpec::SimonQ2 { max_iterations: 18 });
    let game = GameSpec::EvenMansour {
        n: 6,
        dist: TWO_KEY,
        q2: true,
    };
    let e = estimate_advantage(&adv, game, 500, 3).unwrap();
    assert!(e.advantage >= 0.8, "{e:?}");
    assert_eq!(game.default_bound(&adv), Bound::NotApplicable);
}

#[test]
fn keyed_quantum_access_is_refused_without_q2() {
    let adv = attack_as_distinguisher(6, AttackSpec::SimonQ2 { max_iterations: 18 });
    let r = EmGame::new(6, TWO_KEY, EmMode::Real).run(&adv, &mut trial_rng(0, "q1", 0));
    assert!(matches!(r, Err(Error::KeyedQuantumDenied)));
}

#[test]
fn estimates_are_deterministic_in_the_seed() {
    let adv = TvProbe::new(3);
    let a = estimate_advantage(&adv, em(5), 2000, 11).unwrap();
    let b = estimate_advantage(&adv, em(5), 2000, 11).unwrap();
    assert_eq!(a, b);
    let r1 = EmGame::new(5, TWO_KEY, EmMode::Ideal)
        .run(&adv, &mut trial_rng(4, "d", 7))
        .unwrap();
    let r2 = EmGame::new(5, TWO_KEY, EmMode::Ideal)
        .run(&adv, &mut trial_rng(4, "d", 7))
        .unwrap();
    assert_eq!(r1, r2);
}

#[test]
fn quantum_queries_are_accounted_per_stage() {
    let adv = TvProbe::new(3);
    for mode in [
        EmMode::Real,
        EmMode::Ideal,
        EmMode::Hybrid {
            j: 1,
            primed: false,
        },
    ] {
        let t = EmGame::new(5, TWO_KEY, mode)
            .run(&adv, &mut trial_rng(0, "stage", 0))
            .unwrap();
        assert_eq!(t.classical.len(), 3);
        assert_eq!(t.stage_quantum.len(), 4);
        assert_eq!(t.stage_quantum.iter().sum::<usize>(), t.total_quantum);
        assert_eq!(t.stage_quantum, [1, 1, 1, 1]);
    }
}

#[test]
fn resampled_answer_is_uniform_outside_the_prior_outputs() {
    // Expt'_1 at n = 3: the second answer must avoid y_1 and be uniform on
    // the remaining seven outputs
    let adv = TvProbe::new(2);
    let trials = 70_000;
    let mut counts = [0usize; 7];
    for t in 0..trials {
        let r = run_expt(&adv, 3, TWO_KEY, 1, true, &mut trial_rng(6, "cond", t)).unwrap();
        let (y1, y2) = (r.classical[0].y, r.classical[1].y);
        assert_ne!(y1, y2);
        let rank = (0..y2).filter(|&v| v != y1).count();
        counts[rank] += 1;
    }
    let e = trials as f64 / 7.0;
    let stat: f64 = counts.iter().map(|&o| (o as f64 - e).powi(2) / e).sum();
    let p = 1.0 - ChiSquared::new(6.0).unwrap().cdf(stat);
    assert!(p > 0.001, "{counts:?}");
}

#[test]
fn forward_only_game_refuses_inverse_queries() {
    let classical = Scripted {
        budget: Budget::new(1, 0),
        script: |o| Ok(o.classical(Direction::Inverse, 0)? == 0),
    };
    let quantum = Scripted {
        budget: Budget::new(0, 1),
        script: |o| Ok(o.quantum_basis(Direction::Inverse, 0)? == 0),
    };
    for adv in [classical, quantum] {
        for mode in [ForwardMode::Real, ForwardMode::Ideal] {
            let r = ForwardGame::new(4, mode).run(&adv, &mut trial_rng(0, "fwd", 0));
            assert!(matches!(r, Err(Error::InverseUnavailable)), "{r:?}");
        }
    }
}

#[test]
fn redundant_and_over_budget_queries_fail() {
    let repeat = Scripted {
        budget: Budget::new(2, 0),
        script: |o| {
            o.classical(Direction::Forward, 3)?;
            o.classical(Direction::Forward, 3)?;
            Ok(true)
        },
    };
    let r = EmGame::new(4, TWO_KEY, EmMode::Real).run(&repeat, &mut trial_rng(0, "r", 0));
    assert!(matches!(r, Err(Error::RedundantQuery(3))));

    // the inverse of an answer already seen is redundant too
    let back = Scripted {
        budget: Budget::new(2, 0),
        script: |o| {
            let y = o.classical(Direction::Forward, 3)?;
            o.classical(Direction::Inverse, y)?;
            Ok(true)
        },
    };
    let r = EmGame::new(4, TWO_KEY, EmMode::Ideal).run(&back, &mut trial_rng(0, "r", 1));
    assert!(matches!(r, Err(Error::RedundantQuery(_))));

    let greedy = Scripted {
        budget: Budget::new(1, 1),
        script: |o| {
            o.quantum_basis(Direction::Forward, 0)?;
            o.quantum_basis(Direction::Forward, 1)?;
            Ok(true)
        },
    };
    let r = EmGame::new(4, TWO_KEY, EmMode::Real).run(&greedy, &mut trial_rng(0, "r", 2));
    assert!(matches!(
        r,
        Err(Error::BudgetExceeded {
            kind: "quantum",
            ..
        })
    ));
}

#[test]
fn zero_query_resampling_has_no_advantage() {
    let e = estimate_perm_resampling(&ZeroQuery::default(), PermResamplingGame::new(6), 2000, 5)
        .unwrap();
    assert!(e.advantage <= e.ci_halfwidth);
    assert_eq!(e.bound, 0.0);
}

#[test]
fn fixed_point_reprogrammer_hits_the_exact_rate() {
    // wins iff the sampled point is x* and its new value differs
    let (m, n) = (4, 4);
    let want = (1.0 / 16.0) * (1.0 - 1.0 / 16.0);
    let r = estimate_reprogramming(
        &FixedPointReprogrammer::new(m, n),
        ReprogrammingGame::default(),
        100_000,
        8,
    )
    .unwrap();
    let e = r.estimate;
    assert_eq!(e.p_world0, 0.0);
    assert!(
        (e.advantage - want).abs() <= e.ci_halfwidth,
        "{e:?} vs {want}"
    );
    assert_eq!(r.epsilon, 1.0 / 16.0);
    assert_eq!(r.expected_queries, 1.0);
}

#[test]
fn empty_sampler_cannot_be_detected() {
    let adv = EmptyReprogrammer {
        m: 4,
        n: 4,
        probes: 3,
    };
    let r = estimate_reprogramming(&adv, ReprogrammingGame::default(), 2000, 9).unwrap();
    assert_eq!(r.epsilon, 0.0);
    assert_eq!(r.estimate.advantage, 0.0);
    assert_eq!(r.estimate.bound, 0.0);
}

#[test]
fn one_key_adjacent_hybrids_stay_within_the_bound() {
    let n = 6;
    let adv = KeyGuessProbe { q_p: 16 };
    let game = GameSpec::EmModes {
        n,
        dist: KeyDistribution::OneKey,
        world1: EmMode::Hybrid {
            j: 0,
            primed: false,
        },
        world0: EmMode::Hybrid {
            j: 1,
            primed: false,
        },
    };
    let bound = Bound::AdjacentHybrid {
        n,
        j: 0,
        q_p_stage: 16.0,
    };
    let e = estimate_advantage_with_bound(&adv, game, 20_000, 10, bound).unwrap();
    assert!(e.advantage <= e.bound + e.ci_halfwidth, "{e:?}");
}
