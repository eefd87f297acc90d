//! The acceptance suite: one check per criterion, shared by the
//! `acceptance` test target and the `selftest` command.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::attacks::{
    attack_as_distinguisher, classical_birthday_attack, q1_claw_attack, q1_claw_exhaustive,
    simon_q2_attack, AttackSpec, ClawParams, DEFAULT_DELTA,
};
use crate::bounds::Bound;
use crate::dense::{gentle_measurement_check, random_gentle_instance};
use crate::error::{Error, Result};
use crate::experiment::{bad_event_counts, strategy};
use crate::games::adversaries::{
    CanonicalPermProber, FixedPointReprogrammer, FnProber, GeometricReprogrammer, SlideProbe,
    TvProbe,
};
use crate::games::estimate::{em_modes_tv, estimate_fn, frequency_halfwidth, GameSpec};
use crate::games::lemmas::{
    estimate_fn_resampling, estimate_perm_resampling, estimate_reprogramming, FnResamplingGame,
    PermResamplingGame, ReprogramAdversary, ReprogrammingGame,
};
use crate::games::{EmAdversary, EmGame, EmMode};
use crate::perm::{em_forward, perm_reprogram, Key, KeyDistribution, Permutation, Transcript};
use crate::rng::trial_rng;
use crate::statevector::{RegisterLayout, StateVector};

/// Master seed of every acceptance check.
pub const SEED: u64 = 2024;

/// Wall-clock limit for a full self-test.
pub const SELFTEST_LIMIT: Duration = Duration::from_secs(15 * 60);

/// Trials per experiment in the hybrid-chain TV checks.
pub const TV_TRIALS: usize = 400_000;

/// TV threshold for the hybrid-chain equivalences.
pub const TV_THRESHOLD: f64 = 0.02;

#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: usize,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl CriterionReport {
    /// `PASS`/`FAIL` line for humans.
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {} {} ({:.1} s): {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

/// Ids run by the self-test.
pub const SELFTEST_IDS: std::ops::RangeInclusive<usize> = 1..=11;

pub fn title(id: usize) -> &'static str {
    match id {
        1 => "Simon Q2 key recovery",
        2 => "Q1 claw attack",
        3 => "classical birthday attack",
        4 => "permutation resampling sweep",
        5 => "function resampling sweep",
        6 => "arbitrary reprogramming",
        7 => "hybrid-chain equivalences",
        8 => "bad-event frequencies",
        9 => "bound non-violation and attack slope",
        10 => "gentle measurement",
        11 => "simulator properties",
        12 => "selftest end to end",
        _ => "unknown criterion",
    }
}

type Outcome = Result<(bool, String)>;

/// Runs criterion `id` (1 to 11).
pub fn run_criterion(id: usize) -> CriterionReport {
    let start = Instant::now();
    let outcome: Outcome = match id {
        1 => simon_recovery(),
        2 => claw_recovery(),
        3 => birthday_recovery(),
        4 => perm_resampling_sweep(),
        5 => fn_resampling_sweep(),
        6 => reprogramming(),
        7 => hybrid_equivalences(),
        8 => bad_events(),
        9 => bound_sweep(),
        10 => gentle_measurement(),
        11 => simulator_properties(),
        _ => Err(Error::InvalidParameter(format!("no criterion {id}"))),
    };
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionReport {
        id,
        title: title(id),
        passed,
        detail,
        elapsed: start.elapsed(),
    }
}

/// Runs criteria 1 to 11 in order, calling `on_report` after each.
pub fn selftest(mut on_report: impl FnMut(&CriterionReport)) -> Vec<CriterionReport> {
    SELFTEST_IDS
        .map(|id| {
            let r = run_criterion(id);
            on_report(&r);
            r
        })
        .collect()
}

/// Criterion 12, judged from a finished self-test.
pub fn selftest_verdict(reports: &[CriterionReport], elapsed: Duration) -> CriterionReport {
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.id.to_string())
        .collect();
    let mut ids = SELFTEST_IDS;
    let complete = ids.all(|id| reports.iter().any(|r| r.id == id));
    let in_time = elapsed <= SELFTEST_LIMIT;
    let detail = if failed.is_empty() {
        format!("criteria 1-11 pass in {:.1} s", elapsed.as_secs_f64())
    } else {
        format!(
            "selftest would exit 1: criteria {} fail ({:.1} s)",
            failed.join(", "),
            elapsed.as_secs_f64()
        )
    };
    CriterionReport {
        id: 12,
        title: title(12),
        passed: complete && failed.is_empty() && in_time,
        detail,
        elapsed,
    }
}

fn instance(
    seed: u64,
    domain: &str,
    i: u64,
    n: usize,
) -> Result<(Permutation, Key, crate::rng::TrialRng)> {
    let mut rng = trial_rng(seed, domain, i);
    let p = Permutation::sample(n, &mut rng)?;
    let key = KeyDistribution::TwoKeyUniform.sample(n, &mut rng);
    Ok((p, key, rng))
}

fn simon_recovery() -> Outcome {
    let (n, trials) = (8, 100u64);
    let start = Instant::now();
    let runs = (0..trials)
        .into_par_iter()
        .map(|i| {
            let (p, key, mut rng) = instance(SEED, "c1", i, n)?;
            let r = simon_q2_attack(&p, key, &mut rng, 3 * n)?;
            Ok((
                r.success && r.recovered_key == Some(key),
                r.quantum_queries_used,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let elapsed = start.elapsed().as_secs_f64();
    let wins = runs.iter().filter(|r| r.0).count();
    let max_q = runs.iter().map(|r| r.1).max().unwrap_or(0);
    let rate = wins as f64 / trials as f64;
    Ok((
        rate >= 0.90 && max_q <= 6 * n && elapsed <= 10.0,
        format!(
            "success {rate:.2} (need 0.90), max quantum queries {max_q} (cap {}), {elapsed:.2} s",
            6 * n
        ),
    ))
}

fn claw_recovery() -> Outcome {
    let (n, trials) = (12, 50u64);
    let params = ClawParams::new(16);
    let runs = (0..trials)
        .into_par_iter()
        .map(|i| {
            let (p, key, rng) = instance(SEED, "c2", i, n)?;
            // the same stream builds the same table in both modes
            let (_, analysis) = q1_claw_exhaustive(&p, key, params, &mut rng.clone())?;
            let r = q1_claw_attack(&p, key, params, &mut rng.clone())?;
            Ok((
                analysis.predicted,
                r.trials_inner,
                r.success && r.recovered_key == Some(key),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let grover_runs: usize = runs.iter().map(|r| r.1).sum();
    let wins = runs.iter().filter(|r| r.2).count();
    let predicted = runs.iter().map(|r| r.0 * r.1 as f64).sum::<f64>() / grover_runs as f64;
    let observed = wins as f64 / grover_runs as f64;
    let rate = wins as f64 / trials as f64;
    let agree = (predicted - observed).abs() <= 0.1;
    Ok((
        agree && rate >= 0.5,
        format!(
            "per-run success {observed:.3} vs exhaustive prediction {predicted:.3}; \
             key recovery {wins}/{trials} = {rate:.2} (need 0.5)"
        ),
    ))
}

fn birthday_recovery() -> Outcome {
    let (n, trials) = (16, 200u64);
    let wins = (0..trials)
        .into_par_iter()
        .map(|i| {
            let (p, key, mut rng) = instance(SEED, "c3", i, n)?;
            let r = classical_birthday_attack(&p, key, DEFAULT_DELTA, 256, 256, &mut rng)?;
            Ok(usize::from(r.success && r.recovered_key == Some(key)))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    let rate = wins as f64 / trials as f64;
    Ok((
        (rate - 0.63).abs() <= 0.10,
        format!("success {rate:.3} (target 0.63 +- 0.10)"),
    ))
}

fn perm_resampling_sweep() -> Outcome {
    let n = 8;
    let mut ok = true;
    let mut parts = Vec::new();
    for q in [1usize, 2, 4, 8, 16] {
        let e = estimate_perm_resampling(
            &CanonicalPermProber { q },
            PermResamplingGame::new(n),
            10_000,
            SEED,
        )?;
        let floor = 0.1 * (q as f64 / 256.0).sqrt();
        let tight = q < 4 || e.advantage >= floor;
        ok &= e.within_bound() && tight;
        parts.push(format!("q={q}: {:.4}<={:.3}", e.advantage, e.bound));
    }
    Ok((ok, parts.join(", ")))
}

fn fn_resampling_sweep() -> Outcome {
    let m = 8;
    let mut ok = true;
    let mut parts = Vec::new();
    for q in [1usize, 2, 4, 8] {
        let adv = FnProber { q, fixed: false };
        let e = estimate_fn_resampling(&adv, FnResamplingGame::new(m, m), 10_000, SEED)?;
        ok &= e.within_bound();
        parts.push(format!("q={q}: {:.4}<={:.3}", e.advantage, e.bound));
    }
    Ok((ok, parts.join(", ")))
}

fn reprogramming() -> Outcome {
    let m = 6;
    let advs: [(&str, &dyn ReprogramAdversary); 2] = [
        ("fixed-point", &FixedPointReprogrammer::new(m, m)),
        ("geometric", &GeometricReprogrammer::new(m, m)),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, adv) in advs {
        let r = estimate_reprogramming(adv, ReprogrammingGame::default(), 10_000, SEED)?;
        ok &= r.estimate.within_bound();
        parts.push(format!(
            "{name}: {:.4} <= 2*{:.3}*sqrt({:.4}) = {:.3}",
            r.estimate.advantage, r.expected_queries, r.epsilon, r.estimate.bound
        ));
    }
    Ok((ok, parts.join("; ")))
}

/// Counts runs where `Expt_j` and `Expt'_j` on the same stream differ even
/// though neither raised a bad flag.
pub fn primed_mismatches(
    adv: &dyn EmAdversary,
    n: usize,
    j: usize,
    trials: usize,
    seed: u64,
) -> Result<(usize, usize)> {
    let dist = KeyDistribution::TwoKeyUniform;
    let plain = EmGame::new(n, dist, EmMode::Expt { j, primed: false });
    let primed = EmGame::new(n, dist, EmMode::Expt { j, primed: true });
    (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let a = plain.run(adv, &mut trial_rng(seed, "primed", i))?;
            let b = primed.run(adv, &mut trial_rng(seed, "primed", i))?;
            let clean = !a.bad.any() && !b.bad.any();
            Ok((
                usize::from(clean && a.outcome_key() != b.outcome_key()),
                usize::from(clean),
            ))
        })
        .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))
}

fn hybrid_equivalences() -> Outcome {
    let n = 3;
    let dist = KeyDistribution::TwoKeyUniform;
    let adv = TvProbe::new(2);
    let checks = [
        (
            "H_0~real",
            EmMode::Hybrid {
                j: 0,
                primed: false,
            },
            EmMode::Real,
        ),
        (
            "H_2~ideal",
            EmMode::Hybrid {
                j: 2,
                primed: false,
            },
            EmMode::Ideal,
        ),
        (
            "Expt'_0~H'_0",
            EmMode::Expt { j: 0, primed: true },
            EmMode::Hybrid { j: 0, primed: true },
        ),
        (
            "Expt'_1~H'_1",
            EmMode::Expt { j: 1, primed: true },
            EmMode::Hybrid { j: 1, primed: true },
        ),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, a, b) in checks {
        let tv = em_modes_tv(&adv, n, dist, a, b, TV_TRIALS, SEED)?;
        ok &= tv.tv <= TV_THRESHOLD;
        parts.push(format!("{name} {:.4}", tv.tv));
    }
    for inverse_last in [false, true] {
        let probe = TvProbe {
            classical: 2,
            inverse_last,
        };
        for j in [0, 1] {
            let (bad, clean) = primed_mismatches(&probe, n, j, 100_000, SEED)?;
            ok &= bad == 0 && clean > 0;
            parts.push(format!(
                "j={j}{}: {bad} mismatches in {clean} clean runs",
                if inverse_last { " inv" } else { "" }
            ));
        }
    }
    Ok((ok, parts.join(", ")))
}

fn bad_events() -> Outcome {
    let (j, trials) = (4, 100_000);
    let adv = SlideProbe { q_e: 8, q_p: 16 };
    let mut ok = true;
    let mut parts = Vec::new();
    for n in [6, 8] {
        let counts = bad_event_counts(&adv, n, KeyDistribution::TwoKeyUniform, j, trials, SEED)?;
        let caps = [
            Bound::PriorCollision { n, j }.raw(),
            Bound::PriorCollision { n, j }.raw(),
            Bound::LaterFind {
                n,
                q_e: adv.q_e,
                j,
                q_p: adv.q_p as f64,
            }
            .raw(),
        ];
        for (i, (&k, cap)) in counts.iter().zip(caps).enumerate() {
            let freq = k as f64 / trials as f64;
            ok &= freq <= cap + 2.0 * frequency_halfwidth(k, trials);
            parts.push(format!("n={n} bad{}: {freq:.4}<={cap:.4}", i + 1));
        }
    }
    Ok((ok, parts.join(", ")))
}

/// Parameter points for every shipped Even-Mansour distinguisher that
/// lives in the classical-keyed query model.
pub fn shipped_points() -> Vec<(&'static str, Option<usize>, Option<usize>)> {
    vec![
        ("zero", None, None),
        ("low-bit", None, None),
        ("tv-probe", Some(2), None),
        ("slide", Some(2), Some(2)),
        ("slide", Some(4), Some(16)),
        ("key-guess", None, Some(4)),
        ("grover-key", Some(1), Some(1)),
        ("q1-claw", Some(4), Some(1)),
        ("birthday", Some(4), Some(4)),
    ]
}

fn bound_sweep() -> Outcome {
    let trials = 2000;
    let mut ok = true;
    let mut checked = 0;
    let mut worst = (f64::NEG_INFINITY, String::new());
    for n in [8, 10, 12] {
        for (name, a, b) in shipped_points() {
            let adv = strategy(name, n, a, b, 1)?;
            let games = [
                GameSpec::EvenMansour {
                    n,
                    dist: KeyDistribution::TwoKeyUniform,
                    q2: false,
                },
                GameSpec::ForwardOnly { n },
            ];
            for game in games {
                let e = estimate_fn(
                    trials,
                    SEED,
                    "advantage",
                    game.default_bound(adv.as_ref()),
                    |w, r| Ok(game.run(adv.as_ref(), w, r)?.guess),
                )?;
                checked += 1;
                ok &= e.within_bound();
                let slack = e.advantage - e.bound - 2.0 * e.ci_halfwidth;
                if slack > worst.0 {
                    worst = (slack, format!("{name} n={n} {game:?}"));
                }
            }
        }
    }
    let (slope, points) = claw_slope()?;
    let slope_ok = (0.7..=1.3).contains(&slope);
    Ok((
        ok && slope_ok,
        format!(
            "{checked} estimates, largest advantage - bound - 2CI = {:.4} ({}); \
             claw slope at n=16 = {slope:.3} over {points} points (need 1.0 +- 0.3)",
            worst.0, worst.1
        ),
    ))
}

/// Least-squares slope of `ln advantage` against `ln(q_P² q_E / 2^n)` for
/// the claw distinguisher at `n = 16` over a 3×3 grid of table sizes and
/// Grover iteration counts, one Grover run per trial.
pub fn claw_slope() -> Result<(f64, usize)> {
    let n = 16;
    let mut points = Vec::new();
    for table in [64usize, 128, 256] {
        for k in [2usize, 3, 4] {
            let params = ClawParams {
                delta: DEFAULT_DELTA,
                table_size: table,
                retries: 1,
                iterations: Some(k),
            };
            let adv = attack_as_distinguisher(n, AttackSpec::Q1Claw(params));
            let game = GameSpec::EvenMansour {
                n,
                dist: KeyDistribution::TwoKeyUniform,
                q2: false,
            };
            let e = estimate_fn(1500, SEED, "slope", Bound::NotApplicable, |w, r| {
                Ok(game.run(&adv, w, r)?.guess)
            })?;
            let (q_e, q_p) = adv.resources();
            let x = (q_p * q_p * q_e) as f64 / (n as f64).exp2();
            if e.advantage <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "no measurable advantage at table {table}, k {k}"
                )));
            }
            points.push((x.ln(), e.advantage.ln()));
        }
    }
    let len = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / len;
    let my = points.iter().map(|p| p.1).sum::<f64>() / len;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok((sxy / sxx, points.len()))
}

fn gentle_measurement() -> Outcome {
    let instances = 1000u64;
    let mut violations = 0;
    let mut worst = 0.0f64;
    for i in 0..instances {
        let mut rng = trial_rng(SEED, "gentle", i);
        let (psi, projectors) = random_gentle_instance(32, &mut rng)?;
        let c = gentle_measurement_check(&psi, &projectors, None)?;
        if !c.holds {
            violations += 1;
            worst = worst.max(c.lhs - c.rhs);
        }
    }
    Ok((
        violations == 0,
        format!("{violations} of {instances} instances violate the inequality (largest excess {worst:.3e})"),
    ))
}

fn simulator_properties() -> Outcome {
    let mut failures = Vec::new();
    let mut check = |name: &str, ok: bool| {
        if !ok {
            failures.push(name.to_string());
        }
    };
    check("norm preservation", norm_preservation()?);
    check("oracle involutions", oracle_involutions()?);
    check("phase/xor equivalence", phase_xor_equivalence()?);
    check("swap conjugation", swap_conjugation()?);
    let (programmed, tested) = programming_sweep()?;
    check("programming property", programmed);
    Ok((
        failures.is_empty(),
        if failures.is_empty() {
            format!("all properties hold ({tested} collision-free programming instances)")
        } else {
            format!("failed: {}", failures.join(", "))
        },
    ))
}

fn random_table(rng: &mut impl Rng, in_bits: usize, out_bits: usize) -> Vec<u32> {
    (0..1usize << in_bits)
        .map(|_| rng.random_range(0..1u32 << out_bits))
        .collect()
}

fn random_state(rng: &mut impl Rng, layout: RegisterLayout) -> Result<StateVector> {
    let dim = layout.dimension();
    let amps: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(layout, amps.into_iter().map(|a| a / norm).collect())
}

/// Random gate sequences on a `c:1, x:3, y:3` layout; the norm is checked
/// after every operation.
fn norm_preservation() -> Result<bool> {
    for i in 0..50u64 {
        let mut rng = trial_rng(SEED, "norm", i);
        let layout = RegisterLayout::new(&[("c", 1), ("x", 3), ("y", 3)])?;
        let mut s = random_state(&mut rng, layout)?;
        for _ in 0..20 {
            let t = random_table(&mut rng, 3, 3);
            match rng.random_range(0..6) {
                0 => s.hadamard(["x", "y", "c"][rng.random_range(0..3)])?,
                1 => s.xor_oracle("x", "y", &t)?,
                2 => s.controlled_xor_oracle("c", "x", "y", &t)?,
                3 => s.phase_oracle("x", |v| t[v as usize] & 1 == 1)?,
                4 => s.diffusion("y")?,
                _ => {
                    s.measure("c", &mut rng)?;
                }
            }
            if (s.norm_sqr() - 1.0).abs() > 1e-9 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn oracle_involutions() -> Result<bool> {
    for i in 0..50u64 {
        let mut rng = trial_rng(SEED, "involution", i);
        let layout = RegisterLayout::new(&[("c", 1), ("x", 3), ("y", 2)])?;
        let s0 = random_state(&mut rng, layout)?;
        let t = random_table(&mut rng, 3, 2);
        let mut s = s0.clone();
        s.xor_oracle("x", "y", &t)?;
        s.xor_oracle("x", "y", &t)?;
        s.controlled_xor_oracle("c", "x", "y", &t)?;
        s.controlled_xor_oracle("c", "x", "y", &t)?;
        s.phase_oracle("x", |v| t[v as usize] != 0)?;
        s.phase_oracle("x", |v| t[v as usize] != 0)?;
        if s.max_deviation(&s0) > 1e-12 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every predicate on one and two qubits: the phase oracle on `|ψ⟩`
/// tensored with `|−⟩` equals the XOR oracle into a `|−⟩` ancilla.
fn phase_xor_equivalence() -> Result<bool> {
    let minus = [
        Complex64::new(1.0, 0.0) / 2f64.sqrt(),
        Complex64::new(-1.0, 0.0) / 2f64.sqrt(),
    ];
    for width in 1..=2usize {
        let dim = 1usize << width;
        let mut rng = trial_rng(SEED, "phase-xor", width as u64);
        let psi = random_state(&mut rng, RegisterLayout::new(&[("x", width)])?)?;
        for mask in 0..1u32 << dim {
            let pred = |v: u64| mask >> v & 1 == 1;
            let mut phased = psi.clone();
            phased.phase_oracle("x", pred)?;
            let joint = |s: &StateVector| -> Vec<Complex64> {
                s.amplitudes()
                    .iter()
                    .flat_map(|&a| minus.map(|m| a * m))
                    .collect()
            };
            let layout = RegisterLayout::new(&[("x", width), ("a", 1)])?;
            let mut xored = StateVector::from_amplitudes(layout.clone(), joint(&psi))?;
            let table: Vec<u32> = (0..dim as u64).map(|v| pred(v) as u32).collect();
            xored.xor_oracle("x", "a", &table)?;
            let want = StateVector::from_amplitudes(layout, joint(&phased))?;
            if xored.max_deviation(&want) > 1e-12 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `P ∘ swap_{s0,s1} = swap_{P(s0),P(s1)} ∘ P` for 100 random instances at
/// `n = 6`.
fn swap_conjugation() -> Result<bool> {
    let n = 6;
    for i in 0..100u64 {
        let mut rng = trial_rng(SEED, "conjugation", i);
        let p = Permutation::sample(n, &mut rng)?;
        let s0 = rng.random_range(0..1u64 << n);
        let s1 = rng.random_range(0..1u64 << n);
        let left = Permutation::compose(&p, &Permutation::swap(n, s0, s1)?)?;
        let right = Permutation::compose(&Permutation::swap(n, p.apply(s0), p.apply(s1))?, &p)?;
        if left != right {
            return Ok(false);
        }
    }
    Ok(true)
}

/// 1000 random `(P, T, k)` at `n = 8` with `|T| ≤ 4`: whenever no
/// `P(x_i ⊕ k1) = y_j ⊕ k2` with `i ≠ j`, the reprogrammed cipher maps
/// every `x_i` to `y_i`. Returns the verdict and the number of
/// collision-free instances.
fn programming_sweep() -> Result<(bool, usize)> {
    let n = 8;
    let mut tested = 0;
    for i in 0..1000u64 {
        let mut rng = trial_rng(SEED, "programming", i);
        let p = Permutation::sample(n, &mut rng)?;
        let key = KeyDistribution::TwoKeyUniform.sample(n, &mut rng);
        let len = rng.random_range(0..=4);
        let xs = rand::seq::index::sample(&mut rng, 1 << n, len);
        let ys = rand::seq::index::sample(&mut rng, 1 << n, len);
        let pairs: Vec<(u64, u64)> = xs
            .iter()
            .zip(ys.iter())
            .map(|(x, y)| (x as u64, y as u64))
            .collect();
        let t = Transcript::from_entries(&pairs)?;
        let collision = pairs.iter().enumerate().any(|(a, &(x, _))| {
            pairs
                .iter()
                .enumerate()
                .any(|(b, &(_, y))| a != b && p.apply(x ^ key.k1) == y ^ key.k2)
        });
        let q = perm_reprogram(&p, &t, key)?;
        if !collision {
            tested += 1;
            if pairs.iter().any(|&(x, y)| em_forward(&q, key, x) != y) {
                return Ok((false, tested));
            }
        }
    }
    Ok((true, tested))
}
