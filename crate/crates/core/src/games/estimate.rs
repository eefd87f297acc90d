//! Monte-Carlo estimation of distinguishing advantage and of total-variation
//! distance between two experiments.
//!
//! Trial `i` of world `w` draws from stream `i` of the generator keyed by
//! `(seed, "<domain>/<w>")`, so results do not depend on thread count or
//! scheduling.

use std::collections::HashMap;

use rayon::prelude::*;

use super::{EmAdversary, EmGame, EmMode, ForwardGame, ForwardMode, GameTranscript};
use crate::bounds::Bound;
use crate::error::{Error, Result};
use crate::perm::KeyDistribution;
use crate::rng::{trial_rng, TrialRng};

/// z-value of a two-sided 95% normal interval.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Paired acceptance frequencies with a 95% interval on their difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdvantageEstimate {
    pub p_world1: f64,
    pub p_world0: f64,
    pub advantage: f64,
    pub ci_halfwidth: f64,
    pub trials: usize,
    /// The matching bound, clipped to `[0, 1]`.
    pub bound: f64,
    /// The unclipped bound is at least 1.
    pub vacuous: bool,
}

impl AdvantageEstimate {
    pub fn from_counts(ones1: usize, ones0: usize, trials: usize, bound: Bound) -> Self {
        let p1 = ones1 as f64 / trials as f64;
        let p0 = ones0 as f64 / trials as f64;
        Self {
            p_world1: p1,
            p_world0: p0,
            advantage: (p1 - p0).abs(),
            ci_halfwidth: ci_halfwidth(ones1, ones0, trials),
            trials,
            bound: bound.value(),
            vacuous: bound.vacuous(),
        }
    }

    /// `advantage ≤ bound + 2·ci_halfwidth`.
    pub fn within_bound(&self) -> bool {
        self.advantage <= self.bound + 2.0 * self.ci_halfwidth
    }
}

/// Half-width of the normal-approximation 95% interval on `p1 − p0`.
///
/// Each frequency is shrunk to `(k + ½)/(N + 1)` before taking its variance
/// so that the width stays positive when a world never (or always) accepts.
pub fn ci_halfwidth(ones1: usize, ones0: usize, trials: usize) -> f64 {
    Z95 * (shrunk_variance(ones1, trials) + shrunk_variance(ones0, trials)).sqrt()
}

/// Half-width of the 95% interval on a single frequency `k / trials`, with
/// the same shrinkage as [`ci_halfwidth`].
pub fn frequency_halfwidth(k: usize, trials: usize) -> f64 {
    Z95 * shrunk_variance(k, trials).sqrt()
}

fn shrunk_variance(k: usize, trials: usize) -> f64 {
    let p = (k as f64 + 0.5) / (trials as f64 + 1.0);
    p * (1.0 - p) / trials as f64
}

/// Counts how often `run` accepts in `trials` independent trials.
pub fn count_accepts<F>(trials: usize, seed: u64, domain: &str, run: F) -> Result<usize>
where
    F: Fn(&mut TrialRng) -> Result<bool> + Sync,
{
    (0..trials as u64)
        .into_par_iter()
        .map(|i| run(&mut trial_rng(seed, domain, i)).map(usize::from))
        .try_reduce(|| 0, |a, b| Ok(a + b))
}

/// Runs `run(world1, rng)` for `trials` trials per world.
pub fn estimate_fn<F>(
    trials: usize,
    seed: u64,
    domain: &str,
    bound: Bound,
    run: F,
) -> Result<AdvantageEstimate>
where
    F: Fn(bool, &mut TrialRng) -> Result<bool> + Sync,
{
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let ones1 = count_accepts(trials, seed, &format!("{domain}/world1"), |r| run(true, r))?;
    let ones0 = count_accepts(trials, seed, &format!("{domain}/world0"), |r| run(false, r))?;
    Ok(AdvantageEstimate::from_counts(ones1, ones0, trials, bound))
}

/// The two experiments an [`EmAdversary`] is asked to tell apart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GameSpec {
    /// Real versus ideal Even-Mansour; `q2` grants keyed quantum access.
    EvenMansour {
        n: usize,
        dist: KeyDistribution,
        q2: bool,
    },
    /// Real versus ideal forward-only variant.
    ForwardOnly { n: usize },
    /// Two arbitrary Even-Mansour modes, e.g. adjacent hybrids.
    EmModes {
        n: usize,
        dist: KeyDistribution,
        world1: EmMode,
        world0: EmMode,
    },
    /// Two forward-only modes.
    ForwardModes {
        n: usize,
        world1: ForwardMode,
        world0: ForwardMode,
    },
}

impl GameSpec {
    pub fn run(
        &self,
        adv: &dyn EmAdversary,
        world1: bool,
        rng: &mut TrialRng,
    ) -> Result<GameTranscript> {
        match *self {
            Self::EvenMansour { n, dist, q2 } => {
                let mode = if world1 { EmMode::Real } else { EmMode::Ideal };
                let mut g = EmGame::new(n, dist, mode);
                g.q2 = q2;
                g.run(adv, rng)
            }
            Self::ForwardOnly { n } => {
                let mode = if world1 {
                    ForwardMode::Real
                } else {
                    ForwardMode::Ideal
                };
                ForwardGame::new(n, mode).run(adv, rng)
            }
            Self::EmModes {
                n,
                dist,
                world1: a,
                world0: b,
            } => EmGame::new(n, dist, if world1 { a } else { b }).run(adv, rng),
            Self::ForwardModes {
                n,
                world1: a,
                world0: b,
            } => ForwardGame::new(n, if world1 { a } else { b }).run(adv, rng),
        }
    }

    /// The bound that applies to real-versus-ideal games.
    pub fn default_bound(&self, adv: &dyn EmAdversary) -> Bound {
        let b = adv.budget();
        match *self {
            Self::EvenMansour { q2: true, .. } => Bound::NotApplicable,
            Self::EvenMansour { n, .. } => Bound::EvenMansour {
                n,
                q_e: b.classical as f64,
                q_p: b.quantum as f64,
            },
            Self::ForwardOnly { n } => Bound::ForwardOnly {
                n,
                q_e: b.classical as f64,
                q_f: b.quantum as f64,
            },
            Self::EmModes { .. } | Self::ForwardModes { .. } => Bound::NotApplicable,
        }
    }
}

/// Minimum trial count accepted by [`estimate_advantage`].
pub const MIN_TRIALS: usize = 100;

/// Estimates `adv`'s advantage in `game` with the game's default bound.
pub fn estimate_advantage(
    adv: &dyn EmAdversary,
    game: GameSpec,
    trials: usize,
    seed: u64,
) -> Result<AdvantageEstimate> {
    estimate_advantage_with_bound(adv, game, trials, seed, game.default_bound(adv))
}

pub fn estimate_advantage_with_bound(
    adv: &dyn EmAdversary,
    game: GameSpec,
    trials: usize,
    seed: u64,
    bound: Bound,
) -> Result<AdvantageEstimate> {
    if trials < MIN_TRIALS {
        return Err(Error::InvalidParameter(format!(
            "advantage estimation needs at least {MIN_TRIALS} trials, got {trials}"
        )));
    }
    estimate_fn(trials, seed, "advantage", bound, |w, rng| {
        Ok(game.run(adv, w, rng)?.guess)
    })
}

/// Plug-in total-variation distance between two empirical distributions.
#[derive(Debug, Clone, PartialEq)]
pub struct TvEstimate {
    pub tv: f64,
    pub trials: usize,
    /// Acceptance frequency of each experiment.
    pub p_a: f64,
    pub p_b: f64,
    /// Number of distinct outcomes seen across both experiments.
    pub cells: usize,
}

fn histogram<F>(trials: usize, seed: u64, domain: &str, run: F) -> Result<HashMap<Vec<u64>, usize>>
where
    F: Fn(&mut TrialRng) -> Result<Vec<u64>> + Sync,
{
    (0..trials as u64)
        .into_par_iter()
        .try_fold(HashMap::new, |mut h, i| {
            let key = run(&mut trial_rng(seed, domain, i))?;
            *h.entry(key).or_insert(0) += 1;
            Ok::<_, Error>(h)
        })
        .try_reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            Ok(a)
        })
}

/// TV distance between the outcome distributions of `a` and `b`, each run
/// `trials` times. Outcomes are arbitrary `u64` vectors; the first entry is
/// read as the accept bit for `p_a` / `p_b`.
pub fn total_variation<A, B>(
    trials: usize,
    seed: u64,
    domain: &str,
    a: A,
    b: B,
) -> Result<TvEstimate>
where
    A: Fn(&mut TrialRng) -> Result<Vec<u64>> + Sync,
    B: Fn(&mut TrialRng) -> Result<Vec<u64>> + Sync,
{
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let ha = histogram(trials, seed, &format!("{domain}/a"), a)?;
    let hb = histogram(trials, seed, &format!("{domain}/b"), b)?;
    let mut keys: Vec<&Vec<u64>> = ha.keys().chain(hb.keys()).collect();
    keys.sort();
    keys.dedup();
    let n = trials as f64;
    let tv = 0.5
        * keys
            .iter()
            .map(|k| {
                let ca = *ha.get(*k).unwrap_or(&0) as f64;
                let cb = *hb.get(*k).unwrap_or(&0) as f64;
                (ca - cb).abs() / n
            })
            .sum::<f64>();
    let accept = |h: &HashMap<Vec<u64>, usize>| {
        h.iter()
            .filter(|(k, _)| k.first() == Some(&1))
            .map(|(_, v)| *v)
            .sum::<usize>() as f64
            / n
    };
    Ok(TvEstimate {
        tv,
        trials,
        p_a: accept(&ha),
        p_b: accept(&hb),
        cells: keys.len(),
    })
}

/// TV distance between two Even-Mansour modes over `(guess, transcript)`.
pub fn em_modes_tv(
    adv: &dyn EmAdversary,
    n: usize,
    dist: KeyDistribution,
    a: EmMode,
    b: EmMode,
    trials: usize,
    seed: u64,
) -> Result<TvEstimate> {
    total_variation(
        trials,
        seed,
        "tv",
        |r| Ok(EmGame::new(n, dist, a).run(adv, r)?.outcome_key()),
        |r| Ok(EmGame::new(n, dist, b).run(adv, r)?.outcome_key()),
    )
}

/// TV distance between two forward-only modes over `(guess, transcript)`.
pub fn forward_modes_tv(
    adv: &dyn EmAdversary,
    n: usize,
    a: ForwardMode,
    b: ForwardMode,
    trials: usize,
    seed: u64,
) -> Result<TvEstimate> {
    total_variation(
        trials,
        seed,
        "tv-forward",
        |r| Ok(ForwardGame::new(n, a).run(adv, r)?.outcome_key()),
        |r| Ok(ForwardGame::new(n, b).run(adv, r)?.outcome_key()),
    )
}
