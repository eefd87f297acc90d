//! Batch experiments: a configuration in, CSV rows out.
//!
//! Every row is a pure function of `(config, seed)` apart from
//! `wall_time_ms`.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::attacks::claw::{MAX_CLAW_WIDTH, MAX_Q1_WIDTH};
use crate::attacks::{attack_as_distinguisher, AttackSpec, ClawParams, DEFAULT_DELTA};
use crate::bounds::Bound;
use crate::error::{Error, Result};
use crate::games::adversaries::{
    CanonicalPermProber, ClassicalLowBit, FixedPointReprogrammer, FnProber, GeometricReprogrammer,
    GroverKeySearch, KeyGuessProbe, SlideProbe, TvProbe, ZeroQuery,
};
use crate::games::estimate::{
    ci_halfwidth, em_modes_tv, estimate_fn, forward_modes_tv, frequency_halfwidth, GameSpec,
    TvEstimate,
};
use crate::games::lemmas::{
    estimate_fn_resampling, estimate_perm_resampling, estimate_reprogramming, FnResamplingGame,
    PermResamplingGame, ReprogrammingGame,
};
use crate::games::{AdvantageEstimate, EmAdversary, EmGame, EmMode, ForwardMode};
use crate::perm::{KeyDistribution, MAX_WIDTH};
use crate::rng::trial_rng;
use crate::statevector::max_qubits;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Attack,
    Lemma,
    Hybrid,
    Sweep,
    Selftest,
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "attack" => Self::Attack,
            "lemma" => Self::Lemma,
            "hybrid" => Self::Hybrid,
            "sweep" => Self::Sweep,
            "selftest" => Self::Selftest,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown experiment `{other}`"
                )))
            }
        })
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Attack => "attack",
            Self::Lemma => "lemma",
            Self::Hybrid => "hybrid",
            Self::Sweep => "sweep",
            Self::Selftest => "selftest",
        })
    }
}

/// Cipher variant under attack.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Variant {
    #[default]
    TwoKey,
    OneKey,
    ForwardOnly,
}

impl Variant {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::TwoKey => "two-key",
            Self::OneKey => "one-key",
            Self::ForwardOnly => "forward-only",
        }
    }

    fn dist(&self) -> KeyDistribution {
        match self {
            Self::OneKey => KeyDistribution::OneKey,
            _ => KeyDistribution::TwoKeyUniform,
        }
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "two-key" => Self::TwoKey,
            "one-key" => Self::OneKey,
            "forward-only" => Self::ForwardOnly,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown variant `{other}`"
                )))
            }
        })
    }
}

/// One batch run.
///
/// `q_e` and `q_p` are strategy parameters (see [`strategy`]); the rows
/// report the query budgets they imply.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub name: String,
    pub n: usize,
    /// Input width of the lemma games' functions; defaults to `n`.
    pub m: Option<usize>,
    pub variant: Variant,
    pub q_e: Vec<usize>,
    pub q_p: Vec<usize>,
    pub q: Vec<usize>,
    pub j: usize,
    pub primed: bool,
    pub trials: usize,
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment, name: &str, n: usize) -> Self {
        Self {
            experiment,
            name: name.to_string(),
            n,
            m: None,
            variant: Variant::TwoKey,
            q_e: Vec::new(),
            q_p: Vec::new(),
            q: Vec::new(),
            j: 0,
            primed: false,
            trials: 1000,
            seed: 0,
        }
    }
}

/// Column order of [`ResultRow::csv_line`].
pub const CSV_HEADER: &str = "experiment,name,n,variant,q_e,q_p,j,trials,p_world1,p_world0,\
advantage,ci_halfwidth,bound,seed,wall_time_ms,vacuous";

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub experiment: Experiment,
    pub name: String,
    pub n: usize,
    /// Cipher variant, or `none` for the lemma games.
    pub variant: String,
    pub q_e: usize,
    pub q_p: usize,
    pub j: usize,
    pub trials: usize,
    pub p_world1: f64,
    pub p_world0: f64,
    pub advantage: f64,
    pub ci_halfwidth: f64,
    pub bound: f64,
    pub seed: u64,
    pub wall_time_ms: u64,
    pub vacuous: bool,
}

impl ResultRow {
    fn from_estimate(config: &ExperimentConfig, name: &str, e: &AdvantageEstimate) -> Self {
        Self {
            experiment: config.experiment,
            name: name.to_string(),
            n: config.n,
            variant: config.variant.as_str().to_string(),
            q_e: 0,
            q_p: 0,
            j: config.j,
            trials: e.trials,
            p_world1: e.p_world1,
            p_world0: e.p_world0,
            advantage: e.advantage,
            ci_halfwidth: e.ci_halfwidth,
            bound: e.bound,
            seed: config.seed,
            wall_time_ms: 0,
            vacuous: e.vacuous,
        }
    }

    fn queries(mut self, q_e: usize, q_p: usize) -> Self {
        self.q_e = q_e;
        self.q_p = q_p;
        self
    }

    fn timed(mut self, start: Instant) -> Self {
        self.wall_time_ms = start.elapsed().as_millis() as u64;
        self
    }

    /// The row as one CSV record, without line terminator.
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.experiment,
            self.name,
            self.n,
            self.variant,
            self.q_e,
            self.q_p,
            self.j,
            self.trials,
            self.p_world1,
            self.p_world0,
            self.advantage,
            self.ci_halfwidth,
            self.bound,
            self.seed,
            self.wall_time_ms,
            self.vacuous
        )
    }
}

/// Header plus one LF-terminated line per row.
pub fn write_csv<W: Write>(mut w: W, rows: &[ResultRow]) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(w, "{}", r.csv_line())?;
    }
    w.flush()
}

fn config_error(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

fn check_width(n: usize, cap: usize) -> Result<()> {
    if n == 0 {
        return Err(config_error("n must be at least 1"));
    }
    if n > cap {
        return Err(config_error(format!(
            "n exceeds simulator cap ({n} > {cap})"
        )));
    }
    Ok(())
}

/// Largest `n` a strategy can be run at with the current qubit cap.
pub fn width_cap(name: &str) -> usize {
    let qubits = max_qubits();
    match name {
        "simon-q2" => 12.min(qubits / 2),
        "q1-claw" => MAX_Q1_WIDTH.min(qubits),
        "grover-key" => qubits,
        "birthday" => MAX_CLAW_WIDTH,
        _ => MAX_WIDTH,
    }
}

/// Names accepted by [`strategy`].
pub const STRATEGIES: &[&str] = &[
    "zero",
    "low-bit",
    "tv-probe",
    "slide",
    "key-guess",
    "grover-key",
    "simon-q2",
    "q1-claw",
    "birthday",
];

/// Builds the named Even-Mansour distinguisher.
///
/// | name | `a` | `b` |
/// |---|---|---|
/// | `zero`, `low-bit` | unused | unused |
/// | `tv-probe` | classical queries | unused |
/// | `slide` | classical queries | public probes |
/// | `key-guess` | unused | public probes |
/// | `grover-key` | classical pairs | Grover iterations |
/// | `simon-q2` | unused | iterations (default `3n`) |
/// | `q1-claw` | table size (default `2^{n/3}`) | Grover iterations (default closed form) |
/// | `birthday` | table size (default `2^{n/2}`) | probes (default `2^{n/2}`) |
///
/// The claw attack gets `retries` Grover runs.
pub fn strategy(
    name: &str,
    n: usize,
    a: Option<usize>,
    b: Option<usize>,
    retries: usize,
) -> Result<Box<dyn EmAdversary>> {
    let need = |v: Option<usize>, what: &str| {
        v.ok_or_else(|| config_error(format!("strategy `{name}` needs {what}")))
    };
    let half = 1usize << (n / 2);
    Ok(match name {
        "zero" => Box::new(ZeroQuery::default()),
        "low-bit" => Box::new(ClassicalLowBit),
        "tv-probe" => Box::new(TvProbe::new(a.unwrap_or(2))),
        "slide" => Box::new(SlideProbe {
            q_e: need(a, "--q-e")?,
            q_p: need(b, "--q-p")?,
        }),
        "key-guess" => Box::new(KeyGuessProbe {
            q_p: need(b, "--q-p")?,
        }),
        "grover-key" => Box::new(GroverKeySearch {
            q_e: need(a, "--q-e")?,
            iterations: need(b, "--q-p")?,
        }),
        "simon-q2" => Box::new(attack_as_distinguisher(
            n,
            AttackSpec::SimonQ2 {
                max_iterations: b.unwrap_or(3 * n),
            },
        )),
        "q1-claw" => {
            let table = a.unwrap_or_else(|| (n as f64 / 3.0).exp2().round() as usize);
            Box::new(attack_as_distinguisher(
                n,
                AttackSpec::Q1Claw(ClawParams {
                    delta: DEFAULT_DELTA,
                    table_size: table,
                    retries,
                    iterations: b,
                }),
            ))
        }
        "birthday" => Box::new(attack_as_distinguisher(
            n,
            AttackSpec::Birthday {
                delta: DEFAULT_DELTA,
                d_size: a.unwrap_or(half),
                t_size: b.unwrap_or(half),
            },
        )),
        other => {
            return Err(config_error(format!(
                "unknown strategy `{other}` (expected one of {})",
                STRATEGIES.join(", ")
            )))
        }
    })
}

/// The real-versus-ideal game a strategy plays under `variant`.
fn game_for(name: &str, n: usize, variant: Variant) -> Result<GameSpec> {
    let q2 = name == "simon-q2";
    match variant {
        Variant::ForwardOnly if q2 => Err(config_error(
            "simon-q2 needs quantum access to a permutation; not defined for forward-only",
        )),
        Variant::ForwardOnly => Ok(GameSpec::ForwardOnly { n }),
        v => Ok(GameSpec::EvenMansour {
            n,
            dist: v.dist(),
            q2,
        }),
    }
}

fn grid(values: &[usize]) -> Vec<Option<usize>> {
    if values.is_empty() {
        vec![None]
    } else {
        values.iter().copied().map(Some).collect()
    }
}

fn check_trials(config: &ExperimentConfig) -> Result<()> {
    if config.trials == 0 {
        return Err(config_error("trials must be at least 1"));
    }
    Ok(())
}

/// Runs one strategy point in its real-versus-ideal game.
pub fn strategy_row(
    config: &ExperimentConfig,
    name: &str,
    a: Option<usize>,
    b: Option<usize>,
    retries: usize,
) -> Result<ResultRow> {
    let start = Instant::now();
    let adv = strategy(name, config.n, a, b, retries)?;
    let game = game_for(name, config.n, config.variant)?;
    let budget = adv.budget();
    let e = estimate_fn(
        config.trials,
        config.seed,
        "advantage",
        game.default_bound(adv.as_ref()),
        |w, r| Ok(game.run(adv.as_ref(), w, r)?.guess),
    )?;
    Ok(ResultRow::from_estimate(config, name, &e)
        .queries(budget.classical, budget.quantum + budget.keyed)
        .timed(start))
}

/// `attack`: one row per `(q_e, q_p)` point for `simon-q2`, `q1-claw` or
/// `birthday`. `p_world1` is the key-recovery rate against the real cipher
/// and `p_world0` the false-accept rate against a random permutation.
pub fn run_attack(config: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    if !matches!(config.name.as_str(), "simon-q2" | "q1-claw" | "birthday") {
        return Err(config_error(format!(
            "unknown attack `{}` (expected simon-q2, q1-claw or birthday)",
            config.name
        )));
    }
    check_width(config.n, width_cap(&config.name))?;
    check_trials(config)?;
    let mut rows = Vec::new();
    for a in grid(&config.q_e) {
        for b in grid(&config.q_p) {
            rows.push(strategy_row(config, &config.name, a, b, 4)?);
        }
    }
    Ok(rows)
}

/// `sweep`: any strategy over the full `q_e × q_p` grid, with the
/// real-versus-ideal bound of the variant. Both lists must be nonempty
/// (strategies that ignore a parameter still need a placeholder value).
pub fn run_sweep(config: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    if config.q_e.is_empty() || config.q_p.is_empty() {
        return Err(config_error(
            "sweep grid is empty: give both --q-e and --q-p",
        ));
    }
    check_width(config.n, width_cap(&config.name))?;
    check_trials(config)?;
    let mut rows = Vec::new();
    for &a in &config.q_e {
        for &b in &config.q_p {
            rows.push(strategy_row(config, &config.name, Some(a), Some(b), 1)?);
        }
    }
    Ok(rows)
}

/// `lemma`: the resampling and reprogramming games.
///
/// * `resample-perm`: the canonical prober at each `q`, on `n` bits.
/// * `resample-fn`: a random-point prober at each `q`, `m → n` bits.
/// * `reprogram`: the fixed-point and geometric-stopping adversaries on
///   `m → n` bits; `q` is measured, not configured.
pub fn run_lemma(config: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    check_width(config.n, MAX_WIDTH)?;
    check_trials(config)?;
    let m = config.m.unwrap_or(config.n);
    let row = |name: &str, e: &AdvantageEstimate, q: usize, start: Instant| {
        let mut r = ResultRow::from_estimate(config, name, e)
            .queries(0, q)
            .timed(start);
        r.variant = "none".into();
        r
    };
    let mut rows = Vec::new();
    match config.name.as_str() {
        "resample-perm" | "resample-fn" => {
            if config.q.is_empty() {
                return Err(config_error("lemma games need --q"));
            }
            for &q in &config.q {
                let start = Instant::now();
                let e = if config.name == "resample-perm" {
                    let game = PermResamplingGame::new(config.n);
                    estimate_perm_resampling(
                        &CanonicalPermProber { q },
                        game,
                        config.trials,
                        config.seed,
                    )?
                } else {
                    check_width(m, MAX_WIDTH)?;
                    let game = FnResamplingGame::new(m, config.n);
                    let adv = FnProber { q, fixed: false };
                    estimate_fn_resampling(&adv, game, config.trials, config.seed)?
                };
                rows.push(row(&config.name, &e, q, start));
            }
        }
        "reprogram" => {
            check_width(m, MAX_WIDTH)?;
            let game = ReprogrammingGame::default();
            let start = Instant::now();
            let fixed = FixedPointReprogrammer::new(m, config.n);
            let e = estimate_reprogramming(&fixed, game, config.trials, config.seed)?;
            rows.push(row(
                "reprogram-fixed",
                &e.estimate,
                e.expected_queries.round() as usize,
                start,
            ));
            let start = Instant::now();
            let geo = GeometricReprogrammer::new(m, config.n);
            let e = estimate_reprogramming(&geo, game, config.trials, config.seed)?;
            rows.push(row(
                "reprogram-geometric",
                &e.estimate,
                e.expected_queries.round() as usize,
                start,
            ));
        }
        other => {
            return Err(config_error(format!(
                "unknown lemma `{other}` (expected resample-perm, resample-fn or reprogram)"
            )))
        }
    }
    Ok(rows)
}

fn tv_row(config: &ExperimentConfig, name: &str, tv: &TvEstimate, start: Instant) -> ResultRow {
    let ones = |p: f64| (p * tv.trials as f64).round() as usize;
    let e = AdvantageEstimate {
        p_world1: tv.p_a,
        p_world0: tv.p_b,
        advantage: tv.tv,
        ci_halfwidth: ci_halfwidth(ones(tv.p_a), ones(tv.p_b), tv.trials),
        trials: tv.trials,
        bound: Bound::Equivalence.value(),
        vacuous: false,
    };
    ResultRow::from_estimate(config, name, &e).timed(start)
}

/// Frequencies of the three bad events over `trials` runs of `Expt_j`.
pub fn bad_event_counts(
    adv: &dyn EmAdversary,
    n: usize,
    dist: KeyDistribution,
    j: usize,
    trials: usize,
    seed: u64,
) -> Result<[usize; 3]> {
    let game = EmGame::new(n, dist, EmMode::Expt { j, primed: false });
    (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let t = game.run(adv, &mut trial_rng(seed, "bad", i))?;
            Ok([
                t.bad.bad1 as usize,
                t.bad.bad2 as usize,
                t.bad.bad3 as usize,
            ])
        })
        .try_reduce(
            || [0; 3],
            |a, b| Ok([a[0] + b[0], a[1] + b[1], a[2] + b[2]]),
        )
}

/// `hybrid`: equivalence and bad-event rows for the hybrid chain, using the
/// two-stage probe adversary with `q_e` classical queries (default 2).
///
/// * `tv-expt`: TV between `Expt_j` and `H_j` (primed versions with
///   `--primed`). Two-key and one-key variants only.
/// * `tv-real` (at `j = 0`) and `tv-ideal` (at `j = q_E`): TV between the
///   unprimed end hybrids and the real or ideal world.
/// * `hybrid-step`, `adjacent-hybrid`: advantage between `H_j` and `H'_j`,
///   and between `H'_j` and `H_{j+1}`, with their bounds (for `j < q_E`).
/// * `bad1`, `bad2`, `bad3`: bad-event frequencies in `Expt_j` with their
///   caps.
///
/// TV rows report the distance in the `advantage` column with bound 0.
pub fn run_hybrid(config: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    check_width(config.n, MAX_WIDTH)?;
    check_trials(config)?;
    let n = config.n;
    let j = config.j;
    let q_e = config.q_e.first().copied().unwrap_or(2);
    let adv = TvProbe::new(q_e);
    let budget = adv.budget();
    let last = if config.primed {
        q_e.saturating_sub(1)
    } else {
        q_e
    };
    if j > last || (config.primed && q_e == 0) {
        return Err(config_error(format!(
            "j = {j} is outside the adversary's classical budget (q_E = {q_e})"
        )));
    }
    let (trials, seed) = (config.trials, config.seed);
    let forward = config.variant == Variant::ForwardOnly;
    let dist = config.variant.dist();
    let queries = |r: ResultRow| r.queries(budget.classical, budget.quantum);
    let mut rows = Vec::new();

    let tv = |a: EmMode, b: EmMode| em_modes_tv(&adv, n, dist, a, b, trials, seed);
    let ftv = |a: ForwardMode, b: ForwardMode| forward_modes_tv(&adv, n, a, b, trials, seed);
    let primed = config.primed;
    if !forward {
        let start = Instant::now();
        let t = tv(EmMode::Expt { j, primed }, EmMode::Hybrid { j, primed })?;
        rows.push(queries(tv_row(config, "tv-expt", &t, start)));
    }
    if !primed && j == 0 {
        let start = Instant::now();
        let t = if forward {
            ftv(
                ForwardMode::Hybrid {
                    j: 0,
                    primed: false,
                },
                ForwardMode::Real,
            )?
        } else {
            tv(
                EmMode::Hybrid {
                    j: 0,
                    primed: false,
                },
                EmMode::Real,
            )?
        };
        rows.push(queries(tv_row(config, "tv-real", &t, start)));
    }
    if !primed && j == q_e {
        let start = Instant::now();
        let t = if forward {
            ftv(ForwardMode::Hybrid { j, primed: false }, ForwardMode::Ideal)?
        } else {
            tv(EmMode::Hybrid { j, primed: false }, EmMode::Ideal)?
        };
        rows.push(queries(tv_row(config, "tv-ideal", &t, start)));
    }
    if j < q_e {
        let q_p = budget.quantum as f64;
        // the probe makes exactly one public query per stage
        let stage = 1.0;
        let pairs = if forward {
            [
                (
                    "hybrid-step",
                    GameSpec::ForwardModes {
                        n,
                        world1: ForwardMode::Hybrid { j, primed: false },
                        world0: ForwardMode::Hybrid { j, primed: true },
                    },
                    Bound::ForwardHybridStep { n, q_f: q_p },
                ),
                (
                    "adjacent-hybrid",
                    GameSpec::ForwardModes {
                        n,
                        world1: ForwardMode::Hybrid { j, primed: true },
                        world0: ForwardMode::Hybrid {
                            j: j + 1,
                            primed: false,
                        },
                    },
                    Bound::ForwardAdjacentHybrid {
                        n,
                        j,
                        q_f_stage: stage,
                    },
                ),
            ]
        } else {
            [
                (
                    "hybrid-step",
                    GameSpec::EmModes {
                        n,
                        dist,
                        world1: EmMode::Hybrid { j, primed: false },
                        world0: EmMode::Hybrid { j, primed: true },
                    },
                    Bound::HybridStep {
                        n,
                        q_e: q_e as f64,
                        q_p,
                    },
                ),
                (
                    "adjacent-hybrid",
                    GameSpec::EmModes {
                        n,
                        dist,
                        world1: EmMode::Hybrid { j, primed: true },
                        world0: EmMode::Hybrid {
                            j: j + 1,
                            primed: false,
                        },
                    },
                    Bound::AdjacentHybrid {
                        n,
                        j,
                        q_p_stage: stage,
                    },
                ),
            ]
        };
        for (name, game, bound) in pairs {
            let start = Instant::now();
            let e = estimate_fn(trials, seed, name, bound, |w, r| {
                Ok(game.run(&adv, w, r)?.guess)
            })?;
            rows.push(queries(
                ResultRow::from_estimate(config, name, &e).timed(start),
            ));
        }
    }
    if !forward {
        let start = Instant::now();
        let counts = bad_event_counts(&adv, n, dist, j, trials, seed)?;
        let caps = [
            Bound::PriorCollision { n, j },
            Bound::PriorCollision { n, j },
            Bound::LaterFind {
                n,
                q_e,
                j,
                q_p: budget.quantum as f64,
            },
        ];
        for (i, (&k, cap)) in counts.iter().zip(caps).enumerate() {
            let freq = k as f64 / trials as f64;
            let e = AdvantageEstimate {
                p_world1: freq,
                p_world0: 0.0,
                advantage: freq,
                ci_halfwidth: frequency_halfwidth(k, trials),
                trials,
                bound: cap.value(),
                vacuous: cap.vacuous(),
            };
            let name = format!("bad{}", i + 1);
            rows.push(queries(
                ResultRow::from_estimate(config, &name, &e).timed(start),
            ));
        }
    }
    Ok(rows)
}

/// Dispatches `config` to its runner. `selftest` is handled by
/// [`crate::acceptance`].
pub fn run(config: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    match config.experiment {
        Experiment::Attack => run_attack(config),
        Experiment::Lemma => run_lemma(config),
        Experiment::Hybrid => run_hybrid(config),
        Experiment::Sweep => run_sweep(config),
        Experiment::Selftest => Err(config_error("selftest produces no rows")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_matches_row_arity() {
        let config = ExperimentConfig::new(Experiment::Sweep, "zero", 4);
        let e = AdvantageEstimate::from_counts(1, 2, 10, Bound::Equivalence);
        let line = ResultRow::from_estimate(&config, "zero", &e).csv_line();
        assert_eq!(line.split(',').count(), CSV_HEADER.split(',').count());
        assert!(line.starts_with("sweep,zero,4,two-key,"));
    }

    #[test]
    fn oversized_n_is_a_config_error() {
        let mut config = ExperimentConfig::new(Experiment::Attack, "simon-q2", 40);
        config.trials = 10;
        let err = run(&config).unwrap_err();
        assert!(err.to_string().contains("n exceeds simulator cap"), "{err}");
    }

    #[test]
    fn empty_sweep_grid_is_rejected() {
        let config = ExperimentConfig::new(Experiment::Sweep, "slide", 6);
        assert!(run(&config).is_err());
    }

    #[test]
    fn unknown_names_are_rejected() {
        for e in [Experiment::Attack, Experiment::Lemma] {
            let config = ExperimentConfig::new(e, "nope", 6);
            assert!(run(&config).is_err());
        }
        assert!(strategy("nope", 6, None, None, 1).is_err());
    }

    #[test]
    fn sweep_rows_carry_budgets_and_bounds() {
        let mut config = ExperimentConfig::new(Experiment::Sweep, "slide", 8);
        config.q_e = vec![1, 2];
        config.q_p = vec![4];
        config.trials = 200;
        let rows = run(&config).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!((rows[1].q_e, rows[1].q_p), (2, 4));
        let want = Bound::EvenMansour {
            n: 8,
            q_e: 2.0,
            q_p: 4.0,
        };
        assert_eq!(rows[1].bound, want.value());
        assert_eq!(rows[1].vacuous, want.vacuous());
    }

    #[test]
    fn forward_only_sweep_uses_the_forward_bound() {
        let mut config = ExperimentConfig::new(Experiment::Sweep, "slide", 10);
        config.variant = Variant::ForwardOnly;
        config.q_e = vec![1];
        config.q_p = vec![2];
        config.trials = 100;
        let rows = run(&config).unwrap();
        let want = Bound::ForwardOnly {
            n: 10,
            q_e: 1.0,
            q_f: 2.0,
        };
        assert_eq!(rows[0].bound, want.value());
    }
}
