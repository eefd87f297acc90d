//! Closed-form advantage bounds.
//!
//! Every [`Bound`] has a raw value and a value clipped to `[0, 1]`. A bound
//! whose raw value reaches 1 is vacuous and says nothing.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    /// `10 · 2^{−n/2} (q_E √q_P + q_P √q_E)`.
    EvenMansour { n: usize, q_e: f64, q_p: f64 },
    /// `2^{−n/2} (2 q_E √q_F + 2 q_F √q_E)` for the forward-only variant.
    ForwardOnly { n: usize, q_e: f64, q_f: f64 },
    /// `1.5 √(q / 2^m)`.
    FunctionResampling { m: usize, q: f64 },
    /// `2 q √ε`.
    Reprogramming { q: f64, epsilon: f64 },
    /// `4 √(q / 2^n)`.
    PermutationResampling { n: usize, q: f64 },
    /// `2 q_{P,j+1} √(2 (j+1) / 2^n)`.
    AdjacentHybrid { n: usize, j: usize, q_p_stage: f64 },
    /// `8 √(q_P / 2^n) + 2 q_E 2^{−n}`.
    HybridStep { n: usize, q_e: f64, q_p: f64 },
    /// Forward-only adjacent hybrids: `2 q_{F,j+1} √((j+1) / 2^n)`.
    ForwardAdjacentHybrid { n: usize, j: usize, q_f_stage: f64 },
    /// Forward-only `H_j` versus `H'_j`: `1.5 √(q_F / 2^n)`.
    ForwardHybridStep { n: usize, q_f: f64 },
    /// `j / 2^n`, shared by the first two bad events.
    PriorCollision { n: usize, j: usize },
    /// `(q_E − j) / 2^n + 4 √(q_P / 2^n)`.
    LaterFind {
        n: usize,
        q_e: usize,
        j: usize,
        q_p: f64,
    },
    /// Two syntactically equivalent experiments: advantage exactly 0.
    Equivalence,
    /// No bound applies (e.g. distinguishers outside the query model).
    NotApplicable,
}

fn pow2(n: usize) -> f64 {
    (n as f64).exp2()
}

impl Bound {
    pub fn raw(&self) -> f64 {
        match *self {
            Self::EvenMansour { n, q_e, q_p } => {
                10.0 * pow2(n).sqrt().recip() * (q_e * q_p.sqrt() + q_p * q_e.sqrt())
            }
            Self::ForwardOnly { n, q_e, q_f } => {
                pow2(n).sqrt().recip() * (2.0 * q_e * q_f.sqrt() + 2.0 * q_f * q_e.sqrt())
            }
            Self::FunctionResampling { m, q } => 1.5 * (q / pow2(m)).sqrt(),
            Self::Reprogramming { q, epsilon } => 2.0 * q * epsilon.sqrt(),
            Self::PermutationResampling { n, q } => 4.0 * (q / pow2(n)).sqrt(),
            Self::AdjacentHybrid { n, j, q_p_stage } => {
                2.0 * q_p_stage * (2.0 * (j + 1) as f64 / pow2(n)).sqrt()
            }
            Self::HybridStep { n, q_e, q_p } => 8.0 * (q_p / pow2(n)).sqrt() + 2.0 * q_e / pow2(n),
            Self::ForwardAdjacentHybrid { n, j, q_f_stage } => {
                2.0 * q_f_stage * ((j + 1) as f64 / pow2(n)).sqrt()
            }
            Self::ForwardHybridStep { n, q_f } => 1.5 * (q_f / pow2(n)).sqrt(),
            Self::PriorCollision { n, j } => j as f64 / pow2(n),
            Self::LaterFind { n, q_e, j, q_p } => {
                q_e.saturating_sub(j) as f64 / pow2(n) + 4.0 * (q_p / pow2(n)).sqrt()
            }
            Self::Equivalence => 0.0,
            Self::NotApplicable => 1.0,
        }
    }

    pub fn value(&self) -> f64 {
        self.raw().clamp(0.0, 1.0)
    }

    pub fn vacuous(&self) -> bool {
        self.raw() >= 1.0
    }

    pub fn id(&self) -> &'static str {
        match self {
            Self::EvenMansour { .. } => "even-mansour",
            Self::ForwardOnly { .. } => "forward-only",
            Self::FunctionResampling { .. } => "resample-fn",
            Self::Reprogramming { .. } => "reprogram",
            Self::PermutationResampling { .. } => "resample-perm",
            Self::AdjacentHybrid { .. } => "adjacent-hybrid",
            Self::HybridStep { .. } => "hybrid-step",
            Self::ForwardAdjacentHybrid { .. } => "forward-adjacent-hybrid",
            Self::ForwardHybridStep { .. } => "forward-hybrid-step",
            Self::PriorCollision { .. } => "prior-collision",
            Self::LaterFind { .. } => "later-find",
            Self::Equivalence => "equivalence",
            Self::NotApplicable => "none",
        }
    }
}

/// Parameters for [`compute_bound`]; fields a formula does not use are
/// ignored.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BoundParams {
    pub n: usize,
    pub m: usize,
    pub q: f64,
    pub q_e: f64,
    pub q_p: f64,
    pub j: usize,
    pub epsilon: f64,
}

/// Looks a formula up by id and builds it from `p`.
pub fn bound_by_id(id: &str, p: &BoundParams) -> Result<Bound> {
    let nonneg = [p.q, p.q_e, p.q_p, p.epsilon];
    if nonneg.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "bound parameters must be finite and nonnegative: {p:?}"
        )));
    }
    Ok(match id {
        "even-mansour" => Bound::EvenMansour {
            n: p.n,
            q_e: p.q_e,
            q_p: p.q_p,
        },
        "forward-only" => Bound::ForwardOnly {
            n: p.n,
            q_e: p.q_e,
            q_f: p.q_p,
        },
        "resample-fn" => Bound::FunctionResampling { m: p.m, q: p.q },
        "reprogram" => Bound::Reprogramming {
            q: p.q,
            epsilon: p.epsilon,
        },
        "resample-perm" => Bound::PermutationResampling { n: p.n, q: p.q },
        "adjacent-hybrid" => Bound::AdjacentHybrid {
            n: p.n,
            j: p.j,
            q_p_stage: p.q_p,
        },
        "hybrid-step" => Bound::HybridStep {
            n: p.n,
            q_e: p.q_e,
            q_p: p.q_p,
        },
        "forward-adjacent-hybrid" => Bound::ForwardAdjacentHybrid {
            n: p.n,
            j: p.j,
            q_f_stage: p.q_p,
        },
        "forward-hybrid-step" => Bound::ForwardHybridStep { n: p.n, q_f: p.q_p },
        "prior-collision" => Bound::PriorCollision { n: p.n, j: p.j },
        "later-find" => Bound::LaterFind {
            n: p.n,
            q_e: p.q_e as usize,
            j: p.j,
            q_p: p.q_p,
        },
        "equivalence" => Bound::Equivalence,
        "none" => Bound::NotApplicable,
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown bound formula `{other}`"
            )))
        }
    })
}

/// Clipped value of the formula `id`.
pub fn compute_bound(id: &str, p: &BoundParams) -> Result<f64> {
    Ok(bound_by_id(id, p)?.value())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_public_queries_means_no_advantage() {
        let b = Bound::EvenMansour {
            n: 8,
            q_e: 50.0,
            q_p: 0.0,
        };
        assert_eq!(b.value(), 0.0);
        assert!(!b.vacuous());
    }

    #[test]
    fn permutation_resampling_arithmetic() {
        let b = Bound::PermutationResampling { n: 8, q: 4.0 };
        assert!((b.value() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn even_mansour_is_vacuous_at_tiny_n() {
        let b = Bound::EvenMansour {
            n: 8,
            q_e: 4.0,
            q_p: 16.0,
        };
        assert!((b.raw() - 30.0).abs() < 1e-12);
        assert_eq!(b.value(), 1.0);
        assert!(b.vacuous());
    }

    #[test]
    fn remaining_formulas() {
        let close = |a: f64, b: f64| (a - b).abs() < 1e-12;
        assert!(close(
            Bound::FunctionResampling { m: 8, q: 4.0 }.raw(),
            1.5 * 0.125
        ));
        assert!(close(
            Bound::Reprogramming {
                q: 3.0,
                epsilon: 1.0 / 64.0
            }
            .raw(),
            0.75
        ));
        assert!(close(
            Bound::AdjacentHybrid {
                n: 6,
                j: 1,
                q_p_stage: 2.0
            }
            .raw(),
            4.0 * (4.0f64 / 64.0).sqrt()
        ));
        assert!(close(
            Bound::HybridStep {
                n: 8,
                q_e: 4.0,
                q_p: 4.0
            }
            .raw(),
            8.0 / 8.0 + 8.0 / 256.0
        ));
        assert!(close(
            Bound::PriorCollision { n: 6, j: 4 }.raw(),
            4.0 / 64.0
        ));
        assert!(close(
            Bound::ForwardAdjacentHybrid {
                n: 6,
                j: 3,
                q_f_stage: 2.0
            }
            .raw(),
            4.0 * (4.0f64 / 64.0).sqrt()
        ));
        assert!(close(
            Bound::ForwardHybridStep { n: 8, q_f: 4.0 }.raw(),
            1.5 / 8.0
        ));
        assert!(close(
            Bound::LaterFind {
                n: 8,
                q_e: 5,
                j: 2,
                q_p: 1.0
            }
            .raw(),
            3.0 / 256.0 + 4.0 / 16.0
        ));
        assert!(close(
            Bound::ForwardOnly {
                n: 10,
                q_e: 4.0,
                q_f: 9.0
            }
            .raw(),
            (2.0 * 4.0 * 3.0 + 2.0 * 9.0 * 2.0) / 32.0
        ));
    }

    #[test]
    fn lookup_by_id() {
        let p = BoundParams {
            n: 8,
            q: 4.0,
            ..Default::default()
        };
        assert_eq!(compute_bound("resample-perm", &p).unwrap(), 0.5);
        assert!(compute_bound("nonsense", &p).is_err());
        let bad = BoundParams { q: -1.0, ..p };
        assert!(compute_bound("resample-perm", &bad).is_err());
    }
}
