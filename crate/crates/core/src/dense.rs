//! Small dense operators and the gentle-measurement inequality.
//!
//! For a state `ψ` and projectors `P_1, …, P_q` with `ε_i ≥ ‖(1 − P_i)ψ‖²`,
//! the checked inequality is
//!
//! ```text
//! 1 − |⟨ψ| P_q ⋯ P_1 |ψ⟩|²  ≤  Σ ε_i
//! ```
//!
//! Both sides are computed by direct matrix arithmetic.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Largest supported operator dimension.
pub const MAX_DIM: usize = 64;

/// Tolerance for `M² = M = M†` and for the inequality itself.
pub const PROJECTOR_TOLERANCE: f64 = 1e-9;

/// Square complex matrix of dimension at most [`MAX_DIM`].
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    matrix: DMatrix<Complex64>,
}

impl DenseOperator {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                got: matrix.ncols(),
            });
        }
        if matrix.nrows() == 0 || matrix.nrows() > MAX_DIM {
            return Err(Error::DimensionMismatch {
                expected: MAX_DIM,
                got: matrix.nrows(),
            });
        }
        Ok(Self { matrix })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::new(DMatrix::identity(dim, dim))
    }

    /// Orthogonal projector onto the span of `vectors`.
    pub fn projector_onto(dim: usize, vectors: &[DVector<Complex64>]) -> Result<Self> {
        let mut basis: Vec<DVector<Complex64>> = Vec::new();
        for v in vectors {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: v.len(),
                });
            }
            // modified Gram-Schmidt
            let mut w = v.clone();
            for b in &basis {
                let overlap = b.dotc(&w);
                w -= b * overlap;
            }
            let norm = w.norm();
            if norm > 1e-10 {
                basis.push(w / Complex64::new(norm, 0.0));
            }
        }
        let mut m = DMatrix::zeros(dim, dim);
        for b in &basis {
            m += b * b.adjoint();
        }
        Self::new(m)
    }

    /// Projector onto a uniformly random `rank`-dimensional subspace.
    pub fn random_projector<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> Result<Self> {
        let vectors: Vec<_> = (0..rank).map(|_| random_vector(dim, rng)).collect();
        Self::projector_onto(dim, &vectors)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// `max(‖M² − M‖_max, ‖M − M†‖_max)`.
    pub fn projector_deviation(&self) -> f64 {
        let sq = &self.matrix * &self.matrix;
        let idem = (&sq - &self.matrix)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        let herm = (&self.matrix - self.matrix.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        idem.max(herm)
    }
}

/// Standard complex Gaussian vector, normalized.
pub fn random_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DVector<Complex64> {
    let v = DVector::from_fn(dim, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let n = v.norm();
    v / Complex64::new(n, 0.0)
}

/// Both sides of the gentle-measurement inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GentleCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// `‖(1 − P)ψ‖²` for each projector.
pub fn disturbances(psi: &DVector<Complex64>, projectors: &[DenseOperator]) -> Vec<f64> {
    projectors
        .iter()
        .map(|p| (psi - p.matrix() * psi).norm_squared())
        .collect()
}

/// Evaluates `1 − |⟨ψ|P_q⋯P_1|ψ⟩|²` against `Σ ε_i`.
///
/// `epsilons`, when given, must upper-bound the actual disturbances; when
/// `None` the tight values `‖(1 − P_i)ψ‖²` are used.
pub fn gentle_measurement_check(
    psi: &DVector<Complex64>,
    projectors: &[DenseOperator],
    epsilons: Option<&[f64]>,
) -> Result<GentleCheck> {
    let norm = psi.norm_squared();
    if (norm - 1.0).abs() > PROJECTOR_TOLERANCE {
        return Err(Error::NotNormalized(norm));
    }
    for p in projectors {
        if p.dim() != psi.len() {
            return Err(Error::DimensionMismatch {
                expected: psi.len(),
                got: p.dim(),
            });
        }
        let dev = p.projector_deviation();
        if dev > PROJECTOR_TOLERANCE {
            return Err(Error::NotProjector(dev));
        }
    }
    let actual = disturbances(psi, projectors);
    let rhs = match epsilons {
        Some(eps) => {
            if eps.len() != projectors.len() {
                return Err(Error::DimensionMismatch {
                    expected: projectors.len(),
                    got: eps.len(),
                });
            }
            for (index, (&given, &act)) in eps.iter().zip(&actual).enumerate() {
                if given + PROJECTOR_TOLERANCE < act {
                    return Err(Error::EpsilonTooSmall {
                        index,
                        given,
                        actual: act,
                    });
                }
            }
            eps.iter().sum()
        }
        None => actual.iter().sum(),
    };
    let mut v = psi.clone();
    for p in projectors {
        v = p.matrix() * v;
    }
    let overlap = psi.dotc(&v);
    let lhs = 1.0 - overlap.norm_sqr();
    Ok(GentleCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + PROJECTOR_TOLERANCE,
    })
}

/// One random instance: dimension in `2..=max_dim`, one to five projectors of
/// uniformly random rank, Haar-random state.
pub fn random_gentle_instance<R: Rng + ?Sized>(
    max_dim: usize,
    rng: &mut R,
) -> Result<(DVector<Complex64>, Vec<DenseOperator>)> {
    let dim = rng.random_range(2..=max_dim.clamp(2, MAX_DIM));
    let count = rng.random_range(1..=5);
    let psi = random_vector(dim, rng);
    let projectors = (0..count)
        .map(|_| {
            let rank = rng.random_range(1..=dim);
            DenseOperator::random_projector(dim, rank, rng)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((psi, projectors))
}
