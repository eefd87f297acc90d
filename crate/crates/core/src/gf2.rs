//! Dense GF(2) matrices with rows packed into `u64`, bit `i` of a row being
//! column `i`.

use crate::error::{Error, Result};

/// Maximum number of rows a matrix may hold.
pub const MAX_ROWS: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GF2Matrix {
    n: usize,
    rows: Vec<u64>,
}

impl GF2Matrix {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::WidthOutOfRange(n));
        }
        Ok(Self {
            n,
            rows: Vec::new(),
        })
    }

    pub fn from_rows(n: usize, rows: &[u64]) -> Result<Self> {
        let mut m = Self::new(n)?;
        for &r in rows {
            m.push(r)?;
        }
        Ok(m)
    }

    pub fn push(&mut self, row: u64) -> Result<()> {
        if self.n < 64 && row >> self.n != 0 {
            return Err(Error::TableEntryTooWide {
                value: row,
                width: self.n,
            });
        }
        if self.rows.len() >= MAX_ROWS {
            return Err(Error::InvalidParameter(format!(
                "GF(2) matrix row cap {MAX_ROWS} reached"
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    /// `M v` as a packed vector of row parities.
    pub fn mul_vec(&self, v: u64) -> Vec<bool> {
        self.rows
            .iter()
            .map(|&r| (r & v).count_ones() % 2 == 1)
            .collect()
    }

    /// Reduced row echelon basis and the pivot column of each row.
    fn echelon(&self) -> (Vec<u64>, Vec<usize>) {
        let mut basis: Vec<u64> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        for &row in &self.rows {
            let mut r = row;
            for (b, &p) in basis.iter().zip(&pivots) {
                if r >> p & 1 == 1 {
                    r ^= b;
                }
            }
            if r == 0 {
                continue;
            }
            let p = r.trailing_zeros() as usize;
            for b in basis.iter_mut() {
                if *b >> p & 1 == 1 {
                    *b ^= r;
                }
            }
            basis.push(r);
            pivots.push(p);
        }
        (basis, pivots)
    }

    pub fn rank(&self) -> usize {
        self.echelon().0.len()
    }

    /// A basis of `{v : M v = 0}`, of size `n − rank`.
    pub fn nullspace(&self) -> Vec<u64> {
        let (basis, pivots) = self.echelon();
        let mut out = Vec::with_capacity(self.n - basis.len());
        for free in (0..self.n).filter(|c| !pivots.contains(c)) {
            let mut v = 1u64 << free;
            for (b, &p) in basis.iter().zip(&pivots) {
                if b >> free & 1 == 1 {
                    v |= 1 << p;
                }
            }
            out.push(v);
        }
        out
    }
}

/// Every element of the span of `basis` (so `2^{len}` values, 0 included).
pub fn span(basis: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64];
    for &b in basis {
        let extra: Vec<u64> = out.iter().map(|v| v ^ b).collect();
        out.extend(extra);
    }
    out
}

pub fn gf2_nullspace(m: &GF2Matrix) -> Vec<u64> {
    m.nullspace()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_trivial_nullspace() {
        let m = GF2Matrix::from_rows(5, &[1, 2, 4, 8, 16]).unwrap();
        assert_eq!(m.rank(), 5);
        assert!(m.nullspace().is_empty());
    }

    #[test]
    fn empty_matrix_nullspace_is_everything() {
        let m = GF2Matrix::new(6).unwrap();
        let ns = m.nullspace();
        assert_eq!(ns.len(), 6);
        assert_eq!(GF2Matrix::from_rows(6, &ns).unwrap().rank(), 6);
    }

    #[test]
    fn two_parities_in_four_bits() {
        let m = GF2Matrix::from_rows(4, &[0b0011, 0b0101]).unwrap();
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        let brute: Vec<u64> = (0..16u64)
            .filter(|&v| m.mul_vec(v).iter().all(|b| !b))
            .collect();
        let mut spanned = span(&ns);
        spanned.sort();
        assert_eq!(spanned, brute);
    }

    #[test]
    fn dependent_rows_do_not_add_rank() {
        let m = GF2Matrix::from_rows(3, &[0b011, 0b110, 0b101, 0]).unwrap();
        assert_eq!(m.rank(), 2);
        assert_eq!(m.nullspace(), vec![0b111]);
    }

    #[test]
    fn full_width_rows() {
        let mut m = GF2Matrix::new(64).unwrap();
        m.push(u64::MAX).unwrap();
        assert_eq!(m.rank(), 1);
        assert_eq!(m.nullspace().len(), 63);
    }

    #[test]
    fn rejects_wide_rows() {
        let mut m = GF2Matrix::new(3).unwrap();
        assert!(m.push(8).is_err());
    }
}
