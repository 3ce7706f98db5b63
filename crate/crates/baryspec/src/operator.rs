//! Sparse symmetric integer operators (Kirchhoff, Hodge blocks, Dirac).
//!
//! Coefficients stay integral; conversion to floating point happens only in
//! the spectral backends.

use nalgebra::DMatrix;
use num_bigint::BigUint;

/// What a [`SymOperator`] represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    Kirchhoff,
    /// Hodge block `L_k` acting on k-simplices.
    HodgeBlock(usize),
    Dirac,
    Shifted,
}

/// Symmetric matrix with integer coefficients, stored once per unordered
/// index pair (entries with `row <= col`).
#[derive(Debug, Clone)]
pub struct SymOperator {
    dim: usize,
    /// Upper-triangular triplets `(row, col, value)` with `row <= col`,
    /// sorted lexicographically, no duplicates, no explicit zeros.
    entries: Vec<(usize, usize, i64)>,
    kind: OperatorKind,
}

impl SymOperator {
    /// Build from arbitrary triplets; symmetric duplicates `(i,j)`/`(j,i)`
    /// must carry equal values and are collapsed to one entry.
    pub fn from_triplets(
        dim: usize,
        triplets: impl IntoIterator<Item = (usize, usize, i64)>,
        kind: OperatorKind,
    ) -> Self {
        let mut map = std::collections::BTreeMap::new();
        for (i, j, v) in triplets {
            assert!(i < dim && j < dim, "index out of range");
            let key = (i.min(j), i.max(j));
            let prev = map.insert(key, v);
            if let Some(p) = prev {
                assert_eq!(p, v, "conflicting values for symmetric pair {key:?}");
            }
        }
        let entries = map
            .into_iter()
            .filter(|&(_, v)| v != 0)
            .map(|((i, j), v)| (i, j, v))
            .collect();
        SymOperator { dim, entries, kind }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    /// Upper-triangular triplets `(row <= col)`.
    pub fn entries(&self) -> &[(usize, usize, i64)] {
        &self.entries
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for &(i, j, v) in &self.entries {
            m[(i, j)] = v as f64;
            m[(j, i)] = v as f64;
        }
        m
    }

    /// y = A x, exact over f64 for integer entries of moderate size.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim);
        let mut y = vec![0.0; self.dim];
        for &(i, j, v) in &self.entries {
            y[i] += v as f64 * x[j];
            if i != j {
                y[j] += v as f64 * x[i];
            }
        }
        y
    }

    /// Gershgorin upper bound on the spectral radius.
    pub fn gershgorin_bound(&self) -> f64 {
        let mut diag = vec![0i64; self.dim];
        let mut offsum = vec![0i64; self.dim];
        for &(i, j, v) in &self.entries {
            if i == j {
                diag[i] = v;
            } else {
                offsum[i] += v.abs();
                offsum[j] += v.abs();
            }
        }
        (0..self.dim)
            .map(|i| (diag[i] + offsum[i]) as f64)
            .fold(0.0, f64::max)
    }

    /// Row sums; zero for a Kirchhoff matrix.
    pub fn row_sums(&self) -> Vec<i64> {
        let mut s = vec![0i64; self.dim];
        for &(i, j, v) in &self.entries {
            s[i] += v;
            if i != j {
                s[j] += v;
            }
        }
        s
    }
}

/// Simplex counts `(f_0, ..., f_d)` of a complex, arbitrary precision: in
/// dimension 2 they overflow 64 bits after roughly 20 refinements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FVector(pub Vec<BigUint>);

impl FVector {
    pub fn from_counts(counts: &[usize]) -> Self {
        FVector(counts.iter().map(|&c| BigUint::from(c)).collect())
    }

    /// Maximal simplex dimension.
    pub fn dim(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn total(&self) -> BigUint {
        self.0.iter().sum()
    }
}

impl std::fmt::Display for FVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_collapse_symmetric_pairs() {
        let op = SymOperator::from_triplets(
            2,
            [(0, 1, -1), (1, 0, -1), (0, 0, 1), (1, 1, 1)],
            OperatorKind::Kirchhoff,
        );
        assert_eq!(op.entries(), &[(0, 0, 1), (0, 1, -1), (1, 1, 1)]);
        assert_eq!(op.row_sums(), vec![0, 0]);
    }

    #[test]
    fn matvec_matches_dense() {
        let op = SymOperator::from_triplets(
            3,
            [(0, 0, 2), (0, 1, -1), (1, 1, 2), (1, 2, -1), (2, 2, 2)],
            OperatorKind::Kirchhoff,
        );
        let x = [1.0, 2.0, 3.0];
        let y = op.matvec(&x);
        let d = op.to_dense() * nalgebra::DVector::from_row_slice(&x);
        for i in 0..3 {
            assert_eq!(y[i], d[i]);
        }
    }
}
