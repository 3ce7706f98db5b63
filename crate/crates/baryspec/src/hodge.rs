//! Boundary matrices, Hodge Laplacian blocks and the Dirac operator of a
//! clique complex.
//!
//! Orientation is fixed by the sorted vertex order of each simplex: the
//! incidence sign of the face omitting the i-th vertex is (−1)^i, which makes
//! the chain property d∘d = 0 automatic.

use crate::complex::SimplicialGraph;
use crate::operator::{OperatorKind, SymOperator};
use std::collections::BTreeMap;

/// Signed incidence matrix from k-simplices to their (k−1)-faces, as
/// triplets `(face_row, simplex_col, sign)`. Shape `f_{k-1} × f_k`.
#[derive(Debug, Clone)]
pub struct BoundaryMatrix {
    pub rows: usize,
    pub cols: usize,
    pub triplets: Vec<(usize, usize, i64)>,
}

impl BoundaryMatrix {
    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let mut m = nalgebra::DMatrix::zeros(self.rows, self.cols);
        for &(i, j, v) in &self.triplets {
            m[(i, j)] = v as f64;
        }
        m
    }
}

/// Boundary matrices B_1, ..., B_d (B_k maps k-chains to (k−1)-chains).
pub fn boundary_matrices(g: &SimplicialGraph) -> Vec<BoundaryMatrix> {
    let mut out = Vec::new();
    for k in 1..=g.dim() {
        let faces = g.simplices(k - 1);
        let simps = g.simplices(k);
        let mut triplets = Vec::with_capacity(simps.len() * (k + 1));
        for (col, s) in simps.iter().enumerate() {
            for omit in 0..s.len() {
                let mut face = s.clone();
                face.remove(omit);
                let row = faces
                    .binary_search(&face)
                    .expect("face of a listed simplex must be listed");
                let sign = if omit % 2 == 0 { 1 } else { -1 };
                triplets.push((row, col, sign));
            }
        }
        out.push(BoundaryMatrix {
            rows: faces.len(),
            cols: simps.len(),
            triplets,
        });
    }
    out
}

/// Hodge blocks L_0, ..., L_d with L_k = B_kᵀ B_k + B_{k+1} B_{k+1}ᵀ.
/// L_0 equals the Kirchhoff matrix.
pub fn hodge_blocks(g: &SimplicialGraph) -> Vec<SymOperator> {
    let boundaries = boundary_matrices(g);
    let f = g.f_counts();
    let mut blocks = Vec::with_capacity(f.len());
    for k in 0..f.len() {
        let mut acc: BTreeMap<(usize, usize), i64> = BTreeMap::new();
        // down part: B_kᵀ B_k (entry (a,b) = Σ_row B[row,a] B[row,b])
        if k >= 1 {
            let b = &boundaries[k - 1];
            let mut by_row: Vec<Vec<(usize, i64)>> = vec![Vec::new(); b.rows];
            for &(i, j, v) in &b.triplets {
                by_row[i].push((j, v));
            }
            for row in &by_row {
                for &(a, va) in row {
                    for &(bcol, vb) in row {
                        if a <= bcol {
                            *acc.entry((a, bcol)).or_insert(0) += va * vb;
                        }
                    }
                }
            }
        }
        // up part: B_{k+1} B_{k+1}ᵀ (entry (a,b) = Σ_col B[a,col] B[b,col])
        if k + 1 <= boundaries.len() {
            let b = &boundaries[k];
            let mut by_col: Vec<Vec<(usize, i64)>> = vec![Vec::new(); b.cols];
            for &(i, j, v) in &b.triplets {
                by_col[j].push((i, v));
            }
            for col in &by_col {
                for &(a, va) in col {
                    for &(brow, vb) in col {
                        if a <= brow {
                            *acc.entry((a, brow)).or_insert(0) += va * vb;
                        }
                    }
                }
            }
        }
        blocks.push(SymOperator::from_triplets(
            f[k],
            acc.into_iter().map(|((i, j), v)| (i, j, v)),
            OperatorKind::HodgeBlock(k),
        ));
    }
    blocks
}

/// Dirac operator D = d + d* on all simplices, ordered by dimension then
/// lexicographically. D² is block diagonal with the Hodge blocks.
pub fn dirac_operator(g: &SimplicialGraph) -> SymOperator {
    let f = g.f_counts();
    let offsets: Vec<usize> = f
        .iter()
        .scan(0usize, |acc, &c| {
            let o = *acc;
            *acc += c;
            Some(o)
        })
        .collect();
    let total: usize = f.iter().sum();
    let mut triplets = Vec::new();
    for (k, b) in boundary_matrices(g).iter().enumerate() {
        // b maps (k+1)-simplices to k-faces: couples blocks k and k+1
        for &(i, j, v) in &b.triplets {
            triplets.push((offsets[k] + i, offsets[k + 1] + j, v));
        }
    }
    SymOperator::from_triplets(total, triplets, OperatorKind::Dirac)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{family, Family};

    #[test]
    fn chain_property_dd_zero() {
        for g in [
            family(&Family::Complete, 4).unwrap(),
            family(&Family::Complete, 5).unwrap(),
            family(&Family::Cycle, 6).unwrap(),
        ] {
            let bs = boundary_matrices(&g);
            for w in bs.windows(2) {
                let prod = w[0].to_dense() * w[1].to_dense();
                assert!(prod.iter().all(|&x| x == 0.0), "d∘d != 0");
            }
        }
    }

    #[test]
    fn l0_equals_kirchhoff() {
        for g in [
            family(&Family::Complete, 4).unwrap(),
            family(&Family::Cycle, 5).unwrap(),
            family(&Family::Star, 6).unwrap(),
        ] {
            let l0 = hodge_blocks(&g)[0].to_dense();
            assert_eq!(l0, g.kirchhoff().to_dense());
        }
    }

    #[test]
    fn dirac_squares_to_hodge() {
        let g = family(&Family::Complete, 3).unwrap();
        let d = dirac_operator(&g).to_dense();
        let d2 = &d * &d;
        let blocks = hodge_blocks(&g);
        let offsets = [0usize, 3, 6];
        for (k, b) in blocks.iter().enumerate() {
            let dense = b.to_dense();
            for i in 0..b.dim() {
                for j in 0..b.dim() {
                    assert_eq!(d2[(offsets[k] + i, offsets[k] + j)], dense[(i, j)]);
                }
            }
        }
        // off-diagonal blocks of D² vanish
        let mut sum_off = 0.0;
        for i in 0..7 {
            for j in 0..7 {
                let bi = if i < 3 { 0 } else if i < 6 { 1 } else { 2 };
                let bj = if j < 3 { 0 } else if j < 6 { 1 } else { 2 };
                if bi != bj {
                    sum_off += d2[(i, j)].abs();
                }
            }
        }
        assert_eq!(sum_off, 0.0);
    }
}
