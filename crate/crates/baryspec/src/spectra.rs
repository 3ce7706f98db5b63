//! Numerical backends: dense symmetric eigensolver, Cholesky
//! log-determinants, LDLᵀ inertia counting for spectrum slicing, and the
//! eigenvalue–degree bound check.
//!
//! Indices are always carried as log-determinants; raw determinant products
//! overflow f64 beyond a few dozen vertices.

use crate::complex::SimplicialGraph;
use crate::error::{Error, Result};
use crate::operator::SymOperator;
use nalgebra::DMatrix;

pub const DEFAULT_DENSE_LIMIT: usize = 5000;
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Eigensolve,
    Cholesky,
    Inertia,
}

/// Sorted eigenvalue list with its provenance.
#[derive(Debug, Clone)]
pub struct SpectrumSummary {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub method: Method,
    pub tolerance: f64,
}

impl SpectrumSummary {
    /// Relative rank-detection threshold n·ε·λ_max.
    pub fn zero_tol(&self) -> f64 {
        let lmax = self.eigenvalues.last().copied().unwrap_or(0.0).abs();
        (self.eigenvalues.len() as f64) * f64::EPSILON * lmax.max(1.0)
    }

    pub fn n_zero(&self) -> usize {
        let tol = self.zero_tol();
        self.eigenvalues.iter().filter(|&&l| l.abs() <= tol).count()
    }

    /// Eigenvalues above the zero threshold.
    pub fn positive(&self) -> Vec<f64> {
        let tol = self.zero_tol();
        self.eigenvalues.iter().copied().filter(|&l| l > tol).collect()
    }

    pub fn count_below(&self, x: f64) -> usize {
        self.eigenvalues.partition_point(|&l| l < x)
    }

    pub fn min_positive(&self) -> Option<f64> {
        self.positive().first().copied()
    }
}

/// Eigenvector accumulation is skipped above this size; the residual spot
/// check then falls back to inertia cross-counts.
const VECTOR_LIMIT: usize = 1500;

/// Dense symmetric eigensolve (LAPACK dsyevd). Fails above `dense_limit` so
/// callers fall back to inertia slicing.
pub fn eig_sym(op: &SymOperator, tol: f64, dense_limit: usize) -> Result<SpectrumSummary> {
    let n = op.dim();
    if n > dense_limit {
        return Err(Error::DenseLimitExceeded {
            dim: n,
            limit: dense_limit,
        });
    }
    if n == 0 {
        return Ok(SpectrumSummary {
            eigenvalues: Vec::new(),
            method: Method::Eigensolve,
            tolerance: tol,
        });
    }
    let want_vectors = n <= VECTOR_LIMIT;
    let mut a = vec![0.0f64; n * n];
    for &(i, j, v) in op.entries() {
        a[i + j * n] = v as f64;
        a[j + i * n] = v as f64;
    }
    let eigenvalues = dsyevd(&mut a, n, want_vectors)?;

    let norm = op.gershgorin_bound().max(1.0);
    if want_vectors {
        // residual spot check ‖Av − λv‖ on sampled pairs
        for &i in [0, n / 2, n - 1].iter() {
            let v = &a[i * n..(i + 1) * n];
            let av = op.matvec(v);
            let lambda = eigenvalues[i];
            let resid: f64 = av
                .iter()
                .zip(v)
                .map(|(y, x)| (y - lambda * x).powi(2))
                .sum::<f64>()
                .sqrt();
            if resid > tol.max(1e-12) * norm * (n as f64).sqrt() {
                return Err(Error::Numerical(format!(
                    "eigensolve residual {resid:.3e} exceeds tolerance"
                )));
            }
        }
    } else {
        // independent sanity: inertia count at a midpoint shift
        let mid = 0.5 * (eigenvalues[0] + eigenvalues[n - 1]);
        let expected = eigenvalues.partition_point(|&l| l < mid);
        let counted = inertia_below(op, mid)?.below;
        if counted != expected {
            return Err(Error::Numerical(format!(
                "eigensolve disagrees with inertia count at shift {mid}: {expected} vs {counted}"
            )));
        }
    }
    Ok(SpectrumSummary {
        eigenvalues,
        method: Method::Eigensolve,
        tolerance: tol,
    })
}

/// dsyevd on a column-major buffer; returns ascending eigenvalues and, when
/// requested, leaves the eigenvectors in `a` (column k = k-th eigenvector).
fn dsyevd(a: &mut [f64], n: usize, want_vectors: bool) -> Result<Vec<f64>> {
    let jobz = if want_vectors { b'V' } else { b'N' };
    let ni = n as i32;
    let mut w = vec![0.0f64; n];
    let mut info = 0i32;
    let mut work_query = [0.0f64];
    let mut iwork_query = [0i32];
    unsafe {
        lapack::dsyevd(
            jobz,
            b'L',
            ni,
            a,
            ni,
            &mut w,
            &mut work_query,
            -1,
            &mut iwork_query,
            -1,
            &mut info,
        );
    }
    let lwork = work_query[0] as usize;
    let liwork = iwork_query[0] as usize;
    let mut work = vec![0.0f64; lwork.max(1)];
    let mut iwork = vec![0i32; liwork.max(1)];
    unsafe {
        lapack::dsyevd(
            jobz,
            b'L',
            ni,
            a,
            ni,
            &mut w,
            &mut work,
            lwork as i32,
            &mut iwork,
            liwork as i32,
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Numerical(format!("dsyevd failed with info={info}")));
    }
    Ok(w)
}

/// log det of an SPD matrix via Cholesky (LAPACK dpotrf).
pub fn cholesky_logdet(m: &DMatrix<f64>) -> Result<f64> {
    let n = m.nrows();
    if n == 0 {
        return Ok(0.0);
    }
    let mut a: Vec<f64> = m.as_slice().to_vec(); // nalgebra is column-major
    let mut info = 0i32;
    unsafe {
        lapack::dpotrf(b'L', n as i32, &mut a, n as i32, &mut info);
    }
    if info != 0 {
        return Err(Error::Numerical("matrix not positive definite".into()));
    }
    Ok((0..n).map(|i| a[i + i * n].ln()).sum::<f64>() * 2.0)
}

/// log of the pseudo-determinant of a Kirchhoff matrix, cofactor route:
/// per connected component, log(component size) plus the Cholesky
/// log-determinant of the matrix with one row/column deleted.
pub fn pseudo_det_log_cofactor(g: &SimplicialGraph) -> Result<f64> {
    let comp = g.components();
    let n_comp = comp.iter().max().map_or(0, |m| m + 1);
    let dense = g.kirchhoff().to_dense();
    let mut total = 0.0;
    for c in 0..n_comp {
        let members: Vec<usize> = (0..g.n_vertices()).filter(|&v| comp[v] == c).collect();
        if members.len() == 1 {
            // isolated vertex: Det of the 1×1 zero block is the empty
            // product 1, contributing log 1 = 0
            continue;
        }
        let keep = &members[..members.len() - 1];
        let minor = DMatrix::from_fn(keep.len(), keep.len(), |i, j| dense[(keep[i], keep[j])]);
        total += (members.len() as f64).ln() + cholesky_logdet(&minor)?;
    }
    Ok(total)
}

/// log of the pseudo-determinant by summing log λ over λ above the rank
/// threshold; cross-checks the kernel dimension against the component count.
pub fn pseudo_det_log_eigen(g: &SimplicialGraph, spectrum: &SpectrumSummary) -> Result<f64> {
    let n_zero = spectrum.n_zero();
    let n_comp = g.n_components();
    if n_zero != n_comp {
        return Err(Error::Numerical(format!(
            "kernel dimension {n_zero} disagrees with component count {n_comp}"
        )));
    }
    Ok(spectrum.positive().iter().map(|l| l.ln()).sum())
}

/// log det(I + K) via Cholesky; I + K is always SPD.
pub fn fredholm_logdet(op: &SymOperator) -> Result<f64> {
    let mut m = op.to_dense();
    for i in 0..op.dim() {
        m[(i, i)] += 1.0;
    }
    cholesky_logdet(&m)
}

/// Result of an inertia (spectrum slicing) query.
#[derive(Debug, Clone, Copy)]
pub struct InertiaCount {
    /// Eigenvalues strictly below the shift actually used.
    pub below: usize,
    pub shift_used: f64,
    /// True when the requested shift hit a zero pivot and was perturbed.
    pub perturbed: bool,
}

/// Count eigenvalues of `op` below `x` from the signs of the LDLᵀ pivots of
/// op − xI with Bunch–Kaufman 1×1/2×2 pivoting. Exact zero pivots trigger a
/// retry at a slightly perturbed shift.
pub fn inertia_below(op: &SymOperator, x: f64) -> Result<InertiaCount> {
    let mut shift = x;
    for attempt in 0..4 {
        let mut m = op.to_dense();
        for i in 0..op.dim() {
            m[(i, i)] -= shift;
        }
        match ldlt_inertia(&mut m) {
            Some((neg, _pos, zero)) if zero == 0 => {
                return Ok(InertiaCount {
                    below: neg,
                    shift_used: shift,
                    perturbed: attempt > 0,
                })
            }
            _ => {
                let eps = f64::EPSILON * op.gershgorin_bound().max(1.0);
                shift = shift + eps * 64.0 * (1u64 << (4 * attempt)) as f64;
            }
        }
    }
    Err(Error::Numerical(format!(
        "inertia factorization kept breaking down near shift {x}"
    )))
}

/// Bunch–Kaufman LDLᵀ with partial pivoting on a full symmetric matrix;
/// returns the inertia (negative, positive, zero) of the factor D, or None
/// when the remaining matrix vanishes in an ambiguous way is never — a fully
/// zero trailing block is counted as zero eigenvalues.
fn ldlt_inertia(a: &mut DMatrix<f64>) -> Option<(usize, usize, usize)> {
    let n = a.nrows();
    let alpha = (1.0 + 17.0f64.sqrt()) / 8.0;
    let (mut neg, mut pos, mut zero) = (0usize, 0usize, 0usize);
    let mut k = 0;
    while k < n {
        let absakk = a[(k, k)].abs();
        let mut colmax = 0.0;
        let mut r = k;
        for i in k + 1..n {
            let v = a[(i, k)].abs();
            if v > colmax {
                colmax = v;
                r = i;
            }
        }
        if absakk.max(colmax) == 0.0 {
            zero += 1;
            k += 1;
            continue;
        }
        let use_2x2;
        if absakk >= alpha * colmax {
            use_2x2 = false;
        } else {
            let mut rowmax = 0.0f64;
            for j in k..n {
                if j != r {
                    rowmax = rowmax.max(a[(r, j)].abs());
                }
            }
            if absakk * rowmax >= alpha * colmax * colmax {
                use_2x2 = false;
            } else if a[(r, r)].abs() >= alpha * rowmax {
                swap_sym(a, k, r);
                use_2x2 = false;
            } else {
                swap_sym(a, k + 1, r);
                use_2x2 = true;
            }
        }
        if !use_2x2 {
            let d = a[(k, k)];
            if d == 0.0 {
                return None; // pivot breakdown, retry with perturbed shift
            }
            if d > 0.0 {
                pos += 1;
            } else {
                neg += 1;
            }
            for i in k + 1..n {
                let l = a[(i, k)] / d;
                for j in k + 1..=i {
                    let upd = a[(i, j)] - l * a[(j, k)];
                    a[(i, j)] = upd;
                    a[(j, i)] = upd;
                }
            }
            k += 1;
        } else {
            let d11 = a[(k, k)];
            let d21 = a[(k + 1, k)];
            let d22 = a[(k + 1, k + 1)];
            let det = d11 * d22 - d21 * d21;
            if det == 0.0 {
                return None;
            }
            if det < 0.0 {
                neg += 1;
                pos += 1;
            } else if d11 + d22 < 0.0 {
                neg += 2;
            } else {
                pos += 2;
            }
            for i in k + 2..n {
                let b1 = a[(i, k)];
                let b2 = a[(i, k + 1)];
                let l1 = (b1 * d22 - b2 * d21) / det;
                let l2 = (b2 * d11 - b1 * d21) / det;
                for j in k + 2..=i {
                    let upd = a[(i, j)] - l1 * a[(j, k)] - l2 * a[(j, k + 1)];
                    a[(i, j)] = upd;
                    a[(j, i)] = upd;
                }
            }
            k += 2;
        }
    }
    Some((neg, pos, zero))
}

fn swap_sym(a: &mut DMatrix<f64>, i: usize, j: usize) {
    if i == j {
        return;
    }
    a.swap_rows(i, j);
    a.swap_columns(i, j);
}

/// Smallest x (to `tol`) with at least `k+1` eigenvalues below it, i.e. the
/// k-th eigenvalue (0-based) by inertia bisection.
pub fn kth_eigenvalue_by_bisection(op: &SymOperator, k: usize, tol: f64) -> Result<f64> {
    let mut lo = -op.gershgorin_bound() - 1.0;
    let mut hi = op.gershgorin_bound() + 1.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if inertia_below(op, mid)?.below >= k + 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Report of the λ_k ≤ 2·d_k check (both sequences sorted ascending).
#[derive(Debug, Clone)]
pub struct DegreeBoundReport {
    pub max_ratio: f64,
    pub violations: usize,
}

pub fn degree_bound_check(g: &SimplicialGraph, spectrum: &SpectrumSummary) -> DegreeBoundReport {
    let mut degrees = g.degrees();
    degrees.sort_unstable();
    let mut max_ratio = 0.0f64;
    let mut violations = 0;
    let tol = spectrum.zero_tol();
    for (l, &d) in spectrum.eigenvalues.iter().zip(&degrees) {
        if d == 0 {
            if *l > tol {
                violations += 1;
            }
            continue;
        }
        max_ratio = max_ratio.max(l / d as f64);
        if *l > 2.0 * d as f64 + tol {
            violations += 1;
        }
    }
    DegreeBoundReport {
        max_ratio,
        violations,
    }
}
