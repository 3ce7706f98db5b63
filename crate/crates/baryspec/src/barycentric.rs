//! Barycentric refinement: vertices of the refined graph are the simplices
//! of the old one, joined when one strictly contains the other. The refined
//! clique complex is materialized directly from the face lattice (its
//! simplices are exactly the strict containment chains), so no clique search
//! is needed.

use crate::complex::SimplicialGraph;
use crate::error::{Error, Result};
use crate::operator::FVector;
use num_bigint::BigUint;
use num_traits::{One, Zero};

/// One Barycentric refinement step.
///
/// Generation bookkeeping: the vertex standing for an old 0-dimensional
/// simplex inherits `generation + 1`; vertices born from positive-dimensional
/// simplices start at generation 0.
pub fn refine(g: &SimplicialGraph) -> SimplicialGraph {
    // global index of each old simplex: dimension groups in order, lex inside
    let groups = g.all_simplices();
    let mut offset = vec![0usize; groups.len()];
    let mut total = 0usize;
    for (k, grp) in groups.iter().enumerate() {
        offset[k] = total;
        total += grp.len();
    }
    let index_of = |verts: &[usize]| -> usize {
        let k = verts.len() - 1;
        offset[k] + groups[k].binary_search_by(|s| s.as_slice().cmp(verts)).unwrap()
    };

    // strict sub-simplices of each simplex (all proper nonempty subsets)
    let mut subs: Vec<Vec<usize>> = vec![Vec::new(); total];
    let mut edges = Vec::new();
    for grp in groups.iter().skip(1) {
        for s in grp {
            let t_idx = index_of(s);
            let m = s.len();
            for mask in 1u32..((1 << m) - 1) {
                let face: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).map(|i| s[i]).collect();
                let s_idx = index_of(&face);
                subs[t_idx].push(s_idx);
                edges.push((s_idx, t_idx));
            }
        }
    }
    for s in &mut subs {
        s.sort_unstable();
    }
    edges.sort_unstable();

    // chains of strict containment, grouped by length; chains_at[i] lists
    // the chains whose maximal element is simplex i
    let mut chains_at: Vec<Vec<Vec<usize>>> = vec![Vec::new(); total];
    for i in 0..total {
        let mut mine = vec![vec![i]];
        for &j in &subs[i] {
            // j < i always holds (lower dimension comes first), so
            // chains_at[j] is complete by now
            for c in &chains_at[j] {
                let mut ext = c.clone();
                ext.push(i);
                mine.push(ext);
            }
        }
        chains_at[i] = mine;
    }
    let max_len = groups.len();
    let mut simplices: Vec<Vec<Vec<usize>>> = vec![Vec::new(); max_len];
    for cs in chains_at {
        for c in cs {
            simplices[c.len() - 1].push(c);
        }
    }
    for grp in &mut simplices {
        grp.sort();
    }
    while simplices.last().is_some_and(|s| s.is_empty()) && simplices.len() > 1 {
        simplices.pop();
    }

    let mut generation = vec![0u32; total];
    for (old_v, s) in groups[0].iter().enumerate() {
        generation[index_of(s)] = g.generation()[old_v] + 1;
        debug_assert_eq!(s, &vec![old_v]);
    }

    SimplicialGraph::from_parts(total, edges, simplices, generation, None)
}

/// Iterated refinement, returning `[g, refine(g), ..., refine^steps(g)]`.
pub fn refinement_sequence(g: &SimplicialGraph, steps: usize) -> Vec<SimplicialGraph> {
    let mut seq = Vec::with_capacity(steps + 1);
    seq.push(g.clone());
    for _ in 0..steps {
        let next = refine(seq.last().unwrap());
        seq.push(next);
    }
    seq
}

/// The f-vector refinement operator A with A[i][j] = i!·S(j,i) over simplex
/// cardinalities i, j = 1..d+1 (S = Stirling numbers of the second kind);
/// f(refine(g)) = A·f(g).
#[derive(Debug, Clone)]
pub struct RefinementOperator {
    pub d: usize,
    /// Row-major (d+1)×(d+1), `matrix[i][j]` with 0-based dimension indices.
    pub matrix: Vec<Vec<BigUint>>,
}

/// Stirling numbers of the second kind S(n, k).
pub fn stirling2(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    if n == 0 {
        return BigUint::one(); // S(0,0)
    }
    let mut prev = vec![BigUint::zero(); n + 1];
    prev[0] = BigUint::one();
    for row in 1..=n {
        let mut cur = vec![BigUint::zero(); n + 1];
        for j in 1..=row {
            cur[j] = BigUint::from(j) * &prev[j] + &prev[j - 1];
        }
        prev = cur;
    }
    prev[k].clone()
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

pub fn refinement_operator(d: usize) -> RefinementOperator {
    let m = d + 1;
    let mut matrix = vec![vec![BigUint::zero(); m]; m];
    for i in 1..=m {
        for j in i..=m {
            matrix[i - 1][j - 1] = factorial(i) * stirling2(j, i);
        }
    }
    RefinementOperator { d, matrix }
}

impl RefinementOperator {
    pub fn apply(&self, f: &FVector) -> FVector {
        assert_eq!(f.0.len(), self.d + 1, "f-vector dimension mismatch");
        let out = self
            .matrix
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&f.0)
                    .map(|(a, x)| a * x)
                    .sum::<BigUint>()
            })
            .collect();
        FVector(out)
    }

    /// Predicted f-vector after `steps` refinements.
    pub fn iterate(&self, f: &FVector, steps: usize) -> FVector {
        let mut cur = f.clone();
        for _ in 0..steps {
            cur = self.apply(&cur);
        }
        cur
    }
}

/// Perron-Frobenius data of the refinement operator: the probability
/// eigenvector for the top eigenvalue (d+1)!, obtained by exact
/// back-substitution on the upper-triangular matrix.
pub fn perron_vector(op: &RefinementOperator) -> (Vec<f64>, f64) {
    let m = op.d + 1;
    let a: Vec<Vec<f64>> = op
        .matrix
        .iter()
        .map(|row| row.iter().map(big_to_f64).collect())
        .collect();
    let lambda = big_to_f64(&factorial(m));
    let mut v = vec![0.0; m];
    v[m - 1] = 1.0;
    for i in (0..m - 1).rev() {
        let s: f64 = (i + 1..m).map(|j| a[i][j] * v[j]).sum();
        v[i] = s / (lambda - a[i][i]);
    }
    let total: f64 = v.iter().sum();
    for x in &mut v {
        *x /= total;
    }
    (v, lambda)
}

fn big_to_f64(b: &BigUint) -> f64 {
    use num_traits::ToPrimitive;
    b.to_f64().expect("refinement operator entry out of f64 range")
}

/// Histogram of vertex generations of the last graph in a refinement
/// sequence, validated against the f_0 linkage identities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerationHistogram {
    /// `counts[k]` = number of vertices of generation k.
    pub counts: Vec<usize>,
}

pub fn generation_histogram(sequence: &[SimplicialGraph]) -> Result<GenerationHistogram> {
    let last = sequence
        .last()
        .ok_or_else(|| Error::InvalidGraph("empty refinement sequence".into()))?;
    for w in sequence.windows(2) {
        if w[1].n_vertices() != w[0].n_simplices() {
            return Err(Error::InvalidGraph(
                "sequence not refinement-linked: f_0 of the successor must equal the \
                 simplex count of the predecessor"
                    .into(),
            ));
        }
    }
    let n_steps = sequence.len() - 1;
    let max_gen = *last.generation().iter().max().unwrap_or(&0) as usize;
    let mut counts = vec![0usize; max_gen + 1];
    for &g in last.generation() {
        counts[g as usize] += 1;
    }
    // count(gen >= k) = f_0(G_{n-k})
    for k in 1..=n_steps {
        let tail: usize = counts.iter().skip(k).sum();
        let expected = sequence[n_steps - k].n_vertices();
        if tail != expected {
            return Err(Error::InvalidGraph(format!(
                "generation bookkeeping broken: {tail} vertices of generation >= {k}, \
                 expected f_0(G_{}) = {expected}",
                n_steps - k
            )));
        }
    }
    Ok(GenerationHistogram { counts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{family, Family};

    fn k3() -> SimplicialGraph {
        family(&Family::Complete, 3).unwrap()
    }

    #[test]
    fn refine_edge_gives_path() {
        let g = family(&Family::Complete, 2).unwrap();
        let r = refine(&g);
        assert_eq!(r.n_vertices(), 3);
        assert_eq!(r.f_counts(), vec![3, 2]);
        let mut degs = r.degrees();
        degs.sort_unstable();
        assert_eq!(degs, vec![1, 1, 2]);
    }

    #[test]
    fn refine_triangle() {
        let r = refine(&k3());
        assert_eq!(r.f_counts(), vec![7, 12, 6]);
        r.verify_complex(200, 0).unwrap();
        // same complex from scratch by clique search
        let rebuilt =
            SimplicialGraph::build_complex(r.n_vertices(), r.edges(), None).unwrap();
        assert_eq!(rebuilt.all_simplices(), r.all_simplices());
    }

    #[test]
    fn operator_d2_matches_known_matrix() {
        let op = refinement_operator(2);
        let m: Vec<Vec<u64>> = op
            .matrix
            .iter()
            .map(|r| r.iter().map(|x| u64::try_from(x).unwrap()).collect())
            .collect();
        assert_eq!(m, vec![vec![1, 1, 1], vec![0, 2, 6], vec![0, 0, 6]]);
    }

    #[test]
    fn operator_d1_and_d3() {
        let op1 = refinement_operator(1);
        assert_eq!(u64::try_from(&op1.matrix[1][1]).unwrap(), 2);
        assert_eq!(u64::try_from(&op1.matrix[0][1]).unwrap(), 1);
        let op3 = refinement_operator(3);
        assert_eq!(u64::try_from(&op3.matrix[3][3]).unwrap(), 24);
    }

    #[test]
    fn f_vector_evolves_linearly() {
        let seq = refinement_sequence(&k3(), 3);
        let op = refinement_operator(2);
        for w in seq.windows(2) {
            assert_eq!(op.apply(&w[0].f_vector()), w[1].f_vector());
        }
        // volume growth f_d(G_n) = ((d+1)!)^n f_d(G_0)
        for (n, g) in seq.iter().enumerate() {
            assert_eq!(
                g.f_vector().0[2],
                BigUint::from(6u32).pow(n as u32)
            );
        }
    }

    #[test]
    fn perron_d2_is_sixth_half_third() {
        let (v, lambda) = perron_vector(&refinement_operator(2));
        assert_eq!(lambda, 6.0);
        let expect = [1.0 / 6.0, 0.5, 1.0 / 3.0];
        for (a, b) in v.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn perron_d1_and_d3() {
        let (v, lambda) = perron_vector(&refinement_operator(1));
        assert_eq!(lambda, 2.0);
        assert!((v[0] - 0.5).abs() < 1e-12 && (v[1] - 0.5).abs() < 1e-12);
        let (v3, l3) = perron_vector(&refinement_operator(3));
        assert_eq!(l3, 24.0);
        assert!((v3.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(v3.iter().all(|&x| x > 0.0));
        // residual of the eigen equation
        let op = refinement_operator(3);
        for i in 0..4 {
            let row: f64 = (0..4)
                .map(|j| {
                    use num_traits::ToPrimitive;
                    op.matrix[i][j].to_f64().unwrap() * v3[j]
                })
                .sum();
            assert!((row - 24.0 * v3[i]).abs() < 1e-12 * 24.0);
        }
    }

    #[test]
    fn generations_of_twice_refined_triangle() {
        let seq = refinement_sequence(&k3(), 2);
        let h = generation_histogram(&seq).unwrap();
        assert_eq!(h.counts, vec![18, 4, 3]);
        // count(gen >= 1) = f_0(G_1) = 7, count(gen >= 2) = f_0(G_0) = 3
    }

    #[test]
    fn unlinked_sequence_rejected() {
        let a = k3();
        let b = family(&Family::Cycle, 5).unwrap();
        assert!(generation_histogram(&[a, b]).is_err());
    }

    #[test]
    fn generation_tail_decays() {
        let seq = refinement_sequence(&k3(), 4);
        let h = generation_histogram(&seq).unwrap();
        for w in h.counts.windows(2) {
            assert!(w[1] <= w[0], "generation counts must be nonincreasing");
        }
    }

    #[test]
    fn min_degree_grows_with_generation() {
        let seq = refinement_sequence(&k3(), 4);
        let g = seq.last().unwrap();
        let n = seq.len() - 1;
        let mut min_deg = vec![usize::MAX; n + 1];
        for v in 0..g.n_vertices() {
            let gen = g.generation()[v] as usize;
            min_deg[gen] = min_deg[gen].min(g.degree(v));
        }
        for k in 0..n.saturating_sub(2) {
            assert!(min_deg[k] <= min_deg[k + 1]);
        }
    }
}
