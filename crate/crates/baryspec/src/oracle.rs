//! Independent ground truth by exhaustive enumeration: spanning tree and
//! rooted spanning forest censuses, exact Cheeger constants, and the
//! extremal-τ search over all small connected graphs.
//!
//! Everything here is deliberately brute force and integer-exact; it is the
//! other side of every determinant identity the library computes.

use crate::complex::SimplicialGraph;
use crate::error::{Error, Result};
use rayon::prelude::*;

/// Exact counts from edge-subset enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ForestCensus {
    pub n_spanning_trees: u128,
    pub n_rooted_spanning_trees: u128,
    pub n_rooted_spanning_forests: u128,
}

const MAX_CENSUS_EDGES: usize = 24;

/// Enumerate all 2^m edge subsets; acyclic subsets are spanning forests and
/// contribute the product of their component sizes (one root choice per
/// tree, seeds included). Acyclic subsets with n−1 edges are spanning trees.
pub fn census(g: &SimplicialGraph) -> Result<ForestCensus> {
    let m = g.n_edges();
    let n = g.n_vertices();
    if m > MAX_CENSUS_EDGES {
        return Err(Error::OracleTooLarge(format!(
            "{m} edges exceeds the {MAX_CENSUS_EDGES}-edge census limit"
        )));
    }
    let edges = g.edges().to_vec();
    let total: u64 = 1u64 << m;
    let chunk: u64 = 1 << 14;
    let n_chunks = total.div_ceil(chunk);
    let (trees, forests) = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut trees: u128 = 0;
            let mut forests: u128 = 0;
            let lo = c * chunk;
            let hi = (lo + chunk).min(total);
            let mut parent = vec![0usize; n];
            let mut size = vec![0u32; n];
            for mask in lo..hi {
                for v in 0..n {
                    parent[v] = v;
                    size[v] = 1;
                }
                let mut acyclic = true;
                let mut used = 0usize;
                for (e, &(u, v)) in edges.iter().enumerate() {
                    if mask >> e & 1 == 0 {
                        continue;
                    }
                    used += 1;
                    let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                    if ru == rv {
                        acyclic = false;
                        break;
                    }
                    let (a, b) = if size[ru] >= size[rv] { (ru, rv) } else { (rv, ru) };
                    parent[b] = a;
                    size[a] += size[b];
                }
                if !acyclic {
                    continue;
                }
                let mut roots: u128 = 1;
                for v in 0..n {
                    if find(&mut parent, v) == v {
                        roots *= size[v] as u128;
                    }
                }
                forests += roots;
                if used + 1 == n {
                    trees += 1;
                }
            }
            (trees, forests)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(ForestCensus {
        n_spanning_trees: trees,
        n_rooted_spanning_trees: trees * n as u128,
        n_rooted_spanning_forests: forests,
    })
}

fn find(parent: &mut [usize], mut v: usize) -> usize {
    while parent[v] != v {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    v
}

/// Exact tree-forest ratio of a small graph as an integer fraction
/// `(rooted forests, rooted trees)`, via fraction-free determinants.
pub fn tau_exact(n: usize, edges: &[(usize, usize)]) -> (i128, i128) {
    // Kirchhoff matrix
    let mut k = vec![vec![0i128; n]; n];
    for &(u, v) in edges {
        k[u][v] -= 1;
        k[v][u] -= 1;
        k[u][u] += 1;
        k[v][v] += 1;
    }
    // spanning trees: any cofactor of K
    let minor: Vec<Vec<i128>> = (0..n - 1)
        .map(|i| (0..n - 1).map(|j| k[i][j]).collect())
        .collect();
    let spanning_trees = int_det(minor);
    let rooted_trees = spanning_trees * n as i128;
    for (i, row) in k.iter_mut().enumerate() {
        row[i] += 1;
    }
    let rooted_forests = int_det(k);
    (rooted_forests, rooted_trees)
}

/// Fraction-free Bareiss determinant.
fn int_det(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Result of the exhaustive extremal-τ search.
#[derive(Debug, Clone)]
pub struct ExtremalResult {
    /// Maximal τ as a fraction (rooted forests, rooted trees).
    pub tau: (i128, i128),
    /// Edge sets of every labeled maximizer.
    pub maximizers: Vec<Vec<(usize, usize)>>,
    /// True when every maximizer is a path graph.
    pub all_maximizers_are_paths: bool,
}

/// Exhaustively search every connected graph on n labeled vertices for the
/// maximal tree-forest ratio (exact rational comparison, no float ties).
pub fn extremal_tau_search(n: usize) -> Result<ExtremalResult> {
    if n < 2 || n > 7 {
        return Err(Error::OracleTooLarge(format!(
            "extremal search supports 2 <= n <= 7, got {n}"
        )));
    }
    let mut all_edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            all_edges.push((i, j));
        }
    }
    let m = all_edges.len();
    let masks: Vec<u32> = (1u32..1 << m).collect();
    let best = masks
        .par_iter()
        .filter_map(|&mask| {
            let edges: Vec<(usize, usize)> = all_edges
                .iter()
                .enumerate()
                .filter(|&(e, _)| mask >> e & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            if !connected(n, &edges) {
                return None;
            }
            let tau = tau_exact(n, &edges);
            Some((tau, edges))
        })
        .fold(
            || None::<((i128, i128), Vec<Vec<(usize, usize)>>)>,
            |acc, (tau, edges)| merge_best(acc, tau, vec![edges]),
        )
        .reduce(
            || None,
            |a, b| match b {
                None => a,
                Some((tau, gs)) => merge_best(a, tau, gs),
            },
        )
        .ok_or_else(|| Error::OracleTooLarge("no connected graphs found".into()))?;
    let (tau, maximizers) = best;
    let all_paths = maximizers.iter().all(|edges| is_path(n, edges));
    Ok(ExtremalResult {
        tau,
        maximizers,
        all_maximizers_are_paths: all_paths,
    })
}

fn merge_best(
    acc: Option<((i128, i128), Vec<Vec<(usize, usize)>>)>,
    tau: (i128, i128),
    graphs: Vec<Vec<(usize, usize)>>,
) -> Option<((i128, i128), Vec<Vec<(usize, usize)>>)> {
    match acc {
        None => Some((tau, graphs)),
        Some((best, mut gs)) => {
            // compare a/b vs c/d exactly
            let lhs = tau.0 * best.1;
            let rhs = best.0 * tau.1;
            match lhs.cmp(&rhs) {
                std::cmp::Ordering::Greater => Some((tau, graphs)),
                std::cmp::Ordering::Equal => {
                    gs.extend(graphs);
                    Some((best, gs))
                }
                std::cmp::Ordering::Less => Some((best, gs)),
            }
        }
    }
}

fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    for &(u, v) in edges {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru] = rv;
        }
    }
    let root = find(&mut parent, 0);
    (1..n).all(|v| find(&mut parent, v) == root)
}

fn is_path(n: usize, edges: &[(usize, usize)]) -> bool {
    if edges.len() != n - 1 || !connected(n, edges) {
        return false;
    }
    let mut deg = vec![0usize; n];
    for &(u, v) in edges {
        deg[u] += 1;
        deg[v] += 1;
    }
    deg.iter().all(|&d| d <= 2)
}

/// Exact Cheeger constant: min over nonempty S with |S| ≤ n/2 of |∂S|/|S|
/// (edge-boundary convention, matching h ≥ λ₂/2 for the Kirchhoff spectrum).
pub fn cheeger_exact(g: &SimplicialGraph) -> Result<f64> {
    let n = g.n_vertices();
    if n > 16 {
        return Err(Error::OracleTooLarge(format!(
            "exhaustive Cheeger supports n <= 16, got {n}"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidGraph("Cheeger needs at least 2 vertices".into()));
    }
    let edges = g.edges();
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size == 0 || 2 * size > n {
            continue;
        }
        let boundary = edges
            .iter()
            .filter(|&&(u, v)| (mask >> u & 1) != (mask >> v & 1))
            .count();
        best = best.min(boundary as f64 / size as f64);
    }
    Ok(best)
}
