//! Finite simple graphs together with their clique (Whitney) complex.
//!
//! Vertices are `0..n`, edges are unordered pairs, and simplices are the
//! complete subgraphs, stored as sorted vertex tuples grouped by dimension.
//! All orderings are lexicographic, so every derived matrix is deterministic.

use crate::error::{Error, Result};
use crate::operator::{FVector, OperatorKind, SymOperator};
use std::io::{BufRead, Write};

#[derive(Debug, Clone)]
pub struct SimplicialGraph {
    n_vertices: usize,
    /// Sorted pairs `u < v`, lexicographic.
    edges: Vec<(usize, usize)>,
    /// Sorted neighbor lists.
    adj: Vec<Vec<usize>>,
    /// `simplices[k]` = sorted vertex tuples of the k-dimensional simplices,
    /// in lexicographic order.
    simplices: Vec<Vec<Vec<usize>>>,
    /// Per-vertex generation tag; 0 unless produced by refinement.
    generation: Vec<u32>,
    labels: Option<Vec<String>>,
}

impl SimplicialGraph {
    /// Build the clique complex of a simple edge list. `max_dim` bounds the
    /// clique search (`None` = all cliques).
    pub fn build_complex(
        n_vertices: usize,
        edges: &[(usize, usize)],
        max_dim: Option<usize>,
    ) -> Result<Self> {
        let mut norm = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
            }
            if u >= n_vertices || v >= n_vertices {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u},{v}) out of range for {n_vertices} vertices"
                )));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        if norm.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph("duplicate edge".into()));
        }
        let mut adj = vec![Vec::new(); n_vertices];
        for &(u, v) in &norm {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        let simplices = enumerate_cliques(n_vertices, &norm, &adj, max_dim);
        Ok(SimplicialGraph {
            n_vertices,
            edges: norm,
            adj,
            simplices,
            generation: vec![0; n_vertices],
            labels: None,
        })
    }

    /// Assemble a graph whose simplices are already known (used by
    /// Barycentric refinement, which produces the face lattice directly).
    /// The caller guarantees each simplex is a clique and face-closed.
    pub(crate) fn from_parts(
        n_vertices: usize,
        edges: Vec<(usize, usize)>,
        simplices: Vec<Vec<Vec<usize>>>,
        generation: Vec<u32>,
        labels: Option<Vec<String>>,
    ) -> Self {
        let mut adj = vec![Vec::new(); n_vertices];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        SimplicialGraph {
            n_vertices,
            edges,
            adj,
            simplices,
            generation,
            labels,
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(|a| a.len()).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Maximal simplex dimension (maximal clique size minus one).
    pub fn dim(&self) -> usize {
        self.simplices.len().saturating_sub(1)
    }

    /// Simplices of dimension k, sorted lexicographically.
    pub fn simplices(&self, k: usize) -> &[Vec<usize>] {
        self.simplices.get(k).map(|s| s.as_slice()).unwrap_or(&[])
    }

    /// All simplices grouped by dimension.
    pub fn all_simplices(&self) -> &[Vec<Vec<usize>>] {
        &self.simplices
    }

    pub fn n_simplices(&self) -> usize {
        self.simplices.iter().map(|s| s.len()).sum()
    }

    pub fn f_vector(&self) -> FVector {
        FVector::from_counts(
            &self
                .simplices
                .iter()
                .map(|s| s.len())
                .collect::<Vec<_>>(),
        )
    }

    pub fn f_counts(&self) -> Vec<usize> {
        self.simplices.iter().map(|s| s.len()).collect()
    }

    pub fn generation(&self) -> &[u32] {
        &self.generation
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Euler characteristic Σ (−1)^k f_k.
    pub fn euler_characteristic(&self) -> i64 {
        self.simplices
            .iter()
            .enumerate()
            .map(|(k, s)| if k % 2 == 0 { s.len() as i64 } else { -(s.len() as i64) })
            .sum()
    }

    /// Component label per vertex, labels contiguous from 0.
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.n_vertices];
        let mut next = 0;
        let mut stack = Vec::new();
        for s in 0..self.n_vertices {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            stack.push(s);
            while let Some(v) = stack.pop() {
                for &w in &self.adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn n_components(&self) -> usize {
        self.components().iter().max().map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.n_vertices > 0 && self.n_components() == 1
    }

    /// Kirchhoff matrix K = D − A; rows sum to zero.
    pub fn kirchhoff(&self) -> SymOperator {
        let mut triplets = Vec::with_capacity(self.n_vertices + self.edges.len());
        for v in 0..self.n_vertices {
            let d = self.degree(v) as i64;
            if d != 0 {
                triplets.push((v, v, d));
            }
        }
        for &(u, v) in &self.edges {
            triplets.push((u, v, -1));
        }
        SymOperator::from_triplets(self.n_vertices, triplets, OperatorKind::Kirchhoff)
    }

    /// Disjoint union, relabeling the second summand.
    pub fn disjoint_union(&self, other: &SimplicialGraph) -> SimplicialGraph {
        let off = self.n_vertices;
        let n = off + other.n_vertices;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(u, v)| (u + off, v + off)));
        let d = self.simplices.len().max(other.simplices.len());
        let mut simplices = vec![Vec::new(); d];
        for (k, group) in simplices.iter_mut().enumerate() {
            group.extend(self.simplices(k).iter().cloned());
            group.extend(
                other
                    .simplices(k)
                    .iter()
                    .map(|s| s.iter().map(|&v| v + off).collect::<Vec<_>>()),
            );
            group.sort();
        }
        let mut generation = self.generation.clone();
        generation.extend_from_slice(&other.generation);
        SimplicialGraph::from_parts(n, edges, simplices, generation, None)
    }

    /// Induced subgraph on a vertex subset (clique complex rebuilt).
    pub fn induced(&self, vertices: &[usize], max_dim: Option<usize>) -> Result<SimplicialGraph> {
        let mut index = vec![usize::MAX; self.n_vertices];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter(|&&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|&(u, v)| (index[u], index[v]))
            .collect();
        SimplicialGraph::build_complex(vertices.len(), &edges, max_dim)
    }

    /// Check that every listed simplex is a clique and every face is listed.
    /// Exhaustive for small graphs; sampled above `sample_threshold` vertices.
    pub fn verify_complex(&self, sample_threshold: usize, samples: usize) -> Result<()> {
        let exhaustive = self.n_vertices <= sample_threshold;
        let mut rng_state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            rng_state ^= rng_state << 13;
            rng_state ^= rng_state >> 7;
            rng_state ^= rng_state << 17;
            rng_state
        };
        for k in 1..self.simplices.len() {
            let group = &self.simplices[k];
            let picks: Vec<usize> = if exhaustive {
                (0..group.len()).collect()
            } else {
                (0..samples.min(group.len()))
                    .map(|_| (next() % group.len() as u64) as usize)
                    .collect()
            };
            for idx in picks {
                let s = &group[idx];
                for a in 0..s.len() {
                    for b in a + 1..s.len() {
                        if !self.has_edge(s[a], s[b]) {
                            return Err(Error::InvalidGraph(format!(
                                "simplex {s:?} is not a clique"
                            )));
                        }
                    }
                    let mut face = s.clone();
                    face.remove(a);
                    if self.simplices[k - 1].binary_search(&face).is_err() {
                        return Err(Error::InvalidGraph(format!(
                            "face {face:?} of {s:?} missing"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// All cliques up to `max_dim`, grouped by dimension, each tuple sorted,
/// groups in lexicographic order. Expansion by neighborhood intersection:
/// a (k+1)-clique is a k-clique plus a common neighbor above its maximum.
fn enumerate_cliques(
    n_vertices: usize,
    _edges: &[(usize, usize)],
    adj: &[Vec<usize>],
    max_dim: Option<usize>,
) -> Vec<Vec<Vec<usize>>> {
    let mut groups: Vec<Vec<Vec<usize>>> = Vec::new();
    groups.push((0..n_vertices).map(|v| vec![v]).collect());
    let mut cands: Vec<Vec<usize>> = (0..n_vertices)
        .map(|v| adj[v].iter().copied().filter(|&w| w > v).collect())
        .collect();
    let mut k = 0;
    loop {
        if let Some(md) = max_dim {
            if k >= md {
                break;
            }
        }
        let mut next_group = Vec::new();
        let mut next_cands = Vec::new();
        for (s, cand) in groups[k].iter().zip(&cands) {
            for (ci, &v) in cand.iter().enumerate() {
                let mut t = s.clone();
                t.push(v);
                // candidates for t: later common neighbors of t = cand ∩ adj[v], > v
                let rest: Vec<usize> = cand[ci + 1..]
                    .iter()
                    .copied()
                    .filter(|w| adj[v].binary_search(w).is_ok())
                    .collect();
                next_group.push(t);
                next_cands.push(rest);
            }
        }
        if next_group.is_empty() {
            break;
        }
        // lexicographic order is inherited, but sort defensively in one pass
        let mut order: Vec<usize> = (0..next_group.len()).collect();
        order.sort_by(|&a, &b| next_group[a].cmp(&next_group[b]));
        groups.push(order.iter().map(|&i| next_group[i].clone()).collect());
        cands = order.iter().map(|&i| next_cands[i].clone()).collect();
        k += 1;
    }
    // trim empty top group (only possible when n_vertices == 0)
    while groups.last().is_some_and(|g| g.is_empty()) && groups.len() > 1 {
        groups.pop();
    }
    groups
}

/// Named graph families with known closed-form indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Cycle,
    Path,
    Complete,
    /// Complete bipartite on n vertices, parts of size ⌈n/2⌉ and ⌊n/2⌋.
    CompleteBipartite,
    /// Star K_{1,n−1}.
    Star,
    /// Graph complement of the n-cycle.
    CycleComplement,
    /// Circulant C_{n,A}: i ~ j iff (i−j) mod n ∈ ±A.
    Circulant(Vec<usize>),
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cycle" => Ok(Family::Cycle),
            "path" => Ok(Family::Path),
            "complete" => Ok(Family::Complete),
            "complete_bipartite" => Ok(Family::CompleteBipartite),
            "star" => Ok(Family::Star),
            "cycle_complement" => Ok(Family::CycleComplement),
            other => {
                if let Some(rest) = other.strip_prefix("circulant:") {
                    let shifts = rest
                        .split(',')
                        .map(|t| t.trim().parse::<usize>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|e| Error::Parse(format!("bad circulant set: {e}")))?;
                    Ok(Family::Circulant(shifts))
                } else {
                    Err(Error::UnknownFamily(other.into()))
                }
            }
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Family::Cycle => write!(f, "cycle"),
            Family::Path => write!(f, "path"),
            Family::Complete => write!(f, "complete"),
            Family::CompleteBipartite => write!(f, "complete_bipartite"),
            Family::Star => write!(f, "star"),
            Family::CycleComplement => write!(f, "cycle_complement"),
            Family::Circulant(a) => {
                let parts: Vec<String> = a.iter().map(|x| x.to_string()).collect();
                write!(f, "circulant:{}", parts.join(","))
            }
        }
    }
}

/// Generate a family member with its full clique complex.
pub fn family(name: &Family, n: usize) -> Result<SimplicialGraph> {
    family_with_dim(name, n, None)
}

/// Generate a family member, bounding the clique search; `max_dim = Some(1)`
/// is enough for Kirchhoff-only work and keeps complete graphs cheap.
pub fn family_with_dim(
    name: &Family,
    n: usize,
    max_dim: Option<usize>,
) -> Result<SimplicialGraph> {
    let too_small = |min: usize| Error::FamilyTooSmall {
        family: name.to_string(),
        min,
        n,
    };
    let edges: Vec<(usize, usize)> = match name {
        Family::Cycle => {
            if n < 3 {
                return Err(too_small(3));
            }
            (0..n).map(|i| (i, (i + 1) % n)).collect()
        }
        Family::Path => {
            if n < 1 {
                return Err(too_small(1));
            }
            (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect()
        }
        Family::Complete => {
            if n < 1 {
                return Err(too_small(1));
            }
            let mut e = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    e.push((i, j));
                }
            }
            e
        }
        Family::CompleteBipartite => {
            if n < 2 {
                return Err(too_small(2));
            }
            let a = n.div_ceil(2);
            let mut e = Vec::new();
            for i in 0..a {
                for j in a..n {
                    e.push((i, j));
                }
            }
            e
        }
        Family::Star => {
            if n < 2 {
                return Err(too_small(2));
            }
            (1..n).map(|i| (0, i)).collect()
        }
        Family::CycleComplement => {
            if n < 5 {
                return Err(too_small(5));
            }
            let mut e = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    let d = (j - i).min(n - (j - i));
                    if d != 1 {
                        e.push((i, j));
                    }
                }
            }
            e
        }
        Family::Circulant(shifts) => {
            if n < 3 {
                return Err(too_small(3));
            }
            let mut e = std::collections::BTreeSet::new();
            for i in 0..n {
                for &s in shifts {
                    let s = s % n;
                    if s == 0 {
                        continue;
                    }
                    let j = (i + s) % n;
                    if i != j {
                        e.insert((i.min(j), i.max(j)));
                    }
                }
            }
            e.into_iter().collect()
        }
    };
    SimplicialGraph::build_complex(n, &edges, max_dim)
}

/// Parse the edge-list text format: one `u v` pair per line, 0-based
/// vertices, `#` starts a comment. The vertex count is `max index + 1`
/// unless a `# vertices: N` header enlarges it.
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<(usize, Vec<(usize, usize)>)> {
    let mut edges = Vec::new();
    let mut n = 0usize;
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let body = line.split('#').next().unwrap_or("").trim();
        if let Some(rest) = line.trim().strip_prefix("# vertices:") {
            let declared: usize = rest
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
            n = n.max(declared);
        }
        if body.is_empty() {
            continue;
        }
        let mut it = body.split_whitespace();
        let u: usize = it
            .next()
            .ok_or_else(|| Error::Parse(format!("line {}: missing vertex", lineno + 1)))?
            .parse()
            .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        let v: usize = it
            .next()
            .ok_or_else(|| Error::Parse(format!("line {}: missing second vertex", lineno + 1)))?
            .parse()
            .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        if it.next().is_some() {
            return Err(Error::Parse(format!(
                "line {}: expected exactly two vertices",
                lineno + 1
            )));
        }
        n = n.max(u + 1).max(v + 1);
        edges.push((u, v));
    }
    Ok((n, edges))
}

pub fn read_edge_list_file(path: &std::path::Path) -> Result<SimplicialGraph> {
    let f = std::fs::File::open(path)?;
    let (n, edges) = parse_edge_list(std::io::BufReader::new(f))?;
    SimplicialGraph::build_complex(n, &edges, None)
}

pub fn write_edge_list<W: Write>(g: &SimplicialGraph, mut w: W) -> Result<()> {
    writeln!(w, "# vertices: {}", g.n_vertices())?;
    for &(u, v) in g.edges() {
        writeln!(w, "{u} {v}")?;
    }
    Ok(())
}

/// JSON export `{"f": [...], "simplices": {"0": [...], "1": [...]}}`.
pub fn complex_to_json(g: &SimplicialGraph) -> serde_json::Value {
    let mut simplices = serde_json::Map::new();
    for (k, group) in g.all_simplices().iter().enumerate() {
        simplices.insert(k.to_string(), serde_json::json!(group));
    }
    serde_json::json!({
        "f": g.f_counts(),
        "simplices": simplices,
    })
}
