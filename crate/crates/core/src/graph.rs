//! Undirected simple graphs: G(n,p) sampling, breadth-first distances,
//! and a plain-text edge-list format.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;
use std::collections::VecDeque;
use std::fmt::Write as _;

/// Marker for pairs with no connecting path.
pub const UNREACHABLE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    EmptyGraph,
    #[error("edge probability must be a finite value in [0, 1], got {0}")]
    InvalidProbability(f64),
    #[error("line {line}: malformed header, expected `<n> <m>`")]
    MalformedHeader { line: usize },
    #[error("line {line}: malformed edge, expected two vertex ids")]
    MalformedEdge { line: usize },
    #[error("line {line}: vertex {v} out of range for a graph on {n} vertices")]
    VertexOutOfRange { line: usize, v: u64, n: usize },
    #[error("line {line}: self-loop at vertex {v}")]
    SelfLoop { line: usize, v: u32 },
    #[error("line {line}: duplicate edge {u}-{v}")]
    DuplicateEdge { line: usize, u: u32, v: u32 },
    #[error("header declares {declared} edges but the list has {found}")]
    EdgeCountMismatch { declared: usize, found: usize },
}

/// Simple undirected graph on vertices 0..n with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    m: usize,
    adj: Vec<Vec<u32>>,
}

impl Graph {
    /// Builds a graph from an edge list. Edge k is reported at line k+2 on
    /// error, matching its position in the edge-list file format.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Graph, GraphError> {
        if n == 0 {
            return Err(GraphError::EmptyGraph);
        }
        let mut adj = vec![Vec::new(); n];
        let mut seen = HashSet::with_capacity(edges.len());
        for (k, &(u, v)) in edges.iter().enumerate() {
            let line = k + 2;
            for &w in &[u, v] {
                if w as usize >= n {
                    return Err(GraphError::VertexOutOfRange { line, v: w as u64, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop { line, v: u });
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(GraphError::DuplicateEdge { line, u: key.0, v: key.1 });
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { n, m: edges.len(), adj })
    }

    /// Complete graph K_n.
    pub fn complete(n: usize) -> Result<Graph, GraphError> {
        if n == 0 {
            return Err(GraphError::EmptyGraph);
        }
        let mut adj = vec![Vec::with_capacity(n - 1); n];
        for i in 0..n as u32 {
            for j in 0..n as u32 {
                if i != j {
                    adj[i as usize].push(j);
                }
            }
        }
        Ok(Graph { n, m: n * (n - 1) / 2, adj })
    }

    /// Path 0-1-...-(n-1).
    pub fn path(n: usize) -> Result<Graph, GraphError> {
        if n == 0 {
            return Err(GraphError::EmptyGraph);
        }
        let edges: Vec<(u32, u32)> = (1..n as u32).map(|v| (v - 1, v)).collect();
        Graph::from_edges(n, &edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self, v: usize) -> u32 {
        self.adj[v].len() as u32
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.adj.iter().map(|l| l.len() as u32).collect()
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&(v as u32)).is_ok()
    }

    /// Edges in lexicographic order, each as (u, v) with u < v.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n {
            for &v in &self.adj[u] {
                if (u as u32) < v {
                    out.push((u as u32, v));
                }
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        let mut dist = vec![UNREACHABLE; self.n];
        bfs_from(self, 0, &mut dist);
        dist.iter().all(|&d| d != UNREACHABLE)
    }
}

/// Samples G(n,p): each of the C(n,2) pairs is an edge independently with
/// probability p. Pairs are scanned in lexicographic order with exactly one
/// uniform draw per pair, so a given (n, seed) yields nested edge sets as p
/// grows across separate calls with the same seed.
pub fn generate_gnp(n: usize, p: f64, seed: u64) -> Result<Graph, GraphError> {
    if n == 0 {
        return Err(GraphError::EmptyGraph);
    }
    if !p.is_finite() || !(0.0..=1.0).contains(&p) {
        return Err(GraphError::InvalidProbability(p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adj = vec![Vec::new(); n];
    let mut m = 0usize;
    for i in 0..n as u32 {
        for j in (i + 1)..n as u32 {
            if rng.random::<f64>() < p {
                adj[i as usize].push(j);
                adj[j as usize].push(i);
                m += 1;
            }
        }
    }
    Ok(Graph { n, m, adj })
}

fn bfs_from(g: &Graph, src: usize, dist: &mut [u32]) {
    dist.fill(UNREACHABLE);
    dist[src] = 0;
    let mut queue = VecDeque::with_capacity(g.n);
    queue.push_back(src as u32);
    while let Some(u) = queue.pop_front() {
        let du = dist[u as usize];
        for &v in &g.adj[u as usize] {
            if dist[v as usize] == UNREACHABLE {
                dist[v as usize] = du + 1;
                queue.push_back(v);
            }
        }
    }
}

/// All-pairs shortest-path distances, row-major. Unreachable pairs hold
/// [`UNREACHABLE`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceTable {
    n: usize,
    d: Vec<u32>,
}

impl DistanceTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.d[i * self.n + j]
    }

    pub fn is_connected(&self) -> bool {
        self.d.iter().all(|&x| x != UNREACHABLE)
    }

    /// Largest finite distance; None when some pair is unreachable.
    pub fn diameter(&self) -> Option<u32> {
        let mut diam = 0;
        for &x in &self.d {
            if x == UNREACHABLE {
                return None;
            }
            diam = diam.max(x);
        }
        Some(diam)
    }
}

/// BFS from every vertex.
pub fn all_pairs_distances(g: &Graph) -> DistanceTable {
    let n = g.n;
    let mut d = vec![UNREACHABLE; n * n];
    for src in 0..n {
        bfs_from(g, src, &mut d[src * n..(src + 1) * n]);
    }
    DistanceTable { n, d }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphStats {
    pub n: usize,
    pub m: usize,
    pub min_degree: u32,
    pub max_degree: u32,
    pub mean_degree: f64,
    pub connected: bool,
    pub diameter: Option<u32>,
}

pub fn graph_stats(g: &Graph) -> GraphStats {
    stats_with_distances(g, &all_pairs_distances(g))
}

/// Same as [`graph_stats`] but reuses an already-computed distance table.
pub fn stats_with_distances(g: &Graph, dist: &DistanceTable) -> GraphStats {
    let degrees = g.degrees();
    let min_degree = degrees.iter().copied().min().unwrap_or(0);
    let max_degree = degrees.iter().copied().max().unwrap_or(0);
    let diameter = dist.diameter();
    GraphStats {
        n: g.n,
        m: g.m,
        min_degree,
        max_degree,
        mean_degree: 2.0 * g.m as f64 / g.n as f64,
        connected: diameter.is_some(),
        diameter,
    }
}

/// Parses the edge-list format: a `<n> <m>` header line followed by m lines
/// `<u> <v>`, vertices numbered from 0. Blank lines after the last edge are
/// tolerated.
pub fn read_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(GraphError::MalformedHeader { line: 1 })?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    let (n, m) = match parts.as_slice() {
        [a, b] => match (a.parse::<usize>(), b.parse::<usize>()) {
            (Ok(n), Ok(m)) => (n, m),
            _ => return Err(GraphError::MalformedHeader { line: 1 }),
        },
        _ => return Err(GraphError::MalformedHeader { line: 1 }),
    };
    if n == 0 {
        return Err(GraphError::EmptyGraph);
    }

    let mut edges = Vec::with_capacity(m);
    let mut extra = 0usize;
    for (idx, raw) in lines {
        let line = idx + 1;
        if raw.trim().is_empty() {
            if edges.len() < m {
                return Err(GraphError::MalformedEdge { line });
            }
            continue;
        }
        if edges.len() == m {
            extra += 1;
            continue;
        }
        let toks: Vec<&str> = raw.split_whitespace().collect();
        let (u, v) = match toks.as_slice() {
            [a, b] => match (a.parse::<u64>(), b.parse::<u64>()) {
                (Ok(u), Ok(v)) => (u, v),
                _ => return Err(GraphError::MalformedEdge { line }),
            },
            _ => return Err(GraphError::MalformedEdge { line }),
        };
        for &w in &[u, v] {
            if w >= n as u64 {
                return Err(GraphError::VertexOutOfRange { line, v: w, n });
            }
        }
        edges.push((u as u32, v as u32));
    }
    if edges.len() < m || extra > 0 {
        return Err(GraphError::EdgeCountMismatch { declared: m, found: edges.len() + extra });
    }
    Graph::from_edges(n, &edges)
}

/// Inverse of [`read_edge_list`]; edges come out in lexicographic order.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", g.n, g.m);
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{} {}", u, v);
    }
    out
}
