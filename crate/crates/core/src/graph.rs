//! Simple undirected graphs with a canonical edge order.
//!
//! Edges are stored as `(u, v)` with `u < v`, sorted lexicographically.
//! Every labeling in this crate is a list aligned with that order.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub type Edge = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph")]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    #[serde(default)]
    tags: BTreeMap<usize, String>,
    /// Closed-walk order of edge indices, present for necklaces.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tour: Option<Vec<usize>>,
}

#[derive(Deserialize)]
struct RawGraph {
    n: usize,
    edges: Vec<Edge>,
    #[serde(default)]
    tags: BTreeMap<usize, String>,
    #[serde(default)]
    tour: Option<Vec<usize>>,
}

impl TryFrom<RawGraph> for Graph {
    type Error = Error;

    fn try_from(raw: RawGraph) -> Result<Graph> {
        let mut sorted = raw.edges.clone();
        sorted.sort_unstable();
        if sorted != raw.edges {
            return Err(Error::InvalidGraph("edges are not in canonical order".into()));
        }
        let mut g = Graph::new(raw.n, raw.edges)?;
        for (v, role) in raw.tags {
            if v >= g.n {
                return Err(Error::InvalidGraph(format!("tag on missing vertex {v}")));
            }
            g.tags.insert(v, role);
        }
        if let Some(tour) = raw.tour {
            g.set_tour(tour)?;
        }
        Ok(g)
    }
}

impl Graph {
    /// Builds a graph, normalising each edge to `u < v` and sorting.
    pub fn new(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Graph> {
        let mut list: Vec<Edge> = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!("edge ({a},{b}) out of range for {n} vertices")));
            }
            list.push((a.min(b), a.max(b)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!("duplicate edge ({},{})", w[0].0, w[0].1)));
        }
        Ok(Graph { n, edges: list, tags: BTreeMap::new(), tour: None })
    }

    pub fn empty(n: usize) -> Graph {
        Graph { n, edges: Vec::new(), tags: BTreeMap::new(), tour: None }
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> Edge {
        self.edges[i]
    }

    /// Position of edge `{u, v}` in the canonical order.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    pub fn tags(&self) -> &BTreeMap<usize, String> {
        &self.tags
    }

    pub fn tag(&self, v: usize) -> Option<&str> {
        self.tags.get(&v).map(String::as_str)
    }

    pub fn set_tag(&mut self, v: usize, role: impl Into<String>) {
        assert!(v < self.n, "tag on missing vertex {v}");
        self.tags.insert(v, role.into());
    }

    pub fn vertices_tagged(&self, role: &str) -> Vec<usize> {
        self.tags.iter().filter(|(_, r)| r.as_str() == role).map(|(&v, _)| v).collect()
    }

    pub fn tour(&self) -> Option<&[usize]> {
        self.tour.as_deref()
    }

    /// Attaches a tour; it must be a permutation of the edge indices.
    pub fn set_tour(&mut self, tour: Vec<usize>) -> Result<()> {
        let mut seen = vec![false; self.edges.len()];
        if tour.len() != self.edges.len() {
            return Err(Error::InvalidGraph("tour does not cover every edge".into()));
        }
        for &e in &tour {
            if e >= seen.len() || seen[e] {
                return Err(Error::InvalidGraph(format!("tour repeats or misses edge {e}")));
            }
            seen[e] = true;
        }
        self.tour = Some(tour);
        Ok(())
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Edge indices incident to each vertex.
    pub fn incident_edges(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            inc[u].push(i);
            inc[v].push(i);
        }
        inc
    }

    /// Component id per vertex, numbered in order of smallest vertex.
    pub fn components(&self) -> Vec<usize> {
        let adj = self.neighbors();
        let mut comp = vec![usize::MAX; self.n];
        let mut next = 0;
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if comp[y] == usize::MAX {
                        comp[y] = next;
                        stack.push(y);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn num_components(&self) -> usize {
        self.components().into_iter().max().map_or(0, |c| c + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.num_components() <= 1
    }

    /// True if some component is a single edge.
    pub fn has_k2_component(&self) -> bool {
        let deg = self.degrees();
        self.edges.iter().any(|&(u, v)| deg[u] == 1 && deg[v] == 1)
    }

    /// Two-colouring as `false`/`true` sides, or `None` if an odd cycle exists.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let adj = self.neighbors();
        let mut side: Vec<Option<bool>> = vec![None; self.n];
        for s in 0..self.n {
            if side[s].is_some() {
                continue;
            }
            side[s] = Some(false);
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                let sx = side[x].unwrap();
                for &y in &adj[x] {
                    match side[y] {
                        None => {
                            side[y] = Some(!sx);
                            stack.push(y);
                        }
                        Some(sy) if sy == sx => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(side.into_iter().map(|s| s.unwrap()).collect())
    }

    /// Checks the structural invariants; used by tests on every generator.
    pub fn validate(&self) -> Result<()> {
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if u >= v || v >= self.n {
                return Err(Error::InvalidGraph(format!("bad edge ({u},{v})")));
            }
            if i > 0 && self.edges[i - 1] >= (u, v) {
                return Err(Error::InvalidGraph("edges not strictly sorted".into()));
            }
        }
        if self.tags.keys().any(|&v| v >= self.n) {
            return Err(Error::InvalidGraph("tag on missing vertex".into()));
        }
        Ok(())
    }

    /// Rejects graphs on which a local antimagic labeling is undefined.
    pub fn require_labelable(&self) -> Result<()> {
        if self.has_k2_component() {
            return Err(Error::K2Component);
        }
        Ok(())
    }

    /// SHA-256 of the vertex count and canonical edge list.
    pub fn content_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.n as u64).to_le_bytes());
        for &(u, v) in &self.edges {
            h.update((u as u64).to_le_bytes());
            h.update((v as u64).to_le_bytes());
        }
        hex::encode(h.finalize())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serialises")
    }

    pub fn from_json(s: &str) -> Result<Graph> {
        serde_json::from_str(s).map_err(|e| Error::InvalidGraph(e.to_string()))
    }
}

/// Places `g2` after `g1`, shifting its vertex indices by `|V(g1)|`.
pub fn disjoint_union(g1: &Graph, g2: &Graph) -> Graph {
    let shift = g1.n;
    let edges = g1.edges.iter().copied().chain(g2.edges.iter().map(|&(u, v)| (u + shift, v + shift)));
    let mut g = Graph::new(g1.n + g2.n, edges).expect("union of valid graphs");
    for (&v, r) in &g1.tags {
        g.tags.insert(v, r.clone());
    }
    for (&v, r) in &g2.tags {
        g.tags.insert(v + shift, r.clone());
    }
    g
}

/// Index of the `j`-th pendant attached to vertex `i` in `corona_with_empty(g, m)`.
pub fn corona_pendant(g: &Graph, m: usize, i: usize, j: usize) -> usize {
    g.n + i * m + j
}

/// Attaches `m` new pendant vertices to every vertex of `g`.
pub fn corona_with_empty(g: &Graph, m: usize) -> Graph {
    let p = g.n;
    let mut edges = g.edges.clone();
    for i in 0..p {
        for j in 0..m {
            edges.push((i, corona_pendant(g, m, i, j)));
        }
    }
    let mut out = Graph::new(p + p * m, edges).expect("corona of valid graph");
    out.tags = g.tags.clone();
    for v in p..p + p * m {
        out.tags.insert(v, "pendant".into());
    }
    out
}

/// Adds `q` independent vertices, each adjacent to every old vertex.
/// The new vertices take indices `|V(g)| .. |V(g)| + q`.
pub fn join_with_empty(g: &Graph, q: usize) -> Graph {
    let p = g.n;
    let mut edges = g.edges.clone();
    for j in 0..q {
        for x in 0..p {
            edges.push((x, p + j));
        }
    }
    let mut out = Graph::new(p + q, edges).expect("join of valid graph");
    out.tags = g.tags.clone();
    for v in p..p + q {
        out.tags.insert(v, "join".into());
    }
    out
}
