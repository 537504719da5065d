//! Generators for the graph families that have constructive labelings.
//!
//! Vertex numbering is fixed per family so labelings are reproducible:
//!
//! * paths and cycles: vertex `i` of copy `j` is `j * n + i`
//! * stars: centre of copy `i` is `i * (n + 1)`, its leaves follow
//! * `K_{m,n}` copies: copy `k` owns `k(m+n) ..`, side A first
//! * multipartite: parts are consecutive blocks

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{disjoint_union, Graph};

fn build(n: usize, edges: Vec<(usize, usize)>) -> Graph {
    Graph::new(n, edges).expect("generator emits a simple graph")
}

/// `r` disjoint paths on `n` vertices each.
pub fn union_paths(r: usize, n: usize) -> Result<Graph> {
    if r == 0 || n < 2 {
        return Err(Error::InfeasibleParameters(format!("paths need r >= 1 and n >= 2, got r={r}, n={n}")));
    }
    let edges = (0..r).flat_map(|j| (0..n - 1).map(move |i| (j * n + i, j * n + i + 1))).collect();
    Ok(build(r * n, edges))
}

/// `r` disjoint cycles of length `n`.
pub fn union_cycles(r: usize, n: usize) -> Result<Graph> {
    if r == 0 || n < 3 {
        return Err(Error::InfeasibleParameters(format!("cycles need r >= 1 and n >= 3, got r={r}, n={n}")));
    }
    let edges = (0..r).flat_map(|j| (0..n).map(move |i| (j * n + i, j * n + (i + 1) % n))).collect();
    Ok(build(r * n, edges))
}

pub fn star_center(n: usize, i: usize) -> usize {
    i * (n + 1)
}

/// `r` disjoint copies of `K_{1,n}`.
pub fn union_stars(r: usize, n: usize) -> Result<Graph> {
    if r == 0 || n < 2 {
        return Err(Error::InfeasibleParameters(format!("stars need r >= 1 and n >= 2, got r={r}, n={n}")));
    }
    let edges = (0..r)
        .flat_map(|i| (1..=n).map(move |j| (star_center(n, i), star_center(n, i) + j)))
        .collect();
    let mut g = build(r * (n + 1), edges);
    for i in 0..r {
        g.set_tag(star_center(n, i), "center");
        for j in 1..=n {
            g.set_tag(star_center(n, i) + j, "pendant");
        }
    }
    Ok(g)
}

pub fn complete(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InfeasibleParameters(format!("complete graph needs n >= 3, got {n}")));
    }
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    Ok(build(n, edges))
}

/// `r` disjoint copies of `K_{m,n}`; side A (size `m`) is tagged `part_a`.
pub fn union_complete_bipartite(r: usize, m: usize, n: usize) -> Result<Graph> {
    if r == 0 || m == 0 || n == 0 || (m, n) == (1, 1) {
        return Err(Error::InfeasibleParameters(format!(
            "complete bipartite copies need r, m, n >= 1 and (m,n) != (1,1), got r={r}, m={m}, n={n}"
        )));
    }
    let size = m + n;
    let edges = (0..r)
        .flat_map(|k| (0..m).flat_map(move |a| (0..n).map(move |b| (k * size + a, k * size + m + b))))
        .collect();
    let mut g = build(r * size, edges);
    for k in 0..r {
        for a in 0..m {
            g.set_tag(k * size + a, "part_a");
        }
        for b in 0..n {
            g.set_tag(k * size + m + b, "part_b");
        }
    }
    Ok(g)
}

pub fn complete_multipartite(parts: &[usize]) -> Result<Graph> {
    if parts.len() < 2 || parts.contains(&0) {
        return Err(Error::InfeasibleParameters("multipartite graph needs at least two non-empty parts".into()));
    }
    let mut owner = Vec::new();
    for (p, &size) in parts.iter().enumerate() {
        owner.extend(std::iter::repeat_n(p, size));
    }
    let n = owner.len();
    let edges = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| owner[u] != owner[v])
        .collect();
    let mut g = build(n, edges);
    for (v, p) in owner.into_iter().enumerate() {
        g.set_tag(v, format!("part_{p}"));
    }
    Ok(g)
}

/// Cycle lengths of a necklace and how each cycle divides between the
/// outbound (`upper`) and return (`lower`) halves of the tour.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NecklaceSpec {
    pub cycle_lengths: Vec<usize>,
    pub splits: Vec<(usize, usize)>,
}

impl NecklaceSpec {
    /// Default split puts the larger half of each cycle on the way out.
    pub fn new(cycle_lengths: Vec<usize>) -> NecklaceSpec {
        let splits = cycle_lengths.iter().map(|&n| (n.div_ceil(2), n / 2)).collect();
        NecklaceSpec { cycle_lengths, splits }
    }

    pub fn with_splits(cycle_lengths: Vec<usize>, splits: Vec<(usize, usize)>) -> NecklaceSpec {
        NecklaceSpec { cycle_lengths, splits }
    }

    pub fn total_length(&self) -> usize {
        self.cycle_lengths.iter().sum()
    }

    pub fn validate(&self) -> Result<()> {
        let t = self.cycle_lengths.len();
        let bad = |msg: String| Err(Error::InfeasibleParameters(msg));
        if t < 2 {
            return bad(format!("necklace needs at least 2 cycles, got {t}"));
        }
        if self.splits.len() != t {
            return bad(format!("{} splits given for {t} cycles", self.splits.len()));
        }
        for (i, (&len, &(up, low))) in self.cycle_lengths.iter().zip(&self.splits).enumerate() {
            if len < 3 {
                return bad(format!("cycle {i} has length {len} < 3"));
            }
            if up + low != len || up == 0 || low == 0 {
                return bad(format!("cycle {i}: split ({up},{low}) does not divide length {len}"));
            }
            if i > 0 && i + 1 < t && (up < 2 || low < 2) {
                return bad(format!("cycle {i}: split ({up},{low}) makes two degree-4 vertices adjacent"));
            }
        }
        Ok(())
    }
}

/// Builds a `u,v`-necklace. Vertices are numbered by first appearance on
/// the tour starting at `u = 0`; the tour is stored on the graph.
pub fn necklace(spec: &NecklaceSpec) -> Result<Graph> {
    spec.validate()?;
    let t = spec.cycle_lengths.len();
    let mut next = 1;
    let mut fresh = || {
        next += 1;
        next - 1
    };
    // Outbound: along the upper half of each cycle from joint to joint.
    let mut joints = vec![0usize];
    let mut walk: Vec<(usize, usize)> = Vec::new();
    let mut cur = 0;
    for &(up, _) in &spec.splits {
        for _ in 0..up {
            let v = fresh();
            walk.push((cur, v));
            cur = v;
        }
        joints.push(cur);
    }
    // Return: lower halves from the last cycle back to the first.
    for i in (0..t).rev() {
        let (_, low) = spec.splits[i];
        for s in 0..low {
            let v = if s + 1 == low { joints[i] } else { fresh() };
            walk.push((cur, v));
            cur = v;
        }
    }
    let n = next;
    let mut g = build(n, walk.clone());
    let tour = walk.iter().map(|&(a, b)| g.edge_index(a, b).expect("tour edge exists")).collect();
    g.set_tour(tour)?;
    g.set_tag(0, "u");
    g.set_tag(joints[t], "v");
    for &j in &joints[1..t] {
        g.set_tag(j, "shared");
    }
    Ok(g)
}

/// `r` disjoint copies of `g`.
pub fn copies(g: &Graph, r: usize) -> Graph {
    (1..r).fold(g.clone(), |acc, _| disjoint_union(&acc, g))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paths_indexing_and_counts() {
        let g = union_paths(1, 3).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        let g = union_paths(2, 6).unwrap();
        assert_eq!((g.num_vertices(), g.num_edges(), g.num_components()), (12, 10, 2));
        let g = union_paths(3, 4).unwrap();
        let deg = g.degrees();
        for j in 0..3 {
            assert_eq!((0..4).filter(|&i| deg[j * 4 + i] == 1).count(), 2);
        }
    }

    #[test]
    fn cycles() {
        let g = union_cycles(1, 3).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (1, 2)]);
        let g = union_cycles(3, 5).unwrap();
        assert_eq!((g.num_vertices(), g.num_edges()), (15, 15));
        assert!(g.degrees().iter().all(|&d| d == 2));
        let g = union_cycles(2, 6).unwrap();
        for j in 0..2 {
            for i in 0..6 {
                assert!(g.edge_index(j * 6 + i, j * 6 + (i + 1) % 6).is_some());
            }
        }
        assert!(union_cycles(1, 2).is_err());
    }

    #[test]
    fn stars() {
        let g = union_stars(3, 3).unwrap();
        assert_eq!(g.num_edges(), 9);
        assert_eq!(g.vertices_tagged("center"), vec![0, 4, 8]);
        let g = union_stars(1, 2).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 2)]);
        let g = union_stars(2, 4).unwrap();
        assert_eq!((g.num_components(), g.vertices_tagged("pendant").len()), (2, 8));
        assert!(union_stars(2, 1).is_err());
    }

    #[test]
    fn complete_graphs() {
        assert_eq!(complete(3).unwrap().num_edges(), 3);
        assert_eq!(complete(4).unwrap().num_edges(), 6);
        let k5 = complete(5).unwrap();
        assert_eq!(k5.num_edges(), 10);
        assert!(k5.degrees().iter().all(|&d| d == 4));
        assert!(complete(2).is_err());
    }

    #[test]
    fn bipartite_copies() {
        let g = union_complete_bipartite(3, 2, 4).unwrap();
        assert_eq!(g.num_edges(), 24);
        let g = union_complete_bipartite(1, 1, 3).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (0, 3)]);
        let g = union_complete_bipartite(2, 3, 3).unwrap();
        assert_eq!((g.num_components(), g.num_edges()), (2, 18));
        assert!(union_complete_bipartite(1, 1, 1).is_err());
    }

    #[test]
    fn multipartite() {
        let a = complete_multipartite(&[2, 4]).unwrap();
        let b = union_complete_bipartite(1, 2, 4).unwrap();
        assert_eq!(a.edges(), b.edges());
        assert_eq!(complete_multipartite(&[1, 1, 1]).unwrap().edges(), complete(3).unwrap().edges());
        let g = complete_multipartite(&[2, 4, 2]).unwrap();
        assert_eq!((g.num_vertices(), g.num_edges()), (8, 20));
    }

    #[test]
    fn multipartite_equals_join() {
        let base = union_complete_bipartite(1, 2, 4).unwrap();
        let joined = crate::graph::join_with_empty(&base, 2);
        assert_eq!(joined.edges(), complete_multipartite(&[2, 4, 2]).unwrap().edges());
    }

    fn check_necklace(g: &Graph, t: usize) {
        let deg = g.degrees();
        let fours: Vec<usize> = (0..g.num_vertices()).filter(|&v| deg[v] == 4).collect();
        assert_eq!(fours.len(), t - 1);
        assert!(deg.iter().all(|&d| d == 2 || d == 4));
        for &a in &fours {
            for &b in &fours {
                assert!(g.edge_index(a, b).is_none());
            }
        }
        let tour = g.tour().unwrap();
        let mut at = 0;
        for &e in tour {
            let (a, b) = g.edge(e);
            at = if a == at { b } else { assert_eq!(b, at); a };
        }
        assert_eq!(at, 0);
    }

    #[test]
    fn necklace_shapes() {
        let spec = NecklaceSpec::with_splits(vec![5, 4, 5], vec![(3, 2), (2, 2), (2, 3)]);
        let g = necklace(&spec).unwrap();
        assert_eq!(g.num_edges(), 14);
        check_necklace(&g, 3);

        let g = necklace(&NecklaceSpec::new(vec![4, 4, 4])).unwrap();
        assert_eq!((g.num_vertices(), g.num_edges()), (10, 12));
        check_necklace(&g, 3);

        let g = necklace(&NecklaceSpec::new(vec![3, 3])).unwrap();
        check_necklace(&g, 2);
        assert_eq!(g.vertices_tagged("shared").len(), 1);
    }

    #[test]
    fn necklace_tour_starts_at_u_and_turns_at_v() {
        let g = necklace(&NecklaceSpec::new(vec![4, 4, 4])).unwrap();
        let tour = g.tour().unwrap();
        assert_eq!(g.edge(tour[0]), (0, 1));
        let v = g.vertices_tagged("v")[0];
        assert!(tour[..6].iter().any(|&e| g.edge(e).1 == v));
        assert_eq!(g.tag(0), Some("u"));
    }

    #[test]
    fn necklace_rejects_adjacent_joints() {
        let spec = NecklaceSpec::with_splits(vec![4, 4, 4], vec![(2, 2), (1, 3), (2, 2)]);
        assert!(necklace(&spec).is_err());
        assert!(necklace(&NecklaceSpec::new(vec![5])).is_err());
        let spec = NecklaceSpec::with_splits(vec![4, 4], vec![(2, 2), (3, 2)]);
        assert!(necklace(&spec).is_err());
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(union_cycles(3, 7).unwrap(), union_cycles(3, 7).unwrap());
        let spec = NecklaceSpec::new(vec![6, 5, 7]);
        assert_eq!(necklace(&spec).unwrap(), necklace(&spec).unwrap());
    }
}
