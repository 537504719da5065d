//! Weights, validity checks and lower bounds on the number of colours.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::labeling::EdgeLabeling;

pub const CLIQUE_LIMIT: usize = 64;
pub const CHROMATIC_LIMIT: usize = 30;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightColoring {
    pub weights: Vec<u64>,
    pub num_colors: usize,
}

pub fn count_distinct(values: &[u64]) -> usize {
    values.iter().collect::<BTreeSet<_>>().len()
}

pub fn induced_weights(g: &Graph, f: &EdgeLabeling) -> Result<WeightColoring> {
    if f.len() != g.num_edges() {
        return Err(Error::LengthMismatch { expected: g.num_edges(), got: f.len() });
    }
    let mut weights = vec![0u64; g.num_vertices()];
    for (&(u, v), &x) in g.edges().iter().zip(&f.labels) {
        weights[u] += x;
        weights[v] += x;
    }
    let num_colors = count_distinct(&weights);
    Ok(WeightColoring { weights, num_colors })
}

/// Outcome of checking a labeling; `first_violation` is the first edge in
/// canonical order whose endpoints share a weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub bijection: bool,
    pub proper: bool,
    pub weights: Vec<u64>,
    pub num_colors: usize,
    pub first_violation: Option<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Verification {
    pub fn is_valid(&self) -> bool {
        self.bijection && self.proper
    }
}

pub fn is_local_antimagic(g: &Graph, f: &EdgeLabeling) -> Verification {
    let wc = match induced_weights(g, f) {
        Ok(wc) => wc,
        Err(e) => {
            return Verification {
                bijection: false,
                proper: false,
                weights: Vec::new(),
                num_colors: 0,
                first_violation: None,
                error: Some(e.to_string()),
            }
        }
    };
    let first_violation = g.edges().iter().copied().find(|&(u, v)| wc.weights[u] == wc.weights[v]);
    Verification {
        bijection: f.is_bijection(),
        proper: first_violation.is_none(),
        weights: wc.weights,
        num_colors: wc.num_colors,
        first_violation,
        error: None,
    }
}

pub fn pendant_lower_bound(g: &Graph) -> usize {
    g.degrees().iter().filter(|&&d| d == 1).count() + 1
}

fn adjacency_bits(g: &Graph) -> Vec<u64> {
    let mut adj = vec![0u64; g.num_vertices()];
    for &(u, v) in g.edges() {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    adj
}

pub fn clique_lower_bound(g: &Graph) -> Result<usize> {
    clique_number(g, CLIQUE_LIMIT)
}

/// Maximum clique size by Bron-Kerbosch with pivoting.
pub fn clique_number(g: &Graph, limit: usize) -> Result<usize> {
    let n = g.num_vertices();
    if n > limit.min(64) {
        return Err(Error::TooLarge { size: n, limit: limit.min(64) });
    }
    if n == 0 {
        return Ok(0);
    }
    let adj = adjacency_bits(g);
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut best = 0;
    bron_kerbosch(&adj, 0, all, 0, &mut best);
    Ok(best)
}

fn bron_kerbosch(adj: &[u64], size: usize, mut p: u64, mut x: u64, best: &mut usize) {
    if p == 0 {
        if x == 0 {
            *best = (*best).max(size);
        }
        return;
    }
    if size + (p.count_ones() as usize) <= *best {
        return;
    }
    let pivot = {
        let px = p | x;
        let mut bits = px;
        let mut pick = px.trailing_zeros() as usize;
        let mut most = 0;
        while bits != 0 {
            let u = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let c = (p & adj[u]).count_ones();
            if c > most {
                most = c;
                pick = u;
            }
        }
        pick
    };
    let mut cand = p & !adj[pivot];
    while cand != 0 {
        let v = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        bron_kerbosch(adj, size + 1, p & adj[v], x & adj[v], best);
        p &= !(1 << v);
        x |= 1 << v;
    }
}

pub fn chromatic_number_exact(g: &Graph) -> Result<usize> {
    chromatic_number(g, CHROMATIC_LIMIT)
}

/// Exact chromatic number: try `k = clique, clique + 1, ...` with
/// backtracking colouring.
pub fn chromatic_number(g: &Graph, limit: usize) -> Result<usize> {
    let n = g.num_vertices();
    if n > limit.min(64) {
        return Err(Error::TooLarge { size: n, limit: limit.min(64) });
    }
    if n == 0 {
        return Ok(0);
    }
    let adj = adjacency_bits(g);
    let order = colouring_order(&adj);
    let mut k = clique_number(g, 64)?.max(1);
    loop {
        let mut colour = vec![usize::MAX; n];
        if colour_rec(&adj, &order, 0, k, 0, &mut colour) {
            return Ok(k);
        }
        k += 1;
    }
}

/// Picks next the vertex with most already-ordered neighbours.
fn colouring_order(adj: &[u64]) -> Vec<usize> {
    let n = adj.len();
    let mut placed = 0u64;
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| placed & (1 << v) == 0)
            .max_by_key(|&v| ((adj[v] & placed).count_ones(), adj[v].count_ones(), std::cmp::Reverse(v)))
            .unwrap();
        placed |= 1 << v;
        order.push(v);
    }
    order
}

fn colour_rec(adj: &[u64], order: &[usize], pos: usize, k: usize, used: usize, colour: &mut [usize]) -> bool {
    if pos == order.len() {
        return true;
    }
    let v = order[pos];
    let mut banned = 0u64;
    let mut nb = adj[v];
    while nb != 0 {
        let u = nb.trailing_zeros() as usize;
        nb &= nb - 1;
        if colour[u] != usize::MAX {
            banned |= 1 << colour[u];
        }
    }
    // a fresh colour is interchangeable with any other fresh one
    for c in 0..k.min(used + 1) {
        if banned & (1 << c) != 0 {
            continue;
        }
        colour[v] = c;
        if colour_rec(adj, order, pos + 1, k, used.max(c + 1), colour) {
            return true;
        }
    }
    colour[v] = usize::MAX;
    false
}

/// For a connected bipartite graph with classes `X`, `Y` and `q` edges,
/// two colours force `x|X| = y|Y| = q(q+1)/2`. Returns true when that
/// divisibility fails, which certifies at least three colours.
pub fn bipartite_two_color_obstruction(g: &Graph) -> Result<bool> {
    let side = g.bipartition().ok_or(Error::NotBipartite)?;
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    let q = g.num_edges();
    if q == 0 {
        return Ok(false);
    }
    let x = side.iter().filter(|&&s| !s).count();
    let y = side.len() - x;
    let total = q * (q + 1) / 2;
    Ok(total % x != 0 || total % y != 0)
}

pub fn cycle_parity_lower_bound(g: &Graph) -> usize {
    if g.num_edges() == 0 {
        0
    } else if g.bipartition().is_none() {
        3
    } else {
        2
    }
}

/// The colour count of a disjoint union is at least that of each part.
pub fn union_lower_bound(components: &[usize]) -> usize {
    components.iter().copied().max().unwrap_or(0)
}

/// Colours needed by the star at a maximum-degree vertex. This is the
/// value for a subgraph, not a bound for `g` itself.
pub fn star_subgraph_bound(g: &Graph) -> Result<usize> {
    let d = g.max_degree();
    if d < 2 {
        return Err(Error::InfeasibleParameters(format!("maximum degree {d} < 2")));
    }
    Ok(d + 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bound {
    pub value: Option<usize>,
    pub source: String,
    #[serde(default)]
    pub budget_exceeded: bool,
}

impl Bound {
    fn known(value: usize, source: &str) -> Bound {
        Bound { value: Some(value), source: source.into(), budget_exceeded: false }
    }

    fn absent(source: &str) -> Bound {
        Bound { value: None, source: source.into(), budget_exceeded: false }
    }

    fn from_result(r: Result<usize>, source: &str) -> Bound {
        match r {
            Ok(v) => Bound::known(v, source),
            Err(_) => Bound { value: None, source: source.into(), budget_exceeded: true },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub chromatic: Bound,
    pub pendant: Bound,
    pub clique: Bound,
    pub parity: Bound,
    pub obstruction: Bound,
    pub best_lower: usize,
    /// Colours of the largest star subgraph; kept apart from the lower bounds.
    pub star_subgraph: Option<usize>,
    pub upper: Option<Bound>,
}

impl BoundsReport {
    pub fn with_upper(mut self, value: usize, source: &str) -> BoundsReport {
        self.upper = Some(Bound::known(value, source));
        self
    }
}

pub fn bounds_report(g: &Graph) -> BoundsReport {
    let chromatic = Bound::from_result(chromatic_number_exact(g), "proper vertex colouring");
    let pendant = Bound::known(pendant_lower_bound(g), "pendant vertices");
    let clique = Bound::from_result(clique_lower_bound(g), "maximum clique");
    let parity = Bound::known(cycle_parity_lower_bound(g), "odd cycle");
    let obstruction = match bipartite_two_color_obstruction(g) {
        Ok(true) => Bound::known(3, "bipartite class sizes"),
        Ok(false) => Bound::absent("bipartite class sizes"),
        Err(_) => Bound::absent("bipartite class sizes (needs a connected bipartite graph)"),
    };
    let best_lower = [&chromatic, &pendant, &clique, &parity, &obstruction]
        .iter()
        .filter_map(|b| b.value)
        .max()
        .unwrap_or(0);
    BoundsReport {
        chromatic,
        pendant,
        clique,
        parity,
        obstruction,
        best_lower,
        star_subgraph: star_subgraph_bound(g).ok(),
        upper: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::*;
    use crate::graph::{corona_with_empty, join_with_empty};

    fn labels(v: &[u64]) -> EdgeLabeling {
        EdgeLabeling::new(v.to_vec())
    }

    #[test]
    fn weights_of_small_graphs() {
        let c3 = union_cycles(1, 3).unwrap();
        assert_eq!(induced_weights(&c3, &labels(&[1, 2, 3])).unwrap().weights, vec![3, 4, 5]);
        let p3 = union_paths(1, 3).unwrap();
        assert_eq!(induced_weights(&p3, &labels(&[1, 2])).unwrap().weights, vec![1, 3, 2]);
        let k14 = union_stars(1, 4).unwrap();
        assert_eq!(induced_weights(&k14, &labels(&[1, 2, 3, 4])).unwrap().weights[0], 10);
    }

    #[test]
    fn length_mismatch() {
        let c3 = union_cycles(1, 3).unwrap();
        assert_eq!(
            induced_weights(&c3, &labels(&[1, 2])),
            Err(Error::LengthMismatch { expected: 3, got: 2 })
        );
        let v = is_local_antimagic(&c3, &labels(&[1, 2]));
        assert!(!v.is_valid() && v.error.is_some());
    }

    #[test]
    fn antimagic_checks() {
        let c3 = union_cycles(1, 3).unwrap();
        assert!(is_local_antimagic(&c3, &labels(&[1, 2, 3])).is_valid());
        let p3 = union_paths(1, 3).unwrap();
        assert!(!is_local_antimagic(&p3, &labels(&[1, 1])).bijection);
    }

    #[test]
    fn four_cycle_in_canonical_order() {
        let c4 = union_cycles(1, 4).unwrap();
        assert_eq!(c4.edges(), &[(0, 1), (0, 3), (1, 2), (2, 3)]);
        // w0 = 1+2, w1 = 1+3, w2 = 3+4, w3 = 2+4
        let v = is_local_antimagic(&c4, &labels(&[1, 2, 3, 4]));
        assert_eq!(v.weights, vec![3, 4, 7, 6]);
        assert!(v.is_valid());
        // w0 = 1+4, w1 = 1+3, w2 = 3+2, w3 = 4+2
        let v = is_local_antimagic(&c4, &labels(&[1, 4, 3, 2]));
        assert_eq!(v.weights, vec![5, 4, 5, 6]);
        assert!(v.proper);
    }

    #[test]
    fn first_violation_is_reported() {
        // edges (0,1),(0,2),(1,2),(2,3)
        let g = crate::graph::Graph::new(4, [(0, 1), (1, 2), (2, 3), (0, 2)]).unwrap();
        let v = is_local_antimagic(&g, &labels(&[4, 2, 1, 3]));
        assert_eq!(v.weights, vec![6, 5, 6, 3]);
        assert_eq!(v.first_violation, Some((0, 2)));
        assert!(v.bijection && !v.is_valid());
        let p3 = union_paths(1, 3).unwrap();
        assert_eq!(is_local_antimagic(&p3, &labels(&[1, 2])).first_violation, None);
    }

    #[test]
    fn complete_graph_sequential_weights() {
        let k4 = join_with_empty(&union_cycles(1, 3).unwrap(), 1);
        let v = is_local_antimagic(&k4, &EdgeLabeling::sequential(6));
        assert_eq!(v.weights, vec![6, 10, 12, 14]);
        assert!(v.is_valid());
    }

    #[test]
    fn pendant_bounds() {
        assert_eq!(pendant_lower_bound(&union_stars(3, 3).unwrap()), 10);
        assert_eq!(pendant_lower_bound(&union_cycles(1, 5).unwrap()), 1);
        let c4 = union_cycles(1, 4).unwrap();
        assert_eq!(pendant_lower_bound(&corona_with_empty(&c4, 2)), 9);
    }

    #[test]
    fn cliques() {
        assert_eq!(clique_lower_bound(&complete(5).unwrap()).unwrap(), 5);
        assert_eq!(clique_lower_bound(&union_cycles(1, 6).unwrap()).unwrap(), 2);
        assert_eq!(clique_lower_bound(&complete_multipartite(&[2, 4, 2]).unwrap()).unwrap(), 3);
        assert_eq!(clique_lower_bound(&crate::graph::Graph::empty(3)).unwrap(), 1);
        let big = union_cycles(1, 65).unwrap();
        assert!(matches!(clique_lower_bound(&big), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn chromatic_numbers() {
        assert_eq!(chromatic_number_exact(&union_cycles(1, 5).unwrap()).unwrap(), 3);
        assert_eq!(chromatic_number_exact(&union_complete_bipartite(1, 2, 4).unwrap()).unwrap(), 2);
        assert_eq!(chromatic_number_exact(&complete_multipartite(&[2, 4, 2]).unwrap()).unwrap(), 3);
        assert_eq!(chromatic_number_exact(&crate::graph::Graph::empty(0)).unwrap(), 0);
        let big = union_cycles(1, 31).unwrap();
        assert!(matches!(chromatic_number_exact(&big), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn obstruction() {
        let fig = necklace(&NecklaceSpec::new(vec![4, 4, 4])).unwrap();
        let side = fig.bipartition().unwrap();
        let x = side.iter().filter(|&&s| !s).count();
        assert_eq!((x.min(10 - x), x.max(10 - x)), (4, 6));
        assert!(bipartite_two_color_obstruction(&fig).unwrap());
        assert!(!bipartite_two_color_obstruction(&union_complete_bipartite(1, 2, 4).unwrap()).unwrap());
        assert!(!bipartite_two_color_obstruction(&union_paths(1, 4).unwrap()).unwrap());
        assert_eq!(bipartite_two_color_obstruction(&union_cycles(1, 5).unwrap()), Err(Error::NotBipartite));
        assert_eq!(bipartite_two_color_obstruction(&union_cycles(2, 4).unwrap()), Err(Error::NotConnected));
    }

    #[test]
    fn parity_union_and_star() {
        assert_eq!(cycle_parity_lower_bound(&union_cycles(1, 5).unwrap()), 3);
        assert_eq!(cycle_parity_lower_bound(&union_cycles(1, 6).unwrap()), 2);
        assert_eq!(cycle_parity_lower_bound(&crate::graph::Graph::empty(4)), 0);
        assert_eq!(union_lower_bound(&[3, 3]), 3);
        assert_eq!(union_lower_bound(&[2]), 2);
        assert_eq!(union_lower_bound(&[3, 10]), 10);
        let w5 = join_with_empty(&union_cycles(1, 5).unwrap(), 1);
        assert_eq!(star_subgraph_bound(&w5).unwrap(), 6);
        assert_eq!(star_subgraph_bound(&union_complete_bipartite(1, 2, 4).unwrap()).unwrap(), 5);
        assert_eq!(star_subgraph_bound(&union_cycles(1, 4).unwrap()).unwrap(), 3);
        assert!(star_subgraph_bound(&crate::graph::Graph::new(3, [(0, 1)]).unwrap()).is_err());
    }

    #[test]
    fn reports() {
        let fig = necklace(&NecklaceSpec::new(vec![4, 4, 4])).unwrap();
        let r = bounds_report(&fig);
        assert_eq!(r.best_lower, 3);
        assert_eq!(r.obstruction.value, Some(3));
        assert_eq!(r.chromatic.value, Some(2));
        assert_eq!(bounds_report(&complete(4).unwrap()).best_lower, 4);
        let r = bounds_report(&union_stars(3, 3).unwrap());
        assert_eq!(r.best_lower, 10);
        assert_eq!(r.star_subgraph, Some(4));
        let big = union_cycles(1, 40).unwrap();
        let r = bounds_report(&big);
        assert!(r.chromatic.budget_exceeded);
        assert_eq!(r.best_lower, 2);
    }
}
