//! Exact and heuristic search for the minimum number of colours.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::labeling::EdgeLabeling;
use crate::verifier::{bounds_report, count_distinct, induced_weights, is_local_antimagic};

pub const DEFAULT_MAX_EDGES: usize = 12;
pub const THREADS_ENV: &str = "ANTIMAGIC_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Exact,
    BoundOnly,
    BudgetExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub chi_la: usize,
    pub status: SolveStatus,
    pub witness: Option<Vec<u64>>,
    pub nodes: u64,
}

/// Which early cuts the search applies. Leaves are always checked in
/// full, so turning a rule off only costs time.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Prune {
    pub adjacent_equal: bool,
    pub color_count: bool,
    pub partial_weight: bool,
}

impl Default for Prune {
    fn default() -> Prune {
        Prune { adjacent_equal: true, color_count: true, partial_weight: true }
    }
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub max_edges: usize,
    pub time_budget: Option<Duration>,
    /// Worker count; `None` reads `ANTIMAGIC_THREADS`, then uses rayon's default.
    pub threads: Option<usize>,
    pub prune: Prune,
}

impl Default for SolveOptions {
    fn default() -> SolveOptions {
        SolveOptions { max_edges: DEFAULT_MAX_EDGES, time_budget: None, threads: None, prune: Prune::default() }
    }
}

fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&t| t > 0)
}

/// Edge order: repeatedly take an unplaced edge at the vertex with the
/// fewest unplaced edges (ties to the lowest vertex, then lowest edge).
/// Only which edges are placed matters, so this is fixed up front.
fn edge_order(g: &Graph) -> Vec<usize> {
    let inc = g.incident_edges();
    let mut left: Vec<usize> = inc.iter().map(Vec::len).collect();
    let mut placed = vec![false; g.num_edges()];
    let mut order = Vec::with_capacity(g.num_edges());
    while order.len() < g.num_edges() {
        let v = (0..g.num_vertices()).filter(|&v| left[v] > 0).min_by_key(|&v| (left[v], v)).unwrap();
        let e = *inc[v].iter().find(|&&e| !placed[e]).unwrap();
        placed[e] = true;
        let (a, b) = g.edge(e);
        left[a] -= 1;
        left[b] -= 1;
        order.push(e);
    }
    order
}

struct Shared {
    /// Smallest first-edge label whose subtree has found a witness.
    best_first: AtomicUsize,
    timed_out: AtomicBool,
    deadline: Option<Instant>,
}

struct Search<'a> {
    g: &'a Graph,
    order: &'a [usize],
    /// Neighbours of each vertex.
    adj: &'a [Vec<usize>],
    /// Vertices that become final once position `p` of `order` is labeled.
    finals: &'a [Vec<usize>],
    m: usize,
    k: usize,
    prune: Prune,
    labels: Vec<u64>,
    weight: Vec<u64>,
    remaining: Vec<usize>,
    used: u64,
    /// multiplicity of each final weight value
    counts: Vec<u32>,
    distinct: usize,
    final_weights: Vec<u64>,
    nodes: u64,
    first: usize,
    shared: &'a Shared,
}

impl Search<'_> {
    fn aborted(&self) -> bool {
        if self.shared.best_first.load(Ordering::Relaxed) < self.first {
            return true;
        }
        if self.shared.timed_out.load(Ordering::Relaxed) {
            return true;
        }
        if self.nodes % 4096 == 0 {
            if let Some(d) = self.shared.deadline {
                if Instant::now() >= d {
                    self.shared.timed_out.store(true, Ordering::Relaxed);
                    return true;
                }
            }
        }
        false
    }

    fn dfs(&mut self, pos: usize) -> bool {
        self.nodes += 1;
        if self.aborted() {
            return false;
        }
        if pos == self.m {
            return self.leaf_ok();
        }
        let e = self.order[pos];
        let (a, b) = self.g.edge(e);
        let mut free = !self.used & ((1u64 << self.m) - 1);
        if pos == 0 {
            free = 1 << (self.first - 1);
        }
        while free != 0 {
            let bit = free.trailing_zeros() as usize;
            free &= free - 1;
            let x = bit as u64 + 1;
            self.assign(e, a, b, x, bit);
            let mut ok = true;
            for &v in &self.finals[pos] {
                self.add_final(v);
            }
            if self.prune.adjacent_equal && self.final_conflict(pos) {
                ok = false;
            }
            if ok && self.prune.color_count && self.distinct > self.k {
                ok = false;
            }
            if ok && self.prune.partial_weight && !self.partial_feasible() {
                ok = false;
            }
            if ok && self.dfs(pos + 1) {
                return true;
            }
            for &v in &self.finals[pos] {
                self.remove_final(v);
            }
            self.unassign(e, a, b, x, bit);
        }
        false
    }

    fn assign(&mut self, e: usize, a: usize, b: usize, x: u64, bit: usize) {
        self.labels[e] = x;
        self.used |= 1 << bit;
        self.weight[a] += x;
        self.weight[b] += x;
        self.remaining[a] -= 1;
        self.remaining[b] -= 1;
    }

    fn unassign(&mut self, e: usize, a: usize, b: usize, x: u64, bit: usize) {
        self.labels[e] = 0;
        self.used &= !(1 << bit);
        self.weight[a] -= x;
        self.weight[b] -= x;
        self.remaining[a] += 1;
        self.remaining[b] += 1;
    }

    fn add_final(&mut self, v: usize) {
        let w = self.weight[v] as usize;
        if self.counts[w] == 0 {
            self.distinct += 1;
            self.final_weights.push(w as u64);
        }
        self.counts[w] += 1;
    }

    fn remove_final(&mut self, v: usize) {
        let w = self.weight[v] as usize;
        self.counts[w] -= 1;
        if self.counts[w] == 0 {
            self.distinct -= 1;
            let i = self.final_weights.iter().rposition(|&x| x == w as u64).unwrap();
            self.final_weights.swap_remove(i);
        }
    }

    /// A newly final vertex equal to a final neighbour.
    fn final_conflict(&self, pos: usize) -> bool {
        self.finals[pos].iter().any(|&v| {
            self.adj[v].iter().any(|&u| self.remaining[u] == 0 && self.weight[u] == self.weight[v])
        })
    }

    /// Bounds the final weight of every open vertex by the smallest and
    /// largest sums its free labels allow. Cuts when that range is a single
    /// value equal to a final neighbour, or when all `k` colours are in use
    /// and the range avoids every one of them.
    fn partial_feasible(&self) -> bool {
        let free = !self.used & ((1u64 << self.m) - 1);
        let n_free = free.count_ones() as usize;
        let mut low_prefix = [0u64; 65];
        let mut high_prefix = [0u64; 65];
        {
            let mut bits = free;
            let mut i = 0;
            while bits != 0 {
                let b = bits.trailing_zeros() as u64;
                bits &= bits - 1;
                low_prefix[i + 1] = low_prefix[i] + b + 1;
                i += 1;
            }
            let total = low_prefix[n_free];
            for r in 0..=n_free {
                high_prefix[r] = total - low_prefix[n_free - r];
            }
        }
        for v in 0..self.weight.len() {
            let r = self.remaining[v];
            if r == 0 {
                continue;
            }
            let lo = self.weight[v] + low_prefix[r];
            let hi = self.weight[v] + high_prefix[r];
            if lo == hi && self.adj[v].iter().any(|&u| self.remaining[u] == 0 && self.weight[u] == lo) {
                return false;
            }
            if self.distinct >= self.k && !self.final_weights.iter().any(|&w| lo <= w && w <= hi) {
                return false;
            }
        }
        true
    }

    fn leaf_ok(&self) -> bool {
        let f = EdgeLabeling::new(self.labels.clone());
        let v = is_local_antimagic(self.g, &f);
        v.is_valid() && v.num_colors <= self.k
    }
}

struct Plan {
    order: Vec<usize>,
    adj: Vec<Vec<usize>>,
    finals: Vec<Vec<usize>>,
    max_weight: usize,
}

fn plan(g: &Graph) -> Plan {
    let order = edge_order(g);
    let mut left: Vec<usize> = g.degrees();
    let mut finals = vec![Vec::new(); order.len()];
    for (pos, &e) in order.iter().enumerate() {
        let (a, b) = g.edge(e);
        for v in [a, b] {
            left[v] -= 1;
            if left[v] == 0 {
                finals[pos].push(v);
            }
        }
    }
    let m = g.num_edges();
    Plan { order, adj: g.neighbors(), finals, max_weight: m * (m + 1) / 2 }
}

/// Looks for a labeling with at most `k` colours. Returns the witness from
/// the smallest first-edge label that has one, plus the node count over
/// the subtrees up to and including that label.
fn search_k(g: &Graph, p: &Plan, k: usize, opts: &SolveOptions, deadline: Option<Instant>, threads: usize) -> (Option<Vec<u64>>, u64, bool) {
    let m = g.num_edges();
    if m == 0 {
        let ok = g.num_vertices() == 0 || k >= 1;
        return (ok.then(Vec::new), 1, false);
    }
    let shared = Shared { best_first: AtomicUsize::new(usize::MAX), timed_out: AtomicBool::new(false), deadline };
    let run = |first: usize| -> (Option<Vec<u64>>, u64) {
        let mut s = Search {
            g,
            order: &p.order,
            adj: &p.adj,
            finals: &p.finals,
            m,
            k,
            prune: opts.prune,
            labels: vec![0; m],
            weight: vec![0; g.num_vertices()],
            remaining: g.degrees(),
            used: 0,
            counts: vec![0; p.max_weight + 1],
            distinct: 0,
            final_weights: Vec::new(),
            nodes: 0,
            first,
            shared: &shared,
        };
        let found = s.dfs(0);
        if found {
            shared.best_first.fetch_min(first, Ordering::Relaxed);
        }
        (found.then(|| s.labels.clone()), s.nodes)
    };
    let results: Vec<(Option<Vec<u64>>, u64)> = if threads <= 1 {
        let mut out = Vec::new();
        for first in 1..=m {
            let r = run(first);
            let done = r.0.is_some();
            out.push(r);
            if done {
                break;
            }
        }
        out
    } else {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool");
        pool.install(|| (1..=m).into_par_iter().map(run).collect())
    };
    let timed_out = shared.timed_out.load(Ordering::Relaxed);
    let winner = results.iter().position(|r| r.0.is_some());
    let upto = winner.map_or(results.len(), |w| w + 1);
    let nodes = results[..upto].iter().map(|r| r.1).sum();
    let witness = winner.and_then(|w| results[w].0.clone());
    (witness, nodes, timed_out)
}

pub fn chi_la_exact(g: &Graph, opts: &SolveOptions) -> Result<SolveResult> {
    if g.has_k2_component() {
        return Err(Error::K2Component);
    }
    let m = g.num_edges();
    if m > opts.max_edges || m > 63 {
        return Err(Error::TooLarge { size: m, limit: opts.max_edges.min(63) });
    }
    let threads = opts.threads.or_else(threads_from_env).unwrap_or_else(rayon::current_num_threads).max(1);
    let deadline = opts.time_budget.map(|d| Instant::now() + d);
    let lower = bounds_report(g).best_lower.max(1);
    let p = plan(g);
    let mut nodes = 0;
    for k in lower..=g.num_vertices().max(1) {
        let (witness, n, timed_out) = search_k(g, &p, k, opts, deadline, threads);
        nodes += n;
        // every smaller k was exhausted, so any witness here is optimal
        if let Some(w) = witness {
            let colors = count_distinct(&induced_weights(g, &EdgeLabeling::new(w.clone()))?.weights);
            return Ok(SolveResult { chi_la: colors, status: SolveStatus::Exact, witness: Some(w), nodes });
        }
        if timed_out {
            return Ok(SolveResult { chi_la: k, status: SolveStatus::BudgetExceeded, witness: None, nodes });
        }
    }
    Err(Error::FormulaBreakdown("no local antimagic labeling exists".into()))
}

/// Randomised restarts with pairwise label swaps. Minimises properness
/// violations first, then the colour count. Deterministic for a seed.
pub fn chi_la_upper_heuristic(g: &Graph, iterations: usize, seed: u64) -> Result<SolveResult> {
    let m = g.num_edges();
    if iterations == 0 || m < 2 {
        return Err(Error::NoValidLabelingFound(iterations));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let score = |labels: &[u64]| -> (usize, usize) {
        let v = is_local_antimagic(g, &EdgeLabeling::new(labels.to_vec()));
        let bad = g.edges().iter().filter(|&&(a, b)| v.weights[a] == v.weights[b]).count();
        (bad, v.num_colors)
    };
    let restart_every = (iterations / 8).max(200);
    let mut best: Option<(usize, Vec<u64>)> = None;
    let mut labels: Vec<u64> = (1..=m as u64).collect();
    labels.shuffle(&mut rng);
    let mut cur = score(&labels);
    let mut nodes = 0u64;
    for it in 0..iterations {
        nodes += 1;
        if it > 0 && it % restart_every == 0 {
            labels.shuffle(&mut rng);
            cur = score(&labels);
        }
        let i = rng.random_range(0..m);
        let j = rng.random_range(0..m);
        if i == j {
            continue;
        }
        labels.swap(i, j);
        let next = score(&labels);
        if next <= cur {
            cur = next;
        } else {
            labels.swap(i, j);
        }
        if cur.0 == 0 && best.as_ref().is_none_or(|(c, _)| cur.1 < *c) {
            best = Some((cur.1, labels.clone()));
        }
    }
    match best {
        Some((colors, w)) => Ok(SolveResult { chi_la: colors, status: SolveStatus::BoundOnly, witness: Some(w), nodes }),
        None => Err(Error::NoValidLabelingFound(iterations)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimVerdict {
    Confirmed,
    Refuted { actual: usize },
    Unknown,
}

pub fn verify_claim(g: &Graph, claimed: usize, opts: &SolveOptions) -> ClaimVerdict {
    match chi_la_exact(g, opts) {
        Ok(r) if r.status == SolveStatus::Exact => {
            if r.chi_la == claimed {
                ClaimVerdict::Confirmed
            } else {
                ClaimVerdict::Refuted { actual: r.chi_la }
            }
        }
        Ok(r) if r.witness.is_none() && claimed < r.chi_la => ClaimVerdict::Refuted { actual: r.chi_la },
        _ => {
            if claimed < bounds_report(g).best_lower {
                ClaimVerdict::Refuted { actual: bounds_report(g).best_lower }
            } else {
                ClaimVerdict::Unknown
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{complete, union_cycles, union_paths, union_stars};

    /// Minimum over all |E|! labelings.
    fn brute(g: &Graph) -> usize {
        let m = g.num_edges();
        let mut perm: Vec<u64> = (1..=m as u64).collect();
        let mut best = usize::MAX;
        let mut c = vec![0; m];
        let mut check = |p: &[u64]| {
            let v = is_local_antimagic(g, &EdgeLabeling::new(p.to_vec()));
            if v.is_valid() {
                best = best.min(v.num_colors);
            }
        };
        check(&perm);
        let mut i = 0;
        while i < m {
            if c[i] < i {
                if i % 2 == 0 { perm.swap(0, i) } else { perm.swap(c[i], i) }
                check(&perm);
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        best
    }

    fn exact(g: &Graph) -> SolveResult {
        chi_la_exact(g, &SolveOptions { threads: Some(1), ..Default::default() }).unwrap()
    }

    #[test]
    fn small_families() {
        let cases = [
            (complete(3).unwrap(), 3),
            (union_paths(1, 3).unwrap(), 3),
            (union_paths(1, 4).unwrap(), 3),
            (union_cycles(1, 4).unwrap(), 3),
            (union_stars(1, 3).unwrap(), 4),
            (complete(4).unwrap(), 4),
        ];
        for (g, want) in cases {
            let r = exact(&g);
            assert_eq!(r.chi_la, want, "{:?}", g.edges());
            assert_eq!(r.status, SolveStatus::Exact);
            assert_eq!(brute(&g), want);
            let w = EdgeLabeling::new(r.witness.unwrap());
            let v = is_local_antimagic(&g, &w);
            assert!(v.is_valid());
            assert_eq!(v.num_colors, want);
        }
    }

    #[test]
    fn two_small_stars_need_seven() {
        let g = union_stars(2, 3).unwrap();
        assert_eq!(exact(&g).chi_la, 7);
    }

    #[test]
    fn rejects_k2_and_large() {
        let g = Graph::new(2, vec![(0, 1)]).unwrap();
        assert!(matches!(chi_la_exact(&g, &SolveOptions::default()), Err(Error::K2Component)));
        let g = complete(6).unwrap();
        assert!(matches!(chi_la_exact(&g, &SolveOptions::default()), Err(Error::TooLarge { size: 15, .. })));
    }

    #[test]
    fn prune_rules_do_not_change_answer() {
        let g = union_cycles(2, 3).unwrap();
        let none = Prune { adjacent_equal: false, color_count: false, partial_weight: false };
        let a = exact(&g);
        let b = chi_la_exact(&g, &SolveOptions { threads: Some(1), prune: none, ..Default::default() }).unwrap();
        assert_eq!(a.chi_la, b.chi_la);
        assert!(a.nodes <= b.nodes);
    }

    #[test]
    fn threads_agree() {
        let g = union_paths(2, 4).unwrap();
        let one = chi_la_exact(&g, &SolveOptions { threads: Some(1), ..Default::default() }).unwrap();
        let four = chi_la_exact(&g, &SolveOptions { threads: Some(4), ..Default::default() }).unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn tiny_budget() {
        let g = Graph::new(7, vec![(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 0), (1, 4), (3, 6), (2, 5), (0, 4)]).unwrap();
        let r = chi_la_exact(&g, &SolveOptions { time_budget: Some(Duration::ZERO), threads: Some(1), ..Default::default() }).unwrap();
        assert_eq!(r.status, SolveStatus::BudgetExceeded);
        assert!(r.witness.is_none());
    }

    #[test]
    fn heuristic_is_valid_and_seeded() {
        let g = union_cycles(1, 7).unwrap();
        let a = chi_la_upper_heuristic(&g, 2000, 7).unwrap();
        let b = chi_la_upper_heuristic(&g, 2000, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.status, SolveStatus::BoundOnly);
        let v = is_local_antimagic(&g, &EdgeLabeling::new(a.witness.unwrap()));
        assert!(v.is_valid());
        assert!(a.chi_la >= 3);
    }

    #[test]
    fn claims() {
        let g = complete(3).unwrap();
        assert_eq!(verify_claim(&g, 3, &SolveOptions::default()), ClaimVerdict::Confirmed);
        assert_eq!(verify_claim(&g, 4, &SolveOptions::default()), ClaimVerdict::Refuted { actual: 3 });
        let big = complete(7).unwrap();
        assert_eq!(verify_claim(&big, 7, &SolveOptions::default()), ClaimVerdict::Unknown);
        assert_eq!(verify_claim(&big, 5, &SolveOptions::default()), ClaimVerdict::Refuted { actual: 7 });
    }

    #[test]
    fn json_shape() {
        let r = exact(&complete(3).unwrap());
        let s = serde_json::to_value(&r).unwrap();
        assert_eq!(s["status"], "exact");
        assert_eq!(s["chi_la"], 3);
        assert!(s["witness"].is_array());
    }
}
