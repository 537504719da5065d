//! Explicit local antimagic labelings for the supported graph families.
//!
//! Each labeler builds its graph, computes labels, and runs the verifier
//! before returning. Where a published formula is known to be defective a
//! corrected variant is tried after the literal one, and the report says
//! which was used.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{self, NecklaceSpec};
use crate::graph::{corona_pendant, corona_with_empty, join_with_empty, Graph};
use crate::labeling::EdgeLabeling;
use crate::magic::{construct_mr, construct_mrs, mr_exists, mrs_exists};
use crate::verifier::{chromatic_number_exact, is_local_antimagic, CHROMATIC_LIMIT};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LabelingReport {
    #[serde(skip)]
    pub graph: Graph,
    pub graph_hash: String,
    pub labels: Vec<u64>,
    pub weights: Vec<u64>,
    pub num_colors: usize,
    pub claimed_bound: usize,
    pub formula_corrected: bool,
}

impl LabelingReport {
    pub fn labeling(&self) -> EdgeLabeling {
        EdgeLabeling::new(self.labels.clone())
    }

    /// Wraps an externally supplied labeling, checking it first.
    pub fn from_labeling(graph: Graph, f: &EdgeLabeling) -> Result<LabelingReport> {
        let v = is_local_antimagic(&graph, f);
        if !v.is_valid() {
            return Err(Error::InfeasibleParameters(format!(
                "labeling is not local antimagic (bijection: {}, first violation: {:?})",
                v.bijection, v.first_violation
            )));
        }
        let colors = v.num_colors;
        finish(graph, f.labels.clone(), colors, false)
    }
}

fn finish(graph: Graph, labels: Vec<u64>, claimed_bound: usize, formula_corrected: bool) -> Result<LabelingReport> {
    let f = EdgeLabeling::new(labels);
    let v = is_local_antimagic(&graph, &f);
    if !v.is_valid() {
        return Err(Error::FormulaBreakdown(format!(
            "labeling failed verification (bijection: {}, first violation: {:?})",
            v.bijection, v.first_violation
        )));
    }
    if v.num_colors > claimed_bound {
        return Err(Error::FormulaBreakdown(format!("{} colours exceed the bound {claimed_bound}", v.num_colors)));
    }
    Ok(LabelingReport {
        graph_hash: graph.content_hash(),
        graph,
        labels: f.labels,
        weights: v.weights,
        num_colors: v.num_colors,
        claimed_bound,
        formula_corrected,
    })
}

/// Uses `literal` when it verifies, else `corrected` (flagged).
fn literal_or_corrected(
    graph: Graph,
    literal: Option<Vec<u64>>,
    corrected: Option<Vec<u64>>,
    claimed_bound: usize,
) -> Result<LabelingReport> {
    let mut last = Error::FormulaBreakdown("formula is not integral".into());
    if let Some(labels) = literal {
        match finish(graph.clone(), labels, claimed_bound, false) {
            Ok(r) => return Ok(r),
            Err(e) => last = e,
        }
    }
    match corrected {
        Some(labels) => finish(graph, labels, claimed_bound, true),
        None => Err(last),
    }
}

/// `2x -> x` for formulas evaluated at twice their value; `None` if the
/// value is odd or not positive.
fn halve(twice: i64) -> Option<u64> {
    (twice > 0 && twice % 2 == 0).then_some((twice / 2) as u64)
}

/// Collects labels indexed by edge position from `(u, v, label)` triples.
fn place(g: &Graph, triples: impl IntoIterator<Item = (usize, usize, Option<u64>)>) -> Option<Vec<u64>> {
    let mut labels = vec![0u64; g.num_edges()];
    for (u, v, x) in triples {
        labels[g.edge_index(u, v).expect("edge of the family")] = x?;
    }
    Some(labels)
}

pub fn label_union_paths(r: usize, n: usize) -> Result<LabelingReport> {
    if r == 0 || n < 3 {
        return Err(Error::InfeasibleParameters(format!("paths need r >= 1 and n >= 3, got r={r}, n={n}")));
    }
    let g = families::union_paths(r, n)?;
    let (ri, ni) = (r as i64, n as i64);
    let twice = |i: i64, j: i64| -> i64 {
        if n % 2 == 0 {
            match (i % 2, j % 2) {
                (0, 0) => (2 * ri - j) * (ni - 1) - i,
                (1, 0) => j * (ni - 1) + i + 1,
                (0, 1) => (j - 1) * (ni - 1) + (i + 1) + (ni - 1),
                _ => (2 * ri - (j - 1)) * (ni - 1) - (i - 1) - ni,
            }
        } else if i % 2 == 0 {
            2 * ri * (ni - 1) - j * (ni - 1) - i
        } else {
            j * (ni - 1) + i + 1
        }
    };
    let triples = (0..r).flat_map(|j| {
        (0..n - 1).map(move |i| (j * n + i, j * n + i + 1, halve(twice(i as i64, j as i64))))
    });
    let literal = place(&g, triples);
    literal_or_corrected(g, literal, None, 2 * r + 2)
}

pub fn label_union_cycles_even(r: usize, n: usize) -> Result<LabelingReport> {
    if r == 0 || n < 4 || n % 2 == 1 {
        return Err(Error::InfeasibleParameters(format!("even cycles need r >= 1 and even n >= 4, got r={r}, n={n}")));
    }
    let g = families::union_cycles(r, n)?;
    let (ri, ni) = (r as i64, n as i64);
    // copies are numbered from 1 in the formula
    let twice = |i: i64, j: i64| -> i64 {
        if i % 2 == 0 {
            (j - 1) * ni + i + 2
        } else {
            2 * ri * ni - (j - 1) * ni - (i - 1)
        }
    };
    let triples = (0..r).flat_map(|j| {
        (0..n).map(move |i| (j * n + i, j * n + (i + 1) % n, halve(twice(i as i64, j as i64 + 1))))
    });
    let literal = place(&g, triples);
    literal_or_corrected(g, literal, None, 3)
}

fn odd_cycle_labels(g: &Graph, r: usize, n: usize, first_copy: i64) -> Option<Vec<u64>> {
    let (ri, ni) = (r as i64, n as i64);
    let twice = |i: i64, j: i64| -> i64 {
        match (i % 2, j.rem_euclid(2)) {
            (0, 0) => j * ni + i + 2,
            (1, 0) => (2 * ri - j) * ni - (i - 1),
            (0, _) => (2 * ri - (j - 1)) * ni - i - (ni - 1),
            _ => (j - 1) * ni + (i + 1) + (ni + 1),
        }
    };
    let triples = (0..r).flat_map(|j| {
        (0..n).map(move |i| (j * n + i, j * n + (i + 1) % n, halve(twice(i as i64, j as i64 + first_copy))))
    });
    place(g, triples)
}

pub fn label_union_cycles_odd(r: usize, n: usize) -> Result<LabelingReport> {
    if r == 0 || n < 3 || n % 2 == 0 {
        return Err(Error::InfeasibleParameters(format!("odd cycles need r >= 1 and odd n >= 3, got r={r}, n={n}")));
    }
    let g = families::union_cycles(r, n)?;
    // Copies are numbered from 1 as in the vertex set; numbering from 0 is
    // the fallback reading.
    let literal = odd_cycle_labels(&g, r, n, 1);
    let corrected = odd_cycle_labels(&g, r, n, 0);
    literal_or_corrected(g, literal, corrected, r + 2)
}

pub fn label_union_stars(r: usize, n: usize) -> Result<LabelingReport> {
    if r == 0 || n < 2 {
        return Err(Error::InfeasibleParameters(format!("stars need r >= 1 and n >= 2, got r={r}, n={n}")));
    }
    let g = families::union_stars(r, n)?;
    let center = |i: usize| families::star_center(n, i);
    let mut labels = vec![0u64; g.num_edges()];
    let mut set = |i: usize, j: usize, x: u64| {
        labels[g.edge_index(center(i), center(i) + j).unwrap()] = x;
    };
    let (rn, nn) = ((r * n) as u64, n as u64);
    let claimed;
    if n % 2 == 0 {
        for i in 0..r as u64 {
            for j in 1..=nn {
                let x = if j <= nn / 2 { i * nn / 2 + j } else { rn - (nn - j) - i * nn / 2 };
                set(i as usize, j as usize, x);
            }
        }
        claimed = r * n + 1;
    } else {
        // odd n: the first `full` stars take columns of an n x full rectangle
        let full = if r % 2 == 1 { r } else { r - 1 };
        if full == 1 {
            for j in 1..=n {
                set(0, j, j as u64);
            }
        } else {
            let m = construct_mr(n, full, 0)?;
            for i in 0..full {
                for (j, x) in m.column(i).into_iter().enumerate() {
                    set(i, j + 1, x);
                }
            }
        }
        if full < r {
            for j in 1..=n {
                set(r - 1, j, (n * (r - 1) + j) as u64);
            }
        }
        claimed = if full == r { r * n + 1 } else { r * n + 2 };
    }
    finish(g, labels, claimed, false)
}

pub fn label_complete(n: usize) -> Result<LabelingReport> {
    let g = families::complete(n)?;
    let nn = n as u64;
    // The printed label depends only on the block (smaller endpoint), so
    // it cannot be a bijection; the correction adds the position within
    // the block.
    let literal: Vec<u64> = g.edges().iter().map(|&(u, _)| block_start(nn, u as u64)).collect();
    let corrected: Vec<u64> =
        g.edges().iter().map(|&(u, v)| block_start(nn, u as u64) + (v - u - 1) as u64).collect();
    literal_or_corrected(g, Some(literal), Some(corrected), n)
}

fn block_start(n: u64, u: u64) -> u64 {
    // j = u + 1: (j - 1) n - j (j - 1) / 2 + 1
    u * n - (u + 1) * u / 2 + 1
}

pub fn label_union_complete_bipartite(r: usize, m: usize, n: usize) -> Result<LabelingReport> {
    if m == n {
        return Err(Error::InfeasibleParameters(format!(
            "equal sides m = n = {m} give both classes the same weight"
        )));
    }
    if !mrs_exists(m, n, r) {
        return Err(Error::InfeasibleParameters(format!("no magic rectangle set ({m},{n};{r}) exists")));
    }
    let g = families::union_complete_bipartite(r, m, n)?;
    let (s, l) = (m.min(n), m.max(n));
    let set = construct_mrs(s, l, r)?;
    let mut labels = vec![0u64; g.num_edges()];
    for (k, rect) in set.entries.iter().enumerate() {
        let base = k * (m + n);
        // first vertex of the smaller and the larger side
        let (small, large) = if m < n { (base, base + m) } else { (base + m, base) };
        for i in 0..s {
            for j in 0..l {
                labels[g.edge_index(small + i, large + j).unwrap()] = rect[i][j];
            }
        }
    }
    finish(g, labels, 2, false)
}

pub fn label_necklace(spec: &NecklaceSpec) -> Result<LabelingReport> {
    let g = families::necklace(spec)?;
    let n = g.num_edges() as u64;
    let tour = g.tour().expect("necklace carries its tour").to_vec();
    let mut labels = vec![0u64; g.num_edges()];
    for (pos, &e) in tour.iter().enumerate() {
        let i = pos as u64 + 1;
        labels[e] = if i % 2 == 1 { (i + 1) / 2 } else { n - (i / 2 - 1) };
    }
    finish(g, labels, 6, false)
}

/// Extends a labeling of `g` to `g` with `m` pendants per vertex. The
/// pendants of vertex `i` take column `i` of an `m x p` magic rectangle,
/// shifted past the old labels.
pub fn label_corona(g: &Graph, f: &EdgeLabeling, m: usize) -> Result<LabelingReport> {
    let base = LabelingReport::from_labeling(g.clone(), f)?;
    let (p, q) = (g.num_vertices(), g.num_edges());
    if m == 0 {
        return Err(Error::InfeasibleParameters("m must be positive".into()));
    }
    if m % 2 != p % 2 {
        return Err(Error::InfeasibleParameters(format!("m = {m} and p = {p} differ in parity")));
    }
    if !mr_exists(m, p) {
        return Err(Error::InfeasibleParameters(format!("no {m}x{p} magic rectangle exists")));
    }
    let rect = construct_mr(m, p, q as u64)?;
    let h = corona_with_empty(g, m);
    let mut labels = vec![0u64; h.num_edges()];
    for (&(u, v), &x) in g.edges().iter().zip(&f.labels) {
        labels[h.edge_index(u, v).unwrap()] = x;
    }
    for i in 0..p {
        for (j, x) in rect.column(i).into_iter().enumerate() {
            labels[h.edge_index(i, corona_pendant(g, m, i, j)).unwrap()] = x;
        }
    }
    finish(h, labels, m * p + base.num_colors, false)
}

/// Joins `q` new vertices to every vertex of `g`. Edges at new vertex `j`
/// take column `j` of a `|V| x q` magic rectangle shifted by `|E|`, so old
/// weights move by the row sum and new vertices all get the column sum.
pub fn extend_join(g: &Graph, f: &EdgeLabeling, q: usize) -> Result<LabelingReport> {
    let base = LabelingReport::from_labeling(g.clone(), f)?;
    let n = g.num_vertices();
    if q == 0 || q % 2 == 1 {
        return Err(Error::InfeasibleParameters(format!("q = {q} must be even and positive")));
    }
    if n % 2 == 1 {
        return Err(Error::InfeasibleParameters(format!("|V| = {n} must be even")));
    }
    if !mr_exists(n, q) {
        return Err(Error::InfeasibleParameters(format!("no {n}x{q} magic rectangle exists")));
    }
    let rect = construct_mr(n, q, g.num_edges() as u64)?;
    let (row, col) = (rect.row_sum(), rect.col_sum());
    if let Some(x) = (0..n).find(|&x| base.weights[x] + row == col) {
        return Err(Error::WeightCollision { weight: col, vertex: x });
    }
    let h = join_with_empty(g, q);
    let mut labels = vec![0u64; h.num_edges()];
    for (&(u, v), &x) in g.edges().iter().zip(&f.labels) {
        labels[h.edge_index(u, v).unwrap()] = x;
    }
    for j in 0..q {
        for x in 0..n {
            labels[h.edge_index(x, n + j).unwrap()] = rect.entries[x][j];
        }
    }
    finish(h, labels, base.num_colors + 1, false)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceStep {
    pub report: LabelingReport,
    /// Exact chromatic number when the graph is small enough to compute it.
    pub chromatic: Option<usize>,
}

/// Repeated joins starting from a labeling whose colour count equals the
/// chromatic number. Each step adds one colour; where the chromatic number
/// is computable it must match.
pub fn build_chi_equal_sequence(g0: &Graph, f0: &EdgeLabeling, qs: &[usize]) -> Result<Vec<SequenceStep>> {
    let n = g0.num_vertices();
    if n < 4 || n % 2 == 1 {
        return Err(Error::InfeasibleParameters(format!("starting graph needs an even number >= 4 of vertices, got {n}")));
    }
    let mut current = LabelingReport::from_labeling(g0.clone(), f0)?;
    let mut steps = Vec::with_capacity(qs.len() + 1);
    let chi = |r: &LabelingReport| -> Result<Option<usize>> {
        if r.graph.num_vertices() > CHROMATIC_LIMIT {
            return Ok(None);
        }
        let c = chromatic_number_exact(&r.graph)?;
        if c != r.num_colors {
            return Err(Error::FormulaBreakdown(format!(
                "{} colours but chromatic number {c}",
                r.num_colors
            )));
        }
        Ok(Some(c))
    };
    steps.push(SequenceStep { chromatic: chi(&current)?, report: current.clone() });
    for &q in qs {
        current = extend_join(&current.graph, &current.labeling(), q)?;
        steps.push(SequenceStep { chromatic: chi(&current)?, report: current.clone() });
    }
    Ok(steps)
}

/// `K_{t1, t2, ..., tr}` with `r` colours: a two-colour labeling of
/// `K_{t1,t2}` followed by one join per further part.
pub fn label_complete_multipartite(parts: &[usize]) -> Result<LabelingReport> {
    let bad = |msg: String| Err(Error::InfeasibleParameters(msg));
    if parts.len() < 2 {
        return bad("need at least two parts".into());
    }
    let (t1, t2) = (parts[0], parts[1]);
    if t2 < 2 || t1 <= t2 {
        return bad(format!("need t1 > t2 >= 2, got t1={t1}, t2={t2}"));
    }
    if t1 % 2 != t2 % 2 {
        return bad(format!("t1={t1} and t2={t2} differ in parity"));
    }
    if let Some((i, &t)) = parts.iter().enumerate().skip(2).find(|(_, &t)| t % 2 == 1) {
        return bad(format!("part {} has odd size {t}", i + 1));
    }
    let mut report = label_union_complete_bipartite(1, t1, t2)?;
    for &t in &parts[2..] {
        report = extend_join(&report.graph, &report.labeling(), t)?;
    }
    let g = families::complete_multipartite(parts)?;
    debug_assert_eq!(g.edges(), report.graph.edges());
    let claimed = parts.len();
    finish(g, report.labels, claimed, false)
}
