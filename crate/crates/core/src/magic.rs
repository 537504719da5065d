//! Magic rectangles and magic rectangle sets.
//!
//! Constructions work on zero-based values `0 .. ab` and shift at the end.
//! Every public constructor checks its output before returning it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

type Grid = Vec<Vec<u64>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MagicRectangle {
    pub a: usize,
    pub b: usize,
    pub offset: u64,
    pub entries: Grid,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MagicRectangleSet {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    /// Set when the caller asked for `a > b` and the rectangles were
    /// built as `b x a` and transposed.
    #[serde(default)]
    pub transposed: bool,
    pub entries: Vec<Grid>,
}

pub fn mr_exists(a: usize, b: usize) -> bool {
    a > 1 && b > 1 && a * b > 4 && a % 2 == b % 2
}

pub fn mrs_exists(a: usize, b: usize, c: usize) -> bool {
    let (a, b) = (a.min(b), a.max(b));
    if a <= 1 || c == 0 {
        return false;
    }
    let all_odd = a % 2 == 1 && b % 2 == 1 && c % 2 == 1;
    let both_even = a % 2 == 0 && b % 2 == 0 && (a, b) != (2, 2);
    all_odd || both_even
}

impl MagicRectangle {
    pub fn row_sum(&self) -> u64 {
        let (a, b) = (self.a as u64, self.b as u64);
        b * (a * b + 1) / 2 + b * self.offset
    }

    pub fn col_sum(&self) -> u64 {
        let (a, b) = (self.a as u64, self.b as u64);
        a * (a * b + 1) / 2 + a * self.offset
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        self.entries.iter().map(|row| row[j]).collect()
    }

    /// Ok if every invariant holds, otherwise the first violation.
    pub fn check(&self) -> std::result::Result<(), String> {
        check_grids(self.a, self.b, self.offset, std::slice::from_ref(&self.entries))
    }
}

impl MagicRectangleSet {
    pub fn row_sum(&self) -> u64 {
        let (a, b, c) = (self.a as u64, self.b as u64, self.c as u64);
        b * (a * b * c + 1) / 2
    }

    pub fn col_sum(&self) -> u64 {
        let (a, b, c) = (self.a as u64, self.b as u64, self.c as u64);
        a * (a * b * c + 1) / 2
    }

    pub fn check(&self) -> std::result::Result<(), String> {
        if self.entries.len() != self.c {
            return Err(format!("expected {} rectangles, found {}", self.c, self.entries.len()));
        }
        check_grids(self.a, self.b, 0, &self.entries)
    }
}

pub fn verify_mr(r: &MagicRectangle) -> bool {
    r.check().is_ok()
}

pub fn verify_mrs(s: &MagicRectangleSet) -> bool {
    s.check().is_ok()
}

fn check_grids(a: usize, b: usize, offset: u64, grids: &[Grid]) -> std::result::Result<(), String> {
    let total = (a * b * grids.len()) as u64;
    if a == 0 || b == 0 {
        return Err("empty rectangle".into());
    }
    // Sums as rationals over 2: a non-integral target means no rectangle.
    let twice_row = b as u64 * (total + 1) + 2 * b as u64 * offset;
    let twice_col = a as u64 * (total + 1) + 2 * a as u64 * offset;
    let mut seen = vec![false; total as usize];
    for (k, g) in grids.iter().enumerate() {
        if g.len() != a || g.iter().any(|row| row.len() != b) {
            return Err(format!("rectangle {k} is not {a}x{b}"));
        }
        for row in g {
            for &x in row {
                if x <= offset || x > offset + total {
                    return Err(format!("entry {x} outside {}..={}", offset + 1, offset + total));
                }
                let idx = (x - offset - 1) as usize;
                if seen[idx] {
                    return Err(format!("entry {x} repeated"));
                }
                seen[idx] = true;
            }
        }
        for (i, row) in g.iter().enumerate() {
            let s: u64 = row.iter().sum();
            if 2 * s != twice_row {
                return Err(format!("rectangle {k} row {i} sums to {s}, expected {}/2", twice_row));
            }
        }
        for j in 0..b {
            let s: u64 = g.iter().map(|row| row[j]).sum();
            if 2 * s != twice_col {
                return Err(format!("rectangle {k} column {j} sums to {s}, expected {}/2", twice_col));
            }
        }
    }
    Ok(())
}

fn transpose(g: &Grid) -> Grid {
    let (a, b) = (g.len(), g[0].len());
    (0..b).map(|j| (0..a).map(|i| g[i][j]).collect()).collect()
}

pub fn construct_mr(a: usize, b: usize, offset: u64) -> Result<MagicRectangle> {
    if !mr_exists(a, b) {
        return Err(Error::InfeasibleParameters(format!("no {a}x{b} magic rectangle exists")));
    }
    let base = zero_based_mr(a, b)
        .ok_or_else(|| Error::FormulaBreakdown(format!("{a}x{b} magic rectangle construction failed")))?;
    let entries = base.iter().map(|row| row.iter().map(|&x| x + 1 + offset).collect()).collect();
    let r = MagicRectangle { a, b, offset, entries };
    r.check().map_err(Error::FormulaBreakdown)?;
    Ok(r)
}

pub fn construct_mrs(a: usize, b: usize, c: usize) -> Result<MagicRectangleSet> {
    if !mrs_exists(a, b, c) {
        return Err(Error::InfeasibleParameters(format!("no magic rectangle set ({a},{b};{c}) exists")));
    }
    let transposed = a > b;
    let (s, l) = (a.min(b), a.max(b));
    let m = zero_based_mr(s, l)
        .ok_or_else(|| Error::FormulaBreakdown(format!("{s}x{l} magic rectangle construction failed")))?;
    let layer = if s % 2 == 0 { even_layers() } else { odd_layers(s, l) };
    let c64 = c as u64;
    let mut entries = Vec::with_capacity(c);
    for k in 0..c as u64 {
        let g: Grid = (0..s)
            .map(|i| (0..l).map(|j| c64 * m[i][j] + layer(i, j, k, c64) + 1).collect())
            .collect();
        entries.push(if transposed { transpose(&g) } else { g });
    }
    let set = MagicRectangleSet { a, b, c, transposed, entries };
    set.check().map_err(Error::FormulaBreakdown)?;
    Ok(set)
}

type Layer = Box<dyn Fn(usize, usize, u64, u64) -> u64>;

/// Checkerboard of `k` and its complement `c - 1 - k`.
fn even_layers() -> Layer {
    Box::new(|i, j, k, c| if (i + j) % 2 == 0 { k } else { c - 1 - k })
}

/// Cell `(i, j)` applies one of six permutations of `Z_c` to the layer
/// index: `k`, `k + h`, `-2k - 1` (whose sum is constant), or the
/// complement of one of those. The pattern gives each row and column one
/// triple and otherwise complementary pairs.
fn odd_layers(s: usize, l: usize) -> Layer {
    // kind 0..3 = triple member, +3 = complemented
    let mut kind = vec![vec![0usize; l]; s];
    for i in 0..3 {
        for j in 0..3 {
            kind[i][j] = (i + j) % 3;
        }
        for j in (3..l).step_by(2) {
            kind[i][j] = i;
            kind[i][j + 1] = i + 3;
        }
    }
    let pattern: Vec<usize> = (0..l).map(|j| if j < 3 { j } else if j % 2 == 1 { 0 } else { 3 }).collect();
    for i in (3..s).step_by(2) {
        for j in 0..l {
            kind[i][j] = pattern[j];
            kind[i + 1][j] = (pattern[j] + 3) % 6;
        }
    }
    Box::new(move |i, j, k, c| {
        let h = (c - 1) / 2;
        let base = match kind[i][j] % 3 {
            0 => k,
            1 => (k + h) % c,
            _ => (2 * c - 2 * k - 1) % c,
        };
        if kind[i][j] >= 3 {
            c - 1 - base
        } else {
            base
        }
    })
}

fn zero_based_mr(a: usize, b: usize) -> Option<Grid> {
    if a % 2 == 0 {
        Some(even_mr(a, b))
    } else if a == b {
        Some(siamese(a))
    } else if a < b {
        balanced_odd_mr(a, b)
    } else {
        balanced_odd_mr(b, a).map(|g| transpose(&g))
    }
}

/// Two-row rectangle: column `j` holds `j` and `2b - 1 - j`, with the
/// larger value on top for a chosen set of columns.
fn two_row_mr(b: usize) -> Grid {
    let top_high: Vec<usize> = if b % 4 == 0 {
        (0..b).filter(|k| k % 4 == 1 || k % 4 == 2).collect()
    } else {
        // need b/2 - 1 columns summing to (b^2 - 5b + 2)/4
        let h = b / 2 - 1;
        let mut need = (b * b + 2 - 5 * b) / 4 - h * (h - 1) / 2;
        let mut set: Vec<usize> = (0..h).collect();
        for k in (0..h).rev() {
            let room = b - h + k - set[k];
            let step = room.min(need);
            set[k] += step;
            need -= step;
        }
        set
    };
    let mut g = vec![vec![0u64; b]; 2];
    for j in 0..b {
        let (lo, hi) = (j as u64, (2 * b - 1 - j) as u64);
        let up = top_high.contains(&j);
        g[0][j] = if up { hi } else { lo };
        g[1][j] = if up { lo } else { hi };
    }
    g
}

/// Even sides: lift a `2 x b` rectangle by blocks of `a/2` rows.
fn even_mr(a: usize, b: usize) -> Grid {
    if b == 2 {
        return transpose(&even_mr(2, a));
    }
    let base = two_row_mr(b);
    let h = (a / 2) as u64;
    let mut g = vec![vec![0u64; b]; a];
    for t in 0..a / 2 {
        for r in 0..2 {
            for j in 0..b {
                let fill = if j % 2 == 0 { t as u64 } else { h - 1 - t as u64 };
                g[2 * t + r][j] = base[r][j] * h + fill;
            }
        }
    }
    g
}

fn siamese(n: usize) -> Grid {
    let mut g = vec![vec![u64::MAX; n]; n];
    let (mut i, mut j) = (0, n / 2);
    for k in 0..(n * n) as u64 {
        g[i][j] = k;
        let (ni, nj) = ((i + n - 1) % n, (j + 1) % n);
        if g[ni][nj] == u64::MAX {
            (i, j) = (ni, nj);
        } else {
            i = (i + 1) % n;
        }
    }
    g
}

/// Odd `s < l`. Value `l * x + off[x][j]` sits in column `j` for every
/// block `x < s`, where the offsets per column sum to `s(l-1)/2`. Columns
/// and distinctness then hold automatically; rows are balanced by
/// swapping entries between a heavy and a light row on a subset of
/// columns chosen by subset sum.
fn balanced_odd_mr(s: usize, l: usize) -> Option<Grid> {
    let h = (l - 1) / 2;
    let mut off: Vec<Vec<u64>> = vec![
        (0..l).map(|j| j as u64).collect(),
        (0..l).map(|j| ((j + h) % l) as u64).collect(),
        (0..l).map(|j| ((2 * l - 2 * j - 1) % l) as u64).collect(),
    ];
    let mut shift = 0;
    while off.len() < s {
        let row: Vec<u64> = (0..l).map(|j| ((j + shift) % l) as u64).collect();
        let complement = row.iter().map(|&x| l as u64 - 1 - x).collect();
        off.push(row);
        off.push(complement);
        shift += 1;
    }
    let item = |x: usize, j: usize| (l * x) as i64 + off[x][j] as i64;
    let mut block: Vec<Vec<usize>> = (0..s).map(|i| (0..l).map(|j| (i + j) % s).collect()).collect();
    let target = (l * (s * l - 1) / 2) as i64;

    for _ in 0..10_000 {
        let dev: Vec<i64> =
            (0..s).map(|i| (0..l).map(|j| item(block[i][j], j)).sum::<i64>() - target).collect();
        if dev.iter().all(|&d| d == 0) {
            let g = block
                .iter()
                .map(|row| row.iter().enumerate().map(|(j, &x)| item(x, j) as u64).collect())
                .collect();
            return Some(g);
        }
        let mut order: Vec<usize> = (0..s).collect();
        order.sort_by_key(|&i| (dev[i], i));
        let mut moved = false;
        'pairs: for &hi in order.iter().rev() {
            for &lo in &order {
                let gap = dev[hi] - dev[lo];
                if gap <= 0 {
                    continue;
                }
                let deltas: Vec<i64> = (0..l).map(|j| item(block[hi][j], j) - item(block[lo][j], j)).collect();
                if let Some(cols) = closest_subset(&deltas, gap) {
                    for j in cols {
                        let t = block[hi][j];
                        block[hi][j] = block[lo][j];
                        block[lo][j] = t;
                    }
                    moved = true;
                    break 'pairs;
                }
            }
        }
        if !moved {
            return None;
        }
    }
    None
}

/// Subset of `deltas` whose sum lies strictly inside `(0, gap)` and is
/// closest to `gap / 2`; ties go to the smaller sum.
fn closest_subset(deltas: &[i64], gap: i64) -> Option<Vec<usize>> {
    let span: i64 = deltas.iter().map(|d| d.abs()).sum();
    let width = (2 * span + 1) as usize;
    // parent[s] = (previous sum index, item) for the first way to reach s
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; width];
    let mut reached = vec![false; width];
    let zero = span as usize;
    reached[zero] = true;
    let mut live = vec![zero];
    for (idx, &d) in deltas.iter().enumerate() {
        if d == 0 {
            continue;
        }
        let mut added = Vec::new();
        for &s in &live {
            let ns = (s as i64 + d) as usize;
            if !reached[ns] {
                reached[ns] = true;
                parent[ns] = Some((s, idx));
                added.push(ns);
            }
        }
        live.extend(added);
    }
    let best = live
        .iter()
        .map(|&s| s as i64 - span)
        .filter(|&v| v > 0 && v < gap)
        .min_by_key(|&v| ((2 * v - gap).abs(), v))?;
    let mut cols = Vec::new();
    let mut s = (best + span) as usize;
    while let Some((prev, idx)) = parent[s] {
        cols.push(idx);
        s = prev;
    }
    Some(cols)
}

/// Exhaustive search for `c` arrays of size `a x b` meeting the set
/// invariants. Exponential; meant for tiny sizes only.
pub fn search_mrs(a: usize, b: usize, c: usize) -> Option<Vec<Grid>> {
    let total = a * b * c;
    if a == 0 || b == 0 || c == 0 {
        return None;
    }
    let twice_row = b * (total + 1);
    let twice_col = a * (total + 1);
    if twice_row % 2 == 1 || twice_col % 2 == 1 {
        return None;
    }
    let (row_t, col_t) = ((twice_row / 2) as u64, (twice_col / 2) as u64);
    let mut st = Search {
        a,
        b,
        total,
        row_t,
        col_t,
        cells: vec![0; total],
        used: vec![false; total + 1],
        row: vec![0; a * c],
        col: vec![0; b * c],
    };
    if st.go(0) {
        let g = st
            .cells
            .chunks(a * b)
            .map(|chunk| chunk.chunks(b).map(|r| r.to_vec()).collect())
            .collect();
        Some(g)
    } else {
        None
    }
}

pub fn search_mr(a: usize, b: usize) -> Option<Grid> {
    search_mrs(a, b, 1).map(|mut v| v.remove(0))
}

struct Search {
    a: usize,
    b: usize,
    total: usize,
    row_t: u64,
    col_t: u64,
    cells: Vec<u64>,
    used: Vec<bool>,
    row: Vec<u64>,
    col: Vec<u64>,
}

impl Search {
    fn go(&mut self, pos: usize) -> bool {
        if pos == self.total {
            return true;
        }
        let (k, rest) = (pos / (self.a * self.b), pos % (self.a * self.b));
        let (i, j) = (rest / self.b, rest % self.b);
        let (ri, ci) = (k * self.a + i, k * self.b + j);
        let row_left = (self.b - 1 - j) as u64;
        let col_left = (self.a - 1 - i) as u64;
        // first cell of each rectangle: fix the smallest free value to
        // break the symmetry between rectangles
        let first_free = if rest == 0 { (1..=self.total).find(|&v| !self.used[v]) } else { None };
        for v in 1..=self.total as u64 {
            if self.used[v as usize] || first_free.is_some_and(|f| f as u64 != v) {
                continue;
            }
            let r = self.row[ri] + v;
            let c = self.col[ci] + v;
            if r > self.row_t || c > self.col_t {
                break;
            }
            if (row_left == 0 && r != self.row_t) || (col_left == 0 && c != self.col_t) {
                continue;
            }
            if row_left > 0 && r + row_left * (self.total as u64) < self.row_t {
                continue;
            }
            if col_left > 0 && c + col_left * (self.total as u64) < self.col_t {
                continue;
            }
            self.used[v as usize] = true;
            self.row[ri] = r;
            self.col[ci] = c;
            self.cells[pos] = v;
            if self.go(pos + 1) {
                return true;
            }
            self.used[v as usize] = false;
            self.row[ri] -= v;
            self.col[ci] -= v;
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn existence_rules() {
        assert!(mr_exists(3, 3));
        assert!(!mr_exists(2, 2));
        assert!(!mr_exists(2, 3));
        assert!(!mr_exists(1, 5));
        assert!(mr_exists(2, 4));
        assert!(mrs_exists(2, 4, 3));
        assert!(!mrs_exists(2, 2, 5));
        assert!(!mrs_exists(3, 5, 2));
        assert!(mrs_exists(5, 3, 1));
        assert!(!mrs_exists(1, 3, 1));
    }

    #[test]
    fn three_by_three_sums() {
        let r = construct_mr(3, 3, 0).unwrap();
        assert!(r.entries.iter().all(|row| row.iter().sum::<u64>() == 15));
        assert!((0..3).all(|j| r.column(j).iter().sum::<u64>() == 15));
    }

    #[test]
    fn two_by_four_sums() {
        let r = construct_mr(2, 4, 0).unwrap();
        assert_eq!((r.row_sum(), r.col_sum()), (18, 9));
        assert!(verify_mr(&r));
        let r = construct_mr(2, 4, 10).unwrap();
        assert_eq!((r.row_sum(), r.col_sum()), (58, 29));
        assert!(verify_mr(&r));
    }

    #[test]
    fn infeasible_is_an_error() {
        assert!(matches!(construct_mr(2, 2, 0), Err(Error::InfeasibleParameters(_))));
        assert!(matches!(construct_mrs(3, 5, 2), Err(Error::InfeasibleParameters(_))));
    }

    #[test]
    fn swap_across_rows_breaks_verification() {
        let mut r = construct_mr(3, 3, 0).unwrap();
        let t = r.entries[0][0];
        r.entries[0][0] = r.entries[1][1];
        r.entries[1][1] = t;
        let msg = r.check().unwrap_err();
        assert!(msg.contains("row"), "{msg}");
    }

    #[test]
    fn duplicate_entry_is_reported() {
        let mut r = construct_mr(2, 4, 0).unwrap();
        r.entries[0][0] = r.entries[0][1];
        assert!(!verify_mr(&r));
    }

    #[test]
    fn set_of_three_two_by_four() {
        let s = construct_mrs(2, 4, 3).unwrap();
        assert_eq!(s.entries.len(), 3);
        assert_eq!((s.row_sum(), s.col_sum()), (50, 25));
        assert!(verify_mrs(&s));
    }

    #[test]
    fn set_with_one_rectangle() {
        let s = construct_mrs(3, 3, 1).unwrap();
        assert!(s.entries[0].iter().all(|row| row.iter().sum::<u64>() == 15));
        let s = construct_mrs(2, 4, 1).unwrap();
        assert_eq!(s.row_sum(), 18);
    }

    #[test]
    fn transposed_set_is_flagged() {
        let s = construct_mrs(5, 3, 3).unwrap();
        assert!(s.transposed);
        assert_eq!((s.entries[0].len(), s.entries[0][0].len()), (5, 3));
        assert!(verify_mrs(&s));
    }

    #[test]
    fn two_row_high_sets() {
        for b in (4..=40).step_by(2) {
            let g = two_row_mr(b);
            let s: u64 = g[0].iter().sum();
            assert_eq!(2 * s, (b * (2 * b - 1)) as u64, "b={b}");
        }
    }

    #[test]
    fn subset_search_picks_middle() {
        let cols = closest_subset(&[5, 3, -2], 6).unwrap();
        let s: i64 = cols.iter().map(|&i| [5, 3, -2][i]).sum();
        assert_eq!(s, 3);
        assert!(closest_subset(&[10], 4).is_none());
    }

    #[test]
    fn search_finds_small_rectangles() {
        let g = search_mr(2, 4).unwrap();
        let r = MagicRectangle { a: 2, b: 4, offset: 0, entries: g };
        assert!(verify_mr(&r));
        assert!(search_mr(2, 2).is_none());
        assert!(search_mr(2, 3).is_none());
    }

    #[test]
    fn serde_shape() {
        let r = construct_mr(2, 4, 0).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        for key in ["a", "b", "offset", "entries"] {
            assert!(v.get(key).is_some());
        }
        let s: serde_json::Value = serde_json::to_value(construct_mrs(2, 4, 3).unwrap()).unwrap();
        assert_eq!(s["c"], 3);
        assert_eq!(s["entries"].as_array().unwrap().len(), 3);
    }
}
