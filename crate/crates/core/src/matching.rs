//! Left-perfect matchings on the complete agent × good bipartite graph.
//!
//! Rows are agents, columns are goods, and every agent must be matched
//! (`rows <= cols`). Three objectives are provided: maximum total weight,
//! minimum total weight (both via the Hungarian method) and the bottleneck
//! (max-min) objective via binary search over the distinct edge weights with
//! a Hopcroft–Karp feasibility test.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::{Add, Sub};

use crate::error::{Error, Result};

/// Sentinel magnitude. Under maximization an entry `<= -BIG` marks an edge
/// to avoid whenever some matching can do without it; under minimization
/// an entry `>= BIG` plays the same role.
pub const BIG: f64 = 1e300;

/// Dense `rows × cols` edge weights, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl WeightMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 {
            return Err(Error::invalid("weight matrix needs at least one row"));
        }
        if data.len() != rows * cols {
            return Err(Error::InvalidInput(alloc::format!(
                "weight matrix data has {} entries, expected {rows}×{cols}",
                data.len()
            )));
        }
        if data.iter().any(|w| w.is_nan()) {
            return Err(Error::invalid("weight matrix contains NaN"));
        }
        Ok(WeightMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::invalid("weight matrix rows differ in length"));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::new(rows, cols, data)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    pub fn negated(&self) -> Self {
        WeightMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|w| -w).collect(),
        }
    }

    fn require_left_perfect(&self) -> Result<()> {
        if self.rows > self.cols {
            Err(Error::Infeasible {
                agents: self.rows,
                goods: self.cols,
            })
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchingResult {
    /// `assignment[i]` is the column matched to row `i`; injective.
    pub assignment: Vec<usize>,
    /// Sum of matched weights, or the smallest matched weight for the
    /// bottleneck variant.
    pub objective: f64,
    /// Whether some matched edge is a sentinel.
    pub uses_sentinel: bool,
}

/// Lexicographic cost: sentinel count first, then real weight.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Lex {
    penalty: i64,
    weight: f64,
}

impl Lex {
    const ZERO: Lex = Lex { penalty: 0, weight: 0.0 };
    const INF: Lex = Lex { penalty: i64::MAX / 4, weight: 0.0 };
}

impl Add for Lex {
    type Output = Lex;
    fn add(self, o: Lex) -> Lex {
        Lex {
            penalty: self.penalty + o.penalty,
            weight: self.weight + o.weight,
        }
    }
}

impl Sub for Lex {
    type Output = Lex;
    fn sub(self, o: Lex) -> Lex {
        Lex {
            penalty: self.penalty - o.penalty,
            weight: self.weight - o.weight,
        }
    }
}

impl PartialOrd for Lex {
    fn partial_cmp(&self, o: &Lex) -> Option<Ordering> {
        match self.penalty.cmp(&o.penalty) {
            Ordering::Equal => self.weight.partial_cmp(&o.weight),
            ord => Some(ord),
        }
    }
}

/// Hungarian method with row/column potentials, rows <= cols, O(rows²·cols).
/// Returns the column assigned to each row.
fn hungarian(cost: &[Lex], rows: usize, cols: usize) -> Vec<usize> {
    // 1-based internally; column 0 is the virtual root.
    let mut u = vec![Lex::ZERO; rows + 1];
    let mut v = vec![Lex::ZERO; cols + 1];
    let mut owner = vec![0usize; cols + 1];
    let mut way = vec![0usize; cols + 1];

    for row in 1..=rows {
        owner[0] = row;
        let mut j0 = 0usize;
        let mut minv = vec![Lex::INF; cols + 1];
        let mut used = vec![false; cols + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = Lex::INF;
            let mut j1 = 0usize;
            for j in 1..=cols {
                if used[j] {
                    continue;
                }
                let cur = cost[(i0 - 1) * cols + (j - 1)] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=cols {
                if used[j] {
                    u[owner[j]] = u[owner[j]] + delta;
                    v[j] = v[j] - delta;
                } else {
                    minv[j] = minv[j] - delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assignment = vec![0usize; rows];
    for j in 1..=cols {
        if owner[j] != 0 {
            assignment[owner[j] - 1] = j - 1;
        }
    }
    assignment
}

fn summed(w: &WeightMatrix, assignment: Vec<usize>, sentinel: impl Fn(f64) -> bool) -> MatchingResult {
    let objective = assignment.iter().enumerate().map(|(i, &j)| w.get(i, j)).sum();
    let uses_sentinel = assignment.iter().enumerate().any(|(i, &j)| sentinel(w.get(i, j)));
    MatchingResult {
        assignment,
        objective,
        uses_sentinel,
    }
}

/// Left-perfect matching maximizing the total weight. Entries `<= -BIG`
/// (including `-∞`) are used only when unavoidable, and then as few as
/// possible.
pub fn max_weight_matching(w: &WeightMatrix) -> Result<MatchingResult> {
    w.require_left_perfect()?;
    let is_sentinel = |x: f64| x <= -BIG;
    let cost: Vec<Lex> = w
        .data
        .iter()
        .map(|&x| {
            if is_sentinel(x) {
                Lex { penalty: 1, weight: 0.0 }
            } else {
                Lex { penalty: 0, weight: -x }
            }
        })
        .collect();
    Ok(summed(w, hungarian(&cost, w.rows, w.cols), is_sentinel))
}

/// Left-perfect matching minimizing the total weight. Entries `>= BIG`
/// (including `+∞`) are used only when unavoidable.
pub fn min_weight_matching(w: &WeightMatrix) -> Result<MatchingResult> {
    w.require_left_perfect()?;
    let is_sentinel = |x: f64| x >= BIG;
    let cost: Vec<Lex> = w
        .data
        .iter()
        .map(|&x| {
            if is_sentinel(x) {
                Lex { penalty: 1, weight: 0.0 }
            } else {
                Lex { penalty: 0, weight: x }
            }
        })
        .collect();
    Ok(summed(w, hungarian(&cost, w.rows, w.cols), is_sentinel))
}

/// Maximum bipartite matching restricted to edges with weight `>= threshold`.
/// Returns the row → column map when it covers every row.
fn perfect_above(w: &WeightMatrix, threshold: f64) -> Option<Vec<usize>> {
    let adj: Vec<Vec<usize>> = (0..w.rows)
        .map(|i| (0..w.cols).filter(|&j| w.get(i, j) >= threshold).collect())
        .collect();
    let (row_match, size) = hopcroft_karp(&adj, w.cols);
    (size == w.rows).then(|| row_match.into_iter().map(|c| c.unwrap()).collect())
}

fn hopcroft_karp(adj: &[Vec<usize>], cols: usize) -> (Vec<Option<usize>>, usize) {
    const FREE: usize = usize::MAX;
    let rows = adj.len();
    let mut row_match: Vec<Option<usize>> = vec![None; rows];
    let mut col_match: Vec<Option<usize>> = vec![None; cols];
    let mut dist = vec![FREE; rows];
    let mut size = 0;

    loop {
        // BFS layers from free rows
        let mut queue = VecDeque::new();
        for r in 0..rows {
            if row_match[r].is_none() {
                dist[r] = 0;
                queue.push_back(r);
            } else {
                dist[r] = FREE;
            }
        }
        let mut reachable_free = false;
        while let Some(r) = queue.pop_front() {
            for &c in &adj[r] {
                match col_match[c] {
                    None => reachable_free = true,
                    Some(r2) if dist[r2] == FREE => {
                        dist[r2] = dist[r] + 1;
                        queue.push_back(r2);
                    }
                    Some(_) => {}
                }
            }
        }
        if !reachable_free {
            break;
        }
        for r in 0..rows {
            if row_match[r].is_none() && augment(r, adj, &mut row_match, &mut col_match, &mut dist) {
                size += 1;
            }
        }
    }
    (row_match, size)
}

fn augment(
    r: usize,
    adj: &[Vec<usize>],
    row_match: &mut [Option<usize>],
    col_match: &mut [Option<usize>],
    dist: &mut [usize],
) -> bool {
    for &c in &adj[r] {
        let ok = match col_match[c] {
            None => true,
            Some(r2) => dist[r2] == dist[r] + 1 && augment(r2, adj, row_match, col_match, dist),
        };
        if ok {
            row_match[r] = Some(c);
            col_match[c] = Some(r);
            return true;
        }
    }
    dist[r] = usize::MAX;
    false
}

/// Left-perfect matching maximizing the smallest matched weight.
///
/// The objective is always one of the input weights.
pub fn bottleneck_matching(w: &WeightMatrix) -> Result<MatchingResult> {
    w.require_left_perfect()?;
    let mut levels = w.data.clone();
    levels.sort_by(f64::total_cmp);
    levels.dedup();

    // levels[0] is always feasible on the complete graph.
    let (mut lo, mut hi) = (0usize, levels.len() - 1);
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if perfect_above(w, levels[mid]).is_some() {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    let assignment = perfect_above(w, levels[lo]).expect("feasible threshold");
    let objective = assignment
        .iter()
        .enumerate()
        .map(|(i, &j)| w.get(i, j))
        .fold(f64::INFINITY, f64::min);
    Ok(MatchingResult {
        assignment,
        objective,
        uses_sentinel: false,
    })
}
