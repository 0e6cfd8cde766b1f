//! Irredundant paths: paths `p₀…p_k` whose displacement vectors have no
//! nonempty zero-sum subset.
//!
//! Such paths never revisit a vertex (a revisit closes a contiguous zero
//! sum), so the depth-first search below needs no visited set. Every prefix
//! keeps the list of all `2^ℓ − 1` nonempty subset sums of its vectors; a
//! continuation `z` is legal iff `−z` is not in that list.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::gaussian::GaussInt;
use crate::udgraph::UnitDistanceGraph;

/// Longest path the enumerators accept.
pub const MAX_PATH_LEN: usize = 20;

/// Default cap on projected DFS steps for a single job.
pub const DEFAULT_STEP_BUDGET: u64 = 1_000_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathError {
    #[error("path length must be at least 1")]
    Empty,
    #[error("path length {0} exceeds the limit of {MAX_PATH_LEN}")]
    TooLong(usize),
    #[error("vertex {0} is not in the graph")]
    NoSuchVertex(usize),
    #[error("job needs about {projected} DFS steps, over the budget of {budget}")]
    BudgetExceeded { projected: u128, budget: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathRecord {
    pub vertices: Vec<GaussInt>,
    pub vectors: Vec<GaussInt>,
}

impl PathRecord {
    pub fn from_vertices(vertices: Vec<GaussInt>) -> Self {
        let vectors = vertices.windows(2).map(|w| w[1] - w[0]).collect();
        Self { vertices, vectors }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// A path count that sticks at `u64::MAX` instead of wrapping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default, Serialize)]
pub struct PathCount {
    pub count: u64,
    pub saturated: bool,
}

impl PathCount {
    fn add(&mut self, n: u64) {
        match self.count.checked_add(n) {
            Some(c) => self.count = c,
            None => {
                self.count = u64::MAX;
                self.saturated = true;
            }
        }
    }

    fn merge(mut self, other: PathCount) -> PathCount {
        self.add(other.count);
        self.saturated |= other.saturated;
        self
    }
}

fn check_len(k: usize) -> Result<(), PathError> {
    match k {
        0 => Err(PathError::Empty),
        k if k > MAX_PATH_LEN => Err(PathError::TooLong(k)),
        _ => Ok(()),
    }
}

/// Tests all `2^k − 1` nonempty subsets of displacement vectors.
pub fn is_irredundant(path: &PathRecord) -> Result<bool, PathError> {
    is_irredundant_vectors(&path.vectors)
}

pub fn is_irredundant_vectors(vectors: &[GaussInt]) -> Result<bool, PathError> {
    check_len(vectors.len())?;
    let k = vectors.len();
    Ok((1u32..1 << k).all(|mask| {
        let sum = (0..k)
            .filter(|&i| mask >> i & 1 == 1)
            .fold(GaussInt::ZERO, |acc, i| acc + vectors[i]);
        !sum.is_zero()
    }))
}

struct Search<'g> {
    graph: &'g UnitDistanceGraph,
    k: usize,
    sums: Vec<GaussInt>,
    stack: Vec<usize>,
}

impl<'g> Search<'g> {
    fn new(graph: &'g UnitDistanceGraph, k: usize) -> Self {
        Self {
            graph,
            k,
            sums: Vec::with_capacity(1 << k),
            stack: Vec::with_capacity(k + 1),
        }
    }

    fn run<F: FnMut(&[usize])>(&mut self, start: usize, leaf: &mut F) {
        self.sums.clear();
        self.stack.clear();
        self.stack.push(start);
        self.extend(leaf);
    }

    fn extend<F: FnMut(&[usize])>(&mut self, leaf: &mut F) {
        let depth = self.stack.len() - 1;
        if depth == self.k {
            leaf(&self.stack);
            return;
        }
        let graph = self.graph;
        let here = self.stack[depth];
        let origin = graph.point(here);
        let last_step = depth + 1 == self.k;
        for &next in graph.neighbors(here) {
            let z = graph.point(next) - origin;
            let forbidden = -z;
            if self.sums.contains(&forbidden) {
                continue;
            }
            let len = self.sums.len();
            if !last_step {
                self.sums.push(z);
                for i in 0..len {
                    let s = self.sums[i] + z;
                    self.sums.push(s);
                }
            }
            self.stack.push(next);
            self.extend(leaf);
            self.stack.pop();
            self.sums.truncate(len);
        }
    }
}

fn check_vertex(g: &UnitDistanceGraph, v: usize) -> Result<(), PathError> {
    if v < g.vertex_count() {
        Ok(())
    } else {
        Err(PathError::NoSuchVertex(v))
    }
}

/// Number of irredundant `P_k` starting at `v`.
pub fn count_irredundant_from(g: &UnitDistanceGraph, v: usize, k: usize) -> Result<PathCount, PathError> {
    check_len(k)?;
    check_vertex(g, v)?;
    let mut count = PathCount::default();
    Search::new(g, k).run(v, &mut |_| count.add(1));
    Ok(count)
}

/// Every irredundant `P_k` starting at `v`, in DFS order.
pub fn enumerate_irredundant_from(
    g: &UnitDistanceGraph,
    v: usize,
    k: usize,
) -> Result<Vec<PathRecord>, PathError> {
    check_len(k)?;
    check_vertex(g, v)?;
    let mut out = Vec::new();
    Search::new(g, k).run(v, &mut |stack| {
        out.push(PathRecord::from_vertices(stack.iter().map(|&u| g.point(u)).collect()));
    });
    Ok(out)
}

/// Counts from several start vertices at once; output order follows `starts`.
pub fn counts_from(g: &UnitDistanceGraph, starts: &[usize], k: usize) -> Result<Vec<PathCount>, PathError> {
    check_len(k)?;
    for &v in starts {
        check_vertex(g, v)?;
    }
    Ok(starts
        .par_iter()
        .map_init(
            || Search::new(g, k),
            |search, &v| {
                let mut count = PathCount::default();
                search.run(v, &mut |_| count.add(1));
                count
            },
        )
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PairCount {
    pub v: usize,
    pub w: usize,
    pub count: u64,
}

/// The most popular ordered endpoint pair, ties going to the smallest
/// `(v, w)`. `None` when the graph has no irredundant `P_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MaxPair {
    pub best: Option<PairCount>,
    pub total: PathCount,
}

impl MaxPair {
    pub fn count(&self) -> u64 {
        self.best.map_or(0, |p| p.count)
    }
}

/// Per-start tallies of path endpoints, reusing one dense buffer per worker.
struct EndpointTally<'g> {
    search: Search<'g>,
    counts: Vec<u64>,
    touched: Vec<usize>,
}

impl<'g> EndpointTally<'g> {
    fn new(g: &'g UnitDistanceGraph, k: usize) -> Self {
        Self {
            search: Search::new(g, k),
            counts: vec![0; g.vertex_count()],
            touched: Vec::new(),
        }
    }

    /// Runs the search from `v` and hands back `(w, count)` sorted by `w`.
    fn tally(&mut self, v: usize) -> Vec<(usize, u64)> {
        let counts = &mut self.counts;
        let touched = &mut self.touched;
        self.search.run(v, &mut |stack| {
            let w = stack[stack.len() - 1];
            if counts[w] == 0 {
                touched.push(w);
            }
            counts[w] = counts[w].saturating_add(1);
        });
        touched.sort_unstable();
        let out = touched.iter().map(|&w| (w, counts[w])).collect();
        for &w in touched.iter() {
            counts[w] = 0;
        }
        touched.clear();
        out
    }
}

pub fn max_pair_count(g: &UnitDistanceGraph, k: usize) -> Result<MaxPair, PathError> {
    check_len(k)?;
    let per_start: Vec<(Option<PairCount>, PathCount)> = (0..g.vertex_count())
        .into_par_iter()
        .map_init(
            || EndpointTally::new(g, k),
            |tally, v| {
                let mut total = PathCount::default();
                let mut best: Option<PairCount> = None;
                for (w, count) in tally.tally(v) {
                    total.add(count);
                    if best.is_none_or(|b| count > b.count) {
                        best = Some(PairCount { v, w, count });
                    }
                }
                (best, total)
            },
        )
        .collect();
    let mut result = MaxPair {
        best: None,
        total: PathCount::default(),
    };
    for (best, total) in per_start {
        result.total = result.total.merge(total);
        if let Some(b) = best {
            if result.best.is_none_or(|r| b.count > r.count) {
                result.best = Some(b);
            }
        }
    }
    Ok(result)
}

/// Every ordered pair `(v, w)` joined by at least one irredundant `P_k`,
/// sorted by `(v, w)`.
pub fn pair_counts(g: &UnitDistanceGraph, k: usize) -> Result<Vec<PairCount>, PathError> {
    check_len(k)?;
    let rows: Vec<Vec<PairCount>> = (0..g.vertex_count())
        .into_par_iter()
        .map_init(
            || EndpointTally::new(g, k),
            |tally, v| {
                tally
                    .tally(v)
                    .into_iter()
                    .map(|(w, count)| PairCount { v, w, count })
                    .collect()
            },
        )
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

/// `x_v y_v x_w y_w count` lines.
pub fn pair_counts_text(g: &UnitDistanceGraph, pairs: &[PairCount]) -> String {
    use std::fmt::Write as _;
    let mut out = String::new();
    for p in pairs {
        let (a, b) = (g.point(p.v), g.point(p.w));
        writeln!(out, "{} {} {} {} {}", a.a, a.b, b.a, b.b, p.count).unwrap();
    }
    out
}

/// `Π_{ℓ<k} max(δ − 2^ℓ + 1, 0)`: at most `2^ℓ − 1` of the `>= δ`
/// continuations of an irredundant `P_ℓ` are forbidden.
pub fn path_count_lower_bound(delta: u64, k: usize) -> u64 {
    let mut acc = 1u64;
    for l in 0..k {
        let forbidden = if l >= 64 { u64::MAX } else { (1u64 << l) - 1 };
        let factor = delta.saturating_sub(forbidden);
        if factor == 0 {
            return 0;
        }
        acc = acc.saturating_mul(factor);
    }
    acc
}

/// Number of walks of length `1..=k` out of `starts`; an upper bound on the
/// nodes the search visits.
pub fn projected_steps(g: &UnitDistanceGraph, starts: &[usize], k: usize) -> u128 {
    let n = g.vertex_count();
    // walks[v] = number of walks of the current length starting at v
    let mut walks = vec![1u128; n];
    let mut per_start = vec![0u128; starts.len()];
    for _ in 0..k {
        walks = (0..n)
            .map(|v| {
                g.neighbors(v)
                    .iter()
                    .fold(0u128, |acc, &u| acc.saturating_add(walks[u]))
            })
            .collect();
        for (acc, &v) in per_start.iter_mut().zip(starts) {
            *acc = acc.saturating_add(walks[v]);
        }
    }
    per_start.into_iter().fold(0u128, u128::saturating_add)
}

pub fn ensure_within_budget(
    g: &UnitDistanceGraph,
    starts: &[usize],
    k: usize,
    budget: u64,
) -> Result<u128, PathError> {
    check_len(k)?;
    let projected = projected_steps(g, starts, k);
    if projected > budget as u128 {
        Err(PathError::BudgetExceeded { projected, budget })
    } else {
        Ok(projected)
    }
}
