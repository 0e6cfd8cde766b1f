//! Exact unit-distance graphs on lattice point sets and min-degree peeling.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::config::PointSet;
use crate::gaussian::{lattice_points_on_circle, GaussInt};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("target squared distance must be at least 1")]
    ZeroDistance,
}

/// Vertices are the points of a [`PointSet`] in lexicographic order; `u ~ v`
/// iff `|u − v|² = m` exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitDistanceGraph {
    points: PointSet,
    m: u64,
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DegreeSummary {
    pub min_degree: usize,
    pub max_degree: usize,
    pub vertex_count: usize,
    pub edge_count: usize,
}

impl UnitDistanceGraph {
    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn point(&self, v: usize) -> GaussInt {
        self.points.points()[v]
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Vertex index of a point, if present.
    pub fn index_of(&self, p: GaussInt) -> Option<usize> {
        self.points.points().binary_search(&p).ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// The `x1 y1 x2 y2`-per-line edge list, sorted.
    pub fn edge_list_text(&self) -> String {
        let mut out = String::with_capacity(self.edge_count * 16);
        for (u, v) in self.edges() {
            let (p, q) = (self.point(u), self.point(v));
            writeln!(out, "{} {} {} {}", p.a, p.b, q.a, q.b).unwrap();
        }
        out
    }

    /// Subgraph induced on the vertices with `keep[v]`.
    pub fn induced(&self, keep: &[bool]) -> UnitDistanceGraph {
        let mut new_index = vec![usize::MAX; self.vertex_count()];
        let mut points = Vec::new();
        for (v, _) in keep.iter().enumerate().filter(|(_, &k)| k) {
            new_index[v] = points.len();
            points.push(self.point(v));
        }
        let adjacency: Vec<Vec<usize>> = keep
            .iter()
            .enumerate()
            .filter(|(_, &k)| k)
            .map(|(v, _)| {
                self.adjacency[v]
                    .iter()
                    .filter(|&&u| keep[u])
                    .map(|&u| new_index[u])
                    .collect()
            })
            .collect();
        let edge_count = adjacency.iter().map(Vec::len).sum::<usize>() / 2;
        UnitDistanceGraph {
            // order preserved, so no re-sort needed
            points: PointSet::new(points).expect("subset of distinct points"),
            m: self.m,
            adjacency,
            edge_count,
        }
    }
}

/// Probes each point's `R(m)` translates in a hash index instead of testing
/// all pairs.
pub fn build_graph(points: &PointSet, m: u64) -> Result<UnitDistanceGraph, GraphError> {
    if m == 0 {
        return Err(GraphError::ZeroDistance);
    }
    let directions = lattice_points_on_circle(m);
    let index: HashMap<GaussInt, usize> = points
        .points()
        .iter()
        .enumerate()
        .map(|(i, &p)| (p, i))
        .collect();
    let adjacency: Vec<Vec<usize>> = points
        .points()
        .par_iter()
        .map(|&p| {
            let mut ns: Vec<usize> = directions
                .iter()
                .filter_map(|&d| index.get(&(p + d)).copied())
                .collect();
            ns.sort_unstable();
            ns
        })
        .collect();
    let edge_count = adjacency.iter().map(Vec::len).sum::<usize>() / 2;
    Ok(UnitDistanceGraph {
        points: points.clone(),
        m,
        adjacency,
        edge_count,
    })
}

pub fn degree_summary(g: &UnitDistanceGraph) -> DegreeSummary {
    let degrees = g.adjacency.iter().map(Vec::len);
    DegreeSummary {
        min_degree: degrees.clone().min().unwrap_or(0),
        max_degree: degrees.max().unwrap_or(0),
        vertex_count: g.vertex_count(),
        edge_count: g.edge_count,
    }
}

/// `e(G) / (2 v(G))`, half the average degree.
pub fn default_peel_threshold(g: &UnitDistanceGraph) -> f64 {
    if g.vertex_count() == 0 {
        0.0
    } else {
        g.edge_count as f64 / (2.0 * g.vertex_count() as f64)
    }
}

/// Repeatedly deletes vertices of current degree `< threshold`. The result
/// has minimum degree `>= threshold` (or is empty) and lost fewer than
/// `v(G) · threshold` edges.
pub fn peel(g: &UnitDistanceGraph, threshold: f64) -> UnitDistanceGraph {
    let n = g.vertex_count();
    let mut degree: Vec<usize> = g.adjacency.iter().map(Vec::len).collect();
    let mut alive = vec![true; n];
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| (degree[v] as f64) < threshold).collect();
    let mut queued: Vec<bool> = degree.iter().map(|&d| (d as f64) < threshold).collect();
    while let Some(v) = queue.pop_front() {
        alive[v] = false;
        for &u in &g.adjacency[v] {
            if !alive[u] {
                continue;
            }
            degree[u] -= 1;
            if !queued[u] && (degree[u] as f64) < threshold {
                queued[u] = true;
                queue.push_back(u);
            }
        }
    }
    g.induced(&alive)
}
