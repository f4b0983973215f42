use std::collections::VecDeque;
use std::f64::consts::PI;

use moellerlab_lattice::SpacetimeGrid;
use petgraph::algo::is_cyclic_directed;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::tensor::Arc;
use crate::MetricField;

/// Set of lattice points `(n, j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    nt: usize,
    nx: usize,
    mask: Vec<bool>,
}

impl PointSet {
    pub fn empty(grid: &SpacetimeGrid) -> Self {
        Self { nt: grid.nt, nx: grid.nx, mask: vec![false; grid.points()] }
    }

    pub fn single(grid: &SpacetimeGrid, n: usize, j: usize) -> Self {
        let mut s = Self::empty(grid);
        s.insert(n, j);
        s
    }

    pub fn insert(&mut self, n: usize, j: usize) {
        self.mask[n * self.nx + j] = true;
    }

    pub fn contains(&self, n: usize, j: usize) -> bool {
        self.mask[n * self.nx + j]
    }

    pub fn len(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.mask.iter().zip(&other.mask).all(|(&a, &b)| !a || b)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let nx = self.nx;
        self.mask.iter().enumerate().filter(|(_, &b)| b).map(move |(p, _)| (p / nx, p % nx))
    }

    /// Points on level `n`, as site indices.
    pub fn level(&self, n: usize) -> Vec<usize> {
        (0..self.nx).filter(|&j| self.contains(n, j)).collect()
    }

    pub fn time_levels(&self) -> usize {
        self.nt
    }
}

fn cot(theta: f64) -> f64 {
    theta.cos() / theta.sin()
}

/// Spatial displacements `Δx` reachable along the closed cone `arc` when
/// advancing one level up (`up = true`) or down. Infinite ends mean the
/// cone reaches the spatial axis.
fn displacement_range(arc: Arc, dt: f64, up: bool) -> Option<(f64, f64)> {
    // Down-steps use the antipodal picture: v = −dt·(sin θ', cos θ')/sin θ'.
    let shifted = if up { arc } else { arc.opposite() };
    let mut lo = shifted.lo();
    lo -= 2.0 * PI * ((lo + PI) / (2.0 * PI)).floor();
    let hi = lo + 2.0 * shifted.half_width;
    let a = lo.max(0.0);
    let b = hi.min(PI);
    if a >= b {
        return None;
    }
    let far = if a == 0.0 { f64::INFINITY } else { dt * cot(a) };
    let near = if b == PI { f64::NEG_INFINITY } else { dt * cot(b) };
    Some(if up { (near, far) } else { (-far, -near) })
}

/// Float noise allowed before a boundary counts as reaching the next cell.
const STEP_EPS: f64 = 1e-9;

fn step_targets(grid: &SpacetimeGrid, range: (f64, f64)) -> std::ops::RangeInclusive<isize> {
    let nx = grid.nx as isize;
    let lo = (range.0 / grid.dx + STEP_EPS).floor().max(-(nx as f64)) as isize;
    let hi = (range.1 / grid.dx - STEP_EPS).ceil().min(nx as f64) as isize;
    if hi - lo + 1 >= nx {
        0..=nx - 1
    } else {
        lo..=hi
    }
}

/// Directed graph of one-cell causal steps.
fn causal_graph(g: &MetricField) -> DiGraph<(), ()> {
    let grid = *g.grid();
    let mut graph = DiGraph::with_capacity(grid.points(), 0);
    for _ in 0..grid.points() {
        graph.add_node(());
    }
    let node = |n: usize, j: isize| NodeIndex::new(grid.point(n, grid.wrap(j)));
    for n in 0..grid.nt {
        for j in 0..grid.nx {
            let p = grid.point(n, j);
            let arc = g.future_arc(p);
            let from = NodeIndex::new(p);
            for (up, next) in [(true, n + 1), (false, n.wrapping_sub(1))] {
                if next >= grid.nt {
                    continue;
                }
                if let Some(r) = displacement_range(arc, grid.dt, up) {
                    for dj in step_targets(&grid, r) {
                        graph.add_edge(from, node(next, j as isize + dj), ());
                    }
                }
            }
            if arc.contains_angle(0.0) {
                graph.add_edge(from, node(n, j as isize + 1), ());
            }
            if arc.contains_angle(PI) {
                graph.add_edge(from, node(n, j as isize - 1), ());
            }
        }
    }
    graph
}

/// Discrete `J⁺(A)`: everything reachable from `A` by steps inside the
/// closed future cone, each rounded outward to whole cells.
pub fn causal_future(g: &MetricField, set: &PointSet) -> PointSet {
    let graph = causal_graph(g);
    let mut out = PointSet::empty(g.grid());
    let mut queue: VecDeque<NodeIndex> = VecDeque::new();
    for (n, j) in set.iter() {
        let p = g.grid().point(n, j);
        out.mask[p] = true;
        queue.push_back(NodeIndex::new(p));
    }
    while let Some(v) = queue.pop_front() {
        for w in graph.neighbors(v) {
            if !out.mask[w.index()] {
                out.mask[w.index()] = true;
                queue.push_back(w);
            }
        }
    }
    out
}

/// Whether some point lies in its own strict discrete future.
pub fn closed_causal_exists(g: &MetricField) -> bool {
    is_cyclic_directed(&causal_graph(g))
}
