//! Unit disk graphs and the structural predicates the backbone rounds rely on.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::Error;

mod blocks;
mod nodeset;
mod path;
mod predicates;
mod topology;

pub use blocks::{block_decomposition, BlockDecomposition};
pub use nodeset::NodeSet;
pub use path::{shortest_hop_path, TieBreak};
pub use predicates::{
    bad_points, classify_point, connectivity_level, is_dominating, is_k_dominating, is_m_connected,
    is_two_connected, PointClass,
};
pub use topology::{
    grid_topology, grid_topology_weighted, random_connected_topology, random_points,
    random_topology, DEFAULT_CONNECT_ATTEMPTS,
};

pub(crate) use blocks::tarjan;
pub(crate) use path::{search, search_with};
pub(crate) use predicates::{components, induced_connected, two_connected_mask};

/// Largest admissible uncertainty weight of a node.
pub const MAX_WEIGHT: f64 = 0.8;

/// A node position together with its uncertainty weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
    pub weight: f64,
}

impl Point {
    pub fn new(x: f64, y: f64, weight: f64) -> Self {
        Point { x, y, weight }
    }

    /// Point with zero uncertainty weight.
    pub fn at(x: f64, y: f64) -> Self {
        Point { x, y, weight: 0.0 }
    }

    fn dist_sq(&self, other: &Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }
}

/// Immutable geometric graph: nodes `0..n` joined whenever their distance is
/// at most the transmission radius.
#[derive(Clone, PartialEq)]
pub struct UdgGraph {
    points: Vec<Point>,
    radius: f64,
    adj: Vec<Vec<usize>>,
    edges: usize,
}

/// Builds the unit disk graph over `points` with transmission range `radius`.
pub fn build_udg(points: Vec<Point>, radius: f64) -> Result<UdgGraph, Error> {
    UdgGraph::new(points, radius)
}

impl UdgGraph {
    pub fn new(points: Vec<Point>, radius: f64) -> Result<Self, Error> {
        if !radius.is_finite() || radius <= 0.0 {
            return Err(Error::invalid(alloc::format!(
                "radius must be positive and finite, got {radius}"
            )));
        }
        for (id, p) in points.iter().enumerate() {
            if !p.x.is_finite() || !p.y.is_finite() {
                return Err(Error::invalid(alloc::format!(
                    "node {id} has a non-finite coordinate"
                )));
            }
            if !(0.0..=MAX_WEIGHT).contains(&p.weight) {
                return Err(Error::invalid(alloc::format!(
                    "node {id} weight {} outside [0, {MAX_WEIGHT}]",
                    p.weight
                )));
            }
        }

        let n = points.len();
        let r_sq = radius * radius;
        let mut adj = vec![Vec::new(); n];
        let mut edges = 0;
        for u in 0..n {
            for v in (u + 1)..n {
                if points[u].dist_sq(&points[v]) <= r_sq {
                    adj[u].push(v);
                    adj[v].push(u);
                    edges += 1;
                }
            }
        }
        // Pushed in increasing order of the partner id, so each list is sorted.
        Ok(UdgGraph {
            points,
            radius,
            adj,
            edges,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, v: usize) -> Point {
        self.points[v]
    }

    pub fn weight(&self, v: usize) -> f64 {
        self.points[v].weight
    }

    /// Sorted neighbor ids of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Iterates every undirected edge once as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn distance(&self, u: usize, v: usize) -> f64 {
        libm::sqrt(self.points[u].dist_sq(&self.points[v]))
    }

    pub fn nodes(&self) -> core::ops::Range<usize> {
        0..self.points.len()
    }

    pub fn is_connected(&self) -> bool {
        !self.is_empty() && induced_connected(self, &vec![true; self.len()], self.len())
    }

    /// Checks that every member of `set` names a node of this graph.
    pub fn check_set(&self, set: &NodeSet) -> Result<(), Error> {
        match set.iter().find(|&v| v >= self.len()) {
            Some(v) => Err(Error::invalid(alloc::format!(
                "node {v} does not exist in a graph of {} nodes",
                self.len()
            ))),
            None => Ok(()),
        }
    }

    pub(crate) fn mask(&self, set: &NodeSet) -> Vec<bool> {
        set.mask(self.len())
    }
}

impl fmt::Debug for UdgGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UdgGraph")
            .field("nodes", &self.len())
            .field("edges", &self.edges)
            .field("radius", &self.radius)
            .finish()
    }
}
