use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::UdgGraph;

/// Secondary criterion among paths with the fewest hops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// Smallest summed weight of intermediate nodes, then smallest id sequence.
    #[default]
    MinWeight,
    /// Smallest id sequence only.
    Lexicographic,
}

/// Best paths from a source set, layer by layer.
///
/// For every reached node the tree stores the hop count, the summed weight of
/// the nodes strictly between the source and the node, and the full path.
pub(crate) struct PathTree {
    pub hops: Vec<usize>,
    pub cost: Vec<f64>,
    pub path: Vec<Vec<usize>>,
}

impl PathTree {
    pub fn reached(&self, v: usize) -> bool {
        self.hops[v] != usize::MAX
    }

    /// Total order used to pick between two reached nodes.
    pub fn compare(&self, a: usize, b: usize, tie: TieBreak) -> Ordering {
        self.hops[a].cmp(&self.hops[b]).then_with(|| {
            order(
                self.cost[a],
                &self.path[a],
                self.cost[b],
                &self.path[b],
                tie,
            )
        })
    }

    /// Interior nodes of the path to `v`.
    pub fn interior(&self, v: usize) -> &[usize] {
        let p = &self.path[v];
        if p.len() <= 2 {
            &[]
        } else {
            &p[1..p.len() - 1]
        }
    }
}

fn order(ca: f64, pa: &[usize], cb: f64, pb: &[usize], tie: TieBreak) -> Ordering {
    let by_cost = match tie {
        TieBreak::MinWeight => ca.total_cmp(&cb),
        TieBreak::Lexicographic => Ordering::Equal,
    };
    by_cost.then_with(|| pa.cmp(pb))
}

/// Layered best-path search. Only sources and nodes accepted by `passable`
/// are expanded; every other node can be reached but ends its path.
pub(crate) fn search(
    g: &UdgGraph,
    sources: &[usize],
    passable: &dyn Fn(usize) -> bool,
    max_hops: usize,
    tie: TieBreak,
) -> PathTree {
    search_with(g, sources, passable, max_hops, tie, &|v| g.weight(v))
}

/// [`search`] with `step(v)` in place of the weight of an intermediate node.
pub(crate) fn search_with(
    g: &UdgGraph,
    sources: &[usize],
    passable: &dyn Fn(usize) -> bool,
    max_hops: usize,
    tie: TieBreak,
    step: &dyn Fn(usize) -> f64,
) -> PathTree {
    let n = g.len();
    let mut tree = PathTree {
        hops: vec![usize::MAX; n],
        cost: vec![0.0; n],
        path: vec![Vec::new(); n],
    };
    let mut is_source = vec![false; n];
    let mut frontier = Vec::with_capacity(sources.len());
    for &s in sources {
        if !is_source[s] {
            is_source[s] = true;
            tree.hops[s] = 0;
            tree.path[s] = vec![s];
            frontier.push(s);
        }
    }
    frontier.sort_unstable();

    let mut layer = 0;
    while !frontier.is_empty() && layer < max_hops {
        layer += 1;
        let mut next = Vec::new();
        for &p in &frontier {
            let cost = tree.cost[p] + if is_source[p] { 0.0 } else { step(p) };
            for &x in g.neighbors(p) {
                let h = tree.hops[x];
                if h < layer {
                    continue;
                }
                let better = h == usize::MAX || {
                    let last = tree.path[x].len() - 1;
                    order(
                        cost,
                        &tree.path[p],
                        tree.cost[x],
                        &tree.path[x][..last],
                        tie,
                    ) == Ordering::Less
                };
                if h == usize::MAX {
                    next.push(x);
                }
                if better {
                    tree.hops[x] = layer;
                    tree.cost[x] = cost;
                    let mut path = Vec::with_capacity(tree.path[p].len() + 1);
                    path.extend_from_slice(&tree.path[p]);
                    path.push(x);
                    tree.path[x] = path;
                }
            }
        }
        next.retain(|&x| passable(x));
        next.sort_unstable();
        frontier = next;
    }
    tree
}

/// Minimum-hop path from `u` to `v`; ties are broken by `tie`, then by the
/// lexicographically smallest id sequence. `None` when `v` is unreachable.
pub fn shortest_hop_path(g: &UdgGraph, u: usize, v: usize, tie: TieBreak) -> Option<Vec<usize>> {
    let tree = search(g, &[u], &|_| true, usize::MAX, tie);
    tree.reached(v).then(|| tree.path[v].clone())
}
