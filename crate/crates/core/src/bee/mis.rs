use alloc::vec;

use super::{Color, Trace};
use crate::graph::{NodeSet, UdgGraph};

/// Greedy maximal independent set of `g`.
///
/// The root is the node of largest degree; afterwards the white node with the
/// most grey neighbors is blackened until no white node is left. Ties go to
/// the lighter node, then to the smaller id.
pub fn round1_mis(g: &UdgGraph) -> NodeSet {
    greedy_mis(g, &vec![true; g.len()], &mut Trace::default())
}

/// Same colouring process on the subgraph induced by `member`.
pub(crate) fn greedy_mis(g: &UdgGraph, member: &[bool], trace: &mut Trace) -> NodeSet {
    let n = g.len();
    let mut color = vec![None; n];
    let mut grey_nbrs = vec![0usize; n];
    let mut mis = NodeSet::new();
    for v in 0..n {
        if member[v] {
            color[v] = Some(Color::White);
        }
    }
    let lighter = |a: usize, b: usize| g.weight(a).total_cmp(&g.weight(b)).then(a.cmp(&b));

    let root = (0..n).filter(|&v| member[v]).min_by(|&a, &b| {
        let deg = |v: usize| g.neighbors(v).iter().filter(|&&w| member[w]).count();
        deg(b).cmp(&deg(a)).then(lighter(a, b))
    });
    let mut next = root;
    while let Some(v) = next {
        color[v] = Some(Color::Black);
        mis.insert(v);
        trace.color(v, Color::Black);
        trace.tick();
        for &w in g.neighbors(v) {
            if color[w] == Some(Color::White) {
                color[w] = Some(Color::Grey);
                trace.color(w, Color::Grey);
                for &x in g.neighbors(w) {
                    grey_nbrs[x] += 1;
                }
            }
        }
        next = (0..n)
            .filter(|&v| color[v] == Some(Color::White))
            .min_by(|&a, &b| grey_nbrs[b].cmp(&grey_nbrs[a]).then(lighter(a, b)));
    }
    mis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{fixtures, random_topology, Point};

    fn is_maximal_independent(g: &UdgGraph, s: &NodeSet) -> bool {
        let independent = s.iter().all(|u| s.iter().all(|v| !g.has_edge(u, v)));
        let maximal = g
            .nodes()
            .all(|v| s.contains(v) || g.neighbors(v).iter().any(|&u| s.contains(u)));
        independent && maximal
    }

    #[test]
    fn complete_graph_gives_root_only() {
        assert_eq!(round1_mis(&fixtures::complete(5)).len(), 1);
    }

    #[test]
    fn edgeless_graph_gives_everything() {
        assert_eq!(round1_mis(&fixtures::edgeless(6)), NodeSet::full(6));
    }

    #[test]
    fn path_of_five() {
        // Labels 1..5 map to ids 0..4; expected {2, 4}.
        assert_eq!(round1_mis(&fixtures::line(5)), NodeSet::from([1, 3]));
    }

    #[test]
    fn root_tie_prefers_lighter_node() {
        let pts = (0..5)
            .map(|i| Point::new(i as f64, 0.0, if i == 3 { 0.05 } else { 0.5 }))
            .collect();
        let g = UdgGraph::new(pts, 1.0).unwrap();
        assert!(round1_mis(&g).contains(3));
    }

    #[test]
    fn always_maximal_independent() {
        for seed in 0..50 {
            let g = random_topology(40, 100.0, 100.0, 22.0, seed).unwrap();
            assert!(is_maximal_independent(&g, &round1_mis(&g)), "seed {seed}");
        }
    }

    #[test]
    fn events_and_ticks() {
        let mut trace = Trace::default();
        let mis = greedy_mis(&fixtures::line(3), &[true; 3], &mut trace);
        assert_eq!(mis, NodeSet::from([1]));
        assert_eq!(trace.events.len(), 3);
        assert_eq!(trace.ticks, 1);
    }
}
