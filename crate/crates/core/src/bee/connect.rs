use alloc::vec::Vec;

use super::{mis::greedy_mis, BeeConfig, Color, Trace};
use crate::graph::{components, is_dominating, search, search_with, NodeSet, TieBreak, UdgGraph};
use crate::Error;

/// Joins every pair of MIS nodes at most `cfg.hop_threshold` hops apart by
/// their best shortest path; returns the MIS plus all path interiors.
pub fn round2_connect(g: &UdgGraph, mis: &NodeSet, cfg: &BeeConfig) -> Result<NodeSet, Error> {
    g.check_set(mis)?;
    connect_pairs(g, mis, cfg, &mut Trace::default())
}

pub(crate) fn connect_pairs(
    g: &UdgGraph,
    mis: &NodeSet,
    cfg: &BeeConfig,
    trace: &mut Trace,
) -> Result<NodeSet, Error> {
    let mut member = mis.mask(g.len());
    add_pair_paths(g, mis, &mut member, cfg, trace);
    let d = NodeSet::from_mask(&member);
    if !crate::graph::induced_connected(g, &member, d.len()) || !is_dominating(g, &d) {
        return Err(Error::Internal(
            "pairwise connection did not produce a connected dominating set".into(),
        ));
    }
    Ok(d)
}

fn add_pair_paths(
    g: &UdgGraph,
    anchors: &NodeSet,
    member: &mut [bool],
    cfg: &BeeConfig,
    trace: &mut Trace,
) {
    for u in anchors.iter() {
        // Among shortest paths: lightest interior with the uncertainty
        // constraint, otherwise the one recruiting the fewest new dominators.
        let tree = if cfg.uncertainty_constraint {
            search(g, &[u], &|_| true, cfg.hop_threshold, TieBreak::MinWeight)
        } else {
            let fresh = |x: usize| if member[x] { 0.0 } else { 1.0 };
            search_with(
                g,
                &[u],
                &|_| true,
                cfg.hop_threshold,
                TieBreak::MinWeight,
                &fresh,
            )
        };
        for v in anchors.iter().filter(|&v| v > u && tree.reached(v)) {
            trace.tick();
            for &x in tree.interior(v) {
                if !member[x] {
                    member[x] = true;
                    trace.color(x, Color::Black);
                }
            }
        }
    }
}

/// Output of round 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KDomination {
    pub dominators: NodeSet,
    /// M₁ … M_k (fewer when the graph runs out of nodes).
    pub layers: Vec<NodeSet>,
    /// Nodes that could not collect k dominator neighbors and joined the set.
    pub promoted: NodeSet,
}

/// Adds independent layers M₂ … M_k, each a greedy MIS of the nodes not yet
/// used by earlier layers, and keeps the set connected.
pub fn round3_k_dominate(
    g: &UdgGraph,
    d: &NodeSet,
    first_layer: &NodeSet,
    cfg: &BeeConfig,
) -> Result<KDomination, Error> {
    g.check_set(d)?;
    g.check_set(first_layer)?;
    if !first_layer.is_subset(d) {
        return Err(Error::structural(
            "first MIS layer must lie inside the dominating set",
        ));
    }
    k_dominate(g, d, first_layer, cfg, &mut Trace::default())
}

pub(crate) fn k_dominate(
    g: &UdgGraph,
    d: &NodeSet,
    first_layer: &NodeSet,
    cfg: &BeeConfig,
    trace: &mut Trace,
) -> Result<KDomination, Error> {
    let n = g.len();
    let mut member = d.mask(n);
    let mut used = first_layer.mask(n);
    let mut layers = alloc::vec![first_layer.clone()];

    for _ in 2..=cfg.k {
        if used.iter().all(|&u| u) {
            break;
        }
        let residual: Vec<bool> = used.iter().map(|&u| !u).collect();
        let layer = greedy_mis(g, &residual, trace);
        for v in layer.iter() {
            used[v] = true;
            member[v] = true;
        }
        layers.push(layer);
        reconnect(g, &mut member, cfg, trace)?;
    }

    let mut promoted = NodeSet::new();
    for v in 0..n {
        if !member[v] && g.neighbors(v).iter().filter(|&&w| member[w]).count() < cfg.k {
            promoted.insert(v);
        }
    }
    for v in promoted.iter() {
        member[v] = true;
        trace.color(v, Color::Black);
    }
    Ok(KDomination {
        dominators: NodeSet::from_mask(&member),
        layers,
        promoted,
    })
}

/// Joins the component holding the smallest member to the nearest other
/// component until the members induce a connected subgraph.
fn reconnect(
    g: &UdgGraph,
    member: &mut [bool],
    cfg: &BeeConfig,
    trace: &mut Trace,
) -> Result<(), Error> {
    loop {
        let (label, count) = components(g, member);
        if count <= 1 {
            return Ok(());
        }
        trace.tick();
        let sources: Vec<usize> = (0..g.len()).filter(|&v| label[v] == 0).collect();
        let outside = |x: usize| !member[x];
        let tree = search(g, &sources, &outside, usize::MAX, cfg.path_tie());
        let target = (0..g.len())
            .filter(|&v| tree.reached(v) && member[v] && label[v] != 0)
            .min_by(|&a, &b| tree.compare(a, b, cfg.path_tie()))
            .ok_or_else(|| Error::Internal("dominator components cannot be joined".into()))?;
        for &x in tree.interior(target) {
            member[x] = true;
            trace.color(x, Color::Black);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bee::round1_mis;
    use crate::graph::{fixtures, is_k_dominating, is_m_connected, random_connected_topology};

    #[test]
    fn single_node() {
        let g = fixtures::line(1);
        let d = round2_connect(&g, &NodeSet::from([0]), &BeeConfig::default()).unwrap();
        assert_eq!(d, NodeSet::from([0]));
    }

    #[test]
    fn path_of_five() {
        let g = fixtures::line(5);
        let d = round2_connect(&g, &NodeSet::from([1, 3]), &BeeConfig::default()).unwrap();
        assert_eq!(d, NodeSet::from([1, 2, 3]));
        assert!(is_k_dominating(&g, &d, 1));
        assert!(is_m_connected(&g, &d, 1));
    }

    #[test]
    fn hexagon_takes_every_connector() {
        // Labels 1..6 are ids 0..5, MIS {1,3,5} is {0,2,4}.
        let g = fixtures::cycle(6);
        let d = round2_connect(&g, &NodeSet::from([0, 2, 4]), &BeeConfig::default()).unwrap();
        assert_eq!(d, NodeSet::full(6));
    }

    #[test]
    fn hop_threshold_limits_pairs() {
        // MIS nodes 0 and 4 on a path are 4 hops apart.
        let g = fixtures::line(5);
        let mut cfg = BeeConfig::default();
        let d = round2_connect(&g, &NodeSet::from([0, 2, 4]), &cfg).unwrap();
        assert_eq!(d, NodeSet::full(5));
        cfg.hop_threshold = 2;
        let d = round2_connect(&g, &NodeSet::from([0, 2, 4]), &cfg).unwrap();
        assert_eq!(d, NodeSet::full(5));
    }

    #[test]
    fn k_one_is_a_no_op() {
        let g = fixtures::line(5);
        let d = NodeSet::from([1, 2, 3]);
        let kd = round3_k_dominate(&g, &d, &NodeSet::from([1, 3]), &BeeConfig::new(1, 1)).unwrap();
        assert_eq!(kd.dominators, d);
        assert_eq!(kd.layers.len(), 1);
    }

    #[test]
    fn path_of_five_two_dominating() {
        let g = fixtures::line(5);
        let kd = round3_k_dominate(
            &g,
            &NodeSet::from([1, 2, 3]),
            &NodeSet::from([1, 3]),
            &BeeConfig::new(1, 2),
        )
        .unwrap();
        assert_eq!(kd.layers[1], NodeSet::from([0, 2, 4]));
        assert_eq!(kd.dominators, NodeSet::full(5));
        assert!(is_k_dominating(&g, &kd.dominators, 2));
    }

    #[test]
    fn two_domination_on_dense_graphs() {
        let mut checked = 0;
        for seed in 0..100 {
            let g = random_connected_topology(30, 100.0, 100.0, 40.0, seed, 1000).unwrap();
            if g.nodes().any(|v| g.degree(v) < 2) {
                continue;
            }
            checked += 1;
            let mis = round1_mis(&g);
            let d = round2_connect(&g, &mis, &BeeConfig::default()).unwrap();
            let kd = round3_k_dominate(&g, &d, &mis, &BeeConfig::new(1, 2)).unwrap();
            assert!(is_k_dominating(&g, &kd.dominators, 2), "seed {seed}");
            assert!(is_m_connected(&g, &kd.dominators, 1), "seed {seed}");
            assert!(kd.promoted.is_empty());
        }
        assert!(checked > 50);
    }

    #[test]
    fn rejects_layer_outside_set() {
        let g = fixtures::line(3);
        let err = round3_k_dominate(
            &g,
            &NodeSet::from([1]),
            &NodeSet::from([0]),
            &BeeConfig::new(1, 2),
        );
        assert!(err.is_err());
    }
}
