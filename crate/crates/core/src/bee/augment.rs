use alloc::vec::Vec;

use super::{Color, Trace};
use crate::graph::{
    bad_points, components, induced_connected, search, tarjan, two_connected_mask, NodeSet,
    TieBreak, UdgGraph,
};
use crate::Error;

/// Adds outside paths until the set induces a subgraph without cut vertices.
///
/// Each step takes the smallest leaf block that can be reattached and joins
/// it, through nodes not yet in the set, to a member outside the block.
pub fn round4_biconnect(g: &UdgGraph, d: &NodeSet) -> Result<NodeSet, Error> {
    g.check_set(d)?;
    Ok(biconnect(g, d, None, &mut Trace::default())?.0)
}

/// Round 4 proper. With `shed_k` set, a leaf block that no outside path can
/// reattach loses its non-cut members, provided the rest of the set still
/// `shed_k`-dominates them; no 2-connected set of three or more nodes can
/// hold them together with the other side of the cut. Shed nodes are never
/// re-added. Returns the final set and the shed nodes.
pub(crate) fn biconnect(
    g: &UdgGraph,
    d: &NodeSet,
    shed_k: Option<usize>,
    trace: &mut Trace,
) -> Result<(NodeSet, NodeSet), Error> {
    let n = g.len();
    let mut member = d.mask(n);
    let mut barred = alloc::vec![false; n];
    let mut count = d.len();
    if !induced_connected(g, &member, count) {
        return Err(Error::structural("round 4 needs a connected dominator set"));
    }
    // Every step adds or sheds at least one node, and shed nodes stay out.
    for _ in 0..=2 * n {
        if two_connected_mask(g, &member, count) {
            return Ok((NodeSet::from_mask(&member), NodeSet::from_mask(&barred)));
        }
        trace.tick();
        let t = tarjan(g, &member);
        let mut leaves: Vec<&NodeSet> = t
            .blocks
            .iter()
            .filter(|b| b.iter().filter(|&v| t.cut[v]).count() == 1)
            .collect();
        if leaves.is_empty() {
            return Err(Error::Internal("cut vertex without a leaf block".into()));
        }
        leaves.sort_by_key(|b| (b.len(), b.first()));
        let outside = |x: usize| !member[x] && !barred[x];
        // Smallest leaf block that an outside path can reattach.
        let attach = leaves.iter().find_map(|leaf| {
            let sources: Vec<usize> = leaf.iter().filter(|&v| !t.cut[v]).collect();
            let tree = search(g, &sources, &outside, usize::MAX, TieBreak::MinWeight);
            g.nodes()
                .filter(|&v| member[v] && !leaf.contains(v) && tree.reached(v))
                .min_by(|&a, &b| tree.compare(a, b, TieBreak::MinWeight))
                .map(|target| tree.interior(target).to_vec())
        });
        if let Some(interior) = attach {
            if interior.is_empty() {
                return Err(Error::Internal(
                    "leaf block already adjacent to the rest".into(),
                ));
            }
            for x in interior {
                member[x] = true;
                count += 1;
                trace.color(x, Color::Black);
            }
            continue;
        }
        // Otherwise the smallest leaf block whose loss keeps everything dominated.
        let k = shed_k.ok_or(Error::UnachievableConnectivity { m: 2 })?;
        let shed = leaves.iter().find_map(|leaf| {
            let drop: Vec<usize> = leaf.iter().filter(|&v| !t.cut[v]).collect();
            let mut kept = member.clone();
            for &x in &drop {
                kept[x] = false;
            }
            let covered =
                |v: usize| kept[v] || g.neighbors(v).iter().filter(|&&w| kept[w]).count() >= k;
            g.nodes().all(covered).then_some(drop)
        });
        let shed = shed.ok_or(Error::UnachievableConnectivity { m: 2 })?;
        for x in shed {
            member[x] = false;
            barred[x] = true;
            count -= 1;
            trace.color(x, Color::White);
        }
    }
    Err(Error::UnachievableConnectivity { m: 2 })
}

/// Turns bad points into good points until the set is 3-connected.
///
/// For the smallest bad point `v` a cut vertex `w` of the set minus `v`
/// is located. Outside nodes touching two components of the set minus
/// `{v, w}` are tried first; the one removing the most bad points without
/// creating new ones is added. Otherwise the shortest outside path between
/// two such components is added.
pub fn round5_triconnect(g: &UdgGraph, d: &NodeSet) -> Result<NodeSet, Error> {
    g.check_set(d)?;
    triconnect(g, d, &mut Trace::default())
}

pub(crate) fn triconnect(g: &UdgGraph, d: &NodeSet, trace: &mut Trace) -> Result<NodeSet, Error> {
    let n = g.len();
    let mut set = d.clone();
    if !two_connected_mask(g, &set.mask(n), set.len()) {
        return Err(Error::structural(
            "round 5 needs a 2-connected dominator set",
        ));
    }
    if set.len() <= 2 {
        // Complete, so already 3-connected.
        return Ok(set);
    }
    for _ in 0..=n {
        let bad = bad_points(g, &set);
        let Some(v) = bad.first() else {
            return Ok(set);
        };
        trace.tick();

        let mut member = set.mask(n);
        member[v] = false;
        let cut = tarjan(g, &member).cut;
        let w = (0..n)
            .find(|&x| cut[x])
            .ok_or_else(|| Error::Internal("bad point without a separating partner".into()))?;
        member[w] = false;
        let (label, _) = components(g, &member);

        let mut candidates: Vec<usize> = g
            .nodes()
            .filter(|&x| !set.contains(x))
            .filter(|&x| {
                let mut seen = g
                    .neighbors(x)
                    .iter()
                    .map(|&y| label[y])
                    .filter(|&l| l != usize::MAX);
                match seen.next() {
                    Some(first) => seen.any(|l| l != first),
                    None => false,
                }
            })
            .collect();
        candidates.sort_by(|&a, &b| g.weight(a).total_cmp(&g.weight(b)).then(a.cmp(&b)));

        let repairs: Vec<Repair> = bad.iter().map(|b| Repair::new(g, &set, b)).collect();
        let mut best: Option<(usize, usize)> = None;
        for &x in &candidates {
            let inside = g.neighbors(x).iter().filter(|&&y| set.contains(y)).count();
            let gain = if inside >= 3 {
                // x keeps every other point good, so only bad points can change.
                repairs.iter().filter(|r| r.fixed_by(g, x)).count()
            } else {
                let mut grown = set.clone();
                grown.insert(x);
                let after = bad_points(g, &grown);
                if !after.is_subset(&bad) {
                    continue;
                }
                bad.len() - after.len()
            };
            if gain > 0 && best.is_none_or(|(_, g0)| gain > g0) {
                best = Some((x, gain));
            }
        }
        if let Some((x, _)) = best {
            set.insert(x);
            trace.color(x, Color::Black);
            continue;
        }

        let sources: Vec<usize> = (0..n).filter(|&x| label[x] == 0).collect();
        let outside = |x: usize| !set.contains(x);
        let tree = search(g, &sources, &outside, usize::MAX, TieBreak::MinWeight);
        let target = (0..n)
            .filter(|&x| label[x] != usize::MAX && label[x] != 0 && tree.reached(x))
            .min_by(|&a, &b| tree.compare(a, b, TieBreak::MinWeight))
            .ok_or(Error::UnachievableConnectivity { m: 3 })?;
        let interior = tree.interior(target).to_vec();
        if interior.is_empty() {
            return Err(Error::Internal("separated components are adjacent".into()));
        }
        for x in interior {
            set.insert(x);
            trace.color(x, Color::Black);
        }
    }
    Err(Error::UnachievableConnectivity { m: 3 })
}

/// Separations of `set - v` for one bad point `v`: for each cut vertex `c`
/// of `set - v`, the component labels of `set - v - c`.
struct Repair {
    v: usize,
    cuts: Vec<(usize, Vec<usize>, usize)>,
}

impl Repair {
    fn new(g: &UdgGraph, set: &NodeSet, v: usize) -> Self {
        let mut member = set.mask(g.len());
        member[v] = false;
        let cut = tarjan(g, &member).cut;
        let cuts = (0..g.len())
            .filter(|&c| cut[c])
            .map(|c| {
                member[c] = false;
                let (label, count) = components(g, &member);
                member[c] = true;
                (c, label, count)
            })
            .collect();
        Repair { v, cuts }
    }

    /// Whether `set + x - v` is 2-connected, given that `x` has at least two
    /// neighbours in `set - v`: `x` must touch every component left by each
    /// cut vertex.
    fn fixed_by(&self, g: &UdgGraph, x: usize) -> bool {
        let mut touched = Vec::new();
        self.cuts.iter().all(|(c, label, count)| {
            touched.clear();
            touched.resize(*count, false);
            for &y in g.neighbors(x) {
                if y != self.v && y != *c && label[y] != usize::MAX {
                    touched[label[y]] = true;
                }
            }
            touched.iter().all(|&t| t)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{fixtures, is_m_connected, random_connected_topology};

    #[test]
    fn already_two_connected_is_unchanged() {
        let g = fixtures::square();
        assert_eq!(
            round4_biconnect(&g, &NodeSet::full(4)).unwrap(),
            NodeSet::full(4)
        );
    }

    #[test]
    fn bowtie_cannot_be_biconnected() {
        let g = fixtures::bowtie();
        assert_eq!(
            round4_biconnect(&g, &NodeSet::full(5)).unwrap_err(),
            Error::UnachievableConnectivity { m: 2 }
        );
    }

    #[test]
    fn path_inside_cycle_is_closed() {
        // Dominators 0-1-2-3 on a hexagon; 4 and 5 close the ring.
        let g = fixtures::cycle(6);
        let d = round4_biconnect(&g, &NodeSet::from([0, 1, 2, 3])).unwrap();
        assert_eq!(d, NodeSet::full(6));
    }

    #[test]
    fn rejects_disconnected_input() {
        let g = fixtures::line(4);
        assert!(round4_biconnect(&g, &NodeSet::from([0, 3])).is_err());
    }

    #[test]
    fn random_two_connected_graphs() {
        let mut tried = 0;
        for seed in 0..100 {
            let g = random_connected_topology(30, 100.0, 100.0, 35.0, seed, 1000).unwrap();
            if !is_m_connected(&g, &NodeSet::full(30), 2) {
                continue;
            }
            tried += 1;
            let d =
                crate::bee::round2_connect(&g, &crate::bee::round1_mis(&g), &Default::default())
                    .unwrap();
            let out = round4_biconnect(&g, &d).unwrap();
            assert!(d.is_subset(&out));
            assert!(is_m_connected(&g, &out, 2), "seed {seed}");
        }
        assert!(tried > 30);
    }

    #[test]
    fn repair_agrees_with_recomputed_bad_points() {
        let mut checked = 0;
        for seed in 0..40 {
            let g = random_connected_topology(30, 100.0, 100.0, 32.0, seed, 1000).unwrap();
            let Ok(d) = round4_biconnect(
                &g,
                &crate::bee::round2_connect(&g, &crate::bee::round1_mis(&g), &Default::default())
                    .unwrap(),
            ) else {
                continue;
            };
            let bad = bad_points(&g, &d);
            let repairs: Vec<Repair> = bad.iter().map(|b| Repair::new(&g, &d, b)).collect();
            for x in g.nodes().filter(|&x| !d.contains(x)) {
                if g.neighbors(x).iter().filter(|&&y| d.contains(y)).count() < 3 {
                    continue;
                }
                let mut grown = d.clone();
                grown.insert(x);
                let after = bad_points(&g, &grown);
                let kept: NodeSet = repairs
                    .iter()
                    .filter(|r| !r.fixed_by(&g, x))
                    .map(|r| r.v)
                    .collect();
                assert_eq!(after, kept, "seed {seed} node {x}");
                checked += 1;
            }
        }
        assert!(checked > 100, "{checked}");
    }

    #[test]
    fn complete_set_needs_nothing() {
        let g = fixtures::complete(4);
        assert_eq!(
            round5_triconnect(&g, &NodeSet::full(4)).unwrap(),
            NodeSet::full(4)
        );
    }

    #[test]
    fn four_cycle_cannot_be_triconnected() {
        let g = fixtures::square();
        assert_eq!(
            round5_triconnect(&g, &NodeSet::full(4)).unwrap_err(),
            Error::UnachievableConnectivity { m: 3 }
        );
    }

    #[test]
    fn rim_gets_its_hub() {
        let g = fixtures::wheel();
        let d = round5_triconnect(&g, &NodeSet::from([1, 2, 3, 4])).unwrap();
        assert_eq!(d, NodeSet::full(5));
    }

    #[test]
    fn dense_random_graphs_reach_three_connectivity() {
        let mut tried = 0;
        for seed in 0..50 {
            let g = random_connected_topology(25, 100.0, 100.0, 50.0, seed, 1000).unwrap();
            if !is_m_connected(&g, &NodeSet::full(25), 3) {
                continue;
            }
            tried += 1;
            let mis = crate::bee::round1_mis(&g);
            let d = crate::bee::round2_connect(&g, &mis, &Default::default()).unwrap();
            let d = round4_biconnect(&g, &d).unwrap();
            let out = round5_triconnect(&g, &d).unwrap();
            assert!(is_m_connected(&g, &out, 3), "seed {seed}");
        }
        assert!(tried > 20);
    }
}
