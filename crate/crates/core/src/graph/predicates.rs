use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::{tarjan, NodeSet, UdgGraph};
use crate::Error;

/// Outcome of removing a vertex from a 2-connected subgraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointClass {
    /// The rest of the subgraph is no longer 2-connected.
    Bad,
    /// The rest of the subgraph stays 2-connected.
    Good,
}

/// Whether the `count` flagged members induce a connected subgraph.
pub(crate) fn induced_connected(g: &UdgGraph, member: &[bool], count: usize) -> bool {
    let Some(start) = member.iter().position(|&m| m) else {
        return false;
    };
    let mut seen = vec![false; g.len()];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    let mut reached = 1;
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            if member[w] && !seen[w] {
                seen[w] = true;
                reached += 1;
                queue.push_back(w);
            }
        }
    }
    reached == count
}

/// Connected-component labels of the induced subgraph; non-members get
/// `usize::MAX`. Components are numbered by their smallest member.
pub(crate) fn components(g: &UdgGraph, member: &[bool]) -> (Vec<usize>, usize) {
    let mut label = vec![usize::MAX; g.len()];
    let mut next = 0;
    for s in 0..g.len() {
        if !member[s] || label[s] != usize::MAX {
            continue;
        }
        label[s] = next;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in g.neighbors(v) {
                if member[w] && label[w] == usize::MAX {
                    label[w] = next;
                    queue.push_back(w);
                }
            }
        }
        next += 1;
    }
    (label, next)
}

fn induced_complete(g: &UdgGraph, member: &[bool], count: usize) -> bool {
    (0..g.len())
        .filter(|&v| member[v])
        .all(|v| g.neighbors(v).iter().filter(|&&w| member[w]).count() + 1 == count)
}

/// Linear-time 2-connectivity of the induced subgraph, with the small-set
/// convention: at most two members are 2-connected iff they are complete.
pub(crate) fn two_connected_mask(g: &UdgGraph, member: &[bool], count: usize) -> bool {
    if count == 0 {
        return false;
    }
    if count <= 2 {
        return induced_complete(g, member, count);
    }
    induced_connected(g, member, count) && !tarjan(g, member).cut.iter().any(|&c| c)
}

/// True iff every node outside `d` has at least `k` neighbors inside `d`.
pub fn is_k_dominating(g: &UdgGraph, d: &NodeSet, k: usize) -> bool {
    let member = g.mask(d);
    g.nodes()
        .filter(|&v| !member[v])
        .all(|v| g.neighbors(v).iter().filter(|&&w| member[w]).count() >= k)
}

pub fn is_dominating(g: &UdgGraph, d: &NodeSet) -> bool {
    is_k_dominating(g, d, 1)
}

/// m-connectivity of the subgraph induced by `d`, decided by removing every
/// (m−1)-subset of `d` and testing connectivity of the remainder.
///
/// Sets with at most `m` members count as m-connected iff they induce a
/// complete graph. The empty set is never connected.
pub fn is_m_connected(g: &UdgGraph, d: &NodeSet, m: usize) -> bool {
    assert!(m >= 1, "connectivity order must be at least 1");
    if d.is_empty() {
        return false;
    }
    let mut member = g.mask(d);
    if d.len() <= m {
        return induced_complete(g, &member, d.len());
    }
    let ids = d.as_slice();
    let remove = m - 1;
    let remaining = d.len() - remove;
    // Walk all `remove`-combinations of member positions in lexicographic order.
    let mut idx: Vec<usize> = (0..remove).collect();
    loop {
        for &i in &idx {
            member[ids[i]] = false;
        }
        let ok = induced_connected(g, &member, remaining);
        for &i in &idx {
            member[ids[i]] = true;
        }
        if !ok {
            return false;
        }
        let Some(pos) = (0..remove).rev().find(|&p| idx[p] < ids.len() - remove + p) else {
            return true;
        };
        idx[pos] += 1;
        for q in pos + 1..remove {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

/// Fast 2-connectivity check (articulation points), same convention as
/// [`is_m_connected`].
pub fn is_two_connected(g: &UdgGraph, d: &NodeSet) -> bool {
    two_connected_mask(g, &g.mask(d), d.len())
}

/// Members of `d` whose removal leaves a subgraph that is not 2-connected.
pub fn bad_points(g: &UdgGraph, d: &NodeSet) -> NodeSet {
    let mut member = g.mask(d);
    let mut bad = NodeSet::new();
    for v in d.iter() {
        member[v] = false;
        if !two_connected_mask(g, &member, d.len() - 1) {
            bad.insert(v);
        }
        member[v] = true;
    }
    bad
}

/// Classifies `v` inside the 2-connected subgraph induced by `subset`.
pub fn classify_point(g: &UdgGraph, subset: &NodeSet, v: usize) -> Result<PointClass, Error> {
    g.check_set(subset)?;
    if !subset.contains(v) {
        return Err(Error::structural(alloc::format!(
            "node {v} is not in the subset"
        )));
    }
    let mut member = g.mask(subset);
    if !two_connected_mask(g, &member, subset.len()) {
        return Err(Error::structural(
            "subset does not induce a 2-connected subgraph",
        ));
    }
    member[v] = false;
    Ok(if two_connected_mask(g, &member, subset.len() - 1) {
        PointClass::Good
    } else {
        PointClass::Bad
    })
}

/// Largest m ≤ 3 for which `d` is m-connected (0 when disconnected or empty).
/// Uses articulation points and bad points instead of exhaustive removal.
pub fn connectivity_level(g: &UdgGraph, d: &NodeSet) -> u8 {
    let member = g.mask(d);
    if !induced_connected(g, &member, d.len()) {
        return 0;
    }
    if !two_connected_mask(g, &member, d.len()) {
        return 1;
    }
    if d.len() <= 3 {
        // Small 2-connected sets are complete, hence 3-connected by convention.
        return 3;
    }
    if bad_points(g, d).is_empty() {
        3
    } else {
        2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{fixtures, random_topology};

    #[test]
    fn k_domination_examples() {
        let g = fixtures::star(4);
        assert!(is_k_dominating(&g, &NodeSet::full(5), 7));
        assert!(is_k_dominating(&g, &NodeSet::from([0]), 1));
        assert!(!is_k_dominating(&g, &NodeSet::from([0]), 2));
    }

    #[test]
    fn k_domination_matches_counting() {
        for seed in 0..20 {
            let g = random_topology(25, 100.0, 100.0, 30.0, seed).unwrap();
            let d: NodeSet = g
                .nodes()
                .filter(|v| (v * 7 + seed as usize).is_multiple_of(3))
                .collect();
            for k in 1..4 {
                let mut expected = true;
                for v in g.nodes() {
                    if d.contains(v) {
                        continue;
                    }
                    let mut hits = 0;
                    for u in d.iter() {
                        let dx = g.point(u).x - g.point(v).x;
                        let dy = g.point(u).y - g.point(v).y;
                        if dx * dx + dy * dy <= 900.0 {
                            hits += 1;
                        }
                    }
                    expected &= hits >= k;
                }
                assert_eq!(is_k_dominating(&g, &d, k), expected);
            }
        }
    }

    #[test]
    fn m_connectivity_examples() {
        let k4 = fixtures::complete(4);
        assert!(is_m_connected(&k4, &NodeSet::full(4), 3));
        let c5 = fixtures::cycle(5);
        assert!(is_m_connected(&c5, &NodeSet::full(5), 2));
        assert!(!is_m_connected(&c5, &NodeSet::full(5), 3));
        let line = fixtures::line(2);
        assert!(is_m_connected(&line, &NodeSet::full(2), 3));
        assert!(!is_m_connected(
            &fixtures::edgeless(2),
            &NodeSet::full(2),
            1
        ));
        assert!(is_m_connected(&line, &NodeSet::from([0]), 2));
        assert!(!is_m_connected(&line, &NodeSet::new(), 1));
    }

    #[test]
    fn fast_and_exhaustive_two_connectivity_agree() {
        for seed in 0..60 {
            let g = random_topology(14, 100.0, 100.0, 45.0, seed).unwrap();
            let d: NodeSet = g
                .nodes()
                .filter(|v| !(v + seed as usize).is_multiple_of(4))
                .collect();
            assert_eq!(
                is_two_connected(&g, &d),
                is_m_connected(&g, &d, 2),
                "seed {seed}"
            );
            let level = connectivity_level(&g, &d);
            for m in 1..=3u8 {
                assert_eq!(
                    is_m_connected(&g, &d, m as usize),
                    level >= m,
                    "seed {seed} m {m}"
                );
            }
        }
    }

    #[test]
    fn classify_examples() {
        let c4 = fixtures::square();
        for v in 0..4 {
            assert_eq!(
                classify_point(&c4, &NodeSet::full(4), v).unwrap(),
                PointClass::Bad
            );
        }
        let k4 = fixtures::complete(4);
        for v in 0..4 {
            assert_eq!(
                classify_point(&k4, &NodeSet::full(4), v).unwrap(),
                PointClass::Good
            );
        }
        let w5 = fixtures::wheel();
        for v in 0..5 {
            assert_eq!(
                classify_point(&w5, &NodeSet::full(5), v).unwrap(),
                PointClass::Good
            );
        }
        assert!(bad_points(&w5, &NodeSet::full(5)).is_empty());
    }

    #[test]
    fn classify_preconditions() {
        let g = fixtures::line(3);
        let err = classify_point(&g, &NodeSet::full(3), 1).unwrap_err();
        assert_eq!(err.name(), "structural-error");
        let k4 = fixtures::complete(4);
        assert!(classify_point(&k4, &NodeSet::from([0, 1]), 3).is_err());
    }

    #[test]
    fn wheel_rim_removal_leaves_a_two_connected_fan() {
        // Exhaustive oracle: after dropping a rim node, removing any single
        // further node keeps the fan connected.
        let w5 = fixtures::wheel();
        for v in 1..5 {
            let rest: NodeSet = (0..5).filter(|&u| u != v).collect();
            assert!(is_m_connected(&w5, &rest, 2));
        }
    }
}
