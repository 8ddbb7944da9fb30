//! Exact minimum m-connected k-dominating sets by exhaustive search.
//!
//! Works on bitmasks and does not reuse the predicates of [`crate::graph`],
//! so it can serve as an independent reference for them.

use alloc::vec::Vec;

use crate::graph::{NodeSet, UdgGraph};
use crate::Error;

/// Largest graph the oracle accepts.
pub const MAX_ORACLE_NODES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    /// Lexicographically first subset of minimum size; `None` when infeasible.
    pub optimum: Option<NodeSet>,
    /// Size of the optimum, 0 when infeasible.
    pub size: usize,
    pub feasible: bool,
    /// Subsets examined, including ones rejected by the coverage test.
    pub explored: u64,
}

struct Masks {
    n: usize,
    nbr: Vec<u32>,
}

impl Masks {
    fn new(g: &UdgGraph) -> Self {
        let nbr = g
            .nodes()
            .map(|v| g.neighbors(v).iter().fold(0u32, |acc, &w| acc | 1 << w))
            .collect();
        Masks { n: g.len(), nbr }
    }

    fn all(&self) -> u32 {
        if self.n == 32 {
            u32::MAX
        } else {
            (1u32 << self.n) - 1
        }
    }

    fn k_dominating(&self, set: u32, k: usize) -> bool {
        (0..self.n)
            .filter(|&v| set & (1 << v) == 0)
            .all(|v| (self.nbr[v] & set).count_ones() as usize >= k)
    }

    fn connected(&self, set: u32) -> bool {
        if set == 0 {
            return false;
        }
        let mut seen = set & set.wrapping_neg();
        let mut frontier = seen;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = self.nbr[v] & set & !seen;
            seen |= fresh;
            frontier |= fresh;
        }
        seen == set
    }

    fn complete(&self, set: u32) -> bool {
        let mut rest = set;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if self.nbr[v] & set != set & !(1 << v) {
                return false;
            }
        }
        true
    }

    /// Stays connected after deleting any `m − 1` members; sets of at most
    /// `m` members qualify only when complete.
    fn m_connected(&self, set: u32, m: usize) -> bool {
        let size = set.count_ones() as usize;
        if size == 0 {
            return false;
        }
        if size <= m {
            return self.complete(set);
        }
        let members: Vec<u32> = (0..self.n)
            .filter(|&v| set & (1 << v) != 0)
            .map(|v| 1 << v)
            .collect();
        let mut ok = true;
        for_each_combination(members.len(), m - 1, |idx| {
            let removed = idx.iter().fold(0u32, |acc, &i| acc | members[i]);
            ok = self.connected(set & !removed);
            ok
        });
        ok
    }
}

/// Calls `f` on every `r`-subset of `0..n` in lexicographic order until it
/// returns false. Returns the number of subsets visited.
fn for_each_combination(n: usize, r: usize, mut f: impl FnMut(&[usize]) -> bool) -> u64 {
    if r > n {
        return 0;
    }
    let mut idx: Vec<usize> = (0..r).collect();
    let mut visited = 0;
    loop {
        visited += 1;
        if !f(&idx) {
            return visited;
        }
        let Some(i) = (0..r).rev().find(|&i| idx[i] != i + n - r) else {
            return visited;
        };
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Smallest `D` of size at most `size_cap` that is `k`-dominating and
/// `m`-connected, searched by size and then lexicographically.
pub fn min_mck_set(
    g: &UdgGraph,
    m: usize,
    k: usize,
    size_cap: usize,
) -> Result<OracleResult, Error> {
    let n = g.len();
    if n > MAX_ORACLE_NODES {
        return Err(Error::SizeLimit {
            n,
            limit: MAX_ORACLE_NODES,
        });
    }
    if m == 0 || k == 0 {
        return Err(Error::invalid("m and k must be at least 1"));
    }
    if size_cap > n {
        return Err(Error::invalid("size cap exceeds the node count"));
    }
    let masks = Masks::new(g);
    let closed: Vec<u32> = (0..n).map(|v| masks.nbr[v] | 1 << v).collect();
    let mut explored = 0;
    for size in 1..=size_cap {
        let mut found = None;
        explored += for_each_combination(n, size, |idx| {
            let set = idx.iter().fold(0u32, |acc, &v| acc | 1 << v);
            let covered = idx.iter().fold(0u32, |acc, &v| acc | closed[v]);
            if covered != masks.all() {
                return true;
            }
            if masks.k_dominating(set, k) && masks.m_connected(set, m) {
                found = Some(set);
                return false;
            }
            true
        });
        if let Some(set) = found {
            return Ok(OracleResult {
                optimum: Some((0..n).filter(|&v| set & (1 << v) != 0).collect()),
                size,
                feasible: true,
                explored,
            });
        }
    }
    Ok(OracleResult {
        optimum: None,
        size: 0,
        feasible: false,
        explored,
    })
}
