use alloc::vec;
use alloc::vec::Vec;

use super::{NodeSet, UdgGraph};
use crate::Error;

/// Biconnected components of an induced subgraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    /// Blocks ordered by their sorted member lists.
    pub blocks: Vec<NodeSet>,
    pub cut_vertices: NodeSet,
    /// Indices into `blocks` of the blocks holding exactly one cut vertex.
    pub leaf_blocks: Vec<usize>,
}

impl BlockDecomposition {
    /// The cut vertex contained in leaf block `leaf`.
    pub fn leaf_cut_vertex(&self, leaf: usize) -> Option<usize> {
        self.blocks[leaf]
            .iter()
            .find(|&v| self.cut_vertices.contains(v))
    }
}

/// Raw Tarjan output over the nodes flagged in `member`.
pub(crate) struct Tarjan {
    pub blocks: Vec<NodeSet>,
    pub cut: Vec<bool>,
}

struct Frame {
    v: usize,
    parent: usize,
    next: usize,
}

/// Iterative Tarjan/Hopcroft biconnected components restricted to `member`.
/// Handles disconnected member sets; isolated members form singleton blocks.
pub(crate) fn tarjan(g: &UdgGraph, member: &[bool]) -> Tarjan {
    const UNSEEN: usize = usize::MAX;
    let n = g.len();
    let mut disc = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut cut = vec![false; n];
    let mut blocks = Vec::new();
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();
    let mut stack: Vec<Frame> = Vec::new();
    let mut time = 0;

    for root in 0..n {
        if !member[root] || disc[root] != UNSEEN {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        let mut root_children = 0;
        let mut isolated = true;
        stack.push(Frame {
            v: root,
            parent: UNSEEN,
            next: 0,
        });

        while let Some(frame) = stack.last_mut() {
            let v = frame.v;
            let nbrs = g.neighbors(v);
            if frame.next < nbrs.len() {
                let w = nbrs[frame.next];
                frame.next += 1;
                if !member[w] {
                    continue;
                }
                isolated = false;
                if disc[w] == UNSEEN {
                    edge_stack.push((v, w));
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push(Frame {
                        v: w,
                        parent: v,
                        next: 0,
                    });
                } else if w != frame.parent && disc[w] < disc[v] {
                    edge_stack.push((v, w));
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                let Some(up) = stack.last() else { break };
                let p = up.v;
                low[p] = low[p].min(low[v]);
                if low[v] >= disc[p] {
                    if p == root {
                        root_children += 1;
                    } else {
                        cut[p] = true;
                    }
                    let mut block = NodeSet::new();
                    while let Some((a, b)) = edge_stack.pop() {
                        block.insert(a);
                        block.insert(b);
                        if (a, b) == (p, v) {
                            break;
                        }
                    }
                    blocks.push(block);
                }
            }
        }
        if root_children >= 2 {
            cut[root] = true;
        }
        if isolated {
            blocks.push(NodeSet::from([root]));
        }
    }
    blocks.sort();
    Tarjan { blocks, cut }
}

/// Splits the subgraph induced by `subset` into blocks, cut vertices and leaf
/// blocks. The induced subgraph must be nonempty and connected.
pub fn block_decomposition(g: &UdgGraph, subset: &NodeSet) -> Result<BlockDecomposition, Error> {
    g.check_set(subset)?;
    if subset.is_empty() {
        return Err(Error::structural("block decomposition of an empty set"));
    }
    let member = g.mask(subset);
    if !super::induced_connected(g, &member, subset.len()) {
        return Err(Error::structural(
            "induced subgraph is disconnected; connect it before decomposing",
        ));
    }
    let Tarjan { blocks, cut } = tarjan(g, &member);
    let cut_vertices = NodeSet::from_mask(&cut);
    let leaf_blocks = blocks
        .iter()
        .enumerate()
        .filter(|(_, b)| b.iter().filter(|&v| cut[v]).count() == 1)
        .map(|(i, _)| i)
        .collect();
    Ok(BlockDecomposition {
        blocks,
        cut_vertices,
        leaf_blocks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures;

    #[test]
    fn path_has_two_leaf_blocks() {
        let g = fixtures::line(3);
        let bd = block_decomposition(&g, &NodeSet::full(3)).unwrap();
        assert_eq!(
            bd.blocks,
            vec![NodeSet::from([0, 1]), NodeSet::from([1, 2])]
        );
        assert_eq!(bd.cut_vertices, NodeSet::from([1]));
        assert_eq!(bd.leaf_blocks, vec![0, 1]);
        assert_eq!(bd.leaf_cut_vertex(0), Some(1));
    }

    #[test]
    fn cycle_is_one_block() {
        let g = fixtures::square();
        let bd = block_decomposition(&g, &NodeSet::full(4)).unwrap();
        assert_eq!(bd.blocks, vec![NodeSet::full(4)]);
        assert!(bd.cut_vertices.is_empty());
        assert!(bd.leaf_blocks.is_empty());
    }

    #[test]
    fn bowtie_splits_at_shared_vertex() {
        let g = fixtures::bowtie();
        let bd = block_decomposition(&g, &NodeSet::full(5)).unwrap();
        assert_eq!(
            bd.blocks,
            vec![NodeSet::from([0, 1, 2]), NodeSet::from([0, 3, 4])]
        );
        assert_eq!(bd.cut_vertices, NodeSet::from([0]));
        assert_eq!(bd.leaf_blocks, vec![0, 1]);
    }

    #[test]
    fn single_node_and_errors() {
        let g = fixtures::line(3);
        let bd = block_decomposition(&g, &NodeSet::from([2])).unwrap();
        assert_eq!(bd.blocks, vec![NodeSet::from([2])]);
        assert!(bd.leaf_blocks.is_empty());
        assert_eq!(
            block_decomposition(&g, &NodeSet::from([0, 2]))
                .unwrap_err()
                .name(),
            "structural-error"
        );
        assert!(block_decomposition(&g, &NodeSet::new()).is_err());
    }

    #[test]
    fn induced_subset_only() {
        // Dropping the hub of the wheel leaves the rim 4-cycle.
        let g = fixtures::wheel();
        let bd = block_decomposition(&g, &NodeSet::from([1, 2, 3, 4])).unwrap();
        assert_eq!(bd.blocks.len(), 1);
        // Hub plus two opposite rim nodes is a path through the hub.
        let bd = block_decomposition(&g, &NodeSet::from([0, 1, 3])).unwrap();
        assert_eq!(bd.cut_vertices, NodeSet::from([0]));
    }
}
