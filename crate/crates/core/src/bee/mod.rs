//! Five-round greedy construction of an m-connected k-dominating set.
//!
//! 1. greedy maximal independent set (white/grey/black colouring),
//! 2. pairwise shortest paths between nearby MIS nodes give a connected
//!    dominating set,
//! 3. k−1 further independent layers give k-domination,
//! 4. leaf blocks are joined by outside paths until no cut vertex remains,
//! 5. bad points are removed by moving outside nodes into the set.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::graph::{connectivity_level, NodeSet, TieBreak, UdgGraph};
use crate::Error;

mod augment;
mod connect;
mod mis;

pub use augment::{round4_biconnect, round5_triconnect};
pub use connect::{round2_connect, round3_k_dominate, KDomination};
pub use mis::round1_mis;

/// Targets and knobs of a construction run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BeeConfig {
    /// Every node outside the set needs this many neighbors inside it.
    pub k: usize,
    /// Required vertex connectivity of the set, 1 to 3.
    pub m: u8,
    /// MIS pairs at most this many hops apart are joined in round 2.
    pub hop_threshold: usize,
    /// Break path ties by summed node weight instead of by id alone.
    pub uncertainty_constraint: bool,
}

impl Default for BeeConfig {
    fn default() -> Self {
        BeeConfig {
            k: 1,
            m: 1,
            hop_threshold: 4,
            uncertainty_constraint: false,
        }
    }
}

impl BeeConfig {
    pub fn new(m: u8, k: usize) -> Self {
        BeeConfig {
            m,
            k,
            ..Default::default()
        }
    }

    pub fn with_uncertainty(mut self, on: bool) -> Self {
        self.uncertainty_constraint = on;
        self
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.k == 0 {
            return Err(Error::invalid("k must be at least 1"));
        }
        if !(1..=3).contains(&self.m) {
            return Err(Error::invalid("m must be 1, 2 or 3"));
        }
        if self.hop_threshold < 2 {
            return Err(Error::invalid("hop threshold must be at least 2"));
        }
        Ok(())
    }

    pub(crate) fn path_tie(&self) -> TieBreak {
        if self.uncertainty_constraint {
            TieBreak::MinWeight
        } else {
            TieBreak::Lexicographic
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Color {
    White,
    Grey,
    Black,
}

/// One node state change, the unit of construction messaging.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColorEvent {
    pub round: u8,
    pub node: usize,
    pub color: Color,
}

/// Final backbone plus everything recorded along the way.
#[derive(Debug, Clone, PartialEq)]
pub struct BeeResult {
    pub dominators: NodeSet,
    /// Dominator set after each executed round, keyed by round number.
    pub snapshots: BTreeMap<u8, NodeSet>,
    /// M₁ … M_k; pairwise disjoint.
    pub mis_layers: Vec<NodeSet>,
    pub achieved_k: usize,
    pub achieved_m: u8,
    pub color_events: usize,
    pub events: Vec<ColorEvent>,
    /// Loop-body executions across all rounds.
    pub ticks: u64,
    /// Largest, over non-dominators, of the lightest adjacent dominator weight.
    pub max_node_cost: f64,
    /// Nodes moved into the set because they cannot be k-dominated.
    pub promoted: NodeSet,
    /// Earlier members dropped by round 4: they sit behind a cut vertex no
    /// outside path bypasses, and the rest of the set still dominates them.
    /// Snapshots only ever lose these nodes.
    pub shed: NodeSet,
}

/// A run that stopped early; `partial` holds what was built so far.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{cause}")]
pub struct BeeFailure {
    pub cause: Error,
    pub partial: Option<Box<BeeResult>>,
}

#[derive(Debug, Default)]
pub(crate) struct Trace {
    pub round: u8,
    pub events: Vec<ColorEvent>,
    pub ticks: u64,
}

impl Trace {
    pub fn color(&mut self, node: usize, color: Color) {
        self.events.push(ColorEvent {
            round: self.round,
            node,
            color,
        });
    }

    pub fn tick(&mut self) {
        self.ticks += 1;
    }
}

/// Smallest number of dominator neighbors over nodes outside `d`; `None`
/// when every node is a dominator.
pub(crate) fn min_domination(g: &UdgGraph, d: &NodeSet) -> Option<usize> {
    let member = d.mask(g.len());
    g.nodes()
        .filter(|&v| !member[v])
        .map(|v| g.neighbors(v).iter().filter(|&&w| member[w]).count())
        .min()
}

fn max_node_cost(g: &UdgGraph, d: &NodeSet) -> f64 {
    let member = d.mask(g.len());
    g.nodes()
        .filter(|&v| !member[v])
        .filter_map(|v| {
            g.neighbors(v)
                .iter()
                .filter(|&&w| member[w])
                .map(|&w| g.weight(w))
                .min_by(f64::total_cmp)
        })
        .max_by(f64::total_cmp)
        .unwrap_or(0.0)
}

struct Progress {
    dominators: NodeSet,
    snapshots: BTreeMap<u8, NodeSet>,
    layers: Vec<NodeSet>,
    promoted: NodeSet,
    shed: NodeSet,
    trace: Trace,
}

impl Progress {
    fn finish(self, g: &UdgGraph, cfg: &BeeConfig) -> BeeResult {
        let achieved_k = min_domination(g, &self.dominators).unwrap_or(cfg.k);
        BeeResult {
            achieved_m: connectivity_level(g, &self.dominators),
            achieved_k,
            max_node_cost: max_node_cost(g, &self.dominators),
            color_events: self.trace.events.len(),
            events: self.trace.events,
            ticks: self.trace.ticks,
            dominators: self.dominators,
            snapshots: self.snapshots,
            mis_layers: self.layers,
            promoted: self.promoted,
            shed: self.shed,
        }
    }

    fn fail(self, g: &UdgGraph, cfg: &BeeConfig, cause: Error) -> BeeFailure {
        BeeFailure {
            cause,
            partial: Some(Box::new(self.finish(g, cfg))),
        }
    }
}

/// Runs rounds 1 and 2, then 3 when `k ≥ 2`, 4 when `m ≥ 2` and 5 when `m = 3`.
pub fn run_bee(g: &UdgGraph, cfg: &BeeConfig) -> Result<BeeResult, BeeFailure> {
    let early = |cause| BeeFailure {
        cause,
        partial: None,
    };
    cfg.validate().map_err(early)?;
    if !g.is_connected() {
        return Err(early(Error::structural(
            "input graph must be nonempty and connected",
        )));
    }

    let mut trace = Trace {
        round: 1,
        ..Default::default()
    };
    let mis = mis::greedy_mis(g, &alloc::vec![true; g.len()], &mut trace);
    let mut p = Progress {
        dominators: mis.clone(),
        snapshots: BTreeMap::from([(1, mis.clone())]),
        layers: alloc::vec![mis.clone()],
        promoted: NodeSet::new(),
        shed: NodeSet::new(),
        trace,
    };

    p.trace.round = 2;
    match connect::connect_pairs(g, &mis, cfg, &mut p.trace) {
        Ok(d) => p.dominators = d,
        Err(e) => return Err(p.fail(g, cfg, e)),
    }
    p.snapshots.insert(2, p.dominators.clone());

    if cfg.k >= 2 {
        p.trace.round = 3;
        match connect::k_dominate(g, &p.dominators, &mis, cfg, &mut p.trace) {
            Ok(kd) => {
                p.dominators = kd.dominators;
                p.layers = kd.layers;
                p.promoted = kd.promoted;
            }
            Err(e) => return Err(p.fail(g, cfg, e)),
        }
        p.snapshots.insert(3, p.dominators.clone());
    }

    if cfg.m >= 2 {
        p.trace.round = 4;
        match augment::biconnect(g, &p.dominators, Some(cfg.k), &mut p.trace) {
            Ok((d, shed)) => {
                p.dominators = d;
                p.shed = shed;
            }
            Err(e) => return Err(p.fail(g, cfg, e)),
        }
        p.snapshots.insert(4, p.dominators.clone());
    }

    if cfg.m >= 3 {
        p.trace.round = 5;
        match augment::triconnect(g, &p.dominators, &mut p.trace) {
            Ok(d) => p.dominators = d,
            Err(e) => return Err(p.fail(g, cfg, e)),
        }
        p.snapshots.insert(5, p.dominators.clone());
    }

    let result = p.finish(g, cfg);
    if result.achieved_m < cfg.m || result.achieved_k < cfg.k {
        return Err(BeeFailure {
            cause: Error::Internal(alloc::format!(
                "finished with (m, k) = ({}, {}) below target ({}, {})",
                result.achieved_m,
                result.achieved_k,
                cfg.m,
                cfg.k
            )),
            partial: Some(Box::new(result)),
        });
    }
    Ok(result)
}
