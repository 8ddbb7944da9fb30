//! Packet-level cost of building a backbone and pushing data through it.
//!
//! Construction is charged one announcement plus one notification per
//! neighbour for every colour change. Dissemination sends each packet in
//! chunks from every dominator to each adjacent receiver; a chunk is lost
//! with a probability that grows with link length.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bee::BeeResult;
use crate::graph::{NodeSet, UdgGraph};
use crate::Error;

/// Chunking and loss parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketModel {
    /// Bytes per chunk, at least 1.
    pub chunk_size: usize,
    /// α in `p(d) = min(1, α·(d/r)^β)`.
    pub loss_coefficient: f64,
    /// β in `p(d) = min(1, α·(d/r)^β)`.
    pub loss_exponent: f64,
    /// Extra attempts per lost chunk.
    pub retransmissions: u32,
}

impl Default for PacketModel {
    fn default() -> Self {
        PacketModel {
            chunk_size: 64,
            loss_coefficient: 0.3,
            loss_exponent: 2.0,
            retransmissions: 0,
        }
    }
}

impl PacketModel {
    pub fn validate(&self) -> Result<(), Error> {
        if self.chunk_size == 0 {
            return Err(Error::invalid("chunk size must be positive"));
        }
        if !(self.loss_coefficient.is_finite() && self.loss_coefficient >= 0.0) {
            return Err(Error::invalid(
                "loss coefficient must be finite and non-negative",
            ));
        }
        if !(self.loss_exponent.is_finite() && self.loss_exponent > 0.0) {
            return Err(Error::invalid("loss exponent must be finite and positive"));
        }
        Ok(())
    }

    /// Loss probability of one transmission over distance `d` at range `r`.
    pub fn loss_probability(&self, d: f64, r: f64) -> f64 {
        if d <= 0.0 {
            return 0.0;
        }
        (self.loss_coefficient * libm::pow(d / r, self.loss_exponent)).min(1.0)
    }

    /// Chunks needed for a packet of `bytes`.
    pub fn chunks(&self, bytes: usize) -> usize {
        bytes.div_ceil(self.chunk_size)
    }

    /// Probability that one chunk gets through within all its attempts.
    pub fn chunk_success(&self, d: f64, r: f64) -> f64 {
        let p = self.loss_probability(d, r);
        1.0 - libm::pow(p, f64::from(self.retransmissions) + 1.0)
    }
}

/// Messages and ticks spent by the construction itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConstructionCost {
    pub overhead: u64,
    pub ticks: u64,
}

/// Per-event cost `1 + deg(node)` summed over all colour events.
pub fn construction_cost(result: &BeeResult, g: &UdgGraph) -> ConstructionCost {
    ConstructionCost {
        overhead: result
            .events
            .iter()
            .map(|e| 1 + g.degree(e.node) as u64)
            .sum(),
        ticks: result.ticks,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimMetrics {
    /// Construction messages plus data transmissions, retries included.
    pub overhead: u64,
    /// Construction ticks plus the busiest link's transmission count.
    pub latency: u64,
    /// Fraction of receivers that got the whole packet over some link; 1
    /// when there are no receivers.
    pub success_ratio: f64,
    /// Delivered over sent chunks, counting first attempts only.
    pub chunk_ratio: f64,
    pub sent_chunks: u64,
    pub delivered_chunks: u64,
    pub receivers: usize,
    pub served: usize,
}

fn receivers_of(g: &UdgGraph, d: &NodeSet, receivers: Option<&NodeSet>) -> Result<NodeSet, Error> {
    g.check_set(d)?;
    let set = match receivers {
        Some(r) => {
            g.check_set(r)?;
            r.clone()
        }
        None => g.nodes().filter(|&v| !d.contains(v)).collect(),
    };
    if let Some(v) = set
        .iter()
        .find(|&v| !d.contains(v) && !g.neighbors(v).iter().any(|&w| d.contains(w)))
    {
        return Err(Error::structural(alloc::format!(
            "receiver {v} has no adjacent dominator"
        )));
    }
    Ok(set)
}

fn link_rng(seed: u64, n: usize, from: usize, to: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((from * n + to) as u64);
    rng
}

/// Sends one packet of `packet_bytes` from the backbone `d` to every receiver
/// (all non-members by default). A receiver inside `d` already holds the
/// packet and counts as served without any transmission.
///
/// Each directed link draws from its own random stream, so a longer packet
/// sees the same fate for its leading chunks as a shorter one.
pub fn disseminate(
    g: &UdgGraph,
    d: &NodeSet,
    receivers: Option<&NodeSet>,
    packet_bytes: usize,
    model: &PacketModel,
    base: ConstructionCost,
    seed: u64,
) -> Result<SimMetrics, Error> {
    model.validate()?;
    if packet_bytes == 0 {
        return Err(Error::invalid("packet must have at least one byte"));
    }
    let targets = receivers_of(g, d, receivers)?;
    let n = g.len();
    let chunks = model.chunks(packet_bytes);
    let (mut sent, mut delivered, mut transmissions, mut busiest) = (0u64, 0u64, 0u64, 0u64);
    let mut served = 0;
    for b in targets.iter() {
        if d.contains(b) {
            served += 1;
            continue;
        }
        let mut got = false;
        for &a in g.neighbors(b).iter().filter(|&&a| d.contains(a)) {
            let p = model.loss_probability(g.distance(a, b), g.radius());
            let mut rng = link_rng(seed, n, a, b);
            let mut link_tx = 0u64;
            let mut whole = true;
            for _ in 0..chunks {
                sent += 1;
                let mut ok = false;
                for attempt in 0..=model.retransmissions {
                    link_tx += 1;
                    if rng.gen::<f64>() >= p {
                        ok = true;
                        if attempt == 0 {
                            delivered += 1;
                        }
                        break;
                    }
                }
                whole &= ok;
            }
            got |= whole;
            transmissions += link_tx;
            busiest = busiest.max(link_tx);
        }
        served += usize::from(got);
    }
    let ratio = |num: u64, den: u64| {
        if den == 0 {
            1.0
        } else {
            num as f64 / den as f64
        }
    };
    Ok(SimMetrics {
        overhead: base.overhead + transmissions,
        latency: base.ticks + busiest,
        success_ratio: ratio(served as u64, targets.len() as u64),
        chunk_ratio: ratio(delivered, sent),
        sent_chunks: sent,
        delivered_chunks: delivered,
        receivers: targets.len(),
        served,
    })
}

/// Expected `success_ratio` of [`disseminate`] over seeds.
pub fn expected_success(
    g: &UdgGraph,
    d: &NodeSet,
    receivers: Option<&NodeSet>,
    packet_bytes: usize,
    model: &PacketModel,
) -> Result<f64, Error> {
    model.validate()?;
    let targets = receivers_of(g, d, receivers)?;
    if targets.is_empty() {
        return Ok(1.0);
    }
    let chunks = model.chunks(packet_bytes) as f64;
    let per_receiver: Vec<f64> = targets
        .iter()
        .map(|b| {
            if d.contains(b) {
                return 1.0;
            }
            let all_fail: f64 = g
                .neighbors(b)
                .iter()
                .filter(|&&a| d.contains(a))
                .map(|&a| {
                    1.0 - libm::pow(model.chunk_success(g.distance(a, b), g.radius()), chunks)
                })
                .product();
            1.0 - all_fail
        })
        .collect();
    Ok(per_receiver.iter().sum::<f64>() / per_receiver.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bee::{run_bee, BeeConfig};
    use crate::graph::{fixtures, random_connected_topology, Point};

    fn pair(distance: f64) -> UdgGraph {
        UdgGraph::new(
            alloc::vec![Point::at(0.0, 0.0), Point::at(distance, 0.0)],
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn loss_law() {
        let m = PacketModel::default();
        assert_eq!(m.loss_probability(0.0, 10.0), 0.0);
        assert!((m.loss_probability(10.0, 10.0) - 0.3).abs() < 1e-12);
        assert!((m.loss_probability(5.0, 10.0) - 0.075).abs() < 1e-12);
        let harsh = PacketModel {
            loss_coefficient: 5.0,
            ..m
        };
        assert_eq!(harsh.loss_probability(10.0, 10.0), 1.0);
        let mut last = 0.0;
        for i in 0..=100 {
            let p = m.loss_probability(i as f64 / 10.0, 10.0);
            assert!(p >= last);
            last = p;
        }
    }

    #[test]
    fn construction_cost_examples() {
        let g = fixtures::line(1);
        let r = run_bee(&g, &BeeConfig::default()).unwrap();
        assert_eq!(
            construction_cost(&r, &g),
            ConstructionCost {
                overhead: 1,
                ticks: 1
            }
        );

        let g = fixtures::line(3);
        let r = run_bee(&g, &BeeConfig::default()).unwrap();
        assert_eq!(construction_cost(&r, &g).overhead, 7);
    }

    #[test]
    fn construction_cost_grows_with_rounds() {
        for seed in 0..10 {
            let g = random_connected_topology(40, 100.0, 100.0, 30.0, seed, 1000).unwrap();
            let base = construction_cost(&run_bee(&g, &BeeConfig::new(1, 1)).unwrap(), &g);
            let more = construction_cost(&run_bee(&g, &BeeConfig::new(1, 2)).unwrap(), &g);
            assert!(more.overhead > base.overhead, "seed {seed}");
        }
    }

    #[test]
    fn lossless_link() {
        let g = pair(0.1);
        let model = PacketModel {
            loss_coefficient: 0.0,
            ..Default::default()
        };
        let m = disseminate(
            &g,
            &NodeSet::from([0]),
            None,
            1000,
            &model,
            ConstructionCost::default(),
            3,
        )
        .unwrap();
        assert_eq!(m.success_ratio, 1.0);
        assert_eq!(m.latency, 16);
        assert_eq!(m.overhead, 16);
    }

    #[test]
    fn certain_loss() {
        let g = pair(1.0);
        let model = PacketModel {
            loss_coefficient: 1.0,
            loss_exponent: 2.0,
            ..Default::default()
        };
        let m = disseminate(
            &g,
            &NodeSet::from([0]),
            None,
            10,
            &model,
            ConstructionCost::default(),
            0,
        )
        .unwrap();
        assert_eq!(m.success_ratio, 0.0);
        assert_eq!(m.chunk_ratio, 0.0);
    }

    #[test]
    fn no_receivers() {
        let g = fixtures::complete(3);
        let base = ConstructionCost {
            overhead: 5,
            ticks: 2,
        };
        let m = disseminate(
            &g,
            &NodeSet::full(3),
            None,
            10,
            &PacketModel::default(),
            base,
            0,
        )
        .unwrap();
        assert_eq!((m.success_ratio, m.overhead, m.latency), (1.0, 5, 2));
    }

    #[test]
    fn member_receivers_are_served() {
        let g = fixtures::line(3);
        let model = PacketModel {
            loss_coefficient: 1e9,
            ..Default::default()
        };
        let all = NodeSet::full(3);
        let m = disseminate(
            &g,
            &NodeSet::from([1]),
            Some(&all),
            64,
            &model,
            ConstructionCost::default(),
            0,
        )
        .unwrap();
        assert_eq!((m.served, m.receivers, m.sent_chunks), (1, 3, 2));
        let e = expected_success(&g, &NodeSet::from([1]), Some(&all), 64, &model).unwrap();
        assert!((e - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn served_receivers_only_grow_with_the_backbone() {
        let g = random_connected_topology(40, 100.0, 100.0, 30.0, 5, 1000).unwrap();
        let r = run_bee(&g, &BeeConfig::new(2, 2)).unwrap();
        let small = &r.snapshots[&2];
        let pool: NodeSet = g.nodes().filter(|&v| !small.contains(v)).collect();
        let model = PacketModel::default();
        for seed in 0..20 {
            let a = disseminate(
                &g,
                small,
                Some(&pool),
                1024,
                &model,
                ConstructionCost::default(),
                seed,
            )
            .unwrap();
            let b = disseminate(
                &g,
                &r.dominators,
                Some(&pool),
                1024,
                &model,
                ConstructionCost::default(),
                seed,
            )
            .unwrap();
            assert!(b.served >= a.served, "seed {seed}");
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = fixtures::line(3);
        let model = PacketModel::default();
        let base = ConstructionCost::default();
        assert!(disseminate(&g, &NodeSet::from([0]), None, 10, &model, base, 0).is_err());
        assert!(disseminate(
            &g,
            &NodeSet::from([0]),
            Some(&NodeSet::from([2])),
            10,
            &model,
            base,
            0
        )
        .is_err());
        assert!(disseminate(&g, &NodeSet::from([1]), None, 0, &model, base, 0).is_err());
        let zero = PacketModel {
            chunk_size: 0,
            ..model
        };
        assert!(disseminate(&g, &NodeSet::from([1]), None, 10, &zero, base, 0).is_err());
    }

    #[test]
    fn monte_carlo_matches_expectation() {
        let g = random_connected_topology(40, 100.0, 100.0, 30.0, 2, 1000).unwrap();
        let d = run_bee(&g, &BeeConfig::new(1, 2)).unwrap().dominators;
        let model = PacketModel::default();
        let expected = expected_success(&g, &d, None, 256, &model).unwrap();
        let runs = 1000;
        let mean: f64 = (0..runs)
            .map(|s| {
                disseminate(&g, &d, None, 256, &model, ConstructionCost::default(), s)
                    .unwrap()
                    .success_ratio
            })
            .sum::<f64>()
            / runs as f64;
        assert!((mean - expected).abs() < 0.02, "{mean} vs {expected}");
    }

    #[test]
    fn larger_packets_cost_more_and_arrive_less() {
        let g = random_connected_topology(50, 100.0, 100.0, 25.0, 4, 1000).unwrap();
        let r = run_bee(&g, &BeeConfig::default()).unwrap();
        let base = construction_cost(&r, &g);
        let model = PacketModel {
            retransmissions: 1,
            ..Default::default()
        };
        for seed in 0..20 {
            let mut last: Option<SimMetrics> = None;
            for bytes in [64, 128, 512, 1024, 4096] {
                let m = disseminate(&g, &r.dominators, None, bytes, &model, base, seed).unwrap();
                if let Some(prev) = &last {
                    assert!(m.overhead >= prev.overhead);
                    assert!(m.latency >= prev.latency);
                    assert!(m.success_ratio <= prev.success_ratio);
                }
                assert!(m.latency >= base.ticks);
                assert!((0.0..=1.0).contains(&m.success_ratio));
                last = Some(m);
            }
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let g = random_connected_topology(30, 100.0, 100.0, 30.0, 8, 1000).unwrap();
        let d = run_bee(&g, &BeeConfig::default()).unwrap().dominators;
        let run = |s| {
            disseminate(
                &g,
                &d,
                None,
                300,
                &PacketModel::default(),
                ConstructionCost::default(),
                s,
            )
            .unwrap()
        };
        assert_eq!(run(5), run(5));
    }
}
