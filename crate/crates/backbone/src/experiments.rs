//! Seeded experiment sweeps producing one CSV row per (sweep point, variant,
//! ladder level, trial), followed by one mean row per group.
//!
//! Trial `t` uses seed `cfg.seed + t` for the topology and for packet loss,
//! so every sweep point, variant and ladder level sees the same seeds.
//! Trials run in parallel; rows are assembled in a fixed order.

use std::io::Write;

use backbone_core::bee::{run_bee, BeeConfig, BeeResult};
use backbone_core::graph::{
    grid_topology_weighted, random_connected_topology, DEFAULT_CONNECT_ATTEMPTS,
};
use backbone_core::sim::{construction_cost, disseminate};
use backbone_core::{NodeSet, UdgGraph};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{Experiment, ExperimentConfig};
use crate::Result;

pub const CSV_HEADER: [&str; 18] = [
    "experiment",
    "seed",
    "topology",
    "n",
    "radius",
    "spacing",
    "packet_bytes",
    "m_target",
    "k_target",
    "m_achieved",
    "k_achieved",
    "cds_size",
    "dominator_fraction",
    "overhead",
    "latency",
    "success_ratio",
    "max_node_cost",
    "status",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Topology {
    Random {
        n: usize,
        width: f64,
        height: f64,
        radius: f64,
    },
    Grid {
        rows: usize,
        cols: usize,
        spacing: f64,
        radius: f64,
    },
}

impl Topology {
    pub fn nodes(&self) -> usize {
        match *self {
            Topology::Random { n, .. } => n,
            Topology::Grid { rows, cols, .. } => rows * cols,
        }
    }

    pub fn radius(&self) -> f64 {
        match *self {
            Topology::Random { radius, .. } | Topology::Grid { radius, .. } => radius,
        }
    }

    pub fn spacing(&self) -> Option<f64> {
        match *self {
            Topology::Random { .. } => None,
            Topology::Grid { spacing, .. } => Some(spacing),
        }
    }

    pub fn label(&self) -> String {
        match *self {
            Topology::Random { width, height, .. } => format!("random:{width}x{height}"),
            Topology::Grid {
                rows,
                cols,
                spacing,
                ..
            } => format!("grid:{rows}x{cols}-{spacing}"),
        }
    }

    pub fn build(&self, seed: u64) -> Result<UdgGraph, backbone_core::Error> {
        match *self {
            Topology::Random {
                n,
                width,
                height,
                radius,
            } => {
                random_connected_topology(n, width, height, radius, seed, DEFAULT_CONNECT_ATTEMPTS)
            }
            Topology::Grid {
                rows,
                cols,
                spacing,
                radius,
            } => grid_topology_weighted(rows, cols, spacing, radius, seed),
        }
    }
}

/// How the finished backbone is altered before dissemination.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PostProcess {
    None,
    /// Promote this many random non-dominators into the backbone.
    ExtraDominators(usize),
    /// Deliver to this many random non-dominators only.
    Receivers(usize),
}

/// One point of the sweep grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub topology: Topology,
    pub packet_bytes: usize,
    pub post: PostProcess,
}

/// One output line. Metric fields are `None` when the trial produced no
/// backbone.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub experiment: String,
    /// Trial seed; `None` for mean rows.
    pub seed: Option<u64>,
    pub topology: String,
    pub n: usize,
    pub radius: f64,
    pub spacing: Option<f64>,
    pub packet_bytes: usize,
    pub m_target: u8,
    pub k_target: usize,
    pub m_achieved: Option<f64>,
    pub k_achieved: Option<f64>,
    pub cds_size: Option<f64>,
    pub dominator_fraction: Option<f64>,
    pub overhead: Option<f64>,
    pub latency: Option<f64>,
    pub success_ratio: Option<f64>,
    pub max_node_cost: Option<f64>,
    pub status: String,
}

impl Row {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }

    pub fn is_mean(&self) -> bool {
        self.seed.is_none()
    }

    fn record(&self) -> Vec<String> {
        let int = |v: Option<f64>| v.map(|x| format!("{x}")).unwrap_or_default();
        let real = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_default();
        // Per-trial counts are integral; means are written with fixed precision.
        let count = |v: Option<f64>| if self.is_mean() { real(v) } else { int(v) };
        vec![
            self.experiment.clone(),
            self.seed.map_or_else(|| "mean".into(), |s| s.to_string()),
            self.topology.clone(),
            self.n.to_string(),
            format!("{}", self.radius),
            self.spacing.map(|s| format!("{s}")).unwrap_or_default(),
            self.packet_bytes.to_string(),
            self.m_target.to_string(),
            self.k_target.to_string(),
            count(self.m_achieved),
            count(self.k_achieved),
            count(self.cds_size),
            real(self.dominator_fraction),
            count(self.overhead),
            count(self.latency),
            real(self.success_ratio),
            real(self.max_node_cost),
            self.status.clone(),
        ]
    }
}

/// Sweep points of `cfg` in output order.
pub fn sweep_points(cfg: &ExperimentConfig) -> Vec<SweepPoint> {
    let first_packet = cfg.packet_bytes[0];
    let grid = |(rows, cols): (usize, usize), spacing: f64| Topology::Grid {
        rows,
        cols,
        spacing,
        radius: cfg.grid_radius,
    };
    let plain = |topology, packet_bytes| SweepPoint {
        topology,
        packet_bytes,
        post: PostProcess::None,
    };
    let base_grid = grid(cfg.grids[0], cfg.spacings[0]);
    match cfg.experiment {
        e if e.is_size_study() => cfg
            .nodes
            .iter()
            .flat_map(|&n| {
                cfg.radii.iter().map(move |&radius| Topology::Random {
                    n,
                    width: cfg.width,
                    height: cfg.height,
                    radius,
                })
            })
            .map(|t| plain(t, first_packet))
            .collect(),
        Experiment::NetworkSize => cfg
            .grids
            .iter()
            .map(|&shape| plain(grid(shape, cfg.spacings[0]), first_packet))
            .collect(),
        Experiment::PacketSize => cfg
            .packet_bytes
            .iter()
            .map(|&b| plain(base_grid, b))
            .collect(),
        Experiment::Density => cfg
            .spacings
            .iter()
            .map(|&s| plain(grid(cfg.grids[0], s), first_packet))
            .collect(),
        Experiment::RandomTopology => cfg
            .nodes
            .iter()
            .flat_map(|&n| {
                cfg.packet_bytes.iter().map(move |&b| {
                    let t = Topology::Random {
                        n,
                        width: cfg.width,
                        height: cfg.height,
                        radius: cfg.radii[0],
                    };
                    (t, b)
                })
            })
            .map(|(t, b)| plain(t, b))
            .collect(),
        Experiment::DominatorCount => cfg
            .extra_dominators
            .iter()
            .map(|&x| SweepPoint {
                post: PostProcess::ExtraDominators(x),
                ..plain(base_grid, first_packet)
            })
            .collect(),
        Experiment::DominateeCount => cfg
            .receivers
            .iter()
            .map(|&x| SweepPoint {
                post: PostProcess::Receivers(x),
                ..plain(base_grid, first_packet)
            })
            .collect(),
        _ => unreachable!("size studies handled above"),
    }
}

/// Variants of the uncertainty flag run for `cfg`, with their labels.
pub fn variants(cfg: &ExperimentConfig) -> Vec<(String, bool)> {
    let name = cfg.experiment.name();
    if cfg.experiment.is_paired() {
        vec![(format!("{name}:off"), false), (format!("{name}:on"), true)]
    } else {
        let tag = if cfg.uncertainty { "on" } else { "off" };
        vec![(format!("{name}:{tag}"), cfg.uncertainty)]
    }
}

fn shuffled(pool: impl Iterator<Item = usize>, seed: u64) -> Vec<usize> {
    let mut pool: Vec<usize> = pool.collect();
    pool.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    pool
}

/// Salt separating the post-processing stream from topology and loss streams.
const SAMPLE_SALT: u64 = 0x5eed_5a3b_1e00_0000;

struct TrialSpec<'a> {
    cfg: &'a ExperimentConfig,
    point: &'a SweepPoint,
    label: &'a str,
    uncertainty: bool,
    seed: u64,
}

fn blank_row(spec: &TrialSpec, level: (u8, usize), status: &str) -> Row {
    let t = &spec.point.topology;
    // The fixed CSV schema has no column for post-processing counts.
    let experiment = match spec.point.post {
        PostProcess::None => spec.label.to_string(),
        PostProcess::ExtraDominators(x) => format!("{}:extra={x}", spec.label),
        PostProcess::Receivers(x) => format!("{}:receivers={x}", spec.label),
    };
    Row {
        experiment,
        seed: Some(spec.seed),
        topology: t.label(),
        n: t.nodes(),
        radius: t.radius(),
        spacing: t.spacing(),
        packet_bytes: spec.point.packet_bytes,
        m_target: level.0,
        k_target: level.1,
        m_achieved: None,
        k_achieved: None,
        cds_size: None,
        dominator_fraction: None,
        overhead: None,
        latency: None,
        success_ratio: None,
        max_node_cost: None,
        status: status.to_string(),
    }
}

fn level_row(spec: &TrialSpec, g: &UdgGraph, level: (u8, usize)) -> Row {
    let bee = BeeConfig {
        m: level.0,
        k: level.1,
        hop_threshold: spec.cfg.hop_threshold,
        uncertainty_constraint: spec.uncertainty,
    };
    let (result, status): (BeeResult, String) = match run_bee(g, &bee) {
        Ok(r) => (r, "ok".into()),
        Err(f) => match f.partial {
            Some(p) => (*p, f.cause.name().into()),
            None => return blank_row(spec, level, f.cause.name()),
        },
    };
    let mut row = blank_row(spec, level, &status);
    row.m_achieved = Some(f64::from(result.achieved_m));
    row.k_achieved = Some(result.achieved_k as f64);
    row.max_node_cost = Some(result.max_node_cost);

    // Rounds 1 and 2 are shared by every ladder level, so their non-members
    // form a receiver population common to all levels of a trial. Receivers
    // promoted by later rounds count as served.
    let mut dominators = result.dominators.clone();
    let core = result.snapshots.get(&2).unwrap_or(&result.dominators);
    let order = shuffled(g.nodes(), spec.seed ^ SAMPLE_SALT);
    let mut receivers: NodeSet = g.nodes().filter(|&v| !core.contains(v)).collect();
    match spec.point.post {
        PostProcess::None => {}
        PostProcess::ExtraDominators(x) => {
            let extra: Vec<usize> = order
                .iter()
                .copied()
                .filter(|&v| !dominators.contains(v))
                .take(x)
                .collect();
            dominators.extend(extra);
        }
        PostProcess::Receivers(x) => {
            receivers = order
                .iter()
                .copied()
                .filter(|&v| receivers.contains(v))
                .take(x)
                .collect();
        }
    }
    row.cds_size = Some(dominators.len() as f64);
    row.dominator_fraction = Some(dominators.len() as f64 / g.len() as f64);

    let base = construction_cost(&result, g);
    match disseminate(
        g,
        &dominators,
        Some(&receivers),
        spec.point.packet_bytes,
        &spec.cfg.packet,
        base,
        spec.seed,
    ) {
        Ok(m) => {
            row.overhead = Some(m.overhead as f64);
            row.latency = Some(m.latency as f64);
            row.success_ratio = Some(m.success_ratio);
        }
        Err(e) => {
            if row.is_ok() {
                row.status = e.name().into();
            }
        }
    }
    row
}

fn trial(spec: &TrialSpec) -> Vec<Row> {
    match spec.point.topology.build(spec.seed) {
        Ok(g) => spec
            .cfg
            .ladder
            .iter()
            .map(|&level| level_row(spec, &g, level))
            .collect(),
        Err(e) => spec
            .cfg
            .ladder
            .iter()
            .map(|&level| blank_row(spec, level, e.name()))
            .collect(),
    }
}

/// All trial rows of `cfg`, ordered by (sweep point, variant, ladder level, seed).
pub fn run_trials(cfg: &ExperimentConfig) -> Vec<Row> {
    let points = sweep_points(cfg);
    let variants = variants(cfg);
    let jobs: Vec<(usize, usize, u64)> = (0..points.len())
        .flat_map(|p| (0..variants.len()).map(move |v| (p, v)))
        .flat_map(|(p, v)| (0..cfg.trials as u64).map(move |t| (p, v, t)))
        .collect();
    let per_job: Vec<Vec<Row>> = jobs
        .par_iter()
        .map(|&(p, v, t)| {
            trial(&TrialSpec {
                cfg,
                point: &points[p],
                label: &variants[v].0,
                uncertainty: variants[v].1,
                seed: cfg.seed.wrapping_add(t),
            })
        })
        .collect();

    // Regroup so that ladder levels are contiguous within each (point, variant).
    let levels = cfg.ladder.len();
    let mut rows = Vec::with_capacity(per_job.len() * levels);
    for group in per_job.chunks(cfg.trials) {
        for level in 0..levels {
            rows.extend(group.iter().map(|trial| trial[level].clone()));
        }
    }
    rows
}

fn mean(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let v: Vec<f64> = values.flatten().collect();
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

/// One mean row per consecutive run of trials sharing everything but the
/// seed. Only rows with status `ok` contribute.
pub fn mean_rows(trials: &[Row], group_size: usize) -> Vec<Row> {
    trials
        .chunks(group_size)
        .map(|group| {
            let ok: Vec<&Row> = group.iter().filter(|r| r.is_ok()).collect();
            let m = |f: fn(&Row) -> Option<f64>| mean(ok.iter().map(|r| f(r)));
            Row {
                seed: None,
                m_achieved: m(|r| r.m_achieved),
                k_achieved: m(|r| r.k_achieved),
                cds_size: m(|r| r.cds_size),
                dominator_fraction: m(|r| r.dominator_fraction),
                overhead: m(|r| r.overhead),
                latency: m(|r| r.latency),
                success_ratio: m(|r| r.success_ratio),
                max_node_cost: m(|r| r.max_node_cost),
                status: format!("ok:{}/{}", ok.len(), group.len()),
                ..group[0].clone()
            }
        })
        .collect()
}

/// Trial rows followed by mean rows.
pub fn run_experiment(cfg: &ExperimentConfig) -> Vec<Row> {
    let mut rows = run_trials(cfg);
    let means = mean_rows(&rows, cfg.trials);
    rows.extend(means);
    rows
}

pub fn write_csv<W: Write>(rows: &[Row], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record(r.record())?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
