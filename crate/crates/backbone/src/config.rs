//! Experiment manifests: `key = value` lines, `#` comments, later keys win.
//!
//! Lists are comma separated. Grid shapes are written `10x10`, ladder levels
//! `m:k`. Flags given on the command line are applied after the file.

use std::fmt::Write;
use std::path::PathBuf;
use std::str::FromStr;

use backbone_core::sim::PacketModel;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    CdsSize,
    Uncertainty,
    MaxCost,
    ResilienceLadder,
    NetworkSize,
    PacketSize,
    Density,
    RandomTopology,
    DominatorCount,
    DominateeCount,
}

impl Experiment {
    pub const ALL: [Experiment; 10] = [
        Experiment::CdsSize,
        Experiment::Uncertainty,
        Experiment::MaxCost,
        Experiment::ResilienceLadder,
        Experiment::NetworkSize,
        Experiment::PacketSize,
        Experiment::Density,
        Experiment::RandomTopology,
        Experiment::DominatorCount,
        Experiment::DominateeCount,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::CdsSize => "cds_size",
            Experiment::Uncertainty => "uncertainty",
            Experiment::MaxCost => "max_cost",
            Experiment::ResilienceLadder => "resilience_ladder",
            Experiment::NetworkSize => "network_size",
            Experiment::PacketSize => "packet_size",
            Experiment::Density => "density",
            Experiment::RandomTopology => "random_topology",
            Experiment::DominatorCount => "dominator_count",
            Experiment::DominateeCount => "dominatee_count",
        }
    }

    /// Sweeps over random deployments in the CDS-size study.
    pub fn is_size_study(self) -> bool {
        matches!(
            self,
            Experiment::CdsSize
                | Experiment::Uncertainty
                | Experiment::MaxCost
                | Experiment::ResilienceLadder
        )
    }

    /// Runs the same seeds with the uncertainty flag off and on.
    pub fn is_paired(self) -> bool {
        matches!(self, Experiment::Uncertainty | Experiment::MaxCost)
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment `{s}`")))
    }
}

/// Everything a sweep needs. Which lists matter depends on the experiment;
/// see [`crate::experiments`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub trials: usize,
    pub seed: u64,
    /// Node counts of random deployments.
    pub nodes: Vec<usize>,
    /// Transmission ranges of random deployments.
    pub radii: Vec<f64>,
    pub width: f64,
    pub height: f64,
    /// Grid shapes as (rows, cols).
    pub grids: Vec<(usize, usize)>,
    pub spacings: Vec<f64>,
    /// Transmission range on grids, independent of the spacing.
    pub grid_radius: f64,
    pub packet_bytes: Vec<usize>,
    /// (m, k) targets, run in order on every topology.
    pub ladder: Vec<(u8, usize)>,
    pub uncertainty: bool,
    pub hop_threshold: usize,
    pub packet: PacketModel,
    /// Extra dominators promoted after construction.
    pub extra_dominators: Vec<usize>,
    /// Number of non-dominators that receive data.
    pub receivers: Vec<usize>,
    pub output: Option<PathBuf>,
}

const FULL_LADDER: [(u8, usize); 4] = [(1, 1), (1, 2), (2, 2), (3, 3)];

impl ExperimentConfig {
    pub fn defaults(experiment: Experiment) -> Self {
        let random_study = experiment.is_size_study();
        ExperimentConfig {
            experiment,
            trials: 100,
            seed: 1,
            nodes: if random_study {
                vec![50, 100, 150]
            } else {
                vec![100]
            },
            radii: if random_study {
                vec![25.0, 30.0, 35.0]
            } else {
                vec![20.0]
            },
            width: if random_study { 100.0 } else { 50.0 },
            height: 100.0,
            grids: match experiment {
                Experiment::NetworkSize => vec![(10, 10), (15, 15), (20, 20), (25, 25), (30, 30)],
                _ => vec![(10, 10)],
            },
            spacings: match experiment {
                Experiment::Density => vec![5.0, 10.0, 15.0, 20.0, 25.0],
                _ => vec![5.0],
            },
            grid_radius: match experiment {
                Experiment::Density => 30.0,
                _ => 25.0,
            },
            packet_bytes: match experiment {
                Experiment::PacketSize | Experiment::RandomTopology => vec![64, 256, 1024, 4096],
                _ => vec![256],
            },
            ladder: match experiment {
                Experiment::CdsSize | Experiment::Uncertainty | Experiment::MaxCost => vec![(1, 1)],
                _ => FULL_LADDER.to_vec(),
            },
            uncertainty: false,
            hop_threshold: 4,
            packet: PacketModel::default(),
            extra_dominators: vec![0, 5, 10, 20],
            receivers: vec![10, 20, 40, 60],
            output: None,
        }
    }

    /// Builds a config from manifest text plus overrides; the experiment
    /// name may come from either.
    pub fn load(text: &str, overrides: &[(String, String)]) -> Result<Self> {
        let mut pairs = parse_pairs(text)?;
        pairs.extend(overrides.iter().cloned());
        let experiment = pairs
            .iter()
            .rev()
            .find(|(k, _)| k == "experiment")
            .map(|(_, v)| v.parse())
            .transpose()?
            .ok_or_else(|| Error::Config("no experiment given".into()))?;
        let mut cfg = Self::defaults(experiment);
        for (k, v) in &pairs {
            cfg.set(k, v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| Error::Config(format!("{key}: expected {what}, found `{value}`"));
        macro_rules! one {
            ($what:literal) => {
                value.trim().parse().map_err(|_| bad($what))?
            };
        }
        match key {
            "experiment" => self.experiment = value.parse()?,
            "trials" => self.trials = one!("a count"),
            "seed" => self.seed = one!("an integer"),
            "nodes" => self.nodes = list(value).map_err(|_| bad("a list of counts"))?,
            "radii" | "radius" => self.radii = list(value).map_err(|_| bad("a list of numbers"))?,
            "width" => self.width = one!("a number"),
            "height" => self.height = one!("a number"),
            "grids" | "grid" => {
                self.grids = grids(value).ok_or_else(|| bad("shapes like 10x10"))?
            }
            "spacings" | "spacing" => {
                self.spacings = list(value).map_err(|_| bad("a list of numbers"))?
            }
            "grid_radius" => self.grid_radius = one!("a number"),
            "packet_bytes" => {
                self.packet_bytes = list(value).map_err(|_| bad("a list of counts"))?
            }
            "ladder" => self.ladder = ladder(value).ok_or_else(|| bad("levels like 1:1,2:2"))?,
            "m" | "k" => {
                // A single target level; both keys refine the first ladder entry.
                let (mut m, mut k) = self.ladder.first().copied().unwrap_or((1, 1));
                if key == "m" {
                    m = one!("an integer");
                } else {
                    k = one!("an integer");
                }
                self.ladder = vec![(m, k)];
            }
            "uncertainty" => self.uncertainty = flag(value).ok_or_else(|| bad("on or off"))?,
            "hop_threshold" => self.hop_threshold = one!("a count"),
            "chunk_size" => self.packet.chunk_size = one!("a count"),
            "loss_coefficient" => self.packet.loss_coefficient = one!("a number"),
            "loss_exponent" => self.packet.loss_exponent = one!("a number"),
            "retransmissions" => self.packet.retransmissions = one!("a count"),
            "extra_dominators" => {
                self.extra_dominators = list(value).map_err(|_| bad("a list of counts"))?
            }
            "receivers" => self.receivers = list(value).map_err(|_| bad("a list of counts"))?,
            "output" => self.output = Some(PathBuf::from(value.trim())),
            _ => return Err(Error::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::Config(msg.into()));
        if self.trials == 0 {
            return fail("trials must be at least 1");
        }
        let empty = [
            ("nodes", self.nodes.is_empty()),
            ("radii", self.radii.is_empty()),
            ("grids", self.grids.is_empty()),
            ("spacings", self.spacings.is_empty()),
            ("packet_bytes", self.packet_bytes.is_empty()),
            ("ladder", self.ladder.is_empty()),
            ("extra_dominators", self.extra_dominators.is_empty()),
            ("receivers", self.receivers.is_empty()),
        ];
        if let Some((name, _)) = empty.iter().find(|(_, e)| *e) {
            return Err(Error::Config(format!("{name} must not be empty")));
        }
        if self.packet_bytes.contains(&0) {
            return fail("packet sizes must be positive");
        }
        if !(self.grid_radius.is_finite() && self.grid_radius > 0.0) {
            return fail("grid_radius must be positive");
        }
        for &(m, k) in &self.ladder {
            backbone_core::bee::BeeConfig::new(m, k).validate()?;
        }
        self.packet.validate()?;
        Ok(())
    }

    /// Canonical manifest text; loading it reproduces this config.
    pub fn to_manifest(&self) -> String {
        fn join<T: ToString>(xs: &[T]) -> String {
            xs.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",")
        }
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        kv("experiment", self.experiment.name().into());
        kv("trials", self.trials.to_string());
        kv("seed", self.seed.to_string());
        kv("nodes", join(&self.nodes));
        kv("radii", join(&self.radii));
        kv("width", self.width.to_string());
        kv("height", self.height.to_string());
        kv(
            "grids",
            self.grids
                .iter()
                .map(|(r, c)| format!("{r}x{c}"))
                .collect::<Vec<_>>()
                .join(","),
        );
        kv("spacings", join(&self.spacings));
        kv("grid_radius", self.grid_radius.to_string());
        kv("packet_bytes", join(&self.packet_bytes));
        kv(
            "ladder",
            self.ladder
                .iter()
                .map(|(m, k)| format!("{m}:{k}"))
                .collect::<Vec<_>>()
                .join(","),
        );
        kv(
            "uncertainty",
            if self.uncertainty { "on" } else { "off" }.into(),
        );
        kv("hop_threshold", self.hop_threshold.to_string());
        kv("chunk_size", self.packet.chunk_size.to_string());
        kv("loss_coefficient", self.packet.loss_coefficient.to_string());
        kv("loss_exponent", self.packet.loss_exponent.to_string());
        kv("retransmissions", self.packet.retransmissions.to_string());
        kv("extra_dominators", join(&self.extra_dominators));
        kv("receivers", join(&self.receivers));
        if let Some(p) = &self.output {
            kv("output", p.display().to_string());
        }
        out
    }
}

/// `key = value` pairs in file order.
pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Parses a `--set key=value` argument.
pub fn parse_override(arg: &str) -> Result<(String, String)> {
    let (k, v) = arg
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("expected key=value, found `{arg}`")))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

fn list<T: FromStr>(value: &str) -> std::result::Result<Vec<T>, T::Err> {
    value.split(',').map(|s| s.trim().parse()).collect()
}

fn grids(value: &str) -> Option<Vec<(usize, usize)>> {
    value
        .split(',')
        .map(|s| {
            let (r, c) = s.trim().split_once('x')?;
            Some((r.parse().ok()?, c.parse().ok()?))
        })
        .collect()
}

fn ladder(value: &str) -> Option<Vec<(u8, usize)>> {
    value
        .split(',')
        .map(|s| {
            let (m, k) = s.trim().split_once(':')?;
            Some((m.parse().ok()?, k.parse().ok()?))
        })
        .collect()
}

fn flag(value: &str) -> Option<bool> {
    match value.trim() {
        "on" | "true" | "yes" | "1" => Some(true),
        "off" | "false" | "no" | "0" => Some(false),
        _ => None,
    }
}
