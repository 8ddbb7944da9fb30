use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use backbone::config::{parse_override, ExperimentConfig};
use backbone::experiments::{run_experiment, write_csv};
use backbone::formats::{read_graph, render_report, write_graph};
use backbone::{read_file, write_file, Error, Result};
use backbone_core::bee::{run_bee, BeeConfig};
use backbone_core::graph::{
    grid_topology, grid_topology_weighted, random_connected_topology, random_topology,
};
use backbone_core::ilp::{build_cds_tree_model, build_mck_model, export_lp};
use backbone_core::oracle::min_mck_set;
use backbone_core::UdgGraph;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "backbone",
    version,
    about = "m-connected k-dominating backbones on unit disk graphs"
)]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph file.
    Gen(GenArgs),
    /// Build a backbone and print its report.
    Run(RunArgs),
    /// Exact minimum by exhaustive search (at most 20 nodes).
    Oracle(OracleArgs),
    /// Write an integer program in LP format.
    Ilp(IlpArgs),
    /// Run an experiment sweep and write CSV.
    Exp(ExpArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Shape {
    /// Lattice `ROWSxCOLS:SPACING`, e.g. `10x10:5`.
    #[arg(long)]
    grid: Option<String>,
    /// Number of uniformly placed nodes.
    #[arg(long)]
    random: Option<usize>,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    shape: Shape,
    #[arg(long)]
    radius: f64,
    /// Deployment area `WIDTHxHEIGHT` for random graphs.
    #[arg(long, default_value = "100x100")]
    area: String,
    /// Resample random graphs until connected.
    #[arg(long)]
    connected: bool,
    /// Draw random node weights on grids.
    #[arg(long)]
    weighted: bool,
}

#[derive(Args)]
struct Targets {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 1)]
    m: u8,
    #[arg(long, default_value_t = 1)]
    k: usize,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    targets: Targets,
    /// Break path ties by node weight.
    #[arg(long)]
    uncertainty: bool,
    #[arg(long, default_value_t = 4)]
    hop_threshold: usize,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    targets: Targets,
    /// Largest set size tried; defaults to the node count.
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Args)]
struct IlpArgs {
    #[command(flatten)]
    targets: Targets,
    /// Adjacency-count m/k model instead of the spanning-tree CDS model.
    #[arg(long)]
    mck: bool,
    /// Size bound of the spanning-tree model; defaults to the node count.
    #[arg(long)]
    bound: Option<usize>,
}

#[derive(Args)]
struct ExpArgs {
    /// Manifest of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Experiment name; same as `--set experiment=NAME`.
    #[arg(long)]
    experiment: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    /// Override a manifest key, e.g. `--set radii=20,30`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn pair(text: &str, sep: char, what: &str) -> Result<(f64, f64)> {
    let bad = || Error::Config(format!("expected {what}, found `{text}`"));
    let (a, b) = text.split_once(sep).ok_or_else(bad)?;
    Ok((a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?))
}

fn load_graph(path: &Path) -> Result<UdgGraph> {
    Ok(read_graph(&read_file(path)?)?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => write_file(p, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| Error::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

fn gen(args: &GenArgs, seed: u64) -> Result<String> {
    let g = if let Some(spec) = &args.shape.grid {
        let (dims, spacing) = spec
            .split_once(':')
            .ok_or_else(|| Error::Config(format!("expected ROWSxCOLS:SPACING, found `{spec}`")))?;
        let (rows, cols) = pair(dims, 'x', "ROWSxCOLS")?;
        let spacing: f64 = spacing
            .parse()
            .map_err(|_| Error::Config(format!("bad spacing `{spacing}`")))?;
        let (rows, cols) = (rows as usize, cols as usize);
        if args.weighted {
            grid_topology_weighted(rows, cols, spacing, args.radius, seed)?
        } else {
            grid_topology(rows, cols, spacing, args.radius)?
        }
    } else {
        let n = args.shape.random.unwrap_or_default();
        let (w, h) = pair(&args.area, 'x', "WIDTHxHEIGHT")?;
        if args.connected {
            random_connected_topology(
                n,
                w,
                h,
                args.radius,
                seed,
                backbone_core::graph::DEFAULT_CONNECT_ATTEMPTS,
            )?
        } else {
            random_topology(n, w, h, args.radius, seed)?
        }
    };
    Ok(write_graph(&g))
}

/// Report text and, for failed runs, the cause.
fn run(args: &RunArgs) -> Result<(String, Option<Error>)> {
    let g = load_graph(&args.targets.input)?;
    let cfg = BeeConfig {
        m: args.targets.m,
        k: args.targets.k,
        hop_threshold: args.hop_threshold,
        uncertainty_constraint: args.uncertainty,
    };
    match run_bee(&g, &cfg) {
        Ok(r) => Ok((render_report(&r, None), None)),
        Err(f) => match f.partial {
            Some(p) => Ok((render_report(&p, Some(&f.cause)), Some(f.cause.into()))),
            None => Err(f.cause.into()),
        },
    }
}

fn oracle(args: &OracleArgs) -> Result<String> {
    let g = load_graph(&args.targets.input)?;
    let cap = args.cap.unwrap_or(g.len());
    let r = min_mck_set(&g, usize::from(args.targets.m), args.targets.k, cap)?;
    let mut out = String::new();
    match &r.optimum {
        Some(set) => {
            let ids: Vec<String> = set.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "size {}", r.size);
            let _ = writeln!(out, "set {}", ids.join(" "));
        }
        None => {
            let _ = writeln!(out, "infeasible cap={cap}");
        }
    }
    let _ = writeln!(out, "explored {}", r.explored);
    Ok(out)
}

fn ilp(args: &IlpArgs) -> Result<String> {
    let g = load_graph(&args.targets.input)?;
    let model = if args.mck {
        build_mck_model(&g, usize::from(args.targets.m), args.targets.k)
    } else {
        build_cds_tree_model(&g, args.bound.unwrap_or(g.len()))
    };
    model.validate()?;
    Ok(export_lp(&model))
}

fn exp(args: &ExpArgs, seed: Option<u64>, out: Option<&Path>) -> Result<()> {
    let text = match &args.config {
        Some(p) => read_file(p)?,
        None => String::new(),
    };
    let mut overrides = Vec::new();
    if let Some(e) = &args.experiment {
        overrides.push(("experiment".to_string(), e.clone()));
    }
    if let Some(t) = args.trials {
        overrides.push(("trials".to_string(), t.to_string()));
    }
    if let Some(s) = seed {
        overrides.push(("seed".to_string(), s.to_string()));
    }
    for s in &args.set {
        overrides.push(parse_override(s)?);
    }
    let cfg = ExperimentConfig::load(&text, &overrides)?;
    let rows = run_experiment(&cfg);
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf)?;
    let csv = String::from_utf8(buf).map_err(|e| Error::Config(e.to_string()))?;
    emit(out.or(cfg.output.as_deref()), &csv)
}

fn dispatch(cli: &Cli) -> Result<Option<Error>> {
    let out = cli.out.as_deref();
    let seed = cli.seed.unwrap_or(1);
    match &cli.command {
        Command::Gen(a) => emit(out, &gen(a, seed)?)?,
        Command::Run(a) => {
            let (text, failure) = run(a)?;
            emit(out, &text)?;
            return Ok(failure);
        }
        Command::Oracle(a) => emit(out, &oracle(a)?)?,
        Command::Ilp(a) => emit(out, &ilp(a)?)?,
        Command::Exp(a) => exp(a, cli.seed, out)?,
    }
    Ok(None)
}

fn exit_code(e: &Error) -> ExitCode {
    match e {
        Error::Core(backbone_core::Error::UnachievableConnectivity { .. }) => ExitCode::from(3),
        _ => ExitCode::from(1),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(e)) | Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            exit_code(&e)
        }
    }
}
