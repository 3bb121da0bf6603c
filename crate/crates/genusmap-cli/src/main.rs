//! `genusmap`: counting, sampling and measuring bipartite quadrangulations
//! of positive genus from the command line.
//!
//! Exit codes: 0 on success, 1 on a domain error or a failed check, 2 on a
//! usage error. Every artifact embeds its configuration, seed, mode and the
//! tool version; identical configurations produce byte-identical artifacts
//! regardless of the number of threads.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use genusmap::cms::{cms_forward, PointedQuadrangulation};
use genusmap::gtree::enumerate_well_labeled_gtrees_with_cap;
use genusmap::metrics::{dimension_estimate, profile_and_radius, two_point_statistic, Base, Graph, MetricSample, RadiusGrid};
use genusmap::random::{stream_chooser, Chooser};
use genusmap::sampler::{count_gtrees, count_gtrees_upto, quadrangulations_from_gtrees, GTreeCount};
use genusmap::tg::{check_lemag, check_p_bracket, tg_closed_form};
use genusmap::{Mode, Sampler, WellLabeledGTree};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

/// Environment variable naming the directory relative output paths are resolved against.
const OUT_DIR_ENV: &str = "GENUSMAP_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "genusmap", version, about = "Random bipartite quadrangulations of positive genus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List every well-labeled g-tree with the given number of edges.
    Enumerate(Common),
    /// Count well-labeled g-trees and rooted quadrangulations.
    Count(Common),
    /// Sample uniform well-labeled g-trees.
    Sample(Common),
    /// Sample uniform pointed quadrangulations.
    Quadrangulate(Common),
    /// Distance statistics of sampled quadrangulations.
    Stats(StatsArgs),
    /// Ball-growth dimension estimate.
    Dimension(DimensionArgs),
    /// The asymptotic constant t_g in closed form.
    Tg(TgArgs),
    /// Numerical self-checks.
    Check(Common),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ModeArg {
    Auto,
    Exact,
    Float,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args, Serialize)]
struct Common {
    /// Genus, at least 1.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    genus: u64,
    /// Number of edges of the g-tree (faces of the quadrangulation).
    #[arg(long, default_value_t = 3)]
    edges: usize,
    /// Number of samples.
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Master seed; sample i uses the stream (seed, i).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Arithmetic of the counting tables.
    #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
    mode: ModeArg,
    /// Output file; standard output when absent.
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads; the output does not depend on it.
    #[arg(long)]
    #[serde(skip)]
    threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Report {
    TwoPoint,
    Profile,
}

#[derive(Debug, Clone, Args, Serialize)]
struct StatsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
    /// Which statistic to report.
    #[arg(long, value_enum, default_value_t = Report::TwoPoint)]
    report: Report,
}

#[derive(Debug, Clone, Args, Serialize)]
struct DimensionArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
    /// Number of random centers.
    #[arg(long, default_value_t = 20)]
    centers: usize,
    /// `auto` or a comma-separated list of radii.
    #[arg(long, default_value = "auto")]
    radii: String,
    /// Measure a periodic square grid of this side instead of a quadrangulation.
    #[arg(long)]
    grid: Option<usize>,
}

#[derive(Debug, Clone, Args, Serialize)]
struct TgArgs {
    /// Genus, at least 1.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    genus: u64,
    /// Bits of precision of the decimal value.
    #[arg(long, default_value_t = 128)]
    precision: u32,
    /// Also estimate t_g by Monte Carlo with this many samples.
    #[arg(long, default_value_t = 0)]
    mc_samples: u64,
    /// Seed of the Monte Carlo streams.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

impl Common {
    fn genus(&self) -> usize {
        self.genus as usize
    }

    fn mode(&self) -> Mode {
        match self.mode {
            ModeArg::Auto => Mode::auto(self.edges),
            ModeArg::Exact => Mode::Exact,
            ModeArg::Float => Mode::Float,
        }
    }
}

fn metadata(command: &str, config: &impl Serialize, seed: u64, mode: Option<Mode>) -> Value {
    json!({
        "tool": "genusmap",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "seed": seed,
        "mode": mode,
        "config": config,
    })
}

fn write_artifact(out: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        None => std::io::stdout().write_all(text.as_bytes()).context("writing to standard output"),
        Some(path) => {
            let path = match std::env::var_os(OUT_DIR_ENV) {
                Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
                _ => path.clone(),
            };
            std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
        }
    }
}

fn write_json(out: &Option<PathBuf>, value: &Value) -> anyhow::Result<()> {
    write_artifact(out, &serde_json::to_string_pretty(value)?)
}

/// CSV text with a header line; `meta` is echoed as a leading comment.
fn csv(meta: &Value, header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut text = format!("# {}\n{header}\n", serde_json::to_string(meta).expect("serializable"));
    for row in rows {
        text.push_str(&row);
        text.push('\n');
    }
    text
}

/// Sample `i` and its sign, both drawn from the stream `(seed, i)`.
fn sample_trees(c: &Common) -> anyhow::Result<Vec<(WellLabeledGTree, i8)>> {
    let sampler = Sampler::new(c.genus(), c.edges, c.mode())?;
    (0..c.count)
        .into_par_iter()
        .map(|i| {
            let mut ch = stream_chooser(c.seed, i as u64);
            let tree = sampler.sample_gtree(&mut ch)?;
            let eps = if ch.below(2) == 0 { -1 } else { 1 };
            Ok((tree, eps))
        })
        .collect::<genusmap::Result<Vec<_>>>()
        .map_err(Into::into)
}

fn run_enumerate(c: &Common) -> anyhow::Result<()> {
    let trees = enumerate_well_labeled_gtrees_with_cap(c.genus(), c.edges, 8)?;
    let meta = metadata("enumerate", c, c.seed, None);
    match c.format {
        Format::Json => write_json(&c.out, &json!({ "metadata": meta, "count": trees.len(), "trees": trees })),
        Format::Csv => write_artifact(
            &c.out,
            &csv(
                &meta,
                "index,pairing,labels",
                trees.iter().enumerate().map(|(i, t)| format!("{i},{},{}", join(t.pairing()), join(t.labels()))),
            ),
        ),
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn run_count(c: &Common) -> anyhow::Result<()> {
    let meta = metadata("count", c, c.seed, Some(c.mode()));
    let g = c.genus();
    let rows: Vec<(usize, String, String)> = match c.mode() {
        Mode::Exact => count_gtrees_upto(g, c.edges)?
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let n = i + 1;
                let q = quadrangulations_from_gtrees(g, n, t).map(|q| q.to_string()).unwrap_or_else(|_| "none".into());
                (n, t.to_string(), q)
            })
            .collect(),
        Mode::Float => match count_gtrees(g, c.edges, Mode::Float)? {
            GTreeCount::Scaled(x) => vec![(c.edges, format!("{x:e}"), "none".into())],
            GTreeCount::Exact(t) => vec![(c.edges, t.to_string(), "none".into())],
        },
    };
    let scale = match c.mode() {
        Mode::Exact => "exact",
        Mode::Float => "divided by 12^n",
    };
    match c.format {
        Format::Json => {
            let list: Vec<Value> = rows.iter().map(|(n, t, q)| json!({ "n": n, "gtrees": t, "quadrangulations": q })).collect();
            write_json(&c.out, &json!({ "metadata": meta, "scale": scale, "counts": list }))
        }
        Format::Csv => {
            write_artifact(&c.out, &csv(&meta, "n,gtrees,quadrangulations", rows.iter().map(|(n, t, q)| format!("{n},{t},{q}"))))
        }
    }
}

fn run_sample(c: &Common) -> anyhow::Result<()> {
    let trees = sample_trees(c)?;
    let meta = metadata("sample", c, c.seed, Some(c.mode()));
    match c.format {
        Format::Json => {
            let list: Vec<Value> = trees.iter().map(|(t, e)| json!({ "tree": t, "epsilon": e })).collect();
            write_json(&c.out, &json!({ "metadata": meta, "samples": list }))
        }
        Format::Csv => write_artifact(
            &c.out,
            &csv(
                &meta,
                "sample,epsilon,pairing,labels",
                trees.iter().enumerate().map(|(i, (t, e))| format!("{i},{e},{},{}", join(t.pairing()), join(t.labels()))),
            ),
        ),
    }
}

fn run_quadrangulate(c: &Common) -> anyhow::Result<()> {
    let trees = sample_trees(c)?;
    let quads: Vec<PointedQuadrangulation> = trees.par_iter().map(|(t, e)| cms_forward(t, *e)).collect();
    let meta = metadata("quadrangulate", c, c.seed, Some(c.mode()));
    if c.format == Format::Csv {
        bail!("quadrangulations are only written as JSON");
    }
    write_json(&c.out, &json!({ "metadata": meta, "quadrangulations": quads }))
}

fn run_stats(a: &StatsArgs) -> anyhow::Result<()> {
    let c = &a.common;
    let trees = sample_trees(c)?;
    let meta = metadata("stats", a, c.seed, Some(c.mode()));
    match a.report {
        Report::TwoPoint => {
            let values: Vec<f64> = trees
                .into_par_iter()
                .map(|(t, e)| MetricSample::new(t, e).map(|s| s.two_point_value()))
                .collect::<genusmap::Result<_>>()?;
            match c.format {
                Format::Json => {
                    let summary = if values.is_empty() { Value::Null } else { serde_json::to_value(two_point_statistic(&values)?)? };
                    write_json(&c.out, &json!({ "metadata": meta, "n": c.edges, "values": values, "summary": summary }))
                }
                Format::Csv => {
                    write_artifact(&c.out, &csv(&meta, "n,seed,value", values.iter().map(|v| format!("{},{},{v}", c.edges, c.seed))))
                }
            }
        }
        Report::Profile => {
            let profiles: Vec<Vec<usize>> =
                trees.par_iter().map(|(t, e)| profile_and_radius(&cms_forward(t, *e), Base::Pointed).histogram).collect();
            let len = profiles.iter().map(Vec::len).max().unwrap_or(0);
            let mut total = vec![0usize; len];
            for p in &profiles {
                for (d, x) in p.iter().enumerate() {
                    total[d] += x;
                }
            }
            match c.format {
                Format::Json => write_json(&c.out, &json!({ "metadata": meta, "n": c.edges, "profile": total })),
                Format::Csv => {
                    write_artifact(&c.out, &csv(&meta, "distance,count", total.iter().enumerate().map(|(d, x)| format!("{d},{x}"))))
                }
            }
        }
    }
}

fn run_dimension(a: &DimensionArgs) -> anyhow::Result<()> {
    let c = &a.common;
    let grid = if a.radii == "auto" {
        RadiusGrid::default()
    } else {
        let radii = a.radii.split(',').map(|r| r.trim().parse::<usize>()).collect::<Result<Vec<_>, _>>().context("parsing --radii")?;
        RadiusGrid::Explicit(radii)
    };
    let graph = match a.grid {
        Some(side) => Graph::torus_grid(side),
        None => {
            let sampler = Sampler::new(c.genus(), c.edges, c.mode())?;
            let mut ch = stream_chooser(c.seed, 0);
            let tree = sampler.sample_gtree(&mut ch)?;
            Graph::from_map(&cms_forward(&tree, 1).map)
        }
    };
    let est = dimension_estimate(&graph, a.centers, &grid, &mut stream_chooser(c.seed, 1))?;
    let meta = metadata("dimension", a, c.seed, a.grid.is_none().then(|| c.mode()));
    match c.format {
        Format::Json => write_json(&c.out, &json!({ "metadata": meta, "estimate": est })),
        Format::Csv => {
            let rows = est
                .centers
                .iter()
                .flat_map(|g| g.radii.iter().zip(&g.volumes).map(move |(r, v)| format!("{},{r},{v},{}", g.center, g.slope)));
            write_artifact(&c.out, &csv(&meta, "center,radius,volume,slope", rows))
        }
    }
}

fn run_tg(a: &TgArgs) -> anyhow::Result<()> {
    let r = tg_closed_form(a.genus as usize, a.precision)?;
    let mut out = json!({
        "genus": a.genus,
        "rational_part": format!("{}/{}", r.rational_part.numer(), r.rational_part.denom()),
        "t_g": r.t_g,
        "precision_bits": a.precision,
        "metadata": metadata("tg", a, a.seed, None),
    });
    if a.mc_samples > 0 {
        let est = genusmap::tg::estimate_upsilon(a.genus as usize, a.mc_samples, a.seed)?;
        let f = genusmap::tg::upsilon_factor(a.genus as usize);
        out["monte_carlo"] =
            json!({ "upsilon": est.estimate, "std_error": est.std_error, "t_g": f * est.estimate, "t_g_std_error": f * est.std_error });
    }
    write_json(&a.out, &out)
}

fn run_check(c: &Common) -> anyhow::Result<bool> {
    let mut checks = Vec::new();
    let mut worst = 0.0f64;
    for a in [0.5, 1.0, 2.0] {
        for b in [0.5, 1.0, 2.0] {
            for t in [0.5, 1.0, 2.0] {
                worst = worst.max(check_lemag(a, b, t, 1e-8).unwrap_or(f64::INFINITY));
            }
        }
    }
    checks.push(json!({ "name": "gaussian-convolution-identity", "residual": worst, "pass": worst < 1e-8 }));
    let pb = check_p_bracket(c.genus())?;
    checks.push(json!({ "name": "p-bracket-at-zero", "residual": pb, "pass": pb < 1e-10 }));
    let n_max = c.edges.clamp(2, 8);
    let counts = count_gtrees_upto(c.genus(), n_max)?;
    let mut ok = true;
    for n in 1..=n_max {
        ok &= quadrangulations_from_gtrees(c.genus(), n, &counts[n - 1]).is_ok();
    }
    checks.push(json!({ "name": "vertex-count-identity", "max_n": n_max, "pass": ok }));
    let pass = checks.iter().all(|x| x["pass"] == json!(true));
    write_json(&c.out, &json!({ "metadata": metadata("check", c, c.seed, None), "checks": checks, "pass": pass }))?;
    Ok(pass)
}

fn threads(cmd: &Command) -> Option<usize> {
    match cmd {
        Command::Enumerate(c) | Command::Count(c) | Command::Sample(c) | Command::Quadrangulate(c) | Command::Check(c) => c.threads,
        Command::Stats(a) => a.common.threads,
        Command::Dimension(a) => a.common.threads,
        Command::Tg(_) => None,
    }
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    if let Some(t) = threads(&cli.command) {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().context("configuring threads")?;
    }
    match &cli.command {
        Command::Enumerate(c) => run_enumerate(c)?,
        Command::Count(c) => run_count(c)?,
        Command::Sample(c) => run_sample(c)?,
        Command::Quadrangulate(c) => run_quadrangulate(c)?,
        Command::Stats(a) => run_stats(a)?,
        Command::Dimension(a) => run_dimension(a)?,
        Command::Tg(a) => run_tg(a)?,
        Command::Check(c) => return run_check(c),
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
