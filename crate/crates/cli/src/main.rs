//! `perturb`: command-line front end.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use perturbed::decomposition::decompose;
use perturbed::embedder::{embed_perturbed, EmbedConfig, Outcome};
use perturbed::graph::{
    gnp_sample, is_embedding, make_host, read_edge_list, write_edge_list, Embedding, Graph, HostSpec,
};
use perturbed::harness::{
    compare_models, epsilon_of, janson_report, rows_to_csv, rows_to_svg, seqdep_bound, sweep, SweepGrid,
};
use perturbed::targets::{density_report, DensityOptions, TargetSpec};

#[derive(Parser)]
#[command(name = "perturb", version, about = "Spanning structures in randomly perturbed graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Host,
    Target,
    Gnp,
}

#[derive(Subcommand)]
enum Command {
    /// Write a host, target or G(n, p) sample as an edge list.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        #[arg(long)]
        n: usize,
        /// Host or target spec (for `host` and `target`).
        #[arg(long)]
        spec: Option<String>,
        /// Edge probability (for `gnp`).
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, env = "PERTURB_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the embedding pipeline once; exit code 2 on a stage failure.
    Embed {
        #[arg(long)]
        target: String,
        #[arg(long)]
        host: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, env = "PERTURB_SEED", default_value_t = 0)]
        seed: u64,
        /// `key = value` config file.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        emit_switch_plan: Option<PathBuf>,
        /// Write `G_alpha` together with all sampled rounds as an edge list.
        #[arg(long)]
        emit_union: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a map (JSON array or `embed` report) against a host edge list.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        target: String,
        #[arg(long)]
        map: PathBuf,
    },
    /// Decompose a bounded-degree target and verify the decomposition.
    Decompose {
        #[arg(long)]
        target: String,
        #[arg(long)]
        n: usize,
        /// Degree bound; defaults to the target's maximum degree.
        #[arg(long)]
        delta: Option<usize>,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact 1-density and gamma of an edge list or a target.
    Density {
        #[arg(long, conflicts_with = "target")]
        graph: Option<PathBuf>,
        #[arg(long, requires = "n")]
        target: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        /// Search connected subsets up to this size beyond the exact range.
        #[arg(long)]
        bounded: Option<usize>,
    },
    /// Janson and sequential-dependence bounds.
    Janson {
        /// Edge lists separated by lines containing `---`.
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0.5)]
        gamma: f64,
        /// Also report the sequential-dependence bound with this many steps.
        #[arg(long, requires = "cond_mean")]
        steps: Option<usize>,
        /// Lower bound on each step's conditional mean.
        #[arg(long)]
        cond_mean: Option<f64>,
    },
    /// Monte Carlo sweep over an (n, alpha, p) grid, written as CSV.
    Sweep {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        alpha: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<f64>,
        #[arg(long)]
        target: String,
        /// Host kind; alpha is taken from the grid.
        #[arg(long, default_value = "random")]
        host: String,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 4)]
        workers: usize,
        #[arg(long, env = "PERTURB_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Paired success rates of G_alpha ∪ G(n, p) and G(n, p).
    Compare {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        target: String,
        #[arg(long, default_value = "random")]
        host: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 4)]
        workers: usize,
        #[arg(long, env = "PERTURB_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json_text(v: &impl serde::Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn load_config(path: Option<&Path>) -> Result<EmbedConfig> {
    match path {
        None => Ok(EmbedConfig::default()),
        Some(p) => Ok(EmbedConfig::parse(&fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?)?),
    }
}

fn read_graph(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(read_edge_list(&text)?)
}

fn parse_map(text: &str) -> Result<Embedding> {
    let v: serde_json::Value = serde_json::from_str(text)?;
    let arr = v
        .get("report")
        .unwrap_or(&v)
        .get("embedding")
        .and_then(|e| e.get("map"))
        .or_else(|| v.get("map"))
        .unwrap_or(&v)
        .as_array()
        .context("expected a JSON array of host vertices")?;
    let map = arr
        .iter()
        .map(|x| if x.is_null() { Ok(None) } else { x.as_u64().map(|h| Some(h as usize)).context("bad vertex") })
        .collect::<Result<Vec<_>>>()?;
    Ok(Embedding::from_partial(map))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Gen { kind, n, spec, p, seed, out } => {
            let g = match kind {
                GenKind::Host => make_host(&HostSpec::parse(spec.as_deref().context("--spec is required")?, n)?, seed)?,
                GenKind::Target => TargetSpec::parse(spec.as_deref().context("--spec is required")?, n)?.realize()?,
                GenKind::Gnp => gnp_sample(n, p.context("--p is required")?, seed)?,
            };
            emit(out.as_deref(), &write_edge_list(&g))?;
        }
        Command::Embed { target, host, n, p, seed, config, emit_switch_plan, emit_union, out } => {
            let cfg = load_config(config.as_deref())?;
            let t = TargetSpec::parse(&target, n)?;
            let h = HostSpec::parse(&host, n)?;
            let res = embed_perturbed(&t, &h, p, &cfg, seed)?;
            let delta = t.realize()?.max_degree().max(1);
            let doc = json!({
                "target": t.tag(),
                "host": h.tag(),
                "n": n,
                "p": p,
                "seed": seed,
                "epsilon_op": cfg.epsilon_op,
                "epsilon_theory": epsilon_of(h.alpha, delta),
                "report": res.report(),
            });
            emit(out.as_deref(), &json_text(&doc)?)?;
            if let Some(path) = emit_switch_plan {
                fs::write(&path, json_text(&res.switch_plan)?)?;
            }
            if let Some(path) = emit_union {
                fs::write(&path, write_edge_list(&res.union))?;
            }
            for (stage, d) in &res.timings {
                eprintln!("{stage}: {:.3} ms", d.as_secs_f64() * 1e3);
            }
            if let Outcome::Failure { stage, reason } = &res.outcome {
                eprintln!("failed at {}: {reason}", stage.tag());
                return Ok(ExitCode::from(2));
            }
        }
        Command::Verify { graph, target, map } => {
            let g = read_graph(&graph)?;
            let f = TargetSpec::parse(&target, g.n())?.realize()?;
            let m = parse_map(&fs::read_to_string(&map)?)?;
            let verdict = is_embedding(&f, &g, &m);
            let doc = json!({ "valid": verdict.is_ok(), "violation": verdict.as_ref().err().map(|v| v.to_string()) });
            print!("{}", json_text(&doc)?);
            if verdict.is_err() {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Decompose { target, n, delta, epsilon, out } => {
            let f = TargetSpec::parse(&target, n)?.realize()?;
            let d = decompose(&f, delta.unwrap_or(f.max_degree()), epsilon)?;
            emit(out.as_deref(), &json_text(&d.to_doc())?)?;
        }
        Command::Density { graph, target, n, bounded } => {
            let g = match (graph, target) {
                (Some(path), _) => read_graph(&path)?,
                (None, Some(t)) => TargetSpec::parse(&t, n.context("--n is required")?)?.realize()?,
                (None, None) => bail!("give --graph or --target"),
            };
            let r = density_report(&g, DensityOptions { bounded_size: bounded, ..DensityOptions::default() })?;
            print!("{}", json_text(&r)?);
        }
        Command::Janson { family, p, gamma, steps, cond_mean } => {
            let text = fs::read_to_string(&family)?;
            let graphs = text
                .split("---")
                .filter(|b| b.lines().any(|l| !l.trim().is_empty()))
                .map(read_edge_list)
                .collect::<Result<Vec<_>, _>>()?;
            let r = janson_report(&graphs, p, gamma)?;
            let seq = steps.zip(cond_mean).map(|(m, d)| seqdep_bound(d, gamma, m)).transpose()?;
            print!("{}", json_text(&json!({ "members": graphs.len(), "janson": r, "seqdep": seq }))?);
        }
        Command::Sweep { n, alpha, p, target, host, trials, workers, seed, config, out, svg } => {
            let cfg = load_config(config.as_deref())?;
            let grid = SweepGrid { ns: n, alphas: alpha, ps: p, target, host, trials };
            let rows = sweep(&grid, seed, workers, &cfg)?;
            for r in rows.iter().filter(|r| r.reason.is_some()) {
                eprintln!("cell n={} alpha={} p={} skipped: {}", r.n, r.alpha, r.p, r.reason.as_deref().unwrap_or(""));
            }
            emit(out.as_deref(), &rows_to_csv(&rows))?;
            if let Some(path) = svg {
                fs::write(&path, rows_to_svg(&rows))?;
            }
        }
        Command::Compare { n, alpha, p, target, host, trials, workers, seed, config, out } => {
            let cfg = load_config(config.as_deref())?;
            let c = compare_models(n, alpha, p, &target, &host, trials, seed, workers, &cfg)?;
            emit(out.as_deref(), &json_text(&c)?)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
