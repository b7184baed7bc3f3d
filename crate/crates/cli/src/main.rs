use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use fclab::cache::ResultCache;
use fclab::pipeline::{recompute, Pipeline};
use fclab::scenario::{parse_window, Scenario};
use fclab_core::exec::{configure_threads, Parallelism};
use fclab_core::theorems::CHECK_IDS;
use fclab_core::Error;

#[derive(Parser)]
#[command(name = "fclab", version, about = "Bigraded complexes, mixed multiplicities and fiber-cone coefficients for monomial ideals")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Scenario file (JSON).
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,
    /// Bidegree window, `N` or `N1,N2`; overrides the scenario.
    #[arg(long, global = true)]
    window: Option<String>,
    /// Number of seeds for seed-dependence checks; overrides the scenario.
    #[arg(long, global = true)]
    seeds: Option<usize>,
    /// Worker threads; 1 runs sequentially.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Result cache directory.
    #[arg(long, global = true, env = "FCLAB_CACHE_DIR", default_value = ".fclab-cache")]
    cache_dir: PathBuf,
    /// Do not read or write the result cache.
    #[arg(long, global = true)]
    no_cache: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check of the scenario and write report.json and report.md.
    Run {
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Sequences of generic elements.
    #[command(subcommand)]
    Seq(SeqCommand),
    /// The bivariate Hilbert function.
    #[command(subcommand)]
    Hilbert(HilbertCommand),
    /// Homology of the bigraded complexes.
    #[command(subcommand)]
    Complex(ComplexCommand),
    /// The fiber cone.
    #[command(subcommand)]
    Fiber(FiberCommand),
    /// Run one check and print its report.
    Check {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(CHECK_IDS))]
        id: String,
    },
    /// Maintain the result cache.
    #[command(subcommand)]
    Cache(CacheCommand),
}

#[derive(Args, Clone, Copy)]
struct Shape {
    #[arg(long)]
    k1: Option<usize>,
    #[arg(long)]
    k2: Option<usize>,
}

#[derive(Subcommand)]
enum SeqCommand {
    Generate(Shape),
    Verify(Shape),
}

#[derive(Subcommand)]
enum HilbertCommand {
    Table,
    Fit,
}

#[derive(Subcommand)]
enum ComplexCommand {
    /// One JSON line per homology length.
    Homology(Shape),
}

#[derive(Subcommand)]
enum FiberCommand {
    Series,
    Coefficients,
}

#[derive(Subcommand)]
enum CacheCommand {
    /// Remove damaged and stale entries.
    Gc {
        /// Remove every entry.
        #[arg(long)]
        all: bool,
    },
    /// Check checksums and recompute a sample of entries.
    Verify,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(Error::CacheCorrupt { .. }) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn mode(jobs: Option<usize>) -> Parallelism {
    match jobs {
        Some(1) => Parallelism::Sequential,
        Some(n) => {
            configure_threads(n);
            Parallelism::Parallel
        }
        None => Parallelism::Parallel,
    }
}

fn load_scenario(g: &Global) -> Result<Scenario> {
    let path = g.scenario.as_ref().context("--scenario is required")?;
    let mut s = Scenario::load(path)?;
    if let Some(w) = &g.window {
        s.window = Some(parse_window(w)?);
    }
    if let Some(n) = g.seeds {
        s.seeds = Some(n);
    }
    s.validate()?;
    Ok(s)
}

fn pipeline(g: &Global) -> Result<Pipeline> {
    let s = load_scenario(g)?;
    let cache = if g.no_cache {
        None
    } else {
        Some(ResultCache::open(&g.cache_dir)?)
    };
    Ok(Pipeline::new(s, mode(g.jobs), cache))
}

fn shape_of(p: &Pipeline, sh: Shape) -> (usize, usize) {
    let r = p.scenario.resolved();
    (sh.k1.unwrap_or(r.k1.unwrap()), sh.k2.unwrap_or(r.k2.unwrap()))
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("value serializes"));
}

fn run(cli: Cli) -> Result<i32> {
    let g = &cli.global;
    match cli.command {
        Command::Run { out } => {
            let mut p = pipeline(g)?;
            let report = p.run()?;
            report.write(&out)?;
            log::info!("cache hits {}, misses {}", p.hits, p.misses);
            for s in &report.summary {
                println!("{:<24} {}", s.id, s.verdict.label());
            }
            println!("overall: {} (reports in {})", report.verdict.label(), out.display());
            Ok(report.exit_code)
        }
        Command::Check { id } => {
            let mut p = pipeline(g)?;
            let r = p.check(&id)?;
            print_json(&serde_json::to_value(&r)?);
            Ok(r.verdict.exit_code())
        }
        Command::Seq(cmd) => {
            let mut p = pipeline(g)?;
            let (sh, verify) = match cmd {
                SeqCommand::Generate(sh) => (sh, false),
                SeqCommand::Verify(sh) => (sh, true),
            };
            let (k1, k2) = shape_of(&p, sh);
            let v = p.get(&format!("seq/{k1},{k2}"))?;
            if !verify {
                print_json(&v);
                return Ok(0);
            }
            let certified = v["sop"]["certified"].as_bool().unwrap_or(false);
            let superficial = v["superficial"]["pass"].as_bool().unwrap_or(false);
            print_json(&serde_json::json!({
                "certified": certified,
                "superficial": v["superficial"],
                "rejected_seeds": v["rejected_seeds"],
            }));
            Ok(if certified && superficial { 0 } else { 3 })
        }
        Command::Hilbert(cmd) => {
            let mut p = pipeline(g)?;
            let id = match cmd {
                HilbertCommand::Table => "hilbert/table",
                HilbertCommand::Fit => "hilbert/fit",
            };
            print_json(&p.get(id)?);
            Ok(0)
        }
        Command::Complex(ComplexCommand::Homology(sh)) => {
            let mut p = pipeline(g)?;
            let (k1, k2) = shape_of(&p, sh);
            let v = p.get(&format!("complex/homology/{k1},{k2}"))?;
            let table: fclab_core::complex::HomologyTable = serde_json::from_value(v)?;
            for line in table.json_lines() {
                println!("{line}");
            }
            Ok(0)
        }
        Command::Fiber(cmd) => {
            let mut p = pipeline(g)?;
            let id = match cmd {
                FiberCommand::Series => "fiber/series",
                FiberCommand::Coefficients => "fiber/coefficients",
            };
            print_json(&p.get(id)?);
            Ok(0)
        }
        Command::Cache(cmd) => {
            let cache = ResultCache::open(&g.cache_dir)?;
            match cmd {
                CacheCommand::Gc { all } => {
                    let s = cache.gc(all)?;
                    println!("removed {}, kept {}", s.removed, s.kept);
                }
                CacheCommand::Verify => {
                    let m = mode(g.jobs);
                    let s = cache.verify(|e| recompute(e, m))?;
                    println!("{} entries, {} recomputed, all match", s.entries, s.recomputed);
                }
            }
            Ok(0)
        }
    }
}
