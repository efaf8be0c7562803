//! Command-line harness: lattice export, batch simulation, estimators,
//! cross-scheme comparison and the acceptance suites.
//!
//! Exit codes: 0 success, 1 criterion failure, 2 usage or configuration
//! error.

use clap::{Args, Parser, Subcommand};
use rbm_core::config::{
    named_domain, run_simulation, write_simulation, DomainField, RunConfig, Scheme, StartMode,
};
use rbm_core::error::Error;
use rbm_core::geometry::{Domain, DomainDescriptor};
use rbm_core::lattice::Lattice;
use rbm_core::oracle::{killed_survival_interval, reflected_cdf_1d};
use rbm_core::report::{Comparison, Report};
use rbm_core::rng::{StreamKey, Substream};
use rbm_core::stats::{
    compare_schemes, energy_trend, ks_distance, lebesgue_cell_aggregate, occupation_histogram,
    spectral_inequality_check, tv_distance, GridSpec, SpectralMode, TestFunction, TimeWeighting,
};
use rbm_core::walk::covariation_ensemble;
use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "rbm", version, about = "Discrete approximations to reflected Brownian motion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ConfigArgs {
    /// TOML run configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Domain name (unit-interval, unit-square, unit-disk, lshape, comb,
    /// comb:<levels>, snowflake:<depth>) or a path to a descriptor JSON.
    #[arg(long)]
    domain: Option<String>,
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    horizon: Option<f64>,
    #[arg(long)]
    paths: Option<usize>,
    /// Fixed start point, comma-separated; omit for the stationary start.
    #[arg(long)]
    start: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    substeps: Option<u32>,
    #[arg(long)]
    bridge: Option<bool>,
}

#[derive(Subcommand)]
enum Command {
    /// Build the level-k lattice and export vertex/edge CSVs.
    Lattice(ConfigArgs),
    /// Simulate trajectories and write them with a provenance manifest.
    Simulate(ConfigArgs),
    /// Run a named estimator against a fresh simulation.
    Estimate {
        #[command(flatten)]
        config: ConfigArgs,
        /// Statistic spec, e.g. "covariation t=1", "energy-trend f=x1 k=3..7",
        /// "spectral j<=32", "survival x=0.5 dt=0.1 n=100000",
        /// "occupation cells=8", "ks-reflected t=0.2 x0=0.3".
        #[arg(long)]
        statistic: String,
    },
    /// Compare lattice-walk and myopic marginals at matched speeds.
    Compare {
        #[command(flatten)]
        config: ConfigArgs,
        /// Unit-speed comparison time.
        #[arg(long, default_value_t = 0.15)]
        t: f64,
        /// Lattice level (walk side).
        #[arg(long, default_value_t = 7)]
        lattice_k: u32,
        /// Myopic level.
        #[arg(long, default_value_t = 14)]
        myopic_k: u32,
    },
    /// Run an acceptance suite (default: all).
    Accept {
        /// Suite name; see `accept --list`.
        suite: Option<String>,
        #[arg(long)]
        list: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> rbm_core::Result<ExitCode> {
    match cli.command {
        Command::Lattice(args) => cmd_lattice(&args),
        Command::Simulate(args) => cmd_simulate(&args),
        Command::Estimate { config, statistic } => cmd_estimate(&config, &statistic),
        Command::Compare { config, t, lattice_k, myopic_k } => {
            cmd_compare(&config, t, lattice_k, myopic_k)
        }
        Command::Accept { suite, list } => cmd_accept(suite.as_deref(), list),
    }
}

fn resolve_domain_arg(text: &str) -> rbm_core::Result<Domain> {
    let path = std::path::Path::new(text);
    if path.extension().map_or(false, |e| e == "json") && path.exists() {
        let desc: DomainDescriptor = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        return Domain::from_descriptor(&desc);
    }
    named_domain(text)
}

fn build_config(args: &ConfigArgs) -> rbm_core::Result<RunConfig> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::from_toml_file(path)?,
        None => RunConfig {
            domain: DomainField::Name("unit-square".into()),
            scheme: Scheme::WalkDiscrete,
            k: 4,
            horizon: 1.0,
            paths: 1,
            start: StartMode::Stationary,
            seed: 0,
            workers: 1,
            output: None,
            substeps: 16,
            bridge: true,
        },
    };
    if let Some(domain) = &args.domain {
        // keep names as names so manifests stay readable
        let d = resolve_domain_arg(domain)?;
        cfg.domain = if domain.ends_with(".json") {
            DomainField::Inline(d.descriptor())
        } else {
            DomainField::Name(domain.clone())
        };
    }
    if let Some(scheme) = &args.scheme {
        cfg.scheme = match scheme.as_str() {
            "walk-discrete" => Scheme::WalkDiscrete,
            "walk-step" => Scheme::WalkStep,
            "walk-ct" => Scheme::WalkCt,
            "myopic-full" => Scheme::MyopicFull,
            "myopic-linear" => Scheme::MyopicLinear,
            other => return Err(Error::BadConfig(format!("unknown scheme '{other}'"))),
        };
    }
    if let Some(k) = args.k {
        cfg.k = k;
    }
    if let Some(h) = args.horizon {
        cfg.horizon = h;
    }
    if let Some(p) = args.paths {
        cfg.paths = p;
    }
    if let Some(s) = &args.start {
        let point = s
            .split(',')
            .map(|x| x.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::BadConfig(format!("bad start point '{s}': {e}")))?;
        cfg.start = StartMode::Fixed { point };
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(w) = args.workers {
        cfg.workers = w;
    }
    if args.output.is_some() {
        cfg.output = args.output.clone();
    }
    if let Some(s) = args.substeps {
        cfg.substeps = s;
    }
    if let Some(b) = args.bridge {
        cfg.bridge = b;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn cmd_lattice(args: &ConfigArgs) -> rbm_core::Result<ExitCode> {
    let cfg = build_config(args)?;
    let domain = cfg.domain.resolve()?;
    let lattice = Lattice::build(&domain, cfg.k)?;
    let dir = cfg.output_dir();
    std::fs::create_dir_all(&dir)?;
    let mut v = Vec::new();
    lattice.write_vertices_csv(&mut v)?;
    std::fs::write(dir.join("lattice_vertices.csv"), v)?;
    let mut e = Vec::new();
    lattice.write_edges_csv(&mut e)?;
    std::fs::write(dir.join("lattice_edges.csv"), e)?;
    println!(
        "{} vertices, {} edges, mass {}, non-interior mass fraction {:.6}",
        lattice.len(),
        lattice.edge_count(),
        lattice.vertex_measure_total(),
        lattice.non_interior_mass_fraction()
    );
    println!("wrote {}", dir.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_simulate(args: &ConfigArgs) -> rbm_core::Result<ExitCode> {
    let cfg = build_config(args)?;
    let out = run_simulation(&cfg)?;
    let dir = cfg.output_dir();
    let manifest = write_simulation(&cfg, &out, &dir)?;
    println!("wrote {} files to {}", manifest.files.len() + 1, dir.display());
    Ok(ExitCode::SUCCESS)
}

fn parse_spec(statistic: &str) -> (String, HashMap<String, String>) {
    let mut parts = statistic.split_whitespace();
    let name = parts.next().unwrap_or_default().to_string();
    let mut kv = HashMap::new();
    for p in parts {
        if let Some((k, v)) = p.split_once("<=") {
            kv.insert(k.to_string(), v.to_string());
        } else if let Some((k, v)) = p.split_once('=') {
            kv.insert(k.to_string(), v.to_string());
        }
    }
    (name, kv)
}

fn kv_f64(kv: &HashMap<String, String>, key: &str, default: f64) -> rbm_core::Result<f64> {
    match kv.get(key) {
        None => Ok(default),
        Some(v) => v
            .parse()
            .map_err(|e| Error::BadConfig(format!("bad value for {key}: {e}"))),
    }
}

fn cmd_estimate(args: &ConfigArgs, statistic: &str) -> rbm_core::Result<ExitCode> {
    let cfg = build_config(args)?;
    let (name, kv) = parse_spec(statistic);
    let report = match name.as_str() {
        "covariation" => {
            let t = kv_f64(&kv, "t", 1.0)?;
            let domain = cfg.domain.resolve()?;
            let lattice = Lattice::build(&domain, cfg.k)?;
            let chains = rbm_core::walk::stationary_walks(&lattice, cfg.paths, cfg.horizon, cfg.seed);
            let rep = covariation_ensemble(&lattice, &chains, t)?;
            println!("{}", serde_json::to_string_pretty(&rep)?);
            return Ok(ExitCode::SUCCESS);
        }
        "energy-trend" => {
            let f = TestFunction::parse(kv.get("f").map(String::as_str).unwrap_or("x1"))?;
            let k_list = parse_k_range(kv.get("k").map(String::as_str).unwrap_or("3..7"))?;
            let domain = cfg.domain.resolve()?;
            let (rep, _) = energy_trend(&domain, f, &k_list, kv_f64(&kv, "tol", 0.006)?)?;
            rep
        }
        "spectral" => {
            let j_max = kv_f64(&kv, "j", 32.0)? as u32;
            let domain = cfg.domain.resolve()?;
            let lattice = Lattice::build(&domain, cfg.k)?;
            let kernel = lattice.transition_matrix()?;
            let mut rng = StreamKey::new(cfg.seed, 0, Substream::Generic(7)).rng();
            use rand::Rng;
            let mut worst = f64::NEG_INFINITY;
            for _ in 0..32 {
                let f: Vec<f64> = (0..kernel.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
                for mode in [SpectralMode::EvenChain, SpectralMode::AllPowers] {
                    let out = spectral_inequality_check(&kernel, &f, j_max, mode, 1e-9, 1e-12, None)?;
                    worst = worst.max(out.worst_excess);
                }
            }
            Report::evaluate(
                "spectral",
                worst,
                None,
                0.0,
                "operator contraction chains",
                0.0,
                Comparison::AtMost,
                None,
                serde_json::json!({"k": cfg.k, "j_max": j_max, "seed": cfg.seed}),
            )
        }
        "survival" => {
            let x = kv_f64(&kv, "x", 0.5)?;
            let dt = kv_f64(&kv, "dt", 0.1)?;
            let n = kv_f64(&kv, "n", 100_000.0)? as u64;
            let domain = cfg.domain.resolve()?;
            let rep = rbm_core::myopic::estimate_survival(
                &domain,
                &[x],
                dt,
                n,
                cfg.substeps,
                cfg.bridge,
                StreamKey::new(cfg.seed, 0, Substream::Segment),
            )?;
            let reference = killed_survival_interval(dt, x, 64)?;
            Report::evaluate(
                "survival",
                rep.p_hat,
                Some(rep.stderr),
                reference,
                "killed spectral series",
                3.0 * rep.stderr,
                Comparison::AbsoluteDifference,
                Some(1.0),
                serde_json::to_value(&rep)?,
            )
        }
        "occupation" => {
            let cells = kv_f64(&kv, "cells", 8.0)? as usize;
            let domain = cfg.domain.resolve()?;
            let out = run_simulation(&cfg)?;
            let grid = GridSpec::covering(&domain, cells);
            let hist = occupation_histogram(&out.trajectories, &grid, TimeWeighting::VisitCount)?;
            let dir = cfg.output_dir();
            std::fs::create_dir_all(&dir)?;
            let mut buf = Vec::new();
            hist.write_csv(&mut buf)?;
            std::fs::write(dir.join("occupation.csv"), buf)?;
            let target = lebesgue_cell_aggregate(&domain, &grid)?;
            Report::evaluate(
                "occupation-tv",
                tv_distance(&hist.normalized(), &target),
                None,
                0.0,
                "normalized Lebesgue cell aggregate",
                kv_f64(&kv, "tol", 0.05)?,
                Comparison::AtMost,
                Some(out.trajectories[0].speed),
                serde_json::json!({"cells": cells, "paths": cfg.paths, "horizon": cfg.horizon}),
            )
        }
        "ks-reflected" => {
            let t = kv_f64(&kv, "t", 0.2)?;
            let x0 = kv_f64(&kv, "x0", 0.3)?;
            let out = run_simulation(&cfg)?;
            let samples: Vec<f64> = out.trajectories.iter().map(|tr| tr.value_at(t)[0]).collect();
            let d = ks_distance(&samples, |y| reflected_cdf_1d(t, x0, y, 1.0, 20).unwrap())?;
            Report::evaluate(
                "ks-reflected",
                d,
                None,
                0.0,
                "image-method reflected CDF",
                kv_f64(&kv, "tol", 0.025)?,
                Comparison::AtMost,
                Some(1.0),
                serde_json::json!({"t": t, "x0": x0, "paths": cfg.paths, "k": cfg.k}),
            )
        }
        other => return Err(Error::UnknownStatistic(other.to_string())),
    };
    println!("{}", report.to_json_line());
    Ok(if report.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn parse_k_range(s: &str) -> rbm_core::Result<Vec<u32>> {
    if let Some((a, b)) = s.split_once("..") {
        let a: u32 = a.parse().map_err(|_| Error::BadConfig(format!("bad k range '{s}'")))?;
        let b: u32 = b.parse().map_err(|_| Error::BadConfig(format!("bad k range '{s}'")))?;
        Ok((a..=b).collect())
    } else {
        Ok(vec![s.parse().map_err(|_| Error::BadConfig(format!("bad k '{s}'")))?])
    }
}

fn cmd_compare(args: &ConfigArgs, t: f64, lattice_k: u32, myopic_k: u32) -> rbm_core::Result<ExitCode> {
    let base = build_config(args)?;
    let mut lattice_cfg = base.clone();
    lattice_cfg.scheme = Scheme::WalkDiscrete;
    lattice_cfg.k = lattice_k;
    let domain = base.domain.resolve()?;
    lattice_cfg.horizon = domain.dimension() as f64 * t;
    let mut myopic_cfg = base.clone();
    myopic_cfg.scheme = Scheme::MyopicLinear;
    myopic_cfg.k = myopic_k;
    myopic_cfg.horizon = t;
    myopic_cfg.seed = base.seed + 1;
    let a = run_simulation(&lattice_cfg)?;
    let b = run_simulation(&myopic_cfg)?;
    let report = compare_schemes(
        &a.trajectories,
        &b.trajectories,
        t,
        0.01,
        serde_json::json!({"t": t, "lattice_k": lattice_k, "myopic_k": myopic_k, "paths": base.paths, "seed": base.seed}),
    )?;
    println!("{}", report.to_json_line());
    Ok(if report.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_accept(suite: Option<&str>, list: bool) -> rbm_core::Result<ExitCode> {
    if list {
        for name in rbm_core::accept::suite_names() {
            println!("{name}");
        }
        return Ok(ExitCode::SUCCESS);
    }
    let name = suite.unwrap_or("all");
    let reports = rbm_core::accept::run_suite(name)?;
    let mut all_pass = true;
    for r in &reports {
        println!("{}", r.verdict_line());
        all_pass &= r.pass;
    }
    println!(
        "{}: {} of {} criteria passed",
        if all_pass { "OK" } else { "FAILED" },
        reports.iter().filter(|r| r.pass).count(),
        reports.len()
    );
    Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
