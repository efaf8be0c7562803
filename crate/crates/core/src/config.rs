//! Run configuration: TOML files with the top-level keys
//! domain, scheme, k, horizon, paths, start, seed, workers, output
//! (plus the myopic knobs substeps / bridge), and the batch runner that
//! turns a configuration into trajectories deterministically.

use crate::error::{Error, Result};
use crate::geometry::{CombSchedule, Domain, DomainDescriptor};
use crate::lattice::Lattice;
use crate::myopic::{simulate_myopic, MyopicConfig, MyopicView};
use crate::rng::{StreamKey, Substream};
use crate::trajectory::{PathKind, Trajectory};
use crate::walk::{interpolate, simulate_ctrw, simulate_discrete_walk, ChainPath};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

pub const OUTPUT_DIR_ENV: &str = "RBM_OUTPUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    WalkDiscrete,
    WalkStep,
    WalkCt,
    MyopicFull,
    MyopicLinear,
}

impl Scheme {
    pub fn is_lattice(self) -> bool {
        matches!(self, Scheme::WalkDiscrete | Scheme::WalkStep | Scheme::WalkCt)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum StartMode {
    Fixed { point: Vec<f64> },
    Stationary,
}

/// Domain field: a shorthand name or an inline descriptor table.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum DomainField {
    Name(String),
    Inline(DomainDescriptor),
}

impl DomainField {
    pub fn resolve(&self) -> Result<Domain> {
        match self {
            DomainField::Inline(desc) => Domain::from_descriptor(desc),
            DomainField::Name(name) => named_domain(name),
        }
    }
}

pub fn named_domain(name: &str) -> Result<Domain> {
    if let Some(depth) = name.strip_prefix("snowflake:") {
        let d = depth
            .parse()
            .map_err(|_| Error::BadConfig(format!("bad snowflake depth '{depth}'")))?;
        return Domain::snowflake(d);
    }
    if let Some(levels) = name.strip_prefix("comb:") {
        let k = levels
            .parse()
            .map_err(|_| Error::BadConfig(format!("bad comb level count '{levels}'")))?;
        return Domain::comb(CombSchedule::default_with_levels(k));
    }
    match name {
        "unit-interval" => Ok(Domain::unit_interval()),
        "unit-square" => Ok(Domain::unit_square()),
        "unit-disk" => Ok(Domain::unit_disk()),
        "lshape" => Ok(Domain::lshape()),
        "comb" => Domain::comb(CombSchedule::default_with_levels(8)),
        other => Err(Error::BadConfig(format!("unknown domain name '{other}'"))),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunConfig {
    pub domain: DomainField,
    pub scheme: Scheme,
    pub k: u32,
    pub horizon: f64,
    pub paths: usize,
    pub start: StartMode,
    pub seed: u64,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default = "default_substeps")]
    pub substeps: u32,
    #[serde(default = "default_bridge")]
    pub bridge: bool,
}

fn default_workers() -> usize {
    1
}
fn default_substeps() -> u32 {
    16
}
fn default_bridge() -> bool {
    true
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            toml::from_str(text).map_err(|e| Error::BadConfig(format!("config parse: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_toml_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.paths == 0 {
            return Err(Error::BadConfig("paths must be at least 1".into()));
        }
        if !(self.horizon > 0.0) {
            return Err(Error::BadConfig("horizon must be positive".into()));
        }
        if self.k == 0 {
            return Err(Error::BadConfig("level k must be at least 1".into()));
        }
        if let StartMode::Fixed { point } = &self.start {
            let domain = self.domain.resolve()?;
            if !domain.try_contains(point)? {
                return Err(Error::BadConfig(format!("start point {point:?} is outside the domain")));
            }
        }
        Ok(())
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output
            .clone()
            .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("rbm-out"))
    }

    pub fn myopic_config(&self) -> MyopicConfig {
        MyopicConfig {
            k: self.k,
            substeps: self.substeps,
            bridge: self.bridge,
            max_rejections: 10_000,
            horizon: self.horizon,
            seed: self.seed,
        }
    }
}

pub struct SimulationOutput {
    pub trajectories: Vec<Trajectory>,
    /// Vertex chains for the discrete lattice schemes.
    pub chains: Option<Vec<ChainPath>>,
}

/// Simulates `paths` independent paths. Path p draws only from streams keyed
/// by (seed, p), so outputs are identical at any worker count.
pub fn run_simulation(cfg: &RunConfig) -> Result<SimulationOutput> {
    cfg.validate()?;
    let domain = cfg.domain.resolve()?;
    match cfg.scheme {
        Scheme::WalkDiscrete | Scheme::WalkStep => {
            let lattice = Lattice::build(&domain, cfg.k)?;
            let start_vertex = resolve_lattice_start(&lattice, cfg)?;
            let kind = if cfg.scheme == Scheme::WalkDiscrete {
                PathKind::Linear
            } else {
                PathKind::Step
            };
            let chains = parallel_paths(cfg, |p| {
                let v = match start_vertex {
                    Some(v) => v,
                    None => {
                        let mut rng = StreamKey::new(cfg.seed, p, Substream::Proposal).rng();
                        lattice.sample_stationary_vertex(&mut rng)
                    }
                };
                Ok(simulate_discrete_walk(
                    &lattice,
                    v,
                    cfg.horizon,
                    StreamKey::new(cfg.seed, p, Substream::Walk),
                ))
            })?;
            let trajectories =
                chains.iter().map(|c| interpolate(&lattice, c, kind)).collect();
            Ok(SimulationOutput { trajectories, chains: Some(chains) })
        }
        Scheme::WalkCt => {
            let lattice = Lattice::build(&domain, cfg.k)?;
            let start_vertex = resolve_lattice_start(&lattice, cfg)?;
            let trajectories = parallel_paths(cfg, |p| {
                let v = match start_vertex {
                    Some(v) => v,
                    None => {
                        let mut rng = StreamKey::new(cfg.seed, p, Substream::Proposal).rng();
                        lattice.sample_stationary_vertex(&mut rng)
                    }
                };
                Ok(simulate_ctrw(
                    &lattice,
                    v,
                    cfg.horizon,
                    StreamKey::new(cfg.seed, p, Substream::Holding),
                ))
            })?;
            Ok(SimulationOutput { trajectories, chains: None })
        }
        Scheme::MyopicFull | Scheme::MyopicLinear => {
            let view = if cfg.scheme == Scheme::MyopicFull {
                MyopicView::FullPath
            } else {
                MyopicView::Linear
            };
            let mcfg = cfg.myopic_config();
            let trajectories = parallel_paths(cfg, |p| {
                let start = match &cfg.start {
                    StartMode::Fixed { point } => point.clone(),
                    StartMode::Stationary => {
                        let mut rng = StreamKey::new(cfg.seed, p, Substream::Proposal).rng();
                        crate::myopic::sample_stationary_myopic(
                            &domain,
                            mcfg.dt(),
                            mcfg.substeps,
                            mcfg.bridge,
                            &mut rng,
                        )?
                    }
                };
                simulate_myopic(
                    &domain,
                    &start,
                    &mcfg,
                    view,
                    StreamKey::new(cfg.seed, p, Substream::Segment),
                )
            })?;
            Ok(SimulationOutput { trajectories, chains: None })
        }
    }
}

fn resolve_lattice_start(lattice: &Lattice, cfg: &RunConfig) -> Result<Option<usize>> {
    match &cfg.start {
        StartMode::Stationary => Ok(None),
        StartMode::Fixed { point } => lattice
            .nearest_vertex(point)
            .map(Some)
            .ok_or_else(|| Error::BadConfig(format!("no lattice vertex near {point:?}"))),
    }
}

fn parallel_paths<T: Send, F>(cfg: &RunConfig, job: F) -> Result<Vec<T>>
where
    F: Fn(u64) -> Result<T> + Sync,
{
    if cfg.workers <= 1 {
        (0..cfg.paths as u64).map(&job).collect()
    } else {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| Error::BadConfig(format!("worker pool: {e}")))?;
        pool.install(|| (0..cfg.paths as u64).into_par_iter().map(&job).collect())
    }
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub config: RunConfig,
    pub seed_derivation: String,
    pub files: Vec<String>,
}

/// Writes per-path trajectory CSVs (and chain CSVs for the discrete walks)
/// plus a provenance manifest; returns the manifest.
pub fn write_simulation(cfg: &RunConfig, out: &SimulationOutput, dir: &Path) -> Result<Manifest> {
    std::fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    for (i, traj) in out.trajectories.iter().enumerate() {
        let name = format!("traj_{i:05}.csv");
        let mut buf = Vec::new();
        traj.write_csv(&mut buf)?;
        std::fs::write(dir.join(&name), buf)?;
        files.push(name);
    }
    if let Some(chains) = &out.chains {
        for (i, chain) in chains.iter().enumerate() {
            let name = format!("chain_{i:05}.csv");
            let mut buf = Vec::new();
            chain.write_csv(&mut buf)?;
            std::fs::write(dir.join(&name), buf)?;
            files.push(name);
        }
    }
    let manifest = Manifest {
        config: cfg.clone(),
        seed_derivation:
            "per-path ChaCha12 streams keyed by splitmix64(master seed, path index, substream label)"
                .to_string(),
        files,
    };
    let json = serde_json::to_string_pretty(&manifest)?;
    std::fs::write(dir.join("manifest.json"), json)?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"
domain = "unit-square"
scheme = "walk-discrete"
k = 3
horizon = 0.5
paths = 4
seed = 42
workers = 1

[start]
mode = "stationary"
"#;

    #[test]
    fn toml_round_trip() {
        let cfg = RunConfig::from_toml_str(EXAMPLE).unwrap();
        assert_eq!(cfg.k, 3);
        assert_eq!(cfg.scheme, Scheme::WalkDiscrete);
        assert_eq!(cfg.substeps, 16);
        assert!(cfg.bridge);
    }

    #[test]
    fn inline_domain_table() {
        let text = r#"
scheme = "myopic-linear"
k = 4
horizon = 0.25
paths = 2
seed = 7

[domain]
kind = "ball"
dimension = 2
anchor = [0.0, 0.0]

[domain.parameters]
center = [0.0, 0.0]
radius = 1.0

[start]
mode = "fixed"
point = [0.2, 0.1]
"#;
        let cfg = RunConfig::from_toml_str(text).unwrap();
        let d = cfg.domain.resolve().unwrap();
        assert_eq!(d.kind(), "ball");
        let out = run_simulation(&cfg).unwrap();
        assert_eq!(out.trajectories.len(), 2);
    }

    #[test]
    fn zero_paths_rejected() {
        let text = EXAMPLE.replace("paths = 4", "paths = 0");
        assert!(RunConfig::from_toml_str(&text).is_err());
    }

    #[test]
    fn outside_start_rejected() {
        let text = EXAMPLE.replace(
            "[start]\nmode = \"stationary\"",
            "[start]\nmode = \"fixed\"\npoint = [2.0, 2.0]",
        );
        assert!(RunConfig::from_toml_str(&text).is_err());
    }

    #[test]
    fn determinism_across_workers() {
        let mut cfg = RunConfig::from_toml_str(EXAMPLE).unwrap();
        let a = run_simulation(&cfg).unwrap();
        cfg.workers = 8;
        let b = run_simulation(&cfg).unwrap();
        for (x, y) in a.trajectories.iter().zip(&b.trajectories) {
            assert_eq!(x, y);
        }
        let (ca, cb) = (a.chains.unwrap(), b.chains.unwrap());
        for (x, y) in ca.iter().zip(&cb) {
            assert_eq!(x.vertices, y.vertices);
        }
    }

    #[test]
    fn rerun_is_bit_identical_on_disk() {
        let tmp = tempfile::tempdir().unwrap();
        let cfg = RunConfig::from_toml_str(EXAMPLE).unwrap();
        let out1 = run_simulation(&cfg).unwrap();
        let m1 = write_simulation(&cfg, &out1, &tmp.path().join("a")).unwrap();
        let out2 = run_simulation(&cfg).unwrap();
        write_simulation(&cfg, &out2, &tmp.path().join("b")).unwrap();
        for f in &m1.files {
            let x = std::fs::read(tmp.path().join("a").join(f)).unwrap();
            let y = std::fs::read(tmp.path().join("b").join(f)).unwrap();
            assert_eq!(x, y, "file {f} differs between reruns");
        }
    }
}
