//! Discrete- and continuous-time simple random walks on the lattice, and the
//! compensated covariation functional of the coordinate martingales.

use crate::lattice::Lattice;
use crate::rng::{StreamKey, Substream};
use crate::trajectory::{PathKind, Trajectory, TrajectoryBuilder};
use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::Serialize;

/// A realized walk: vertex ids at steps j = 0..=steps, one jump every 2^{-2k}.
#[derive(Debug, Clone)]
pub struct ChainPath {
    pub k: u32,
    pub vertices: Vec<usize>,
    pub seed: StreamKey,
}

impl ChainPath {
    pub fn time_step(&self) -> f64 {
        2f64.powi(-2 * self.k as i32)
    }

    pub fn horizon(&self) -> f64 {
        (self.vertices.len() - 1) as f64 * self.time_step()
    }

    pub fn steps(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Chain CSV "step,vertex_id".
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "step,vertex_id")?;
        for (i, v) in self.vertices.iter().enumerate() {
            writeln!(w, "{i},{v}")?;
        }
        Ok(())
    }
}

/// Number of jumps within horizon T at level k: floor(T * 2^{2k}).
pub fn step_count(k: u32, horizon: f64) -> usize {
    (horizon * 2f64.powi(2 * k as i32)).floor() as usize
}

/// Simple random walk: i.i.d. uniform neighbor choices, reproducible by key.
pub fn simulate_discrete_walk(
    lattice: &Lattice,
    start: usize,
    horizon: f64,
    key: StreamKey,
) -> ChainPath {
    assert!(horizon > 0.0);
    let steps = step_count(lattice.k, horizon);
    let mut rng = key.rng();
    let mut vertices = Vec::with_capacity(steps + 1);
    let mut cur = start;
    vertices.push(cur);
    for _ in 0..steps {
        let nb = lattice.neighbors(cur);
        cur = nb[rng.gen_range(0..nb.len())];
        vertices.push(cur);
    }
    ChainPath { k: lattice.k, vertices, seed: key }
}

/// Extend the chain to real time by linear interpolation or as the
/// right-continuous step process Y^k_t = X^k_{[2^{2k}t] 2^{-2k}}.
pub fn interpolate(lattice: &Lattice, chain: &ChainPath, kind: PathKind) -> Trajectory {
    let dt = chain.time_step();
    let mut b = TrajectoryBuilder::new(lattice.dimension, chain.vertices.len());
    for (j, &v) in chain.vertices.iter().enumerate() {
        b.push(j as f64 * dt, &lattice.position(v));
    }
    let n = lattice.dimension as f64;
    b.finish(kind, 1.0 / n)
}

/// Continuous-time walk: per-neighbor jump rate 2^{2k}/(2n), so an interior
/// vertex holds for mean time 2^{-2k}; the embedded jump chain is the simple
/// walk. Records jump times and positions as a step path.
pub fn simulate_ctrw(
    lattice: &Lattice,
    start: usize,
    horizon: f64,
    key: StreamKey,
) -> Trajectory {
    assert!(horizon > 0.0);
    let n = lattice.dimension as f64;
    let rate_per_neighbor = 2f64.powi(2 * lattice.k as i32) / (2.0 * n);
    let mut rng = key.rng();
    let mut t = 0.0;
    let mut cur = start;
    let mut b = TrajectoryBuilder::new(lattice.dimension, 16);
    b.push(0.0, &lattice.position(cur));
    loop {
        let deg = lattice.degree(cur) as f64;
        let e: f64 = Exp1.sample(&mut rng);
        t += e / (deg * rate_per_neighbor);
        if t >= horizon {
            break;
        }
        let nb = lattice.neighbors(cur);
        cur = nb[rng.gen_range(0..nb.len())];
        b.push(t, &lattice.position(cur));
    }
    // freeze the last holding period at the horizon
    if b.last_time().unwrap() < horizon {
        b.push(horizon, &lattice.position(cur));
    }
    b.finish(PathKind::Step, 1.0 / n)
}

/// Realized covariation matrix of the compensated coordinate increments up
/// to time t, per Lemma-style bracket: sum over steps of
/// (dY_i - L_k x_i)(dY_j - L_k x_j).
pub fn covariation(lattice: &Lattice, chain: &ChainPath, t: f64) -> crate::error::Result<Vec<Vec<f64>>> {
    let steps = (t / chain.time_step()).floor() as usize;
    if steps > chain.steps() {
        return Err(crate::error::Error::TimeOutOfRange { t, horizon: chain.horizon() });
    }
    let n = lattice.dimension;
    let h = lattice.spacing();
    let mut acc = vec![vec![0.0; n]; n];
    for l in 1..=steps {
        let prev = chain.vertices[l - 1];
        let cur = chain.vertices[l];
        let drift = lattice.coordinate_drift(prev);
        let mut inc = vec![0.0; n];
        for i in 0..n {
            let d = (lattice.int_coords(cur)[i] - lattice.int_coords(prev)[i]) as f64 * h;
            inc[i] = d - drift[i];
        }
        for i in 0..n {
            for j in 0..n {
                acc[i][j] += inc[i] * inc[j];
            }
        }
    }
    Ok(acc)
}

/// Ensemble covariation with target delta_ij t/n and per-entry standard
/// errors of the mean.
#[derive(Debug, Clone, Serialize)]
pub struct CovariationReport {
    pub t: f64,
    pub matrix: Vec<Vec<f64>>,
    pub target: Vec<Vec<f64>>,
    pub stderr: Vec<Vec<f64>>,
    pub n_paths: usize,
}

pub fn covariation_ensemble(
    lattice: &Lattice,
    chains: &[ChainPath],
    t: f64,
) -> crate::error::Result<CovariationReport> {
    let n = lattice.dimension;
    let mut mean = vec![vec![0.0; n]; n];
    let mut m2 = vec![vec![0.0; n]; n];
    let mut count = 0.0;
    for chain in chains {
        let c = covariation(lattice, chain, t)?;
        count += 1.0;
        for i in 0..n {
            for j in 0..n {
                let delta = c[i][j] - mean[i][j];
                mean[i][j] += delta / count;
                m2[i][j] += delta * (c[i][j] - mean[i][j]);
            }
        }
    }
    let n_paths = chains.len();
    let mut stderr = vec![vec![0.0; n]; n];
    let mut target = vec![vec![0.0; n]; n];
    for i in 0..n {
        target[i][i] = t / n as f64;
        for j in 0..n {
            if n_paths > 1 {
                stderr[i][j] = (m2[i][j] / (count - 1.0) / count).sqrt();
            }
        }
    }
    Ok(CovariationReport { t, matrix: mean, target, stderr, n_paths })
}

/// Convenience: stationary-start key-indexed walk batch.
pub fn stationary_walks(
    lattice: &Lattice,
    n_paths: usize,
    horizon: f64,
    master_seed: u64,
) -> Vec<ChainPath> {
    (0..n_paths)
        .map(|p| {
            let mut srng = StreamKey::new(master_seed, p as u64, Substream::Proposal).rng();
            let start = lattice.sample_stationary_vertex(&mut srng);
            simulate_discrete_walk(
                lattice,
                start,
                horizon,
                StreamKey::new(master_seed, p as u64, Substream::Walk),
            )
        })
        .collect()
}
