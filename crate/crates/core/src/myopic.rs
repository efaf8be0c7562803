//! Myopic conditioning of killed Brownian motion: segments conditioned to
//! survive 2^{-k} time units, concatenated into a path whose skeleton is the
//! Markov chain with kernel Q_k f = P^D f / P^D 1.

use crate::error::{Error, Result};
use crate::geometry::Domain;
use crate::rng::StreamKey;
use crate::trajectory::{PathKind, Trajectory, TrajectoryBuilder};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

#[derive(Debug, Clone, Copy)]
pub struct MyopicConfig {
    pub k: u32,
    /// Euler substeps per conditioning segment.
    pub substeps: u32,
    /// Brownian-bridge boundary-crossing correction between substeps. Only
    /// applied when the domain certifies exact boundary distances.
    pub bridge: bool,
    pub max_rejections: u64,
    pub horizon: f64,
    pub seed: u64,
}

impl MyopicConfig {
    pub fn new(k: u32) -> Self {
        Self { k, substeps: 16, bridge: true, max_rejections: 10_000, horizon: 1.0, seed: 0 }
    }

    /// Segment duration 2^{-k}.
    pub fn dt(&self) -> f64 {
        2f64.powi(-(self.k as i32))
    }
}

/// One killed-motion segment: positions at times i*dt/s for i = 0..=s while
/// alive; `survived` means every substep stayed in the domain (and every
/// bridge test passed when enabled).
#[derive(Debug, Clone)]
pub struct SegmentSample {
    pub positions: Vec<Vec<f64>>,
    pub survived: bool,
}

impl SegmentSample {
    pub fn endpoint(&self) -> &[f64] {
        self.positions.last().unwrap()
    }
}

/// Gaussian walk with per-substep variance dt/s per coordinate, killed on
/// leaving the domain; the bridge correction kills crossings between
/// substeps with probability exp(-2ab/delta).
pub fn sample_killed_segment<R: Rng>(
    domain: &Domain,
    x: &[f64],
    dt: f64,
    substeps: u32,
    bridge: bool,
    rng: &mut R,
) -> Result<SegmentSample> {
    if !domain.try_contains(x)? {
        return Err(Error::PointOutsideDomain(x.to_vec()));
    }
    assert!(dt > 0.0 && substeps >= 1);
    let use_bridge = bridge && domain.has_exact_distance();
    let delta = dt / substeps as f64;
    let sigma = delta.sqrt();
    let n = domain.dimension();

    let mut positions = Vec::with_capacity(substeps as usize + 1);
    positions.push(x.to_vec());
    let mut dist_cur = if use_bridge { domain.distance_to_boundary(x)? } else { 0.0 };

    for _ in 0..substeps {
        let cur = positions.last().unwrap();
        let mut next = Vec::with_capacity(n);
        for i in 0..n {
            let z: f64 = StandardNormal.sample(rng);
            next.push(cur[i] + sigma * z);
        }
        if !domain.contains(&next) {
            return Ok(SegmentSample { positions, survived: false });
        }
        if use_bridge {
            let dist_next = domain.distance_to_boundary(&next)?;
            let p_cross = (-2.0 * dist_cur * dist_next / delta).exp();
            if rng.gen::<f64>() < p_cross {
                return Ok(SegmentSample { positions, survived: false });
            }
            dist_cur = dist_next;
        }
        positions.push(next);
    }
    Ok(SegmentSample { positions, survived: true })
}

/// Exact rejection sampling of the conditioned segment; returns the accepted
/// segment and the number of attempts used.
pub fn sample_conditioned_segment<R: Rng>(
    domain: &Domain,
    x: &[f64],
    dt: f64,
    substeps: u32,
    bridge: bool,
    max_rejections: u64,
    rng: &mut R,
) -> Result<(SegmentSample, u64)> {
    for attempt in 1..=max_rejections {
        let seg = sample_killed_segment(domain, x, dt, substeps, bridge, rng)?;
        if seg.survived {
            return Ok((seg, attempt));
        }
    }
    Err(Error::RejectionBudgetExhausted { point: x.to_vec(), budget: max_rejections })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MyopicView {
    /// Record every substep position (continuous path, sub-sampled).
    FullPath,
    /// Record only the segment endpoints, linearly interpolated.
    Linear,
}

/// Concatenates floor(horizon * 2^k) conditioned segments from the start
/// point. The endpoint skeleton is the Q_k chain.
pub fn simulate_myopic(
    domain: &Domain,
    start: &[f64],
    config: &MyopicConfig,
    view: MyopicView,
    key: StreamKey,
) -> Result<Trajectory> {
    if !domain.try_contains(start)? {
        return Err(Error::PointOutsideDomain(start.to_vec()));
    }
    let dt = config.dt();
    let segments = (config.horizon * 2f64.powi(config.k as i32)).floor() as usize;
    let mut rng = key.rng();

    let per_segment = match view {
        MyopicView::Linear => 1,
        MyopicView::FullPath => config.substeps as usize,
    };
    let mut b = TrajectoryBuilder::new(domain.dimension(), segments * per_segment + 1);
    b.push(0.0, start);
    let mut cur = start.to_vec();
    for j in 0..segments {
        let (seg, _) = sample_conditioned_segment(
            domain,
            &cur,
            dt,
            config.substeps,
            config.bridge,
            config.max_rejections,
            &mut rng,
        )?;
        cur = seg.endpoint().to_vec();
        match view {
            MyopicView::Linear => b.push((j + 1) as f64 * dt, &cur),
            MyopicView::FullPath => {
                let delta = dt / config.substeps as f64;
                for (i, p) in seg.positions.iter().enumerate().skip(1) {
                    b.push(j as f64 * dt + i as f64 * delta, p);
                }
            }
        }
    }
    let kind = match view {
        MyopicView::Linear => PathKind::Linear,
        MyopicView::FullPath => PathKind::Subsampled,
    };
    Ok(b.finish(kind, 1.0))
}

#[derive(Debug, Clone, Serialize)]
pub struct SurvivalReport {
    pub x: Vec<f64>,
    pub dt: f64,
    pub p_hat: f64,
    pub stderr: f64,
    pub n: u64,
}

/// Monte Carlo estimate of P^D_dt 1(x) with binomial standard error.
pub fn estimate_survival(
    domain: &Domain,
    x: &[f64],
    dt: f64,
    n_samples: u64,
    substeps: u32,
    bridge: bool,
    key: StreamKey,
) -> Result<SurvivalReport> {
    let mut rng = key.rng();
    let mut survived = 0u64;
    for _ in 0..n_samples {
        if sample_killed_segment(domain, x, dt, substeps, bridge, &mut rng)?.survived {
            survived += 1;
        }
    }
    let p = survived as f64 / n_samples as f64;
    let stderr = (p * (1.0 - p) / n_samples as f64).sqrt();
    Ok(SurvivalReport { x: x.to_vec(), dt, p_hat: p, stderr, n: n_samples })
}

/// Draw from the myopic reversible measure m_k ~ 1_D P^D_{2^-k}1 dx by a
/// single-Bernoulli acceptance: uniform proposal in D, accepted exactly when
/// one killed segment survives.
pub fn sample_stationary_myopic<R: Rng>(
    domain: &Domain,
    dt: f64,
    substeps: u32,
    bridge: bool,
    rng: &mut R,
) -> Result<Vec<f64>> {
    const PROPOSAL_CAP: u64 = 10_000_000;
    for _ in 0..PROPOSAL_CAP {
        let x = domain.sample_bbox(rng);
        if !domain.contains(&x) {
            continue;
        }
        if sample_killed_segment(domain, &x, dt, substeps, bridge, rng)?.survived {
            return Ok(x);
        }
    }
    Err(Error::RejectionBudgetExhausted { point: domain.anchor().to_vec(), budget: PROPOSAL_CAP })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::killed_survival_interval;
    use crate::rng::Substream;

    fn interval() -> Domain {
        Domain::unit_interval()
    }

    #[test]
    fn tiny_dt_survives_deep_inside() {
        let d = Domain::ball(vec![0.0, 0.0], 1.0).unwrap();
        let mut rng = StreamKey::new(1, 0, Substream::Segment).rng();
        let mut ok = 0;
        for _ in 0..2000 {
            if sample_killed_segment(&d, &[0.0, 0.0], 1e-3, 16, true, &mut rng).unwrap().survived {
                ok += 1;
            }
        }
        // Eq.(5.2)-shaped bound: failure odds are astronomically small here
        assert_eq!(ok, 2000);
    }

    #[test]
    fn survival_matches_spectral_series() {
        let d = interval();
        let rep = estimate_survival(
            &d,
            &[0.5],
            0.1,
            100_000,
            16,
            true,
            StreamKey::new(2024, 0, Substream::Segment),
        )
        .unwrap();
        let reference = killed_survival_interval(0.1, 0.5, 64).unwrap();
        assert!((reference - 0.7723116).abs() < 1e-6);
        assert!(
            (rep.p_hat - reference).abs() < 3.0 * rep.stderr,
            "p_hat={} ref={} stderr={}",
            rep.p_hat,
            reference,
            rep.stderr
        );
    }

    #[test]
    fn huge_dt_dies() {
        let d = interval();
        let rep = estimate_survival(
            &d,
            &[0.5],
            50.0,
            2000,
            32,
            true,
            StreamKey::new(3, 0, Substream::Segment),
        )
        .unwrap();
        assert!(rep.p_hat < 0.01);
    }

    #[test]
    fn conditioned_segments_survive_and_count_attempts() {
        let d = interval();
        let mut rng = StreamKey::new(5, 0, Substream::Segment).rng();
        let mut attempts_total = 0u64;
        let trials = 4000;
        for _ in 0..trials {
            let (seg, attempts) =
                sample_conditioned_segment(&d, &[0.5], 0.1, 16, true, 10_000, &mut rng).unwrap();
            assert!(seg.survived);
            assert!(seg.positions.iter().all(|p| d.contains(p)));
            attempts_total += attempts;
        }
        // geometric mean-trials identity: 1/P ~ 1.295
        let mean = attempts_total as f64 / trials as f64;
        assert!((mean - 1.295).abs() < 0.05, "mean attempts {mean}");
    }

    #[test]
    fn conditioned_endpoint_symmetry() {
        // from the midpoint the endpoint law is symmetric about 1/2
        let d = interval();
        let mut rng = StreamKey::new(7, 0, Substream::Segment).rng();
        let mut below = 0u64;
        let trials = 20_000u64;
        for _ in 0..trials {
            let (seg, _) = sample_conditioned_segment(&d, &[0.5], 0.1, 16, true, 10_000, &mut rng).unwrap();
            if seg.endpoint()[0] < 0.5 {
                below += 1;
            }
        }
        let p = below as f64 / trials as f64;
        assert!((p - 0.5).abs() < 3.5 * 0.5 / (trials as f64).sqrt(), "p={p}");
    }

    #[test]
    fn constants_are_preserved() {
        // Q_k 1 = 1 holds by construction: endpoints exist and average of a
        // constant is the constant
        let d = interval();
        let mut rng = StreamKey::new(9, 0, Substream::Segment).rng();
        let mut sum = 0.0;
        for _ in 0..100 {
            let (seg, _) = sample_conditioned_segment(&d, &[0.3], 0.05, 8, true, 10_000, &mut rng).unwrap();
            let c = 2.5;
            sum += c + 0.0 * seg.endpoint()[0];
        }
        assert_eq!(sum, 250.0);
    }

    #[test]
    fn rejection_budget_error() {
        let d = interval();
        let mut rng = StreamKey::new(11, 0, Substream::Segment).rng();
        // a point glued to the boundary with a huge segment time cannot pass
        let res = sample_conditioned_segment(&d, &[1e-12], 2.0, 16, true, 16, &mut rng);
        assert!(matches!(res, Err(Error::RejectionBudgetExhausted { .. })));
    }

    #[test]
    fn myopic_paths_stay_in_domain() {
        let d = Domain::unit_disk();
        let mut cfg = MyopicConfig::new(5);
        cfg.horizon = 0.5;
        let traj = simulate_myopic(
            &d,
            &[0.2, -0.1],
            &cfg,
            MyopicView::FullPath,
            StreamKey::new(13, 0, Substream::Segment),
        )
        .unwrap();
        assert!(traj.positions().iter().all(|p| d.contains(p)));
        assert_eq!(traj.kind, PathKind::Subsampled);
        assert_eq!(traj.speed, 1.0);
        // linear view has exactly floor(T 2^k) + 1 records
        let lin = simulate_myopic(
            &d,
            &[0.2, -0.1],
            &cfg,
            MyopicView::Linear,
            StreamKey::new(13, 0, Substream::Segment),
        )
        .unwrap();
        assert_eq!(lin.len(), 16 + 1);
    }

    #[test]
    fn stationary_sampler_density_shape() {
        // interval, k=3: acceptance density ~ survival profile, chi^2 check
        let d = interval();
        let dt = 2f64.powi(-3);
        let mut rng = StreamKey::new(15, 0, Substream::Proposal).rng();
        let bins = 8;
        let mut counts = vec![0u64; bins];
        let trials = 40_000;
        for _ in 0..trials {
            let x = sample_stationary_myopic(&d, dt, 16, true, &mut rng).unwrap()[0];
            counts[((x * bins as f64) as usize).min(bins - 1)] += 1;
        }
        // expected masses from the spectral series by midpoint quadrature
        let sub = 64;
        let mut masses = vec![0.0; bins];
        for b in 0..bins {
            for i in 0..sub {
                let x = (b as f64 + (i as f64 + 0.5) / sub as f64) / bins as f64;
                masses[b] += killed_survival_interval(dt, x, 128).unwrap() / sub as f64;
            }
        }
        let total: f64 = masses.iter().sum();
        let mut chi2 = 0.0;
        for b in 0..bins {
            let expect = trials as f64 * masses[b] / total;
            let diff = counts[b] as f64 - expect;
            chi2 += diff * diff / expect;
        }
        // df = 7, 1% critical 18.48
        assert!(chi2 < 18.48, "chi2 = {chi2}");
    }
}
