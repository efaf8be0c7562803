//! Time-ordered path records with an interpolation tag. Coordinates are
//! stored flat (dimension-strided) so long paths stay compact.

use crate::error::{Error, Result};
use std::io::Write;

/// How the recorded samples extend to a path on the whole time interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathKind {
    /// Continuous piecewise-linear between records.
    Linear,
    /// Right-continuous piecewise-constant, jumps at the record times.
    Step,
    /// Continuous path recorded at sub-sample times (evaluated linearly).
    Subsampled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    coords: Vec<f64>,
    dim: usize,
    pub kind: PathKind,
    /// Time-speed tag: the path approximates reflected Brownian motion run
    /// at this speed (1 for the myopic scheme, 1/n for lattice walks).
    pub speed: f64,
}

/// Incremental construction without per-record allocations.
pub struct TrajectoryBuilder {
    times: Vec<f64>,
    coords: Vec<f64>,
    dim: usize,
}

impl TrajectoryBuilder {
    pub fn new(dim: usize, capacity: usize) -> Self {
        Self {
            times: Vec::with_capacity(capacity),
            coords: Vec::with_capacity(capacity * dim),
            dim,
        }
    }

    pub fn push(&mut self, t: f64, position: &[f64]) {
        debug_assert_eq!(position.len(), self.dim);
        self.times.push(t);
        self.coords.extend_from_slice(position);
    }

    pub fn last_time(&self) -> Option<f64> {
        self.times.last().copied()
    }

    pub fn finish(self, kind: PathKind, speed: f64) -> Trajectory {
        Trajectory::from_flat(self.times, self.coords, self.dim, kind, speed)
    }
}

impl Trajectory {
    pub fn from_flat(times: Vec<f64>, coords: Vec<f64>, dim: usize, kind: PathKind, speed: f64) -> Self {
        assert!(dim > 0 && !times.is_empty(), "empty trajectory");
        assert_eq!(coords.len(), times.len() * dim);
        assert!(times[0] == 0.0, "trajectories start at time 0");
        assert!(
            times.windows(2).all(|w| w[0] < w[1]),
            "times must be strictly increasing"
        );
        Self { times, coords, dim, kind, speed }
    }

    pub fn new(times: Vec<f64>, positions: Vec<Vec<f64>>, kind: PathKind, speed: f64) -> Self {
        let dim = positions.first().map(|p| p.len()).unwrap_or(0);
        let mut coords = Vec::with_capacity(positions.len() * dim);
        for p in &positions {
            assert_eq!(p.len(), dim);
            coords.extend_from_slice(p);
        }
        Self::from_flat(times, coords, dim, kind, speed)
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn position(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn positions(&self) -> std::slice::ChunksExact<'_, f64> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn end_time(&self) -> f64 {
        *self.times.last().unwrap()
    }

    /// Path value at time t (clamped to the recorded span).
    pub fn value_at(&self, t: f64) -> Vec<f64> {
        if t <= 0.0 {
            return self.position(0).to_vec();
        }
        if t >= self.end_time() {
            return self.position(self.len() - 1).to_vec();
        }
        // index of last record time <= t
        let i = self.times.partition_point(|&u| u <= t) - 1;
        match self.kind {
            PathKind::Step => self.position(i).to_vec(),
            PathKind::Linear | PathKind::Subsampled => {
                if self.times[i] == t {
                    return self.position(i).to_vec();
                }
                let (t0, t1) = (self.times[i], self.times[i + 1]);
                let lam = (t - t0) / (t1 - t0);
                self.position(i)
                    .iter()
                    .zip(self.position(i + 1))
                    .map(|(&a, &b)| a + lam * (b - a))
                    .collect()
            }
        }
    }

    /// Marginal at unit-speed time t: the path is read at t / speed,
    /// undoing the scheme's time normalization.
    pub fn unit_speed_value_at(&self, t: f64) -> Vec<f64> {
        self.value_at(t / self.speed)
    }

    /// CSV with header "t,x1,...,xn".
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        write!(w, "t")?;
        for i in 1..=self.dim {
            write!(w, ",x{i}")?;
        }
        writeln!(w)?;
        for (t, p) in self.times.iter().zip(self.positions()) {
            write!(w, "{t}")?;
            for x in p {
                write!(w, ",{x}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    /// Time reversal r_T: s -> path((T - s)-), frozen at the start value
    /// after T. The trajectory must cover [0, T].
    pub fn time_reverse(&self, t_end: f64) -> Result<Trajectory> {
        if self.end_time() + 1e-12 < t_end {
            return Err(Error::TimeOutOfRange { t: t_end, horizon: self.end_time() });
        }
        match self.kind {
            PathKind::Linear | PathKind::Subsampled => {
                // continuous path: left limits coincide with values
                let mut b = TrajectoryBuilder::new(self.dim, self.len() + 1);
                if self.end_time() > t_end {
                    b.push(0.0, &self.value_at(t_end));
                }
                for i in (0..self.len()).rev() {
                    let t = self.times[i];
                    if t > t_end {
                        continue;
                    }
                    let s = t_end - t;
                    if b.last_time().map_or(false, |l| s <= l) {
                        continue;
                    }
                    b.push(s, self.position(i));
                }
                Ok(b.finish(self.kind, self.speed))
            }
            PathKind::Step => {
                // value on [T - t_{i+1}, T - t_i) is the pre-jump value v_i
                let mut b = TrajectoryBuilder::new(self.dim, self.len() + 1);
                b.push(0.0, &self.value_just_before(t_end));
                for i in (1..self.times.len()).rev() {
                    let u = self.times[i];
                    if u >= t_end || u <= 0.0 {
                        continue;
                    }
                    b.push(t_end - u, self.position(i - 1));
                }
                // freeze at the original start value from time T onward
                if b.last_time().unwrap() < t_end {
                    b.push(t_end, self.position(0));
                }
                Ok(b.finish(PathKind::Step, self.speed))
            }
        }
    }

    fn value_just_before(&self, t: f64) -> Vec<f64> {
        match self.kind {
            PathKind::Step => {
                let i = self.times.partition_point(|&u| u < t);
                self.position(i.saturating_sub(1)).to_vec()
            }
            _ => self.value_at(t),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lin(times: Vec<f64>, xs: Vec<f64>) -> Trajectory {
        let pos = xs.into_iter().map(|x| vec![x]).collect();
        Trajectory::new(times, pos, PathKind::Linear, 1.0)
    }

    #[test]
    fn linear_midpoint_is_mean() {
        let t = lin(vec![0.0, 1.0], vec![0.0, 2.0]);
        assert_eq!(t.value_at(0.5), vec![1.0]);
    }

    #[test]
    fn step_right_continuity() {
        let t = Trajectory::new(
            vec![0.0, 0.25, 0.5],
            vec![vec![0.0], vec![1.0], vec![3.0]],
            PathKind::Step,
            1.0,
        );
        assert_eq!(t.value_at(0.25), vec![1.0]);
        assert_eq!(t.value_at(0.249), vec![0.0]);
        assert_eq!(t.value_at(0.4), vec![1.0]);
    }

    #[test]
    fn double_reversal_identity_on_dyadic_times() {
        let t = lin(vec![0.0, 0.25, 0.5, 0.75, 1.0], vec![0.1, 0.3, 0.2, 0.6, 0.4]);
        let r = t.time_reverse(1.0).unwrap();
        let rr = r.time_reverse(1.0).unwrap();
        assert_eq!(t, rr);
    }

    #[test]
    fn step_reversal_jumps_at_t_minus_u() {
        // single jump at u=0.25 from a to b, frozen through the horizon 1
        let t = Trajectory::new(
            vec![0.0, 0.25, 1.0],
            vec![vec![1.0], vec![2.0], vec![2.0]],
            PathKind::Step,
            1.0,
        );
        let r = t.time_reverse(1.0).unwrap();
        // reversed: value 2 (left limit at 1) until 0.75, then 1
        assert_eq!(r.value_at(0.0), vec![2.0]);
        assert_eq!(r.value_at(0.74), vec![2.0]);
        assert_eq!(r.value_at(0.75), vec![1.0]);
        assert_eq!(r.value_at(0.99), vec![1.0]);
    }

    #[test]
    fn constant_chain_constant_path() {
        let t = Trajectory::new(
            vec![0.0, 0.5, 1.0],
            vec![vec![0.2, 0.3]; 3],
            PathKind::Linear,
            0.5,
        );
        assert_eq!(t.value_at(0.7), vec![0.2, 0.3]);
    }

    #[test]
    fn builder_matches_vec_constructor() {
        let mut b = TrajectoryBuilder::new(2, 3);
        b.push(0.0, &[0.1, 0.2]);
        b.push(0.5, &[0.3, 0.4]);
        let t1 = b.finish(PathKind::Linear, 1.0);
        let t2 = Trajectory::new(
            vec![0.0, 0.5],
            vec![vec![0.1, 0.2], vec![0.3, 0.4]],
            PathKind::Linear,
            1.0,
        );
        assert_eq!(t1, t2);
    }
}
