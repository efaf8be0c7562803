//! Statistical functionals tying simulations to their reference values:
//! occupation measures, KS and chi-square comparisons, path oscillation,
//! spectral inequalities and Dirichlet-energy trends.

use crate::error::{Error, Result};
use crate::geometry::Domain;
use crate::kernel::KernelMatrix;
use crate::lattice::Lattice;
use crate::report::{Comparison, Report};
use crate::trajectory::{PathKind, Trajectory};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use std::collections::HashMap;
use std::hash::Hash;
use std::io::Write;

/// Axis-aligned grid of congruent cells covering a box.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub cells: Vec<usize>,
}

impl GridSpec {
    pub fn covering(domain: &Domain, cells_per_axis: usize) -> Self {
        let (lo, hi) = domain.bounding_box();
        Self {
            lo: lo.to_vec(),
            hi: hi.to_vec(),
            cells: vec![cells_per_axis; domain.dimension()],
        }
    }

    pub fn dimension(&self) -> usize {
        self.lo.len()
    }

    pub fn n_cells(&self) -> usize {
        self.cells.iter().product()
    }

    /// Row-major cell index; points outside the box return None, points on
    /// the top faces are clamped into the last cell.
    pub fn cell_index(&self, p: &[f64]) -> Option<usize> {
        let mut idx = 0usize;
        for i in 0..self.dimension() {
            if p[i] < self.lo[i] || p[i] > self.hi[i] {
                return None;
            }
            let w = (self.hi[i] - self.lo[i]) / self.cells[i] as f64;
            let c = (((p[i] - self.lo[i]) / w) as usize).min(self.cells[i] - 1);
            idx = idx * self.cells[i] + c;
        }
        Some(idx)
    }

    pub fn cell_bounds(&self, mut idx: usize) -> (Vec<f64>, Vec<f64>) {
        let n = self.dimension();
        let mut coords = vec![0usize; n];
        for i in (0..n).rev() {
            coords[i] = idx % self.cells[i];
            idx /= self.cells[i];
        }
        let mut lo = Vec::with_capacity(n);
        let mut hi = Vec::with_capacity(n);
        for i in 0..n {
            let w = (self.hi[i] - self.lo[i]) / self.cells[i] as f64;
            lo.push(self.lo[i] + coords[i] as f64 * w);
            hi.push(self.lo[i] + (coords[i] + 1) as f64 * w);
        }
        (lo, hi)
    }

    pub fn cell_center(&self, idx: usize) -> Vec<f64> {
        let (lo, hi) = self.cell_bounds(idx);
        lo.iter().zip(&hi).map(|(a, b)| (a + b) / 2.0).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeWeighting {
    /// Integrate occupation time (exact per linear piece, holding times for
    /// step paths).
    StepDuration,
    /// Count recorded positions (the skeleton occupation of the chain).
    VisitCount,
}

#[derive(Debug, Clone)]
pub struct OccupationHistogram {
    pub grid: GridSpec,
    pub mass: Vec<f64>,
    pub total: f64,
    pub speed: f64,
}

impl OccupationHistogram {
    pub fn normalized(&self) -> Vec<f64> {
        self.mass.iter().map(|&m| m / self.total).collect()
    }

    /// CSV "cell_index,center coords...,mass,density".
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        write!(w, "cell_index")?;
        for i in 0..self.grid.dimension() {
            write!(w, ",c{i}")?;
        }
        writeln!(w, ",mass,density")?;
        let cell_vol: f64 = {
            let (lo, hi) = self.grid.cell_bounds(0);
            lo.iter().zip(&hi).map(|(a, b)| b - a).product()
        };
        for (idx, &m) in self.mass.iter().enumerate() {
            write!(w, "{idx}")?;
            for c in self.grid.cell_center(idx) {
                write!(w, ",{c}")?;
            }
            writeln!(w, ",{m},{}", m / self.total / cell_vol)?;
        }
        Ok(())
    }
}

/// Accumulates occupation mass over a trajectory collection.
pub fn occupation_histogram(
    trajectories: &[Trajectory],
    grid: &GridSpec,
    weighting: TimeWeighting,
) -> Result<OccupationHistogram> {
    if trajectories.is_empty() {
        return Err(Error::EmptyInput("occupation histogram needs trajectories"));
    }
    let mut mass = vec![0.0; grid.n_cells()];
    let mut total = 0.0;
    let speed = trajectories[0].speed;
    for traj in trajectories {
        match weighting {
            TimeWeighting::VisitCount => {
                for p in traj.positions() {
                    if let Some(c) = grid.cell_index(p) {
                        mass[c] += 1.0;
                        total += 1.0;
                    }
                }
            }
            TimeWeighting::StepDuration => match traj.kind {
                PathKind::Step => {
                    let times = traj.times();
                    for i in 0..times.len() - 1 {
                        let dt = times[i + 1] - times[i];
                        if let Some(c) = grid.cell_index(traj.position(i)) {
                            mass[c] += dt;
                            total += dt;
                        }
                    }
                }
                PathKind::Linear | PathKind::Subsampled => {
                    let times = traj.times();
                    for i in 0..times.len() - 1 {
                        let dt = times[i + 1] - times[i];
                        total += integrate_segment(
                            grid,
                            traj.position(i),
                            traj.position(i + 1),
                            dt,
                            &mut mass,
                        );
                    }
                }
            },
        }
    }
    Ok(OccupationHistogram { grid: grid.clone(), mass, total, speed })
}

/// Exact chord integration of one linear piece across the grid.
fn integrate_segment(grid: &GridSpec, p0: &[f64], p1: &[f64], dt: f64, mass: &mut [f64]) -> f64 {
    let mut cuts = vec![0.0, 1.0];
    for i in 0..grid.dimension() {
        let w = (grid.hi[i] - grid.lo[i]) / grid.cells[i] as f64;
        let d = p1[i] - p0[i];
        if d == 0.0 {
            continue;
        }
        let (a, b) = if d > 0.0 { (p0[i], p1[i]) } else { (p1[i], p0[i]) };
        let first = ((a - grid.lo[i]) / w).ceil() as i64;
        let last = ((b - grid.lo[i]) / w).floor() as i64;
        for plane in first..=last {
            let x = grid.lo[i] + plane as f64 * w;
            let s = (x - p0[i]) / d;
            if s > 0.0 && s < 1.0 {
                cuts.push(s);
            }
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut added = 0.0;
    let mut mid = vec![0.0; grid.dimension()];
    for pair in cuts.windows(2) {
        let (s0, s1) = (pair[0], pair[1]);
        if s1 <= s0 {
            continue;
        }
        let sm = (s0 + s1) / 2.0;
        for (i, m) in mid.iter_mut().enumerate() {
            *m = p0[i] + sm * (p1[i] - p0[i]);
        }
        if let Some(c) = grid.cell_index(&mid) {
            let portion = (s1 - s0) * dt;
            mass[c] += portion;
            added += portion;
        }
    }
    added
}

/// Normalized Lebesgue cell masses |cell ∩ D| / |D| for domains with an
/// exact rule (boxes, 2-d balls, the comb, polygons).
pub fn lebesgue_cell_aggregate(domain: &Domain, grid: &GridSpec) -> Result<Vec<f64>> {
    let n = grid.n_cells();
    let mut mass = vec![0.0; n];
    for idx in 0..n {
        let (lo, hi) = grid.cell_bounds(idx);
        mass[idx] = cell_domain_mass(domain, &lo, &hi)?;
    }
    let total: f64 = mass.iter().sum();
    if total <= 0.0 {
        return Err(Error::BadConfig("domain has zero mass on the grid".into()));
    }
    for m in &mut mass {
        *m /= total;
    }
    Ok(mass)
}

fn cell_domain_mass(domain: &Domain, lo: &[f64], hi: &[f64]) -> Result<f64> {
    match domain.kind() {
        "box" => {
            let (dlo, dhi) = domain.bounding_box();
            let mut v = 1.0;
            for i in 0..lo.len() {
                v *= (hi[i].min(dhi[i]) - lo[i].max(dlo[i])).max(0.0);
            }
            Ok(v)
        }
        "ball" if domain.dimension() == 2 => {
            let (dlo, dhi) = domain.bounding_box();
            let cx = (dlo[0] + dhi[0]) / 2.0;
            let cy = (dlo[1] + dhi[1]) / 2.0;
            let r = (dhi[0] - dlo[0]) / 2.0;
            Ok(disk_cell_area(cx, cy, r, lo, hi))
        }
        "comb" => Ok(domain.comb_shape().unwrap().cell_mass(lo[0], hi[0], lo[1], hi[1])),
        "polygon" | "snowflake" => Ok(domain
            .polygon_shape()
            .unwrap()
            .clip_area_to_box([lo[0], lo[1]], [hi[0], hi[1]])),
        k => Err(Error::BadConfig(format!(
            "no exact cell aggregate for domain kind '{k}'"
        ))),
    }
}

/// Exact |cell ∩ disk|: split the x-range where the circle's upper/lower
/// arcs cross the cell's y-edges, then integrate each branch in closed form
/// with the circular-segment antiderivative.
fn disk_cell_area(cx: f64, cy: f64, r: f64, lo: &[f64], hi: &[f64]) -> f64 {
    let x0 = lo[0].max(cx - r);
    let x1 = hi[0].min(cx + r);
    if x1 <= x0 {
        return 0.0;
    }
    let mut cuts = vec![x0, x1];
    for y in [lo[1], hi[1]] {
        let d = r * r - (y - cy) * (y - cy);
        if d > 0.0 {
            for x in [cx - d.sqrt(), cx + d.sqrt()] {
                if x > x0 && x < x1 {
                    cuts.push(x);
                }
            }
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // antiderivative of sqrt(r^2 - (x-cx)^2)
    let seg = |x: f64| -> f64 {
        let u = (x - cx).clamp(-r, r);
        (u * (r * r - u * u).max(0.0).sqrt() + r * r * (u / r).asin()) / 2.0
    };
    let mut area = 0.0;
    for pair in cuts.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if b <= a {
            continue;
        }
        let xm = (a + b) / 2.0;
        let g = (r * r - (xm - cx) * (xm - cx)).max(0.0).sqrt();
        let (top_clipped, bot_clipped) = (cy + g > hi[1], cy - g < lo[1]);
        let upper = if top_clipped { hi[1] } else { f64::NAN };
        let lower = if bot_clipped { lo[1] } else { f64::NAN };
        // overlap height at xm decides whether this piece contributes
        let height = (if top_clipped { hi[1] } else { cy + g })
            - (if bot_clipped { lo[1] } else { cy - g });
        if height <= 0.0 {
            continue;
        }
        let mut piece = 0.0;
        match (top_clipped, bot_clipped) {
            (true, true) => piece += (upper - lower) * (b - a),
            (true, false) => piece += (upper - cy) * (b - a) + (seg(b) - seg(a)),
            (false, true) => piece += (cy - lower) * (b - a) + (seg(b) - seg(a)),
            (false, false) => piece += 2.0 * (seg(b) - seg(a)),
        }
        area += piece;
    }
    area
}

/// m_k cell aggregate of a lattice (normalized).
pub fn lattice_measure_aggregate(lattice: &Lattice, grid: &GridSpec) -> Vec<f64> {
    let mut mass = vec![0.0; grid.n_cells()];
    for v in 0..lattice.len() {
        if let Some(c) = grid.cell_index(&lattice.position(v)) {
            mass[c] += lattice.vertex_measure(v);
        }
    }
    let total: f64 = mass.iter().sum();
    for m in &mut mass {
        *m /= total;
    }
    mass
}

pub fn tv_distance(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

/// One-sample Kolmogorov-Smirnov statistic against a reference CDF.
/// Tied sample values are grouped so the empirical CDF is evaluated only at
/// genuine jumps.
pub fn ks_distance<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptyInput("KS needs samples"));
    }
    let mut xs = samples.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len() as f64;
    let mut d = 0.0f64;
    let mut i = 0usize;
    while i < xs.len() {
        let v = xs[i];
        let lo = i as f64 / n;
        while i < xs.len() && xs[i] == v {
            i += 1;
        }
        let hi = i as f64 / n;
        let f = cdf(v);
        d = d.max((f - lo).abs()).max((hi - f).abs());
    }
    Ok(d)
}

/// Two-sample Kolmogorov-Smirnov statistic, tie-aware: both samples advance
/// through a shared value before the CDF gap is measured.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyInput("KS needs samples on both sides"));
    }
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(|p, q| p.partial_cmp(q).unwrap());
    ys.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let (n, m) = (xs.len(), ys.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < n && j < m {
        let v = xs[i].min(ys[j]);
        while i < n && xs[i] == v {
            i += 1;
        }
        while j < m && ys[j] == v {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    Ok(d)
}

/// Asymptotic KS critical values: c(alpha) = sqrt(-ln(alpha/2)/2).
pub fn ks_critical_one_sample(alpha: f64, n: usize) -> f64 {
    (-(alpha / 2.0).ln() / 2.0).sqrt() / (n as f64).sqrt()
}

pub fn ks_critical_two_sample(alpha: f64, n: usize, m: usize) -> f64 {
    (-(alpha / 2.0).ln() / 2.0).sqrt() * ((n + m) as f64 / (n as f64 * m as f64)).sqrt()
}

/// Two-sample chi-square homogeneity over categorical counts.
pub fn chi2_homogeneity<K: Eq + Hash + Clone>(
    a: &HashMap<K, u64>,
    b: &HashMap<K, u64>,
) -> (f64, usize) {
    let mut seen: HashMap<K, ()> = HashMap::new();
    let mut cells = Vec::new();
    for k in a.keys().chain(b.keys()) {
        if seen.insert(k.clone(), ()).is_none() {
            cells.push(k.clone());
        }
    }
    let ta: u64 = a.values().sum();
    let tb: u64 = b.values().sum();
    let (ta, tb) = (ta as f64, tb as f64);
    let mut stat = 0.0;
    let mut used = 0usize;
    for k in &cells {
        let ca = *a.get(k).unwrap_or(&0) as f64;
        let cb = *b.get(k).unwrap_or(&0) as f64;
        let tot = ca + cb;
        if tot == 0.0 {
            continue;
        }
        used += 1;
        let ea = ta * tot / (ta + tb);
        let eb = tb * tot / (ta + tb);
        stat += (ca - ea) * (ca - ea) / ea + (cb - eb) * (cb - eb) / eb;
    }
    (stat, used.saturating_sub(1))
}

pub fn chi2_critical(dof: usize, alpha: f64) -> f64 {
    ChiSquared::new(dof as f64).unwrap().inverse_cdf(1.0 - alpha)
}

/// Oscillation osc_rho[s0,t0]: sup |path(s) - path(t)| over |s-t| <= rho
/// inside the window, computed over recorded breakpoints (exact for
/// piecewise-linear and step paths).
pub fn oscillation(traj: &Trajectory, rho: f64, s0: f64, t0: f64) -> Result<f64> {
    if !(rho > 0.0) || s0 < 0.0 || t0 <= s0 || t0 > traj.end_time() + 1e-12 {
        return Err(Error::BadConfig(format!("bad oscillation window [{s0},{t0}], rho={rho}")));
    }
    // candidate window starts: breakpoints and breakpoints shifted by rho
    let mut starts: Vec<f64> = vec![s0, (t0 - rho).max(s0)];
    for &t in traj.times() {
        if t >= s0 - rho && t <= t0 {
            starts.push(t.clamp(s0, t0));
            starts.push((t - rho).clamp(s0, t0));
        }
    }
    starts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    starts.dedup();
    let mut best = 0.0f64;
    for &u in &starts {
        let v = (u + rho).min(t0);
        if v <= u {
            continue;
        }
        best = best.max(window_diameter(traj, u, v));
    }
    Ok(best)
}

fn window_diameter(traj: &Trajectory, u: f64, v: f64) -> f64 {
    // attained values: window-edge evaluations plus interior breakpoints
    let mut pts: Vec<Vec<f64>> = vec![traj.value_at(u), traj.value_at(v)];
    for (t, p) in traj.times().iter().zip(traj.positions()) {
        if *t > u && *t < v {
            pts.push(p.to_vec());
        }
    }
    let mut d2max = 0.0f64;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d2: f64 = pts[i]
                .iter()
                .zip(&pts[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            d2max = d2max.max(d2);
        }
    }
    d2max.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralMode {
    /// (f - Q^{2j}f, f) <= j (f - Q^2 f, f) <= 2j (f - Q f, f)
    EvenChain,
    /// (f - Q^j f, f) <= j (f - Q f, f)
    AllPowers,
}

#[derive(Debug, Clone)]
pub struct SpectralOutcome {
    /// Worst raw defect (lhs - rhs) relative to (f,f)_m; negative is good.
    pub worst_rel_defect: f64,
    /// Worst defect beyond the allowed slack, relative; pass iff <= 0.
    pub worst_excess: f64,
    pub pass: bool,
}

/// Verifies the spectral contraction inequalities on a reversible kernel.
/// `mc_row_samples` widens the slack by 3x the propagated Monte Carlo error
/// when the kernel entries are themselves estimates; those kernels are
/// gated on the aggregate flux asymmetry instead of the max-entry defect,
/// which is extreme-value inflated under binomial noise.
pub fn spectral_inequality_check(
    kernel: &KernelMatrix,
    f: &[f64],
    j_max: u32,
    mode: SpectralMode,
    rel_tol: f64,
    reversibility_tol: f64,
    mc_row_samples: Option<u64>,
) -> Result<SpectralOutcome> {
    match mc_row_samples {
        None => kernel.certify_reversible(reversibility_tol)?,
        Some(_) => {
            let defect = kernel.balance_defect_l1();
            if defect > reversibility_tol {
                return Err(Error::NotReversible { defect });
            }
        }
    }
    let scale = kernel.inner(f, f).abs().max(1e-300);
    let qf = kernel.apply(f);
    let ip0 = kernel.inner(f, f);
    let e1 = ip0 - kernel.inner(&qf, f);
    let mc_sigma = mc_row_samples.map(|b| {
        let qf2 = kernel.apply(&f.iter().map(|&x| x * x).collect::<Vec<_>>());
        let m = kernel.measure();
        let var: f64 = (0..kernel.len())
            .map(|c| {
                let v = (qf2[c] - qf[c] * qf[c]).max(0.0) / b as f64;
                m[c] * m[c] * f[c] * f[c] * v
            })
            .sum();
        var.sqrt()
    });

    let step = match mode {
        SpectralMode::EvenChain => 2,
        SpectralMode::AllPowers => 1,
    };
    let mut worst_defect = f64::NEG_INFINITY;
    let mut worst_excess = f64::NEG_INFINITY;
    let mut cur = f.to_vec();
    // midpoint quantity for the even chain: (f - Q^2 f, f)
    let q2f = kernel.apply(&qf);
    let e2 = ip0 - kernel.inner(&q2f, f);
    for j in 1..=j_max {
        for _ in 0..step {
            cur = kernel.apply(&cur);
        }
        let lhs = ip0 - kernel.inner(&cur, f);
        let jf = j as f64;
        let slack_budget = match mc_sigma {
            Some(s) => 3.0 * jf * s + rel_tol * scale,
            None => rel_tol * scale,
        };
        let mut record = |defect: f64| {
            worst_defect = worst_defect.max(defect / scale);
            worst_excess = worst_excess.max((defect - slack_budget) / scale);
        };
        match mode {
            SpectralMode::AllPowers => record(lhs - jf * e1),
            SpectralMode::EvenChain => {
                // chain: (f - Q^{2j}f,f) <= j(f - Q^2 f,f) <= 2j(f - Qf,f)
                record(lhs - jf * e2);
                record(jf * e2 - 2.0 * jf * e1);
            }
        }
    }
    Ok(SpectralOutcome { worst_rel_defect: worst_defect, worst_excess, pass: worst_excess <= 0.0 })
}

/// Closed-form test functions for the energy trend.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestFunction {
    Coordinate(usize),
    CoordinateSum,
    Constant,
}

impl TestFunction {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "x1" => Ok(Self::Coordinate(0)),
            "x2" => Ok(Self::Coordinate(1)),
            "x1+x2" => Ok(Self::CoordinateSum),
            "const" => Ok(Self::Constant),
            other => Err(Error::UnknownStatistic(format!("test function '{other}'"))),
        }
    }

    pub fn value(&self, p: &[f64]) -> f64 {
        match self {
            Self::Coordinate(i) => p[*i],
            Self::CoordinateSum => p.iter().sum(),
            Self::Constant => 1.0,
        }
    }

    pub fn grad_norm_sq(&self, dim: usize) -> f64 {
        match self {
            Self::Coordinate(_) => 1.0,
            Self::CoordinateSum => dim as f64,
            Self::Constant => 0.0,
        }
    }
}

/// Dirichlet energies E^k along a level list against the limit
/// (1/2n) \int_D |grad f|^2 dx, judged at the final level.
pub fn energy_trend(
    domain: &Domain,
    f: TestFunction,
    k_list: &[u32],
    tolerance: f64,
) -> Result<(Report, Vec<(u32, f64)>)> {
    let (area, err) = domain.area(0, 0);
    if err != 0.0 {
        return Err(Error::BadConfig("energy trend needs an exact-area domain".into()));
    }
    let n = domain.dimension() as f64;
    let target = f.grad_norm_sq(domain.dimension()) * area / (2.0 * n);
    let mut series = Vec::with_capacity(k_list.len());
    for &k in k_list {
        let lat = Lattice::build(domain, k)?;
        let fv = lat.vertex_function(|p| f.value(p));
        series.push((k, lat.dirichlet_energy(&fv)));
    }
    let last = series.last().ok_or(Error::EmptyInput("energy trend needs levels"))?;
    let report = Report::evaluate(
        "dirichlet-energy-trend",
        last.1,
        None,
        target,
        "energy form limit",
        tolerance,
        Comparison::AbsoluteDifference,
        Some(1.0 / n),
        serde_json::json!({ "k_list": k_list, "series": series.iter().map(|&(k, e)| serde_json::json!({"k": k, "energy": e})).collect::<Vec<_>>() }),
    );
    Ok((report, series))
}

/// Extract one coordinate of every trajectory at unit-speed time t.
pub fn marginal_samples(trajs: &[Trajectory], t: f64, coord: usize) -> Vec<f64> {
    trajs.iter().map(|tr| tr.unit_speed_value_at(t)[coord]).collect()
}

/// Cross-scheme marginal comparison at unit-speed time t: coordinate-wise
/// two-sample KS below the alpha critical value after speed rescaling.
pub fn compare_schemes(
    a: &[Trajectory],
    b: &[Trajectory],
    t: f64,
    alpha: f64,
    config: serde_json::Value,
) -> Result<Report> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyInput("comparison needs trajectories on both sides"));
    }
    if !(a[0].speed > 0.0) || !(b[0].speed > 0.0) {
        return Err(Error::BadConfig("missing speed tag".into()));
    }
    let dim = a[0].dimension();
    let critical = ks_critical_two_sample(alpha, a.len(), b.len());
    let mut worst = 0.0f64;
    for coord in 0..dim {
        let xs = marginal_samples(a, t, coord);
        let ys = marginal_samples(b, t, coord);
        worst = worst.max(ks_two_sample(&xs, &ys)?);
    }
    Ok(Report::evaluate(
        "cross-scheme-marginal",
        worst,
        None,
        0.0,
        "two-sample KS null",
        critical,
        Comparison::AtMost,
        Some(1.0),
        config,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{StreamKey, Substream};
    use rand::Rng;

    #[test]
    fn grid_indexing_round_trip() {
        let g = GridSpec { lo: vec![0.0, 0.0], hi: vec![1.0, 1.0], cells: vec![4, 4] };
        assert_eq!(g.n_cells(), 16);
        for idx in 0..16 {
            let c = g.cell_center(idx);
            assert_eq!(g.cell_index(&c), Some(idx));
        }
        assert_eq!(g.cell_index(&[1.0, 1.0]), Some(15));
        assert_eq!(g.cell_index(&[1.1, 0.5]), None);
    }

    #[test]
    fn constant_trajectory_single_cell() {
        let g = GridSpec { lo: vec![0.0], hi: vec![1.0], cells: vec![8] };
        let t = Trajectory::new(
            vec![0.0, 1.0, 2.0],
            vec![vec![0.33]; 3],
            PathKind::Linear,
            1.0,
        );
        let h = occupation_histogram(&[t], &g, TimeWeighting::StepDuration).unwrap();
        assert!((h.total - 2.0).abs() < 1e-12);
        assert!((h.mass[2] - 2.0).abs() < 1e-12);
        assert_eq!(h.mass.iter().filter(|&&m| m > 0.0).count(), 1);
    }

    #[test]
    fn linear_segment_split_exactly() {
        let g = GridSpec { lo: vec![0.0], hi: vec![1.0], cells: vec![2] };
        let t = Trajectory::new(
            vec![0.0, 1.0],
            vec![vec![0.25], vec![0.75]],
            PathKind::Linear,
            1.0,
        );
        let h = occupation_histogram(&[t], &g, TimeWeighting::StepDuration).unwrap();
        assert!((h.mass[0] - 0.5).abs() < 1e-12);
        assert!((h.mass[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn mass_conservation_matches_total_time() {
        let g = GridSpec { lo: vec![0.0, 0.0], hi: vec![1.0, 1.0], cells: vec![8, 8] };
        let mut rng = StreamKey::new(3, 1, Substream::Generic(1)).rng();
        let mut times = vec![0.0];
        let mut pos = vec![vec![0.5, 0.5]];
        for i in 1..200 {
            times.push(i as f64 * 0.01);
            pos.push(vec![rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)]);
        }
        let t = Trajectory::new(times, pos, PathKind::Linear, 1.0);
        let h = occupation_histogram(&[t], &g, TimeWeighting::StepDuration).unwrap();
        assert!((h.mass.iter().sum::<f64>() - h.total).abs() < 1e-9);
        assert!((h.total - 1.99).abs() < 1e-9);
    }

    #[test]
    fn ks_self_test_calibration() {
        // uniform samples against the uniform CDF: the 1% critical value
        // should be exceeded rarely
        let n = 10_000;
        let mut fails = 0;
        let runs = 200;
        for s in 0..runs {
            let mut rng = StreamKey::new(77, s, Substream::Generic(0)).rng();
            let xs: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
            let d = ks_distance(&xs, |x| x.clamp(0.0, 1.0)).unwrap();
            if d > ks_critical_one_sample(0.01, n) {
                fails += 1;
            }
        }
        // expect about 2 failures in 200; allow a wide binomial band
        assert!(fails <= 8, "{fails} of {runs} runs exceeded the critical value");
    }

    #[test]
    fn ks_shifted_uniform_distance() {
        let n = 200_000usize;
        let shift = 0.125;
        let xs: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64 * (1.0 - shift) + shift).collect();
        let d = ks_distance(&xs, |x| x.clamp(0.0, 1.0)).unwrap();
        assert!((d - shift).abs() < 1e-2, "d = {d}");
    }

    #[test]
    fn ks_two_sample_identical_is_zero() {
        let xs = vec![0.1, 0.4, 0.9];
        assert_eq!(ks_two_sample(&xs, &xs).unwrap(), 0.0);
    }

    #[test]
    fn ks_handles_ties() {
        // heavily tied atomic samples with the same law: distance stays 0
        let xs = vec![0.25, 0.25, 0.25, 0.25, 0.75, 0.75, 0.75, 0.75];
        let ys = vec![0.25, 0.25, 0.75, 0.75];
        assert_eq!(ks_two_sample(&xs, &ys).unwrap(), 0.0);
        // degenerate point mass against its own CDF step
        let d = ks_distance(&vec![0.5; 10], |x| if x < 0.5 { 0.0 } else { 1.0 }).unwrap();
        assert_eq!(d, 0.0);
        // one-sample with ties: half the mass at one atom
        let d = ks_distance(&[0.2, 0.5, 0.5, 0.8], |x| x.clamp(0.0, 1.0)).unwrap();
        assert!((d - 0.3).abs() < 1e-12, "d = {d}");
    }

    #[test]
    fn oscillation_examples() {
        // constant path
        let c = Trajectory::new(vec![0.0, 1.0], vec![vec![2.0], vec![2.0]], PathKind::Linear, 1.0);
        assert_eq!(oscillation(&c, 0.1, 0.0, 1.0).unwrap(), 0.0);
        // unit ramp: osc_rho = rho
        let r = Trajectory::new(vec![0.0, 1.0], vec![vec![0.0], vec![1.0]], PathKind::Linear, 1.0);
        let o = oscillation(&r, 0.1, 0.0, 1.0).unwrap();
        assert!((o - 0.1).abs() < 1e-12, "o = {o}");
        // one jump of size h dominates for any rho
        let s = Trajectory::new(
            vec![0.0, 0.6, 1.0],
            vec![vec![0.0], vec![0.7], vec![0.7]],
            PathKind::Step,
            1.0,
        );
        let o = oscillation(&s, 0.05, 0.0, 1.0).unwrap();
        assert!((o - 0.7).abs() < 1e-12, "o = {o}");
    }

    #[test]
    fn oscillation_monotone_in_rho() {
        let mut rng = StreamKey::new(5, 2, Substream::Generic(2)).rng();
        let times: Vec<f64> = (0..100).map(|i| i as f64 / 99.0).collect();
        let pos: Vec<Vec<f64>> = (0..100).map(|_| vec![rng.gen::<f64>()]).collect();
        let t = Trajectory::new(times, pos, PathKind::Linear, 1.0);
        let mut prev = 0.0;
        for i in 1..=10 {
            let o = oscillation(&t, i as f64 * 0.05, 0.0, 1.0).unwrap();
            assert!(o >= prev - 1e-12);
            prev = o;
        }
    }

    #[test]
    fn chi2_helpers() {
        let mut a = HashMap::new();
        let mut b = HashMap::new();
        a.insert(0u32, 50u64);
        a.insert(1, 50);
        b.insert(0, 50);
        b.insert(1, 50);
        let (stat, dof) = chi2_homogeneity(&a, &b);
        assert_eq!(dof, 1);
        assert!(stat < 1e-12);
        assert!((chi2_critical(1, 0.01) - 6.6349).abs() < 1e-3);
    }

    #[test]
    fn energy_trend_unit_square() {
        let d = Domain::unit_square();
        let (report, series) = energy_trend(&d, TestFunction::Coordinate(0), &[3, 4, 5, 6, 7], 0.006).unwrap();
        assert!(report.pass, "{}", report.verdict_line());
        for (k, e) in series {
            let m = 2f64.powi(k as i32);
            let expect = 0.25 * (m - 2.0) * (m - 1.0) / (m * m);
            assert!((e - expect).abs() < 1e-12);
        }
        // additivity over coordinates: target 1/2 for x1+x2
        let (r2, _) = energy_trend(&d, TestFunction::CoordinateSum, &[7], 0.012).unwrap();
        assert!((r2.reference - 0.5).abs() < 1e-15);
        assert!(r2.pass);
        let (r3, _) = energy_trend(&d, TestFunction::Constant, &[4], 1e-15).unwrap();
        assert_eq!(r3.value, 0.0);
        assert!(r3.pass);
    }

    #[test]
    fn disk_cell_area_total() {
        let g = GridSpec { lo: vec![-1.0, -1.0], hi: vec![1.0, 1.0], cells: vec![8, 8] };
        let d = Domain::unit_disk();
        let agg = lebesgue_cell_aggregate(&d, &g).unwrap();
        assert!((agg.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        // unnormalized total equals pi exactly (closed-form pieces)
        let mut total = 0.0;
        for idx in 0..g.n_cells() {
            let (lo, hi) = g.cell_bounds(idx);
            total += cell_domain_mass(&d, &lo, &hi).unwrap();
        }
        assert!((total - std::f64::consts::PI).abs() < 1e-12, "total {total}");
        // an interior cell is all disk: exact cell area
        let idx = g.cell_index(&[0.1, 0.1]).unwrap();
        let (lo, hi) = g.cell_bounds(idx);
        assert!((cell_domain_mass(&d, &lo, &hi).unwrap() - 0.0625).abs() < 1e-15);
        // a far corner cell misses the disk entirely
        let idx = g.cell_index(&[-0.9, -0.9]).unwrap();
        let (lo, hi) = g.cell_bounds(idx);
        let corner = cell_domain_mass(&d, &lo, &hi).unwrap();
        // cell [-1,-0.75]^2: nearest point (-0.75,-0.75) has norm > 1
        assert_eq!(corner, 0.0);
    }

    #[test]
    fn comb_aggregate_matches_frozen_tv() {
        // 16x16 aggregate of the default comb vs uniform: frozen 0.3257
        let d = Domain::comb(crate::geometry::CombSchedule::default_with_levels(8)).unwrap();
        let g = GridSpec { lo: vec![0.0, 0.0], hi: vec![1.0, 1.0], cells: vec![16, 16] };
        let agg = lebesgue_cell_aggregate(&d, &g).unwrap();
        let unif = vec![1.0 / 256.0; 256];
        let tv = tv_distance(&agg, &unif);
        assert!((tv - 0.3257).abs() < 2e-3, "tv = {tv}");
    }
}
