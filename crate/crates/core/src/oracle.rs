//! Independent reference values: image-method reflected densities, spectral
//! killed-survival series, matrix-power chain laws, and a discretized myopic
//! kernel for spectral tests.

use crate::error::{Error, Result};
use crate::geometry::Domain;
use crate::kernel::KernelMatrix;
use crate::myopic::sample_killed_segment;
use crate::rng::{StreamKey, Substream};
use std::f64::consts::PI;

fn gauss_pdf(x: f64, var: f64) -> f64 {
    (-x * x / (2.0 * var)).exp() / (2.0 * PI * var).sqrt()
}

fn gauss_cdf(x: f64, var: f64) -> f64 {
    0.5 * (1.0 + statrs::function::erf::erf(x / (2.0 * var).sqrt()))
}

/// Transition density of reflected Brownian motion on [lo,hi] by the method
/// of images; `speed` is the variance multiplier per unit time (1 for the
/// generator Delta/2, 1/n for the lattice normalization).
pub fn reflected_density_interval(
    t: f64,
    x0: f64,
    y: f64,
    lo: f64,
    hi: f64,
    speed: f64,
    terms: i64,
) -> Result<f64> {
    if t <= 0.0 {
        return Err(Error::BadConfig(format!("time {t} must be positive")));
    }
    let len = hi - lo;
    let var = speed * t;
    let mut dens = 0.0;
    for m in -terms..=terms {
        let shift = 2.0 * m as f64 * len;
        dens += gauss_pdf(y - x0 + shift, var);
        dens += gauss_pdf(y - (2.0 * lo - x0) + shift, var);
    }
    Ok(dens)
}

/// Reflected density on [0,1].
pub fn reflected_density_1d(t: f64, x0: f64, y: f64, speed: f64, terms: i64) -> Result<f64> {
    reflected_density_interval(t, x0, y, 0.0, 1.0, speed, terms)
}

/// CDF companion of `reflected_density_interval`, used by KS comparisons.
pub fn reflected_cdf_interval(
    t: f64,
    x0: f64,
    y: f64,
    lo: f64,
    hi: f64,
    speed: f64,
    terms: i64,
) -> Result<f64> {
    if t <= 0.0 {
        return Err(Error::BadConfig(format!("time {t} must be positive")));
    }
    let len = hi - lo;
    let var = speed * t;
    let mut acc = 0.0;
    for m in -terms..=terms {
        let shift = 2.0 * m as f64 * len;
        acc += gauss_cdf(y - x0 + shift, var) - gauss_cdf(lo - x0 + shift, var);
        let mirror = 2.0 * lo - x0;
        acc += gauss_cdf(y - mirror + shift, var) - gauss_cdf(lo - mirror + shift, var);
    }
    Ok(acc.clamp(0.0, 1.0))
}

pub fn reflected_cdf_1d(t: f64, x0: f64, y: f64, speed: f64, terms: i64) -> Result<f64> {
    reflected_cdf_interval(t, x0, y, 0.0, 1.0, speed, terms)
}

/// Product reflected density on an axis box (coordinates reflect
/// independently).
pub fn reflected_density_box(
    t: f64,
    x0: &[f64],
    y: &[f64],
    lo: &[f64],
    hi: &[f64],
    speed: f64,
    terms: i64,
) -> Result<f64> {
    if x0.len() != y.len() || x0.len() != lo.len() || lo.len() != hi.len() {
        return Err(Error::DimensionMismatch { expected: x0.len(), got: y.len() });
    }
    let mut dens = 1.0;
    for i in 0..x0.len() {
        dens *= reflected_density_interval(t, x0[i], y[i], lo[i], hi[i], speed, terms)?;
    }
    Ok(dens)
}

/// Killed-Brownian survival on (0,1) for standard Brownian motion:
/// P^D_t 1(x) = sum over odd j of (4/(j pi)) sin(j pi x) exp(-j^2 pi^2 t / 2).
pub fn killed_survival_interval(t: f64, x: f64, terms: u32) -> Result<f64> {
    if !(0.0 < x && x < 1.0) {
        return Err(Error::PointOutsideDomain(vec![x]));
    }
    if t <= 0.0 {
        return Err(Error::BadConfig(format!("time {t} must be positive")));
    }
    let mut s = 0.0;
    let mut j = 1u32;
    while j <= terms {
        let jf = j as f64;
        s += 4.0 / (jf * PI) * (jf * PI * x).sin() * (-jf * jf * PI * PI * t / 2.0).exp();
        j += 2;
    }
    Ok(s.clamp(0.0, 1.0))
}

/// Killed transition density on (0,1): p^D(t,x,y) = sum 2 sin sin e^{-..}.
pub fn killed_density_interval(t: f64, x: f64, y: f64, terms: u32) -> f64 {
    let mut s = 0.0;
    for j in 1..=terms {
        let jf = j as f64;
        s += 2.0 * (jf * PI * x).sin() * (jf * PI * y).sin() * (-jf * jf * PI * PI * t / 2.0).exp();
    }
    s.max(0.0)
}

/// Brute-force chain law: initial measure pushed through j kernel steps.
pub fn chain_marginal(kernel: &KernelMatrix, initial: &[f64], steps: u32) -> Result<Vec<f64>> {
    if initial.len() != kernel.len() {
        return Err(Error::DimensionMismatch { expected: kernel.len(), got: initial.len() });
    }
    let mut mu = initial.to_vec();
    for _ in 0..steps {
        mu = kernel.propagate(&mu);
    }
    Ok(mu)
}

/// A myopic kernel discretized over equal cells of [0,1], either by spectral
/// quadrature (deterministic) or by conditioned-segment endpoint frequencies
/// (Monte Carlo); `row_samples` is set in the Monte Carlo case so spectral
/// checks can budget their slack.
#[derive(Debug, Clone)]
pub struct DiscretizedKernel {
    pub kernel: KernelMatrix,
    pub cells: usize,
    pub dt: f64,
    pub row_samples: Option<u64>,
}

pub enum KernelEstimate {
    /// Gauss-quadrature of the spectral series (interval domains).
    Quadrature { series_terms: u32 },
    /// Endpoint frequencies from `successes_per_row` conditioned segments.
    MonteCarlo { successes_per_row: u64, substeps: u32, seed: u64 },
}

pub fn discretized_myopic_kernel(
    domain: &Domain,
    cells: usize,
    dt: f64,
    estimate: KernelEstimate,
) -> Result<DiscretizedKernel> {
    if domain.dimension() != 1 {
        return Err(Error::BadConfig(
            "discretized myopic kernel is implemented on the unit interval".into(),
        ));
    }
    let h = 1.0 / cells as f64;
    match estimate {
        KernelEstimate::Quadrature { series_terms } => {
            // row c: integrate p^D(x_c, y) over each target cell (8-pt Gauss)
            let nodes = [
                -0.9602898564975363,
                -0.7966664774136267,
                -0.525532409916329,
                -0.18343464249564978,
                0.18343464249564978,
                0.525532409916329,
                0.7966664774136267,
                0.9602898564975363,
            ];
            let weights = [
                0.10122853629037669,
                0.22238103445337445,
                0.31370664587788727,
                0.362683783378362,
                0.362683783378362,
                0.31370664587788727,
                0.22238103445337445,
                0.10122853629037669,
            ];
            let mut rows = Vec::with_capacity(cells);
            let mut measure = Vec::with_capacity(cells);
            for c in 0..cells {
                let xc = (c as f64 + 0.5) * h;
                let mut raw = vec![0.0; cells];
                for (c2, r) in raw.iter_mut().enumerate() {
                    let mid = (c2 as f64 + 0.5) * h;
                    for (z, w) in nodes.iter().zip(weights) {
                        let y = mid + z * h / 2.0;
                        *r += w * h / 2.0 * killed_density_interval(dt, xc, y, series_terms);
                    }
                }
                let total: f64 = raw.iter().sum();
                if total <= 0.0 {
                    return Err(Error::BadConfig(format!("cell {c} has zero survival")));
                }
                let mut row: Vec<(usize, f64)> = raw
                    .iter()
                    .enumerate()
                    .filter(|&(_, &q)| q > 0.0)
                    .map(|(j, &q)| (j, q / total))
                    .collect();
                renormalize(&mut row);
                rows.push(row);
                measure.push(total * h);
            }
            Ok(DiscretizedKernel {
                kernel: KernelMatrix::new(rows, measure)?,
                cells,
                dt,
                row_samples: None,
            })
        }
        KernelEstimate::MonteCarlo { successes_per_row, substeps, seed } => {
            let mut rows = Vec::with_capacity(cells);
            let mut measure = Vec::with_capacity(cells);
            let attempts_cap = successes_per_row * 10_000;
            for c in 0..cells {
                let xc = (c as f64 + 0.5) * h;
                let mut rng = StreamKey::new(seed, c as u64, Substream::Segment).rng();
                let mut counts = vec![0u64; cells];
                let mut attempts = 0u64;
                let mut successes = 0u64;
                while successes < successes_per_row {
                    attempts += 1;
                    if attempts > attempts_cap {
                        return Err(Error::BadConfig(format!(
                            "cell {c} exhausted its survival budget"
                        )));
                    }
                    let seg = sample_killed_segment(domain, &[xc], dt, substeps, true, &mut rng)?;
                    if seg.survived {
                        successes += 1;
                        let y = seg.endpoint()[0];
                        counts[((y / h) as usize).min(cells - 1)] += 1;
                    }
                }
                let mut row: Vec<(usize, f64)> = counts
                    .iter()
                    .enumerate()
                    .filter(|&(_, &n)| n > 0)
                    .map(|(j, &n)| (j, n as f64 / successes_per_row as f64))
                    .collect();
                renormalize(&mut row);
                rows.push(row);
                // survival estimate from the same rejection statistics
                measure.push(successes as f64 / attempts as f64 * h);
            }
            Ok(DiscretizedKernel {
                kernel: KernelMatrix::new(rows, measure)?,
                cells,
                dt,
                row_samples: Some(successes_per_row),
            })
        }
    }
}

fn renormalize(row: &mut [(usize, f64)]) {
    let s: f64 = row.iter().map(|&(_, q)| q).sum();
    for e in row.iter_mut() {
        e.1 /= s;
    }
}
