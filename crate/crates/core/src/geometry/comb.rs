//! The comb domain: a union of thin grid-aligned strips inside the unit
//! square whose level-k lattices coincide with the full square's.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Per-level strip half-widths for the comb domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CombSchedule {
    pub max_level: u32,
    /// Half-width per level, indexed by k-1 for k = 1..=max_level.
    pub epsilons: Vec<f64>,
}

impl CombSchedule {
    /// The default schedule eps_k = 2^{-2k-5}, which satisfies the strip-area
    /// bound with a clean analytic margin.
    pub fn default_with_levels(max_level: u32) -> Self {
        let epsilons = (1..=max_level)
            .map(|k| 2f64.powi(-(2 * k as i32) - 5))
            .collect();
        Self { max_level, epsilons }
    }

    /// Checks 4*eps_k*(2^k + 1) < 2^{-k-1} for every level.
    pub fn validate(&self) -> Result<()> {
        if self.max_level == 0 || self.epsilons.len() != self.max_level as usize {
            return Err(Error::BadDescriptor(format!(
                "comb schedule needs one epsilon per level 1..={}",
                self.max_level
            )));
        }
        for (i, &eps) in self.epsilons.iter().enumerate() {
            let k = (i + 1) as u32;
            let lhs = 4.0 * eps * (2f64.powi(k as i32) + 1.0);
            let rhs = 2f64.powi(-(k as i32) - 1);
            if !(eps > 0.0) || lhs >= rhs {
                return Err(Error::CombScheduleViolation { k, lhs, rhs });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comb {
    pub schedule: CombSchedule,
    /// Merged open intervals of the 1-d strip union (same on both axes).
    strip_union: Vec<(f64, f64)>,
}

impl Comb {
    pub fn new(schedule: CombSchedule) -> Result<Self> {
        schedule.validate()?;
        let strip_union = merged_strip_intervals(&schedule);
        Ok(Self { schedule, strip_union })
    }

    /// Whether coordinate v lies strictly inside some level-k strip.
    pub fn coordinate_in_strip(&self, v: f64) -> bool {
        for (i, &eps) in self.schedule.epsilons.iter().enumerate() {
            let k = (i + 1) as i32;
            let scale = 2f64.powi(k);
            let nearest = (v * scale).round() / scale;
            if (v - nearest).abs() < eps {
                return true;
            }
        }
        false
    }

    /// Open membership: inside (0,1)^2 and on some strip in x or in y.
    pub fn contains(&self, p: [f64; 2]) -> bool {
        let in_box = p[0] > 0.0 && p[0] < 1.0 && p[1] > 0.0 && p[1] < 1.0;
        in_box && (self.coordinate_in_strip(p[0]) || self.coordinate_in_strip(p[1]))
    }

    pub fn contains_closure(&self, p: [f64; 2]) -> bool {
        let in_box = (0.0..=1.0).contains(&p[0]) && (0.0..=1.0).contains(&p[1]);
        in_box && (self.coordinate_near_strip(p[0]) || self.coordinate_near_strip(p[1]))
    }

    fn coordinate_near_strip(&self, v: f64) -> bool {
        for (i, &eps) in self.schedule.epsilons.iter().enumerate() {
            let k = (i + 1) as i32;
            let scale = 2f64.powi(k);
            let nearest = (v * scale).round() / scale;
            if (v - nearest).abs() <= eps {
                return true;
            }
        }
        false
    }

    /// Exact containment for an axis-aligned segment with both endpoints in
    /// the comb: either the fixed coordinate rides a strip, or the moving
    /// range is covered by the perpendicular strip family.
    pub fn axis_segment_inside(&self, fixed_axis: usize, fixed: f64, lo: f64, hi: f64) -> bool {
        if self.coordinate_in_strip(fixed) {
            return true;
        }
        let _ = fixed_axis; // same strip family on both axes
        self.interval_covered(lo, hi)
    }

    /// Whether the closed interval [lo,hi] sits inside the open strip union.
    /// After merging, that means a single component must contain it.
    fn interval_covered(&self, lo: f64, hi: f64) -> bool {
        self.strip_union.iter().any(|&(a, b)| a < lo && hi < b)
    }

    /// Lower bound on the distance to the comb boundary from an interior
    /// point: the best clearance inside any single strip rectangle.
    pub fn boundary_distance_lower_bound(&self, p: [f64; 2]) -> f64 {
        let mut best: f64 = 0.0;
        for axis in 0..2 {
            let v = p[axis];
            let u = p[1 - axis];
            for (i, &eps) in self.schedule.epsilons.iter().enumerate() {
                let k = (i + 1) as i32;
                let scale = 2f64.powi(k);
                let nearest = (v * scale).round() / scale;
                let d = eps - (v - nearest).abs();
                if d > 0.0 {
                    // clearance within the strip rectangle (c-eps,c+eps) x (0,1)
                    let clear = d.min(u).min(1.0 - u);
                    best = best.max(clear);
                }
            }
        }
        best
    }

    /// Exact Lebesgue mass of the comb inside an axis-aligned cell.
    ///
    /// With V the 1-d strip union, |U ∩ (cell)| decomposes as
    /// |V∩X|·h + w·|V∩Y| − |V∩X|·|V∩Y| for a w×h cell X×Y.
    pub fn cell_mass(&self, x0: f64, x1: f64, y0: f64, y1: f64) -> f64 {
        let vx = self.overlap_length(x0, x1);
        let vy = self.overlap_length(y0, y1);
        vx * (y1 - y0) + (x1 - x0) * vy - vx * vy
    }

    /// Exact total area (used as an oracle against the Monte Carlo estimate).
    pub fn exact_area(&self) -> f64 {
        self.cell_mass(0.0, 1.0, 0.0, 1.0)
    }

    fn overlap_length(&self, lo: f64, hi: f64) -> f64 {
        self.strip_union
            .iter()
            .map(|&(a, b)| (b.min(hi) - a.max(lo)).max(0.0))
            .sum()
    }
}

fn merged_strip_intervals(schedule: &CombSchedule) -> Vec<(f64, f64)> {
    let mut iv: Vec<(f64, f64)> = Vec::new();
    for (i, &eps) in schedule.epsilons.iter().enumerate() {
        let k = (i + 1) as i32;
        let step = 2f64.powi(-k);
        for j in 0..=(1 << k) as i64 {
            let c = j as f64 * step;
            iv.push(((c - eps).max(0.0), (c + eps).min(1.0)));
        }
    }
    iv.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(iv.len());
    for (a, b) in iv {
        match merged.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => merged.push((a, b)),
        }
    }
    merged
}
