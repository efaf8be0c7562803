//! Bounded open domains with membership, segment-containment, area and
//! boundary-distance queries.
//!
//! Boundary points are always outside: every shape is an open set. Each
//! domain carries an anchor point known to lie inside; the lattice builder
//! roots its exploration there.

mod comb;
mod polygon;
mod snowflake;

pub use comb::{Comb, CombSchedule};
pub use polygon::{point_segment_distance, segments_intersect, Polygon, P2};
pub use snowflake::{snowflake_anchor, snowflake_polygon, MAX_SNOWFLAKE_DEPTH};

use crate::error::{Error, Result};
use crate::rng::{StreamKey, Substream};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Default number of interior samples for the segment-containment fallback.
pub const DEFAULT_SEGMENT_SAMPLES: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Box { min: Vec<f64>, max: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
    Poly(Polygon),
    Comb(Comb),
    Difference { outer: Box<Shape>, minus: Box<Shape> },
    Union { parts: Vec<Shape> },
}

impl Shape {
    fn dimension(&self) -> usize {
        match self {
            Shape::Box { min, .. } => min.len(),
            Shape::Ball { center, .. } => center.len(),
            Shape::Poly(_) | Shape::Comb(_) => 2,
            Shape::Difference { outer, .. } => outer.dimension(),
            Shape::Union { parts } => parts[0].dimension(),
        }
    }

    fn contains_open(&self, p: &[f64]) -> bool {
        match self {
            Shape::Box { min, max } => {
                p.iter().zip(min).zip(max).all(|((&x, &lo), &hi)| x > lo && x < hi)
            }
            Shape::Ball { center, radius } => dist2(p, center) < radius * radius,
            Shape::Poly(poly) => poly.contains_interior([p[0], p[1]]),
            Shape::Comb(c) => c.contains([p[0], p[1]]),
            Shape::Difference { outer, minus } => {
                outer.contains_open(p) && !minus.contains_closure(p)
            }
            Shape::Union { parts } => parts.iter().any(|s| s.contains_open(p)),
        }
    }

    /// Closure membership. For differences this is a conservative superset
    /// of the true closure, which keeps `contains_open` exact.
    fn contains_closure(&self, p: &[f64]) -> bool {
        match self {
            Shape::Box { min, max } => {
                p.iter().zip(min).zip(max).all(|((&x, &lo), &hi)| x >= lo && x <= hi)
            }
            Shape::Ball { center, radius } => dist2(p, center) <= radius * radius,
            Shape::Poly(poly) => poly.contains_closure([p[0], p[1]]),
            Shape::Comb(c) => c.contains_closure([p[0], p[1]]),
            Shape::Difference { outer, minus } => {
                outer.contains_closure(p) && !minus.contains_open(p)
            }
            Shape::Union { parts } => parts.iter().any(|s| s.contains_closure(p)),
        }
    }

    /// Exact segment containment where a rule exists; `None` requests the
    /// sampled fallback. Both endpoints are already known to be inside.
    fn segment_exact(&self, p: &[f64], q: &[f64]) -> Option<bool> {
        match self {
            Shape::Box { .. } | Shape::Ball { .. } => Some(true),
            Shape::Poly(poly) => {
                Some(!poly.segment_hits_boundary([p[0], p[1]], [q[0], q[1]]))
            }
            Shape::Comb(c) => {
                if p[0] == q[0] {
                    let (lo, hi) = ordered(p[1], q[1]);
                    Some(c.axis_segment_inside(0, p[0], lo, hi))
                } else if p[1] == q[1] {
                    let (lo, hi) = ordered(p[0], q[0]);
                    Some(c.axis_segment_inside(1, p[1], lo, hi))
                } else {
                    None
                }
            }
            Shape::Difference { outer, minus } => {
                let in_outer = outer.segment_exact(p, q)?;
                let hits = minus.segment_hits_closed(p, q)?;
                Some(in_outer && !hits)
            }
            Shape::Union { parts } => {
                for s in parts {
                    if s.contains_open(p) && s.contains_open(q) && s.segment_exact(p, q) == Some(true) {
                        return Some(true);
                    }
                }
                // may still weave between parts
                None
            }
        }
    }

    /// Whether the closed segment [p,q] meets this shape's closure, for
    /// endpoints outside the closure. `None` when no exact rule exists.
    fn segment_hits_closed(&self, p: &[f64], q: &[f64]) -> Option<bool> {
        match self {
            Shape::Box { min, max } => Some(segment_hits_aabb(p, q, min, max)),
            Shape::Ball { center, radius } => {
                let d = if center.len() == 2 {
                    point_segment_distance([center[0], center[1]], [p[0], p[1]], [q[0], q[1]])
                } else {
                    segment_point_distance_nd(p, q, center)
                };
                Some(d <= *radius)
            }
            Shape::Poly(poly) => Some(
                poly.segment_hits_boundary([p[0], p[1]], [q[0], q[1]])
                    || poly.contains_closure([p[0], p[1]]),
            ),
            _ => None,
        }
    }

    /// Certified lower bound on the distance to the boundary from an
    /// interior point; 0 is the trivial fallback.
    fn boundary_distance(&self, p: &[f64]) -> f64 {
        match self {
            Shape::Box { min, max } => p
                .iter()
                .zip(min)
                .zip(max)
                .map(|((&x, &lo), &hi)| (x - lo).min(hi - x))
                .fold(f64::INFINITY, f64::min),
            Shape::Ball { center, radius } => radius - dist2(p, center).sqrt(),
            Shape::Poly(poly) => poly.boundary_distance([p[0], p[1]]),
            Shape::Comb(c) => c.boundary_distance_lower_bound([p[0], p[1]]),
            Shape::Difference { outer, minus } => {
                outer.boundary_distance(p).min(minus.distance_to_closure(p))
            }
            Shape::Union { parts } => parts
                .iter()
                .filter(|s| s.contains_open(p))
                .map(|s| s.boundary_distance(p))
                .fold(0.0, f64::max),
        }
    }

    /// Distance from an outside point to this shape's closure (0 fallback).
    fn distance_to_closure(&self, p: &[f64]) -> f64 {
        match self {
            Shape::Box { min, max } => {
                let mut s = 0.0;
                for ((&x, &lo), &hi) in p.iter().zip(min).zip(max) {
                    let d = (lo - x).max(x - hi).max(0.0);
                    s += d * d;
                }
                s.sqrt()
            }
            Shape::Ball { center, radius } => (dist2(p, center).sqrt() - radius).max(0.0),
            Shape::Poly(poly) => poly.boundary_distance([p[0], p[1]]),
            _ => 0.0,
        }
    }

    fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        match self {
            Shape::Box { min, max } => (min.clone(), max.clone()),
            Shape::Ball { center, radius } => (
                center.iter().map(|c| c - radius).collect(),
                center.iter().map(|c| c + radius).collect(),
            ),
            Shape::Poly(poly) => {
                let (lo, hi) = poly.bounding_box();
                (lo.to_vec(), hi.to_vec())
            }
            Shape::Comb(_) => (vec![0.0, 0.0], vec![1.0, 1.0]),
            Shape::Difference { outer, .. } => outer.bounding_box(),
            Shape::Union { parts } => {
                let n = parts[0].dimension();
                let mut lo = vec![f64::INFINITY; n];
                let mut hi = vec![f64::NEG_INFINITY; n];
                for s in parts {
                    let (l, h) = s.bounding_box();
                    for i in 0..n {
                        lo[i] = lo[i].min(l[i]);
                        hi[i] = hi[i].max(h[i]);
                    }
                }
                (lo, hi)
            }
        }
    }

    fn exact_area(&self) -> Option<f64> {
        match self {
            Shape::Box { min, max } => {
                Some(min.iter().zip(max).map(|(&lo, &hi)| hi - lo).product())
            }
            Shape::Ball { center, radius } => {
                let n = center.len() as f64;
                let vol = std::f64::consts::PI.powf(n / 2.0)
                    / statrs::function::gamma::gamma(n / 2.0 + 1.0)
                    * radius.powf(n);
                Some(vol)
            }
            Shape::Poly(poly) => Some(poly.area()),
            _ => None,
        }
    }

    fn has_exact_distance(&self) -> bool {
        match self {
            Shape::Box { .. } | Shape::Ball { .. } | Shape::Poly(_) => true,
            Shape::Comb(_) | Shape::Union { .. } => false,
            Shape::Difference { outer, minus } => {
                matches!(**outer, Shape::Box { .. } | Shape::Ball { .. })
                    && matches!(**minus, Shape::Box { .. } | Shape::Ball { .. })
            }
        }
    }
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn ordered(a: f64, b: f64) -> (f64, f64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Liang-Barsky style test of a segment against a closed axis box.
fn segment_hits_aabb(p: &[f64], q: &[f64], min: &[f64], max: &[f64]) -> bool {
    let mut t0 = 0.0f64;
    let mut t1 = 1.0f64;
    for i in 0..p.len() {
        let d = q[i] - p[i];
        if d == 0.0 {
            if p[i] < min[i] || p[i] > max[i] {
                return false;
            }
            continue;
        }
        let (mut ta, mut tb) = ((min[i] - p[i]) / d, (max[i] - p[i]) / d);
        if ta > tb {
            std::mem::swap(&mut ta, &mut tb);
        }
        t0 = t0.max(ta);
        t1 = t1.min(tb);
        if t0 > t1 {
            return false;
        }
    }
    true
}

fn segment_point_distance_nd(p: &[f64], q: &[f64], c: &[f64]) -> f64 {
    let len2 = dist2(p, q);
    let t = if len2 == 0.0 {
        0.0
    } else {
        let dot: f64 = c
            .iter()
            .zip(p)
            .zip(q.iter().zip(p))
            .map(|((&ci, &pi), (&qi, &pi2))| (ci - pi) * (qi - pi2))
            .sum();
        (dot / len2).clamp(0.0, 1.0)
    };
    let proj: Vec<f64> = p.iter().zip(q).map(|(&pi, &qi)| pi + t * (qi - pi)).collect();
    dist2(c, &proj).sqrt()
}

/// Serializable domain descriptor with the exact key set
/// `kind`, `dimension`, `parameters`, `anchor`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DomainDescriptor {
    pub kind: String,
    pub dimension: usize,
    #[serde(default)]
    pub parameters: Parameters,
    #[serde(default)]
    pub anchor: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Default)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_level: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilons: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outer: Option<Box<DomainDescriptor>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inner: Option<Box<DomainDescriptor>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parts: Option<Vec<DomainDescriptor>>,
}

/// A bounded open domain with an interior anchor point.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    shape: Shape,
    dimension: usize,
    bbox_lo: Vec<f64>,
    bbox_hi: Vec<f64>,
    anchor: Vec<f64>,
    kind: String,
    snowflake_depth: Option<u32>,
    pub segment_samples: usize,
}

impl Domain {
    fn build(shape: Shape, kind: &str, anchor: Vec<f64>) -> Result<Self> {
        let dimension = shape.dimension();
        let (bbox_lo, bbox_hi) = shape.bounding_box();
        if bbox_lo.iter().zip(&bbox_hi).any(|(lo, hi)| !(hi > lo)) {
            return Err(Error::BadDescriptor(
                "bounding box must have strictly positive side lengths".into(),
            ));
        }
        let dom = Self {
            shape,
            dimension,
            bbox_lo,
            bbox_hi,
            anchor,
            kind: kind.to_string(),
            snowflake_depth: None,
            segment_samples: DEFAULT_SEGMENT_SAMPLES,
        };
        if dom.anchor.len() != dimension || !dom.shape.contains_open(&dom.anchor) {
            return Err(Error::BadDescriptor(format!(
                "anchor {:?} is not inside the domain",
                dom.anchor
            )));
        }
        Ok(dom)
    }

    pub fn box_domain(min: Vec<f64>, max: Vec<f64>) -> Result<Self> {
        let anchor = min.iter().zip(&max).map(|(lo, hi)| (lo + hi) / 2.0).collect();
        Self::build(Shape::Box { min, max }, "box", anchor)
    }

    pub fn unit_interval() -> Self {
        Self::box_domain(vec![0.0], vec![1.0]).unwrap()
    }

    pub fn unit_square() -> Self {
        Self::box_domain(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap()
    }

    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        let anchor = center.clone();
        Self::build(Shape::Ball { center, radius }, "ball", anchor)
    }

    pub fn unit_disk() -> Self {
        Self::ball(vec![0.0, 0.0], 1.0).unwrap()
    }

    pub fn polygon(vertices: Vec<P2>, anchor: P2) -> Result<Self> {
        let poly = Polygon::new(vertices);
        Self::build(Shape::Poly(poly), "polygon", anchor.to_vec())
    }

    /// (0,1)^2 with the closed quadrant [1/2,1]^2 removed.
    pub fn lshape() -> Self {
        let outer = Shape::Box { min: vec![0.0, 0.0], max: vec![1.0, 1.0] };
        let minus = Shape::Box { min: vec![0.5, 0.5], max: vec![1.0, 1.0] };
        Self::build(
            Shape::Difference { outer: outer.into(), minus: minus.into() },
            "lshape",
            vec![0.25, 0.25],
        )
        .unwrap()
    }

    /// Interior of the depth-th inductive snowflake polygon, unit base side.
    pub fn snowflake(depth: u32) -> Result<Self> {
        let poly = snowflake_polygon(depth)?;
        let mut dom = Self::build(Shape::Poly(poly), "snowflake", snowflake_anchor().to_vec())?;
        dom.snowflake_depth = Some(depth);
        Ok(dom)
    }

    pub fn comb(schedule: CombSchedule) -> Result<Self> {
        let comb = Comb::new(schedule)?;
        Self::build(Shape::Comb(comb), "comb", vec![0.5, 0.5])
    }

    pub fn difference(outer: Domain, minus: Domain, anchor: Vec<f64>) -> Result<Self> {
        Self::build(
            Shape::Difference { outer: outer.shape.into(), minus: minus.shape.into() },
            "difference",
            anchor,
        )
    }

    pub fn union(parts: Vec<Domain>, anchor: Vec<f64>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::BadDescriptor("union needs at least one part".into()));
        }
        Self::build(
            Shape::Union { parts: parts.into_iter().map(|d| d.shape).collect() },
            "union",
            anchor,
        )
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn anchor(&self) -> &[f64] {
        &self.anchor
    }

    pub fn with_anchor(mut self, anchor: Vec<f64>) -> Result<Self> {
        if anchor.len() != self.dimension || !self.shape.contains_open(&anchor) {
            return Err(Error::BadDescriptor(format!("anchor {anchor:?} is not inside the domain")));
        }
        self.anchor = anchor;
        Ok(self)
    }

    pub fn bounding_box(&self) -> (&[f64], &[f64]) {
        (&self.bbox_lo, &self.bbox_hi)
    }

    pub fn bbox_volume(&self) -> f64 {
        self.bbox_lo.iter().zip(&self.bbox_hi).map(|(lo, hi)| hi - lo).product()
    }

    pub fn kind(&self) -> &str {
        &self.kind
    }

    pub fn comb_shape(&self) -> Option<&Comb> {
        match &self.shape {
            Shape::Comb(c) => Some(c),
            _ => None,
        }
    }

    pub fn polygon_shape(&self) -> Option<&Polygon> {
        match &self.shape {
            Shape::Poly(p) => Some(p),
            _ => None,
        }
    }

    /// Strict membership in the open set.
    pub fn contains(&self, p: &[f64]) -> bool {
        debug_assert_eq!(p.len(), self.dimension);
        p.len() == self.dimension
            && p.iter().zip(&self.bbox_lo).zip(&self.bbox_hi).all(|((&x, &lo), &hi)| x >= lo && x <= hi)
            && self.shape.contains_open(p)
    }

    pub fn try_contains(&self, p: &[f64]) -> Result<bool> {
        if p.len() != self.dimension {
            return Err(Error::DimensionMismatch { expected: self.dimension, got: p.len() });
        }
        Ok(self.contains(p))
    }

    /// Whether the closed segment [p,q] lies inside the domain. Exact for
    /// convex shapes, polygons, axis-aligned comb segments and box/ball
    /// differences; otherwise checked at `segment_samples` interior points.
    pub fn segment_in_domain(&self, p: &[f64], q: &[f64]) -> Result<bool> {
        if p.len() != self.dimension || q.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                got: p.len().max(q.len()),
            });
        }
        if !self.contains(p) || !self.contains(q) {
            return Ok(false);
        }
        if let Some(ans) = self.shape.segment_exact(p, q) {
            return Ok(ans);
        }
        let m = self.segment_samples;
        let mut x = vec![0.0; self.dimension];
        for i in 1..=m {
            let t = i as f64 / (m + 1) as f64;
            for (j, xj) in x.iter_mut().enumerate() {
                *xj = p[j] + t * (q[j] - p[j]);
            }
            if !self.shape.contains_open(&x) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Lebesgue measure: closed form where available, otherwise Monte Carlo
    /// hit-rate times bounding-box volume with a binomial standard error.
    pub fn area(&self, mc_samples: u64, seed: u64) -> (f64, f64) {
        if let Some(v) = self.shape.exact_area() {
            return (v, 0.0);
        }
        let mut rng = StreamKey::new(seed, 0, Substream::Area).rng();
        let mut hits = 0u64;
        let mut x = vec![0.0; self.dimension];
        for _ in 0..mc_samples {
            for i in 0..self.dimension {
                x[i] = rng.gen_range(self.bbox_lo[i]..self.bbox_hi[i]);
            }
            if self.shape.contains_open(&x) {
                hits += 1;
            }
        }
        let vol = self.bbox_volume();
        let p = hits as f64 / mc_samples as f64;
        let stderr = (p * (1.0 - p) / mc_samples as f64).sqrt() * vol;
        (p * vol, stderr)
    }

    /// Certified lower bound on dist(p, boundary); exact for boxes, balls,
    /// polygons and box/ball differences.
    pub fn distance_to_boundary(&self, p: &[f64]) -> Result<f64> {
        if !self.try_contains(p)? {
            return Err(Error::PointOutsideDomain(p.to_vec()));
        }
        Ok(self.shape.boundary_distance(p).max(0.0))
    }

    pub fn has_exact_distance(&self) -> bool {
        self.shape.has_exact_distance()
    }

    /// Uniform point in the bounding box (not necessarily inside).
    pub fn sample_bbox<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        (0..self.dimension)
            .map(|i| rng.gen_range(self.bbox_lo[i]..self.bbox_hi[i]))
            .collect()
    }

    pub fn descriptor(&self) -> DomainDescriptor {
        let mut params = Parameters::default();
        match &self.shape {
            Shape::Box { min, max } => {
                params.min = Some(min.clone());
                params.max = Some(max.clone());
            }
            Shape::Ball { center, radius } => {
                params.center = Some(center.clone());
                params.radius = Some(*radius);
            }
            Shape::Poly(poly) => {
                if let Some(d) = self.snowflake_depth {
                    params.depth = Some(d);
                } else {
                    params.vertices = Some(poly.vertices.clone());
                }
            }
            Shape::Comb(c) => {
                params.max_level = Some(c.schedule.max_level);
                params.epsilons = Some(c.schedule.epsilons.clone());
            }
            Shape::Difference { .. } if self.kind == "lshape" => {}
            Shape::Difference { outer, minus } => {
                params.outer = Some(Box::new(shape_descriptor(outer)));
                params.inner = Some(Box::new(shape_descriptor(minus)));
            }
            Shape::Union { parts } => {
                params.parts = Some(parts.iter().map(shape_descriptor).collect());
            }
        }
        DomainDescriptor {
            kind: self.kind.clone(),
            dimension: self.dimension,
            parameters: params,
            anchor: self.anchor.clone(),
        }
    }

    pub fn from_descriptor(desc: &DomainDescriptor) -> Result<Self> {
        let p = &desc.parameters;
        let need = |opt: bool, what: &str| -> Result<()> {
            if opt {
                Ok(())
            } else {
                Err(Error::BadDescriptor(format!("kind '{}' needs parameter {what}", desc.kind)))
            }
        };
        let mut dom = match desc.kind.as_str() {
            "box" => {
                need(p.min.is_some() && p.max.is_some(), "min/max")?;
                Self::box_domain(p.min.clone().unwrap(), p.max.clone().unwrap())?
            }
            "ball" => {
                need(p.center.is_some() && p.radius.is_some(), "center/radius")?;
                Self::ball(p.center.clone().unwrap(), p.radius.unwrap())?
            }
            "polygon" => {
                need(p.vertices.is_some(), "vertices")?;
                let verts = p.vertices.clone().unwrap();
                let anchor = if desc.anchor.is_empty() {
                    centroid(&verts)
                } else {
                    [desc.anchor[0], desc.anchor[1]]
                };
                Self::polygon(verts, anchor)?
            }
            "lshape" => Self::lshape(),
            "snowflake" => {
                need(p.depth.is_some(), "depth")?;
                Self::snowflake(p.depth.unwrap())?
            }
            "comb" => {
                let max_level = p.max_level.unwrap_or(8);
                let schedule = match &p.epsilons {
                    Some(eps) => CombSchedule { max_level, epsilons: eps.clone() },
                    None => CombSchedule::default_with_levels(max_level),
                };
                Self::comb(schedule)?
            }
            "difference" => {
                need(p.outer.is_some() && p.inner.is_some(), "outer/inner")?;
                let outer = Self::from_descriptor(p.outer.as_ref().unwrap())?;
                let inner = Self::from_descriptor(p.inner.as_ref().unwrap())?;
                let anchor = if desc.anchor.is_empty() {
                    return Err(Error::BadDescriptor("difference needs an explicit anchor".into()));
                } else {
                    desc.anchor.clone()
                };
                Self::difference(outer, inner, anchor)?
            }
            "union" => {
                need(p.parts.is_some(), "parts")?;
                let parts = p
                    .parts
                    .as_ref()
                    .unwrap()
                    .iter()
                    .map(Self::from_descriptor)
                    .collect::<Result<Vec<_>>>()?;
                let anchor = if desc.anchor.is_empty() {
                    return Err(Error::BadDescriptor("union needs an explicit anchor".into()));
                } else {
                    desc.anchor.clone()
                };
                Self::union(parts, anchor)?
            }
            other => return Err(Error::BadDescriptor(format!("unknown kind '{other}'"))),
        };
        if !desc.anchor.is_empty() {
            dom = dom.with_anchor(desc.anchor.clone())?;
        }
        Ok(dom)
    }
}

fn centroid(verts: &[P2]) -> P2 {
    let n = verts.len() as f64;
    let mut c = [0.0, 0.0];
    for v in verts {
        c[0] += v[0] / n;
        c[1] += v[1] / n;
    }
    c
}

fn shape_descriptor(shape: &Shape) -> DomainDescriptor {
    let mut params = Parameters::default();
    let kind = match shape {
        Shape::Box { min, max } => {
            params.min = Some(min.clone());
            params.max = Some(max.clone());
            "box"
        }
        Shape::Ball { center, radius } => {
            params.center = Some(center.clone());
            params.radius = Some(*radius);
            "ball"
        }
        Shape::Poly(poly) => {
            params.vertices = Some(poly.vertices.clone());
            "polygon"
        }
        Shape::Comb(c) => {
            params.max_level = Some(c.schedule.max_level);
            params.epsilons = Some(c.schedule.epsilons.clone());
            "comb"
        }
        Shape::Difference { outer, minus } => {
            params.outer = Some(Box::new(shape_descriptor(outer)));
            params.inner = Some(Box::new(shape_descriptor(minus)));
            "difference"
        }
        Shape::Union { parts } => {
            params.parts = Some(parts.iter().map(shape_descriptor).collect());
            "union"
        }
    };
    DomainDescriptor {
        kind: kind.to_string(),
        dimension: shape.dimension(),
        parameters: params,
        anchor: Vec::new(),
    }
}
