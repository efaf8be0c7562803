//! Planar polygon primitives: containment, segment intersection, distances,
//! shoelace area and axis-box clipping.

pub type P2 = [f64; 2];

#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    /// Vertices in order (closed implicitly; last connects to first).
    pub vertices: Vec<P2>,
}

fn cross(o: P2, a: P2, b: P2) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn on_segment(p: P2, a: P2, b: P2) -> bool {
    cross(a, b, p) == 0.0
        && p[0] >= a[0].min(b[0])
        && p[0] <= a[0].max(b[0])
        && p[1] >= a[1].min(b[1])
        && p[1] <= a[1].max(b[1])
}

/// Closed-segment intersection test; touching endpoints count.
pub fn segments_intersect(a1: P2, a2: P2, b1: P2, b2: P2) -> bool {
    let d1 = cross(b1, b2, a1);
    let d2 = cross(b1, b2, a2);
    let d3 = cross(a1, a2, b1);
    let d4 = cross(a1, a2, b2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(a1, b1, b2))
        || (d2 == 0.0 && on_segment(a2, b1, b2))
        || (d3 == 0.0 && on_segment(b1, a1, a2))
        || (d4 == 0.0 && on_segment(b2, a1, a2))
}

pub fn point_segment_distance(p: P2, a: P2, b: P2) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let ap = [p[0] - a[0], p[1] - a[1]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    let t = if len2 == 0.0 {
        0.0
    } else {
        ((ap[0] * ab[0] + ap[1] * ab[1]) / len2).clamp(0.0, 1.0)
    };
    let dx = p[0] - (a[0] + t * ab[0]);
    let dy = p[1] - (a[1] + t * ab[1]);
    (dx * dx + dy * dy).sqrt()
}

impl Polygon {
    pub fn new(vertices: Vec<P2>) -> Self {
        assert!(vertices.len() >= 3, "polygon needs at least 3 vertices");
        Self { vertices }
    }

    pub fn edges(&self) -> impl Iterator<Item = (P2, P2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Signed shoelace area (positive for counter-clockwise orientation).
    pub fn signed_area(&self) -> f64 {
        let mut s = 0.0;
        for (a, b) in self.edges() {
            s += a[0] * b[1] - a[1] * b[0];
        }
        s / 2.0
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    pub fn on_boundary(&self, p: P2) -> bool {
        self.edges().any(|(a, b)| on_segment(p, a, b))
    }

    /// Strict interior test: boundary points are outside.
    pub fn contains_interior(&self, p: P2) -> bool {
        if self.on_boundary(p) {
            return false;
        }
        // even-odd ray cast toward +x
        let mut inside = false;
        for (a, b) in self.edges() {
            if (a[1] > p[1]) != (b[1] > p[1]) {
                let x_at = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
                if p[0] < x_at {
                    inside = !inside;
                }
            }
        }
        inside
    }

    pub fn contains_closure(&self, p: P2) -> bool {
        self.on_boundary(p) || self.contains_interior(p)
    }

    /// Whether the closed segment [p,q] meets the polygon boundary.
    pub fn segment_hits_boundary(&self, p: P2, q: P2) -> bool {
        self.edges().any(|(a, b)| segments_intersect(p, q, a, b))
    }

    /// Exact distance from an interior point to the polygon boundary.
    pub fn boundary_distance(&self, p: P2) -> f64 {
        self.edges()
            .map(|(a, b)| point_segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn bounding_box(&self) -> (P2, P2) {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for v in &self.vertices {
            for i in 0..2 {
                lo[i] = lo[i].min(v[i]);
                hi[i] = hi[i].max(v[i]);
            }
        }
        (lo, hi)
    }

    /// Pairwise edge check that no two non-adjacent edges meet.
    pub fn is_simple(&self) -> bool {
        let n = self.vertices.len();
        let edges: Vec<_> = self.edges().collect();
        for i in 0..n {
            for j in i + 1..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent {
                    continue;
                }
                let (a1, a2) = edges[i];
                let (b1, b2) = edges[j];
                if segments_intersect(a1, a2, b1, b2) {
                    return false;
                }
            }
        }
        true
    }

    /// Area of the intersection with an axis-aligned box (Sutherland-Hodgman).
    pub fn clip_area_to_box(&self, lo: P2, hi: P2) -> f64 {
        let mut poly: Vec<P2> = self.vertices.clone();
        if self.signed_area() < 0.0 {
            poly.reverse();
        }
        // clip against each half-plane of the box
        let planes: [(usize, f64, bool); 4] = [
            (0, lo[0], true),
            (0, hi[0], false),
            (1, lo[1], true),
            (1, hi[1], false),
        ];
        for (axis, level, keep_ge) in planes {
            if poly.is_empty() {
                break;
            }
            let inside = |p: P2| {
                if keep_ge {
                    p[axis] >= level
                } else {
                    p[axis] <= level
                }
            };
            let mut out: Vec<P2> = Vec::with_capacity(poly.len() + 4);
            for i in 0..poly.len() {
                let cur = poly[i];
                let nxt = poly[(i + 1) % poly.len()];
                let cin = inside(cur);
                let nin = inside(nxt);
                if cin {
                    out.push(cur);
                }
                if cin != nin {
                    let t = (level - cur[axis]) / (nxt[axis] - cur[axis]);
                    let mut ipt = [0.0; 2];
                    ipt[axis] = level;
                    ipt[1 - axis] = cur[1 - axis] + t * (nxt[1 - axis] - cur[1 - axis]);
                    out.push(ipt);
                }
            }
            poly = out;
        }
        if poly.len() < 3 {
            return 0.0;
        }
        let clipped = Polygon { vertices: poly };
        clipped.signed_area().abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square_poly() -> Polygon {
        Polygon::new(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    }

    #[test]
    fn interior_and_boundary() {
        let p = unit_square_poly();
        assert!(p.contains_interior([0.5, 0.5]));
        assert!(!p.contains_interior([0.0, 0.5]));
        assert!(!p.contains_interior([1.5, 0.5]));
        assert!(p.contains_closure([0.0, 0.5]));
    }

    #[test]
    fn shoelace_and_clip() {
        let p = unit_square_poly();
        assert_eq!(p.area(), 1.0);
        let a = p.clip_area_to_box([0.25, 0.25], [0.75, 0.75]);
        assert!((a - 0.25).abs() < 1e-12);
        let a = p.clip_area_to_box([-1.0, -1.0], [2.0, 2.0]);
        assert!((a - 1.0).abs() < 1e-12);
    }

    #[test]
    fn segment_boundary_hits() {
        let p = unit_square_poly();
        assert!(!p.segment_hits_boundary([0.2, 0.2], [0.8, 0.8]));
        assert!(p.segment_hits_boundary([0.2, 0.2], [1.2, 0.2]));
        // touching a vertex counts
        assert!(p.segment_hits_boundary([-0.5, -0.5], [0.0, 0.0]));
    }

    #[test]
    fn distances() {
        let p = unit_square_poly();
        assert!((p.boundary_distance([0.5, 0.5]) - 0.5).abs() < 1e-15);
        assert!((p.boundary_distance([0.25, 0.5]) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn simplicity() {
        assert!(unit_square_poly().is_simple());
        let bowtie = Polygon::new(vec![[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]]);
        assert!(!bowtie.is_simple());
    }
}
