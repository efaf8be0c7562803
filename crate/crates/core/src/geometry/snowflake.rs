//! Inductive construction of the von Koch snowflake boundary polygon.

use super::polygon::{Polygon, P2};
use crate::error::{Error, Result};

/// Largest permitted depth: vertex count is 3*4^depth.
pub const MAX_SNOWFLAKE_DEPTH: u32 = 9;

/// Polygon prefix of the snowflake: depth 0 is the unit-side equilateral
/// triangle, each further depth replaces every edge by four, bulging outward.
pub fn snowflake_polygon(depth: u32) -> Result<Polygon> {
    if depth > MAX_SNOWFLAKE_DEPTH {
        return Err(Error::DepthOverLimit { depth, max: MAX_SNOWFLAKE_DEPTH });
    }
    let h = 3f64.sqrt() / 2.0;
    // counter-clockwise base triangle with unit side
    let mut verts: Vec<P2> = vec![[0.0, 0.0], [1.0, 0.0], [0.5, h]];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(verts.len() * 4);
        let n = verts.len();
        for i in 0..n {
            let a = verts[i];
            let b = verts[(i + 1) % n];
            let d = [b[0] - a[0], b[1] - a[1]];
            let p1 = [a[0] + d[0] / 3.0, a[1] + d[1] / 3.0];
            let p2 = [a[0] + 2.0 * d[0] / 3.0, a[1] + 2.0 * d[1] / 3.0];
            // outward normal of a CCW polygon points right of travel
            let tip = [
                a[0] + d[0] / 2.0 + d[1] * 3f64.sqrt() / 6.0,
                a[1] + d[1] / 2.0 - d[0] * 3f64.sqrt() / 6.0,
            ];
            next.push(a);
            next.push(p1);
            next.push(tip);
            next.push(p2);
        }
        verts = next;
    }
    Ok(Polygon::new(verts))
}

/// Centroid of the base triangle, used as the domain anchor.
pub fn snowflake_anchor() -> P2 {
    [0.5, 3f64.sqrt() / 6.0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_triangle() {
        let p = snowflake_polygon(0).unwrap();
        assert_eq!(p.vertices.len(), 3);
        assert!((p.area() - 3f64.sqrt() / 4.0).abs() < 1e-15);
    }

    #[test]
    fn depth_one_star() {
        let p = snowflake_polygon(1).unwrap();
        assert_eq!(p.vertices.len(), 12);
        // base area plus three side-1/3 triangles: sqrt(3)/3
        assert!((p.area() - 3f64.sqrt() / 3.0).abs() < 1e-12);
    }

    #[test]
    fn vertex_count_grows_fourfold() {
        for d in 0..=4 {
            let p = snowflake_polygon(d).unwrap();
            assert_eq!(p.vertices.len(), 3 * 4usize.pow(d));
        }
    }

    #[test]
    fn small_depths_are_simple() {
        for d in 0..=3 {
            assert!(snowflake_polygon(d).unwrap().is_simple(), "depth {d}");
        }
    }

    #[test]
    fn depth_limit_enforced() {
        assert!(snowflake_polygon(MAX_SNOWFLAKE_DEPTH + 1).is_err());
    }

    #[test]
    fn anchor_inside_every_depth() {
        let anchor = snowflake_anchor();
        for d in 0..=4 {
            assert!(snowflake_polygon(d).unwrap().contains_interior(anchor));
        }
    }
}
