//! The level-k lattice graph inside a domain: the connected component of
//! 2^{-k}Z^n anchored at the domain anchor, with nearest-neighbor edges whose
//! closed segments lie inside the domain.

use crate::error::{Error, Result};
use crate::geometry::Domain;
use crate::kernel::KernelMatrix;
use std::collections::{HashMap, VecDeque};
use std::io::Write;

#[derive(Debug, Clone)]
pub struct Lattice {
    pub k: u32,
    pub dimension: usize,
    /// Integer coordinates in BFS discovery order; position = coords * 2^-k.
    verts: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    adjacency: Vec<Vec<usize>>,
    /// Cumulative degree table for exact stationary sampling.
    cum_degree: Vec<u64>,
}

impl Lattice {
    /// BFS from the grid vertex nearest the anchor, exploring neighbors at
    /// L1 distance one whose connecting segments stay inside the domain.
    pub fn build(domain: &Domain, k: u32) -> Result<Self> {
        assert!(k >= 1, "level must be positive");
        let n = domain.dimension();
        let h = 2f64.powi(-(k as i32));
        let root: Vec<i64> = domain.anchor().iter().map(|&a| (a / h).round() as i64).collect();
        if !domain.contains(&scaled(&root, h)) {
            return Err(Error::AnchorOutsideDomain { k });
        }

        let mut verts: Vec<Vec<i64>> = vec![root.clone()];
        let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
        index.insert(root, 0);
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new()];
        let mut queue = VecDeque::from([0usize]);

        while let Some(cur) = queue.pop_front() {
            let base = verts[cur].clone();
            let pos = scaled(&base, h);
            for axis in 0..n {
                for dir in [1i64, -1] {
                    let mut nb = base.clone();
                    nb[axis] += dir;
                    let nb_pos = scaled(&nb, h);
                    if !domain.segment_in_domain(&pos, &nb_pos)? {
                        continue;
                    }
                    let id = match index.get(&nb) {
                        Some(&id) => id,
                        None => {
                            let id = verts.len();
                            verts.push(nb.clone());
                            index.insert(nb, id);
                            adjacency.push(Vec::new());
                            queue.push_back(id);
                            id
                        }
                    };
                    if !adjacency[cur].contains(&id) {
                        adjacency[cur].push(id);
                    }
                }
            }
        }

        if verts.len() < 2 {
            return Err(Error::LevelTooCoarse { k });
        }

        let mut cum_degree = Vec::with_capacity(verts.len());
        let mut acc = 0u64;
        for adj in &adjacency {
            acc += adj.len() as u64;
            cum_degree.push(acc);
        }

        Ok(Self { k, dimension: n, verts, index, adjacency, cum_degree })
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        2f64.powi(-(self.k as i32))
    }

    /// Discrete time step 2^{-2k} of the level-k walk.
    pub fn time_step(&self) -> f64 {
        2f64.powi(-2 * self.k as i32)
    }

    pub fn int_coords(&self, v: usize) -> &[i64] {
        &self.verts[v]
    }

    pub fn position(&self, v: usize) -> Vec<f64> {
        scaled(&self.verts[v], self.spacing())
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Vertex with full degree 2n (the set S_k).
    pub fn is_interior(&self, v: usize) -> bool {
        self.degree(v) == 2 * self.dimension
    }

    pub fn vertex_id(&self, coords: &[i64]) -> Option<usize> {
        self.index.get(coords).copied()
    }

    pub fn nearest_vertex(&self, p: &[f64]) -> Option<usize> {
        let h = self.spacing();
        let coords: Vec<i64> = p.iter().map(|&x| (x / h).round() as i64).collect();
        self.vertex_id(&coords)
    }

    /// m_k(x) = v_k(x) * 2^{-kn} / (2n).
    pub fn vertex_measure(&self, v: usize) -> f64 {
        let n = self.dimension as f64;
        self.degree(v) as f64 * 2f64.powi(-(self.k as i32) * self.dimension as i32) / (2.0 * n)
    }

    pub fn vertex_measure_total(&self) -> f64 {
        (0..self.len()).map(|v| self.vertex_measure(v)).sum()
    }

    /// m_k-mass fraction carried by vertices below full degree.
    pub fn non_interior_mass_fraction(&self) -> f64 {
        let total: f64 = self.vertex_measure_total();
        let non: f64 = (0..self.len())
            .filter(|&v| !self.is_interior(v))
            .map(|v| self.vertex_measure(v))
            .sum();
        non / total
    }

    pub fn edge_count(&self) -> usize {
        self.cum_degree.last().map(|&c| c as usize / 2).unwrap_or(0)
    }

    /// Exact draw from m_k / |m_k| (degree-proportional).
    pub fn sample_stationary_vertex<R: rand::Rng>(&self, rng: &mut R) -> usize {
        let total = *self.cum_degree.last().unwrap();
        let u = rng.gen_range(0..total);
        self.cum_degree.partition_point(|&c| c <= u)
    }

    /// One-step kernel Q_k(x,y) = 1/v_k(x) on neighbors, reversible for m_k.
    pub fn transition_matrix(&self) -> Result<KernelMatrix> {
        let rows = self
            .adjacency
            .iter()
            .map(|adj| {
                if adj.is_empty() {
                    return Err(Error::BadConfig("isolated vertex in lattice".into()));
                }
                let q = 1.0 / adj.len() as f64;
                Ok(adj.iter().map(|&j| (j, q)).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        let measure = (0..self.len()).map(|v| self.vertex_measure(v)).collect();
        KernelMatrix::new(rows, measure)
    }

    /// Discrete generator L_k f(x) = (1/v) sum_{y<->x} (f(y) - f(x)).
    pub fn generator_apply(&self, f: &[f64], v: usize) -> f64 {
        let adj = &self.adjacency[v];
        let s: f64 = adj.iter().map(|&y| f[y] - f[v]).sum();
        s / adj.len() as f64
    }

    /// Expected one-step coordinate increments (the compensator L_k x_i).
    pub fn coordinate_drift(&self, v: usize) -> Vec<f64> {
        let h = self.spacing();
        let adj = &self.adjacency[v];
        let mut drift = vec![0.0; self.dimension];
        for &y in adj {
            for i in 0..self.dimension {
                drift[i] += (self.verts[y][i] - self.verts[v][i]) as f64 * h;
            }
        }
        for d in &mut drift {
            *d /= adj.len() as f64;
        }
        drift
    }

    /// Discrete Dirichlet energy
    /// E^k(f,f) = (1/4n) sum_{x<->y} 2^{-(n-2)k} (f(x)-f(y))^2,
    /// summed over ordered neighbor pairs.
    pub fn dirichlet_energy(&self, f: &[f64]) -> f64 {
        let n = self.dimension as f64;
        let w = 2f64.powi(-((self.dimension as i32 - 2) * self.k as i32));
        let mut s = 0.0;
        for (x, adj) in self.adjacency.iter().enumerate() {
            for &y in adj {
                let d = f[x] - f[y];
                s += w * d * d;
            }
        }
        s / (4.0 * n)
    }

    /// Evaluate a position function on every vertex.
    pub fn vertex_function<F: Fn(&[f64]) -> f64>(&self, f: F) -> Vec<f64> {
        (0..self.len()).map(|v| f(&self.position(v))).collect()
    }

    /// Vertex CSV (vertex_id, int coords, degree, m_k) in BFS order.
    pub fn write_vertices_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        write!(w, "vertex_id")?;
        for i in 0..self.dimension {
            write!(w, ",c{i}")?;
        }
        writeln!(w, ",degree,m_k")?;
        for v in 0..self.len() {
            write!(w, "{v}")?;
            for c in self.int_coords(v) {
                write!(w, ",{c}")?;
            }
            writeln!(w, ",{},{}", self.degree(v), self.vertex_measure(v))?;
        }
        Ok(())
    }

    /// Edge CSV (vertex_id_a, vertex_id_b), each undirected edge once,
    /// ordered by discovery.
    pub fn write_edges_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "vertex_id_a,vertex_id_b")?;
        for (a, adj) in self.adjacency.iter().enumerate() {
            for &b in adj {
                if a < b {
                    writeln!(w, "{a},{b}")?;
                }
            }
        }
        Ok(())
    }
}

fn scaled(coords: &[i64], h: f64) -> Vec<f64> {
    coords.iter().map(|&c| c as f64 * h).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::CombSchedule;

    #[test]
    fn unit_square_k2_enumeration() {
        let d = Domain::unit_square();
        let lat = Lattice::build(&d, 2).unwrap();
        assert_eq!(lat.len(), 9);
        let mut degs: Vec<usize> = (0..9).map(|v| lat.degree(v)).collect();
        degs.sort_unstable();
        assert_eq!(degs, vec![2, 2, 2, 2, 3, 3, 3, 3, 4]);
        assert!((lat.vertex_measure_total() - 0.375).abs() < 1e-15);
        // center vertex (2,2): m = (4/4) * 2^{-4}
        let center = lat.vertex_id(&[2, 2]).unwrap();
        assert!((lat.vertex_measure(center) - 1.0 / 16.0).abs() < 1e-18);
        assert_eq!(lat.edge_count(), 12);
    }

    #[test]
    fn total_mass_approaches_area() {
        let d = Domain::unit_square();
        let lat = Lattice::build(&d, 7).unwrap();
        let total = lat.vertex_measure_total();
        assert!(total > 0.95 && total < 1.0);
        // exact value: sum v / (2n 2^{2k}) with the k=7 degree census
        assert!((total - 64008.0 / (4.0 * 16384.0)).abs() < 1e-12);
    }

    #[test]
    fn interior_only_mass() {
        let d = Domain::unit_square();
        let lat = Lattice::build(&d, 3).unwrap();
        let all_interior: Vec<usize> = (0..lat.len()).filter(|&v| lat.is_interior(v)).collect();
        for &v in &all_interior {
            assert_eq!(lat.degree(v), 4);
        }
        // interior count (2^k-3)^2 = 25 at k=3
        assert_eq!(all_interior.len(), 25);
    }

    #[test]
    fn detailed_balance_is_exact() {
        let d = Domain::unit_square();
        let lat = Lattice::build(&d, 3).unwrap();
        let q = lat.transition_matrix().unwrap();
        assert!(q.balance_defect() < 1e-15);
        // edge flux m_x q_xy equals 2^{-kn}/(2n) on every edge
        let flux = 2f64.powi(-6) / 4.0;
        for x in 0..lat.len() {
            for &y in lat.neighbors(x) {
                let f = lat.vertex_measure(x) * q.entry(x, y);
                assert!((f - flux).abs() < 1e-18);
            }
        }
    }

    #[test]
    fn generator_on_coordinates_and_quadratics() {
        let d = Domain::unit_square();
        let lat = Lattice::build(&d, 4).unwrap();
        let ones = lat.vertex_function(|_| 1.0);
        let x1 = lat.vertex_function(|p| p[0]);
        let sq = lat.vertex_function(|p| p[0] * p[0] + p[1] * p[1]);
        let scale = 2f64.powi(2 * 4);
        for v in 0..lat.len() {
            assert_eq!(lat.generator_apply(&ones, v), 0.0);
            if lat.is_interior(v) {
                assert!(lat.generator_apply(&x1, v).abs() < 1e-18);
                // 2^{2k} L_k |x|^2 = 1 = (1/2n) Delta |x|^2
                assert!((scale * lat.generator_apply(&sq, v) - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn dirichlet_energy_closed_form() {
        let d = Domain::unit_square();
        for k in 3..=7 {
            let lat = Lattice::build(&d, k).unwrap();
            let f = lat.vertex_function(|p| p[0]);
            let e = lat.dirichlet_energy(&f);
            let m = 2f64.powi(k as i32);
            let expect = 0.25 * (m - 2.0) * (m - 1.0) * 2f64.powi(-2 * k as i32);
            assert!((e - expect).abs() < 1e-12, "k={k}: {e} vs {expect}");
        }
        // k=4 spot value 210/1024
        let lat = Lattice::build(&d, 4).unwrap();
        let f = lat.vertex_function(|p| p[0]);
        assert!((lat.dirichlet_energy(&f) - 210.0 / 1024.0).abs() < 1e-15);
    }

    #[test]
    fn energy_zero_for_constants() {
        let d = Domain::unit_square();
        let lat = Lattice::build(&d, 4).unwrap();
        let c = lat.vertex_function(|_| 3.7);
        assert_eq!(lat.dirichlet_energy(&c), 0.0);
    }

    #[test]
    fn comb_lattice_equals_square_lattice() {
        let square = Domain::unit_square();
        let comb = Domain::comb(CombSchedule::default_with_levels(8)).unwrap();
        // k=1 degenerates to the single center vertex on both domains
        assert!(matches!(Lattice::build(&square, 1), Err(Error::LevelTooCoarse { .. })));
        assert!(matches!(Lattice::build(&comb, 1), Err(Error::LevelTooCoarse { .. })));
        for k in 2..=5 {
            let a = Lattice::build(&square, k).unwrap();
            let b = Lattice::build(&comb, k).unwrap();
            assert_eq!(a.verts, b.verts, "k={k}");
            assert_eq!(a.adjacency, b.adjacency, "k={k}");
        }
    }

    #[test]
    fn too_coarse_level_is_an_error() {
        // a tiny ball around (0.5,0.5) holds the k=1 root but no neighbors
        let d = Domain::ball(vec![0.5, 0.5], 0.1).unwrap();
        match Lattice::build(&d, 1) {
            Err(Error::LevelTooCoarse { k: 1 }) => {}
            other => panic!("expected LevelTooCoarse, got {other:?}"),
        }
    }

    #[test]
    fn anchor_vertex_outside_is_an_error() {
        // thin annulus-like difference: anchor rounds onto the removed core
        let outer = Domain::ball(vec![0.5, 0.5], 0.4).unwrap();
        let inner = Domain::ball(vec![0.5, 0.5], 0.2).unwrap();
        let d = Domain::difference(outer, inner, vec![0.8, 0.5]).unwrap();
        // at k=1 the grid vertex nearest (0.8,0.5) is (0.5,0.5) -> removed
        match Lattice::build(&d, 1) {
            Err(Error::AnchorOutsideDomain { .. }) | Err(Error::LevelTooCoarse { .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }
}
