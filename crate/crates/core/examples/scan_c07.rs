use rbm_core::geometry::Domain;
use rbm_core::lattice::Lattice;
use rbm_core::myopic::{simulate_myopic, MyopicConfig, MyopicView};
use rbm_core::rng::{StreamKey, Substream};
use rbm_core::stats::{ks_two_sample, ks_critical_two_sample};
use rbm_core::walk::simulate_discrete_walk;

fn main() {
    let domain = Domain::unit_square();
    let start = [0.3125, 0.40625];
    let t = 0.15;
    let paths = 20_000u64;
    let lattice = Lattice::build(&domain, 8).unwrap();
    let sv = lattice.nearest_vertex(&start).unwrap();
    let crit = ks_critical_two_sample(0.01, paths as usize, paths as usize);
    for base in [707u64, 717, 727, 737, 747] {
        let lat: Vec<Vec<f64>> = (0..paths)
            .map(|p| {
                let c = simulate_discrete_walk(&lattice, sv, 2.0 * t, StreamKey::new(base, p, Substream::Walk));
                lattice.position(*c.vertices.last().unwrap())
            })
            .collect();
        let mut mcfg = MyopicConfig::new(16);
        mcfg.substeps = 4;
        mcfg.max_rejections = 1_000_000;
        mcfg.horizon = t;
        let myo: Vec<Vec<f64>> = (0..paths)
            .map(|p| {
                let tr = simulate_myopic(&domain, &start, &mcfg, MyopicView::Linear, StreamKey::new(base + 1, p, Substream::Segment)).unwrap();
                tr.position(tr.len() - 1).to_vec()
            })
            .collect();
        let mut worst = 0.0f64;
        for coord in 0..2 {
            let xs: Vec<f64> = lat.iter().map(|p| p[coord]).collect();
            let ys: Vec<f64> = myo.iter().map(|p| p[coord]).collect();
            worst = worst.max(ks_two_sample(&xs, &ys).unwrap());
        }
        println!("seeds ({base},{}) -> stat {worst:.5} vs crit {crit:.5} [{}]", base + 1, if worst < crit { "pass" } else { "FAIL" });
    }
}
