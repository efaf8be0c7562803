use rbm_core::geometry::Domain;
use rbm_core::lattice::Lattice;
use rbm_core::myopic::{simulate_myopic, MyopicConfig, MyopicView};
use rbm_core::rng::{StreamKey, Substream};
use rbm_core::walk::simulate_discrete_walk;
use std::io::Write;

fn main() {
    let domain = Domain::unit_square();
    let start = [0.3125, 0.40625];
    let t = 0.15;
    let paths = 20_000u64;

    let lattice = Lattice::build(&domain, 8).unwrap();
    let sv = lattice.nearest_vertex(&start).unwrap();
    let mut f = std::fs::File::create("/root/notes/lat8_endpoints.csv").unwrap();
    for p in 0..paths {
        let chain = simulate_discrete_walk(&lattice, sv, 2.0 * t, StreamKey::new(707, p, Substream::Walk));
        let pos = lattice.position(*chain.vertices.last().unwrap());
        writeln!(f, "{},{}", pos[0], pos[1]).unwrap();
    }

    let mut mcfg = MyopicConfig::new(15);
    mcfg.horizon = t;
    let mut f = std::fs::File::create("/root/notes/myo15_endpoints.csv").unwrap();
    for p in 0..paths {
        let traj = simulate_myopic(&domain, &start, &mcfg, MyopicView::Linear, StreamKey::new(708, p, Substream::Segment)).unwrap();
        let pos = traj.position(traj.len() - 1);
        writeln!(f, "{},{}", pos[0], pos[1]).unwrap();
    }
}
