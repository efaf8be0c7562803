//! Property tests for the geometric predicates and path functionals.

use proptest::prelude::*;
use rbm_core::geometry::Domain;
use rbm_core::stats::{occupation_histogram, oscillation, GridSpec, TimeWeighting};
use rbm_core::trajectory::{PathKind, Trajectory};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // segment containment implies membership along the whole segment
    #[test]
    fn segment_containment_is_pointwise(
        ax in 0.01f64..0.99, ay in 0.01f64..0.99,
        bx in 0.01f64..0.99, by in 0.01f64..0.99,
    ) {
        let l = Domain::lshape();
        let p = [ax, ay];
        let q = [bx, by];
        if l.contains(&p) && l.contains(&q) && l.segment_in_domain(&p, &q).unwrap() {
            for i in 1..100 {
                let t = i as f64 / 100.0;
                let y = [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])];
                prop_assert!(l.contains(&y), "interior point {y:?} escaped");
            }
        }
    }

    // convexity: both endpoints inside a ball makes the segment inside
    #[test]
    fn convex_segments_always_inside(
        ax in -0.99f64..0.99, ay in -0.99f64..0.99,
        bx in -0.99f64..0.99, by in -0.99f64..0.99,
    ) {
        let ball = Domain::unit_disk();
        let p = [ax, ay];
        let q = [bx, by];
        prop_assume!(ball.contains(&p) && ball.contains(&q));
        prop_assert!(ball.segment_in_domain(&p, &q).unwrap());
    }

    // certified boundary distance: the open ball of that radius stays inside
    #[test]
    fn distance_lower_bound_certifies_a_ball(
        x in 0.01f64..0.99, y in 0.01f64..0.99,
        dir in 0.0f64..std::f64::consts::TAU,
        frac in 0.0f64..0.999,
    ) {
        for domain in [Domain::unit_square(), Domain::lshape(), Domain::snowflake(2).unwrap()] {
            let p = [x, y];
            if domain.contains(&p) {
                let d = domain.distance_to_boundary(&p).unwrap();
                let r = d * frac * (1.0 - 1e-9);
                let q = [p[0] + r * dir.cos(), p[1] + r * dir.sin()];
                prop_assert!(domain.contains(&q), "{}: {q:?} at r={r} escaped d={d}", domain.kind());
            }
        }
    }

    // occupation histograms conserve the integrated time
    #[test]
    fn occupation_mass_conservation(raw in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 2..60)) {
        let times: Vec<f64> = (0..raw.len()).map(|i| i as f64 * 0.05).collect();
        let positions: Vec<Vec<f64>> = raw.iter().map(|&(a, b)| vec![a, b]).collect();
        let total_time = times.last().unwrap() - times[0];
        for kind in [PathKind::Linear, PathKind::Step] {
            let traj = Trajectory::new(times.clone(), positions.clone(), kind, 1.0);
            let grid = GridSpec { lo: vec![0.0, 0.0], hi: vec![1.0, 1.0], cells: vec![8, 8] };
            let h = occupation_histogram(&[traj], &grid, TimeWeighting::StepDuration).unwrap();
            prop_assert!((h.mass.iter().sum::<f64>() - total_time).abs() < 1e-9);
        }
    }

    // oscillation grows with the window width rho
    #[test]
    fn oscillation_monotone(raw in prop::collection::vec(0.0f64..1.0, 4..40)) {
        let times: Vec<f64> = (0..raw.len()).map(|i| i as f64 / (raw.len() - 1) as f64).collect();
        let positions: Vec<Vec<f64>> = raw.iter().map(|&v| vec![v]).collect();
        let traj = Trajectory::new(times, positions, PathKind::Linear, 1.0);
        let mut prev = 0.0;
        for i in 1..=8 {
            let o = oscillation(&traj, i as f64 * 0.125, 0.0, 1.0).unwrap();
            prop_assert!(o >= prev - 1e-12);
            prev = o;
        }
    }

    // double reversal is the identity on continuous paths with dyadic times
    #[test]
    fn double_reversal_identity(raw in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 2..33)) {
        let times: Vec<f64> = (0..raw.len()).map(|i| i as f64 * 0.03125).collect();
        let t_end = *times.last().unwrap();
        let positions: Vec<Vec<f64>> = raw.iter().map(|&(a, b)| vec![a, b]).collect();
        let traj = Trajectory::new(times, positions, PathKind::Linear, 1.0);
        let back = traj.time_reverse(t_end).unwrap().time_reverse(t_end).unwrap();
        prop_assert_eq!(traj, back);
    }
}
