use fleetmin::oracle::{brute_min_fleet, OracleBounds};
use fleetmin::rng::SplitMix64;
use fleetmin::{
    build_graph, decompose_trajectories, max_matching, solve, verify_solution, Matching,
};

mod common;
use common::{euclidean_case, grid_case};

#[test]
fn any_matching_gives_n_minus_m_feasible_trajectories() {
    let mut rng = SplitMix64::new(404);
    for case in 0..200 {
        for delta in [None, Some(0.5)] {
            let instance = euclidean_case(31, case, 40).with_delta(delta);
            let n = instance.n();
            let maximum = max_matching(&build_graph(&instance).unwrap());
            for keep_percent in [0, 30, 70, 100] {
                let pairs: Vec<_> = maximum
                    .pairs()
                    .iter()
                    .copied()
                    .filter(|_| rng.range_inclusive(1, 100) <= keep_percent)
                    .collect();
                let sub = Matching::new(n, pairs);
                let solution = decompose_trajectories(&instance, &sub).unwrap();
                assert_eq!(solution.fleet_size, n - sub.size(), "case {case}");
                assert_eq!(solution.trajectories.len(), solution.fleet_size);
                assert_eq!(verify_solution(&instance, &solution), Ok(()), "case {case}");
                let rebuilt = solution.to_matching(n);
                assert_eq!(rebuilt.size(), n - solution.fleet_size);
                let mut a = rebuilt.pairs().to_vec();
                let mut b = sub.pairs().to_vec();
                a.sort_unstable();
                b.sort_unstable();
                assert_eq!(a, b);
            }
        }
    }
}

#[test]
fn solve_is_optimal_against_brute_force() {
    let bounds = OracleBounds::default();
    for case in 0..150 {
        let instance = grid_case(55, case, 12, false);
        let solved = solve(&instance).unwrap();
        assert_eq!(
            solved.solution.fleet_size,
            brute_min_fleet(&instance, &bounds).unwrap(),
            "case {case}"
        );
        assert_eq!(solved.solution.fleet_size, solved.certificate.size());
    }
}
