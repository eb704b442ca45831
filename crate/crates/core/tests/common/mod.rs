#![allow(dead_code)]

use fleetmin::ingest::{generate_instance, GeneratorConfig};
use fleetmin::rng::{case_seed, SplitMix64};
use fleetmin::{Instance, Location, TravelTimeModel, Trip};

pub fn line_trip(id: u64, p: f64, tp: f64, d: f64, td: f64) -> Trip {
    Trip::new(id, Location::on_line(p), tp, Location::on_line(d), td)
}

pub fn fixture_a() -> Instance {
    Instance::new(
        vec![
            line_trip(1, 0.0, 0.0, 10.0, 10.0),
            line_trip(2, 12.0, 13.0, 20.0, 21.0),
            line_trip(3, 0.0, 2.0, 5.0, 7.0),
        ],
        TravelTimeModel::Line1D,
    )
}

pub fn fixture_b(delta: Option<f64>) -> Instance {
    Instance::new(
        vec![
            line_trip(1, 0.0, 0.0, 1.0, 1.0),
            line_trip(2, 2.0, 3.0, 3.0, 4.0),
            line_trip(3, 4.0, 6.0, 5.0, 7.0),
        ],
        TravelTimeModel::Line1D,
    )
    .with_delta(delta)
}

pub const FIXTURE_A_CSV: &str =
    "id,px,py,pt,dx,dy,dt\n1,0,0,0,10,0,10\n2,12,0,13,20,0,21\n3,0,0,2,5,0,7\n";

/// Strict-metric Euclidean instance number `case` of a seeded batch, with
/// `n` drawn from `1..=n_max`.
pub fn euclidean_case(seed: u64, case: u64, n_max: usize) -> Instance {
    let mut rng = SplitMix64::new(case_seed(seed, case));
    let n = rng.range_inclusive(1, n_max);
    let config = GeneratorConfig::new(n, TravelTimeModel::Euclidean { speed: 1.0 }, rng.next_u64())
        .slack(1.2)
        .horizon(3.0);
    generate_instance(&config).unwrap()
}

/// Integer-valued line instance with many exact ties and, unless
/// `metric`, durations that may be shorter than the drive. Durations are
/// positive, so successor chains cannot cycle.
pub fn grid_case(seed: u64, case: u64, n_max: usize, metric: bool) -> Instance {
    let mut rng = SplitMix64::new(case_seed(seed, case));
    let n = rng.range_inclusive(1, n_max);
    let trips = (1..=n as u64)
        .map(|id| {
            let p = rng.range_inclusive(0, 6) as f64;
            let d = rng.range_inclusive(0, 6) as f64;
            let tp = rng.range_inclusive(0, 12) as f64;
            let min = if metric { (p - d).abs().max(1.0) } else { 1.0 };
            let td = tp + min + rng.range_inclusive(0, 2) as f64;
            line_trip(id, p, tp, d, td)
        })
        .collect();
    Instance::new(trips, TravelTimeModel::Line1D)
}
