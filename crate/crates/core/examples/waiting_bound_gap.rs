//! With an upper bound on idle time between trips, the fleet minimum can
//! exceed the largest set of pairwise-incompatible trips. This shows a
//! small instance where it does and then searches random ones for more.

use fleetmin::oracle::{duality_gap, search_counterexample, OracleBounds, SearchConfig};
use fleetmin::{solve, Instance, Location, TravelTimeModel, Trip};

fn trip(id: u64, p: f64, tp: f64, d: f64, td: f64) -> Trip {
    Trip::new(id, Location::on_line(p), tp, Location::on_line(d), td)
}

fn main() -> fleetmin::Result<()> {
    let trips = vec![
        trip(1, 0.0, 0.0, 1.0, 1.0),
        trip(2, 1.0, 2.0, 2.0, 3.0),
        trip(3, 2.0, 4.0, 3.0, 5.0),
    ];
    for delta in [None, Some(1.0)] {
        let instance = Instance::new(trips.clone(), TravelTimeModel::Line1D).with_delta(delta);
        let solved = solve(&instance)?;
        let report = duality_gap(&instance, &OracleBounds::default())?;
        println!(
            "delta {delta:?}: fleet {}, max incompatible {} {:?}, gap {}",
            solved.solution.fleet_size, report.max_incompatible, report.witness_set, report.gap
        );
    }

    let config = SearchConfig::new(
        2000,
        8,
        Some(0.5),
        TravelTimeModel::Euclidean { speed: 1.0 },
        3,
    );
    match search_counterexample(&config)? {
        Some((case, instance, report)) => {
            println!(
                "search: case {case}, n = {}, gap {}",
                instance.n(),
                report.gap
            )
        }
        None => println!("search: no gap in {} cases", config.cases),
    }
    Ok(())
}
