//! Minimum fleet for three trips on a line, with its optimality certificate.

use fleetmin::{solve, verify_certificate, Instance, Location, TravelTimeModel, Trip};

fn trip(id: u64, p: f64, tp: f64, d: f64, td: f64) -> Trip {
    Trip::new(id, Location::on_line(p), tp, Location::on_line(d), td)
}

fn main() -> fleetmin::Result<()> {
    let instance = Instance::new(
        vec![
            trip(1, 0.0, 0.0, 10.0, 10.0),
            trip(2, 12.0, 13.0, 20.0, 21.0),
            trip(3, 0.0, 2.0, 5.0, 7.0),
        ],
        TravelTimeModel::Line1D,
    );
    let solved = solve(&instance)?;

    println!("fleet size: {}", solved.solution.fleet_size);
    for (k, t) in solved.solution.trajectories.iter().enumerate() {
        let ids: Vec<u64> = t
            .trip_indices
            .iter()
            .map(|&i| instance.trip(i).expect("index in range").id)
            .collect();
        println!("  vehicle {}: trips {:?}", k + 1, ids);
    }
    println!(
        "pairwise-incompatible trips: {:?}",
        solved.certificate.trip_indices
    );
    println!(
        "certificate valid: {}",
        verify_certificate(&instance, &solved.certificate)?
    );
    Ok(())
}
