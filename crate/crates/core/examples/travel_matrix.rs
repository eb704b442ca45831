//! Trips between numbered sites with travel times from an explicit,
//! asymmetric matrix.

use fleetmin::{solve, validate_instance, Instance, Location, TravelTimeModel, Trip};

fn main() -> fleetmin::Result<()> {
    // One-way streets: 0 -> 1 is quick, 1 -> 0 is not.
    let model = TravelTimeModel::matrix(vec![
        vec![0.0, 1.0, 2.0],
        vec![4.0, 0.0, 1.0],
        vec![1.0, 3.0, 0.0],
    ]);
    let site = Location::site;
    let instance = Instance::new(
        vec![
            Trip::new(1, site(0), 0.0, site(1), 1.0),
            Trip::new(2, site(1), 1.5, site(2), 2.5),
            Trip::new(3, site(1), 3.0, site(0), 7.0),
            Trip::new(4, site(0), 6.0, site(2), 8.0),
        ],
        model,
    );
    let report = validate_instance(&instance, true);
    println!("valid: {}", report.is_valid());

    let solved = solve(&instance)?;
    println!("fleet size: {}", solved.solution.fleet_size);
    for t in &solved.solution.trajectories {
        println!("  {:?}", t.trip_indices);
    }
    println!("certificate: {:?}", solved.certificate.trip_indices);
    Ok(())
}
