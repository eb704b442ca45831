//! Writes a generated instance as CSV, reads it back, and emits the
//! solution JSON.

use std::io;

use fleetmin::ingest::{
    generate_instance, parse_trips_csv, write_solution_json, write_trips_csv, GeneratorConfig,
    SolutionJson,
};
use fleetmin::{solve, Instance, TravelTimeModel};

fn main() -> fleetmin::Result<()> {
    let model = TravelTimeModel::Euclidean { speed: 1.0 };
    let generated = generate_instance(&GeneratorConfig::new(8, model.clone(), 42))?;

    let mut csv = Vec::new();
    write_trips_csv(&generated.trips, &mut csv)?;
    print!("{}", String::from_utf8_lossy(&csv));

    let trips = parse_trips_csv(csv.as_slice())?;
    assert_eq!(trips, generated.trips);

    let instance = Instance::new(trips, model);
    let solved = solve(&instance)?;
    write_solution_json(
        &SolutionJson::new(&instance, &solved, None),
        io::stdout().lock(),
    )
}
