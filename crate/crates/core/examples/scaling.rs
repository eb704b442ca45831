//! Solve time and edge count for growing random instances.
//! Run with `--release`.

use std::time::Instant;

use fleetmin::ingest::{generate_instance, GeneratorConfig};
use fleetmin::{solve, TravelTimeModel};

fn main() -> fleetmin::Result<()> {
    println!("{:>6} {:>10} {:>6} {:>10}", "n", "edges", "fleet", "ms");
    for n in [250, 500, 1000, 2000, 4000] {
        let instance = generate_instance(&GeneratorConfig::new(
            n,
            TravelTimeModel::Euclidean { speed: 1.0 },
            1,
        ))?;
        let start = Instant::now();
        let solved = solve(&instance)?;
        let ms = start.elapsed().as_secs_f64() * 1e3;
        println!(
            "{n:>6} {:>10} {:>6} {ms:>10.1}",
            solved.edge_count, solved.solution.fleet_size
        );
    }
    Ok(())
}
