//! Cross-checks the matching-based fleet size and certificate against
//! exhaustive search on small random instances.

use fleetmin::oracle::{agreement, OracleBounds, SearchConfig};
use fleetmin::TravelTimeModel;

fn main() -> fleetmin::Result<()> {
    let config = SearchConfig::new(200, 10, None, TravelTimeModel::Manhattan { speed: 1.0 }, 5);
    let bounds = OracleBounds::default();
    let mut equal = 0;
    for case in 0..config.cases {
        let a = agreement(&config.case_instance(case)?, &bounds)?;
        if a.holds() {
            equal += 1;
        } else {
            println!("case {case}: {a:?}");
        }
    }
    println!(
        "{equal}/{} instances: fleet = certificate = brute force",
        config.cases
    );
    Ok(())
}
