//! The certificate pipeline one step at a time: graph, maximum matching,
//! minimum vertex cover, maximum independent set, incompatible trips.

use fleetmin::ingest::{generate_instance, GeneratorConfig};
use fleetmin::{
    build_graph, extract_pairs, independent_set, koenig_cover, max_matching, verify_certificate,
    verify_matching, IncompatibleCertificate, TravelTimeModel,
};

fn main() -> fleetmin::Result<()> {
    let instance = generate_instance(&GeneratorConfig::new(
        40,
        TravelTimeModel::Euclidean { speed: 1.0 },
        11,
    ))?;
    let n = instance.n();

    let graph = build_graph(&instance)?;
    println!("n = {n}, edges = {}", graph.edge_count());

    let matching = max_matching(&graph);
    verify_matching(&graph, &matching).expect("Hopcroft-Karp returned a non-maximum matching");
    println!("maximum matching: {} pairs", matching.size());

    let cover = koenig_cover(&graph, &matching)?;
    println!(
        "vertex cover: {} drop-offs + {} pickups = {}",
        cover.dropoff_side.len(),
        cover.pickup_side.len(),
        cover.size()
    );

    let ind = independent_set(&graph, &cover)?;
    println!("independent set: {} = 2n - |C|", ind.size());

    let trip_indices = extract_pairs(&ind, n)?;
    println!("trips with both ends in the set: {trip_indices:?}");

    let cert = IncompatibleCertificate { trip_indices };
    println!(
        "fleet size n - m = {}, certificate size {}",
        n - matching.size(),
        cert.size()
    );
    println!(
        "certificate valid: {}",
        verify_certificate(&instance, &cert)?
    );
    Ok(())
}
