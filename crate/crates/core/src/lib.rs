//! Minimum fleet sizing for historical trip sets.
//!
//! Trips become nodes of a bipartite compatibility graph (drop-off side and
//! pickup side). A maximum matching of size `m` yields a covering of all `n`
//! trips with `n - m` vehicles, and König's theorem turns the same matching
//! into a set of `n - m` pairwise-incompatible trips, which certifies that no
//! smaller fleet exists.
//!
//! ```
//! use fleetmin::{solve, Instance, Location, TravelTimeModel, Trip};
//!
//! let trips = vec![
//!     Trip::new(1, Location::on_line(0.0), 0.0, Location::on_line(10.0), 10.0),
//!     Trip::new(2, Location::on_line(12.0), 13.0, Location::on_line(20.0), 21.0),
//!     Trip::new(3, Location::on_line(0.0), 2.0, Location::on_line(5.0), 7.0),
//! ];
//! let instance = Instance::new(trips, TravelTimeModel::Line1D);
//! let solved = solve(&instance).unwrap();
//! assert_eq!(solved.solution.fleet_size, 2);
//! assert_eq!(solved.certificate.trip_indices, vec![2, 3]);
//! ```
//!
//! Trip indices in every public interface are 1-based, following the order of
//! `Instance::trips`.

pub mod cli;
pub mod compat;
pub mod duality;
mod error;
pub mod fleet;
pub mod ingest;
pub mod matching;
pub mod model;
pub mod oracle;
pub mod rng;

pub use compat::{build_graph, compatible_directed, compatible_pair, CompatibilityGraph};
pub use duality::{
    build_certificate, certificate_from_matching, extract_pairs, independent_set, koenig_cover,
    verify_certificate, IncompatibleCertificate, IndependentSet, VertexCover,
};
pub use error::{FleetError, Result};
pub use fleet::{
    decompose_trajectories, solve, verify_solution, FleetSolution, SolutionDefect, Solved,
    Trajectory,
};
pub use matching::{max_matching, verify_matching, Matching, MatchingDefect};
pub use model::{
    travel_time, validate_instance, Instance, Location, TravelMatrix, TravelTimeModel, Trip,
    ValidationReport, Violation,
};
