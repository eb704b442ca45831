//! Turning a matching into vehicle trajectories, and the top-level solver.

use std::fmt;

use crate::compat::{build_graph, compatible_directed};
use crate::duality::{certificate_from_matching, IncompatibleCertificate};
use crate::error::{FleetError, Result};
use crate::matching::{max_matching, Matching};
use crate::model::Instance;

/// One vehicle's schedule: 1-based trip indices in service order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub trip_indices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FleetSolution {
    pub trajectories: Vec<Trajectory>,
    pub fleet_size: usize,
    pub matching_size: usize,
}

impl FleetSolution {
    pub fn from_trajectories(trajectories: Vec<Vec<usize>>, n: usize) -> Self {
        let fleet_size = trajectories.len();
        Self {
            trajectories: trajectories
                .into_iter()
                .map(|trip_indices| Trajectory { trip_indices })
                .collect(),
            fleet_size,
            matching_size: n.saturating_sub(fleet_size),
        }
    }

    /// The matching formed by consecutive trips of every trajectory.
    pub fn to_matching(&self, n: usize) -> Matching {
        let pairs = self
            .trajectories
            .iter()
            .flat_map(|t| t.trip_indices.windows(2).map(|w| (w[0], w[1])))
            .collect();
        Matching::new(n, pairs)
    }
}

/// Splits the trips into one trajectory per pickup that no drop-off is
/// matched to, following matched successors from each start.
///
/// Works for any matching of the instance's graph, maximum or not, and yields
/// exactly `n - |M|` trajectories. A successor chain that closes into a cycle
/// can only come from degenerate zero-duration trips and is reported as
/// [`FleetError::SuccessorCycle`].
pub fn decompose_trajectories(instance: &Instance, matching: &Matching) -> Result<FleetSolution> {
    let n = instance.n();
    if matching.n() != n {
        return Err(FleetError::InvalidInput(format!(
            "matching over {} trips for an instance of {n}",
            matching.n()
        )));
    }
    let mut visited = vec![false; n];
    let mut trajectories = Vec::new();
    for start in (1..=n).filter(|&j| matching.predecessor(j).is_none()) {
        let mut path = Vec::new();
        let mut current = Some(start);
        while let Some(i) = current {
            if visited[i - 1] {
                return Err(FleetError::SuccessorCycle { cycle: path });
            }
            visited[i - 1] = true;
            path.push(i);
            current = matching.successor(i);
        }
        trajectories.push(Trajectory { trip_indices: path });
    }
    if let Some(first) = (1..=n).find(|&i| !visited[i - 1]) {
        // Every unvisited trip has a predecessor, so it lies on a cycle.
        let mut cycle = vec![first];
        let mut next = matching.successor(first);
        while let Some(i) = next.filter(|&i| i != first && cycle.len() <= n) {
            cycle.push(i);
            next = matching.successor(i);
        }
        return Err(FleetError::SuccessorCycle { cycle });
    }
    Ok(FleetSolution {
        fleet_size: trajectories.len(),
        trajectories,
        matching_size: matching.size(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolutionDefect {
    MissingTrip { index: usize },
    DuplicateTrip { index: usize },
    IndexOutOfRange { index: usize },
    InfeasiblePair { from: usize, to: usize },
    OrderViolation { from: usize, to: usize },
    EmptyTrajectory,
    FleetSizeMismatch { claimed: usize, actual: usize },
}

impl SolutionDefect {
    pub fn reason(&self) -> &'static str {
        match self {
            SolutionDefect::MissingTrip { .. } => "missing trip",
            SolutionDefect::DuplicateTrip { .. } => "duplicate trip",
            SolutionDefect::IndexOutOfRange { .. } => "index out of range",
            SolutionDefect::InfeasiblePair { .. } => "infeasible consecutive pair",
            SolutionDefect::OrderViolation { .. } => "order violation",
            SolutionDefect::EmptyTrajectory => "empty trajectory",
            SolutionDefect::FleetSizeMismatch { .. } => "fleet size mismatch",
        }
    }
}

impl fmt::Display for SolutionDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolutionDefect::MissingTrip { index }
            | SolutionDefect::DuplicateTrip { index }
            | SolutionDefect::IndexOutOfRange { index } => {
                write!(f, "{}: trip {index}", self.reason())
            }
            SolutionDefect::InfeasiblePair { from, to }
            | SolutionDefect::OrderViolation { from, to } => {
                write!(f, "{}: {from} -> {to}", self.reason())
            }
            SolutionDefect::EmptyTrajectory => write!(f, "{}", self.reason()),
            SolutionDefect::FleetSizeMismatch { claimed, actual } => {
                write!(
                    f,
                    "{}: claimed {claimed}, {actual} trajectories",
                    self.reason()
                )
            }
        }
    }
}

/// Re-checks a solution from scratch: the trajectories partition all trips,
/// drop-off times never decrease along a trajectory, and each consecutive pair
/// is directed-compatible under the instance's mode.
pub fn verify_solution(
    instance: &Instance,
    solution: &FleetSolution,
) -> std::result::Result<(), SolutionDefect> {
    let n = instance.n();
    if solution.fleet_size != solution.trajectories.len() {
        return Err(SolutionDefect::FleetSizeMismatch {
            claimed: solution.fleet_size,
            actual: solution.trajectories.len(),
        });
    }
    let mut seen = vec![false; n];
    for trajectory in &solution.trajectories {
        if trajectory.trip_indices.is_empty() {
            return Err(SolutionDefect::EmptyTrajectory);
        }
        for &index in &trajectory.trip_indices {
            if index == 0 || index > n {
                return Err(SolutionDefect::IndexOutOfRange { index });
            }
            if std::mem::replace(&mut seen[index - 1], true) {
                return Err(SolutionDefect::DuplicateTrip { index });
            }
        }
        for w in trajectory.trip_indices.windows(2) {
            let (a, b) = (&instance.trips[w[0] - 1], &instance.trips[w[1] - 1]);
            if !compatible_directed(&instance.model, a, b, instance.delta).unwrap_or(false) {
                return Err(SolutionDefect::InfeasiblePair {
                    from: w[0],
                    to: w[1],
                });
            }
            if b.dropoff_time < a.dropoff_time {
                return Err(SolutionDefect::OrderViolation {
                    from: w[0],
                    to: w[1],
                });
            }
        }
    }
    match seen.iter().position(|&s| !s) {
        Some(missing) => Err(SolutionDefect::MissingTrip { index: missing + 1 }),
        None => Ok(()),
    }
}

/// Everything the solver produces for one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Solved {
    pub edge_count: usize,
    pub matching: Matching,
    pub solution: FleetSolution,
    pub certificate: IncompatibleCertificate,
}

/// Minimum fleet plus the incompatibility certificate. In classical mode
/// `solution.fleet_size == certificate.size()`.
pub fn solve(instance: &Instance) -> Result<Solved> {
    let graph = build_graph(instance)?;
    let matching = max_matching(&graph);
    let solution = decompose_trajectories(instance, &matching)?;
    let certificate = certificate_from_matching(&graph, &matching)?;
    Ok(Solved {
        edge_count: graph.edge_count(),
        matching,
        solution,
        certificate,
    })
}
