//! The directed feasibility predicate between trips and the bipartite
//! compatibility graph built from it.
//!
//! Drop-off node `d_i` is joined to pickup node `p_j` when a vehicle that
//! finishes trip `i` can reach the pickup of trip `j` in time:
//! `time(d_i, p_j) <= T^p_j - T^d_i`. With a waiting bound `delta` the window
//! must also satisfy `T^p_j - T^d_i <= time(d_i, p_j) + delta`. Comparisons
//! are exact, with no epsilon.

use crate::error::{FleetError, Result};
use crate::model::{travel_time, validate_instance, Instance, TravelTimeModel, Trip};

/// Can one vehicle serve `from` and then `to`?
pub fn compatible_directed(
    model: &TravelTimeModel,
    from: &Trip,
    to: &Trip,
    delta: Option<f64>,
) -> Result<bool> {
    if from.id == to.id {
        return Err(FleetError::InvalidInput(format!(
            "trip {} compared with itself",
            from.id
        )));
    }
    window_ok(model, from, to, delta)
}

/// True when the pair is compatible in either direction.
pub fn compatible_pair(
    model: &TravelTimeModel,
    a: &Trip,
    b: &Trip,
    delta: Option<f64>,
) -> Result<bool> {
    Ok(compatible_directed(model, a, b, delta)? || compatible_directed(model, b, a, delta)?)
}

fn window_ok(model: &TravelTimeModel, from: &Trip, to: &Trip, delta: Option<f64>) -> Result<bool> {
    let window = to.pickup_time - from.dropoff_time;
    if window < 0.0 {
        return Ok(false);
    }
    let drive = travel_time(model, &from.dropoff, &to.pickup)?;
    Ok(drive <= window && delta.is_none_or(|delta| window <= drive + delta))
}

/// Bipartite graph on drop-off nodes `D` and pickup nodes `P`, one of each
/// per trip, stored drop-off-major with ascending pickup indices.
#[derive(Debug, Clone, PartialEq)]
pub struct CompatibilityGraph {
    n: usize,
    // 0-based pickup indices per 0-based drop-off index.
    adjacency: Vec<Vec<u32>>,
    edge_count: usize,
    delta: Option<f64>,
}

impl CompatibilityGraph {
    /// Builds a graph from 1-based `(dropoff, pickup)` edges. Self edges and
    /// out-of-range indices are rejected; duplicates are merged.
    pub fn from_edges(n: usize, edges: &[(usize, usize)], delta: Option<f64>) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        for &(i, j) in edges {
            if i == 0 || j == 0 || i > n || j > n {
                return Err(FleetError::InvalidInput(format!(
                    "edge ({i}, {j}) outside 1..={n}"
                )));
            }
            if i == j {
                return Err(FleetError::InvalidInput(format!("self edge ({i}, {i})")));
            }
            adjacency[i - 1].push((j - 1) as u32);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self::from_adjacency(adjacency, delta))
    }

    fn from_adjacency(adjacency: Vec<Vec<u32>>, delta: Option<f64>) -> Self {
        let edge_count = adjacency.iter().map(Vec::len).sum();
        Self {
            n: adjacency.len(),
            adjacency,
            edge_count,
            delta,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn delta(&self) -> Option<f64> {
        self.delta
    }

    /// Pickup indices adjacent to drop-off `i` (both 1-based), ascending.
    pub fn pickups_of(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[i - 1].iter().map(|&j| j as usize + 1)
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        (1..=self.n).contains(&i)
            && j >= 1
            && self.adjacency[i - 1]
                .binary_search(&((j - 1) as u32))
                .is_ok()
    }

    /// All edges as 1-based `(dropoff, pickup)` pairs, drop-off-major.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..=self.n).flat_map(move |i| self.pickups_of(i).map(move |j| (i, j)))
    }

    /// Heap bytes held by the adjacency lists; linear in `n + |E|`.
    pub fn heap_bytes(&self) -> usize {
        self.adjacency.capacity() * std::mem::size_of::<Vec<u32>>()
            + self
                .adjacency
                .iter()
                .map(|l| l.capacity() * 4)
                .sum::<usize>()
    }

    pub(crate) fn adjacency0(&self, i0: usize) -> &[u32] {
        &self.adjacency[i0]
    }
}

/// Builds the compatibility graph of a valid instance.
///
/// Trips are sorted by pickup time; for each drop-off only pickups with
/// `T^p_j >= T^d_i` are examined, since travel times are non-negative.
pub fn build_graph(instance: &Instance) -> Result<CompatibilityGraph> {
    validate_instance(instance, false).into_result()?;
    let trips = &instance.trips;
    let n = trips.len();
    if n > u32::MAX as usize {
        return Err(FleetError::InvalidInput(format!(
            "{n} trips exceed index range"
        )));
    }

    let mut by_pickup: Vec<u32> = (0..n as u32).collect();
    by_pickup.sort_by(|&a, &b| {
        trips[a as usize]
            .pickup_time
            .total_cmp(&trips[b as usize].pickup_time)
            .then(a.cmp(&b))
    });
    let pickup_times: Vec<f64> = by_pickup
        .iter()
        .map(|&j| trips[j as usize].pickup_time)
        .collect();

    let mut adjacency = Vec::with_capacity(n);
    for (i, from) in trips.iter().enumerate() {
        let start = pickup_times.partition_point(|&t| t < from.dropoff_time);
        let mut list = Vec::new();
        for &j in &by_pickup[start..] {
            if j as usize != i
                && window_ok(&instance.model, from, &trips[j as usize], instance.delta)?
            {
                list.push(j);
            }
        }
        list.sort_unstable();
        list.shrink_to_fit();
        adjacency.push(list);
    }
    Ok(CompatibilityGraph::from_adjacency(
        adjacency,
        instance.delta,
    ))
}
