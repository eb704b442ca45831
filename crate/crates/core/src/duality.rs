//! From a maximum matching to a set of pairwise-incompatible trips.
//!
//! The chain is: maximum matching of size `m` → König vertex cover `C` with
//! `|C| = m` → independent set `I = (D ∪ P) \ C` with `|I| = 2n - m = n + k`
//! → `k` trip indices whose drop-off and pickup nodes both lie in `I`. No
//! graph edge joins two nodes of `I`, so no two of those trips can share a
//! vehicle in either order, and `k = n - m` equals the fleet size.

use std::collections::{BTreeSet, VecDeque};

use crate::compat::{build_graph, compatible_pair, CompatibilityGraph};
use crate::error::{FleetError, Result};
use crate::matching::{max_matching, verify_matching, Matching, MatchingDefect};
use crate::model::Instance;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VertexCover {
    pub dropoff_side: BTreeSet<usize>,
    pub pickup_side: BTreeSet<usize>,
}

impl VertexCover {
    pub fn size(&self) -> usize {
        self.dropoff_side.len() + self.pickup_side.len()
    }

    pub fn covers(&self, dropoff: usize, pickup: usize) -> bool {
        self.dropoff_side.contains(&dropoff) || self.pickup_side.contains(&pickup)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IndependentSet {
    pub dropoff_side: BTreeSet<usize>,
    pub pickup_side: BTreeSet<usize>,
}

impl IndependentSet {
    pub fn size(&self) -> usize {
        self.dropoff_side.len() + self.pickup_side.len()
    }
}

/// Trips, by 1-based index, no two of which one vehicle can serve.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IncompatibleCertificate {
    pub trip_indices: Vec<usize>,
}

impl IncompatibleCertificate {
    pub fn size(&self) -> usize {
        self.trip_indices.len()
    }
}

/// Constructive König: with `U` the unmatched drop-offs and `Z` everything
/// reachable from `U` along alternating paths (free edges `d -> p`, matched
/// edges `p -> d`), the cover is `(D \ Z) ∪ (P ∩ Z)`.
///
/// Fails when `matching` is not a maximum matching of `graph`.
pub fn koenig_cover(graph: &CompatibilityGraph, matching: &Matching) -> Result<VertexCover> {
    verify_matching(graph, matching).map_err(|defect| match defect {
        MatchingDefect::AugmentingPath { .. } => FleetError::NotMaximum(defect),
        other => FleetError::InvalidInput(other.to_string()),
    })?;
    let n = graph.n();
    let mut reached_d = vec![false; n];
    let mut reached_p = vec![false; n];
    let mut queue = VecDeque::new();
    for i in 1..=n {
        if matching.successor(i).is_none() {
            reached_d[i - 1] = true;
            queue.push_back(i);
        }
    }
    while let Some(i) = queue.pop_front() {
        for j in graph.pickups_of(i) {
            if matching.successor(i) == Some(j) || reached_p[j - 1] {
                continue;
            }
            reached_p[j - 1] = true;
            // A maximum matching leaves no reachable pickup free.
            if let Some(w) = matching.predecessor(j) {
                if !reached_d[w - 1] {
                    reached_d[w - 1] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let cover = VertexCover {
        dropoff_side: (1..=n).filter(|&i| !reached_d[i - 1]).collect(),
        pickup_side: (1..=n).filter(|&j| reached_p[j - 1]).collect(),
    };
    debug_assert_eq!(cover.size(), matching.size());
    Ok(cover)
}

/// Complement of `cover` among all `2n` nodes. Fails if `cover` misses an
/// edge, in which case the complement would not be independent.
pub fn independent_set(graph: &CompatibilityGraph, cover: &VertexCover) -> Result<IndependentSet> {
    if let Some((i, j)) = graph.edges().find(|&(i, j)| !cover.covers(i, j)) {
        return Err(FleetError::InvalidInput(format!(
            "vertex cover misses edge (d{i}, p{j})"
        )));
    }
    let n = graph.n();
    Ok(IndependentSet {
        dropoff_side: (1..=n)
            .filter(|i| !cover.dropoff_side.contains(i))
            .collect(),
        pickup_side: (1..=n).filter(|j| !cover.pickup_side.contains(j)).collect(),
    })
}

/// The `k = |I| - n` smallest indices `j` with both `d_j` and `p_j` in `ind`.
///
/// At least `k` qualify: the nodes of `ind` span at most `n` indices, and each
/// index contributing both nodes adds one node beyond that count.
pub fn extract_pairs(ind: &IndependentSet, n: usize) -> Result<Vec<usize>> {
    let k = ind.size().checked_sub(n).ok_or_else(|| {
        FleetError::InvalidInput(format!(
            "independent set of size {} is smaller than n = {n}",
            ind.size()
        ))
    })?;
    let chosen: Vec<usize> = ind
        .dropoff_side
        .iter()
        .copied()
        .filter(|j| ind.pickup_side.contains(j))
        .take(k)
        .collect();
    if chosen.len() < k {
        return Err(FleetError::InvalidInput(format!(
            "independent set has nodes outside 1..={n}"
        )));
    }
    Ok(chosen)
}

/// Certificate from an already computed maximum matching.
pub fn certificate_from_matching(
    graph: &CompatibilityGraph,
    matching: &Matching,
) -> Result<IncompatibleCertificate> {
    let cover = koenig_cover(graph, matching)?;
    let ind = independent_set(graph, &cover)?;
    Ok(IncompatibleCertificate {
        trip_indices: extract_pairs(&ind, graph.n())?,
    })
}

/// Runs the whole chain on `instance`. In classical mode the certificate has
/// exactly `n - m` trips and proves the fleet size optimal; with a waiting
/// bound it still witnesses pairwise incompatibility but not optimality.
pub fn build_certificate(instance: &Instance) -> Result<IncompatibleCertificate> {
    let graph = build_graph(instance)?;
    let matching = max_matching(&graph);
    certificate_from_matching(&graph, &matching)
}

/// True iff no two certified trips are compatible in either direction under
/// the instance's mode. Out-of-range or repeated indices are invalid input.
pub fn verify_certificate(instance: &Instance, cert: &IncompatibleCertificate) -> Result<bool> {
    let n = instance.n();
    let mut seen = BTreeSet::new();
    for &k in &cert.trip_indices {
        if k == 0 || k > n {
            return Err(FleetError::InvalidInput(format!(
                "certificate index {k} outside 1..={n}"
            )));
        }
        if !seen.insert(k) {
            return Err(FleetError::InvalidInput(format!(
                "certificate repeats index {k}"
            )));
        }
    }
    let trips: Vec<_> = seen.iter().map(|&k| &instance.trips[k - 1]).collect();
    for (a, first) in trips.iter().enumerate() {
        for second in &trips[a + 1..] {
            if compatible_pair(&instance.model, first, second, instance.delta)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
