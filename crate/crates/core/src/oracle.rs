//! Brute-force ground truth for small instances, and the search for duality
//! gaps under a waiting bound.
//!
//! None of these routines use matching theory except `duality_gap`, which
//! compares the matching-based fleet size against an exhaustive maximum
//! incompatible set.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::compat::{build_graph, compatible_directed, compatible_pair, CompatibilityGraph};
use crate::error::{FleetError, Result};
use crate::ingest::{generate_instance, GeneratorConfig, Placement};
use crate::matching::max_matching;
use crate::model::{validate_instance, Instance, TravelTimeModel};
use crate::rng::{case_seed, SplitMix64};

/// Largest `n` each exhaustive routine accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBounds {
    pub min_fleet: usize,
    pub max_incompatible: usize,
    pub max_matching: usize,
}

impl Default for OracleBounds {
    fn default() -> Self {
        Self {
            min_fleet: 12,
            max_incompatible: 20,
            max_matching: 10,
        }
    }
}

fn check_bound(n: usize, bound: usize) -> Result<()> {
    if n > bound {
        Err(FleetError::OracleBound { n, bound })
    } else {
        Ok(())
    }
}

/// Smallest number of vehicles covering all trips, by exhaustive assignment.
///
/// Trips are taken in ascending pickup time; a vehicle may take a trip when it
/// is empty or its last trip is directed-compatible with it. `f = 1, 2, ...`
/// is tried in order. Vehicles are interchangeable, so the search state is the
/// set of last trips, and failed states are remembered.
pub fn brute_min_fleet(instance: &Instance, bounds: &OracleBounds) -> Result<usize> {
    let n = instance.n();
    check_bound(n, bounds.min_fleet)?;
    validate_instance(instance, false).into_result()?;
    if n == 0 {
        return Ok(0);
    }
    let trips = &instance.trips;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        trips[a]
            .pickup_time
            .total_cmp(&trips[b].pickup_time)
            .then(trips[a].dropoff_time.total_cmp(&trips[b].dropoff_time))
            .then(a.cmp(&b))
    });
    // can_follow[a] bit b: trip order[b] may directly follow trip order[a].
    let mut can_follow = vec![0u32; n];
    for a in 0..n {
        for b in 0..n {
            if a != b
                && compatible_directed(
                    &instance.model,
                    &trips[order[a]],
                    &trips[order[b]],
                    instance.delta,
                )?
            {
                can_follow[a] |= 1 << b;
            }
        }
    }

    struct Search<'a> {
        n: usize,
        can_follow: &'a [u32],
        failed: HashSet<(usize, u32)>,
    }

    impl Search<'_> {
        // `lasts`: bitmask of (sorted-order) trips that end some vehicle.
        fn assign(&mut self, next: usize, lasts: u32, vehicles_left: usize) -> bool {
            if next == self.n {
                return true;
            }
            if self.failed.contains(&(next, lasts)) {
                return false;
            }
            let mut pool = lasts;
            while pool != 0 {
                let last = pool.trailing_zeros() as usize;
                pool &= pool - 1;
                if self.can_follow[last] & (1 << next) != 0
                    && self.assign(
                        next + 1,
                        (lasts & !(1 << last)) | (1 << next),
                        vehicles_left,
                    )
                {
                    return true;
                }
            }
            if vehicles_left > 0 && self.assign(next + 1, lasts | (1 << next), vehicles_left - 1) {
                return true;
            }
            self.failed.insert((next, lasts));
            false
        }
    }

    for fleet in 1..=n {
        // Vehicles in use equals popcount(lasts), so a failed state is
        // failed for this fleet size regardless of path.
        let mut search = Search {
            n,
            can_follow: &can_follow,
            failed: HashSet::new(),
        };
        if search.assign(0, 0, fleet) {
            return Ok(fleet);
        }
    }
    unreachable!("n vehicles always suffice")
}

/// Maximum set of pairwise-incompatible trips by exhaustive branching, with
/// the lexicographically smallest maximizer (as a sorted index list) as
/// witness. Indices are 1-based.
pub fn brute_max_incompatible(
    instance: &Instance,
    bounds: &OracleBounds,
) -> Result<(usize, Vec<usize>)> {
    let n = instance.n();
    check_bound(n, bounds.max_incompatible)?;
    validate_instance(instance, false).into_result()?;
    // conflict[a] bit b: trips a and b are compatible, so not both can be chosen.
    let mut conflict = vec![0u32; n];
    for a in 0..n {
        for b in a + 1..n {
            if compatible_pair(
                &instance.model,
                &instance.trips[a],
                &instance.trips[b],
                instance.delta,
            )? {
                conflict[a] |= 1 << b;
                conflict[b] |= 1 << a;
            }
        }
    }
    let all = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let best = max_independent(&conflict, all);

    let mut witness = Vec::with_capacity(best);
    let mut candidates = all;
    for v in 0..n {
        let bit = 1u32 << v;
        if candidates & bit == 0 {
            continue;
        }
        // Later choices only come from indices above v.
        let above = !((bit << 1).wrapping_sub(1));
        let rest = candidates & !conflict[v] & above;
        if witness.len() + 1 + max_independent(&conflict, rest) == best {
            witness.push(v + 1);
            candidates = rest;
        } else {
            candidates &= !bit;
        }
    }
    debug_assert_eq!(witness.len(), best);
    Ok((best, witness))
}

fn max_independent(conflict: &[u32], candidates: u32) -> usize {
    fn go(conflict: &[u32], candidates: u32, size: usize, best: &mut usize) {
        if candidates == 0 {
            *best = (*best).max(size);
            return;
        }
        if size + candidates.count_ones() as usize <= *best {
            return;
        }
        let v = candidates.trailing_zeros() as usize;
        let without = candidates & !(1 << v);
        go(conflict, without & !conflict[v], size + 1, best);
        if conflict[v] & without != 0 {
            go(conflict, without, size, best);
        }
    }
    let mut best = 0;
    go(conflict, candidates, 0, &mut best);
    best
}

/// Maximum matching size by exhaustive search over drop-offs in order,
/// memoized on the set of pickups already used.
pub fn brute_max_matching(graph: &CompatibilityGraph, bounds: &OracleBounds) -> Result<usize> {
    let n = graph.n();
    check_bound(n, bounds.max_matching.min(31))?;
    let adjacency: Vec<Vec<usize>> = (1..=n)
        .map(|i| graph.pickups_of(i).map(|j| j - 1).collect())
        .collect();
    let mut memo = vec![vec![u8::MAX; 1 << n]; n + 1];

    fn go(i: usize, used: usize, adjacency: &[Vec<usize>], memo: &mut [Vec<u8>]) -> u8 {
        if i == adjacency.len() {
            return 0;
        }
        if memo[i][used] != u8::MAX {
            return memo[i][used];
        }
        let mut best = go(i + 1, used, adjacency, memo);
        for &j in &adjacency[i] {
            if used & (1 << j) == 0 {
                best = best.max(1 + go(i + 1, used | (1 << j), adjacency, memo));
            }
        }
        memo[i][used] = best;
        best
    }
    Ok(go(0, 0, &adjacency, &mut memo) as usize)
}

/// Matching-based fleet size against the exhaustive maximum incompatible set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapReport {
    pub fleet_size: usize,
    pub max_incompatible: usize,
    /// `fleet_size - max_incompatible`; zero in classical mode on
    /// metric-consistent instances.
    pub gap: i64,
    pub witness_set: Vec<usize>,
}

pub fn duality_gap(instance: &Instance, bounds: &OracleBounds) -> Result<GapReport> {
    let graph = build_graph(instance)?;
    let fleet_size = instance.n() - max_matching(&graph).size();
    let (max_incompatible, witness_set) = brute_max_incompatible(instance, bounds)?;
    Ok(GapReport {
        fleet_size,
        max_incompatible,
        gap: fleet_size as i64 - max_incompatible as i64,
        witness_set,
    })
}

/// Parameters of a seeded counterexample search.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub cases: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub delta: Option<f64>,
    pub model: TravelTimeModel,
    pub horizon: f64,
    pub slack: f64,
    pub seed: u64,
    pub bounds: OracleBounds,
}

impl SearchConfig {
    pub fn new(
        cases: usize,
        n_max: usize,
        delta: Option<f64>,
        model: TravelTimeModel,
        seed: u64,
    ) -> Self {
        Self {
            cases,
            n_min: 1,
            n_max,
            delta,
            model,
            horizon: 4.0,
            slack: 1.2,
            seed,
            bounds: OracleBounds::default(),
        }
    }

    /// The instance examined as case `case`: its size and generator seed are
    /// drawn from `case_seed(seed, case)`.
    pub fn case_instance(&self, case: usize) -> Result<Instance> {
        let mut rng = SplitMix64::new(case_seed(self.seed, case as u64));
        let n = rng.range_inclusive(self.n_min.max(1), self.n_max.max(self.n_min.max(1)));
        let placement = match self.model {
            TravelTimeModel::Line1D => Placement::Line,
            _ => Placement::UnitSquare,
        };
        let config = GeneratorConfig {
            n,
            horizon: self.horizon,
            model: self.model.clone(),
            seed: rng.next_u64(),
            slack: self.slack,
            placement,
        };
        Ok(generate_instance(&config)?.with_delta(self.delta))
    }
}

/// First case (by index) whose gap is non-zero, with its report.
///
/// Cases are evaluated in parallel on the current rayon pool; the result does
/// not depend on scheduling.
pub fn search_counterexample(
    config: &SearchConfig,
) -> Result<Option<(usize, Instance, GapReport)>> {
    let found = (0..config.cases).into_par_iter().map(|case| -> Result<_> {
        let instance = config.case_instance(case)?;
        let report = duality_gap(&instance, &config.bounds)?;
        Ok((report.gap != 0).then_some((case, instance, report)))
    });
    let found = found
        .filter(|r| !matches!(r, Ok(None)))
        .find_first(|_| true);
    match found {
        None => Ok(None),
        Some(r) => r,
    }
}

/// Outcome of the classical agreement check on one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Agreement {
    pub n: usize,
    pub brute_min_fleet: usize,
    pub brute_matching_fleet: Option<usize>,
    pub matching_fleet: usize,
    pub certificate_size: usize,
    pub max_incompatible: usize,
}

impl Agreement {
    pub fn holds(&self) -> bool {
        let f = self.brute_min_fleet;
        self.brute_matching_fleet.is_none_or(|b| b == f)
            && self.matching_fleet == f
            && self.certificate_size == f
            && self.max_incompatible == f
    }

    pub fn weak_duality(&self) -> bool {
        self.max_incompatible <= self.brute_min_fleet
    }
}

/// Computes every fleet/certificate quantity for one instance. The
/// exhaustive matching count is skipped above its bound.
pub fn agreement(instance: &Instance, bounds: &OracleBounds) -> Result<Agreement> {
    let n = instance.n();
    let graph = build_graph(instance)?;
    let matching = max_matching(&graph);
    let certificate = crate::duality::certificate_from_matching(&graph, &matching)?;
    let brute_matching_fleet = if n <= bounds.max_matching {
        Some(n - brute_max_matching(&graph, bounds)?)
    } else {
        None
    };
    Ok(Agreement {
        n,
        brute_min_fleet: brute_min_fleet(instance, bounds)?,
        brute_matching_fleet,
        matching_fleet: n - matching.size(),
        certificate_size: certificate.size(),
        max_incompatible: brute_max_incompatible(instance, bounds)?.0,
    })
}

/// Edges of the compatibility graph by the direct `O(n^2)` predicate scan.
pub fn naive_edges(instance: &Instance) -> Result<Vec<(usize, usize)>> {
    let mut edges = Vec::new();
    for (i, from) in instance.trips.iter().enumerate() {
        for (j, to) in instance.trips.iter().enumerate() {
            if i != j && compatible_directed(&instance.model, from, to, instance.delta)? {
                edges.push((i + 1, j + 1));
            }
        }
    }
    Ok(edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Location, Trip};

    fn line_trip(id: u64, p: f64, tp: f64, d: f64, td: f64) -> Trip {
        Trip::new(id, Location::on_line(p), tp, Location::on_line(d), td)
    }

    fn fixture_a() -> Instance {
        Instance::new(
            vec![
                line_trip(1, 0.0, 0.0, 10.0, 10.0),
                line_trip(2, 12.0, 13.0, 20.0, 21.0),
                line_trip(3, 0.0, 2.0, 5.0, 7.0),
            ],
            TravelTimeModel::Line1D,
        )
    }

    fn fixture_b(delta: Option<f64>) -> Instance {
        Instance::new(
            vec![
                line_trip(1, 0.0, 0.0, 1.0, 1.0),
                line_trip(2, 2.0, 3.0, 3.0, 4.0),
                line_trip(3, 4.0, 6.0, 5.0, 7.0),
            ],
            TravelTimeModel::Line1D,
        )
        .with_delta(delta)
    }

    fn single() -> Instance {
        Instance::new(
            vec![line_trip(1, 0.0, 0.0, 1.0, 1.0)],
            TravelTimeModel::Line1D,
        )
    }

    #[test]
    fn min_fleet_examples() {
        let b = OracleBounds::default();
        assert_eq!(brute_min_fleet(&fixture_a(), &b).unwrap(), 2);
        assert_eq!(brute_min_fleet(&single(), &b).unwrap(), 1);
        assert_eq!(brute_min_fleet(&fixture_b(Some(1.0)), &b).unwrap(), 1);
        assert_eq!(brute_min_fleet(&fixture_b(None), &b).unwrap(), 1);
    }

    #[test]
    fn max_incompatible_examples() {
        let b = OracleBounds::default();
        assert_eq!(
            brute_max_incompatible(&fixture_a(), &b).unwrap(),
            (2, vec![1, 3])
        );
        assert_eq!(
            brute_max_incompatible(&fixture_b(Some(1.0)), &b).unwrap(),
            (2, vec![1, 3])
        );
        assert_eq!(
            brute_max_incompatible(&fixture_b(None), &b).unwrap(),
            (1, vec![1])
        );
        assert_eq!(brute_max_incompatible(&single(), &b).unwrap(), (1, vec![1]));
    }

    #[test]
    fn max_matching_examples() {
        let b = OracleBounds::default();
        let g = build_graph(&fixture_a()).unwrap();
        assert_eq!(brute_max_matching(&g, &b).unwrap(), 1);
        let g = CompatibilityGraph::from_edges(4, &[], None).unwrap();
        assert_eq!(brute_max_matching(&g, &b).unwrap(), 0);
        let g = build_graph(&fixture_b(None)).unwrap();
        assert_eq!(brute_max_matching(&g, &b).unwrap(), 2);
    }

    #[test]
    fn gap_examples() {
        let b = OracleBounds::default();
        assert_eq!(duality_gap(&fixture_a(), &b).unwrap().gap, 0);
        let r = duality_gap(&fixture_b(Some(1.0)), &b).unwrap();
        assert_eq!((r.fleet_size, r.max_incompatible, r.gap), (1, 2, -1));
        let r = duality_gap(&fixture_b(None), &b).unwrap();
        assert_eq!((r.fleet_size, r.max_incompatible, r.gap), (1, 1, 0));
    }

    #[test]
    fn bounds_refuse_large_inputs() {
        let b = OracleBounds {
            min_fleet: 2,
            max_incompatible: 2,
            max_matching: 2,
        };
        assert!(matches!(
            brute_min_fleet(&fixture_a(), &b),
            Err(FleetError::OracleBound { n: 3, bound: 2 })
        ));
        assert!(matches!(
            brute_max_incompatible(&fixture_a(), &b),
            Err(FleetError::OracleBound { .. })
        ));
        let g = build_graph(&fixture_a()).unwrap();
        assert!(matches!(
            brute_max_matching(&g, &b),
            Err(FleetError::OracleBound { .. })
        ));
    }

    #[test]
    fn zero_cases_finds_nothing() {
        let config = SearchConfig::new(0, 8, Some(1.0), TravelTimeModel::Line1D, 3);
        assert!(search_counterexample(&config).unwrap().is_none());
    }

    #[test]
    fn naive_edges_match_fixture() {
        assert_eq!(
            naive_edges(&fixture_b(None)).unwrap(),
            vec![(1, 2), (1, 3), (2, 3)]
        );
    }

    #[test]
    fn agreement_on_fixture_a() {
        let a = agreement(&fixture_a(), &OracleBounds::default()).unwrap();
        assert!(a.holds() && a.weak_duality());
        assert_eq!(a.brute_min_fleet, 2);
    }
}
