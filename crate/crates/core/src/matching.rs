//! Maximum-cardinality bipartite matching (Hopcroft–Karp) and an independent
//! verifier for claimed matchings.

use std::collections::VecDeque;
use std::fmt;

use crate::compat::CompatibilityGraph;

const FREE: u32 = u32::MAX;

/// A set of `(dropoff, pickup)` edges, 1-based, with successor
/// (`dropoff -> pickup`) and predecessor (`pickup -> dropoff`) lookups.
///
/// `Matching::new` accepts any pair list so that claimed matchings can be
/// checked; use [`verify_matching`] before trusting one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    n: usize,
    pairs: Vec<(usize, usize)>,
    successor: Vec<Option<usize>>,
    predecessor: Vec<Option<usize>>,
}

impl Matching {
    pub fn new(n: usize, pairs: Vec<(usize, usize)>) -> Self {
        let mut successor = vec![None; n];
        let mut predecessor = vec![None; n];
        for &(i, j) in &pairs {
            if (1..=n).contains(&i) && (1..=n).contains(&j) {
                successor[i - 1].get_or_insert(j);
                predecessor[j - 1].get_or_insert(i);
            }
        }
        Self {
            n,
            pairs,
            successor,
            predecessor,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::new(n, Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Pickup matched to drop-off `i`.
    pub fn successor(&self, i: usize) -> Option<usize> {
        self.successor.get(i.wrapping_sub(1)).copied().flatten()
    }

    /// Drop-off matched to pickup `j`.
    pub fn predecessor(&self, j: usize) -> Option<usize> {
        self.predecessor.get(j.wrapping_sub(1)).copied().flatten()
    }
}

/// Why a claimed matching was rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchingDefect {
    SizeMismatch {
        graph: usize,
        matching: usize,
    },
    NonEdge {
        dropoff: usize,
        pickup: usize,
    },
    DuplicateEndpoint {
        dropoff: usize,
        pickup: usize,
    },
    /// Alternating path `d, p, d, p, ...` from a free drop-off to a free pickup.
    AugmentingPath {
        path: Vec<usize>,
    },
}

impl MatchingDefect {
    pub fn reason(&self) -> &'static str {
        match self {
            MatchingDefect::SizeMismatch { .. } => "size mismatch",
            MatchingDefect::NonEdge { .. } => "non-edge pair",
            MatchingDefect::DuplicateEndpoint { .. } => "duplicate endpoint",
            MatchingDefect::AugmentingPath { .. } => "augmenting path found",
        }
    }
}

impl fmt::Display for MatchingDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchingDefect::SizeMismatch { graph, matching } => {
                write!(f, "matching over {matching} trips, graph has {graph}")
            }
            MatchingDefect::NonEdge { dropoff, pickup } => {
                write!(f, "non-edge pair (d{dropoff}, p{pickup})")
            }
            MatchingDefect::DuplicateEndpoint { dropoff, pickup } => {
                write!(f, "duplicate endpoint in pair (d{dropoff}, p{pickup})")
            }
            MatchingDefect::AugmentingPath { path } => {
                write!(f, "augmenting path found: ")?;
                for (k, v) in path.iter().enumerate() {
                    let side = if k % 2 == 0 { 'd' } else { 'p' };
                    if k > 0 {
                        write!(f, " - ")?;
                    }
                    write!(f, "{side}{v}")?;
                }
                Ok(())
            }
        }
    }
}

/// Maximum matching by Hopcroft–Karp.
///
/// Layers are grown by BFS from free drop-offs in ascending order, and each
/// phase augments along vertex-disjoint shortest paths found by DFS that scans
/// adjacency in stored order. The result depends only on the graph.
pub fn max_matching(graph: &CompatibilityGraph) -> Matching {
    let n = graph.n();
    let mut mate_d = vec![FREE; n];
    let mut mate_p = vec![FREE; n];
    let mut dist = vec![u32::MAX; n];
    let mut cursor = vec![0usize; n];
    let mut queue = VecDeque::with_capacity(n);
    let mut stack: Vec<u32> = Vec::new();

    loop {
        // Layer drop-offs by alternating distance from the free ones.
        queue.clear();
        for i in 0..n {
            if mate_d[i] == FREE {
                dist[i] = 0;
                queue.push_back(i as u32);
            } else {
                dist[i] = u32::MAX;
            }
        }
        let mut free_reached = u32::MAX;
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize];
            if du >= free_reached {
                continue;
            }
            for &p in graph.adjacency0(u as usize) {
                let w = mate_p[p as usize];
                if w == FREE {
                    free_reached = free_reached.min(du + 1);
                } else if dist[w as usize] == u32::MAX {
                    dist[w as usize] = du + 1;
                    queue.push_back(w);
                }
            }
        }
        if free_reached == u32::MAX {
            break;
        }

        cursor.iter_mut().for_each(|c| *c = 0);
        for root in 0..n {
            if mate_d[root] != FREE {
                continue;
            }
            // Iterative DFS along the layered graph; `stack` holds drop-offs.
            stack.clear();
            stack.push(root as u32);
            let mut found = false;
            while let Some(&u) = stack.last() {
                let u = u as usize;
                let adj = graph.adjacency0(u);
                let mut advanced = false;
                while cursor[u] < adj.len() {
                    let p = adj[cursor[u]] as usize;
                    let w = mate_p[p];
                    if w == FREE {
                        if dist[u] + 1 == free_reached {
                            found = true;
                            break;
                        }
                    } else if dist[w as usize] == dist[u] + 1 {
                        stack.push(w);
                        advanced = true;
                        break;
                    }
                    cursor[u] += 1;
                }
                if found {
                    break;
                }
                if !advanced {
                    // Dead end: drop from this phase.
                    dist[u] = u32::MAX;
                    stack.pop();
                    if let Some(&parent) = stack.last() {
                        cursor[parent as usize] += 1;
                    }
                }
            }
            if found {
                // Each drop-off on the stack takes the pickup at its cursor.
                for &u in stack.iter().rev() {
                    let u = u as usize;
                    let p = graph.adjacency0(u)[cursor[u]];
                    mate_d[u] = p;
                    mate_p[p as usize] = u as u32;
                    dist[u] = u32::MAX;
                }
            }
        }
    }

    let pairs = (0..n)
        .filter(|&i| mate_d[i] != FREE)
        .map(|i| (i + 1, mate_d[i] as usize + 1))
        .collect();
    Matching::new(n, pairs)
}

/// Checks that `matching` is a matching of `graph` and that no augmenting
/// path exists, by a plain alternating BFS unrelated to the layered search in
/// [`max_matching`].
pub fn verify_matching(
    graph: &CompatibilityGraph,
    matching: &Matching,
) -> Result<(), MatchingDefect> {
    let n = graph.n();
    if matching.n() != n {
        return Err(MatchingDefect::SizeMismatch {
            graph: n,
            matching: matching.n(),
        });
    }
    let mut mate_d = vec![None; n];
    let mut mate_p = vec![None; n];
    for &(i, j) in matching.pairs() {
        if !graph.has_edge(i, j) {
            return Err(MatchingDefect::NonEdge {
                dropoff: i,
                pickup: j,
            });
        }
        if mate_d[i - 1].is_some() || mate_p[j - 1].is_some() {
            return Err(MatchingDefect::DuplicateEndpoint {
                dropoff: i,
                pickup: j,
            });
        }
        mate_d[i - 1] = Some(j);
        mate_p[j - 1] = Some(i);
    }
    match find_augmenting_path(graph, &mate_d, &mate_p) {
        Some(path) => Err(MatchingDefect::AugmentingPath { path }),
        None => Ok(()),
    }
}

fn find_augmenting_path(
    graph: &CompatibilityGraph,
    mate_d: &[Option<usize>],
    mate_p: &[Option<usize>],
) -> Option<Vec<usize>> {
    let n = graph.n();
    // parent_d[i]: pickup through which drop-off i was reached (None for roots).
    let mut seen_d = vec![false; n];
    let mut parent_d: Vec<Option<usize>> = vec![None; n];
    let mut parent_p: Vec<Option<usize>> = vec![None; n];
    let mut queue = VecDeque::new();
    for i in 1..=n {
        if mate_d[i - 1].is_none() {
            seen_d[i - 1] = true;
            queue.push_back(i);
        }
    }
    while let Some(i) = queue.pop_front() {
        for j in graph.pickups_of(i) {
            if parent_p[j - 1].is_some() {
                continue;
            }
            parent_p[j - 1] = Some(i);
            match mate_p[j - 1] {
                None => {
                    let mut path = vec![j];
                    let mut d = i;
                    loop {
                        path.push(d);
                        match parent_d[d - 1] {
                            Some(p) => {
                                path.push(p);
                                d = parent_p[p - 1].expect("reached pickup has a parent");
                            }
                            None => break,
                        }
                    }
                    path.reverse();
                    return Some(path);
                }
                Some(w) if !seen_d[w - 1] => {
                    seen_d[w - 1] = true;
                    parent_d[w - 1] = Some(j);
                    queue.push_back(w);
                }
                Some(_) => {}
            }
        }
    }
    None
}
