//! Acceptance criteria. Run with `cargo test --test acceptance -- --nocapture`
//! to see one PASS/FAIL line per criterion.

use std::fs;
use std::time::{Duration, Instant};

use fleetmin::cli::{run, ExitStatus};
use fleetmin::ingest::{
    generate_instance, parse_trips_csv, write_solution_json, write_trips_csv, GeneratorConfig,
    SolutionJson,
};
use fleetmin::oracle::{
    brute_max_incompatible, brute_min_fleet, duality_gap, search_counterexample, OracleBounds,
    SearchConfig,
};
use fleetmin::rng::SplitMix64;
use fleetmin::{
    build_certificate, build_graph, compatible_directed, decompose_trajectories, independent_set,
    koenig_cover, max_matching, solve, validate_instance, verify_certificate, verify_matching,
    verify_solution, Instance, Matching, TravelTimeModel,
};

mod common;
use common::{euclidean_case, fixture_a, fixture_b, grid_case};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("took {elapsed:?}, limit {limit:?}")
    })
}

const SMALL_CASES: u64 = 500;
const SMALL_SEED: u64 = 1;

fn small_instances() -> Vec<Instance> {
    (0..SMALL_CASES)
        .map(|case| euclidean_case(SMALL_SEED, case, 12))
        .collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let instance = fixture_a();
    let solved = solve(&instance).map_err(|e| e.to_string())?;
    let trajectories: Vec<Vec<usize>> = solved
        .solution
        .trajectories
        .iter()
        .map(|t| t.trip_indices.clone())
        .collect();
    ensure(solved.solution.fleet_size == 2, || {
        format!("fleet {}", solved.solution.fleet_size)
    })?;
    ensure(trajectories == vec![vec![1, 2], vec![3]], || {
        format!("trajectories {trajectories:?}")
    })?;
    ensure(verify_solution(&instance, &solved.solution).is_ok(), || {
        "solution rejected".into()
    })?;
    ensure(
        compatible_directed(
            &instance.model,
            &instance.trips[0],
            &instance.trips[1],
            None,
        )
        .unwrap_or(false),
        || "[1,2] infeasible".into(),
    )?;
    ensure(solved.certificate.trip_indices == vec![2, 3], || {
        format!("certificate {:?}", solved.certificate)
    })?;
    ensure(
        verify_certificate(&instance, &solved.certificate).unwrap_or(false),
        || "certificate rejected".into(),
    )?;
    let json = SolutionJson::new(&instance, &solved, None);
    ensure(json.min_max_gap == Some(0), || {
        format!("gap {:?}", json.min_max_gap)
    })?;
    let gap = duality_gap(&instance, &OracleBounds::default()).map_err(|e| e.to_string())?;
    ensure(gap.gap == 0, || format!("oracle gap {}", gap.gap))?;
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!(
        "fleet 2, trajectories {trajectories:?}, certificate [2, 3], gap 0"
    ))
}

fn criterion_2(instances: &[Instance]) -> Outcome {
    let start = Instant::now();
    let bounds = OracleBounds::default();
    for (case, instance) in instances.iter().enumerate() {
        ensure(instance.n() >= 1 && instance.n() <= 12, || {
            format!("case {case}: n = {}", instance.n())
        })?;
        ensure(validate_instance(instance, true).is_valid(), || {
            format!("case {case}: not strict-metric")
        })?;
        let solved = solve(instance).map_err(|e| e.to_string())?;
        let fleet = solved.solution.fleet_size;
        let cert = solved.certificate.size();
        let brute_fleet = brute_min_fleet(instance, &bounds).map_err(|e| e.to_string())?;
        let (brute_incompatible, _) =
            brute_max_incompatible(instance, &bounds).map_err(|e| e.to_string())?;
        ensure(
            cert == fleet && fleet == brute_fleet && brute_fleet == brute_incompatible,
            || {
                format!("case {case}: cert {cert}, fleet {fleet}, brute fleet {brute_fleet}, brute incompatible {brute_incompatible}")
            },
        )?;
    }
    within(start.elapsed(), Duration::from_secs(120))?;
    Ok(format!(
        "{} / {} exact equalities in {:?}",
        instances.len(),
        instances.len(),
        start.elapsed()
    ))
}

fn criterion_3() -> Outcome {
    let mut rng = SplitMix64::new(3);
    let mut checked = 0;
    for case in 0..200 {
        let instance = euclidean_case(303, case, 60);
        let n = instance.n();
        let graph = build_graph(&instance).map_err(|e| e.to_string())?;
        let maximum = max_matching(&graph);
        for keep_percent in [100, 75, 50, 25, 0] {
            let pairs = maximum
                .pairs()
                .iter()
                .copied()
                .filter(|_| rng.range_inclusive(1, 100) <= keep_percent)
                .collect();
            let sub = Matching::new(n, pairs);
            let solution = decompose_trajectories(&instance, &sub).map_err(|e| e.to_string())?;
            ensure(solution.trajectories.len() == n - sub.size(), || {
                format!(
                    "case {case}: {} trajectories for n - |M| = {}",
                    solution.trajectories.len(),
                    n - sub.size()
                )
            })?;
            verify_solution(&instance, &solution).map_err(|d| format!("case {case}: {d}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} matchings (200 instances x 5 sub-matchings) decompose into n - |M| feasible trajectories"))
}

fn criterion_4() -> Outcome {
    for case in 0..300 {
        let instance = if case % 2 == 0 {
            euclidean_case(404, case, 50)
        } else {
            grid_case(404, case, 50, false)
        };
        let n = instance.n();
        let graph = build_graph(&instance).map_err(|e| e.to_string())?;
        let matching = max_matching(&graph);
        verify_matching(&graph, &matching).map_err(|d| format!("case {case}: {d}"))?;
        let cover = koenig_cover(&graph, &matching).map_err(|e| e.to_string())?;
        ensure(cover.size() == matching.size(), || {
            format!(
                "case {case}: cover {} vs m {}",
                cover.size(),
                matching.size()
            )
        })?;
        ensure(graph.edges().all(|(i, j)| cover.covers(i, j)), || {
            format!("case {case}: uncovered edge")
        })?;
        let ind = independent_set(&graph, &cover).map_err(|e| e.to_string())?;
        let inside = graph
            .edges()
            .filter(|(i, j)| ind.dropoff_side.contains(i) && ind.pickup_side.contains(j))
            .count();
        ensure(inside == 0, || {
            format!("case {case}: {inside} edges inside I")
        })?;
        let k = n - matching.size();
        ensure(ind.size() == n + k, || {
            format!("case {case}: |I| = {} vs n + k = {}", ind.size(), n + k)
        })?;
    }
    Ok("300 graphs: |C| = m, all edges covered, I independent, |I| = n + k".into())
}

fn criterion_5(instances: &[Instance]) -> Outcome {
    let bounds = OracleBounds::default();
    for (case, instance) in instances.iter().enumerate() {
        let fleet = brute_min_fleet(instance, &bounds).map_err(|e| e.to_string())?;
        let (incompatible, _) =
            brute_max_incompatible(instance, &bounds).map_err(|e| e.to_string())?;
        ensure(incompatible <= fleet, || {
            format!("case {case}: {incompatible} > {fleet}")
        })?;
    }
    Ok(format!(
        "{} / {} cases satisfy max incompatible <= min fleet",
        instances.len(),
        instances.len()
    ))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let report =
        duality_gap(&fixture_b(Some(1.0)), &OracleBounds::default()).map_err(|e| e.to_string())?;
    ensure(
        (report.fleet_size, report.max_incompatible, report.gap) == (1, 2, -1),
        || format!("fixture B: {report:?}"),
    )?;
    let config = SearchConfig::new(5000, 10, Some(1.0), TravelTimeModel::Line1D, 1);
    let found = search_counterexample(&config).map_err(|e| e.to_string())?;
    let (case, instance, gap) =
        found.ok_or_else(|| "no non-zero gap within 5000 cases".to_string())?;
    ensure(gap.gap != 0, || "reported zero gap".into())?;
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!(
        "fixture B: fleet 1, max incompatible 2, gap -1; search: case {case} (n = {}) gap {}",
        instance.n(),
        gap.gap
    ))
}

fn criterion_7() -> Outcome {
    let bounds = OracleBounds::default();
    for case in 0..100 {
        let delta = [0.0, 0.25, 0.5, 1.0][case as usize % 4];
        let instance = euclidean_case(707, case, 12).with_delta(Some(delta));
        let m = max_matching(&build_graph(&instance).map_err(|e| e.to_string())?).size();
        let brute = brute_min_fleet(&instance, &bounds).map_err(|e| e.to_string())?;
        ensure(brute == instance.n() - m, || {
            format!("case {case}: brute {brute} vs n - m {}", instance.n() - m)
        })?;
    }
    Ok("100 / 100 waiting-bound instances: brute min fleet = n - m".into())
}

fn criterion_8() -> Outcome {
    let config = GeneratorConfig::new(5000, TravelTimeModel::Euclidean { speed: 1.0 }, 8);
    let instance = generate_instance(&config).map_err(|e| e.to_string())?;
    let render = || -> Result<(Vec<u8>, Duration, usize, usize), String> {
        let start = Instant::now();
        let graph = build_graph(&instance).map_err(|e| e.to_string())?;
        let solved = solve(&instance).map_err(|e| e.to_string())?;
        let cert = build_certificate(&instance).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        ensure(cert == solved.certificate, || {
            "certify disagrees with solve".into()
        })?;
        ensure(cert.size() == solved.solution.fleet_size, || {
            "fleet != certificate".into()
        })?;
        let mut bytes = Vec::new();
        write_solution_json(&SolutionJson::new(&instance, &solved, None), &mut bytes)
            .map_err(|e| e.to_string())?;
        Ok((bytes, elapsed, graph.heap_bytes(), graph.edge_count()))
    };
    let (first, elapsed, heap, edges) = render()?;
    let (second, _, _, _) = render()?;
    within(elapsed, Duration::from_secs(60))?;
    let n = instance.n();
    // Adjacency lists: one Vec header per trip plus 4 bytes per edge.
    let linear_bound = 24 * n + 4 * edges;
    ensure(heap <= linear_bound, || {
        format!("graph holds {heap} bytes, linear bound {linear_bound}")
    })?;
    ensure(first == second, || "two runs differ".into())?;
    Ok(format!("n = 5000, |E| = {edges}: solve + certify in {elapsed:?}, graph {heap} B <= 24n + 4|E|, runs byte-identical"))
}

fn criterion_9() -> Outcome {
    let instance = generate_instance(&GeneratorConfig::new(
        500,
        TravelTimeModel::Euclidean { speed: 1.0 },
        9,
    ))
    .map_err(|e| e.to_string())?;
    let mut buf = Vec::new();
    write_trips_csv(&instance.trips, &mut buf).map_err(|e| e.to_string())?;
    let back = parse_trips_csv(buf.as_slice()).map_err(|e| e.to_string())?;
    let bits = |t: &fleetmin::Trip| {
        [
            t.pickup.x,
            t.pickup.y,
            t.pickup_time,
            t.dropoff.x,
            t.dropoff.y,
            t.dropoff_time,
        ]
        .map(f64::to_bits)
    };
    ensure(
        back.len() == instance.trips.len()
            && back
                .iter()
                .zip(&instance.trips)
                .all(|(a, b)| a.id == b.id && bits(a) == bits(b)),
        || "CSV round trip changed values".into(),
    )?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut files = Vec::new();
    for name in ["first.csv", "second.csv"] {
        let path = dir.path().join(name);
        let path_str = path.to_str().unwrap().to_owned();
        let args = [
            "fleetmin",
            "gen",
            "--n",
            "200",
            "--seed",
            "99",
            "--model",
            "euclidean",
            "--out",
            &path_str,
        ];
        let status = run(args, &mut Vec::new(), &mut Vec::new());
        ensure(status == ExitStatus::Success, || {
            format!("gen exited {status:?}")
        })?;
        files.push(fs::read(&path).map_err(|e| e.to_string())?);
    }
    ensure(files[0] == files[1], || "gen outputs differ".into())?;
    Ok(format!(
        "500-trip CSV round trip bit-exact; gen files byte-identical ({} bytes)",
        files[0].len()
    ))
}

#[test]
fn acceptance() {
    let instances = small_instances();
    let criteria: Vec<Criterion> = vec![
        ("1 fixture A end-to-end", Box::new(criterion_1)),
        ("2 min-max equality", Box::new(|| criterion_2(&instances))),
        (
            "3 any matching covers with n - m vehicles",
            Box::new(criterion_3),
        ),
        ("4 König cover", Box::new(criterion_4)),
        ("5 weak duality", Box::new(|| criterion_5(&instances))),
        ("6 waiting-bound gap", Box::new(criterion_6)),
        ("7 waiting-bound path cover", Box::new(criterion_7)),
        ("8 performance and determinism", Box::new(criterion_8)),
        ("9 I/O reproducibility", Box::new(criterion_9)),
    ];
    let mut failed = Vec::new();
    for (name, check) in &criteria {
        match check() {
            Ok(detail) => println!("[PASS] criterion {name}: {detail}"),
            Err(reason) => {
                println!("[FAIL] criterion {name}: {reason}");
                failed.push(*name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
