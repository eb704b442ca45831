//! File formats and the seeded instance generator.
//!
//! * Trips CSV: header `id,px,py,pt,dx,dy,dt`, one trip per row, no quoting.
//! * Travel-time matrix: first line `n`, then `n` whitespace-separated rows.
//! * Solution JSON: see [`SolutionJson`].
//!
//! Floats are written with Rust's shortest round-trip representation, so
//! reading back what was written reproduces every value bit for bit.

use std::io::{BufRead, BufReader, Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{FleetError, Result};
use crate::fleet::Solved;
use crate::model::{travel_time, Instance, Location, TravelTimeModel, Trip};
use crate::oracle::GapReport;
use crate::rng::SplitMix64;

pub const TRIPS_HEADER: [&str; 7] = ["id", "px", "py", "pt", "dx", "dy", "dt"];

/// Reads trips in file order. Line numbers in errors count the header as 1.
pub fn parse_trips_csv<R: Read>(source: R) -> Result<Vec<Trip>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .quoting(false)
        .from_reader(source);
    let mut trips = Vec::new();
    let mut seen_ids = std::collections::HashSet::new();
    for (row, record) in reader.records().enumerate() {
        let line = record
            .as_ref()
            .ok()
            .and_then(|r| r.position())
            .map_or(row as u64 + 1, |p| p.line());
        let record = record.map_err(|e| FleetError::Parse {
            line,
            message: e.to_string(),
        })?;
        if row == 0 {
            if record.iter().map(str::trim).ne(TRIPS_HEADER) {
                return Err(FleetError::Parse {
                    line,
                    message: format!("expected header `{}`", TRIPS_HEADER.join(",")),
                });
            }
            continue;
        }
        if record.len() != TRIPS_HEADER.len() {
            return Err(FleetError::Parse {
                line,
                message: format!("expected 7 columns, found {}", record.len()),
            });
        }
        let id: u64 = record[0].trim().parse().map_err(|_| FleetError::Parse {
            line,
            message: format!("trip id `{}` is not a non-negative integer", &record[0]),
        })?;
        let mut values = [0.0f64; 6];
        for (k, value) in values.iter_mut().enumerate() {
            let field = record[k + 1].trim();
            *value = field.parse().map_err(|_| FleetError::Parse {
                line,
                message: format!(
                    "column `{}` value `{field}` is not a number",
                    TRIPS_HEADER[k + 1]
                ),
            })?;
        }
        if !seen_ids.insert(id) {
            return Err(FleetError::InvalidInput(format!(
                "duplicate trip id {id} on line {line}"
            )));
        }
        let [px, py, pt, dx, dy, dt] = values;
        trips.push(Trip::new(
            id,
            Location::new(px, py),
            pt,
            Location::new(dx, dy),
            dt,
        ));
    }
    Ok(trips)
}

pub fn write_trips_csv<W: Write>(trips: &[Trip], mut sink: W) -> Result<()> {
    writeln!(sink, "{}", TRIPS_HEADER.join(","))?;
    for t in trips {
        writeln!(
            sink,
            "{},{},{},{},{},{},{}",
            t.id, t.pickup.x, t.pickup.y, t.pickup_time, t.dropoff.x, t.dropoff.y, t.dropoff_time
        )?;
    }
    sink.flush()?;
    Ok(())
}

/// Reads a travel-time matrix file. Only the shape is checked here; entry
/// values are checked by instance validation.
pub fn parse_matrix<R: Read>(source: R) -> Result<TravelTimeModel> {
    let mut lines = BufReader::new(source)
        .lines()
        .enumerate()
        .map(|(k, l)| (k as u64 + 1, l));
    let (line, first) = lines.next().ok_or(FleetError::Parse {
        line: 1,
        message: "empty matrix file".into(),
    })?;
    let n: usize = first?.trim().parse().map_err(|_| FleetError::Parse {
        line,
        message: "first line must be the site count".into(),
    })?;
    let mut rows = Vec::with_capacity(n);
    for (line, text) in lines {
        let text = text?;
        if text.trim().is_empty() {
            continue;
        }
        if rows.len() == n {
            return Err(FleetError::Parse {
                line,
                message: format!("more than {n} rows"),
            });
        }
        let row = text
            .split_whitespace()
            .map(|v| v.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| FleetError::Parse {
                line,
                message: e.to_string(),
            })?;
        if row.len() != n {
            return Err(FleetError::Parse {
                line,
                message: format!("expected {n} entries, found {}", row.len()),
            });
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(FleetError::Parse {
            line: rows.len() as u64 + 2,
            message: format!("expected {n} rows, found {}", rows.len()),
        });
    }
    Ok(TravelTimeModel::matrix(rows))
}

/// The machine-readable result of a solve. Field order is the key order in
/// the written JSON. Trip lists hold trip ids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionJson {
    pub n: usize,
    pub delta: Option<f64>,
    pub edge_count: usize,
    pub matching_size: usize,
    pub fleet_size: usize,
    pub trajectories: Vec<Vec<u64>>,
    pub certificate: Vec<u64>,
    pub certificate_size: usize,
    /// Fleet size minus the brute-force maximum incompatible set when a gap
    /// report was computed; otherwise fleet size minus certificate size in
    /// classical mode, and null under a waiting bound.
    pub min_max_gap: Option<i64>,
}

impl SolutionJson {
    pub fn new(instance: &Instance, solved: &Solved, gap: Option<&GapReport>) -> Self {
        let id = |k: usize| instance.trips[k - 1].id;
        let fleet_size = solved.solution.fleet_size;
        let certificate_size = solved.certificate.size();
        let min_max_gap = match (gap, instance.delta) {
            (Some(report), _) => Some(report.gap),
            (None, None) => Some(fleet_size as i64 - certificate_size as i64),
            (None, Some(_)) => None,
        };
        Self {
            n: instance.n(),
            delta: instance.delta,
            edge_count: solved.edge_count,
            matching_size: solved.matching.size(),
            fleet_size,
            trajectories: solved
                .solution
                .trajectories
                .iter()
                .map(|t| t.trip_indices.iter().map(|&k| id(k)).collect())
                .collect(),
            certificate: solved
                .certificate
                .trip_indices
                .iter()
                .map(|&k| id(k))
                .collect(),
            certificate_size,
            min_max_gap,
        }
    }
}

pub fn write_solution_json<W: Write>(solution: &SolutionJson, mut sink: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut sink, solution)?;
    writeln!(sink)?;
    sink.flush()?;
    Ok(())
}

pub fn read_solution_json<R: Read>(source: R) -> Result<SolutionJson> {
    Ok(serde_json::from_reader(source)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Placement {
    /// Uniform on the unit square.
    UnitSquare,
    /// Uniform on `[0, 1]` with `y = 0`.
    Line,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub n: usize,
    pub horizon: f64,
    pub model: TravelTimeModel,
    pub seed: u64,
    /// Trip duration is `slack * time(pickup, dropoff)`.
    pub slack: f64,
    pub placement: Placement,
}

impl GeneratorConfig {
    /// Unit-square (or unit-line for `Line1D`) placement over `[0, horizon]`.
    pub fn new(n: usize, model: TravelTimeModel, seed: u64) -> Self {
        let placement = match model {
            TravelTimeModel::Line1D => Placement::Line,
            _ => Placement::UnitSquare,
        };
        Self {
            n,
            horizon: 4.0,
            model,
            seed,
            slack: 1.2,
            placement,
        }
    }

    pub fn horizon(mut self, horizon: f64) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn slack(mut self, slack: f64) -> Self {
        self.slack = slack;
        self
    }

    fn check(&self) -> Result<()> {
        let bad = |what: String| Err(FleetError::InvalidInput(what));
        if self.n == 0 {
            return bad("generator needs n >= 1".into());
        }
        if !(self.horizon.is_finite() && self.horizon >= 0.0) {
            return bad(format!(
                "horizon {} must be finite and non-negative",
                self.horizon
            ));
        }
        if !(self.slack.is_finite() && self.slack >= 1.0) {
            return bad(format!(
                "slack {} must be finite and at least 1",
                self.slack
            ));
        }
        match self.model {
            TravelTimeModel::Matrix(_) => {
                return bad("generator needs an analytic travel-time model".into())
            }
            TravelTimeModel::Euclidean { speed } | TravelTimeModel::Manhattan { speed }
                if !(speed.is_finite() && speed > 0.0) =>
            {
                return bad(format!("speed {speed} must be positive and finite"))
            }
            TravelTimeModel::Line1D if self.placement != Placement::Line => {
                return bad("line model needs line placement".into())
            }
            _ => {}
        }
        Ok(())
    }
}

/// Draws a seeded instance with ids `1..=n`. Per trip, in order: pickup
/// location, pickup time, dropoff location; the dropoff time is then
/// `pickup time + slack * travel time`, rounded up if needed so the recorded
/// duration is never shorter than the drive.
pub fn generate_instance(config: &GeneratorConfig) -> Result<Instance> {
    config.check()?;
    let mut rng = SplitMix64::new(config.seed);
    let draw_location = |rng: &mut SplitMix64| match config.placement {
        Placement::UnitSquare => {
            let x = rng.next_f64();
            Location::new(x, rng.next_f64())
        }
        Placement::Line => Location::on_line(rng.next_f64()),
    };
    let mut trips = Vec::with_capacity(config.n);
    for id in 1..=config.n as u64 {
        let pickup = draw_location(&mut rng);
        let pickup_time = rng.uniform(0.0, config.horizon);
        let dropoff = draw_location(&mut rng);
        let drive = travel_time(&config.model, &pickup, &dropoff)?;
        let duration = config.slack * drive;
        let mut dropoff_time = pickup_time + duration;
        while dropoff_time - pickup_time < drive {
            dropoff_time = dropoff_time.next_up();
        }
        trips.push(Trip::new(id, pickup, pickup_time, dropoff, dropoff_time));
    }
    Ok(Instance::new(trips, config.model.clone()))
}
