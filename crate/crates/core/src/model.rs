//! Trips, travel-time models and instance validation.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{FleetError, Result};

/// A point in abstract planar units.
///
/// The matrix travel-time model reads `x` as a site index; `Location::site`
/// builds such a location.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Location {
    pub x: f64,
    pub y: f64,
}

impl Location {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn on_line(x: f64) -> Self {
        Self { x, y: 0.0 }
    }

    pub fn site(index: usize) -> Self {
        Self {
            x: index as f64,
            y: 0.0,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// The site index this location names, if `x` is a non-negative integer
    /// and `y` is zero.
    pub fn site_index(&self) -> Option<usize> {
        if self.y == 0.0 && self.x >= 0.0 && self.x.fract() == 0.0 && self.x < u32::MAX as f64 {
            Some(self.x as usize)
        } else {
            None
        }
    }
}

/// One historical ride.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trip {
    pub id: u64,
    pub pickup: Location,
    pub pickup_time: f64,
    pub dropoff: Location,
    pub dropoff_time: f64,
}

impl Trip {
    pub fn new(
        id: u64,
        pickup: Location,
        pickup_time: f64,
        dropoff: Location,
        dropoff_time: f64,
    ) -> Self {
        Self {
            id,
            pickup,
            pickup_time,
            dropoff,
            dropoff_time,
        }
    }

    pub fn duration(&self) -> f64 {
        self.dropoff_time - self.pickup_time
    }
}

/// Square table of durations indexed by site. Rows are kept as given so that
/// shape errors can be reported by validation instead of at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct TravelMatrix {
    rows: Vec<Vec<f64>>,
}

impl TravelMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Self {
        Self { rows }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn get(&self, from: usize, to: usize) -> Option<f64> {
        self.rows.get(from).and_then(|row| row.get(to)).copied()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TravelTimeModel {
    /// `|x_s - x_t|`, ignoring `y`.
    Line1D,
    Euclidean {
        speed: f64,
    },
    Manhattan {
        speed: f64,
    },
    Matrix(Arc<TravelMatrix>),
}

impl TravelTimeModel {
    pub fn matrix(rows: Vec<Vec<f64>>) -> Self {
        TravelTimeModel::Matrix(Arc::new(TravelMatrix::new(rows)))
    }

    pub fn is_analytic(&self) -> bool {
        !matches!(self, TravelTimeModel::Matrix(_))
    }

    pub fn name(&self) -> &'static str {
        match self {
            TravelTimeModel::Line1D => "line",
            TravelTimeModel::Euclidean { .. } => "euclidean",
            TravelTimeModel::Manhattan { .. } => "manhattan",
            TravelTimeModel::Matrix(_) => "matrix",
        }
    }
}

/// Driving time from `s` to `t` under `model`.
pub fn travel_time(model: &TravelTimeModel, s: &Location, t: &Location) -> Result<f64> {
    match model {
        TravelTimeModel::Line1D => Ok((s.x - t.x).abs()),
        TravelTimeModel::Euclidean { speed } => {
            let (dx, dy) = (s.x - t.x, s.y - t.y);
            Ok((dx * dx + dy * dy).sqrt() / speed)
        }
        TravelTimeModel::Manhattan { speed } => Ok(((s.x - t.x).abs() + (s.y - t.y).abs()) / speed),
        TravelTimeModel::Matrix(matrix) => {
            let (from, to) = match (s.site_index(), t.site_index()) {
                (Some(from), Some(to)) => (from, to),
                _ => {
                    return Err(FleetError::InvalidInput(format!(
                        "location ({}, {}) or ({}, {}) is not a site index",
                        s.x, s.y, t.x, t.y
                    )))
                }
            };
            matrix.get(from, to).ok_or_else(|| {
                FleetError::InvalidInput(format!(
                    "site pair ({from}, {to}) outside {}-site matrix",
                    matrix.size()
                ))
            })
        }
    }
}

/// A set of trips to cover, the travel-time model and the optional bound on
/// driver waiting time (`None` is the classical, unbounded mode).
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub trips: Vec<Trip>,
    pub model: TravelTimeModel,
    pub delta: Option<f64>,
}

impl Instance {
    pub fn new(trips: Vec<Trip>, model: TravelTimeModel) -> Self {
        Self {
            trips,
            model,
            delta: None,
        }
    }

    pub fn with_delta(mut self, delta: Option<f64>) -> Self {
        self.delta = delta;
        self
    }

    pub fn n(&self) -> usize {
        self.trips.len()
    }

    /// Trip at 1-based `index`.
    pub fn trip(&self, index: usize) -> Option<&Trip> {
        index.checked_sub(1).and_then(|i| self.trips.get(i))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    EmptyInstance,
    DropoffBeforePickup {
        id: u64,
    },
    DuplicateId {
        id: u64,
    },
    NonFinite {
        id: u64,
        field: &'static str,
    },
    /// Line1D reads only `x`; a non-zero `y` would be silently ignored.
    OffLine {
        id: u64,
    },
    InvalidDelta {
        delta: f64,
    },
    InvalidSpeed {
        speed: f64,
    },
    MatrixNotSquare {
        row: usize,
        len: usize,
        size: usize,
    },
    MatrixEntry {
        row: usize,
        col: usize,
        value: f64,
    },
    MatrixDiagonal {
        site: usize,
        value: f64,
    },
    InvalidSite {
        id: u64,
    },
    /// `time(p_i, d_i)` exceeds the recorded trip duration.
    MetricInconsistent {
        id: u64,
        travel: f64,
        duration: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyInstance => write!(f, "instance has no trips"),
            Violation::DropoffBeforePickup { id } => write!(f, "trip {id}: dropoff before pickup"),
            Violation::DuplicateId { id } => write!(f, "duplicate id {id}"),
            Violation::NonFinite { id, field } => write!(f, "trip {id}: non-finite {field}"),
            Violation::OffLine { id } => write!(f, "trip {id}: line model requires y = 0"),
            Violation::InvalidDelta { delta } => {
                write!(f, "delta {delta} is negative or non-finite")
            }
            Violation::InvalidSpeed { speed } => {
                write!(f, "speed {speed} is not positive and finite")
            }
            Violation::MatrixNotSquare { row, len, size } => {
                write!(f, "matrix row {row} has {len} entries, expected {size}")
            }
            Violation::MatrixEntry { row, col, value } => {
                write!(
                    f,
                    "matrix entry ({row}, {col}) = {value} is negative or non-finite"
                )
            }
            Violation::MatrixDiagonal { site, value } => {
                write!(f, "matrix diagonal entry {site} = {value}, expected 0")
            }
            Violation::InvalidSite { id } => {
                write!(f, "trip {id}: location is not a valid site index")
            }
            Violation::MetricInconsistent {
                id,
                travel,
                duration,
            } => write!(
                f,
                "trip {id}: travel time {travel} exceeds recorded duration {duration}"
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(FleetError::InvalidInstance(self))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Collects every problem with `instance`. With `strict_metric`, trips whose
/// own pickup-to-dropoff drive cannot fit in their recorded duration are
/// reported too.
pub fn validate_instance(instance: &Instance, strict_metric: bool) -> ValidationReport {
    let mut violations = Vec::new();
    if instance.trips.is_empty() {
        violations.push(Violation::EmptyInstance);
    }
    if let Some(delta) = instance.delta {
        if !(delta.is_finite() && delta >= 0.0) {
            violations.push(Violation::InvalidDelta { delta });
        }
    }

    let mut model_ok = true;
    match &instance.model {
        TravelTimeModel::Line1D => {}
        TravelTimeModel::Euclidean { speed } | TravelTimeModel::Manhattan { speed } => {
            if !(speed.is_finite() && *speed > 0.0) {
                violations.push(Violation::InvalidSpeed { speed: *speed });
                model_ok = false;
            }
        }
        TravelTimeModel::Matrix(matrix) => {
            let size = matrix.size();
            for (row, entries) in matrix.rows().iter().enumerate() {
                if entries.len() != size {
                    violations.push(Violation::MatrixNotSquare {
                        row,
                        len: entries.len(),
                        size,
                    });
                    model_ok = false;
                }
                for (col, &value) in entries.iter().enumerate() {
                    if !(value.is_finite() && value >= 0.0) {
                        violations.push(Violation::MatrixEntry { row, col, value });
                        model_ok = false;
                    } else if row == col && value != 0.0 {
                        violations.push(Violation::MatrixDiagonal { site: row, value });
                    }
                }
            }
        }
    }

    let mut seen: HashMap<u64, usize> = HashMap::with_capacity(instance.trips.len());
    for trip in &instance.trips {
        let id = trip.id;
        if let Some(count) = seen.get_mut(&id) {
            // Report each duplicated id once.
            if *count == 1 {
                violations.push(Violation::DuplicateId { id });
            }
            *count += 1;
        } else {
            seen.insert(id, 1);
        }

        let mut finite = true;
        for (field, ok) in [
            ("pickup location", trip.pickup.is_finite()),
            ("pickup time", trip.pickup_time.is_finite()),
            ("dropoff location", trip.dropoff.is_finite()),
            ("dropoff time", trip.dropoff_time.is_finite()),
        ] {
            if !ok {
                violations.push(Violation::NonFinite { id, field });
                finite = false;
            }
        }
        if !finite {
            continue;
        }
        if trip.dropoff_time < trip.pickup_time {
            violations.push(Violation::DropoffBeforePickup { id });
        }
        let locations_ok = match &instance.model {
            TravelTimeModel::Line1D => {
                let ok = trip.pickup.y == 0.0 && trip.dropoff.y == 0.0;
                if !ok {
                    violations.push(Violation::OffLine { id });
                }
                ok
            }
            TravelTimeModel::Matrix(matrix) => {
                let in_range = |loc: &Location| loc.site_index().is_some_and(|s| s < matrix.size());
                let ok = in_range(&trip.pickup) && in_range(&trip.dropoff);
                if !ok {
                    violations.push(Violation::InvalidSite { id });
                }
                ok
            }
            _ => true,
        };
        if strict_metric && locations_ok && model_ok {
            if let Ok(travel) = travel_time(&instance.model, &trip.pickup, &trip.dropoff) {
                let duration = trip.duration();
                if travel > duration {
                    violations.push(Violation::MetricInconsistent {
                        id,
                        travel,
                        duration,
                    });
                }
            }
        }
    }
    ValidationReport { violations }
}
