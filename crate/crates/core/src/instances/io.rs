//! JSON persistence. Times are stored as seconds since the instance epoch
//! at millisecond resolution.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::IoError;
use crate::model::{
    DatumId, DownlinkTask, GroundStation, ImageData, Instance, Millis, ObjectivePoint, Satellite, SatelliteId,
    Schedule, SegmentationPlan, StationId, TaskId, TransmissionWindow, WindowId,
};

pub const SCHEMA_VERSION: u32 = 1;

fn secs(t: Millis) -> f64 {
    t.as_secs()
}

fn ms(s: f64) -> Millis {
    Millis::from_secs(s)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    schema_version: u32,
    horizon: Horizon,
    sigma: f64,
    satellites: Vec<SatelliteRec>,
    stations: Vec<StationRec>,
    windows: Vec<WindowRec>,
    data: Vec<DatumRec>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Horizon {
    start: f64,
    end: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SatelliteRec {
    id: u32,
    name: String,
    elements: [f64; 6],
    d0: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StationRec {
    id: u32,
    name: String,
    lat: f64,
    lon: f64,
    alt: f64,
    gamma: f64,
    pi_angle: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WindowRec {
    id: u32,
    station: u32,
    satellite: u32,
    begin: f64,
    end: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DatumRec {
    id: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    parent: Option<u32>,
    satellite: u32,
    priority: u8,
    duration: f64,
    release: f64,
    due: u8,
}

fn malformed(e: serde_json::Error) -> IoError {
    IoError::Malformed(e.to_string())
}

fn check_version(text: &str) -> Result<serde_json::Value, IoError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(malformed)?;
    let found = value
        .get("schema_version")
        .and_then(serde_json::Value::as_u64)
        .ok_or_else(|| IoError::Malformed("missing schema_version".into()))?;
    if found != SCHEMA_VERSION as u64 {
        return Err(IoError::SchemaVersion { found: found as u32, expected: SCHEMA_VERSION });
    }
    Ok(value)
}

pub fn write_instance(instance: &Instance) -> String {
    let file = InstanceFile {
        schema_version: SCHEMA_VERSION,
        horizon: Horizon { start: secs(instance.start()), end: secs(instance.end()) },
        sigma: secs(instance.sigma()),
        satellites: instance
            .satellites()
            .iter()
            .map(|s| SatelliteRec { id: s.id.0, name: s.name.clone(), elements: s.elements, d0: secs(s.d0) })
            .collect(),
        stations: instance
            .stations()
            .iter()
            .map(|g| StationRec {
                id: g.id.0,
                name: g.name.clone(),
                lat: g.lat,
                lon: g.lon,
                alt: g.alt,
                gamma: g.gamma,
                pi_angle: g.pi_angle,
            })
            .collect(),
        windows: instance
            .windows()
            .iter()
            .map(|w| WindowRec {
                id: w.id.0,
                station: w.station.0,
                satellite: w.satellite.0,
                begin: secs(w.begin),
                end: secs(w.end),
            })
            .collect(),
        data: instance
            .data()
            .iter()
            .map(|d| DatumRec {
                id: d.id.0,
                parent: d.parent.map(|p| p.0),
                satellite: d.satellite.0,
                priority: d.priority,
                duration: secs(d.duration),
                release: secs(d.release),
                due: d.due,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("serialisable") + "\n"
}

pub fn read_instance(text: &str) -> Result<Instance, IoError> {
    let value = check_version(text)?;
    let file: InstanceFile = serde_json::from_value(value).map_err(malformed)?;
    let sats: BTreeSet<u32> = file.satellites.iter().map(|s| s.id).collect();
    let stations: BTreeSet<u32> = file.stations.iter().map(|g| g.id).collect();
    for w in &file.windows {
        if !sats.contains(&w.satellite) {
            return Err(IoError::DanglingId(format!("{} -> {}", WindowId(w.id), SatelliteId(w.satellite))));
        }
        if !stations.contains(&w.station) {
            return Err(IoError::DanglingId(format!("{} -> {}", WindowId(w.id), StationId(w.station))));
        }
    }
    for d in &file.data {
        if !sats.contains(&d.satellite) {
            return Err(IoError::DanglingId(format!("{} -> {}", DatumId(d.id), SatelliteId(d.satellite))));
        }
    }
    Instance::new(
        ms(file.horizon.start),
        ms(file.horizon.end),
        ms(file.sigma),
        file.satellites
            .into_iter()
            .map(|s| Satellite { id: SatelliteId(s.id), name: s.name, elements: s.elements, d0: ms(s.d0) })
            .collect(),
        file.stations
            .into_iter()
            .map(|g| GroundStation {
                id: StationId(g.id),
                name: g.name,
                lat: g.lat,
                lon: g.lon,
                alt: g.alt,
                gamma: g.gamma,
                pi_angle: g.pi_angle,
            })
            .collect(),
        file.windows
            .into_iter()
            .map(|w| TransmissionWindow {
                id: WindowId(w.id),
                station: StationId(w.station),
                satellite: SatelliteId(w.satellite),
                begin: ms(w.begin),
                end: ms(w.end),
            })
            .collect(),
        file.data
            .into_iter()
            .map(|d| ImageData {
                id: DatumId(d.id),
                parent: d.parent.map(DatumId),
                satellite: SatelliteId(d.satellite),
                priority: d.priority,
                duration: ms(d.duration),
                release: ms(d.release),
                due: d.due,
            })
            .collect(),
    )
    .map_err(IoError::Invalid)
}

/// Writes via a temporary sibling and a rename, so readers never observe a
/// partial file.
pub(crate) fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), IoError> {
    let io = |source| IoError::Io { path: path.display().to_string(), source };
    let tmp = path.with_extension(format!(
        "{}.tmp",
        path.extension().map(|e| e.to_string_lossy().into_owned()).unwrap_or_default()
    ));
    fs::write(&tmp, contents).map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

fn read_text(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Io { path: path.display().to_string(), source })
}

pub fn save_instance(instance: &Instance, path: &Path) -> Result<(), IoError> {
    write_atomic(path, write_instance(instance).as_bytes())
}

pub fn load_instance(path: &Path) -> Result<Instance, IoError> {
    read_instance(&read_text(path)?)
}

/// A schedule together with the objectives it was reported with.
#[derive(Clone, Debug, PartialEq)]
pub struct ScheduleRecord {
    pub objectives: ObjectivePoint<f64>,
    pub schedule: Schedule,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScheduleFile {
    schema_version: u32,
    schedules: Vec<ScheduleRec>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScheduleRec {
    f1: f64,
    f2: f64,
    tasks: Vec<TaskRec>,
    plans: Vec<PlanRec>,
    scheduled: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TaskRec {
    id: u32,
    window: u32,
    begin: f64,
    end: f64,
    duration: f64,
    d_set: Vec<ItemRec>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ItemRec {
    datum: u32,
    duration: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanRec {
    datum: u32,
    pieces: Vec<PieceRec>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PieceRec {
    window: u32,
    duration: f64,
}

pub fn write_schedules(records: &[ScheduleRecord]) -> String {
    let file = ScheduleFile {
        schema_version: SCHEMA_VERSION,
        schedules: records
            .iter()
            .map(|r| ScheduleRec {
                f1: r.objectives.f1,
                f2: r.objectives.f2,
                tasks: r
                    .schedule
                    .tasks
                    .iter()
                    .map(|t| TaskRec {
                        id: t.id.0,
                        window: t.window.0,
                        begin: secs(t.begin),
                        end: secs(t.end),
                        duration: secs(t.duration),
                        d_set: t.d_set.iter().map(|&(d, s)| ItemRec { datum: d.0, duration: secs(s) }).collect(),
                    })
                    .collect(),
                plans: r
                    .schedule
                    .plans
                    .iter()
                    .map(|p| PlanRec {
                        datum: p.datum.0,
                        pieces: p.pieces.iter().map(|&(w, s)| PieceRec { window: w.0, duration: secs(s) }).collect(),
                    })
                    .collect(),
                scheduled: r.schedule.scheduled.iter().map(|d| d.0).collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("serialisable") + "\n"
}

pub fn read_schedules(text: &str) -> Result<Vec<ScheduleRecord>, IoError> {
    let value = check_version(text)?;
    let file: ScheduleFile = serde_json::from_value(value).map_err(malformed)?;
    Ok(file
        .schedules
        .into_iter()
        .map(|r| ScheduleRecord {
            objectives: ObjectivePoint::new(r.f1, r.f2),
            schedule: Schedule {
                tasks: r
                    .tasks
                    .into_iter()
                    .map(|t| DownlinkTask {
                        id: TaskId(t.id),
                        begin: ms(t.begin),
                        end: ms(t.end),
                        duration: ms(t.duration),
                        window: WindowId(t.window),
                        d_set: t.d_set.into_iter().map(|e| (DatumId(e.datum), ms(e.duration))).collect(),
                    })
                    .collect(),
                plans: r
                    .plans
                    .into_iter()
                    .map(|p| SegmentationPlan {
                        datum: DatumId(p.datum),
                        pieces: p.pieces.into_iter().map(|e| (WindowId(e.window), ms(e.duration))).collect(),
                    })
                    .collect(),
                scheduled: r.scheduled.into_iter().map(DatumId).collect(),
            },
        })
        .collect())
}

pub fn save_schedules(records: &[ScheduleRecord], path: &Path) -> Result<(), IoError> {
    write_atomic(path, write_schedules(records).as_bytes())
}

pub fn load_schedules(path: &Path) -> Result<Vec<ScheduleRecord>, IoError> {
    read_schedules(&read_text(path)?)
}
