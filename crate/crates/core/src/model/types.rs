use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::time::Millis;
use crate::error::{InstanceError, ModelError};

macro_rules! id_type {
    ($(#[$doc:meta])* $name:ident, $prefix:literal) => {
        $(#[$doc])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(pub u32);

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, concat!($prefix, "{}"), self.0)
            }
        }
    };
}

id_type!(SatelliteId, "sat#");
id_type!(StationId, "gs#");
id_type!(WindowId, "tw#");
id_type!(DatumId, "od#");
id_type!(TaskId, "dt#");

/// Keplerian elements in the order (Ω, i, a, e, ω, M₀). Carried verbatim,
/// never interpreted.
pub type OrbitalElements = [f64; 6];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Satellite {
    pub id: SatelliteId,
    pub name: String,
    pub elements: OrbitalElements,
    /// Minimum duration of any transmitted segment.
    pub d0: Millis,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroundStation {
    pub id: StationId,
    pub name: String,
    pub lat: f64,
    pub lon: f64,
    pub alt: f64,
    /// Maximum antenna roll, degrees.
    pub gamma: f64,
    /// Maximum antenna pitch, degrees.
    pub pi_angle: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransmissionWindow {
    pub id: WindowId,
    pub station: StationId,
    pub satellite: SatelliteId,
    pub begin: Millis,
    pub end: Millis,
}

impl TransmissionWindow {
    pub fn len(&self) -> Millis {
        self.end - self.begin
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageData {
    pub id: DatumId,
    /// Original datum this record was cut from; `None` for originals.
    pub parent: Option<DatumId>,
    pub satellite: SatelliteId,
    pub priority: u8,
    pub duration: Millis,
    pub release: Millis,
    /// Due time in hours, a function of priority.
    pub due: u8,
}

impl ImageData {
    /// First instant at which transmission may no longer begin.
    pub fn expiry(&self) -> Millis {
        self.release + Millis::from_hours(self.due as i64)
    }
}

/// Due time in hours for a priority in `1..=10`.
pub fn due_time(priority: u8) -> Result<u8, ModelError> {
    match priority {
        1..=3 => Ok(24),
        4..=6 => Ok(12),
        7..=9 => Ok(6),
        10 => Ok(3),
        other => Err(ModelError::PriorityOutOfRange(other)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Segmentation {
    Segment,
    Unsegment,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ordering {
    Rearrange,
    Fofd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SolveMode {
    pub segmentation: Segmentation,
    pub ordering: Ordering,
}

impl SolveMode {
    pub const SEGMENT_REARRANGE: SolveMode = SolveMode::new(Segmentation::Segment, Ordering::Rearrange);
    pub const SEGMENT_FOFD: SolveMode = SolveMode::new(Segmentation::Segment, Ordering::Fofd);
    pub const UNSEGMENT_REARRANGE: SolveMode =
        SolveMode::new(Segmentation::Unsegment, Ordering::Rearrange);
    pub const UNSEGMENT_FOFD: SolveMode = SolveMode::new(Segmentation::Unsegment, Ordering::Fofd);

    /// The experimental group first, then the three control groups.
    pub const ALL: [SolveMode; 4] = [
        Self::SEGMENT_REARRANGE,
        Self::SEGMENT_FOFD,
        Self::UNSEGMENT_REARRANGE,
        Self::UNSEGMENT_FOFD,
    ];

    pub const fn new(segmentation: Segmentation, ordering: Ordering) -> Self {
        SolveMode { segmentation, ordering }
    }

    pub fn segmented(self) -> bool {
        self.segmentation == Segmentation::Segment
    }

    pub fn fofd(self) -> bool {
        self.ordering == Ordering::Fofd
    }
}

impl Default for SolveMode {
    fn default() -> Self {
        Self::SEGMENT_REARRANGE
    }
}

impl fmt::Display for SolveMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let seg = match self.segmentation {
            Segmentation::Segment => "segment",
            Segmentation::Unsegment => "unsegment",
        };
        let ord = match self.ordering {
            Ordering::Rearrange => "rearrange",
            Ordering::Fofd => "fofd",
        };
        write!(f, "{seg}:{ord}")
    }
}

impl FromStr for SolveMode {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ModelError::BadMode(s.to_string());
        let (seg, ord) = s.split_once(':').ok_or_else(bad)?;
        let segmentation = match seg.trim().to_ascii_lowercase().as_str() {
            "segment" => Segmentation::Segment,
            "unsegment" => Segmentation::Unsegment,
            _ => return Err(bad()),
        };
        let ordering = match ord.trim().to_ascii_lowercase().as_str() {
            "rearrange" => Ordering::Rearrange,
            "fofd" => Ordering::Fofd,
            _ => return Err(bad()),
        };
        Ok(SolveMode { segmentation, ordering })
    }
}

/// Precomputed positional lookups. Every solver works with positions into the
/// instance's vectors; ids only appear at the boundary.
#[derive(Clone, Debug, Default)]
struct Index {
    satellite_pos: HashMap<SatelliteId, usize>,
    station_pos: HashMap<StationId, usize>,
    window_pos: HashMap<WindowId, usize>,
    datum_pos: HashMap<DatumId, usize>,
    window_sat: Vec<usize>,
    window_station: Vec<usize>,
    datum_sat: Vec<usize>,
    sat_windows: Vec<Vec<usize>>,
    station_windows: Vec<Vec<usize>>,
    /// Position of each datum in (release, id) order.
    release_rank: Vec<usize>,
    /// Windows of the datum's satellite where a segment of length d0 could
    /// begin inside the validity window, sorted by window begin.
    admissible: Vec<Vec<usize>>,
}

/// An immutable problem description. Construction validates every invariant
/// and cross-reference.
#[derive(Clone, Debug)]
pub struct Instance {
    start: Millis,
    end: Millis,
    sigma: Millis,
    satellites: Vec<Satellite>,
    stations: Vec<GroundStation>,
    windows: Vec<TransmissionWindow>,
    data: Vec<ImageData>,
    index: Index,
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.start == other.start
            && self.end == other.end
            && self.sigma == other.sigma
            && self.satellites == other.satellites
            && self.stations == other.stations
            && self.windows == other.windows
            && self.data == other.data
    }
}

pub const DEFAULT_SIGMA: Millis = Millis::from_secs_int(60);

impl Instance {
    pub fn new(
        start: Millis,
        end: Millis,
        sigma: Millis,
        satellites: Vec<Satellite>,
        stations: Vec<GroundStation>,
        windows: Vec<TransmissionWindow>,
        data: Vec<ImageData>,
    ) -> Result<Self, InstanceError> {
        if start >= end {
            return Err(InstanceError::EmptyHorizon);
        }
        if sigma < Millis::ZERO {
            return Err(InstanceError::NegativeSetup);
        }
        let mut index = Index::default();
        for (pos, s) in satellites.iter().enumerate() {
            if !s.d0.is_positive() {
                return Err(InstanceError::NonPositiveD0(s.id));
            }
            if index.satellite_pos.insert(s.id, pos).is_some() {
                return Err(InstanceError::DuplicateId(s.id.to_string()));
            }
        }
        for (pos, g) in stations.iter().enumerate() {
            if !(-90.0..=90.0).contains(&g.lat) || !(-180.0..=180.0).contains(&g.lon) {
                return Err(InstanceError::BadCoordinates(g.id));
            }
            if index.station_pos.insert(g.id, pos).is_some() {
                return Err(InstanceError::DuplicateId(g.id.to_string()));
            }
        }
        index.sat_windows = vec![Vec::new(); satellites.len()];
        index.station_windows = vec![Vec::new(); stations.len()];
        for (pos, w) in windows.iter().enumerate() {
            if index.window_pos.insert(w.id, pos).is_some() {
                return Err(InstanceError::DuplicateId(w.id.to_string()));
            }
            let sat = *index
                .satellite_pos
                .get(&w.satellite)
                .ok_or_else(|| InstanceError::Dangling(format!("{} -> {}", w.id, w.satellite)))?;
            let station = *index
                .station_pos
                .get(&w.station)
                .ok_or_else(|| InstanceError::Dangling(format!("{} -> {}", w.id, w.station)))?;
            if w.begin >= w.end || w.begin < start || w.end > end {
                return Err(InstanceError::BadWindow(w.id));
            }
            index.window_sat.push(sat);
            index.window_station.push(station);
            index.sat_windows[sat].push(pos);
            index.station_windows[station].push(pos);
        }
        for (pos, d) in data.iter().enumerate() {
            if index.datum_pos.insert(d.id, pos).is_some() {
                return Err(InstanceError::DuplicateId(d.id.to_string()));
            }
            if let Some(parent) = d.parent {
                return Err(InstanceError::SegmentRecord(d.id, parent));
            }
            let sat = *index
                .satellite_pos
                .get(&d.satellite)
                .ok_or_else(|| InstanceError::Dangling(format!("{} -> {}", d.id, d.satellite)))?;
            let due = due_time(d.priority).map_err(|_| InstanceError::BadPriority(d.id))?;
            if d.due != due {
                return Err(InstanceError::BadDue(d.id));
            }
            if d.duration < satellites[sat].d0 {
                return Err(InstanceError::TooShort(d.id));
            }
            index.datum_sat.push(sat);
        }
        for list in index.sat_windows.iter_mut().chain(index.station_windows.iter_mut()) {
            list.sort_by_key(|&w| (windows[w].begin, windows[w].id));
        }
        let mut by_release: Vec<usize> = (0..data.len()).collect();
        by_release.sort_by_key(|&i| (data[i].release, data[i].id));
        index.release_rank = vec![0; data.len()];
        for (rank, &i) in by_release.iter().enumerate() {
            index.release_rank[i] = rank;
        }
        index.admissible = data
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let sat = index.datum_sat[i];
                let d0 = satellites[sat].d0;
                index.sat_windows[sat]
                    .iter()
                    .copied()
                    .filter(|&w| {
                        let tw = &windows[w];
                        let lo = tw.begin.max(d.release);
                        let hi = (tw.end - d0).min(d.expiry() - Millis(1));
                        lo <= hi
                    })
                    .collect()
            })
            .collect();
        Ok(Instance { start, end, sigma, satellites, stations, windows, data, index })
    }

    pub fn start(&self) -> Millis {
        self.start
    }

    pub fn end(&self) -> Millis {
        self.end
    }

    pub fn sigma(&self) -> Millis {
        self.sigma
    }

    pub fn satellites(&self) -> &[Satellite] {
        &self.satellites
    }

    pub fn stations(&self) -> &[GroundStation] {
        &self.stations
    }

    pub fn windows(&self) -> &[TransmissionWindow] {
        &self.windows
    }

    pub fn data(&self) -> &[ImageData] {
        &self.data
    }

    pub fn satellite_pos(&self, id: SatelliteId) -> Option<usize> {
        self.index.satellite_pos.get(&id).copied()
    }

    pub fn station_pos(&self, id: StationId) -> Option<usize> {
        self.index.station_pos.get(&id).copied()
    }

    pub fn window_pos(&self, id: WindowId) -> Option<usize> {
        self.index.window_pos.get(&id).copied()
    }

    pub fn datum_pos(&self, id: DatumId) -> Option<usize> {
        self.index.datum_pos.get(&id).copied()
    }

    pub fn window_satellite(&self, w: usize) -> usize {
        self.index.window_sat[w]
    }

    pub fn window_station(&self, w: usize) -> usize {
        self.index.window_station[w]
    }

    pub fn datum_satellite(&self, i: usize) -> usize {
        self.index.datum_sat[i]
    }

    pub fn datum_d0(&self, i: usize) -> Millis {
        self.satellites[self.index.datum_sat[i]].d0
    }

    pub fn window_d0(&self, w: usize) -> Millis {
        self.satellites[self.index.window_sat[w]].d0
    }

    /// Windows of satellite `s`, by begin time.
    pub fn satellite_windows(&self, s: usize) -> &[usize] {
        &self.index.sat_windows[s]
    }

    /// Windows of station `g`, by begin time.
    pub fn station_windows(&self, g: usize) -> &[usize] {
        &self.index.station_windows[g]
    }

    pub fn release_rank(&self, i: usize) -> usize {
        self.index.release_rank[i]
    }

    /// Windows where datum `i` could place at least a minimum-size segment.
    pub fn admissible_windows(&self, i: usize) -> &[usize] {
        &self.index.admissible[i]
    }

    pub fn total_priority(&self) -> u64 {
        self.data.iter().map(|d| d.priority as u64).sum()
    }
}
