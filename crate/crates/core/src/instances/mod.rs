//! Benchmark instance generation and persistence.

mod io;
mod results;

pub use io::{
    load_instance, load_schedules, read_instance, read_schedules, save_instance, save_schedules, write_instance,
    write_schedules, ScheduleRecord, SCHEMA_VERSION,
};
pub use results::{read_front_csv, to_csv, write_csv, CsvRecord, FinalWeightRow, FrontRow, HvRow, ResultRow, SummaryRow, WeightRow};

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{
    due_time, DatumId, GroundStation, ImageData, Instance, Millis, Satellite, SatelliteId, StationId,
    TransmissionWindow, WindowId, DEFAULT_SIGMA,
};

/// Ground-station layout of an instance family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// The three mid-latitude stations.
    Nd,
    /// The polar station only.
    Pd,
    /// All four stations.
    Md,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Nd, Family::Pd, Family::Md];

    /// Default window time per satellite per day.
    pub fn window_target(self) -> Millis {
        match self {
            Family::Nd => Millis::from_secs_int(900),
            Family::Pd => Millis::from_secs_int(600),
            Family::Md => Millis::from_secs_int(1500),
        }
    }

    pub fn stations(self) -> Vec<GroundStation> {
        let all = stations();
        match self {
            Family::Nd => all[..3].to_vec(),
            Family::Pd => all[3..].to_vec(),
            Family::Md => all,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Nd => "ND",
            Family::Pd => "PD",
            Family::Md => "MD",
        })
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "ND" => Ok(Family::Nd),
            "PD" => Ok(Family::Pd),
            "MD" => Ok(Family::Md),
            _ => Err(format!("unknown family `{s}` (expected ND, PD or MD)")),
        }
    }
}

/// Satellite series, which fixes the data duration range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Series {
    Gf,
    Sv,
    Zy,
}

impl Series {
    fn of(name: &str) -> Series {
        if name.starts_with("GF") {
            Series::Gf
        } else if name.starts_with("SV") {
            Series::Sv
        } else {
            Series::Zy
        }
    }

    fn duration_secs(self) -> (f64, f64) {
        match self {
            Series::Gf => (60.0, 120.0),
            Series::Sv => (10.0, 60.0),
            Series::Zy => (120.0, 200.0),
        }
    }
}

/// The ten satellites with their orbital elements and d0.
pub fn satellites() -> Vec<Satellite> {
    const TABLE: [(&str, [f64; 6], i64); 10] = [
        ("GF0101", [7145.08, 0.001, 98.55, 359.06, 152.17, 265.39], 30),
        ("GF0201", [7011.57, 0.002, 97.83, 2.89, 98.15, 257.45], 30),
        ("GF0601", [7020.45, 0.002, 97.99, 6.87, 56.94, 94.33], 30),
        ("SV01", [6901.65, 0.002, 97.43, 1.01, 124.24, 242.68], 10),
        ("SV02", [6894.39, 0.001, 97.54, 11.87, 128.22, 90.39], 10),
        ("SV03", [6883.14, 0.000, 97.51, 5.98, 341.26, 106.70], 10),
        ("SV04", [6884.95, 0.004, 97.51, 6.14, 92.52, 195.65], 10),
        ("ZY02C", [7143.90, 0.002, 98.64, 341.91, 57.55, 186.17], 60),
        ("ZY3", [6875.80, 0.001, 97.41, 0.79, 59.20, 71.87], 60),
        ("ZY0104", [7145.08, 0.001, 98.55, 359.06, 152.17, 265.39], 60),
    ];
    TABLE
        .iter()
        .enumerate()
        .map(|(k, &(name, elements, d0))| Satellite {
            id: SatelliteId(k as u32 + 1),
            name: name.to_string(),
            elements,
            d0: Millis::from_secs_int(d0),
        })
        .collect()
}

/// The four stations; antenna limits are not modelled and left at zero.
pub fn stations() -> Vec<GroundStation> {
    [("Miyun", 40.0, 117.0), ("Kashi", 39.0, 76.0), ("Sanya", 18.0, 109.0), ("CNPGS", 67.0, 21.0)]
        .iter()
        .enumerate()
        .map(|(k, &(name, lat, lon))| GroundStation {
            id: StationId(k as u32 + 1),
            name: name.to_string(),
            lat,
            lon,
            alt: 0.0,
            gamma: 0.0,
            pi_angle: 0.0,
        })
        .collect()
}

pub const DAY: Millis = Millis::from_secs_int(86_400);

/// Window synthesis settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindowConfig {
    /// Per-satellite total window time to reach.
    pub target: Millis,
    /// Window duration range, inclusive.
    pub min_len: Millis,
    pub max_len: Millis,
}

impl WindowConfig {
    pub fn for_family(family: Family) -> Self {
        WindowConfig {
            target: family.window_target(),
            min_len: Millis::from_secs_int(300),
            max_len: Millis::from_secs_int(700),
        }
    }
}

fn uniform_ms<R: Rng + ?Sized>(rng: &mut R, lo: Millis, hi: Millis) -> Millis {
    Millis(rng.random_range(lo.ms()..=hi.ms()))
}

/// Statistical windows: per satellite, uniformly placed non-overlapping
/// windows until its total first reaches the target, stations assigned
/// round-robin. Ids are consecutive from 1.
pub fn synth_windows(
    satellites: &[Satellite],
    stations: &[GroundStation],
    horizon: (Millis, Millis),
    seed: u64,
    config: WindowConfig,
) -> Vec<TransmissionWindow> {
    assert!(!stations.is_empty(), "at least one station is needed");
    assert!(config.target.is_positive() && config.min_len.is_positive() && config.min_len <= config.max_len);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (start, end) = horizon;
    let mut out = Vec::new();
    for (s, sat) in satellites.iter().enumerate() {
        let mut mine: Vec<(Millis, Millis)> = Vec::new();
        let mut total = Millis::ZERO;
        let mut k = s;
        let mut attempts = 0;
        while total < config.target && attempts < 10_000 {
            attempts += 1;
            let len = uniform_ms(&mut rng, config.min_len, config.max_len.min(end - start));
            let begin = uniform_ms(&mut rng, start, end - len);
            let stop = begin + len;
            if mine.iter().any(|&(b, e)| begin < e && b < stop) {
                continue;
            }
            mine.push((begin, stop));
            total += len;
            out.push(TransmissionWindow {
                id: WindowId(out.len() as u32 + 1),
                station: stations[k % stations.len()].id,
                satellite: sat.id,
                begin,
                end: stop,
            });
            k += 1;
        }
    }
    out
}

/// Random data over the satellites until `n` data have a validity window
/// that meets the horizon.
fn synth_data<R: Rng + ?Sized>(satellites: &[Satellite], n: usize, horizon: (Millis, Millis), rng: &mut R) -> Vec<ImageData> {
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let sat = &satellites[rng.random_range(0..satellites.len())];
        let priority: u8 = rng.random_range(1..=10);
        let (lo, hi) = Series::of(&sat.name).duration_secs();
        let duration = Millis::from_secs(rng.random_range(lo..=hi)).max(sat.d0);
        let release = uniform_ms(rng, horizon.0 - DAY, horizon.1);
        let due = due_time(priority).expect("priority in range");
        let datum = ImageData {
            id: DatumId(out.len() as u32 + 1),
            parent: None,
            satellite: sat.id,
            priority,
            duration,
            release,
            due,
        };
        if datum.release < horizon.1 && datum.expiry() > horizon.0 {
            out.push(datum);
        }
    }
    out
}

/// A benchmark instance of `family` with `n_data` valid data over one day.
pub fn generate(family: Family, n_data: usize, seed: u64) -> Instance {
    generate_with(family, n_data, seed, WindowConfig::for_family(family))
}

pub fn generate_with(family: Family, n_data: usize, seed: u64, config: WindowConfig) -> Instance {
    let sats = satellites();
    let stations = family.stations();
    let horizon = (Millis::ZERO, DAY);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let windows = synth_windows(&sats, &stations, horizon, rng.random(), config);
    let data = synth_data(&sats, n_data, horizon, &mut rng);
    Instance::new(horizon.0, horizon.1, DEFAULT_SIGMA, sats, stations, windows, data).expect("generated instances are valid")
}

/// A small contended instance for exhaustive checks: one hour, one or two
/// satellites and stations, up to `max_windows` windows and `max_data` data.
pub fn generate_tiny(seed: u64, max_data: usize, max_windows: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hour = Millis::from_secs_int(3600);
    let n_sat = rng.random_range(1..=2u32);
    let n_station = rng.random_range(1..=2u32);
    let sats: Vec<Satellite> = (1..=n_sat)
        .map(|k| Satellite {
            id: SatelliteId(k),
            name: format!("T{k}"),
            elements: [0.0; 6],
            d0: Millis::from_secs_int(if rng.random_bool(0.5) { 30 } else { 60 }),
        })
        .collect();
    let stations: Vec<GroundStation> = (1..=n_station)
        .map(|k| GroundStation {
            id: StationId(k),
            name: format!("G{k}"),
            lat: 0.0,
            lon: 0.0,
            alt: 0.0,
            gamma: 0.0,
            pi_angle: 0.0,
        })
        .collect();
    let n_windows = rng.random_range(1..=max_windows.max(1));
    let windows: Vec<TransmissionWindow> = (1..=n_windows as u32)
        .map(|k| {
            let len = Millis::from_secs_int(rng.random_range(2..=8) * 30);
            let begin = Millis::from_secs_int(rng.random_range(0..=(hour - len).ms() / 1000));
            TransmissionWindow {
                id: WindowId(k),
                station: StationId(rng.random_range(1..=n_station)),
                satellite: SatelliteId(rng.random_range(1..=n_sat)),
                begin,
                end: begin + len,
            }
        })
        .collect();
    let n_data = rng.random_range(1..=max_data.max(1));
    let data: Vec<ImageData> = (1..=n_data as u32)
        .map(|k| {
            let sat = &sats[rng.random_range(0..sats.len())];
            let d0 = sat.d0.ms() / 1000;
            let priority: u8 = rng.random_range(1..=10);
            ImageData {
                id: DatumId(k),
                parent: None,
                satellite: sat.id,
                priority,
                duration: Millis::from_secs_int(rng.random_range(d0..=4 * d0)),
                release: Millis::from_secs_int(rng.random_range(-600..=1800)),
                due: due_time(priority).expect("priority in range"),
            }
        })
        .collect();
    Instance::new(Millis::ZERO, hour, DEFAULT_SIGMA, sats, stations, windows, data).expect("tiny instances are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_shapes() {
        let nd = generate(Family::Nd, 50, 7);
        assert_eq!(nd.data().len(), 50);
        assert_eq!(nd.stations().len(), 3);
        assert_eq!(nd.satellites().len(), 10);
        let pd = generate(Family::Pd, 20, 7);
        assert!(pd.windows().iter().all(|w| w.station == StationId(4)));
        assert_eq!(generate(Family::Md, 10, 1).stations().len(), 4);
    }

    #[test]
    fn data_follow_their_series() {
        let inst = generate(Family::Md, 2000, 3);
        for d in inst.data() {
            let name = &inst.satellites()[inst.satellite_pos(d.satellite).unwrap()].name;
            let (lo, hi) = Series::of(name).duration_secs();
            assert!(d.duration >= Millis::from_secs(lo) && d.duration <= Millis::from_secs(hi), "{name} {}", d.duration);
            assert!([3, 6, 12, 24].contains(&d.due));
            assert!((1..=10).contains(&d.priority));
            assert!(d.release < DAY && d.expiry() > Millis::ZERO);
        }
    }

    #[test]
    fn windows_reach_the_target() {
        let sats = satellites();
        let config = WindowConfig {
            target: Millis::from_secs_int(1500),
            min_len: Millis::from_secs_int(500),
            max_len: Millis::from_secs_int(500),
        };
        let ws = synth_windows(&sats, &Family::Md.stations(), (Millis::ZERO, DAY), 9, config);
        for s in &sats {
            let mine: Vec<_> = ws.iter().filter(|w| w.satellite == s.id).collect();
            assert_eq!(mine.len(), 3);
            for (a, b) in mine.iter().zip(mine.iter().skip(1)) {
                assert!(a.end <= b.begin || b.end <= a.begin);
            }
        }
        assert!(ws.iter().all(|w| w.begin >= Millis::ZERO && w.end <= DAY));
    }

    #[test]
    fn generation_is_seed_deterministic() {
        assert_eq!(generate(Family::Nd, 30, 5), generate(Family::Nd, 30, 5));
        assert_ne!(generate(Family::Nd, 30, 5), generate(Family::Nd, 30, 6));
        assert_eq!(generate_tiny(4, 5, 3), generate_tiny(4, 5, 3));
    }

    #[test]
    fn tiny_respects_its_limits() {
        for seed in 0..50 {
            let t = generate_tiny(seed, 5, 3);
            assert!((1..=5).contains(&t.data().len()));
            assert!((1..=3).contains(&t.windows().len()));
        }
    }
}
