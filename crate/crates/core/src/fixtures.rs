//! Terse construction of hand-made instances for tests and examples.

use crate::model::{
    due_time, DatumId, GroundStation, ImageData, Instance, Millis, Satellite, SatelliteId,
    StationId, TransmissionWindow, WindowId, DEFAULT_SIGMA,
};

/// Builds an [`Instance`] over the default one-day horizon with σ = 60 s.
/// Times are given in seconds.
#[derive(Clone, Debug)]
pub struct InstanceBuilder {
    start: Millis,
    end: Millis,
    sigma: Millis,
    satellites: Vec<Satellite>,
    stations: Vec<GroundStation>,
    windows: Vec<TransmissionWindow>,
    data: Vec<ImageData>,
}

impl Default for InstanceBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl InstanceBuilder {
    pub fn new() -> Self {
        InstanceBuilder {
            start: Millis::ZERO,
            end: Millis::from_secs_int(86_400),
            sigma: DEFAULT_SIGMA,
            satellites: Vec::new(),
            stations: Vec::new(),
            windows: Vec::new(),
            data: Vec::new(),
        }
    }

    pub fn sigma(mut self, secs: f64) -> Self {
        self.sigma = Millis::from_secs(secs);
        self
    }

    pub fn satellite(mut self, id: u32, d0: f64) -> Self {
        self.satellites.push(Satellite {
            id: SatelliteId(id),
            name: format!("S{id}"),
            elements: [0.0; 6],
            d0: Millis::from_secs(d0),
        });
        self
    }

    pub fn station(mut self, id: u32) -> Self {
        self.stations.push(GroundStation {
            id: StationId(id),
            name: format!("G{id}"),
            lat: 0.0,
            lon: 0.0,
            alt: 0.0,
            gamma: 0.0,
            pi_angle: 0.0,
        });
        self
    }

    pub fn window(mut self, id: u32, station: u32, satellite: u32, begin: f64, end: f64) -> Self {
        self.windows.push(TransmissionWindow {
            id: WindowId(id),
            station: StationId(station),
            satellite: SatelliteId(satellite),
            begin: Millis::from_secs(begin),
            end: Millis::from_secs(end),
        });
        self
    }

    /// A datum with the due time implied by its priority.
    pub fn datum(mut self, id: u32, satellite: u32, priority: u8, duration: f64, release: f64) -> Self {
        self.data.push(ImageData {
            id: DatumId(id),
            parent: None,
            satellite: SatelliteId(satellite),
            priority,
            duration: Millis::from_secs(duration),
            release: Millis::from_secs(release),
            due: due_time(priority).expect("priority in range"),
        });
        self
    }

    pub fn build(self) -> Instance {
        self.try_build().expect("fixture instance is valid")
    }

    pub fn try_build(self) -> Result<Instance, crate::error::InstanceError> {
        Instance::new(
            self.start,
            self.end,
            self.sigma,
            self.satellites,
            self.stations,
            self.windows,
            self.data,
        )
    }
}
