//! One Monte Carlo realization: deploy, associate, evaluate.

use std::fmt;

use rand::Rng;

use crate::channel::{link_budget, ChannelParams, LinkGeometry};
use crate::error::{Error, Result};
use crate::geometry::{place_vehicles, sample_ppp_disc, sample_roads, Chord, Point2D};
use crate::scenarios::{Placement, ScenarioConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BsKind {
    Gbs,
    Abs,
}

impl BsKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            BsKind::Gbs => "GBS",
            BsKind::Abs => "ABS",
        }
    }
}

impl fmt::Display for BsKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaseStation {
    pub position: Point2D,
    pub height_m: f64,
    pub kind: BsKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Deployment {
    pub stations: Vec<BaseStation>,
    pub vehicles: Vec<Point2D>,
    pub chords: Vec<Chord>,
}

/// Serving-link outcome for one vehicle. Vehicles without any station carry
/// `serving_station_index == None` and `snr_db == -inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrSample {
    pub vehicle_index: usize,
    pub serving_station_index: Option<usize>,
    pub d2d_m: f64,
    pub los: bool,
    pub pathloss_db: f64,
    pub snr_db: f64,
}

impl SnrSample {
    pub fn uncovered(vehicle_index: usize) -> Self {
        Self {
            vehicle_index,
            serving_station_index: None,
            d2d_m: f64::INFINITY,
            los: false,
            pathloss_db: f64::INFINITY,
            snr_db: f64::NEG_INFINITY,
        }
    }

    /// Whether the vehicle had a serving station at all.
    pub fn is_served(&self) -> bool {
        self.serving_station_index.is_some()
    }
}

/// Index of the horizontally nearest station; ties go to the lowest index.
pub fn associate(vehicle: &Point2D, stations: &[BaseStation]) -> Result<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, s) in stations.iter().enumerate() {
        let d = vehicle.distance_sq(&s.position);
        if best.is_none_or(|(_, bd)| d < bd) {
            best = Some((i, d));
        }
    }
    best.map(|(i, _)| i).ok_or(Error::NoStations)
}

pub fn build_realization<R: Rng + ?Sized>(
    scenario: &ScenarioConfig,
    rng: &mut R,
) -> Result<Deployment> {
    let disc = scenario.disc()?;
    let positions = match scenario.placement {
        Placement::Central => vec![Point2D::ORIGIN],
        Placement::Ppp { lambda_per_km2 } => sample_ppp_disc(lambda_per_km2, &disc, rng)?,
    };
    let stations = positions
        .into_iter()
        .map(|position| BaseStation {
            position,
            height_m: scenario.bs_height_m,
            kind: scenario.bs_kind,
        })
        .collect();
    let chords = sample_roads(&scenario.plp()?, &disc, rng)?;
    let vehicles = place_vehicles(&chords, scenario.vehicles, rng)?;
    Ok(Deployment {
        stations,
        vehicles,
        chords,
    })
}

pub fn evaluate_realization<R: Rng + ?Sized>(
    deployment: &Deployment,
    params: &ChannelParams,
    rng: &mut R,
) -> Result<Vec<SnrSample>> {
    deployment
        .vehicles
        .iter()
        .enumerate()
        .map(|(vehicle_index, v)| {
            let serving = match associate(v, &deployment.stations) {
                Ok(i) => i,
                Err(Error::NoStations) => return Ok(SnrSample::uncovered(vehicle_index)),
                Err(e) => return Err(e),
            };
            let station = &deployment.stations[serving];
            let d2d_m = v.distance(&station.position) * 1000.0;
            let geom = LinkGeometry::new(d2d_m, station.height_m, params.vehicle_height_m)?;
            let link = link_budget(params, &geom, rng)?;
            Ok(SnrSample {
                vehicle_index,
                serving_station_index: Some(serving),
                d2d_m,
                los: link.los,
                pathloss_db: link.pathloss_db,
                snr_db: link.snr_db,
            })
        })
        .collect()
}
