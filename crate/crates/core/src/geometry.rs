//! Spatial sampling for a single realization.
//!
//! Base stations follow a homogeneous Poisson point process on a disc
//! centred at the origin. Roads follow a Poisson line process: each line is
//! a point `(theta, rho)` of a Poisson process on the strip
//! `[0, pi) x [-chi, chi]`, and only the chord inside the disc is kept.
//! Vehicles are dropped uniformly with respect to total road length.
//!
//! All lengths in this module are kilometres.

use std::f64::consts::PI;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand_distr::Poisson;

use crate::error::{Error, Result};

/// Resampling budget when the line process yields no usable road.
pub const MAX_ROAD_ATTEMPTS: usize = 100;

/// Circular study region of radius `chi`, centred at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudyDisc {
    radius_km: f64,
}

impl StudyDisc {
    pub fn new(radius_km: f64) -> Result<Self> {
        if !(radius_km.is_finite() && radius_km > 0.0) {
            return Err(Error::invalid("disc radius", format!("{radius_km} km must be > 0")));
        }
        Ok(Self { radius_km })
    }

    pub fn radius_km(&self) -> f64 {
        self.radius_km
    }

    pub fn area_km2(&self) -> f64 {
        PI * self.radius_km * self.radius_km
    }

    pub fn contains(&self, p: Point2D, slack: f64) -> bool {
        p.norm() <= self.radius_km + slack
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub const ORIGIN: Point2D = Point2D { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance_sq(&self, other: &Point2D) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn distance(&self, other: &Point2D) -> f64 {
        self.distance_sq(other).sqrt()
    }
}

/// The part of a line `x cos(theta) + y sin(theta) = rho` inside the disc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chord {
    pub theta: f64,
    pub rho: f64,
    pub endpoints: [Point2D; 2],
    pub length: f64,
}

impl Chord {
    /// Builds the chord of line `(theta, rho)`. Requires `|rho| <= chi`.
    pub fn from_line(theta: f64, rho: f64, disc: &StudyDisc) -> Result<Self> {
        let chi = disc.radius_km();
        if rho.is_nan() || rho.abs() > chi {
            return Err(Error::Domain {
                value: rho,
                domain: "[-chi, chi]",
            });
        }
        let (sin, cos) = theta.sin_cos();
        let half = (chi * chi - rho * rho).max(0.0).sqrt();
        let foot = Point2D::new(rho * cos, rho * sin);
        // direction along the line is (-sin, cos)
        let endpoints = [
            Point2D::new(foot.x + half * sin, foot.y - half * cos),
            Point2D::new(foot.x - half * sin, foot.y + half * cos),
        ];
        Ok(Self {
            theta,
            rho,
            endpoints,
            length: 2.0 * half,
        })
    }

    /// Point at fraction `t` of the way from the first to the second endpoint.
    pub fn point_at(&self, t: f64) -> Result<Point2D> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Domain {
                value: t,
                domain: "[0, 1]",
            });
        }
        let [a, b] = self.endpoints;
        Ok(Point2D::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlpConfig {
    /// Density of the `(theta, rho)` point process, in lines per rad·km.
    pub line_intensity: f64,
}

impl PlpConfig {
    pub fn new(line_intensity: f64) -> Result<Self> {
        if !(line_intensity.is_finite() && line_intensity >= 0.0) {
            return Err(Error::invalid(
                "line intensity",
                format!("{line_intensity} must be >= 0"),
            ));
        }
        Ok(Self { line_intensity })
    }

    /// Expected number of lines hitting the disc, `2 pi chi Lambda`.
    pub fn expected_lines(&self, disc: &StudyDisc) -> f64 {
        self.line_intensity * PI * 2.0 * disc.radius_km()
    }
}

fn poisson_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    let dist = Poisson::new(mean).expect("finite positive Poisson mean");
    dist.sample(rng) as usize
}

/// Homogeneous PPP with `intensity` points per km² on the disc.
pub fn sample_ppp_disc<R: Rng + ?Sized>(
    intensity: f64,
    disc: &StudyDisc,
    rng: &mut R,
) -> Result<Vec<Point2D>> {
    if !(intensity.is_finite() && intensity >= 0.0) {
        return Err(Error::invalid("PPP intensity", format!("{intensity} must be >= 0")));
    }
    let n = poisson_count(intensity * disc.area_km2(), rng);
    let chi = disc.radius_km();
    Ok((0..n)
        .map(|_| {
            let r = chi * rng.random::<f64>().sqrt();
            let phi = 2.0 * PI * rng.random::<f64>();
            let (sin, cos) = phi.sin_cos();
            Point2D::new(r * cos, r * sin)
        })
        .collect())
}

pub fn sample_plp_disc<R: Rng + ?Sized>(
    config: &PlpConfig,
    disc: &StudyDisc,
    rng: &mut R,
) -> Vec<Chord> {
    let n = poisson_count(config.expected_lines(disc), rng);
    let chi = disc.radius_km();
    (0..n)
        .map(|_| {
            let theta = PI * rng.random::<f64>();
            let rho = chi * (2.0 * rng.random::<f64>() - 1.0);
            Chord::from_line(theta, rho, disc).expect("rho drawn inside [-chi, chi]")
        })
        .collect()
}

/// Samples the line process until at least one chord has positive length.
pub fn sample_roads<R: Rng + ?Sized>(
    config: &PlpConfig,
    disc: &StudyDisc,
    rng: &mut R,
) -> Result<Vec<Chord>> {
    for _ in 0..MAX_ROAD_ATTEMPTS {
        let chords = sample_plp_disc(config, disc, rng);
        if chords.iter().any(|c| c.length > 0.0) {
            return Ok(chords);
        }
    }
    Err(Error::RoadsEmpty {
        attempts: MAX_ROAD_ATTEMPTS,
    })
}

/// Drops `count` vehicles uniformly over the total length of `chords`.
///
/// Zero-length chords are kept in the input but never selected.
pub fn place_vehicles<R: Rng + ?Sized>(
    chords: &[Chord],
    count: usize,
    rng: &mut R,
) -> Result<Vec<Point2D>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let picker = WeightedIndex::new(chords.iter().map(|c| c.length))
        .map_err(|_| Error::RoadsEmpty { attempts: 0 })?;
    (0..count)
        .map(|_| {
            let chord = &chords[picker.sample(rng)];
            chord.point_at(rng.random::<f64>())
        })
        .collect()
}
