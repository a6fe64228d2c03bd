//! Single-link channel: LoS probability, Urban Macro path loss, thermal
//! noise and the interference-free SNR.
//!
//! Distances and heights are metres, frequencies GHz, powers dBm.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Thermal noise density at room temperature, dBm/Hz.
pub const THERMAL_NOISE_DBM_PER_HZ: f64 = -174.0;

/// Horizontal distances below this are clamped before evaluating log-distance laws.
pub const MIN_D2D_M: f64 = 1.0;

pub const SHADOWING_SIGMA_LOS_DB: f64 = 4.0;
pub const SHADOWING_SIGMA_NLOS_DB: f64 = 6.0;

/// Validity interval of the aerial-terminal LoS formula, `(low, high]` metres.
pub const AERIAL_HEIGHT_RANGE_M: (f64, f64) = (22.5, 100.0);

/// Constants of the elevation-angle sigmoid `1 / (1 + a exp(-b (theta - a)))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmoidParams {
    pub a: f64,
    pub b: f64,
}

impl SigmoidParams {
    pub const SUBURBAN: Self = Self { a: 4.88, b: 0.43 };
    pub const URBAN: Self = Self { a: 9.61, b: 0.16 };
    pub const DENSE_URBAN: Self = Self { a: 12.08, b: 0.11 };
    pub const HIGHRISE_URBAN: Self = Self { a: 27.23, b: 0.08 };
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LosModel {
    /// Terrestrial UMa; depends on ground distance and terminal height only.
    UmaStandard,
    /// UMa with an aerial terminal; the base station plays the terminal.
    UmaAerialHeightDependent,
    ElevationSigmoid(SigmoidParams),
}

impl LosModel {
    pub fn name(&self) -> &'static str {
        match self {
            LosModel::UmaStandard => "uma_standard",
            LosModel::UmaAerialHeightDependent => "uma_aerial",
            LosModel::ElevationSigmoid(_) => "elevation_sigmoid",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub carrier_freq_ghz: f64,
    pub tx_power_dbm: f64,
    pub tx_gain_dbi: f64,
    pub rx_gain_dbi: f64,
    pub bandwidth_mhz: f64,
    pub noise_figure_db: f64,
    pub vehicle_height_m: f64,
    pub los_model: LosModel,
    pub shadowing_enabled: bool,
}

impl Default for ChannelParams {
    fn default() -> Self {
        Self {
            carrier_freq_ghz: 3.5,
            tx_power_dbm: 23.0,
            tx_gain_dbi: 10.0,
            rx_gain_dbi: 2.0,
            bandwidth_mhz: 20.0,
            noise_figure_db: 9.0,
            vehicle_height_m: 1.5,
            los_model: LosModel::UmaStandard,
            shadowing_enabled: false,
        }
    }
}

impl ChannelParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.carrier_freq_ghz.is_finite() && self.carrier_freq_ghz > 0.0) {
            return Err(Error::invalid("carrier frequency", "must be > 0 GHz"));
        }
        if !(0.5..=100.0).contains(&self.carrier_freq_ghz) {
            return Err(Error::ModelDomain {
                model: "UMa path loss",
                range: "0.5-100 GHz",
                value: self.carrier_freq_ghz,
            });
        }
        if !(self.bandwidth_mhz.is_finite() && self.bandwidth_mhz > 0.0) {
            return Err(Error::invalid("bandwidth", "must be > 0 MHz"));
        }
        if !(self.vehicle_height_m.is_finite() && self.vehicle_height_m >= 1.0) {
            return Err(Error::invalid("vehicle height", "must be >= 1 m"));
        }
        for (name, v) in [
            ("tx power", self.tx_power_dbm),
            ("tx gain", self.tx_gain_dbi),
            ("rx gain", self.rx_gain_dbi),
            ("noise figure", self.noise_figure_db),
        ] {
            if !v.is_finite() {
                return Err(Error::invalid(name, "must be finite"));
            }
        }
        Ok(())
    }

    /// `P_tx + G_tx + G_rx`, dBm.
    pub fn eirp_plus_rx_gain_dbm(&self) -> f64 {
        self.tx_power_dbm + self.tx_gain_dbi + self.rx_gain_dbi
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGeometry {
    d2d_m: f64,
    bs_height_m: f64,
    ut_height_m: f64,
    distance_clamped: bool,
}

impl LinkGeometry {
    /// Ground distances under [`MIN_D2D_M`] are raised to it and flagged.
    pub fn new(d2d_m: f64, bs_height_m: f64, ut_height_m: f64) -> Result<Self> {
        if !(d2d_m.is_finite() && d2d_m >= 0.0) {
            return Err(Error::invalid("ground distance", format!("{d2d_m} m")));
        }
        if !(bs_height_m.is_finite() && bs_height_m > 1.0) {
            return Err(Error::invalid("base station height", format!("{bs_height_m} m must be > 1 m")));
        }
        if !(ut_height_m.is_finite() && ut_height_m >= 1.0) {
            return Err(Error::invalid("terminal height", format!("{ut_height_m} m must be >= 1 m")));
        }
        let distance_clamped = d2d_m < MIN_D2D_M;
        Ok(Self {
            d2d_m: d2d_m.max(MIN_D2D_M),
            bs_height_m,
            ut_height_m,
            distance_clamped,
        })
    }

    pub fn d2d_m(&self) -> f64 {
        self.d2d_m
    }

    pub fn bs_height_m(&self) -> f64 {
        self.bs_height_m
    }

    pub fn ut_height_m(&self) -> f64 {
        self.ut_height_m
    }

    pub fn distance_clamped(&self) -> bool {
        self.distance_clamped
    }

    pub fn height_difference_m(&self) -> f64 {
        self.bs_height_m - self.ut_height_m
    }

    pub fn d3d_m(&self) -> f64 {
        self.d2d_m.hypot(self.height_difference_m())
    }

    pub fn elevation_deg(&self) -> f64 {
        self.height_difference_m().abs().atan2(self.d2d_m).to_degrees()
    }
}

fn uma_standard_los(d2d: f64, ut_height: f64) -> Result<f64> {
    if ut_height > 23.0 {
        return Err(Error::ModelDomain {
            model: "UMa LoS probability",
            range: "terminal height <= 23 m",
            value: ut_height,
        });
    }
    if d2d <= 18.0 {
        return Ok(1.0);
    }
    let base = 18.0 / d2d + (-d2d / 63.0).exp() * (1.0 - 18.0 / d2d);
    let c_prime = if ut_height <= 13.0 {
        0.0
    } else {
        ((ut_height - 13.0) / 10.0).powf(1.5)
    };
    let boost = 1.0 + c_prime * 1.25 * (d2d / 100.0).powi(3) * (-d2d / 150.0).exp();
    Ok((base * boost).min(1.0))
}

fn uma_aerial_los(d2d: f64, height: f64) -> f64 {
    let lg = height.log10();
    let p1 = 4300.0 * lg - 3800.0;
    let d1 = (460.0 * lg - 700.0).max(18.0);
    if d2d <= d1 {
        1.0
    } else {
        d1 / d2d + (-d2d / p1).exp() * (1.0 - d1 / d2d)
    }
}

fn sigmoid_los(elevation_deg: f64, p: SigmoidParams) -> f64 {
    1.0 / (1.0 + p.a * (-p.b * (elevation_deg - p.a)).exp())
}

/// LoS probability with strict validity checks.
pub fn los_probability(model: LosModel, geom: &LinkGeometry) -> Result<f64> {
    match model {
        LosModel::UmaStandard => uma_standard_los(geom.d2d_m(), geom.ut_height_m()),
        LosModel::UmaAerialHeightDependent => {
            let h = geom.bs_height_m();
            let (lo, hi) = AERIAL_HEIGHT_RANGE_M;
            if !(h > lo && h <= hi) {
                return Err(Error::ModelDomain {
                    model: "aerial UMa LoS probability",
                    range: "22.5 m < height <= 100 m",
                    value: h,
                });
            }
            Ok(uma_aerial_los(geom.d2d_m(), h))
        }
        LosModel::ElevationSigmoid(p) => Ok(sigmoid_los(geom.elevation_deg(), p)),
    }
}

/// Like [`los_probability`], but aerial heights outside the validity range are
/// evaluated at the nearest boundary instead of failing.
pub fn los_probability_clamped(model: LosModel, geom: &LinkGeometry) -> Result<f64> {
    match model {
        LosModel::UmaAerialHeightDependent => {
            let (lo, hi) = AERIAL_HEIGHT_RANGE_M;
            Ok(uma_aerial_los(geom.d2d_m(), geom.bs_height_m().clamp(lo, hi)))
        }
        other => los_probability(other, geom),
    }
}

/// True when `height_m` lies outside the aerial LoS formula's validity range.
pub fn aerial_height_needs_clamp(height_m: f64) -> bool {
    let (lo, hi) = AERIAL_HEIGHT_RANGE_M;
    !(height_m > lo && height_m <= hi)
}

/// Breakpoint distance `4 h'_BS h'_UT f / c` with effective heights `h - 1 m`.
pub fn breakpoint_distance_m(params: &ChannelParams, geom: &LinkGeometry) -> f64 {
    let h_bs = geom.bs_height_m() - 1.0;
    let h_ut = geom.ut_height_m() - 1.0;
    4.0 * h_bs * h_ut * params.carrier_freq_ghz * 1e9 / SPEED_OF_LIGHT
}

fn uma_los_db(params: &ChannelParams, geom: &LinkGeometry) -> f64 {
    let f_term = 20.0 * params.carrier_freq_ghz.log10();
    let d3d = geom.d3d_m();
    let d_bp = breakpoint_distance_m(params, geom);
    if geom.d2d_m() <= d_bp {
        28.0 + 22.0 * d3d.log10() + f_term
    } else {
        let dh = geom.height_difference_m();
        28.0 + 40.0 * d3d.log10() + f_term - 9.0 * (d_bp * d_bp + dh * dh).log10()
    }
}

fn uma_nlos_db(params: &ChannelParams, geom: &LinkGeometry) -> f64 {
    let nlos = 13.54 + 39.08 * geom.d3d_m().log10() + 20.0 * params.carrier_freq_ghz.log10()
        - 0.6 * (geom.ut_height_m() - 1.5);
    nlos.max(uma_los_db(params, geom))
}

/// Median UMa path loss, dB, without shadow fading.
pub fn pathloss_uma_median(params: &ChannelParams, geom: &LinkGeometry, los: bool) -> Result<f64> {
    params.validate()?;
    Ok(if los {
        uma_los_db(params, geom)
    } else {
        uma_nlos_db(params, geom)
    })
}

/// UMa path loss, dB. Adds log-normal shadowing from `rng` when enabled.
pub fn pathloss_uma<R: Rng + ?Sized>(
    params: &ChannelParams,
    geom: &LinkGeometry,
    los: bool,
    rng: &mut R,
) -> Result<f64> {
    let median = pathloss_uma_median(params, geom, los)?;
    if !params.shadowing_enabled {
        return Ok(median);
    }
    let sigma = if los {
        SHADOWING_SIGMA_LOS_DB
    } else {
        SHADOWING_SIGMA_NLOS_DB
    };
    let shadow = Normal::new(0.0, sigma).expect("positive sigma");
    Ok(median + shadow.sample(rng))
}

pub fn noise_power_dbm(params: &ChannelParams) -> f64 {
    THERMAL_NOISE_DBM_PER_HZ + 10.0 * (params.bandwidth_mhz * 1e6).log10() + params.noise_figure_db
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub los: bool,
    pub pathloss_db: f64,
    pub snr_db: f64,
    /// Ground distance was below [`MIN_D2D_M`] and got clamped.
    pub distance_clamped: bool,
}

/// Link budget for a known LoS state.
pub fn link_budget_with_state<R: Rng + ?Sized>(
    params: &ChannelParams,
    geom: &LinkGeometry,
    los: bool,
    rng: &mut R,
) -> Result<LinkBudget> {
    let pathloss_db = pathloss_uma(params, geom, los, rng)?;
    let snr_db = params.eirp_plus_rx_gain_dbm() - pathloss_db - noise_power_dbm(params);
    Ok(LinkBudget {
        los,
        pathloss_db,
        snr_db,
        distance_clamped: geom.distance_clamped(),
    })
}

/// Draws the LoS state from the configured model, then evaluates the link.
/// No interference term: the serving link is assumed perfectly beamformed.
pub fn link_budget<R: Rng + ?Sized>(
    params: &ChannelParams,
    geom: &LinkGeometry,
    rng: &mut R,
) -> Result<LinkBudget> {
    let p_los = los_probability_clamped(params.los_model, geom)?;
    let los = rng.random::<f64>() < p_los;
    link_budget_with_state(params, geom, los, rng)
}
