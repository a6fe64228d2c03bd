//! Flat `key = value` configuration files.
//!
//! ```text
//! # comments start with '#'
//! chi_km = 1
//! abs_heights_m = 25, 50, 100
//! los_model = by_kind
//! ```
//!
//! Omitted keys take the defaults of the experiment being run. Unknown or
//! repeated keys and out-of-range values are rejected with the offending
//! line number; nothing is accepted from a file that fails.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::channel::{ChannelParams, LosModel, SigmoidParams};
use crate::error::{Error, Result};
use crate::scenarios::{
    LosChoice, Placement, ScenarioConfig, Variant, ABS_HEIGHTS_M, CDF_LAMBDA,
    CDF_RADIUS_KM, DEFAULT_LINE_INTENSITY, DEFAULT_REALIZATIONS, DEFAULT_SEED,
    DEFAULT_SNR_THRESHOLD_DB, DEFAULT_VEHICLES, GBS_HEIGHT_M, SWEEP_LAMBDAS, SWEEP_RADIUS_KM,
    TABLE_ABS_HEIGHTS_M, TABLE_GBS_HEIGHT_M, TABLE_RADIUS_KM,
};
use crate::simulation::BsKind;

pub const KEYS: [&str; 18] = [
    "chi_km",
    "line_intensity",
    "vehicles",
    "realizations",
    "seed",
    "freq_ghz",
    "tx_power_dbm",
    "tx_gain_dbi",
    "rx_gain_dbi",
    "bandwidth_mhz",
    "noise_figure_db",
    "snr_threshold_db",
    "los_model",
    "shadowing",
    "gbs_height_m",
    "abs_heights_m",
    "lambda_grid",
    "placement",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlacementKind {
    Ppp,
    Central,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    DensitySweep,
    SnrCdf,
    SeTable,
}

impl ExperimentKind {
    /// Base name of the files written for this experiment.
    pub fn file_stem(&self) -> &'static str {
        match self {
            ExperimentKind::DensitySweep => "coverage_vs_density",
            ExperimentKind::SnrCdf => "snr_cdf",
            ExperimentKind::SeTable => "se_vs_height",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigFile {
    /// `None` selects the experiment's own study radius.
    pub chi_km: Option<f64>,
    pub line_intensity: f64,
    pub vehicles: usize,
    pub realizations: usize,
    pub seed: u64,
    pub freq_ghz: f64,
    pub tx_power_dbm: f64,
    pub tx_gain_dbi: f64,
    pub rx_gain_dbi: f64,
    pub bandwidth_mhz: f64,
    pub noise_figure_db: f64,
    pub snr_threshold_db: f64,
    pub los_model: LosChoice,
    pub shadowing: bool,
    pub gbs_height_m: Option<f64>,
    pub abs_heights_m: Option<Vec<f64>>,
    pub lambda_grid: Option<Vec<f64>>,
    pub placement: Option<PlacementKind>,
}

impl Default for ConfigFile {
    fn default() -> Self {
        let ch = ChannelParams::default();
        Self {
            chi_km: None,
            line_intensity: DEFAULT_LINE_INTENSITY,
            vehicles: DEFAULT_VEHICLES,
            realizations: DEFAULT_REALIZATIONS,
            seed: DEFAULT_SEED,
            freq_ghz: ch.carrier_freq_ghz,
            tx_power_dbm: ch.tx_power_dbm,
            tx_gain_dbi: ch.tx_gain_dbi,
            rx_gain_dbi: ch.rx_gain_dbi,
            bandwidth_mhz: ch.bandwidth_mhz,
            noise_figure_db: ch.noise_figure_db,
            snr_threshold_db: DEFAULT_SNR_THRESHOLD_DB,
            los_model: LosChoice::ByKind,
            shadowing: ch.shadowing_enabled,
            gbs_height_m: None,
            abs_heights_m: None,
            lambda_grid: None,
            placement: None,
        }
    }
}

fn los_choice_name(c: &LosChoice) -> &'static str {
    match c {
        LosChoice::ByKind => "by_kind",
        LosChoice::Fixed(m) => m.name(),
    }
}

fn parse_los_choice(s: &str) -> std::result::Result<LosChoice, String> {
    match s {
        "by_kind" => Ok(LosChoice::ByKind),
        "uma_standard" => Ok(LosChoice::Fixed(LosModel::UmaStandard)),
        "uma_aerial" => Ok(LosChoice::Fixed(LosModel::UmaAerialHeightDependent)),
        "elevation_sigmoid" => Ok(LosChoice::Fixed(LosModel::ElevationSigmoid(SigmoidParams::URBAN))),
        other => Err(format!(
            "unknown LoS model '{other}' (expected by_kind, uma_standard, uma_aerial or elevation_sigmoid)"
        )),
    }
}

fn parse_num<T: FromStr>(s: &str) -> std::result::Result<T, String> {
    s.parse::<T>().map_err(|_| format!("cannot parse '{s}'"))
}

fn parse_f64(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = parse_num(s)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' is not a finite number"))
    }
}

fn parse_list(s: &str) -> std::result::Result<Vec<f64>, String> {
    let v = s
        .split(',')
        .map(|item| parse_f64(item.trim()))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if v.is_empty() {
        return Err("list must not be empty".into());
    }
    Ok(v)
}

fn check(ok: bool, what: &str) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(format!("must be {what}"))
    }
}

fn set_key(cfg: &mut ConfigFile, key: &str, value: &str) -> std::result::Result<(), String> {
    match key {
        "chi_km" => {
            let v = parse_f64(value)?;
            check(v > 0.0, "> 0")?;
            cfg.chi_km = Some(v);
        }
        "line_intensity" => {
            let v = parse_f64(value)?;
            check(v >= 0.0, ">= 0")?;
            cfg.line_intensity = v;
        }
        "vehicles" => cfg.vehicles = parse_num(value)?,
        "realizations" => {
            let v: usize = parse_num(value)?;
            check(v >= 1, ">= 1")?;
            cfg.realizations = v;
        }
        "seed" => cfg.seed = parse_num(value)?,
        "freq_ghz" => {
            let v = parse_f64(value)?;
            check((0.5..=100.0).contains(&v), "within 0.5-100 GHz")?;
            cfg.freq_ghz = v;
        }
        "tx_power_dbm" => cfg.tx_power_dbm = parse_f64(value)?,
        "tx_gain_dbi" => cfg.tx_gain_dbi = parse_f64(value)?,
        "rx_gain_dbi" => cfg.rx_gain_dbi = parse_f64(value)?,
        "bandwidth_mhz" => {
            let v = parse_f64(value)?;
            check(v > 0.0, "> 0")?;
            cfg.bandwidth_mhz = v;
        }
        "noise_figure_db" => {
            let v = parse_f64(value)?;
            check(v >= 0.0, ">= 0")?;
            cfg.noise_figure_db = v;
        }
        "snr_threshold_db" => cfg.snr_threshold_db = parse_f64(value)?,
        "los_model" => cfg.los_model = parse_los_choice(value)?,
        "shadowing" => {
            cfg.shadowing = match value {
                "true" => true,
                "false" => false,
                _ => return Err(format!("expected true or false, got '{value}'")),
            }
        }
        "gbs_height_m" => {
            let v = parse_f64(value)?;
            check(v > 1.0, "> 1 m")?;
            cfg.gbs_height_m = Some(v);
        }
        "abs_heights_m" => {
            let v = parse_list(value)?;
            check(v.iter().all(|h| *h > 1.0), "all > 1 m")?;
            cfg.abs_heights_m = Some(v);
        }
        "lambda_grid" => {
            let v = parse_list(value)?;
            check(v.iter().all(|l| *l >= 0.0), "all >= 0")?;
            cfg.lambda_grid = Some(v);
        }
        "placement" => {
            cfg.placement = Some(match value {
                "ppp" => PlacementKind::Ppp,
                "central" => PlacementKind::Central,
                _ => return Err(format!("expected ppp or central, got '{value}'")),
            })
        }
        _ => return Err("unknown key".into()),
    }
    Ok(())
}

pub fn parse_config(text: &str) -> Result<ConfigFile> {
    let mut cfg = ConfigFile::default();
    let mut seen: Vec<&str> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
            line: line_no,
            message: format!("expected key=value, got '{line}'"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        if let Some(known) = KEYS.iter().find(|k| **k == key) {
            if seen.contains(known) {
                return Err(Error::Config {
                    line: line_no,
                    message: format!("{key}: repeated key"),
                });
            }
            seen.push(known);
        }
        set_key(&mut cfg, key, value).map_err(|message| Error::Config {
            line: line_no,
            message: format!("{key}: {message}"),
        })?;
    }
    Ok(cfg)
}

fn join(v: &[f64]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(", ")
}

impl ConfigFile {
    /// Renders every set key; `parse_config` of the output yields `self`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if let Some(chi) = self.chi_km {
            let _ = writeln!(s, "chi_km = {chi}");
        }
        let _ = writeln!(s, "line_intensity = {}", self.line_intensity);
        let _ = writeln!(s, "vehicles = {}", self.vehicles);
        let _ = writeln!(s, "realizations = {}", self.realizations);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "freq_ghz = {}", self.freq_ghz);
        let _ = writeln!(s, "tx_power_dbm = {}", self.tx_power_dbm);
        let _ = writeln!(s, "tx_gain_dbi = {}", self.tx_gain_dbi);
        let _ = writeln!(s, "rx_gain_dbi = {}", self.rx_gain_dbi);
        let _ = writeln!(s, "bandwidth_mhz = {}", self.bandwidth_mhz);
        let _ = writeln!(s, "noise_figure_db = {}", self.noise_figure_db);
        let _ = writeln!(s, "snr_threshold_db = {}", self.snr_threshold_db);
        let _ = writeln!(s, "los_model = {}", los_choice_name(&self.los_model));
        let _ = writeln!(s, "shadowing = {}", self.shadowing);
        if let Some(h) = self.gbs_height_m {
            let _ = writeln!(s, "gbs_height_m = {h}");
        }
        if let Some(v) = &self.abs_heights_m {
            let _ = writeln!(s, "abs_heights_m = {}", join(v));
        }
        if let Some(v) = &self.lambda_grid {
            let _ = writeln!(s, "lambda_grid = {}", join(v));
        }
        if let Some(p) = self.placement {
            let name = match p {
                PlacementKind::Ppp => "ppp",
                PlacementKind::Central => "central",
            };
            let _ = writeln!(s, "placement = {name}");
        }
        s
    }

    fn channel(&self) -> ChannelParams {
        ChannelParams {
            carrier_freq_ghz: self.freq_ghz,
            tx_power_dbm: self.tx_power_dbm,
            tx_gain_dbi: self.tx_gain_dbi,
            rx_gain_dbi: self.rx_gain_dbi,
            bandwidth_mhz: self.bandwidth_mhz,
            noise_figure_db: self.noise_figure_db,
            shadowing_enabled: self.shadowing,
            ..ChannelParams::default()
        }
    }

    /// Single density for experiments that take one PPP intensity.
    fn single_lambda(&self, default: f64) -> Result<f64> {
        match self.lambda_grid.as_deref() {
            None => Ok(default),
            Some([l]) => Ok(*l),
            Some(_) => Err(Error::invalid(
                "lambda_grid",
                "this experiment takes a single density",
            )),
        }
    }

    /// Resolves the file against the defaults of `kind`.
    pub fn plan(&self, kind: ExperimentKind) -> Result<ExperimentPlan> {
        let (radius, gbs_default, abs_default): (f64, f64, &[f64]) = match kind {
            ExperimentKind::DensitySweep => (SWEEP_RADIUS_KM, GBS_HEIGHT_M, &ABS_HEIGHTS_M),
            ExperimentKind::SnrCdf => (CDF_RADIUS_KM, GBS_HEIGHT_M, &ABS_HEIGHTS_M),
            ExperimentKind::SeTable => (TABLE_RADIUS_KM, TABLE_GBS_HEIGHT_M, &TABLE_ABS_HEIGHTS_M),
        };
        let gbs_height_m = self.gbs_height_m.unwrap_or(gbs_default);
        let abs_heights_m = self.abs_heights_m.clone().unwrap_or_else(|| abs_default.to_vec());
        let placement_kind = self.placement.unwrap_or(match kind {
            ExperimentKind::SeTable => PlacementKind::Central,
            _ => PlacementKind::Ppp,
        });
        let placement = match (kind, placement_kind) {
            (ExperimentKind::DensitySweep, PlacementKind::Central) => {
                return Err(Error::invalid(
                    "placement",
                    "sweep-density needs ppp placement",
                ))
            }
            (ExperimentKind::DensitySweep, PlacementKind::Ppp) => Placement::Ppp {
                lambda_per_km2: 0.0,
            },
            (_, PlacementKind::Central) => Placement::Central,
            (_, PlacementKind::Ppp) => Placement::Ppp {
                lambda_per_km2: self.single_lambda(CDF_LAMBDA)?,
            },
        };
        let base = ScenarioConfig {
            disc_radius_km: self.chi_km.unwrap_or(radius),
            line_intensity: self.line_intensity,
            vehicles: self.vehicles,
            bs_kind: BsKind::Gbs,
            bs_height_m: gbs_height_m,
            placement,
            channel: self.channel(),
            los: self.los_model,
            snr_threshold_db: self.snr_threshold_db,
            realizations: self.realizations,
            master_seed: self.seed,
        };
        let variants: Vec<Variant> = std::iter::once(Variant::new(BsKind::Gbs, gbs_height_m))
            .chain(abs_heights_m.iter().map(|&h| Variant::new(BsKind::Abs, h)))
            .collect();
        for v in &variants {
            base.with_variant(*v).validate()?;
        }
        let lambdas = match kind {
            ExperimentKind::DensitySweep => self
                .lambda_grid
                .clone()
                .unwrap_or_else(|| SWEEP_LAMBDAS.to_vec()),
            _ => Vec::new(),
        };
        Ok(ExperimentPlan {
            kind,
            base,
            variants,
            lambdas,
        })
    }
}

/// Fully resolved inputs of one experiment run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPlan {
    pub kind: ExperimentKind,
    pub base: ScenarioConfig,
    /// Ground station first, then each UAV height.
    pub variants: Vec<Variant>,
    /// Density grid; only used by the sweep.
    pub lambdas: Vec<f64>,
}

impl ExperimentPlan {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.base.master_seed = seed;
        self
    }
}
