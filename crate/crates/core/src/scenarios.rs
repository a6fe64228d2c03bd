//! Seeded Monte Carlo driver and the three preset experiments: coverage
//! against base-station density, pooled SNR CDFs, and spectral efficiency
//! against base-station height.
//!
//! Every realization draws from its own ChaCha8 stream seeded with
//! [`stream_seed`], so results do not depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{aerial_height_needs_clamp, ChannelParams, LosModel};
use crate::error::{Error, Result};
use crate::geometry::{PlpConfig, StudyDisc};
use crate::metrics::{aggregate, MetricsSummary, RealizationMetrics};
use crate::simulation::{build_realization, evaluate_realization, BsKind};

pub const DEFAULT_SEED: u64 = 20_231_001;
pub const DEFAULT_VEHICLES: usize = 200;
pub const DEFAULT_REALIZATIONS: usize = 500;
pub const DEFAULT_LINE_INTENSITY: f64 = 2.0;
pub const DEFAULT_SNR_THRESHOLD_DB: f64 = 30.0;

pub const SWEEP_RADIUS_KM: f64 = 1.0;
pub const SWEEP_LAMBDAS: [f64; 5] = [1.0, 2.0, 4.0, 8.0, 12.0];
pub const CDF_RADIUS_KM: f64 = 2.0;
pub const CDF_LAMBDA: f64 = 1.0;
pub const TABLE_RADIUS_KM: f64 = 0.5;

pub const GBS_HEIGHT_M: f64 = 25.0;
pub const TABLE_GBS_HEIGHT_M: f64 = 15.0;
pub const ABS_HEIGHTS_M: [f64; 3] = [25.0, 50.0, 100.0];
pub const TABLE_ABS_HEIGHTS_M: [f64; 4] = [40.0, 60.0, 80.0, 100.0];

/// SplitMix64 finalizer.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of realization `index`: `splitmix64(splitmix64(master) ^ index)`.
pub fn stream_seed(master_seed: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master_seed) ^ index)
}

pub fn realization_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stream_seed(master_seed, index))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Placement {
    Ppp { lambda_per_km2: f64 },
    /// A single station at the disc centre.
    Central,
}

/// How the LoS model is chosen for a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum LosChoice {
    /// Terrestrial UMa for ground stations, aerial UMa for UAV stations.
    #[default]
    ByKind,
    Fixed(LosModel),
}

impl LosChoice {
    pub fn resolve(&self, kind: BsKind) -> LosModel {
        match (self, kind) {
            (LosChoice::Fixed(m), _) => *m,
            (LosChoice::ByKind, BsKind::Gbs) => LosModel::UmaStandard,
            (LosChoice::ByKind, BsKind::Abs) => LosModel::UmaAerialHeightDependent,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Variant {
    pub kind: BsKind,
    pub height_m: f64,
}

impl Variant {
    pub fn new(kind: BsKind, height_m: f64) -> Self {
        Self { kind, height_m }
    }

    /// e.g. `GBS25`, `ABS100`
    pub fn label(&self) -> String {
        format!("{}{}", self.kind, self.height_m)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub disc_radius_km: f64,
    pub line_intensity: f64,
    pub vehicles: usize,
    pub bs_kind: BsKind,
    pub bs_height_m: f64,
    pub placement: Placement,
    /// Link parameters; `los_model` is overridden by `los`.
    pub channel: ChannelParams,
    pub los: LosChoice,
    pub snr_threshold_db: f64,
    pub realizations: usize,
    pub master_seed: u64,
}

impl ScenarioConfig {
    fn preset(radius_km: f64, kind: BsKind, height_m: f64, placement: Placement) -> Self {
        Self {
            disc_radius_km: radius_km,
            line_intensity: DEFAULT_LINE_INTENSITY,
            vehicles: DEFAULT_VEHICLES,
            bs_kind: kind,
            bs_height_m: height_m,
            placement,
            channel: ChannelParams::default(),
            los: LosChoice::ByKind,
            snr_threshold_db: DEFAULT_SNR_THRESHOLD_DB,
            realizations: DEFAULT_REALIZATIONS,
            master_seed: DEFAULT_SEED,
        }
    }

    pub fn sweep_default(kind: BsKind, height_m: f64, lambda_per_km2: f64) -> Self {
        Self::preset(SWEEP_RADIUS_KM, kind, height_m, Placement::Ppp { lambda_per_km2 })
    }

    pub fn cdf_default(kind: BsKind, height_m: f64) -> Self {
        Self::preset(
            CDF_RADIUS_KM,
            kind,
            height_m,
            Placement::Ppp {
                lambda_per_km2: CDF_LAMBDA,
            },
        )
    }

    pub fn se_table_default(kind: BsKind, height_m: f64) -> Self {
        Self::preset(TABLE_RADIUS_KM, kind, height_m, Placement::Central)
    }

    pub fn with_variant(&self, variant: Variant) -> Self {
        Self {
            bs_kind: variant.kind,
            bs_height_m: variant.height_m,
            ..self.clone()
        }
    }

    pub fn with_placement(&self, placement: Placement) -> Self {
        Self {
            placement,
            ..self.clone()
        }
    }

    pub fn variant(&self) -> Variant {
        Variant::new(self.bs_kind, self.bs_height_m)
    }

    pub fn disc(&self) -> Result<StudyDisc> {
        StudyDisc::new(self.disc_radius_km)
    }

    pub fn plp(&self) -> Result<PlpConfig> {
        PlpConfig::new(self.line_intensity)
    }

    /// Channel parameters with the LoS model resolved for this station kind.
    pub fn effective_channel(&self) -> ChannelParams {
        ChannelParams {
            los_model: self.los.resolve(self.bs_kind),
            ..self.channel
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.disc()?;
        self.plp()?;
        self.effective_channel().validate()?;
        if self.realizations == 0 {
            return Err(Error::invalid("realizations", "must be >= 1"));
        }
        if !(self.bs_height_m.is_finite() && self.bs_height_m > 1.0) {
            return Err(Error::invalid(
                "base station height",
                format!("{} m must be > 1 m", self.bs_height_m),
            ));
        }
        if let Placement::Ppp { lambda_per_km2 } = self.placement {
            if !(lambda_per_km2.is_finite() && lambda_per_km2 >= 0.0) {
                return Err(Error::invalid("lambda", format!("{lambda_per_km2} must be >= 0")));
            }
        }
        if self.snr_threshold_db.is_nan() {
            return Err(Error::invalid("SNR threshold", "must be a number"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

/// Runs realization `index` of `config` from its own stream.
pub fn run_realization(config: &ScenarioConfig, index: usize) -> Result<RealizationMetrics> {
    let mut rng = realization_rng(config.master_seed, index as u64);
    let channel = config.effective_channel();
    let deployment = build_realization(config, &mut rng)?;
    let samples = evaluate_realization(&deployment, &channel, &mut rng)?;
    RealizationMetrics::from_samples(&samples, config.snr_threshold_db)
}

pub fn run_scenario(config: &ScenarioConfig) -> Result<MetricsSummary> {
    run_scenario_with(config, Execution::default())
}

pub fn run_scenario_with(config: &ScenarioConfig, execution: Execution) -> Result<MetricsSummary> {
    config.validate()?;
    let channel = config.effective_channel();
    if channel.los_model == LosModel::UmaAerialHeightDependent
        && aerial_height_needs_clamp(config.bs_height_m)
    {
        log::warn!(
            "{} m is outside the aerial LoS range (22.5, 100] m; evaluating at the nearest bound",
            config.bs_height_m
        );
    }
    let one = |index: usize| {
        run_realization(config, index).map_err(|e| Error::Realization {
            index,
            source: Box::new(e),
        })
    };
    let per_realization: Vec<RealizationMetrics> = match execution {
        Execution::Sequential => (0..config.realizations).map(one).collect::<Result<_>>()?,
        Execution::Parallel => (0..config.realizations)
            .into_par_iter()
            .map(one)
            .collect::<Result<_>>()?,
    };
    aggregate(&per_realization)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub label: String,
    pub variant: Variant,
    /// Station density for PPP scenarios.
    pub lambda_per_km2: Option<f64>,
    pub summary: MetricsSummary,
}

fn result_for(config: &ScenarioConfig, execution: Execution) -> Result<ExperimentResult> {
    let summary = run_scenario_with(config, execution)?;
    let variant = config.variant();
    let (label, lambda_per_km2) = match config.placement {
        Placement::Ppp { lambda_per_km2 } => (
            format!("{}@lambda={}", variant.label(), lambda_per_km2),
            Some(lambda_per_km2),
        ),
        Placement::Central => (variant.label(), None),
    };
    log::info!(
        "{label}: {} realizations, coverage {:.4}",
        summary.n_realizations,
        summary.coverage.mean
    );
    Ok(ExperimentResult {
        label,
        variant,
        lambda_per_km2,
        summary,
    })
}

/// The four curves compared in the density and CDF experiments.
pub fn default_variants() -> Vec<Variant> {
    std::iter::once(Variant::new(BsKind::Gbs, GBS_HEIGHT_M))
        .chain(ABS_HEIGHTS_M.iter().map(|&h| Variant::new(BsKind::Abs, h)))
        .collect()
}

/// One result per `(variant, lambda)`, variants in the given order, lambdas ascending.
pub fn density_sweep(
    base: &ScenarioConfig,
    lambdas: &[f64],
    variants: &[Variant],
    execution: Execution,
) -> Result<Vec<ExperimentResult>> {
    if lambdas.is_empty() {
        return Err(Error::invalid("lambda grid", "must not be empty"));
    }
    if let Some(bad) = lambdas.iter().find(|l| !(l.is_finite() && **l >= 0.0)) {
        return Err(Error::invalid("lambda grid", format!("{bad} must be >= 0")));
    }
    let mut sorted = lambdas.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut out = Vec::with_capacity(sorted.len() * variants.len());
    for v in variants {
        for &lambda_per_km2 in &sorted {
            let cfg = base
                .with_variant(*v)
                .with_placement(Placement::Ppp { lambda_per_km2 });
            out.push(result_for(&cfg, execution)?);
        }
    }
    Ok(out)
}

/// Pooled SNR distributions, one result per variant.
pub fn cdf_experiment(
    base: &ScenarioConfig,
    variants: &[Variant],
    execution: Execution,
) -> Result<Vec<ExperimentResult>> {
    variants
        .iter()
        .map(|v| result_for(&base.with_variant(*v), execution))
        .collect()
}

/// A ground station at `gbs_height_m`, then a UAV station at each height.
pub fn se_height_table(
    base: &ScenarioConfig,
    gbs_height_m: f64,
    abs_heights_m: &[f64],
    execution: Execution,
) -> Result<Vec<ExperimentResult>> {
    std::iter::once(Variant::new(BsKind::Gbs, gbs_height_m))
        .chain(abs_heights_m.iter().map(|&h| Variant::new(BsKind::Abs, h)))
        .map(|v| result_for(&base.with_variant(v), execution))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_values() {
        // first outputs of the reference SplitMix64 generator seeded with 0
        assert_eq!(splitmix64(0), 0xE220_A839_7B1D_CDAF);
        assert_eq!(
            splitmix64(0x9E37_79B9_7F4A_7C15),
            0x6E78_9E6A_A1B9_65F4
        );
    }

    #[test]
    fn stream_seeds_differ_per_index_and_master() {
        let a = stream_seed(1, 0);
        assert_ne!(a, stream_seed(1, 1));
        assert_ne!(a, stream_seed(2, 0));
        assert_eq!(a, stream_seed(1, 0));
    }

    #[test]
    fn los_choice_by_kind() {
        assert_eq!(LosChoice::ByKind.resolve(BsKind::Gbs), LosModel::UmaStandard);
        assert_eq!(
            LosChoice::ByKind.resolve(BsKind::Abs),
            LosModel::UmaAerialHeightDependent
        );
        let fixed = LosChoice::Fixed(LosModel::UmaStandard);
        assert_eq!(fixed.resolve(BsKind::Abs), LosModel::UmaStandard);
    }

    #[test]
    fn labels() {
        assert_eq!(Variant::new(BsKind::Abs, 100.0).label(), "ABS100");
        assert_eq!(Variant::new(BsKind::Gbs, 12.5).label(), "GBS12.5");
    }

    #[test]
    fn validation() {
        let ok = ScenarioConfig::sweep_default(BsKind::Gbs, 25.0, 4.0);
        assert!(ok.validate().is_ok());
        let bad = ScenarioConfig {
            realizations: 0,
            ..ok.clone()
        };
        assert!(bad.validate().is_err());
        let bad = ok.with_placement(Placement::Ppp { lambda_per_km2: -1.0 });
        assert!(bad.validate().is_err());
        let bad = ScenarioConfig {
            disc_radius_km: 0.0,
            ..ok
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn sweep_rejects_bad_grids() {
        let base = ScenarioConfig::sweep_default(BsKind::Gbs, 25.0, 1.0);
        let v = [Variant::new(BsKind::Gbs, 25.0)];
        assert!(density_sweep(&base, &[], &v, Execution::Sequential).is_err());
        assert!(density_sweep(&base, &[1.0, -2.0], &v, Execution::Sequential).is_err());
    }
}
