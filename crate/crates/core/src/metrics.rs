//! Coverage probability, SNR CDF and spectral efficiency, per realization
//! and aggregated over realizations.
//!
//! All sums go through [`sorted_sum`] so that aggregation does not depend on
//! the order realizations finish in.

use crate::error::{Error, Result};
use crate::simulation::SnrSample;

fn is_covered(s: &SnrSample) -> bool {
    s.snr_db.is_finite()
}

/// Fraction of samples with `snr_db >= threshold_db`. Unserved vehicles count as failures.
pub fn coverage_probability(samples: &[SnrSample], threshold_db: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::NoSamples);
    }
    let hits = samples.iter().filter(|s| s.snr_db >= threshold_db).count();
    Ok(hits as f64 / samples.len() as f64)
}

/// Shannon spectral efficiency `log2(1 + snr)`, bit/s/Hz. Callers skip unserved links.
pub fn spectral_efficiency(snr_db: f64) -> f64 {
    (1.0 + 10f64.powf(snr_db / 10.0)).log2()
}

/// Empirical CDF over a sorted sample.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn from_values(mut values: Vec<f64>) -> Result<Self> {
        values.retain(|v| v.is_finite());
        if values.is_empty() {
            return Err(Error::NoSamples);
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { sorted: values })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.sorted
    }

    /// `F(x)`: fraction of values `<= x`.
    pub fn eval(&self, x: f64) -> f64 {
        let k = self.sorted.partition_point(|&v| v <= x);
        k as f64 / self.sorted.len() as f64
    }

    /// `F(x-)`: fraction of values strictly below `x`.
    pub fn eval_below(&self, x: f64) -> f64 {
        let k = self.sorted.partition_point(|&v| v < x);
        k as f64 / self.sorted.len() as f64
    }

    /// Smallest value `v` with `F(v) >= p`, for `p` in `(0, 1]`.
    pub fn quantile(&self, p: f64) -> f64 {
        let n = self.sorted.len();
        let k = ((p * n as f64).ceil() as usize).clamp(1, n);
        self.sorted[k - 1]
    }

    /// One `(value, F(value))` pair per distinct value, ascending.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let n = self.sorted.len() as f64;
        let mut out: Vec<(f64, f64)> = Vec::new();
        for (i, &v) in self.sorted.iter().enumerate() {
            let frac = (i + 1) as f64 / n;
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 = frac,
                _ => out.push((v, frac)),
            }
        }
        out
    }
}

/// CDF of the served samples' SNR.
pub fn empirical_cdf(samples: &[SnrSample]) -> Result<EmpiricalCdf> {
    EmpiricalCdf::from_values(
        samples
            .iter()
            .filter(|s| is_covered(s))
            .map(|s| s.snr_db)
            .collect(),
    )
}

/// Order-independent sum: sorts a copy first.
pub(crate) fn sorted_sum(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v.iter().sum()
}

/// Mean and standard error (`stddev / sqrt(n)`, zero for a single value).
pub fn mean_and_stderr(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = sorted_sum(values) / n;
    if values.len() == 1 {
        return Some((mean, 0.0));
    }
    let sq: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    let var = sorted_sum(&sq) / (n - 1.0);
    Some((mean, (var / n).sqrt()))
}

/// Per-realization reduction of the SNR samples.
#[derive(Debug, Clone, PartialEq)]
pub struct RealizationMetrics {
    pub coverage: f64,
    /// `None` when no vehicle was served.
    pub mean_snr_db: Option<f64>,
    pub mean_se: Option<f64>,
    pub covered_snr_db: Vec<f64>,
    pub n_samples: usize,
}

impl RealizationMetrics {
    pub fn from_samples(samples: &[SnrSample], threshold_db: f64) -> Result<Self> {
        let coverage = coverage_probability(samples, threshold_db)?;
        let covered: Vec<f64> = samples
            .iter()
            .filter(|s| is_covered(s))
            .map(|s| s.snr_db)
            .collect();
        let (mean_snr_db, mean_se) = if covered.is_empty() {
            (None, None)
        } else {
            let n = covered.len() as f64;
            let se: Vec<f64> = covered.iter().map(|&s| spectral_efficiency(s)).collect();
            (Some(sorted_sum(&covered) / n), Some(sorted_sum(&se) / n))
        };
        Ok(Self {
            coverage,
            mean_snr_db,
            mean_se,
            covered_snr_db: covered,
            n_samples: samples.len(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
}

impl Estimate {
    fn from_values(values: &[f64]) -> Option<Self> {
        mean_and_stderr(values).map(|(mean, stderr)| Self { mean, stderr })
    }

    /// `sqrt(a.stderr² + b.stderr²)`
    pub fn combined_stderr(&self, other: &Estimate) -> f64 {
        self.stderr.hypot(other.stderr)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsSummary {
    pub coverage: Estimate,
    /// Mean over realizations that served at least one vehicle.
    pub mean_snr_db: Option<Estimate>,
    pub mean_se: Option<Estimate>,
    /// Pooled over every served vehicle of every realization.
    pub cdf: Option<EmpiricalCdf>,
    pub n_realizations: usize,
    pub n_samples: usize,
}

impl MetricsSummary {
    pub fn cdf_points(&self) -> Vec<(f64, f64)> {
        self.cdf.as_ref().map(EmpiricalCdf::points).unwrap_or_default()
    }
}

pub fn aggregate(per_realization: &[RealizationMetrics]) -> Result<MetricsSummary> {
    if per_realization.is_empty() {
        return Err(Error::NoSamples);
    }
    let coverage: Vec<f64> = per_realization.iter().map(|r| r.coverage).collect();
    let snr: Vec<f64> = per_realization.iter().filter_map(|r| r.mean_snr_db).collect();
    let se: Vec<f64> = per_realization.iter().filter_map(|r| r.mean_se).collect();
    let pooled: Vec<f64> = per_realization
        .iter()
        .flat_map(|r| r.covered_snr_db.iter().copied())
        .collect();
    Ok(MetricsSummary {
        coverage: Estimate::from_values(&coverage).expect("non-empty"),
        mean_snr_db: Estimate::from_values(&snr),
        mean_se: Estimate::from_values(&se),
        cdf: EmpiricalCdf::from_values(pooled).ok(),
        n_realizations: per_realization.len(),
        n_samples: per_realization.iter().map(|r| r.n_samples).sum(),
    })
}
