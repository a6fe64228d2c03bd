//! Config files, experiment dispatch and result files.

pub mod config;
pub mod output;

pub use config::{parse_config, ConfigFile, ExperimentKind, ExperimentPlan, PlacementKind};
pub use output::{emit_results, format_sig6};

use crate::error::Result;
use crate::scenarios::{cdf_experiment, density_sweep, se_height_table, Execution, ExperimentResult};

/// Runs a resolved plan. Nothing is written to disk here.
pub fn run_plan(plan: &ExperimentPlan, execution: Execution) -> Result<Vec<ExperimentResult>> {
    match plan.kind {
        ExperimentKind::DensitySweep => {
            density_sweep(&plan.base, &plan.lambdas, &plan.variants, execution)
        }
        ExperimentKind::SnrCdf => cdf_experiment(&plan.base, &plan.variants, execution),
        ExperimentKind::SeTable => {
            let gbs = plan.variants[0].height_m;
            let abs: Vec<f64> = plan.variants[1..].iter().map(|v| v.height_m).collect();
            se_height_table(&plan.base, gbs, &abs, execution)
        }
    }
}
