//! Monte Carlo coverage analysis for road vehicles served by ground (GBS)
//! and UAV-mounted (ABS) base stations.
//!
//! Base stations are a Poisson point process on a disc, roads a Poisson line
//! process, and each vehicle is served interference-free by its nearest
//! station over a 3GPP Urban Macro channel. The [`scenarios`] module runs
//! the coverage-vs-density, SNR-CDF and SE-vs-height experiments;
//! [`cli_io`] reads configs and writes CSVs.

pub mod channel;
pub mod cli_io;
pub mod error;
pub mod geometry;
pub mod metrics;
pub mod scenarios;
pub mod simulation;

pub use error::{Error, Result};
