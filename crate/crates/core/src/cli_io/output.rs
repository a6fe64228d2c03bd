//! CSV tables and gnuplot scripts for experiment results.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::scenarios::{ExperimentResult, Variant};

use super::config::ExperimentKind;

pub const DENSITY_HEADER: &str = "bs_kind,height_m,lambda_per_km2,coverage_prob,coverage_stderr";
pub const CDF_HEADER: &str = "bs_kind,height_m,snr_db,cdf";
pub const SE_HEADER: &str = "bs_kind,height_m,se_bits_per_hz,se_stderr";

/// `printf("%.6g")`: six significant digits, trailing zeros dropped.
pub fn format_sig6(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (5 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn variant_cols(v: &Variant) -> String {
    format!("{},{}", v.kind, format_sig6(v.height_m))
}

pub fn density_csv(results: &[ExperimentResult]) -> String {
    let mut s = String::from(DENSITY_HEADER);
    s.push('\n');
    for r in results {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            variant_cols(&r.variant),
            format_sig6(r.lambda_per_km2.unwrap_or(f64::NAN)),
            format_sig6(r.summary.coverage.mean),
            format_sig6(r.summary.coverage.stderr),
        );
    }
    s
}

/// Pooled CDF rows, ascending in SNR within each variant. Values that print
/// identically are merged into one row holding the larger fraction.
pub fn cdf_csv(results: &[ExperimentResult]) -> String {
    let mut s = String::from(CDF_HEADER);
    s.push('\n');
    for r in results {
        let prefix = variant_cols(&r.variant);
        let mut pending: Option<(String, f64)> = None;
        for (snr, frac) in r.summary.cdf_points() {
            let key = format_sig6(snr);
            if let Some((prev, _)) = &pending {
                if *prev != key {
                    let (k, f) = pending.take().expect("pending row");
                    let _ = writeln!(s, "{prefix},{k},{}", format_sig6(f));
                }
            }
            pending = Some((key, frac));
        }
        if let Some((k, f)) = pending {
            let _ = writeln!(s, "{prefix},{k},{}", format_sig6(f));
        }
    }
    s
}

pub fn se_csv(results: &[ExperimentResult]) -> String {
    let mut s = String::from(SE_HEADER);
    s.push('\n');
    for r in results {
        let (mean, stderr) = r
            .summary
            .mean_se
            .map(|e| (e.mean, e.stderr))
            .unwrap_or((f64::NAN, f64::NAN));
        let _ = writeln!(
            s,
            "{},{},{}",
            variant_cols(&r.variant),
            format_sig6(mean),
            format_sig6(stderr)
        );
    }
    s
}

fn distinct_variants(results: &[ExperimentResult]) -> Vec<Variant> {
    let mut out: Vec<Variant> = Vec::new();
    for r in results {
        if !out.contains(&r.variant) {
            out.push(r.variant);
        }
    }
    out
}

/// gnuplot script plotting the CSV written next to it.
pub fn plot_script(kind: ExperimentKind, results: &[ExperimentResult]) -> String {
    let csv = format!("{}.csv", kind.file_stem());
    let png = format!("{}.png", kind.file_stem());
    let mut s = String::new();
    let _ = writeln!(s, "# gnuplot script; run with: gnuplot {}.gp", kind.file_stem());
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set terminal pngcairo size 800,600");
    let _ = writeln!(s, "set output '{png}'");
    let _ = writeln!(s, "set grid");
    let _ = writeln!(s, "set key bottom right");
    match kind {
        ExperimentKind::DensitySweep => {
            let _ = writeln!(s, "set xlabel 'BS density (BS/km^2)'");
            let _ = writeln!(s, "set ylabel 'Coverage probability'");
            let _ = writeln!(s, "set yrange [0:1]");
        }
        ExperimentKind::SnrCdf => {
            let _ = writeln!(s, "set xlabel 'SNR (dB)'");
            let _ = writeln!(s, "set ylabel 'CDF'");
            let _ = writeln!(s, "set yrange [0:1]");
        }
        ExperimentKind::SeTable => {
            let _ = writeln!(s, "set xlabel 'Base station height (m)'");
            let _ = writeln!(s, "set ylabel 'Spectral efficiency (bit/s/Hz)'");
            let _ = writeln!(s, "set style data points");
        }
    }
    let (x, y, style) = match kind {
        ExperimentKind::DensitySweep => (3, 4, "linespoints"),
        ExperimentKind::SnrCdf => (3, 4, "lines"),
        ExperimentKind::SeTable => (2, 3, "linespoints"),
    };
    let series: Vec<(String, String)> = match kind {
        ExperimentKind::SeTable => {
            let mut kinds: Vec<String> = Vec::new();
            for v in distinct_variants(results) {
                let k = v.kind.to_string();
                if !kinds.contains(&k) {
                    kinds.push(k);
                }
            }
            kinds
                .into_iter()
                .map(|k| (format!("strcol(1) eq '{k}'"), k))
                .collect()
        }
        _ => distinct_variants(results)
            .into_iter()
            .map(|v| {
                (
                    format!("strcol(1) eq '{}' && $2 == {}", v.kind, format_sig6(v.height_m)),
                    v.label(),
                )
            })
            .collect(),
    };
    let lines: Vec<String> = series
        .iter()
        .map(|(cond, title)| {
            format!("'{csv}' using {x}:(({cond}) ? ${y} : 1/0) every ::1 with {style} title '{title}'")
        })
        .collect();
    let _ = writeln!(s, "plot {}", lines.join(", \\\n     "));
    s
}

pub fn csv_for(kind: ExperimentKind, results: &[ExperimentResult]) -> String {
    match kind {
        ExperimentKind::DensitySweep => density_csv(results),
        ExperimentKind::SnrCdf => cdf_csv(results),
        ExperimentKind::SeTable => se_csv(results),
    }
}

/// Writes `<stem>.csv` and `<stem>.gp` into `out_dir`, creating it if needed.
pub fn emit_results(
    kind: ExperimentKind,
    results: &[ExperimentResult],
    out_dir: &Path,
) -> Result<Vec<PathBuf>> {
    if results.is_empty() {
        return Err(Error::NoSamples);
    }
    let csv = csv_for(kind, results);
    let script = plot_script(kind, results);
    fs::create_dir_all(out_dir)?;
    let csv_path = out_dir.join(format!("{}.csv", kind.file_stem()));
    let gp_path = out_dir.join(format!("{}.gp", kind.file_stem()));
    fs::write(&csv_path, csv)?;
    fs::write(&gp_path, script)?;
    Ok(vec![csv_path, gp_path])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (0.5, "0.5"),
            (33.6117, "33.6117"),
            (93.378034, "93.378"),
            (123456.7, "123457"),
            (1234567.0, "1.23457e+06"),
            (0.0001234567, "0.000123457"),
            (0.00001234567, "1.23457e-05"),
            (-5.76321, "-5.76321"),
            (999999.6, "1e+06"),
            (2.0 / 3.0, "0.666667"),
            (f64::NAN, "nan"),
        ];
        for (x, want) in cases {
            assert_eq!(format_sig6(x), want, "{x}");
        }
    }
}
